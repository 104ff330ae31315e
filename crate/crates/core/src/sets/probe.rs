//! Window experiment: is `{2k : frac(alpha k) in [0, 1/2)}` a single cnc-set?

use std::cmp::Ordering;

use serde::Serialize;

use crate::exactnum::{Character, QuadSurd};
use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct CncProbe {
    pub window: i64,
    pub max_modulus: u64,
    /// Members of the target set inside the window.
    pub members: usize,
    /// `(n, a)` for which the window data is consistent with `J ∩ (a + nZ)`
    /// for some `C_alpha`-convex `J`.
    pub fitting: Vec<(u64, i64)>,
}

fn target(chi: &Character, x: i64) -> bool {
    x % 2 == 0 && chi.cmp_frac_to(x / 2, &QuadSurd::ratio(1, 2).expect("nonzero")) == Ordering::Less
}

/// For each modulus `n <= max_modulus` and residue `a`, checks whether the
/// members of the target in `[-window, window]` lie in `a + nZ` and form one
/// contiguous run when the coset's window points are arranged on the circle
/// by `frac(alpha x)`.
pub fn probe_single_cnc(alpha: &QuadSurd, window: i64, max_modulus: u64) -> Result<CncProbe> {
    if alpha.is_rational() {
        return Err(Error::RationalAlpha(alpha.to_string()));
    }
    let chi = Character::new(alpha.clone());
    let points: Vec<i64> = (-window..=window).collect();
    let members = points.iter().filter(|&&x| target(&chi, x)).count();
    let mut fitting = Vec::new();
    for n in 1..=max_modulus {
        let n_i = n as i64;
        for a in 0..n_i {
            let mut coset: Vec<i64> = points
                .iter()
                .copied()
                .filter(|x| x.rem_euclid(n_i) == a)
                .collect();
            let inside = coset.iter().filter(|&&x| target(&chi, x)).count();
            if inside != members {
                continue;
            }
            coset.sort_by(|&x, &y| chi.cmp_frac(x, y));
            let flags: Vec<bool> = coset.iter().map(|&x| target(&chi, x)).collect();
            let changes = (0..flags.len())
                .filter(|&i| flags[i] != flags[(i + 1) % flags.len()])
                .count();
            if changes <= 2 {
                fitting.push((n, a));
            }
        }
    }
    Ok(CncProbe {
        window,
        max_modulus,
        members,
        fitting,
    })
}
