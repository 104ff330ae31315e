use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("rotation order requires an irrational alpha, got {0}")]
    RationalAlpha(String),
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(String),
    #[error("operands carry different radicals: sqrt({0}) and sqrt({1})")]
    MixedRadicals(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("value {0} is outside [0, 1)")]
    NotFractional(String),
    #[error("cannot parse number `{input}` at column {column}: {message}")]
    NumberSyntax {
        input: String,
        column: usize,
        message: String,
    },
    #[error("invalid order `{0}`; expected plus, minus or rot:<surd>")]
    InvalidOrder(String),
    #[error("invalid interval: {0}")]
    InvalidInterval(String),
    #[error("modulus must be at least 1")]
    InvalidModulus,
    #[error("residue {residue} out of range for modulus {modulus}")]
    InvalidResidue { residue: u64, modulus: u64 },
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("oracle is not dense: {0}")]
    NotDense(String),
    #[error("oracle answers contradict a linear order: {0}")]
    OracleInconsistent(String),
    #[error("alpha and beta are rationally dependent: {0}")]
    DependentPair(String),
    #[error("arithmetic progression step must be nonzero")]
    ZeroStep,
    #[error("element and set live in different ambient groups")]
    AmbientMismatch,
    #[error("unsupported atom: {0}")]
    NonlinearAtom(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("arity error: {0}")]
    Arity(String),
    #[error("budget of {0} exhausted")]
    BudgetExhausted(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
