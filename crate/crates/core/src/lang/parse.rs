use super::{Formula, Quantifier, Term, KEYWORDS};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(u64),
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Dot,
    Plus,
    Minus,
    Star,
    Eq,
    Cong,
    Lt,
    Bang,
    Amp,
    Pipe,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("`{n}`"),
            Tok::Ident(s) => format!("`{s}`"),
            Tok::End => "end of input".into(),
            t => format!("`{}`", match t {
                Tok::LParen => "(",
                Tok::RParen => ")",
                Tok::LBracket => "[",
                Tok::RBracket => "]",
                Tok::Comma => ",",
                Tok::Dot => ".",
                Tok::Plus => "+",
                Tok::Minus => "-",
                Tok::Star => "*",
                Tok::Eq => "=",
                Tok::Cong => "==",
                Tok::Lt => "<",
                Tok::Bang => "!",
                Tok::Amp => "&",
                Tok::Pipe => "|",
                _ => "->",
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, len) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBracket, 1),
            ']' => (Tok::RBracket, 1),
            ',' => (Tok::Comma, 1),
            '.' => (Tok::Dot, 1),
            '+' => (Tok::Plus, 1),
            '*' => (Tok::Star, 1),
            '<' => (Tok::Lt, 1),
            '!' => (Tok::Bang, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Pipe, 1),
            '≡' => (Tok::Cong, 1),
            '-' if next == Some('>') => (Tok::Arrow, 2),
            '-' => (Tok::Minus, 1),
            '=' if next == Some('=') => (Tok::Cong, 2),
            '=' => (Tok::Eq, 1),
            d if d.is_ascii_digit() => {
                let len = chars[i..].iter().take_while(|c| c.is_ascii_digit()).count();
                let digits: String = chars[i..i + len].iter().collect();
                let n = digits
                    .parse()
                    .map_err(|_| syntax(pos, format!("integer literal {digits} is too large")))?;
                (Tok::Int(n), len)
            }
            a if a.is_alphabetic() || a == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_alphanumeric() || **c == '_' || **c == '\'')
                    .count();
                (Tok::Ident(chars[i..i + len].iter().collect()), len)
            }
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push((tok, pos));
        i += len;
        col += len;
    }
    out.push((Tok::End, Pos { line, column: col }));
    Ok(out)
}

fn error_pos(e: &Error) -> (usize, usize) {
    match e {
        Error::Syntax { line, column, .. } => (*line, *column),
        _ => (0, 0),
    }
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn unexpected(&self, wanted: &str) -> Error {
        syntax(self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.eat(&t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                Err(syntax(pos, format!("`{s}` is a reserved keyword")))
            }
            Tok::Ident(s) => Ok(s),
            t => Err(syntax(pos, format!("expected a variable, found {}", t.describe()))),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat(&Tok::Minus);
        let pos = self.pos();
        match self.bump() {
            Tok::Int(n) => {
                let v = if neg { -(n as i128) } else { n as i128 };
                i64::try_from(v).map_err(|_| syntax(pos, "integer out of range"))
            }
            t => Err(syntax(pos, format!("expected an integer, found {}", t.describe()))),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            Ok(lhs.implies(self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut f = self.conjunction()?;
        while self.eat(&Tok::Pipe) {
            f = f.or(self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat(&Tok::Amp) {
            f = f.and(self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat(&Tok::Bang) {
            return Ok(self.unary()?.not());
        }
        let kind = if self.is_keyword("exists") {
            Quantifier::Exists
        } else if self.is_keyword("forall") {
            Quantifier::Forall
        } else {
            return self.primary();
        };
        self.bump();
        let var = self.ident()?;
        if !self.is_keyword("in") {
            return Err(syntax(
                self.pos(),
                "quantifiers must be bounded: write `in [a, b]`",
            ));
        }
        self.bump();
        self.expect(Tok::LBracket)?;
        let lo = self.signed_int()?;
        self.expect(Tok::Comma)?;
        let hi = self.signed_int()?;
        self.expect(Tok::RBracket)?;
        self.expect(Tok::Dot)?;
        let body = self.formula()?;
        Ok(Formula::Quant {
            kind,
            var,
            lo,
            hi,
            body: Box::new(body),
        })
    }

    fn primary(&mut self) -> Result<Formula> {
        if self.is_keyword("true") {
            self.bump();
            return Ok(Formula::Bool(true));
        }
        if self.is_keyword("false") {
            self.bump();
            return Ok(Formula::Bool(false));
        }
        if self.is_keyword("C") {
            self.bump();
            self.expect(Tok::LParen)?;
            let a = self.term()?;
            self.expect(Tok::Comma)?;
            let b = self.term()?;
            self.expect(Tok::Comma)?;
            let c = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(Formula::Cyc(a, b, c));
        }
        if *self.peek() == Tok::LParen {
            // a parenthesized formula, or a relation whose left term starts with `(`
            let start = self.at;
            self.bump();
            let grouped = self.formula().and_then(|f| self.expect(Tok::RParen).map(|_| f));
            match grouped {
                Ok(f) => return Ok(f),
                Err(first) => {
                    self.at = start;
                    return self.relation().map_err(|second| {
                        if error_pos(&first) > error_pos(&second) {
                            first
                        } else {
                            second
                        }
                    });
                }
            }
        }
        self.relation()
    }

    fn relation(&mut self) -> Result<Formula> {
        let lhs = self.term()?;
        match self.peek() {
            Tok::Eq => {
                self.bump();
                Ok(Formula::Eq(lhs, self.term()?))
            }
            Tok::Lt => {
                self.bump();
                Ok(Formula::Lt(lhs, self.term()?))
            }
            Tok::Cong => {
                self.bump();
                let rhs = self.term()?;
                let paren = self.eat(&Tok::LParen);
                self.expect_keyword("mod")?;
                let pos = self.pos();
                let modulus = match self.bump() {
                    Tok::Int(n) if n >= 1 => n,
                    t => return Err(syntax(pos, format!("expected a positive modulus, found {}", t.describe()))),
                };
                if paren {
                    self.expect(Tok::RParen)?;
                }
                Ok(Formula::Cong { lhs, rhs, modulus })
            }
            _ => Err(self.unexpected("`=`, `==` or `<`")),
        }
    }

    fn term(&mut self) -> Result<Term> {
        let pos = self.pos();
        let overflow = || syntax(pos, "term coefficient overflow");
        let mut t = if self.eat(&Tok::Minus) {
            self.product()?.checked_scale(-1).ok_or_else(overflow)?
        } else {
            self.eat(&Tok::Plus);
            self.product()?
        };
        loop {
            if self.eat(&Tok::Plus) {
                t = t.checked_add(&self.product()?).ok_or_else(overflow)?;
            } else if self.eat(&Tok::Minus) {
                t = t.checked_sub(&self.product()?).ok_or_else(overflow)?;
            } else {
                return Ok(t);
            }
        }
    }

    fn product(&mut self) -> Result<Term> {
        let mut t = self.factor()?;
        while *self.peek() == Tok::Star {
            let pos = self.pos();
            self.bump();
            let u = self.factor()?;
            t = match (t.is_constant(), u.is_constant()) {
                (true, _) => u.checked_scale(t.constant_part()),
                (_, true) => t.checked_scale(u.constant_part()),
                _ => return Err(syntax(pos, "terms must be linear")),
            }
            .ok_or_else(|| syntax(pos, "term coefficient overflow"))?;
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Minus => {
                self.bump();
                self.factor()?
                    .checked_scale(-1)
                    .ok_or_else(|| syntax(pos, "term coefficient overflow"))
            }
            Tok::Int(n) => {
                self.bump();
                let c = i64::try_from(n).map_err(|_| syntax(pos, "integer out of range"))?;
                Ok(Term::constant(c))
            }
            Tok::Ident(_) => Ok(Term::var(&self.ident()?)),
            Tok::LParen => {
                self.bump();
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

/// Parses a formula; positions in errors are 1-based line and column.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

/// Parses a sentence, rejecting free variables.
pub fn parse_closed(text: &str) -> Result<Formula> {
    let f = parse(text)?;
    match f.free_vars().into_iter().next() {
        Some(v) => Err(Error::UnboundVariable(v)),
        None => Ok(f),
    }
}
