//! Right-hand-side expressions in the variables `x`, `w`, `v` (and `u` for moduli).
//!
//! Grammar, loosest to tightest:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' unary)?          right-associative
//! atom    := number | 'pi' | variable | func '(' sum ')' | 'pow' '(' sum ',' number ')' | '(' sum ')'
//! func    := exp | log | sin | cos | sqrt | abs | neg
//! ```
//!
//! So `-x^2` is `-(x^2)`, `2^3^2` is `2^9` and `2^-1` is `0.5`.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    W,
    V,
    U,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::W => "w",
            Var::V => "v",
            Var::U => "u",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Neg,
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [Func; 7] = [Func::Neg, Func::Exp, Func::Log, Func::Sin, Func::Cos, Func::Sqrt, Func::Abs];

    pub fn name(self) -> &'static str {
        match self {
            Func::Neg => "neg",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
    /// `pow(base, c)` with a literal exponent.
    PowConst(Box<Expr>, f64),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at byte {offset}; allowed: {allowed}")]
    UnknownIdentifier { offset: usize, name: String, allowed: String },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. } | ParseError::UnknownIdentifier { offset, .. } => *offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    DivisionByZero,
    LogOfNonPositive,
    SqrtOfNegative,
    NonFinite,
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DomainKind::DivisionByZero => "division by zero",
            DomainKind::LogOfNonPositive => "log of a non-positive number",
            DomainKind::SqrtOfNegative => "square root of a negative number",
            DomainKind::NonFinite => "non-finite result",
        })
    }
}

/// Domain violation during evaluation, naming the offending subexpression.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{kind} in `{subexpr}`")]
pub struct EvalError {
    pub kind: DomainKind,
    pub subexpr: String,
}

/// Variable bindings for evaluation.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Env {
    pub x: f64,
    pub w: f64,
    pub v: f64,
    pub u: f64,
}

impl Expr {
    /// Parses an expression in `x`, `w`, `v`.
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        Parser::new(text, &[Var::X, Var::W, Var::V]).parse_all()
    }

    /// Parses an expression in the single variable `u`.
    pub fn parse_modulus(text: &str) -> Result<Expr, ParseError> {
        Parser::new(text, &[Var::U]).parse_all()
    }

    /// Parses an expression in `x` only.
    pub fn parse_in_x(text: &str) -> Result<Expr, ParseError> {
        Parser::new(text, &[Var::X]).parse_all()
    }

    pub fn eval(&self, x: f64, w: f64, v: f64) -> Result<f64, EvalError> {
        self.eval_env(&Env { x, w, v, u: 0.0 })
    }

    pub fn eval_u(&self, u: f64) -> Result<f64, EvalError> {
        self.eval_env(&Env { u, ..Env::default() })
    }

    pub fn eval_env(&self, env: &Env) -> Result<f64, EvalError> {
        let fail = |kind| Err(EvalError { kind, subexpr: self.to_string() });
        let value = match self {
            Expr::Num(c) => *c,
            Expr::Var(var) => match var {
                Var::X => env.x,
                Var::W => env.w,
                Var::V => env.v,
                Var::U => env.u,
            },
            Expr::Binary(op, lhs, rhs) => {
                let a = lhs.eval_env(env)?;
                let b = rhs.eval_env(env)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return fail(DomainKind::DivisionByZero);
                        }
                        a / b
                    }
                    BinOp::Pow => power(a, b),
                }
            }
            Expr::Call(func, arg) => {
                let a = arg.eval_env(env)?;
                match func {
                    Func::Neg => -a,
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return fail(DomainKind::LogOfNonPositive);
                        }
                        a.ln()
                    }
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            return fail(DomainKind::SqrtOfNegative);
                        }
                        a.sqrt()
                    }
                    Func::Abs => a.abs(),
                }
            }
            Expr::PowConst(base, c) => power(base.eval_env(env)?, *c),
        };
        if value.is_finite() {
            Ok(value)
        } else {
            fail(DomainKind::NonFinite)
        }
    }

    /// True if the tree references `var`.
    pub fn uses(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Binary(_, a, b) => a.uses(var) || b.uses(var),
            Expr::Call(_, a) | Expr::PowConst(a, _) => a.uses(var),
        }
    }

    /// The literal value when the tree is a bare number.
    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Expr::Num(c) => Some(*c),
            _ => None,
        }
    }
}

fn power(a: f64, b: f64) -> f64 {
    if b == 0.5 && a >= 0.0 {
        a.sqrt()
    } else if b == b.trunc() && b.abs() <= 64.0 {
        a.powi(b as i32)
    } else {
        a.powf(b)
    }
}

/// Fully parenthesized form that parses back to an equivalent tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => write!(f, "(-{})", -c),
            Expr::Num(c) => write!(f, "{c}"),
            Expr::Var(v) => f.write_str(v.name()),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
            Expr::PowConst(a, c) if *c < 0.0 => write!(f, "pow({a}, -{})", -c),
            Expr::PowConst(a, c) => write!(f, "pow({a}, {c})"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [Var],
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, vars: &'a [Var]) -> Self {
        Self { src, bytes: src.as_bytes(), pos: 0, vars }
    }

    fn parse_all(mut self) -> Result<Expr, ParseError> {
        self.skip_ws();
        if self.pos == self.bytes.len() {
            return self.error("empty expression");
        }
        let e = self.sum()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            let c = self.peek_char();
            return self.error(&format!("unexpected `{c}` after complete expression"));
        }
        Ok(e)
    }

    fn error<T>(&self, message: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.pos, message: message.to_string() })
    }

    fn peek_char(&self) -> char {
        self.src[self.pos..].chars().next().unwrap_or('\0')
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> Result<(), ParseError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(_) => {
                let c = self.peek_char();
                self.error(&format!("expected `{}`, found `{c}`", want as char))
            }
            None => self.error(&format!("expected `{}`, found end of input", want as char)),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.product()?;
            let op = if c == b'+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if c == b'*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Expr::Call(Func::Neg, Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            None => self.error("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number().map(Expr::Num),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(_) => {
                let c = self.peek_char();
                self.error(&format!("unexpected `{c}`"))
            }
        }
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        let start = self.pos;
        let b = self.bytes;
        let mut i = self.pos;
        let digits = |i: &mut usize| {
            let s = *i;
            while *i < b.len() && b[*i].is_ascii_digit() {
                *i += 1;
            }
            *i - s
        };
        let mut count = digits(&mut i);
        if i < b.len() && b[i] == b'.' {
            i += 1;
            count += digits(&mut i);
        }
        if count == 0 {
            return self.error("malformed number");
        }
        if i < b.len() && (b[i] == b'e' || b[i] == b'E') {
            let mut j = i + 1;
            if j < b.len() && (b[j] == b'+' || b[j] == b'-') {
                j += 1;
            }
            if digits(&mut j) == 0 {
                self.pos = i;
                return self.error("malformed exponent in number");
            }
            i = j;
        }
        let value: f64 = self.src[start..i]
            .parse()
            .map_err(|_| ParseError::Syntax { offset: start, message: "malformed number".into() })?;
        if !value.is_finite() {
            return Err(ParseError::Syntax { offset: start, message: "number out of range".into() });
        }
        self.pos = i;
        Ok(value)
    }

    fn identifier(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        if let Some(var) = self.vars.iter().find(|v| v.name() == name) {
            return Ok(Expr::Var(*var));
        }
        if name == "pi" {
            return Ok(Expr::Num(std::f64::consts::PI));
        }
        if name == "pow" {
            self.expect(b'(')?;
            let base = self.sum()?;
            self.expect(b',')?;
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            match self.peek() {
                Some(c) if c.is_ascii_digit() || c == b'.' => {}
                _ => return self.error("pow exponent must be a numeric literal"),
            }
            let c = self.number()?;
            self.expect(b')')?;
            return Ok(Expr::PowConst(Box::new(base), if negative { -c } else { c }));
        }
        if let Some(func) = Func::from_name(name) {
            self.expect(b'(')?;
            let arg = self.sum()?;
            self.expect(b')')?;
            return Ok(Expr::Call(func, Box::new(arg)));
        }
        let mut allowed: Vec<&str> = self.vars.iter().map(|v| v.name()).collect();
        allowed.push("pi");
        allowed.extend(Func::ALL.iter().map(|f| f.name()));
        allowed.push("pow");
        Err(ParseError::UnknownIdentifier { offset: start, name: name.to_string(), allowed: allowed.join(", ") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, x: f64, w: f64, v: f64) -> f64 {
        Expr::parse(s).unwrap().eval(x, w, v).unwrap()
    }

    #[test]
    fn precedence_and_arithmetic() {
        assert_eq!(ev("2+3*x", 1.0, 0.0, 0.0), 5.0);
        assert_eq!(ev("w^2 - v", 0.0, 3.0, 1.0), 8.0);
        assert_eq!(ev("x^0.5", 4.0, 0.0, 0.0), 2.0);
        assert_eq!(ev("exp(0)*w", 0.0, 7.0, 0.0), 7.0);
        assert_eq!(ev("-2^2", 0.0, 0.0, 0.0), -4.0);
        assert_eq!(ev("2^3^2", 0.0, 0.0, 0.0), 512.0);
        assert_eq!(ev("2^-1", 0.0, 0.0, 0.0), 0.5);
        assert_eq!(ev("8/4/2", 0.0, 0.0, 0.0), 1.0);
        assert_eq!(ev("1-2-3", 0.0, 0.0, 0.0), -4.0);
        assert_eq!(ev("pow(x, 3)", 2.0, 0.0, 0.0), 8.0);
        assert_eq!(ev("pow(x, -1)", 2.0, 0.0, 0.0), 0.5);
        assert_eq!(ev("neg(x) + abs(-3)", 2.0, 0.0, 0.0), 1.0);
        assert_eq!(ev("  ( x )\t*\n2 ", 2.0, 0.0, 0.0), 4.0);
        assert_eq!(ev("1.5e1 + .5", 0.0, 0.0, 0.0), 15.5);
        assert!((ev("cos(pi)", 0.0, 0.0, 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let cases = [("2+*3", 2), ("", 0), ("(x", 2), ("x)", 1), ("3 4", 2), ("exp x", 4), ("1e", 1), ("x^", 2), ("pow(x, w)", 7), ("2 $ 3", 2)];
        for (src, offset) in cases {
            match Expr::parse(src) {
                Err(e) => assert_eq!(e.offset(), offset, "{src}: {e}"),
                Ok(e) => panic!("{src} parsed as {e}"),
            }
        }
    }

    #[test]
    fn unknown_identifiers_list_allowed_names() {
        let err = Expr::parse("x + y").unwrap_err();
        match err {
            ParseError::UnknownIdentifier { offset, name, allowed } => {
                assert_eq!(offset, 4);
                assert_eq!(name, "y");
                assert!(allowed.contains("x, w, v"));
                assert!(allowed.contains("sqrt"));
            }
            other => panic!("{other:?}"),
        }
        assert!(Expr::parse("u").is_err());
        assert!(Expr::parse_modulus("x").is_err());
        assert_eq!(Expr::parse_modulus("u^2").unwrap().eval_u(3.0).unwrap(), 9.0);
    }

    #[test]
    fn domain_errors() {
        let e = Expr::parse("1/x").unwrap().eval(0.0, 0.0, 0.0).unwrap_err();
        assert_eq!(e.kind, DomainKind::DivisionByZero);
        assert_eq!(e.subexpr, "(1 / x)");
        let e = Expr::parse("2 + log(w)").unwrap().eval(0.0, -1.0, 0.0).unwrap_err();
        assert_eq!(e.kind, DomainKind::LogOfNonPositive);
        assert_eq!(e.subexpr, "log(w)");
        assert_eq!(Expr::parse("sqrt(v)").unwrap().eval(0.0, 0.0, -1.0).unwrap_err().kind, DomainKind::SqrtOfNegative);
        assert_eq!(Expr::parse("x^0.5").unwrap().eval(-1.0, 0.0, 0.0).unwrap_err().kind, DomainKind::NonFinite);
        assert_eq!(Expr::parse("exp(x)").unwrap().eval(1000.0, 0.0, 0.0).unwrap_err().kind, DomainKind::NonFinite);
    }

    #[test]
    fn display_round_trips() {
        for src in ["-x^2", "2^3^2", "1 - (2 - 3)", "pow(w, -0.5) * 3", "-(-(1e-7))", "x/(w*v)"] {
            let e = Expr::parse(src).unwrap();
            let again = Expr::parse(&e.to_string()).unwrap();
            assert_eq!(e, again, "{src} -> {e}");
        }
        assert_eq!(Expr::Num(-2.0).to_string(), "(-2)");
        assert_eq!(Expr::parse(&Expr::Num(-2.0).to_string()).unwrap().eval(0.0, 0.0, 0.0).unwrap(), -2.0);
    }

    #[test]
    fn variable_usage() {
        let e = Expr::parse("x*w + 1").unwrap();
        assert!(e.uses(Var::X) && e.uses(Var::W) && !e.uses(Var::V));
        assert_eq!(Expr::parse("3").unwrap().as_constant(), Some(3.0));
    }
}
