//! Expressions for metric components and scale factors.
//!
//! The grammar (documented in `docs/metric-format.md`) has numbers,
//! coordinate/parameter names, `+ - * / ^`, parentheses and a fixed table
//! of unary functions: `exp log sin cos sinh cosh sqrt`. Precedence from
//! loosest to tightest: `+ -`, `* /`, unary `-`, `^` (right-associative),
//! so `-t^2` reads as `-(t^2)`. Exponents of `^` must be integer literals
//! (optionally negated or parenthesized); fractional powers are written
//! out via `sqrt` or `exp`/`log`.
//!
//! Evaluation happens over jet arithmetic; [`eval_scalar`] is a separate
//! plain-`f64` path used as an independent oracle by the verification
//! suites.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::jet::{Jet3, JetError};
use crate::linalg::JetVec4;
use crate::math;

/// Parameter bindings by name.
pub type Params = alloc::collections::BTreeMap<String, f64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    Number,
    Identifier,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// Byte offset into the source string.
    pub pos: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprError {
    UnexpectedCharacter { pos: usize },
    MalformedNumber { pos: usize },
    UnexpectedToken { pos: usize, expected: &'static str },
    UnexpectedEnd,
    UnbalancedParenthesis { pos: usize },
    UnknownFunction { name: String, pos: usize },
    NonIntegerExponent { pos: usize },
    UnboundName { name: String, pos: usize },
    Eval { source: JetError, pos: usize },
}

impl ExprError {
    /// Byte offset the error points at, if any.
    pub fn pos(&self) -> Option<usize> {
        match self {
            ExprError::UnexpectedCharacter { pos }
            | ExprError::MalformedNumber { pos }
            | ExprError::UnexpectedToken { pos, .. }
            | ExprError::UnbalancedParenthesis { pos }
            | ExprError::UnknownFunction { pos, .. }
            | ExprError::NonIntegerExponent { pos }
            | ExprError::UnboundName { pos, .. }
            | ExprError::Eval { pos, .. } => Some(*pos),
            ExprError::UnexpectedEnd => None,
        }
    }
}

impl fmt::Display for ExprError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExprError::UnexpectedCharacter { pos } => {
                write!(f, "unexpected character at offset {pos}")
            }
            ExprError::MalformedNumber { pos } => write!(f, "malformed number at offset {pos}"),
            ExprError::UnexpectedToken { pos, expected } => {
                write!(f, "unexpected token at offset {pos}, expected {expected}")
            }
            ExprError::UnexpectedEnd => write!(f, "unexpected end of expression"),
            ExprError::UnbalancedParenthesis { pos } => {
                write!(f, "unbalanced parenthesis at offset {pos}")
            }
            ExprError::UnknownFunction { name, pos } => {
                write!(f, "unknown function `{name}` at offset {pos}")
            }
            ExprError::NonIntegerExponent { pos } => {
                write!(f, "exponent at offset {pos} must be an integer literal")
            }
            ExprError::UnboundName { name, pos } => {
                write!(f, "unbound name `{name}` at offset {pos}")
            }
            ExprError::Eval { source, pos } => write!(f, "{source} at offset {pos}"),
        }
    }
}

impl core::error::Error for ExprError {}

/// Split a source string into tokens (maximal munch, whitespace skipped).
pub fn tokenize(src: &str) -> Result<Vec<Token>, ExprError> {
    let bytes = src.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        let kind = match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'/' => TokenKind::Slash,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b',' => TokenKind::Comma,
            b'0'..=b'9' => {
                i += 1;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j + 1;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                match text.parse::<f64>() {
                    Ok(v) if v.is_finite() => {}
                    _ => return Err(ExprError::MalformedNumber { pos: start }),
                }
                tokens.push(Token {
                    kind: TokenKind::Number,
                    text: text.to_string(),
                    pos: start,
                });
                continue;
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                i += 1;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Identifier,
                    text: src[start..i].to_string(),
                    pos: start,
                });
                continue;
            }
            _ => return Err(ExprError::UnexpectedCharacter { pos: start }),
        };
        i += 1;
        tokens.push(Token {
            kind,
            text: src[start..i].to_string(),
            pos: start,
        });
    }
    Ok(tokens)
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
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Parsed expression tree. Equality ignores source positions.
#[derive(Debug, Clone)]
pub enum Expr {
    Number {
        value: f64,
        pos: usize,
    },
    /// A declared coordinate; `index` is its slot in the coordinate list.
    Variable {
        name: String,
        index: usize,
        pos: usize,
    },
    Parameter {
        name: String,
        pos: usize,
    },
    Neg {
        child: Box<Expr>,
        pos: usize,
    },
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
        pos: usize,
    },
    Call {
        func: Func,
        arg: Box<Expr>,
        pos: usize,
    },
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Expr::Number { value: a, .. }, Expr::Number { value: b, .. }) => a == b,
            (
                Expr::Variable {
                    name: a, index: i, ..
                },
                Expr::Variable {
                    name: b, index: j, ..
                },
            ) => a == b && i == j,
            (Expr::Parameter { name: a, .. }, Expr::Parameter { name: b, .. }) => a == b,
            (Expr::Neg { child: a, .. }, Expr::Neg { child: b, .. }) => a == b,
            (
                Expr::Binary {
                    op: oa,
                    lhs: la,
                    rhs: ra,
                    ..
                },
                Expr::Binary {
                    op: ob,
                    lhs: lb,
                    rhs: rb,
                    ..
                },
            ) => oa == ob && la == lb && ra == rb,
            (
                Expr::Call {
                    func: fa, arg: aa, ..
                },
                Expr::Call {
                    func: fb, arg: ab, ..
                },
            ) => fa == fb && aa == ab,
            _ => false,
        }
    }
}

struct Parser<'a> {
    tokens: &'a [Token],
    coords: &'a [&'a str],
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.at);
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, kind: TokenKind, expected: &'static str) -> Result<&Token, ExprError> {
        match self.tokens.get(self.at) {
            Some(t) if t.kind == kind => {
                self.at += 1;
                Ok(t)
            }
            Some(t) => Err(ExprError::UnexpectedToken {
                pos: t.pos,
                expected,
            }),
            None => Err(ExprError::UnexpectedEnd),
        }
    }

    // Precedence levels: + - (1) < * / (2) < unary - (3) < ^ (4).
    fn expr(&mut self, min_prec: u8) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(tok) = self.peek() {
            let (op, prec, right_assoc) = match tok.kind {
                TokenKind::Plus => (BinOp::Add, 1, false),
                TokenKind::Minus => (BinOp::Sub, 1, false),
                TokenKind::Star => (BinOp::Mul, 2, false),
                TokenKind::Slash => (BinOp::Div, 2, false),
                TokenKind::Caret => (BinOp::Pow, 4, true),
                _ => break,
            };
            if prec < min_prec {
                break;
            }
            let pos = tok.pos;
            self.at += 1;
            let rhs = self.expr(if right_assoc { prec } else { prec + 1 })?;
            if op == BinOp::Pow {
                integer_exponent(&rhs)?;
            }
            lhs = Expr::Binary {
                op,
                lhs: Box::new(lhs),
                rhs: Box::new(rhs),
                pos,
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Minus => {
                let pos = t.pos;
                self.at += 1;
                // unary minus binds looser than ^, tighter than * /
                let child = self.expr(3)?;
                Ok(Expr::Neg {
                    child: Box::new(child),
                    pos,
                })
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let tok = match self.bump() {
            Some(t) => t.clone(),
            None => return Err(ExprError::UnexpectedEnd),
        };
        match tok.kind {
            TokenKind::Number => {
                let value = tok
                    .text
                    .parse::<f64>()
                    .map_err(|_| ExprError::MalformedNumber { pos: tok.pos })?;
                Ok(Expr::Number {
                    value,
                    pos: tok.pos,
                })
            }
            TokenKind::LParen => {
                let inner = self.expr(1)?;
                match self.tokens.get(self.at) {
                    Some(t) if t.kind == TokenKind::RParen => {
                        self.at += 1;
                        Ok(inner)
                    }
                    Some(t) => Err(ExprError::UnbalancedParenthesis { pos: t.pos }),
                    None => Err(ExprError::UnbalancedParenthesis { pos: tok.pos }),
                }
            }
            TokenKind::Identifier => {
                if matches!(self.peek(), Some(t) if t.kind == TokenKind::LParen) {
                    let func = Func::from_name(&tok.text).ok_or(ExprError::UnknownFunction {
                        name: tok.text.clone(),
                        pos: tok.pos,
                    })?;
                    self.at += 1; // consume '('
                    let arg = self.expr(1)?;
                    self.expect(TokenKind::RParen, "`)`")?;
                    Ok(Expr::Call {
                        func,
                        arg: Box::new(arg),
                        pos: tok.pos,
                    })
                } else if let Some(index) = self.coords.iter().position(|c| *c == tok.text) {
                    Ok(Expr::Variable {
                        name: tok.text.clone(),
                        index,
                        pos: tok.pos,
                    })
                } else {
                    Ok(Expr::Parameter {
                        name: tok.text.clone(),
                        pos: tok.pos,
                    })
                }
            }
            _ => Err(ExprError::UnexpectedToken {
                pos: tok.pos,
                expected: "a number, name, `-` or `(`",
            }),
        }
    }
}

/// Fold a `^` right-hand side down to an integer: literals and constant
/// arithmetic on them are allowed (so `2^3^2` nests), names and calls are
/// not.
fn integer_exponent(e: &Expr) -> Result<i32, ExprError> {
    let v = fold_constant(e)?;
    if math::fract(v) == 0.0 && v.abs() <= i32::MAX as f64 {
        Ok(v as i32)
    } else {
        Err(ExprError::NonIntegerExponent {
            pos: expr_pos(e),
        })
    }
}

fn expr_pos(e: &Expr) -> usize {
    match e {
        Expr::Number { pos, .. }
        | Expr::Variable { pos, .. }
        | Expr::Parameter { pos, .. }
        | Expr::Neg { pos, .. }
        | Expr::Binary { pos, .. }
        | Expr::Call { pos, .. } => *pos,
    }
}

fn fold_constant(e: &Expr) -> Result<f64, ExprError> {
    match e {
        Expr::Number { value, .. } => Ok(*value),
        Expr::Neg { child, .. } => Ok(-fold_constant(child)?),
        Expr::Binary { op, lhs, rhs, pos } => {
            let l = fold_constant(lhs)?;
            let r = fold_constant(rhs)?;
            let v = match op {
                BinOp::Add => l + r,
                BinOp::Sub => l - r,
                BinOp::Mul => l * r,
                BinOp::Div => l / r,
                BinOp::Pow => {
                    if math::fract(r) != 0.0 || r.abs() > i32::MAX as f64 {
                        return Err(ExprError::NonIntegerExponent { pos: *pos });
                    }
                    math::powi(l, r as i32)
                }
            };
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ExprError::NonIntegerExponent { pos: *pos })
            }
        }
        Expr::Variable { pos, .. } | Expr::Parameter { pos, .. } | Expr::Call { pos, .. } => {
            Err(ExprError::NonIntegerExponent { pos: *pos })
        }
    }
}

/// Parse a token stream. Identifiers found in `coords` become variables,
/// everything else a parameter reference.
pub fn parse(tokens: &[Token], coords: &[&str]) -> Result<Expr, ExprError> {
    if tokens.is_empty() {
        return Err(ExprError::UnexpectedEnd);
    }
    let mut p = Parser {
        tokens,
        coords,
        at: 0,
    };
    let e = p.expr(1)?;
    match p.peek() {
        Some(t) if t.kind == TokenKind::RParen => {
            Err(ExprError::UnbalancedParenthesis { pos: t.pos })
        }
        Some(t) => Err(ExprError::UnexpectedToken {
            pos: t.pos,
            expected: "end of expression",
        }),
        None => Ok(e),
    }
}

impl Expr {
    /// Tokenize and parse in one step.
    pub fn parse_str(src: &str, coords: &[&str]) -> Result<Expr, ExprError> {
        parse(&tokenize(src)?, coords)
    }

    /// Jet-valued evaluation. `env[i]` is the jet bound to coordinate `i`.
    pub fn evaluate(&self, env: &JetVec4, params: &Params) -> Result<Jet3, ExprError> {
        match self {
            Expr::Number { value, .. } => Ok(Jet3::constant(*value)),
            Expr::Variable { index, .. } => Ok(env[*index]),
            Expr::Parameter { name, pos } => params
                .get(name)
                .map(|v| Jet3::constant(*v))
                .ok_or_else(|| ExprError::UnboundName {
                    name: name.clone(),
                    pos: *pos,
                }),
            Expr::Neg { child, .. } => Ok(-child.evaluate(env, params)?),
            Expr::Binary { op, lhs, rhs, pos } => {
                let l = lhs.evaluate(env, params)?;
                match op {
                    BinOp::Add => Ok(l + rhs.evaluate(env, params)?),
                    BinOp::Sub => Ok(l - rhs.evaluate(env, params)?),
                    BinOp::Mul => Ok(l * rhs.evaluate(env, params)?),
                    BinOp::Div => {
                        let r = rhs.evaluate(env, params)?;
                        l.try_div(&r)
                            .map_err(|source| ExprError::Eval { source, pos: *pos })
                    }
                    BinOp::Pow => {
                        let n = integer_exponent(rhs)?;
                        l.powi(n)
                            .map_err(|source| ExprError::Eval { source, pos: *pos })
                    }
                }
            }
            Expr::Call { func, arg, pos } => {
                let a = arg.evaluate(env, params)?;
                let wrap = |r: Result<Jet3, JetError>| {
                    r.map_err(|source| ExprError::Eval { source, pos: *pos })
                };
                match func {
                    Func::Exp => Ok(a.exp()),
                    Func::Log => wrap(a.ln()),
                    Func::Sin => Ok(a.sin()),
                    Func::Cos => Ok(a.cos()),
                    Func::Sinh => Ok(a.sinh()),
                    Func::Cosh => Ok(a.cosh()),
                    Func::Sqrt => wrap(a.sqrt()),
                }
            }
        }
    }

    /// Plain `f64` evaluation, kept independent of the jet path so it can
    /// serve as an oracle for it.
    pub fn eval_scalar(&self, point: &[f64; 4], params: &Params) -> Result<f64, ExprError> {
        match self {
            Expr::Number { value, .. } => Ok(*value),
            Expr::Variable { index, .. } => Ok(point[*index]),
            Expr::Parameter { name, pos } => {
                params.get(name).copied().ok_or_else(|| ExprError::UnboundName {
                    name: name.clone(),
                    pos: *pos,
                })
            }
            Expr::Neg { child, .. } => Ok(-child.eval_scalar(point, params)?),
            Expr::Binary { op, lhs, rhs, pos } => {
                let l = lhs.eval_scalar(point, params)?;
                match op {
                    BinOp::Add => Ok(l + rhs.eval_scalar(point, params)?),
                    BinOp::Sub => Ok(l - rhs.eval_scalar(point, params)?),
                    BinOp::Mul => Ok(l * rhs.eval_scalar(point, params)?),
                    BinOp::Div => {
                        let r = rhs.eval_scalar(point, params)?;
                        if r.abs() < 1e-300 {
                            Err(ExprError::Eval {
                                source: JetError::DivisionByZero,
                                pos: *pos,
                            })
                        } else {
                            Ok(l / r)
                        }
                    }
                    BinOp::Pow => {
                        let n = integer_exponent(rhs)?;
                        if n < 0 && l.abs() < 1e-300 {
                            return Err(ExprError::Eval {
                                source: JetError::DivisionByZero,
                                pos: *pos,
                            });
                        }
                        Ok(math::powi(l, n))
                    }
                }
            }
            Expr::Call { func, arg, pos } => {
                let a = arg.eval_scalar(point, params)?;
                let domain = |func: &'static str| ExprError::Eval {
                    source: JetError::Domain { func },
                    pos: *pos,
                };
                match func {
                    Func::Exp => Ok(math::exp(a)),
                    Func::Log => {
                        if a <= 0.0 {
                            Err(domain("ln"))
                        } else {
                            Ok(math::ln(a))
                        }
                    }
                    Func::Sin => Ok(math::sin(a)),
                    Func::Cos => Ok(math::cos(a)),
                    Func::Sinh => Ok(math::sinh(a)),
                    Func::Cosh => Ok(math::cosh(a)),
                    Func::Sqrt => {
                        if a <= 0.0 {
                            Err(domain("sqrt"))
                        } else {
                            Ok(math::sqrt(a))
                        }
                    }
                }
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Number { .. } | Expr::Variable { .. } | Expr::Parameter { .. }
            | Expr::Call { .. } => 5,
            Expr::Binary { op: BinOp::Pow, .. } => 4,
            Expr::Neg { .. } => 3,
            Expr::Binary {
                op: BinOp::Mul | BinOp::Div,
                ..
            } => 2,
            Expr::Binary { .. } => 1,
        }
    }
}

impl fmt::Display for Expr {
    /// Minimal-parenthesis rendering; re-parsing the output yields a
    /// structurally identical tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn paren(f: &mut fmt::Formatter<'_>, e: &Expr, need: bool) -> fmt::Result {
            if need {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Number { value, .. } => write!(f, "{value:?}"),
            Expr::Variable { name, .. } | Expr::Parameter { name, .. } => write!(f, "{name}"),
            Expr::Neg { child, .. } => {
                write!(f, "-")?;
                paren(f, child, child.prec() < 3)
            }
            Expr::Binary { op, lhs, rhs, .. } => {
                let p = self.prec();
                let (lp, rp) = if *op == BinOp::Pow {
                    (lhs.prec() <= p, rhs.prec() < p)
                } else {
                    (lhs.prec() < p, rhs.prec() <= p)
                };
                paren(f, lhs, lp)?;
                write!(f, "{}", op.symbol())?;
                paren(f, rhs, rp)
            }
            Expr::Call { func, arg, .. } => write!(f, "{}({})", func.name(), arg),
        }
    }
}
