//! Arithmetic expressions over `x`, `y`, `t` with exact symbolic differentiation.
//!
//! Grammar, loosest binding first: `+ -`, then `* /`, then unary minus, then `^`.
//! `^` is right associative and its exponent must fold to an integer constant.
//! The identifier `pi` is replaced by its double value while parsing.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    T,
}

impl Var {
    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
        }
    }

    fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Var(Var),
    Neg(Expr),
    Add(Expr, Expr),
    Sub(Expr, Expr),
    Mul(Expr, Expr),
    Div(Expr, Expr),
    Pow(Expr, i32),
    Call(Func, Expr),
}

/// Immutable, cheaply clonable expression tree.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr(Arc<Node>);

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("exponent at byte {offset} must be an integer constant")]
    Exponent { offset: usize },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::UnknownIdentifier { offset, .. }
            | ParseError::Exponent { offset } => *offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero: divisor `{divisor}` vanishes at x={x}, y={y}, t={t}")]
    DivisionByZero { divisor: String, x: f64, y: f64, t: f64 },
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    fn wrap(n: Node) -> Expr {
        Expr(Arc::new(n))
    }

    pub fn num(v: f64) -> Expr {
        Expr::wrap(Node::Num(v))
    }

    pub fn var(v: Var) -> Expr {
        Expr::wrap(Node::Var(v))
    }

    pub fn as_num(&self) -> Option<f64> {
        match self.node() {
            Node::Num(v) => Some(*v),
            _ => None,
        }
    }

    fn is_num(&self, v: f64) -> bool {
        self.as_num() == Some(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: Expr) -> Expr {
        match a.node() {
            Node::Num(v) => Expr::num(-v),
            Node::Neg(inner) => inner.clone(),
            _ => Expr::wrap(Node::Neg(a)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(p), Some(q)) => Expr::num(p + q),
            (Some(p), _) if p == 0.0 => b,
            (_, Some(q)) if q == 0.0 => a,
            _ => Expr::wrap(Node::Add(a, b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (a.as_num(), b.as_num()) {
            (Some(p), Some(q)) => Expr::num(p - q),
            (Some(p), _) if p == 0.0 => Expr::neg(b),
            (_, Some(q)) if q == 0.0 => a,
            _ => Expr::wrap(Node::Sub(a, b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Expr {
        if a.is_num(0.0) || b.is_num(0.0) {
            return Expr::num(0.0);
        }
        match (a.as_num(), b.as_num()) {
            (Some(p), Some(q)) => Expr::num(p * q),
            (Some(p), _) if p == 1.0 => b,
            (_, Some(q)) if q == 1.0 => a,
            _ => Expr::wrap(Node::Mul(a, b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn div(a: Expr, b: Expr) -> Expr {
        if a.is_num(0.0) && !b.is_num(0.0) {
            return Expr::num(0.0);
        }
        if b.is_num(1.0) {
            return a;
        }
        Expr::wrap(Node::Div(a, b))
    }

    pub fn pow(a: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::num(1.0),
            1 => a,
            _ => Expr::wrap(Node::Pow(a, n)),
        }
    }

    pub fn call(f: Func, a: Expr) -> Expr {
        Expr::wrap(Node::Call(f, a))
    }

    pub fn parse(src: &str) -> Result<Expr, ParseError> {
        parse(src)
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> Result<f64, EvalError> {
        Ok(match self.node() {
            Node::Num(v) => *v,
            Node::Var(Var::X) => x,
            Node::Var(Var::Y) => y,
            Node::Var(Var::T) => t,
            Node::Neg(a) => -a.eval(x, y, t)?,
            Node::Add(a, b) => a.eval(x, y, t)? + b.eval(x, y, t)?,
            Node::Sub(a, b) => a.eval(x, y, t)? - b.eval(x, y, t)?,
            Node::Mul(a, b) => a.eval(x, y, t)? * b.eval(x, y, t)?,
            Node::Div(a, b) => {
                let num = a.eval(x, y, t)?;
                let den = b.eval(x, y, t)?;
                if den == 0.0 {
                    return Err(EvalError::DivisionByZero { divisor: b.to_string(), x, y, t });
                }
                num / den
            }
            Node::Pow(a, n) => {
                let base = a.eval(x, y, t)?;
                if base == 0.0 && *n < 0 {
                    return Err(EvalError::DivisionByZero { divisor: a.to_string(), x, y, t });
                }
                base.powi(*n)
            }
            Node::Call(f, a) => f.apply(a.eval(x, y, t)?),
        })
    }

    pub fn diff(&self, v: Var) -> Expr {
        match self.node() {
            Node::Num(_) => Expr::num(0.0),
            Node::Var(w) => Expr::num(if *w == v { 1.0 } else { 0.0 }),
            Node::Neg(a) => Expr::neg(a.diff(v)),
            Node::Add(a, b) => Expr::add(a.diff(v), b.diff(v)),
            Node::Sub(a, b) => Expr::sub(a.diff(v), b.diff(v)),
            Node::Mul(a, b) => Expr::add(
                Expr::mul(a.diff(v), b.clone()),
                Expr::mul(a.clone(), b.diff(v)),
            ),
            Node::Div(a, b) => {
                let da = a.diff(v);
                let db = b.diff(v);
                let first = Expr::div(da, b.clone());
                let second = Expr::div(Expr::mul(a.clone(), db), Expr::pow(b.clone(), 2));
                Expr::sub(first, second)
            }
            Node::Pow(a, n) => Expr::mul(
                Expr::mul(Expr::num(*n as f64), Expr::pow(a.clone(), n - 1)),
                a.diff(v),
            ),
            Node::Call(f, a) => {
                let outer = match f {
                    Func::Sin => Expr::call(Func::Cos, a.clone()),
                    Func::Cos => Expr::neg(Expr::call(Func::Sin, a.clone())),
                    Func::Exp => self.clone(),
                };
                Expr::mul(outer, a.diff(v))
            }
        }
    }

    pub fn depends_on(&self, v: Var) -> bool {
        match self.node() {
            Node::Num(_) => false,
            Node::Var(w) => *w == v,
            Node::Neg(a) | Node::Pow(a, _) | Node::Call(_, a) => a.depends_on(v),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.depends_on(v) || b.depends_on(v)
            }
        }
    }

    /// Splits the expression into `sum_k time_k(t) * space_k(x, y)`.
    ///
    /// Returns `None` when some term mixes `t` with a spatial variable inside a
    /// nonlinear function or a quotient.
    pub fn separate_time(&self) -> Option<Vec<(Expr, Expr)>> {
        let spatial = |e: &Expr| e.depends_on(Var::X) || e.depends_on(Var::Y);
        if !self.depends_on(Var::T) {
            return Some(vec![(Expr::num(1.0), self.clone())]);
        }
        if !spatial(self) {
            return Some(vec![(self.clone(), Expr::num(1.0))]);
        }
        match self.node() {
            Node::Neg(a) => {
                let parts = a.separate_time()?;
                Some(parts.into_iter().map(|(p, q)| (Expr::neg(p), q)).collect())
            }
            Node::Add(a, b) => {
                let mut parts = a.separate_time()?;
                parts.extend(b.separate_time()?);
                Some(parts)
            }
            Node::Sub(a, b) => {
                let mut parts = a.separate_time()?;
                parts.extend(b.separate_time()?.into_iter().map(|(p, q)| (Expr::neg(p), q)));
                Some(parts)
            }
            Node::Mul(a, b) => {
                let pa = a.separate_time()?;
                let pb = b.separate_time()?;
                let mut out = Vec::with_capacity(pa.len() * pb.len());
                for (ta, sa) in &pa {
                    for (tb, sb) in &pb {
                        out.push((Expr::mul(ta.clone(), tb.clone()), Expr::mul(sa.clone(), sb.clone())));
                    }
                }
                Some(out)
            }
            Node::Div(a, b) if !b.depends_on(Var::T) => {
                let parts = a.separate_time()?;
                Some(parts.into_iter().map(|(p, q)| (p, Expr::div(q, b.clone()))).collect())
            }
            Node::Div(a, b) if !spatial(b) => {
                let parts = a.separate_time()?;
                Some(parts.into_iter().map(|(p, q)| (Expr::div(p, b.clone()), q)).collect())
            }
            Node::Call(Func::Exp, a) => {
                let parts = a.separate_time()?;
                if parts.len() != 1 {
                    // exp of a sum splits into a product of exponentials
                    let mut out = vec![(Expr::num(1.0), Expr::num(1.0))];
                    for (p, q) in parts {
                        let factor = Expr::call(Func::Exp, Expr::mul(p, q)).separate_time()?;
                        let mut next = Vec::new();
                        for (ta, sa) in &out {
                            for (tb, sb) in &factor {
                                next.push((Expr::mul(ta.clone(), tb.clone()), Expr::mul(sa.clone(), sb.clone())));
                            }
                        }
                        out = next;
                    }
                    return Some(out);
                }
                None
            }
            _ => None,
        }
    }
}

fn prec(n: &Node) -> u8 {
    match n {
        Node::Add(..) | Node::Sub(..) => 1,
        Node::Mul(..) | Node::Div(..) => 2,
        Node::Neg(..) => 3,
        Node::Pow(..) => 4,
        Node::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => 3,
        _ => 5,
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, child: &Expr, min: u8) -> fmt::Result {
    if prec(child.node()) < min {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Num(v) => {
                if v.is_finite() {
                    write!(f, "{v:?}")
                } else {
                    write!(f, "{v}")
                }
            }
            Node::Var(v) => f.write_str(v.name()),
            Node::Neg(a) => {
                f.write_str("-")?;
                write_child(f, a, 4)
            }
            Node::Add(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" + ")?;
                write_child(f, b, 2)
            }
            Node::Sub(a, b) => {
                write_child(f, a, 1)?;
                f.write_str(" - ")?;
                write_child(f, b, 2)
            }
            Node::Mul(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("*")?;
                write_child(f, b, 3)
            }
            Node::Div(a, b) => {
                write_child(f, a, 2)?;
                f.write_str("/")?;
                write_child(f, b, 3)
            }
            Node::Pow(a, n) => {
                write_child(f, a, 5)?;
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(usize, usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

fn describe(t: Tok, src: &str) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(a, b) => format!("identifier `{}`", &src[a..b]),
        Tok::Plus => "`+`".into(),
        Tok::Minus => "`-`".into(),
        Tok::Star => "`*`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Caret => "`^`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => out.push((Tok::Plus, start)),
            b'-' => out.push((Tok::Minus, start)),
            b'*' => out.push((Tok::Star, start)),
            b'/' => out.push((Tok::Slash, start)),
            b'^' => out.push((Tok::Caret, start)),
            b'(' => out.push((Tok::LParen, start)),
            b')' => out.push((Tok::RParen, start)),
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let v: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    expected: "a decimal number".into(),
                })?;
                out.push((Tok::Num(v), start));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(start, i), start));
                continue;
            }
            _ => {
                return Err(ParseError::Syntax {
                    offset: start,
                    expected: "an operator, number, identifier or parenthesis".into(),
                })
            }
        }
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Tok {
        self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.peek();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.offset(),
            expected: format!("{expected}, found {}", describe(self.peek(), self.src)),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = Expr::wrap(Node::Add(lhs, rhs));
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.product()?;
                    lhs = Expr::wrap(Node::Sub(lhs, rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::wrap(Node::Mul(lhs, rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = Expr::wrap(Node::Div(lhs, rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                let inner = self.unary()?;
                Ok(match inner.node() {
                    Node::Num(v) => Expr::num(-v),
                    _ => Expr::wrap(Node::Neg(inner)),
                })
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let at = self.offset();
        let negate = if self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let exp = self.power()?;
        let value = constant_value(&exp).ok_or(ParseError::Exponent { offset: at })?;
        let value = if negate { -value } else { value };
        if value.fract() != 0.0 || value.abs() > i32::MAX as f64 {
            return Err(ParseError::Exponent { offset: at });
        }
        Ok(Expr::wrap(Node::Pow(base, value as i32)))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.offset();
        match self.peek() {
            Tok::Num(v) => {
                self.bump();
                Ok(Expr::num(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Tok::Ident(a, b) => {
                self.bump();
                let name = &self.src[a..b];
                let func = match name {
                    "x" => return Ok(Expr::var(Var::X)),
                    "y" => return Ok(Expr::var(Var::Y)),
                    "t" => return Ok(Expr::var(Var::T)),
                    "pi" => return Ok(Expr::num(std::f64::consts::PI)),
                    "sin" => Func::Sin,
                    "cos" => Func::Cos,
                    "exp" => Func::Exp,
                    _ => {
                        return Err(ParseError::UnknownIdentifier { name: name.to_string(), offset: at })
                    }
                };
                self.expect(Tok::LParen, "`(` after function name")?;
                let arg = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(Expr::call(func, arg))
            }
            _ => self.fail("a number, variable, function call or `(`"),
        }
    }
}

fn constant_value(e: &Expr) -> Option<f64> {
    if e.depends_on(Var::X) || e.depends_on(Var::Y) || e.depends_on(Var::T) {
        return None;
    }
    e.eval(0.0, 0.0, 0.0).ok()
}

pub fn parse(src: &str) -> Result<Expr, ParseError> {
    let toks = lex(src)?;
    let mut p = Parser { src, toks, pos: 0 };
    let e = p.sum()?;
    if p.peek() != Tok::End {
        return p.fail("an operator or end of input");
    }
    Ok(e)
}
