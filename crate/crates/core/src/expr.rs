//! Real arithmetic expressions in one variable `x`.
//!
//! Precedence, tightest first: `^` (right-associative), unary `-`, `* /`,
//! `+ -`. Functions: sin cos tan exp log tanh cosh sinh sqrt abs.
//! Constants: pi, e.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

const MAX_DEPTH: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Tanh,
    Cosh,
    Sinh,
    Sqrt,
    Abs,
}

impl Func {
    const ALL: [(&'static str, Func); 10] = [
        ("sin", Func::Sin),
        ("cos", Func::Cos),
        ("tan", Func::Tan),
        ("exp", Func::Exp),
        ("log", Func::Log),
        ("tanh", Func::Tanh),
        ("cosh", Func::Cosh),
        ("sinh", Func::Sinh),
        ("sqrt", Func::Sqrt),
        ("abs", Func::Abs),
    ];

    pub fn name(self) -> &'static str {
        Self::ALL.iter().find(|p| p.1 == self).map(|p| p.0).unwrap_or("?")
    }

    fn apply(self, v: f64) -> Result<f64> {
        Ok(match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Tan => v.tan(),
            Func::Exp => v.exp(),
            Func::Log if v <= 0.0 => return Err(Error::domain("log", format!("argument {v}"))),
            Func::Log => v.ln(),
            Func::Tanh => v.tanh(),
            Func::Cosh => v.cosh(),
            Func::Sinh => v.sinh(),
            Func::Sqrt if v < 0.0 => return Err(Error::domain("sqrt", format!("argument {v}"))),
            Func::Sqrt => v.sqrt(),
            Func::Abs => v.abs(),
        })
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

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    X,
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut p = Parser { src: src.as_bytes(), pos: 0, depth: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos < p.src.len() {
            return Err(p.error("operator or end of input"));
        }
        Ok(e)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Expr::Num(v) => *v,
            Expr::X => x,
            Expr::Neg(e) => -e.eval(x)?,
            Expr::Call(f, e) => f.apply(e.eval(x)?)?,
            Expr::Bin(op, l, r) => {
                let (a, b) = (l.eval(x)?, r.eval(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div if b == 0.0 => return Err(Error::domain("division", format!("{a} / 0"))),
                    BinOp::Div => a / b,
                    BinOp::Pow => a.powf(b),
                }
            }
        })
    }

    /// `eval` with errors mapped to NaN, for contexts that only take f64.
    pub fn eval_or_nan(&self, x: f64) -> f64 {
        self.eval(x).unwrap_or(f64::NAN)
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

/// Fully parenthesized; parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::X => write!(f, "x"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Bin(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn error(&self, expected: &str) -> Error {
        Error::Syntax { pos: self.pos, expected: expected.into() }
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error("shallower nesting"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr> {
        self.enter()?;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Some(b'+') => BinOp::Add,
                Some(b'-') => BinOp::Sub,
                _ => break,
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.term()?));
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Some(b'*') => BinOp::Mul,
                Some(b'/') => BinOp::Div,
                _ => break,
            };
            self.pos += 1;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            self.enter()?;
            let e = Expr::Neg(Box::new(self.unary()?));
            self.depth -= 1;
            return Ok(e);
        }
        let base = self.primary()?;
        if self.eat(b'^') {
            self.enter()?;
            let e = Expr::Bin(BinOp::Pow, Box::new(base), Box::new(self.unary()?));
            self.depth -= 1;
            return Ok(e);
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.word(),
            _ => Err(self.error("number, 'x', constant, function or '('")),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            let s = p.pos;
            while p.src.get(p.pos).is_some_and(u8::is_ascii_digit) {
                p.pos += 1;
            }
            p.pos - s
        };
        let mut n = digits(self);
        if self.src.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            n += digits(self);
        }
        if n == 0 {
            self.pos = start;
            return Err(self.error("digits"));
        }
        if matches!(self.src.get(self.pos), Some(b'e' | b'E')) {
            let save = self.pos;
            self.pos += 1;
            if matches!(self.src.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if digits(self) == 0 {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(Expr::Num(v)),
            _ => {
                self.pos = start;
                Err(self.error("finite number"))
            }
        }
    }

    fn word(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphanumeric) {
            self.pos += 1;
        }
        let w = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        match w {
            "x" => return Ok(Expr::X),
            "pi" => return Ok(Expr::Num(std::f64::consts::PI)),
            "e" => return Ok(Expr::Num(std::f64::consts::E)),
            _ => {}
        }
        let Some(&(_, f)) = Func::ALL.iter().find(|p| p.0 == w) else {
            self.pos = start;
            return Err(self.error("'x', pi, e or a function name"));
        };
        if !self.eat(b'(') {
            return Err(self.error("'('"));
        }
        let arg = self.expr()?;
        if !self.eat(b')') {
            return Err(self.error("')'"));
        }
        Ok(Expr::Call(f, Box::new(arg)))
    }
}
