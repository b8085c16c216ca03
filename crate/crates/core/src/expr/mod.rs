//! The integrand language: a small AST over the single variable `t`.
//!
//! Trees are immutable once built and can be shared freely between threads.

mod parser;

use std::fmt;

use crate::error::{Error, Result};

pub use parser::{parse, ParseError, ParseErrorKind};

/// Elementary unary functions understood by the parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }
}

/// Abstract syntax tree of a univariate real function `f(t)`.
///
/// The exponent of [`Expr::Pow`] is always free of `t`; the parser rejects
/// anything else and [`Expr::pow`] checks it for hand-built trees.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn constant(value: f64) -> Expr {
        Expr::Const(value)
    }

    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn pow(base: Expr, exponent: Expr) -> Result<Expr> {
        if exponent.contains_var() {
            return Err(Error::InvalidInput(format!("exponent `{exponent}` depends on t")));
        }
        Ok(Expr::Pow(Box::new(base), Box::new(exponent)))
    }

    /// `t` appears somewhere in the tree.
    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Neg(e) | Expr::Call(_, e) => e.contains_var(),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) | Expr::Pow(l, r) => {
                l.contains_var() || r.contains_var()
            }
        }
    }

    /// Value of a `t`-free subtree.
    pub fn constant_value(&self) -> Result<f64> {
        debug_assert!(!self.contains_var());
        self.eval(0.0)
    }

    /// Evaluate in IEEE double precision.
    pub fn eval(&self, t: f64) -> Result<f64> {
        match self {
            Expr::Const(c) => Ok(*c),
            Expr::Var => Ok(t),
            Expr::Neg(e) => Ok(-e.eval(t)?),
            Expr::Add(l, r) => Ok(l.eval(t)? + r.eval(t)?),
            Expr::Sub(l, r) => Ok(l.eval(t)? - r.eval(t)?),
            Expr::Mul(l, r) => Ok(l.eval(t)? * r.eval(t)?),
            Expr::Div(l, r) => {
                let num = l.eval(t)?;
                let den = r.eval(t)?;
                if den == 0.0 {
                    return Err(self.domain_error(t, "division by zero"));
                }
                Ok(num / den)
            }
            Expr::Pow(base, exponent) => {
                let u = base.eval(t)?;
                let alpha = exponent.constant_value()?;
                match integer_exponent(alpha) {
                    Some(k) if k < 0 && u == 0.0 => Err(self.domain_error(t, "zero raised to a negative power")),
                    Some(k) => Ok(u.powi(k)),
                    None if u <= 0.0 => Err(self.domain_error(t, "fractional power of a non-positive base")),
                    None => Ok(u.powf(alpha)),
                }
            }
            Expr::Call(func, arg) => {
                let u = arg.eval(t)?;
                match func {
                    Func::Exp => Ok(u.exp()),
                    Func::Log if u <= 0.0 => Err(self.domain_error(t, "log of a non-positive value")),
                    Func::Log => Ok(u.ln()),
                    Func::Sin => Ok(u.sin()),
                    Func::Cos => Ok(u.cos()),
                    Func::Sqrt if u < 0.0 => Err(self.domain_error(t, "sqrt of a negative value")),
                    Func::Sqrt => Ok(u.sqrt()),
                }
            }
        }
    }

    pub(crate) fn domain_error(&self, t: f64, reason: &'static str) -> Error {
        Error::Domain {
            node: self.to_string(),
            t,
            reason,
        }
    }
}

/// Exponents that are exact integers of moderate size take the
/// repeated-multiplication path, which is valid for every real base.
pub(crate) fn integer_exponent(alpha: f64) -> Option<i32> {
    if alpha.fract() == 0.0 && alpha.abs() <= 64.0 {
        Some(alpha as i32)
    } else {
        None
    }
}

/// Fully parenthesised form; re-parsing it yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) if *c < 0.0 => write!(f, "(-{:?})", -c),
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var => f.write_str("t"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "({l} * {r})"),
            Expr::Div(l, r) => write!(f, "({l} / {r})"),
            Expr::Pow(l, r) => write!(f, "({l} ^ {r})"),
            Expr::Call(func, e) => write!(f, "{}({e})", func.name()),
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl std::str::FromStr for Expr {
    type Err = ParseError;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        parse(s)
    }
}
