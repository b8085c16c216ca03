//! Truncated Taylor-series arithmetic over [`Expr`] trees.
//!
//! A jet of order `m` at `t0` holds the normalised coefficients
//! `c_k = f^(k)(t0) / k!` for `k = 0..=m`.

use crate::error::{Error, Result};
use crate::expr::{integer_exponent, Expr, Func};

/// Highest derivative order served by [`jet_eval`].
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    base_point: f64,
    coeffs: Vec<f64>,
}

impl Jet {
    /// Jet of the identity map: `[t0, 1, 0, ...]`.
    pub fn variable(t0: f64, order: usize) -> Jet {
        let mut coeffs = vec![0.0; order + 1];
        coeffs[0] = t0;
        if order >= 1 {
            coeffs[1] = 1.0;
        }
        Jet { base_point: t0, coeffs }
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// `f^(k)(t0) = k! * c_k`.
    pub fn derivative(&self, k: usize) -> f64 {
        self.coeffs[k] * factorial(k)
    }
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Taylor jet of `e` at `t0`, truncated at `order`.
pub fn jet_eval(e: &Expr, t0: f64, order: usize) -> Result<Jet> {
    if order > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: order,
            max: MAX_ORDER,
        });
    }
    let coeffs = JetBuilder { t0, order }.build(e)?;
    if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
        return Err(Error::NonFinite {
            context: format!("Taylor jet of `{e}` at t = {t0}"),
            value: bad,
        });
    }
    Ok(Jet { base_point: t0, coeffs })
}

/// `f^(k)(t0)`.
pub fn derivative(e: &Expr, t0: f64, k: usize) -> Result<f64> {
    Ok(jet_eval(e, t0, k)?.derivative(k))
}

struct JetBuilder {
    t0: f64,
    order: usize,
}

impl JetBuilder {
    fn len(&self) -> usize {
        self.order + 1
    }

    fn constant(&self, c: f64) -> Vec<f64> {
        let mut v = vec![0.0; self.len()];
        v[0] = c;
        v
    }

    fn build(&self, e: &Expr) -> Result<Vec<f64>> {
        match e {
            Expr::Const(c) => Ok(self.constant(*c)),
            Expr::Var => Ok(Jet::variable(self.t0, self.order).coeffs),
            Expr::Neg(a) => Ok(self.build(a)?.into_iter().map(|c| -c).collect()),
            Expr::Add(a, b) => {
                let (u, v) = (self.build(a)?, self.build(b)?);
                Ok(u.iter().zip(&v).map(|(x, y)| x + y).collect())
            }
            Expr::Sub(a, b) => {
                let (u, v) = (self.build(a)?, self.build(b)?);
                Ok(u.iter().zip(&v).map(|(x, y)| x - y).collect())
            }
            Expr::Mul(a, b) => Ok(mul(&self.build(a)?, &self.build(b)?)),
            Expr::Div(a, b) => {
                let (u, v) = (self.build(a)?, self.build(b)?);
                if v[0] == 0.0 {
                    return Err(e.domain_error(self.t0, "division by zero"));
                }
                Ok(div(&u, &v))
            }
            Expr::Pow(base, exponent) => {
                let u = self.build(base)?;
                let alpha = exponent.constant_value()?;
                match integer_exponent(alpha) {
                    Some(k) if k < 0 && u[0] == 0.0 => Err(e.domain_error(self.t0, "zero raised to a negative power")),
                    Some(k) => Ok(powi(&u, k)),
                    None if u[0] <= 0.0 => Err(e.domain_error(self.t0, "fractional power of a non-positive base")),
                    None => Ok(powf(&u, alpha)),
                }
            }
            Expr::Call(func, arg) => {
                let u = self.build(arg)?;
                match func {
                    Func::Exp => Ok(exp(&u)),
                    Func::Log if u[0] <= 0.0 => Err(e.domain_error(self.t0, "log of a non-positive value")),
                    Func::Log => Ok(log(&u)),
                    Func::Sin => Ok(sin_cos(&u).0),
                    Func::Cos => Ok(sin_cos(&u).1),
                    Func::Sqrt if u[0] < 0.0 => Err(e.domain_error(self.t0, "sqrt of a negative value")),
                    Func::Sqrt if u[0] == 0.0 && self.order > 0 => {
                        Err(e.domain_error(self.t0, "sqrt is not differentiable at 0"))
                    }
                    Func::Sqrt => Ok(sqrt(&u)),
                }
            }
        }
    }
}

/// Cauchy product, truncated to the operands' length.
pub(crate) fn mul(u: &[f64], v: &[f64]) -> Vec<f64> {
    (0..u.len()).map(|k| (0..=k).map(|j| u[j] * v[k - j]).sum()).collect()
}

fn div(u: &[f64], v: &[f64]) -> Vec<f64> {
    let mut q = vec![0.0; u.len()];
    for k in 0..u.len() {
        let acc: f64 = (1..=k).map(|j| v[j] * q[k - j]).sum();
        q[k] = (u[k] - acc) / v[0];
    }
    q
}

fn powi(u: &[f64], k: i32) -> Vec<f64> {
    let mut result = vec![0.0; u.len()];
    result[0] = 1.0;
    let mut base = u.to_vec();
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base);
        }
    }
    if k < 0 {
        let mut one = vec![0.0; u.len()];
        one[0] = 1.0;
        result = div(&one, &result);
    }
    result
}

/// `u^alpha` for `u0 > 0` from `u h' = alpha u' h`.
fn powf(u: &[f64], alpha: f64) -> Vec<f64> {
    let mut h = vec![0.0; u.len()];
    h[0] = u[0].powf(alpha);
    for k in 1..u.len() {
        let acc: f64 = (1..=k)
            .map(|j| ((alpha + 1.0) * j as f64 - k as f64) * u[j] * h[k - j])
            .sum();
        h[k] = acc / (k as f64 * u[0]);
    }
    h
}

fn sqrt(u: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; u.len()];
    h[0] = u[0].sqrt();
    for k in 1..u.len() {
        let acc: f64 = (1..k).map(|j| h[j] * h[k - j]).sum();
        h[k] = (u[k] - acc) / (2.0 * h[0]);
    }
    h
}

fn exp(u: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; u.len()];
    h[0] = u[0].exp();
    for k in 1..u.len() {
        let acc: f64 = (1..=k).map(|j| j as f64 * u[j] * h[k - j]).sum();
        h[k] = acc / k as f64;
    }
    h
}

fn log(u: &[f64]) -> Vec<f64> {
    let mut h = vec![0.0; u.len()];
    h[0] = u[0].ln();
    for k in 1..u.len() {
        let acc: f64 = (1..k).map(|j| j as f64 * h[j] * u[k - j]).sum();
        h[k] = (k as f64 * u[k] - acc) / (k as f64 * u[0]);
    }
    h
}

fn sin_cos(u: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = u.len();
    let mut s = vec![0.0; n];
    let mut c = vec![0.0; n];
    s[0] = u[0].sin();
    c[0] = u[0].cos();
    for k in 1..n {
        let mut sk = 0.0;
        let mut ck = 0.0;
        for j in 1..=k {
            let w = j as f64 * u[j];
            sk += w * c[k - j];
            ck -= w * s[k - j];
        }
        s[k] = sk / k as f64;
        c[k] = ck / k as f64;
    }
    (s, c)
}
