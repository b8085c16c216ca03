//! Corrected endpoint quadrature identities.
//!
//! Two exact representations of `∫ₐᵇ f` are evaluated here, each as a
//! derivative-corrected rule plus an integral remainder:
//!
//! * the two-endpoint rule `S_n(x)` built from `f^(k)(a)` and `f^(k)(b)`,
//!   `k < n`, with remainder `(1/n!) ∫ₐᵇ (x - t)^n f^(n)(t) dt`;
//! * the corrected trapezoid rule with correction terms in `f^(k)(a)`,
//!   `2 <= k < n`, and remainder
//!   `((b-a)^n / 2n!) ∫₀¹ t^(n-1) (n - 2t) f^(n)(ta + (1-t)b) dt`.
//!
//! Jet coefficients `c_k = f^(k)/k!` are used throughout, so the factorial
//! weights reduce to `1/(k+1)`.

use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{jet_eval, MAX_ORDER};
use crate::quad::integrate_default;

/// Interval `[a, b]`, evaluation point `x` and derivative order `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub a: f64,
    pub b: f64,
    pub x: f64,
    pub n: usize,
}

impl ProblemSpec {
    pub fn new(a: f64, b: f64, x: f64, n: usize) -> Result<Self> {
        let spec = ProblemSpec { a, b, x, n };
        spec.validate()?;
        Ok(spec)
    }

    /// `x` at the midpoint of `[a, b]`.
    pub fn midpoint(a: f64, b: f64, n: usize) -> Result<Self> {
        Self::new(a, b, 0.5 * (a + b), n)
    }

    pub fn with_x(self, x: f64) -> Result<Self> {
        Self::new(self.a, self.b, x, self.n)
    }

    pub fn validate(&self) -> Result<()> {
        validate_interval(self.a, self.b, self.n)?;
        if !(self.a <= self.x && self.x <= self.b) {
            return Err(Error::InvalidInput(format!(
                "x = {} lies outside [{}, {}]",
                self.x, self.a, self.b
            )));
        }
        Ok(())
    }
}

pub(crate) fn validate_interval(a: f64, b: f64, n: usize) -> Result<()> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidInput(format!(
            "interval [{a}, {b}] must be finite with a < b"
        )));
    }
    if n < 1 {
        return Err(Error::InvalidInput("derivative order n must be >= 1".into()));
    }
    if n > MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: n,
            max: MAX_ORDER,
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdentityKind {
    /// Two-endpoint rule `S_n(x)` plus remainder.
    EndpointRule,
    /// Corrected trapezoid rule plus remainder.
    Trapezoid,
}

impl IdentityKind {
    pub fn label(self) -> &'static str {
        match self {
            IdentityKind::EndpointRule => "L11",
            IdentityKind::Trapezoid => "L12",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityReport {
    pub kind: IdentityKind,
    pub a: f64,
    pub b: f64,
    /// Only meaningful for the endpoint rule.
    pub x: Option<f64>,
    pub n: usize,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs|`
    pub residual: f64,
    /// `max(|lhs|, |rhs|, 1)`
    pub scale: f64,
    pub tol: f64,
    pub pass: bool,
}

impl IdentityReport {
    #[allow(clippy::too_many_arguments)]
    fn new(kind: IdentityKind, a: f64, b: f64, x: Option<f64>, n: usize, lhs: f64, rhs: f64, tol: f64) -> Self {
        let residual = (lhs - rhs).abs();
        let scale = lhs.abs().max(rhs.abs()).max(1.0);
        IdentityReport {
            kind,
            a,
            b,
            x,
            n,
            lhs,
            rhs,
            residual,
            scale,
            tol,
            pass: residual <= tol * scale,
        }
    }
}

/// Reference value of `∫ₐᵇ f`.
pub fn integral(f: &Expr, a: f64, b: f64) -> Result<f64> {
    Ok(integrate_default(|t| f.eval(t), a, b)?.value)
}

/// `f^(n)(t) / n!`
fn scaled_derivative(f: &Expr, t: f64, n: usize) -> Result<f64> {
    Ok(jet_eval(f, t, n)?.coeffs()[n])
}

/// The two-endpoint rule
/// `S_n(x) = Σ_{k<n} [(x-a)^(k+1) f^(k)(a) + (-1)^k (b-x)^(k+1) f^(k)(b)] / (k+1)!`.
pub fn lemma1_sum(f: &Expr, spec: &ProblemSpec) -> Result<f64> {
    spec.validate()?;
    let ProblemSpec { a, b, x, n } = *spec;
    let at_a = jet_eval(f, a, n - 1)?;
    let at_b = jet_eval(f, b, n - 1)?;
    let left = x - a;
    let right = b - x;
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let e = (k + 1) as i32;
        let w = 1.0 / (k + 1) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        acc.add(w * left.powi(e) * at_a.coeffs()[k]);
        acc.add(sign * w * right.powi(e) * at_b.coeffs()[k]);
    }
    Ok(acc.value())
}

/// `(1/n!) ∫ₐᵇ (x - t)^n f^(n)(t) dt`, integrated separately on `[a, x]`
/// and `[x, b]` because the kernel is not smooth at `x`. The kernel keeps its
/// sign.
pub fn lemma1_remainder(f: &Expr, spec: &ProblemSpec) -> Result<f64> {
    spec.validate()?;
    let ProblemSpec { a, b, x, n } = *spec;
    let integrand = |t: f64| Ok((x - t).powi(n as i32) * scaled_derivative(f, t, n)?);
    let mut acc = CompensatedSum::new();
    if x > a {
        acc.add(integrate_default(integrand, a, x)?.value);
    }
    if b > x {
        acc.add(integrate_default(integrand, x, b)?.value);
    }
    Ok(acc.value())
}

/// Compare `∫ₐᵇ f` against `S_n(x)` plus its remainder.
pub fn check_lemma1(f: &Expr, spec: &ProblemSpec, tol: f64) -> Result<IdentityReport> {
    spec.validate()?;
    let lhs = integral(f, spec.a, spec.b)?;
    let rhs = lemma1_sum(f, spec)? + lemma1_remainder(f, spec)?;
    Ok(IdentityReport::new(
        IdentityKind::EndpointRule,
        spec.a,
        spec.b,
        Some(spec.x),
        spec.n,
        lhs,
        rhs,
        tol,
    ))
}

/// Corrected trapezoid error
/// `(f(a)+f(b))/2 - (1/(b-a))∫ₐᵇ f - Σ_{k=2}^{n-1} (k-1)(b-a)^k f^(k)(a) / (2(k+1)!)`.
///
/// The correction sum is empty for `n <= 2`.
pub fn lemma2_lhs(f: &Expr, a: f64, b: f64, n: usize) -> Result<f64> {
    validate_interval(a, b, n)?;
    let h = b - a;
    let at_a = jet_eval(f, a, n.saturating_sub(1))?;
    let fb = f.eval(b)?;
    let mut acc = CompensatedSum::new();
    acc.add(0.5 * at_a.coeffs()[0]);
    acc.add(0.5 * fb);
    acc.add(-integral(f, a, b)? / h);
    for k in 2..n {
        let w = (k - 1) as f64 / (2.0 * (k + 1) as f64);
        acc.add(-w * h.powi(k as i32) * at_a.coeffs()[k]);
    }
    Ok(acc.value())
}

/// `((b-a)^n / 2n!) ∫₀¹ t^(n-1) (n - 2t) f^(n)(ta + (1-t)b) dt`.
///
/// Note the direction of the substitution: `t = 1` maps to `a`.
pub fn lemma2_rhs(f: &Expr, a: f64, b: f64, n: usize) -> Result<f64> {
    validate_interval(a, b, n)?;
    let nf = n as f64;
    let integral = integrate_default(
        |s: f64| {
            let kernel = s.powi(n as i32 - 1) * (nf - 2.0 * s);
            Ok(kernel * scaled_derivative(f, s * a + (1.0 - s) * b, n)?)
        },
        0.0,
        1.0,
    )?;
    Ok(0.5 * (b - a).powi(n as i32) * integral.value)
}

/// Compare both sides of the corrected trapezoid identity.
pub fn check_lemma2(f: &Expr, a: f64, b: f64, n: usize, tol: f64) -> Result<IdentityReport> {
    let lhs = lemma2_lhs(f, a, b, n)?;
    let rhs = lemma2_rhs(f, a, b, n)?;
    Ok(IdentityReport::new(
        IdentityKind::Trapezoid,
        a,
        b,
        None,
        n,
        lhs,
        rhs,
        tol,
    ))
}
