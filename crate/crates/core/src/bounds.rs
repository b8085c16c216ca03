//! A-priori error bounds for the two corrected quadrature rules.
//!
//! Each bound depends on `f` only through `|f^(n)|` at `a`, `b` and (for the
//! endpoint-rule bounds that localise the maximum) at `x`. The closed forms
//! are exposed as pure functions of those magnitudes in [`formula`], so the
//! parameter search can re-evaluate them without touching the expression.
//!
//! | id  | rule        | inequality used                                 |
//! |-----|-------------|-------------------------------------------------|
//! | T21 | endpoint    | modulus + quasi-convexity on `[a,x]`, `[x,b]`   |
//! | C11 | endpoint    | T21 at the midpoint                             |
//! | T22 | endpoint    | Hölder, `|f^(n)|^q` averaged over `[a,b]`       |
//! | T23 | endpoint    | weighted Hölder on `[a,x]` and `[x,b]`          |
//! | T31 | trapezoid   | power mean, `q >= 1`                            |
//! | C31 | trapezoid   | T31 at `q = 1`                                  |
//! | T32 | trapezoid   | Hölder, `q > 1`                                 |

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::identity::{lemma1_remainder, lemma2_rhs, validate_interval, ProblemSpec};
use crate::jet::jet_eval;
use crate::quasi::{derivative_samples, hypothesis_from_samples, DEFAULT_GRID};

/// Tolerance on `1/p + 1/q = 1`.
pub const CONJUGACY_TOL: f64 = 1e-12;
/// Default tolerance of the dominance comparison in [`evaluate_all`].
pub const DEFAULT_HOLDS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TheoremId {
    T21,
    C11,
    T22,
    T23,
    T31,
    C31,
    T32,
}

impl TheoremId {
    pub const ALL: [TheoremId; 7] = [
        TheoremId::T21,
        TheoremId::C11,
        TheoremId::T22,
        TheoremId::T23,
        TheoremId::T31,
        TheoremId::C31,
        TheoremId::T32,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T21 => "T21",
            TheoremId::C11 => "C11",
            TheoremId::T22 => "T22",
            TheoremId::T23 => "T23",
            TheoremId::T31 => "T31",
            TheoremId::C31 => "C31",
            TheoremId::T32 => "T32",
        }
    }

    /// Bounds on the corrected trapezoid rule need `n >= 2`.
    pub fn is_trapezoid(self) -> bool {
        matches!(self, TheoremId::T31 | TheoremId::C31 | TheoremId::T32)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|id| id.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem id `{s}`")))
    }
}

/// Conjugate exponents `1/p + 1/q = 1`, both `> 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolderPair {
    pub p: f64,
    pub q: f64,
}

impl HolderPair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidHolder {
                p,
                q,
                reason: "p must be finite and > 1",
            });
        }
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::InvalidHolder {
                p,
                q,
                reason: "q must be finite and > 1",
            });
        }
        if (1.0 / p + 1.0 / q - 1.0).abs() > CONJUGACY_TOL {
            return Err(Error::InvalidHolder {
                p,
                q,
                reason: "1/p + 1/q must equal 1",
            });
        }
        Ok(HolderPair { p, q })
    }

    /// `q = p / (p - 1)`.
    pub fn from_p(p: f64) -> Result<Self> {
        Self::new(p, p / (p - 1.0))
    }

    pub fn from_q(q: f64) -> Result<Self> {
        Self::new(q / (q - 1.0), q)
    }

    /// The pairs swept by default: (2,2), (1.5,3), (3,1.5), (4,4/3).
    pub fn sweep_set() -> Vec<HolderPair> {
        [(2.0, 2.0), (1.5, 3.0), (3.0, 1.5), (4.0, 4.0 / 3.0)]
            .into_iter()
            .map(|(p, q)| HolderPair::new(p, q).expect("conjugate"))
            .collect()
    }
}

impl Default for HolderPair {
    fn default() -> Self {
        HolderPair { p: 2.0, q: 2.0 }
    }
}

/// `base^e` for `base >= 0` with `0^0 = 1` and `0^e = 0` for `e > 0`.
pub(crate) fn pow_nonneg(base: f64, e: f64) -> f64 {
    if base == 0.0 {
        if e == 0.0 {
            1.0
        } else if e > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        base.powf(e)
    }
}

/// `max(A^q, B^q)^(1/q)`, computed literally.
fn max_pow_root(a: f64, b: f64, q: f64) -> f64 {
    pow_nonneg(pow_nonneg(a, q).max(pow_nonneg(b, q)), 1.0 / q)
}

fn factorial(k: usize) -> f64 {
    crate::jet::factorial(k)
}

fn require_trapezoid_order(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidInput(format!(
            "trapezoid-rule bounds need n >= 2 (got n = {n})"
        )));
    }
    Ok(())
}

/// Closed forms in terms of derivative magnitudes `|f^(n)|`.
pub mod formula {
    use super::*;

    pub fn t21(spec: &ProblemSpec, d_a: f64, d_x: f64, d_b: f64) -> f64 {
        let n = spec.n;
        let e = (n + 1) as i32;
        let left = d_a.max(d_x) * (spec.x - spec.a).powi(e) / (n + 1) as f64;
        let right = d_x.max(d_b) * (spec.b - spec.x).powi(e) / (n + 1) as f64;
        (left + right) / factorial(n)
    }

    pub fn c11(a: f64, b: f64, n: usize, d_a: f64, d_m: f64, d_b: f64) -> f64 {
        let scale = (b - a).powi(n as i32 + 1) / (2f64.powi(n as i32 + 1) * factorial(n + 1));
        scale * (d_a.max(d_m) + d_m.max(d_b))
    }

    pub fn t22(spec: &ProblemSpec, hp: HolderPair, d_a: f64, d_b: f64) -> f64 {
        let HolderPair { p, q } = hp;
        let np1 = spec.n as f64 * p + 1.0;
        let kernel = (pow_nonneg(spec.x - spec.a, np1) + pow_nonneg(spec.b - spec.x, np1)) / np1;
        pow_nonneg(spec.b - spec.a, 1.0 / q) / factorial(spec.n)
            * pow_nonneg(kernel, 1.0 / p)
            * max_pow_root(d_a, d_b, q)
    }

    /// Fails when `nq - p + q - 1 <= 0`: the kernel integral diverges.
    pub fn t23(spec: &ProblemSpec, hp: HolderPair, d_a: f64, d_x: f64, d_b: f64) -> Result<f64> {
        let HolderPair { p, q } = hp;
        let n = spec.n as f64;
        let denom = n * q - p + q - 1.0;
        if !(denom > 0.0) {
            return Err(Error::KernelDivergent { n: spec.n, p, q });
        }
        let exponent = (n * q + q - p - 1.0) / (q - 1.0);
        let side = |len: f64, m: f64| {
            pow_nonneg(pow_nonneg(len, exponent), 1.0 / p)
                * pow_nonneg(pow_nonneg(len, p + 1.0) / (p + 1.0), 1.0 / q)
                * m
        };
        let left = side(spec.x - spec.a, max_pow_root(d_a, d_x, q));
        let right = side(spec.b - spec.x, max_pow_root(d_x, d_b, q));
        Ok(pow_nonneg((q - 1.0) / denom, 1.0 / p) / factorial(spec.n) * (left + right))
    }

    pub fn t31(a: f64, b: f64, n: usize, q: f64, d_a: f64, d_b: f64) -> Result<f64> {
        require_trapezoid_order(n)?;
        if !(q >= 1.0 && q.is_finite()) {
            return Err(Error::InvalidHolder {
                p: f64::NAN,
                q,
                reason: "power-mean exponent q must be >= 1",
            });
        }
        let scale = (b - a).powi(n as i32) * (n as f64 - 1.0) / (2.0 * factorial(n + 1));
        Ok(scale * max_pow_root(d_a, d_b, q))
    }

    pub fn c31(a: f64, b: f64, n: usize, d_a: f64, d_b: f64) -> Result<f64> {
        require_trapezoid_order(n)?;
        Ok((b - a).powi(n as i32) * (n as f64 - 1.0) / (2.0 * factorial(n + 1)) * d_a.max(d_b))
    }

    pub fn t32(a: f64, b: f64, n: usize, hp: HolderPair, d_a: f64, d_b: f64) -> Result<f64> {
        require_trapezoid_order(n)?;
        let HolderPair { p, q } = hp;
        let nf = n as f64;
        let lead = (b - a).powi(n as i32) / (2f64.powf(1.0 + 1.0 / q) * factorial(n));
        let weight = pow_nonneg(1.0 / (nf * p - p + 1.0), 1.0 / p);
        let moment = pow_nonneg(
            (pow_nonneg(nf, q + 1.0) - pow_nonneg(nf - 2.0, q + 1.0)) / (q + 1.0),
            1.0 / q,
        );
        Ok(lead * weight * moment * max_pow_root(d_a, d_b, q))
    }

    /// `∫₀¹ (n - 2t)^q dt = (n^(q+1) - (n-2)^(q+1)) / (2(q+1))`, `n >= 2`.
    pub fn t32_moment(n: usize, q: f64) -> f64 {
        let nf = n as f64;
        (pow_nonneg(nf, q + 1.0) - pow_nonneg(nf - 2.0, q + 1.0)) / (2.0 * (q + 1.0))
    }
}

/// `|f^(n)(t)|`.
pub fn derivative_magnitude(f: &Expr, t: f64, n: usize) -> Result<f64> {
    Ok(jet_eval(f, t, n)?.derivative(n).abs())
}

/// `|∫ₐᵇ f - S_n(x)|`.
///
/// Evaluated through the remainder integral. Subtracting `S_n(x)` from the
/// quadrature value loses every digit the two share, which for small errors
/// is most of them; the remainder has no such cancellation. The identity
/// suite checks that the two forms agree.
pub fn measured_e1(f: &Expr, spec: &ProblemSpec) -> Result<f64> {
    Ok(lemma1_remainder(f, spec)?.abs())
}

/// Absolute corrected trapezoid error, through its remainder integral as in
/// [`measured_e1`].
pub fn measured_e2(f: &Expr, a: f64, b: f64, n: usize) -> Result<f64> {
    Ok(lemma2_rhs(f, a, b, n)?.abs())
}

pub fn bound_t21(f: &Expr, spec: &ProblemSpec) -> Result<f64> {
    spec.validate()?;
    let n = spec.n;
    Ok(formula::t21(
        spec,
        derivative_magnitude(f, spec.a, n)?,
        derivative_magnitude(f, spec.x, n)?,
        derivative_magnitude(f, spec.b, n)?,
    ))
}

/// The endpoint-rule bound at `x = (a+b)/2`; the middle derivative is taken
/// at the midpoint.
pub fn bound_c11(f: &Expr, a: f64, b: f64, n: usize) -> Result<f64> {
    validate_interval(a, b, n)?;
    let m = 0.5 * (a + b);
    Ok(formula::c11(
        a,
        b,
        n,
        derivative_magnitude(f, a, n)?,
        derivative_magnitude(f, m, n)?,
        derivative_magnitude(f, b, n)?,
    ))
}

pub fn bound_t22(f: &Expr, spec: &ProblemSpec, hp: HolderPair) -> Result<f64> {
    spec.validate()?;
    let hp = HolderPair::new(hp.p, hp.q)?;
    Ok(formula::t22(
        spec,
        hp,
        derivative_magnitude(f, spec.a, spec.n)?,
        derivative_magnitude(f, spec.b, spec.n)?,
    ))
}

pub fn bound_t23(f: &Expr, spec: &ProblemSpec, hp: HolderPair) -> Result<f64> {
    spec.validate()?;
    let hp = HolderPair::new(hp.p, hp.q)?;
    let n = spec.n;
    formula::t23(
        spec,
        hp,
        derivative_magnitude(f, spec.a, n)?,
        derivative_magnitude(f, spec.x, n)?,
        derivative_magnitude(f, spec.b, n)?,
    )
}

/// Power-mean bound for `q >= 1`. Its value does not depend on `q`.
pub fn bound_t31(f: &Expr, a: f64, b: f64, n: usize, q: f64) -> Result<f64> {
    validate_interval(a, b, n)?;
    require_trapezoid_order(n)?;
    formula::t31(
        a,
        b,
        n,
        q,
        derivative_magnitude(f, a, n)?,
        derivative_magnitude(f, b, n)?,
    )
}

pub fn bound_c31(f: &Expr, a: f64, b: f64, n: usize) -> Result<f64> {
    validate_interval(a, b, n)?;
    require_trapezoid_order(n)?;
    formula::c31(a, b, n, derivative_magnitude(f, a, n)?, derivative_magnitude(f, b, n)?)
}

pub fn bound_t32(f: &Expr, a: f64, b: f64, n: usize, hp: HolderPair) -> Result<f64> {
    validate_interval(a, b, n)?;
    require_trapezoid_order(n)?;
    let hp = HolderPair::new(hp.p, hp.q)?;
    formula::t32(
        a,
        b,
        n,
        hp,
        derivative_magnitude(f, a, n)?,
        derivative_magnitude(f, b, n)?,
    )
}

/// `bound / measured`, with `∞` for a positive bound on a zero error and `1`
/// when both vanish.
pub fn slack_ratio(bound: f64, measured: f64) -> f64 {
    if measured == 0.0 {
        if bound > 0.0 {
            f64::INFINITY
        } else {
            1.0
        }
    } else {
        bound / measured
    }
}

/// `measured <= bound + tol * max(1, bound)`.
pub fn dominates(bound: f64, measured: f64, tol: f64) -> bool {
    measured <= bound + tol * bound.max(1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub theorem_id: TheoremId,
    pub a: f64,
    pub b: f64,
    /// Evaluation point of the endpoint rule; `None` for trapezoid bounds.
    pub x: Option<f64>,
    pub n: usize,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub bound: f64,
    pub measured_error: f64,
    pub slack_ratio: f64,
    /// Grid verdict on the quasi-convexity hypothesis the bound needs.
    pub hypothesis_ok: bool,
    pub holds: bool,
}

/// A bound that was not evaluated, with the reason.
#[derive(Debug, Clone, PartialEq)]
pub struct Skipped {
    pub theorem_id: TheoremId,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundSuite {
    pub reports: Vec<BoundReport>,
    pub skipped: Vec<Skipped>,
}

impl BoundSuite {
    pub fn get(&self, id: TheoremId) -> Option<&BoundReport> {
        self.reports.iter().find(|r| r.theorem_id == id)
    }
}

/// Options for [`evaluate_all`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalOptions {
    pub holds_tol: f64,
    pub grid: usize,
}

impl Default for EvalOptions {
    fn default() -> Self {
        EvalOptions {
            holds_tol: DEFAULT_HOLDS_TOL,
            grid: DEFAULT_GRID,
        }
    }
}

/// Evaluate every applicable bound for `f` on `spec` with Hölder pair `hp`.
///
/// Trapezoid-rule bounds are skipped for `n < 2`, and T23 is skipped when its
/// kernel diverges. A failed hypothesis is recorded in the report but does not
/// prevent evaluation.
pub fn evaluate_all(f: &Expr, spec: &ProblemSpec, hp: HolderPair, opts: EvalOptions) -> Result<BoundSuite> {
    spec.validate()?;
    let hp = HolderPair::new(hp.p, hp.q)?;
    let ProblemSpec { a, b, x, n } = *spec;
    let mid = 0.5 * (a + b);

    let d_a = derivative_magnitude(f, a, n)?;
    let d_b = derivative_magnitude(f, b, n)?;
    let d_x = derivative_magnitude(f, x, n)?;
    let d_m = derivative_magnitude(f, mid, n)?;

    let (ts, mags) = derivative_samples(f, a, b, n, opts.grid)?;
    let mut verdicts: HashMap<u64, bool> = HashMap::new();
    let mut hypothesis = |power: f64| {
        *verdicts
            .entry(power.to_bits())
            .or_insert_with(|| hypothesis_from_samples(&ts, &mags, power).is_qc)
    };

    let e1_x = measured_e1(f, spec)?;
    let e1_mid = if x == mid {
        e1_x
    } else {
        measured_e1(f, &spec.with_x(mid)?)?
    };

    let mut suite = BoundSuite::default();
    let mut push =
        |id: TheoremId, x: Option<f64>, p: Option<f64>, q: Option<f64>, bound: f64, measured: f64, ok: bool| {
            suite.reports.push(BoundReport {
                theorem_id: id,
                a,
                b,
                x,
                n,
                p,
                q,
                bound,
                measured_error: measured,
                slack_ratio: slack_ratio(bound, measured),
                hypothesis_ok: ok,
                holds: dominates(bound, measured, opts.holds_tol),
            });
        };

    let qc1 = hypothesis(1.0);
    let qcq = hypothesis(hp.q);

    push(
        TheoremId::T21,
        Some(x),
        None,
        None,
        formula::t21(spec, d_a, d_x, d_b),
        e1_x,
        qc1,
    );
    push(
        TheoremId::C11,
        Some(mid),
        None,
        None,
        formula::c11(a, b, n, d_a, d_m, d_b),
        e1_mid,
        qc1,
    );
    push(
        TheoremId::T22,
        Some(x),
        Some(hp.p),
        Some(hp.q),
        formula::t22(spec, hp, d_a, d_b),
        e1_x,
        qcq,
    );
    let mut skipped = Vec::new();
    match formula::t23(spec, hp, d_a, d_x, d_b) {
        Ok(bound) => push(TheoremId::T23, Some(x), Some(hp.p), Some(hp.q), bound, e1_x, qcq),
        Err(e @ Error::KernelDivergent { .. }) => skipped.push(Skipped {
            theorem_id: TheoremId::T23,
            reason: e.to_string(),
        }),
        Err(e) => return Err(e),
    }

    if n >= 2 {
        let e2 = measured_e2(f, a, b, n)?;
        push(
            TheoremId::T31,
            None,
            None,
            Some(hp.q),
            formula::t31(a, b, n, hp.q, d_a, d_b)?,
            e2,
            qcq,
        );
        push(
            TheoremId::C31,
            None,
            None,
            Some(1.0),
            formula::c31(a, b, n, d_a, d_b)?,
            e2,
            qc1,
        );
        push(
            TheoremId::T32,
            None,
            Some(hp.p),
            Some(hp.q),
            formula::t32(a, b, n, hp, d_a, d_b)?,
            e2,
            qcq,
        );
    } else {
        for id in [TheoremId::T31, TheoremId::C31, TheoremId::T32] {
            skipped.push(Skipped {
                theorem_id: id,
                reason: format!("trapezoid-rule bounds need n >= 2 (n = {n})"),
            });
        }
    }
    suite.skipped = skipped;
    Ok(suite)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use std::f64::consts::E;

    fn exp() -> Expr {
        parse("exp(t)").unwrap()
    }

    fn spec(x: f64, n: usize) -> ProblemSpec {
        ProblemSpec::new(0.0, 1.0, x, n).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
    }

    #[test]
    fn holder_pair_validation() {
        assert!(HolderPair::new(2.0, 2.0).is_ok());
        assert!(HolderPair::new(1.0, f64::INFINITY).is_err());
        assert!(HolderPair::new(2.0, 3.0).is_err());
        assert!(HolderPair::new(0.5, -1.0).is_err());
        let hp = HolderPair::from_p(4.0).unwrap();
        assert!((hp.q - 4.0 / 3.0).abs() < 1e-15);
        assert!((HolderPair::from_q(3.0).unwrap().p - 1.5).abs() < 1e-15);
        assert_eq!(HolderPair::sweep_set().len(), 4);
    }

    #[test]
    fn theorem_id_round_trip() {
        for id in TheoremId::ALL {
            assert_eq!(id.as_str().parse::<TheoremId>().unwrap(), id);
        }
        assert!("T99".parse::<TheoremId>().is_err());
    }

    #[test]
    fn endpoint_bounds_for_exp() {
        // (1/1!) [e^0.5 * 0.125 + e * 0.125]
        let t21 = bound_t21(&exp(), &spec(0.5, 1)).unwrap();
        assert!(rel(t21, 0.125 * (0.5f64.exp() + E)) < 1e-15);
        let t21_edge = bound_t21(&exp(), &spec(0.0, 1)).unwrap();
        assert!(rel(t21_edge, E / 2.0) < 1e-15);
        let hp = HolderPair::default();
        let t22 = bound_t22(&exp(), &spec(0.5, 1), hp).unwrap();
        assert!(rel(t22, (2.0 * 0.125f64 / 3.0).sqrt() * E) < 1e-15);
        let t23 = bound_t23(&exp(), &spec(0.5, 1), hp).unwrap();
        assert!(rel(t23, 0.5f64.sqrt() * (0.125f64 / 3.0).sqrt() * (0.5f64.exp() + E)) < 1e-15);
    }

    #[test]
    fn t22_at_left_endpoint() {
        let hp = HolderPair::new(3.0, 1.5).unwrap();
        let got = bound_t22(&exp(), &spec(0.0, 2), hp).unwrap();
        let np1 = 2.0 * 3.0 + 1.0;
        let want = 0.5 * (1.0f64 / np1).powf(1.0 / 3.0) * E;
        assert!(rel(got, want) < 1e-14);
    }

    #[test]
    fn midpoint_corollary() {
        let cubic = parse("t^3").unwrap();
        let got = bound_c11(&cubic, 0.0, 1.0, 2).unwrap();
        assert!(rel(got, 0.1875) < 1e-15);
        let t21 = bound_t21(&exp(), &spec(0.5, 1)).unwrap();
        let c11 = bound_c11(&exp(), 0.0, 1.0, 1).unwrap();
        assert!(rel(c11, t21) <= 1e-15);
    }

    #[test]
    fn trapezoid_bounds_for_exp() {
        let t31 = bound_t31(&exp(), 0.0, 1.0, 2, 1.0).unwrap();
        assert!(rel(t31, E / 12.0) < 1e-15);
        assert_eq!(t31, bound_c31(&exp(), 0.0, 1.0, 2).unwrap());
        let t32 = bound_t32(&exp(), 0.0, 1.0, 2, HolderPair::default()).unwrap();
        assert!(rel(t32, E / 6.0) < 1e-14);
        assert!(bound_t31(&exp(), 0.0, 1.0, 1, 1.0).is_err());
        assert!(bound_t31(&exp(), 0.0, 1.0, 2, 0.5).is_err());
        assert!(bound_t32(&exp(), 0.0, 1.0, 1, HolderPair::default()).is_err());
    }

    #[test]
    fn t23_validity_gate() {
        let bad = HolderPair::new(3.0, 1.5).unwrap();
        assert!(matches!(
            bound_t23(&exp(), &spec(0.5, 1), bad),
            Err(Error::KernelDivergent { n: 1, .. })
        ));
        // n*q - p + q - 1 = 0 is also rejected
        let edge = HolderPair::new(2.0, 2.0).unwrap();
        assert!(formula::t23(
            &ProblemSpec {
                a: 0.0,
                b: 1.0,
                x: 0.5,
                n: 0
            },
            edge,
            1.0,
            1.0,
            1.0
        )
        .is_err());
        assert!(bound_t23(&exp(), &spec(0.5, 2), bad).is_ok());
    }

    #[test]
    fn constants_give_zero_bounds() {
        let c = parse("5").unwrap();
        let hp = HolderPair::default();
        assert_eq!(bound_t21(&c, &spec(0.3, 1)).unwrap(), 0.0);
        assert_eq!(bound_c11(&c, 0.0, 1.0, 1).unwrap(), 0.0);
        assert_eq!(bound_t22(&c, &spec(0.3, 1), hp).unwrap(), 0.0);
        assert_eq!(bound_t23(&c, &spec(0.3, 1), hp).unwrap(), 0.0);
        assert_eq!(bound_t31(&c, 0.0, 1.0, 2, 2.0).unwrap(), 0.0);
        assert_eq!(bound_t32(&c, 0.0, 1.0, 2, hp).unwrap(), 0.0);
    }

    #[test]
    fn slack_conventions() {
        assert_eq!(slack_ratio(1.0, 0.0), f64::INFINITY);
        assert_eq!(slack_ratio(0.0, 0.0), 1.0);
        assert_eq!(slack_ratio(2.0, 0.5), 4.0);
        assert!(dominates(1.0, 1.0 + 5e-10, 1e-9));
        assert!(!dominates(1.0, 1.0 + 5e-9, 1e-9));
    }

    #[test]
    fn pow_nonneg_edges() {
        assert_eq!(pow_nonneg(0.0, 0.0), 1.0);
        assert_eq!(pow_nonneg(0.0, 2.5), 0.0);
        assert_eq!(pow_nonneg(0.0, -1.0), f64::INFINITY);
        assert_eq!(pow_nonneg(4.0, 0.5), 2.0);
    }

    #[test]
    fn evaluate_all_exp() {
        let suite = evaluate_all(&exp(), &spec(0.5, 1), HolderPair::default(), EvalOptions::default()).unwrap();
        let ids: Vec<TheoremId> = suite.reports.iter().map(|r| r.theorem_id).collect();
        assert_eq!(
            ids,
            vec![TheoremId::T21, TheoremId::C11, TheoremId::T22, TheoremId::T23]
        );
        assert_eq!(suite.skipped.len(), 3);
        for r in &suite.reports {
            assert!(r.hypothesis_ok && r.holds, "{r:?}");
            assert!(rel(r.measured_error, 1.5 - 0.5 * E) < 1e-12);
        }

        let suite = evaluate_all(&exp(), &spec(0.5, 2), HolderPair::default(), EvalOptions::default()).unwrap();
        assert_eq!(suite.reports.len(), 7);
        let t31 = suite.get(TheoremId::T31).unwrap();
        assert!(rel(t31.measured_error, (3.0 - E) / 2.0) < 1e-12);
        assert!(t31.slack_ratio > 1.0);
    }

    #[test]
    fn evaluate_all_skips_divergent_t23() {
        let hp = HolderPair::new(3.0, 1.5).unwrap();
        let suite = evaluate_all(&exp(), &spec(0.5, 1), hp, EvalOptions::default()).unwrap();
        assert!(suite.get(TheoremId::T23).is_none());
        assert!(suite.skipped.iter().any(|s| s.theorem_id == TheoremId::T23));
    }

    #[test]
    fn evaluate_all_constant() {
        let c = parse("5").unwrap();
        let suite = evaluate_all(&c, &spec(0.5, 2), HolderPair::default(), EvalOptions::default()).unwrap();
        for r in &suite.reports {
            assert_eq!(r.bound, 0.0);
            assert_eq!(r.measured_error, 0.0);
            assert_eq!(r.slack_ratio, 1.0);
        }
    }

    #[test]
    fn failed_hypothesis_is_reported_not_fatal() {
        let sin = parse("sin(t)").unwrap();
        let s = ProblemSpec::midpoint(0.0, std::f64::consts::PI, 2).unwrap();
        let suite = evaluate_all(&sin, &s, HolderPair::default(), EvalOptions::default()).unwrap();
        assert!(suite.reports.iter().all(|r| !r.hypothesis_ok));
    }

    #[test]
    fn measured_errors_match_direct_difference() {
        use crate::identity::{integral, lemma1_sum, lemma2_lhs};
        for src in ["exp(t)", "log(1+t)", "t^7 - t", "sin(3*t)"] {
            let f = parse(src).unwrap();
            for n in 1..=5 {
                for x in [0.0, 0.3, 1.0] {
                    let s = spec(x, n);
                    let direct = (integral(&f, 0.0, 1.0).unwrap() - lemma1_sum(&f, &s).unwrap()).abs();
                    assert!(
                        (measured_e1(&f, &s).unwrap() - direct).abs() < 1e-12,
                        "{src} n={n} x={x}"
                    );
                }
                let direct = lemma2_lhs(&f, 0.0, 1.0, n).unwrap().abs();
                assert!(
                    (measured_e2(&f, 0.0, 1.0, n).unwrap() - direct).abs() < 1e-12,
                    "{src} n={n}"
                );
            }
        }
    }
}
