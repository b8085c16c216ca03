//! Tightest-certificate search over the free parameters of the bounds.
//!
//! Every bound holds for each admissible `x` and Hölder pair, so the best
//! certificate is the minimum over them. The search is a coarse uniform scan
//! followed by golden-section refinement of the best bracket. It does not
//! assume unimodality; a local minimum inside the bracket is acceptable
//! because any probed value is a valid certificate.

use crate::bounds::{derivative_magnitude, formula, measured_e1, measured_e2, slack_ratio, HolderPair, TheoremId};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::identity::{validate_interval, ProblemSpec};
use crate::quasi::hypothesis_check;

pub const X_SCAN_POINTS: usize = 101;
pub const P_SCAN_POINTS: usize = 101;
pub const GOLDEN_ITERATIONS: usize = 40;
pub const P_MIN: f64 = 1.01;
pub const P_MAX: f64 = 64.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightnessResult {
    pub theorem_id: TheoremId,
    pub a: f64,
    pub b: f64,
    pub n: usize,
    /// Evaluation point (searched by [`best_x`], fixed for [`best_p`]).
    pub x: Option<f64>,
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub best_bound: f64,
    pub measured_error: f64,
    pub slack_ratio: f64,
    pub hypothesis_ok: bool,
    /// Number of bound evaluations.
    pub evaluations: usize,
}

/// Running minimum; ties keep the smaller parameter.
#[derive(Debug, Clone, Copy)]
struct Best {
    param: f64,
    value: f64,
}

impl Best {
    fn offer(best: &mut Option<Best>, param: f64, value: f64) {
        let better = match best {
            None => true,
            Some(b) => value < b.value || (value == b.value && param < b.param),
        };
        if better {
            *best = Some(Best { param, value });
        }
    }
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimisation on `[lo, hi]`; every probe is reported to
/// `probe`. Infeasible probes should map to `+∞`.
fn golden_section<F>(mut g: F, mut lo: f64, mut hi: f64, iterations: usize) -> Result<()>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(hi > lo) {
        return Ok(());
    }
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = g(x1)?;
    let mut f2 = g(x2)?;
    for _ in 0..iterations {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = g(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = g(x2)?;
        }
    }
    Ok(())
}

fn resolve_pair(hp: Option<HolderPair>) -> Result<HolderPair> {
    let hp = hp.unwrap_or_default();
    HolderPair::new(hp.p, hp.q)
}

/// Minimise the endpoint-rule bound (T21, T22 or T23) over `x ∈ [a, b]`.
pub fn best_x(
    f: &Expr,
    a: f64,
    b: f64,
    n: usize,
    theorem: TheoremId,
    hp: Option<HolderPair>,
) -> Result<TightnessResult> {
    validate_interval(a, b, n)?;
    let hp = resolve_pair(hp)?;
    let d_a = derivative_magnitude(f, a, n)?;
    let d_b = derivative_magnitude(f, b, n)?;
    let power = match theorem {
        TheoremId::T21 => 1.0,
        TheoremId::T22 | TheoremId::T23 => hp.q,
        other => {
            return Err(Error::InvalidInput(format!(
                "x search applies to T21, T22, T23, not {other}"
            )));
        }
    };
    if theorem == TheoremId::T23 {
        // validity depends on (n, p, q) only
        formula::t23(&ProblemSpec { a, b, x: a, n }, hp, 0.0, 0.0, 0.0)?;
    }

    let mut evaluations = 0;
    let mut bound_at = |x: f64| -> Result<f64> {
        evaluations += 1;
        let spec = ProblemSpec { a, b, x, n };
        match theorem {
            TheoremId::T21 => Ok(formula::t21(&spec, d_a, derivative_magnitude(f, x, n)?, d_b)),
            TheoremId::T22 => Ok(formula::t22(&spec, hp, d_a, d_b)),
            _ => formula::t23(&spec, hp, d_a, derivative_magnitude(f, x, n)?, d_b),
        }
    };

    let step = (b - a) / (X_SCAN_POINTS - 1) as f64;
    let xs: Vec<f64> = (0..X_SCAN_POINTS)
        .map(|i| if i + 1 == X_SCAN_POINTS { b } else { a + step * i as f64 })
        .collect();
    let mut best: Option<Best> = None;
    let mut coarse_idx = 0;
    for (i, &x) in xs.iter().enumerate() {
        let v = bound_at(x)?;
        let before = best.map(|b| b.param);
        Best::offer(&mut best, x, v);
        if best.map(|b| b.param) != before {
            coarse_idx = i;
        }
    }
    let lo = xs[coarse_idx.saturating_sub(1)];
    let hi = xs[(coarse_idx + 1).min(xs.len() - 1)];
    golden_section(
        |x| {
            let v = bound_at(x)?;
            Best::offer(&mut best, x, v);
            Ok(v)
        },
        lo,
        hi,
        GOLDEN_ITERATIONS,
    )?;

    let best = best.expect("scan is non-empty");
    let spec = ProblemSpec::new(a, b, best.param, n)?;
    let measured = measured_e1(f, &spec)?;
    let uses_pair = theorem != TheoremId::T21;
    Ok(TightnessResult {
        theorem_id: theorem,
        a,
        b,
        n,
        x: Some(best.param),
        p: uses_pair.then_some(hp.p),
        q: uses_pair.then_some(hp.q),
        best_bound: best.value,
        measured_error: measured,
        slack_ratio: slack_ratio(best.value, measured),
        hypothesis_ok: hypothesis_check(f, a, b, n, power)?.is_qc,
        evaluations,
    })
}

/// Minimise a Hölder-type bound (T22, T23 or T32) over `p ∈ [1.01, 64]`,
/// `q = p/(p-1)`. `x` defaults to the midpoint and is ignored by T32.
pub fn best_p(f: &Expr, a: f64, b: f64, n: usize, theorem: TheoremId, x: Option<f64>) -> Result<TightnessResult> {
    validate_interval(a, b, n)?;
    if !matches!(theorem, TheoremId::T22 | TheoremId::T23 | TheoremId::T32) {
        return Err(Error::InvalidInput(format!(
            "p search applies to T22, T23, T32, not {theorem}"
        )));
    }
    if theorem == TheoremId::T32 && n < 2 {
        return Err(Error::InvalidInput(format!("T32 needs n >= 2 (got n = {n})")));
    }
    let spec = ProblemSpec::new(a, b, x.unwrap_or(0.5 * (a + b)), n)?;
    let d_a = derivative_magnitude(f, a, n)?;
    let d_b = derivative_magnitude(f, b, n)?;
    let d_x = derivative_magnitude(f, spec.x, n)?;

    let mut evaluations = 0;
    // None marks an infeasible p
    let mut bound_at = |p: f64| -> Result<Option<f64>> {
        evaluations += 1;
        let hp = HolderPair::from_p(p)?;
        match theorem {
            TheoremId::T22 => Ok(Some(formula::t22(&spec, hp, d_a, d_b))),
            TheoremId::T23 => match formula::t23(&spec, hp, d_a, d_x, d_b) {
                Ok(v) => Ok(Some(v)),
                Err(Error::KernelDivergent { .. }) => Ok(None),
                Err(e) => Err(e),
            },
            _ => formula::t32(a, b, n, hp, d_a, d_b).map(Some),
        }
    };

    let ratio = (P_MAX / P_MIN).ln();
    let ps: Vec<f64> = (0..P_SCAN_POINTS)
        .map(|i| match i {
            0 => P_MIN,
            i if i + 1 == P_SCAN_POINTS => P_MAX,
            i => P_MIN * (ratio * i as f64 / (P_SCAN_POINTS - 1) as f64).exp(),
        })
        .collect();
    let mut feasible = vec![false; ps.len()];
    let mut best: Option<Best> = None;
    let mut coarse_idx = None;
    for (i, &p) in ps.iter().enumerate() {
        if let Some(v) = bound_at(p)? {
            feasible[i] = true;
            let before = best.map(|b| b.param);
            Best::offer(&mut best, p, v);
            if best.map(|b| b.param) != before {
                coarse_idx = Some(i);
            }
        }
    }
    let Some(i) = coarse_idx else {
        return Err(Error::NoFeasibleParameter(format!(
            "{theorem} with n = {n}: every p in [{P_MIN}, {P_MAX}] violates the validity constraint"
        )));
    };
    let lo = if i > 0 && feasible[i - 1] { ps[i - 1] } else { ps[i] };
    let hi = if i + 1 < ps.len() && feasible[i + 1] {
        ps[i + 1]
    } else {
        ps[i]
    };
    golden_section(
        |u| {
            let p = u.exp();
            match bound_at(p)? {
                Some(v) => {
                    Best::offer(&mut best, p, v);
                    Ok(v)
                }
                None => Ok(f64::INFINITY),
            }
        },
        lo.ln(),
        hi.ln(),
        GOLDEN_ITERATIONS,
    )?;

    let best = best.expect("at least one feasible probe");
    let hp = HolderPair::from_p(best.param)?;
    let (measured, x) = if theorem == TheoremId::T32 {
        (measured_e2(f, a, b, n)?, None)
    } else {
        (measured_e1(f, &spec)?, Some(spec.x))
    };
    Ok(TightnessResult {
        theorem_id: theorem,
        a,
        b,
        n,
        x,
        p: Some(hp.p),
        q: Some(hp.q),
        best_bound: best.value,
        measured_error: measured,
        slack_ratio: slack_ratio(best.value, measured),
        hypothesis_ok: hypothesis_check(f, a, b, n, hp.q)?.is_qc,
        evaluations,
    })
}
