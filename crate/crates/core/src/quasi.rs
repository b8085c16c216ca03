//! Grid check of quasi-convexity and the built-in corpus of integrands.
//!
//! `g` is quasi-convex on `[a, b]` when `g(z) <= max(g(x), g(y))` for every
//! `x < z < y`. On a sample vector that reduces to comparing each interior
//! value against the smallest value on either side of it, so one prefix-min
//! and one suffix-min pass decide the whole triple family.

use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::path::Path;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::jet::jet_eval;

pub const DEFAULT_GRID: usize = 2001;
/// Relative tolerance of the hypothesis gate, scaled by `1 + max sample`.
pub const HYPOTHESIS_REL_TOL: f64 = 1e-10;
/// Derivative orders that corpus claims and file entries are checked for.
pub const CORPUS_ORDERS: std::ops::RangeInclusive<usize> = 1..=5;

#[derive(Debug, Clone, PartialEq)]
pub struct QcReport {
    pub is_qc: bool,
    /// Points `(x, z, y)`, `x < z < y`, with `g(z) > max(g(x), g(y)) + tol`.
    pub witness: Option<(f64, f64, f64)>,
    pub grid_size: usize,
}

/// Indices `(i, j, k)` of a violating triple in `samples`, or `None` if the
/// sequence is quasi-convex up to `tol`.
pub fn find_violation(samples: &[f64], tol: f64) -> Option<(usize, usize, usize)> {
    let n = samples.len();
    if n < 3 {
        return None;
    }
    // suffix_min[i] = index of the smallest sample in i..n (first on ties)
    let mut suffix_min = vec![n - 1; n];
    for i in (0..n - 1).rev() {
        let next = suffix_min[i + 1];
        suffix_min[i] = if samples[i] <= samples[next] { i } else { next };
    }
    let mut prefix_min = 0;
    for j in 1..n - 1 {
        if samples[j - 1] < samples[prefix_min] {
            prefix_min = j - 1;
        }
        let right = suffix_min[j + 1];
        if samples[j] > samples[prefix_min].max(samples[right]) + tol {
            return Some((prefix_min, j, right));
        }
    }
    None
}

fn grid_points(a: f64, b: f64, grid: usize) -> impl Iterator<Item = f64> {
    let step = (b - a) / (grid - 1) as f64;
    (0..grid).map(move |i| if i + 1 == grid { b } else { a + step * i as f64 })
}

/// Check quasi-convexity of `g` from `grid` uniform samples on `[a, b]`.
pub fn check_quasiconvex<G>(mut g: G, a: f64, b: f64, grid: usize, tol: f64) -> Result<QcReport>
where
    G: FnMut(f64) -> Result<f64>,
{
    if grid < 3 {
        return Err(Error::InvalidInput(format!(
            "grid must have at least 3 points, got {grid}"
        )));
    }
    if !(a < b) {
        return Err(Error::InvalidInput(format!("interval [{a}, {b}] must have a < b")));
    }
    let ts: Vec<f64> = grid_points(a, b, grid).collect();
    let samples = ts
        .iter()
        .map(|&t| {
            let v = g(t)?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::NonFinite {
                    context: format!("quasi-convexity sample at t = {t}"),
                    value: v,
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report_from_samples(&ts, &samples, tol))
}

fn report_from_samples(ts: &[f64], samples: &[f64], tol: f64) -> QcReport {
    let witness = find_violation(samples, tol).map(|(i, j, k)| (ts[i], ts[j], ts[k]));
    QcReport {
        is_qc: witness.is_none(),
        witness,
        grid_size: samples.len(),
    }
}

/// `|f^(n)(t)|` sampled on a uniform grid, together with the grid.
pub fn derivative_samples(f: &Expr, a: f64, b: f64, n: usize, grid: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if grid < 3 {
        return Err(Error::InvalidInput(format!(
            "grid must have at least 3 points, got {grid}"
        )));
    }
    let ts: Vec<f64> = grid_points(a, b, grid).collect();
    let samples = ts
        .iter()
        .map(|&t| Ok(jet_eval(f, t, n)?.derivative(n).abs()))
        .collect::<Result<Vec<_>>>()?;
    Ok((ts, samples))
}

/// Hypothesis gate on precomputed `|f^(n)|` samples, raised to `power`.
pub fn hypothesis_from_samples(ts: &[f64], magnitudes: &[f64], power: f64) -> QcReport {
    let powered: Vec<f64> = magnitudes.iter().map(|m| m.powf(power)).collect();
    let max = powered.iter().cloned().fold(0.0, f64::max);
    report_from_samples(ts, &powered, HYPOTHESIS_REL_TOL * (1.0 + max))
}

/// Is `|f^(n)|^power` quasi-convex on `[a, b]` (default grid)?
pub fn hypothesis_check(f: &Expr, a: f64, b: f64, n: usize, power: f64) -> Result<QcReport> {
    hypothesis_check_on_grid(f, a, b, n, power, DEFAULT_GRID)
}

pub fn hypothesis_check_on_grid(f: &Expr, a: f64, b: f64, n: usize, power: f64, grid: usize) -> Result<QcReport> {
    if !(power >= 1.0) {
        return Err(Error::InvalidInput(format!("power must be >= 1, got {power}")));
    }
    if !(a < b) {
        return Err(Error::InvalidInput(format!("interval [{a}, {b}] must have a < b")));
    }
    let (ts, mags) = derivative_samples(f, a, b, n, grid)?;
    Ok(hypothesis_from_samples(&ts, &mags, power))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusEntry {
    pub name: String,
    pub expr: Expr,
    pub interval: (f64, f64),
    /// Orders `n` for which `|f^(n)|` is quasi-convex on the interval.
    pub qc_orders: BTreeSet<usize>,
}

impl CorpusEntry {
    fn new(name: &str, src: &str, a: f64, b: f64, qc_orders: impl IntoIterator<Item = usize>) -> Self {
        CorpusEntry {
            name: name.to_string(),
            expr: parse(src).expect("built-in corpus expression"),
            interval: (a, b),
            qc_orders: qc_orders.into_iter().collect(),
        }
    }

    /// Re-run the hypothesis gate for every claimed order.
    pub fn verify(&self, grid: usize) -> Result<()> {
        let (a, b) = self.interval;
        for &n in &self.qc_orders {
            let rep = hypothesis_check_on_grid(&self.expr, a, b, n, 1.0, grid)?;
            if !rep.is_qc {
                return Err(Error::InvalidInput(format!(
                    "corpus entry `{}` claims |f^({n})| quasi-convex on [{a}, {b}] but witness {:?} violates it",
                    self.name, rep.witness
                )));
            }
        }
        Ok(())
    }
}

/// Built-in integrands. Every claimed order is quasi-convex by monotonicity
/// or a single interior minimum of `|f^(n)|`.
pub fn corpus() -> Vec<CorpusEntry> {
    let all = || CORPUS_ORDERS;
    let mut out = vec![CorpusEntry::new("exp", "exp(t)", 0.0, 1.0, all())];
    for m in 2..=6 {
        let src = format!("t^{m}");
        out.push(CorpusEntry::new(&format!("pow{m}_unit"), &src, 0.0, 1.0, all()));
        out.push(CorpusEntry::new(&format!("pow{m}_sym"), &src, -1.0, 1.0, all()));
    }
    out.extend([
        CorpusEntry::new("exp_neg", "exp(-t)", 0.0, 1.0, all()),
        CorpusEntry::new("log1p", "log(1+t)", 0.0, 1.0, all()),
        CorpusEntry::new("pow5_2", "t^(5/2)", 0.1, 2.0, all()),
        CorpusEntry::new("recip", "1/(1+t)", 0.0, 1.0, all()),
        CorpusEntry::new("sin", "sin(t)", 0.0, PI / 3.0, all()),
        CorpusEntry::new("affine", "3*t - 1", 0.0, 1.0, all()),
        CorpusEntry::new("const", "5", 0.0, 1.0, all()),
        // |sin| and |cos| alternate on [0, π]: only the odd orders qualify
        CorpusEntry::new("sin_halfturn", "sin(t)", 0.0, PI, [1, 3, 5]),
    ]);
    out
}

/// Built-in corpus with every claim re-verified.
pub fn load_corpus() -> Result<Vec<CorpusEntry>> {
    let entries = corpus();
    for e in &entries {
        e.verify(DEFAULT_GRID)?;
    }
    Ok(entries)
}

/// Parse corpus lines of the form `name; expr; a; b`. Blank lines and text
/// after `#` are ignored. Quasi-convex orders are determined by the
/// hypothesis gate over [`CORPUS_ORDERS`].
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |msg: String| Error::InvalidInput(format!("corpus line {}: {msg}", lineno + 1));
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(bad(format!("expected `name; expr; a; b`, got {} fields", fields.len())));
        }
        let expr = parse(fields[1]).map_err(|e| bad(e.to_string()))?;
        let a: f64 = fields[2]
            .parse()
            .map_err(|_| bad(format!("bad number `{}`", fields[2])))?;
        let b: f64 = fields[3]
            .parse()
            .map_err(|_| bad(format!("bad number `{}`", fields[3])))?;
        if !(a < b) {
            return Err(bad(format!("interval [{a}, {b}] must have a < b")));
        }
        let mut qc_orders = BTreeSet::new();
        for n in CORPUS_ORDERS {
            if hypothesis_check(&expr, a, b, n, 1.0)?.is_qc {
                qc_orders.insert(n);
            }
        }
        out.push(CorpusEntry {
            name: fields[0].to_string(),
            expr,
            interval: (a, b),
            qc_orders,
        });
    }
    Ok(out)
}

pub fn load_corpus_file(path: &Path) -> Result<Vec<CorpusEntry>> {
    parse_corpus(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_force(samples: &[f64], tol: f64) -> bool {
        let n = samples.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if samples[j] > samples[i].max(samples[k]) + tol {
                        return false;
                    }
                }
            }
        }
        true
    }

    #[test]
    fn convex_and_monotone_pass() {
        let r = check_quasiconvex(|t| Ok(t * t), -1.0, 1.0, 2001, 0.0).unwrap();
        assert!(r.is_qc && r.witness.is_none());
        assert_eq!(r.grid_size, 2001);
        assert!(
            check_quasiconvex(|t: f64| Ok(t.exp()), 0.0, 1.0, 2001, 0.0)
                .unwrap()
                .is_qc
        );
    }

    #[test]
    fn sine_hump_fails_with_witness() {
        let r = check_quasiconvex(|t: f64| Ok(t.sin()), 0.0, PI, 2001, 1e-10).unwrap();
        assert!(!r.is_qc);
        let (x, z, y) = r.witness.unwrap();
        assert!(x < z && z < y);
        assert!((0.0..=PI).contains(&x) && (0.0..=PI).contains(&y));
        assert!(z.sin() > x.sin().max(y.sin()));
    }

    #[test]
    fn hypothesis_examples() {
        let exp = parse("exp(t)").unwrap();
        assert!(hypothesis_check(&exp, 0.0, 1.0, 3, 1.0).unwrap().is_qc);
        let quartic = parse("t^4").unwrap();
        assert!(hypothesis_check(&quartic, -1.0, 1.0, 2, 2.0).unwrap().is_qc);
        let sin = parse("sin(t)").unwrap();
        let r = hypothesis_check(&sin, 0.0, PI, 2, 1.0).unwrap();
        assert!(!r.is_qc && r.witness.is_some());
        assert!(hypothesis_check(&sin, 0.0, PI, 2, 0.5).is_err());
    }

    #[test]
    fn sweep_matches_brute_force_small() {
        let cases: [&[f64]; 6] = [
            &[1.0, 2.0, 1.0],
            &[2.0, 1.0, 2.0],
            &[0.0, 1.0, 0.0, 1.0],
            &[3.0, 2.0, 2.0, 5.0, 4.0],
            &[1.0, 1.0, 1.0],
            &[5.0, 4.0, 6.0, 3.0, 7.0],
        ];
        for s in cases {
            assert_eq!(find_violation(s, 0.0).is_none(), brute_force(s, 0.0), "{s:?}");
        }
    }

    #[test]
    fn tolerance_absorbs_small_bumps() {
        let s = [1.0, 1.0 + 1e-12, 1.0];
        assert!(find_violation(&s, 0.0).is_some());
        assert!(find_violation(&s, 1e-10).is_none());
    }

    #[test]
    fn rejects_small_grid_and_nonfinite() {
        assert!(check_quasiconvex(Ok, 0.0, 1.0, 2, 0.0).is_err());
        assert!(matches!(
            check_quasiconvex(|t| Ok(1.0 / t), 0.0, 1.0, 11, 0.0),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn corpus_claims_hold() {
        let entries = load_corpus().unwrap();
        let names: Vec<&str> = entries.iter().map(|e| e.name.as_str()).collect();
        for want in [
            "exp",
            "exp_neg",
            "log1p",
            "pow5_2",
            "recip",
            "sin",
            "affine",
            "const",
            "pow2_unit",
            "pow6_sym",
        ] {
            assert!(names.contains(&want), "{want}");
        }
        let exp = entries.iter().find(|e| e.name == "exp").unwrap();
        assert!((1..=5).all(|n| exp.qc_orders.contains(&n)));
    }

    #[test]
    fn corpus_file_format() {
        let text = "# extra integrands\n\nquartic; t^4 - t; -1; 1   # trailing comment\nhump; sin(t); 0; 3.14159\n";
        let entries = parse_corpus(text).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].name, "quartic");
        assert_eq!(entries[0].interval, (-1.0, 1.0));
        assert!(entries[1].qc_orders.contains(&1));
        assert!(!entries[1].qc_orders.contains(&2));
        assert!(parse_corpus("x; t; 1").is_err());
        assert!(parse_corpus("x; t^; 0; 1").is_err());
        assert!(parse_corpus("x; t; 1; 0").is_err());
    }
}
