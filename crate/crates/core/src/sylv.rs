//! The splitting matrix of a monic polynomial.
//!
//! For monic p of degree n, the linear map
//! (s, q) ↦ p·s − p'·q from 𝒫_{n−2} ⊕ 𝒫_{n−1} to 𝒫_{2n−2} has rank n + m − 1,
//! where m is the number of distinct zeros of p. Its matrix in monomial
//! bases is [`SplitMatrix`]; the maximal nonvanishing minors of the symbolic
//! version cut out the parameter points where zeros merge.

use rand::Rng;
use serde::Serialize;

use crate::algebra::{GaussRat, Matrix, MonicPoly, MultiPoly, Ring, C64};
use crate::error::{Error, Result};
use crate::ranklab::{self, exact_rank, generic_rank, numerical_rank};

/// (2n−1)×(2n−1) representation matrix. Rows: coefficients of λ^0 … λ^{2n−2}.
/// Columns 0 … n−2: p·λ^j. Columns n−1 … 2n−2: −p'·λ^t for t = 0 … n−1.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitMatrix<T> {
    pub n: usize,
    pub entries: Matrix<T>,
}

pub fn build_split_matrix<T: Ring>(p: &MonicPoly<T>) -> Result<SplitMatrix<T>> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::DegreeZero);
    }
    let size = 2 * n - 1;
    let c = p.coeffs();
    let mut m = Matrix::zeros(size, size);
    for j in 0..n - 1 {
        for i in j..=n + j {
            m[(i, j)] = c[i - j].clone();
        }
    }
    for t in 0..n {
        for i in t..t + n {
            let k = i - t + 1;
            m[(i, n - 1 + t)] = -(c[k].clone() * T::from_i64(k as i64));
        }
    }
    Ok(SplitMatrix { n, entries: m })
}

/// Distinct-zero count m = rank − n + 1, exact.
pub fn distinct_zero_count(p: &MonicPoly<GaussRat>) -> Result<usize> {
    let sm = build_split_matrix(p)?;
    Ok(exact_rank(&sm.entries) + 1 - sm.n)
}

/// Distinct-zero count from the numerical rank of the floating split matrix.
pub fn distinct_zero_count_float(p: &MonicPoly<C64>, rel_tol: f64) -> Result<usize> {
    let sm = build_split_matrix(p)?;
    let rank = numerical_rank(&sm.entries, rel_tol)?.rank;
    // rank ≥ n always holds in exact arithmetic (m ≥ 1)
    Ok(rank.max(sm.n) + 1 - sm.n)
}

/// Defining functions of the splitting set of a monic polynomial family.
#[derive(Clone, Debug)]
pub struct SplitFunctions {
    pub n: usize,
    pub r_max: usize,
    /// Order-r_max minors that do not vanish identically.
    pub functions: Vec<MultiPoly>,
    /// Some minor is a nonzero constant, so the splitting set is empty.
    pub split_empty: bool,
    pub note: &'static str,
}

/// Symbolic splitting matrix of P(ζ) and its nonvanishing minors of order
/// r_max, the generic rank.
pub fn split_defining_functions<R: Rng>(
    family: &MonicPoly<MultiPoly>,
    nparams: usize,
    rng: &mut R,
) -> Result<SplitFunctions> {
    if nparams == 0 {
        return Err(Error::Invalid("at least one parameter is required".into()));
    }
    let sm = build_split_matrix(family)?;
    let r_max = generic_rank(&sm.entries, nparams, rng);
    let functions: Vec<MultiPoly> = ranklab::minors(&sm.entries, r_max)?
        .into_iter()
        .map(|m| m.value)
        .collect();
    let split_empty = functions.iter().any(MultiPoly::is_constant);
    Ok(SplitFunctions {
        n: sm.n,
        r_max,
        functions,
        split_empty,
        note: ranklab::SCHWARTZ_ZIPPEL_NOTE,
    })
}

/// One failed inequality, with logarithms to avoid overflow.
#[derive(Clone, Debug, Serialize)]
pub struct BoundViolation {
    pub point: Vec<[f64; 2]>,
    pub log10_lhs: f64,
    pub log10_rhs: f64,
}

/// Sampled verification of a bound |h(ζ)| ≤ C·B(ζ)^e.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub bound: String,
    pub applicable: bool,
    pub reason: Option<String>,
    pub samples: usize,
    pub functions: usize,
    /// max over samples and functions of log10(|h| / bound); −∞ when h ≡ 0 at all samples.
    pub max_log10_ratio: f64,
    pub violations: Vec<BoundViolation>,
    /// Violations of the same inequality with the base replaced by max(1, base).
    pub homogenized_violations: usize,
}

impl BoundReport {
    pub fn not_applicable(bound: &str, reason: &str) -> Self {
        BoundReport {
            bound: bound.into(),
            applicable: false,
            reason: Some(reason.into()),
            samples: 0,
            functions: 0,
            max_log10_ratio: f64::NEG_INFINITY,
            violations: Vec::new(),
            homogenized_violations: 0,
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Generic sampler: for each point, `base(ζ)` is the quantity raised to
/// `exponent`, and the bound is `log10_const + exponent·log10(base)`.
pub(crate) fn check_bound(
    name: &str,
    functions: &[MultiPoly],
    points: &[Vec<C64>],
    log10_const: f64,
    exponent: f64,
    base: impl Fn(&[C64]) -> f64,
) -> BoundReport {
    check_bound_values(name, functions.len(), points, log10_const, exponent, base, |pt| {
        functions.iter().map(|h| h.eval_c64(pt).norm().log10()).collect()
    })
}

/// Same as [`check_bound`], with `log10_values(ζ)` giving log10 |h(ζ)| for
/// each function (−∞ for zeros).
pub(crate) fn check_bound_values(
    name: &str,
    functions: usize,
    points: &[Vec<C64>],
    log10_const: f64,
    exponent: f64,
    base: impl Fn(&[C64]) -> f64,
    log10_values: impl Fn(&[C64]) -> Vec<f64>,
) -> BoundReport {
    let mut report = BoundReport {
        bound: name.into(),
        applicable: true,
        reason: None,
        samples: points.len(),
        functions,
        max_log10_ratio: f64::NEG_INFINITY,
        violations: Vec::new(),
        homogenized_violations: 0,
    };
    // tiny relative slack for rounding in the evaluation of h
    let slack = 1e-9;
    for pt in points {
        let b = base(pt);
        let rhs = log10_const + exponent * b.log10();
        let rhs_h = log10_const + exponent * b.max(1.0).log10();
        for lhs in log10_values(pt) {
            if lhs == f64::NEG_INFINITY {
                continue;
            }
            report.max_log10_ratio = report.max_log10_ratio.max(lhs - rhs);
            if lhs > rhs + slack {
                report.violations.push(BoundViolation {
                    point: pt.iter().map(|z| [z.re, z.im]).collect(),
                    log10_lhs: lhs,
                    log10_rhs: rhs,
                });
            }
            if lhs > rhs_h + slack {
                report.homogenized_violations += 1;
            }
        }
    }
    report
}

/// Checks |h(ζ)| ≤ (2n)^{4n} max_{μ<n} |P_μ(ζ)|^{2n} at each sample.
///
/// The inequality says nothing when the splitting set is empty, so the
/// report is marked not applicable in that case.
pub fn check_coeff_bound(
    split: &SplitFunctions,
    coeffs: &MonicPoly<MultiPoly>,
    points: &[Vec<C64>],
) -> BoundReport {
    const NAME: &str = "|h| <= (2n)^(4n) max|P_mu|^(2n)";
    if split.split_empty {
        return BoundReport::not_applicable(NAME, "splitting set is empty");
    }
    let n = split.n as f64;
    let lower = &coeffs.coeffs()[..split.n];
    check_bound(NAME, &split.functions, points, 4.0 * n * (2.0 * n).log10(), 2.0 * n, |pt| {
        lower.iter().map(|c| c.eval_c64(pt).norm()).fold(0.0, f64::max)
    })
}
