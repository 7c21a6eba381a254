use rand::Rng;
use serde::Serialize;

use super::classify::{classify_point, PointKind};
use super::family::MatrixFamily;
use crate::algebra::{roots_exact, square_free_part, GaussRat, Matrix, MultiPoly, ParamPoly, Ring, C64};
use crate::error::{Error, Result};
use crate::jordan::theta_product;
use crate::ranklab::{generic_rank, minors, op_norm, random_rational_point};
use crate::sylv::{check_bound, check_bound_values, split_defining_functions, BoundReport, SplitFunctions};
use crate::tracker::char_poly_at;

/// Largest number of product functions h that are expanded explicitly.
pub const MAX_PRODUCTS: usize = 10_000;

/// D·Θ as a polynomial matrix: D·Θ = (−1)^m Q(A) with Q = D·q_0 and q_0 the
/// square-free part of the characteristic polynomial over the field of
/// rational functions in the parameters.
#[derive(Clone, Debug)]
pub struct SquareFreeFamily {
    pub d: MultiPoly,
    pub q: ParamPoly,
    /// Generic number of distinct eigenvalues, deg q_0.
    pub m_generic: usize,
    pub d_theta: Matrix<MultiPoly>,
}

pub fn square_free_part_family(family: &MatrixFamily) -> Result<SquareFreeFamily> {
    let cp = family.char_poly();
    let (d, q) = square_free_part(cp.poly())?;
    let m = q.degree().ok_or_else(|| Error::GcdDegeneration("zero square-free part".into()))?;
    let t = q.eval_matrix(&family.entries);
    Ok(SquareFreeFamily {
        d,
        q,
        m_generic: m,
        d_theta: if m % 2 == 1 { t.neg() } else { t },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareFreeCheck {
    pub samples: usize,
    pub checked: usize,
    pub skipped_split: usize,
    pub skipped_d_zero: usize,
    /// max ‖(DΘ)(ζ) − D(ζ)Θ_A(ζ)‖_max / scale, scale = |D|·∏(|λ_j| + ‖A‖).
    pub max_rel_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Compares the symbolic D·Θ at random rational points with Θ computed from
/// numerically located eigenvalues. Points where D vanishes or where fewer
/// than the generic number of eigenvalues are distinct are skipped.
pub fn check_square_free_identity<R: Rng>(
    family: &MatrixFamily,
    sf: &SquareFreeFamily,
    samples: usize,
    rng: &mut R,
) -> Result<SquareFreeCheck> {
    const TOL: f64 = 1e-6;
    let cp = family.char_poly();
    let mut out = SquareFreeCheck {
        samples,
        checked: 0,
        skipped_split: 0,
        skipped_d_zero: 0,
        max_rel_residual: 0.0,
        tolerance: TOL,
        pass: true,
    };
    for _ in 0..samples {
        let pt = random_rational_point(rng, family.nparams());
        let d = sf.d.eval(&pt);
        if d.is_zero() {
            out.skipped_d_zero += 1;
            continue;
        }
        let eig = roots_exact(&char_poly_at(&cp, &pt));
        if eig.len() < sf.m_generic {
            out.skipped_split += 1;
            continue;
        }
        let a = family.eval(&pt)?.to_c64();
        let lambdas: Vec<C64> = eig.iter().map(|e| e.value).collect();
        let theta = theta_product(&a, &lambdas)?;
        let dc = d.to_c64();
        let lhs = sf.d_theta.eval(&pt).to_c64();
        let diff = lhs.sub(&theta.scale(&dc));
        let na = op_norm(&a);
        let scale = dc.norm() * lambdas.iter().map(|l| l.norm() + na).product::<f64>();
        let rel = diff.max_abs() / scale.max(f64::MIN_POSITIVE);
        out.max_rel_residual = out.max_rel_residual.max(rel);
        out.checked += 1;
    }
    out.pass = out.max_rel_residual <= TOL;
    Ok(out)
}

/// Generic ranks of (D·Θ)^k for k = 1 … n−1.
pub fn generic_theta_ranks<R: Rng>(family: &MatrixFamily, rng: &mut R) -> Result<Vec<usize>> {
    let sf = square_free_part_family(family)?;
    Ok(theta_powers(&sf.d_theta, family.n())
        .iter()
        .map(|p| generic_rank(p, family.nparams(), rng))
        .collect())
}

fn theta_powers(t: &Matrix<MultiPoly>, n: usize) -> Vec<Matrix<MultiPoly>> {
    let mut out: Vec<Matrix<MultiPoly>> = Vec::new();
    for _ in 1..n {
        let next = match out.last() {
            None => t.clone(),
            Some(prev) => prev.mul(t),
        };
        out.push(next);
    }
    out
}

/// Defining functions of X ∖ Jst A.
///
/// g: splitting-set functions of the characteristic polynomial (replaced by
/// the constant 1 when the splitting set is empty). f^(k): nonvanishing
/// minors of order r_k = generic rank (DΘ)^k, for k = 1 … k0 with k0 the
/// last k such that r_k > 0. h: all products g·f^(1)·…·f^(k0), or just g
/// when r_1 = 0.
#[derive(Clone, Debug)]
pub struct JstFunctions {
    pub n: usize,
    pub nparams: usize,
    pub g: Vec<MultiPoly>,
    pub split_r_max: usize,
    pub split_empty: bool,
    pub d: MultiPoly,
    pub m_generic: usize,
    /// r_k for k = 1 … n−1.
    pub r: Vec<usize>,
    pub k0: usize,
    /// f[k−1] = f^(k), k = 1 … k0.
    pub f: Vec<Vec<MultiPoly>>,
    /// Explicit products, absent when there are more than [`MAX_PRODUCTS`].
    pub h: Option<Vec<MultiPoly>>,
    pub h_count: usize,
    /// X ∖ Jst A is empty; then no defining functions are listed.
    pub empty: bool,
    pub notes: Vec<String>,
}

impl JstFunctions {
    /// ξ lies in the common zero set of the h's: all g vanish, or all
    /// f^(k) vanish for some k.
    pub fn vanishes_at(&self, point: &[GaussRat]) -> bool {
        if self.empty {
            return false;
        }
        let all_zero = |fs: &[MultiPoly]| fs.iter().all(|p| p.eval(point).is_zero());
        all_zero(&self.g) || self.f.iter().any(|fk| all_zero(fk))
    }

    /// Same zero set by evaluating the expanded products (None if not expanded).
    pub fn products_vanish_at(&self, point: &[GaussRat]) -> Option<bool> {
        if self.empty {
            return Some(false);
        }
        self.h.as_ref().map(|h| h.iter().all(|p| p.eval(point).is_zero()))
    }
}

pub fn jst_defining_functions<R: Rng>(family: &MatrixFamily, rng: &mut R) -> Result<JstFunctions> {
    let n = family.n();
    let nparams = family.nparams();
    let cp = family.char_poly();
    let split = split_defining_functions(&cp, nparams, rng)?;
    let mut notes = vec![split.note.to_string()];
    let g = if split.split_empty {
        notes.push("splitting set is empty; g replaced by the constant 1".into());
        vec![MultiPoly::one()]
    } else {
        split.functions.clone()
    };
    let sf = square_free_part_family(family)?;
    if !sf.d.is_one() {
        notes.push(format!(
            "denominator D = {} is not 1: extra zeros of D may enlarge the zero set",
            sf.d.to_string_with(&family.params)
        ));
    }
    let powers = theta_powers(&sf.d_theta, n);
    let r: Vec<usize> = powers.iter().map(|p| generic_rank(p, nparams, rng)).collect();
    let k0 = r.iter().rposition(|&rk| rk > 0).map_or(0, |i| i + 1);
    let mut f = Vec::with_capacity(k0);
    for k in 1..=k0 {
        let fk: Vec<MultiPoly> = minors(&powers[k - 1], r[k - 1])?.into_iter().map(|m| m.value).collect();
        f.push(fk);
    }
    let empty = split.split_empty && f.iter().all(|fk| fk.iter().any(MultiPoly::is_constant));
    let h_count = f
        .iter()
        .try_fold(g.len(), |acc, fk| acc.checked_mul(fk.len()))
        .unwrap_or(usize::MAX);
    let h = if empty {
        notes.push("no defining functions: X \\ Jst A is empty".into());
        Some(Vec::new())
    } else if h_count > MAX_PRODUCTS {
        notes.push(format!("{h_count} products exceed {MAX_PRODUCTS}; factor lists only"));
        None
    } else {
        let mut hs = g.clone();
        for fk in &f {
            hs = hs.iter().flat_map(|a| fk.iter().map(move |b| a * b)).collect();
        }
        Some(hs)
    };
    Ok(JstFunctions {
        n,
        nparams,
        g,
        split_r_max: split.r_max,
        split_empty: split.split_empty,
        d: sf.d,
        m_generic: sf.m_generic,
        r,
        k0,
        f,
        h_count: if empty { 0 } else { h_count },
        h,
        empty,
        notes,
    })
}

/// Uniform points in the box |Re|, |Im| ≤ `radius` for each coordinate.
pub fn sample_points<R: Rng>(rng: &mut R, nparams: usize, count: usize, radius: f64) -> Vec<Vec<C64>> {
    (0..count)
        .map(|_| {
            (0..nparams)
                .map(|_| C64::new(rng.gen_range(-radius..=radius), rng.gen_range(-radius..=radius)))
                .collect()
        })
        .collect()
}

fn a_norm(family: &MatrixFamily) -> impl Fn(&[C64]) -> f64 + '_ {
    move |pt| op_norm(&family.entries.eval_c64(pt))
}

/// |g(ζ)| ≤ (2n)^{6n²} ‖A(ζ)‖^{2n²} for the splitting-set functions.
pub fn check_split_bound(split: &SplitFunctions, family: &MatrixFamily, points: &[Vec<C64>]) -> BoundReport {
    const NAME: &str = "|g| <= (2n)^(6n^2) ||A||^(2n^2)";
    if split.split_empty {
        return BoundReport::not_applicable(NAME, "splitting set is empty");
    }
    let n = split.n as f64;
    check_bound(NAME, &split.functions, points, 6.0 * n * n * (2.0 * n).log10(), 2.0 * n * n, a_norm(family))
}

/// |h(ζ)| ≤ (2n)^{2n⁴} ‖A(ζ)‖^{2n⁴}. Since h ranges over all products
/// g·f^(1)⋯f^(k0), the largest |h| at a point is the product of the
/// largest factors, which is what is compared.
pub fn check_jst_bound(jst: &JstFunctions, family: &MatrixFamily, points: &[Vec<C64>]) -> BoundReport {
    const NAME: &str = "|h| <= (2n)^(2n^4) ||A||^(2n^4)";
    if !jst.d.is_one() {
        return BoundReport::not_applicable(NAME, "denominator D is not 1; these h differ from the element products");
    }
    let n = jst.n as f64;
    let n4 = n.powi(4);
    let log_const = 2.0 * n4 * (2.0 * n).log10();
    if jst.empty {
        return check_bound_values(NAME, 0, &[], log_const, 2.0 * n4, |_| 0.0, |_| Vec::new());
    }
    let max_log = |fs: &[MultiPoly], pt: &[C64]| {
        fs.iter().map(|p| p.eval_c64(pt).norm().log10()).fold(f64::NEG_INFINITY, f64::max)
    };
    check_bound_values(NAME, jst.h_count, points, log_const, 2.0 * n4, a_norm(family), |pt| {
        let mut total = max_log(&jst.g, pt);
        for fk in &jst.f {
            total += max_log(fk, pt);
        }
        vec![total]
    })
}

/// Grid nodes where the symbolic zero set and the pointwise classification
/// disagree.
pub fn zero_set_mismatches(
    family: &MatrixFamily,
    jst: &JstFunctions,
    points: &[Vec<GaussRat>],
    probe_radius: f64,
    rel_tol: f64,
) -> Result<Vec<Vec<GaussRat>>> {
    let mut out = Vec::new();
    for pt in points {
        let flagged = classify_point(family, pt, probe_radius, rel_tol)?.kind != PointKind::StableCandidate;
        if flagged != jst.vanishes_at(pt) {
            out.push(pt.clone());
        }
    }
    Ok(out)
}
