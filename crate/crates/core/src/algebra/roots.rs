//! Polynomial roots and matrix spectra.
//!
//! Two routes produce eigenvalues with multiplicities:
//!
//! * [`spectrum_exact`] factors the exact characteristic polynomial into
//!   square-free parts, so multiplicities are exact and only simple roots
//!   are located numerically. Roots that are Gaussian rationals with small
//!   denominators are recovered exactly.
//! * [`spectrum_float`] works on a floating matrix and clusters nearby roots
//!   of the floating characteristic polynomial.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::charpoly::char_poly;
use super::matrix::Matrix;
use super::scalar::{GaussRat, Ring, C64};
use super::unipoly::{square_free_factorization, MonicPoly, UniPoly};
use crate::error::Result;

/// One distinct eigenvalue.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen {
    pub value: C64,
    pub multiplicity: usize,
    /// Exact value when it is a Gaussian rational that was recognized.
    pub exact: Option<GaussRat>,
}

fn horner(c: &[C64], x: C64) -> (C64, C64) {
    let mut p = C64::new(0.0, 0.0);
    let mut dp = C64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// All complex roots (with repetition) of a nonzero polynomial, by the
/// Aberth–Ehrlich iteration followed by Newton polishing.
pub fn poly_roots(p: &UniPoly<C64>) -> Vec<C64> {
    let Some(n) = p.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lc = *p.leading().unwrap();
    let c: Vec<C64> = p.coeffs().iter().map(|a| a / lc).collect();
    if n == 1 {
        return vec![-c[0]];
    }
    // Cauchy bound on root moduli
    let bound = 1.0 + c[..n].iter().map(|a| a.norm()).fold(0.0, f64::max);
    let radius = bound.min(
        c[..n]
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > 0.0)
            .map(|(k, a)| 2.0 * a.norm().powf(1.0 / (n - k) as f64))
            .fold(0.0, f64::max)
            .max(1e-3),
    );
    let mut z: Vec<C64> = (0..n)
        .map(|k| C64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..2000 {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (pv, dpv) = horner(&c, z[k]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dpv;
            let repulsion: C64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| {
                    let d = z[k] - z[j];
                    if d.norm() == 0.0 {
                        C64::new(0.0, 0.0)
                    } else {
                        1.0 / d
                    }
                })
                .sum();
            let denom = C64::new(1.0, 0.0) - ratio * repulsion;
            let step = if dpv.norm() == 0.0 || !ratio.re.is_finite() {
                C64::new(1e-8 * (1.0 + z[k].norm()), 0.0)
            } else {
                ratio / denom
            };
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    z
}

/// Best rational approximation with denominator at most `max_den`.
fn rationalize(x: f64, max_den: i64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = v - a;
        if frac.abs() < 1e-14 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

fn exact_candidate(z: C64, factor: &UniPoly<GaussRat>) -> Option<GaussRat> {
    let snap = |v: f64| {
        if v.abs() < 1e-12 {
            Some(BigRational::zero())
        } else {
            rationalize(v, 1_000_000)
        }
    };
    let g = GaussRat::new(snap(z.re)?, snap(z.im)?);
    factor.eval(&g).is_zero().then_some(g)
}

/// Roots of the exact characteristic polynomial, grouped by multiplicity.
pub fn roots_exact(p: &MonicPoly<GaussRat>) -> Vec<Eigen> {
    let mut out = Vec::new();
    for (i, factor) in square_free_factorization(p).iter().enumerate() {
        let Some(d) = factor.degree() else { continue };
        if d == 0 {
            continue;
        }
        let monic = factor.make_monic();
        if d == 1 {
            let r = -monic.coeff(0);
            out.push(Eigen {
                value: r.to_c64(),
                multiplicity: i + 1,
                exact: Some(r),
            });
            continue;
        }
        let fc = monic.map(GaussRat::to_c64);
        let fdc = fc.derivative();
        for mut z in poly_roots(&fc) {
            for _ in 0..3 {
                let d = fdc.eval(&z);
                if d.norm() == 0.0 {
                    break;
                }
                let step = fc.eval(&z) / d;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                z -= step;
            }
            let exact = exact_candidate(z, &monic);
            out.push(Eigen {
                value: exact.as_ref().map_or(z, GaussRat::to_c64),
                multiplicity: i + 1,
                exact,
            });
        }
    }
    sort_eigen(&mut out);
    out
}

/// Eigenvalues of an exact matrix with exact multiplicities.
pub fn spectrum_exact(m: &Matrix<GaussRat>) -> Result<Vec<Eigen>> {
    Ok(roots_exact(&char_poly(m)?))
}

/// Eigenvalues of a floating matrix: roots of the floating characteristic
/// polynomial clustered within `10³·rel_tol·(1 + ‖Φ‖)`.
pub fn spectrum_float(m: &Matrix<C64>, rel_tol: f64) -> Result<Vec<Eigen>> {
    let p = char_poly(m)?;
    let roots = poly_roots(p.poly());
    let radius = 1e3 * rel_tol * (1.0 + m.frobenius_norm());
    let mut out: Vec<Eigen> = cluster(&roots, radius)
        .into_iter()
        .map(|group| {
            let k = group.len();
            let mean = group.iter().sum::<C64>() / k as f64;
            Eigen {
                value: mean,
                multiplicity: k,
                exact: None,
            }
        })
        .collect();
    sort_eigen(&mut out);
    Ok(out)
}

/// Single-linkage clustering of points closer than `radius`.
pub fn cluster(points: &[C64], radius: f64) -> Vec<Vec<C64>> {
    let n = points.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn find(l: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while l[r] != r {
            r = l[r];
        }
        l[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (points[i] - points[j]).norm() <= radius {
                let (a, b) = (find(&mut label, i), find(&mut label, j));
                if a != b {
                    label[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<(usize, Vec<C64>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut label, i);
        match groups.iter_mut().find(|(root, _)| *root == r) {
            Some((_, g)) => g.push(points[i]),
            None => groups.push((r, vec![points[i]])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Lexicographic (re, im) order on values.
pub fn sort_eigen(v: &mut [Eigen]) {
    v.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
}
