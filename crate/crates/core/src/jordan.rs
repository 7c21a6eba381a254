//! Jordan structure from ranks: rank profiles, block census, Θ_Φ, the rank
//! identities tying them together, explicit Jordan bases and the local
//! similarity transform built from the Wasow map.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{
    char_poly, gcd_squarefree_oracle, spectrum_exact, spectrum_float, GaussRat, Magnitude, Matrix, Ring, C64,
};
use crate::error::{Error, Result};
use crate::ranklab::{exact_rank, jacobi_svd, kernel_basis, numerical_rank_scaled, op_norm};
use crate::scanner::MatrixFamily;
use crate::tracker::{char_poly_at, char_poly_at_c64, contour_root, isolate, rouche_holds};

/// Scalars whose matrices have a rank: exact for Gaussian rationals,
/// numerical (SVD threshold) for floats.
pub trait RankScalar: Ring + Magnitude {
    /// `scale` is a reference magnitude for the floating threshold.
    fn rank(m: &Matrix<Self>, rel_tol: f64, scale: f64) -> Result<usize>;
    fn as_c64(&self) -> C64;
    fn as_exact(&self) -> Option<GaussRat>;
    /// ‖m‖ is zero, or at most `tol` on the floating path.
    fn negligible(m: &Matrix<Self>, tol: f64) -> (bool, f64);
    const EXACT: bool;
}

impl RankScalar for GaussRat {
    fn rank(m: &Matrix<Self>, _rel_tol: f64, _scale: f64) -> Result<usize> {
        Ok(exact_rank(m))
    }
    fn as_c64(&self) -> C64 {
        self.to_c64()
    }
    fn as_exact(&self) -> Option<GaussRat> {
        Some(self.clone())
    }
    fn negligible(m: &Matrix<Self>, _tol: f64) -> (bool, f64) {
        let z = m.is_zero();
        (z, if z { 0.0 } else { m.to_c64().max_abs() })
    }
    const EXACT: bool = true;
}

impl RankScalar for C64 {
    fn rank(m: &Matrix<Self>, rel_tol: f64, scale: f64) -> Result<usize> {
        Ok(numerical_rank_scaled(m, rel_tol, scale)?.rank)
    }
    fn as_c64(&self) -> C64 {
        *self
    }
    fn as_exact(&self) -> Option<GaussRat> {
        None
    }
    fn negligible(m: &Matrix<Self>, tol: f64) -> (bool, f64) {
        let v = op_norm(m);
        (v <= tol, v)
    }
    const EXACT: bool = false;
}

/// r_k = rank (λ − Φ)^k for k = 0 … n+1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct JordanCensus {
    pub eigenvalues: Vec<C64>,
    pub exact: Vec<Option<GaussRat>>,
    pub multiplicities: Vec<usize>,
    /// Per eigenvalue: block size ℓ ↦ θ_ℓ (only nonzero counts).
    pub blocks: Vec<BTreeMap<usize, usize>>,
    pub aggregate: BTreeMap<usize, usize>,
    pub profiles: Vec<RankProfile>,
    pub exact_ranks: bool,
}

impl JordanCensus {
    pub fn n(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Block sizes of eigenvalue `j`, descending.
    pub fn block_sizes(&self, j: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (&size, &count) in self.blocks[j].iter().rev() {
            out.extend(std::iter::repeat(size).take(count));
        }
        out
    }

    /// Block multiset per eigenvalue, for comparisons.
    pub fn signature(&self) -> Vec<Vec<usize>> {
        (0..self.blocks.len()).map(|j| self.block_sizes(j)).collect()
    }
}

fn lex(a: C64, b: C64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

pub fn rank_profile<T: RankScalar>(phi: &Matrix<T>, lambda: &T, rel_tol: f64) -> Result<RankProfile> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    let n = phi.rows();
    let b = phi.shifted(lambda);
    let mut ranks = vec![n];
    if !T::EXACT {
        ranks.extend(float_power_ranks(&b.map(RankScalar::as_c64), n + 1, rel_tol, 0.0)?);
        return Ok(RankProfile { ranks });
    }
    let mut p = b.clone();
    for k in 1..=n + 1 {
        if k > 1 {
            p = p.mul(&b);
        }
        ranks.push(T::rank(&p, rel_tol, 0.0)?);
    }
    Ok(RankProfile { ranks })
}

/// rank B^k for k = 1 … `kmax` in floating point, as rank(B·Q_{k−1}) with Q_{k−1}
/// an orthonormal basis of range B^{k−1}. Singular values count when above
/// both `rel_tol`·‖B‖·n and `noise`, the rounding already present in B.
/// Thresholds never involve ‖B‖^k, so rounding in explicit powers never enters.
pub fn float_power_ranks(b: &Matrix<C64>, kmax: usize, rel_tol: f64, noise: f64) -> Result<Vec<usize>> {
    let n = b.rows();
    let thr = (rel_tol * op_norm(b) * n as f64).max(noise);
    let mut q = Matrix::<C64>::identity(n);
    let mut out = Vec::with_capacity(kmax);
    for _ in 0..kmax {
        let r = if q.cols() == 0 {
            0
        } else {
            let svd = jacobi_svd(&b.mul(&q));
            let rank = svd.values.iter().filter(|&&v| v > thr && v > 0.0).count();
            q = Matrix::from_columns(n, &svd.u[..rank]);
            rank
        };
        out.push(r);
    }
    Ok(out)
}

/// Spectral norm on the floating path (zero on the exact path, where it is unused).
fn norm_of<T: RankScalar>(m: &Matrix<T>) -> f64 {
    if T::EXACT {
        0.0
    } else {
        op_norm(&m.map(RankScalar::as_c64))
    }
}

fn check_distinct<T: RankScalar>(values: &[T]) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Err(Error::RepeatedEigenvalue);
            }
        }
    }
    Ok(())
}

/// θ_k(Φ, λ_j) = r_{k−1} + r_{k+1} − 2 r_k from the rank profile of each
/// eigenvalue. Eigenvalues are reordered lexicographically by (re, im).
pub fn jordan_census<T: RankScalar>(
    phi: &Matrix<T>,
    eigen: &[(T, usize)],
    rel_tol: f64,
) -> Result<JordanCensus> {
    let n = phi.rows();
    let mut eigen: Vec<(T, usize)> = eigen.to_vec();
    eigen.sort_by(|a, b| lex(a.0.as_c64(), b.0.as_c64()));
    check_distinct(&eigen.iter().map(|e| e.0.clone()).collect::<Vec<_>>())?;
    let total: usize = eigen.iter().map(|e| e.1).sum();
    if total != n {
        return Err(Error::InconsistentCensus {
            msg: format!("multiplicities sum to {total}, matrix size is {n}"),
            profile: Vec::new(),
        });
    }
    let mut census = JordanCensus {
        eigenvalues: eigen.iter().map(|e| e.0.as_c64()).collect(),
        exact: eigen.iter().map(|e| e.0.as_exact()).collect(),
        multiplicities: eigen.iter().map(|e| e.1).collect(),
        blocks: Vec::new(),
        aggregate: BTreeMap::new(),
        profiles: Vec::new(),
        exact_ranks: T::EXACT,
    };
    for (lambda, nj) in &eigen {
        let profile = rank_profile(phi, lambda, rel_tol)?;
        let r = &profile.ranks;
        let mut blocks = BTreeMap::new();
        let mut weighted = 0;
        for k in 1..=n {
            let theta = r[k - 1] as i64 + r[k + 1] as i64 - 2 * r[k] as i64;
            if theta < 0 {
                return Err(Error::InconsistentCensus {
                    msg: format!("negative block count θ_{k} = {theta} at λ = {}", lambda.as_c64()),
                    profile: r.clone(),
                });
            }
            if theta > 0 {
                blocks.insert(k, theta as usize);
                *census.aggregate.entry(k).or_insert(0) += theta as usize;
                weighted += k * theta as usize;
            }
        }
        if weighted != *nj {
            return Err(Error::InconsistentCensus {
                msg: format!("blocks at λ = {} cover {weighted}, multiplicity is {nj}", lambda.as_c64()),
                profile: r.clone(),
            });
        }
        census.blocks.push(blocks);
        census.profiles.push(profile);
    }
    Ok(census)
}

/// Census of an exact matrix. Eigenvalues come from the exact square-free
/// factorization of the characteristic polynomial; ranks are exact when all
/// eigenvalues are Gaussian rationals and numerical otherwise.
pub fn census_exact(phi: &Matrix<GaussRat>, rel_tol: f64) -> Result<JordanCensus> {
    let spec = spectrum_exact(phi)?;
    if spec.iter().all(|e| e.exact.is_some()) {
        let eig: Vec<(GaussRat, usize)> =
            spec.into_iter().map(|e| (e.exact.unwrap(), e.multiplicity)).collect();
        jordan_census(phi, &eig, rel_tol)
    } else {
        let eig: Vec<(C64, usize)> = spec.iter().map(|e| (e.value, e.multiplicity)).collect();
        jordan_census(&phi.to_c64(), &eig, rel_tol)
    }
}

/// Census of a floating matrix with clustered eigenvalues.
pub fn census_float(phi: &Matrix<C64>, rel_tol: f64) -> Result<JordanCensus> {
    let eig: Vec<(C64, usize)> =
        spectrum_float(phi, rel_tol)?.iter().map(|e| (e.value, e.multiplicity)).collect();
    jordan_census(phi, &eig, rel_tol)
}

/// Θ_Φ = (λ_1 − Φ)⋯(λ_m − Φ) over distinct eigenvalues.
pub fn theta_product<T: RankScalar>(phi: &Matrix<T>, eigenvalues: &[T]) -> Result<Matrix<T>> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    check_distinct(eigenvalues)?;
    let mut theta = Matrix::identity(phi.rows());
    for l in eigenvalues {
        theta = theta.mul(&phi.shifted(l));
    }
    Ok(theta)
}

/// Θ_Φ = (−1)^m q_0(Φ) with q_0 the square-free part of the characteristic
/// polynomial; needs no eigenvalues.
pub fn theta_square_free(phi: &Matrix<GaussRat>) -> Result<Matrix<GaussRat>> {
    let (m, q0) = gcd_squarefree_oracle(&char_poly(phi)?);
    let t = q0.poly().eval_matrix(phi);
    Ok(if m % 2 == 1 { t.neg() } else { t })
}

/// Distinct eigenvalue count and rank Θ^k for k = 1 … n−1, exactly.
pub fn theta_power_ranks(a: &Matrix<GaussRat>) -> Result<(usize, Vec<usize>)> {
    let n = a.rows();
    let (m, q0) = gcd_squarefree_oracle(&char_poly(a)?);
    // the sign of Θ does not affect ranks
    let theta = q0.poly().eval_matrix(a);
    let mut ranks = Vec::with_capacity(n.saturating_sub(1));
    let mut pw = theta.clone();
    for k in 1..n {
        if ranks.last() == Some(&0) {
            ranks.push(0);
            continue;
        }
        if k > 1 {
            pw = pw.mul(&theta);
        }
        ranks.push(exact_rank(&pw));
    }
    Ok((m, ranks))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub identity: &'static str,
    pub j: Option<usize>,
    pub k: Option<usize>,
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub checks: Vec<IdentityCheck>,
    pub all_pass: bool,
}

impl IdentityReport {
    pub fn failures(&self) -> impl Iterator<Item = &IdentityCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Checks the rank identities linking the census, the rank profiles and Θ:
/// stabilization of rank (λ_j − Φ)^k at n − n_j, nilpotency Θ^n = 0, and the
/// two formulas for rank Θ^k (1 ≤ k ≤ n−1). Rank profiles are recomputed
/// from Φ, so a census that does not belong to Φ is caught.
pub fn verify_rank_identities<T: RankScalar>(
    phi: &Matrix<T>,
    eigenvalues: &[T],
    census: &JordanCensus,
    rel_tol: f64,
) -> Result<IdentityReport> {
    let n = phi.rows();
    let m = eigenvalues.len();
    let mut checks = Vec::new();
    let mut push = |identity, j, k, lhs: f64, rhs: f64, pass: bool| {
        checks.push(IdentityCheck { identity, j, k, lhs, rhs, pass });
    };
    if census.multiplicities.len() != m {
        push("census-eigenvalue-count", None, None, census.multiplicities.len() as f64, m as f64, false);
        return Ok(IdentityReport { checks, all_pass: false });
    }
    let profiles: Vec<RankProfile> = eigenvalues
        .iter()
        .map(|l| rank_profile(phi, l, rel_tol))
        .collect::<Result<_>>()?;
    for (j, prof) in profiles.iter().enumerate() {
        let nj = census.multiplicities[j];
        for k in nj..=n {
            let r = prof.ranks[k];
            push("rank-stabilization", Some(j), Some(k), r as f64, (n - nj.min(n)) as f64, r + nj == n);
        }
        let covered: usize = census.blocks[j].iter().map(|(l, t)| l * t).sum();
        push("census-multiplicity", Some(j), None, covered as f64, nj as f64, covered == nj);
    }
    let mut summed: BTreeMap<usize, usize> = BTreeMap::new();
    for b in &census.blocks {
        for (&l, &t) in b {
            *summed.entry(l).or_insert(0) += t;
        }
    }
    let agg_ok = summed == census.aggregate;
    push("census-aggregate", None, None, summed.values().sum::<usize>() as f64, census.aggregate.values().sum::<usize>() as f64, agg_ok);

    let theta = theta_product(phi, eigenvalues)?;
    let norm = phi.map(RankScalar::as_c64);
    let tol = 1e-8 * (1.0 + op_norm(&norm)).powi((n * m) as i32);
    let (zero, size) = T::negligible(&theta.pow(n as u32), tol);
    push("theta-nilpotent", None, Some(n), size, if T::EXACT { 0.0 } else { tol }, zero);

    let theta_ranks = if T::EXACT {
        let mut pw = Matrix::identity(n);
        (1..n)
            .map(|_| {
                pw = pw.mul(&theta);
                T::rank(&pw, rel_tol, 0.0)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        // Θ is a product of m factors; its rounding scales with their norms
        let noise = (n * m) as f64 * 1e-13 * eigenvalues.iter().map(|l| norm_of(&phi.shifted(l))).product::<f64>();
        float_power_ranks(&theta.map(RankScalar::as_c64), n.saturating_sub(1), rel_tol, noise)?
    };
    for k in 1..n {
        let rank = theta_ranks[k - 1] as i64;
        let sum: i64 = profiles.iter().map(|p| p.ranks[k] as i64).sum();
        let rhs_sum = n as i64 - (n * m) as i64 + sum;
        push("theta-rank-sum", None, Some(k), rank as f64, rhs_sum as f64, rank == rhs_sum);
        let mut rhs = n as i64;
        for (&l, &t) in &census.aggregate {
            rhs -= if l <= k { (l * t) as i64 } else { (k * t) as i64 };
        }
        push("theta-rank-census", None, Some(k), rank as f64, rhs as f64, rank == rhs);
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(IdentityReport { checks, all_pass })
}

/// Canonical Jordan matrix: eigenvalues in census order, sizes descending,
/// ones on the superdiagonal.
pub fn jordan_form(census: &JordanCensus) -> Matrix<C64> {
    let mut blocks = Vec::new();
    for (j, &l) in census.eigenvalues.iter().enumerate() {
        for size in census.block_sizes(j) {
            blocks.push(Matrix::from_fn(size, size, |r, c| {
                if r == c {
                    l
                } else if c == r + 1 {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }));
        }
    }
    Matrix::block_diag(&blocks)
}

#[derive(Clone, Debug)]
pub struct JordanBasis {
    pub t: Matrix<C64>,
    pub j: Matrix<C64>,
    pub residual: f64,
    pub condition: f64,
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn vnorm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Orthonormal basis of the span, dropping numerically dependent vectors.
fn orthonormalize(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut q: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let n0 = vnorm(v);
        if n0 == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for e in &q {
                let c = inner(e, &w);
                for (wi, ei) in w.iter_mut().zip(e) {
                    *wi -= c * ei;
                }
            }
        }
        let nw = vnorm(&w);
        if nw > 1e-10 * n0 {
            q.push(w.into_iter().map(|x| x / nw).collect());
        }
    }
    q
}

/// T with T⁻¹ΦT equal to the canonical Jordan form of the census.
///
/// Staircase construction per eigenvalue: chain heads of length k are taken
/// from ker B^k in the directions farthest from ker B^{k−1} plus the level-k
/// vectors of longer chains, with B = Φ − λ. Kernel dimensions come from
/// the census rank profiles.
pub fn jordan_basis(phi: &Matrix<C64>, census: &JordanCensus, rel_tol: f64) -> Result<JordanBasis> {
    let n = phi.rows();
    if census.n() != n {
        return Err(Error::InconsistentCensus {
            msg: format!("census covers {}, matrix size is {n}", census.n()),
            profile: Vec::new(),
        });
    }
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    for (j, &lambda) in census.eigenvalues.iter().enumerate() {
        let b = phi.sub(&Matrix::scalar(n, &lambda));
        let max_len = census.blocks[j].keys().next_back().copied().unwrap_or(0);
        let ranks = &census.profiles[j].ranks;
        let mut kernels: Vec<Vec<Vec<C64>>> = vec![Vec::new()];
        let mut pw = Matrix::identity(n);
        for k in 1..=max_len {
            pw = pw.mul(&b);
            let d = n - ranks[k];
            let svd = jacobi_svd(&pw);
            kernels.push(svd.v[n - d..].to_vec());
        }
        let mut chains: Vec<(usize, Vec<C64>)> = Vec::new();
        for k in (1..=max_len).rev() {
            let need = census.blocks[j].get(&k).copied().unwrap_or(0);
            if need == 0 {
                continue;
            }
            let mut w = kernels[k - 1].clone();
            for (len, head) in &chains {
                let mut v = head.clone();
                for _ in 0..len - k {
                    v = b.mul_vec(&v);
                }
                w.push(v);
            }
            let q = orthonormalize(&w);
            let kk = &kernels[k];
            let proj: Vec<Vec<C64>> = kk
                .iter()
                .map(|x| {
                    let mut p = x.clone();
                    for e in &q {
                        let c = inner(e, &p);
                        for (pi, ei) in p.iter_mut().zip(e) {
                            *pi -= c * ei;
                        }
                    }
                    p
                })
                .collect();
            let pm = Matrix::from_columns(n, &proj);
            let svd = jacobi_svd(&pm);
            if svd.values.len() < need || svd.values[need - 1] <= rel_tol {
                return Err(Error::IllConditioned { condition: f64::INFINITY });
            }
            for c in svd.v.iter().take(need) {
                let mut head = vec![C64::new(0.0, 0.0); n];
                for (coef, basis) in c.iter().zip(kk) {
                    for (h, x) in head.iter_mut().zip(basis) {
                        *h += coef * x;
                    }
                }
                let nh = vnorm(&head);
                chains.push((k, head.into_iter().map(|x| x / nh).collect()));
            }
        }
        for (len, head) in &chains {
            let mut chain = vec![head.clone()];
            for _ in 1..*len {
                chain.push(b.mul_vec(chain.last().unwrap()));
            }
            columns.extend(chain.into_iter().rev());
        }
    }
    let t = Matrix::from_columns(n, &columns);
    let jm = jordan_form(census);
    let sv = jacobi_svd(&t).values;
    let condition = sv[0] / sv[n - 1];
    let tinv = t.inverse().ok_or(Error::IllConditioned { condition })?;
    let residual = op_norm(&tinv.mul(phi).mul(&t).sub(&jm));
    if !(residual <= 1e-8 * (1.0 + op_norm(phi))) {
        return Err(Error::IllConditioned { condition });
    }
    Ok(JordanBasis { t, j: jm, residual, condition })
}

/// Matrix of Φ ↦ ΦA − JΦ on column-major vec(Φ): Aᵀ⊗I − I⊗J.
pub fn wasow_matrix(a: &Matrix<C64>, j: &Matrix<C64>) -> Matrix<C64> {
    let n = a.rows();
    let idx = |r: usize, c: usize| r + c * n;
    let mut m = Matrix::zeros(n * n, n * n);
    for r in 0..n {
        for c in 0..n {
            for k in 0..n {
                m[(idx(r, c), idx(r, k))] += a[(k, c)];
                m[(idx(r, c), idx(k, c))] -= j[(r, k)];
            }
        }
    }
    m
}

/// dim ker of the Wasow map when J is a Jordan form of A: Σ_j Σ_{a,b} min(a, b).
pub fn centralizer_dimension(census: &JordanCensus) -> usize {
    (0..census.blocks.len())
        .map(|j| {
            let s = census.block_sizes(j);
            s.iter().map(|a| s.iter().map(|b| a.min(b)).sum::<usize>()).sum::<usize>()
        })
        .sum()
}

#[derive(Clone, Debug, Serialize)]
pub struct TransformSample {
    pub point: Vec<C64>,
    pub eigenvalues: Vec<C64>,
    #[serde(skip)]
    pub t: Matrix<C64>,
    #[serde(skip)]
    pub j: Matrix<C64>,
    pub residual: f64,
    pub bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LocalTransform {
    pub census: JordanCensus,
    pub kernel_dimension: usize,
    pub samples: Vec<TransformSample>,
    pub all_pass: bool,
}

/// T(ζ) near a Jordan-stable ξ with T(ζ)⁻¹A(ζ)T(ζ) = J(ζ).
///
/// J(ζ) keeps the nilpotent parts of the census at ξ and moves the
/// eigenvalues along their branches (contour integrals over the isolating
/// disks at ξ). S(ζ) is the orthogonal projection of S(ξ) = T(ξ)⁻¹ onto
/// ker φ(ζ), φ(ζ)Φ = ΦA(ζ) − J(ζ)Φ, and T(ζ) = S(ζ)⁻¹.
pub fn local_jordan_transform(
    family: &MatrixFamily,
    xi: &[GaussRat],
    radius: f64,
    samples: &[Vec<C64>],
    rel_tol: f64,
) -> Result<LocalTransform> {
    let n = family.n();
    let a_xi = family.eval(xi)?;
    let census = census_exact(&a_xi, rel_tol)?;
    let a_xi_f = a_xi.to_c64();
    let basis = jordan_basis(&a_xi_f, &census, rel_tol)?;
    let s_xi = basis.t.inverse().ok_or(Error::SingularTransform)?;
    let cp = family.char_poly();
    let p_xi = char_poly_at(&cp, xi).poly().map(GaussRat::to_c64);
    let roots: Vec<(C64, usize)> =
        census.eigenvalues.iter().copied().zip(census.multiplicities.iter().copied()).collect();
    let state = isolate(&roots, xi.iter().map(GaussRat::to_c64).collect());
    let expected = centralizer_dimension(&census);
    let xi_f: Vec<C64> = xi.iter().map(GaussRat::to_c64).collect();
    let mut out = Vec::with_capacity(samples.len());
    for zeta in samples {
        let dist = zeta.iter().zip(&xi_f).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
        if dist > radius * (1.0 + 1e-12) {
            return Err(Error::Invalid(format!("sample at distance {dist} lies outside the disk of radius {radius}")));
        }
        let p = char_poly_at_c64(&cp, zeta);
        if !rouche_holds(&p_xi, &p, &state) {
            return Err(Error::Invalid("eigenvalue disks do not persist at a sample; shrink the radius".into()));
        }
        let lambdas: Vec<C64> = roots
            .iter()
            .map(|&(w, nj)| contour_root(&p, w, state.radius, nj))
            .collect::<Result<_>>()?;
        let mut moved = census.clone();
        moved.eigenvalues = lambdas.clone();
        let j = jordan_form(&moved);
        let a = family.eval_c64(zeta)?;
        let kernel = kernel_basis(&wasow_matrix(&a, &j), rel_tol)?;
        if kernel.len() != expected {
            return Err(Error::KernelDimension { expected, found: kernel.len() });
        }
        let vec_s: Vec<C64> = (0..n * n).map(|i| s_xi[(i % n, i / n)]).collect();
        let mut proj = vec![C64::new(0.0, 0.0); n * n];
        for k in &kernel {
            let c = inner(k, &vec_s);
            for (p, x) in proj.iter_mut().zip(k) {
                *p += c * x;
            }
        }
        let s = Matrix::from_fn(n, n, |r, c| proj[r + c * n]);
        let t = s.inverse().ok_or(Error::SingularTransform)?;
        let residual = op_norm(&s.mul(&a).mul(&t).sub(&j));
        let bound = 1e-6 * (1.0 + op_norm(&a));
        out.push(TransformSample {
            point: zeta.clone(),
            eigenvalues: lambdas,
            t,
            j,
            residual,
            bound,
            pass: residual <= bound,
        });
    }
    let all_pass = out.iter().all(|s| s.pass);
    Ok(LocalTransform { census, kernel_dimension: expected, samples: out, all_pass })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StabilityClass {
    NotStableSplit,
    NotStableJump,
    StableCandidate,
}

/// Sampled stability test at ξ: more distinct eigenvalues at some probe
/// means ξ splits; otherwise a probe with larger rank Θ^k (any 1 ≤ k ≤ n−1)
/// means a rank jump. All ranks are exact at the rational points.
pub fn is_jordan_stable_sample(
    family: &MatrixFamily,
    xi: &[GaussRat],
    probes: &[Vec<GaussRat>],
) -> Result<StabilityClass> {
    let (m, ranks) = theta_power_ranks(&family.eval(xi)?)?;
    let mut jump = false;
    for p in probes {
        let (mp, rp) = theta_power_ranks(&family.eval(p)?)?;
        if mp > m {
            return Ok(StabilityClass::NotStableSplit);
        }
        jump |= rp.iter().zip(&ranks).any(|(a, b)| a > b);
    }
    Ok(if jump { StabilityClass::NotStableJump } else { StabilityClass::StableCandidate })
}
