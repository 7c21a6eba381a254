//! Random instances with known answers: monic polynomials with prescribed
//! root multiplicities, and matrices T·J·T⁻¹ with a prescribed Jordan form.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::{GaussRat, Matrix, MonicPoly, Ring};

/// All partitions of n, each in nonincreasing order.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            rec(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// `count` distinct Gaussian rationals (re, im ∈ {−6 … 6}/d, d ∈ {1, 2, 3}).
pub fn distinct_values<R: Rng>(rng: &mut R, count: usize) -> Vec<GaussRat> {
    let mut out: Vec<GaussRat> = Vec::with_capacity(count);
    while out.len() < count {
        let d = rng.gen_range(1..=3);
        let re = GaussRat::ratio(rng.gen_range(-6..=6), d);
        let im = if rng.gen_bool(0.5) { GaussRat::ratio(rng.gen_range(-6..=6), d) } else { GaussRat::zero() };
        let v = GaussRat::new(re.re, im.re);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct PolyInstance {
    pub roots: Vec<GaussRat>,
    pub multiplicities: Vec<usize>,
    pub poly: MonicPoly<GaussRat>,
}

/// Every multiplicity partition of every degree 1 … `max_degree`, repeated
/// with fresh roots until at least `min_count` instances exist.
pub fn polynomial_corpus<R: Rng>(rng: &mut R, max_degree: usize, min_count: usize) -> Vec<PolyInstance> {
    let shapes: Vec<Vec<usize>> = (1..=max_degree).flat_map(partitions).collect();
    let mut out = Vec::new();
    while out.len() < min_count {
        for shape in &shapes {
            let roots = distinct_values(rng, shape.len());
            let mut all = Vec::new();
            for (r, &k) in roots.iter().zip(shape) {
                all.extend(std::iter::repeat(r.clone()).take(k));
            }
            all.shuffle(rng);
            out.push(PolyInstance {
                poly: MonicPoly::from_roots(&all),
                roots,
                multiplicities: shape.clone(),
            });
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct JordanInstance {
    pub a: Matrix<GaussRat>,
    pub t: Matrix<GaussRat>,
    pub j: Matrix<GaussRat>,
    /// Distinct eigenvalues in lexicographic (re, im) order.
    pub eigenvalues: Vec<GaussRat>,
    /// Block sizes per eigenvalue, descending.
    pub blocks: Vec<Vec<usize>>,
}

/// Jordan matrix with the given eigenvalues and block sizes, in that order.
pub fn jordan_matrix(eigenvalues: &[GaussRat], blocks: &[Vec<usize>]) -> Matrix<GaussRat> {
    let mut parts = Vec::new();
    for (l, sizes) in eigenvalues.iter().zip(blocks) {
        for &s in sizes {
            parts.push(Matrix::from_fn(s, s, |r, c| {
                if r == c {
                    l.clone()
                } else if c == r + 1 {
                    GaussRat::one()
                } else {
                    GaussRat::zero()
                }
            }));
        }
    }
    Matrix::block_diag(&parts)
}

/// Integer matrix with determinant ±1: a row permutation times a product of
/// elementary shears I + c·E_ij with |c| ≤ 2.
pub fn random_unimodular<R: Rng>(rng: &mut R, n: usize) -> Matrix<GaussRat> {
    let mut t = Matrix::<GaussRat>::identity(n);
    if n == 1 {
        return if rng.gen_bool(0.5) { t } else { t.neg() };
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = GaussRat::from_i64([-2, -1, 1, 2][rng.gen_range(0..4)]);
        for col in 0..n {
            let v = t[(i, col)].clone() + c.clone() * t[(j, col)].clone();
            t[(i, col)] = v;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    Matrix::from_fn(n, n, |r, c| t[(perm[r], c)].clone())
}

/// Random A = T·J·T⁻¹ with n ∈ 1 … `max_n`, random eigenvalues and block
/// structure.
pub fn jordan_instance<R: Rng>(rng: &mut R, max_n: usize) -> JordanInstance {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=n);
    // split n into m positive multiplicities
    let mut mult = vec![1; m];
    for _ in 0..n - m {
        mult[rng.gen_range(0..m)] += 1;
    }
    let mut eigenvalues = distinct_values(rng, m);
    eigenvalues.sort_by(|a, b| a.lex_cmp(b));
    let blocks: Vec<Vec<usize>> = mult
        .iter()
        .map(|&k| {
            let shapes = partitions(k);
            shapes[rng.gen_range(0..shapes.len())].clone()
        })
        .collect();
    let j = jordan_matrix(&eigenvalues, &blocks);
    let t = random_unimodular(rng, n);
    let t_inv = t.inverse().expect("unimodular matrix is invertible");
    JordanInstance {
        a: t.mul(&j).mul(&t_inv),
        t,
        j,
        eigenvalues,
        blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn instances_are_consistent() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let inst = jordan_instance(&mut rng, 6);
            let n = inst.a.rows();
            let t_inv = inst.t.inverse().unwrap();
            assert_eq!(inst.t.mul(&t_inv), Matrix::identity(n));
            assert!(t_inv.iter().all(|x| x.is_real() && x.re.is_integer()));
            assert_eq!(inst.blocks.iter().flatten().sum::<usize>(), n);
        }
        let polys = polynomial_corpus(&mut rng, 6, 100);
        assert!(polys.len() >= 100);
        assert!(polys.iter().all(|p| p.poly.degree() == p.multiplicities.iter().sum::<usize>()));
    }
}
