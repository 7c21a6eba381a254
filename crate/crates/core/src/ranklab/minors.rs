use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use super::rank::exact_rank;
use crate::algebra::{GaussRat, Matrix, MultiPoly, Ring};
use crate::error::{Error, Result};

/// Largest matrix dimension and order accepted by [`minors`].
pub const MINOR_DIM_CAP: usize = 9;

#[derive(Clone, Debug, PartialEq)]
pub struct Minor<T> {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: T,
}

fn bits(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| mask >> i & 1 == 1).collect()
}

fn masks(n: usize, k: usize) -> Vec<u16> {
    let mut out: Vec<u16> = (0u16..(1 << n)).filter(|m| m.count_ones() as usize == k).collect();
    // lexicographic order of the sorted index tuples
    out.sort_by_key(|&m| bits(m));
    out
}

/// All nonzero r×r minors, ordered by (row tuple, column tuple).
///
/// Built level by level with Laplace expansion along the last selected row,
/// so every subdeterminant is computed once and no division is needed.
pub fn minors<T: Ring>(m: &Matrix<T>, r: usize) -> Result<Vec<Minor<T>>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows > MINOR_DIM_CAP || cols > MINOR_DIM_CAP {
        return Err(Error::SizeLimit(format!(
            "minor enumeration supports dimensions up to {MINOR_DIM_CAP}, got {rows}x{cols}"
        )));
    }
    if r > rows.min(cols) {
        return Err(Error::Invalid(format!("order {r} exceeds matrix dimensions {rows}x{cols}")));
    }
    let mut level: HashMap<(u16, u16), T> = HashMap::new();
    level.insert((0, 0), T::one());
    for k in 1..=r {
        let rmasks = masks(rows, k);
        let cmasks = masks(cols, k);
        let pairs: Vec<(u16, u16)> = rmasks
            .iter()
            .flat_map(|&rm| cmasks.iter().map(move |&cm| (rm, cm)))
            .collect();
        let next: Vec<((u16, u16), T)> = pairs
            .par_iter()
            .map(|&(rm, cm)| {
                let top = 15 - rm.leading_zeros() as usize;
                let sub_r = rm & !(1 << top);
                let mut acc = T::zero();
                for (pos, c) in bits(cm).into_iter().enumerate() {
                    let a = &m[(top, c)];
                    if a.is_zero() {
                        continue;
                    }
                    let Some(sub) = level.get(&(sub_r, cm & !(1 << c))) else { continue };
                    if sub.is_zero() {
                        continue;
                    }
                    let term = a.clone() * sub.clone();
                    acc = if (k - 1 + pos) % 2 == 0 { acc + term } else { acc - term };
                }
                ((rm, cm), acc)
            })
            .collect();
        level = next.into_iter().collect();
    }
    let mut out = Vec::new();
    for rm in masks(rows, r) {
        for cm in masks(cols, r) {
            let v = &level[&(rm, cm)];
            if !v.is_zero() {
                out.push(Minor {
                    rows: bits(rm),
                    cols: bits(cm),
                    value: v.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Random Gaussian-rational point with numerators and denominators up to 10⁴.
pub fn random_rational_point<R: Rng>(rng: &mut R, nparams: usize) -> Vec<GaussRat> {
    (0..nparams)
        .map(|_| {
            let mut part = || {
                let num: i64 = rng.gen_range(-10_000..=10_000);
                let den: i64 = rng.gen_range(1..=10_000);
                GaussRat::ratio(num, den).re
            };
            GaussRat::new(part(), part())
        })
        .collect()
}

/// Number of random evaluation points used for generic ranks.
pub const GENERIC_RANK_SAMPLES: usize = 3;

/// Generic rank of a polynomial matrix: maximum exact rank over
/// [`GENERIC_RANK_SAMPLES`] random rational points. Can only under-estimate,
/// with probability bounded by (degree of the defining minor) / 10⁴ per
/// sample (Schwartz–Zippel).
pub fn generic_rank<R: Rng>(m: &Matrix<MultiPoly>, nparams: usize, rng: &mut R) -> usize {
    (0..GENERIC_RANK_SAMPLES)
        .map(|_| exact_rank(&m.eval(&random_rational_point(rng, nparams))))
        .max()
        .unwrap_or(0)
}

pub const SCHWARTZ_ZIPPEL_NOTE: &str = "generic ranks are the maximum exact rank over 3 random \
    Gaussian-rational points (numerators/denominators up to 1e4); failure probability per \
    sample is at most deg(minor)/1e4";

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn vars() -> [MultiPoly; 4] {
        [MultiPoly::var(0), MultiPoly::var(1), MultiPoly::var(2), MultiPoly::var(3)]
    }

    #[test]
    fn two_by_two_symbolic() {
        let [a, b, c, d] = vars();
        let m = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![c.clone(), d.clone()]]);
        let det = minors(&m, 2).unwrap();
        assert_eq!(det.len(), 1);
        assert_eq!(det[0].value, a.clone() * d.clone() - b.clone() * c.clone());
        let ones = minors(&m, 1).unwrap();
        let vals: Vec<MultiPoly> = ones.into_iter().map(|m| m.value).collect();
        assert_eq!(vals, vec![a, b, c, d]);
    }

    #[test]
    fn zero_minors_dropped_and_order_fixed() {
        let m = Matrix::from_rows(vec![vec![1, 0, 2], vec![0, 0, 0]]).map(|&k| GaussRat::from_i64(k));
        let ones = minors(&m, 1).unwrap();
        assert_eq!(ones.len(), 2);
        assert_eq!((ones[0].rows.clone(), ones[0].cols.clone()), (vec![0], vec![0]));
        assert_eq!(ones[1].cols, vec![2]);
        assert!(minors(&m, 2).unwrap().is_empty());
    }

    #[test]
    fn size_caps() {
        let big = Matrix::<GaussRat>::zeros(10, 2);
        assert!(matches!(minors(&big, 1), Err(Error::SizeLimit(_))));
        let m = Matrix::<GaussRat>::zeros(2, 2);
        assert!(minors(&m, 3).is_err());
    }

    #[test]
    fn generic_rank_of_symbolic_matrix() {
        let [a, b, ..] = vars();
        // rank 1 everywhere except the origin
        let m = Matrix::from_rows(vec![vec![a.clone(), b.clone()], vec![a.clone() * a.clone(), a * b]]);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert_eq!(generic_rank(&m, 2, &mut rng), 1);
    }
}
