use serde::Serialize;

use super::svd::jacobi_svd;
use crate::algebra::{GaussRat, Matrix, Ring, C64};
use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-8;

#[derive(Clone, Debug, Serialize)]
pub struct RankResult {
    pub rank: usize,
    /// Absolute threshold σ_max·rel_tol·max(rows, cols); zero on the exact path.
    pub tolerance_used: f64,
    pub singular_values: Option<Vec<f64>>,
}

fn check_input(m: &Matrix<C64>, rel_tol: f64) -> Result<()> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::Invalid("empty matrix".into()));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::Invalid(format!("rel_tol {rel_tol} outside (0, 1)")));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn threshold(values: &[f64], m: &Matrix<C64>, rel_tol: f64) -> f64 {
    let smax = values.first().copied().unwrap_or(0.0);
    rel_tol * smax * m.rows().max(m.cols()) as f64
}

/// Number of singular values above `rel_tol·σ_max·max(rows, cols)`.
pub fn numerical_rank(m: &Matrix<C64>, rel_tol: f64) -> Result<RankResult> {
    check_input(m, rel_tol)?;
    let mut values = jacobi_svd(m).values;
    values.truncate(m.rows().min(m.cols()));
    let thr = threshold(&values, m, rel_tol);
    let rank = values.iter().filter(|&&s| s > thr && s > 0.0).count();
    Ok(RankResult {
        rank,
        tolerance_used: thr,
        singular_values: Some(values),
    })
}

/// Like [`numerical_rank`], but the threshold uses max(σ_max, `scale`).
///
/// Powers and products of matrices can be pure rounding noise; `scale`
/// (e.g. the product of the factor norms) keeps that noise below threshold.
pub fn numerical_rank_scaled(m: &Matrix<C64>, rel_tol: f64, scale: f64) -> Result<RankResult> {
    check_input(m, rel_tol)?;
    let mut values = jacobi_svd(m).values;
    values.truncate(m.rows().min(m.cols()));
    let smax = values.first().copied().unwrap_or(0.0).max(scale);
    let thr = rel_tol * smax * m.rows().max(m.cols()) as f64;
    let rank = values.iter().filter(|&&s| s > thr && s > 0.0).count();
    Ok(RankResult {
        rank,
        tolerance_used: thr,
        singular_values: Some(values),
    })
}

/// Rank over the field by fraction-free (Bareiss) elimination with full pivoting.
pub fn exact_rank(m: &Matrix<GaussRat>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<Vec<GaussRat>> = (0..rows).map(|r| m.row(r).to_vec()).collect();
    let mut prev = GaussRat::one();
    let mut rank = 0;
    while rank < rows.min(cols) {
        let k = rank;
        let pivot = (k..rows)
            .flat_map(|r| (k..cols).map(move |c| (r, c)))
            .find(|&(r, c)| !a[r][c].is_zero());
        let Some((pr, pc)) = pivot else { break };
        a.swap(k, pr);
        if pc != k {
            for row in a.iter_mut() {
                row.swap(k, pc);
            }
        }
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num / prev.clone();
            }
            a[i][k] = GaussRat::zero();
        }
        prev = a[k][k].clone();
        rank += 1;
    }
    rank
}

/// Orthonormal basis of the numerical kernel: right singular vectors whose
/// singular value is at or below the rank threshold.
pub fn kernel_basis(m: &Matrix<C64>, rel_tol: f64) -> Result<Vec<Vec<C64>>> {
    check_input(m, rel_tol)?;
    let svd = jacobi_svd(m);
    let mut values = svd.values.clone();
    values.truncate(m.rows().min(m.cols()));
    let thr = threshold(&values, m, rel_tol);
    let rank = values.iter().filter(|&&s| s > thr && s > 0.0).count();
    Ok(svd.v.into_iter().skip(rank).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: Vec<Vec<f64>>) -> Matrix<C64> {
        Matrix::from_rows(rows).map(|&x| C64::new(x, 0.0))
    }

    fn gm(rows: Vec<Vec<i64>>) -> Matrix<GaussRat> {
        Matrix::from_rows(rows).map(|&x| GaussRat::from_i64(x))
    }

    #[test]
    fn numerical_rank_examples() {
        assert_eq!(numerical_rank(&Matrix::zeros(3, 3), 1e-8).unwrap().rank, 0);
        assert_eq!(numerical_rank(&Matrix::identity(3), 1e-8).unwrap().rank, 3);
        let r = numerical_rank(&cm(vec![vec![1.0, 0.0], vec![0.0, 1e-14]]), 1e-8).unwrap();
        assert_eq!(r.rank, 1);
        assert!((r.tolerance_used - 2e-8).abs() < 1e-20);
    }

    #[test]
    fn numerical_rank_rejects_bad_input() {
        let nan = cm(vec![vec![f64::NAN]]);
        assert!(matches!(numerical_rank(&nan, 1e-8), Err(Error::NonFinite)));
        assert!(numerical_rank(&Matrix::identity(2), 0.0).is_err());
        assert!(numerical_rank(&Matrix::zeros(0, 2), 1e-8).is_err());
    }

    #[test]
    fn scaled_rank_ignores_noise() {
        let noise = cm(vec![vec![1e-17, 0.0], vec![0.0, 0.0]]);
        assert_eq!(numerical_rank(&noise, 1e-8).unwrap().rank, 1);
        assert_eq!(numerical_rank_scaled(&noise, 1e-8, 1.0).unwrap().rank, 0);
    }

    #[test]
    fn exact_rank_examples() {
        assert_eq!(exact_rank(&gm(vec![vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(exact_rank(&Matrix::identity(4)), 4);
        assert_eq!(exact_rank(&Matrix::zeros(2, 5)), 0);
        // pivot needed away from the diagonal
        assert_eq!(exact_rank(&gm(vec![vec![0, 0, 1], vec![0, 0, 2], vec![3, 0, 0]])), 2);
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&Matrix::zeros(2, 3), 1e-8).unwrap();
        assert_eq!(k.len(), 3);
        let k = kernel_basis(&cm(vec![vec![1.0, 0.0], vec![0.0, 0.0]]), 1e-8).unwrap();
        assert_eq!(k.len(), 1);
        assert!(k[0][0].norm() < 1e-15);
        assert!((k[0][1].norm() - 1.0).abs() < 1e-15);
    }
}
