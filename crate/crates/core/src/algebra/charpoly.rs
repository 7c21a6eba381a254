use super::matrix::Matrix;
use super::scalar::Ring;
use super::unipoly::{MonicPoly, UniPoly};
use crate::error::{Error, Result};

/// det(λI − Φ) by the Faddeev–LeVerrier recursion.
///
/// Exact for exact scalars and for [`crate::algebra::MultiPoly`] entries.
/// The floating instantiation loses accuracy quickly with size; it is
/// supported for n ≤ 8.
pub fn char_poly<T: Ring>(phi: &Matrix<T>) -> Result<MonicPoly<T>> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    let n = phi.rows();
    let mut coeffs = vec![T::zero(); n + 1];
    coeffs[n] = T::one();
    let mut m = Matrix::<T>::zeros(n, n);
    for k in 1..=n {
        m = phi.mul(&m).add(&Matrix::scalar(n, &coeffs[n - k + 1]));
        let am = phi.mul(&m);
        coeffs[n - k] = -am.trace().div_int(k as i64);
    }
    MonicPoly::new(UniPoly::new(coeffs))
}
