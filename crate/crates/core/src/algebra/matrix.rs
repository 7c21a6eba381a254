use std::fmt;
use std::ops::{Index, IndexMut};

use super::multipoly::MultiPoly;
use super::scalar::{Field, GaussRat, Magnitude, Ring, C64};

/// Dense row-major matrix over a ring.
#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_fn(rows.len(), cols.len(), |r, c| self[(rows[r], cols[c])].clone())
    }

    pub fn from_columns(rows: usize, columns: &[Vec<T>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { T::one() } else { T::zero() })
    }

    pub fn scalar(n: usize, s: &T) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { s.clone() } else { T::zero() })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Ring::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() + other[(r, c)].clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| self[(r, c)].clone() - other[(r, c)].clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = &other[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let cur = std::mem::replace(&mut out[(r, c)], T::zero());
                    out[(r, c)] = cur + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                (0..self.cols).fold(T::zero(), |acc, c| acc + self[(r, c)].clone() * v[c].clone())
            })
            .collect()
    }

    /// `λI − self`, for square matrices.
    pub fn shifted(&self, lambda: &T) -> Self {
        assert!(self.is_square());
        Matrix::from_fn(self.rows, self.cols, |r, c| {
            let d = if r == c { lambda.clone() } else { T::zero() };
            d - self[(r, c)].clone()
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Block-diagonal matrix from square blocks.
    pub fn block_diag(blocks: &[Matrix<T>]) -> Self {
        let n: usize = blocks.iter().map(Matrix::rows).sum();
        let mut out = Matrix::zeros(n, n);
        let mut off = 0;
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out[(off + r, off + c)] = b[(r, c)].clone();
                }
            }
            off += b.rows;
        }
        out
    }
}

impl<T: Field + Magnitude> Matrix<T> {
    /// Gauss–Jordan inverse with partial pivoting by magnitude; `None` when
    /// a pivot column is exactly zero.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<T>::identity(n);
        for k in 0..n {
            let p = (k..n)
                .filter(|&r| !a[(r, k)].is_zero())
                .max_by(|&x, &y| a[(x, k)].magnitude().total_cmp(&a[(y, k)].magnitude()))?;
            if p != k {
                for c in 0..n {
                    a.data.swap(p * n + c, k * n + c);
                    inv.data.swap(p * n + c, k * n + c);
                }
            }
            let d = a[(k, k)].inv()?;
            for c in 0..n {
                a[(k, c)] = a[(k, c)].clone() * d.clone();
                inv[(k, c)] = inv[(k, c)].clone() * d.clone();
            }
            for r in 0..n {
                if r == k || a[(r, k)].is_zero() {
                    continue;
                }
                let f = a[(r, k)].clone();
                for c in 0..n {
                    a[(r, c)] = a[(r, c)].clone() - f.clone() * a[(k, c)].clone();
                    inv[(r, c)] = inv[(r, c)].clone() - f.clone() * inv[(k, c)].clone();
                }
            }
        }
        Some(inv)
    }
}

impl Matrix<C64> {
    pub fn adjoint(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl Matrix<GaussRat> {
    pub fn to_c64(&self) -> Matrix<C64> {
        self.map(GaussRat::to_c64)
    }
}

impl Matrix<MultiPoly> {
    pub fn eval(&self, point: &[GaussRat]) -> Matrix<GaussRat> {
        self.map(|p| p.eval(point))
    }

    pub fn eval_c64(&self, point: &[C64]) -> Matrix<C64> {
        self.map(|p| p.eval_c64(point))
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (r, c): (usize, usize)) -> &T {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut T {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(rows: Vec<Vec<i64>>) -> Matrix<GaussRat> {
        Matrix::from_rows(rows).map(|&k| GaussRat::from_i64(k))
    }

    #[test]
    fn power_of_nilpotent_shift() {
        let j3 = int(vec![vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]]);
        assert!(!j3.pow(2).is_zero());
        assert!(j3.pow(3).is_zero());
        assert_eq!(j3.pow(0), Matrix::identity(3));
    }

    #[test]
    fn exact_inverse() {
        let a = int(vec![vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(3));
        assert!(int(vec![vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn block_diag_layout() {
        let a = int(vec![vec![1, 2], vec![3, 4]]);
        let b = int(vec![vec![5]]);
        let d = Matrix::block_diag(&[a, b]);
        assert_eq!(d, int(vec![vec![1, 2, 0], vec![3, 4, 0], vec![0, 0, 5]]));
    }
}
