//! Univariate polynomials in λ.

use std::fmt;

use super::matrix::Matrix;
use super::scalar::{Field, GaussRat, Ring};
use crate::error::{Error, Result};

/// Dense univariate polynomial; `coeffs[k]` multiplies λ^k.
#[derive(Clone, PartialEq, Debug)]
pub struct UniPoly<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> UniPoly<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(Ring::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        UniPoly::new(vec![c])
    }

    /// λ^k.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![T::zero(); k + 1];
        c[k] = T::one();
        UniPoly { coeffs: c }
    }

    /// λ − a.
    pub fn linear(a: T) -> Self {
        UniPoly::new(vec![-a, T::one()])
    }

    /// Monic polynomial with the given roots (with repetition).
    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(UniPoly::constant(T::one()), |acc, r| acc.mul(&UniPoly::linear(r.clone())))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Ring::is_one)
    }

    pub fn derivative(&self) -> Self {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * T::from_i64(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn scale(&self, s: &T) -> Self {
        UniPoly::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let cur = std::mem::replace(&mut out[i + j], T::zero());
                out[i + j] = cur + a.clone() * b.clone();
            }
        }
        UniPoly::new(out)
    }

    /// Multiply by λ^k.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![T::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        UniPoly { coeffs: c }
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &Matrix<T>) -> Matrix<T> {
        let n = m.rows();
        let mut acc = Matrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m).add(&Matrix::scalar(n, c));
        }
        acc
    }

    pub fn map<U: Ring>(&self, f: impl FnMut(&T) -> U) -> UniPoly<U> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    /// Pseudo-division: returns (q, r) with lc(d)^(deg a − deg d + 1)·a = q·d + r.
    pub fn pseudo_divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let Some(da) = self.degree() else {
            return (UniPoly::zero(), UniPoly::zero());
        };
        if da < dd {
            return (UniPoly::zero(), self.clone());
        }
        let lc = d.leading().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); da - dd + 1];
        for step in (0..=da - dd).rev() {
            let top = r[step + dd].clone();
            for c in q.iter_mut() {
                *c = c.clone() * lc.clone();
            }
            q[step] = top.clone();
            for c in r.iter_mut() {
                *c = c.clone() * lc.clone();
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                let cur = std::mem::replace(&mut r[step + j], T::zero());
                r[step + j] = cur - top.clone() * dc.clone();
            }
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }
}

impl<T: Field> UniPoly<T> {
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let Some(da) = self.degree() else {
            return (UniPoly::zero(), UniPoly::zero());
        };
        if da < dd {
            return (UniPoly::zero(), self.clone());
        }
        let inv = d.leading().unwrap().inv().expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![T::zero(); da - dd + 1];
        for step in (0..=da - dd).rev() {
            let f = r[step + dd].clone() * inv.clone();
            if !f.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    let cur = std::mem::replace(&mut r[step + j], T::zero());
                    r[step + j] = cur - f.clone() * dc.clone();
                }
            }
            q[step] = f;
        }
        r.truncate(dd);
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            None => UniPoly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.make_monic()
    }
}

/// A polynomial with leading coefficient exactly one.
#[derive(Clone, PartialEq, Debug)]
pub struct MonicPoly<T>(UniPoly<T>);

impl<T: Ring> MonicPoly<T> {
    pub fn new(p: UniPoly<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::NotMonic("zero polynomial".into()));
        }
        if !p.is_monic() {
            return Err(Error::NotMonic(format!("leading coefficient {:?}", p.leading().unwrap())));
        }
        Ok(MonicPoly(p))
    }

    pub fn from_roots(roots: &[T]) -> Self {
        MonicPoly(UniPoly::from_roots(roots))
    }

    pub fn degree(&self) -> usize {
        self.0.degree().unwrap()
    }

    pub fn poly(&self) -> &UniPoly<T> {
        &self.0
    }

    pub fn into_poly(self) -> UniPoly<T> {
        self.0
    }

    /// Coefficients P_0 … P_n (P_n = 1).
    pub fn coeffs(&self) -> &[T] {
        self.0.coeffs()
    }
}

impl<T: Field> MonicPoly<T> {
    /// Normalizes a nonzero polynomial by its leading coefficient.
    pub fn normalized(p: &UniPoly<T>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::NotMonic("zero polynomial".into()));
        }
        Ok(MonicPoly(p.make_monic()))
    }
}

/// Distinct-root count and square-free part q0 = p / gcd(p, p').
pub fn gcd_squarefree_oracle(p: &MonicPoly<GaussRat>) -> (usize, MonicPoly<GaussRat>) {
    let g = p.poly().gcd(&p.poly().derivative());
    let (q0, r) = p.poly().divrem(&g);
    debug_assert!(r.is_zero());
    let q0 = MonicPoly(q0.make_monic());
    (q0.degree(), q0)
}

/// Square-free factorization p = ∏ a_i^i (Yun); entry `i − 1` holds a_i.
pub fn square_free_factorization(p: &MonicPoly<GaussRat>) -> Vec<UniPoly<GaussRat>> {
    let f = p.poly();
    let fp = f.derivative();
    let a0 = f.gcd(&fp);
    if a0.degree() == Some(0) {
        return vec![f.clone()];
    }
    let mut out = Vec::new();
    let mut b = f.divrem(&a0).0;
    let mut c = fp.divrem(&a0).0;
    let mut d = c.sub(&b.derivative());
    loop {
        let a = b.gcd(&d);
        out.push(a.clone());
        b = b.divrem(&a).0;
        if b.degree() == Some(0) {
            break;
        }
        c = d.divrem(&a).0;
        d = c.sub(&b.derivative());
    }
    while out.last().is_some_and(|a| a.degree() == Some(0)) {
        out.pop();
    }
    out
}

impl<T: Ring + fmt::Display> fmt::Display for UniPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*λ")?,
                _ => write!(f, "({c})*λ^{k}")?,
            }
        }
        Ok(())
    }
}
