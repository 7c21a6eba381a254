//! Sparse multivariate polynomials over the Gaussian rationals.
//!
//! Exponent vectors are stored with trailing zeros trimmed, so constants have
//! the empty exponent vector and polynomials in different numbers of
//! variables combine without padding. The map is ordered lexicographically
//! with ζ_1 > ζ_2 > …, which makes the last entry the leading term.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::scalar::{Field, GaussRat, Ring, C64};

type Exponent = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Exponent, GaussRat>,
}

fn trim(mut e: Exponent) -> Exponent {
    while e.last() == Some(&0) {
        e.pop();
    }
    e
}

fn add_exp(a: &[u32], b: &[u32]) -> Exponent {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0))
        .collect()
}

fn sub_exp(a: &[u32], b: &[u32]) -> Option<Exponent> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = Vec::with_capacity(a.len());
    for (i, &ai) in a.iter().enumerate() {
        let bi = b.get(i).copied().unwrap_or(0);
        out.push(ai.checked_sub(bi)?);
    }
    Some(trim(out))
}

impl MultiPoly {
    pub fn constant(c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        MultiPoly { terms }
    }

    /// The variable ζ_{index} (zero-based).
    pub fn var(index: usize) -> Self {
        let mut e = vec![0; index + 1];
        e[index] = 1;
        Self::monomial(e, GaussRat::one())
    }

    pub fn monomial(exponent: Exponent, c: GaussRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(trim(exponent), c);
        }
        MultiPoly { terms }
    }

    /// Builds from (exponent, coefficient) pairs, summing duplicates.
    pub fn from_terms(pairs: impl IntoIterator<Item = (Exponent, GaussRat)>) -> Self {
        let mut p = MultiPoly::default();
        for (e, c) in pairs {
            p.add_term(trim(e), c);
        }
        p
    }

    fn add_term(&mut self, e: Exponent, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = &*o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of the given exponent (trailing zeros ignored).
    pub fn coeff(&self, exponent: &[u32]) -> GaussRat {
        self.terms
            .get(&trim(exponent.to_vec()))
            .cloned()
            .unwrap_or_else(GaussRat::zero)
    }

    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    /// Number of variables actually referenced.
    pub fn num_vars_used(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn leading_term(&self) -> Option<(&Exponent, &GaussRat)> {
        self.terms.iter().next_back()
    }

    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = &t * &point[i].pow(k);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    pub fn eval_c64(&self, point: &[C64]) -> C64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .enumerate()
                    .fold(c.to_c64(), |t, (i, &k)| t * point[i].powu(k))
            })
            .sum()
    }

    /// Largest coefficient modulus times the number of terms; a crude bound
    /// on |p| over the closed unit polydisk.
    pub fn coefficient_l1(&self) -> f64 {
        self.terms.values().map(|c| c.to_c64().norm()).sum()
    }

    pub fn scale(&self, s: &GaussRat) -> Self {
        if s.is_zero() {
            return MultiPoly::default();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        let (de, dc) = d.leading_term()?;
        let dc_inv = dc.inv()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::default();
        while let Some((re, rc)) = rem.leading_term() {
            let e = sub_exp(re, de)?;
            let c = rc * &dc_inv;
            let t = MultiPoly::monomial(e.clone(), c.clone());
            rem = rem - d.clone() * t;
            quot.add_term(e, c);
        }
        Some(quot)
    }

    /// Renders with the given variable names, e.g. `2*z*w^2 - 1`.
    pub fn to_string_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
                    if k == 1 {
                        name
                    } else {
                        format!("{name}^{k}")
                    }
                })
                .collect();
            let (neg, body) = coeff_text(c);
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (body.as_str(), mono.is_empty()) {
                (b, true) => out.push_str(b),
                ("1", false) => out.push_str(&mono.join("*")),
                (b, false) => {
                    out.push_str(b);
                    out.push('*');
                    out.push_str(&mono.join("*"));
                }
            }
        }
        out
    }
}

/// Sign and body of a coefficient in the entry grammar (no division allowed
/// there, so non-integer rationals are written as `(p/q)` for display only).
fn coeff_text(c: &GaussRat) -> (bool, String) {
    let fmt_rat = |q: &num_rational::BigRational| {
        if q.is_integer() {
            q.numer().to_string()
        } else {
            format!("({}/{})", q.numer(), q.denom())
        }
    };
    if c.im.is_zero() {
        (c.re.is_negative(), fmt_rat(&c.re.abs()))
    } else if c.re.is_zero() {
        let body = if c.im.abs().is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rat(&c.im.abs()))
        };
        (c.im.is_negative(), body)
    } else {
        let im = if c.im.is_negative() {
            format!(" - {}*i", fmt_rat(&c.im.abs()))
        } else {
            format!(" + {}*i", fmt_rat(&c.im))
        };
        let re = if c.re.is_negative() {
            format!("-{}", fmt_rat(&c.re.abs()))
        } else {
            fmt_rat(&c.re)
        };
        (false, format!("({re}{im})"))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with(&[]))
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(mut self, rhs: MultiPoly) -> MultiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(mut self, rhs: MultiPoly) -> MultiPoly {
        for (e, c) in rhs.terms {
            self.add_term(e, -c);
        }
        self
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::default();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(add_exp(ea, eb), ca * cb);
            }
        }
        out
    }
}

impl Ring for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn one() -> Self {
        MultiPoly::constant(GaussRat::one())
    }
    fn from_i64(k: i64) -> Self {
        MultiPoly::constant(GaussRat::from_i64(k))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn div_int(&self, k: i64) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.div_int(k))).collect(),
        }
    }
}
