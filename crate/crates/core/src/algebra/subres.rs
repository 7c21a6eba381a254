//! Polynomials in λ whose coefficients are polynomials in the parameters.

use super::multipoly::MultiPoly;
use super::scalar::Ring;
use super::unipoly::UniPoly;
use crate::error::{Error, Result};

pub type ParamPoly = UniPoly<MultiPoly>;

fn div_coeffs(p: &ParamPoly, d: &MultiPoly) -> Result<ParamPoly> {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|c| c.div_exact(d))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::GcdDegeneration("inexact subresultant division".into()))?;
    Ok(UniPoly::new(coeffs))
}

/// gcd over the rational function field of the parameters, up to a factor
/// from that field, by the subresultant remainder sequence.
///
/// A constant result (degree 0) means the inputs are generically coprime.
pub fn subresultant_gcd(a: &ParamPoly, b: &ParamPoly) -> Result<ParamPoly> {
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    let (mut a, mut b) = if a.degree() >= b.degree() {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    let mut g = MultiPoly::one();
    let mut h = MultiPoly::one();
    loop {
        let d = (a.degree().unwrap() - b.degree().unwrap()) as u32;
        let (_, r) = a.pseudo_divrem(&b);
        if r.is_zero() {
            return Ok(b);
        }
        if r.degree() == Some(0) {
            return Ok(UniPoly::constant(MultiPoly::one()));
        }
        a = b;
        b = div_coeffs(&r, &(g.clone() * h.pow(d)))?;
        g = a.leading().unwrap().clone();
        if d > 0 {
            let num = g.pow(d);
            let den = h.pow(d - 1);
            h = num
                .div_exact(&den)
                .ok_or_else(|| Error::GcdDegeneration("inexact subresultant h update".into()))?;
        }
    }
}

/// Square-free part of a monic polynomial over the parameter ring:
/// returns (D, Q) with D·q0 = Q, where q0 = P / gcd(P, P') is monic.
///
/// Monic divisors of monic polynomials over a polynomial ring have
/// polynomial coefficients, so the content division normally yields D = 1.
pub fn square_free_part(p: &ParamPoly) -> Result<(MultiPoly, ParamPoly)> {
    if !p.is_monic() {
        return Err(Error::NotMonic("characteristic polynomial family".into()));
    }
    let g = subresultant_gcd(p, &p.derivative())?;
    if g.degree() == Some(0) {
        return Ok((MultiPoly::one(), p.clone()));
    }
    let (q, r) = p.pseudo_divrem(&g);
    if !r.is_zero() {
        return Err(Error::GcdDegeneration("gcd does not divide P".into()));
    }
    let lc = q.leading().unwrap().clone();
    match div_coeffs(&q, &lc) {
        Ok(monic) => Ok((MultiPoly::one(), monic)),
        Err(_) => Ok((lc, q)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussRat;

    fn z() -> MultiPoly {
        MultiPoly::var(0)
    }

    fn lam_minus(a: MultiPoly) -> ParamPoly {
        UniPoly::new(vec![-a, MultiPoly::one()])
    }

    #[test]
    fn double_root_family() {
        // (λ − z)² (λ − 1)
        let p = lam_minus(z()).mul(&lam_minus(z())).mul(&lam_minus(MultiPoly::one()));
        let (d, q0) = square_free_part(&p).unwrap();
        assert!(d.is_one());
        assert_eq!(q0, lam_minus(z()).mul(&lam_minus(MultiPoly::one())));
    }

    #[test]
    fn generically_squarefree() {
        // λ² − z², square-free for z ≠ 0
        let p = lam_minus(z()).mul(&lam_minus(-z()));
        let (d, q0) = square_free_part(&p).unwrap();
        assert!(d.is_one());
        assert_eq!(q0, p);
    }

    #[test]
    fn constant_square() {
        let lam = UniPoly::new(vec![MultiPoly::zero(), MultiPoly::one()]);
        let p = lam.mul(&lam);
        let (_, q0) = square_free_part(&p).unwrap();
        assert_eq!(q0, lam);
    }

    #[test]
    fn two_parameter_gcd() {
        let w = MultiPoly::var(1);
        let a = z() * w.clone() + MultiPoly::constant(GaussRat::from_i64(3));
        // (λ − a)³ (λ + w)
        let p = lam_minus(a.clone())
            .mul(&lam_minus(a.clone()))
            .mul(&lam_minus(a.clone()))
            .mul(&lam_minus(-w));
        let g = subresultant_gcd(&p, &p.derivative()).unwrap();
        assert_eq!(g.degree(), Some(2));
        let (_, q0) = square_free_part(&p).unwrap();
        assert_eq!(q0.degree(), Some(2));
        assert!(q0.is_monic());
    }
}
