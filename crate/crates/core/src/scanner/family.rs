use serde::{Deserialize, Serialize};

use crate::algebra::{char_poly, parse_entry, GaussRat, Matrix, MonicPoly, MultiPoly, C64};
use crate::error::{Error, Result};

/// n×n matrix of polynomials in the named parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFamily {
    pub params: Vec<String>,
    pub entries: Matrix<MultiPoly>,
    pub label: Option<String>,
}

/// Wire format of a family: entries are expression strings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilySpec {
    pub n: usize,
    pub params: Vec<String>,
    pub entries: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl MatrixFamily {
    pub fn new(params: Vec<String>, entries: Matrix<MultiPoly>, label: Option<String>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::NotSquare {
                rows: entries.rows(),
                cols: entries.cols(),
            });
        }
        if entries.rows() == 0 {
            return Err(Error::Invalid("family must have n >= 1".into()));
        }
        if params.is_empty() {
            return Err(Error::Invalid("family must have at least one parameter".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for p in &params {
            if !seen.insert(p) {
                return Err(Error::Invalid(format!("duplicate parameter name '{p}'")));
            }
        }
        if let Some(bad) = entries.iter().find(|e| e.num_vars_used() > params.len()) {
            return Err(Error::Invalid(format!("entry {bad} uses more than {} parameters", params.len())));
        }
        Ok(MatrixFamily { params, entries, label })
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<Self> {
        if spec.entries.len() != spec.n || spec.entries.iter().any(|r| r.len() != spec.n) {
            return Err(Error::Invalid(format!("entries must form a {0}x{0} grid", spec.n)));
        }
        let mut polys = Vec::with_capacity(spec.n * spec.n);
        for row in &spec.entries {
            for text in row {
                polys.push(parse_entry(text, &spec.params)?);
            }
        }
        MatrixFamily::new(spec.params.clone(), Matrix::from_vec(spec.n, spec.n, polys), spec.label.clone())
    }

    pub fn to_spec(&self) -> FamilySpec {
        let n = self.n();
        FamilySpec {
            n,
            params: self.params.clone(),
            entries: (0..n)
                .map(|r| self.entries.row(r).iter().map(|p| p.to_string_with(&self.params)).collect())
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn n(&self) -> usize {
        self.entries.rows()
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    fn check_point<T>(&self, point: &[T]) -> Result<()> {
        if point.len() != self.nparams() {
            return Err(Error::Invalid(format!(
                "point has {} coordinates, family has {} parameters",
                point.len(),
                self.nparams()
            )));
        }
        Ok(())
    }

    pub fn eval(&self, point: &[GaussRat]) -> Result<Matrix<GaussRat>> {
        self.check_point(point)?;
        Ok(self.entries.eval(point))
    }

    pub fn eval_c64(&self, point: &[C64]) -> Result<Matrix<C64>> {
        self.check_point(point)?;
        Ok(self.entries.eval_c64(point))
    }

    /// Characteristic polynomial with polynomial coefficients P_0(ζ) … P_n = 1.
    pub fn char_poly(&self) -> MonicPoly<MultiPoly> {
        char_poly(&self.entries).expect("family matrix is square")
    }

    /// True when no entry depends on a parameter.
    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(MultiPoly::is_constant)
    }
}

/// Exact conversion of a floating point; every finite double is a dyadic rational.
pub fn exact_point(point: &[C64]) -> Result<Vec<GaussRat>> {
    point.iter().map(|&z| GaussRat::from_c64(z).ok_or(Error::NonFinite)).collect()
}

pub fn float_point(point: &[GaussRat]) -> Vec<C64> {
    point.iter().map(GaussRat::to_c64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Ring;

    fn spec(entries: &[&[&str]], params: &[&str]) -> FamilySpec {
        FamilySpec {
            n: entries.len(),
            params: params.iter().map(|s| s.to_string()).collect(),
            entries: entries.iter().map(|r| r.iter().map(|s| s.to_string()).collect()).collect(),
            label: None,
        }
    }

    #[test]
    fn round_trip() {
        let s = spec(&[&["z*w", "-z^2"], &["w^2", "-z*w"]], &["z", "w"]);
        let f = MatrixFamily::from_spec(&s).unwrap();
        let again = MatrixFamily::from_spec(&f.to_spec()).unwrap();
        assert_eq!(f.entries, again.entries);
        let p = f.char_poly();
        assert!(p.coeffs()[0].is_zero() && p.coeffs()[1].is_zero());
    }

    #[test]
    fn validation() {
        assert!(MatrixFamily::from_spec(&spec(&[&["z", "1"]], &["z"])).is_err());
        assert!(MatrixFamily::from_spec(&spec(&[&["1"]], &[])).is_err());
        assert!(MatrixFamily::from_spec(&spec(&[&["q"]], &["z"])).is_err());
        assert!(MatrixFamily::from_spec(&spec(&[&["z"]], &["z", "z"])).is_err());
        let f = MatrixFamily::from_spec(&spec(&[&["z"]], &["z"])).unwrap();
        assert!(f.eval(&[]).is_err());
    }
}
