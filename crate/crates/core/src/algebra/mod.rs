//! Scalars, polynomials, matrices and the entry parser.

mod charpoly;
mod matrix;
mod multipoly;
mod parse;
mod roots;
mod scalar;
mod subres;
mod unipoly;

pub use charpoly::char_poly;
pub use matrix::Matrix;
pub use multipoly::MultiPoly;
pub use parse::{eval_entry, parse_entry};
pub use roots::{cluster, poly_roots, roots_exact, sort_eigen, spectrum_exact, spectrum_float, Eigen};
pub use scalar::{rat_string, rat_to_f64, Field, GaussRat, Magnitude, Ring, C64};
pub use subres::{square_free_part, subresultant_gcd, ParamPoly};
pub use unipoly::{gcd_squarefree_oracle, square_free_factorization, MonicPoly, UniPoly};
