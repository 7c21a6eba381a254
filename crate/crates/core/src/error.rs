use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown identifier '{name}' at position {pos}")]
    UnknownIdentifier { pos: usize, name: String },
    #[error("non-integer exponent at position {pos}: {text}")]
    NonIntegerExponent { pos: usize, text: String },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("degree must be at least 1")]
    DegreeZero,
    #[error("non-finite matrix entry")]
    NonFinite,
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("eigenvalues are not pairwise distinct")]
    RepeatedEigenvalue,
    #[error("inconsistent Jordan census: {msg} (rank profile {profile:?})")]
    InconsistentCensus { msg: String, profile: Vec<usize> },
    #[error("ill-conditioned Jordan basis (condition estimate {condition:.3e})")]
    IllConditioned { condition: f64 },
    #[error("kernel dimension varies over the disk: expected {expected}, found {found}")]
    KernelDimension { expected: usize, found: usize },
    #[error("transform matrix is singular")]
    SingularTransform,
    #[error("contour quadrature did not converge (root near the contour?)")]
    NoConvergence,
    #[error("|P| underflow at a quadrature node")]
    Underflow,
    #[error("splitting amounts disagree across probes")]
    ProbeDisagreement,
    #[error("gcd degeneration: {0}")]
    GcdDegeneration(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
