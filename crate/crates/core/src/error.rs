use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("number of generators {0} outside 1..=6")]
    InvalidDimension(usize),
    #[error("dimension mismatch: R_{0} vs R_{1}")]
    DimensionMismatch(usize, usize),
    #[error("expected {expected} coefficients, got {got}")]
    CoefficientCount { expected: usize, got: usize },
    #[error("imaginary unit is not normalized (|I|^2 = {0})")]
    NotUnit(f64),
    #[error("zero slice value has no inverse")]
    SingularInverse,
    #[error("fractional order {0} outside (0, 1)")]
    InvalidOrder(f64),
    #[error("gamma is undefined at {0}")]
    GammaPole(f64),
    #[error("point {x} outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("finite-difference stencil at {x} does not fit strictly inside [{lo}, {hi}]")]
    StencilOutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("non-finite integrand sample at {0}")]
    NonFinite(f64),
    #[error("invalid weight function: {0}")]
    InvalidWeight(String),
    #[error("invalid quadrature setting: {0}")]
    InvalidQuadrature(String),
    #[error("invalid domain: {0}")]
    InvalidDomain(String),
    #[error("invalid contour: {0}")]
    InvalidContour(String),
    #[error("ill-conditioned least-squares fit (condition estimate {0:e})")]
    IllConditioned(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
