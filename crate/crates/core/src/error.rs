use thiserror::Error;

/// Failures raised by the measure, recombination, certificate and cubature layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point dimension must be at least 1")]
    ZeroDimension,
    #[error("dimension mismatch at index {index}: expected {expected}, found {found}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coordinate at atom {atom}, axis {axis}")]
    NonFiniteCoordinate { atom: usize, axis: usize },
    #[error("{atoms} atoms but {weights} weights")]
    LengthMismatch { atoms: usize, weights: usize },
    #[error("weight at atom {atom} is {value}; weights must be finite and nonnegative")]
    InvalidWeight { atom: usize, value: f64 },
    #[error("non-finite value of basis element {element} at point {point}")]
    NonFiniteEvaluation { element: usize, point: usize },
    #[error("non-finite function value at atom {atom}")]
    NonFiniteFunction { atom: usize },
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("density is negative ({value}) at sample {sample}")]
    NegativeDensity { sample: usize, value: f64 },
    #[error("invalid sampler: {0}")]
    InvalidSampler(String),
    #[error("function basis is empty")]
    EmptyBasis,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("C({n}+{d}, {d}) overflows usize")]
    BinomialOverflow { n: usize, d: usize },
    #[error("no null vector found at iteration {iteration} (residual {residual:e})")]
    NullVectorNotFound { iteration: usize, residual: f64 },
    #[error("moment residual {residual:e} exceeds tolerance {tol:e}")]
    ResidualExceeded { residual: f64, tol: f64 },
    #[error(
        "no one-point witness: mean {mean} is not attained by f on the grid \
         (values span [{min}, {max}]); f appears discontinuous or the domain disconnected at this resolution"
    )]
    NoWitness { mean: f64, min: f64, max: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
