use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error(
        "point #{index} {point:?} lies on or outside the reference box in component {component} \
         (value {value}, bound {bound})"
    )]
    OutsideBox {
        index: usize,
        point: Vec<f64>,
        component: usize,
        value: f64,
        bound: f64,
    },

    #[error("coordinate {component} of point #{index} is not finite")]
    NonFinite { index: usize, component: usize },

    #[error("stability violated: {first:?} and {second:?} are not mutually nondominated")]
    StabilityViolation { first: Vec<f64>, second: Vec<f64> },

    #[error(
        "point {point:?} arrived out of order: component {component} value {value} is below \
         the previously processed {previous}"
    )]
    OutOfOrder {
        point: Vec<f64>,
        component: usize,
        value: f64,
        previous: f64,
    },

    #[error("oracle budget exceeded: {0}")]
    Budget(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: expected {expected} coordinates, found {found}")]
    Arity {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("invalid instance spec: {0}")]
    InvalidSpec(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
