use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index spec needs at least one dimension")]
    EmptySpec,
    #[error("sizes has {sizes} entries but offsets has {offsets}")]
    LengthMismatch { sizes: usize, offsets: usize },
    #[error("dimension {dim} has size 0; every size must be at least 1")]
    ZeroSize { dim: usize },
    #[error("element count overflows the addressable range")]
    CountOverflow,
    #[error("expected {expected} coordinates, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("coordinate {value} in dimension {dim} is outside [{lo}, {hi}]")]
    CoordinateOutOfRange {
        dim: usize,
        value: i64,
        lo: i64,
        hi: i64,
    },
    #[error("window [{start}, {start}+{len}) exceeds size {size} in dimension {dim}")]
    WindowOutOfBounds {
        dim: usize,
        start: usize,
        len: usize,
        size: usize,
    },
    #[error("non-finite value {value} at index {index:?}")]
    NonFiniteValue { index: Vec<i64>, value: f64 },
    #[error("non-finite intermediate {value} while quantizing dimension {dim}")]
    NonFiniteIntermediate { dim: usize, value: f64 },
    #[error("{functions} quantizing functions supplied for a {dims}-dimensional view")]
    FunctionCount { functions: usize, dims: usize },
    #[error("quantizing function for dimension {dim} has order {order} but the view length is {len}")]
    OrderMismatch { dim: usize, order: usize, len: usize },
    #[error("{dims} dimensions exceeds the recursion cap of {max}")]
    TooManyDimensions { dims: usize, max: usize },
    #[error("quantizing function of order {order} received {got} values")]
    ValueCount { order: usize, got: usize },
    #[error("interpolator order {order} is invalid: {reason}")]
    InvalidOrder { order: usize, reason: &'static str },
    #[error("knots must be strictly increasing (position {position})")]
    NonMonotoneKnots { position: usize },
    #[error("axis {axis} is decreasing; reverse the axis and the matching data before building the grid")]
    DecreasingAxis { axis: usize },
    #[error("axis {axis} must be strictly increasing (position {position})")]
    NonMonotoneAxis { axis: usize, position: usize },
    #[error("non-finite knot or abscissa")]
    NonFiniteArgument,
    #[error("rational tableau pole at column {column}, row {row}")]
    Pole { column: usize, row: usize },
    #[error("query coordinate {value} in dimension {dim} lies outside the mesh hull [{lo}, {hi}]")]
    OutsideHull {
        dim: usize,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("grid shape mismatch: {0}")]
    Shape(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        if e.kind() == std::io::ErrorKind::UnexpectedEof {
            Error::Format("truncated data section".into())
        } else {
            Error::Io(e.to_string())
        }
    }
}
