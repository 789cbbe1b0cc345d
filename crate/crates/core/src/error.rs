use std::fmt;

/// Errors raised by the library. Each variant names the module-level
/// precondition that was violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A polynomial or rational function was divided by zero.
    DivisionByZero,
    /// `gcd(0, 0)` was requested.
    ZeroGcd,
    /// Text input could not be parsed.
    Parse(String),
    /// Matrix or block dimensions do not fit together.
    Dimension(String),
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// The selected state submatrix of a system matrix has zero determinant.
    StateSingular,
    /// A state index list is invalid (out of range, repeated, or unequal lengths).
    StateIndex(String),
    /// A structure query was made at a point where the system matrix is not minimal.
    NotMinimal(String),
    /// A matrix expected to have full row normal rank does not.
    RankDeficient(String),
    /// A pencil was required but the matrix has degree above one.
    NotPencil(usize),
    /// A parameter set violates its invariants.
    InvalidParams(String),
    /// A node coincides with a pole where the criterion requires them distinct.
    NodePoleCoincidence(String),
    /// A duality check between a pencil and a rational basis failed.
    NotDual(String),
    /// File system failure in the command-line layer.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero polynomial"),
            Error::ZeroGcd => write!(f, "gcd of two zero polynomials is undefined"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Error::NotSquare { rows, cols } => {
                write!(f, "matrix must be square, got {rows}x{cols}")
            }
            Error::StateSingular => write!(f, "state matrix singular"),
            Error::StateIndex(msg) => write!(f, "invalid state indices: {msg}"),
            Error::NotMinimal(msg) => write!(f, "system matrix not minimal: {msg}"),
            Error::RankDeficient(msg) => write!(f, "rank deficient: {msg}"),
            Error::NotPencil(d) => write!(f, "expected a pencil (degree <= 1), got degree {d}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::NodePoleCoincidence(msg) => {
                write!(f, "node/pole coincidence, minimality criterion needs them distinct: {msg}")
            }
            Error::NotDual(msg) => write!(f, "not a dual pair: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
