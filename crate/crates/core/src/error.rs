use std::path::PathBuf;

/// Errors produced by the algebra, search and verification routines.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("genus must be at least 1")]
    ZeroGenus,

    #[error("genus mismatch: {left} vs {right}")]
    GenusMismatch { left: usize, right: usize },

    #[error("operands use different intersection forms")]
    FormMismatch,

    #[error("genus {genus} exceeds the enumeration cutoff {cutoff}")]
    CutoffExceeded { genus: usize, cutoff: usize },

    #[error("genus {genus} is outside the exact range 1..={max}")]
    OutOfExactRange { genus: usize, max: usize },

    #[error("invalid intersection form: {0}")]
    InvalidForm(String),

    #[error("expected {expected} rows/columns, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not invertible over GF(2)")]
    NotInvertible,

    #[error("matrix does not preserve the form: x_{i}.x_{j} = {before} but their images pair to {after}")]
    NotFormPreserving {
        i: usize,
        j: usize,
        before: u8,
        after: u8,
    },

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is divisible by the modulus")]
    ZeroResidue(i64),

    #[error("map order {order} is not {p}^{m}")]
    OrderMismatch { order: u64, p: u64, m: u32 },

    #[error("map order exceeds the cap {cap}")]
    OrderOverCap { cap: u64 },

    #[error("group closure is limited to genus <= {max}, got {genus}")]
    ClosureTooLarge { genus: usize, max: usize },

    #[error("malformed structure label {0:?}")]
    BadLabel(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_genus(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::GenusMismatch { left, right })
    }
}
