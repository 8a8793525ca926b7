use thiserror::Error;

use crate::coeffs::CoeffError;
use crate::permat::{IndexVector, PeriodicMatrix, PermatError};
use crate::qpoly::QpolyError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Permat(#[from] PermatError),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Qpoly(#[from] QpolyError),
    #[error("co(B) = {co:?} does not match ro(A) = {ro:?}")]
    FiberMismatch { co: IndexVector, ro: IndexVector },
    #[error("{0:?} is not tridiagonal")]
    NotTridiagonal(PeriodicMatrix),
    #[error("{matrix:?} is not a member of {set}")]
    NotMember { matrix: PeriodicMatrix, set: String },
    #[error("elements belong to different algebras")]
    Incompatible,
    #[error("bar not computable for {0:?}: no edge of its tridiagonal profile vanishes")]
    BarNotComputable(PeriodicMatrix),
    #[error("integrity failure ({what}): {witness}")]
    Integrity { what: String, witness: String },
    #[error("resource limit exceeded: {0}")]
    Resource(String),
}

impl Error {
    pub fn integrity(what: impl Into<String>, witness: impl std::fmt::Debug) -> Self {
        Error::Integrity { what: what.into(), witness: format!("{witness:?}") }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Integrity { .. } | Error::Coeff(_) | Error::Qpoly(_) => 4,
            Error::Resource(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
