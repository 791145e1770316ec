use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cone row {0} is zero")]
    ZeroRow(usize),
    #[error("the ordering cone is the whole space")]
    WholeSpaceCone,
    #[error("the feasible set is empty")]
    EmptyFeasible,
    #[error(
        "K-function verdict was yes but the image sets do not consolidate into one polyhedron"
    )]
    ConsolidationFailed,
    #[error("every image piece is empty")]
    AllEmpty,
    #[error("the interior of the ordering cone is empty")]
    EmptyInterior,
    #[error("the region has strict rows; the certificate needs closed pieces")]
    HasStrictRows,
    #[error("point is not feasible")]
    NotFeasible,
    #[error("pieces do not cover the source space")]
    CoverGap,
    #[error("pieces {0} and {1} disagree on their overlap")]
    Inconsistent(usize, usize),
    #[error("weak frontier routes disagree")]
    MethodDisagreement,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("limit exceeded: {0}")]
    Limit(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
