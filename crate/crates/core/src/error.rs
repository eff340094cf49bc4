use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("invalid category: {0}")]
    InvalidCategory(String),

    #[error("invalid delta complex: {0}")]
    InvalidComplex(String),

    #[error("boundary composite in degree {0} is nonzero")]
    BoundarySquare(usize),

    #[error("element {0} has no grade")]
    MissingGrade(usize),

    #[error("unknown object {0}")]
    UnknownObject(usize),

    #[error("functor is not functorial: {0}")]
    NonFunctorial(String),

    #[error("invalid group action: {0}")]
    InvalidAction(String),

    #[error("action is not free: object {object} is fixed by a non-identity element")]
    NonFreeAction { object: usize },

    #[error("morphism {0} does not strictly raise the grade")]
    GradeNotRaised(usize),

    #[error("removal set is not down-closed: cell {below} lies below removed cell {above}")]
    NotDownClosed { below: usize, above: usize },

    #[error("cell {0} is not closed and no closure certificate is available")]
    NoClosureCertificate(usize),

    #[error("stratified space fails validation: {0}")]
    InvalidCss(String),

    #[error("invalid subdivision: {0}")]
    InvalidSubdivision(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("sign-vector order must be at least 1")]
    InvalidOrder,

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("number of points must be at least 1")]
    InvalidPointCount,

    #[error("subdivision count must be at least 1")]
    InvalidSubdivisionCount,

    #[error("{path}: {message}")]
    Schema { path: String, message: String },
}
