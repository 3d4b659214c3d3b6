use thiserror::Error;

/// Errors raised by the library. Each variant carries a stable code
/// (see [`Error::code`]) that the command-line front-end reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at x = {0}")]
    PoleAtPoint(String),
    #[error("polynomial is not squarefree in y")]
    NotSquarefree,
    #[error("grid function has no sample at t = {0}")]
    OutOfWindow(i64),
    #[error("division by the zero form")]
    ZeroDivisor,
    #[error("characteristic polynomial has irrational roots; exact mode unavailable")]
    NoExactRoots,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("window too short: {0}")]
    InsufficientWindow(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("term multiplier inconsistent with the supplied eigenvalue")]
    InconsistentMultiplier,
    #[error("eigenvalue clustering is ambiguous at tolerance {0:e}")]
    EigenfailNumeric(f64),
    #[error("monodromy matrix is singular")]
    SingularMonodromy,
    #[error("matrix is not square")]
    NotSquare,
    #[error("sample point {0} lies at a singularity")]
    SampleAtSingularity(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("operator does not satisfy A' = A")]
    NotASolution,
    #[error("no (alpha, xi) fits the multiplication identity")]
    NotClassifiable,
    #[error("candidate {0} is not a root of the characteristic equation")]
    CandidateNotARoot(String),
    #[error("syntax error at offset {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("input exceeds a size limit: {0}")]
    TooLarge(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::PoleAtPoint(_) => "pole_at_point",
            Error::NotSquarefree => "not_squarefree",
            Error::OutOfWindow(_) => "out_of_window",
            Error::ZeroDivisor => "zero_divisor",
            Error::NoExactRoots => "no_exact_roots",
            Error::ZeroPolynomial => "zero_polynomial",
            Error::InsufficientWindow(_) => "insufficient_window",
            Error::PreconditionViolated(_) => "precondition_violated",
            Error::InconsistentMultiplier => "inconsistent_multiplier",
            Error::EigenfailNumeric(_) => "eigenfail_numeric",
            Error::SingularMonodromy => "singular_monodromy",
            Error::NotSquare => "not_square",
            Error::SampleAtSingularity(_) => "sample_at_singularity",
            Error::TruncationTooSmall(_) => "truncation_too_small",
            Error::NotASolution => "not_a_solution",
            Error::NotClassifiable => "not_classifiable",
            Error::CandidateNotARoot(_) => "candidate_not_a_root",
            Error::Syntax { .. } => "syntax_error",
            Error::Invalid(_) => "invalid_input",
            Error::TooLarge(_) => "too_large",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
