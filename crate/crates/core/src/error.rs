use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("unsupported group {0}")]
    UnsupportedGroup(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// `1 + t e^{α(ξ)}` vanished for the named root.
    #[error("singular evaluation at root #{root} (t = {t}, |1 + t e^α| = {modulus:e})")]
    SingularEvaluation { root: usize, t: f64, modulus: f64 },

    /// `θ` is undefined because `e^{α(ξ)} = 1` for some root.
    #[error("point is singular: e^α = 1 for root #{root}")]
    SingularPoint { root: usize },

    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("initial residual {residual:e} is outside the corrector basin; guess belongs to another branch")]
    BranchMismatch { residual: f64 },

    #[error("path failure near t = {last_t}: step {step:e} fell below the minimum step")]
    PathFailure {
        last_t: f64,
        step: f64,
        last_xi: Vec<num_complex::Complex64>,
    },

    #[error("internal count mismatch: expected {expected}, found {found}")]
    CountMismatch { expected: usize, found: usize },

    #[error("orbit collision: {0}")]
    OrbitCollision(String),

    #[error("polynomial degree {degree} exceeds rank {rank}")]
    DegreeExceedsRank { degree: usize, rank: usize },

    #[error("polynomial is identically zero to tolerance")]
    ZeroPolynomial,

    #[error("divisibility test (iii) and gamma-vanishing test (ii) disagree for d = {d}")]
    EquivalenceBroken { d: usize },

    #[error("polynomial fit failed: residual {residual:e} above bound {bound:e}")]
    FitFailure { residual: f64, bound: f64 },

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("not a singular limit: the centralizer root subsystem is empty")]
    NotSingularLimit,

    #[error("ambiguous t = -1 limit: {candidates} candidate points within {radius:e}")]
    AmbiguousLimit { candidates: usize, radius: f64 },

    #[error("no path data at t = {t}")]
    MissingPathData { t: f64 },

    #[error("odd number of odd insertions ({0})")]
    OddInsertions(usize),

    #[error("minimizer left the Weyl chamber after {retries} retries")]
    ChamberEscape { retries: usize },

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Numerical failures as opposed to bad input or a violated theorem.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::SingularEvaluation { .. }
                | Error::SingularPoint { .. }
                | Error::NoConvergence { .. }
                | Error::BranchMismatch { .. }
                | Error::PathFailure { .. }
                | Error::FitFailure { .. }
                | Error::ChamberEscape { .. }
                | Error::AmbiguousLimit { .. }
                | Error::CountMismatch { .. }
        )
    }

    pub fn is_config(&self) -> bool {
        matches!(
            self,
            Error::UnsupportedGroup(_) | Error::InvalidInput(_) | Error::OddInsertions(_)
        )
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
