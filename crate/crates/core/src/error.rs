use thiserror::Error;

/// Errors raised by the laboratory.
///
/// Every variant maps onto one of three coarse categories used by the CLI
/// for exit codes: configuration problems, numerical aborts, and failed
/// assertions (the latter are reported through `EstimateReport`, not here).
#[derive(Debug, Clone, Error, PartialEq)]
pub enum LabError {
    #[error("state {state:?} lies outside the admissible box")]
    OutOfDomain { state: Vec<f64> },

    #[error("eigenvalue gap {gap:.3e} below minimum {gap_min:.3e} at {state:?}")]
    DegenerateSpectrum { state: Vec<f64>, gap: f64, gap_min: f64 },

    #[error("drift matrix has complex eigenvalues at {state:?}")]
    NonReal { state: Vec<f64> },

    #[error("commutator norm {residual:.3e} exceeds tolerance {tol:.3e} at {state:?}")]
    CommutationViolation { state: Vec<f64>, residual: f64, tol: f64 },

    #[error("viscosity eigenvalue {mu:.6e} below lower bound {c0:.6e} at {state:?}")]
    ViscosityBound { state: Vec<f64>, mu: f64, c0: f64 },

    #[error("non-positive viscosity {mu:.6e} encountered")]
    NonPositiveViscosity { mu: f64 },

    #[error("solution left the admissible box at t = {t:.6e}, x = {x:.6e}")]
    DomainExit { t: f64, x: f64 },

    #[error("non-finite value produced at t = {t:.6e}")]
    Instability { t: f64 },

    #[error("at least {needed} trajectory records required, got {got}")]
    InsufficientRecords { needed: usize, got: usize },

    #[error("Newton iteration did not converge: residual {residual:.3e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },

    #[error("degenerate scalar flux: {0}")]
    DegenerateFlux(String),

    #[error("wave speed ranges of families {family} and {} overlap", family + 1)]
    SectorOverlap { family: usize },

    #[error("requested time {t:.6e} exceeds first interaction time {horizon:.6e}")]
    InteractionReached { t: f64, horizon: f64 },

    #[error("front budget of {budget} exceeded")]
    FrontBudgetExceeded { budget: usize },

    #[error("grids do not match: {0}")]
    GridMismatch(String),

    #[error("speed gap {gap:.3e} is not positive")]
    SpeedGapViolated { gap: f64 },

    #[error("no exact reference available: {0}")]
    NoReference(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{message} (line {line}, column {column})")]
    Parse {
        message: String,
        line: usize,
        column: usize,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl LabError {
    /// True for errors caused by bad input rather than numerics.
    pub fn is_config(&self) -> bool {
        matches!(self, LabError::Config(_) | LabError::Parse { .. } | LabError::Io(_))
    }

    /// Short machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            LabError::OutOfDomain { .. } => "out_of_domain",
            LabError::DegenerateSpectrum { .. } => "degenerate_spectrum",
            LabError::NonReal { .. } => "non_real",
            LabError::CommutationViolation { .. } => "commutation_violation",
            LabError::ViscosityBound { .. } => "viscosity_bound",
            LabError::NonPositiveViscosity { .. } => "non_positive_viscosity",
            LabError::DomainExit { .. } => "domain_exit",
            LabError::Instability { .. } => "instability",
            LabError::InsufficientRecords { .. } => "insufficient_records",
            LabError::NoConvergence { .. } => "no_convergence",
            LabError::DegenerateFlux(_) => "degenerate_flux",
            LabError::SectorOverlap { .. } => "sector_overlap",
            LabError::InteractionReached { .. } => "interaction_reached",
            LabError::FrontBudgetExceeded { .. } => "front_budget_exceeded",
            LabError::GridMismatch(_) => "grid_mismatch",
            LabError::SpeedGapViolated { .. } => "speed_gap_violated",
            LabError::NoReference(_) => "no_reference",
            LabError::Config(_) => "config",
            LabError::Parse { .. } => "parse",
            LabError::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for LabError {
    fn from(e: std::io::Error) -> Self {
        LabError::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, LabError>;
