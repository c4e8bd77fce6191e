use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("amplitude norm {norm_sqr:e} is below the degeneracy threshold")]
    DegenerateNorm { norm_sqr: f64 },

    #[error("Bell-state projection vanishes (N = {n_t:e})")]
    DegenerateOutcome { n_t: f64 },

    #[error("density matrix is not physical: {0}")]
    NonPhysicalDensity(String),

    #[error("Bell phase undefined: amplitude A{index} vanishes")]
    UndefinedPhase { index: usize },

    #[error("operation requires kappa == gamma (got kappa = {kappa}, gamma = {gamma})")]
    PreconditionDissipative { kappa: f64, gamma: f64 },

    #[error("closed-form maximal times need 8g^2 > (delta - 2 chi)^2 (got {margin})")]
    ClosedFormInapplicable { margin: f64 },

    #[error("no maximally entangled times found in [0, {t_max}]")]
    NoMaximaFound { t_max: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("full Hamiltonian needs absolute frequencies omega and nu")]
    MissingAbsoluteFrequencies,

    #[error("population leaked out of the invariant subspace: {magnitude:e} on {state}")]
    LeakDetected { state: String, magnitude: f64 },

    #[error("interaction-picture mismatch: deviation {deviation:e}")]
    PictureMismatch { deviation: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
