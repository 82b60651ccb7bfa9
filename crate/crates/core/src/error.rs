use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An input violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The lowest real levels could not all be found as real, simple roots.
    /// Signals broken PT symmetry for the given parameters.
    #[error(
        "coalescence detected: {real_roots_below_cut} real roots but {total_roots_below_cut} \
         eigenvalues below E = {energy_cut:.6} (closest pair gap {min_gap:.3e})"
    )]
    Coalescence {
        /// Real roots found, ascending.
        real_roots: Vec<f64>,
        real_roots_below_cut: usize,
        total_roots_below_cut: usize,
        energy_cut: f64,
        min_gap: f64,
    },

    #[error("g_hi below breaking: lowest pair is still real at g = {g_hi}")]
    BelowBreaking { g_hi: f64 },

    #[error("matching failure: imaginary part {imag:.3e} of C exceeds {threshold:.1e} (E = {energy})")]
    MatchingFailure {
        energy: f64,
        imag: f64,
        threshold: f64,
    },

    #[error("branch mismatch: closed form and Newton x_R1 differ by {difference:.3e}")]
    BranchMismatch { difference: f64 },

    #[error("continuity violation at {interface}: residual {residual:.3e}")]
    ContinuityViolation { interface: String, residual: f64 },

    #[error("non-finite potential sample at x = {x}")]
    NonFinitePotential { x: f64 },

    #[error("solver failure: {0}")]
    Solver(String),

    #[error(transparent)]
    Io(#[from] std::sync::Arc<std::io::Error>),

    #[error("golden data: {0}")]
    Golden(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(std::sync::Arc::new(err))
    }
}

impl Error {
    pub fn is_coalescence(&self) -> bool {
        matches!(self, Error::Coalescence { .. })
    }
}
