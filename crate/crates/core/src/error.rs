use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} outside the admissible range {range}")]
    Domain {
        what: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("multiplier symbol is not finite at frequency {frequency:?}")]
    NonFiniteSymbol { frequency: Vec<f64> },

    #[error("non-finite sample produced by {operation}")]
    NonFinite { operation: &'static str },

    #[error("singular-integral quadrature did not converge: {coarse} vs {fine} (tolerance {tolerance:e})")]
    QuadratureNonConvergence {
        coarse: Complex64,
        fine: Complex64,
        tolerance: f64,
    },

    #[error("resonance at tau = {tau}: min | |k|^2s - tau^2s | = {gap:e} below guard {guard:e}; offending frequencies {offending:?}")]
    Resonance {
        tau: f64,
        gap: f64,
        guard: f64,
        offending: Vec<Vec<f64>>,
    },

    #[error("fast marching front became non-monotone at cell {cell:?} ({value} < accepted {accepted})")]
    NonMonotoneFront {
        cell: Vec<usize>,
        value: f64,
        accepted: f64,
    },

    #[error("ray from {start:?} did not exit within parameter budget {budget}")]
    TrappedRay { start: [f64; 2], budget: f64 },

    #[error("chart coverage gap at cell {cell:?} (point {point:?})")]
    CoverageGap { cell: Vec<usize>, point: [f64; 2] },

    #[error("chart is not simple: ray Jacobian {jacobian:e} at ray {ray}, node {node}")]
    NotSimple { ray: usize, node: usize, jacobian: f64 },

    #[error("degenerate phase: |grad phi| = {norm} < c0 = {c0} at {point:?}")]
    DegeneratePhase { norm: f64, c0: f64, point: [f64; 2] },

    #[error("{operation} requires {required}, got s = {s}")]
    Regime {
        operation: &'static str,
        s: f64,
        required: &'static str,
    },

    #[error("support violation: {0}")]
    Support(String),

    #[error("resolution policy refuses tau = {tau}: grid sizes {have:?}, need at least {required:?}")]
    Resolution {
        tau: f64,
        have: Vec<usize>,
        required: Vec<usize>,
    },

    #[error("conjugate gradient breakdown at iteration {iteration}: curvature {curvature:e}")]
    CgBreakdown { iteration: usize, curvature: f64 },

    #[error("config: {0}")]
    Config(String),

    #[error("sweep aborted at tau = {tau} after {completed} points: {source}")]
    SweepAborted {
        tau: f64,
        completed: usize,
        partial_taus: Vec<f64>,
        partial_residuals: Vec<f64>,
        #[source]
        source: Box<Error>,
    },

    #[error("format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
