use thiserror::Error;

use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("truncation window [{n_min}, {n_max}] must contain n = -1, 0, 1")]
    WindowTooSmall { n_min: i32, n_max: i32 },

    #[error("zero pivot in tridiagonal sweep at row n = {n}")]
    SingularPivot { n: i32 },

    #[error("truncation did not converge up to |n| <= {cap}: last central amplitudes {last:?}, previous {previous:?}")]
    TruncationNotConverged {
        cap: i32,
        last: [Complex64; 3],
        previous: [Complex64; 3],
    },

    #[error("Toeplitz closure is degenerate at eps = 0; use the full solution")]
    DegenerateClosure,

    #[error("no decaying root on the {side} side: roots {roots:?} (|x| = {moduli:?})")]
    NoDecayingRoot {
        side: &'static str,
        roots: [Complex64; 2],
        moduli: [f64; 2],
    },

    #[error("singular 3x3 closure matrix (|det| = {det_abs:e}) at E = {energy}, omega = {omega}, eps = {eps}")]
    SingularClosure {
        det_abs: f64,
        energy: f64,
        omega: f64,
        eps: f64,
    },

    #[error("both first sidebands vanish; asymmetry undefined")]
    UndefinedAsymmetry,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("root bracketing failed on [{lo}, {hi}]: f(lo) = {f_lo:e}, f(hi) = {f_hi:e}")]
    Bracketing { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("near-degenerate levels {i} and {j}: |E_j - E_i| = {gap:e}")]
    NearDegenerate { i: usize, j: usize, gap: f64 },

    #[error("step size underflow at t = {t} (h = {h:e}, norm = {norm})")]
    StepUnderflow { t: f64, h: f64, norm: f64 },

    #[error("norm drift {drift:e} exceeds limit {limit:e} at t = {t}")]
    NormDrift { t: f64, drift: f64, limit: f64 },

    #[error("time {t} outside the recorded history [{start}, {end}]")]
    OutsideHistory { t: f64, start: f64, end: f64 },

    #[error("at omega = {omega}: {source}")]
    AtFrequency {
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("at E = {energy}: {source}")]
    AtEnergy {
        energy: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Strips `AtFrequency`/`AtEnergy` annotations.
    pub fn root_cause(&self) -> &Error {
        match self {
            Error::AtFrequency { source, .. } | Error::AtEnergy { source, .. } => source.root_cause(),
            other => other,
        }
    }

    pub fn is_convergence_failure(&self) -> bool {
        matches!(
            self.root_cause(),
            Error::TruncationNotConverged { .. } | Error::StepUnderflow { .. } | Error::NormDrift { .. }
        )
    }
}
