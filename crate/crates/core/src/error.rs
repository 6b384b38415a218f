//! Error type shared by every module of the crate.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Failure modes of grid construction, eigensolves, propagation and the
/// optimizer suite.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An evaluation point lies outside the objective's domain box.
    OutOfDomain { axis: usize, value: f64, lo: f64, hi: f64 },
    /// A requested grid would exceed the configured node cap.
    DimensionTooLarge { nodes: u128, cap: u64 },
    /// A grid function contained NaN or infinity.
    NonFiniteInput,
    /// The eigensolver ran out of iterations; best residuals attached.
    NoConvergence { iterations: usize, residuals: Vec<f64> },
    /// The inner Crank-Nicolson linear solve missed its tolerance.
    LinearSolveFailure { step: usize, residual: f64 },
    /// A separable-gap block exceeds the supported dimension.
    BlockTooLarge { dim: usize, max: usize },
    /// A gap curve handed to the adiabatic-time functional has a
    /// non-positive sample.
    NonPositiveGap { index: usize, gap: f64 },
    /// success_probability needs minimizer metadata the spec lacks.
    MissingMinimizer,
    /// Joint block diagonalization produced components above the size cap.
    BlockRecoveryFailed { component: usize, max: usize },
    /// Sublevel pairing cannot separate critical values at this resolution.
    ResolutionTooCoarse { detail: String },
    /// Eyring-Kramers needs a saddle with exactly one negative direction.
    NotAMorseSaddle,
    /// A local minimization hit its iteration cap before the tolerance.
    MaxIterations,
    /// Evaluation budget or cooperative deadline ran out mid-run.
    BudgetExhausted,
    /// Malformed expression text for a custom objective.
    ExprParse { offset: usize, message: String },
    /// Anything else worth a message.
    Invalid(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfDomain { axis, value, lo, hi } => write!(
                f,
                "coordinate {value} on axis {axis} lies outside the domain box [{lo}, {hi}]"
            ),
            Error::DimensionTooLarge { nodes, cap } => {
                write!(f, "grid would carry {nodes} nodes, above the cap of {cap}")
            }
            Error::NonFiniteInput => write!(f, "input grid function is not finite everywhere"),
            Error::NoConvergence { iterations, .. } => {
                write!(f, "eigensolver did not converge within {iterations} iterations")
            }
            Error::LinearSolveFailure { step, residual } => write!(
                f,
                "inner linear solve stalled at step {step} with residual {residual:.3e}"
            ),
            Error::BlockTooLarge { dim, max } => {
                write!(f, "separable block has dimension {dim}, above the supported {max}")
            }
            Error::NonPositiveGap { index, gap } => {
                write!(f, "gap sample {index} is non-positive ({gap})")
            }
            Error::MissingMinimizer => write!(f, "objective carries no minimizer metadata"),
            Error::BlockRecoveryFailed { component, max } => write!(
                f,
                "recovered block of size {component} exceeds the configured maximum {max}"
            ),
            Error::ResolutionTooCoarse { detail } => {
                write!(f, "grid resolution too coarse: {detail}")
            }
            Error::NotAMorseSaddle => {
                write!(f, "saddle Hessian does not have exactly one negative eigenvalue")
            }
            Error::MaxIterations => write!(f, "iteration budget exhausted before tolerance"),
            Error::BudgetExhausted => write!(f, "evaluation budget or deadline exhausted"),
            Error::ExprParse { offset, message } => {
                write!(f, "expression parse error at byte {offset}: {message}")
            }
            Error::Invalid(msg) => write!(f, "{msg}"),
        }
    }
}

#[cfg(feature = "std")]
impl std::error::Error for Error {}
