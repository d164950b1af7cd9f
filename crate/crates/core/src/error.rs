//! Error type shared by all modules.

use crate::grid::Units;
use crate::Complex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A signal with the wrong units flag was passed to a conversion.
    UnitsMismatch { expected: Units, found: Units },
    /// Invalid construction parameter (non-positive T0, empty grid, ...).
    InvalidParam(String),
    /// Polarization sequences do not match the time grid length.
    LengthMismatch { expected: usize, found: usize },
    /// Signal does not vanish at the grid edges; the scattering boundary
    /// conditions are violated. The ratio is max edge |q| over max |q|.
    BoundaryViolation { edge_ratio: f64 },
    /// |a(lambda)| fell below threshold while forming rho = b/a.
    SingularSpectrum { lambda: f64, a_mag: f64 },
    /// Newton search failed to converge within the iteration budget.
    EigenvalueNotConverged {
        guess: Complex,
        iterations: usize,
        residual: f64,
    },
    /// Newton iterate left the upper half plane.
    LeftUpperHalfPlane { guess: Complex, iterate: Complex },
    /// |a'(lambda_k)| too small: degenerate or double eigenvalue.
    DegenerateEigenvalue { lambda: Complex, a_prime_mag: f64 },
    /// The 2x2 block inverted by the auxiliary-solution formula is
    /// near-singular.
    SingularAuxiliaryBlock { cond_estimate: f64 },
    /// Auxiliary solution does not satisfy its boundary conditions.
    AuxiliaryBoundaryResidual { residual: f64 },
    /// The auxiliary vector norm vanished at some sample.
    DegenerateAuxiliary { t: f64 },
    /// The continuous-spectrum inversion did not converge.
    InftDiverged { iterations: usize, residual: f64 },
    /// Split-step control violated or produced a non-finite field.
    StepControl(String),
    /// A non-finite value appeared where it must not.
    NonFinite(&'static str),
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::UnitsMismatch { expected, found } => {
                write!(f, "units mismatch: expected {expected:?}, found {found:?}")
            }
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::BoundaryViolation { edge_ratio } => write!(
                f,
                "signal does not vanish at grid edges (edge/max ratio {edge_ratio:.3e})"
            ),
            Error::SingularSpectrum { lambda, a_mag } => {
                write!(f, "|a| = {a_mag:.3e} too small at lambda = {lambda}")
            }
            Error::EigenvalueNotConverged {
                guess,
                iterations,
                residual,
            } => write!(
                f,
                "eigenvalue search from {guess} not converged after {iterations} iterations \
                 (|a| = {residual:.3e})"
            ),
            Error::LeftUpperHalfPlane { guess, iterate } => write!(
                f,
                "eigenvalue iterate {iterate} from guess {guess} left the upper half plane"
            ),
            Error::DegenerateEigenvalue { lambda, a_prime_mag } => write!(
                f,
                "|a'({lambda})| = {a_prime_mag:.3e}: degenerate eigenvalue"
            ),
            Error::SingularAuxiliaryBlock { cond_estimate } => write!(
                f,
                "singular 2x2 block in auxiliary solution (cond ~ {cond_estimate:.3e})"
            ),
            Error::AuxiliaryBoundaryResidual { residual } => write!(
                f,
                "auxiliary solution boundary residual {residual:.3e} above tolerance"
            ),
            Error::DegenerateAuxiliary { t } => {
                write!(f, "auxiliary vector norm vanished at t = {t}")
            }
            Error::InftDiverged {
                iterations,
                residual,
            } => write!(
                f,
                "continuous inversion diverged after {iterations} iterations \
                 (relative residual {residual:.3e})"
            ),
            Error::StepControl(msg) => write!(f, "split-step failure: {msg}"),
            Error::NonFinite(what) => write!(f, "non-finite value in {what}"),
        }
    }
}

impl std::error::Error for Error {}
