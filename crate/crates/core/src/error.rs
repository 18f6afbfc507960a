use thiserror::Error;

/// Failures reported by the numerical pipeline.
///
/// Variants carry the measured quantity that triggered them so that callers
/// (and the CLI) can print a useful report.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("io failure: {0}")]
    Io(String),
    #[error("root finder did not converge (worst residual {residual:.3e})")]
    NonConvergence { residual: f64 },
    #[error("lemniscate is not proper: critical value modulus {max_critical_modulus}")]
    NotProper { max_critical_modulus: f64 },
    #[error("critical value modulus {max_critical_modulus} is within the margin {min_margin} of the unit circle")]
    MarginTooSmall { max_critical_modulus: f64, min_margin: f64 },
    #[error("grid resolution {resolution} too coarse: smallest component has {cells} cells")]
    ResolutionTooCoarse { resolution: usize, cells: usize },
    #[error("grid too coarse: argument step {max_step:.3} exceeds pi/2")]
    GridTooCoarse { max_step: f64 },
    #[error("found {found} critical points in the disk, expected {expected}")]
    CountMismatch { found: usize, expected: usize },
    #[error("lemniscate tracer lost the path at exterior angle {theta:.6}")]
    PathJump { theta: f64 },
    #[error("point is not inside the curve (winding number {winding})")]
    NotInside { winding: i64 },
    #[error("integral equation solver failed: {0}")]
    NoConvergence(String),
    #[error("no Newton seed converged for target at distance {distance_to_boundary:.3e} from the boundary")]
    SeedFailure { distance_to_boundary: f64 },
    #[error("point is off the lemniscate: ||P(w)| - 1| = {deviation:.3e}")]
    OffCurve { deviation: f64 },
    #[error("boundary computations of the Blaschke product disagree by {discrepancy:.3e}")]
    PhaseMismatch { discrepancy: f64 },
    #[error("harmonic extension is not positive on radius {radius} (minimum {minimum:.3e})")]
    ExtensionNotPositive { radius: f64, minimum: f64 },
    #[error("density has a nonpositive sample ({minimum:.3e})")]
    NotPositive { minimum: f64 },
    #[error("no reconstruction candidate matches (best discrepancy {best:.3e} over {candidates} candidates)")]
    NoCandidateMatches { best: f64, candidates: usize },
    #[error("fingerprints do not agree (discrepancy {discrepancy:.3e})")]
    FingerprintMismatch { discrepancy: f64 },
    #[error("critical values too close to coalescing (separation {separation:.3e})")]
    NearDiscriminant { separation: f64 },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.kind() {
            csv::ErrorKind::Io(_) => Error::Io(e.to_string()),
            _ => Error::Format(e.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
