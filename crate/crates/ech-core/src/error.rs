use alloc::string::String;
use core::fmt;

use crate::generator::Direction;

/// Errors produced by the engine.
///
/// Every fallible operation reports one of these; parameter validation is
/// strict because the obstruction verdicts are only meaningful when the
/// preconditions of the underlying statements hold.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EchError {
    /// Two factors carry an `h` label on the same direction, so their formal
    /// product is not a convex generator.
    SharedHyperbolicOrbit(Direction),
    /// Attempted to build an edge that violates the label/direction rules.
    InvalidEdge(String),
    /// A formal product or domain literal failed to parse.
    Parse(String),
    /// `delta` outside the index gap reachable by the lattice-point-removal
    /// construction for the given `d`.
    DeltaOutOfRange { d: i64, delta: i64 },
    /// The criterion target is not a minimal generator for the target domain.
    TargetNotMinimal,
    /// The premises of the pairwise-to-subsets reduction do not hold for the
    /// supplied generator lists.
    HypothesisViolated(String),
    /// A numeric parameter is outside the range where the operation is
    /// defined.
    ParamOutOfRange(String),
    /// `a` is at or above the threshold `(5+√7)/3` past which no finite
    /// candidate ceiling exists; the obstruction pipeline does not apply.
    /// (The threshold itself is irrational and is reached only by a limiting
    /// argument, never by a rational input.)
    AboveThreshold,
    /// `a` is strictly below the threshold `(5+√7)/3`, where sharpness
    /// witnesses stop existing for large indices.
    BelowThreshold,
    /// `c ≥ 2 + a/2`: the folding bound is met, so no obstruction claim can
    /// be made and the pipeline refuses to run.
    NotBelowVolumeBound,
    /// The search would need a target index level beyond the configured
    /// ceiling.
    SearchCeiling { required: i64, d_max: i64 },
    /// The three-edge sharpness construction needs `d ≥ 9`.
    DomainTooSmall { d: i64 },
    /// Recognized but intentionally rejected configuration.
    Unsupported(&'static str),
}

impl fmt::Display for EchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EchError::SharedHyperbolicOrbit(dir) => write!(
                f,
                "product undefined: both factors carry h_{{{},{}}}",
                dir.a, dir.b
            ),
            EchError::InvalidEdge(msg) => write!(f, "invalid edge: {msg}"),
            EchError::Parse(msg) => write!(f, "parse error: {msg}"),
            EchError::DeltaOutOfRange { d, delta } => {
                write!(f, "delta {delta} outside the valid range 1..={d}")
            }
            EchError::TargetNotMinimal => {
                write!(f, "criterion target is not minimal for the target domain")
            }
            EchError::HypothesisViolated(msg) => write!(f, "hypothesis violated: {msg}"),
            EchError::ParamOutOfRange(msg) => write!(f, "parameter out of range: {msg}"),
            EchError::AboveThreshold => write!(
                f,
                "a is at or above (5+sqrt(7))/3 = 2.54858...: no finite candidate ceiling \
                 exists there, so the obstruction pipeline does not apply (the `witness` \
                 construction produces the explicit embedding-side data instead; the \
                 threshold value itself is irrational and only reachable as a limit)"
            ),
            EchError::BelowThreshold => write!(
                f,
                "a is strictly below (5+sqrt(7))/3 = 2.54858...: sharpness witnesses do \
                 not exist beyond the candidate ceiling there (use the obstruction \
                 pipeline instead)"
            ),
            EchError::NotBelowVolumeBound => write!(
                f,
                "c >= 2 + a/2: the folding bound is met, nothing to obstruct"
            ),
            EchError::SearchCeiling { required, d_max } => write!(
                f,
                "search requires index level d = {required}, above the ceiling {d_max}"
            ),
            EchError::DomainTooSmall { d } => {
                write!(f, "construction requires d >= 9, got {d}")
            }
            EchError::Unsupported(what) => write!(f, "unsupported: {what}"),
        }
    }
}

impl core::error::Error for EchError {}

pub type Result<T> = core::result::Result<T, EchError>;
