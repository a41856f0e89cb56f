use thiserror::Error;

/// Every failure the library reports. The variant name doubles as the
/// machine-readable tag printed by the CLI (`{"error": "<Variant>"}`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field descriptors differ: {0}")]
    DescriptorMismatch(String),
    #[error("element is not integral at the center (valuation {0})")]
    NotIntegral(i64),
    #[error("not an automorphism: {0}")]
    NotAnAutomorphism(String),
    #[error("degree too low: {0}")]
    DegreeTooLow(String),
    #[error("element does not have finite order: {0}")]
    NotFiniteOrder(String),
    #[error("group reduction failed: {0}")]
    GroupReductionFailed(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("not in the fiber over (0,0): {0}")]
    NotInFiber(String),
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("group is cyclic")]
    GroupIsCyclic,
    #[error("degree bound {0} exceeds the supported maximum of 10")]
    BoundTooLarge(u32),
    #[error("zero endomorphism has no valuation")]
    ZeroEndomorphism,
    #[error("input is not integral: {0}")]
    NotIntegralInput(String),
    #[error("map does not linearize the group: {0}")]
    NotLinearizing(String),
    #[error("residue map is not degenerate")]
    NotDegenerate,
    #[error("map is not normalized (valuation {0})")]
    NotNormalized(i64),
    #[error("polynomial is not a coordinate: {0}")]
    NotACoordinate(String),
    #[error("curve is not invariant: {0}")]
    NotInvariantLine(String),
    #[error("composition is not integral")]
    CompositionNotIntegral,
    #[error("poles at non-rational points: {0}")]
    ResidualNonRationalPoles(String),
    #[error("iteration cap exceeded: {0}")]
    IterationCap(String),
    #[error("schema error: {0}")]
    Schema(String),
}

impl Error {
    /// Short tag used in JSON error payloads.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DescriptorMismatch(_) => "DescriptorMismatch",
            Error::NotIntegral(_) => "NotIntegral",
            Error::NotAnAutomorphism(_) => "NotAnAutomorphism",
            Error::DegreeTooLow(_) => "DegreeTooLow",
            Error::NotFiniteOrder(_) => "NotFiniteOrder",
            Error::GroupReductionFailed(_) => "GroupReductionFailed",
            Error::DegreeMismatch(_) => "DegreeMismatch",
            Error::NotInFiber(_) => "NotInFiber",
            Error::UnsupportedGroup(_) => "UnsupportedGroup",
            Error::GroupIsCyclic => "GroupIsCyclic",
            Error::BoundTooLarge(_) => "BoundTooLarge",
            Error::ZeroEndomorphism => "ZeroEndomorphism",
            Error::NotIntegralInput(_) => "NotIntegralInput",
            Error::NotLinearizing(_) => "NotLinearizing",
            Error::NotDegenerate => "NotDegenerate",
            Error::NotNormalized(_) => "NotNormalized",
            Error::NotACoordinate(_) => "NotACoordinate",
            Error::NotInvariantLine(_) => "NotInvariantLine",
            Error::CompositionNotIntegral => "CompositionNotIntegral",
            Error::ResidualNonRationalPoles(_) => "ResidualNonRationalPoles",
            Error::IterationCap(_) => "IterationCap",
            Error::Schema(_) => "SchemaError",
        }
    }

    /// True for input-format problems, as opposed to mathematical failures.
    pub fn is_schema(&self) -> bool {
        matches!(self, Error::Schema(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
