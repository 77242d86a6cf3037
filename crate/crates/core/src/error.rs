use thiserror::Error;

/// Raised when an exact computation would leave the range of its integer backing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("integer overflow in exact arithmetic ({operation})")]
pub struct OverflowError {
    pub operation: &'static str,
}

impl OverflowError {
    pub(crate) const fn new(operation: &'static str) -> Self {
        Self { operation }
    }
}

/// Which triangle vertex violates the inscribed-tripod angle bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vertex {
    Origin,
    Z,
    W,
}

impl std::fmt::Display for Vertex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Vertex::Origin => "0",
            Vertex::Z => "z",
            Vertex::W => "w",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TripodError {
    #[error(transparent)]
    Overflow(#[from] OverflowError),

    #[error("all four coordinates are zero")]
    AllZero,

    #[error("zero endpoint: z or w coincides with the origin")]
    ZeroEndpoint,

    #[error("collinear endpoints: 0, z, w lie on one line")]
    Collinear,

    #[error("orientation: arg(z) < arg(w) fails (ad - bc = {det} is not positive)")]
    Orientation { det: i64 },

    #[error("angle condition: the angle at vertex {vertex} is larger than 2pi/3")]
    AngleTooLarge { vertex: Vertex },

    #[error("angle condition: the angle at vertex {vertex} equals 2pi/3, so the Fermat point is that vertex")]
    BoundaryAngle { vertex: Vertex },

    #[error("lattice {0} has no exact representation; use the floating-point path")]
    InexactLattice(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("dependent sublattice basis")]
    DependentBasis,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl TripodError {
    /// True when the error is a violation of the tripod preconditions on the
    /// input quadruple (as opposed to overflow or configuration problems).
    pub fn is_invalid_tripod(&self) -> bool {
        matches!(
            self,
            TripodError::AllZero
                | TripodError::ZeroEndpoint
                | TripodError::Collinear
                | TripodError::Orientation { .. }
                | TripodError::AngleTooLarge { .. }
                | TripodError::BoundaryAngle { .. }
        )
    }
}

pub type Result<T, E = TripodError> = std::result::Result<T, E>;
