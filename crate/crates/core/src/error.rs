use thiserror::Error;

pub type Result<T> = std::result::Result<T, GeometryError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    /// An argument is outside the domain of the function receiving it.
    #[error("domain error in {what}: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("no right-angled hexagon with these sides (cosh of opposite side would be {rhs})")]
    InvalidHexagon { rhs: f64 },

    #[error("no such polygon: {0}")]
    Nonexistent(String),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    /// Pants too close to a cusp or to a vanishing cone angle to evaluate reliably.
    #[error("degenerate pants: {0}")]
    DegeneratePants(String),

    #[error("inadmissible signature (g, n) = ({genus}, {cones})")]
    InadmissibleSignature { genus: u32, cones: u32 },

    #[error("invalid ledger event at step {step}: {reason}")]
    InvalidEvent { step: usize, reason: String },

    #[error("invalid surface: {0}")]
    InvalidSurface(String),
}
