use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("point ({x}, {y}) lies outside the sheet footprint of radius {radius}")]
    OutsideFootprint { x: f64, y: f64, radius: f64 },

    #[error("coordinate {name} = {value} lies outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("non-finite value for {0}")]
    NonFinite(&'static str),

    #[error("sampling plan invariant violated: {0}")]
    PlanInvariant(String),

    #[error("axis needs {needed} nodes, exceeding the cap of {cap}")]
    PlanCap { needed: usize, cap: usize },

    #[error("invalid quadrature input: {0}")]
    InvalidQuadrature(String),

    #[error("argument outside the supported range: {0}")]
    ArgumentRange(String),
}
