use thiserror::Error;

use crate::operating_point::FeasibilityViolation;

/// Errors produced by the sizing and evaluation engine.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A physical input was outside its domain (e.g. m <= 0).
    #[error("domain error: {0}")]
    Domain(String),

    /// One or more configuration values failed validation.
    #[error("configuration error:\n{}", issues.join("\n"))]
    Config { issues: Vec<String> },

    /// Modulation index outside the union of device-table intervals.
    #[error("modulation index {m} outside the {table} device table span ({m_min}, {m_max}]")]
    DeviceOutOfRange {
        table: &'static str,
        m: f64,
        m_min: f64,
        m_max: f64,
    },

    /// The requested (topology, m) point is infeasible.
    #[error("infeasible design point: {0}")]
    Infeasible(FeasibilityViolation),

    /// A sweep produced no feasible design points.
    #[error("no feasible design point in the requested range")]
    EmptyFeasibleSet,

    /// Calibration inputs were unusable.
    #[error("calibration error: {0}")]
    Calibration(String),
}
