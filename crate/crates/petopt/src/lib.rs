//! Design-space exploration engine for MMC-based power electronic transformers
//! operating in boost-AC mode.
//!
//! The engine sweeps the MMC modulation index, which sets the medium-voltage DC
//! bus voltage, sizes both power stages (hybrid/full-bridge MMC and the
//! input-parallel output-series DC/DC stage), selects switching devices from
//! catalog tables, and evaluates cost, volume and losses of every feasible
//! design, normalized against the half-bridge baseline at unity modulation.
//!
//! Modules roughly follow the data flow:
//!
//! - [`catalog`]: device tables and topology descriptors
//! - [`operating_point`]: steady-state electrical solution for a given m
//! - [`mmc`]: MMC stage sizing (submodule counts, capacitance, devices)
//! - [`dcdc`]: DC/DC stage sizing (unit count, per-unit ratings)
//! - [`losses`]: conduction/switching loss and efficiency models
//! - [`evaluate`]: cost/volume aggregation, normalization and calibration
//! - [`sweep`]: grid sweeps, optima, Pareto fronts and topology ranking

pub mod catalog;
pub mod dcdc;
mod error;
pub mod evaluate;
pub mod losses;
pub mod mmc;
pub mod operating_point;
pub mod sweep;

pub use catalog::{Catalog, DeviceModel, FbsmRule, TopologyDescriptor, TopologyKind};
pub use dcdc::DcdcDesign;
pub use error::Error;
pub use evaluate::{
    CalibrationResult, CalibrationTarget, CostVolumeCoefficients, DesignEvaluation, Metric,
    NormalizedRatios,
};
pub use losses::LossBreakdown;
pub use mmc::MmcDesign;
pub use operating_point::{
    check_feasibility, ArmWaveforms, FeasibilityViolation, OperatingPoint, SystemSpec,
};
pub use sweep::{Objective, ParetoPoint, RankingTable, SweepResult};
