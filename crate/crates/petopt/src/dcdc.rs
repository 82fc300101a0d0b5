//! DC/DC power-stage sizing: cascaded diode-clamped dual-active-bridge units
//! with parallel inputs and series outputs.
//!
//! The unit count is the smallest stack of 5 kV unit outputs that reaches the
//! medium-voltage DC bus; power splits evenly across units.

use crate::catalog::{Catalog, DeviceModel};
use crate::error::Error;
use crate::operating_point::{OperatingPoint, SystemSpec};

/// A sized DC/DC power stage.
#[derive(Debug, Clone, PartialEq)]
pub struct DcdcDesign {
    /// Cascaded units N_DC.
    pub unit_count: u32,
    /// Rated power per unit (W).
    pub per_unit_power: f64,
    /// Input current drawn by one unit from its LV bus (A).
    pub input_current_per_unit: f64,
    /// Series output current, equal to the DC bus current (A).
    pub output_series_current: f64,
    /// Selected switching device.
    pub device: DeviceModel,
    /// IGBTs per unit (two three-level diode-clamped full bridges).
    pub igbt_per_unit: u32,
    /// Clamp diodes per unit.
    pub diode_per_unit: u32,
    /// IGBTs across the whole stage.
    pub igbt_count_total: u32,
    /// Medium-frequency transformer rating per unit (W).
    pub tx_per_unit_power: f64,
}

/// IGBTs in one diode-clamped dual-active-bridge unit.
pub const IGBT_PER_UNIT: u32 = 16;
/// Clamp diodes in one unit.
pub const DIODE_PER_UNIT: u32 = 8;

/// Number of cascaded units needed to reach `u_dc`, minimum 1.
pub fn unit_count(spec: &SystemSpec, u_dc: f64) -> u32 {
    ((u_dc / spec.lv_unit_dc_voltage).ceil() as u32).max(1)
}

/// Sizes the DC/DC stage at one operating point.
pub fn evaluate_dcdc(
    spec: &SystemSpec,
    op: &OperatingPoint,
    catalog: &Catalog,
) -> Result<DcdcDesign, Error> {
    let n = unit_count(spec, op.u_dc);
    let per_unit_power = spec.rated_power / n as f64;
    let device = catalog.select_dcdc_device(op.m)?.clone();
    Ok(DcdcDesign {
        unit_count: n,
        per_unit_power,
        input_current_per_unit: per_unit_power / spec.lv_unit_dc_voltage,
        output_series_current: op.i_dc,
        device,
        igbt_per_unit: IGBT_PER_UNIT,
        diode_per_unit: DIODE_PER_UNIT,
        igbt_count_total: n * IGBT_PER_UNIT,
        tx_per_unit_power: per_unit_power,
    })
}
