//! Conduction and switching losses for both power stages, and system
//! efficiency.
//!
//! MMC conduction counts the devices in the arm current path: one per
//! half-bridge position and two per full-bridge position. The population is
//! taken from the arm's continuous voltage-synthesis requirement (the span
//! 2*V_m plus the negative-voltage portion), so losses track the electrical
//! operating point smoothly instead of stepping with ceiled submodule counts.
//! Each device drops v_on(i) = V0 + R*i whether its cell is inserted or
//! bypassed.
//!
//! Switching loss scales the device's reference pulse energy linearly in
//! current and blocked voltage at an equivalent per-device switching
//! frequency.

use crate::catalog::{FbsmRule, TopologyDescriptor};
use crate::dcdc::DcdcDesign;
use crate::mmc::MmcDesign;
use crate::operating_point::{arm_waveforms, OperatingPoint, SystemSpec};

/// Stage-by-stage loss summary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossBreakdown {
    /// MMC conduction loss (W).
    pub mmc_conduction: f64,
    /// MMC switching loss (W).
    pub mmc_switching: f64,
    /// Auxiliary-branch adjustment (W); negative for the self-balancing
    /// branch, which relieves balancing duty.
    pub mmc_branch: f64,
    /// DC/DC conduction loss (W).
    pub dcdc_conduction: f64,
    /// DC/DC switching loss (W).
    pub dcdc_switching: f64,
    /// Sum of all components (W).
    pub total: f64,
    /// (P - total) / P; by convention 1.0 at zero power.
    pub efficiency: f64,
}

impl LossBreakdown {
    /// MMC stage subtotal (W).
    pub fn mmc_total(&self) -> f64 {
        self.mmc_conduction + self.mmc_switching + self.mmc_branch
    }
}

/// Conduction loss of `devices_in_path` series devices carrying the arm
/// current characterized by its rectified mean and mean square (W).
pub fn conduction_power(
    devices_in_path: f64,
    v0: f64,
    r_on: f64,
    mean_abs_i: f64,
    mean_sq_i: f64,
) -> f64 {
    devices_in_path * (v0 * mean_abs_i + r_on * mean_sq_i)
}

/// Effective device populations per arm: (conducting, switching).
fn arm_device_populations(
    op: &OperatingPoint,
    spec: &SystemSpec,
    rule: FbsmRule,
) -> (f64, f64) {
    let u_c = spec.sm_capacitor_voltage;
    let v_m = spec.ac_phase_voltage_amplitude;
    // submodule positions traversed by the arm voltage swing
    let span = 2.0 * v_m / u_c;
    let negative = (v_m - op.u_dc / 2.0).max(0.0) / u_c;
    match rule {
        FbsmRule::None => (span, 2.0 * span),
        FbsmRule::MinimalNegativeVoltage => (span + negative, 2.0 * (span + negative)),
        FbsmRule::AllFullBridge => (2.0 * span, 4.0 * span),
    }
}

/// MMC stage losses: (conduction, switching, branch) in watts.
pub fn mmc_losses(
    op: &OperatingPoint,
    mmc: &MmcDesign,
    spec: &SystemSpec,
    topo: &TopologyDescriptor,
) -> (f64, f64, f64) {
    let wave = arm_waveforms(op, spec);
    let mean_abs = wave.mean_abs_current();
    let mean_sq = wave.mean_square_current();
    let dev = &mmc.device;
    let (conducting, switching_devices) = arm_device_populations(op, spec, topo.fbsm_rule);

    let conduction = 6.0
        * conduction_power(
            conducting,
            dev.on_state_threshold_voltage,
            dev.on_state_resistance,
            mean_abs,
            mean_sq,
        );
    let per_device_switching = spec.mmc_equivalent_device_switching_frequency
        * dev.switching_energy_per_pulse_at_reference
        * (mean_abs / dev.reference_current)
        * (spec.sm_capacitor_voltage / dev.reference_voltage);
    let switching = 6.0 * switching_devices * per_device_switching;
    let branch = topo.branch_loss_fraction * (conduction + switching);
    (conduction, switching, branch)
}

/// DC/DC stage losses: (conduction, switching) in watts.
///
/// Half the unit's devices conduct at any instant of the DAB half-cycle; the
/// ZVS factor derates hard-switching energy.
pub fn dcdc_losses(dcdc: &DcdcDesign, spec: &SystemSpec) -> (f64, f64) {
    let dev = &dcdc.device;
    let i_u = dcdc.input_current_per_unit;
    let per_unit_conduction = dcdc.igbt_per_unit as f64 / 2.0
        * (dev.on_state_threshold_voltage + dev.on_state_resistance * i_u)
        * i_u;
    let per_unit_switching = dcdc.igbt_per_unit as f64
        * spec.dcdc_switching_frequency
        * dev.switching_energy_per_pulse_at_reference
        * (i_u / dev.reference_current)
        * (spec.lv_unit_dc_voltage / 2.0 / dev.reference_voltage)
        * spec.dcdc_zvs_factor;
    let n = dcdc.unit_count as f64;
    (n * per_unit_conduction, n * per_unit_switching)
}

/// Combines both stages into a [`LossBreakdown`].
pub fn total_losses(
    op: &OperatingPoint,
    mmc: &MmcDesign,
    dcdc: &DcdcDesign,
    spec: &SystemSpec,
    topo: &TopologyDescriptor,
) -> LossBreakdown {
    let (mmc_conduction, mmc_switching, mmc_branch) = mmc_losses(op, mmc, spec, topo);
    let (dcdc_conduction, dcdc_switching) = dcdc_losses(dcdc, spec);
    let total = mmc_conduction + mmc_switching + mmc_branch + dcdc_conduction + dcdc_switching;
    let efficiency = if spec.rated_power > 0.0 {
        (spec.rated_power - total) / spec.rated_power
    } else {
        1.0
    };
    LossBreakdown {
        mmc_conduction,
        mmc_switching,
        mmc_branch,
        dcdc_conduction,
        dcdc_switching,
        total,
        efficiency,
    }
}
