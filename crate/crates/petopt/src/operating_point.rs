//! Steady-state electrical operating point of the transformer for a given
//! modulation index, plus closed-form arm waveforms.
//!
//! The modulation index m = 2*U_ac/U_dc ties the AC phase amplitude to the
//! DC bus: raising m lowers the medium-voltage DC bus while the grid-side AC
//! voltage stays fixed. Everything downstream (unit counts, device stresses,
//! capacitor sizing) keys off the solved point.

use std::f64::consts::PI;

use crate::catalog::{TopologyDescriptor, TopologyKind};
use crate::error::Error;

/// Electrical constants of the transformer system.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    /// Rated power (W).
    pub rated_power: f64,
    /// AC phase voltage amplitude V_m (V).
    pub ac_phase_voltage_amplitude: f64,
    /// Grid frequency (Hz).
    pub grid_frequency: f64,
    /// Submodule capacitor voltage U_c (V).
    pub sm_capacitor_voltage: f64,
    /// Allowed capacitor voltage ripple ratio (fraction of U_c).
    pub capacitor_ripple_ratio: f64,
    /// Low-voltage DC bus of one DC/DC unit (V).
    pub lv_unit_dc_voltage: f64,
    /// DC/DC switching frequency (Hz).
    pub dcdc_switching_frequency: f64,
    /// Medium-frequency transformer frequency (Hz).
    pub transformer_frequency: f64,
    /// Medium-frequency transformer turns ratio.
    pub transformer_ratio: f64,
    /// Grid-side power factor, in (0, 1].
    pub power_factor: f64,
    /// Equivalent per-device switching frequency of the MMC stage (Hz).
    pub mmc_equivalent_device_switching_frequency: f64,
    /// ZVS derating factor for DC/DC switching loss, in [0, 1].
    pub dcdc_zvs_factor: f64,
    /// Samples per grid period for waveform integration.
    pub waveform_samples_per_period: usize,
}

impl Default for SystemSpec {
    fn default() -> Self {
        Self {
            rated_power: 5.0e6,
            ac_phase_voltage_amplitude: 30.0e3,
            grid_frequency: 50.0,
            sm_capacitor_voltage: 2.0e3,
            capacitor_ripple_ratio: 0.10,
            lv_unit_dc_voltage: 5.0e3,
            dcdc_switching_frequency: 2.5e3,
            transformer_frequency: 5.0e3,
            transformer_ratio: 1.0,
            power_factor: 1.0,
            mmc_equivalent_device_switching_frequency: 150.0,
            dcdc_zvs_factor: 0.5,
            waveform_samples_per_period: 4096,
        }
    }
}

impl SystemSpec {
    /// Validates the spec, returning every violated constraint.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut issues = Vec::new();
        let positive = [
            ("rated_power", self.rated_power),
            (
                "ac_phase_voltage_amplitude",
                self.ac_phase_voltage_amplitude,
            ),
            ("grid_frequency", self.grid_frequency),
            ("sm_capacitor_voltage", self.sm_capacitor_voltage),
            ("lv_unit_dc_voltage", self.lv_unit_dc_voltage),
            ("dcdc_switching_frequency", self.dcdc_switching_frequency),
            ("transformer_frequency", self.transformer_frequency),
            ("transformer_ratio", self.transformer_ratio),
            (
                "mmc_equivalent_device_switching_frequency",
                self.mmc_equivalent_device_switching_frequency,
            ),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                issues.push(format!("{name} must be > 0 (got {v})"));
            }
        }
        if !(self.capacitor_ripple_ratio > 0.0 && self.capacitor_ripple_ratio < 0.5) {
            issues.push(format!(
                "capacitor_ripple_ratio must be in (0, 0.5) (got {})",
                self.capacitor_ripple_ratio
            ));
        }
        if !(self.power_factor > 0.0 && self.power_factor <= 1.0) {
            issues.push(format!(
                "power_factor must be in (0, 1] (got {})",
                self.power_factor
            ));
        }
        if !(0.0..=1.0).contains(&self.dcdc_zvs_factor) {
            issues.push(format!(
                "dcdc_zvs_factor must be in [0, 1] (got {})",
                self.dcdc_zvs_factor
            ));
        }
        if self.waveform_samples_per_period < 64 {
            issues.push(format!(
                "waveform_samples_per_period must be >= 64 (got {})",
                self.waveform_samples_per_period
            ));
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

/// Solved electrical state at one modulation index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatingPoint {
    /// Modulation index m = 2*V_m/U_dc.
    pub m: f64,
    /// Medium-voltage DC bus (V).
    pub u_dc: f64,
    /// DC bus current (A).
    pub i_dc: f64,
    /// AC phase current amplitude I_m (A).
    pub ac_current_amplitude: f64,
    /// Grid angular frequency (rad/s).
    pub angular_frequency: f64,
    /// DC component of one arm current, i_dc/3 (A).
    pub arm_dc_current: f64,
    /// AC amplitude of one arm current, I_m/2 (A).
    pub arm_ac_amplitude: f64,
    /// Displacement angle arccos(power_factor) (rad).
    pub phase_angle: f64,
}

/// Solves the operating point for modulation index `m`.
///
/// U_dc = 2*V_m/m, so the DC bus falls as m rises while power balance fixes
/// the currents: I_dc = P/U_dc and I_m = 2P/(3*V_m*pf).
pub fn solve_operating_point(spec: &SystemSpec, m: f64) -> Result<OperatingPoint, Error> {
    if !(m > 0.0) {
        return Err(Error::Domain(format!(
            "modulation index must be > 0 (got {m})"
        )));
    }
    let v_m = spec.ac_phase_voltage_amplitude;
    let u_dc = 2.0 * v_m / m;
    let i_dc = spec.rated_power / u_dc;
    let i_m = 2.0 * spec.rated_power / (3.0 * v_m * spec.power_factor);
    Ok(OperatingPoint {
        m,
        u_dc,
        i_dc,
        ac_current_amplitude: i_m,
        angular_frequency: 2.0 * PI * spec.grid_frequency,
        arm_dc_current: i_dc / 3.0,
        arm_ac_amplitude: i_m / 2.0,
        phase_angle: spec.power_factor.clamp(-1.0, 1.0).acos(),
    })
}

/// Upper-arm voltage and current sampled over one grid period.
#[derive(Debug, Clone)]
pub struct ArmWaveforms {
    /// Sample angles, uniform over [0, 2*pi).
    pub theta: Vec<f64>,
    /// Arm voltage v(theta) = U_dc/2 - V_m*sin(theta) (V).
    pub voltage: Vec<f64>,
    /// Arm current i(theta) = I_dc/3 + (I_m/2)*sin(theta - phi) (A).
    pub current: Vec<f64>,
}

impl ArmWaveforms {
    /// Mean of |current| over the period (A).
    pub fn mean_abs_current(&self) -> f64 {
        mean(self.current.iter().map(|i| i.abs()))
    }

    /// Mean of current^2 over the period (A^2).
    pub fn mean_square_current(&self) -> f64 {
        mean(self.current.iter().map(|i| i * i))
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in values {
        sum += v;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Evaluates the closed-form arm waveforms at the spec's sample count.
///
/// Circulating-current harmonics are taken as zero, so the arm carries the
/// DC share plus half the phase current.
pub fn arm_waveforms(op: &OperatingPoint, spec: &SystemSpec) -> ArmWaveforms {
    let n = spec.waveform_samples_per_period;
    let v_m = spec.ac_phase_voltage_amplitude;
    let half_dc = op.u_dc / 2.0;
    let mut theta = Vec::with_capacity(n);
    let mut voltage = Vec::with_capacity(n);
    let mut current = Vec::with_capacity(n);
    for k in 0..n {
        let th = 2.0 * PI * k as f64 / n as f64;
        theta.push(th);
        voltage.push(half_dc - v_m * th.sin());
        current.push(op.arm_dc_current + op.arm_ac_amplitude * (th - op.phase_angle).sin());
    }
    ArmWaveforms {
        theta,
        voltage,
        current,
    }
}

/// Why a (topology, m) pair is infeasible.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityViolation {
    pub topology: TopologyKind,
    pub m: f64,
    /// The violated bound and its value.
    pub bound: Bound,
}

/// Which modulation bound was violated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// m was at or below the exclusive lower bound.
    BelowMin(f64),
    /// m was above the inclusive upper bound.
    AboveMax(f64),
}

impl std::fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.bound {
            Bound::BelowMin(lo) => write!(
                f,
                "{} at m={} is at or below m_min={lo} (exclusive)",
                self.topology, self.m
            ),
            Bound::AboveMax(hi) => {
                write!(f, "{} at m={} exceeds m_max={hi}", self.topology, self.m)
            }
        }
    }
}

/// Checks m against the topology's feasible range (m_min, m_max].
///
/// Returns `None` when feasible; violations are values, not errors.
pub fn check_feasibility(topo: &TopologyDescriptor, m: f64) -> Option<FeasibilityViolation> {
    if m <= topo.m_min {
        return Some(FeasibilityViolation {
            topology: topo.kind,
            m,
            bound: Bound::BelowMin(topo.m_min),
        });
    }
    if m > topo.m_max {
        return Some(FeasibilityViolation {
            topology: topo.kind,
            m,
            bound: Bound::AboveMax(topo.m_max),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    #[test]
    fn dc_bus_tracks_modulation_index() {
        let spec = SystemSpec::default();
        assert_eq!(solve_operating_point(&spec, 1.5).unwrap().u_dc, 40.0e3);
        assert_eq!(solve_operating_point(&spec, 6.0).unwrap().u_dc, 10.0e3);
        let op1 = solve_operating_point(&spec, 1.0).unwrap();
        assert!((op1.i_dc - 83.333).abs() < 0.01);
        assert!((op1.ac_current_amplitude - 111.111).abs() < 0.01);
    }

    #[test]
    fn operating_point_invariants_hold_across_m() {
        let spec = SystemSpec::default();
        let mut m = 0.25;
        while m <= 12.0 {
            let op = solve_operating_point(&spec, m).unwrap();
            let v_m = spec.ac_phase_voltage_amplitude;
            assert!((op.m * op.u_dc - 2.0 * v_m).abs() / (2.0 * v_m) < 1e-9, "m={m}");
            assert!(
                (op.u_dc * op.i_dc - spec.rated_power).abs() / spec.rated_power < 1e-9,
                "m={m}"
            );
            m += 0.375;
        }
    }

    #[test]
    fn dc_bus_is_strictly_decreasing_and_product_constant() {
        let spec = SystemSpec::default();
        let mut prev_u = f64::MAX;
        let mut prev_i = 0.0;
        let mut m = 0.5;
        while m <= 8.0 {
            let op = solve_operating_point(&spec, m).unwrap();
            assert!(op.u_dc < prev_u);
            assert!(op.i_dc > prev_i);
            assert!((op.u_dc * op.m - 60.0e3).abs() < 1e-6);
            prev_u = op.u_dc;
            prev_i = op.i_dc;
            m += 0.25;
        }
    }

    #[test]
    fn non_positive_m_is_a_domain_error() {
        let spec = SystemSpec::default();
        assert!(solve_operating_point(&spec, 0.0).is_err());
        assert!(solve_operating_point(&spec, -1.0).is_err());
    }

    #[test]
    fn arm_voltage_minimum_matches_closed_form() {
        let spec = SystemSpec::default();
        // boundary case: at m = 1 the arm voltage just touches zero
        let op1 = solve_operating_point(&spec, 1.0).unwrap();
        let w1 = arm_waveforms(&op1, &spec);
        let min1 = w1.voltage.iter().cloned().fold(f64::MAX, f64::min);
        assert!(min1.abs() < 1e-6);

        let op2 = solve_operating_point(&spec, 2.0).unwrap();
        let w2 = arm_waveforms(&op2, &spec);
        let min2 = w2.voltage.iter().cloned().fold(f64::MAX, f64::min);
        assert!((min2 - (op2.u_dc / 2.0) * (1.0 - 2.0)).abs() < 1e-6);
        assert_eq!(min2, -15.0e3);
    }

    #[test]
    fn arm_current_mean_is_one_third_of_dc() {
        let spec = SystemSpec::default();
        for m in [1.0, 2.5, 6.0] {
            let op = solve_operating_point(&spec, m).unwrap();
            let wave = arm_waveforms(&op, &spec);
            let mean: f64 = wave.current.iter().sum::<f64>() / wave.current.len() as f64;
            assert!((mean - op.i_dc / 3.0).abs() / (op.i_dc / 3.0) < 1e-6, "m={m}");
        }
    }

    #[test]
    fn mean_arm_power_vanishes() {
        // energy balance: each arm neither sources nor sinks net power;
        // oracle is trapezoidal integration over the sampled period
        for pf in [1.0, 0.95] {
            let spec = SystemSpec {
                power_factor: pf,
                ..SystemSpec::default()
            };
            for m in [1.0, 1.5, 3.0, 6.5] {
                let op = solve_operating_point(&spec, m).unwrap();
                let wave = arm_waveforms(&op, &spec);
                let mean_power: f64 = wave
                    .voltage
                    .iter()
                    .zip(&wave.current)
                    .map(|(v, i)| v * i)
                    .sum::<f64>()
                    / wave.voltage.len() as f64;
                let arm_power_scale = spec.rated_power / 6.0;
                assert!(
                    mean_power.abs() / arm_power_scale < 1e-4,
                    "pf={pf} m={m}: {mean_power}"
                );
            }
        }
    }

    #[test]
    fn feasibility_examples() {
        let cat = Catalog::default();
        let trad = cat.topology(crate::catalog::TopologyKind::HybridTraditional).unwrap();
        let hb = cat.topology(crate::catalog::TopologyKind::HalfBridge).unwrap();
        let fb = cat.topology(crate::catalog::TopologyKind::FullBridge).unwrap();

        let v = check_feasibility(trad, 2.5).expect("must violate");
        assert_eq!(v.bound, Bound::AboveMax(2.0));
        assert!(v.to_string().contains("m_max"));

        let v = check_feasibility(hb, 1.2).expect("must violate");
        assert_eq!(v.bound, Bound::AboveMax(1.0));

        assert!(check_feasibility(fb, 1.0).is_none());
        assert!(check_feasibility(trad, 1.0).is_some(), "lower bound is exclusive");
    }

    #[test]
    fn spec_validation_collects_all_issues() {
        let spec = SystemSpec {
            power_factor: 0.0,
            capacitor_ripple_ratio: 0.7,
            waveform_samples_per_period: 16,
            ..SystemSpec::default()
        };
        let issues = spec.validate().unwrap_err();
        assert_eq!(issues.len(), 3, "{issues:?}");
    }
}
