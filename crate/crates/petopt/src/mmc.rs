//! MMC power-stage sizing: submodule counts, hybridization ratio, submodule
//! capacitance from the arm energy ripple, device selection and IGBT count.
//!
//! Counts come from voltage coverage: the arm must synthesize its peak
//! voltage U_dc/2 + V_m with all submodules, and its most negative voltage
//! with the full-bridge portion. The capacitor is sized so the peak-to-peak
//! arm energy swing fits the allowed +-eps band around the submodule voltage.

use crate::catalog::{Catalog, DeviceModel, FbsmRule, TopologyDescriptor};
use crate::error::Error;
use crate::operating_point::{arm_waveforms, check_feasibility, OperatingPoint, SystemSpec};

/// A sized MMC power stage.
#[derive(Debug, Clone, PartialEq)]
pub struct MmcDesign {
    /// Submodules per arm.
    pub n_total: u32,
    /// Half-bridge submodules per arm.
    pub n_half: u32,
    /// Full-bridge submodules per arm.
    pub n_full: u32,
    /// N_F / N.
    pub hybridization_ratio: f64,
    /// Capacitance per submodule (F).
    pub sm_capacitance: f64,
    /// Peak-to-peak arm energy ripple (J).
    pub arm_energy_ripple: f64,
    /// Selected switching device.
    pub device: DeviceModel,
    /// IGBTs across all six arms plus the auxiliary branch.
    pub igbt_count_total: u32,
    /// 6 * N * C (F).
    pub total_capacitance: f64,
    /// Fewer than two submodules per arm; sized but flagged.
    pub degenerate: bool,
}

/// Submodule counts per arm for a feasible (topology, m) pair.
///
/// n_total covers the positive peak, n_full the negative peak under the
/// minimal rule; ceiling rounding, no redundancy.
pub fn size_submodules(
    spec: &SystemSpec,
    op: &OperatingPoint,
    topo: &TopologyDescriptor,
) -> Result<(u32, u32, u32), Error> {
    if let Some(violation) = check_feasibility(topo, op.m) {
        return Err(Error::Infeasible(violation));
    }
    let u_c = spec.sm_capacitor_voltage;
    let v_m = spec.ac_phase_voltage_amplitude;
    let half_dc = op.u_dc / 2.0;
    let n_total = ((half_dc + v_m) / u_c).ceil() as u32;
    let n_full = match topo.fbsm_rule {
        FbsmRule::None => 0,
        FbsmRule::AllFullBridge => n_total,
        FbsmRule::MinimalNegativeVoltage => (((v_m - half_dc).max(0.0)) / u_c).ceil() as u32,
    };
    Ok((n_total, n_total - n_full, n_full))
}

/// Peak-to-peak swing of the integrated arm power over one period (J).
///
/// e(theta) = cumulative trapezoidal integral of v_arm * i_arm / omega at the
/// spec's sample count; the ripple is max(e) - min(e).
pub fn arm_energy_ripple(op: &OperatingPoint, spec: &SystemSpec) -> f64 {
    let wave = arm_waveforms(op, spec);
    let n = wave.theta.len();
    let d_theta = 2.0 * std::f64::consts::PI / n as f64;
    let power: Vec<f64> = wave
        .voltage
        .iter()
        .zip(&wave.current)
        .map(|(v, i)| v * i)
        .collect();
    let mut energy = 0.0;
    let mut min_e = 0.0f64;
    let mut max_e = 0.0f64;
    for k in 0..n {
        // wraps to sample 0 for the last panel; p is periodic
        let next = power[(k + 1) % n];
        energy += 0.5 * (power[k] + next) * d_theta / op.angular_frequency;
        min_e = min_e.min(energy);
        max_e = max_e.max(energy);
    }
    max_e - min_e
}

/// Submodule capacitance for a ripple budget of +-eps around U_c (F).
///
/// C = factor * dE / (2 * N * U_c^2 * eps); the symmetric ripple band
/// (1+eps)^2 - (1-eps)^2 linearizes to exactly 4*eps, half of which carries
/// the peak-to-peak energy swing.
pub fn size_capacitor(
    spec: &SystemSpec,
    delta_e: f64,
    n_total: u32,
    topo: &TopologyDescriptor,
) -> f64 {
    if n_total == 0 || delta_e <= 0.0 {
        return 0.0;
    }
    let u_c = spec.sm_capacitor_voltage;
    topo.capacitor_reduction_factor * delta_e
        / (2.0 * n_total as f64 * u_c * u_c * spec.capacitor_ripple_ratio)
}

/// Sizes the complete MMC stage at one operating point.
pub fn evaluate_mmc(
    spec: &SystemSpec,
    op: &OperatingPoint,
    topo: &TopologyDescriptor,
    catalog: &Catalog,
) -> Result<MmcDesign, Error> {
    let (n_total, n_half, n_full) = size_submodules(spec, op, topo)?;
    let delta_e = arm_energy_ripple(op, spec);
    let sm_capacitance = size_capacitor(spec, delta_e, n_total, topo);
    let device = catalog.select_mmc_device(op.m)?.clone();
    let igbt_count_total = 6 * (2 * n_half + 4 * n_full) + topo.branch_igbt_count;
    Ok(MmcDesign {
        n_total,
        n_half,
        n_full,
        hybridization_ratio: if n_total == 0 {
            0.0
        } else {
            n_full as f64 / n_total as f64
        },
        sm_capacitance,
        arm_energy_ripple: delta_e,
        device,
        igbt_count_total,
        total_capacitance: 6.0 * n_total as f64 * sm_capacitance,
        degenerate: n_total < 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::TopologyKind;
    use crate::operating_point::solve_operating_point;

    fn setup() -> (SystemSpec, Catalog) {
        (SystemSpec::default(), Catalog::default())
    }

    fn topo(cat: &Catalog, kind: TopologyKind) -> TopologyDescriptor {
        cat.topology(kind).unwrap().clone()
    }

    /// Independent oracle for the arm energy ripple at unity power factor.
    ///
    /// The arm power A*sin(theta) + B*cos(2*theta) vanishes where
    /// 2*B*s^2 - A*s - B = 0 with s = sin(theta); evaluating the energy
    /// integral at every root branch and taking the spread gives the exact
    /// peak-to-peak ripple.
    fn ripple_oracle(op: &OperatingPoint, spec: &SystemSpec) -> f64 {
        let v_m = spec.ac_phase_voltage_amplitude;
        let a = (op.u_dc / 2.0) * op.arm_ac_amplitude - v_m * op.arm_dc_current;
        let b = v_m * op.arm_ac_amplitude / 2.0;
        if b == 0.0 {
            return 0.0;
        }
        let energy = |theta: f64| -> f64 {
            (-a * theta.cos() + (b / 2.0) * (2.0 * theta).sin()) / op.angular_frequency
        };
        let disc = (a * a + 8.0 * b * b).sqrt();
        let mut candidates = Vec::new();
        for s in [(a + disc) / (4.0 * b), (a - disc) / (4.0 * b)] {
            if s.abs() <= 1.0 {
                let th = s.asin();
                candidates.push(energy(th));
                candidates.push(energy(std::f64::consts::PI - th));
            }
        }
        let max = candidates.iter().cloned().fold(f64::MIN, f64::max);
        let min = candidates.iter().cloned().fold(f64::MAX, f64::min);
        max - min
    }

    #[test]
    fn submodule_counts_at_unity() {
        let (spec, cat) = setup();
        let op = solve_operating_point(&spec, 1.0).unwrap();
        let hb = topo(&cat, TopologyKind::HalfBridge);
        let (n, nh, nf) = size_submodules(&spec, &op, &hb).unwrap();
        assert_eq!((n, nh, nf), (30, 30, 0));
    }

    #[test]
    fn submodule_counts_at_m2_and_m6() {
        let (spec, cat) = setup();
        let trad = topo(&cat, TopologyKind::HybridTraditional);
        let op2 = solve_operating_point(&spec, 2.0).unwrap();
        assert_eq!(size_submodules(&spec, &op2, &trad).unwrap(), (23, 15, 8));

        let sbb = topo(&cat, TopologyKind::HybridSbb);
        let op6 = solve_operating_point(&spec, 6.0).unwrap();
        assert_eq!(size_submodules(&spec, &op6, &sbb).unwrap(), (18, 5, 13));
    }

    #[test]
    fn counts_cover_sampled_arm_voltage_range() {
        // Oracle: the achievable range [-n_full*U_c, n_total*U_c] must cover
        // every sampled arm voltage.
        let (spec, cat) = setup();
        let sbb = topo(&cat, TopologyKind::HybridSbb);
        let fb = topo(&cat, TopologyKind::FullBridge);
        for (t, m_values) in [(&sbb, vec![1.2, 2.0, 3.7, 6.0, 7.0]), (&fb, vec![1.5, 9.3, 28.0])] {
            for &m in &m_values {
                let op = solve_operating_point(&spec, m).unwrap();
                let (n, _, nf) = size_submodules(&spec, &op, t).unwrap();
                let wave = arm_waveforms(&op, &spec);
                let vmax = wave.voltage.iter().cloned().fold(f64::MIN, f64::max);
                let vmin = wave.voltage.iter().cloned().fold(f64::MAX, f64::min);
                let u_c = spec.sm_capacitor_voltage;
                assert!(n as f64 * u_c >= vmax, "m={m}: positive coverage");
                assert!(-(nf as f64) * u_c <= vmin, "m={m}: negative coverage");
            }
        }
    }

    #[test]
    fn n_half_plus_n_full_is_n_total_everywhere() {
        let (spec, cat) = setup();
        for kind in TopologyKind::ALL {
            let t = topo(&cat, kind);
            let mut m = t.m_min + 0.07;
            while m <= t.m_max.min(9.0) {
                let op = solve_operating_point(&spec, m).unwrap();
                let (n, nh, nf) = size_submodules(&spec, &op, &t).unwrap();
                assert_eq!(nh + nf, n, "{kind} m={m}");
                m += 0.13;
            }
        }
    }

    #[test]
    fn infeasible_point_propagates() {
        let (spec, cat) = setup();
        let trad = topo(&cat, TopologyKind::HybridTraditional);
        let op = solve_operating_point(&spec, 2.5).unwrap();
        assert!(matches!(
            size_submodules(&spec, &op, &trad),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn ripple_matches_oracle_and_frozen_values() {
        let (spec, _) = setup();
        // Frozen from the closed-form extremum oracle at defaults.
        let expected = [(1.0, 6891.6), (2.0, 6891.6), (3.0, 13338.3), (6.0, 30514.5)];
        for (m, frozen) in expected {
            let op = solve_operating_point(&spec, m).unwrap();
            let numeric = arm_energy_ripple(&op, &spec);
            let oracle = ripple_oracle(&op, &spec);
            assert!(
                (numeric - oracle).abs() / oracle < 0.02,
                "m={m}: numeric {numeric} vs oracle {oracle}"
            );
            assert!(
                (numeric - frozen).abs() / frozen < 0.02,
                "m={m}: numeric {numeric} vs frozen {frozen}"
            );
        }
    }

    #[test]
    fn ripple_is_zero_at_zero_power() {
        let mut spec = SystemSpec::default();
        spec.rated_power = 0.0;
        let op = OperatingPoint {
            m: 2.0,
            u_dc: 30.0e3,
            i_dc: 0.0,
            ac_current_amplitude: 0.0,
            angular_frequency: 100.0 * std::f64::consts::PI,
            arm_dc_current: 0.0,
            arm_ac_amplitude: 0.0,
            phase_angle: 0.0,
        };
        assert_eq!(arm_energy_ripple(&op, &spec), 0.0);
    }

    #[test]
    fn ripple_converges_under_sample_doubling() {
        let mut spec = SystemSpec::default();
        let op = solve_operating_point(&spec, 3.0).unwrap();
        let coarse = arm_energy_ripple(&op, &spec);
        spec.waveform_samples_per_period *= 2;
        let fine = arm_energy_ripple(&op, &spec);
        assert!((coarse - fine).abs() / fine < 1e-3);
    }

    #[test]
    fn ripple_strictly_increases_beyond_m2() {
        let (spec, _) = setup();
        let mut prev = arm_energy_ripple(&solve_operating_point(&spec, 2.0).unwrap(), &spec);
        let mut m = 2.25;
        while m <= 7.0 {
            let cur = arm_energy_ripple(&solve_operating_point(&spec, m).unwrap(), &spec);
            assert!(cur > prev, "ripple must rise at m={m}");
            prev = cur;
            m += 0.25;
        }
    }

    #[test]
    fn capacitor_sizing_examples() {
        let (spec, cat) = setup();
        let trad = topo(&cat, TopologyKind::HybridTraditional);
        let c = size_capacitor(&spec, 6891.6, 30, &trad);
        assert!((c - 287.15e-6).abs() / 287.15e-6 < 0.01, "got {c}");
        assert_eq!(size_capacitor(&spec, 0.0, 30, &trad), 0.0);

        let mut halved = trad.clone();
        halved.capacitor_reduction_factor = 0.5;
        let c_half = size_capacitor(&spec, 6891.6, 30, &halved);
        assert!((c_half - c / 2.0).abs() < 1e-12);
    }

    #[test]
    fn igbt_count_examples() {
        let (spec, cat) = setup();
        let op1 = solve_operating_point(&spec, 1.0).unwrap();
        let hb = evaluate_mmc(&spec, &op1, &topo(&cat, TopologyKind::HalfBridge), &cat).unwrap();
        assert_eq!(hb.igbt_count_total, 360);

        let op2 = solve_operating_point(&spec, 2.0).unwrap();
        let trad =
            evaluate_mmc(&spec, &op2, &topo(&cat, TopologyKind::HybridTraditional), &cat).unwrap();
        assert_eq!(trad.igbt_count_total, 6 * (2 * 15 + 4 * 8));
        assert_eq!(trad.igbt_count_total, 372);

        let fb = evaluate_mmc(&spec, &op2, &topo(&cat, TopologyKind::FullBridge), &cat).unwrap();
        assert_eq!(fb.igbt_count_total, 6 * 4 * 23);
        assert_eq!(fb.igbt_count_total, 552);
    }

    #[test]
    fn per_arm_device_count_band_for_minimal_rule() {
        let (spec, cat) = setup();
        let sbb = topo(&cat, TopologyKind::HybridSbb);
        // trim SBB to its descriptor range; probe the hybrid band with both
        // grids so exact integer-division m values are included
        let mut m_values: Vec<f64> = (21..=140).map(|k| k as f64 * 0.05).collect();
        m_values.extend([1.25, 1.5, 2.5, 3.0, 5.0]);
        for m in m_values {
            if m <= sbb.m_min || m > sbb.m_max {
                continue;
            }
            let op = solve_operating_point(&spec, m).unwrap();
            let (_, nh, nf) = size_submodules(&spec, &op, &sbb).unwrap();
            let per_arm = 2 * nh + 4 * nf;
            assert!(
                (60..=64).contains(&per_arm),
                "per-arm device count {per_arm} at m={m}"
            );
        }
    }

    #[test]
    fn total_capacitance_is_independent_of_submodule_count() {
        // Varying U_c changes N but 6*N*C must track the closed form
        // 6*factor*dE/(2*U_c^2*eps) with no residual N dependence.
        let cat = Catalog::default();
        let sbb = topo(&cat, TopologyKind::HybridSbb);
        for u_c in [1700.0, 2000.0, 2300.0] {
            let spec = SystemSpec {
                sm_capacitor_voltage: u_c,
                ..SystemSpec::default()
            };
            let op = solve_operating_point(&spec, 3.0).unwrap();
            let design = evaluate_mmc(&spec, &op, &sbb, &cat).unwrap();
            let closed_form = 6.0 * sbb.capacitor_reduction_factor * design.arm_energy_ripple
                / (2.0 * u_c * u_c * spec.capacitor_ripple_ratio);
            assert!(
                (design.total_capacitance - closed_form).abs() / closed_form < 1e-12,
                "U_c={u_c}"
            );
        }
    }

    #[test]
    fn full_bridge_covers_any_table_m() {
        let (spec, cat) = setup();
        let fb = topo(&cat, TopologyKind::FullBridge);
        let mut m = 1.05;
        while m <= 28.0 {
            let op = solve_operating_point(&spec, m).unwrap();
            let (n, _, nf) = size_submodules(&spec, &op, &fb).unwrap();
            let u_c = spec.sm_capacitor_voltage;
            assert!(n as f64 * u_c >= op.u_dc / 2.0 + spec.ac_phase_voltage_amplitude - 1e-9);
            assert!(nf as f64 * u_c >= (spec.ac_phase_voltage_amplitude - op.u_dc / 2.0).max(0.0));
            m += 1.7;
        }
    }
}
