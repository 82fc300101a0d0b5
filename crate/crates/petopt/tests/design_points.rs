//! End-to-end checks of the five boost-AC design points against the
//! half-bridge baseline, exercising the whole evaluation pipeline through
//! the public API.

use petopt::evaluate::{evaluate_design, CostVolumeCoefficients};
use petopt::sweep::{find_optimum, pareto_front, sweep, Objective};
use petopt::{Catalog, SystemSpec, TopologyKind};

struct DesignPoint {
    m: f64,
    u_dc: f64,
    n_dc_units: u32,
}

const DESIGN_POINTS: [DesignPoint; 5] = [
    DesignPoint { m: 1.5, u_dc: 40.0e3, n_dc_units: 8 },
    DesignPoint { m: 2.0, u_dc: 30.0e3, n_dc_units: 6 },
    DesignPoint { m: 3.0, u_dc: 20.0e3, n_dc_units: 4 },
    DesignPoint { m: 4.0, u_dc: 15.0e3, n_dc_units: 3 },
    DesignPoint { m: 6.0, u_dc: 10.0e3, n_dc_units: 2 },
];

#[test]
fn design_point_trajectory_against_baseline() {
    let spec = SystemSpec::default();
    let cat = Catalog::default();
    let coeffs = CostVolumeCoefficients::default();
    let sbb = cat.topology(TopologyKind::HybridSbb).unwrap();

    for p in &DESIGN_POINTS {
        let eval = evaluate_design(&spec, sbb, p.m, &cat, &coeffs).unwrap();
        assert_eq!(eval.operating_point.u_dc, p.u_dc, "m={}", p.m);
        assert_eq!(eval.dcdc.unit_count, p.n_dc_units, "m={}", p.m);
        assert_eq!(eval.mmc.n_half + eval.mmc.n_full, eval.mmc.n_total);
        // stack reaches the bus without over-provisioning a whole unit
        let stack = eval.dcdc.unit_count as f64 * spec.lv_unit_dc_voltage;
        assert!(stack >= p.u_dc && stack - p.u_dc < spec.lv_unit_dc_voltage);
        // total cost stays below the baseline across the whole trajectory
        assert!(
            eval.normalized.total_cost_ratio < 1.0,
            "m={}: cost ratio {}",
            p.m,
            eval.normalized.total_cost_ratio
        );
    }
}

#[test]
fn volume_falls_then_rises_along_the_trajectory() {
    let spec = SystemSpec::default();
    let cat = Catalog::default();
    let coeffs = CostVolumeCoefficients::default();
    let sbb = cat.topology(TopologyKind::HybridSbb).unwrap();

    let ratios: Vec<f64> = DESIGN_POINTS
        .iter()
        .map(|p| {
            evaluate_design(&spec, sbb, p.m, &cat, &coeffs)
                .unwrap()
                .normalized
                .total_volume_ratio
        })
        .collect();
    // below baseline at moderate m, above it at high m
    assert!(ratios[0] < 1.0 && ratios[1] < 1.0);
    assert!(ratios[3] > 1.0 && ratios[4] > 1.0);
    // monotone rise from m = 2 on
    assert!(ratios[1] < ratios[2] && ratios[2] < ratios[3] && ratios[3] < ratios[4]);
}

#[test]
fn optima_and_front_are_consistent_across_topologies() {
    let spec = SystemSpec::default();
    let cat = Catalog::default();
    let coeffs = CostVolumeCoefficients::default();

    let results: Vec<_> = [
        TopologyKind::HybridTraditional,
        TopologyKind::HybridSbb,
        TopologyKind::FullBridge,
    ]
    .into_iter()
    .map(|k| sweep(&spec, k, &cat, &coeffs, 1.0, 7.0, 0.05).unwrap())
    .collect();

    let front = pareto_front(&results);
    assert!(!front.is_empty());
    for r in &results {
        for objective in [Objective::Cost, Objective::Volume, Objective::Loss] {
            let (m_star, _) = find_optimum(r, objective).unwrap();
            // a per-topology optimum may still be dominated by another
            // topology, but the combined front must dominate or contain it
            let eval = r.evaluations.iter().find(|e| e.m == m_star).unwrap();
            let covered = front.iter().any(|p| {
                (p.topology == r.topology && p.m == m_star)
                    || (p.total_cost <= eval.normalized.total_cost_ratio
                        && p.total_volume <= eval.normalized.total_volume_ratio
                        && p.total_loss <= eval.losses.total)
            });
            assert!(covered, "{} {} optimum uncovered", r.topology, objective.as_str());
        }
    }
}

#[test]
fn sbb_dominates_full_bridge_everywhere_in_range() {
    let spec = SystemSpec::default();
    let cat = Catalog::default();
    let coeffs = CostVolumeCoefficients::default();
    let sbb = sweep(&spec, TopologyKind::HybridSbb, &cat, &coeffs, 1.0, 7.0, 0.25).unwrap();
    let fb = sweep(&spec, TopologyKind::FullBridge, &cat, &coeffs, 1.0, 7.0, 0.25).unwrap();
    for (s, f) in sbb.evaluations.iter().zip(
        fb.evaluations
            .iter()
            .filter(|e| sbb.evaluations.iter().any(|s| s.m == e.m)),
    ) {
        assert_eq!(s.m, f.m);
        assert!(s.normalized.total_cost_ratio < f.normalized.total_cost_ratio, "m={}", s.m);
        assert!(s.losses.total < f.losses.total, "m={}", s.m);
    }
}
