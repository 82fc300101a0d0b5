//! Modulation-index sweeps, per-objective optima, Pareto fronts and the
//! topology ranking table.
//!
//! Objectives are piecewise-constant in the integer counts, so a plain grid
//! sweep is the right search tool; grids are generated in integer micro-steps
//! so design points like m = 1.5 or m = 3 land exactly on their decimal
//! values run after run.

use crate::catalog::{Catalog, TopologyKind};
use crate::error::Error;
use crate::evaluate::{CostVolumeCoefficients, DesignEvaluation, Evaluator};
use crate::operating_point::{check_feasibility, SystemSpec};

/// Default sweep range and step used by the CLI and the ranking table.
pub const DEFAULT_M_LO: f64 = 1.0;
pub const DEFAULT_M_HI: f64 = 7.0;
pub const DEFAULT_STEP: f64 = 0.05;

/// A grid point that could not be sized, and why.
#[derive(Debug, Clone)]
pub struct InfeasiblePoint {
    pub m: f64,
    pub reason: String,
}

/// Outcome of sweeping one topology over a modulation grid.
#[derive(Debug, Clone)]
pub struct SweepResult {
    pub topology: TopologyKind,
    /// Every grid point, strictly increasing.
    pub grid: Vec<f64>,
    /// Evaluations of the feasible points, sorted by m.
    pub evaluations: Vec<DesignEvaluation>,
    /// Skipped points with their violations; never dropped silently.
    pub infeasible: Vec<InfeasiblePoint>,
}

impl SweepResult {
    /// True when no grid point was feasible.
    pub fn is_empty(&self) -> bool {
        self.evaluations.is_empty()
    }
}

/// Exact-decimal modulation grid from `m_lo` to `m_hi` in `step` increments.
///
/// Steps below 1e-6 in magnitude are rejected along with inverted ranges.
pub fn modulation_grid(m_lo: f64, m_hi: f64, step: f64) -> Result<Vec<f64>, Error> {
    if !(m_lo > 0.0) || !(m_hi >= m_lo) {
        return Err(Error::Domain(format!(
            "grid bounds must satisfy 0 < m_lo <= m_hi (got {m_lo}..{m_hi})"
        )));
    }
    if !(step > 0.0) {
        return Err(Error::Domain(format!("grid step must be > 0 (got {step})")));
    }
    let lo = (m_lo * 1e6).round() as i64;
    let hi = (m_hi * 1e6).round() as i64;
    let inc = (step * 1e6).round() as i64;
    if inc <= 0 {
        return Err(Error::Domain(format!(
            "grid step must be at least 1e-6 (got {step})"
        )));
    }
    let mut grid = Vec::new();
    let mut v = lo;
    while v <= hi {
        grid.push(v as f64 / 1e6);
        v += inc;
    }
    Ok(grid)
}

/// Evaluates every grid point of one topology, recording infeasible points.
pub fn sweep(
    spec: &SystemSpec,
    kind: TopologyKind,
    catalog: &Catalog,
    coeffs: &CostVolumeCoefficients,
    m_lo: f64,
    m_hi: f64,
    step: f64,
) -> Result<SweepResult, Error> {
    let topo = catalog.topology(kind).ok_or_else(|| Error::Config {
        issues: vec![format!("catalog has no {kind} topology")],
    })?;
    let grid = modulation_grid(m_lo, m_hi, step)?;
    let evaluator = Evaluator::new(spec, catalog, coeffs)?;
    let mut evaluations = Vec::new();
    let mut infeasible = Vec::new();
    for &m in &grid {
        if let Some(violation) = check_feasibility(topo, m) {
            infeasible.push(InfeasiblePoint {
                m,
                reason: violation.to_string(),
            });
            continue;
        }
        match evaluator.evaluate(topo, m) {
            Ok(eval) => evaluations.push(eval),
            Err(e @ Error::DeviceOutOfRange { .. }) => {
                infeasible.push(InfeasiblePoint {
                    m,
                    reason: e.to_string(),
                });
            }
            Err(other) => return Err(other),
        }
    }
    Ok(SweepResult {
        topology: kind,
        grid,
        evaluations,
        infeasible,
    })
}

/// Design objectives the sweep can optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Cost,
    Volume,
    Loss,
}

impl Objective {
    pub fn as_str(&self) -> &'static str {
        match self {
            Objective::Cost => "cost",
            Objective::Volume => "volume",
            Objective::Loss => "loss",
        }
    }

    pub fn parse(s: &str) -> Option<Objective> {
        match s {
            "cost" => Some(Objective::Cost),
            "volume" => Some(Objective::Volume),
            "loss" => Some(Objective::Loss),
            _ => None,
        }
    }

    /// Objective value of one evaluation: baseline-normalized ratios for
    /// cost and volume, watts for loss.
    pub fn value(&self, eval: &DesignEvaluation) -> f64 {
        match self {
            Objective::Cost => eval.normalized.total_cost_ratio,
            Objective::Volume => eval.normalized.total_volume_ratio,
            Objective::Loss => eval.losses.total,
        }
    }
}

/// Grid argmin of an objective; ties resolve toward smaller m.
pub fn find_optimum(result: &SweepResult, objective: Objective) -> Result<(f64, f64), Error> {
    let mut best: Option<(f64, f64)> = None;
    for eval in &result.evaluations {
        let v = objective.value(eval);
        let better = match best {
            None => true,
            Some((_, b)) => v < b,
        };
        if better {
            best = Some((eval.m, v));
        }
    }
    best.ok_or(Error::EmptyFeasibleSet)
}

/// One candidate design in objective space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParetoPoint {
    pub topology: TopologyKind,
    pub m: f64,
    /// Baseline-normalized total cost.
    pub total_cost: f64,
    /// Baseline-normalized total volume.
    pub total_volume: f64,
    /// Total losses (W).
    pub total_loss: f64,
}

impl ParetoPoint {
    fn from_eval(eval: &DesignEvaluation) -> Self {
        ParetoPoint {
            topology: eval.topology,
            m: eval.m,
            total_cost: eval.normalized.total_cost_ratio,
            total_volume: eval.normalized.total_volume_ratio,
            total_loss: eval.losses.total,
        }
    }

    /// True when `self` dominates `other`: no worse on all three objectives
    /// and strictly better on at least one.
    fn dominates(&self, other: &ParetoPoint) -> bool {
        let le = self.total_cost <= other.total_cost
            && self.total_volume <= other.total_volume
            && self.total_loss <= other.total_loss;
        let lt = self.total_cost < other.total_cost
            || self.total_volume < other.total_volume
            || self.total_loss < other.total_loss;
        le && lt
    }
}

/// Non-dominated subset over (cost, volume, loss), minimizing all three.
///
/// Output order is stable: catalog topology order, then ascending m.
pub fn pareto_front(results: &[SweepResult]) -> Vec<ParetoPoint> {
    let mut points: Vec<ParetoPoint> = results
        .iter()
        .flat_map(|r| r.evaluations.iter().map(ParetoPoint::from_eval))
        .collect();
    let order = |k: TopologyKind| TopologyKind::ALL.iter().position(|t| *t == k).unwrap_or(0);
    points.sort_by(|a, b| {
        order(a.topology)
            .cmp(&order(b.topology))
            .then(a.m.partial_cmp(&b.m).unwrap_or(std::cmp::Ordering::Equal))
    });
    points
        .iter()
        .filter(|p| !points.iter().any(|q| q.dominates(p)))
        .cloned()
        .collect()
}

/// Per-topology aggregate metrics over a modulation window.
#[derive(Debug, Clone)]
pub struct TopologyRanking {
    pub topology: TopologyKind,
    /// Width of the descriptor's feasible modulation range.
    pub modulation_range_width: f64,
    /// Mean of 1 / total_volume_ratio over the window's common points.
    pub mean_power_density: Option<f64>,
    pub mean_efficiency: Option<f64>,
    pub mean_cost_ratio: Option<f64>,
    /// No feasible point inside the window.
    pub absent_from_window: bool,
    /// Ordinal ranks, 1 = best. None when the topology is absent.
    pub rank_modulation_range: u32,
    pub rank_power_density: Option<u32>,
    pub rank_efficiency: Option<u32>,
    pub rank_cost: Option<u32>,
}

/// Ranking of the three boost-capable topologies over a window.
#[derive(Debug, Clone)]
pub struct RankingTable {
    pub window: (f64, f64),
    /// Grid points (as m values) every present topology could serve.
    pub common_points: Vec<f64>,
    pub rows: Vec<TopologyRanking>,
}

/// Ranks the boost-capable topologies over `window` = (lo, hi).
///
/// Metrics are unweighted means over the grid points feasible for every
/// topology that appears in the window at all; topologies absent from the
/// window are flagged and left out of the per-window ranks.
pub fn rank_topologies(
    spec: &SystemSpec,
    catalog: &Catalog,
    coeffs: &CostVolumeCoefficients,
    window: (f64, f64),
) -> Result<RankingTable, Error> {
    let kinds = [
        TopologyKind::HybridTraditional,
        TopologyKind::HybridSbb,
        TopologyKind::FullBridge,
    ];
    let (lo, hi) = window;
    if !(hi >= lo) || !(lo > 0.0) {
        return Err(Error::Domain(format!("invalid window {lo}:{hi}")));
    }
    let results: Vec<SweepResult> = kinds
        .iter()
        .map(|&k| sweep(spec, k, catalog, coeffs, lo, hi, DEFAULT_STEP))
        .collect::<Result<_, _>>()?;

    let key = |m: f64| (m * 1e6).round() as i64;
    let present: Vec<bool> = results.iter().map(|r| !r.is_empty()).collect();
    let mut common: Vec<i64> = match results.iter().zip(&present).find(|(_, p)| **p) {
        Some((r, _)) => r.evaluations.iter().map(|e| key(e.m)).collect(),
        None => Vec::new(),
    };
    for (r, p) in results.iter().zip(&present) {
        if !*p {
            continue;
        }
        let keys: Vec<i64> = r.evaluations.iter().map(|e| key(e.m)).collect();
        common.retain(|k| keys.contains(k));
    }

    let mut rows: Vec<TopologyRanking> = Vec::new();
    for (r, p) in results.iter().zip(&present) {
        let topo = catalog.topology(r.topology).unwrap();
        let (pd, eff, cost) = if *p && !common.is_empty() {
            let selected: Vec<&DesignEvaluation> = r
                .evaluations
                .iter()
                .filter(|e| common.contains(&key(e.m)))
                .collect();
            let n = selected.len() as f64;
            let pd = selected
                .iter()
                .map(|e| 1.0 / e.normalized.total_volume_ratio)
                .sum::<f64>()
                / n;
            let eff = selected.iter().map(|e| e.losses.efficiency).sum::<f64>() / n;
            let cost = selected
                .iter()
                .map(|e| e.normalized.total_cost_ratio)
                .sum::<f64>()
                / n;
            (Some(pd), Some(eff), Some(cost))
        } else {
            (None, None, None)
        };
        rows.push(TopologyRanking {
            topology: r.topology,
            modulation_range_width: topo.m_max - topo.m_min,
            mean_power_density: pd,
            mean_efficiency: eff,
            mean_cost_ratio: cost,
            absent_from_window: !*p,
            rank_modulation_range: 0,
            rank_power_density: None,
            rank_efficiency: None,
            rank_cost: None,
        });
    }

    assign_ranks(&mut rows, |r| Some(r.modulation_range_width), true, |r, rank| {
        r.rank_modulation_range = rank.unwrap_or(0)
    });
    assign_ranks(&mut rows, |r| r.mean_power_density, true, |r, rank| {
        r.rank_power_density = rank
    });
    assign_ranks(&mut rows, |r| r.mean_efficiency, true, |r, rank| {
        r.rank_efficiency = rank
    });
    assign_ranks(&mut rows, |r| r.mean_cost_ratio, false, |r, rank| {
        r.rank_cost = rank
    });

    Ok(RankingTable {
        window,
        common_points: common.iter().map(|&k| k as f64 / 1e6).collect(),
        rows,
    })
}

fn assign_ranks(
    rows: &mut [TopologyRanking],
    metric: impl Fn(&TopologyRanking) -> Option<f64>,
    higher_is_better: bool,
    set: impl Fn(&mut TopologyRanking, Option<u32>),
) {
    let mut scored: Vec<(usize, f64)> = rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| metric(r).map(|v| (i, v)))
        .collect();
    scored.sort_by(|a, b| {
        let ord = a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal);
        if higher_is_better {
            ord.reverse()
        } else {
            ord
        }
        .then(a.0.cmp(&b.0))
    });
    let ranked: Vec<(usize, u32)> = scored
        .iter()
        .enumerate()
        .map(|(rank, &(idx, _))| (idx, rank as u32 + 1))
        .collect();
    for (i, row) in rows.iter_mut().enumerate() {
        let rank = ranked.iter().find(|(idx, _)| *idx == i).map(|&(_, r)| r);
        set(row, rank);
    }
}
