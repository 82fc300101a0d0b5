//! CSV and SVG report emission.
//!
//! All numeric output goes through one fixed formatter (6 significant digits,
//! `.` separator, `\n` line endings) so identical runs produce byte-identical
//! files. Charts are hand-written SVG with no external references.

use std::fmt::Write as _;

use petopt::evaluate::Residual;
use petopt::sweep::SweepResult;
use petopt::{DesignEvaluation, TopologyKind};

/// Formats `v` with 6 significant digits in plain decimal notation.
pub fn fmt_sig(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    // exponent via scientific rendering avoids log10 edge cases
    let sci = format!("{:e}", v.abs());
    let exp: i32 = sci
        .split('e')
        .nth(1)
        .and_then(|e| e.parse().ok())
        .unwrap_or(0);
    let decimals = 5 - exp;
    if decimals <= 0 {
        let scale = 10f64.powi(-decimals);
        format!("{:.0}", (v / scale).round() * scale)
    } else {
        format!("{:.*}", decimals as usize, v)
    }
}

/// Header of the per-topology sweep CSV.
pub const SWEEP_CSV_HEADER: &str = "topology,m,u_dc_v,n_dc_units,n_sm,n_half,n_full,c_sm_f,\
mmc_igbt,dcdc_igbt,mmc_cost_ratio,mmc_volume_ratio,dcdc_cost_ratio,dcdc_volume_ratio,\
total_cost_ratio,total_volume_ratio,loss_total_w,efficiency";

fn sweep_csv_row(e: &DesignEvaluation) -> String {
    let n = &e.normalized;
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        e.topology.as_str(),
        fmt_sig(e.m),
        fmt_sig(e.operating_point.u_dc),
        e.dcdc.unit_count,
        e.mmc.n_total,
        e.mmc.n_half,
        e.mmc.n_full,
        fmt_sig(e.mmc.sm_capacitance),
        e.mmc.igbt_count_total,
        e.dcdc.igbt_count_total,
        fmt_sig(n.mmc_cost_ratio),
        fmt_sig(n.mmc_volume_ratio),
        fmt_sig(n.dcdc_cost_ratio),
        fmt_sig(n.dcdc_volume_ratio),
        fmt_sig(n.total_cost_ratio),
        fmt_sig(n.total_volume_ratio),
        fmt_sig(e.losses.total),
        fmt_sig(e.losses.efficiency),
    )
}

/// Renders one sweep's feasible points as CSV.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for e in &result.evaluations {
        out.push_str(&sweep_csv_row(e));
        out.push('\n');
    }
    out
}

/// Renders the infeasible points of several sweeps as CSV.
pub fn infeasible_csv(results: &[SweepResult]) -> String {
    let mut out = String::from("topology,m,reason\n");
    for r in results {
        for p in &r.infeasible {
            let _ = writeln!(
                out,
                "{},{},\"{}\"",
                r.topology.as_str(),
                fmt_sig(p.m),
                p.reason.replace('"', "'")
            );
        }
    }
    out
}

/// Renders the calibration residual report as CSV.
pub fn residuals_csv(residuals: &[Residual]) -> String {
    let mut out = String::from("m,metric,target,model,residual\n");
    for r in residuals {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(r.m),
            r.metric.as_str(),
            fmt_sig(r.target),
            fmt_sig(r.model),
            fmt_sig(r.residual)
        );
    }
    out
}

/// Run manifest: config hash, grid and artifact list as key,value rows.
pub fn manifest_csv(
    config_hash: u64,
    m_lo: f64,
    m_hi: f64,
    step: f64,
    topologies: &[TopologyKind],
    artifacts: &[String],
) -> String {
    let mut out = String::from("key,value\n");
    let _ = writeln!(out, "config_hash,{config_hash:016x}");
    let _ = writeln!(out, "m_min,{}", fmt_sig(m_lo));
    let _ = writeln!(out, "m_max,{}", fmt_sig(m_hi));
    let _ = writeln!(out, "step,{}", fmt_sig(step));
    let _ = writeln!(
        out,
        "topologies,{}",
        topologies
            .iter()
            .map(|k| k.as_str())
            .collect::<Vec<_>>()
            .join(";")
    );
    let _ = writeln!(out, "artifacts,{}", artifacts.join(";"));
    out
}

/// Which quantity a chart plots against modulation index.
#[derive(Debug, Clone, Copy)]
pub enum ChartSeries {
    TotalVolumeRatio,
    TotalCostRatio,
    MmcLossWatts,
}

impl ChartSeries {
    fn pick(&self, e: &DesignEvaluation) -> f64 {
        match self {
            ChartSeries::TotalVolumeRatio => e.normalized.total_volume_ratio,
            ChartSeries::TotalCostRatio => e.normalized.total_cost_ratio,
            ChartSeries::MmcLossWatts => e.losses.mmc_total(),
        }
    }

    fn y_label(&self) -> &'static str {
        match self {
            ChartSeries::TotalVolumeRatio => "total volume (relative to m=1 baseline)",
            ChartSeries::TotalCostRatio => "total cost (relative to m=1 baseline)",
            ChartSeries::MmcLossWatts => "MMC power losses (W)",
        }
    }
}

const CHART_COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const W: f64 = 640.0;
const H: f64 = 420.0;
const ML: f64 = 70.0;
const MR: f64 = 20.0;
const MT: f64 = 40.0;
const MB: f64 = 50.0;

fn fmt_coord(v: f64) -> String {
    format!("{v:.2}")
}

/// Tick value formatting: compact, deterministic.
fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if v.abs() >= 1000.0 {
        format!("{:.0}", v)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Self-contained SVG line chart of one series across several sweeps.
pub fn chart_svg(title: &str, series: ChartSeries, results: &[SweepResult]) -> String {
    let mut x_min = f64::MAX;
    let mut x_max = f64::MIN;
    let mut y_min = f64::MAX;
    let mut y_max = f64::MIN;
    for r in results {
        for e in &r.evaluations {
            let y = series.pick(e);
            x_min = x_min.min(e.m);
            x_max = x_max.max(e.m);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min > x_max {
        x_min = 0.0;
        x_max = 1.0;
    }
    if y_min > y_max {
        y_min = 0.0;
        y_max = 1.0;
    }
    if (y_max - y_min).abs() < 1e-12 {
        y_min -= 0.5;
        y_max += 0.5;
    }
    let pad = (y_max - y_min) * 0.05;
    y_min -= pad;
    y_max += pad;

    let x_px = |m: f64| ML + (m - x_min) / (x_max - x_min).max(1e-12) * (W - ML - MR);
    let y_px = |v: f64| H - MB - (v - y_min) / (y_max - y_min) * (H - MT - MB);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {W} {H}\" \
         font-family=\"sans-serif\" font-size=\"12\">"
    );
    let _ = writeln!(s, "<rect width=\"{W}\" height=\"{H}\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">{title}</text>",
        W / 2.0
    );
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB,
        W - MR,
        H - MB
    );
    let _ = writeln!(
        s,
        "<line x1=\"{ML}\" y1=\"{MT}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
        H - MB
    );
    // ticks
    for i in 0..=6 {
        let m = x_min + (x_max - x_min) * i as f64 / 6.0;
        let x = x_px(m);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
            fmt_coord(x),
            H - MB,
            fmt_coord(x),
            H - MB + 5.0
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            fmt_coord(x),
            H - MB + 18.0,
            fmt_tick(m)
        );
    }
    for i in 0..=5 {
        let v = y_min + (y_max - y_min) * i as f64 / 5.0;
        let y = y_px(v);
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{ML}\" y2=\"{}\" stroke=\"black\"/>",
            ML - 5.0,
            fmt_coord(y),
            fmt_coord(y)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>",
            ML - 8.0,
            fmt_coord(y + 4.0),
            fmt_tick(v)
        );
    }
    // axis labels
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">modulation index m</text>",
        (ML + W - MR) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" transform=\"rotate(-90 16 {})\">{}</text>",
        (MT + H - MB) / 2.0,
        (MT + H - MB) / 2.0,
        series.y_label()
    );
    // series
    for (idx, r) in results.iter().enumerate() {
        if r.evaluations.is_empty() {
            continue;
        }
        let color = CHART_COLORS[idx % CHART_COLORS.len()];
        let points: Vec<String> = r
            .evaluations
            .iter()
            .map(|e| format!("{},{}", fmt_coord(x_px(e.m)), fmt_coord(y_px(series.pick(e)))))
            .collect();
        let _ = writeln!(
            s,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.8\" points=\"{}\"/>",
            points.join(" ")
        );
        let ly = MT + 16.0 * idx as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            W - MR - 150.0,
            fmt_coord(ly),
            W - MR - 125.0,
            fmt_coord(ly)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\">{}</text>",
            W - MR - 118.0,
            fmt_coord(ly + 4.0),
            r.topology.as_str()
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Human-readable single-design report.
pub fn design_report(e: &DesignEvaluation) -> String {
    let mut s = String::new();
    let n = &e.normalized;
    let _ = writeln!(s, "design point: {} at m = {}", e.topology.as_str(), fmt_sig(e.m));
    let _ = writeln!(s, "---------------------------------------------");
    let _ = writeln!(s, "dc bus voltage        : {} V", fmt_sig(e.operating_point.u_dc));
    let _ = writeln!(s, "dc bus current        : {} A", fmt_sig(e.operating_point.i_dc));
    let _ = writeln!(
        s,
        "ac current amplitude  : {} A",
        fmt_sig(e.operating_point.ac_current_amplitude)
    );
    let _ = writeln!(s, "mmc submodules/arm    : {} ({} half + {} full)", e.mmc.n_total, e.mmc.n_half, e.mmc.n_full);
    let _ = writeln!(s, "hybridization ratio   : {}", fmt_sig(e.mmc.hybridization_ratio));
    let _ = writeln!(s, "sm capacitance        : {} F", fmt_sig(e.mmc.sm_capacitance));
    let _ = writeln!(s, "arm energy ripple     : {} J", fmt_sig(e.mmc.arm_energy_ripple));
    let _ = writeln!(s, "mmc device            : {}", e.mmc.device.name);
    let _ = writeln!(s, "mmc igbt count        : {}", e.mmc.igbt_count_total);
    if e.mmc.degenerate {
        let _ = writeln!(s, "warning               : fewer than 2 submodules per arm");
    }
    let _ = writeln!(
        s,
        "dcdc units            : {} ({} of baseline 12)",
        e.dcdc.unit_count,
        unit_fraction(e.dcdc.unit_count)
    );
    let _ = writeln!(s, "dcdc per-unit power   : {} W", fmt_sig(e.dcdc.per_unit_power));
    let _ = writeln!(s, "dcdc series current   : {} A", fmt_sig(e.dcdc.output_series_current));
    let _ = writeln!(s, "dcdc device           : {}", e.dcdc.device.name);
    let _ = writeln!(s, "dcdc igbt count       : {}", e.dcdc.igbt_count_total);
    let _ = writeln!(s, "---------------------------------------------");
    let _ = writeln!(s, "ratios vs m=1 half-bridge baseline:");
    let _ = writeln!(s, "  mmc cost   {}   mmc volume   {}", fmt_sig(n.mmc_cost_ratio), fmt_sig(n.mmc_volume_ratio));
    let _ = writeln!(s, "  dcdc cost  {}   dcdc volume  {}", fmt_sig(n.dcdc_cost_ratio), fmt_sig(n.dcdc_volume_ratio));
    let _ = writeln!(s, "  total cost {}   total volume {}", fmt_sig(n.total_cost_ratio), fmt_sig(n.total_volume_ratio));
    let _ = writeln!(s, "losses:");
    let _ = writeln!(
        s,
        "  mmc {} W (conduction {}, switching {}, branch {})",
        fmt_sig(e.losses.mmc_total()),
        fmt_sig(e.losses.mmc_conduction),
        fmt_sig(e.losses.mmc_switching),
        fmt_sig(e.losses.mmc_branch)
    );
    let _ = writeln!(
        s,
        "  dcdc {} W (conduction {}, switching {})",
        fmt_sig(e.losses.dcdc_conduction + e.losses.dcdc_switching),
        fmt_sig(e.losses.dcdc_conduction),
        fmt_sig(e.losses.dcdc_switching)
    );
    let _ = writeln!(s, "  total {} W, efficiency {}", fmt_sig(e.losses.total), fmt_sig(e.losses.efficiency));
    s
}

fn unit_fraction(n: u32) -> String {
    if n == 0 || 12 % n != 0 {
        format!("{n}/12")
    } else if n == 12 {
        "1".to_string()
    } else {
        format!("1/{}", 12 / n)
    }
}

/// Flat key=value rendering of a design for scripting.
pub fn design_kv(e: &DesignEvaluation) -> String {
    let n = &e.normalized;
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}={v}");
    };
    kv("topology", e.topology.as_str().to_string());
    kv("m", fmt_sig(e.m));
    kv("u_dc_v", fmt_sig(e.operating_point.u_dc));
    kv("i_dc_a", fmt_sig(e.operating_point.i_dc));
    kv("n_sm", e.mmc.n_total.to_string());
    kv("n_half", e.mmc.n_half.to_string());
    kv("n_full", e.mmc.n_full.to_string());
    kv("hybridization_ratio", fmt_sig(e.mmc.hybridization_ratio));
    kv("c_sm_f", fmt_sig(e.mmc.sm_capacitance));
    kv("arm_energy_ripple_j", fmt_sig(e.mmc.arm_energy_ripple));
    kv("mmc_device", e.mmc.device.name.clone());
    kv("mmc_igbt", e.mmc.igbt_count_total.to_string());
    kv("n_dc_units", e.dcdc.unit_count.to_string());
    kv("dcdc_per_unit_power_w", fmt_sig(e.dcdc.per_unit_power));
    kv("dcdc_series_current_a", fmt_sig(e.dcdc.output_series_current));
    kv("dcdc_device", e.dcdc.device.name.clone());
    kv("dcdc_igbt", e.dcdc.igbt_count_total.to_string());
    kv("mmc_cost_ratio", fmt_sig(n.mmc_cost_ratio));
    kv("mmc_volume_ratio", fmt_sig(n.mmc_volume_ratio));
    kv("dcdc_cost_ratio", fmt_sig(n.dcdc_cost_ratio));
    kv("dcdc_volume_ratio", fmt_sig(n.dcdc_volume_ratio));
    kv("total_cost_ratio", fmt_sig(n.total_cost_ratio));
    kv("total_volume_ratio", fmt_sig(n.total_volume_ratio));
    kv("loss_total_w", fmt_sig(e.losses.total));
    kv("efficiency", fmt_sig(e.losses.efficiency));
    kv("degenerate", e.mmc.degenerate.to_string());
    s
}
