//! Run configuration: a sectioned key-value file (TOML) overlaying the
//! engine's shipped defaults.
//!
//! Every section is optional; omitted keys keep their defaults. Device rows
//! are matched by `name` against the shipped tables so a single field (say,
//! one device's cost) can be overridden without restating the whole table;
//! rows with new names must be complete. Validation collects every problem
//! before reporting, rather than stopping at the first.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use petopt::catalog::{default_topologies, DeviceModel, DeviceRow};
use petopt::evaluate::{CalibrationTarget, Metric};
use petopt::sweep::{DEFAULT_M_HI, DEFAULT_M_LO, DEFAULT_STEP};
use petopt::{Catalog, CostVolumeCoefficients, FbsmRule, SystemSpec, TopologyKind};

/// Fully resolved configuration for one CLI invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub catalog: Catalog,
    pub coefficients: CostVolumeCoefficients,
    pub sweep: SweepSettings,
    pub output: OutputSettings,
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub m_lo: f64,
    pub m_hi: f64,
    pub step: f64,
    pub topologies: Vec<TopologyKind>,
}

#[derive(Debug, Clone)]
pub struct OutputSettings {
    pub directory: PathBuf,
    pub csv: bool,
    pub svg: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            system: SystemSpec::default(),
            catalog: Catalog::default(),
            coefficients: CostVolumeCoefficients::default(),
            sweep: SweepSettings {
                m_lo: DEFAULT_M_LO,
                m_hi: DEFAULT_M_HI,
                step: DEFAULT_STEP,
                topologies: vec![
                    TopologyKind::HybridTraditional,
                    TopologyKind::HybridSbb,
                    TopologyKind::FullBridge,
                ],
            },
            output: OutputSettings {
                directory: PathBuf::from("out"),
                csv: true,
                svg: true,
            },
        }
    }
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    system: Option<SystemSection>,
    coefficients: Option<CoefficientSection>,
    #[serde(default)]
    mmc_device: Vec<DeviceSection>,
    #[serde(default)]
    dcdc_device: Vec<DeviceSection>,
    #[serde(default)]
    topology: Vec<TopologySection>,
    sweep: Option<SweepSection>,
    output: Option<OutputSection>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SystemSection {
    rated_power_w: Option<f64>,
    ac_phase_voltage_v: Option<f64>,
    grid_frequency_hz: Option<f64>,
    sm_capacitor_voltage_v: Option<f64>,
    capacitor_ripple_ratio: Option<f64>,
    lv_unit_dc_voltage_v: Option<f64>,
    dcdc_switching_frequency_hz: Option<f64>,
    transformer_frequency_hz: Option<f64>,
    transformer_ratio: Option<f64>,
    power_factor: Option<f64>,
    mmc_device_switching_frequency_hz: Option<f64>,
    dcdc_zvs_factor: Option<f64>,
    waveform_samples: Option<usize>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct CoefficientSection {
    cap_cost_per_farad: Option<f64>,
    cap_volume_per_farad: Option<f64>,
    igbt_cost_scale: Option<f64>,
    igbt_volume_scale: Option<f64>,
    tx_total_cost: Option<f64>,
    tx_volume_per_unit: Option<f64>,
    diode_cost: Option<f64>,
    diode_volume: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct DeviceSection {
    name: String,
    m_low: Option<f64>,
    m_high: Option<f64>,
    rated_voltage_v: Option<f64>,
    rated_current_a: Option<f64>,
    v0_v: Option<f64>,
    r_on_ohm: Option<f64>,
    esw_j: Option<f64>,
    i_ref_a: Option<f64>,
    v_ref_v: Option<f64>,
    cost: Option<f64>,
    volume_l: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct TopologySection {
    kind: String,
    m_min: Option<f64>,
    m_max: Option<f64>,
    fbsm_rule: Option<String>,
    branch_igbt_count: Option<u32>,
    branch_cost: Option<f64>,
    branch_volume_l: Option<f64>,
    branch_loss_fraction: Option<f64>,
    capacitor_reduction_factor: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct SweepSection {
    m_min: Option<f64>,
    m_max: Option<f64>,
    step: Option<f64>,
    topologies: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct OutputSection {
    directory: Option<String>,
    formats: Option<Vec<String>>,
}

/// Parses and resolves a config file over the defaults.
///
/// Returns every validation issue at once on failure.
pub fn load_run_config(toml_text: Option<&str>) -> Result<RunConfig, Vec<String>> {
    let file: FileConfig = match toml_text {
        None => FileConfig::default(),
        Some(text) => match toml::from_str(text) {
            Ok(f) => f,
            Err(e) => return Err(vec![format!("config parse error: {e}")]),
        },
    };
    let mut issues = Vec::new();
    let mut cfg = RunConfig::default();

    if let Some(sys) = &file.system {
        apply_system(sys, &mut cfg.system);
    }
    if let Err(mut e) = cfg.system.validate() {
        issues.append(&mut e);
    }

    if let Some(co) = &file.coefficients {
        apply_coefficients(co, &mut cfg.coefficients);
    }
    if let Err(mut e) = cfg.coefficients.validate() {
        issues.append(&mut e);
    }

    let mmc_rows = merge_device_rows(
        cfg.catalog.mmc_device_table(),
        &file.mmc_device,
        "mmc_device",
        &mut issues,
    );
    let dcdc_rows = merge_device_rows(
        cfg.catalog.dcdc_device_table(),
        &file.dcdc_device,
        "dcdc_device",
        &mut issues,
    );
    let topologies = merge_topologies(&file.topology, &mut issues);
    match Catalog::from_parts(mmc_rows, dcdc_rows, topologies) {
        Ok(cat) => cfg.catalog = cat,
        Err(petopt::Error::Config { issues: mut e }) => issues.append(&mut e),
        Err(other) => issues.push(other.to_string()),
    }

    if let Some(sw) = &file.sweep {
        if let Some(v) = sw.m_min {
            cfg.sweep.m_lo = v;
        }
        if let Some(v) = sw.m_max {
            cfg.sweep.m_hi = v;
        }
        if let Some(v) = sw.step {
            cfg.sweep.step = v;
        }
        if let Some(names) = &sw.topologies {
            let mut kinds = Vec::new();
            for n in names {
                match TopologyKind::parse(n) {
                    Some(k) => kinds.push(k),
                    None => issues.push(format!("sweep: unknown topology kind \"{n}\"")),
                }
            }
            if !kinds.is_empty() {
                cfg.sweep.topologies = kinds;
            }
        }
    }
    if !(cfg.sweep.m_lo > 0.0) || cfg.sweep.m_hi < cfg.sweep.m_lo {
        issues.push(format!(
            "sweep: need 0 < m_min <= m_max (got {}..{})",
            cfg.sweep.m_lo, cfg.sweep.m_hi
        ));
    }
    if !(cfg.sweep.step > 0.0) {
        issues.push(format!("sweep: step must be > 0 (got {})", cfg.sweep.step));
    }

    if let Some(out) = &file.output {
        if let Some(dir) = &out.directory {
            cfg.output.directory = PathBuf::from(dir);
        }
        if let Some(formats) = &out.formats {
            cfg.output.csv = false;
            cfg.output.svg = false;
            for f in formats {
                match f.as_str() {
                    "csv" => cfg.output.csv = true,
                    "svg" => cfg.output.svg = true,
                    other => issues.push(format!("output: unknown format \"{other}\"")),
                }
            }
        }
    }

    if issues.is_empty() {
        Ok(cfg)
    } else {
        Err(issues)
    }
}

fn apply_system(s: &SystemSection, spec: &mut SystemSpec) {
    if let Some(v) = s.rated_power_w {
        spec.rated_power = v;
    }
    if let Some(v) = s.ac_phase_voltage_v {
        spec.ac_phase_voltage_amplitude = v;
    }
    if let Some(v) = s.grid_frequency_hz {
        spec.grid_frequency = v;
    }
    if let Some(v) = s.sm_capacitor_voltage_v {
        spec.sm_capacitor_voltage = v;
    }
    if let Some(v) = s.capacitor_ripple_ratio {
        spec.capacitor_ripple_ratio = v;
    }
    if let Some(v) = s.lv_unit_dc_voltage_v {
        spec.lv_unit_dc_voltage = v;
    }
    if let Some(v) = s.dcdc_switching_frequency_hz {
        spec.dcdc_switching_frequency = v;
    }
    if let Some(v) = s.transformer_frequency_hz {
        spec.transformer_frequency = v;
    }
    if let Some(v) = s.transformer_ratio {
        spec.transformer_ratio = v;
    }
    if let Some(v) = s.power_factor {
        spec.power_factor = v;
    }
    if let Some(v) = s.mmc_device_switching_frequency_hz {
        spec.mmc_equivalent_device_switching_frequency = v;
    }
    if let Some(v) = s.dcdc_zvs_factor {
        spec.dcdc_zvs_factor = v;
    }
    if let Some(v) = s.waveform_samples {
        spec.waveform_samples_per_period = v;
    }
}

fn apply_coefficients(c: &CoefficientSection, out: &mut CostVolumeCoefficients) {
    if let Some(v) = c.cap_cost_per_farad {
        out.cap_cost_per_farad = v;
    }
    if let Some(v) = c.cap_volume_per_farad {
        out.cap_volume_per_farad = v;
    }
    if let Some(v) = c.igbt_cost_scale {
        out.igbt_cost_scale = v;
    }
    if let Some(v) = c.igbt_volume_scale {
        out.igbt_volume_scale = v;
    }
    if let Some(v) = c.tx_total_cost {
        out.tx_total_cost = v;
    }
    if let Some(v) = c.tx_volume_per_unit {
        out.tx_volume_per_unit = v;
    }
    if let Some(v) = c.diode_cost {
        out.diode_cost = v;
    }
    if let Some(v) = c.diode_volume {
        out.diode_volume = v;
    }
}

fn merge_device_rows(
    defaults: &[DeviceRow],
    overrides: &[DeviceSection],
    table: &str,
    issues: &mut Vec<String>,
) -> Vec<DeviceRow> {
    let mut rows = defaults.to_vec();
    for o in overrides {
        if let Some(row) = rows.iter_mut().find(|r| r.device.name == o.name) {
            if let Some(v) = o.m_low {
                row.m_low = v;
            }
            if let Some(v) = o.m_high {
                row.m_high = v;
            }
            apply_device(o, &mut row.device);
        } else {
            match complete_device(o) {
                Some((m_low, m_high, device)) => rows.push(DeviceRow {
                    m_low,
                    m_high,
                    device,
                }),
                None => issues.push(format!(
                    "{table}: new device \"{}\" must state every field",
                    o.name
                )),
            }
        }
    }
    rows.sort_by(|a, b| a.m_low.partial_cmp(&b.m_low).unwrap_or(std::cmp::Ordering::Equal));
    rows
}

fn apply_device(o: &DeviceSection, d: &mut DeviceModel) {
    if let Some(v) = o.rated_voltage_v {
        d.rated_voltage = v;
    }
    if let Some(v) = o.rated_current_a {
        d.rated_current = v;
    }
    if let Some(v) = o.v0_v {
        d.on_state_threshold_voltage = v;
    }
    if let Some(v) = o.r_on_ohm {
        d.on_state_resistance = v;
    }
    if let Some(v) = o.esw_j {
        d.switching_energy_per_pulse_at_reference = v;
    }
    if let Some(v) = o.i_ref_a {
        d.reference_current = v;
    }
    if let Some(v) = o.v_ref_v {
        d.reference_voltage = v;
    }
    if let Some(v) = o.cost {
        d.unit_cost = v;
    }
    if let Some(v) = o.volume_l {
        d.unit_volume = v;
    }
}

fn complete_device(o: &DeviceSection) -> Option<(f64, f64, DeviceModel)> {
    Some((
        o.m_low?,
        o.m_high?,
        DeviceModel {
            name: o.name.clone(),
            rated_voltage: o.rated_voltage_v?,
            rated_current: o.rated_current_a?,
            on_state_threshold_voltage: o.v0_v?,
            on_state_resistance: o.r_on_ohm?,
            switching_energy_per_pulse_at_reference: o.esw_j?,
            reference_current: o.i_ref_a?,
            reference_voltage: o.v_ref_v?,
            unit_cost: o.cost?,
            unit_volume: o.volume_l?,
        },
    ))
}

fn merge_topologies(
    overrides: &[TopologySection],
    issues: &mut Vec<String>,
) -> Vec<petopt::TopologyDescriptor> {
    let mut topos = default_topologies();
    for o in overrides {
        let Some(kind) = TopologyKind::parse(&o.kind) else {
            issues.push(format!("topology: unknown kind \"{}\"", o.kind));
            continue;
        };
        let t = topos.iter_mut().find(|t| t.kind == kind).unwrap();
        if let Some(v) = o.m_min {
            t.m_min = v;
        }
        if let Some(v) = o.m_max {
            t.m_max = v;
        }
        if let Some(rule) = &o.fbsm_rule {
            match FbsmRule::parse(rule) {
                Some(r) => t.fbsm_rule = r,
                None => issues.push(format!("topology {kind}: unknown fbsm_rule \"{rule}\"")),
            }
        }
        if let Some(v) = o.branch_igbt_count {
            t.branch_igbt_count = v;
        }
        if let Some(v) = o.branch_cost {
            t.branch_cost = v;
        }
        if let Some(v) = o.branch_volume_l {
            t.branch_volume = v;
        }
        if let Some(v) = o.branch_loss_fraction {
            t.branch_loss_fraction = v;
        }
        if let Some(v) = o.capacitor_reduction_factor {
            t.capacitor_reduction_factor = v;
        }
    }
    topos
}

/// Canonical text rendering of a resolved config, used for the manifest hash.
pub fn canonical_config_text(cfg: &RunConfig) -> String {
    let mut s = String::new();
    let sys = &cfg.system;
    for (k, v) in [
        ("rated_power_w", sys.rated_power),
        ("ac_phase_voltage_v", sys.ac_phase_voltage_amplitude),
        ("grid_frequency_hz", sys.grid_frequency),
        ("sm_capacitor_voltage_v", sys.sm_capacitor_voltage),
        ("capacitor_ripple_ratio", sys.capacitor_ripple_ratio),
        ("lv_unit_dc_voltage_v", sys.lv_unit_dc_voltage),
        ("dcdc_switching_frequency_hz", sys.dcdc_switching_frequency),
        ("transformer_frequency_hz", sys.transformer_frequency),
        ("transformer_ratio", sys.transformer_ratio),
        ("power_factor", sys.power_factor),
        (
            "mmc_device_switching_frequency_hz",
            sys.mmc_equivalent_device_switching_frequency,
        ),
        ("dcdc_zvs_factor", sys.dcdc_zvs_factor),
    ] {
        s.push_str(&format!("{k}={v}\n"));
    }
    s.push_str(&format!(
        "waveform_samples={}\n",
        sys.waveform_samples_per_period
    ));
    let c = &cfg.coefficients;
    s.push_str(&format!(
        "coefficients={},{},{},{},{},{},{},{}\n",
        c.cap_cost_per_farad,
        c.cap_volume_per_farad,
        c.igbt_cost_scale,
        c.igbt_volume_scale,
        c.tx_total_cost,
        c.tx_volume_per_unit,
        c.diode_cost,
        c.diode_volume
    ));
    for (name, table) in [
        ("mmc", cfg.catalog.mmc_device_table()),
        ("dcdc", cfg.catalog.dcdc_device_table()),
    ] {
        for row in table {
            let d = &row.device;
            s.push_str(&format!(
                "{name}_device={},{},{},{},{},{},{},{},{},{},{},{}\n",
                row.m_low,
                row.m_high,
                d.name,
                d.rated_voltage,
                d.rated_current,
                d.on_state_threshold_voltage,
                d.on_state_resistance,
                d.switching_energy_per_pulse_at_reference,
                d.reference_current,
                d.reference_voltage,
                d.unit_cost,
                d.unit_volume
            ));
        }
    }
    for t in cfg.catalog.topologies() {
        s.push_str(&format!(
            "topology={},{},{},{},{},{},{},{},{}\n",
            t.kind,
            t.m_min,
            t.m_max,
            t.fbsm_rule.as_str(),
            t.branch_igbt_count,
            t.branch_cost,
            t.branch_volume,
            t.branch_loss_fraction,
            t.capacitor_reduction_factor
        ));
    }
    s.push_str(&format!(
        "sweep={},{},{},{}\n",
        cfg.sweep.m_lo,
        cfg.sweep.m_hi,
        cfg.sweep.step,
        cfg.sweep
            .topologies
            .iter()
            .map(|k| k.as_str())
            .collect::<Vec<_>>()
            .join("+")
    ));
    s
}

/// FNV-1a hash of the canonical config text.
pub fn config_hash(cfg: &RunConfig) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in canonical_config_text(cfg).bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetsFile {
    #[serde(default)]
    target: Vec<TargetRow>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TargetRow {
    m: f64,
    metric: String,
    ratio: f64,
}

/// Parses a calibration-targets file: repeated `[[target]]` sections with
/// `m`, `metric` and `ratio` keys.
pub fn parse_targets(toml_text: &str) -> Result<Vec<CalibrationTarget>, Vec<String>> {
    let file: TargetsFile =
        toml::from_str(toml_text).map_err(|e| vec![format!("targets parse error: {e}")])?;
    let mut issues = Vec::new();
    let mut targets = Vec::new();
    for (idx, row) in file.target.iter().enumerate() {
        match Metric::parse(&row.metric) {
            Some(metric) => targets.push(CalibrationTarget {
                m: row.m,
                metric,
                target_ratio: row.ratio,
            }),
            None => issues.push(format!(
                "target {idx}: unknown metric \"{}\"",
                row.metric
            )),
        }
    }
    if targets.is_empty() {
        issues.push("targets file lists no targets".into());
    }
    if issues.is_empty() {
        Ok(targets)
    } else {
        Err(issues)
    }
}

/// Renders a coefficient set as a `[coefficients]` config section.
pub fn coefficients_toml(c: &CostVolumeCoefficients) -> String {
    format!(
        "[coefficients]\n\
         cap_cost_per_farad = {}\n\
         cap_volume_per_farad = {}\n\
         igbt_cost_scale = {}\n\
         igbt_volume_scale = {}\n\
         tx_total_cost = {}\n\
         tx_volume_per_unit = {}\n\
         diode_cost = {}\n\
         diode_volume = {}\n",
        c.cap_cost_per_farad,
        c.cap_volume_per_farad,
        c.igbt_cost_scale,
        c.igbt_volume_scale,
        c.tx_total_cost,
        c.tx_volume_per_unit,
        c.diode_cost,
        c.diode_volume
    )
}
