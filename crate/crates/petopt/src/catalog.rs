//! Immutable catalogs of switching devices and converter topologies.
//!
//! The device tables map modulation-index intervals to the 4.5 kV IGBT module
//! that covers the current stress in that interval; one table serves the MMC
//! stage, one the DC/DC stage. Topology descriptors carry the per-topology
//! rules the sizing and evaluation stages need: feasible modulation range,
//! full-bridge-submodule rule, branch overhead and capacitor factor.
//!
//! The catalog is immutable after construction and safe to share across
//! parallel sweep workers.

use crate::error::Error;

/// One switching-device model with its loss and cost/volume coefficients.
///
/// Conduction drop is modeled as v_on(i) = V0 + R*i; switching energy scales
/// linearly from the (reference current, reference voltage) test point.
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceModel {
    pub name: String,
    /// Rated collector-emitter voltage (V).
    pub rated_voltage: f64,
    /// Rated DC collector current (A).
    pub rated_current: f64,
    /// On-state threshold voltage V0 (V).
    pub on_state_threshold_voltage: f64,
    /// On-state slope resistance (ohm).
    pub on_state_resistance: f64,
    /// Total switching energy per on+off pulse at the reference point (J).
    pub switching_energy_per_pulse_at_reference: f64,
    /// Reference current of the switching-energy figure (A).
    pub reference_current: f64,
    /// Reference voltage of the switching-energy figure (V).
    pub reference_voltage: f64,
    /// Unit cost (currency units).
    pub unit_cost: f64,
    /// Unit volume (liters).
    pub unit_volume: f64,
}

impl DeviceModel {
    /// Validates positivity/non-negativity constraints.
    fn validate(&self, issues: &mut Vec<String>) {
        if !(self.rated_voltage > 0.0) {
            issues.push(format!("device {}: rated_voltage must be > 0", self.name));
        }
        if !(self.rated_current > 0.0) {
            issues.push(format!("device {}: rated_current must be > 0", self.name));
        }
        for (field, v) in [
            ("v0_v", self.on_state_threshold_voltage),
            ("r_on_ohm", self.on_state_resistance),
            ("esw_j", self.switching_energy_per_pulse_at_reference),
            ("cost", self.unit_cost),
            ("volume_l", self.unit_volume),
        ] {
            if v < 0.0 {
                issues.push(format!("device {}: {field} must be >= 0", self.name));
            }
        }
        if !(self.reference_current > 0.0) || !(self.reference_voltage > 0.0) {
            issues.push(format!(
                "device {}: reference current/voltage must be > 0",
                self.name
            ));
        }
    }
}

/// MMC topology families covered by the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    HalfBridge,
    HybridTraditional,
    HybridSbb,
    FullBridge,
}

impl TopologyKind {
    pub const ALL: [TopologyKind; 4] = [
        TopologyKind::HalfBridge,
        TopologyKind::HybridTraditional,
        TopologyKind::HybridSbb,
        TopologyKind::FullBridge,
    ];

    /// Stable CLI/CSV identifier.
    pub fn as_str(&self) -> &'static str {
        match self {
            TopologyKind::HalfBridge => "half-bridge",
            TopologyKind::HybridTraditional => "hybrid-traditional",
            TopologyKind::HybridSbb => "hybrid-sbb",
            TopologyKind::FullBridge => "full-bridge",
        }
    }

    pub fn parse(s: &str) -> Option<TopologyKind> {
        match s {
            "half-bridge" => Some(TopologyKind::HalfBridge),
            "hybrid-traditional" => Some(TopologyKind::HybridTraditional),
            "hybrid-sbb" => Some(TopologyKind::HybridSbb),
            "full-bridge" => Some(TopologyKind::FullBridge),
            _ => None,
        }
    }
}

impl std::fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How full-bridge submodules are allocated within an arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FbsmRule {
    /// No FBSMs (half-bridge MMC, m <= 1 only).
    None,
    /// Just enough FBSMs to synthesize the most negative arm voltage.
    MinimalNegativeVoltage,
    /// Every submodule is a full bridge.
    AllFullBridge,
}

impl FbsmRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            FbsmRule::None => "none",
            FbsmRule::MinimalNegativeVoltage => "minimal-negative-voltage",
            FbsmRule::AllFullBridge => "all-full-bridge",
        }
    }

    pub fn parse(s: &str) -> Option<FbsmRule> {
        match s {
            "none" => Some(FbsmRule::None),
            "minimal-negative-voltage" => Some(FbsmRule::MinimalNegativeVoltage),
            "all-full-bridge" => Some(FbsmRule::AllFullBridge),
            _ => None,
        }
    }
}

/// Per-topology sizing and overhead rules.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyDescriptor {
    pub kind: TopologyKind,
    /// Exclusive lower modulation bound.
    pub m_min: f64,
    /// Inclusive upper modulation bound.
    pub m_max: f64,
    pub fbsm_rule: FbsmRule,
    /// IGBTs added by the auxiliary branch (whole stage).
    pub branch_igbt_count: u32,
    /// Fixed branch cost (currency units, whole stage).
    pub branch_cost: f64,
    /// Fixed branch volume (liters, whole stage).
    pub branch_volume: f64,
    /// Net branch effect on stage losses, as a fraction of conduction +
    /// switching. Negative for the self-balancing branch, which relieves
    /// submodule balancing duty.
    pub branch_loss_fraction: f64,
    /// Submodule capacitance multiplier in (0, 1].
    pub capacitor_reduction_factor: f64,
}

impl TopologyDescriptor {
    fn validate(&self, issues: &mut Vec<String>) {
        let k = self.kind;
        if !(self.capacitor_reduction_factor > 0.0 && self.capacitor_reduction_factor <= 1.0) {
            issues.push(format!(
                "topology {k}: capacitor_reduction_factor must be in (0, 1]"
            ));
        }
        if !(self.m_max > self.m_min) {
            issues.push(format!("topology {k}: m_max must exceed m_min"));
        }
        let expected_rule = match k {
            TopologyKind::HalfBridge => FbsmRule::None,
            TopologyKind::HybridTraditional | TopologyKind::HybridSbb => {
                FbsmRule::MinimalNegativeVoltage
            }
            TopologyKind::FullBridge => FbsmRule::AllFullBridge,
        };
        if self.fbsm_rule != expected_rule {
            issues.push(format!(
                "topology {k}: fbsm_rule must be {}",
                expected_rule.as_str()
            ));
        }
        if k == TopologyKind::HalfBridge && self.m_max > 1.0 {
            issues.push(format!("topology {k}: m_max must be <= 1"));
        }
        if k == TopologyKind::HybridTraditional
            && (self.branch_igbt_count != 0
                || self.branch_cost != 0.0
                || self.branch_volume != 0.0
                || self.branch_loss_fraction != 0.0)
        {
            issues.push(format!("topology {k}: branch overhead must be zero"));
        }
        if k == TopologyKind::HybridSbb
            && self.branch_cost == 0.0
            && self.branch_volume == 0.0
            && self.branch_igbt_count == 0
            && self.branch_loss_fraction == 0.0
        {
            issues.push(format!("topology {k}: branch overhead must be nonzero"));
        }
    }
}

/// One device-table row: the device covering m in (m_low, m_high].
#[derive(Debug, Clone, PartialEq)]
pub struct DeviceRow {
    pub m_low: f64,
    pub m_high: f64,
    pub device: DeviceModel,
}

/// Immutable device tables plus topology descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    mmc_device_table: Vec<DeviceRow>,
    dcdc_device_table: Vec<DeviceRow>,
    topologies: Vec<TopologyDescriptor>,
}

fn device(
    name: &str,
    rated_current: f64,
    v0: f64,
    r_on: f64,
    esw: f64,
    cost: f64,
    volume: f64,
) -> DeviceModel {
    DeviceModel {
        name: name.to_string(),
        rated_voltage: 4500.0,
        rated_current,
        on_state_threshold_voltage: v0,
        on_state_resistance: r_on,
        switching_energy_per_pulse_at_reference: esw,
        reference_current: rated_current,
        reference_voltage: 2800.0,
        unit_cost: cost,
        unit_volume: volume,
    }
}

/// Default 4.5 kV IGBT family. Loss, cost and volume coefficients are
/// calibration data shipped with the engine, not datasheet values.
pub fn default_devices() -> [DeviceModel; 4] {
    [
        device("FZ800R45KL3_B5", 800.0, 1.8, 2.8e-3, 5.0, 4000.0, 1.6),
        device("FZ1000R45KL3_B5", 1000.0, 1.7, 2.2e-3, 6.2, 4800.0, 1.8),
        device("FZ1200R45KL3_B5", 1200.0, 1.7, 1.9e-3, 7.4, 5600.0, 2.0),
        device("FZ1500R45KL3_B5", 1500.0, 1.6, 1.5e-3, 9.2, 6800.0, 2.4),
    ]
}

/// Default descriptors for the four topology families.
///
/// The self-balancing-branch values (cost, volume, loss relief, capacitor
/// factor) are calibrated alongside the cost/volume coefficients.
pub fn default_topologies() -> Vec<TopologyDescriptor> {
    vec![
        TopologyDescriptor {
            kind: TopologyKind::HalfBridge,
            m_min: 0.0,
            m_max: 1.0,
            fbsm_rule: FbsmRule::None,
            branch_igbt_count: 0,
            branch_cost: 0.0,
            branch_volume: 0.0,
            branch_loss_fraction: 0.0,
            capacitor_reduction_factor: 1.0,
        },
        TopologyDescriptor {
            kind: TopologyKind::HybridTraditional,
            m_min: 1.0,
            m_max: 2.0,
            fbsm_rule: FbsmRule::MinimalNegativeVoltage,
            branch_igbt_count: 0,
            branch_cost: 0.0,
            branch_volume: 0.0,
            branch_loss_fraction: 0.0,
            capacitor_reduction_factor: 1.0,
        },
        TopologyDescriptor {
            kind: TopologyKind::HybridSbb,
            m_min: 1.0,
            m_max: 7.0,
            fbsm_rule: FbsmRule::MinimalNegativeVoltage,
            branch_igbt_count: 0,
            branch_cost: SBB_BRANCH_COST,
            branch_volume: SBB_BRANCH_VOLUME,
            branch_loss_fraction: -0.04,
            capacitor_reduction_factor: SBB_CAPACITOR_FACTOR,
        },
        TopologyDescriptor {
            kind: TopologyKind::FullBridge,
            m_min: 0.0,
            m_max: 28.0,
            fbsm_rule: FbsmRule::AllFullBridge,
            branch_igbt_count: 0,
            branch_cost: 0.0,
            branch_volume: 0.0,
            branch_loss_fraction: 0.0,
            capacitor_reduction_factor: 1.0,
        },
    ]
}

/// Calibrated self-balancing-branch overhead and capacitor factor.
pub const SBB_BRANCH_COST: f64 = 3.413292e4;
pub const SBB_BRANCH_VOLUME: f64 = 101.7988;
pub const SBB_CAPACITOR_FACTOR: f64 = 0.774733;

impl Default for Catalog {
    fn default() -> Self {
        let [d800, d1000, d1200, d1500] = default_devices();
        let mmc = vec![
            DeviceRow {
                m_low: 1.0,
                m_high: 18.0,
                device: d800.clone(),
            },
            DeviceRow {
                m_low: 18.0,
                m_high: 23.0,
                device: d1000.clone(),
            },
            DeviceRow {
                m_low: 23.0,
                m_high: 28.0,
                device: d1200.clone(),
            },
        ];
        let dcdc = vec![
            DeviceRow {
                m_low: 1.0,
                m_high: 6.0,
                device: d800,
            },
            DeviceRow {
                m_low: 6.0,
                m_high: 7.5,
                device: d1000,
            },
            DeviceRow {
                m_low: 7.5,
                m_high: 9.0,
                device: d1200,
            },
            DeviceRow {
                m_low: 9.0,
                m_high: 11.2,
                device: d1500,
            },
        ];
        Catalog::from_parts(mmc, dcdc, default_topologies())
            .expect("default catalog must be valid")
    }
}

impl Catalog {
    /// Builds a catalog, validating interval structure and topology rules.
    ///
    /// Device-table intervals must be contiguous, non-overlapping and sorted
    /// ascending; errors name the offending rows.
    pub fn from_parts(
        mmc_device_table: Vec<DeviceRow>,
        dcdc_device_table: Vec<DeviceRow>,
        topologies: Vec<TopologyDescriptor>,
    ) -> Result<Catalog, Error> {
        let mut issues = Vec::new();
        validate_table("mmc_device", &mmc_device_table, &mut issues);
        validate_table("dcdc_device", &dcdc_device_table, &mut issues);
        for topo in &topologies {
            topo.validate(&mut issues);
        }
        let mut seen = Vec::new();
        for topo in &topologies {
            if seen.contains(&topo.kind) {
                issues.push(format!("topology {} listed more than once", topo.kind));
            }
            seen.push(topo.kind);
        }
        if issues.is_empty() {
            Ok(Catalog {
                mmc_device_table,
                dcdc_device_table,
                topologies,
            })
        } else {
            Err(Error::Config { issues })
        }
    }

    pub fn mmc_device_table(&self) -> &[DeviceRow] {
        &self.mmc_device_table
    }

    pub fn dcdc_device_table(&self) -> &[DeviceRow] {
        &self.dcdc_device_table
    }

    pub fn topologies(&self) -> &[TopologyDescriptor] {
        &self.topologies
    }

    /// Descriptor for a topology kind, if the catalog carries one.
    pub fn topology(&self, kind: TopologyKind) -> Option<&TopologyDescriptor> {
        self.topologies.iter().find(|t| t.kind == kind)
    }

    /// Selects the MMC-stage device for modulation index `m`.
    pub fn select_mmc_device(&self, m: f64) -> Result<&DeviceModel, Error> {
        select(&self.mmc_device_table, "mmc", m)
    }

    /// Selects the DC/DC-stage device for modulation index `m`.
    pub fn select_dcdc_device(&self, m: f64) -> Result<&DeviceModel, Error> {
        select(&self.dcdc_device_table, "dcdc", m)
    }
}

/// Interval lookup. Intervals are right-closed, (m_low, m_high], with the
/// table's first interval additionally closed at its lower edge so the
/// m = m_low boundary design remains selectable.
fn select<'a>(table: &'a [DeviceRow], name: &'static str, m: f64) -> Result<&'a DeviceModel, Error> {
    for (idx, row) in table.iter().enumerate() {
        let lower_ok = if idx == 0 { m >= row.m_low } else { m > row.m_low };
        if lower_ok && m <= row.m_high {
            return Ok(&row.device);
        }
    }
    Err(Error::DeviceOutOfRange {
        table: name,
        m,
        m_min: table.first().map(|r| r.m_low).unwrap_or(f64::NAN),
        m_max: table.last().map(|r| r.m_high).unwrap_or(f64::NAN),
    })
}

fn validate_table(name: &str, table: &[DeviceRow], issues: &mut Vec<String>) {
    if table.is_empty() {
        issues.push(format!("{name} table is empty"));
        return;
    }
    for (idx, row) in table.iter().enumerate() {
        if !(row.m_high > row.m_low) {
            issues.push(format!(
                "{name} row {idx} ({}): m_high must exceed m_low",
                row.device.name
            ));
        }
        row.device.validate(issues);
    }
    for idx in 1..table.len() {
        let prev = &table[idx - 1];
        let cur = &table[idx];
        if cur.m_low < prev.m_high {
            issues.push(format!(
                "{name} rows {} and {} overlap: ({}, {}] vs ({}, {}]",
                idx - 1,
                idx,
                prev.m_low,
                prev.m_high,
                cur.m_low,
                cur.m_high
            ));
        } else if cur.m_low > prev.m_high {
            issues.push(format!(
                "{name} rows {} and {} leave a gap between m={} and m={}",
                idx - 1,
                idx,
                prev.m_high,
                cur.m_low
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_mmc_table_matches_published_rows() {
        let cat = Catalog::default();
        let rows = cat.mmc_device_table();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].m_high, 18.0);
        assert_eq!(rows[1].m_high, 23.0);
        assert_eq!(rows[2].m_high, 28.0);
        assert_eq!(rows[0].device.name, "FZ800R45KL3_B5");
        assert_eq!(rows[1].device.name, "FZ1000R45KL3_B5");
        assert_eq!(rows[2].device.name, "FZ1200R45KL3_B5");
    }

    #[test]
    fn default_dcdc_table_matches_published_rows() {
        let cat = Catalog::default();
        let rows = cat.dcdc_device_table();
        assert_eq!(rows.len(), 4);
        let bounds: Vec<f64> = rows.iter().map(|r| r.m_high).collect();
        assert_eq!(bounds, vec![6.0, 7.5, 9.0, 11.2]);
        assert_eq!(rows[3].device.name, "FZ1500R45KL3_B5");
        assert_eq!(rows[3].device.rated_current, 1500.0);
    }

    #[test]
    fn mmc_selection_examples() {
        let cat = Catalog::default();
        assert_eq!(cat.select_mmc_device(10.0).unwrap().name, "FZ800R45KL3_B5");
        assert_eq!(
            cat.select_mmc_device(20.0).unwrap().name,
            "FZ1000R45KL3_B5"
        );
        assert_eq!(
            cat.select_mmc_device(25.0).unwrap().name,
            "FZ1200R45KL3_B5"
        );
    }

    #[test]
    fn dcdc_selection_examples() {
        let cat = Catalog::default();
        assert_eq!(cat.select_dcdc_device(3.0).unwrap().name, "FZ800R45KL3_B5");
        assert_eq!(
            cat.select_dcdc_device(7.0).unwrap().name,
            "FZ1000R45KL3_B5"
        );
        assert_eq!(
            cat.select_dcdc_device(10.0).unwrap().name,
            "FZ1500R45KL3_B5"
        );
    }

    #[test]
    fn boundaries_are_right_closed() {
        let cat = Catalog::default();
        // MMC boundaries 18 and 23
        assert_eq!(
            cat.select_mmc_device(18.0).unwrap().name,
            "FZ800R45KL3_B5"
        );
        assert_eq!(
            cat.select_mmc_device(18.0 + 1e-9).unwrap().name,
            "FZ1000R45KL3_B5"
        );
        assert_eq!(
            cat.select_mmc_device(23.0).unwrap().name,
            "FZ1000R45KL3_B5"
        );
        // DC/DC boundaries 6, 7.5, 9
        assert_eq!(cat.select_dcdc_device(6.0).unwrap().name, "FZ800R45KL3_B5");
        assert_eq!(
            cat.select_dcdc_device(6.0 + 1e-9).unwrap().name,
            "FZ1000R45KL3_B5"
        );
        assert_eq!(cat.select_dcdc_device(9.0).unwrap().name, "FZ1200R45KL3_B5");
    }

    #[test]
    fn unity_design_point_is_selectable() {
        // The half-bridge baseline sits exactly at the table's lower edge.
        let cat = Catalog::default();
        assert_eq!(cat.select_mmc_device(1.0).unwrap().name, "FZ800R45KL3_B5");
        assert_eq!(cat.select_dcdc_device(1.0).unwrap().name, "FZ800R45KL3_B5");
    }

    #[test]
    fn out_of_range_reports_span() {
        let cat = Catalog::default();
        match cat.select_mmc_device(30.0) {
            Err(Error::DeviceOutOfRange { m_min, m_max, .. }) => {
                assert_eq!(m_min, 1.0);
                assert_eq!(m_max, 28.0);
            }
            other => panic!("expected out-of-range, got {other:?}"),
        }
        assert!(cat.select_dcdc_device(0.5).is_err());
    }

    #[test]
    fn table_boundary_voltages_track_dc_bus() {
        // Interior boundaries imply U_dc = 60 kV / m; the published bus
        // voltages at those boundaries agree within 1%.
        let published: [(f64, f64); 5] =
            [(18.0, 3.3e3), (23.0, 2.6e3), (6.0, 10.0e3), (7.5, 8.0e3), (9.0, 6.67e3)];
        for (m, u_listed) in published {
            let u = 60.0e3 / m;
            // the 3.3 kV row sits exactly at 1%; allow for rounding
            assert!(
                (u_listed - u).abs() / u <= 0.01 + 1e-12,
                "boundary m={m}: {u_listed} vs {u}"
            );
        }
    }

    #[test]
    fn overlapping_rows_are_rejected_with_row_names() {
        let [d800, d1000, ..] = default_devices();
        let rows = vec![
            DeviceRow {
                m_low: 1.0,
                m_high: 18.0,
                device: d800.clone(),
            },
            DeviceRow {
                m_low: 17.0,
                m_high: 23.0,
                device: d1000.clone(),
            },
        ];
        let err = Catalog::from_parts(rows, vec![DeviceRow { m_low: 1.0, m_high: 6.0, device: d800 }], default_topologies());
        match err {
            Err(Error::Config { issues }) => {
                assert!(issues.iter().any(|i| i.contains("overlap")), "{issues:?}");
                assert!(issues.iter().any(|i| i.contains("rows 0 and 1")));
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn gapped_rows_are_rejected() {
        let [d800, d1000, ..] = default_devices();
        let rows = vec![
            DeviceRow {
                m_low: 1.0,
                m_high: 6.0,
                device: d800.clone(),
            },
            DeviceRow {
                m_low: 7.0,
                m_high: 9.0,
                device: d1000,
            },
        ];
        let err = Catalog::from_parts(
            vec![DeviceRow { m_low: 1.0, m_high: 28.0, device: d800.clone() }],
            rows,
            default_topologies(),
        );
        match err {
            Err(Error::Config { issues }) => {
                assert!(issues.iter().any(|i| i.contains("gap")), "{issues:?}");
            }
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn traditional_hybrid_branch_overhead_must_be_zero() {
        let mut topos = default_topologies();
        topos[1].branch_cost = 100.0;
        let cat = Catalog::default();
        let err = Catalog::from_parts(
            cat.mmc_device_table().to_vec(),
            cat.dcdc_device_table().to_vec(),
            topos,
        );
        assert!(matches!(err, Err(Error::Config { .. })));
    }

    #[test]
    fn catalog_construction_is_deterministic() {
        assert_eq!(Catalog::default(), Catalog::default());
    }

    #[test]
    fn catalog_is_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Catalog>();

        let cat = std::sync::Arc::new(Catalog::default());
        let handles: Vec<_> = (0..4)
            .map(|k| {
                let cat = cat.clone();
                std::thread::spawn(move || {
                    cat.select_mmc_device(1.0 + k as f64).unwrap().name.clone()
                })
            })
            .collect();
        for h in handles {
            assert_eq!(h.join().unwrap(), "FZ800R45KL3_B5");
        }
    }
}
