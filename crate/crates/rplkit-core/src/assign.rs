//! Scanner observations and best-server association.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::geo::GeoPoint;

/// Physically plausible RSRP range, dBm.
pub const RSRP_PLAUSIBLE_DBM: (f64, f64) = (-160.0, -20.0);

/// One scanner RSRP reading.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    /// Groups simultaneous detections at one location.
    pub scan_id: String,
    pub timestamp: f64,
    pub location: GeoPoint,
    pub network_id: String,
    pub sector_id: String,
    pub rsrp_dbm: f64,
}

impl Observation {
    pub fn rsrp_plausible(&self) -> bool {
        (RSRP_PLAUSIBLE_DBM.0..=RSRP_PLAUSIBLE_DBM.1).contains(&self.rsrp_dbm)
    }
}

/// The winning sector for one (scan, network) group.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub scan_id: String,
    pub timestamp: f64,
    pub location: GeoPoint,
    pub network_id: String,
    pub best_sector_id: String,
    pub best_rsrp_dbm: f64,
    /// Gap to the second-best same-network observation in the scan; 0 when
    /// the group has a single observation.
    pub margin_db: f64,
}

/// Group observations by (scan_id, network_id) and pick the maximum-RSRP
/// sector in each group. Exact ties go to the lexicographically smallest
/// sector_id so results are reproducible. Output is sorted by scan then
/// network.
pub fn best_server(observations: &[Observation]) -> Vec<Assignment> {
    let mut groups: BTreeMap<(&str, &str), Vec<&Observation>> = BTreeMap::new();
    for obs in observations {
        groups
            .entry((obs.scan_id.as_str(), obs.network_id.as_str()))
            .or_default()
            .push(obs);
    }
    groups
        .into_values()
        .map(|group| {
            let best = group
                .iter()
                .copied()
                .min_by(|a, b| {
                    b.rsrp_dbm
                        .total_cmp(&a.rsrp_dbm)
                        .then_with(|| a.sector_id.cmp(&b.sector_id))
                })
                .expect("group is nonempty by construction");
            let second = group
                .iter()
                .filter(|o| !core::ptr::eq(**o, best))
                .map(|o| o.rsrp_dbm)
                .fold(f64::NEG_INFINITY, f64::max);
            let margin_db = if second.is_finite() { best.rsrp_dbm - second } else { 0.0 };
            Assignment {
                scan_id: best.scan_id.clone(),
                timestamp: best.timestamp,
                location: best.location,
                network_id: best.network_id.clone(),
                best_sector_id: best.sector_id.clone(),
                best_rsrp_dbm: best.rsrp_dbm,
                margin_db,
            }
        })
        .collect()
}
