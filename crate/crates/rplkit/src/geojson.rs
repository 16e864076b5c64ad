//! GeoJSON serialization (RFC 7946 conventions: lon/lat coordinate order,
//! closed counterclockwise exterior rings).

use rplkit_core::assign::Assignment;
use rplkit_core::geo::{self, GeoPoint};
use rplkit_core::rpl::Rpl;
use serde_json::{json, Value};

use crate::error::ToolError;

/// The RPL boundary as a GeoJSON Polygon Feature.
///
/// Grid azimuths advance clockwise on the map (compass convention), so the
/// ring is emitted in reverse index order to satisfy the counterclockwise
/// exterior-ring rule.
pub fn rpl_feature(rpl: &Rpl) -> Result<Value, ToolError> {
    let grid_size = rpl.radii_m.len();
    let step = 360.0 / grid_size as f64;
    let mut ring: Vec<[f64; 2]> = Vec::with_capacity(grid_size + 1);
    for k in (0..grid_size).rev() {
        let bearing = k as f64 * step;
        let p = geo::destination(rpl.sector.site, rpl.radii_m[k], bearing)
            .map_err(ToolError::from)?;
        ring.push([p.lon_deg(), p.lat_deg()]);
    }
    let first = ring[0];
    ring.push(first);
    Ok(json!({
        "type": "Feature",
        "geometry": { "type": "Polygon", "coordinates": [ring] },
        "properties": {
            "network_id": rpl.sector.network_id,
            "sector_id": rpl.sector.sector_id,
            "n": rpl.params.n,
            "m": rpl.params.m_neighbors,
            "c": rpl.params.c,
            "mean_dist_m": rpl.mean_dist_m,
            "area_m2": rpl.area_m2(),
            "horizon_clipped": rpl.horizon_clipped,
            "fallback_used": rpl.fallback_used,
        },
    }))
}

fn point_feature(location: GeoPoint, properties: Value) -> Value {
    json!({
        "type": "Feature",
        "geometry": { "type": "Point", "coordinates": [location.lon_deg(), location.lat_deg()] },
        "properties": properties,
    })
}

/// One sector's RPL plus its assigned measurement points, each marked
/// contained or outside.
pub fn sector_bundle(rpl: &Rpl, assignments: &[Assignment]) -> Result<Value, ToolError> {
    let mut features = vec![rpl_feature(rpl)?];
    for a in assignments {
        if a.network_id != rpl.sector.network_id || a.best_sector_id != rpl.sector.sector_id {
            continue;
        }
        let contained = rpl.contains(a.location);
        features.push(point_feature(
            a.location,
            json!({
                "scan_id": a.scan_id,
                "rsrp_dbm": a.best_rsrp_dbm,
                "margin_db": a.margin_db,
                "contained": contained,
            }),
        ));
    }
    Ok(json!({ "type": "FeatureCollection", "features": features }))
}

pub fn feature_collection(features: Vec<Value>) -> Value {
    json!({ "type": "FeatureCollection", "features": features })
}
