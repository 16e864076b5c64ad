//! Infrastructure and measurement file parsing.
//!
//! Both schemas are UTF-8 comma-separated tables with a mandatory header
//! row. Bad rows are reported as diagnostics with their line numbers and
//! skipped; only header problems abort the parse.

use std::collections::HashSet;
use std::io::{Read, Write};

use rplkit_core::assign::Observation;
use rplkit_core::geo::GeoPoint;
use rplkit_core::rpl::Sector;

use crate::error::ToolError;

pub const INFRA_COLUMNS: [&str; 9] = [
    "network_id",
    "sector_id",
    "lat_deg",
    "lon_deg",
    "azimuth_deg",
    "hpbw_deg",
    "height_m",
    "freq_hz",
    "fb_db",
];

pub const MEASUREMENT_COLUMNS: [&str; 7] = [
    "scan_id",
    "timestamp",
    "lat_deg",
    "lon_deg",
    "network_id",
    "sector_id",
    "rsrp_dbm",
];

/// A per-row problem; `Warning` rows are kept, `Error` rows are dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub line: u64,
    pub severity: Severity,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Error,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        write!(f, "line {}: {}: {}", self.line, tag, self.message)
    }
}

fn check_header(headers: &csv::StringRecord, expected: &[&str]) -> Result<(), ToolError> {
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != expected {
        return Err(ToolError::Parse(format!(
            "bad header: expected {:?}, got {:?}",
            expected, got
        )));
    }
    Ok(())
}

fn field_f64(record: &csv::StringRecord, idx: usize, name: &str) -> Result<f64, String> {
    let raw = record.get(idx).unwrap_or("").trim();
    raw.parse::<f64>()
        .map_err(|_| format!("{name} is not a number: {raw:?}"))
}

fn field_opt_f64(record: &csv::StringRecord, idx: usize, name: &str) -> Result<Option<f64>, String> {
    let raw = record.get(idx).unwrap_or("").trim();
    if raw.is_empty() {
        return Ok(None);
    }
    raw.parse::<f64>()
        .map(Some)
        .map_err(|_| format!("{name} is not a number: {raw:?}"))
}

/// Parse the infrastructure table into sectors.
pub fn parse_infrastructure<R: Read>(
    reader: R,
) -> Result<(Vec<Sector>, Vec<Diagnostic>), ToolError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    check_header(rdr.headers().map_err(|e| ToolError::Parse(e.to_string()))?, &INFRA_COLUMNS)?;

    let mut sectors = Vec::new();
    let mut diagnostics = Vec::new();
    let mut seen: std::collections::HashMap<(String, String), u64> =
        std::collections::HashMap::new();
    for result in rdr.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(Diagnostic {
                    line: e.position().map(|p| p.line()).unwrap_or(0),
                    severity: Severity::Error,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let bad = |message: String| Diagnostic { line, severity: Severity::Error, message };
        match parse_sector_row(&record) {
            Ok(sector) => {
                let key = (sector.network_id.clone(), sector.sector_id.clone());
                if let Some(first_line) = seen.get(&key) {
                    diagnostics.push(bad(format!(
                        "duplicate sector key {}:{} (first seen on line {first_line})",
                        key.0, key.1
                    )));
                    continue;
                }
                seen.insert(key, line);
                sectors.push(sector);
            }
            Err(msg) => diagnostics.push(bad(msg)),
        }
    }
    Ok((sectors, diagnostics))
}

fn parse_sector_row(record: &csv::StringRecord) -> Result<Sector, String> {
    if record.len() != INFRA_COLUMNS.len() {
        return Err(format!("expected {} fields, got {}", INFRA_COLUMNS.len(), record.len()));
    }
    let network_id = record.get(0).unwrap_or("").to_string();
    let sector_id = record.get(1).unwrap_or("").to_string();
    if network_id.is_empty() || sector_id.is_empty() {
        return Err("network_id and sector_id must be nonempty".into());
    }
    let lat = field_f64(record, 2, "lat_deg")?;
    let lon = field_f64(record, 3, "lon_deg")?;
    let site = GeoPoint::new(lat, lon).map_err(|e| e.to_string())?;
    let sector = Sector {
        network_id,
        sector_id,
        site,
        azimuth_deg: field_f64(record, 4, "azimuth_deg")?,
        hpbw_deg: field_f64(record, 5, "hpbw_deg")?,
        height_m: field_opt_f64(record, 6, "height_m")?,
        freq_hz: field_opt_f64(record, 7, "freq_hz")?,
        fb_db: field_opt_f64(record, 8, "fb_db")?,
    };
    sector.validate().map_err(|e| e.to_string())?;
    Ok(sector)
}

/// Parse the measurement table into observations. Implausible RSRP values
/// are kept but flagged as warnings.
pub fn parse_measurements<R: Read>(
    reader: R,
) -> Result<(Vec<Observation>, Vec<Diagnostic>), ToolError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    check_header(
        rdr.headers().map_err(|e| ToolError::Parse(e.to_string()))?,
        &MEASUREMENT_COLUMNS,
    )?;

    let mut observations = Vec::new();
    let mut diagnostics = Vec::new();
    for result in rdr.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                diagnostics.push(Diagnostic {
                    line: e.position().map(|p| p.line()).unwrap_or(0),
                    severity: Severity::Error,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        match parse_observation_row(&record) {
            Ok(obs) => {
                if !obs.rsrp_plausible() {
                    diagnostics.push(Diagnostic {
                        line,
                        severity: Severity::Warning,
                        message: format!(
                            "rsrp {} dBm outside plausible range; record kept",
                            obs.rsrp_dbm
                        ),
                    });
                }
                observations.push(obs);
            }
            Err(message) => {
                diagnostics.push(Diagnostic { line, severity: Severity::Error, message })
            }
        }
    }
    Ok((observations, diagnostics))
}

fn parse_observation_row(record: &csv::StringRecord) -> Result<Observation, String> {
    if record.len() != MEASUREMENT_COLUMNS.len() {
        return Err(format!(
            "expected {} fields, got {}",
            MEASUREMENT_COLUMNS.len(),
            record.len()
        ));
    }
    let scan_id = record.get(0).unwrap_or("").to_string();
    if scan_id.is_empty() {
        return Err("scan_id must be nonempty".into());
    }
    let timestamp = field_f64(record, 1, "timestamp")?;
    let lat = field_f64(record, 2, "lat_deg")?;
    let lon = field_f64(record, 3, "lon_deg")?;
    let location = GeoPoint::new(lat, lon).map_err(|e| e.to_string())?;
    let network_id = record.get(4).unwrap_or("").to_string();
    let sector_id = record.get(5).unwrap_or("").to_string();
    if network_id.is_empty() || sector_id.is_empty() {
        return Err("network_id and sector_id must be nonempty".into());
    }
    Ok(Observation {
        scan_id,
        timestamp,
        location,
        network_id,
        sector_id,
        rsrp_dbm: field_f64(record, 6, "rsrp_dbm")?,
    })
}

/// Flag observations referring to sectors absent from the infrastructure
/// table. They stay in the dataset (out-of-study sectors still compete in
/// best-server selection).
pub fn flag_unknown_sectors(observations: &[Observation], sectors: &[Sector]) -> Vec<Diagnostic> {
    let known: HashSet<(&str, &str)> = sectors
        .iter()
        .map(|s| (s.network_id.as_str(), s.sector_id.as_str()))
        .collect();
    let mut flagged: HashSet<(&str, &str)> = HashSet::new();
    let mut out = Vec::new();
    for obs in observations {
        let key = (obs.network_id.as_str(), obs.sector_id.as_str());
        if !known.contains(&key) && flagged.insert(key) {
            out.push(Diagnostic {
                line: 0,
                severity: Severity::Warning,
                message: format!(
                    "sector {}:{} appears in measurements but not in infrastructure",
                    obs.network_id, obs.sector_id
                ),
            });
        }
    }
    out.sort_by(|a, b| a.message.cmp(&b.message));
    out
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format_float(x)).unwrap_or_default()
}

/// Shortest round-trippable decimal form.
fn format_float(x: f64) -> String {
    let mut s = format!("{x}");
    if !s.contains('.') && !s.contains('e') && !s.contains("inf") && !s.contains("NaN") {
        s.push_str(".0");
    }
    s
}

/// Write sectors in the infrastructure schema.
pub fn write_infrastructure<W: Write>(writer: W, sectors: &[Sector]) -> Result<(), ToolError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(INFRA_COLUMNS)?;
    for s in sectors {
        wtr.write_record([
            s.network_id.as_str(),
            s.sector_id.as_str(),
            &format_float(s.site.lat_deg()),
            &format_float(s.site.lon_deg()),
            &format_float(s.azimuth_deg),
            &format_float(s.hpbw_deg),
            &fmt_opt(s.height_m),
            &fmt_opt(s.freq_hz),
            &fmt_opt(s.fb_db),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Write observations in the measurement schema.
pub fn write_measurements<W: Write>(
    writer: W,
    observations: &[Observation],
) -> Result<(), ToolError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(MEASUREMENT_COLUMNS)?;
    for o in observations {
        wtr.write_record([
            o.scan_id.as_str(),
            &format_float(o.timestamp),
            &format_float(o.location.lat_deg()),
            &format_float(o.location.lon_deg()),
            o.network_id.as_str(),
            o.sector_id.as_str(),
            &format_float(o.rsrp_dbm),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
