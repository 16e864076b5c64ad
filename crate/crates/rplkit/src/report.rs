//! Report serialization: per-sector evaluation table, per-combination sweep
//! table, area-ratio/error-rate pairs, and a compact human-readable summary.

use std::io::Write;

use rplkit_core::evaluate::SweepReport;

use crate::error::ToolError;

fn num(x: f64) -> String {
    format!("{x:.6}")
}

/// Per-sector evaluation table at the fixed parameters.
pub fn write_evaluations<W: Write>(writer: W, report: &SweepReport) -> Result<(), ToolError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "network_id",
        "sector_id",
        "n_records",
        "n_outside",
        "error_rate",
        "area_m2",
        "c_star",
        "c_star_feasible",
        "optimal_n",
        "optimal_m",
        "optimal_c",
        "optimal_area_m2",
        "area_ratio",
    ])?;
    for e in &report.evaluations {
        let (opt_n, opt_m, opt_c) = match e.optimal_params {
            Some(p) => (num(p.n), p.m_neighbors.to_string(), num(p.c)),
            None => (String::new(), String::new(), String::new()),
        };
        wtr.write_record([
            e.network_id.clone(),
            e.sector_id.clone(),
            e.n_records.to_string(),
            e.n_outside.to_string(),
            num(e.error_rate),
            num(e.area_m2),
            num(e.c_star),
            e.c_star_feasible.to_string(),
            opt_n,
            opt_m,
            opt_c,
            e.optimal_area_m2.map(num).unwrap_or_default(),
            e.area_ratio.map(num).unwrap_or_default(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Per-sector, per-(n, M) sweep table.
pub fn write_sweep_rows<W: Write>(writer: W, report: &SweepReport) -> Result<(), ToolError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record([
        "network_id",
        "sector_id",
        "n",
        "m",
        "c_star",
        "feasible",
        "area_m2",
        "is_optimal",
    ])?;
    for r in &report.rows {
        wtr.write_record([
            r.network_id.clone(),
            r.sector_id.clone(),
            num(r.n),
            r.m.to_string(),
            num(r.c_star),
            r.feasible.to_string(),
            num(r.area_m2),
            r.is_optimal.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

/// Two-column (area_ratio, error_rate) pairs per sector at the fixed
/// parameters, for scatter-style fit summaries.
pub fn write_ratio_error<W: Write>(writer: W, report: &SweepReport) -> Result<(), ToolError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(["network_id", "sector_id", "area_ratio", "error_rate"])?;
    for e in &report.evaluations {
        wtr.write_record([
            e.network_id.clone(),
            e.sector_id.clone(),
            e.area_ratio.map(num).unwrap_or_default(),
            num(e.error_rate),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn pct(x: f64) -> String {
    format!("{:.2}%", 100.0 * x)
}

/// Compact human-readable summary of a run.
pub fn write_summary<W: Write>(mut w: W, report: &SweepReport) -> Result<(), ToolError> {
    writeln!(
        w,
        "RPL evaluation: n={} M={} c={} grid={}",
        report.fixed_params.n,
        report.fixed_params.m_neighbors,
        report.fixed_params.c,
        report.fixed_params.grid_size
    )?;
    writeln!(w)?;
    for e in &report.evaluations {
        writeln!(
            w,
            "  {} {:<12} records {:>6}  outside {:>5}  error {:>7}  c* {:.3}{}{}",
            e.network_id,
            e.sector_id,
            e.n_records,
            e.n_outside,
            pct(e.error_rate),
            e.c_star,
            if e.c_star_feasible { "" } else { "  [beyond horizon]" },
            match e.area_ratio {
                Some(r) => format!("  area/optimal {r:.2}"),
                None => String::new(),
            },
        )?;
    }
    writeln!(w)?;
    for n in &report.per_network {
        writeln!(
            w,
            "  network {}: {} of {} outside ({})",
            n.network_id,
            n.n_outside,
            n.n_records,
            pct(n.error_rate)
        )?;
    }
    writeln!(
        w,
        "  overall: {} of {} outside ({})",
        report.total_outside,
        report.total_records,
        pct(report.aggregate_error_rate)
    )?;
    if let Some(c) = report.global_c {
        writeln!(w, "  smallest single c driving every sector to zero error: {c:.3}")?;
    }
    Ok(())
}

/// Render a previously written evaluation table back into the summary
/// format (the `report` subcommand).
pub fn summarize_evaluation_csv<R: std::io::Read, W: Write>(
    reader: R,
    mut w: W,
) -> Result<(), ToolError> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers().map_err(|e| ToolError::Parse(e.to_string()))?.clone();
    let idx = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| ToolError::Parse(format!("missing column {name}")))
    };
    let (i_net, i_sec) = (idx("network_id")?, idx("sector_id")?);
    let (i_records, i_outside) = (idx("n_records")?, idx("n_outside")?);
    let (i_rate, i_ratio) = (idx("error_rate")?, idx("area_ratio")?);
    let mut total_records = 0usize;
    let mut total_outside = 0usize;
    writeln!(w, "Per-sector RPL fit:")?;
    for record in rdr.records() {
        let record = record.map_err(|e| ToolError::Parse(e.to_string()))?;
        let records: usize = record[i_records]
            .parse()
            .map_err(|_| ToolError::Parse("bad n_records".into()))?;
        let outside: usize = record[i_outside]
            .parse()
            .map_err(|_| ToolError::Parse("bad n_outside".into()))?;
        let rate: f64 = record[i_rate]
            .parse()
            .map_err(|_| ToolError::Parse("bad error_rate".into()))?;
        total_records += records;
        total_outside += outside;
        writeln!(
            w,
            "  {} {:<12} records {:>6}  outside {:>5}  error {:>7}{}",
            &record[i_net],
            &record[i_sec],
            records,
            outside,
            pct(rate),
            if record[i_ratio].is_empty() {
                String::new()
            } else {
                format!("  area/optimal {}", &record[i_ratio])
            },
        )?;
    }
    if total_records == 0 {
        return Err(ToolError::Domain("evaluation table has no rows".into()));
    }
    writeln!(
        w,
        "Overall: {} of {} outside ({})",
        total_outside,
        total_records,
        pct(total_outside as f64 / total_records as f64)
    )?;
    Ok(())
}
