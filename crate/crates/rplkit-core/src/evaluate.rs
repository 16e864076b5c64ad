//! Per-sector and aggregate evaluation of RPL quality against best-server
//! assignments, plus the (n, M) parameter sweep.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::assign::Assignment;
use crate::error::CoreError;
use crate::geo::GeoPoint;
use crate::rpl::{
    self, build_rpl, min_c_for_zero_error, optimal_rpl, RplParams, Sector, SiteRef,
};

pub const DEFAULT_N_GRID: [f64; 3] = [2.0, 3.0, 4.0];
pub const DEFAULT_M_GRID: [usize; 3] = [1, 2, 3];

/// Fit of one sector's RPL to its assigned measurement locations.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorEvaluation {
    pub network_id: String,
    pub sector_id: String,
    pub n_records: usize,
    pub n_outside: usize,
    pub error_rate: f64,
    pub area_m2: f64,
    /// Smallest c achieving zero error at the fixed (n, M).
    pub c_star: f64,
    pub c_star_feasible: bool,
    /// Smallest-area zero-error combination over the searched (n, M) grid.
    pub optimal_params: Option<RplParams>,
    pub optimal_area_m2: Option<f64>,
    /// Fixed-parameter area over optimal area; >= 1 whenever the fixed
    /// parameterization itself is error-free.
    pub area_ratio: Option<f64>,
}

/// One cell of the sweep table: a sector evaluated at one (n, M).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub network_id: String,
    pub sector_id: String,
    pub n: f64,
    pub m: usize,
    pub c_star: f64,
    pub feasible: bool,
    /// Area of the zero-error RPL at this combination's own c_star.
    pub area_m2: f64,
    pub is_optimal: bool,
}

/// Pooled error counts for one network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkAggregate {
    pub network_id: String,
    pub n_records: usize,
    pub n_outside: usize,
    pub error_rate: f64,
}

/// Sweep output: fixed-parameter evaluations, the per-combination table,
/// and pooled error counts.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub fixed_params: RplParams,
    pub evaluations: Vec<SectorEvaluation>,
    pub rows: Vec<SweepRow>,
    pub per_network: Vec<NetworkAggregate>,
    pub total_records: usize,
    pub total_outside: usize,
    pub aggregate_error_rate: f64,
    /// Smallest single c driving every evaluated sector to zero error
    /// (the maximum of the per-sector c_star values).
    pub global_c: Option<f64>,
}

fn assigned_points(sector: &Sector, assignments: &[Assignment]) -> Vec<GeoPoint> {
    assignments
        .iter()
        .filter(|a| a.network_id == sector.network_id && a.best_sector_id == sector.sector_id)
        .map(|a| a.location)
        .collect()
}

/// Evaluate one sector at fixed parameters. Returns `None` when no
/// assignment points to this sector (error rate and area ratio undefined).
pub fn evaluate_sector(
    sector: &Sector,
    sites: &[SiteRef],
    assignments: &[Assignment],
    params: &RplParams,
    n_grid: &[f64],
    m_grid: &[usize],
) -> Result<Option<SectorEvaluation>, CoreError> {
    let points = assigned_points(sector, assignments);
    if points.is_empty() {
        return Ok(None);
    }
    let rpl = build_rpl(sector, sites, params)?;
    let n_outside = points.iter().filter(|p| !rpl.contains(**p)).count();
    let min_c = min_c_for_zero_error(
        sector,
        sites,
        &points,
        params.n,
        params.m_neighbors,
        params.grid_size,
    )?;
    let (optimal_params, optimal_area_m2) =
        match optimal_rpl(sector, sites, &points, n_grid, m_grid, params.grid_size) {
            Ok(best) => (Some(best.params), Some(best.area_m2)),
            Err(CoreError::Infeasible) => (None, None),
            Err(e) => return Err(e),
        };
    let area_m2 = rpl.area_m2();
    Ok(Some(SectorEvaluation {
        network_id: sector.network_id.clone(),
        sector_id: sector.sector_id.clone(),
        n_records: points.len(),
        n_outside,
        error_rate: n_outside as f64 / points.len() as f64,
        area_m2,
        c_star: min_c.c_star,
        c_star_feasible: min_c.feasible,
        optimal_params,
        optimal_area_m2,
        area_ratio: optimal_area_m2.map(|a| area_m2 / a),
    }))
}

/// Pool per-sector counts into per-network and overall error rates.
pub fn aggregate(evaluations: &[SectorEvaluation]) -> Result<SweepAggregate, CoreError> {
    if evaluations.is_empty() {
        return Err(CoreError::Domain("nothing to aggregate"));
    }
    let mut per_network: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut total_records = 0;
    let mut total_outside = 0;
    for e in evaluations {
        let entry = per_network.entry(e.network_id.as_str()).or_default();
        entry.0 += e.n_records;
        entry.1 += e.n_outside;
        total_records += e.n_records;
        total_outside += e.n_outside;
    }
    Ok(SweepAggregate {
        per_network: per_network
            .into_iter()
            .map(|(network_id, (n_records, n_outside))| NetworkAggregate {
                network_id: String::from(network_id),
                n_records,
                n_outside,
                error_rate: n_outside as f64 / n_records as f64,
            })
            .collect(),
        total_records,
        total_outside,
        aggregate_error_rate: total_outside as f64 / total_records as f64,
    })
}

/// Intermediate aggregate (also usable standalone).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAggregate {
    pub per_network: Vec<NetworkAggregate>,
    pub total_records: usize,
    pub total_outside: usize,
    pub aggregate_error_rate: f64,
}

/// Run the full sweep: fixed-parameter evaluation of every sector plus the
/// per-combination c_star/area table over the grids. Sectors without
/// assignments are skipped. Output ordering is network then sector.
pub fn sweep(
    sectors: &[Sector],
    sites: &[SiteRef],
    assignments: &[Assignment],
    fixed_params: &RplParams,
    n_grid: &[f64],
    m_grid: &[usize],
) -> Result<SweepReport, CoreError> {
    if n_grid.is_empty() || m_grid.is_empty() {
        return Err(CoreError::Domain("parameter grids must be nonempty"));
    }
    let mut ordered: Vec<&Sector> = sectors.iter().collect();
    ordered.sort_by(|a, b| {
        (&a.network_id, &a.sector_id).cmp(&(&b.network_id, &b.sector_id))
    });

    let mut evaluations = Vec::new();
    let mut rows = Vec::new();
    for sector in ordered {
        let points = assigned_points(sector, assignments);
        if points.is_empty() {
            continue;
        }
        let eval = evaluate_sector(sector, sites, assignments, fixed_params, n_grid, m_grid)?
            .expect("sector has assignments");
        for &n in n_grid {
            for &m in m_grid {
                let min_c = min_c_for_zero_error(
                    sector,
                    sites,
                    &points,
                    n,
                    m,
                    fixed_params.grid_size,
                )?;
                let params = RplParams {
                    n,
                    m_neighbors: m,
                    c: min_c.c_star,
                    grid_size: fixed_params.grid_size,
                };
                let area_m2 = build_rpl(sector, sites, &params)?.area_m2();
                let is_optimal = eval
                    .optimal_params
                    .map(|p| p.n == n && p.m_neighbors == m)
                    .unwrap_or(false);
                rows.push(SweepRow {
                    network_id: sector.network_id.clone(),
                    sector_id: sector.sector_id.clone(),
                    n,
                    m,
                    c_star: min_c.c_star,
                    feasible: min_c.feasible,
                    area_m2,
                    is_optimal,
                });
            }
        }
        evaluations.push(eval);
    }
    if evaluations.is_empty() {
        return Err(CoreError::Domain("no sector has assigned measurements"));
    }
    let agg = aggregate(&evaluations)?;
    let global_c = evaluations
        .iter()
        .filter(|e| e.c_star_feasible)
        .map(|e| e.c_star)
        .fold(None, |acc: Option<f64>, c| Some(acc.map_or(c, |a| a.max(c))));
    Ok(SweepReport {
        fixed_params: *fixed_params,
        evaluations,
        rows,
        per_network: agg.per_network,
        total_records: agg.total_records,
        total_outside: agg.total_outside,
        aggregate_error_rate: agg.aggregate_error_rate,
        global_c,
    })
}

/// Convenience re-export of the site list builder.
pub use rpl::sites_from_sectors;
