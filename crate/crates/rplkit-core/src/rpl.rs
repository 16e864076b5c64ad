//! Region-of-plausible-locations construction and the minimal scaling
//! coefficient search.
//!
//! An RPL is a radial boundary sampled on a uniform compass-azimuth grid:
//! `r(phi) = c * mean_neighbor_distance * (G(phi)/G_max)^(1/n)`, clipped to
//! the radio horizon when the antenna height is known. Containment and the
//! minimal-c computation both use linear interpolation of the sampled
//! boundary, so the two are exactly consistent (c scales every radius
//! linearly).

use alloc::string::String;
use alloc::vec::Vec;

use crate::antenna::{self, AntennaPattern};
use crate::error::CoreError;
use crate::geo::{self, GeoPoint};
use crate::propagation;

/// Distance below which two sites are treated as co-located (same mast).
pub const CO_LOCATION_DISTANCE_M: f64 = 1.0;

/// One antenna-faced cell of a base station.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub network_id: String,
    pub sector_id: String,
    pub site: GeoPoint,
    /// Boresight compass azimuth phi0, degrees.
    pub azimuth_deg: f64,
    /// Operator-reported azimuthal half-power beamwidth, degrees.
    pub hpbw_deg: f64,
    pub height_m: Option<f64>,
    pub freq_hz: Option<f64>,
    pub fb_db: Option<f64>,
}

impl Sector {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(0.0..360.0).contains(&self.azimuth_deg) {
            return Err(CoreError::Domain("azimuth outside [0, 360)"));
        }
        if !(self.hpbw_deg > 0.0 && self.hpbw_deg < 360.0) {
            return Err(CoreError::Domain("hpbw outside (0, 360)"));
        }
        if let Some(h) = self.height_m {
            if !(h > 0.0) {
                return Err(CoreError::Domain("height must be positive"));
            }
        }
        if let Some(f) = self.freq_hz {
            if !(f > 0.0) {
                return Err(CoreError::Domain("frequency must be positive"));
            }
        }
        Ok(())
    }

    /// Fitted pattern for this sector: q from the reported HPBW, p from the
    /// reported F/B or the 25 dB default.
    pub fn pattern(&self) -> Result<AntennaPattern, CoreError> {
        let p = match self.fb_db {
            Some(fb) => antenna::solve_p(fb)?,
            None => antenna::DEFAULT_P,
        };
        let q = antenna::solve_q(self.hpbw_deg, p)?;
        AntennaPattern::new(q, p, self.azimuth_deg)
    }
}

/// A site (mast position) with its network label; sectors sharing a mast
/// collapse to one site.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteRef {
    pub network_id: String,
    pub location: GeoPoint,
}

/// Deduplicate sector entries into sites: same-network entries within the
/// co-location distance count as one site.
pub fn sites_from_sectors(sectors: &[Sector]) -> Vec<SiteRef> {
    let mut sites: Vec<SiteRef> = Vec::new();
    for s in sectors {
        let dup = sites.iter().any(|existing| {
            existing.network_id == s.network_id
                && geo::project(existing.location, s.site)
                    .map(|v| v.magnitude_m() <= CO_LOCATION_DISTANCE_M)
                    .unwrap_or(false)
        });
        if !dup {
            sites.push(SiteRef { network_id: s.network_id.clone(), location: s.site });
        }
    }
    sites
}

/// RPL construction parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RplParams {
    /// Path loss exponent used in the shape, >= 2.
    pub n: f64,
    /// Number of neighbor sites averaged for the size (M).
    pub m_neighbors: usize,
    /// Scaling coefficient c.
    pub c: f64,
    /// Azimuth samples on the boundary.
    pub grid_size: usize,
}

impl Default for RplParams {
    fn default() -> Self {
        Self { n: 4.0, m_neighbors: 3, c: 1.0, grid_size: 720 }
    }
}

impl RplParams {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.n >= 2.0) {
            return Err(CoreError::Domain("n must be >= 2"));
        }
        if self.m_neighbors < 1 {
            return Err(CoreError::Domain("m_neighbors must be >= 1"));
        }
        if !(self.c > 0.0) {
            return Err(CoreError::Domain("c must be positive"));
        }
        if self.grid_size < 360 {
            return Err(CoreError::Domain("grid_size must be at least 360"));
        }
        Ok(())
    }
}

/// Result of the neighbor-distance computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NeighborDistance {
    pub mean_m: f64,
    pub used: usize,
    /// True when no site fell inside the HPBW window and the nearest sites
    /// in any direction were used instead.
    pub fallback: bool,
}

/// Mean distance to the `m` closest same-network sites within the sector's
/// HPBW window. Falls back to the nearest sites in any direction when the
/// window is empty; errors when no non-co-located site exists at all.
pub fn mean_neighbor_distance(
    sector: &Sector,
    sites: &[SiteRef],
    m: usize,
) -> Result<NeighborDistance, CoreError> {
    if m < 1 {
        return Err(CoreError::Domain("m must be >= 1"));
    }
    let half_window = sector.hpbw_deg / 2.0;
    let mut in_window: Vec<f64> = Vec::new();
    let mut anywhere: Vec<f64> = Vec::new();
    for site in sites {
        if site.network_id != sector.network_id {
            continue;
        }
        // sites beyond the projection limit are ignored; they cannot inform
        // local cell density
        let Ok((dist, bearing)) = geo::range_bearing(sector.site, site.location) else {
            continue;
        };
        if dist <= CO_LOCATION_DISTANCE_M {
            continue;
        }
        anywhere.push(dist);
        if geo::wrap_deg(bearing - sector.azimuth_deg).abs() <= half_window {
            in_window.push(dist);
        }
    }
    if anywhere.is_empty() {
        return Err(CoreError::InsufficientInfrastructure);
    }
    let (mut pool, fallback) =
        if in_window.is_empty() { (anywhere, true) } else { (in_window, false) };
    pool.sort_by(f64::total_cmp);
    let used = pool.len().min(m);
    let mean_m = pool[..used].iter().sum::<f64>() / used as f64;
    Ok(NeighborDistance { mean_m, used, fallback })
}

/// A sector's RPL: the sampled radial boundary plus provenance flags.
#[derive(Debug, Clone, PartialEq)]
pub struct Rpl {
    pub sector: Sector,
    pub params: RplParams,
    pub mean_dist_m: f64,
    pub neighbor_count_used: usize,
    pub fallback_used: bool,
    /// Radial boundary distance at compass azimuth k * 360/grid_size.
    pub radii_m: Vec<f64>,
    pub horizon_clipped: bool,
}

/// Unclipped, unscaled boundary shape: mean * (G(phi_k)/G_max)^(1/n) for
/// each grid azimuth. Multiplying by c gives the boundary of Rpl before
/// the horizon clip.
fn unit_radii(
    pattern: &AntennaPattern,
    mean_m: f64,
    n: f64,
    grid_size: usize,
) -> Result<Vec<f64>, CoreError> {
    let (g_max, _) = pattern.gain_max(grid_size)?;
    let step = 360.0 / grid_size as f64;
    Ok((0..grid_size)
        .map(|k| mean_m * libm::pow(pattern.gain(k as f64 * step) / g_max, 1.0 / n))
        .collect())
}

/// Build the RPL for a sector.
pub fn build_rpl(sector: &Sector, sites: &[SiteRef], params: &RplParams) -> Result<Rpl, CoreError> {
    sector.validate()?;
    params.validate()?;
    let pattern = sector.pattern()?;
    let neighbors = mean_neighbor_distance(sector, sites, params.m_neighbors)?;
    let mut radii_m = unit_radii(&pattern, neighbors.mean_m, params.n, params.grid_size)?;
    for r in &mut radii_m {
        *r *= params.c;
    }
    let mut horizon_clipped = false;
    if let Some(h) = sector.height_m {
        let r_h = propagation::radio_horizon(h)?;
        for r in &mut radii_m {
            if *r > r_h {
                *r = r_h;
                horizon_clipped = true;
            }
        }
    }
    Ok(Rpl {
        sector: sector.clone(),
        params: *params,
        mean_dist_m: neighbors.mean_m,
        neighbor_count_used: neighbors.used,
        fallback_used: neighbors.fallback,
        radii_m,
        horizon_clipped,
    })
}

/// Linear interpolation of a sampled radial boundary at a compass bearing.
fn interp_radius(radii: &[f64], bearing_deg: f64) -> f64 {
    let grid_size = radii.len();
    let step = 360.0 / grid_size as f64;
    let pos = geo::wrap_deg_positive(bearing_deg) / step;
    let k = libm::floor(pos) as usize % grid_size;
    let frac = pos - libm::floor(pos);
    let next = (k + 1) % grid_size;
    radii[k] * (1.0 - frac) + radii[next] * frac
}

impl Rpl {
    /// Boundary distance at an arbitrary compass bearing (interpolated).
    pub fn radius_at(&self, bearing_deg: f64) -> f64 {
        interp_radius(&self.radii_m, bearing_deg)
    }

    /// Whether a point lies inside the region. The sector site itself is
    /// always contained; points beyond the projection limit are outside any
    /// physically reachable boundary.
    pub fn contains(&self, point: GeoPoint) -> bool {
        match geo::range_bearing(self.sector.site, point) {
            Ok((0.0, _)) => true,
            Ok((r, bearing)) => r <= self.radius_at(bearing),
            Err(_) => false,
        }
    }

    /// Region area by polar quadrature: 1/2 sum r_k^2 dphi.
    pub fn area_m2(&self) -> f64 {
        let dphi = 2.0 * core::f64::consts::PI / self.radii_m.len() as f64;
        0.5 * dphi * self.radii_m.iter().map(|r| r * r).sum::<f64>()
    }

    /// Construct directly from sampled radii (used for degenerate shapes in
    /// tests and for deserialization).
    pub fn from_radii(sector: Sector, params: RplParams, radii_m: Vec<f64>) -> Self {
        Self {
            sector,
            params,
            mean_dist_m: 0.0,
            neighbor_count_used: 0,
            fallback_used: false,
            radii_m,
            horizon_clipped: false,
        }
    }
}

/// Result of the minimal-c search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinC {
    pub c_star: f64,
    /// False when some point lies beyond the radio horizon, so no c can
    /// cover it after clipping. c_star is still reported for diagnostics.
    pub feasible: bool,
}

/// Smallest c for which every point is contained in the (unclipped) RPL.
///
/// The boundary is linear in c, so the answer is the largest ratio of point
/// range to unit-boundary radius; no search is needed. A one-part-in-1e12
/// guard absorbs rounding so that containment at exactly c_star holds.
pub fn min_c_for_zero_error(
    sector: &Sector,
    sites: &[SiteRef],
    points: &[GeoPoint],
    n: f64,
    m: usize,
    grid_size: usize,
) -> Result<MinC, CoreError> {
    if points.is_empty() {
        return Err(CoreError::Domain("no points given for minimal-c search"));
    }
    sector.validate()?;
    let pattern = sector.pattern()?;
    let neighbors = mean_neighbor_distance(sector, sites, m)?;
    let unit = unit_radii(&pattern, neighbors.mean_m, n, grid_size)?;
    let horizon = match sector.height_m {
        Some(h) => Some(propagation::radio_horizon(h)?),
        None => None,
    };
    let mut c_star = 0.0_f64;
    let mut feasible = true;
    for point in points {
        let (r, bearing) = geo::range_bearing(sector.site, *point)?;
        if r == 0.0 {
            continue;
        }
        c_star = c_star.max(r / interp_radius(&unit, bearing));
        if let Some(r_h) = horizon {
            if r > r_h {
                feasible = false;
            }
        }
    }
    Ok(MinC { c_star: c_star * (1.0 + 1e-12), feasible })
}

/// The smallest-area zero-error parameterization over an (n, M) grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalRpl {
    pub params: RplParams,
    pub area_m2: f64,
}

/// Search the (n, M) grid for the combination whose zero-error RPL (at its
/// own c_star) has minimal area. Ties prefer smaller n, then smaller M.
pub fn optimal_rpl(
    sector: &Sector,
    sites: &[SiteRef],
    points: &[GeoPoint],
    n_grid: &[f64],
    m_grid: &[usize],
    grid_size: usize,
) -> Result<OptimalRpl, CoreError> {
    if n_grid.is_empty() || m_grid.is_empty() {
        return Err(CoreError::Domain("parameter grids must be nonempty"));
    }
    let mut best: Option<OptimalRpl> = None;
    for &n in n_grid {
        for &m in m_grid {
            let min_c = min_c_for_zero_error(sector, sites, points, n, m, grid_size)?;
            if !min_c.feasible {
                continue;
            }
            let params = RplParams { n, m_neighbors: m, c: min_c.c_star, grid_size };
            let area = build_rpl(sector, sites, &params)?.area_m2();
            let better = match &best {
                None => true,
                Some(b) => {
                    area < b.area_m2
                        || (area == b.area_m2
                            && (n, m) < (b.params.n, b.params.m_neighbors))
                }
            };
            if better {
                best = Some(OptimalRpl { params, area_m2: area });
            }
        }
    }
    best.ok_or(CoreError::Infeasible)
}
