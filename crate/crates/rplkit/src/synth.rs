//! Synthetic-scenario generator: seeded network layouts, drive routes, and
//! RSRP observations produced by the same propagation and antenna models
//! the estimator assumes. Lets the whole pipeline be exercised end to end
//! without proprietary drive-test data.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rplkit_core::antenna::AntennaPattern;
use rplkit_core::assign::Observation;
use rplkit_core::geo::{self, GeoPoint};
use rplkit_core::propagation::{path_gain, PathLossParams};
use rplkit_core::rpl::Sector;
use rplkit_core::CoreError;

use crate::error::ToolError;

/// Everything needed to generate one synthetic scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub network_id: String,
    pub center: GeoPoint,
    pub region_km: f64,
    pub n_sites: usize,
    pub sectors_per_site: usize,
    pub hpbw_deg: f64,
    pub freq_hz: f64,
    pub h_bs_m: f64,
    pub h_ms_m: f64,
    pub p_t_w: f64,
    pub g_r: f64,
    pub p_rmin_w: f64,
    /// Path loss exponent used on the generation side.
    pub n_true: f64,
    pub shadowing_sigma_db: f64,
    pub detection_floor_dbm: f64,
    /// Drive route; empty means the default square loop at half region.
    pub route: Vec<GeoPoint>,
    pub scan_spacing_m: f64,
    /// Optional generating-pattern override for model-mismatch experiments.
    pub gen_q: Option<f64>,
    pub gen_p: Option<f64>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            network_id: "SYN".into(),
            center: GeoPoint::new(28.565, -81.586).unwrap(),
            region_km: 10.0,
            n_sites: 6,
            sectors_per_site: 3,
            hpbw_deg: 66.0,
            freq_hz: 700e6,
            h_bs_m: 30.0,
            h_ms_m: 1.5,
            p_t_w: 10.0,
            g_r: 1.0,
            p_rmin_w: 1e-13,
            n_true: 4.0,
            shadowing_sigma_db: 0.0,
            detection_floor_dbm: -140.0,
            route: Vec::new(),
            scan_spacing_m: 100.0,
            gen_q: None,
            gen_p: None,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), ToolError> {
        let positive = [
            ("region_km", self.region_km),
            ("hpbw_deg", self.hpbw_deg),
            ("freq_hz", self.freq_hz),
            ("h_bs_m", self.h_bs_m),
            ("h_ms_m", self.h_ms_m),
            ("p_t_w", self.p_t_w),
            ("g_r", self.g_r),
            ("p_rmin_w", self.p_rmin_w),
            ("scan_spacing_m", self.scan_spacing_m),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(ToolError::Domain(format!("{name} must be positive")));
            }
        }
        if self.n_sites < 2 {
            return Err(ToolError::Domain("n_sites must be at least 2".into()));
        }
        if self.sectors_per_site < 1 {
            return Err(ToolError::Domain("sectors_per_site must be at least 1".into()));
        }
        if self.shadowing_sigma_db < 0.0 {
            return Err(ToolError::Domain("shadowing_sigma_db must be >= 0".into()));
        }
        if !(self.n_true >= 2.0) {
            return Err(ToolError::Domain("n_true must be >= 2".into()));
        }
        Ok(())
    }

    /// Parse the plain `key = value` configuration format. `#` starts a
    /// comment; the route is a `;`-separated list of `lat,lon` pairs.
    pub fn from_str(text: &str) -> Result<Self, ToolError> {
        let mut config = Self::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ToolError::Parse(format!(
                    "config line {}: expected key = value",
                    idx + 1
                )));
            };
            let key = key.trim();
            let value = value.trim();
            let bad = |what: &str| {
                ToolError::Parse(format!("config line {}: bad {what}: {value:?}", idx + 1))
            };
            match key {
                "seed" => config.seed = value.parse().map_err(|_| bad("integer"))?,
                "network_id" => config.network_id = value.to_string(),
                "center" => config.center = parse_point(value).map_err(|_| bad("lat,lon"))?,
                "region_km" => config.region_km = value.parse().map_err(|_| bad("number"))?,
                "n_sites" => config.n_sites = value.parse().map_err(|_| bad("integer"))?,
                "sectors_per_site" => {
                    config.sectors_per_site = value.parse().map_err(|_| bad("integer"))?
                }
                "hpbw_deg" => config.hpbw_deg = value.parse().map_err(|_| bad("number"))?,
                "freq_hz" => config.freq_hz = value.parse().map_err(|_| bad("number"))?,
                "h_bs_m" => config.h_bs_m = value.parse().map_err(|_| bad("number"))?,
                "h_ms_m" => config.h_ms_m = value.parse().map_err(|_| bad("number"))?,
                "p_t_w" => config.p_t_w = value.parse().map_err(|_| bad("number"))?,
                "g_r" => config.g_r = value.parse().map_err(|_| bad("number"))?,
                "p_rmin_w" => config.p_rmin_w = value.parse().map_err(|_| bad("number"))?,
                "n_true" => config.n_true = value.parse().map_err(|_| bad("number"))?,
                "shadowing_sigma_db" => {
                    config.shadowing_sigma_db = value.parse().map_err(|_| bad("number"))?
                }
                "detection_floor_dbm" => {
                    config.detection_floor_dbm = value.parse().map_err(|_| bad("number"))?
                }
                "scan_spacing_m" => {
                    config.scan_spacing_m = value.parse().map_err(|_| bad("number"))?
                }
                "route" => {
                    config.route = value
                        .split(';')
                        .filter(|s| !s.trim().is_empty())
                        .map(|s| parse_point(s).map_err(|_| bad("route point")))
                        .collect::<Result<_, _>>()?
                }
                "gen_q" => config.gen_q = Some(value.parse().map_err(|_| bad("number"))?),
                "gen_p" => config.gen_p = Some(value.parse().map_err(|_| bad("number"))?),
                other => {
                    return Err(ToolError::Parse(format!(
                        "config line {}: unknown key {other:?}",
                        idx + 1
                    )))
                }
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn parse_point(text: &str) -> Result<GeoPoint, CoreError> {
    let mut parts = text.split(',').map(str::trim);
    let (Some(lat), Some(lon), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(CoreError::Domain("expected lat,lon"));
    };
    let lat: f64 = lat.parse().map_err(|_| CoreError::Domain("bad latitude"))?;
    let lon: f64 = lon.parse().map_err(|_| CoreError::Domain("bad longitude"))?;
    GeoPoint::new(lat, lon)
}

fn offset(center: GeoPoint, east_m: f64, north_m: f64) -> Result<GeoPoint, CoreError> {
    let range = east_m.hypot(north_m);
    let bearing = east_m.atan2(north_m).to_degrees();
    geo::destination(center, range, bearing)
}

/// Place sites by seeded rejection sampling over the region and attach
/// `sectors_per_site` sectors per site with a common random base azimuth.
pub fn generate_network(config: &ScenarioConfig) -> Result<Vec<Sector>, ToolError> {
    config.validate()?;
    let region_m = config.region_km * 1000.0;
    let min_sep = 0.3 * region_m / (config.n_sites as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut positions: Vec<(f64, f64)> = Vec::with_capacity(config.n_sites);
    let mut attempts = 0usize;
    let budget = 1000 * config.n_sites;
    while positions.len() < config.n_sites {
        attempts += 1;
        if attempts > budget {
            return Err(ToolError::from(CoreError::LayoutTooDense));
        }
        let east = rng.gen_range(-region_m / 2.0..region_m / 2.0);
        let north = rng.gen_range(-region_m / 2.0..region_m / 2.0);
        let ok = positions
            .iter()
            .all(|&(e, n)| (east - e).hypot(north - n) >= min_sep);
        if ok {
            positions.push((east, north));
        }
    }
    let mut sectors = Vec::new();
    for (site_idx, &(east, north)) in positions.iter().enumerate() {
        let site = offset(config.center, east, north).map_err(ToolError::from)?;
        let base_azimuth: f64 = rng.gen_range(0.0..360.0);
        for j in 0..config.sectors_per_site {
            let azimuth =
                geo::wrap_deg_positive(base_azimuth + j as f64 * 360.0 / config.sectors_per_site as f64);
            sectors.push(Sector {
                network_id: config.network_id.clone(),
                sector_id: format!("{site_idx:03}-{j}"),
                site,
                azimuth_deg: azimuth,
                hpbw_deg: config.hpbw_deg,
                height_m: Some(config.h_bs_m),
                freq_hz: Some(config.freq_hz),
                fb_db: None,
            });
        }
    }
    Ok(sectors)
}

/// Default route: a square loop with corners at a quarter region from the
/// center.
fn default_route(config: &ScenarioConfig) -> Result<Vec<GeoPoint>, CoreError> {
    let half = config.region_km * 1000.0 / 4.0;
    let corners = [(-half, -half), (-half, half), (half, half), (half, -half), (-half, -half)];
    corners
        .iter()
        .map(|&(e, n)| offset(config.center, e, n))
        .collect()
}

/// Sample the route every `scan_spacing_m` meters (route vertices are
/// projected into the local frame at the first vertex).
fn route_samples(config: &ScenarioConfig) -> Result<Vec<GeoPoint>, ToolError> {
    let route = if config.route.is_empty() {
        default_route(config).map_err(ToolError::from)?
    } else {
        config.route.clone()
    };
    if route.len() == 1 {
        return Ok(route);
    }
    let anchor = route[0];
    let local: Vec<(f64, f64)> = route
        .iter()
        .map(|p| geo::project(anchor, *p).map(|v| (v.east_m, v.north_m)))
        .collect::<Result<_, _>>()
        .map_err(ToolError::from)?;
    let mut samples = Vec::new();
    let mut next_at = 0.0_f64; // arc length of the next sample
    let mut walked = 0.0_f64;
    for w in local.windows(2) {
        let (e1, n1) = w[0];
        let (e2, n2) = w[1];
        let seg = (e2 - e1).hypot(n2 - n1);
        if seg == 0.0 {
            continue;
        }
        while next_at <= walked + seg {
            let t = (next_at - walked) / seg;
            let east = e1 + t * (e2 - e1);
            let north = n1 + t * (n2 - n1);
            samples.push(offset(anchor, east, north).map_err(ToolError::from)?);
            next_at += config.scan_spacing_m;
        }
        walked += seg;
    }
    Ok(samples)
}

/// Deterministic per-(sample, sector) noise stream: a splitmix64-style mix
/// of the scenario seed with both indices, so parallel evaluation order
/// cannot change outputs.
fn noise_seed(seed: u64, sample_idx: usize, sector_idx: usize) -> u64 {
    let mut z = seed
        ^ (sample_idx as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ (sector_idx as u64).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generate RSRP observations along the route: Friis with breakpoint path
/// loss and the sector's pattern, plus optional log-normal shadowing, with
/// a detection floor.
pub fn generate_observations(
    sectors: &[Sector],
    config: &ScenarioConfig,
) -> Result<Vec<Observation>, ToolError> {
    config.validate()?;
    let samples = route_samples(config)?;
    if samples.is_empty() {
        return Err(ToolError::Domain("route produced no samples".into()));
    }
    let params = PathLossParams::from_freq(config.n_true, config.freq_hz, config.h_bs_m, config.h_ms_m)
        .map_err(ToolError::from)?;
    let patterns: Vec<AntennaPattern> = sectors
        .iter()
        .map(|s| match (config.gen_q, config.gen_p) {
            (Some(q), p) => {
                AntennaPattern::new(q, p.unwrap_or(rplkit_core::antenna::DEFAULT_P), s.azimuth_deg)
            }
            (None, Some(p)) => {
                let q = rplkit_core::antenna::solve_q(s.hpbw_deg, p)?;
                AntennaPattern::new(q, p, s.azimuth_deg)
            }
            (None, None) => s.pattern(),
        })
        .collect::<Result<_, _>>()
        .map_err(ToolError::from)?;
    let shadowing = if config.shadowing_sigma_db > 0.0 {
        Some(Normal::new(0.0, config.shadowing_sigma_db).expect("sigma validated"))
    } else {
        None
    };

    let mut observations = Vec::new();
    for (sample_idx, sample) in samples.iter().enumerate() {
        for (sector_idx, (sector, pattern)) in sectors.iter().zip(&patterns).enumerate() {
            let (r, bearing) = geo::range_bearing(sector.site, *sample).map_err(ToolError::from)?;
            let r = r.max(1.0); // the scanner is never inside the mast
            let gain = pattern.gain(bearing);
            let p_r_w =
                config.p_t_w * gain * path_gain(r, &params).map_err(ToolError::from)? * config.g_r;
            if !(p_r_w > 0.0) {
                continue;
            }
            let mut rsrp_dbm = 10.0 * (p_r_w * 1000.0).log10();
            if let Some(dist) = &shadowing {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(noise_seed(config.seed, sample_idx, sector_idx));
                rsrp_dbm += dist.sample(&mut rng);
            }
            if rsrp_dbm < config.detection_floor_dbm {
                continue;
            }
            observations.push(Observation {
                scan_id: sample_idx.to_string(),
                timestamp: sample_idx as f64,
                location: *sample,
                network_id: sector.network_id.clone(),
                sector_id: sector.sector_id.clone(),
                rsrp_dbm,
            });
        }
    }
    Ok(observations)
}
