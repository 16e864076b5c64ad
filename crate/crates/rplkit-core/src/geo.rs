//! Geodetic primitives: local tangent-plane projection, range, and bearing.
//!
//! An equirectangular projection on a spherical Earth is used throughout.
//! The study areas this toolkit targets are macrocell-scale (tens of km),
//! where the projection error is far below measurement scatter; the
//! projection therefore refuses separations beyond [`MAX_SEPARATION_M`].

use crate::error::CoreError;

/// Spherical Earth radius, meters.
pub const EARTH_RADIUS_M: f64 = 6_371_000.0;

/// Separation beyond which the local projection contract is void.
pub const MAX_SEPARATION_M: f64 = 100_000.0;

/// A WGS-style geographic coordinate in degrees.
///
/// Latitude is clamped-checked to [-90, 90]; longitude is normalized to
/// [-180, 180) on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat_deg: f64,
    lon_deg: f64,
}

impl GeoPoint {
    pub fn new(lat_deg: f64, lon_deg: f64) -> Result<Self, CoreError> {
        if !lat_deg.is_finite() || lat_deg < -90.0 || lat_deg > 90.0 {
            return Err(CoreError::Domain("latitude outside [-90, 90]"));
        }
        if !lon_deg.is_finite() {
            return Err(CoreError::Domain("longitude not finite"));
        }
        Ok(Self { lat_deg, lon_deg: normalize_lon(lon_deg) })
    }

    pub fn lat_deg(&self) -> f64 {
        self.lat_deg
    }

    pub fn lon_deg(&self) -> f64 {
        self.lon_deg
    }
}

/// East/north offset in meters relative to an anchor point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalVector {
    pub east_m: f64,
    pub north_m: f64,
}

impl LocalVector {
    pub fn magnitude_m(&self) -> f64 {
        libm::hypot(self.east_m, self.north_m)
    }
}

fn normalize_lon(lon_deg: f64) -> f64 {
    let mut lon = libm::fmod(lon_deg + 180.0, 360.0);
    if lon < 0.0 {
        lon += 360.0;
    }
    lon - 180.0
}

/// Wrap an angle in degrees to [-180, 180).
pub fn wrap_deg(angle_deg: f64) -> f64 {
    normalize_lon(angle_deg)
}

/// Wrap an angle in degrees to [0, 360).
pub fn wrap_deg_positive(angle_deg: f64) -> f64 {
    let mut a = libm::fmod(angle_deg, 360.0);
    if a < 0.0 {
        a += 360.0;
    }
    a
}

/// Equirectangular projection of `point` onto the tangent plane at `anchor`.
pub fn project(anchor: GeoPoint, point: GeoPoint) -> Result<LocalVector, CoreError> {
    let dlat = (point.lat_deg - anchor.lat_deg).to_radians();
    let dlon = wrap_deg(point.lon_deg - anchor.lon_deg).to_radians();
    let east_m = EARTH_RADIUS_M * dlon * libm::cos(anchor.lat_deg.to_radians());
    let north_m = EARTH_RADIUS_M * dlat;
    let v = LocalVector { east_m, north_m };
    let separation_m = v.magnitude_m();
    if separation_m > MAX_SEPARATION_M {
        return Err(CoreError::ProjectionOutOfRange { separation_m, limit_m: MAX_SEPARATION_M });
    }
    Ok(v)
}

/// Range in meters and compass bearing in degrees (0 = north, 90 = east)
/// from `anchor` to `point`. Coincident points return (0, 0) by convention.
pub fn range_bearing(anchor: GeoPoint, point: GeoPoint) -> Result<(f64, f64), CoreError> {
    let v = project(anchor, point)?;
    let range_m = v.magnitude_m();
    if range_m == 0.0 {
        return Ok((0.0, 0.0));
    }
    let bearing_deg = wrap_deg_positive(libm::atan2(v.east_m, v.north_m).to_degrees());
    Ok((range_m, bearing_deg))
}

/// Inverse of [`range_bearing`]: the point at the given range and compass
/// bearing from `anchor`.
pub fn destination(anchor: GeoPoint, range_m: f64, bearing_deg: f64) -> Result<GeoPoint, CoreError> {
    if range_m < 0.0 {
        return Err(CoreError::Domain("range must be non-negative"));
    }
    if range_m > MAX_SEPARATION_M {
        return Err(CoreError::ProjectionOutOfRange { separation_m: range_m, limit_m: MAX_SEPARATION_M });
    }
    let b = bearing_deg.to_radians();
    let east_m = range_m * libm::sin(b);
    let north_m = range_m * libm::cos(b);
    let lat_deg = anchor.lat_deg + (north_m / EARTH_RADIUS_M).to_degrees();
    let lon_deg = anchor.lon_deg
        + (east_m / (EARTH_RADIUS_M * libm::cos(anchor.lat_deg.to_radians()))).to_degrees();
    GeoPoint::new(lat_deg, lon_deg)
}
