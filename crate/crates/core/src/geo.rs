//! Spherical-earth geodesy: great-circle distance, initial bearing, midpoint
//! and angular sector membership.
//!
//! All angles are exchanged in degrees; conversion to radians happens at the
//! point of use.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius in statute miles.
pub const EARTH_RADIUS_MI: f64 = 3958.8;

/// Default half-width of the positive routing sector, in degrees.
pub const DEFAULT_HALF_WIDTH: f64 = 50.0;

// Below this magnitude a tangent or chord vector is treated as zero.
const DEGENERATE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("latitude {0} outside [-90, 90]")]
    InvalidLatitude(f64),
    #[error("longitude {0} outside (-180, 180]")]
    InvalidLongitude(f64),
    #[error("bearing between coincident points is undefined")]
    DegenerateBearing,
    #[error("midpoint of antipodal points is undefined")]
    AmbiguousMidpoint,
    #[error("sector half-width {0} outside (0, 180]")]
    InvalidHalfWidth(f64),
}

/// A position on the sphere in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, GeoError> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(GeoError::InvalidLatitude(lat));
        }
        if !(lon > -180.0 && lon <= 180.0) {
            return Err(GeoError::InvalidLongitude(lon));
        }
        Ok(GeoPoint { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }

    fn to_unit_vector(self) -> [f64; 3] {
        let (lat, lon) = (self.lat.to_radians(), self.lon.to_radians());
        [lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin()]
    }
}

impl<'de> Deserialize<'de> for GeoPoint {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            lat: f64,
            lon: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        GeoPoint::new(raw.lat, raw.lon).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.5}, {:.5})", self.lat, self.lon)
    }
}

/// Compass bearing in degrees clockwise from true north, always in `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Bearing(f64);

impl Bearing {
    /// Wraps any finite angle into `[0, 360)`.
    pub fn new(degrees: f64) -> Self {
        let mut d = degrees.rem_euclid(360.0);
        // rem_euclid can round up to exactly 360 for tiny negative inputs
        if d >= 360.0 {
            d = 0.0;
        }
        Bearing(d)
    }

    pub fn degrees(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Bearing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.2}°", self.0)
    }
}

/// Angular window around an anchor bearing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorParams {
    half_width: f64,
}

impl SectorParams {
    pub fn new(half_width: f64) -> Result<Self, GeoError> {
        if !(half_width > 0.0 && half_width <= 180.0) {
            return Err(GeoError::InvalidHalfWidth(half_width));
        }
        Ok(SectorParams { half_width })
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }
}

impl Default for SectorParams {
    fn default() -> Self {
        SectorParams {
            half_width: DEFAULT_HALF_WIDTH,
        }
    }
}

/// Great-circle distance in miles (haversine formulation).
pub fn haversine_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    let lat1 = a.lat.to_radians();
    let lat2 = b.lat.to_radians();
    let half_dlat = (b.lat - a.lat).to_radians() / 2.0;
    let half_dlon = (b.lon - a.lon).to_radians() / 2.0;

    let h = half_dlat.sin().powi(2) + lat1.cos() * lat2.cos() * half_dlon.sin().powi(2);
    let c = 2.0 * h.sqrt().atan2((1.0 - h).max(0.0).sqrt());
    EARTH_RADIUS_MI * c
}

/// Initial great-circle bearing from `a` toward `b`.
pub fn initial_bearing(a: GeoPoint, b: GeoPoint) -> Result<Bearing, GeoError> {
    let lat1 = a.lat.to_radians();
    let lat2 = b.lat.to_radians();
    let dlon = (b.lon - a.lon).to_radians();

    let y = dlon.sin() * lat2.cos();
    let x = lat1.cos() * lat2.sin() - lat1.sin() * lat2.cos() * dlon.cos();
    if y.abs() < DEGENERATE_EPS && x.abs() < DEGENERATE_EPS {
        return Err(GeoError::DegenerateBearing);
    }
    Ok(Bearing::new(y.atan2(x).to_degrees()))
}

/// Great-circle midpoint: the normalized mean of the two unit vectors.
pub fn geographic_midpoint(a: GeoPoint, b: GeoPoint) -> Result<GeoPoint, GeoError> {
    if a == b {
        return Ok(a);
    }
    let (u, v) = (a.to_unit_vector(), b.to_unit_vector());
    let m = [u[0] + v[0], u[1] + v[1], u[2] + v[2]];
    let norm = (m[0] * m[0] + m[1] * m[1] + m[2] * m[2]).sqrt();
    if norm < DEGENERATE_EPS {
        return Err(GeoError::AmbiguousMidpoint);
    }
    let lat = (m[2] / norm).clamp(-1.0, 1.0).asin().to_degrees();
    let mut lon = m[1].atan2(m[0]).to_degrees();
    if lon <= -180.0 {
        lon += 360.0;
    }
    GeoPoint::new(lat, lon)
}

/// Smallest absolute circular difference between two bearings, in `[0, 180]`.
pub fn angular_deviation(x: Bearing, y: Bearing) -> f64 {
    let d = (x.0 - y.0).abs();
    if d > 180.0 {
        360.0 - d
    } else {
        d
    }
}

/// Inclusive sector test: `deviation <= half_width`.
pub fn within_sector(candidate: Bearing, anchor: Bearing, params: SectorParams) -> bool {
    angular_deviation(candidate, anchor) <= params.half_width
}
