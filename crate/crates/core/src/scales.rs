//! The three scale axes: temporal binning, spatial filtering/sampling and
//! the grid of (grammatical, spatial, temporal) cells.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Mean Earth radius used for all great-circle distances.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Temporal scales admitted by the analysis, in hours.
pub const ALLOWED_DT_HOURS: [u32; 6] = [3, 6, 12, 24, 48, 96];

/// Radius of the smallest spatial circle.
pub const BASE_RADIUS_KM: f64 = 3.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScaleError {
    #[error("temporal scale {0} h is not one of 3, 6, 12, 24, 48, 96")]
    UnsupportedDeltaT(u32),
    #[error("study window of {span_hours} h holds no complete {dt_hours} h bin")]
    NoCompleteBin { span_hours: i64, dt_hours: u32 },
    #[error("timestamp {timestamp} precedes temporal origin {origin}")]
    BeforeOrigin { timestamp: i64, origin: i64 },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("coordinate out of range: lat {lat}, lon {lon}")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("requested {requested} records but only {available} lie within {radius}")]
    InsufficientPopulation {
        requested: usize,
        available: usize,
        radius: SpatialExtent,
    },
    #[error("scale axis `{0}` has no values")]
    EmptyAxis(&'static str),
    #[error("grammatical scale {0} outside 1..=5")]
    InvalidNgram(usize),
}

/// A latitude/longitude pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, ScaleError> {
        let p = GeoPoint { lat, lon };
        if p.in_range() {
            Ok(p)
        } else {
            Err(ScaleError::InvalidCoordinate { lat, lon })
        }
    }

    pub fn in_range(&self) -> bool {
        self.lat.is_finite()
            && self.lon.is_finite()
            && (-90.0..=90.0).contains(&self.lat)
            && (-180.0..=180.0).contains(&self.lon)
    }

    /// Point reached by travelling `distance_km` along the great circle
    /// leaving `self` at `bearing_rad` (clockwise from north).
    pub fn destination(&self, bearing_rad: f64, distance_km: f64) -> GeoPoint {
        let delta = distance_km / EARTH_RADIUS_KM;
        let phi1 = self.lat.to_radians();
        let lambda1 = self.lon.to_radians();
        let sin_phi2 = phi1.sin() * delta.cos() + phi1.cos() * delta.sin() * bearing_rad.cos();
        let phi2 = sin_phi2.clamp(-1.0, 1.0).asin();
        let lambda2 = lambda1
            + (bearing_rad.sin() * delta.sin() * phi1.cos())
                .atan2(delta.cos() - phi1.sin() * sin_phi2);
        let mut lon = lambda2.to_degrees();
        lon = (lon + 540.0) % 360.0 - 180.0;
        GeoPoint {
            lat: phi2.to_degrees().clamp(-90.0, 90.0),
            lon: lon.clamp(-180.0, 180.0),
        }
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.lat, self.lon)
    }
}

impl std::str::FromStr for GeoPoint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lat, lon) = s
            .split_once(',')
            .ok_or_else(|| format!("expected `lat,lon`, got `{s}`"))?;
        let lat: f64 = lat.trim().parse().map_err(|e| format!("latitude: {e}"))?;
        let lon: f64 = lon.trim().parse().map_err(|e| format!("longitude: {e}"))?;
        GeoPoint::new(lat, lon).map_err(|e| e.to_string())
    }
}

/// Default capital-city centers, keyed by country label.
pub const CAPITAL_CENTERS: [(&str, GeoPoint); 4] = [
    ("mexico", GeoPoint { lat: 19.4326, lon: -99.1332 }),
    ("spain", GeoPoint { lat: 40.4168, lon: -3.7038 }),
    ("argentina", GeoPoint { lat: -34.6037, lon: -58.3816 }),
    ("uk", GeoPoint { lat: 51.5074, lon: -0.1278 }),
];

/// Looks up a shipped capital center by country label (case-insensitive).
pub fn capital_center(country: &str) -> Option<GeoPoint> {
    let key = country.to_ascii_lowercase();
    let key = match key.as_str() {
        "mx" => "mexico",
        "es" => "spain",
        "ar" => "argentina",
        "gb" | "united kingdom" | "united-kingdom" => "uk",
        other => other,
    };
    CAPITAL_CENTERS
        .iter()
        .find(|(name, _)| *name == key)
        .map(|(_, p)| *p)
}

/// Great-circle distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let phi1 = a.lat.to_radians();
    let phi2 = b.lat.to_radians();
    let dphi = phi2 - phi1;
    let dlambda = (b.lon - a.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Position of a timestamp relative to a temporal partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinSlot {
    Bin(u32),
    /// Falls in the dropped trailing partial bin (or past the window).
    Overflow,
}

/// Partition of the study window into `bins` consecutive intervals of
/// `delta_t_hours` starting at `origin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalScale {
    delta_t_hours: u32,
    origin: i64,
    bins: u32,
}

impl TemporalScale {
    /// Builds the partition of `[origin, origin + span_seconds)`. The trailing
    /// partial bin is dropped.
    pub fn new(delta_t_hours: u32, origin: i64, span_seconds: i64) -> Result<Self, ScaleError> {
        if !ALLOWED_DT_HOURS.contains(&delta_t_hours) {
            return Err(ScaleError::UnsupportedDeltaT(delta_t_hours));
        }
        Self::with_any_width(delta_t_hours, origin, span_seconds)
    }

    /// Like [`TemporalScale::new`] without restricting the width to the
    /// analysis set. Used for synthetic generator bins.
    pub fn with_any_width(
        delta_t_hours: u32,
        origin: i64,
        span_seconds: i64,
    ) -> Result<Self, ScaleError> {
        if delta_t_hours == 0 {
            return Err(ScaleError::UnsupportedDeltaT(0));
        }
        let span_hours = span_seconds.div_euclid(3600);
        let bins = span_seconds.max(0) / (i64::from(delta_t_hours) * 3600);
        if bins == 0 {
            return Err(ScaleError::NoCompleteBin {
                span_hours,
                dt_hours: delta_t_hours,
            });
        }
        Ok(TemporalScale {
            delta_t_hours,
            origin,
            bins: u32::try_from(bins).unwrap_or(u32::MAX),
        })
    }

    pub fn delta_t_hours(&self) -> u32 {
        self.delta_t_hours
    }

    pub fn origin(&self) -> i64 {
        self.origin
    }

    /// Number of complete bins `T`.
    pub fn bins(&self) -> u32 {
        self.bins
    }

    pub fn bin_seconds(&self) -> i64 {
        i64::from(self.delta_t_hours) * 3600
    }

    pub fn bin_index(&self, timestamp: i64) -> Result<BinSlot, ScaleError> {
        if timestamp < self.origin {
            return Err(ScaleError::BeforeOrigin {
                timestamp,
                origin: self.origin,
            });
        }
        let id = (timestamp - self.origin) / self.bin_seconds();
        if id >= i64::from(self.bins) {
            Ok(BinSlot::Overflow)
        } else {
            Ok(BinSlot::Bin(id as u32))
        }
    }
}

/// Either a circle of given radius or the whole (unfiltered) country.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialExtent {
    RadiusKm(f64),
    WholeCountry,
}

impl fmt::Display for SpatialExtent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpatialExtent::RadiusKm(r) => write!(f, "{r} km"),
            SpatialExtent::WholeCountry => f.write_str("whole country"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpatialScale {
    pub center: GeoPoint,
    pub extent: SpatialExtent,
}

impl SpatialScale {
    pub fn circle(center: GeoPoint, radius_km: f64) -> Result<Self, ScaleError> {
        if !(radius_km.is_finite() && radius_km > 0.0) {
            return Err(ScaleError::InvalidRadius(radius_km));
        }
        Ok(SpatialScale {
            center,
            extent: SpatialExtent::RadiusKm(radius_km),
        })
    }

    pub fn whole_country(center: GeoPoint) -> Self {
        SpatialScale {
            center,
            extent: SpatialExtent::WholeCountry,
        }
    }

    pub fn contains(&self, p: GeoPoint) -> bool {
        match self.extent {
            SpatialExtent::RadiusKm(r) => haversine_km(self.center, p) <= r,
            SpatialExtent::WholeCountry => true,
        }
    }
}

/// `3·2^m` km for `m = 0..count`.
pub fn radius_series(count: usize) -> Vec<f64> {
    (0..count)
        .map(|m| BASE_RADIUS_KM * f64::from(1u32 << m.min(31)))
        .collect()
}

/// Smallest radius of the form `3·2^m` that is `>= max_distance_km`.
pub fn containing_radius(max_distance_km: f64) -> f64 {
    let mut r = BASE_RADIUS_KM;
    while r < max_distance_km && r < 1e6 {
        r *= 2.0;
    }
    r
}

/// Anything that can be located and ordered for sampling.
pub trait Located {
    fn location(&self) -> GeoPoint;
    fn sort_key(&self) -> &str;
}

impl Located for crate::ingest::CorpusRecord {
    fn location(&self) -> GeoPoint {
        GeoPoint {
            lat: self.latitude,
            lon: self.longitude,
        }
    }

    fn sort_key(&self) -> &str {
        &self.id
    }
}

/// Uniform random `n`-subset of `0..population`, without replacement, via a
/// seeded partial Fisher–Yates pass. Returned indices are ascending.
pub fn sample_indices(population: usize, n: usize, seed: u64) -> Vec<usize> {
    assert!(n <= population, "sample larger than population");
    if n == population {
        return (0..population).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..population).collect();
    for i in 0..n {
        let j = rng.random_range(i..population);
        pool.swap(i, j);
    }
    pool.truncate(n);
    pool.sort_unstable();
    pool
}

/// Draws `n` records uniformly without replacement among those inside
/// `scale`. Candidates are ordered by [`Located::sort_key`] before drawing so
/// the result depends only on the record set and `seed`, not on input order.
/// The returned records keep that key order.
pub fn spatial_sample<'a, T: Located>(
    records: &'a [T],
    scale: &SpatialScale,
    n: usize,
    seed: u64,
) -> Result<Vec<&'a T>, ScaleError> {
    let mut inside: Vec<&T> = records
        .iter()
        .filter(|r| scale.contains(r.location()))
        .collect();
    if inside.len() < n {
        return Err(ScaleError::InsufficientPopulation {
            requested: n,
            available: inside.len(),
            radius: scale.extent,
        });
    }
    inside.sort_by(|a, b| a.sort_key().cmp(b.sort_key()));
    Ok(sample_indices(inside.len(), n, seed)
        .into_iter()
        .map(|i| inside[i])
        .collect())
}

/// Coordinates of one grid cell: indices into the three axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellIndex {
    pub grammatical: usize,
    pub spatial: usize,
    pub temporal: usize,
}

/// The value lists of the three scale axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    pub grammatical: Vec<usize>,
    pub spatial: Vec<SpatialExtent>,
    pub temporal: Vec<u32>,
}

impl ScaleGrid {
    pub fn new(
        grammatical: Vec<usize>,
        spatial: Vec<SpatialExtent>,
        temporal: Vec<u32>,
    ) -> Result<Self, ScaleError> {
        if grammatical.is_empty() {
            return Err(ScaleError::EmptyAxis("grammatical"));
        }
        if spatial.is_empty() {
            return Err(ScaleError::EmptyAxis("spatial"));
        }
        if temporal.is_empty() {
            return Err(ScaleError::EmptyAxis("temporal"));
        }
        if let Some(&n) = grammatical.iter().find(|&&n| !(1..=5).contains(&n)) {
            return Err(ScaleError::InvalidNgram(n));
        }
        for extent in &spatial {
            if let SpatialExtent::RadiusKm(r) = *extent {
                if !(r.is_finite() && r > 0.0) {
                    return Err(ScaleError::InvalidRadius(r));
                }
            }
        }
        if let Some(&dt) = temporal.iter().find(|dt| !ALLOWED_DT_HOURS.contains(dt)) {
            return Err(ScaleError::UnsupportedDeltaT(dt));
        }
        Ok(ScaleGrid {
            grammatical,
            spatial,
            temporal,
        })
    }

    pub fn len(&self) -> usize {
        self.grammatical.len() * self.spatial.len() * self.temporal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All cells, grammatical-major then spatial then temporal.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.grammatical.len()).flat_map(move |i| {
            (0..self.spatial.len()).flat_map(move |j| {
                (0..self.temporal.len()).map(move |s| CellIndex {
                    grammatical: i,
                    spatial: j,
                    temporal: s,
                })
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOUR: i64 = 3600;

    #[test]
    fn bin_boundaries() {
        let scale = TemporalScale::new(24, 0, 10 * 24 * HOUR).unwrap();
        assert_eq!(scale.bin_index(0).unwrap(), BinSlot::Bin(0));
        assert_eq!(scale.bin_index(25 * HOUR).unwrap(), BinSlot::Bin(1));
        assert!(matches!(
            scale.bin_index(-1),
            Err(ScaleError::BeforeOrigin { .. })
        ));
    }

    #[test]
    fn trailing_partial_bin_dropped() {
        let scale = TemporalScale::new(96, 0, 8760 * HOUR).unwrap();
        assert_eq!(scale.bins(), 91);
        assert_eq!(scale.bin_index(8737 * HOUR).unwrap(), BinSlot::Overflow);
        assert_eq!(scale.bin_index(8735 * HOUR).unwrap(), BinSlot::Bin(90));
    }

    #[test]
    fn rejects_unlisted_dt() {
        assert_eq!(
            TemporalScale::new(5, 0, 100 * HOUR),
            Err(ScaleError::UnsupportedDeltaT(5))
        );
        assert!(TemporalScale::new(96, 0, 95 * HOUR).is_err());
    }

    #[test]
    fn haversine_identity_and_antipode() {
        let p = GeoPoint::new(19.43, -99.13).unwrap();
        assert_eq!(haversine_km(p, p), 0.0);
        let a = GeoPoint::new(10.0, 20.0).unwrap();
        let b = GeoPoint::new(-10.0, -160.0).unwrap();
        let expected = std::f64::consts::PI * EARTH_RADIUS_KM;
        assert!((haversine_km(a, b) - expected).abs() < 0.1);
        assert!((expected - 20015.1).abs() < 0.1);
    }

    #[test]
    fn madrid_barcelona() {
        // geographiclib Geodesic(a = 6371 km, f = 0).Inverse(...) = 505.095664 km
        let madrid = GeoPoint::new(40.4168, -3.7038).unwrap();
        let barcelona = GeoPoint::new(41.3874, 2.1686).unwrap();
        assert!((haversine_km(madrid, barcelona) - 505.095664).abs() < 1.0);
        assert!((haversine_km(madrid, barcelona) - 505.095664).abs() < 1e-3);
    }

    #[test]
    fn destination_round_trips_distance() {
        let c = capital_center("mexico").unwrap();
        for (bearing, dist) in [(0.3, 2.5), (2.0, 150.0), (4.5, 1200.0)] {
            let p = c.destination(bearing, dist);
            assert!((haversine_km(c, p) - dist).abs() < 1e-6);
        }
    }

    #[test]
    fn radius_series_doubles_from_three() {
        assert_eq!(radius_series(4), vec![3.0, 6.0, 12.0, 24.0]);
        assert_eq!(containing_radius(100.0), 192.0);
        assert_eq!(containing_radius(2.0), 3.0);
    }

    #[test]
    fn sample_full_population_is_identity() {
        assert_eq!(sample_indices(5, 5, 99), vec![0, 1, 2, 3, 4]);
        let a = sample_indices(100, 10, 7);
        assert_eq!(a, sample_indices(100, 10, 7));
        assert_eq!(a.len(), 10);
    }

    #[test]
    fn grid_counts_cells() {
        let grid = ScaleGrid::new(
            vec![1, 2, 3, 4, 5],
            radius_series(10)
                .into_iter()
                .map(SpatialExtent::RadiusKm)
                .collect(),
            ALLOWED_DT_HOURS.to_vec(),
        )
        .unwrap();
        assert_eq!(grid.len(), 300);
        assert_eq!(grid.cells().count(), 300);
        assert!(ScaleGrid::new(vec![6], vec![SpatialExtent::WholeCountry], vec![3]).is_err());
    }

    #[test]
    fn parse_center() {
        let p: GeoPoint = "19.4326,-99.1332".parse().unwrap();
        assert_eq!(p, capital_center("MX").unwrap());
        assert!("95,0".parse::<GeoPoint>().is_err());
    }
}
