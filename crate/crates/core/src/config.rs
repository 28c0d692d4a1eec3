//! Run configuration: a TOML key/value file whose keys mirror the CLI flags.
//!
//! ```toml
//! inputs = ["mexico.jsonl"]
//! window = ["2014-01-01", "2015-01-01"]
//! country = "mexico"
//! center = "19.4326,-99.1332"
//! radii_km = [3, 6, 12, 24, 48, 96, 192, 384, 768]
//! whole_country = true
//! dt_hours = [3, 6, 12, 24, 48, 96]
//! ngram = [1, 2, 3, 4, 5]
//! seed = 42
//! output_dir = "out/mexico"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::StudyWindow;
use crate::rankdiv::RankMode;
use crate::scales::{self, GeoPoint, ScaleGrid, SpatialExtent, ALLOWED_DT_HOURS};
use crate::stats::SpatialPredictor;

/// Bumped whenever a config key changes meaning.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    /// Start and end (exclusive), ISO-8601.
    pub window: [String; 2],
    pub country: String,
    /// `lat,lon`; defaults to the shipped capital center for `country`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<String>,
    #[serde(default = "default_radii")]
    pub radii_km: Vec<f64>,
    #[serde(default = "default_true")]
    pub whole_country: bool,
    /// Numeric radius standing in for the whole-country cell in regressions.
    /// Defaults to the smallest `3·2^m` km circle holding every record.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub whole_country_radius_km: Option<f64>,
    #[serde(default = "default_dt")]
    pub dt_hours: Vec<u32>,
    #[serde(default = "default_ngram")]
    pub ngram: Vec<usize>,
    /// Defaults to the population of the smallest circle.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub rank_mode: RankMode,
    #[serde(default)]
    pub spatial_predictor: SpatialPredictor,
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

fn default_radii() -> Vec<f64> {
    scales::radius_series(9)
}

fn default_true() -> bool {
    true
}

fn default_dt() -> Vec<u32> {
    ALLOWED_DT_HOURS.to_vec()
}

fn default_ngram() -> Vec<usize> {
    vec![1, 2, 3, 4, 5]
}

/// Parses `3x2^m` (optionally `3x2^m:9` for the count) into radii.
pub fn parse_radius_series(spec: &str, default_count: usize) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("radius series `{spec}`: expected `<base>x2^m[:count]`"));
    let (body, count) = match spec.split_once(':') {
        Some((b, c)) => (b, c.trim().parse::<usize>().map_err(|_| bad())?),
        None => (spec, default_count),
    };
    let base = body
        .trim()
        .strip_suffix("x2^m")
        .ok_or_else(bad)?
        .parse::<f64>()
        .map_err(|_| bad())?;
    if !(base > 0.0 && base.is_finite()) || count == 0 || count > 31 {
        return Err(bad());
    }
    Ok((0..count).map(|m| base * f64::from(1u32 << m)).collect())
}

impl RunConfig {
    /// A config with every optional key at its default.
    pub fn new(inputs: Vec<PathBuf>, window: [String; 2], country: &str, output_dir: PathBuf) -> Self {
        RunConfig {
            inputs,
            window,
            country: country.to_owned(),
            center: None,
            radii_km: default_radii(),
            whole_country: true,
            whole_country_radius_km: None,
            dt_hours: default_dt(),
            ngram: default_ngram(),
            sample_size: None,
            seed: 0,
            rank_mode: RankMode::default(),
            spatial_predictor: SpatialPredictor::default(),
            output_dir,
            threads: None,
        }
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    pub fn study_window(&self) -> Result<StudyWindow> {
        Ok(StudyWindow::from_iso(&self.window[0], &self.window[1])?)
    }

    pub fn center_point(&self) -> Result<GeoPoint> {
        match &self.center {
            Some(c) => c
                .parse()
                .map_err(|e| Error::Config(format!("center: {e}"))),
            None => scales::capital_center(&self.country).ok_or_else(|| {
                Error::Config(format!(
                    "no default center for country `{}`; pass --center",
                    self.country
                ))
            }),
        }
    }

    pub fn spatial_extents(&self) -> Vec<SpatialExtent> {
        let mut radii = self.radii_km.clone();
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut out: Vec<SpatialExtent> = radii.into_iter().map(SpatialExtent::RadiusKm).collect();
        if self.whole_country {
            out.push(SpatialExtent::WholeCountry);
        }
        out
    }

    pub fn grid(&self) -> Result<ScaleGrid> {
        let mut ngram = self.ngram.clone();
        ngram.sort_unstable();
        ngram.dedup();
        let mut dt = self.dt_hours.clone();
        dt.sort_unstable();
        dt.dedup();
        Ok(ScaleGrid::new(ngram, self.spatial_extents(), dt)?)
    }

    /// Checks everything that does not need the data.
    pub fn validate(&self) -> Result<()> {
        if self.inputs.is_empty() {
            return Err(Error::Config("no input files".into()));
        }
        if self.country.is_empty()
            || !self
                .country
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
        {
            return Err(Error::Config(format!(
                "country label `{}` must be non-empty ASCII alphanumerics, `-` or `_`",
                self.country
            )));
        }
        let window = self.study_window()?;
        self.center_point()?;
        let grid = self.grid()?;
        for &dt in &grid.temporal {
            scales::TemporalScale::new(dt, window.start(), window.span_seconds())?;
        }
        if let Some(r) = self.whole_country_radius_km {
            if !(r > 0.0 && r.is_finite()) {
                return Err(Error::Config(format!("whole_country_radius_km {r} must be positive")));
            }
        }
        if self.sample_size == Some(0) {
            return Err(Error::Config("sample size must be positive".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be positive".into()));
        }
        Ok(())
    }
}
