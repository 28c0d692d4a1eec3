//! CSV artifacts exchanged between stages, with readers for the ones a later
//! stage consumes.
//!
//! | artifact | columns |
//! |---|---|
//! | curve `<country>_N<n>_r<radius>_dt<hours>.csv` | `k,d` (preceded by `# T=` and `# rank_mode=` lines) |
//! | trajectory | `bin,rank` (empty rank where absent) |
//! | fits `fits_<country>.csv` | `N,radius_km,dt_hours,mu,sigma,rmse,n_points,flags` |
//! | `relevance.csv` | `country,axis,eta` |
//! | `regression.csv` | `country,model,term,beta,se,t,p`; the `F` row carries `F,df1,df2,p` in the last four columns |
//! | `tokens_<class>_<country>.csv` | `rank,surface,count` |

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fit::SigmoidFit;
use crate::rankdiv::{RankDiversityCurve, RankMode, RankTrajectory};
use crate::scales::SpatialExtent;
use crate::stats::{format_p, parse_p, MuGrid, RegressionReport, RelevanceReport};
use crate::tokenstats::TokenLeaderboard;

#[derive(Debug, Error, PartialEq)]
pub enum ReportError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("missing `# T=` header")]
    MissingBins,
    #[error("csv: {0}")]
    Csv(String),
}

fn malformed(line: usize, msg: impl Into<String>) -> ReportError {
    ReportError::Malformed {
        line,
        msg: msg.into(),
    }
}

impl From<csv::Error> for ReportError {
    fn from(e: csv::Error) -> Self {
        ReportError::Csv(e.to_string())
    }
}

/// `3` for 3 km, `all` for the whole country.
pub fn extent_label(extent: SpatialExtent) -> String {
    match extent {
        SpatialExtent::RadiusKm(r) => format!("{r}"),
        SpatialExtent::WholeCountry => "all".to_owned(),
    }
}

pub fn parse_extent_label(s: &str) -> Option<SpatialExtent> {
    if s == "all" {
        return Some(SpatialExtent::WholeCountry);
    }
    let r: f64 = s.parse().ok()?;
    (r > 0.0 && r.is_finite()).then_some(SpatialExtent::RadiusKm(r))
}

/// Identity of one curve file.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveName {
    pub country: String,
    pub n: usize,
    pub extent: SpatialExtent,
    pub dt_hours: u32,
}

impl CurveName {
    pub fn file_name(&self) -> String {
        format!(
            "{}_N{}_r{}_dt{}.csv",
            self.country,
            self.n,
            extent_label(self.extent),
            self.dt_hours
        )
    }

    /// Inverse of [`CurveName::file_name`]; accepts a bare file name.
    pub fn parse(file_name: &str) -> Option<CurveName> {
        let stem = file_name.strip_suffix(".csv")?;
        let mut parts = stem.rsplitn(4, '_');
        let dt = parts.next()?.strip_prefix("dt")?.parse().ok()?;
        let extent = parse_extent_label(parts.next()?.strip_prefix('r')?)?;
        let n: usize = parts.next()?.strip_prefix('N')?.parse().ok()?;
        let country = parts.next()?;
        if country.is_empty() || !(1..=5).contains(&n) {
            return None;
        }
        Some(CurveName {
            country: country.to_owned(),
            n,
            extent,
            dt_hours: dt,
        })
    }
}

pub fn curve_csv(curve: &RankDiversityCurve) -> String {
    let mut out = String::with_capacity(16 * curve.k_max() + 64);
    let _ = writeln!(out, "# T={}", curve.bins());
    let _ = writeln!(out, "# rank_mode={}", curve.mode().as_str());
    out.push_str("k,d\n");
    for (k, d) in curve.points() {
        let _ = writeln!(out, "{k},{d}");
    }
    out
}

/// Parses a curve CSV. `d·T` must be (within 1e-9) an integer in `1..=T` and
/// `k` must run `1, 2, 3, ...`.
pub fn parse_curve_csv(text: &str) -> Result<RankDiversityCurve, ReportError> {
    let mut bins: Option<u32> = None;
    let mut mode = RankMode::Intersect;
    let mut occupants = Vec::new();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(meta) = line.strip_prefix('#') {
            if let Some((key, value)) = meta.trim().split_once('=') {
                match key.trim() {
                    "T" => {
                        let t: u32 = value
                            .trim()
                            .parse()
                            .map_err(|_| malformed(line_no, "bad T"))?;
                        if t == 0 {
                            return Err(malformed(line_no, "T must be positive"));
                        }
                        bins = Some(t);
                    }
                    "rank_mode" => {
                        mode = value.trim().parse().map_err(|e: String| malformed(line_no, e))?;
                    }
                    _ => {}
                }
            }
            continue;
        }
        if !header_seen {
            if line != "k,d" {
                return Err(malformed(line_no, "expected header `k,d`"));
            }
            header_seen = true;
            continue;
        }
        let t = bins.ok_or(ReportError::MissingBins)?;
        let (k, d) = line
            .split_once(',')
            .ok_or_else(|| malformed(line_no, "expected `k,d`"))?;
        let k: usize = k.trim().parse().map_err(|_| malformed(line_no, "bad k"))?;
        let d: f64 = d.trim().parse().map_err(|_| malformed(line_no, "bad d"))?;
        if k != occupants.len() + 1 {
            return Err(malformed(line_no, format!("expected k = {}", occupants.len() + 1)));
        }
        let x = d * f64::from(t);
        let rounded = x.round();
        if !x.is_finite() || (x - rounded).abs() > 1e-9 || rounded < 1.0 || rounded > f64::from(t) {
            return Err(malformed(line_no, "d·T is not an integer in 1..=T"));
        }
        occupants.push(rounded as u32);
    }
    let t = bins.ok_or(ReportError::MissingBins)?;
    if !header_seen {
        return Err(malformed(0, "missing header"));
    }
    RankDiversityCurve::from_occupants(t, mode, occupants).ok_or(ReportError::MissingBins)
}

pub fn trajectory_csv<S>(trajectory: &RankTrajectory<S>) -> String {
    let mut out = String::from("bin,rank\n");
    for (bin, rank) in &trajectory.ranks {
        match rank {
            Some(r) => {
                let _ = writeln!(out, "{bin},{r}");
            }
            None => {
                let _ = writeln!(out, "{bin},");
            }
        }
    }
    out
}

/// Parses `bin,rank` rows.
pub fn parse_trajectory_csv(text: &str) -> Result<Vec<(u32, Option<u32>)>, ReportError> {
    let mut out = Vec::new();
    for (idx, line) in text.lines().enumerate().skip(1) {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (bin, rank) = line
            .split_once(',')
            .ok_or_else(|| malformed(idx + 1, "expected `bin,rank`"))?;
        let bin = bin.parse().map_err(|_| malformed(idx + 1, "bad bin"))?;
        let rank = if rank.is_empty() {
            None
        } else {
            Some(rank.parse().map_err(|_| malformed(idx + 1, "bad rank"))?)
        };
        out.push((bin, rank));
    }
    Ok(out)
}

/// One row of a fits CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub radius_km: f64,
    pub dt_hours: u32,
    pub mu: f64,
    pub sigma: f64,
    pub rmse: f64,
    pub n_points: usize,
    /// `ok` or `|`-joined markers: `max_iter`, `whole_country`.
    pub flags: String,
}

impl FitRow {
    pub fn new(n: usize, extent: SpatialExtent, regression_radius: f64, dt_hours: u32, fit: &SigmoidFit) -> Self {
        let mut flags = Vec::new();
        if !fit.converged {
            flags.push("max_iter");
        }
        let radius_km = match extent {
            SpatialExtent::RadiusKm(r) => r,
            SpatialExtent::WholeCountry => {
                flags.push("whole_country");
                regression_radius
            }
        };
        FitRow {
            n,
            radius_km,
            dt_hours,
            mu: fit.params.mu,
            sigma: fit.params.sigma,
            rmse: fit.params.rmse,
            n_points: fit.params.n_points,
            flags: if flags.is_empty() {
                "ok".to_owned()
            } else {
                flags.join("|")
            },
        }
    }

    pub fn is_whole_country(&self) -> bool {
        self.flags.split('|').any(|f| f == "whole_country")
    }
}

pub fn fits_csv(rows: &[FitRow]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["N", "radius_km", "dt_hours", "mu", "sigma", "rmse", "n_points", "flags"])?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn parse_fits_csv(text: &str) -> Result<Vec<FitRow>, ReportError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for (i, rec) in rdr.deserialize::<FitRow>().enumerate() {
        let row = rec?;
        if !(row.mu.is_finite() && row.radius_km.is_finite() && row.radius_km > 0.0) {
            return Err(malformed(i + 2, "non-finite mu or radius"));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Rebuilds a grid from fit rows; axes are the sorted distinct values.
pub fn mu_grid_from_fits(country: &str, rows: &[FitRow]) -> Result<MuGrid, ReportError> {
    fn axis(values: impl Iterator<Item = f64>) -> Vec<f64> {
        let mut v: Vec<f64> = values.collect();
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    }
    let ns = axis(rows.iter().map(|r| r.n as f64));
    let rs = axis(rows.iter().map(|r| r.radius_km));
    let ts = axis(rows.iter().map(|r| f64::from(r.dt_hours)));
    let mut grid = MuGrid::new(country, ns.clone(), rs.clone(), ts.clone())
        .map_err(|e| malformed(0, e.to_string()))?;
    for (idx, r) in rows.iter().enumerate() {
        let i = ns.iter().position(|&v| v == r.n as f64).expect("value on axis");
        let j = rs.iter().position(|&v| v == r.radius_km).expect("value on axis");
        let s = ts
            .iter()
            .position(|&v| v == f64::from(r.dt_hours))
            .expect("value on axis");
        if grid.get(i, j, s).is_some() {
            return Err(malformed(idx + 2, "duplicate grid cell"));
        }
        grid.set(i, j, s, r.mu);
    }
    Ok(grid)
}

pub fn relevance_csv(reports: &[RelevanceReport]) -> String {
    let mut out = String::from("country,axis,eta\n");
    for r in reports {
        for axis in crate::stats::Axis::ALL {
            let _ = writeln!(out, "{},{},{}", r.country, axis, r.get(axis));
        }
    }
    out
}

/// Parses `relevance.csv` into one report per country (in file order).
pub fn parse_relevance_csv(text: &str) -> Result<Vec<RelevanceReport>, ReportError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out: Vec<RelevanceReport> = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let (Some(country), Some(axis), Some(eta)) = (rec.get(0), rec.get(1), rec.get(2)) else {
            return Err(malformed(i + 2, "expected 3 columns"));
        };
        let axis: crate::stats::Axis = axis.parse().map_err(|e: String| malformed(i + 2, e))?;
        let eta: f64 = eta.parse().map_err(|_| malformed(i + 2, "bad eta"))?;
        let idx = match out.iter().position(|r| r.country == country) {
            Some(idx) => idx,
            None => {
                out.push(RelevanceReport {
                    country: country.to_owned(),
                    grammatical: f64::NAN,
                    spatial: f64::NAN,
                    temporal: f64::NAN,
                });
                out.len() - 1
            }
        };
        let r = &mut out[idx];
        match axis {
            crate::stats::Axis::Grammatical => r.grammatical = eta,
            crate::stats::Axis::Spatial => r.spatial = eta,
            crate::stats::Axis::Temporal => r.temporal = eta,
        }
    }
    Ok(out)
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

pub fn regression_csv(rows: &[(String, RegressionReport)]) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["country", "model", "term", "beta", "se", "t", "p"])?;
    for (country, rep) in rows {
        let model = rep.kind.map_or("custom", |k| k.as_str());
        for c in &rep.coefficients {
            w.write_record([
                country.as_str(),
                model,
                &c.term,
                &fmt_num(c.beta),
                &fmt_num(c.se),
                &fmt_num(c.t),
                &format_p(c.p),
            ])?;
        }
        w.write_record([
            country.as_str(),
            model,
            "F",
            &fmt_num(rep.f_statistic),
            &rep.df1.to_string(),
            &rep.df2.to_string(),
            &format_p(rep.f_p),
        ])?;
        w.write_record([country.as_str(), model, "R2", &fmt_num(rep.r_squared), "", "", ""])?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// `(country, model, F, df1, df2, p)` rows of a regression CSV.
pub fn parse_regression_f_rows(
    text: &str,
) -> Result<Vec<(String, String, f64, usize, usize, f64)>, ReportError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        if rec.get(2) != Some("F") {
            continue;
        }
        let bad = || malformed(i + 2, "bad F row");
        let f = rec.get(3).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let d1 = rec.get(4).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let d2 = rec.get(5).ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let p = parse_p(rec.get(6).ok_or_else(bad)?).map_err(|_| bad())?;
        out.push((
            rec.get(0).unwrap_or_default().to_owned(),
            rec.get(1).unwrap_or_default().to_owned(),
            f,
            d1,
            d2,
            p,
        ));
    }
    Ok(out)
}

pub fn leaderboard_csv(board: &TokenLeaderboard) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rank", "surface", "count"])?;
    for (i, (surface, count)) in board.entries.iter().enumerate() {
        w.write_record([(i + 1).to_string(), surface.clone(), count.to_string()])?;
    }
    let bytes = w.into_inner().map_err(|e| ReportError::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn parse_leaderboard_csv(text: &str) -> Result<Vec<(usize, String, u64)>, ReportError> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<(usize, String, u64)>().enumerate() {
        let row = rec?;
        if row.0 != i + 1 {
            return Err(malformed(i + 2, "ranks must run 1, 2, 3, ..."));
        }
        out.push(row);
    }
    Ok(out)
}

/// Writes `contents` to `path` through a sibling temporary file and a rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, "path has no file name"))?;
    let mut tmp = PathBuf::from(dir);
    tmp.push(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).inspect_err(|_| {
        let _ = fs::remove_file(&tmp);
    })
}
