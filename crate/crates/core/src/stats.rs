//! Scale relevance `η` and the linear / multiplicative regressions of `μ` on
//! the three (log-scaled) scale values.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::special::{f_sf, t_two_sided_p, SpecialError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("grid has no μ for cell (N index {0}, radius index {1}, Δt index {2})")]
    Incomplete(usize, usize, usize),
    #[error("axis {0} has {1} value(s); at least 2 are needed")]
    SingleValueAxis(Axis, usize),
    #[error("grid axis {0} is empty")]
    EmptyAxis(Axis),
    #[error("design is rank deficient at column `{0}`")]
    RankDeficient(String),
    #[error("need more observations ({rows}) than parameters ({cols}), and at least 2 parameters")]
    TooFewObservations { rows: usize, cols: usize },
    #[error("design rows have inconsistent lengths")]
    Ragged,
    #[error("non-finite value in design or response")]
    NonFinite,
    #[error("scale value {0} cannot be log-transformed")]
    NonPositiveScale(f64),
    #[error(transparent)]
    Special(#[from] SpecialError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Grammatical,
    Spatial,
    Temporal,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Grammatical, Axis::Spatial, Axis::Temporal];

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Grammatical => "grammatical",
            Axis::Spatial => "spatial",
            Axis::Temporal => "temporal",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Axis::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| format!("unknown axis `{s}`"))
    }
}

/// Fitted `μ` for every (grammatical, spatial, temporal) cell of a country.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuGrid {
    pub country: String,
    /// N-gram lengths.
    pub grammatical: Vec<f64>,
    /// Radii in km (whole-country cells carry their regression radius).
    pub spatial: Vec<f64>,
    /// Δt in hours.
    pub temporal: Vec<f64>,
    mu: Vec<Option<f64>>,
}

impl MuGrid {
    pub fn new(
        country: impl Into<String>,
        grammatical: Vec<f64>,
        spatial: Vec<f64>,
        temporal: Vec<f64>,
    ) -> Result<Self, StatsError> {
        for (axis, values) in [
            (Axis::Grammatical, &grammatical),
            (Axis::Spatial, &spatial),
            (Axis::Temporal, &temporal),
        ] {
            if values.is_empty() {
                return Err(StatsError::EmptyAxis(axis));
            }
        }
        let len = grammatical.len() * spatial.len() * temporal.len();
        Ok(MuGrid {
            country: country.into(),
            grammatical,
            spatial,
            temporal,
            mu: vec![None; len],
        })
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.grammatical.len(), self.spatial.len(), self.temporal.len())
    }

    pub fn len(&self) -> usize {
        self.mu.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mu.is_empty()
    }

    pub fn axis_values(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::Grammatical => &self.grammatical,
            Axis::Spatial => &self.spatial,
            Axis::Temporal => &self.temporal,
        }
    }

    fn offset(&self, i: usize, j: usize, s: usize) -> usize {
        let (_, nj, ns) = self.dims();
        (i * nj + j) * ns + s
    }

    pub fn set(&mut self, i: usize, j: usize, s: usize, mu: f64) {
        let o = self.offset(i, j, s);
        self.mu[o] = Some(mu);
    }

    pub fn get(&self, i: usize, j: usize, s: usize) -> Option<f64> {
        self.mu[self.offset(i, j, s)]
    }

    /// Ok when every cell has a value; otherwise the first missing cell.
    pub fn check_complete(&self) -> Result<(), StatsError> {
        let (ni, nj, ns) = self.dims();
        for i in 0..ni {
            for j in 0..nj {
                for s in 0..ns {
                    if self.get(i, j, s).is_none() {
                        return Err(StatsError::Incomplete(i, j, s));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(i, j, s, μ)` in grammatical-major order. Missing cells are skipped.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, usize, f64)> + '_ {
        let (_, nj, ns) = self.dims();
        self.mu.iter().enumerate().filter_map(move |(o, m)| {
            m.map(|m| (o / (nj * ns), (o / ns) % nj, o % ns, m))
        })
    }

    /// Adds `c` to every μ.
    pub fn shifted(&self, c: f64) -> MuGrid {
        let mut g = self.clone();
        g.mu.iter_mut().flatten().for_each(|m| *m += c);
        g
    }

    /// Multiplies every μ by `c`.
    pub fn scaled(&self, c: f64) -> MuGrid {
        let mut g = self.clone();
        g.mu.iter_mut().flatten().for_each(|m| *m *= c);
        g
    }
}

/// Average over the other two axes of the sample standard deviation (n − 1
/// denominator) of μ along `axis`.
pub fn eta(grid: &MuGrid, axis: Axis) -> Result<f64, StatsError> {
    grid.check_complete()?;
    let (ni, nj, ns) = grid.dims();
    let n_sel = grid.axis_values(axis).len();
    if n_sel < 2 {
        return Err(StatsError::SingleValueAxis(axis, n_sel));
    }
    let (outer, inner) = match axis {
        Axis::Grammatical => (nj, ns),
        Axis::Spatial => (ni, ns),
        Axis::Temporal => (ni, nj),
    };
    let mut values = Vec::with_capacity(n_sel);
    let mut total = 0.0;
    for a in 0..outer {
        for b in 0..inner {
            values.clear();
            for v in 0..n_sel {
                let (i, j, s) = match axis {
                    Axis::Grammatical => (v, a, b),
                    Axis::Spatial => (a, v, b),
                    Axis::Temporal => (a, b, v),
                };
                values.push(grid.get(i, j, s).expect("grid checked complete"));
            }
            // Deviations from the first value keep a constant slice exactly 0.
            let pivot = values[0];
            let mean = values.iter().map(|m| m - pivot).sum::<f64>() / n_sel as f64;
            let ss: f64 = values.iter().map(|m| (m - pivot - mean).powi(2)).sum();
            total += (ss / (n_sel - 1) as f64).sqrt();
        }
    }
    Ok(total / (outer * inner) as f64)
}

/// `η` for all three axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelevanceReport {
    pub country: String,
    pub grammatical: f64,
    pub spatial: f64,
    pub temporal: f64,
}

impl RelevanceReport {
    pub fn compute(grid: &MuGrid) -> Result<Self, StatsError> {
        Ok(RelevanceReport {
            country: grid.country.clone(),
            grammatical: eta(grid, Axis::Grammatical)?,
            spatial: eta(grid, Axis::Spatial)?,
            temporal: eta(grid, Axis::Temporal)?,
        })
    }

    pub fn get(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Grammatical => self.grammatical,
            Axis::Spatial => self.spatial,
            Axis::Temporal => self.temporal,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Linear,
    Multiplicative,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Linear => "linear",
            ModelKind::Multiplicative => "multiplicative",
        }
    }
}

impl FromStr for ModelKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linear" => Ok(ModelKind::Linear),
            "multiplicative" => Ok(ModelKind::Multiplicative),
            _ => Err(format!("unknown model `{s}`")),
        }
    }
}

/// How the radius enters the regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpatialPredictor {
    #[default]
    Log10,
    Linear,
}

impl FromStr for SpatialPredictor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "log10" => Ok(SpatialPredictor::Log10),
            "linear" => Ok(SpatialPredictor::Linear),
            _ => Err(format!("unknown spatial predictor `{s}` (expected log10|linear)")),
        }
    }
}

/// Row-major design matrix with named columns and its response.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    pub kind: Option<ModelKind>,
    pub terms: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub response: Vec<f64>,
}

impl Design {
    pub fn new(terms: Vec<String>, rows: Vec<Vec<f64>>, response: Vec<f64>) -> Result<Self, StatsError> {
        if rows.len() != response.len() || rows.iter().any(|r| r.len() != terms.len()) {
            return Err(StatsError::Ragged);
        }
        Ok(Design {
            kind: None,
            terms,
            rows,
            response,
        })
    }

    pub fn n_obs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_params(&self) -> usize {
        self.terms.len()
    }

    /// Copy keeping only the first `k` columns.
    pub fn truncated(&self, k: usize) -> Design {
        Design {
            kind: None,
            terms: self.terms[..k].to_vec(),
            rows: self.rows.iter().map(|r| r[..k].to_vec()).collect(),
            response: self.response.clone(),
        }
    }
}

fn log10_checked(v: f64) -> Result<f64, StatsError> {
    if v > 0.0 && v.is_finite() {
        Ok(v.log10())
    } else {
        Err(StatsError::NonPositiveScale(v))
    }
}

/// Columns `[1, X1, X2, X3]` (plus `X1X2, X1X3, X2X3` for the multiplicative
/// model) with `X1 = log10 N`, `X2 = log10 r` (or `r`), `X3 = log10 Δt`.
pub fn build_design(
    grid: &MuGrid,
    kind: ModelKind,
    spatial: SpatialPredictor,
) -> Result<Design, StatsError> {
    grid.check_complete()?;
    let mut terms: Vec<String> = ["intercept", "log10_N", "radius", "log10_dt"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    if spatial == SpatialPredictor::Log10 {
        terms[2] = "log10_radius".into();
    }
    if kind == ModelKind::Multiplicative {
        let (a, b, c) = (terms[1].clone(), terms[2].clone(), terms[3].clone());
        terms.extend([format!("{a}:{b}"), format!("{a}:{c}"), format!("{b}:{c}")]);
    }
    let mut rows = Vec::with_capacity(grid.len());
    let mut response = Vec::with_capacity(grid.len());
    for (i, j, s, mu) in grid.cells() {
        let x1 = log10_checked(grid.grammatical[i])?;
        let x2 = match spatial {
            SpatialPredictor::Log10 => log10_checked(grid.spatial[j])?,
            SpatialPredictor::Linear => grid.spatial[j],
        };
        let x3 = log10_checked(grid.temporal[s])?;
        let mut row = vec![1.0, x1, x2, x3];
        if kind == ModelKind::Multiplicative {
            row.extend([x1 * x2, x1 * x3, x2 * x3]);
        }
        rows.push(row);
        response.push(mu);
    }
    Ok(Design {
        kind: Some(kind),
        terms,
        rows,
        response,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    pub term: String,
    pub beta: f64,
    pub se: f64,
    pub t: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub kind: Option<ModelKind>,
    pub coefficients: Vec<Coefficient>,
    pub f_statistic: f64,
    pub df1: usize,
    pub df2: usize,
    pub f_p: f64,
    pub r_squared: f64,
    pub rss: f64,
    /// Observations `H`.
    pub n_obs: usize,
    /// Parameters `l`.
    pub n_params: usize,
    pub residuals: Vec<f64>,
}

impl RegressionReport {
    pub fn beta(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.beta).collect()
    }
}

/// Householder QR of a column-major `rows × cols` matrix, in place.
/// Returns the reflector scalars; `R` ends up in the upper triangle and the
/// reflector vectors below it.
struct Qr {
    a: Vec<Vec<f64>>,
    tau: Vec<f64>,
    diag: Vec<f64>,
}

impl Qr {
    fn factor(columns: Vec<Vec<f64>>, names: &[String]) -> Result<Self, StatsError> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut a = columns;
        let mut tau = vec![0.0; cols];
        let mut diag = vec![0.0; cols];
        for k in 0..cols {
            let original_norm = a[k].iter().map(|v| v * v).sum::<f64>().sqrt();
            let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm <= 1e-10 * original_norm.max(f64::MIN_POSITIVE) || norm == 0.0 {
                return Err(StatsError::RankDeficient(names[k].clone()));
            }
            let alpha = if a[k][k] > 0.0 { -norm } else { norm };
            // v = x - alpha e1, stored in place; normalised so v[0] = 1.
            let v0 = a[k][k] - alpha;
            for r in k + 1..rows {
                a[k][r] /= v0;
            }
            tau[k] = -v0 / alpha;
            diag[k] = alpha;
            a[k][k] = 1.0;
            for c in k + 1..cols {
                let (left, right) = a.split_at_mut(c);
                let v = &left[k];
                let col = &mut right[0];
                let dot: f64 = (k..rows).map(|r| v[r] * col[r]).sum();
                let scale = tau[k] * dot;
                for r in k..rows {
                    col[r] -= scale * v[r];
                }
            }
        }
        Ok(Qr { a, tau, diag })
    }

    fn r(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else {
            self.a[j][i]
        }
    }

    /// `Qᵀ y`.
    fn qt_mul(&self, y: &[f64]) -> Vec<f64> {
        let mut out = y.to_vec();
        let rows = out.len();
        for (k, v) in self.a.iter().enumerate() {
            let dot: f64 = (k..rows).map(|r| v[r] * out[r]).sum();
            let scale = self.tau[k] * dot;
            for r in k..rows {
                out[r] -= scale * v[r];
            }
        }
        out
    }

    /// Solves `R x = b` for the leading `cols` entries.
    fn back_substitute(&self, b: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..n {
                acc -= self.r(i, j) * x[j];
            }
            x[i] = acc / self.r(i, i);
        }
        x
    }

    /// Diagonal of `(XᵀX)⁻¹ = R⁻¹ R⁻ᵀ`.
    fn inverse_gram_diagonal(&self) -> Vec<f64> {
        let n = self.diag.len();
        // Columns of R⁻¹ by back substitution on unit vectors.
        let mut rinv = vec![vec![0.0; n]; n];
        for (c, col) in rinv.iter_mut().enumerate() {
            let mut e = vec![0.0; n];
            e[c] = 1.0;
            *col = self.back_substitute(&e);
        }
        (0..n)
            .map(|i| (0..n).map(|c| rinv[c][i].powi(2)).sum())
            .collect()
    }
}

/// Least squares via Householder QR with t tests per coefficient and the
/// overall F test. The first column must be the intercept.
pub fn ols_fit(design: &Design) -> Result<RegressionReport, StatsError> {
    let h = design.n_obs();
    let l = design.n_params();
    if l < 2 || h <= l {
        return Err(StatsError::TooFewObservations { rows: h, cols: l });
    }
    if design.rows.iter().any(|r| r.len() != l) || design.response.len() != h {
        return Err(StatsError::Ragged);
    }
    if design.rows.iter().flatten().chain(&design.response).any(|v| !v.is_finite()) {
        return Err(StatsError::NonFinite);
    }
    let columns: Vec<Vec<f64>> = (0..l)
        .map(|c| design.rows.iter().map(|r| r[c]).collect())
        .collect();
    let qr = Qr::factor(columns, &design.terms)?;
    let qty = qr.qt_mul(&design.response);
    let beta = qr.back_substitute(&qty[..l]);

    let residuals: Vec<f64> = design
        .rows
        .iter()
        .zip(&design.response)
        .map(|(row, y)| y - row.iter().zip(&beta).map(|(x, b)| x * b).sum::<f64>())
        .collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let mean_y = design.response.iter().sum::<f64>() / h as f64;
    let tss: f64 = design.response.iter().map(|y| (y - mean_y).powi(2)).sum();
    let df1 = l - 1;
    let df2 = h - l;
    let sigma2 = rss / df2 as f64;

    let gram_diag = qr.inverse_gram_diagonal();
    let mut coefficients = Vec::with_capacity(l);
    for (c, (&b, g)) in beta.iter().zip(&gram_diag).enumerate() {
        let se = (sigma2 * g).sqrt();
        let t = ratio(b, se);
        let p = p_from_stat(t, |t| t_two_sided_p(t, df2 as f64))?;
        coefficients.push(Coefficient {
            term: design.terms[c].clone(),
            beta: b,
            se,
            t,
            p,
        });
    }
    let f_statistic = ratio((tss - rss) / df1 as f64, sigma2);
    let f_p = p_from_stat(f_statistic, |f| f_sf(f.max(0.0), df1 as f64, df2 as f64))?;
    Ok(RegressionReport {
        kind: design.kind,
        coefficients,
        f_statistic,
        df1,
        df2,
        f_p,
        r_squared: if tss > 0.0 { 1.0 - rss / tss } else { f64::NAN },
        rss,
        n_obs: h,
        n_params: l,
        residuals,
    })
}

fn ratio(num: f64, den: f64) -> f64 {
    if den > 0.0 {
        num / den
    } else if num == 0.0 {
        f64::NAN
    } else {
        num.signum() * f64::INFINITY
    }
}

fn p_from_stat(
    stat: f64,
    tail: impl Fn(f64) -> Result<f64, SpecialError>,
) -> Result<f64, StatsError> {
    if stat.is_nan() {
        Ok(f64::NAN)
    } else if stat.is_infinite() {
        Ok(0.0)
    } else {
        Ok(tail(stat)?)
    }
}

/// Fits one model kind on a complete grid.
pub fn regress(
    grid: &MuGrid,
    kind: ModelKind,
    spatial: SpatialPredictor,
) -> Result<RegressionReport, StatsError> {
    ols_fit(&build_design(grid, kind, spatial)?)
}

/// Smallest p-value printed numerically; anything below prints as
/// `<2.2e-16`.
pub const P_FLOOR: f64 = 2.2e-16;

pub fn format_p(p: f64) -> String {
    if p < P_FLOOR {
        "<2.2e-16".to_owned()
    } else {
        format!("{p}")
    }
}

/// Inverse of [`format_p`]; the floor marker parses as `0`.
pub fn parse_p(s: &str) -> Result<f64, std::num::ParseFloatError> {
    if s.trim() == "<2.2e-16" {
        Ok(0.0)
    } else {
        s.trim().parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_from(
        dims: (usize, usize, usize),
        f: impl Fn(usize, usize, usize) -> f64,
    ) -> MuGrid {
        let (ni, nj, ns) = dims;
        let mut g = MuGrid::new(
            "test",
            (1..=ni).map(|v| v as f64).collect(),
            (0..nj).map(|m| 3.0 * 2f64.powi(m as i32)).collect(),
            [3.0, 6.0, 12.0, 24.0, 48.0, 96.0][..ns].to_vec(),
        )
        .unwrap();
        for i in 0..ni {
            for j in 0..nj {
                for s in 0..ns {
                    g.set(i, j, s, f(i, j, s));
                }
            }
        }
        g
    }

    #[test]
    fn constant_grid_has_zero_eta() {
        let g = grid_from((5, 10, 6), |_, _, _| 1.7);
        for axis in Axis::ALL {
            assert_eq!(eta(&g, axis).unwrap(), 0.0);
        }
    }

    #[test]
    fn two_value_axis() {
        let delta = 0.37;
        let g = grid_from((2, 4, 3), |i, j, s| 0.1 * j as f64 - 0.2 * s as f64 + delta * i as f64);
        let e = eta(&g, Axis::Grammatical).unwrap();
        assert!((e - delta / 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn eta_errors() {
        let g = grid_from((1, 3, 3), |_, _, _| 0.0);
        assert_eq!(
            eta(&g, Axis::Grammatical).unwrap_err(),
            StatsError::SingleValueAxis(Axis::Grammatical, 1)
        );
        let mut g = MuGrid::new("x", vec![1.0, 2.0], vec![3.0], vec![3.0]).unwrap();
        g.set(0, 0, 0, 1.0);
        assert_eq!(eta(&g, Axis::Grammatical).unwrap_err(), StatsError::Incomplete(1, 0, 0));
    }

    #[test]
    fn design_shapes() {
        let g = grid_from((5, 10, 6), |i, j, s| (i + j + s) as f64);
        let lin = build_design(&g, ModelKind::Linear, SpatialPredictor::Log10).unwrap();
        let mul = build_design(&g, ModelKind::Multiplicative, SpatialPredictor::Log10).unwrap();
        assert_eq!(lin.n_obs(), 300);
        assert_eq!(lin.n_params(), 4);
        assert_eq!(mul.n_params(), 7);
        // cell (N=1, r=3, dt=3)
        assert_eq!(lin.rows[0][1], 0.0);
        assert_eq!(lin.rows[0][2], 3f64.log10());
        assert_eq!(mul.truncated(4).rows, lin.rows);
    }

    #[test]
    fn exact_line() {
        let rows: Vec<Vec<f64>> = (0..6).map(|x| vec![1.0, x as f64]).collect();
        let y: Vec<f64> = (0..6).map(|x| 2.0 * x as f64).collect();
        let d = Design::new(vec!["intercept".into(), "x".into()], rows, y).unwrap();
        let rep = ols_fit(&d).unwrap();
        assert!(rep.coefficients[0].beta.abs() < 1e-14);
        assert!((rep.coefficients[1].beta - 2.0).abs() < 1e-14);
        assert!(rep.rss < 1e-25);
    }

    #[test]
    fn rank_deficiency_names_column() {
        let rows: Vec<Vec<f64>> = (0..6).map(|x| vec![1.0, x as f64, 2.0 * x as f64]).collect();
        let y: Vec<f64> = (0..6).map(|x| x as f64).collect();
        let d = Design::new(vec!["intercept".into(), "a".into(), "b".into()], rows, y).unwrap();
        assert_eq!(ols_fit(&d).unwrap_err(), StatsError::RankDeficient("b".into()));
    }

    #[test]
    fn too_few_rows() {
        let d = Design::new(
            vec!["intercept".into(), "x".into()],
            vec![vec![1.0, 0.0], vec![1.0, 1.0]],
            vec![0.0, 1.0],
        )
        .unwrap();
        assert!(matches!(ols_fit(&d), Err(StatsError::TooFewObservations { .. })));
    }

    #[test]
    fn p_formatting() {
        assert_eq!(format_p(1e-20), "<2.2e-16");
        assert_eq!(format_p(0.0), "<2.2e-16");
        assert_eq!(format_p(0.25), "0.25");
        assert_eq!(parse_p("<2.2e-16").unwrap(), 0.0);
        assert_eq!(parse_p("0.25").unwrap(), 0.25);
    }
}
