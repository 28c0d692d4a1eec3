//! SVG 1.1 figures built from the CSV artifacts.
//!
//! Output depends only on the artifacts passed in: numbers are printed with
//! fixed precision and nothing is read from the environment.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::rankdiv::RankDiversityCurve;
use crate::report::{self, FitRow};
use crate::stats::{Axis, RelevanceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    DiversityCurves,
    MuVsTime,
    MuVsRadius,
    EtaBars,
    Trajectories,
    TokenDiversity,
}

impl PlotKind {
    pub const ALL: [PlotKind; 6] = [
        PlotKind::DiversityCurves,
        PlotKind::MuVsTime,
        PlotKind::MuVsRadius,
        PlotKind::EtaBars,
        PlotKind::Trajectories,
        PlotKind::TokenDiversity,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            PlotKind::DiversityCurves => "diversity-curves",
            PlotKind::MuVsTime => "mu-vs-time",
            PlotKind::MuVsRadius => "mu-vs-radius",
            PlotKind::EtaBars => "eta-bars",
            PlotKind::Trajectories => "trajectories",
            PlotKind::TokenDiversity => "token-diversity",
        }
    }

    fn expects(self) -> ArtifactKind {
        match self {
            PlotKind::DiversityCurves | PlotKind::TokenDiversity => ArtifactKind::Curve,
            PlotKind::MuVsTime | PlotKind::MuVsRadius => ArtifactKind::Fits,
            PlotKind::EtaBars => ArtifactKind::Relevance,
            PlotKind::Trajectories => ArtifactKind::Trajectory,
        }
    }
}

impl FromStr for PlotKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PlotKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown plot kind `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArtifactKind {
    Curve,
    Fits,
    Relevance,
    Trajectory,
}

impl ArtifactKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ArtifactKind::Curve => "rank-diversity curve",
            ArtifactKind::Fits => "fits table",
            ArtifactKind::Relevance => "relevance table",
            ArtifactKind::Trajectory => "rank trajectory",
        }
    }
}

/// A parsed input, with the label used for it in legends and panel titles.
#[derive(Debug, Clone, PartialEq)]
pub enum Artifact {
    Curve {
        label: String,
        curve: RankDiversityCurve,
    },
    Fits {
        country: String,
        rows: Vec<FitRow>,
    },
    Relevance(Vec<RelevanceReport>),
    Trajectory {
        label: String,
        ranks: Vec<(u32, Option<u32>)>,
    },
}

impl Artifact {
    pub fn kind(&self) -> ArtifactKind {
        match self {
            Artifact::Curve { .. } => ArtifactKind::Curve,
            Artifact::Fits { .. } => ArtifactKind::Fits,
            Artifact::Relevance(_) => ArtifactKind::Relevance,
            Artifact::Trajectory { .. } => ArtifactKind::Trajectory,
        }
    }

    /// Recognizes an artifact by its header line. `label` names the series
    /// (for fits, the country).
    pub fn parse(label: &str, text: &str) -> Result<Artifact, PlotError> {
        let header = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .unwrap_or_default();
        let bad = |e: report::ReportError| PlotError::Artifact(format!("{label}: {e}"));
        match header {
            "k,d" => Ok(Artifact::Curve {
                label: label.to_owned(),
                curve: report::parse_curve_csv(text).map_err(bad)?,
            }),
            "bin,rank" => Ok(Artifact::Trajectory {
                label: label.to_owned(),
                ranks: report::parse_trajectory_csv(text).map_err(bad)?,
            }),
            "country,axis,eta" => Ok(Artifact::Relevance(
                report::parse_relevance_csv(text).map_err(bad)?,
            )),
            h if h.starts_with("N,radius_km,dt_hours,mu") => Ok(Artifact::Fits {
                country: label.to_owned(),
                rows: report::parse_fits_csv(text).map_err(bad)?,
            }),
            _ => Err(PlotError::Artifact(format!("{label}: unrecognized CSV header `{header}`"))),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PlotError {
    #[error("{kind} plots need a {expected}, got a {got}")]
    Mismatch {
        kind: &'static str,
        expected: &'static str,
        got: &'static str,
    },
    #[error("nothing to plot")]
    Empty,
    #[error("{0}")]
    Artifact(String),
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

const PANEL_W: f64 = 260.0;
const PANEL_H: f64 = 200.0;
const MARGIN_L: f64 = 60.0;
const MARGIN_T: f64 = 40.0;
const GAP: f64 = 70.0;
const LEGEND_W: f64 = 190.0;

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

#[derive(Clone, Copy)]
struct Range1 {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Range1 {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Range1 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|v| v.is_finite() && (!log || *v > 0.0)) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = if log { (1.0, 10.0) } else { (0.0, 1.0) };
        }
        if log {
            lo = 10f64.powf(lo.log10().floor());
            hi = 10f64.powf(hi.log10().ceil());
            if hi <= lo {
                hi = lo * 10.0;
            }
        } else if hi <= lo {
            let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
            lo -= pad;
            hi += pad;
        }
        Range1 { lo, hi, log }
    }

    fn unit(&self, v: f64) -> f64 {
        if self.log {
            (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10())
        } else {
            (v - self.lo) / (self.hi - self.lo)
        }
    }

    fn ticks(&self) -> Vec<f64> {
        if self.log {
            let a = self.lo.log10().round() as i32;
            let b = self.hi.log10().round() as i32;
            (a..=b).map(|e| 10f64.powi(e)).collect()
        } else {
            (0..=4)
                .map(|i| self.lo + (self.hi - self.lo) * f64::from(i) / 4.0)
                .collect()
        }
    }
}

fn tick_label(v: f64, log: bool) -> String {
    if log {
        format!("1e{}", v.log10().round() as i32)
    } else if v.abs() >= 100.0 || v == v.round() {
        format!("{v:.0}")
    } else {
        format!("{v:.2}")
    }
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

struct Panel<'a> {
    title: String,
    x_label: &'a str,
    y_label: &'a str,
    x: Range1,
    y: Range1,
    series: Vec<Series>,
}

struct Svg {
    buf: String,
}

impl Svg {
    fn new(width: f64, height: f64, title: &str) -> Svg {
        let mut buf = String::new();
        buf.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
        let _ = writeln!(
            buf,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\" font-family=\"sans-serif\" font-size=\"11\">"
        );
        let _ = writeln!(buf, "<title>{}</title>", esc(title));
        let _ = writeln!(
            buf,
            "<rect x=\"0\" y=\"0\" width=\"{width:.0}\" height=\"{height:.0}\" fill=\"white\"/>"
        );
        Svg { buf }
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }

    fn text(&mut self, x: f64, y: f64, class: &str, anchor: &str, extra: &str, s: &str) {
        let _ = writeln!(
            self.buf,
            "<text class=\"{class}\" x=\"{x:.2}\" y=\"{y:.2}\" text-anchor=\"{anchor}\"{extra}>{}</text>",
            esc(s)
        );
    }

    fn panel(&mut self, x0: f64, y0: f64, p: &Panel<'_>, colors: &dyn Fn(&str) -> &'static str) {
        let _ = writeln!(
            self.buf,
            "<g class=\"panel\" data-title=\"{}\" transform=\"translate({x0:.2},{y0:.2})\">",
            esc(&p.title)
        );
        let _ = writeln!(
            self.buf,
            "<rect x=\"0\" y=\"0\" width=\"{PANEL_W:.0}\" height=\"{PANEL_H:.0}\" fill=\"none\" stroke=\"black\"/>"
        );
        self.text(PANEL_W / 2.0, -8.0, "panel-title", "middle", "", &p.title);
        let _ = writeln!(
            self.buf,
            "<g class=\"x-axis\" data-scale=\"{}\">",
            if p.x.log { "log" } else { "linear" }
        );
        for t in p.x.ticks() {
            let px = p.x.unit(t) * PANEL_W;
            let _ = writeln!(
                self.buf,
                "<line x1=\"{px:.2}\" y1=\"{PANEL_H:.0}\" x2=\"{px:.2}\" y2=\"{:.0}\" stroke=\"black\"/>",
                PANEL_H + 4.0
            );
            self.text(px, PANEL_H + 16.0, "tick", "middle", "", &tick_label(t, p.x.log));
        }
        self.text(PANEL_W / 2.0, PANEL_H + 34.0, "axis-label", "middle", "", p.x_label);
        self.buf.push_str("</g>\n");
        let _ = writeln!(
            self.buf,
            "<g class=\"y-axis\" data-scale=\"{}\">",
            if p.y.log { "log" } else { "linear" }
        );
        for t in p.y.ticks() {
            let py = PANEL_H - p.y.unit(t) * PANEL_H;
            let _ = writeln!(
                self.buf,
                "<line x1=\"-4\" y1=\"{py:.2}\" x2=\"0\" y2=\"{py:.2}\" stroke=\"black\"/>"
            );
            self.text(-6.0, py + 4.0, "tick", "end", "", &tick_label(t, p.y.log));
        }
        self.text(
            -44.0,
            PANEL_H / 2.0,
            "axis-label",
            "middle",
            &format!(" transform=\"rotate(-90 -44 {:.2})\"", PANEL_H / 2.0),
            p.y_label,
        );
        self.buf.push_str("</g>\n");
        for s in &p.series {
            let pts: Vec<String> = s
                .points
                .iter()
                .filter(|(x, y)| (!p.x.log || *x > 0.0) && (!p.y.log || *y > 0.0))
                .map(|&(x, y)| {
                    format!("{:.2},{:.2}", p.x.unit(x) * PANEL_W, PANEL_H - p.y.unit(y) * PANEL_H)
                })
                .collect();
            let _ = writeln!(
                self.buf,
                "<polyline class=\"series\" data-label=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>",
                esc(&s.label),
                colors(&s.label),
                pts.join(" ")
            );
        }
        self.buf.push_str("</g>\n");
    }

    fn legend(&mut self, x0: f64, y0: f64, labels: &[String], colors: &dyn Fn(&str) -> &'static str) {
        let _ = writeln!(
            self.buf,
            "<g class=\"legend\" transform=\"translate({x0:.2},{y0:.2})\">"
        );
        for (i, label) in labels.iter().enumerate() {
            let y = i as f64 * 16.0;
            let _ = writeln!(
                self.buf,
                "<line x1=\"0\" y1=\"{y:.2}\" x2=\"18\" y2=\"{y:.2}\" stroke=\"{}\" stroke-width=\"2\"/>",
                colors(label)
            );
            self.text(24.0, y + 4.0, "legend-entry", "start", "", label);
        }
        self.buf.push_str("</g>\n");
    }
}

fn color_map(labels: &[String]) -> impl Fn(&str) -> &'static str + '_ {
    move |label: &str| {
        let i = labels.iter().position(|l| l == label).unwrap_or(0);
        PALETTE[i % PALETTE.len()]
    }
}

/// One row of panels plus a legend on the right.
fn panel_grid(title: &str, rows: Vec<Vec<Panel<'_>>>, legend: Vec<String>) -> String {
    let n_rows = rows.len().max(1);
    let n_cols = rows.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let width = MARGIN_L + n_cols as f64 * (PANEL_W + GAP) + LEGEND_W;
    let height = MARGIN_T + n_rows as f64 * (PANEL_H + GAP) + 10.0;
    let mut svg = Svg::new(width, height, title);
    svg.text(width / 2.0, 18.0, "figure-title", "middle", " font-size=\"14\"", title);
    let colors = color_map(&legend);
    for (r, row) in rows.iter().enumerate() {
        for (c, panel) in row.iter().enumerate() {
            let x0 = MARGIN_L + c as f64 * (PANEL_W + GAP);
            let y0 = MARGIN_T + r as f64 * (PANEL_H + GAP);
            svg.panel(x0, y0, panel, &colors);
        }
    }
    svg.legend(MARGIN_L + n_cols as f64 * (PANEL_W + GAP), MARGIN_T + 10.0, &legend, &colors);
    svg.finish()
}

fn check_kind(kind: PlotKind, artifacts: &[Artifact]) -> Result<(), PlotError> {
    if artifacts.is_empty() {
        return Err(PlotError::Empty);
    }
    let expected = kind.expects();
    if let Some(a) = artifacts.iter().find(|a| a.kind() != expected) {
        return Err(PlotError::Mismatch {
            kind: kind.as_str(),
            expected: expected.as_str(),
            got: a.kind().as_str(),
        });
    }
    Ok(())
}

fn unique_sorted(values: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn fmt_value(v: f64) -> String {
    format!("{v}")
}

fn curves_figure(title: &str, artifacts: &[Artifact]) -> String {
    let series: Vec<Series> = artifacts
        .iter()
        .filter_map(|a| match a {
            Artifact::Curve { label, curve } => Some(Series {
                label: label.clone(),
                points: curve.points().map(|(k, d)| (k as f64, d)).collect(),
            }),
            _ => None,
        })
        .collect();
    let x = Range1::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), true);
    let legend = series.iter().map(|s| s.label.clone()).collect();
    let panel = Panel {
        title: title.to_owned(),
        x_label: "rank k",
        y_label: "d(k)",
        x,
        y: Range1 {
            lo: 0.0,
            hi: 1.0,
            log: false,
        },
        series,
    };
    panel_grid(title, vec![vec![panel]], legend)
}

/// Panels with rows = countries and columns = N. Inside a panel one line per
/// value of `group` runs along `along`.
fn mu_figure(title: &str, artifacts: &[Artifact], along: Axis) -> String {
    let fits: Vec<(&str, &[FitRow])> = artifacts
        .iter()
        .filter_map(|a| match a {
            Artifact::Fits { country, rows } => Some((country.as_str(), rows.as_slice())),
            _ => None,
        })
        .collect();
    let all = || fits.iter().flat_map(|(_, rows)| rows.iter());
    let ns = unique_sorted(all().map(|r| r.n as f64));
    let (x_of, group_of, x_label, group_name): (fn(&FitRow) -> f64, fn(&FitRow) -> f64, &str, &str) =
        match along {
            Axis::Temporal => (|r| f64::from(r.dt_hours), |r| r.radius_km, "Δt (hours)", "r"),
            _ => (|r| r.radius_km, |r| f64::from(r.dt_hours), "radius (km)", "Δt"),
        };
    let groups = unique_sorted(all().map(group_of));
    let x = Range1::fit(all().map(x_of), true);
    let y = Range1::fit(all().map(|r| r.mu), false);
    let label = |g: f64| {
        if along == Axis::Temporal {
            format!("{group_name} = {} km", fmt_value(g))
        } else {
            format!("{group_name} = {} h", fmt_value(g))
        }
    };
    let legend: Vec<String> = groups.iter().map(|&g| label(g)).collect();
    let rows = fits
        .iter()
        .map(|(country, rows)| {
            ns.iter()
                .map(|&n| {
                    let series = groups
                        .iter()
                        .map(|&g| {
                            let mut points: Vec<(f64, f64)> = rows
                                .iter()
                                .filter(|r| r.n as f64 == n && group_of(r) == g)
                                .map(|r| (x_of(r), r.mu))
                                .collect();
                            points.sort_by(|a, b| a.0.total_cmp(&b.0));
                            Series {
                                label: label(g),
                                points,
                            }
                        })
                        .filter(|s| !s.points.is_empty())
                        .collect();
                    Panel {
                        title: format!("{country}, N = {n}"),
                        x_label,
                        y_label: "μ",
                        x,
                        y,
                        series,
                    }
                })
                .collect()
        })
        .collect();
    panel_grid(title, rows, legend)
}

fn eta_figure(title: &str, reports: &[RelevanceReport]) -> String {
    const BAR_W: f64 = 28.0;
    const GROUP_GAP: f64 = 30.0;
    const PLOT_H: f64 = 220.0;
    let max = reports
        .iter()
        .flat_map(|r| Axis::ALL.map(|a| r.get(a)))
        .filter(|v| v.is_finite())
        .fold(0.0f64, f64::max);
    let scale = if max > 0.0 { PLOT_H / max } else { 0.0 };
    let group_w = 3.0 * BAR_W + GROUP_GAP;
    let width = MARGIN_L + reports.len() as f64 * group_w + LEGEND_W;
    let height = MARGIN_T + PLOT_H + 60.0;
    let mut svg = Svg::new(width, height, title);
    svg.text(width / 2.0, 18.0, "figure-title", "middle", " font-size=\"14\"", title);
    let legend: Vec<String> = Axis::ALL.iter().map(|a| a.as_str().to_owned()).collect();
    let colors = color_map(&legend);
    let base = MARGIN_T + PLOT_H;
    let _ = writeln!(
        svg.buf,
        "<line x1=\"{MARGIN_L:.2}\" y1=\"{base:.2}\" x2=\"{:.2}\" y2=\"{base:.2}\" stroke=\"black\"/>",
        MARGIN_L + reports.len() as f64 * group_w
    );
    svg.text(
        MARGIN_L - 40.0,
        MARGIN_T + PLOT_H / 2.0,
        "axis-label",
        "middle",
        &format!(" transform=\"rotate(-90 {:.2} {:.2})\"", MARGIN_L - 40.0, MARGIN_T + PLOT_H / 2.0),
        "η",
    );
    for (g, rep) in reports.iter().enumerate() {
        let gx = MARGIN_L + GROUP_GAP / 2.0 + g as f64 * group_w;
        let _ = writeln!(svg.buf, "<g class=\"bar-group\" data-country=\"{}\">", esc(&rep.country));
        for (b, axis) in Axis::ALL.iter().enumerate() {
            let v = rep.get(*axis);
            let h = if v.is_finite() { v * scale } else { 0.0 };
            let _ = writeln!(
                svg.buf,
                "<rect class=\"bar\" data-axis=\"{}\" data-value=\"{}\" x=\"{:.2}\" y=\"{:.6}\" width=\"{BAR_W:.0}\" height=\"{h:.6}\" fill=\"{}\"/>",
                axis.as_str(),
                v,
                gx + b as f64 * BAR_W,
                base - h,
                colors(axis.as_str())
            );
        }
        svg.text(gx + 1.5 * BAR_W, base + 16.0, "tick", "middle", "", &rep.country);
        svg.buf.push_str("</g>\n");
    }
    svg.legend(MARGIN_L + reports.len() as f64 * group_w + 20.0, MARGIN_T + 10.0, &legend, &colors);
    svg.finish()
}

fn trajectory_figure(title: &str, artifacts: &[Artifact]) -> String {
    let series: Vec<Series> = artifacts
        .iter()
        .filter_map(|a| match a {
            Artifact::Trajectory { label, ranks } => Some(Series {
                label: label.clone(),
                points: ranks
                    .iter()
                    .filter_map(|&(b, r)| r.map(|r| (f64::from(b), f64::from(r))))
                    .collect(),
            }),
            _ => None,
        })
        .collect();
    let x = Range1::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.0)), false);
    let y = Range1::fit(series.iter().flat_map(|s| s.points.iter().map(|p| p.1)), true);
    let legend = series.iter().map(|s| s.label.clone()).collect();
    let panel = Panel {
        title: title.to_owned(),
        x_label: "time bin",
        y_label: "rank",
        x,
        y,
        series,
    };
    panel_grid(title, vec![vec![panel]], legend)
}

/// Renders `artifacts` as a `kind` figure.
pub fn render(kind: PlotKind, artifacts: &[Artifact]) -> Result<String, PlotError> {
    check_kind(kind, artifacts)?;
    Ok(match kind {
        PlotKind::DiversityCurves => curves_figure("Rank diversity", artifacts),
        PlotKind::TokenDiversity => curves_figure("Rank diversity by token class", artifacts),
        PlotKind::MuVsTime => mu_figure("μ vs temporal scale", artifacts, Axis::Temporal),
        PlotKind::MuVsRadius => mu_figure("μ vs spatial scale", artifacts, Axis::Spatial),
        PlotKind::EtaBars => {
            let reports: Vec<RelevanceReport> = artifacts
                .iter()
                .flat_map(|a| match a {
                    Artifact::Relevance(r) => r.clone(),
                    _ => Vec::new(),
                })
                .collect();
            if reports.is_empty() {
                return Err(PlotError::Empty);
            }
            eta_figure("Scale relevance η", &reports)
        }
        PlotKind::Trajectories => trajectory_figure("Rank trajectories", artifacts),
    })
}
