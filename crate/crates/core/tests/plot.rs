use rankdiv::fit::fit_sigmoid_samples;
use rankdiv::plot::{render, Artifact, PlotError, PlotKind};
use rankdiv::rankdiv::{rank_bins, rank_diversity, rank_trajectory, RankMode};
use rankdiv::report::{curve_csv, fits_csv, relevance_csv, trajectory_csv, FitRow};
use rankdiv::scales::SpatialExtent;
use rankdiv::stats::RelevanceReport;

fn fits_text(offset: f64) -> String {
    let mut rows = Vec::new();
    for n in 1..=5u32 {
        for r in [3.0, 6.0, 12.0] {
            for dt in [3, 6, 12] {
                let samples: Vec<(f64, f64)> = (1..=200)
                    .map(|k| {
                        let x = (f64::from(k).log10() - (2.0 - 0.2 * f64::from(n) + offset)) / 0.5;
                        (f64::from(k), 0.5 * (1.0 + libm::erf(x / 2f64.sqrt())))
                    })
                    .collect();
                let fit = fit_sigmoid_samples(&samples, 100).unwrap();
                rows.push(FitRow::new(n as usize, SpatialExtent::RadiusKm(r), r, dt, &fit));
            }
        }
    }
    fits_csv(&rows).unwrap()
}

fn curve_text(seed: usize) -> String {
    let bins: Vec<Vec<String>> = (0..6)
        .map(|b| (0..50).map(|i| format!("w{}", (i * (b + seed + 1)) % 23)).collect())
        .collect();
    curve_csv(&rank_diversity(&rank_bins(&bins).unwrap(), RankMode::Intersect).unwrap())
}

fn parse(svg: &str) -> roxmltree::Document<'_> {
    roxmltree::Document::parse(svg).expect("well-formed SVG")
}

fn with_class<'a, 'i>(doc: &'a roxmltree::Document<'i>, class: &str) -> Vec<roxmltree::Node<'a, 'i>> {
    doc.descendants()
        .filter(|n| n.attribute("class") == Some(class))
        .collect()
}

#[test]
fn mu_vs_time_has_country_rows_and_n_columns() {
    let arts = [
        Artifact::parse("aa", &fits_text(0.0)).unwrap(),
        Artifact::parse("bb", &fits_text(0.3)).unwrap(),
    ];
    let svg = render(PlotKind::MuVsTime, &arts).unwrap();
    let doc = parse(&svg);
    let titles: Vec<&str> = with_class(&doc, "panel")
        .iter()
        .map(|p| p.attribute("data-title").unwrap())
        .collect();
    let expected: Vec<String> = ["aa", "bb"]
        .iter()
        .flat_map(|c| (1..=5).map(move |n| format!("{c}, N = {n}")))
        .collect();
    assert_eq!(titles, expected);
    for panel in with_class(&doc, "panel") {
        let series = panel
            .descendants()
            .filter(|n| n.attribute("class") == Some("series"))
            .count();
        assert_eq!(series, 3, "one line per radius");
        let x = panel
            .descendants()
            .find(|n| n.attribute("class") == Some("x-axis"))
            .unwrap();
        assert_eq!(x.attribute("data-scale"), Some("log"));
    }
}

#[test]
fn eta_bars_are_proportional() {
    let reports = vec![
        RelevanceReport {
            country: "aa".into(),
            grammatical: 0.6,
            spatial: 0.05,
            temporal: 0.2,
        },
        RelevanceReport {
            country: "bb".into(),
            grammatical: 0.45,
            spatial: 0.0,
            temporal: 0.3,
        },
    ];
    let art = Artifact::parse("relevance", &relevance_csv(&reports)).unwrap();
    let svg = render(PlotKind::EtaBars, &[art]).unwrap();
    let doc = parse(&svg);
    let bars = with_class(&doc, "bar");
    assert_eq!(bars.len(), 6);
    let ratio = |n: &roxmltree::Node| {
        let h: f64 = n.attribute("height").unwrap().parse().unwrap();
        let v: f64 = n.attribute("data-value").unwrap().parse().unwrap();
        (h, v)
    };
    let (h0, v0) = ratio(&bars[0]);
    for b in &bars {
        let (h, v) = ratio(b);
        assert!((h * v0 - h0 * v).abs() < 1e-4, "{h} {v}");
    }
    let tallest = bars.iter().map(ratio).fold(0.0f64, |m, (h, _)| m.max(h));
    assert_eq!(tallest, h0);
}

#[test]
fn diversity_curves_one_series_each_on_log_ranks() {
    let arts: Vec<Artifact> = (0..5)
        .map(|i| Artifact::parse(&format!("c{i}"), &curve_text(i)).unwrap())
        .collect();
    let svg = render(PlotKind::DiversityCurves, &arts).unwrap();
    let doc = parse(&svg);
    let labels: Vec<&str> = with_class(&doc, "series")
        .iter()
        .map(|s| s.attribute("data-label").unwrap())
        .collect();
    assert_eq!(labels, ["c0", "c1", "c2", "c3", "c4"]);
    let axes = with_class(&doc, "x-axis");
    assert_eq!(axes.len(), 1);
    assert_eq!(axes[0].attribute("data-scale"), Some("log"));
    assert_eq!(with_class(&doc, "y-axis")[0].attribute("data-scale"), Some("linear"));
}

#[test]
fn trajectories_use_log_rank_axis() {
    let tables = rank_bins(&[vec!["a", "a", "b"], vec!["b", "b", "a"], vec!["a", "c"]]).unwrap();
    let text = trajectory_csv(&rank_trajectory(&tables, &"a"));
    let svg = render(PlotKind::Trajectories, &[Artifact::parse("a", &text).unwrap()]).unwrap();
    let doc = parse(&svg);
    assert_eq!(with_class(&doc, "y-axis")[0].attribute("data-scale"), Some("log"));
    assert_eq!(with_class(&doc, "series").len(), 1);
}

#[test]
fn wrong_artifact_kind_is_rejected() {
    let art = Artifact::parse("c", &curve_text(0)).unwrap();
    assert!(matches!(render(PlotKind::EtaBars, &[art]), Err(PlotError::Mismatch { .. })));
    assert!(matches!(render(PlotKind::MuVsRadius, &[]), Err(PlotError::Empty)));
    assert!(Artifact::parse("x", "not,a,known\n1,2,3\n").is_err());
}
