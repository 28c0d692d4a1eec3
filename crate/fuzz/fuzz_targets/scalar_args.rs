#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::config::parse_radius_series;
use rankdiv::ingest::{format_iso8601, parse_iso8601};
use rankdiv::plot::PlotKind;
use rankdiv::rankdiv::RankMode;
use rankdiv::scales::GeoPoint;
use rankdiv::stats::{parse_p, ModelKind, SpatialPredictor};
use rankdiv::tokenize::TokenClass;

fuzz_target!(|s: &str| {
    if let Ok(ts) = parse_iso8601(s) {
        if (-62_135_596_800..253_402_300_800).contains(&ts) {
            assert_eq!(parse_iso8601(&format_iso8601(ts)).unwrap(), ts);
        }
    }
    if let Ok(p) = s.parse::<GeoPoint>() {
        assert!((-90.0..=90.0).contains(&p.lat) && (-180.0..=180.0).contains(&p.lon));
    }
    if let Ok(radii) = parse_radius_series(s, 9) {
        assert!(radii.windows(2).all(|w| w[1] == 2.0 * w[0]));
    }
    let _ = parse_p(s);
    let _ = s.parse::<RankMode>();
    let _ = s.parse::<ModelKind>();
    let _ = s.parse::<SpatialPredictor>();
    let _ = s.parse::<TokenClass>();
    let _ = s.parse::<PlotKind>();
});
