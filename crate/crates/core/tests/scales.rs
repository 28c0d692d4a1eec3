use std::collections::BTreeSet;

use proptest::prelude::*;
use rankdiv::ingest::CorpusRecord;
use rankdiv::scales::{
    containing_radius, haversine_km, radius_series, sample_indices, spatial_sample, BinSlot, GeoPoint, ScaleError,
    ScaleGrid, SpatialExtent, SpatialScale, TemporalScale, ALLOWED_DT_HOURS, EARTH_RADIUS_KM,
};

fn point() -> impl Strategy<Value = GeoPoint> {
    (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(lat, lon)| GeoPoint { lat, lon })
}

/// Great-circle distance by the atan2 form, as an independent formula.
fn central_angle_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dl = (b.lon - a.lon).to_radians();
    let num = (p2.cos() * dl.sin()).hypot(p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos());
    let den = p1.sin() * p2.sin() + p1.cos() * p2.cos() * dl.cos();
    EARTH_RADIUS_KM * num.atan2(den)
}

fn records_at(center: GeoPoint, polar: &[(f64, f64)]) -> Vec<CorpusRecord> {
    polar
        .iter()
        .enumerate()
        .map(|(i, &(bearing, dist))| {
            let p = center.destination(bearing, dist);
            CorpusRecord {
                id: format!("r{i:05}"),
                timestamp: 0,
                latitude: p.lat,
                longitude: p.lon,
                text: "x".into(),
            }
        })
        .collect()
}

proptest! {
    #[test]
    fn haversine_symmetric_and_matches_independent_formula(a in point(), b in point()) {
        let d = haversine_km(a, b);
        prop_assert!(d >= 0.0);
        prop_assert_eq!(d, haversine_km(b, a));
        prop_assert!((d - central_angle_km(a, b)).abs() < 1e-6 * d.max(1.0));
    }

    #[test]
    fn radius_filter_is_monotone_and_exact(
        polar in prop::collection::vec((0.0f64..std::f64::consts::TAU, 0.0f64..3000.0), 0..150),
        r in 1.0f64..1500.0,
        seed: u64,
    ) {
        let center = GeoPoint::new(-34.6037, -58.3816).unwrap();
        let recs = records_at(center, &polar);
        let inside = |radius: f64| -> BTreeSet<String> {
            let sc = SpatialScale::circle(center, radius).unwrap();
            recs.iter().filter(|x| sc.contains(x.location())).map(|x| x.id.clone()).collect()
        };
        let small = inside(r);
        prop_assert!(small.is_subset(&inside(2.0 * r)));

        let scale = SpatialScale::circle(center, r).unwrap();
        let n = small.len() / 2;
        let sample = spatial_sample(&recs, &scale, n, seed).unwrap();
        prop_assert_eq!(sample.len(), n);
        for s in &sample {
            let at = GeoPoint::new(s.latitude, s.longitude).unwrap();
            prop_assert!(haversine_km(center, at) <= r);
        }
        let distinct: BTreeSet<&str> = sample.iter().map(|s| s.id.as_str()).collect();
        prop_assert_eq!(distinct.len(), n);
        prop_assert_eq!(
            spatial_sample(&recs, &scale, small.len(), seed).unwrap().len(),
            small.len()
        );
    }

    #[test]
    fn sampling_ignores_input_order(
        polar in prop::collection::vec((0.0f64..6.28, 0.0f64..20.0), 2..60),
        seed: u64,
        rotate in 0usize..60,
    ) {
        let center = GeoPoint::new(51.5074, -0.1278).unwrap();
        let recs = records_at(center, &polar);
        let mut shuffled = recs.clone();
        let k = rotate % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        let scale = SpatialScale::circle(center, 25.0).unwrap();
        let n = recs.len() / 2;
        let ids = |v: Vec<&CorpusRecord>| v.into_iter().map(|r| r.id.clone()).collect::<Vec<_>>();
        prop_assert_eq!(
            ids(spatial_sample(&recs, &scale, n, seed).unwrap()),
            ids(spatial_sample(&shuffled, &scale, n, seed).unwrap())
        );
    }

    #[test]
    fn bins_partition_the_window(
        dt_index in 0usize..6,
        span_hours in 1i64..2000,
        offsets in prop::collection::vec(0i64..2000 * 3600, 1..100),
    ) {
        let dt = ALLOWED_DT_HOURS[dt_index];
        let origin = 1_388_534_400;
        let span = span_hours * 3600;
        let scale = match TemporalScale::new(dt, origin, span) {
            Ok(s) => s,
            Err(ScaleError::NoCompleteBin { .. }) => {
                prop_assert!(span_hours < i64::from(dt));
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert_eq!(i64::from(scale.bins()), span_hours / i64::from(dt));
        for off in offsets.into_iter().filter(|o| *o < span) {
            let ts = origin + off;
            match scale.bin_index(ts).unwrap() {
                BinSlot::Bin(b) => {
                    let lo = origin + i64::from(b) * scale.bin_seconds();
                    prop_assert!(lo <= ts && ts < lo + scale.bin_seconds());
                    prop_assert!(b < scale.bins());
                }
                BinSlot::Overflow => {
                    prop_assert!(off >= i64::from(scale.bins()) * scale.bin_seconds());
                }
            }
        }
    }
}

#[test]
fn haversine_references() {
    let madrid = GeoPoint::new(40.4168, -3.7038).unwrap();
    let barcelona = GeoPoint::new(41.3874, 2.1686).unwrap();
    // Great-circle distance on a 6371 km sphere from an external calculator.
    assert!((haversine_km(madrid, barcelona) - 505.096).abs() < 1.0);
    assert_eq!(haversine_km(madrid, madrid), 0.0);
    let antipode = GeoPoint::new(-40.4168, 176.2962).unwrap();
    assert!((haversine_km(madrid, antipode) - 20015.1).abs() < 0.1);
}

#[test]
fn bin_examples() {
    let origin = 1_388_534_400;
    let day = TemporalScale::new(24, origin, 8760 * 3600).unwrap();
    assert_eq!(day.bin_index(origin).unwrap(), BinSlot::Bin(0));
    assert_eq!(day.bin_index(origin + 25 * 3600).unwrap(), BinSlot::Bin(1));
    assert!(day.bin_index(origin - 1).is_err());
    let four = TemporalScale::new(96, origin, 8760 * 3600).unwrap();
    assert_eq!(four.bins(), 91);
    assert_eq!(four.bin_index(origin + 8737 * 3600).unwrap(), BinSlot::Overflow);
    assert!(TemporalScale::new(5, origin, 8760 * 3600).is_err());
}

#[test]
fn radius_series_doubles_from_three() {
    assert_eq!(radius_series(4), [3.0, 6.0, 12.0, 24.0]);
    assert_eq!(containing_radius(0.0), 3.0);
    assert_eq!(containing_radius(700.0), 768.0);
    assert_eq!(containing_radius(768.0), 768.0);
}

#[test]
fn grid_has_every_combination() {
    let mut spatial: Vec<SpatialExtent> = radius_series(9).into_iter().map(SpatialExtent::RadiusKm).collect();
    spatial.push(SpatialExtent::WholeCountry);
    let g = ScaleGrid::new(vec![1, 2, 3, 4, 5], spatial, ALLOWED_DT_HOURS.to_vec()).unwrap();
    assert_eq!(g.len(), 300);
    let cells: BTreeSet<_> = g.cells().collect();
    assert_eq!(cells.len(), 300);
    assert!(ScaleGrid::new(vec![6], vec![SpatialExtent::WholeCountry], vec![3]).is_err());
    assert!(ScaleGrid::new(vec![1], vec![], vec![3]).is_err());
}

#[test]
fn sample_indices_uniform_pairs() {
    let mut counts = std::collections::BTreeMap::<Vec<usize>, u32>::new();
    for seed in 0..60_000 {
        *counts.entry(sample_indices(4, 2, seed)).or_default() += 1;
    }
    assert_eq!(counts.len(), 6);
    for c in counts.values() {
        assert!((f64::from(*c) / 60_000.0 - 1.0 / 6.0).abs() < 0.01);
    }
}

#[test]
fn oversized_sample_is_an_error() {
    let center = GeoPoint::new(19.4326, -99.1332).unwrap();
    let recs = records_at(center, &[(0.0, 1.0), (1.0, 2.0), (2.0, 50.0)]);
    let scale = SpatialScale::circle(center, 3.0).unwrap();
    assert!(matches!(
        spatial_sample(&recs, &scale, 3, 0),
        Err(ScaleError::InsufficientPopulation { requested: 3, available: 2, .. })
    ));
}
