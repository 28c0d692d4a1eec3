#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::report::{
    parse_leaderboard_csv, parse_regression_f_rows, parse_relevance_csv, parse_trajectory_csv, relevance_csv,
};

fuzz_target!(|text: &str| {
    if let Ok(rows) = parse_leaderboard_csv(text) {
        for w in rows.windows(2) {
            assert!(w[0].0 < w[1].0);
        }
    }
    let _ = parse_trajectory_csv(text);
    let _ = parse_regression_f_rows(text);
    if let Ok(reports) = parse_relevance_csv(text) {
        let written = relevance_csv(&reports);
        let again = parse_relevance_csv(&written).expect("written relevance parses");
        assert_eq!(relevance_csv(&again), written);
    }
});
