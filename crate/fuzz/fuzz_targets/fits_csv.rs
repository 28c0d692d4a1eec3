#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::report::{fits_csv, mu_grid_from_fits, parse_fits_csv};
use rankdiv::stats::{regress, ModelKind, RelevanceReport, SpatialPredictor};

fuzz_target!(|text: &str| {
    let Ok(rows) = parse_fits_csv(text) else { return };
    if let Ok(written) = fits_csv(&rows) {
        let again = parse_fits_csv(&written).expect("written fits parse");
        assert_eq!(fits_csv(&again).unwrap(), written);
    }
    if rows.len() <= 512 {
        if let Ok(grid) = mu_grid_from_fits("fz", &rows) {
            let _ = RelevanceReport::compute(&grid);
            let _ = regress(&grid, ModelKind::Multiplicative, SpatialPredictor::Log10);
        }
    }
});
