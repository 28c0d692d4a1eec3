#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::fit::fit_sigmoid;
use rankdiv::report::{curve_csv, parse_curve_csv};

fuzz_target!(|text: &str| {
    if let Ok(curve) = parse_curve_csv(text) {
        let again = parse_curve_csv(&curve_csv(&curve)).expect("written curve parses");
        assert_eq!(again, curve);
        for (_, d) in curve.points() {
            assert!(d > 0.0 && d <= 1.0);
        }
        if curve.k_max() <= 4096 {
            let _ = fit_sigmoid(&curve);
        }
    }
});
