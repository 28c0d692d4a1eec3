#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::report::{extent_label, parse_extent_label, CurveName};

fuzz_target!(|name: &str| {
    if let Some(parsed) = CurveName::parse(name) {
        assert_eq!(CurveName::parse(&parsed.file_name()), Some(parsed));
    }
    if let Some(extent) = parse_extent_label(name) {
        assert_eq!(parse_extent_label(&extent_label(extent)), Some(extent));
    }
});
