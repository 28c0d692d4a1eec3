#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::pipeline::Manifest;

fuzz_target!(|text: &str| {
    if let Ok(m) = Manifest::from_json(text) {
        let first = m.to_json();
        let again = Manifest::from_json(&first).expect("written manifest parses");
        assert_eq!(again.to_json(), first);
    }
});
