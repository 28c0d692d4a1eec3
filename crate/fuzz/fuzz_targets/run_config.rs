#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::config::RunConfig;

fuzz_target!(|text: &str| {
    if let Ok(cfg) = RunConfig::from_toml_str(text) {
        let _ = cfg.validate();
        let _ = cfg.grid();
        let first = cfg.to_toml_string();
        let again = RunConfig::from_toml_str(&first).expect("written config parses");
        assert_eq!(again.to_toml_string(), first);
    }
});
