#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::ingest::{parse_record, StudyWindow};

fuzz_target!(|data: &[u8]| {
    let window = StudyWindow::new(i64::MIN / 4, i64::MAX / 4).unwrap();
    if let Ok(rec) = parse_record(data, 1, &window) {
        let line = serde_json::to_string(&rec).unwrap();
        let again = parse_record(line.as_bytes(), 1, &window).expect("serialized record parses");
        assert_eq!(again, rec);
    }
});
