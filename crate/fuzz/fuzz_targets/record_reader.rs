#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::ingest::{RecordReader, StudyWindow};

fuzz_target!(|data: &[u8]| {
    let window = StudyWindow::new(1_388_534_400, 1_420_070_400).unwrap();
    let mut reader = RecordReader::new(data, window);
    let mut ok = 0u64;
    for rec in reader.by_ref() {
        match rec {
            Ok(r) => {
                assert!(r.timestamp >= window.start() && r.timestamp < window.end());
                ok += 1;
            }
            Err(_) => break,
        }
    }
    let lines = data.split(|&b| b == b'\n').count() as u64;
    assert!(ok + reader.skipped() <= lines);
});
