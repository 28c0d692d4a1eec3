#![no_main]

use libfuzzer_sys::fuzz_target;
use rankdiv::plot::{render, Artifact, PlotKind};

fuzz_target!(|text: &str| {
    let Ok(artifact) = Artifact::parse("fz", text) else { return };
    let artifacts = [artifact];
    for kind in PlotKind::ALL {
        if let Ok(svg) = render(kind, &artifacts) {
            assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
        }
    }
});
