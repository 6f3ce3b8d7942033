#![no_main]

use libfuzzer_sys::fuzz_target;
use outgen::metrics::MetricWeights;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(w) = text.parse::<MetricWeights>() {
        w.validate().expect("parsed weights are valid");
    }
});
