#![no_main]

use libfuzzer_sys::fuzz_target;
use outgen::corpus::parse_paraphrase_record;

fuzz_target!(|data: &[u8]| {
    if let Ok(line) = std::str::from_utf8(data) {
        let _ = parse_paraphrase_record(line, 1);
    }
});
