#![no_main]

use libfuzzer_sys::fuzz_target;
use outgen::tagger::{count_markers, count_units, strip_tags, truncate_units, TargetRelationSet};

fuzz_target!(|data: &[u8]| {
    let Some((&max, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let targets = TargetRelationSet::default();
    let stripped = strip_tags(text, &targets);
    assert!(stripped.len() <= text.len());
    let units = count_units(text, &targets);
    assert!(count_markers(text, &targets) <= units);
    let (kept, cut) = truncate_units(text, max as usize, &targets);
    assert!(text.starts_with(kept));
    assert_eq!(cut, units > max as usize);
    assert!(count_units(kept, &targets) <= max as usize);
});
