#![no_main]

use libfuzzer_sys::fuzz_target;
use subspace_lrr::datasets::{parse_dataset, to_text};

// Anything the parser accepts must survive a write and re-read unchanged.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(first) = parse_dataset(text, "fuzz") else { return };
    let written = to_text(&first).expect("accepted datasets serialize");
    let second = parse_dataset(&written, "fuzz").expect("serialized datasets parse");
    assert_eq!(first.observations, second.observations);
    assert_eq!(first.labels, second.labels);
});
