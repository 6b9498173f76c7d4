#![no_main]

use libfuzzer_sys::fuzz_target;
use subspace_lrr::cli::config::parse_config;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(cfg) = parse_config(text) {
            cfg.validate().expect("parsed configs are valid");
        }
    }
});
