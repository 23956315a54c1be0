#![no_main]
use libfuzzer_sys::fuzz_target;
use superyang_cli::config::{parse_config, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_config(text) {
        if let Ok(cfg) = RunConfig::resolve(p, Some(8)) {
            assert_eq!(cfg.m + cfg.n, cfg.word.len());
            assert!(cfg.degree > 0 && cfg.degree <= 8);
        }
    }
});
