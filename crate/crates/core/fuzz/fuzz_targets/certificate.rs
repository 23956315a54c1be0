#![no_main]
use libfuzzer_sys::fuzz_target;
use superyang::presentations::map_from_id;
use superyang_cli::parse_certificates;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(certs) = parse_certificates(text) else { return };
    let again = serde_json::to_string(&certs).unwrap();
    let back = parse_certificates(&again).unwrap();
    assert_eq!(back.len(), certs.len());
    for (a, b) in certs.iter().zip(&back) {
        assert_eq!(a.divergence(b), None);
        // Small systems only; larger ones are too slow per input.
        if a.map_id.len() <= 20 {
            let _ = map_from_id(&a.map_id);
        }
    }
});
