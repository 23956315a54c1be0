#![no_main]
use libfuzzer_sys::fuzz_target;
use superyang::rootspace::{build_system, cartan_matrix};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    for affine in [false, true] {
        if let Ok(sys) = build_system(text, affine) {
            assert_eq!(sys.parity_word(), text);
            let a = cartan_matrix(&sys);
            for i in sys.nodes() {
                assert_eq!(a.entry(i, i) == 0, sys.node_parity(i).is_odd());
            }
        }
    }
});
