#![no_main]
use libfuzzer_sys::fuzz_target;
use superyang::presentations::GeneratorSymbol;
use superyang::rewrite::Word;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = text.parse::<GeneratorSymbol>() {
        assert_eq!(s.to_string().parse::<GeneratorSymbol>().unwrap(), s);
    }
    if let Ok(w) = text.parse::<Word>() {
        assert_eq!(w.to_string().parse::<Word>().unwrap(), w);
    }
});
