#![no_main]
use dprolong::frontend::{parse_poly, ParseContext};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let names = vec!["t".to_string(), "s".to_string()];
        let _ = parse_poly(text, ParseContext::new(&names, 3, 2));
    }
});
