#![no_main]
use dprolong::frontend::{parse_base_elem, print_base_elem};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let names = vec!["t".to_string(), "s".to_string()];
    if let Ok(e) = parse_base_elem(text, &names) {
        assert_eq!(parse_base_elem(&print_base_elem(&e, &names), &names).ok(), Some(e));
    }
});
