#![no_main]
use dprolong::frontend::{parse_poly, print_poly, ParseContext};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let names = vec!["t".to_string()];
    let ctx = ParseContext::new(&names, 2, 2);
    if let Ok(f) = parse_poly(text, ctx) {
        let printed = print_poly(&f, &names);
        let back = parse_poly(&printed, ctx).expect("printed polynomial parses");
        assert_eq!(back, f);
        assert_eq!(print_poly(&back, &names), printed);
    }
});
