#![no_main]
use dprolong::frontend::SystemDocument;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = SystemDocument::from_json(text) {
        if let Ok(sys) = doc.resolve() {
            for f in &sys.polys {
                let _ = sys.print(f);
            }
        }
    }
});
