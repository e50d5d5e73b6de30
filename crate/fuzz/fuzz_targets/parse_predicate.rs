#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(p) = text.parse::<stream_audit::rubric::Predicate>() {
            assert_eq!(p.to_string().parse::<stream_audit::rubric::Predicate>().ok(), Some(p));
        }
    }
});
