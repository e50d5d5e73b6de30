#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(rubric) = stream_audit::rubric::load_rubric(text) {
            let _ = stream_audit::rubric::validate_rubric(&rubric);
        }
    }
});
