#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(session) = stream_audit::grading::parse_session(text) {
            let again = stream_audit::grading::parse_session(&stream_audit::grading::serialize_session(&session))
                .expect("serialized session parses");
            assert_eq!(again, session);
        }
    }
});
