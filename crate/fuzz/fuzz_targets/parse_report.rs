#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(parsed) = stream_audit::report::parse_report(text) {
            // Whatever parses must survive validation, assessment and a serialize round trip.
            let _ = stream_audit::report::validate_report_structure(&parsed.report);
            let _ = stream_audit::grading::auto_assess(&parsed.report, stream_audit::Rubric::builtin());
            let again = stream_audit::report::parse_report(&stream_audit::report::serialize_report(&parsed.report))
                .expect("serialized report parses");
            assert_eq!(again.report, parsed.report);
        }
    }
});
