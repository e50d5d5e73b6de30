#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(card) = stream_audit::render::import_scorecard(text) {
            let _ = stream_audit::render::render_svg(&card, &stream_audit::render::Theme::default());
            let _ = stream_audit::render::render_text(&card, stream_audit::render::Glyphs::Ascii);
        }
    }
});
