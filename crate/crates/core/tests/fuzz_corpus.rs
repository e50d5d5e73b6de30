//! Replays the checked-in fuzz seeds with the same checks the fuzz targets make,
//! so the seeds stay meaningful on a stable toolchain.

use std::path::PathBuf;

use stream_audit::grading::{auto_assess, parse_session, serialize_session};
use stream_audit::render::{import_scorecard, render_svg, render_text, Glyphs, Theme};
use stream_audit::report::{parse_report, serialize_report, validate_report_structure};
use stream_audit::rubric::{load_rubric, validate_rubric, Predicate};
use stream_audit::scaffold::parse_expanded_checklist;
use stream_audit::Rubric;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn report_seeds() {
    let mut parsed_any = false;
    for (name, text) in seeds("parse_report") {
        if let Ok(parsed) = parse_report(&text) {
            parsed_any = true;
            let _ = validate_report_structure(&parsed.report);
            let _ = auto_assess(&parsed.report, Rubric::builtin());
            let again = parse_report(&serialize_report(&parsed.report)).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(again.report, parsed.report, "{name}");
        }
    }
    assert!(parsed_any);
}

#[test]
fn rubric_seeds() {
    let builtin = seeds("load_rubric").into_iter().find(|(n, _)| n == "builtin.json").unwrap().1;
    assert_eq!(&load_rubric(&builtin).unwrap(), Rubric::builtin());
    for (_, text) in seeds("load_rubric") {
        if let Ok(r) = load_rubric(&text) {
            let _ = validate_rubric(&r);
        }
    }
}

#[test]
fn checklist_seeds() {
    for (name, text) in seeds("parse_checklist") {
        let parsed = parse_expanded_checklist(&text);
        if name == "expanded.md" {
            assert_eq!(&parsed.unwrap(), Rubric::builtin());
        }
    }
}

#[test]
fn session_seeds() {
    for (name, text) in seeds("parse_session") {
        let s = parse_session(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse_session(&serialize_session(&s)).unwrap(), s);
    }
}

#[test]
fn scorecard_seeds() {
    for (name, text) in seeds("import_scorecard") {
        let card = import_scorecard(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(render_svg(&card, &Theme::default()).contains("PROVISIONAL"));
        assert!(render_text(&card, Glyphs::Ascii).is_ascii());
    }
}

#[test]
fn predicate_seeds() {
    for (name, text) in seeds("parse_predicate") {
        match text.parse::<Predicate>() {
            Ok(p) => assert_eq!(p.to_string().parse::<Predicate>().unwrap(), p, "{name}"),
            Err(_) => assert_eq!(name, "unclosed.txt"),
        }
    }
}
