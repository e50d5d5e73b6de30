mod common;

use common::{builtin, complete_session, gold, record, GOLD, SCORING_CASES as CASES};
use stream_audit::error::{JudgmentError, ScoreError, SessionError};
use stream_audit::grading::{
    apply_judgments, auto_assess, grade_criterion, merge_grader_sessions, score_report, GradeValue, GraderSession,
    NewJudgment, Outcome, ScoringConfig, Status, Verdict, REPORT_SCOPE,
};
use stream_audit::report::{parse_report, report_digest, Field};

use GradeValue::{NotSatisfied as N, Partial as P, Satisfied as S};

fn grade_with(criterion: &str, pattern: &str, rules: &[&str], threshold: f64) -> GradeValue {
    let c = builtin().criterion(criterion).unwrap();
    let config = ScoringConfig { full_credit_threshold: threshold, allow_pending: true };
    grade_criterion(&record(c, pattern, rules), c, &config).unwrap().grade().value
}


#[test]
fn scoring_fixtures() {
    let mut failures = Vec::new();
    for (i, (crit, pattern, rules, threshold, want)) in CASES.iter().enumerate() {
        let got = grade_with(crit, pattern, rules, *threshold);
        if got != *want {
            failures.push(format!("case {i}: {crit} {pattern} {rules:?} @{threshold}: got {got:?}, want {want:?}"));
        }
    }
    assert!(failures.is_empty(), "{}", failures.join("\n"));
}

#[test]
fn special_rule_fires_only_when_triggered() {
    // Every criterion without rules: minimum-only never reaches Satisfied at the default threshold
    // unless the full-credit tier is empty after exclusions.
    for (_, c) in builtin().criteria() {
        let pattern: String = c
            .requirements()
            .map(|r| if c.minimum.iter().any(|m| m.id == r.id) { 'M' } else { 'U' })
            .collect();
        let got = grade_with(&c.id, &pattern, &[], 0.75);
        if c.full_credit.is_empty() {
            assert_eq!(got, S, "{}", c.id);
        } else {
            assert_eq!(got, P, "{}", c.id);
        }
    }
}

#[test]
fn pending_items_block_final_scoring() {
    let report = gold();
    let a = auto_assess(&report, builtin()).unwrap();
    let pending = a.pending();
    assert!(pending > 0);
    let err = score_report(&a, builtin(), &ScoringConfig::default()).unwrap_err();
    assert_eq!(err, ScoreError::Pending(pending));
    assert_eq!(err.to_string(), format!("{pending} judgments pending"));
    let card = score_report(&a, builtin(), &ScoringConfig { allow_pending: true, ..Default::default() }).unwrap();
    assert!(card.provisional);
    assert_eq!(card.pending, pending);
}

#[test]
fn gold_report_scores_full_marks() {
    let report = gold();
    let session = complete_session(&report, "alice");
    let a = apply_judgments(&auto_assess(&report, builtin()).unwrap(), &session, builtin()).unwrap();
    assert_eq!(a.pending(), 0);
    let card = score_report(&a, builtin(), &ScoringConfig::default()).unwrap();
    assert_eq!(card.normalized, Some(1.0));
    assert_eq!(card.rows.len(), 3);
    assert!(!card.provisional);
    // evaluation-1 {Both, HumanBaseline} 21 per-evaluation criteria, evaluation-2 {AnswerKeyOnly, NoHumanBaseline} 14, report 5.
    assert_eq!(card.rows[0].applicable, 21);
    assert_eq!(card.rows[1].applicable, 14);
    assert_eq!(card.rows[2].applicable, 5);
}

#[test]
fn deleting_the_interval_drops_only_4_ii() {
    let mut report = gold();
    let full = {
        let s = complete_session(&report, "alice");
        let a = apply_judgments(&auto_assess(&report, builtin()).unwrap(), &s, builtin()).unwrap();
        score_report(&a, builtin(), &ScoringConfig::default()).unwrap()
    };
    report.evaluations[0].performance.uncertainty = Field::Absent;
    let s = complete_session(&report, "alice");
    let a = apply_judgments(&auto_assess(&report, builtin()).unwrap(), &s, builtin()).unwrap();
    let card = score_report(&a, builtin(), &ScoringConfig::default()).unwrap();
    let col = card.columns.iter().position(|c| c.criterion == "4(ii)").unwrap();
    let mut changed = Vec::new();
    for (r, row) in card.rows.iter().enumerate() {
        for (c, cell) in row.cells.iter().enumerate() {
            if cell.grade != full.rows[r].cells[c].grade {
                changed.push((r, c, cell.grade));
            }
        }
    }
    assert_eq!(changed.len(), 1, "{changed:?}");
    let (r, c, grade) = changed[0];
    assert_eq!((r, c), (0, col));
    assert!(matches!(grade, P | N));
}

fn judgment(req: &str, scope: &str, verdict: Verdict, comment: Option<&str>, r#override: bool) -> NewJudgment {
    NewJudgment {
        requirement: req.into(),
        scope: scope.into(),
        verdict,
        comment: comment.map(Into::into),
        r#override,
    }
}

fn session_with(report: &stream_audit::report::ReportDocument, batch: Vec<NewJudgment>) -> GraderSession {
    let mut s = GraderSession::new("bob", &report_digest(report), "stream-v1", "t");
    s.append(0, batch, "t").unwrap();
    s
}

#[test]
fn judgment_rules() {
    let report = gold();
    let a = auto_assess(&report, builtin()).unwrap();
    let apply = |batch| apply_judgments(&a, &session_with(&report, batch), builtin());

    // 2(i)B is ruled out by the facts for evaluation-1 (no subset).
    assert!(matches!(
        apply(vec![judgment("2(i)B", "evaluation-1", Verdict::Met, None, false)]),
        Err(JudgmentError::NotApplicable { .. })
    ));
    // 2(iv-a)A does not apply to an answer-key evaluation at all.
    let err = apply(vec![judgment("2(iv-a)A", "evaluation-2", Verdict::Met, None, false)]).unwrap_err();
    assert_eq!(err.to_string(), "requirement not applicable: 2(iv-a)A in evaluation-2");
    assert_eq!(
        apply(vec![judgment("9(i)A", "evaluation-1", Verdict::Met, None, false)]),
        Err(JudgmentError::UnknownRequirement("9(i)A".into()))
    );
    assert_eq!(
        apply(vec![judgment("1(i)A", "evaluation-9", Verdict::Met, None, false)]),
        Err(JudgmentError::UnknownScope("evaluation-9".into()))
    );
    // 1(i)A was found automatically.
    assert!(matches!(
        apply(vec![judgment("1(i)A", "evaluation-1", Verdict::Unmet, None, false)]),
        Err(JudgmentError::OverrideRequired { .. })
    ));
    assert!(matches!(
        apply(vec![judgment("1(i)A", "evaluation-1", Verdict::Unmet, None, true)]),
        Err(JudgmentError::CommentRequired { .. })
    ));
    let ok = apply(vec![judgment("1(i)A", "evaluation-1", Verdict::Unmet, Some("too vague"), true)]).unwrap();
    let st = ok.status("evaluation-1", "1(i)A").unwrap();
    assert_eq!(st.status, Status::Unmet);
    assert!(st.overridden);
    assert_eq!(st.judge.as_deref(), Some("bob"));
    // Agreeing with an automatic result needs no override.
    let same = apply(vec![judgment("1(i)A", "evaluation-1", Verdict::Met, None, false)]).unwrap();
    assert_eq!(same, a);
    // Not applicable needs a comment.
    assert!(matches!(
        apply(vec![judgment("1(i)H", "evaluation-1", Verdict::NotApplicable, None, false)]),
        Err(JudgmentError::CommentRequired { .. })
    ));
    let na = apply(vec![judgment("1(i)H", "evaluation-1", Verdict::NotApplicable, Some("no other evals"), false)]).unwrap();
    assert_eq!(na.status("evaluation-1", "1(i)H").unwrap().status, Status::NotApplicable);
    // Report-level scope.
    let r = apply(vec![judgment("6(i)A", REPORT_SCOPE, Verdict::Met, None, false)]);
    assert!(r.is_ok() || matches!(r, Err(JudgmentError::OverrideRequired { .. })));
}

#[test]
fn session_must_match_report() {
    let report = gold();
    let a = auto_assess(&report, builtin()).unwrap();
    let mut s = complete_session(&report, "a");
    s.report_digest = "0".repeat(64);
    assert!(matches!(apply_judgments(&a, &s, builtin()), Err(JudgmentError::ReportMismatch { .. })));
    let mut s = complete_session(&report, "a");
    s.rubric_version = "stream-v0".into();
    assert!(matches!(apply_judgments(&a, &s, builtin()), Err(JudgmentError::VersionMismatch { .. })));
}

#[test]
fn applying_twice_is_idempotent() {
    let report = gold();
    let a = auto_assess(&report, builtin()).unwrap();
    let mut s = complete_session(&report, "a");
    let last = s.last_seq();
    s.append(
        last,
        vec![
            judgment("1(i)A", "evaluation-1", Verdict::Unmet, Some("vague"), true),
            judgment("1(i)D", "evaluation-1", Verdict::Unmet, None, false),
        ],
        "t",
    )
    .unwrap();
    let once = apply_judgments(&a, &s, builtin()).unwrap();
    let twice = apply_judgments(&once, &s, builtin()).unwrap();
    assert_eq!(once, twice);
    // The later 1(i)D judgment supersedes the earlier Met.
    assert_eq!(once.status("evaluation-1", "1(i)D").unwrap().status, Status::Unmet);
}

#[test]
fn criterion_outcome_flags_pending() {
    let c = builtin().criterion("6(ii)").unwrap();
    let out = grade_criterion(&record(c, "MP", &[]), c, &ScoringConfig::default()).unwrap();
    assert!(matches!(out, Outcome::Pending { count: 1, .. }));
}

#[test]
fn merge_needs_two_matching_sessions() {
    let report = gold();
    let a = complete_session(&report, "a");
    assert_eq!(merge_grader_sessions(std::slice::from_ref(&a), &report, builtin()), Err(SessionError::TooFewSessions));
    let mut b = complete_session(&report, "b");
    b.report_digest = "f".repeat(64);
    assert_eq!(merge_grader_sessions(&[a.clone(), b], &report, builtin()), Err(SessionError::ReportMismatch));
    let b = complete_session(&report, "b");
    let merged = merge_grader_sessions(&[a, b], &report, builtin()).unwrap();
    assert_eq!(merged.matrix.raters, ["a", "b"]);
    assert_eq!(merged.matrix.items.len(), 21 + 14 + 5);
    assert!(merged.excluded.is_empty());
}

#[test]
fn merge_reports_applicability_disagreement() {
    let report = gold();
    let a = complete_session(&report, "a");
    let mut b = complete_session(&report, "b");
    let c = builtin().criterion("5(i-c)").unwrap();
    let seq = b.last_seq();
    let batch = c
        .requirements()
        .map(|r| judgment(&r.id, "evaluation-1", Verdict::NotApplicable, Some("baseline not comparable"), true))
        .collect();
    b.append(seq, batch, "t").unwrap();
    let merged = merge_grader_sessions(&[a, b], &report, builtin()).unwrap();
    assert_eq!(merged.excluded.len(), 1);
    assert_eq!(merged.excluded[0].item, "evaluation-1/5(i-c)");
    assert!(merged.excluded[0].reason.contains("applicability"));
}

#[test]
fn gold_fixture_is_clean() {
    let parsed = parse_report(GOLD).unwrap();
    assert!(parsed.warnings.is_empty(), "{:?}", parsed.warnings);
    assert!(stream_audit::report::validate_report_structure(&parsed.report).is_empty());
}
