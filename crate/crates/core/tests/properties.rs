mod common;

use std::collections::BTreeSet;

use common::{builtin, complete_session, gold, record};
use proptest::prelude::*;
use stream_audit::agreement::{cohen_kappa, krippendorff_alpha, percent_agreement, spearman_rho, AlphaMetric, KappaWeighting, RaterMatrix};
use stream_audit::grading::{apply_judgments, auto_assess, grade_criterion, score_report, GradeValue, NewJudgment, ScoringConfig, Status, Verdict};
use stream_audit::metadata::EvaluationMetadata;
use stream_audit::render::{export_scorecard, import_scorecard};
use stream_audit::rubric::{applicable_criteria, Predicate};

fn rank(g: GradeValue) -> u8 {
    match g {
        GradeValue::NotSatisfied => 0,
        GradeValue::Partial => 1,
        GradeValue::Satisfied => 2,
        GradeValue::NotApplicable => 3,
    }
}

#[test]
fn applicable_counts_over_the_cross_product() {
    let allowed: BTreeSet<usize> = [19, 20, 22, 23, 25, 26].into();
    let metas = EvaluationMetadata::cross_product();
    assert_eq!(metas.len(), 48);
    for m in metas {
        let ids: Vec<String> = applicable_criteria(builtin(), &m).into_iter().map(|c| c.id).collect();
        assert!(allowed.contains(&ids.len()), "{m:?}: {}", ids.len());
        let has = |p: &str| ids.iter().any(|id| id.starts_with(p));
        assert_eq!(has("2(iv"), m.grading_method.has_human(), "{m:?}");
        assert_eq!(has("2(v"), m.grading_method.has_auto(), "{m:?}");
        assert!(has("5(i-") ^ has("5(ii-"), "{m:?}");
    }
}

fn criterion_and_pattern() -> impl Strategy<Value = (String, String)> {
    let ids: Vec<String> = builtin().criteria().map(|(_, c)| c.id.clone()).collect();
    prop::sample::select(ids).prop_flat_map(|id| {
        let n = builtin().criterion(&id).unwrap().requirements().count();
        let pattern = prop::collection::vec(prop::sample::select(vec!['M', 'U', 'N']), n)
            .prop_map(|v| v.into_iter().collect::<String>());
        (Just(id), pattern)
    })
}

proptest! {
    #[test]
    fn grading_is_monotone((id, pattern) in criterion_and_pattern(), flip in any::<prop::sample::Index>(), threshold in prop::sample::select(vec![0.5, 0.75, 1.0])) {
        let c = builtin().criterion(&id).unwrap();
        let config = ScoringConfig { full_credit_threshold: threshold, allow_pending: false };
        let rules: Vec<&str> = c.overrides.iter().map(|r| r.id.as_str()).collect();
        for fired in [&[][..], &rules[..]] {
            let before = grade_criterion(&record(c, &pattern, fired), c, &config).unwrap().grade().value;
            let unmet: Vec<usize> = pattern.char_indices().filter(|(_, ch)| *ch == 'U').map(|(i, _)| i).collect();
            if unmet.is_empty() || before == GradeValue::NotApplicable {
                continue;
            }
            let i = unmet[flip.index(unmet.len())];
            let mut better = pattern.clone();
            better.replace_range(i..=i, "M");
            let after = grade_criterion(&record(c, &better, fired), c, &config).unwrap().grade().value;
            prop_assert!(rank(after) >= rank(before), "{} {} -> {}: {:?} -> {:?}", id, pattern, better, before, after);
        }
    }

    #[test]
    fn strict_threshold_means_full_conjunction((id, pattern) in criterion_and_pattern()) {
        let c = builtin().criterion(&id).unwrap();
        prop_assume!(c.overrides.is_empty());
        let config = ScoringConfig { full_credit_threshold: 1.0, allow_pending: false };
        let got = grade_criterion(&record(c, &pattern, &[]), c, &config).unwrap().grade().value;
        let all_na = pattern.chars().all(|ch| ch == 'N');
        let all_met = pattern.chars().all(|ch| ch != 'U');
        prop_assert_eq!(got == GradeValue::Satisfied, all_met && !all_na);
    }

    #[test]
    fn minimum_unmet_is_zero((id, pattern) in criterion_and_pattern()) {
        let c = builtin().criterion(&id).unwrap();
        let min_unmet = c.requirements().zip(pattern.chars()).any(|(r, ch)| ch == 'U' && c.minimum.iter().any(|m| m.id == r.id));
        // 2(iv-c)A may be covered by its met-trigger rule.
        let covered = id == "2(iv-c)" && pattern.chars().nth(1) == Some('M');
        let got = grade_criterion(&record(c, &pattern, &[]), c, &ScoringConfig::default()).unwrap().grade().value;
        if min_unmet && !covered {
            prop_assert_eq!(got, GradeValue::NotSatisfied);
        }
    }
}

fn column() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0]), 2..12)
}

fn two_columns() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    column().prop_flat_map(|a| {
        let n = a.len();
        (Just(a), prop::collection::vec(prop::sample::select(vec![0.0, 0.5, 1.0]), n))
    })
}

fn stats(a: &[f64], b: &[f64]) -> [Option<f64>; 4] {
    let sa: Vec<_> = a.iter().copied().map(Some).collect();
    let sb: Vec<_> = b.iter().copied().map(Some).collect();
    let m = RaterMatrix::from_values(a.iter().zip(b).map(|(x, y)| vec![Some(*x), Some(*y)]).collect()).unwrap();
    [
        cohen_kappa(&sa, &sb, KappaWeighting::Quadratic).unwrap().value,
        krippendorff_alpha(&m, AlphaMetric::Interval).unwrap().value,
        spearman_rho(&sa, &sb).unwrap().value,
        percent_agreement(&m).unwrap().value,
    ]
}

fn same(x: [Option<f64>; 4], y: [Option<f64>; 4]) -> bool {
    x.iter().zip(&y).all(|(a, b)| match (a, b) {
        (Some(a), Some(b)) => (a - b).abs() < 1e-9,
        (None, None) => true,
        _ => false,
    })
}

proptest! {
    #[test]
    fn statistics_ignore_item_order((a, b) in two_columns(), seed in any::<u64>()) {
        let mut order: Vec<usize> = (0..a.len()).collect();
        // Deterministic shuffle from the seed.
        let mut s = seed | 1;
        for i in (1..order.len()).rev() {
            s ^= s << 13; s ^= s >> 7; s ^= s << 17;
            order.swap(i, (s % (i as u64 + 1)) as usize);
        }
        let pa: Vec<f64> = order.iter().map(|&i| a[i]).collect();
        let pb: Vec<f64> = order.iter().map(|&i| b[i]).collect();
        prop_assert!(same(stats(&a, &b), stats(&pa, &pb)));
    }

    #[test]
    fn statistics_ignore_rater_order((a, b) in two_columns()) {
        prop_assert!(same(stats(&a, &b), stats(&b, &a)));
    }

    #[test]
    fn perfect_agreement_with_variation_is_one(a in column()) {
        prop_assume!(a.iter().any(|v| *v != a[0]));
        let [k, al, rho, pa] = stats(&a, &a);
        prop_assert_eq!(k, Some(1.0));
        prop_assert_eq!(al, Some(1.0));
        prop_assert!((rho.unwrap() - 1.0).abs() < 1e-12);
        prop_assert_eq!(pa, Some(1.0));
    }
}

fn pending_verdicts() -> impl Strategy<Value = Vec<u8>> {
    let n = auto_assess(&gold(), builtin()).unwrap().pending();
    prop::collection::vec(0u8..3, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn judgments_are_idempotent_and_scorecards_round_trip(verdicts in pending_verdicts()) {
        let report = gold();
        let base = auto_assess(&report, builtin()).unwrap();
        let mut session = complete_session(&report, "p");
        for (j, v) in session.judgments.iter_mut().zip(&verdicts) {
            j.verdict = match v { 0 => Verdict::Met, 1 => Verdict::Unmet, _ => Verdict::NotApplicable };
            if j.verdict == Verdict::NotApplicable {
                j.comment = Some("not relevant here".into());
            }
        }
        let once = apply_judgments(&base, &session, builtin()).unwrap();
        let twice = apply_judgments(&once, &session, builtin()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.pending(), 0);

        let card = score_report(&once, builtin(), &ScoringConfig::default()).unwrap();
        prop_assert_eq!(card.columns.len(), 28);
        prop_assert!(card.rows.iter().all(|r| r.cells.len() == 28));
        if let Some(n) = card.normalized {
            prop_assert!((n - card.points / card.applicable as f64).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&n));
        }
        prop_assert_eq!(import_scorecard(&export_scorecard(&card)).unwrap(), card);
    }

    #[test]
    fn later_judgments_supersede(verdict in 0u8..2) {
        let report = gold();
        let base = auto_assess(&report, builtin()).unwrap();
        let mut session = complete_session(&report, "p");
        let target = session.judgments[0].clone();
        let seq = session.last_seq();
        let v = if verdict == 0 { Verdict::Met } else { Verdict::Unmet };
        session.append(seq, vec![NewJudgment { requirement: target.requirement.clone(), scope: target.scope.clone(), verdict: v, comment: None, r#override: false }], "t").unwrap();
        let a = apply_judgments(&base, &session, builtin()).unwrap();
        let want = if verdict == 0 { Status::MetJudged } else { Status::Unmet };
        prop_assert_eq!(a.status(&target.scope, &target.requirement).unwrap().status, want);
    }
}

proptest! {
    #[test]
    fn parsers_never_panic(s in ".{0,400}") {
        let _ = stream_audit::report::parse_report(&s);
        let _ = stream_audit::rubric::load_rubric(&s);
        let _ = stream_audit::grading::parse_session(&s);
        let _ = stream_audit::render::import_scorecard(&s);
        let _ = stream_audit::scaffold::parse_expanded_checklist(&s);
        let _ = s.parse::<Predicate>();
    }

    #[test]
    fn predicates_round_trip_through_display(depth in 0u32..4, seed in any::<u64>()) {
        let p = build_predicate(depth, seed);
        let text = p.to_string();
        prop_assert_eq!(text.parse::<Predicate>().unwrap(), p);
    }
}

fn build_predicate(depth: u32, seed: u64) -> Predicate {
    use stream_audit::rubric::FactKey;
    let fact = Predicate::Fact(FactKey::ALL[(seed % FactKey::ALL.len() as u64) as usize]);
    if depth == 0 {
        return fact;
    }
    let next = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    match seed % 4 {
        0 => fact,
        1 => Predicate::Not(Box::new(build_predicate(depth - 1, next))),
        2 => Predicate::Any(vec![build_predicate(depth - 1, next), build_predicate(depth - 1, next >> 7)]),
        _ => Predicate::All(vec![build_predicate(depth - 1, next), build_predicate(depth - 1, next >> 11)]),
    }
}
