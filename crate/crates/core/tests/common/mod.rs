#![allow(dead_code)]

use stream_audit::grading::{
    auto_assess, CriterionRecord, GradeValue, GraderSession, NewJudgment, RequirementStatus, Status, Verdict, REPORT_SCOPE,
};
use stream_audit::report::{parse_report, report_digest, ReportDocument};
use stream_audit::rubric::Criterion;
use stream_audit::Rubric;
use GradeValue::{NotApplicable as NA, NotSatisfied as N, Partial as P, Satisfied as S};

pub const GOLD: &str = include_str!("../fixtures/gold-report.json");

pub fn gold() -> ReportDocument {
    parse_report(GOLD).expect("gold report parses").report
}

pub fn builtin() -> &'static Rubric {
    Rubric::builtin()
}

/// A session marking every pending item of `report` as met.
pub fn complete_session(report: &ReportDocument, grader: &str) -> GraderSession {
    let rubric = builtin();
    let assessment = auto_assess(report, rubric).unwrap();
    let mut batch = Vec::new();
    let scopes = assessment
        .evaluations
        .iter()
        .map(|e| (e.name.as_str(), &e.criteria))
        .chain(std::iter::once((REPORT_SCOPE, &assessment.report_level)));
    for (scope, records) in scopes {
        for s in records.iter().flat_map(|r| r.statuses.iter()) {
            if s.status == Status::PendingJudgment {
                batch.push(NewJudgment {
                    requirement: s.requirement.clone(),
                    scope: scope.to_string(),
                    verdict: Verdict::Met,
                    comment: None,
                    r#override: false,
                });
            }
        }
    }
    let mut session = GraderSession::new(grader, &report_digest(report), &rubric.version, "2026-01-01T00:00:00Z");
    session.append(0, batch, "2026-01-01T00:00:00Z").unwrap();
    session
}

/// Builds a record from one letter per requirement, in rubric order:
/// `M` met, `U` unmet, `N` not applicable, `P` pending.
pub fn record(c: &Criterion, pattern: &str, fact_rules: &[&str]) -> CriterionRecord {
    let reqs: Vec<_> = c.requirements().collect();
    assert_eq!(reqs.len(), pattern.len(), "pattern length for {}", c.id);
    let statuses = reqs
        .iter()
        .zip(pattern.chars())
        .map(|(r, ch)| RequirementStatus {
            requirement: r.id.clone(),
            status: match ch {
                'M' => Status::MetJudged,
                'U' => Status::Unmet,
                'N' => Status::NotApplicable,
                'P' => Status::PendingJudgment,
                other => panic!("bad pattern letter {other}"),
            },
            note: None,
            judge: Some("fixture".into()),
            overridden: false,
        })
        .collect();
    CriterionRecord {
        criterion: c.id.clone(),
        statuses,
        fact_rules: fact_rules.iter().map(|s| s.to_string()).collect(),
    }
}

/// (criterion, statuses in rubric order, fact rules fired, threshold, expected)
pub const SCORING_CASES: &[(&str, &str, &[&str], f64, GradeValue)] = &[
    // minimum met, full-credit missing
    ("1(i)", "MMMMUUUU", &[], 0.75, P),
    ("1(i)", "MMMMUUUN", &[], 0.75, P),
    ("6(ii)", "MU", &[], 0.75, P),
    ("3(iii)", "MMMMMUUUUUUU", &[], 0.75, P),
    // any minimum unmet is zero whatever the full-credit items say
    ("1(i)", "UMMMMMMM", &[], 0.75, N),
    ("1(i)", "MMMUMMMM", &[], 0.75, N),
    ("6(ii)", "UM", &[], 0.75, N),
    ("5(i-b)", "UMMMMM", &[], 0.75, N),
    ("2(iv-c)", "UUM", &[], 0.75, N),
    // full credit at and around the default threshold
    ("1(i)", "MMMMMMMM", &[], 0.75, S),
    ("1(i)", "MMMMMMMU", &[], 0.75, S),
    ("1(i)", "MMMMMMUU", &[], 0.75, P),
    ("3(iii)", "MMMMMMMMMMMN", &[], 0.75, S),
    ("2(iii)", "MMMMU", &[], 0.75, P),
    ("2(iii)", "MMMMN", &[], 0.75, S),
    // not-applicable items leave the denominators
    ("2(i)", "MNN", &[], 0.75, S),
    ("6(v)", "MNM", &[], 0.75, S),
    ("1(i)", "NNNNNNNN", &[], 0.75, NA),
    // 1(ii): minimum suffices when the evaluation is not core
    ("1(ii)", "MUUUU", &["1(ii)/not-core"], 0.75, S),
    ("1(ii)", "MUUUU", &[], 0.75, P),
    ("1(ii)", "UMMMM", &["1(ii)/not-core"], 0.75, N),
    // 2(i): minimum suffices when no subset was used
    ("2(i)", "MUU", &["2(i)/no-subset"], 0.75, S),
    ("2(i)", "MUU", &[], 0.75, P),
    ("2(i)", "UUU", &["2(i)/no-subset"], 0.75, N),
    // 2(iv-c): a reported statistic stands in for the minimum description
    ("2(iv-c)", "UMM", &[], 0.75, S),
    ("2(iv-c)", "UMU", &[], 0.75, P),
    ("2(iv-c)", "UUU", &[], 0.75, N),
    // strict threshold: Satisfied only when every applicable item is met
    ("1(i)", "MMMMMMMU", &[], 1.0, P),
    ("1(i)", "MMMMMMMM", &[], 1.0, S),
    ("1(i)", "MMMMMMMN", &[], 1.0, S),
    ("3(iii)", "MMMMMMMMMMMU", &[], 1.0, P),
    ("1(ii)", "MUUUU", &["1(ii)/not-core"], 1.0, S),
];

// Independent oracles. These follow textbook pairwise definitions rather than
// the contingency and coincidence tables the library uses.

pub const SCALE: [f64; 3] = [0.0, 0.5, 1.0];

fn idx(v: f64) -> usize {
    SCALE.iter().position(|s| *s == v).unwrap()
}

pub fn oracle_weight(weighting: &str, a: f64, b: f64) -> f64 {
    let d = (idx(a) as f64 - idx(b) as f64).abs() / 2.0;
    match weighting {
        "none" => {
            if a == b {
                1.0
            } else {
                0.0
            }
        }
        "linear" => 1.0 - d,
        "quadratic" => 1.0 - d * d,
        _ => unreachable!(),
    }
}

/// Kappa with p_e as the mean weight over every cross pairing of the two columns.
pub fn oracle_kappa(a: &[f64], b: &[f64], weighting: &str) -> Option<f64> {
    let n = a.len() as f64;
    let po = a.iter().zip(b).map(|(x, y)| oracle_weight(weighting, *x, *y)).sum::<f64>() / n;
    let mut pe = 0.0;
    for x in a {
        for y in b {
            pe += oracle_weight(weighting, *x, *y);
        }
    }
    pe /= n * n;
    if (1.0 - pe).abs() < 1e-12 {
        None
    } else {
        Some((po - pe) / (1.0 - pe))
    }
}

/// Alpha from pairwise differences within and across units.
pub fn oracle_alpha(units: &[Vec<Option<f64>>], metric: &str) -> Option<f64> {
    let pairable: Vec<Vec<f64>> = units
        .iter()
        .map(|u| u.iter().flatten().copied().collect::<Vec<_>>())
        .filter(|u| u.len() >= 2)
        .collect();
    let all: Vec<f64> = pairable.iter().flatten().copied().collect();
    let n = all.len() as f64;
    let count = |v: f64| all.iter().filter(|x| **x == v).count() as f64;
    let delta = |a: f64, b: f64| -> f64 {
        match metric {
            "nominal" => {
                if a == b {
                    0.0
                } else {
                    1.0
                }
            }
            "interval" => (a - b) * (a - b),
            "ordinal" => {
                if a == b {
                    return 0.0;
                }
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let between: f64 = SCALE.iter().filter(|g| **g >= lo && **g <= hi).map(|g| count(*g)).sum();
                let s = between - (count(a) + count(b)) / 2.0;
                s * s
            }
            _ => unreachable!(),
        }
    };
    let mut d_o = 0.0;
    for u in &pairable {
        let m = u.len() as f64;
        let mut s = 0.0;
        for i in 0..u.len() {
            for j in 0..u.len() {
                if i != j {
                    s += delta(u[i], u[j]);
                }
            }
        }
        d_o += s / (m - 1.0);
    }
    d_o /= n;
    let mut d_e = 0.0;
    for i in 0..all.len() {
        for j in 0..all.len() {
            if i != j {
                d_e += delta(all[i], all[j]);
            }
        }
    }
    d_e /= n * (n - 1.0);
    if d_e.abs() < 1e-12 {
        None
    } else {
        Some(1.0 - d_o / d_e)
    }
}

fn oracle_ranks(xs: &[f64]) -> Vec<f64> {
    // rank = 1 + number strictly below + half the ties other than itself
    xs.iter()
        .map(|x| {
            let below = xs.iter().filter(|y| *y < x).count() as f64;
            let equal = xs.iter().filter(|y| *y == x).count() as f64;
            below + (equal + 1.0) / 2.0
        })
        .collect()
}

pub fn oracle_spearman(x: &[f64], y: &[f64]) -> Option<f64> {
    let (rx, ry) = (oracle_ranks(x), oracle_ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        None
    } else {
        Some(cov / (vx * vy).sqrt())
    }
}

pub fn some(v: &[f64]) -> Vec<Option<f64>> {
    v.iter().copied().map(Some).collect()
}
