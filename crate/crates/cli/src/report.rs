//! Plain-text rendering for stdout.

use std::fmt::Write;

use qmeasure::{ComplexMatrix, Observable, ProbDistribution};
use serde_json::{json, Value};

use crate::suites::SuiteReport;

fn entry(z: qmeasure::C64) -> String {
    let re = if z.re.abs() < 5e-13 { 0.0 } else { z.re };
    let im = if z.im.abs() < 5e-13 { 0.0 } else { z.im };
    if im == 0.0 {
        format!("{re:>9.6}")
    } else {
        format!("{re:>9.6}{im:+.6}i")
    }
}

pub fn matrix(m: &ComplexMatrix, indent: &str) -> String {
    let mut out = String::new();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| entry(m[(i, j)])).collect();
        let _ = writeln!(out, "{indent}[{}]", row.join("  "));
    }
    out
}

pub fn observable(title: &str, a: &Observable) -> String {
    let mut out = format!("{title}\n");
    for (label, e) in a.labels().iter().zip(a.effects()) {
        let _ = writeln!(out, "  {label}:");
        out.push_str(&matrix(e.matrix(), "    "));
    }
    out
}

pub fn distribution(title: &str, p: &ProbDistribution) -> String {
    let mut out = format!("{title}\n");
    for (label, q) in p.labels().iter().zip(p.probs()) {
        let _ = writeln!(out, "  {label:<12} {q:.9}");
    }
    out
}

pub fn suites(reports: &[SuiteReport]) -> String {
    let mut out = format!("{:<24} {:>6} {:>7} {:>9} {:>10}  status\n", "suite", "cases", "checks", "failures", "time");
    for r in reports {
        let _ = writeln!(
            out,
            "{:<24} {:>6} {:>7} {:>9} {:>9.3}s  {}",
            r.suite,
            r.cases,
            r.checks,
            r.failures.len(),
            r.wall_time.as_secs_f64(),
            if r.passed() { "PASS" } else { "FAIL" }
        );
    }
    for r in reports {
        for f in &r.failures {
            let _ = writeln!(out, "  {} [case seed {}]: {}", r.suite, f.case_seed, f.description);
        }
    }
    out
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    let rows: Vec<Vec<[f64; 2]>> =
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect();
    json!(rows)
}

pub fn observable_json(a: &Observable) -> Value {
    json!({
        "labels": a.labels(),
        "effects": a.effects().iter().map(|e| matrix_json(e.matrix())).collect::<Vec<_>>(),
    })
}

pub fn distribution_json(p: &ProbDistribution) -> Value {
    json!({ "labels": p.labels(), "probs": p.probs() })
}
