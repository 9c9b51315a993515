//! Resolves `--state`, `--obs-*`, `--instrument` and direction arguments,
//! either as named built-ins or as JSON files.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use qmeasure::interchange::{from_json, InstrumentDoc, ObservableDoc, StateDoc};
use qmeasure::observable::{fourier_basis, index_labels, standard_basis};
use qmeasure::qubit::{bloch_state, spin_observable};
use qmeasure::{Direction, Instrument, Observable, State, Tolerance};

fn read(path: &str) -> Result<String> {
    fs::read_to_string(Path::new(path)).with_context(|| format!("cannot read {path}"))
}

fn parse_dim(s: &str, what: &str) -> Result<usize> {
    let d: usize = s.parse().with_context(|| format!("bad dimension in {what}"))?;
    if d < 2 {
        bail!(qmeasure::Error::BadDimension(d));
    }
    Ok(d)
}

pub fn direction(s: &str) -> Result<Direction> {
    let key = s.trim();
    match key {
        "x" => return Ok(Direction::x()),
        "y" => return Ok(Direction::y()),
        "z" => return Ok(Direction::z()),
        _ => {}
    }
    key.parse::<Direction>().with_context(|| format!("bad direction {s:?}"))
}

/// `fourier-mub:d`, `standard:d`, `spin:x`, `spin:a,b,c`, or a file path.
pub fn observable(spec: &str, tol: &Tolerance) -> Result<Observable> {
    if let Some(d) = spec.strip_prefix("fourier-mub:") {
        let d = parse_dim(d, spec)?;
        return Ok(Observable::atomic_from_basis(index_labels(d), &fourier_basis(d), tol)?);
    }
    if let Some(d) = spec.strip_prefix("standard:") {
        let d = parse_dim(d, spec)?;
        return Ok(Observable::atomic_from_basis(index_labels(d), &standard_basis(d), tol)?);
    }
    if let Some(n) = spec.strip_prefix("spin:") {
        return Ok(spin_observable(&direction(n)?, tol)?);
    }
    let doc: ObservableDoc = from_json(&read(spec)?).with_context(|| format!("parsing observable {spec}"))?;
    doc.to_observable(tol).with_context(|| format!("invalid observable in {spec}"))
}

/// `maximally-mixed[:d]`, `bloch:r1,r2,r3`, or a file path. A bare
/// `maximally-mixed` takes its dimension from `default_dim`.
pub fn state(spec: &str, default_dim: usize, tol: &Tolerance) -> Result<State> {
    if spec == "maximally-mixed" {
        return Ok(State::maximally_mixed(default_dim));
    }
    if let Some(d) = spec.strip_prefix("maximally-mixed:") {
        return Ok(State::maximally_mixed(parse_dim(d, spec)?));
    }
    if let Some(r) = spec.strip_prefix("bloch:") {
        let v = triple(r).with_context(|| format!("bad Bloch vector {r:?}"))?;
        return Ok(bloch_state(v, tol)?);
    }
    let doc: StateDoc = from_json(&read(spec)?).with_context(|| format!("parsing state {spec}"))?;
    doc.to_state(tol).with_context(|| format!("invalid state in {spec}"))
}

pub fn instrument(path: &str, tol: &Tolerance) -> Result<Instrument> {
    let doc: InstrumentDoc = from_json(&read(path)?).with_context(|| format!("parsing instrument {path}"))?;
    doc.to_instrument(tol).with_context(|| format!("invalid instrument in {path}"))
}

fn triple(s: &str) -> Result<[f64; 3]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        bail!("expected three components");
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(parts) {
        *slot = p.parse().with_context(|| format!("bad number {p:?}"))?;
    }
    Ok(v)
}

/// Splits a label list at top-level commas so that pair labels such as
/// `(+,-)` survive intact.
pub fn labels(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur).trim().to_string());
                continue;
            }
            _ => {}
        }
        cur.push(ch);
    }
    if !cur.trim().is_empty() || !out.is_empty() {
        out.push(cur.trim().to_string());
    }
    out.retain(|l| !l.is_empty());
    out
}
