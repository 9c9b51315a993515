//! Command-line front end for `qmeasure`.
//!
//! Every command produces a human-readable report for stdout and a JSON
//! document (keys sorted) that is written to `--out` when given.

mod inputs;
mod report;
mod suites;

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use qmeasure::instrument::{joint_probability, trivial_instrument};
use qmeasure::interchange::{to_json, ModelDoc};
use qmeasure::model::{dilation_for_observable, ozawa_dilation, verify_reproducing};
use qmeasure::observable::{condition_obs, distribution, marginals, seq_product_obs};
use qmeasure::qubit::{associativity_gap, conditioned_spin_closed_form, seq_spin, triple_spin_coefficients, Sign};
use qmeasure::state::condition_state_observable;
use qmeasure::{Error, JointMethod, Tolerance};
use serde_json::{json, Value};

use suites::{Params, SuiteReport, SUITES};

#[derive(Debug, Parser)]
#[command(name = "qmeasure", version, about = "Sequential products, conditioned observables and instruments")]
pub struct Cli {
    /// Equality and PSD tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Seed for all random generation.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the structured result document here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded property suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 3)]
        dim: usize,
        #[arg(long, default_value_t = 20)]
        cases: usize,
    },
    /// Spin products and conditioned spin observables on a qubit.
    DemoQubit {
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        /// Third axis for the triple-product coefficients.
        #[arg(long)]
        r: Option<String>,
    },
    /// Distributions of A, of A∘B, its marginals and the conditioned forms.
    Dist {
        #[arg(long)]
        state: String,
        #[arg(long = "obs-a", alias = "obs")]
        obs_a: String,
        #[arg(long = "obs-b")]
        obs_b: Option<String>,
    },
    /// Joint probability of outcome sets X and Y under each definition.
    Joint {
        #[arg(long)]
        state: String,
        #[arg(long = "obs-a")]
        obs_a: String,
        #[arg(long = "obs-b")]
        obs_b: String,
        /// Comma-separated labels of A.
        #[arg(long)]
        x: String,
        /// Comma-separated labels of B.
        #[arg(long)]
        y: String,
        /// sequential, luders, instrument:FILE or trivial:STATE.
        #[arg(long, default_value = "sequential")]
        method: String,
    },
    /// Build a unitary measurement model for an instrument or observable.
    Dilate {
        #[arg(long, conflicts_with = "obs_a", required_unless_present = "obs_a")]
        instrument: Option<String>,
        #[arg(long = "obs-a")]
        obs_a: Option<String>,
        /// Where to write the model document.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
}

pub struct Outcome {
    pub text: String,
    pub doc: Value,
    pub ok: bool,
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let tol = Tolerance::new(cli.tol, cli.tol)?;
    let (name, inputs, text, results, ok) = match &cli.command {
        Command::Check { suite, dim, cases } => {
            let (text, results, ok) = check(suite, *dim, *cases, cli.seed, &tol)?;
            ("check", json!({"suite": suite, "dim": dim, "cases": cases}), text, results, ok)
        }
        Command::DemoQubit { m, n, r } => {
            let (text, results) = demo_qubit(m, n, r.as_deref(), &tol)?;
            ("demo-qubit", json!({"m": m, "n": n, "r": r}), text, results, true)
        }
        Command::Dist { state, obs_a, obs_b } => {
            let (text, results) = dist(state, obs_a, obs_b.as_deref(), &tol)?;
            ("dist", json!({"state": state, "obs_a": obs_a, "obs_b": obs_b}), text, results, true)
        }
        Command::Joint {
            state,
            obs_a,
            obs_b,
            x,
            y,
            method,
        } => {
            let (text, results) = joint(state, obs_a, obs_b, x, y, method, &tol)?;
            (
                "joint",
                json!({"state": state, "obs_a": obs_a, "obs_b": obs_b, "x": x, "y": y, "method": method}),
                text,
                results,
                true,
            )
        }
        Command::Dilate {
            instrument,
            obs_a,
            model,
            trials,
        } => {
            let (text, results, ok) =
                dilate(instrument.as_deref(), obs_a.as_deref(), model.as_ref(), *trials, cli.seed, &tol)?;
            (
                "dilate",
                json!({"instrument": instrument, "obs_a": obs_a, "model": model, "trials": trials}),
                text,
                results,
                ok,
            )
        }
    };
    let doc = json!({
        "command": name,
        "inputs": inputs,
        "results": results,
        "tolerances": {"eq_tol": tol.eq_tol, "psd_tol": tol.psd_tol},
        "seed": cli.seed,
        "ok": ok,
    });
    Ok(Outcome { text, doc, ok })
}

fn check(suite: &str, dim: usize, cases: usize, seed: u64, tol: &Tolerance) -> Result<(String, Value, bool)> {
    if !suites::is_known(suite) {
        bail!("unknown suite {suite:?}; expected one of all, {}", SUITES.join(", "));
    }
    if !(2..=8).contains(&dim) {
        bail!(Error::BadDimension(dim));
    }
    let params = Params {
        dim,
        cases,
        seed,
        tol: *tol,
    };
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let reports: Vec<SuiteReport> = names.iter().filter_map(|s| suites::run_suite(s, &params)).collect();
    let ok = reports.iter().all(SuiteReport::passed);
    Ok((report::suites(&reports), serde_json::to_value(&reports)?, ok))
}

fn demo_qubit(m: &str, n: &str, r: Option<&str>, tol: &Tolerance) -> Result<(String, Value)> {
    let m = inputs::direction(m)?;
    let n = inputs::direction(n)?;
    let prod = seq_spin(&m, &n, tol)?;
    let (a, cond) = conditioned_spin_closed_form(&m, &n, tol)?;
    let mut text = format!("m = ({m}), n = ({n})\n");
    text += &report::observable("S^m ∘ S^n", &prod);
    text += &format!("a = |<φ_+^m, φ_+^n>|^2 = {a:.9}\n");
    text += &report::observable("(S^n | S^m)", &cond);
    let mut results = json!({
        "seq_product": report::observable_json(&prod),
        "a": a,
        "conditioned": report::observable_json(&cond),
    });
    if let Some(r) = r {
        let r = inputs::direction(r)?;
        let coeffs = triple_spin_coefficients(&m, &n, &r);
        let gap = associativity_gap(&m, &n, &r);
        text += &format!("r = ({r})\nc_ust:\n");
        let mut table = Vec::new();
        for u in Sign::BOTH {
            for s in Sign::BOTH {
                for t in Sign::BOTH {
                    let c = coeffs.get(u, s, t);
                    text += &format!("  c[{}{}{}] = {c:.9}\n", u.label(), s.label(), t.label());
                    table.push(json!({"u": u.label(), "s": s.label(), "t": t.label(), "c": c}));
                }
            }
        }
        text += &format!("associativity gap = {gap:.3e}\n");
        results["r"] = json!(r.to_string());
        results["coefficients"] = json!(table);
        results["associativity_gap"] = json!(gap);
    }
    Ok((text, results))
}

fn dist(state: &str, obs_a: &str, obs_b: Option<&str>, tol: &Tolerance) -> Result<(String, Value)> {
    let a = inputs::observable(obs_a, tol)?;
    let rho = inputs::state(state, a.dim(), tol)?;
    let phi_a = distribution(&rho, &a, tol)?;
    let mut text = report::distribution("Φ_A", &phi_a);
    let mut results = json!({ "phi_a": report::distribution_json(&phi_a) });
    if let Some(spec) = obs_b {
        let b = inputs::observable(spec, tol)?;
        let joint = distribution(&rho, &seq_product_obs(&a, &b, tol)?, tol)?;
        let (left, right) = marginals(&joint, tol)?;
        let cond = distribution(&rho, &condition_obs(&b, &a, tol)?, tol)?;
        let rho_a = condition_state_observable(&rho, &a, tol)?;
        let phi_b_cond = distribution(&rho_a, &b, tol)?;
        for (title, p) in [
            ("Φ_(A∘B)", &joint),
            ("first marginal", &left),
            ("second marginal", &right),
            ("Φ_(B|A)", &cond),
            ("Φ_B on (ρ|A)", &phi_b_cond),
        ] {
            text += &report::distribution(title, p);
        }
        results["joint"] = report::distribution_json(&joint);
        results["marginal_a"] = report::distribution_json(&left);
        results["marginal_b"] = report::distribution_json(&right);
        results["phi_b_given_a"] = report::distribution_json(&cond);
        results["phi_b_conditioned_state"] = report::distribution_json(&phi_b_cond);
    }
    Ok((text, results))
}

fn joint(
    state: &str,
    obs_a: &str,
    obs_b: &str,
    x: &str,
    y: &str,
    method: &str,
    tol: &Tolerance,
) -> Result<(String, Value)> {
    let a = inputs::observable(obs_a, tol)?;
    let b = inputs::observable(obs_b, tol)?;
    let rho = inputs::state(state, a.dim(), tol)?;
    let x = inputs::labels(x);
    let y = inputs::labels(y);
    let instrument = if let Some(path) = method.strip_prefix("instrument:") {
        Some(inputs::instrument(path, tol)?)
    } else if let Some(spec) = method.strip_prefix("trivial:") {
        Some(trivial_instrument(&a, &inputs::state(spec, a.dim(), tol)?, tol)?)
    } else if method == "sequential" || method == "luders" {
        None
    } else {
        bail!("unknown method {method:?}; expected sequential, luders, instrument:FILE or trivial:STATE");
    };
    let mut methods = vec![("sequential", JointMethod::Sequential), ("luders", JointMethod::Luders)];
    if let Some(inst) = instrument {
        methods.push(("instrument", JointMethod::Instrument(inst)));
    }
    let mut probs = Vec::new();
    for (name, m) in &methods {
        probs.push((*name, joint_probability(&rho, &a, &x, &b, &y, m, tol)?));
    }
    let selected = match method {
        "sequential" => "sequential",
        "luders" => "luders",
        _ => "instrument",
    };
    let mut text = format!("X = {{{}}}, Y = {{{}}}\n", x.join(", "), y.join(", "));
    for (name, p) in &probs {
        let mark = if *name == selected { "*" } else { " " };
        text += &format!("{mark} {name:<11} {p:.12}\n");
    }
    let mut gaps = serde_json::Map::new();
    for i in 0..probs.len() {
        for j in i + 1..probs.len() {
            let g = (probs[i].1 - probs[j].1).abs();
            text += &format!("  |{} - {}| = {g:.3e}\n", probs[i].0, probs[j].0);
            gaps.insert(format!("{}-{}", probs[i].0, probs[j].0), json!(g));
        }
    }
    let by_method: serde_json::Map<String, Value> = probs.iter().map(|(n, p)| (n.to_string(), json!(p))).collect();
    let value = probs.iter().find(|(n, _)| *n == selected).map(|(_, p)| *p);
    let results = json!({
        "selected": selected,
        "probability": value,
        "methods": by_method,
        "gaps": gaps,
    });
    Ok((text, results))
}

fn dilate(
    instrument: Option<&str>,
    obs_a: Option<&str>,
    model_path: Option<&PathBuf>,
    trials: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<(String, Value, bool)> {
    let model = match (instrument, obs_a) {
        (Some(path), _) => ozawa_dilation(&inputs::instrument(path, tol)?, tol)?,
        // an observable is dilated through its Lüders instrument
        (None, Some(spec)) => dilation_for_observable(&inputs::observable(spec, tol)?, tol)?,
        (None, None) => bail!("dilate needs --instrument or --obs-a"),
    };
    let deviation = verify_reproducing(&model, trials, seed, tol)?;
    let ok = deviation <= 1e-9;
    let doc = ModelDoc::from_model(&model);
    if let Some(path) = model_path {
        std::fs::write(path, to_json(&doc)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let text = format!(
        "dim H = {}, dim K = {}\nunitarity defect = {:.3e}\nreproducing deviation over {trials} states = {deviation:.3e} ({})\n",
        model.dim_h(),
        model.dim_k(),
        model.unitary().unitarity_defect(),
        if ok { "PASS" } else { "FAIL" }
    );
    let results = json!({
        "dim_h": model.dim_h(),
        "dim_k": model.dim_k(),
        "unitarity_defect": model.unitary().unitarity_defect(),
        "deviation": deviation,
        "model": serde_json::to_value(&doc)?,
    });
    Ok((text, results, ok))
}
