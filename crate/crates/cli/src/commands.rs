use std::fmt::Write as _;

use serde_json::{json, Value};

use jtype_core::exact::Rational;
use jtype_core::spectral::{algebra_scan, krall_build, measure_fit, recurrence_table, three_term_check, KrallSpec};
use jtype_core::{BilinearConfig, BilinearForm, Error, QSequence, Result, UniPoly};

use crate::config::RunConfig;

/// A rendered command result. `violation` selects exit code 3.
pub struct Report {
    pub json: Value,
    pub text: String,
    pub violation: bool,
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn header(command: &str, property: &str, config: Value) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("command".into(), json!(command));
    m.insert("property".into(), json!(property));
    m.insert("config".into(), config);
    m
}

fn family_echo(run: &RunConfig) -> Value {
    json!({ "family": to_value(&run.family) })
}

pub fn qpoly(run: &RunConfig, n: usize) -> Result<Report> {
    let seq = QSequence::new(run.family.clone());
    let e = seq.entry(n)?;
    let mut m = header("qpoly", "determinantal construction", family_echo(run));
    m.insert("n".into(), json!(n));
    m.insert("q".into(), json!(strings(e.q.coeffs())));
    m.insert("beta".into(), json!(strings(&e.record.betas)));
    m.insert("lambda".into(), json!(e.record.lambda().to_string()));
    m.insert("regularized".into(), json!(e.record.regularized));
    let text = format!(
        "q_{n} = {}\nLambda({n}) = {}\nbeta_({n}, j) = [{}]\n",
        e.q,
        e.record.lambda(),
        strings(&e.record.betas).join(", ")
    );
    Ok(Report { json: Value::Object(m), text, violation: false })
}

/// Replaces `beta_{n,j}` by `beta_{n,j} + delta` before checking.
pub struct Fault {
    pub n: usize,
    pub j: usize,
    pub delta: Rational,
}

pub fn orth_check(run: &RunConfig, bcfg: &BilinearConfig, max_n: usize, fault: Option<&Fault>) -> Result<Report> {
    let cfg = &run.family;
    let seq = QSequence::new(cfg.clone());
    if let Some(f) = fault {
        seq.inject_fault(f.n, f.j, &f.delta)?;
    }
    let form = BilinearForm::new(cfg, bcfg)?;
    let qs: Vec<UniPoly> = (0..=max_n).map(|n| seq.q(n)).collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    let mut norms = Vec::new();
    let mut violations = Vec::new();
    let mut text = String::new();
    for n in cfg.m()..=max_n {
        for i in 0..n {
            let v = form.pair(&qs[n], &qs[i])?;
            let zero = v.is_zero();
            pairs.push(json!({ "n": n, "i": i, "zero": zero }));
            if !zero {
                violations.push(json!({ "n": n, "i": i, "value": to_value(&v) }));
                writeln!(text, "violation: <q_{n}, q_{i}> = {v}").unwrap();
            }
        }
        let v = form.pair(&qs[n], &qs[n])?;
        if v.is_zero() {
            violations.push(json!({ "n": n, "i": n, "value": to_value(&v) }));
            writeln!(text, "violation: <q_{n}, q_{n}> = 0").unwrap();
        }
        norms.push(json!({ "n": n, "value": to_value(&v) }));
    }
    let pass = violations.is_empty();
    writeln!(
        text,
        "orthogonality ({:?} mode) for {} <= n <= {max_n}: {} pairs, {}",
        bcfg.mode,
        cfg.m(),
        pairs.len(),
        if pass { "pass" } else { "FAIL" }
    )
    .unwrap();
    let config = json!({ "family": to_value(cfg), "bilinear": to_value(bcfg) });
    let mut m = header("orth-check", "orthogonality", config);
    m.insert("max_n".into(), json!(max_n));
    m.insert("pairs".into(), Value::Array(pairs));
    m.insert("norms".into(), Value::Array(norms));
    m.insert("violations".into(), Value::Array(violations));
    m.insert("verdict".into(), json!(if pass { "pass" } else { "fail" }));
    Ok(Report { json: Value::Object(m), text, violation: !pass })
}

pub fn recurrence(run: &RunConfig, q: &UniPoly, window: (usize, usize)) -> Result<Report> {
    let seq = QSequence::new(run.family.clone());
    let t = recurrence_table(q, window, &seq)?;
    let mut text = format!("Q = {q}\nwindow = [{}, {}]\n", window.0, window.1);
    match &t.band {
        Some(b) => writeln!(text, "band = [{}, {}]", b.s, b.r).unwrap(),
        None => writeln!(text, "band = empty").unwrap(),
    }
    let mut m = header("recurrence", "recurrence relation", family_echo(run));
    m.insert("table".into(), to_value(&t));
    Ok(Report { json: Value::Object(m), text, violation: false })
}

pub fn scan(run: &RunConfig, max_deg: usize, window: (usize, usize)) -> Result<Report> {
    let seq = QSequence::new(run.family.clone());
    let a = algebra_scan(max_deg, window, &seq)?;
    let mut text = format!("dimension {} (deg <= {max_deg}, window [{}, {}])\n", a.dim(), window.0, window.1);
    for p in &a.basis {
        writeln!(text, "  {p}").unwrap();
    }
    if !a.margin_ok {
        writeln!(text, "warning: window shorter than 2 max_deg + m + 2").unwrap();
    }
    let mut m = header("algebra-scan", "eigenvalue algebra", family_echo(run));
    m.insert("algebra".into(), to_value(&a));
    Ok(Report { json: Value::Object(m), text, violation: false })
}

pub fn krall(spec: &KrallSpec, window: (usize, usize), fit_max: usize, verify_max: usize) -> Result<Report> {
    let cfg = krall_build(spec)?;
    let seq = QSequence::new(cfg.clone());
    let tt = three_term_check(&seq, window)?;
    let (fit, fit_ok) = match measure_fit(&seq, fit_max, verify_max) {
        Ok(f) => {
            let ok = f.verified();
            (to_value(&f), ok)
        }
        Err(Error::Inconsistent) => (json!("inconsistent"), false),
        Err(e) => return Err(e),
    };
    let mut text = format!("family: G = {:?}, H = {:?}\n", cfg.g, cfg.h);
    for (k, p) in cfg.r.iter() {
        writeln!(text, "  R_{k}(theta) = {}", p.display_in("theta")).unwrap();
    }
    for (k, p) in cfg.s.iter() {
        writeln!(text, "  S_{k}(theta) = {}", p.display_in("theta")).unwrap();
    }
    writeln!(text, "three-term recurrence: {}", if tt.holds() { "holds" } else { "fails" }).unwrap();
    writeln!(text, "measure fit: {}", if fit_ok { "verified" } else { "fails" }).unwrap();
    let mut m = header("krall", "krall family", to_value(spec));
    m.insert("family".into(), to_value(&cfg));
    m.insert("three_term".into(), to_value(&tt));
    m.insert("measure".into(), fit);
    Ok(Report { json: Value::Object(m), text, violation: !(tt.holds() && fit_ok) })
}
