//! Ready-made family configurations used by tests, benches and the CLI.

use std::collections::BTreeMap;

use crate::exact::{parse_rational, Rational, UniPoly};
use crate::family::FamilyConfig;
use crate::jacobi::JacobiParams;

fn r(s: &str) -> Rational {
    parse_rational(s).expect("literal rational")
}

/// Polynomial from ascending coefficient literals.
pub fn poly(c: &[&str]) -> UniPoly {
    UniPoly::from_coeffs(c.iter().map(|s| r(s)).collect())
}

fn build(alpha: &str, beta: &str, r_polys: &[(usize, &[&str])], s_polys: &[(usize, &[&str])]) -> FamilyConfig {
    let rm: BTreeMap<usize, UniPoly> = r_polys.iter().map(|(k, c)| (*k, poly(c))).collect();
    let sm: BTreeMap<usize, UniPoly> = s_polys.iter().map(|(k, c)| (*k, poly(c))).collect();
    FamilyConfig::new(
        JacobiParams::new(r(alpha), r(beta)).expect("valid parameters"),
        rm.keys().copied().collect(),
        sm.keys().copied().collect(),
        rm,
        sm,
    )
    .expect("valid sample")
}

/// alpha = 1/2, beta = 1/3, G = {1, 3}, H = {1}.
pub fn gapped() -> FamilyConfig {
    build("1/2", "1/3", &[(1, &["1", "1"]), (3, &["1", "2/3", "1/3", "1"])], &[(1, &["1/2", "1"])])
}

/// alpha = 2, beta = 1, G = {1}, H = {2}; admissible for the Sobolev form.
pub fn integer_sobolev() -> FamilyConfig {
    build("2", "1", &[(1, &["1", "1"])], &[(2, &["1/2", "2/3", "1"])])
}

/// alpha = 7/3, beta = -1/5, G = {2}, H = {1, 2}.
pub fn generic_wide_h() -> FamilyConfig {
    build(
        "7/3",
        "-1/5",
        &[(2, &["1", "3", "1"])],
        &[(1, &["2", "1"]), (2, &["-1", "1/2", "1"])],
    )
}

/// alpha = 5/4, beta = 2/3, G = {1, 2}, H = {2}.
pub fn generic_segment_g() -> FamilyConfig {
    build(
        "5/4",
        "2/3",
        &[(1, &["-1/3", "1"]), (2, &["2", "-1", "1"])],
        &[(2, &["3/5", "1/2", "1"])],
    )
}

/// alpha = 11/3, beta = 17/4, G = {2}, H = {1}.
pub fn generic_single() -> FamilyConfig {
    build("11/3", "17/4", &[(2, &["-2/5", "1/6", "1"])], &[(1, &["-1/5", "1"])])
}

/// Every generic sample.
pub fn generic_all() -> Vec<(&'static str, FamilyConfig)> {
    vec![
        ("gapped", gapped()),
        ("generic_wide_h", generic_wide_h()),
        ("generic_segment_g", generic_segment_g()),
        ("generic_single", generic_single()),
    ]
}
