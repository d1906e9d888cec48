//! Recurrence relations in n: expansion of `Q q_n` in the q-basis, band
//! certificates, algebra scans, three-term detection, Krall families and
//! fitting of their point-mass measures.
//!
//! Band and algebra results are window certificates: vanishing is checked
//! exactly for every n in a finite window.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::bilinear::{BilinearConfig, Mode};
use crate::error::{Error, Result};
use crate::exact::{
    int, minus_one_pow, serde_rational_vec, to_i64, ExactMatrix, Rational, UniPoly,
};
use crate::family::{to_theta_basis, u_lambda_poly, FamilyConfig, QSequence};
use crate::jacobi::{binomial, normalized_moment, poch, Endpoint, JacobiParams};

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Computes q_0..=q_top, in parallel.
pub fn prefetch(seq: &QSequence, top: usize) -> Result<()> {
    (0..=top).into_par_iter().try_for_each(|k| seq.entry(k).map(|_| ()))
}

/// Coefficients c_k with `p = sum_k c_k q_k`.
pub fn expand_in_q(p: &UniPoly, seq: &QSequence) -> Result<Vec<Rational>> {
    let Some(d) = p.degree() else { return Ok(Vec::new()) };
    let mut rest = p.clone();
    let mut c = vec![Rational::zero(); d + 1];
    for k in (0..=d).rev() {
        let e = seq.entry(k)?;
        if e.q.degree() != Some(k) {
            return Err(Error::Degenerate { n: k });
        }
        let a = rest.coeff(k) / e.q.leading();
        if !a.is_zero() {
            rest = rest - e.q.scale(&a);
        }
        c[k] = a;
    }
    debug_assert!(rest.is_zero());
    Ok(c)
}

/// Smallest and largest j with some nonzero `gamma_{n,j}` in the window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Band {
    pub s: i64,
    pub r: i64,
}

impl Serialize for Band {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("s", &self.s)?;
        m.serialize_entry("r", &self.r)?;
        m.serialize_entry("certificate", "window")?;
        m.end()
    }
}

/// `Q q_n = sum_j gamma_{n,j} q_{n+j}` for every n in a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceTable {
    pub q: UniPoly,
    pub window: (usize, usize),
    /// `rows[n][k]` is `gamma_{n, k-n}`.
    rows: BTreeMap<usize, Vec<Rational>>,
    pub band: Option<Band>,
}

impl RecurrenceTable {
    pub fn gamma(&self, n: usize, j: i64) -> Rational {
        let k = n as i64 + j;
        if k < 0 {
            return Rational::zero();
        }
        self.rows.get(&n).and_then(|r| r.get(k as usize)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn rows(&self) -> &BTreeMap<usize, Vec<Rational>> {
        &self.rows
    }

    /// Nonzero `(n, j, gamma)` with j below `bound`, in window order.
    pub fn below(&self, bound: i64) -> impl Iterator<Item = (usize, i64, &Rational)> + '_ {
        self.rows.iter().flat_map(move |(&n, r)| {
            r.iter()
                .enumerate()
                .map(move |(k, g)| (n, k as i64 - n as i64, g))
                .filter(move |(_, j, g)| *j < bound && !g.is_zero())
        })
    }

    /// Re-checks the identity for one n by polynomial arithmetic.
    pub fn verify(&self, seq: &QSequence, n: usize) -> Result<bool> {
        let Some(row) = self.rows.get(&n) else {
            return Err(Error::Precondition(format!("n = {n} is outside the window")));
        };
        let mut rhs = UniPoly::zero();
        for (k, g) in row.iter().enumerate() {
            if !g.is_zero() {
                rhs = rhs + seq.entry(k)?.q.scale(g);
            }
        }
        Ok(rhs == &self.q * &seq.entry(n)?.q)
    }
}

impl Serialize for RecurrenceTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let gamma: BTreeMap<String, String> = self
            .rows
            .iter()
            .flat_map(|(&n, r)| {
                r.iter().enumerate().filter(|(_, g)| !g.is_zero()).map(move |(k, g)| {
                    (format!("{n},{}", k as i64 - n as i64), g.to_string())
                })
            })
            .collect();
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("Q", &strings(self.q.coeffs()))?;
        m.serialize_entry("window", &[self.window.0, self.window.1])?;
        m.serialize_entry("gamma", &gamma)?;
        m.serialize_entry("band", &self.band)?;
        m.end()
    }
}

fn band_of(rows: &BTreeMap<usize, Vec<Rational>>) -> Option<Band> {
    let mut out: Option<Band> = None;
    for (&n, r) in rows {
        for (k, g) in r.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let j = k as i64 - n as i64;
            out = Some(match out {
                None => Band { s: j, r: j },
                Some(b) => Band { s: b.s.min(j), r: b.r.max(j) },
            });
        }
    }
    out
}

/// Expansion of `Q q_n` for n in `window`, computed in parallel over n.
pub fn recurrence_table(q: &UniPoly, window: (usize, usize), seq: &QSequence) -> Result<RecurrenceTable> {
    let (n0, n1) = window;
    if n0 > n1 {
        return Err(Error::Precondition(format!("empty window {n0}:{n1}")));
    }
    prefetch(seq, n1 + q.degree().unwrap_or(0))?;
    let rows = (n0..=n1)
        .into_par_iter()
        .map(|n| Ok((n, expand_in_q(&(q * &seq.entry(n)?.q), seq)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let band = band_of(&rows);
    Ok(RecurrenceTable { q: q.clone(), window, rows, band })
}

/// Exponents `(p1, p2)` such that `(1+x)^p1 (1-x)^p2 | Q'` guarantees a recurrence.
pub fn divisibility_exponents(cfg: &FamilyConfig, mode: Mode) -> (usize, usize) {
    let (mg, mh) = (cfg.max_g(), cfg.max_h());
    match mode {
        Mode::Generic => (mg, mh),
        Mode::Sobolev => {
            let b = to_i64(&cfg.params.beta).unwrap_or(0).max(0) as usize;
            let a = to_i64(&cfg.params.alpha).unwrap_or(0).max(0) as usize;
            ((mg + 1).saturating_sub(b).max(b), (mh + 1).saturating_sub(a).max(a))
        }
    }
}

/// Constants together with the primitives of `(1+x)^p1 (1-x)^p2 x^k` of degree at most `max_deg`.
pub fn divisibility_family(max_deg: usize, cfg: &FamilyConfig, mode: Mode) -> Vec<UniPoly> {
    let (p1, p2) = divisibility_exponents(cfg, mode);
    let w = UniPoly::from_i64(&[1, 1]).pow(p1) * UniPoly::from_i64(&[1, -1]).pow(p2);
    let mut out = vec![UniPoly::one()];
    let mut k = 0;
    while p1 + p2 + k < max_deg {
        out.push((&w * &UniPoly::monomial(Rational::one(), k)).integral());
        k += 1;
    }
    out
}

/// Basis of the polynomials Q with `deg Q <= max_deg` whose recurrence has
/// no terms below `-max_deg` anywhere in the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraBasis {
    /// Reduced echelon basis, pivots on leading coefficients.
    pub basis: Vec<UniPoly>,
    pub max_deg: usize,
    pub window: (usize, usize),
    /// Whether the window length reaches `2 max_deg + m + 2`.
    pub margin_ok: bool,
}

impl Serialize for AlgebraBasis {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let b: Vec<Vec<String>> = self.basis.iter().map(|p| strings(p.coeffs())).collect();
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("basis", &b)?;
        m.serialize_entry("max_deg", &self.max_deg)?;
        m.serialize_entry("window", &[self.window.0, self.window.1])?;
        m.serialize_entry("margin_ok", &self.margin_ok)?;
        m.serialize_entry("certificate", "window")?;
        m.end()
    }
}

/// Rows are coefficient vectors listed from degree `top` down to 0.
fn descending(p: &UniPoly, top: usize) -> Vec<Rational> {
    (0..=top).rev().map(|k| p.coeff(k)).collect()
}

fn from_descending(v: &[Rational]) -> UniPoly {
    UniPoly::from_coeffs(v.iter().rev().cloned().collect())
}

/// Reduced echelon form of a spanning set, pivoting on top degrees.
pub fn canonical_span(polys: &[UniPoly], top: usize) -> Vec<UniPoly> {
    if polys.is_empty() {
        return Vec::new();
    }
    let m = ExactMatrix::from_rows(polys.iter().map(|p| descending(p, top)).collect());
    let (r, piv) = m.rref();
    (0..piv.len()).map(|i| from_descending(r.row(i))).collect()
}

impl AlgebraBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, p: &UniPoly) -> bool {
        if p.degree().is_some_and(|d| d > self.max_deg) {
            return false;
        }
        let mut all = self.basis.clone();
        all.push(p.clone());
        canonical_span(&all, self.max_deg).len() == self.dim()
    }

    pub fn same_span(&self, others: &[UniPoly]) -> bool {
        let top = others.iter().filter_map(UniPoly::degree).max().unwrap_or(0).max(self.max_deg);
        canonical_span(others, top) == canonical_span(&self.basis, top)
    }
}

/// Nullspace scan for the degree-bounded part of the recurrence algebra.
pub fn algebra_scan(max_deg: usize, window: (usize, usize), seq: &QSequence) -> Result<AlgebraBasis> {
    let (n0, n1) = window;
    if n0 > n1 {
        return Err(Error::Precondition(format!("empty window {n0}:{n1}")));
    }
    prefetch(seq, n1 + max_deg)?;
    let blocks = (n0..=n1)
        .into_par_iter()
        .map(|n| {
            let qn = seq.entry(n)?.q.clone();
            let ex = (0..=max_deg)
                .map(|k| expand_in_q(&(&UniPoly::monomial(Rational::one(), k) * &qn), seq))
                .collect::<Result<Vec<_>>>()?;
            let rows: Vec<Vec<Rational>> = (0..n.saturating_sub(max_deg))
                .map(|t| {
                    ex.iter().map(|e| e.get(t).cloned().unwrap_or_else(Rational::zero)).collect()
                })
                .collect();
            Ok(rows)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Rational>> = blocks.into_iter().flatten().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    let null = if rows.is_empty() {
        (0..=max_deg)
            .map(|k| {
                let mut v = vec![Rational::zero(); max_deg + 1];
                v[k] = Rational::one();
                v
            })
            .collect()
    } else {
        ExactMatrix::from_rows(rows).nullspace()
    };
    let polys: Vec<UniPoly> = null.into_iter().map(UniPoly::from_coeffs).collect();
    let m = seq.config().m();
    Ok(AlgebraBasis {
        basis: canonical_span(&polys, max_deg),
        max_deg,
        window,
        margin_ok: n1 - n0 + 1 >= 2 * max_deg + m + 2,
    })
}

/// The data `(side, g, u)` of a shifted-power obstruction: Q has lowest
/// power u in `(1 -+ x)` and `g - u >= 0` is missing from the index set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub side: Endpoint,
    pub index: usize,
    pub shift: usize,
}

/// Checks whether Q meets the hypothesis that rules out any finite-band recurrence.
pub fn obstruction(q: &UniPoly, cfg: &FamilyConfig) -> Option<Obstruction> {
    if q.is_zero() {
        return None;
    }
    let plus = q.shift(&int(-1));
    let minus = q.compose(&UniPoly::from_i64(&[1, -1]));
    let sides = [(Endpoint::Minus, plus, &cfg.g), (Endpoint::Plus, minus, &cfg.h)];
    for (side, p, set) in sides {
        let u = p.order().expect("nonzero");
        if let Some(&g) = set.iter().find(|&&g| g >= u && !set.contains(&(g - u))) {
            return Some(Obstruction { side, index: g, shift: u });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonexistenceReport {
    pub obstruction: Option<Obstruction>,
    /// First `(n, j)` with `j < -deg Q` and `gamma_{n,j} != 0`.
    pub witness: Option<(usize, i64)>,
}

pub fn nonexistence_witness(q: &UniPoly, seq: &QSequence, window: (usize, usize)) -> Result<NonexistenceReport> {
    let t = recurrence_table(q, window, seq)?;
    let d = q.degree().unwrap_or(0) as i64;
    let witness = t.below(-d).next().map(|(n, j, _)| (n, j));
    Ok(NonexistenceReport { obstruction: obstruction(q, seq.config()), witness })
}

/// Integer parameters and point-mass data of a Krall family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KrallSpec {
    pub alpha: usize,
    pub beta: usize,
    pub m1: usize,
    pub m2: usize,
    #[serde(with = "serde_rational_vec")]
    pub a: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub b: Vec<Rational>,
}

impl KrallSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.m1 == 0 || self.m2 == 0 {
            return bad("m1 and m2 must be positive");
        }
        if self.alpha < self.m2 || self.beta < self.m1 {
            return bad("need alpha >= m2 and beta >= m1");
        }
        if self.a.len() != self.m1 || self.b.len() != self.m2 {
            return bad("need m1 values of a and m2 values of b");
        }
        if self.a[0].is_zero() || self.b[0].is_zero() {
            return bad("a_0 and b_0 must be nonzero");
        }
        Ok(())
    }
}

/// `u_{p+k-1}^alpha + sum_l (p+k-l)_l C(k-1, l) c_{k-l-1} / ((-1)^l (p-l)_l) u_l^alpha` in theta form.
fn krall_poly(p: usize, k: usize, c: &[Rational], jp: &JacobiParams) -> Result<UniPoly> {
    let pr = int(p as i64);
    let mut f = u_lambda_poly(p + k - 1, &jp.alpha, jp);
    for l in 0..k {
        let li = l as i64;
        let w = poch(&(&pr + int(k as i64 - li)), l) * binomial(&int(k as i64 - 1), li) * &c[k - l - 1]
            / (minus_one_pow(li) * poch(&(&pr - int(li)), l));
        f = f + u_lambda_poly(l, &jp.alpha, jp).scale(&w);
    }
    to_theta_basis(&f, jp)
}

/// The segment family `G = {beta..beta+m1-1}`, `H = {alpha..alpha+m2-1}`.
pub fn krall_build(spec: &KrallSpec) -> Result<FamilyConfig> {
    spec.validate()?;
    let jp = JacobiParams::new(int(spec.alpha as i64), int(spec.beta as i64))?;
    let g: Vec<usize> = (spec.beta..spec.beta + spec.m1).collect();
    let h: Vec<usize> = (spec.alpha..spec.alpha + spec.m2).collect();
    let mut r = BTreeMap::new();
    for k in 1..=spec.m1 {
        r.insert(g[k - 1], krall_poly(spec.beta, k, &spec.a, &jp)?);
    }
    let mut s = BTreeMap::new();
    for k in 1..=spec.m2 {
        s.insert(h[k - 1], krall_poly(spec.alpha, k, &spec.b, &jp)?);
    }
    FamilyConfig::new(jp, g, h, r, s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TtrrRow {
    pub n: usize,
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
}

impl Serialize for TtrrRow {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("a", &self.a.to_string())?;
        m.serialize_entry("b", &self.b.to_string())?;
        m.serialize_entry("c", &self.c.to_string())?;
        m.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum ThreeTerm {
    /// `x q_n = a_n q_{n+1} + b_n q_n + c_n q_{n-1}`, re-verified for each row.
    Holds { rows: Vec<TtrrRow> },
    Fails { n: usize, j: i64, #[serde(serialize_with = "ser_rational")] gamma: Rational },
}

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl ThreeTerm {
    pub fn holds(&self) -> bool {
        matches!(self, ThreeTerm::Holds { .. })
    }
}

pub fn three_term_check(seq: &QSequence, window: (usize, usize)) -> Result<ThreeTerm> {
    let t = recurrence_table(&UniPoly::x(), window, seq)?;
    if let Some((n, j, g)) = t.below(-1).next() {
        return Ok(ThreeTerm::Fails { n, j, gamma: g.clone() });
    }
    let mut rows = Vec::new();
    for n in window.0..=window.1 {
        let row = TtrrRow { n, a: t.gamma(n, 1), b: t.gamma(n, 0), c: t.gamma(n, -1) };
        let mut rhs = seq.entry(n + 1)?.q.scale(&row.a) + seq.entry(n)?.q.scale(&row.b);
        if n > 0 {
            rhs = rhs + seq.entry(n - 1)?.q.scale(&row.c);
        }
        if rhs != UniPoly::x() * seq.entry(n)?.q.clone() {
            return Err(Error::Precondition(format!("three-term row {n} failed re-verification")));
        }
        rows.push(row);
    }
    Ok(ThreeTerm::Holds { rows })
}

/// Point masses `c_h` at +1 and `d_h` at -1 completing the shifted Jacobi
/// weight, relative to the Jacobi mass C, with `<delta_a^{(h)}, f> = (-1)^h f^{(h)}(a)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureFit {
    pub c: Vec<Rational>,
    pub d: Vec<Rational>,
    /// Dimension of the solution space of the fitting system.
    pub free: usize,
    pub fit_pairs: usize,
    pub verified_pairs: usize,
    /// Pairs outside the fit set where the fitted pairing does not vanish.
    pub failures: Vec<(usize, usize)>,
}

impl Serialize for MeasureFit {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("c", &strings(&self.c))?;
        m.serialize_entry("d", &strings(&self.d))?;
        m.serialize_entry("free", &self.free)?;
        m.serialize_entry("fit_pairs", &self.fit_pairs)?;
        m.serialize_entry("verified_pairs", &self.verified_pairs)?;
        m.serialize_entry("failures", &self.failures)?;
        m.end()
    }
}

impl MeasureFit {
    pub fn verified(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn pair(&self, p: &UniPoly, q: &UniPoly, cfg: &FamilyConfig) -> Result<Rational> {
        let (row, base) = measure_row(&(p * q), cfg)?;
        let w = self.c.iter().chain(&self.d);
        Ok(row.iter().zip(w).fold(base, |acc, (r, x)| acc + r * x))
    }
}

/// Coefficients of the unknowns `(c, d)` and the integral part for `f = p q`.
fn measure_row(f: &UniPoly, cfg: &FamilyConfig) -> Result<(Vec<Rational>, Rational)> {
    let (m1, m2) = (cfg.m1(), cfg.m2());
    let base = normalized_moment(f, -(m2 as i64), -(m1 as i64), &cfg.params)?;
    let mut row = Vec::with_capacity(m1 + m2);
    for (count, at) in [(m2, int(1)), (m1, int(-1))] {
        for h in 0..count {
            row.push(minus_one_pow(h as i64) * f.nth_derivative(h).eval(&at));
        }
    }
    Ok((row, base))
}

/// Solves for the point masses on pairs `i < n <= fit_max` and checks the
/// remaining pairs with `n <= verify_max`. An inconsistent system means the
/// family is not orthogonal for any such measure.
pub fn measure_fit(seq: &QSequence, fit_max: usize, verify_max: usize) -> Result<MeasureFit> {
    let cfg = seq.config();
    BilinearConfig::unit(cfg, Mode::Sobolev).validate(cfg).map_err(|_| {
        Error::Precondition("measure fitting needs Sobolev-admissible integer parameters".into())
    })?;
    prefetch(seq, verify_max.max(fit_max))?;
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for n in 1..=fit_max {
        for i in 0..n {
            let (r, base) = measure_row(&(&seq.entry(n)?.q * &seq.entry(i)?.q), cfg)?;
            rows.push(r);
            rhs.push(-base);
        }
    }
    let sol = ExactMatrix::from_rows(rows).solve_affine(&rhs)?;
    let (m1, m2) = (cfg.m1(), cfg.m2());
    let mut fit = MeasureFit {
        c: sol.particular[..m2].to_vec(),
        d: sol.particular[m2..m2 + m1].to_vec(),
        free: sol.directions.len(),
        fit_pairs: rhs.len(),
        verified_pairs: 0,
        failures: Vec::new(),
    };
    let checks: Vec<(usize, usize)> =
        (fit_max + 1..=verify_max).flat_map(|n| (0..n).map(move |i| (n, i))).collect();
    let bad = checks
        .par_iter()
        .map(|&(n, i)| Ok((n, i, fit.pair(&seq.entry(n)?.q, &seq.entry(i)?.q, cfg)?.is_zero())))
        .collect::<Result<Vec<_>>>()?;
    fit.verified_pairs = bad.len();
    fit.failures = bad.into_iter().filter(|x| !x.2).map(|(n, i, _)| (n, i)).collect();
    Ok(fit)
}
