//! Jacobi-type families built from quasi-Casoratian determinants.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    int, minus_one_pow, serde_rational, serde_rational_vec, to_i64, EpsFrac, ExactMatrix, Field,
    Rational, UniPoly,
};
use crate::jacobi::{jacobi_poly, poch, poch_poly, shifted_gamma, JacobiParams};

/// Parameters, index sets and the monic theta-polynomials R_g, S_h.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FamilyJson", into = "FamilyJson")]
pub struct FamilyConfig {
    pub params: JacobiParams,
    pub g: Vec<usize>,
    pub h: Vec<usize>,
    pub r: BTreeMap<usize, UniPoly>,
    pub s: BTreeMap<usize, UniPoly>,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct Coeffs(#[serde(with = "serde_rational_vec")] Vec<Rational>);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    #[serde(with = "serde_rational")]
    alpha: Rational,
    #[serde(with = "serde_rational")]
    beta: Rational,
    #[serde(rename = "G")]
    g: Vec<usize>,
    #[serde(rename = "H")]
    h: Vec<usize>,
    #[serde(rename = "R")]
    r: BTreeMap<usize, Coeffs>,
    #[serde(rename = "S")]
    s: BTreeMap<usize, Coeffs>,
}

impl TryFrom<FamilyJson> for FamilyConfig {
    type Error = Error;
    fn try_from(j: FamilyJson) -> Result<Self> {
        let conv = |m: BTreeMap<usize, Coeffs>| {
            m.into_iter().map(|(k, c)| (k, UniPoly::from_coeffs(c.0))).collect()
        };
        FamilyConfig::new(JacobiParams::new(j.alpha, j.beta)?, j.g, j.h, conv(j.r), conv(j.s))
    }
}

impl From<FamilyConfig> for FamilyJson {
    fn from(c: FamilyConfig) -> Self {
        let conv = |m: BTreeMap<usize, UniPoly>| {
            m.into_iter().map(|(k, p)| (k, Coeffs(p.into_coeffs()))).collect()
        };
        FamilyJson {
            alpha: c.params.alpha,
            beta: c.params.beta,
            g: c.g,
            h: c.h,
            r: conv(c.r),
            s: conv(c.s),
        }
    }
}

fn check_block(name: &str, set: &[usize], polys: &BTreeMap<usize, UniPoly>) -> Result<()> {
    if set.is_empty() {
        return Err(Error::Config(format!("{name} must be nonempty")));
    }
    if set[0] == 0 || set.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!("{name} must be strictly increasing positive integers")));
    }
    let keys: Vec<usize> = polys.keys().copied().collect();
    if keys != set {
        return Err(Error::Config(format!("polynomial keys {keys:?} do not match {name} = {set:?}")));
    }
    for (&k, p) in polys {
        if p.degree() != Some(k) || !p.leading().is_one() {
            return Err(Error::Config(format!("polynomial for {k} must be monic of degree {k}")));
        }
    }
    Ok(())
}

impl FamilyConfig {
    pub fn new(
        params: JacobiParams,
        g: Vec<usize>,
        h: Vec<usize>,
        r: BTreeMap<usize, UniPoly>,
        s: BTreeMap<usize, UniPoly>,
    ) -> Result<Self> {
        check_block("G", &g, &r)?;
        check_block("H", &h, &s)?;
        for (name, v) in [
            ("alpha - m2", &params.alpha - int(h.len() as i64)),
            ("beta - m1", &params.beta - int(g.len() as i64)),
        ] {
            if to_i64(&v).is_some_and(|k| k < 0) {
                return Err(Error::InvalidParams(format!("{name} = {v} is a negative integer")));
            }
        }
        Ok(Self { params, g, h, r, s })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn m1(&self) -> usize {
        self.g.len()
    }

    pub fn m2(&self) -> usize {
        self.h.len()
    }

    pub fn m(&self) -> usize {
        self.g.len() + self.h.len()
    }

    pub fn max_g(&self) -> usize {
        *self.g.last().expect("nonempty")
    }

    pub fn max_h(&self) -> usize {
        *self.h.last().expect("nonempty")
    }

    /// Z_l for l = 1..m: the R block followed by the S block.
    pub fn z(&self, l: usize) -> &UniPoly {
        let m1 = self.m1();
        if l <= m1 {
            &self.r[&self.g[l - 1]]
        } else {
            &self.s[&self.h[l - m1 - 1]]
        }
    }
}

/// Evaluation of the determinantal ingredients over a field containing the
/// (possibly perturbed) parameters.
/// Block sizes are stored separately from `cfg` so that the same code
/// evaluates the Casoratian of a family enlarged by one row.
struct Eval<'a, T> {
    cfg: &'a FamilyConfig,
    m1: usize,
    m: usize,
    alpha: T,
    beta: T,
}

impl<'a> Eval<'a, Rational> {
    fn rational(cfg: &'a FamilyConfig) -> Self {
        Self {
            cfg,
            m1: cfg.m1(),
            m: cfg.m(),
            alpha: cfg.params.alpha.clone(),
            beta: cfg.params.beta.clone(),
        }
    }
}

impl<'a> Eval<'a, EpsFrac> {
    /// alpha + da*eps, beta + db*eps.
    fn perturbed(cfg: &'a FamilyConfig, da: i64, db: i64) -> Self {
        Self {
            cfg,
            m1: cfg.m1(),
            m: cfg.m(),
            alpha: EpsFrac::linear(cfg.params.alpha.clone(), int(da)),
            beta: EpsFrac::linear(cfg.params.beta.clone(), int(db)),
        }
    }
}

impl<T: Field> Eval<'_, T> {
    fn c(&self, k: i64) -> T {
        T::from_i64(k)
    }

    fn theta(&self, x: &T) -> T {
        x.mul_ref(&x.add_ref(&self.alpha).add_ref(&self.beta).add_ref(&T::one()))
    }

    fn rho(&self, i: usize, j: usize, x: &T) -> Result<T> {
        let (m1, m) = (self.m1, self.m as i64);
        if i > m1 {
            return Ok(T::one());
        }
        let j = j as i64;
        let za = x.add_ref(&self.alpha).add_ref(&self.c(1 - m));
        let zb = x.add_ref(&self.beta).add_ref(&self.c(1 - j));
        let v = shifted_gamma(&za, m - j)?.mul_ref(&shifted_gamma(&zb, j - 1)?);
        Ok(if (m - j) % 2 == 0 { v } else { v.neg_ref() })
    }

    fn pq(&self, x: &T) -> T {
        let (m1, m) = (self.m1 as i64, self.m as i64);
        let mut acc = T::one();
        for i in 1..m1 {
            let a = poch(&x.add_ref(&self.alpha).add_ref(&self.c(1 - m)), (m1 - i) as usize);
            let b = poch(&x.add_ref(&self.beta).add_ref(&self.c(i - m1)), (m1 - i) as usize);
            let t = a.mul_ref(&b);
            acc = acc.mul_ref(&if (m1 - i) % 2 == 0 { t } else { t.neg_ref() });
        }
        let ab = self.alpha.add_ref(&self.beta);
        let two_x = x.add_ref(x);
        for h in 1..m {
            for i in 1..=h {
                acc = acc.mul_ref(&two_x.add_ref(&ab).add_ref(&self.c(i + h - 2 * m)));
            }
        }
        if (m * (m - 1) / 2) % 2 == 1 {
            acc = acc.neg_ref();
        }
        acc
    }

    /// `[rho^{ri}_{x,j} Y(theta_{x-j})]_{j=first..=m}`.
    fn row(&self, y: &UniPoly, ri: usize, x: &T, first: usize) -> Result<Vec<T>> {
        (first..=self.m)
            .map(|j| {
                let xj = x.sub_ref(&self.c(j as i64));
                Ok(self.rho(ri, j, x)?.mul_ref(&y.eval_in(&self.theta(&xj))))
            })
            .collect()
    }

    fn family_rows(&self, x: &T) -> Result<Vec<Vec<T>>> {
        (1..=self.m).map(|l| self.row(self.cfg.z(l), l, x, 0)).collect()
    }

    /// Determinants of `rows` with column j removed, j = 0..m.
    fn minors(&self, rows: &[Vec<T>]) -> Vec<T> {
        (0..=self.m)
            .map(|j| {
                let sub: Vec<Vec<T>> = rows
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect())
                    .collect();
                ExactMatrix::from_rows(sub).det().expect("square")
            })
            .collect()
    }

    /// All `beta_{n,j}` when the denominator and every rho are finite and nonzero.
    fn betas(&self, x: &T) -> Result<Option<Vec<T>>> {
        let d = self.pq(x);
        let Some(dinv) = d.inv() else { return Ok(None) };
        let rows = match self.family_rows(x) {
            Ok(r) => r,
            Err(Error::Pole(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        Ok(Some(self.minors(&rows).into_iter().map(|v| v.mul_ref(&dinv)).collect()))
    }
}

/// Expansion coefficients of q_n in J_n, ..., J_{n-m}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaRecord {
    pub n: usize,
    #[serde(with = "serde_rational_vec")]
    pub betas: Vec<Rational>,
    /// True when the value was obtained as a limit of perturbed parameters.
    pub regularized: bool,
}

impl BetaRecord {
    pub fn lambda(&self) -> &Rational {
        &self.betas[0]
    }
}

fn betas_regularized(n: usize, cfg: &FamilyConfig) -> Result<Vec<Rational>> {
    let mut last = Error::EpsPole { order: 0 };
    for (da, db) in [(1, 1), (1, 2)] {
        let ev = Eval::perturbed(cfg, da, db);
        let x = EpsFrac::constant(int(n as i64));
        let Some(vals) = ev.betas(&x)? else { continue };
        // Coefficients of J_{n-j} with j > n multiply the zero polynomial; a
        // divergent limit there is recorded as 0.
        let limits = vals.iter().enumerate().map(|(j, v)| match v.limit() {
            Err(Error::EpsPole { .. }) if j > n => Ok(Rational::zero()),
            r => r,
        });
        match limits.collect::<Result<Vec<_>>>() {
            Ok(v) => return Ok(v),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// `beta_{n,0..m}`, falling back to a perturbation limit when the direct
/// evaluation hits a zero of p*q or a Gamma pole.
pub fn beta_record(n: usize, cfg: &FamilyConfig) -> Result<BetaRecord> {
    if let Some(betas) = Eval::rational(cfg).betas(&int(n as i64))? {
        return Ok(BetaRecord { n, betas, regularized: false });
    }
    Ok(BetaRecord { n, betas: betas_regularized(n, cfg)?, regularized: true })
}

pub fn beta_coeff(n: usize, j: usize, cfg: &FamilyConfig) -> Result<Rational> {
    if j > cfg.m() {
        return Err(Error::Precondition(format!("j = {j} exceeds m = {}", cfg.m())));
    }
    Ok(beta_record(n, cfg)?.betas[j].clone())
}

/// The quasi-Casoratian `Lambda_{G,H}(n)`.
pub fn lambda_gh(n: usize, cfg: &FamilyConfig) -> Result<Rational> {
    beta_coeff(n, 0, cfg)
}

/// `rho^i_{x,j}`.
pub fn rho_factor(i: usize, j: usize, x: &Rational, cfg: &FamilyConfig) -> Result<Rational> {
    Eval::rational(cfg).rho(i, j, x)
}

/// The polynomials `p(x)` and `q(x)` dividing the Casoratian determinants.
pub fn pq_polys(cfg: &FamilyConfig) -> (UniPoly, UniPoly) {
    let (a, b) = (&cfg.params.alpha, &cfg.params.beta);
    let (m1, m) = (cfg.m1() as i64, cfg.m() as i64);
    let mut p = UniPoly::one();
    for i in 1..m1 {
        let k = (m1 - i) as usize;
        let f = poch_poly(&(a - int(m - 1)), k) * poch_poly(&(b - int(m1 - i)), k);
        p = p * f.scale(&minus_one_pow(m1 - i));
    }
    let mut q = UniPoly::constant(minus_one_pow(m * (m - 1) / 2));
    for h in 1..m {
        for i in 1..=h {
            q = q * UniPoly::linear(a + b + int(i + h - 2 * m), int(2));
        }
    }
    (p, q)
}

/// `q_n = sum_j beta_{n,j} J_{n-j}`; fails when `Lambda(n) = 0`.
pub fn q_polynomial(n: usize, cfg: &FamilyConfig) -> Result<UniPoly> {
    QSequence::new(cfg.clone()).q(n)
}

/// Cached q_n together with its coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QEntry {
    pub record: BetaRecord,
    pub q: UniPoly,
}

/// Memoized family `q_0, q_1, ...` for one configuration.
///
/// Reads are concurrent; a missing entry is computed outside the lock and
/// inserted once.
#[derive(Debug)]
pub struct QSequence {
    config: FamilyConfig,
    entries: RwLock<BTreeMap<usize, Arc<QEntry>>>,
    jacobi: RwLock<Vec<Arc<UniPoly>>>,
}

impl Clone for QSequence {
    fn clone(&self) -> Self {
        Self {
            config: self.config.clone(),
            entries: RwLock::new(self.entries.read().expect("lock").clone()),
            jacobi: RwLock::new(self.jacobi.read().expect("lock").clone()),
        }
    }
}

impl QSequence {
    pub fn new(config: FamilyConfig) -> Self {
        Self { config, entries: RwLock::default(), jacobi: RwLock::default() }
    }

    pub fn config(&self) -> &FamilyConfig {
        &self.config
    }

    pub fn jacobi(&self, n: usize) -> Arc<UniPoly> {
        if let Some(p) = self.jacobi.read().expect("lock").get(n) {
            return p.clone();
        }
        let mut w = self.jacobi.write().expect("lock");
        while w.len() <= n {
            let k = w.len();
            w.push(Arc::new(jacobi_poly(k, &self.config.params)));
        }
        w[n].clone()
    }

    pub fn entry(&self, n: usize) -> Result<Arc<QEntry>> {
        if let Some(e) = self.entries.read().expect("lock").get(&n) {
            return Ok(e.clone());
        }
        let record = beta_record(n, &self.config)?;
        if record.lambda().is_zero() {
            return Err(Error::Degenerate { n });
        }
        let q = self.combine(&record);
        let e = Arc::new(QEntry { record, q });
        Ok(self.entries.write().expect("lock").entry(n).or_insert(e).clone())
    }

    fn combine(&self, record: &BetaRecord) -> UniPoly {
        let n = record.n;
        (0..=n.min(self.config.m())).fold(UniPoly::zero(), |acc, j| {
            acc + self.jacobi(n - j).scale(&record.betas[j])
        })
    }

    pub fn q(&self, n: usize) -> Result<UniPoly> {
        Ok(self.entry(n)?.q.clone())
    }

    pub fn lambda(&self, n: usize) -> Result<Rational> {
        Ok(self.entry(n)?.record.lambda().clone())
    }

    /// Checks `Lambda(k) != 0` for k = 0..=n, returning the first failure.
    pub fn audit(&self, n: usize) -> Result<()> {
        (0..=n).try_for_each(|k| self.entry(k).map(|_| ()))
    }

    /// Replaces `beta_{n,j}` by `beta_{n,j} + delta` in the cache. Used to
    /// check that downstream verifications detect corrupted data.
    pub fn inject_fault(&self, n: usize, j: usize, delta: &Rational) -> Result<()> {
        let mut record = self.entry(n)?.record.clone();
        record.betas[j] += delta;
        let q = self.combine(&record);
        self.entries.write().expect("lock").insert(n, Arc::new(QEntry { record, q }));
        Ok(())
    }
}

/// Replaces R_g by `R_g + sum zeta[(g, g')] R_{g'}` (g' < g) and S_h likewise.
pub fn mix_invariance(
    cfg: &FamilyConfig,
    zeta: &BTreeMap<(usize, usize), Rational>,
    chi: &BTreeMap<(usize, usize), Rational>,
) -> Result<FamilyConfig> {
    fn mix(
        set: &[usize],
        polys: &BTreeMap<usize, UniPoly>,
        coef: &BTreeMap<(usize, usize), Rational>,
    ) -> Result<BTreeMap<usize, UniPoly>> {
        let mut out = polys.clone();
        for (&(g, lower), c) in coef {
            if lower >= g || !set.contains(&g) || !set.contains(&lower) {
                return Err(Error::Config(format!("cannot mix {lower} into {g}")));
            }
            let p = &out[&g] + &polys[&lower].scale(c);
            out.insert(g, p);
        }
        Ok(out)
    }
    FamilyConfig::new(
        cfg.params.clone(),
        cfg.g.clone(),
        cfg.h.clone(),
        mix(&cfg.g, &cfg.r, zeta)?,
        mix(&cfg.h, &cfg.s, chi)?,
    )
}

fn binom2(k: i64) -> i64 {
    k * (k - 1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum WKind {
    A,
    B,
}

fn w_det(ys: &[UniPoly], cfg: &FamilyConfig, kind: WKind) -> Result<(UniPoly, i64)> {
    let m = cfg.m();
    if ys.len() != m + 1 {
        return Err(Error::Precondition(format!("expected {} polynomials, got {}", m + 1, ys.len())));
    }
    let (m1, m2) = (cfg.m1() as i64, cfg.m2() as i64);
    let mut total = 0i64;
    for y in ys {
        let d = y.degree().ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
        total += d as i64;
    }
    let d = match kind {
        WKind::A => 2 * (total - binom2(m1 + 1) - binom2(m2)),
        WKind::B => 2 * (total - binom2(m1) - binom2(m2 + 1)),
    };
    let mut ev = Eval::rational(cfg);
    ev.m = m + 1;
    if kind == WKind::A {
        ev.m1 += 1;
    }
    let needed = d.max(0) as usize + 3;
    let mut points = Vec::with_capacity(needed);
    let mut x = 0i64;
    while points.len() < needed {
        let xr = int(x);
        let shifted = int(x + 1);
        x += 1;
        let Some(dinv) = ev.pq(&shifted).inv() else { continue };
        let rows: Result<Vec<Vec<Rational>>> =
            ys.iter().enumerate().map(|(i, y)| ev.row(y, i + 1, &shifted, 1)).collect();
        let rows = match rows {
            Ok(r) => r,
            Err(Error::Pole(_)) => continue,
            Err(e) => return Err(e),
        };
        let v = ExactMatrix::from_rows(rows).det()? * dinv;
        points.push((xr, v));
    }
    let fit = UniPoly::interpolate(&points[..needed - 2]);
    if points[needed - 2..].iter().any(|(x, v)| &fit.eval(x) != v) {
        return Err(Error::Precondition("determinant ratio is not a polynomial of the expected degree".into()));
    }
    Ok((fit, d))
}

/// Bordered determinant with an extra row Y_0 joining the first block.
///
/// `ys = [Y_0, ..., Y_m]`. The rows use columns `theta_x, ..., theta_{x-m}`
/// with rho, p and q of the family with m1 + 1 and m + 1 (evaluated at
/// x + 1). Returns the polynomial and the degree bound d; the degree equals
/// d iff the degrees inside each block are distinct.
pub fn w_det_a(ys: &[UniPoly], cfg: &FamilyConfig) -> Result<(UniPoly, i64)> {
    w_det(ys, cfg, WKind::A)
}

/// Bordered determinant with an extra row Y_{m+1} joining the second block;
/// `ys = [Y_1, ..., Y_{m+1}]`.
pub fn w_det_b(ys: &[UniPoly], cfg: &FamilyConfig) -> Result<(UniPoly, i64)> {
    w_det(ys, cfg, WKind::B)
}

/// `u_j^lambda(x) = (x+alpha-lambda+1)_j (x+beta+lambda-j+1)_j`.
pub fn u_lambda_poly(j: usize, lambda: &Rational, p: &JacobiParams) -> UniPoly {
    let ji = int(j as i64);
    poch_poly(&(&p.alpha - lambda + int(1)), j) * poch_poly(&(&p.beta + lambda - ji + int(1)), j)
}

/// The polynomial T with `T(theta_x) = f(x)`.
pub fn to_theta_basis(f: &UniPoly, p: &JacobiParams) -> Result<UniPoly> {
    let theta = p.theta_poly();
    let mut rest = f.clone();
    let mut out = vec![Rational::zero(); f.degree().map_or(0, |d| d / 2 + 1)];
    while let Some(d) = rest.degree() {
        if d % 2 == 1 {
            return Err(Error::NotThetaPolynomial);
        }
        let c = rest.leading();
        rest = &rest - &theta.pow(d / 2).scale(&c);
        out[d / 2] = c;
    }
    Ok(UniPoly::from_coeffs(out))
}

/// Coefficients of each R_g and S_h in the basis `u_s^alpha`, s = 0..=deg.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UExpansion {
    #[serde(serialize_with = "ser_coeff_map")]
    pub nu: BTreeMap<usize, Vec<Rational>>,
    #[serde(serialize_with = "ser_coeff_map")]
    pub omega: BTreeMap<usize, Vec<Rational>>,
}

fn ser_coeff_map<S: serde::Serializer>(
    m: &BTreeMap<usize, Vec<Rational>>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(m.iter().map(|(k, v)| (k, v.iter().map(|r| r.to_string()).collect::<Vec<_>>())))
}

/// u-basis in theta form, index s.
fn u_basis_theta(top: usize, p: &JacobiParams) -> Vec<UniPoly> {
    (0..=top)
        .map(|s| to_theta_basis(&u_lambda_poly(s, &p.alpha, p), p).expect("u_s is symmetric"))
        .collect()
}

/// Triangular solve of `t = sum_s c_s u_s^alpha` in theta form.
pub fn expand_theta_in_u(t: &UniPoly, p: &JacobiParams) -> Vec<Rational> {
    let Some(deg) = t.degree() else { return Vec::new() };
    let basis = u_basis_theta(deg, p);
    let mut rest = t.clone();
    let mut c = vec![Rational::zero(); deg + 1];
    for s in (0..=deg).rev() {
        let a = rest.coeff(s) / basis[s].leading();
        if !a.is_zero() {
            rest = &rest - &basis[s].scale(&a);
        }
        c[s] = a;
    }
    debug_assert!(rest.is_zero());
    c
}

pub fn expand_in_u(cfg: &FamilyConfig) -> UExpansion {
    let p = &cfg.params;
    let go = |m: &BTreeMap<usize, UniPoly>| {
        m.iter().map(|(&k, t)| (k, expand_theta_in_u(t, p))).collect()
    };
    UExpansion { nu: go(&cfg.r), omega: go(&cfg.s) }
}

impl UExpansion {
    /// Rebuilds the theta-polynomials from the coefficients.
    pub fn reconstruct(&self, p: &JacobiParams) -> (BTreeMap<usize, UniPoly>, BTreeMap<usize, UniPoly>) {
        let top = self.nu.keys().chain(self.omega.keys()).copied().max().unwrap_or(0);
        let basis = u_basis_theta(top, p);
        let go = |m: &BTreeMap<usize, Vec<Rational>>| {
            m.iter()
                .map(|(&k, c)| {
                    let t = c.iter().enumerate().fold(UniPoly::zero(), |acc, (s, a)| acc + basis[s].scale(a));
                    (k, t)
                })
                .collect()
        };
        (go(&self.nu), go(&self.omega))
    }
}

/// Lower-triangular index pairs for the mixing in [`mix_invariance`].
pub fn mixing_slots(set: &[usize]) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for (i, &g) in set.iter().enumerate() {
        for &lower in &set[..i] {
            out.insert((g, lower));
        }
    }
    out
}


#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exact::rat;

    #[test]
    fn config_validation() {
        let c = ex1();
        let mut bad = c.r.clone();
        bad.insert(3, poly(&[int(1), int(0), int(0), int(2)]));
        assert!(FamilyConfig::new(c.params.clone(), c.g.clone(), c.h.clone(), bad, c.s.clone()).is_err());
        assert!(FamilyConfig::new(c.params.clone(), vec![], c.h.clone(), BTreeMap::new(), c.s.clone()).is_err());
        let ones: BTreeMap<usize, UniPoly> = [(1, UniPoly::one())].into();
        assert!(FamilyConfig::new(c.params.clone(), vec![1], vec![1], ones.clone(), ones).is_err());
    }

    #[test]
    fn json_round_trip() {
        let c = ex1();
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#""alpha":"1/2""#));
        assert!(text.contains(r#""R":{"1":["1","1"]"#));
        assert_eq!(FamilyConfig::from_json(&text).unwrap(), c);
        assert!(FamilyConfig::from_json("{").is_err());
    }

    #[test]
    fn rho_examples() {
        let c = ex1();
        assert_eq!(rho_factor(3, 2, &int(7), &c).unwrap(), int(1));
        // j = m: only the beta leg survives, sign +1
        let x = int(5);
        let (b, m) = (&c.params.beta, 3);
        let expect = crate::jacobi::gamma_ratio(&(b - int(1)), &(b - int(m)), &x).unwrap();
        assert_eq!(rho_factor(1, 3, &x, &c).unwrap(), expect);
        // m = 2, m1 = 1: rho^1_{3,1} = -(3+a-1)_1 * Gamma(3+b)/Gamma(3+b) = -(a+2)
        let mut c2 = ex1();
        c2.g = vec![1];
        c2.r.remove(&3);
        assert_eq!(rho_factor(1, 1, &int(3), &c2).unwrap(), -(rat(1, 2) + int(2)));
    }

    #[test]
    fn pq_degrees() {
        let mut c = ex1();
        c.g = vec![1];
        c.r.remove(&3);
        let (p, q) = pq_polys(&c);
        assert_eq!(p, UniPoly::one());
        assert_eq!(q.degree(), Some(1));
        let (p, q) = pq_polys(&ex1());
        assert_eq!(p.degree(), Some(2));
        assert_eq!(q.degree(), Some(3));
        let full = ex1();
        let ev = Eval::rational(&full);
        for x in 0..6 {
            assert_eq!(ev.pq(&int(x)), (&p * &q).eval(&int(x)));
        }
    }

    #[test]
    fn q0_is_lambda0() {
        let c = ex1();
        let s = QSequence::new(c.clone());
        assert_eq!(s.q(0).unwrap(), UniPoly::constant(lambda_gh(0, &c).unwrap()));
        for n in 0..8 {
            assert_eq!(s.q(n).unwrap().degree(), Some(n));
        }
    }

    #[test]
    fn lambda_at_zero_by_hand() {
        // m1 = m2 = 1: Lambda(0) = det [[rho^1_{0,1} Z1(th_{-1}), rho^1_{0,2} Z1(th_{-2})],
        //                               [Z2(th_{-1}), Z2(th_{-2})]] / q(0)
        let mut c = ex1();
        c.g = vec![1];
        c.r.remove(&3);
        let (a, b) = (rat(1, 2), rat(1, 3));
        let th = |k: i64| int(k) * (int(k) + &a + &b + int(1));
        let z1 = |t: Rational| t + int(1);
        let z2 = |t: Rational| t + rat(1, 2);
        let r1 = -(int(0) + &a - int(1)); // (x+a-1)_1 with sign (-1)^{2-1}, beta leg trivial
        let r2 = int(0) + &b - int(1); // Gamma(b)/Gamma(b-1)
        let det = &r1 * z1(th(-1)) * z2(th(-2)) - &r2 * z1(th(-2)) * z2(th(-1));
        let q0 = -(&a + &b - int(4) + int(2));
        assert_eq!(lambda_gh(0, &c).unwrap(), det / q0);
    }

    #[test]
    fn u_basis_in_theta() {
        let p = JacobiParams::new(int(1), int(1)).unwrap();
        let u1 = u_lambda_poly(1, &int(1), &p);
        assert_eq!(u1, UniPoly::from_i64(&[2, 3, 1]));
        assert_eq!(to_theta_basis(&u1, &p).unwrap(), UniPoly::from_i64(&[2, 1]));
        assert_eq!(u_lambda_poly(0, &rat(3, 2), &p), UniPoly::one());
        assert_eq!(to_theta_basis(&UniPoly::constant(rat(3, 5)), &p).unwrap(), UniPoly::constant(rat(3, 5)));
        assert_eq!(to_theta_basis(&p.theta_poly(), &p).unwrap(), UniPoly::x());
        assert_eq!(to_theta_basis(&UniPoly::x(), &p), Err(Error::NotThetaPolynomial));
    }

    #[test]
    fn u_expansion_examples() {
        let c = ex1();
        let e = expand_in_u(&c);
        for (g, nu) in &e.nu {
            assert_eq!(nu[*g], int(1));
        }
        let u1 = to_theta_basis(&u_lambda_poly(1, &c.params.alpha, &c.params), &c.params).unwrap();
        assert_eq!(e.nu[&1][0], int(1) - u1.coeff(0));
        let (r, s) = e.reconstruct(&c.params);
        assert_eq!((r, s), (c.r.clone(), c.s.clone()));
    }

    #[test]
    fn w_degree_example() {
        let mut c = ex1();
        c.g = vec![1];
        c.r.remove(&3);
        let ys = vec![
            UniPoly::from_i64(&[3, 1, 1]),
            c.z(1).clone(),
            c.z(2).clone(),
        ];
        let (w, d) = w_det_a(&ys, &c).unwrap();
        assert_eq!(d, 6);
        assert_eq!(w.degree(), Some(6));
        let dup = vec![c.z(1).clone(), c.z(1).clone(), c.z(2).clone()];
        assert!(w_det_a(&dup, &c).unwrap().0.is_zero());
    }
}
