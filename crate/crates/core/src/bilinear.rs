//! The basis b_s, pole expansions, the rational functions U_l, V_l and the
//! bilinear forms with values in Q[u, v].
//!
//! All integrals are relative to the Jacobi mass C (see [`crate::jacobi`]).
//! In Sobolev mode u and v are replaced by 1/(beta-1)! and 1/(alpha-1)!.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, int, is_integer, minus_one_pow, pow2, serde_rational_vec, to_i64, ExactMatrix,
    Rational, Ring, SymValue, UniPoly,
};
use crate::family::{expand_in_u, pq_polys, u_lambda_poly, FamilyConfig, QSequence, UExpansion};
use crate::jacobi::{binomial, gamma_ratio, jacobi_poly, normalized_moment, poch, Endpoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Generic,
    Sobolev,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BilinearConfig {
    #[serde(with = "serde_rational_vec")]
    pub kappa: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub tau: Vec<Rational>,
    pub mode: Mode,
}

fn nonpositive_integer(x: &Rational) -> bool {
    is_integer(x) && *x <= Rational::zero()
}

impl BilinearConfig {
    pub fn new(kappa: Vec<Rational>, tau: Vec<Rational>, mode: Mode) -> Self {
        Self { kappa, tau, mode }
    }

    /// All weights one.
    pub fn unit(cfg: &FamilyConfig, mode: Mode) -> Self {
        Self::new(vec![Rational::one(); cfg.m1()], vec![Rational::one(); cfg.m2()], mode)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self, cfg: &FamilyConfig) -> Result<()> {
        if self.kappa.len() != cfg.m1() || self.tau.len() != cfg.m2() {
            return Err(Error::Config(format!(
                "need {} kappa and {} tau values, got {} and {}",
                cfg.m1(),
                cfg.m2(),
                self.kappa.len(),
                self.tau.len()
            )));
        }
        let (a, b) = (&cfg.params.alpha, &cfg.params.beta);
        let (mg, mh) = (cfg.max_g() as i64, cfg.max_h() as i64);
        match self.mode {
            Mode::Generic => {
                if nonpositive_integer(&(a - int(mh))) || nonpositive_integer(&(b - int(mg))) {
                    return Err(Error::Config(
                        "generic mode needs alpha - max H and beta - max G outside 0, -1, -2, ..."
                            .into(),
                    ));
                }
            }
            Mode::Sobolev => {
                let ok = |x: &Rational, lo: usize, hi: i64| {
                    to_i64(x).is_some_and(|v| v >= lo as i64 && v <= hi)
                };
                if !ok(a, cfg.m2(), mh) || !ok(b, cfg.m1(), mg) {
                    return Err(Error::Config(format!(
                        "sobolev mode needs integer alpha in {}..={mh} and beta in {}..={mg}",
                        cfg.m2(),
                        cfg.m1()
                    )));
                }
            }
        }
        Ok(())
    }
}

/// `sum_u c_u (1 -+ x)^{-u-1}` with the pole at `center`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleExpansion {
    pub center: Endpoint,
    pub coeffs: Vec<SymValue>,
}

impl PoleExpansion {
    fn new(center: Endpoint, len: usize) -> Self {
        Self { center, coeffs: vec![SymValue::zero(); len] }
    }

    fn add(&mut self, u: usize, c: &SymValue) {
        if c.is_zero() {
            return;
        }
        if self.coeffs.len() <= u {
            self.coeffs.resize(u + 1, SymValue::zero());
        }
        self.coeffs[u] = self.coeffs[u].add_ref(c);
    }

    /// `int p(x) * self(x) dmu / C`.
    pub fn integrate(&self, p: &UniPoly, cfg: &FamilyConfig) -> Result<SymValue> {
        let mut acc = SymValue::zero();
        for (u, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = -(u as i64) - 1;
            let mom = match self.center {
                Endpoint::Minus => normalized_moment(p, 0, e, &cfg.params)?,
                Endpoint::Plus => normalized_moment(p, e, 0, &cfg.params)?,
            };
            acc = acc + c.scale(&mom);
        }
        Ok(acc)
    }
}

fn one_plus_x() -> UniPoly {
    UniPoly::from_i64(&[1, 1])
}

fn one_minus_x() -> UniPoly {
    UniPoly::from_i64(&[1, -1])
}

/// `b_s`, s >= 1.
pub fn basis_b(s: usize, cfg: &FamilyConfig) -> UniPoly {
    assert!(s >= 1, "basis index starts at 1");
    let (m1, m2, m) = (cfg.m1(), cfg.m2(), cfg.m());
    if s <= m1 {
        one_plus_x().pow(s - 1) * one_minus_x().pow(m2)
    } else if s <= m {
        one_plus_x().pow(m1) * one_minus_x().pow(s - m1 - 1)
    } else {
        one_plus_x().pow(m1) * one_minus_x().pow(m2) * UniPoly::monomial(Rational::one(), s - m - 1)
    }
}

fn binom_u(n: usize, k: i64) -> Rational {
    binomial(&int(n as i64), k)
}

/// `gamma_1..` with `x^i = sum_s gamma_s b_s`; entry s-1 holds gamma_s.
pub fn change_of_basis(i: usize, cfg: &FamilyConfig) -> Vec<Rational> {
    let (m1, m2, m) = (cfg.m1(), cfg.m2(), cfg.m());
    let ii = i as i64;
    let mut g = vec![Rational::zero(); (i + 1).max(m)];
    let two = int(-2);
    for l in 1..=m1 {
        let li = l as i64;
        let mut v = minus_one_pow(ii + li + 1) * binom_u(i, li - 1) / pow2(m2 as i64);
        for h in 1..l {
            v -= num_traits::pow(two.clone(), l - h).recip() * binom_u(m2, li - h as i64) * &g[h - 1];
        }
        g[l - 1] = v;
    }
    for l in 1..=m2 {
        let li = l as i64;
        let mut v = minus_one_pow(li + 1) * binom_u(i, li - 1) / pow2(m1 as i64);
        for h in 1..l {
            v -= num_traits::pow(two.clone(), l - h).recip()
                * binom_u(m1, li - h as i64)
                * &g[m1 + h - 1];
        }
        g[m1 + l - 1] = v;
    }
    let mut rest = UniPoly::monomial(Rational::one(), i);
    for (s, c) in g.iter().enumerate().take(m) {
        rest = rest - basis_b(s + 1, cfg).scale(c);
    }
    let (quo, rem) = rest.div_rem(&basis_b(m + 1, cfg));
    debug_assert!(rem.is_zero());
    for (k, c) in quo.coeffs().iter().enumerate() {
        g[m + k] = c.clone();
    }
    g
}

/// The pole expansions phi_s (centre -1) and psi_t (centre +1).
pub fn phi_psi(cfg: &FamilyConfig) -> (Vec<PoleExpansion>, Vec<PoleExpansion>) {
    let (m1, m2, m) = (cfg.m1(), cfg.m2(), cfg.m());
    let two = int(-2);
    let mut phi: Vec<PoleExpansion> = vec![PoleExpansion::new(Endpoint::Minus, 0); m1];
    for i in (1..=m1).rev() {
        let mut r = PoleExpansion::new(Endpoint::Minus, m1);
        r.add(m1 - i, &SymValue::constant(int(-1)));
        for l in i..m1.min(i + m2) {
            let co = num_traits::pow(two.clone(), l + 1 - i).recip() * binom_u(m2, (l + 1 - i) as i64);
            for (u, c) in phi[l].coeffs.clone().iter().enumerate() {
                r.add(u, &c.scale(&-&co));
            }
        }
        phi[i - 1] = r;
    }
    let mut psi: Vec<PoleExpansion> = vec![PoleExpansion::new(Endpoint::Plus, 0); m2];
    let lead = num_traits::pow(two.clone(), m1);
    for i in (m1 + 1..=m).rev() {
        let t = i - m1 - 1;
        let mut r = PoleExpansion::new(Endpoint::Plus, m2);
        r.add(m - i, &SymValue::constant(int(-1)));
        for l in t + 1..m2.min(i) {
            let co = num_traits::pow(two.clone(), i - l - 1) * binom_u(m1, (i - l - 1) as i64);
            for (u, c) in psi[l].coeffs.clone().iter().enumerate() {
                r.add(u, &c.scale(&-&co));
            }
        }
        r.coeffs = r.coeffs.iter().map(|c| c.scale(&lead.recip())).collect();
        psi[t] = r;
    }
    (phi, psi)
}

fn sobolev_drops(mode: Mode, pc: &Rational) -> bool {
    mode == Mode::Sobolev && pc.is_zero()
}

/// U_l and V_l; the 1/Gamma(beta) and 1/Gamma(alpha) factors are carried by u and v.
pub fn big_uv(
    cfg: &FamilyConfig,
    bcfg: &BilinearConfig,
    uexp: &UExpansion,
) -> (Vec<PoleExpansion>, Vec<PoleExpansion>) {
    let (a, b) = (&cfg.params.alpha, &cfg.params.beta);
    let (mut us, mut vs) = phi_psi(cfg);
    for (l, ul) in us.iter_mut().enumerate() {
        let nu = &uexp.nu[&cfg.g[l]];
        for (s, c) in nu.iter().enumerate() {
            let pc = poch(&(b - int(s as i64)), s);
            if sobolev_drops(bcfg.mode, &pc) {
                continue;
            }
            let w = &bcfg.kappa[l] * pc * pow2(s as i64) * factorial(s as u64) * c;
            ul.add(s, &SymValue::monomial(1, 0, w));
        }
    }
    for (l, vl) in vs.iter_mut().enumerate() {
        let om = &uexp.omega[&cfg.h[l]];
        for (s, c) in om.iter().enumerate() {
            let pc = poch(&(a - int(s as i64)), s);
            if sobolev_drops(bcfg.mode, &pc) {
                continue;
            }
            let w = &bcfg.tau[l] * pc * pow2(s as i64) * factorial(s as u64) * c;
            vl.add(s, &SymValue::monomial(0, 1, w));
        }
    }
    (us, vs)
}

/// Point-evaluation part of the Sobolev form at one endpoint, without the
/// weight, the boundary factor of q, or u/v.
fn sobolev_point_sum(
    p: &UniPoly,
    top: usize,
    coeffs: &[Rational],
    at: Endpoint,
    cfg: &FamilyConfig,
) -> Result<Rational> {
    let (a, b) = (&cfg.params.alpha, &cfg.params.beta);
    let ab = a + b;
    let (par, x0, flip) = match at {
        Endpoint::Minus => (b, int(-1), false),
        Endpoint::Plus => (a, int(1), true),
    };
    let pi = to_i64(par).expect("sobolev parameters are integers");
    let mut acc = Rational::zero();
    for j in 0..=(top as i64 - pi) {
        let mut pj = p.nth_derivative(j as usize).eval(&x0) * pow2(j) / factorial(j as u64);
        if flip {
            pj *= minus_one_pow(j);
        }
        if pj.is_zero() {
            continue;
        }
        for s in (pi + j)..=top as i64 {
            let c = &coeffs[s as usize];
            if c.is_zero() {
                continue;
            }
            acc += &pj
                * poch(&(par - int(s)), j as usize)
                * factorial(s as u64)
                * c
                * gamma_ratio(&(&ab + int(1)), &(&ab - int(s) + int(j)), &Rational::zero())?;
        }
    }
    Ok(acc / (int(2) * par))
}

/// A bilinear form bound to a family and its weights.
#[derive(Clone, Debug)]
pub struct BilinearForm {
    cfg: FamilyConfig,
    bcfg: BilinearConfig,
    uexp: UExpansion,
    u: Vec<PoleExpansion>,
    v: Vec<PoleExpansion>,
}

impl BilinearForm {
    pub fn new(cfg: &FamilyConfig, bcfg: &BilinearConfig) -> Result<Self> {
        Self::with_expansion(cfg, bcfg, &expand_in_u(cfg))
    }

    pub fn with_expansion(cfg: &FamilyConfig, bcfg: &BilinearConfig, uexp: &UExpansion) -> Result<Self> {
        bcfg.validate(cfg)?;
        let (u, v) = big_uv(cfg, bcfg, uexp);
        Ok(Self { cfg: cfg.clone(), bcfg: bcfg.clone(), uexp: uexp.clone(), u, v })
    }

    pub fn config(&self) -> &FamilyConfig {
        &self.cfg
    }

    pub fn bilinear_config(&self) -> &BilinearConfig {
        &self.bcfg
    }

    pub fn mode(&self) -> Mode {
        self.bcfg.mode
    }

    pub fn uv(&self) -> (&[PoleExpansion], &[PoleExpansion]) {
        (&self.u, &self.v)
    }

    /// Values of u and v in Sobolev mode.
    pub fn sobolev_uv(&self) -> Option<(Rational, Rational)> {
        if self.bcfg.mode != Mode::Sobolev {
            return None;
        }
        let f = |x: &Rational| factorial((to_i64(x).expect("integer") - 1) as u64).recip();
        Some((f(&self.cfg.params.beta), f(&self.cfg.params.alpha)))
    }

    /// Collapses u and v to numbers in Sobolev mode.
    pub fn normalize(&self, x: SymValue) -> SymValue {
        match self.sobolev_uv() {
            Some((u, v)) => SymValue::constant(x.substitute(&u, &v)),
            None => x,
        }
    }

    pub fn pair(&self, p: &UniPoly, q: &UniPoly) -> Result<SymValue> {
        let cfg = &self.cfg;
        let (m1, m2) = (cfg.m1(), cfg.m2());
        let sob = self.bcfg.mode == Mode::Sobolev;
        let mut res = SymValue::constant(normalized_moment(&(p * q), -(m2 as i64), -(m1 as i64), &cfg.params)?);
        for l in 0..m1 {
            let w = q.nth_derivative(l).eval(&int(-1)) / (pow2(m2 as i64) * factorial(l as u64));
            if w.is_zero() {
                continue;
            }
            let mut val = self.u[l].integrate(p, cfg)?;
            if sob {
                let g = cfg.g[l];
                let t = sobolev_point_sum(p, g, &self.uexp.nu[&g], Endpoint::Minus, cfg)?;
                val.add_term(1, 0, &(&self.bcfg.kappa[l] * t));
            }
            res = res + val.scale(&w);
        }
        for l in 0..m2 {
            let w = q.nth_derivative(l).eval(&int(1)) * minus_one_pow((m1 + l) as i64) / factorial(l as u64);
            if w.is_zero() {
                continue;
            }
            let mut val = self.v[l].integrate(p, cfg)?;
            if sob {
                let h = cfg.h[l];
                let t = sobolev_point_sum(p, h, &self.uexp.omega[&h], Endpoint::Plus, cfg)?;
                val.add_term(0, 1, &(&self.bcfg.tau[l] * t));
            }
            res = res + val.scale(&w);
        }
        Ok(self.normalize(res))
    }

    /// Both sides of the pairing identity for `(1 +- x)^k J_{n-j}` against b_i.
    pub fn key_lemma_check(&self, k: usize, n: usize, j: usize, i: usize) -> Result<(SymValue, SymValue)> {
        let cfg = &self.cfg;
        let (m1, m2, m) = (cfg.m1(), cfg.m2(), cfg.m());
        if j > n || n - j < k || i == 0 || i > m {
            return Err(Error::Precondition(format!(
                "need n - j >= k >= 0 and 1 <= i <= m; got k = {k}, n = {n}, j = {j}, i = {i}"
            )));
        }
        let pv = &cfg.params;
        let (a, b) = (&pv.alpha, &pv.beta);
        let v = n - j;
        let vr = int(v as i64);
        let side = if i <= m1 { one_plus_x() } else { one_minus_x() };
        let lhs = self.pair(&(side.pow(k) * jacobi_poly(v, pv)), &basis_b(i, cfg))?;
        let ki = k as i64;
        let inner = |coeffs: &[Rational], par: &Rational| {
            let mut acc = Rational::zero();
            for s in k..coeffs.len() {
                if coeffs[s].is_zero() {
                    continue;
                }
                acc += pow2(ki)
                    * &coeffs[s]
                    * poch(&(par - int(s as i64)), k)
                    * poch(&int((s - k + 1) as i64), k)
                    * u_lambda_poly(s - k, a, pv).eval(&vr);
            }
            acc
        };
        let ii = i as i64;
        let two = int(-2);
        let rhs = if i <= m1 {
            let pre = minus_one_pow(ii) * pow2(ii - 1) * (a + b + int(1)) * poch(&(a + int(1)), v)
                / poch(b, v + 1);
            let mut acc = Rational::zero();
            for l in (i - 1)..m1.min(m2 + i) {
                let g = cfg.g[l];
                acc += &self.bcfg.kappa[l] * binom_u(m2, (l + 1 - i) as i64)
                    / num_traits::pow(two.clone(), l + 1)
                    * inner(&self.uexp.nu[&g], b);
            }
            SymValue::monomial(1, 0, pre * acc)
        } else {
            let pre = minus_one_pow((n + i + j) as i64) * pow2(ii - 1) * (a + b + int(1)) / a;
            let mut acc = Rational::zero();
            for l in (i - m1 - 1)..m2.min(i) {
                let h = cfg.h[l];
                acc += &self.bcfg.tau[l] * binom_u(m1, (i - l - 1) as i64)
                    / num_traits::pow(two.clone(), l + 1)
                    * inner(&self.uexp.omega[&h], a);
            }
            SymValue::monomial(0, 1, pre * acc)
        };
        Ok((lhs, self.normalize(rhs)))
    }

    /// `det(<q_j, x^i>)` for i, j < m together with its closed form.
    pub fn det_a(&self, seq: &QSequence) -> Result<(SymValue, SymValue)> {
        let cfg = &self.cfg;
        let (m1, m2, m) = (cfg.m1(), cfg.m2(), cfg.m());
        if !self.bcfg.kappa.iter().chain(&self.bcfg.tau).all(One::is_one) {
            return Err(Error::Precondition("all kappa and tau must be 1".into()));
        }
        let qs = (0..m).map(|j| seq.q(j)).collect::<Result<Vec<_>>>()?;
        let mut mat = ExactMatrix::zeros(m, m);
        for i in 0..m {
            let xi = UniPoly::monomial(Rational::one(), i);
            for (j, qj) in qs.iter().enumerate() {
                mat.set(i, j, self.pair(qj, &xi)?);
            }
        }
        let det = mat.det()?;
        let (a, b) = (&cfg.params.alpha, &cfg.params.beta);
        let (pp, qq) = pq_polys(cfg);
        let mr = int(m as i64);
        let mut c = closed_form_sign(cfg)
            * pp.eval(&mr)
            * qq.eval(&mr)
            * num_traits::pow(a + b + int(1), m)
            / (pow2(m as i64) * num_traits::pow(a.clone(), m2) * num_traits::pow(poch(b, m), m1));
        for j in 0..=m {
            c *= seq.lambda(j)?;
        }
        let closed = SymValue::monomial(m1 as u32, m2 as u32, c);
        Ok((det, self.normalize(closed)))
    }
}

/// Sign of the determinant closed form, `(-1)^{C(m2,2) + m1 m2}`.
///
/// The factor `(-1)^{m1 m2}` is absent from the usual statement of the
/// formula; without it the closed form has the wrong sign whenever m1 m2 is
/// odd.
pub fn closed_form_sign(cfg: &FamilyConfig) -> Rational {
    let (m1, m2) = (cfg.m1(), cfg.m2());
    minus_one_pow((m2 * m2.saturating_sub(1) / 2 + m1 * m2) as i64)
}

/// Free-function form of [`BilinearForm::pair`].
pub fn pair(
    p: &UniPoly,
    q: &UniPoly,
    cfg: &FamilyConfig,
    bcfg: &BilinearConfig,
    uexp: &UExpansion,
) -> Result<SymValue> {
    BilinearForm::with_expansion(cfg, bcfg, uexp)?.pair(p, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::family::fixtures::*;

    fn simple(m1: usize, m2: usize) -> FamilyConfig {
        let g: Vec<usize> = (1..=m1).collect();
        let h: Vec<usize> = (1..=m2).collect();
        let mk = |k: &[usize]| {
            k.iter()
                .map(|&d| {
                    let mut c = vec![int(1); d + 1];
                    c[0] = rat(d as i64, 7);
                    (d, poly(&c))
                })
                .collect()
        };
        FamilyConfig::new(
            crate::jacobi::JacobiParams::new(rat(3, 7), rat(2, 9)).unwrap(),
            g.clone(),
            h.clone(),
            mk(&g),
            mk(&h),
        )
        .unwrap()
    }

    #[test]
    fn basis_examples() {
        let c = simple(1, 1);
        assert_eq!(basis_b(1, &c), UniPoly::from_i64(&[1, -1]));
        assert_eq!(basis_b(2, &c), UniPoly::from_i64(&[1, 1]));
        assert_eq!(basis_b(3, &c), UniPoly::from_i64(&[1, 0, -1]));
        let c = simple(2, 1);
        assert_eq!(basis_b(2, &c), UniPoly::from_i64(&[1, 0, -1]));
    }

    #[test]
    fn change_of_basis_examples() {
        let c = simple(1, 1);
        assert_eq!(change_of_basis(0, &c), vec![rat(1, 2), rat(1, 2)]);
        for c in [simple(1, 1), simple(2, 1), simple(1, 3), simple(3, 2), ex1()] {
            for i in 0..=10 {
                let g = change_of_basis(i, &c);
                assert_eq!(g.len(), (i + 1).max(c.m()));
                let back = g
                    .iter()
                    .enumerate()
                    .fold(UniPoly::zero(), |acc, (s, gs)| acc + basis_b(s + 1, &c).scale(gs));
                assert_eq!(back, UniPoly::monomial(int(1), i), "i = {i}");
            }
        }
    }

    /// `phi_l` times `(1+x)^{m1}` as a polynomial.
    fn cleared(e: &PoleExpansion, m: usize) -> UniPoly {
        let base = match e.center {
            Endpoint::Minus => one_plus_x(),
            Endpoint::Plus => one_minus_x(),
        };
        e.coeffs.iter().enumerate().fold(UniPoly::zero(), |acc, (u, c)| {
            assert!(c.terms().keys().all(|k| *k == (0, 0)));
            acc + base.pow(m - u - 1).scale(&c.coeff(0, 0))
        })
    }

    #[test]
    fn phi_psi_solve_their_relations() {
        for c in [simple(1, 1), simple(2, 1), simple(1, 3), simple(3, 2), simple(4, 4)] {
            let (m1, m2, m) = (c.m1(), c.m2(), c.m());
            let (phi, psi) = phi_psi(&c);
            assert_eq!(cleared(&phi[m1 - 1], m1), -one_plus_x().pow(m1 - 1));
            for i in 1..=m1 {
                let mut lhs = UniPoly::zero();
                for l in (i - 1)..m1.min(i + m2) {
                    let co = num_traits::pow(int(-2), l + 1 - i).recip() * binom_u(m2, (l + 1 - i) as i64);
                    lhs = lhs + cleared(&phi[l], m1).scale(&co);
                }
                assert_eq!(lhs, -one_plus_x().pow(i - 1));
            }
            for i in (m1 + 1)..=m {
                let mut lhs = UniPoly::zero();
                for l in (i - m1 - 1)..m2.min(i) {
                    let co = num_traits::pow(int(-2), i - l - 1) * binom_u(m1, (i - l - 1) as i64);
                    lhs = lhs + cleared(&psi[l], m2).scale(&co);
                }
                assert_eq!(lhs, -one_minus_x().pow(i - m1 - 1));
            }
        }
    }

    #[test]
    fn uv_terms() {
        let c = ex1();
        let ue = expand_in_u(&c);
        let zero = BilinearConfig::new(vec![int(0); 2], vec![int(0)], Mode::Generic);
        let (u, _) = big_uv(&c, &zero, &ue);
        assert_eq!(u, phi_psi(&c).0);
        let b = BilinearConfig::new(vec![rat(2, 7), rat(-3, 5)], vec![rat(5, 4)], Mode::Generic);
        let (u, _) = big_uv(&c, &b, &ue);
        let phi = phi_psi(&c).0;
        for l in 0..2 {
            let nu0 = &ue.nu[&c.g[l]][0];
            assert_eq!(u[l].coeffs[0].coeff(1, 0), &b.kappa[l] * nu0);
            assert_eq!(u[l].coeffs[0].coeff(0, 0), phi[l].coeffs[0].coeff(0, 0));
        }
        let c = ex2();
        let (u, v) = big_uv(&c, &BilinearConfig::unit(&c, Mode::Sobolev), &expand_in_u(&c));
        assert!(u[0].coeffs.iter().skip(1).all(|x| x.coeff(1, 0).is_zero()));
        assert!(v.iter().all(|e| e.coeffs.iter().skip(2).all(|x| x.coeff(0, 1).is_zero())));
    }

    #[test]
    fn config_rules() {
        let c = ex1();
        assert!(BilinearConfig::unit(&c, Mode::Generic).validate(&c).is_ok());
        assert!(BilinearConfig::unit(&c, Mode::Sobolev).validate(&c).is_err());
        assert!(BilinearConfig::new(vec![int(1)], vec![int(1)], Mode::Generic).validate(&c).is_err());
        let c = ex2();
        assert!(BilinearConfig::unit(&c, Mode::Sobolev).validate(&c).is_ok());
        assert!(BilinearConfig::unit(&c, Mode::Generic).validate(&c).is_err());
        let j = r#"{"kappa": ["2/7", "-3/5"], "tau": [1], "mode": "generic"}"#;
        let b = BilinearConfig::from_json(j).unwrap();
        assert_eq!(b.kappa, vec![rat(2, 7), rat(-3, 5)]);
        assert!(BilinearConfig::from_json(r#"{"kappa": [], "tau": [], "mode": "x"}"#).is_err());
    }

    #[test]
    fn constant_part_is_shifted_mass() {
        let c = ex1();
        let f = BilinearForm::new(&c, &BilinearConfig::unit(&c, Mode::Generic)).unwrap();
        // q = x^m kills every boundary term at -1 up to order m1-1 only when it vanishes there;
        // use q = b_{m+1}, which vanishes to full order at both ends.
        let q = basis_b(c.m() + 1, &c);
        let want = normalized_moment(&q, -1, -2, &c.params).unwrap();
        assert_eq!(f.pair(&UniPoly::one(), &q).unwrap(), SymValue::constant(want));
    }

    #[test]
    fn key_lemma_samples() {
        let c = ex1();
        let b = BilinearConfig::new(vec![rat(2, 7), rat(-3, 5)], vec![rat(5, 4)], Mode::Generic);
        let f = BilinearForm::new(&c, &b).unwrap();
        for (k, n, j, i) in [(0, 3, 1, 1), (1, 4, 2, 2), (2, 5, 0, 3), (0, 0, 0, 3)] {
            let (l, r) = f.key_lemma_check(k, n, j, i).unwrap();
            assert_eq!(l, r, "k={k} n={n} j={j} i={i}");
        }
        let c = ex2();
        let f = BilinearForm::new(&c, &BilinearConfig::new(vec![rat(2, 7)], vec![rat(5, 4)], Mode::Sobolev)).unwrap();
        for (k, n, j, i) in [(0, 3, 1, 1), (1, 4, 2, 2), (2, 5, 0, 2)] {
            let (l, r) = f.key_lemma_check(k, n, j, i).unwrap();
            assert_eq!(l, r, "k={k} n={n} j={j} i={i}");
        }
    }

    #[test]
    fn det_a_matches_closed_form() {
        let c = ex1();
        let f = BilinearForm::new(&c, &BilinearConfig::unit(&c, Mode::Generic)).unwrap();
        let (d, cf) = f.det_a(&QSequence::new(c.clone())).unwrap();
        assert_eq!(d, cf);
        assert_eq!(d.as_monomial().map(|(k, _)| k), Some((2, 1)));
    }
}
