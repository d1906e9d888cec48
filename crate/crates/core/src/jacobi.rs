//! Jacobi polynomials, Pochhammer symbols, Gamma ratios and moments of the
//! Jacobi weight.
//!
//! Integrals against `(1-x)^a (1+x)^b` are reported relative to the total
//! mass `C = 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)` of the
//! unshifted weight, so every value is rational.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{
    factorial, int, minus_one_pow, pow2, serde_rational, to_i64, Field, Rational, UniPoly,
};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JacobiParams {
    #[serde(with = "serde_rational")]
    pub alpha: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
}

fn is_negative_integer(r: &Rational) -> bool {
    to_i64(r).is_some_and(|k| k < 0)
}

impl JacobiParams {
    /// Rejects alpha, beta or alpha+beta in {-1, -2, ...}.
    pub fn new(alpha: Rational, beta: Rational) -> Result<Self> {
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("alpha+beta", &(&alpha + &beta))] {
            if is_negative_integer(v) {
                return Err(Error::InvalidParams(format!("{name} = {v} is a negative integer")));
            }
        }
        Ok(Self { alpha, beta })
    }

    pub fn theta(&self, n: &Rational) -> Rational {
        theta_eig(n, self)
    }

    /// `theta_x = x (x + alpha + beta + 1)` as a polynomial in x.
    pub fn theta_poly(&self) -> UniPoly {
        UniPoly::from_coeffs(vec![Rational::zero(), &self.alpha + &self.beta + int(1), int(1)])
    }
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: &Rational, n: i64) -> Result<Rational> {
    if n < 0 {
        return Err(Error::Precondition(format!("pochhammer length {n} is negative")));
    }
    Ok(poch(a, n as usize))
}

/// Rising factorial over any field.
pub fn poch<T: Field>(a: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut f = a.clone();
    for _ in 0..n {
        acc = acc.mul_ref(&f);
        f = f.add_ref(&T::one());
    }
    acc
}

/// `(x + a)_n` as a polynomial in x.
pub fn poch_poly(a: &Rational, n: usize) -> UniPoly {
    (0..n).fold(UniPoly::one(), |acc, i| {
        acc * UniPoly::linear(a + int(i as i64), Rational::one())
    })
}

/// `Gamma(z + d) / Gamma(z)` for integer d.
///
/// For d >= 0 this is the polynomial `(z)_d`, which vanishes when
/// `Gamma(z)` has a pole. For d < 0 it is `1 / (z + d)_{-d}` and a vanishing
/// Pochhammer is a divergence.
pub fn shifted_gamma<T: Field>(z: &T, d: i64) -> Result<T> {
    if d >= 0 {
        return Ok(poch(z, d as usize));
    }
    let base = z.add_ref(&T::from_i64(d));
    poch(&base, d.unsigned_abs() as usize)
        .inv()
        .ok_or_else(|| Error::Pole(format!("Gamma({base:?}) / Gamma({z:?})")))
}

/// `Gamma(x + a + 1) / Gamma(x + c + 1)`; requires `a - c` integral.
pub fn gamma_ratio(a: &Rational, c: &Rational, x: &Rational) -> Result<Rational> {
    let d = to_i64(&(a - c))
        .ok_or_else(|| Error::Precondition(format!("a - c = {} is not an integer", a - c)))?;
    shifted_gamma(&(x + c + int(1)), d)
}

/// Generalized binomial `(a - k + 1)_k / k!`, zero for k < 0.
pub fn binomial(a: &Rational, k: i64) -> Rational {
    if k < 0 {
        return Rational::zero();
    }
    poch(&(a - int(k) + int(1)), k as usize) / factorial(k as u64)
}

fn binom_i(a: i64, k: i64) -> Rational {
    binomial(&int(a), k)
}

/// `J_n^{a,b}(x) = (-1)^n (a+b+1)_n / (2^n (b+1)_n)
///   sum_j C(n+a, j) C(n+b, n-j) (x-1)^{n-j} (x+1)^j`.
pub fn jacobi_poly(n: usize, p: &JacobiParams) -> UniPoly {
    let (a, b) = (&p.alpha, &p.beta);
    let ni = n as i64;
    let pre = minus_one_pow(ni) * poch(&(a + b + int(1)), n) / (pow2(ni) * poch(&(b + int(1)), n));
    let xm = UniPoly::from_i64(&[-1, 1]);
    let xp = UniPoly::from_i64(&[1, 1]);
    let mut acc = UniPoly::zero();
    for j in 0..=n {
        let c = binomial(&(a + int(ni)), j as i64) * binomial(&(b + int(ni)), (n - j) as i64);
        if c.is_zero() {
            continue;
        }
        acc = acc + (xm.pow(n - j) * xp.pow(j)).scale(&c);
    }
    acc.scale(&pre)
}

/// `n (n + alpha + beta + 1)`.
pub fn theta_eig(n: &Rational, p: &JacobiParams) -> Rational {
    n * (n + &p.alpha + &p.beta + int(1))
}

/// Mass of the weight with parameters `(alpha+i, beta+j)` relative to C.
pub fn normalized_mass(i: i64, j: i64, p: &JacobiParams) -> Result<Rational> {
    let (a, b) = (&p.alpha, &p.beta);
    let ab1 = a + b + int(1);
    let zero = Rational::zero();
    Ok(pow2(i + j)
        * gamma_ratio(&(a + int(i)), a, &zero)?
        * gamma_ratio(&(b + int(j)), b, &zero)?
        * gamma_ratio(&ab1, &(&ab1 + int(i + j)), &zero)?)
}

/// `int f(x) (1-x)^{alpha+i} (1+x)^{beta+j} dx / C`, by expanding f in powers of 1+x.
pub fn normalized_moment(f: &UniPoly, i: i64, j: i64, p: &JacobiParams) -> Result<Rational> {
    let g = f.shift(&int(-1));
    let mut acc = Rational::zero();
    for (k, c) in g.coeffs().iter().enumerate() {
        if !c.is_zero() {
            acc += c * normalized_mass(i, j + k as i64, p)?;
        }
    }
    Ok(acc)
}

/// `int J_n (1-x)^alpha (1+x)^{beta-l} dx / C` in closed form.
pub fn jacobi_weighted_integral(n: i64, l: i64, p: &JacobiParams) -> Result<Rational> {
    if l < 1 || n < 0 {
        return Err(Error::Precondition(format!("need l >= 1, n >= 0; got n = {n}, l = {l}")));
    }
    let (a, b) = (&p.alpha, &p.beta);
    let zero = Rational::zero();
    let ab = a + b;
    Ok(pow2(-l)
        * (&ab + int(1))
        * binom_i(n + l - 1, l - 1)
        * poch(&(a + int(1)), n as usize)
        * gamma_ratio(&(b - int(l)), &(b + int(n)), &zero)?
        * gamma_ratio(&(&ab + int(n)), &(&ab + int(n - l + 1)), &zero)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Endpoint {
    #[serde(rename = "-1")]
    Minus,
    #[serde(rename = "+1")]
    Plus,
}

/// `((1+x)^k J_n)^{(j)}(-1)` for `Minus`, `((1-x)^k J_n)^{(j)}(1)` for `Plus`.
pub fn boundary_derivative(n: i64, k: i64, j: i64, at: Endpoint, p: &JacobiParams) -> Rational {
    let (a, b) = (&p.alpha, &p.beta);
    let ab = a + b;
    let pre = factorial(j as u64) * pow2(k - j) * poch(&(&ab + int(1)), n as usize)
        / poch(&(b + int(1)), n as usize)
        * binomial(&(&ab + int(n + j - k)), j - k);
    match at {
        Endpoint::Minus => minus_one_pow(j + k) * pre * binomial(&(b + int(n)), n - j + k),
        Endpoint::Plus => minus_one_pow(n + k) * pre * binomial(&(a + int(n)), n - j + k),
    }
}

/// Both sides of the binomial identity
/// `sum_j C(s-b-k, j-k) C(u+a+b-k+j, b-k+j) C(u+a+b-s+k, a+b-s+j)
///   = C(u+a+b, a) C(u+s-k, s-k)`.
pub fn combinatorial_identity(
    alpha: i64,
    beta: i64,
    s: i64,
    k: i64,
    u: i64,
) -> Result<(Rational, Rational)> {
    if alpha < 0 || beta < 0 || s < 0 || k < 0 || u < 0 || s < beta + k {
        return Err(Error::Precondition(format!(
            "need nonnegative arguments with s >= beta + k; got ({alpha}, {beta}, {s}, {k}, {u})"
        )));
    }
    let ab = alpha + beta;
    let lhs = (0..=s - beta).fold(Rational::zero(), |acc, j| {
        acc + binom_i(s - beta - k, j - k)
            * binom_i(u + ab - k + j, beta - k + j)
            * binom_i(u + ab - s + k, ab - s + j)
    });
    let rhs = binom_i(u + ab, alpha) * binom_i(u + s - k, s - k);
    Ok((lhs, rhs))
}
