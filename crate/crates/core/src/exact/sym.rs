use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Pow, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use super::{Rational, Ring};

/// Element of Q[u, v] stored as exponent pair -> nonzero coefficient.
///
/// In the bilinear forms u stands for 1/Gamma(beta) and v for 1/Gamma(alpha).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct SymValue {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl SymValue {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn u() -> Self {
        Self::monomial(1, 0, Rational::one())
    }

    pub fn v() -> Self {
        Self::monomial(0, 1, Rational::one())
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), Rational> {
        &self.terms
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term `c u^i v^j`, if there is exactly one.
    pub fn as_monomial(&self) -> Option<((u32, u32), &Rational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect() }
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: &Rational) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// Substitutes numeric values for u and v.
    pub fn substitute(&self, u: &Rational, v: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(i, j), c)| c * Pow::pow(u, i) * Pow::pow(v, j))
            .fold(Rational::zero(), |a, b| a + b)
    }

    fn key(i: u32, j: u32) -> String {
        match (i, j) {
            (0, 0) => "1".to_string(),
            _ => format!("u^{i}*v^{j}"),
        }
    }
}

super::ring::ring_ops!(SymValue, SymValue::zero(), SymValue::one());

impl Ring for SymValue {
    fn add_ref(&self, other: &Self) -> Self {
        let mut r = self.clone();
        for (&(i, j), c) in &other.terms {
            r.add_term(i, j, c);
        }
        r
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        let mut r = SymValue::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                r.add_term(i + k, j + l, &(a * b));
            }
        }
        r
    }
    fn neg_ref(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
    /// Multivariate division under the lex order u > v.
    fn div_exact(&self, d: &Self) -> Option<Self> {
        let (&(di, dj), dc) = d.terms.iter().next_back()?;
        let mut rem = self.clone();
        let mut q = SymValue::zero();
        while let Some((&(ri, rj), rc)) = rem.terms.iter().next_back() {
            if ri < di || rj < dj {
                return None;
            }
            let t = SymValue::monomial(ri - di, rj - dj, rc / dc);
            rem = rem.sub_ref(&t.mul_ref(d));
            q = q.add_ref(&t);
        }
        Some(q)
    }
}

impl Serialize for SymValue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.terms.len()))?;
        for (&(i, j), c) in &self.terms {
            map.serialize_entry(&Self::key(i, j), &c.to_string())?;
        }
        map.end()
    }
}

impl fmt::Display for SymValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(i, j), c)| match (i, j) {
                (0, 0) => c.to_string(),
                _ => format!("({c})*{}", Self::key(i, j)),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SymValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymValue({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};

    #[test]
    fn exact_division_inverts_product() {
        let a = SymValue::u().add_ref(&SymValue::constant(rat(2, 3)));
        let b = SymValue::v().mul_ref(&SymValue::u()).add_ref(&SymValue::v().scale(&int(5)));
        let p = a.mul_ref(&b);
        assert_eq!(p.div_exact(&b), Some(a.clone()));
        assert_eq!(p.div_exact(&a), Some(b));
        assert_eq!(SymValue::u().div_exact(&SymValue::v()), None);
    }

    #[test]
    fn cancellation_drops_terms() {
        let a = SymValue::u();
        assert!(a.sub_ref(&a).is_zero());
    }

    #[test]
    fn serializes_with_keys() {
        let s = SymValue::constant(rat(1, 2)).add_ref(&SymValue::monomial(2, 1, int(-3)));
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"1":"1/2","u^2*v^1":"-3"}"#);
    }

    #[test]
    fn substitution() {
        let s = SymValue::monomial(1, 2, int(3));
        assert_eq!(s.substitute(&int(2), &rat(1, 2)), rat(3, 2));
    }
}
