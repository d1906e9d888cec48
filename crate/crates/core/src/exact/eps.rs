use std::fmt;

use num_traits::Zero;

use super::{Field, Rational, Ring, UniPoly};
use crate::error::{Error, Result};

/// Rational function in a perturbation symbol eps, kept in lowest terms
/// with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EpsFrac {
    num: UniPoly,
    den: UniPoly,
}

impl EpsFrac {
    /// `None` when the denominator is zero.
    pub fn new(num: UniPoly, den: UniPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        if num.is_zero() {
            return Some(Self { num, den: UniPoly::one() });
        }
        let (num, den) = if den.degree() == Some(0) {
            (num, den)
        } else {
            let g = UniPoly::gcd(&num, &den);
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        let lc = den.leading().recip();
        Some(Self { num: num.scale(&lc), den: den.scale(&lc) })
    }

    pub fn from_poly(p: UniPoly) -> Self {
        Self { num: p, den: UniPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(UniPoly::constant(c))
    }

    /// `c0 + c1 eps`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::from_poly(UniPoly::linear(c0, c1))
    }

    pub fn eps() -> Self {
        Self::from_poly(UniPoly::x())
    }

    pub fn numer(&self) -> &UniPoly {
        &self.num
    }

    pub fn denom(&self) -> &UniPoly {
        &self.den
    }

    /// Value at eps = 0 after cancelling the common power of eps.
    pub fn limit(&self) -> Result<Rational> {
        let Some(on) = self.num.order() else {
            return Ok(Rational::zero());
        };
        let od = self.den.order().expect("denominator is nonzero");
        match on.cmp(&od) {
            std::cmp::Ordering::Less => Err(Error::EpsPole { order: od - on }),
            std::cmp::Ordering::Greater => Ok(Rational::zero()),
            std::cmp::Ordering::Equal => Ok(self.num.coeff(on) / self.den.coeff(od)),
        }
    }
}

super::ring::ring_ops!(
    EpsFrac,
    EpsFrac::from_poly(UniPoly::zero()),
    EpsFrac::from_poly(UniPoly::one())
);

impl Ring for EpsFrac {
    fn add_ref(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self::new(&self.num + &other.num, self.den.clone()).expect("nonzero");
        }
        Self::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
        .expect("nonzero")
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero")
    }
    fn neg_ref(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }
    fn div_exact(&self, d: &Self) -> Option<Self> {
        d.inv().map(|i| self.mul_ref(&i))
    }
}

impl Field for EpsFrac {
    fn from_rational(r: &Rational) -> Self {
        Self::constant(r.clone())
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Self::new(self.den.clone(), self.num.clone())
        }
    }
}

impl fmt::Display for EpsFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num.display_in("e"))
        } else {
            write!(f, "({}) / ({})", self.num.display_in("e"), self.den.display_in("e"))
        }
    }
}

impl fmt::Debug for EpsFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EpsFrac({self})")
    }
}

#[cfg(test)]
mod tests {
    use num_traits::One;

    use super::*;
    use crate::exact::{int, rat};

    fn frac(n: &[i64], d: &[i64]) -> EpsFrac {
        EpsFrac::new(UniPoly::from_i64(n), UniPoly::from_i64(d)).unwrap()
    }

    #[test]
    fn limits() {
        assert_eq!(frac(&[0, 1, 1], &[0, 1]).limit().unwrap(), int(1));
        assert_eq!(EpsFrac::constant(rat(7, 2)).limit().unwrap(), rat(7, 2));
        assert_eq!(frac(&[0, 0, 3], &[0, 0, 2, 1]).limit().unwrap(), rat(3, 2));
        assert_eq!(frac(&[1], &[0, 1]).limit(), Err(Error::EpsPole { order: 1 }));
    }

    #[test]
    fn normal_form_is_canonical() {
        let a = frac(&[0, 2, 2], &[0, 4]);
        let b = frac(&[1, 1], &[2]);
        assert_eq!(a, b);
        assert_eq!(a.denom(), &UniPoly::one());
    }

    #[test]
    fn field_ops() {
        let a = frac(&[1, 1], &[0, 1]);
        let inv = a.inv().unwrap();
        assert_eq!(a.mul_ref(&inv), EpsFrac::one());
        assert!(a.sub_ref(&a).is_zero());
        assert!(EpsFrac::new(UniPoly::one(), UniPoly::zero()).is_none());
    }
}
