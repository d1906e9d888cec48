use std::fmt::Debug;

use num_traits::{One, Zero};

use super::Rational;

/// Commutative ring with exact division where it exists.
pub trait Ring: Clone + PartialEq + Debug + Zero + One {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// `self / d` when `d` divides `self`, `None` otherwise.
    fn div_exact(&self, d: &Self) -> Option<Self>;
}

/// Ring containing the rationals in which every nonzero element is invertible.
pub trait Field: Ring {
    fn from_rational(r: &Rational) -> Self;
    fn inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&super::int(n))
    }
}

/// Implements the std operator traits and `Zero`/`One` on top of `Ring`.
macro_rules! ring_ops {
    ($t:ty, $zero:expr, $one:expr) => {
        impl std::ops::Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                $crate::exact::Ring::add_ref(&self, &rhs)
            }
        }
        impl std::ops::Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                $crate::exact::Ring::sub_ref(&self, &rhs)
            }
        }
        impl std::ops::Mul for $t {
            type Output = $t;
            fn mul(self, rhs: $t) -> $t {
                $crate::exact::Ring::mul_ref(&self, &rhs)
            }
        }
        impl std::ops::Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                $crate::exact::Ring::neg_ref(&self)
            }
        }
        impl num_traits::Zero for $t {
            fn zero() -> $t {
                $zero
            }
            fn is_zero(&self) -> bool {
                *self == $zero
            }
        }
        impl num_traits::One for $t {
            fn one() -> $t {
                $one
            }
        }
    };
}
pub(crate) use ring_ops;
