//! Exact scalars: rationals, univariate polynomials over ℚ and reduced
//! rational functions, plus the small ring/field abstraction the matrix
//! code is generic over.

mod parse;
mod poly;
mod ratfun;
mod roots;

use std::fmt;
use std::ops::Add;

use num_traits::{One, Zero};

pub use parse::{parse_point, parse_poly, parse_rat, parse_ratfun};
pub use poly::{poly_gcd, Poly};
pub use ratfun::{reduce, RatFun};
pub use roots::{coprime_basis, rational_roots, split_rational, squarefree_parts, Factor};

/// Arbitrary precision rational number, always in lowest terms.
pub type Rat = num_rational::BigRational;

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Builds the rational `n/d`. Panics if `d == 0`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// Commutative ring operations used by the generic matrix code.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// A ring in which every nonzero element is invertible.
pub trait Field: Ring {
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }
}

impl Ring for Rat {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Field for Rat {
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// A point of the extended line: a rational number or the point at infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Point {
    Finite(Rat),
    Infinity,
}

impl Point {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Point::Finite(x) => Some(x),
            Point::Infinity => None,
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(x) => write!(f, "{x}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

impl From<Rat> for Point {
    fn from(x: Rat) -> Self {
        Point::Finite(x)
    }
}

/// Order of a rational function at a point. The zero function has
/// order [`Valuation::Infinite`], which compares above every finite order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::Infinite => None,
        }
    }
}

impl Add for Valuation {
    type Output = Valuation;

    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}
