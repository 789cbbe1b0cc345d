use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::{Poly, Rat, Valuation};
use crate::error::{Error, Result};

/// Rational function `num/den` in lowest terms with a monic denominator.
/// Zero is stored as `0/1`, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// Reduces `num/den` to its unique normal form.
pub fn reduce(num: &Poly, den: &Poly) -> Result<RatFun> {
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    if num.is_zero() {
        return Ok(RatFun::zero());
    }
    let g = num.gcd(den);
    let (mut n, mut d) = if g.is_one() {
        (num.clone(), den.clone())
    } else {
        (num.div_exact(&g), den.div_exact(&g))
    };
    let lead = d.lead().expect("nonzero").clone();
    if !num_traits::One::is_one(&lead) {
        let inv = lead.recip();
        n = n.scale(&inv);
        d = d.scale(&inv);
    }
    Ok(RatFun { num: n, den: d })
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFun::from_poly(Poly::constant(c))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun { num: p, den: Poly::one() }
    }

    /// Same as [`reduce`] but panics on a zero denominator.
    pub fn new(num: Poly, den: Poly) -> Self {
        reduce(&num, &den).expect("division by zero polynomial")
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Order at `a`: the `k` with `f = (λ-a)^k u`, `u(a)` finite and nonzero.
    pub fn valuation_at(&self, a: &Rat) -> Valuation {
        match self.num.root_multiplicity(a) {
            None => Valuation::Infinite,
            Some(zn) => {
                let zd = self.den.root_multiplicity(a).expect("nonzero denominator");
                Valuation::Finite(zn as i64 - zd as i64)
            }
        }
    }

    /// `deg(den) - deg(num)`.
    pub fn valuation_at_infinity(&self) -> Valuation {
        match self.num.degree() {
            None => Valuation::Infinite,
            Some(dn) => Valuation::Finite(self.den.degree().unwrap() as i64 - dn as i64),
        }
    }

    pub fn is_proper(&self) -> bool {
        self.valuation_at_infinity() >= Valuation::Finite(0)
    }

    pub fn is_strictly_proper(&self) -> bool {
        self.valuation_at_infinity() >= Valuation::Finite(1)
    }

    pub fn is_biproper(&self) -> bool {
        self.valuation_at_infinity() == Valuation::Finite(0)
    }

    /// Value at `a`, or `None` at a pole.
    pub fn eval(&self, a: &Rat) -> Option<Rat> {
        let d = self.den.eval(a);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(a) / d)
        }
    }

    /// Value at infinity, or `None` when the function is not proper.
    pub fn eval_at_infinity(&self) -> Option<Rat> {
        let dn = self.num.degree();
        let dd = self.den.degree().unwrap();
        match dn {
            None => Some(Rat::zero()),
            Some(k) if k < dd => Some(Rat::zero()),
            Some(k) if k == dd => Some(self.num.coeff(k)),
            Some(_) => None,
        }
    }

    /// Splits into polynomial part and strictly proper remainder.
    pub fn split(&self) -> (Poly, RatFun) {
        let (q, r) = self.num.div_rem(&self.den);
        (q, RatFun { num: r, den: self.den.clone() }.renormalized())
    }

    /// `λ^g f(1/λ)`, reduced.
    pub fn reversal(&self, g: i64) -> RatFun {
        let Some(dn) = self.num.degree() else {
            return RatFun::zero();
        };
        let dd = self.den.degree().unwrap();
        let n = self.num.reverse(dn);
        let d = self.den.reverse(dd);
        let e = g + dd as i64 - dn as i64;
        if e >= 0 {
            RatFun::new(n.shift(e as usize), d)
        } else {
            RatFun::new(n, d.shift((-e) as usize))
        }
    }

    pub fn scale(&self, c: &Rat) -> RatFun {
        if c.is_zero() {
            return RatFun::zero();
        }
        RatFun { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Option<RatFun> {
        if self.is_zero() {
            return None;
        }
        Some(RatFun::new(self.den.clone(), self.num.clone()))
    }

    fn renormalized(self) -> RatFun {
        if self.num.is_zero() {
            RatFun::zero()
        } else {
            self
        }
    }
}

impl Add<&RatFun> for &RatFun {
    type Output = RatFun;

    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return RatFun::new(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = rhs.den.div_exact(&g);
        let b = self.den.div_exact(&g);
        RatFun::new(&(&self.num * &a) + &(&rhs.num * &b), &self.den * &a)
    }
}

impl Sub<&RatFun> for &RatFun {
    type Output = RatFun;

    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;

    fn neg(self) -> RatFun {
        RatFun { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul<&RatFun> for &RatFun {
    type Output = RatFun;

    fn mul(self, rhs: &RatFun) -> RatFun {
        if self.is_zero() || rhs.is_zero() {
            return RatFun::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n = &self.num.div_exact(&g1) * &rhs.num.div_exact(&g2);
        let d = &self.den.div_exact(&g2) * &rhs.den.div_exact(&g1);
        RatFun::new(n, d)
    }
}

impl Div<&RatFun> for &RatFun {
    type Output = RatFun;

    /// Panics when dividing by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &RatFun) -> RatFun {
        self * &rhs.inv().expect("division by zero rational function")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RatFun> for RatFun {
            type Output = RatFun;
            fn $method(self, rhs: RatFun) -> RatFun {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        -&self
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}

impl From<Rat> for RatFun {
    fn from(c: Rat) -> Self {
        RatFun::constant(c)
    }
}

impl super::Ring for RatFun {
    fn zero() -> Self {
        RatFun::zero()
    }
    fn one() -> Self {
        RatFun::one()
    }
    fn is_zero(&self) -> bool {
        RatFun::is_zero(self)
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

impl super::Field for RatFun {
    fn inv(&self) -> Self {
        RatFun::inv(self).expect("division by zero rational function")
    }
}

/// Bare polynomial when the denominator is one, `(num)/(den)` otherwise.
impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
