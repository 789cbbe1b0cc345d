use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Rat};
use crate::error::{Error, Result};

/// Dense univariate polynomial over ℚ, coefficients stored lowest degree
/// first. Trailing zeros are never stored, so the zero polynomial is the
/// empty list and `degree()` returns `None` for it.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Poly::new(vec![c])
    }

    /// The monomial `λ`.
    pub fn x() -> Self {
        Poly::new(vec![Rat::zero(), Rat::one()])
    }

    /// `c·λ^k`.
    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.push(c);
        Poly::new(coeffs)
    }

    /// `λ - a`.
    pub fn linear_root(a: &Rat) -> Self {
        Poly::new(vec![-a.clone(), Rat::one()])
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Coefficient of `λ^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for nonzero constants and for zero.
    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Divides by the leading coefficient. The zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.lead().is_some_and(|l| l.is_one())
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// `λ^k · p(1/λ)`. Requires `k >= deg p`.
    pub fn reverse(&self, k: usize) -> Poly {
        match self.degree() {
            None => Poly::zero(),
            Some(d) => {
                assert!(k >= d, "reversal grade below degree");
                let mut coeffs = vec![Rat::zero(); k + 1];
                for (i, c) in self.coeffs.iter().enumerate() {
                    coeffs[k - i] = c.clone();
                }
                Poly::new(coeffs)
            }
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer(i.into()))
                .collect(),
        )
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division, `None` when dividing by zero.
    pub fn checked_div_rem(&self, d: &Poly) -> Option<(Poly, Poly)> {
        let dd = d.degree()?;
        let lead_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * dj;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Euclidean division. Panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        self.checked_div_rem(d).expect("division by zero polynomial")
    }

    /// Quotient of an exact division; panics if `d` is zero.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Monic lcm; zero if either argument is zero.
    pub fn lcm(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        (self * &other.div_exact(&self.gcd(other))).monic()
    }

    /// Multiplicity of the root `a`; `None` for the zero polynomial.
    pub fn root_multiplicity(&self, a: &Rat) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let mut k = 0;
        let mut p = self.clone();
        loop {
            let (q, r) = p.synthetic_div(a);
            if !r.is_zero() {
                return Some(k);
            }
            p = q;
            k += 1;
        }
    }

    /// Removes every factor `λ - a` and returns the cofactor.
    pub fn strip_root(&self, a: &Rat) -> Poly {
        let mut p = self.clone();
        while !p.is_zero() {
            let (q, r) = p.synthetic_div(a);
            if !r.is_zero() {
                break;
            }
            p = q;
        }
        p
    }

    /// Division by `λ - a`, returning quotient and remainder `p(a)`.
    fn synthetic_div(&self, a: &Rat) -> (Poly, Rat) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Poly::zero(), Rat::zero());
        }
        let mut quot = vec![Rat::zero(); n - 1];
        let mut acc = Rat::zero();
        for i in (0..n).rev() {
            acc = acc * a + &self.coeffs[i];
            if i > 0 {
                quot[i - 1] = acc.clone();
            }
        }
        (Poly::new(quot), acc)
    }
}

/// Monic gcd of two polynomials, not both zero.
pub fn poly_gcd(a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroGcd);
    }
    Ok(a.gcd(b))
}

impl Add<&Poly> for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                    (Some(a), Some(b)) => a + b,
                    (Some(a), None) | (None, Some(a)) => a.clone(),
                    (None, None) => unreachable!(),
                })
                .collect(),
        )
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl super::Ring for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
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

impl From<Rat> for Poly {
    fn from(c: Rat) -> Self {
        Poly::constant(c)
    }
}

/// Prints highest degree first, e.g. `l^2 - 3/2*l + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "l")?,
                (1, false) => write!(f, "{mag}*l")?,
                (_, true) => write!(f, "l^{k}")?,
                (_, false) => write!(f, "{mag}*l^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, ratio};

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn zero_has_no_degree() {
        assert_eq!(Poly::zero().degree(), None);
        assert_eq!(p(&[0, 0]).degree(), None);
        assert_eq!(p(&[3]).degree(), Some(0));
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[-1, 1]));
        assert_eq!(poly_gcd(&p(&[0, 1]), &p(&[1, 1])).unwrap(), p(&[1]));
        assert_eq!(poly_gcd(&p(&[0, 0, 6]), &p(&[0, 4])).unwrap(), p(&[0, 1]));
        assert_eq!(poly_gcd(&Poly::zero(), &Poly::zero()), Err(Error::ZeroGcd));
        assert_eq!(poly_gcd(&Poly::zero(), &p(&[2, 4])).unwrap(), Poly::new(vec![ratio(1, 2), rat(1)]));
    }

    #[test]
    fn division_roundtrip() {
        let a = p(&[3, -2, 0, 5, 1]);
        let d = p(&[1, 0, 2]);
        let (q, r) = a.div_rem(&d);
        assert_eq!(&(&q * &d) + &r, a);
        assert!(r.degree() < d.degree());
    }

    #[test]
    fn root_multiplicity_and_strip() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[2, 1]);
        assert_eq!(f.root_multiplicity(&rat(1)), Some(3));
        assert_eq!(f.root_multiplicity(&rat(-2)), Some(1));
        assert_eq!(f.root_multiplicity(&rat(0)), Some(0));
        assert_eq!(f.strip_root(&rat(1)), p(&[2, 1]));
    }

    #[test]
    fn reverse_is_involution() {
        let f = p(&[1, 2, 0, 4]);
        assert_eq!(f.reverse(3), p(&[4, 0, 2, 1]));
        assert_eq!(f.reverse(5).reverse(5), f);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-1, 1, 1]).to_string(), "l^2 + l - 1");
        assert_eq!(Poly::new(vec![rat(1), ratio(-3, 2)]).to_string(), "-3/2*l + 1");
        assert_eq!(p(&[0, 0, -1]).to_string(), "-l^2");
        assert_eq!(Poly::zero().to_string(), "0");
    }
}
