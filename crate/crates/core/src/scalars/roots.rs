//! Rational root extraction and coprime factor bases. No numerical root
//! finding: rational roots come from p-adic lifting of roots modulo a small
//! prime and are confirmed by exact evaluation.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Poly, Rat};

/// A monic factor of an invariant polynomial: either `λ - a` with `a`
/// rational, or a square-free polynomial without rational roots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Factor {
    Linear(Rat),
    Irrational(Poly),
}

impl Factor {
    pub fn poly(&self) -> Poly {
        match self {
            Factor::Linear(a) => Poly::linear_root(a),
            Factor::Irrational(p) => p.clone(),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly())
    }
}

/// Square-free decomposition `f = c·∏ s_k^k` (Yun). Returns the nonconstant
/// monic `s_k` with their exponents `k`, ascending in `k`.
pub fn squarefree_parts(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let f = f.monic();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_exact(&a0);
    let mut c = df.div_exact(&a0);
    let mut d = &c - &b.derivative();
    let mut k = 1;
    while !b.is_constant() {
        let a = b.gcd(&d);
        b = b.div_exact(&a);
        c = d.div_exact(&a);
        d = &c - &b.derivative();
        if !a.is_constant() {
            out.push((a.monic(), k));
        }
        k += 1;
    }
    out
}

/// Distinct rational roots of `f`, ascending. Empty for constants and zero.
pub fn rational_roots(f: &Poly) -> Vec<Rat> {
    if f.is_constant() {
        return Vec::new();
    }
    let sf = f.div_exact(&f.gcd(&f.derivative()));
    let mut c = primitive_ints(&sf);
    let mut roots = Vec::new();
    if c[0].is_zero() {
        roots.push(Rat::zero());
        c.remove(0);
    }
    let n = c.len() - 1;
    if n > 0 {
        // y = lc·x makes the polynomial monic with integer roots |y| ≤ bound
        let lc = c[n].clone();
        let bound = lc.abs() + c.iter().map(|x| x.abs()).max().unwrap();
        let g: Vec<BigInt> = (0..=n)
            .map(|i| if i == n { BigInt::one() } else { &c[i] * num_traits::pow(lc.clone(), n - 1 - i) })
            .collect();
        roots.extend(integer_roots(&g, &bound).into_iter().map(|y| Rat::new(y, lc.clone())));
    }
    roots.sort();
    roots
}

/// Rational roots with multiplicities, and the monic cofactor left after
/// removing them (which has no rational roots).
pub fn split_rational(f: &Poly) -> (Vec<(Rat, usize)>, Poly) {
    let mut rest = f.monic();
    let mut roots = Vec::new();
    for r in rational_roots(f) {
        let k = rest.root_multiplicity(&r).unwrap_or(0);
        rest = rest.strip_root(&r);
        roots.push((r, k));
    }
    (roots, rest)
}

/// Pairwise coprime, square-free, monic, nonconstant polynomials such that
/// every nonzero input is a constant times a product of their powers.
/// Sorted by degree, then coefficients.
pub fn coprime_basis(polys: &[Poly]) -> Vec<Poly> {
    let mut work: Vec<Poly> = polys
        .iter()
        .filter(|p| !p.is_zero())
        .flat_map(|p| squarefree_parts(p).into_iter().map(|(s, _)| s))
        .collect();
    let mut basis: Vec<Poly> = Vec::new();
    while let Some(a) = work.pop() {
        if a.is_constant() {
            continue;
        }
        let hit = basis.iter().position(|b| !a.gcd(b).is_constant());
        match hit {
            None => basis.push(a.monic()),
            Some(idx) => {
                let b = basis.swap_remove(idx);
                let g = a.gcd(&b);
                work.push(b.div_exact(&g).monic());
                work.push(a.div_exact(&g).monic());
                work.push(g);
            }
        }
    }
    basis.sort_by(|x, y| (x.degree(), x.coeffs()).cmp(&(y.degree(), y.coeffs())));
    basis
}

/// Coefficients of `f` scaled to coprime integers.
fn primitive_ints(f: &Poly) -> Vec<BigInt> {
    let mut den = BigInt::one();
    for c in f.coeffs() {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = f.coeffs().iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(g: &[BigInt], x: &BigInt) -> BigInt {
    g.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

fn derivative_int(g: &[BigInt]) -> Vec<BigInt> {
    g.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Integer roots with `|y| ≤ bound` of a monic square-free integer
/// polynomial: roots modulo a prime where it stays square-free, Hensel
/// lifting past `2·bound`, then an exact check.
fn integer_roots(g: &[BigInt], bound: &BigInt) -> Vec<BigInt> {
    let p = (3u64..).find(|&p| is_prime(p) && squarefree_mod(g, p)).unwrap();
    let dg = derivative_int(g);
    let pb = BigInt::from(p);
    let mut out = Vec::new();
    for r0 in (0..p).filter(|&r| eval_int(g, &BigInt::from(r)).mod_floor(&pb).is_zero()) {
        let mut r = BigInt::from(r0);
        let mut m = pb.clone();
        while m <= bound * 2 {
            m = &m * &m;
            let inv = eval_int(&dg, &r).mod_floor(&m).extended_gcd(&m).x;
            r = (&r - eval_int(g, &r) * inv).mod_floor(&m);
        }
        let y = if &r * 2 > m { r - &m } else { r };
        if eval_int(g, &y).is_zero() {
            out.push(y);
        }
    }
    out
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

/// `gcd(g, g') = 1` over `𝔽_p`, with `g` monic so its degree survives.
fn squarefree_mod(g: &[BigInt], p: u64) -> bool {
    let pb = BigInt::from(p);
    let reduce = |v: &[BigInt]| -> Vec<u64> {
        let mut out: Vec<u64> = v.iter().map(|c| c.mod_floor(&pb).try_into().unwrap()).collect();
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    };
    let mut a = reduce(g);
    let mut b = reduce(&derivative_int(g));
    while !b.is_empty() {
        let inv = pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let q = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (i, bc) in b.iter().enumerate() {
                a[i + shift] = (a[i + shift] + p - q * bc % p) % p;
            }
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}
