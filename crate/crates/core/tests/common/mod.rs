//! Seeded generators and minor-based oracles shared by the integration tests.
#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratlin::matrix::{ConstMatrix, Matrix};
use ratlin::polymat::PolyMatrix;
use ratlin::psm::Psm;
use ratlin::ratmat::RatMatrix;
use ratlin::scalars::{rat, Poly, Rat, RatFun, Valuation};

pub struct Gen(pub ChaCha8Rng);

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    pub fn size(&mut self, lo: usize, hi: usize) -> usize {
        self.0.gen_range(lo..=hi)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.0.gen_bool(p)
    }

    pub fn nonzero(&mut self, lo: i64, hi: i64) -> i64 {
        loop {
            let x = self.int(lo, hi);
            if x != 0 {
                return x;
            }
        }
    }

    pub fn pick<T: Clone>(&mut self, xs: &[T]) -> T {
        xs.choose(&mut self.0).unwrap().clone()
    }

    /// Distinct integers from `lo..=hi`, avoiding `avoid`.
    pub fn distinct(&mut self, k: usize, lo: i64, hi: i64, avoid: &[i64]) -> Vec<i64> {
        let mut pool: Vec<i64> = (lo..=hi).filter(|x| !avoid.contains(x)).collect();
        pool.shuffle(&mut self.0);
        pool.truncate(k);
        pool
    }

    pub fn poly(&mut self, deg: usize, c: i64) -> Poly {
        let d = self.size(0, deg);
        Poly::new((0..=d).map(|_| rat(self.int(-c, c))).collect())
    }

    pub fn nonzero_poly(&mut self, deg: usize, c: i64) -> Poly {
        loop {
            let p = self.poly(deg, c);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Entries are zero with probability `sparse`.
    pub fn polymatrix(&mut self, r: usize, c: usize, deg: usize, sparse: f64) -> PolyMatrix {
        Matrix::from_fn(r, c, |_, _| if self.chance(sparse) { Poly::zero() } else { self.poly(deg, 3) })
    }

    pub fn constant(&mut self, r: usize, c: usize, bound: i64) -> ConstMatrix {
        Matrix::from_fn(r, c, |_, _| rat(self.int(-bound, bound)))
    }

    /// Product of elementary integer operations: determinant ±1.
    pub fn unimodular_const(&mut self, n: usize) -> ConstMatrix {
        let mut m = ConstMatrix::identity(n);
        for _ in 0..2 * n {
            if n < 2 {
                break;
            }
            let i = self.size(0, n - 1);
            let j = self.size(0, n - 1);
            if i == j {
                m.swap_rows(i, (i + 1) % n);
                continue;
            }
            let k = rat(self.nonzero(-1, 1));
            for col in 0..n {
                let v = m.get(i, col) + &(&k * m.get(j, col));
                m.set(i, col, v);
            }
        }
        m
    }

    /// Constant `r × c` matrix of rank at most `k`.
    pub fn low_rank(&mut self, r: usize, c: usize, k: usize) -> ConstMatrix {
        if k == 0 {
            return ConstMatrix::zeros(r, c);
        }
        self.constant(r, k, 2).mul(&self.constant(k, c, 2)).unwrap()
    }

    pub fn ratfun(&mut self, deg: usize) -> RatFun {
        let num = self.poly(deg, 3);
        let den = self.nonzero_poly(deg, 3);
        RatFun::new(num, den)
    }

    pub fn ratmatrix(&mut self, r: usize, c: usize, deg: usize) -> RatMatrix {
        let mut g = Matrix::from_fn(r, c, |_, _| if self.chance(0.2) { RatFun::zero() } else { self.ratfun(deg) });
        if r > 1 && self.chance(0.25) {
            // force a rank drop: last row is a rational multiple of the first
            let f = self.ratfun(1);
            for j in 0..c {
                g.set(r - 1, j, g.get(0, j) * &f);
            }
        }
        g
    }

    /// `X (λE − J) Y` with `X`, `Y` unimodular integer matrices, `J` upper
    /// triangular and `E` a 0/1 diagonal; regular by construction.
    pub fn state(&mut self, n: usize, with_infinite: bool) -> PolyMatrix {
        let mut e = ConstMatrix::identity(n);
        let mut j = ConstMatrix::zeros(n, n);
        for i in 0..n {
            let singular = with_infinite && self.chance(0.3);
            if singular {
                e.set(i, i, rat(0));
                j.set(i, i, rat(self.nonzero(-2, 2)));
            } else {
                j.set(i, i, rat(self.int(-2, 2)));
            }
            for k in i + 1..n {
                j.set(i, k, rat(self.int(0, 1)));
            }
        }
        let core = PolyMatrix::pencil(&j.neg(), &e).unwrap();
        let x = PolyMatrix::from_const(&self.unimodular_const(n));
        let y = PolyMatrix::from_const(&self.unimodular_const(n));
        x.mul(&core).unwrap().mul(&y).unwrap()
    }

    /// Random system matrix `[A B; −C D]` in a shuffled layout.
    pub fn psm(&mut self, with_infinite: bool, d_deg: usize) -> Psm {
        let n = self.size(1, 3);
        let p = self.size(1, 2);
        let m = self.size(1, 2);
        let a = self.state(n, with_infinite);
        let b = self.polymatrix(n, m, 1, 0.3);
        let c = self.polymatrix(p, n, 1, 0.3);
        let d = self.polymatrix(p, m, d_deg, 0.3);
        let full = Matrix::block(&[vec![Some(&a), Some(&b)], vec![Some(&c.neg()), Some(&d)]]).unwrap();
        let mut rows: Vec<usize> = (0..n + p).collect();
        let mut cols: Vec<usize> = (0..n + m).collect();
        rows.shuffle(&mut self.0);
        cols.shuffle(&mut self.0);
        let shuffled = full.select(&rows, &cols);
        let pos = |perm: &[usize], k: usize| perm.iter().position(|&x| x == k).unwrap();
        let state_rows = (0..n).map(|k| pos(&rows, k)).collect();
        let state_cols = (0..n).map(|k| pos(&cols, k)).collect();
        Psm::new(shuffled, state_rows, state_cols).unwrap()
    }
}

pub fn c(rows: &[&[i64]]) -> ConstMatrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
}

/// `k`-th determinantal valuations via all `k × k` minors; the invariant
/// orders are their successive differences.
fn orders_by_minors(g: &RatMatrix, val: impl Fn(&RatFun) -> Valuation) -> Vec<i64> {
    let mut deltas = vec![0i64];
    for k in 1..=g.rows().min(g.cols()) {
        let mut best: Option<i64> = None;
        for rows in (0..g.rows()).combinations(k) {
            for cols in (0..g.cols()).combinations(k) {
                let minor = g.select(&rows, &cols).det().unwrap();
                if let Valuation::Finite(v) = val(&minor) {
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        match best {
            Some(b) => deltas.push(b),
            None => break,
        }
    }
    deltas.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn orders_at_infinity_by_minors(g: &RatMatrix) -> Vec<i64> {
    orders_by_minors(g, RatFun::valuation_at_infinity)
}

pub fn orders_at_by_minors(g: &RatMatrix, a: &Rat) -> Vec<i64> {
    orders_by_minors(g, |f| f.valuation_at(a))
}

/// Pole and zero partial multiplicities from invariant orders, each ascending.
pub fn split_orders(orders: &[i64]) -> (Vec<usize>, Vec<usize>) {
    let mut poles: Vec<usize> = orders.iter().filter(|&&v| v < 0).map(|&v| (-v) as usize).collect();
    let mut zeros: Vec<usize> = orders.iter().filter(|&&v| v > 0).map(|&v| v as usize).collect();
    poles.sort();
    zeros.sort();
    (poles, zeros)
}
