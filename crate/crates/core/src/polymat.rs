//! Polynomial matrices: exact ranks, Smith normal form, local elementary
//! divisors, minimal-basis tests and reversals.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::{ConstMatrix, Matrix};
use crate::ratmat::RatMatrix;
use crate::scalars::{coprime_basis, split_rational, Factor, Poly, Rat, RatFun};

/// Matrix with polynomial entries.
pub type PolyMatrix = Matrix<Poly>;

/// Invariant polynomials `d₁ | d₂ | … | d_r`, all monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub invariant_polys: Vec<Poly>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
}

/// Partial multiplicities of one irreducible locus, ascending and positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ElementaryDivisors {
    pub factor: Factor,
    pub multiplicities: Vec<usize>,
}

impl ElementaryDivisors {
    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }
}

impl fmt::Display for ElementaryDivisors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.multiplicities.iter().map(ToString::to_string).collect();
        write!(f, "[{}]: ({})", self.factor, m.join(", "))
    }
}

/// Result of [`PolyMatrix::reversal`]: polynomial when the grade is at
/// least the degree, rational otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reversal {
    Poly(PolyMatrix),
    Rational(RatMatrix),
}

impl SmithForm {
    /// Multiplicities of `λ - a` across the invariant polynomials.
    pub fn local(&self, a: &Rat) -> ElementaryDivisors {
        let multiplicities = self
            .invariant_polys
            .iter()
            .map(|d| d.root_multiplicity(a).unwrap_or(0))
            .filter(|&k| k > 0)
            .collect();
        ElementaryDivisors { factor: Factor::Linear(a.clone()), multiplicities }
    }

    /// Elementary divisors grouped by factor: rational roots first
    /// (ascending), then square-free irrational factors from a coprime basis.
    pub fn factored(&self) -> Vec<ElementaryDivisors> {
        let splits: Vec<_> = self.invariant_polys.iter().map(split_rational).collect();
        let mut roots: Vec<Rat> = splits.iter().flat_map(|(r, _)| r.iter().map(|(a, _)| a.clone())).collect();
        roots.sort();
        roots.dedup();
        let mut out: Vec<ElementaryDivisors> = roots.iter().map(|a| self.local(a)).collect();
        let rests: Vec<Poly> = splits.into_iter().map(|(_, r)| r).collect();
        for b in coprime_basis(&rests) {
            let multiplicities = rests
                .iter()
                .map(|r| multiplicity_of(r, &b))
                .filter(|&k| k > 0)
                .collect();
            out.push(ElementaryDivisors { factor: Factor::Irrational(b), multiplicities });
        }
        out
    }

    /// Largest invariant polynomial, `1` for rank zero.
    pub fn last(&self) -> Poly {
        self.invariant_polys.last().cloned().unwrap_or_else(Poly::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_polys.iter().all(Poly::is_one)
    }
}

fn multiplicity_of(p: &Poly, b: &Poly) -> usize {
    let mut k = 0;
    let mut p = p.clone();
    loop {
        let (q, r) = p.div_rem(b);
        if !r.is_zero() || p.is_zero() {
            return k;
        }
        p = q;
        k += 1;
    }
}

impl PolyMatrix {
    /// Builds `Σ coeffs[k]·λ^k`.
    pub fn from_coefficients(coeffs: &[ConstMatrix]) -> Result<Self> {
        let first = coeffs.first().ok_or_else(|| Error::Dimension("no coefficients".into()))?;
        let (r, c) = (first.rows(), first.cols());
        if coeffs.iter().any(|m| m.rows() != r || m.cols() != c) {
            return Err(Error::Dimension("coefficient sizes differ".into()));
        }
        Ok(Matrix::from_fn(r, c, |i, j| Poly::new(coeffs.iter().map(|m| m.get(i, j).clone()).collect())))
    }

    /// `a0 + λ·a1`.
    pub fn pencil(a0: &ConstMatrix, a1: &ConstMatrix) -> Result<Self> {
        PolyMatrix::from_coefficients(&[a0.clone(), a1.clone()])
    }

    pub fn from_const(m: &ConstMatrix) -> Self {
        m.map(|c| Poly::constant(c.clone()))
    }

    /// Maximum entry degree, `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries().filter_map(Poly::degree).max()
    }

    /// Matrix of `λ^k` coefficients.
    pub fn coefficient(&self, k: usize) -> ConstMatrix {
        self.map(|p| p.coeff(k))
    }

    pub fn eval(&self, a: &Rat) -> ConstMatrix {
        self.map(|p| p.eval(a))
    }

    pub fn to_rational(&self) -> RatMatrix {
        self.map(|p| RatFun::from_poly(p.clone()))
    }

    pub fn rank_at(&self, a: &Rat) -> usize {
        self.eval(a).rank()
    }

    /// Size of the largest minor that is not identically zero, by
    /// fraction-free elimination.
    pub fn normal_rank(&self) -> usize {
        let mut a = self.clone();
        let mut prev = Poly::one();
        let mut r = 0;
        for c in 0..a.cols() {
            if r == a.rows() {
                break;
            }
            let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let piv = a.get(r, c).clone();
            for i in r + 1..a.rows() {
                let f = a.get(i, c).clone();
                for j in c + 1..a.cols() {
                    let v = (&(&piv * a.get(i, j)) - &(&f * a.get(r, j))).div_exact(&prev);
                    a.set(i, j, v);
                }
                a.set(i, c, Poly::zero());
            }
            prev = piv;
            r += 1;
        }
        r
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        Ok(bareiss_det(self.clone()))
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        let d = self.det()?;
        Ok(d.degree() == Some(0))
    }

    pub fn smith_form(&self) -> SmithForm {
        self.smith_core(false).0
    }

    /// Smith form together with a unimodular `W` such that `self = U⁻¹·S·W`
    /// for some unimodular `U`; the first `rank` rows of `W` span the row
    /// space of `self` and have full rank at every point.
    pub fn smith_with_right_factor(&self) -> (SmithForm, PolyMatrix) {
        let (s, w) = self.smith_core(true);
        (s, w.expect("tracked"))
    }

    fn smith_core(&self, track: bool) -> (SmithForm, Option<PolyMatrix>) {
        let (m, n) = (self.rows(), self.cols());
        let mut a = self.clone();
        let mut w = track.then(|| PolyMatrix::identity(n));
        let mut t = 0;
        while t < m.min(n) {
            let Some((pi, pj)) = min_degree_entry(&a, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
                break;
            };
            a.swap_rows(t, pi);
            swap_cols_tracked(&mut a, &mut w, t, pj);
            loop {
                let piv = a.get(t, t).clone();
                let mut dirty = false;
                for i in t + 1..m {
                    if a.get(i, t).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(i, t).div_rem(&piv);
                    for j in t..n {
                        let v = a.get(i, j) - &(&q * a.get(t, j));
                        a.set(i, j, v);
                    }
                    dirty |= !r.is_zero();
                }
                for j in t + 1..n {
                    if a.get(t, j).is_zero() {
                        continue;
                    }
                    let (q, r) = a.get(t, j).div_rem(&piv);
                    for i in t..m {
                        let v = a.get(i, j) - &(&q * a.get(i, t));
                        a.set(i, j, v);
                    }
                    if let Some(w) = w.as_mut() {
                        for c in 0..n {
                            let v = w.get(t, c) + &(&q * w.get(j, c));
                            w.set(t, c, v);
                        }
                    }
                    dirty |= !r.is_zero();
                }
                if dirty {
                    let line = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                    let (pi, pj) = min_degree_entry(&a, line).expect("pivot survives");
                    a.swap_rows(t, pi);
                    swap_cols_tracked(&mut a, &mut w, t, pj);
                    continue;
                }
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !piv.divides(a.get(i, j)));
                match bad {
                    Some((i, _)) => {
                        for j in t..n {
                            let v = a.get(t, j) + a.get(i, j);
                            a.set(t, j, v);
                        }
                    }
                    None => break,
                }
            }
            t += 1;
        }
        let invariant_polys: Vec<Poly> = (0..t).map(|i| a.get(i, i).monic()).collect();
        let rank = invariant_polys.len();
        (SmithForm { invariant_polys, rank, rows: m, cols: n }, w)
    }

    /// Invariant polynomials from determinantal divisors: `dᵢ = Δᵢ/Δᵢ₋₁`
    /// with `Δᵢ` the monic gcd of all `i×i` minors. Exponential in size;
    /// meant as an independent check of [`PolyMatrix::smith_form`].
    pub fn smith_via_minors(&self) -> SmithForm {
        let (m, n) = (self.rows(), self.cols());
        let mut deltas = vec![Poly::one()];
        for k in 1..=m.min(n) {
            let mut g = Poly::zero();
            'outer: for rows in combinations(m, k) {
                for cols in combinations(n, k) {
                    let minor = bareiss_det(self.select(&rows, &cols));
                    g = g.gcd(&minor);
                    if g.is_one() {
                        break 'outer;
                    }
                }
            }
            if g.is_zero() {
                break;
            }
            deltas.push(g);
        }
        let invariant_polys: Vec<Poly> = deltas.windows(2).map(|w| w[1].div_exact(&w[0]).monic()).collect();
        let rank = invariant_polys.len();
        SmithForm { invariant_polys, rank, rows: m, cols: n }
    }

    /// Multiplicities of `λ - a` in the invariant polynomials.
    pub fn local_elementary_divisors(&self, a: &Rat) -> ElementaryDivisors {
        self.smith_form().local(a)
    }

    /// Row degrees; `None` for zero rows.
    pub fn row_degrees(&self) -> Vec<Option<usize>> {
        (0..self.rows()).map(|i| self.row(i).iter().filter_map(Poly::degree).max()).collect()
    }

    /// Row `i` holds the coefficients of `λ^{dᵢ}` with `dᵢ` the degree of row `i`.
    pub fn highest_row_degree_coefficients(&self) -> ConstMatrix {
        let degs = self.row_degrees();
        Matrix::from_fn(self.rows(), self.cols(), |i, j| match degs[i] {
            Some(d) => self.get(i, j).coeff(d),
            None => Rat::from_integer(0.into()),
        })
    }

    /// Full rank at every finite point and full-rank highest-row-degree
    /// coefficient matrix. Requires fewer rows than columns.
    pub fn is_minimal_basis(&self) -> Result<bool> {
        if self.rows() >= self.cols() {
            return Err(Error::Dimension(format!(
                "minimal basis test needs rows < cols, got {}x{}",
                self.rows(),
                self.cols()
            )));
        }
        if self.highest_row_degree_coefficients().rank() < self.rows() {
            return Ok(false);
        }
        let s = self.smith_form();
        Ok(s.rank == self.rows() && s.is_trivial())
    }

    /// `λ^g·P(1/λ)`.
    pub fn reversal(&self, g: i64) -> Reversal {
        let d = self.degree().map_or(0, |d| d as i64);
        if g >= d {
            Reversal::Poly(self.map(|p| match p.degree() {
                None => Poly::zero(),
                Some(_) => p.reverse(g as usize),
            }))
        } else {
            Reversal::Rational(self.map(|p| RatFun::from_poly(p.clone()).reversal(g)))
        }
    }

    /// `λ^g·P(1/λ)` for `g >= deg P`. Panics otherwise.
    pub fn poly_reversal(&self, g: usize) -> PolyMatrix {
        match self.reversal(g as i64) {
            Reversal::Poly(p) => p,
            Reversal::Rational(_) => panic!("grade below degree"),
        }
    }
}

fn min_degree_entry(a: &PolyMatrix, cells: impl Iterator<Item = (usize, usize)>) -> Option<(usize, usize)> {
    cells
        .filter_map(|(i, j)| a.get(i, j).degree().map(|d| (d, i, j)))
        .min()
        .map(|(_, i, j)| (i, j))
}

fn swap_cols_tracked(a: &mut PolyMatrix, w: &mut Option<PolyMatrix>, x: usize, y: usize) {
    a.swap_cols(x, y);
    if let Some(w) = w.as_mut() {
        w.swap_rows(x, y);
    }
}

fn bareiss_det(mut a: PolyMatrix) -> Poly {
    let n = a.rows();
    if n == 0 {
        return Poly::one();
    }
    let mut negate = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if a.get(k, k).is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a.get(i, k).is_zero()) else {
                return Poly::zero();
            };
            a.swap_rows(k, p);
            negate = !negate;
        }
        let piv = a.get(k, k).clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&(a.get(i, j) * &piv) - &(a.get(i, k) * a.get(k, j))).div_exact(&prev);
                a.set(i, j, v);
            }
        }
        prev = piv;
    }
    let d = a.get(n - 1, n - 1).clone();
    if negate {
        -d
    } else {
        d
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}
