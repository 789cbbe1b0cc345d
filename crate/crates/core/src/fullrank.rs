//! Block full rank pencils `L = [M K₂ᵀ; K₁ 0]`, dual rational bases,
//! minimal-basis factorizations `R = S·T`, and the certificates they give:
//! an empty-state linearization region for `G = N₂·M·N₁ᵀ` and a grade at
//! infinity.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linearize::Verdict;
use crate::matrix::Matrix;
use crate::polymat::PolyMatrix;
use crate::psm::DefectSet;
use crate::ratmat::{RatMatrix, Region};
use crate::scalars::{Point, Poly, Rat, RatFun};

/// `L = [M K₂ᵀ; K₁ 0]` with `K₁`, `K₂` of full row normal rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFullRank {
    m: PolyMatrix,
    k1: Option<PolyMatrix>,
    k2: Option<PolyMatrix>,
    l: PolyMatrix,
}

/// A pencil `K` and a rational `N` with `K·Nᵀ = 0` and complementary row counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualBasisPair {
    pub k: PolyMatrix,
    pub n: RatMatrix,
}

/// Region where a rational matrix keeps full row rank; the irrational
/// factors whose roots are also excluded ride along.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankRegion {
    pub region: Region,
    pub irrational: Vec<Poly>,
}

impl RankRegion {
    pub fn all() -> RankRegion {
        RankRegion { region: Region::AllF, irrational: Vec::new() }
    }

    pub fn intersect(&self, other: &RankRegion) -> RankRegion {
        let mut irrational = self.irrational.clone();
        for p in &other.irrational {
            if !irrational.contains(p) {
                irrational.push(p.clone());
            }
        }
        RankRegion { region: self.region.intersect(&other.region), irrational }
    }
}

impl fmt::Display for RankRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.region)?;
        for p in &self.irrational {
            write!(f, " minus roots of [{p}]")?;
        }
        Ok(())
    }
}

/// A grade-at-infinity verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradeVerdict {
    pub verdict: Verdict,
    pub grade: i64,
    pub t1: i64,
    pub t2: i64,
}

/// Output of [`one_column_check`].
#[derive(Clone, Debug)]
pub struct OneColumnReport {
    pub pencil: BlockFullRank,
    pub dual: RatMatrix,
    pub g: RatMatrix,
    pub region: RankRegion,
    pub infinity: Vec<GradeVerdict>,
}

fn full_row_rank(r: &RatMatrix, what: &str) -> Result<()> {
    if r.normal_rank() != r.rows() {
        return Err(Error::RankDeficient(format!("{what} lacks full row normal rank")));
    }
    Ok(())
}

impl BlockFullRank {
    pub fn new(m: PolyMatrix, k1: Option<PolyMatrix>, k2: Option<PolyMatrix>) -> Result<Self> {
        if let Some(k1) = &k1 {
            if k1.cols() != m.cols() {
                return Err(Error::Dimension(format!("K1 has {} columns, M has {}", k1.cols(), m.cols())));
            }
            full_row_rank(&k1.to_rational(), "K1")?;
        }
        if let Some(k2) = &k2 {
            if k2.cols() != m.rows() {
                return Err(Error::Dimension(format!("K2 has {} columns, M has {} rows", k2.cols(), m.rows())));
            }
            full_row_rank(&k2.to_rational(), "K2")?;
        }
        let k2t = k2.as_ref().map(Matrix::transpose);
        let l = Matrix::block(&[vec![Some(&m), k2t.as_ref()], vec![k1.as_ref(), None]])?;
        if let Some(d) = l.degree().filter(|&d| d > 1) {
            return Err(Error::NotPencil(d));
        }
        Ok(BlockFullRank { m, k1, k2, l })
    }

    pub fn m(&self) -> &PolyMatrix {
        &self.m
    }

    pub fn k1(&self) -> Option<&PolyMatrix> {
        self.k1.as_ref()
    }

    pub fn k2(&self) -> Option<&PolyMatrix> {
        self.k2.as_ref()
    }

    /// The assembled pencil.
    pub fn pencil(&self) -> &PolyMatrix {
        &self.l
    }

    fn duals(&self, n1: Option<&RatMatrix>, n2: Option<&RatMatrix>) -> Result<(RatMatrix, RatMatrix)> {
        let resolve = |k: Option<&PolyMatrix>, n: Option<&RatMatrix>, size: usize, name: &str| -> Result<RatMatrix> {
            match (k, n) {
                (None, None) => Ok(RatMatrix::identity(size)),
                (None, Some(n)) => Ok(n.clone()),
                (Some(_), None) => Err(Error::NotDual(format!("{name} is required when K is present"))),
                (Some(k), Some(n)) => {
                    let pair = DualBasisPair { k: k.clone(), n: n.clone() };
                    if pair.check_duality() {
                        Ok(n.clone())
                    } else {
                        Err(Error::NotDual(format!("K and {name}")))
                    }
                }
            }
        };
        let n1 = resolve(self.k1.as_ref(), n1, self.m.cols(), "N1")?;
        let n2 = resolve(self.k2.as_ref(), n2, self.m.rows(), "N2")?;
        if n1.cols() != self.m.cols() || n2.cols() != self.m.rows() {
            return Err(Error::Dimension("dual basis width does not match M".into()));
        }
        Ok((n1, n2))
    }

    /// `G = N₂·M·N₁ᵀ`; an absent `K` takes the identity as its dual.
    pub fn associated_rational(&self, n1: Option<&RatMatrix>, n2: Option<&RatMatrix>) -> Result<RatMatrix> {
        let (n1, n2) = self.duals(n1, n2)?;
        n2.mul(&self.m.to_rational())?.mul(&n1.transpose())
    }

    /// `G` together with the region where `L` is an empty-state
    /// linearization of it: all four of `K₁`, `K₂`, `N₁`, `N₂` keep full
    /// row rank there.
    pub fn linearization_region(&self, n1: Option<&RatMatrix>, n2: Option<&RatMatrix>) -> Result<(RatMatrix, RankRegion)> {
        let g = self.associated_rational(n1, n2)?;
        let (n1, n2) = self.duals(n1, n2)?;
        let mut omega = RankRegion::all();
        for k in [&self.k1, &self.k2].into_iter().flatten() {
            omega = omega.intersect(&full_row_rank_region(&k.to_rational())?);
        }
        if self.k1.is_some() {
            omega = omega.intersect(&full_row_rank_region(&n1)?);
        }
        if self.k2.is_some() {
            omega = omega.intersect(&full_row_rank_region(&n2)?);
        }
        Ok((g, omega))
    }

    /// Grade `1 + t₁ + t₂` at infinity holds when `rev₁Kᵢ` and `rev_{tᵢ}Nᵢ`
    /// have full row rank at 0. Absent blocks contribute `t = 0`.
    pub fn linearization_at_infinity_grade(
        &self,
        n1: Option<&RatMatrix>,
        n2: Option<&RatMatrix>,
        t1: i64,
        t2: i64,
    ) -> Result<GradeVerdict> {
        let (n1, n2) = self.duals(n1, n2)?;
        if self.l.degree() != Some(1) {
            return Err(Error::NotPencil(self.l.degree().unwrap_or(0)));
        }
        let t1 = if self.k1.is_some() { t1 } else { 0 };
        let t2 = if self.k2.is_some() { t2 } else { 0 };
        let zero = Point::Finite(Rat::zero());
        let mut witness = None;
        let blocks = [(&self.k1, &n1, t1, "1"), (&self.k2, &n2, t2, "2")];
        for (k, n, t, i) in blocks {
            let Some(k) = k else { continue };
            if witness.is_some() {
                break;
            }
            if k.coefficient(1).rank() < k.rows() {
                witness = Some(format!("rev_1 K{i} loses rank at 0"));
                continue;
            }
            match n.g_reversal(t).eval_at(&zero) {
                None => witness = Some(format!("rev_{t} N{i} is not defined at 0")),
                Some(v) if v.rank() < n.rows() => witness = Some(format!("rev_{t} N{i} loses rank at 0")),
                Some(_) => {}
            }
        }
        let verdict = match witness {
            None => Verdict::yes(),
            Some(w) => Verdict::no(w),
        };
        Ok(GradeVerdict { verdict, grade: 1 + t1 + t2, t1, t2 })
    }

    /// Every `(t₁, t₂)` in `[-d, d]²` that certifies a grade, where `d` is
    /// the largest gap between numerator and denominator degrees in the
    /// dual bases (at least one).
    pub fn search_grade(&self, n1: Option<&RatMatrix>, n2: Option<&RatMatrix>) -> Result<Vec<GradeVerdict>> {
        let (r1, r2) = self.duals(n1, n2)?;
        let span = |n: &RatMatrix| {
            n.entries()
                .filter(|f| !f.is_zero())
                .map(|f| (f.num().degree().unwrap() as i64 - f.den().degree().unwrap() as i64).abs())
                .max()
                .unwrap_or(0)
        };
        let d = span(&r1).max(span(&r2)).max(1);
        let range1: Vec<i64> = if self.k1.is_some() { (-d..=d).collect() } else { vec![0] };
        let range2: Vec<i64> = if self.k2.is_some() { (-d..=d).collect() } else { vec![0] };
        let mut out = Vec::new();
        for &t1 in &range1 {
            for &t2 in &range2 {
                let v = self.linearization_at_infinity_grade(Some(&r1), Some(&r2), t1, t2)?;
                if v.verdict.holds {
                    out.push(v);
                }
            }
        }
        Ok(out)
    }
}

impl DualBasisPair {
    /// `K·Nᵀ = 0`, `rows K + rows N = cols`, both of full row normal rank.
    pub fn check_duality(&self) -> bool {
        let (k, n) = (&self.k, &self.n);
        if k.cols() != n.cols() || k.rows() + n.rows() != k.cols() {
            return false;
        }
        let prod = k.to_rational().mul(&n.transpose()).expect("shapes checked");
        prod.is_zero() && k.normal_rank() == k.rows() && n.normal_rank() == n.rows()
    }
}

/// `R = S·T` with `T` a minimal basis of the row space of `R` and `S`
/// square regular. Tries a row-wise content extraction first, then falls
/// back to removing finite zeros through the Smith form and reducing row
/// degrees.
pub fn minimal_basis_factor(r: &RatMatrix) -> Result<(RatMatrix, PolyMatrix)> {
    full_row_rank(r, "R")?;
    let p = r.rows();
    if p == r.cols() {
        return Ok((r.clone(), PolyMatrix::identity(p)));
    }
    let mut scales = Vec::with_capacity(p);
    let mut rows = Vec::with_capacity(p);
    for i in 0..p {
        let den = r.row(i).iter().fold(Poly::one(), |acc, f| acc.lcm(f.den()));
        let polys: Vec<Poly> = r.row(i).iter().map(|f| f.num() * &den.div_exact(f.den())).collect();
        let content = polys.iter().fold(Poly::zero(), |acc, q| acc.gcd(q));
        rows.push(polys.iter().map(|q| q.div_exact(&content)).collect::<Vec<_>>());
        scales.push(RatFun::new(content, den));
    }
    let t = Matrix::from_rows(rows);
    if t.is_minimal_basis()? {
        let s = Matrix::from_fn(p, p, |i, j| if i == j { scales[i].clone() } else { RatFun::zero() });
        return Ok((s, t));
    }
    let (_, w) = t.smith_with_right_factor();
    let t = row_reduce(w.select(&(0..p).collect::<Vec<_>>(), &(0..w.cols()).collect::<Vec<_>>()));
    let tr = t.to_rational();
    let gram = tr.mul(&tr.transpose())?;
    let s = r.mul(&tr.transpose())?.mul(&gram.inverse()?)?;
    debug_assert_eq!(s.mul(&tr).ok().as_ref(), Some(r));
    Ok((s, t))
}

/// Unimodular row operations until the highest-row-degree coefficient
/// matrix has full row rank.
fn row_reduce(mut t: PolyMatrix) -> PolyMatrix {
    loop {
        let h = t.highest_row_degree_coefficients();
        let null = h.left_null_space();
        if null.rows() == 0 {
            return t;
        }
        let c = null.row(0).to_vec();
        let degs: Vec<usize> = t.row_degrees().iter().map(|d| d.unwrap_or(0)).collect();
        let i = (0..t.rows()).filter(|&j| !c[j].is_zero()).max_by_key(|&j| degs[j]).expect("nonzero null vector");
        let mut new_row = vec![Poly::zero(); t.cols()];
        for j in (0..t.rows()).filter(|&j| !c[j].is_zero()) {
            let shift = degs[i] - degs[j];
            for (col, slot) in new_row.iter_mut().enumerate() {
                *slot = &*slot + &t.get(j, col).scale(&c[j]).shift(shift);
            }
        }
        for (col, v) in new_row.into_iter().enumerate() {
            t.set(i, col, v);
        }
    }
}

/// Region where `R` has full row rank: away from the poles of its entries
/// and from the rank drops of its cleared numerator.
pub fn full_row_rank_region(r: &RatMatrix) -> Result<RankRegion> {
    full_row_rank(r, "matrix")?;
    let (num, d) = r.numerator_matrix();
    let drop = num.smith_form().last();
    let defects = DefectSet::from_polys(&[d, drop]);
    Ok(RankRegion { region: Region::except(defects.points), irrational: defects.irrational })
}

/// The one-block-column case: `M = [M₀ … M_k]` with pencil blocks, duals
/// `Rᵢ` so that `G = Σ Mᵢ·Rᵢ`, and `K₁` dual to `N₁ = [R₀ᵀ … R_kᵀ]`.
/// With `t` given, only that grade is tested; otherwise the bounded search runs.
pub fn one_column_check(
    m_blocks: &[PolyMatrix],
    r_blocks: &[RatMatrix],
    k1: &PolyMatrix,
    t: Option<i64>,
) -> Result<OneColumnReport> {
    if m_blocks.len() != r_blocks.len() || m_blocks.is_empty() {
        return Err(Error::Dimension("need one R block per M block".into()));
    }
    let mut m = m_blocks[0].clone();
    for b in &m_blocks[1..] {
        m = m.hstack(b)?;
    }
    let mut n1 = r_blocks[0].transpose();
    for b in &r_blocks[1..] {
        n1 = n1.hstack(&b.transpose())?;
    }
    full_row_rank(&n1, "N1")?;
    let pencil = BlockFullRank::new(m, Some(k1.clone()), None)?;
    let (g, region) = pencil.linearization_region(Some(&n1), None)?;
    let infinity = match t {
        Some(t) => vec![pencil.linearization_at_infinity_grade(Some(&n1), None, t, 0)?],
        None => pencil.search_grade(Some(&n1), None)?,
    };
    Ok(OneColumnReport { pencil, dual: n1, g, region, infinity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_poly, parse_ratfun, rat};

    fn pm(rows: &[&[&str]]) -> PolyMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_poly(s).unwrap()).collect()).collect())
    }

    fn rm(rows: &[&[&str]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
    }

    #[test]
    fn factor_of_minimal_basis_is_trivial() {
        let k = rm(&[&["-l", "1", "0"], &["0", "-l", "1"]]);
        let (s, t) = minimal_basis_factor(&k).unwrap();
        assert_eq!(s, RatMatrix::identity(2));
        assert_eq!(t.to_rational(), k);
    }

    #[test]
    fn factor_extracts_scalar() {
        let r = rm(&[&["l", "l^2"]]);
        let (s, t) = minimal_basis_factor(&r).unwrap();
        assert_eq!(s, rm(&[&["l"]]));
        assert_eq!(t, pm(&[&["1", "l"]]));
    }

    #[test]
    fn factor_general_case() {
        // rows share a zero at 1 that no row content explains
        let r = rm(&[&["l - 1", "1", "0"], &["0", "1", "l - 1"]]);
        let (s, t) = minimal_basis_factor(&r).unwrap();
        assert!(t.is_minimal_basis().unwrap());
        assert_eq!(s.mul(&t.to_rational()).unwrap(), r);
    }

    #[test]
    fn rank_regions() {
        let k = rm(&[&["-l", "1", "0"], &["0", "-l", "1"]]);
        assert_eq!(full_row_rank_region(&k).unwrap().region, Region::AllF);
        let r = rm(&[&["1", "1/(l - 2)"]]);
        assert_eq!(full_row_rank_region(&r).unwrap().region, Region::except([rat(2)]));
        assert!(full_row_rank_region(&rm(&[&["1", "l"], &["1", "l"]])).is_err());
    }

    #[test]
    fn duality() {
        let k = pm(&[&["-l", "1", "0"], &["0", "-l", "1"]]);
        let n = rm(&[&["1", "l", "l^2"]]);
        assert!(DualBasisPair { k: k.clone(), n }.check_duality());
        let bad = rm(&[&["1", "l", "l^2 + 1"]]);
        assert!(!DualBasisPair { k, n: bad }.check_duality());
    }

    #[test]
    fn companion_pencil_grade() {
        // G = l^2 + 2l + 3 through M = [l + 2, 3], K1 = [-1, l], N1 = [l, 1]
        let bfr = BlockFullRank::new(pm(&[&["l + 2", "3"]]), Some(pm(&[&["-1", "l"]])), None).unwrap();
        let n1 = rm(&[&["l", "1"]]);
        let (g, omega) = bfr.linearization_region(Some(&n1), None).unwrap();
        assert_eq!(g, rm(&[&["l^2 + 2*l + 3"]]));
        assert_eq!(omega.region, Region::AllF);
        let v = bfr.linearization_at_infinity_grade(Some(&n1), None, 1, 0).unwrap();
        assert!(v.verdict.holds);
        assert_eq!(v.grade, 2);
        let found = bfr.search_grade(Some(&n1), None).unwrap();
        assert_eq!(found.iter().map(|v| v.grade).collect::<Vec<_>>(), vec![2]);
    }

    #[test]
    fn pencil_degree_enforced() {
        assert!(matches!(BlockFullRank::new(pm(&[&["l^2", "1"]]), None, None), Err(Error::NotPencil(2))));
    }
}
