//! Verdicts on linearization claims: at a point, on a region, at infinity
//! with a grade, and g-strong. Everything is decided through local
//! pole/zero structure; no transformation matrices are searched for.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::psm::{infinite_orders, Psm};
use crate::ratmat::{InvariantOrders, RatMatrix, Region, SmithMcMillan};
use crate::scalars::{rational_roots, split_rational, Poly, Rat};

/// A degree ≤ 1 system matrix `L` claimed to linearize `G`, with identity
/// paddings `s1`, `s2` such that `diag(G, I_s1)` and `diag(Ĝ, I_s2)` have
/// the same size (`Ĝ` is the transfer function of `L`).
#[derive(Clone, Debug)]
pub struct LinearizationClaim {
    l: Psm,
    g: RatMatrix,
    ghat: RatMatrix,
    s1: usize,
    s2: usize,
}

/// Outcome of a check; `witness` explains a negative answer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn yes() -> Verdict {
        Verdict { holds: true, witness: None }
    }

    pub fn no(why: impl Into<String>) -> Verdict {
        Verdict { holds: false, witness: Some(why.into()) }
    }

    fn from_witness(w: Option<String>) -> Verdict {
        match w {
            None => Verdict::yes(),
            Some(w) => Verdict::no(w),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "holds: {}", self.holds)?;
        if let Some(w) = &self.witness {
            write!(f, "\nwitness: {w}")?;
        }
        Ok(())
    }
}

/// Result of comparing a strong linearization in the classical
/// state-space sense with the graded notion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongComparison {
    /// g-strong with `g` the degree of the polynomial part of `G`.
    GgStrong(i64),
    /// g-strong with `g` one above the degree of the polynomial part.
    GgPlusOneStrong(i64),
    /// Not g-strong for any grade.
    NotGStrongAnyG,
    /// The classical hypotheses fail; the reason is attached.
    NotApplicable(String),
}

impl fmt::Display for StrongComparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StrongComparison::GgStrong(g) => write!(f, "g_G-strong (grade {g})"),
            StrongComparison::GgPlusOneStrong(g) => write!(f, "g_G+1-strong (grade {g})"),
            StrongComparison::NotGStrongAnyG => write!(f, "not g-strong for any g"),
            StrongComparison::NotApplicable(why) => write!(f, "not applicable: {why}"),
        }
    }
}

fn fmt_list<T: ToString>(v: &[T]) -> String {
    format!("({})", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

/// Nonzero orders must agree; zeros are absorbed by the identity padding.
fn compare_orders(what: &str, g: &[i64], ghat: &[i64]) -> Option<String> {
    let nz = |v: &[i64]| v.iter().copied().filter(|&x| x != 0).collect::<Vec<_>>();
    let (a, b) = (nz(g), nz(ghat));
    if a == b {
        return None;
    }
    let poles = |v: &[i64]| {
        let mut p: Vec<i64> = v.iter().filter(|&&x| x < 0).map(|x| -x).collect();
        p.sort();
        p
    };
    let zeros = |v: &[i64]| v.iter().copied().filter(|&x| x > 0).collect::<Vec<_>>();
    if poles(&a) != poles(&b) {
        Some(format!("pole partial multiplicities {what} differ: {} vs {}", fmt_list(&poles(&a)), fmt_list(&poles(&b))))
    } else {
        Some(format!("zero partial multiplicities {what} differ: {} vs {}", fmt_list(&zeros(&a)), fmt_list(&zeros(&b))))
    }
}

fn nontrivial_irrational(parts: impl Iterator<Item = Poly>) -> Vec<Poly> {
    parts.map(|p| split_rational(&p).1).filter(|p| !p.is_one()).collect()
}

impl LinearizationClaim {
    /// Claim with the smallest paddings (one of `s1`, `s2` is zero).
    pub fn new(l: Psm, g: RatMatrix) -> Result<Self> {
        let ghat = l.transfer_function();
        let (q, r) = (ghat.rows() as i64, ghat.cols() as i64);
        let (p, m) = (g.rows() as i64, g.cols() as i64);
        if q - p != r - m {
            return Err(Error::Dimension(format!(
                "transfer is {q}x{r} but target is {p}x{m}; size differences must agree"
            )));
        }
        let s = q - p;
        Self::build(l, g, ghat, s.max(0) as usize, (-s).max(0) as usize)
    }

    /// Claim with explicit paddings.
    pub fn with_padding(l: Psm, g: RatMatrix, s1: usize, s2: usize) -> Result<Self> {
        let ghat = l.transfer_function();
        if g.rows() + s1 != ghat.rows() + s2 || g.cols() + s1 != ghat.cols() + s2 {
            return Err(Error::Dimension(format!(
                "diag(G, I_{s1}) and diag(Ĝ, I_{s2}) differ in size"
            )));
        }
        Self::build(l, g, ghat, s1, s2)
    }

    fn build(l: Psm, g: RatMatrix, ghat: RatMatrix, s1: usize, s2: usize) -> Result<Self> {
        if l.degree() > 1 {
            return Err(Error::NotPencil(l.degree()));
        }
        Ok(LinearizationClaim { l, g, ghat, s1, s2 })
    }

    pub fn pencil(&self) -> &Psm {
        &self.l
    }

    pub fn target(&self) -> &RatMatrix {
        &self.g
    }

    pub fn transfer(&self) -> &RatMatrix {
        &self.ghat
    }

    pub fn paddings(&self) -> (usize, usize) {
        (self.s1, self.s2)
    }

    fn rank_witness(&self) -> Option<String> {
        let (rg, rh) = (self.g.normal_rank(), self.ghat.normal_rank());
        (rg + self.s1 != rh + self.s2).then(|| {
            format!("rank gap: rank G + {} = {} but rank Ĝ + {} = {}", self.s1, rg + self.s1, self.s2, rh + self.s2)
        })
    }

    fn point_witness(&self, a: &Rat, sm_g: &SmithMcMillan, sm_h: &SmithMcMillan) -> Option<String> {
        if !self.l.is_minimal_at(a) {
            return Some(format!("system matrix not minimal at {a}"));
        }
        compare_orders(&format!("at {a}"), &sm_g.orders_at(a), &sm_h.orders_at(a))
    }

    pub fn is_linearization_at(&self, a: &Rat) -> Verdict {
        if let Some(w) = self.rank_witness() {
            return Verdict::no(w);
        }
        let sm_g = self.g.smith_mcmillan(&Region::only([a.clone()]));
        let sm_h = self.ghat.smith_mcmillan(&Region::only([a.clone()]));
        Verdict::from_witness(self.point_witness(a, &sm_g, &sm_h))
    }

    /// Checks only the finitely many points where something can go wrong:
    /// minimality defects of `L` and rational roots of the Smith–McMillan
    /// numerators and denominators of `G` and `Ĝ`. Irrational loci are
    /// compared factor by factor.
    pub fn is_linearization_in(&self, region: &Region) -> Verdict {
        if let Some(w) = self.rank_witness() {
            return Verdict::no(w);
        }
        let sm_g = self.g.smith_mcmillan(&Region::AllF);
        let sm_h = self.ghat.smith_mcmillan(&Region::AllF);
        let candidates: Vec<Rat> = match region {
            Region::FiniteSet(pts) => pts.iter().cloned().collect(),
            _ => {
                let defects = self.l.minimality_defect_points();
                if let Some(f) = defects.irrational.first() {
                    return Verdict::no(format!("system matrix not minimal at the roots of {f}"));
                }
                let mut c: Vec<Rat> = defects.points;
                for p in sm_g.polys().chain(sm_h.polys()) {
                    c.extend(rational_roots(p));
                }
                c.sort();
                c.dedup();
                c.retain(|a| region.contains(a));
                c
            }
        };
        for a in &candidates {
            if let Some(w) = self.point_witness(a, &sm_g, &sm_h) {
                return Verdict::no(w);
            }
        }
        if region.is_cofinite() {
            let eg = nontrivial_irrational(sm_g.fractions.iter().map(|(e, _)| e.clone()));
            let eh = nontrivial_irrational(sm_h.fractions.iter().map(|(e, _)| e.clone()));
            if eg != eh {
                return Verdict::no(format!("irrational zero factors differ: {} vs {}", fmt_list(&eg), fmt_list(&eh)));
            }
            let pg = nontrivial_irrational(sm_g.fractions.iter().map(|(_, p)| p.clone()));
            let ph = nontrivial_irrational(sm_h.fractions.iter().map(|(_, p)| p.clone()));
            if pg != ph {
                return Verdict::no(format!("irrational pole factors differ: {} vs {}", fmt_list(&pg), fmt_list(&ph)));
            }
        }
        Verdict::yes()
    }

    /// Spectral test at infinity with grade `g`: `rev L` minimal at 0, the
    /// rank condition, and the partial multiplicities at 0 of `rev_g G`
    /// read off the reversed state block (poles) and `rev L` (zeros).
    pub fn is_linearization_at_infinity(&self, g: i64) -> Verdict {
        let zero = Rat::zero();
        let ell = self.l.degree();
        let rev = self.l.reversed(ell);
        if !rev.is_minimal_at(&zero) {
            return Verdict::no("reversed system matrix not minimal at 0");
        }
        if let Some(w) = self.rank_witness() {
            return Verdict::no(w);
        }
        let target = self.g.g_reversal(g).invariant_orders(&crate::scalars::Point::Finite(zero.clone()));
        let local = target.local_structure();
        let poles = if rev.n() == 0 { vec![] } else { rev.a().local_elementary_divisors(&zero).multiplicities };
        let zeros = rev.matrix().local_elementary_divisors(&zero).multiplicities;
        if local.pole_mults != poles {
            return Verdict::no(format!(
                "pole partial multiplicities at 0 of the {g}-reversal differ: {} vs {}",
                fmt_list(&local.pole_mults),
                fmt_list(&poles)
            ));
        }
        if local.zero_mults != zeros {
            return Verdict::no(format!(
                "zero partial multiplicities at 0 of the {g}-reversal differ: {} vs {}",
                fmt_list(&local.zero_mults),
                fmt_list(&zeros)
            ));
        }
        Verdict::yes()
    }

    pub fn is_g_strong(&self, g: i64) -> Verdict {
        let v = self.is_linearization_in(&Region::AllF);
        if !v.holds {
            return v;
        }
        self.is_linearization_at_infinity(g)
    }
}

/// Invariant orders at infinity of the linearized matrix, from a pencil
/// assumed to linearize it at infinity with grade `g` and no padding.
pub fn recover_infinite_orders(l: &Psm, g: i64) -> Result<InvariantOrders> {
    recover_infinite_orders_padded(l, g, 0)
}

/// As [`recover_infinite_orders`] when `Ĝ ~ diag(G, I_s)`.
pub fn recover_infinite_orders_padded(l: &Psm, g: i64, s: usize) -> Result<InvariantOrders> {
    let ell = l.degree();
    if ell > 1 {
        return Err(Error::NotPencil(ell));
    }
    let rev = l.reversed(ell);
    if !rev.is_minimal_at(&Rat::zero()) {
        return Err(Error::NotMinimal("reversed system matrix at 0".into()));
    }
    let rank = (l.matrix().normal_rank() - l.n())
        .checked_sub(s)
        .ok_or_else(|| Error::Dimension("padding exceeds the rank".into()))?;
    Ok(infinite_orders(&rev, rank, g))
}

/// Decides which grade, if any, makes a classical strong linearization
/// (state-space sense: linearization everywhere finite, invertible leading
/// state coefficient, and matching structure of the default reversals at 0)
/// a g-strong linearization.
pub fn classify_vs_strong(l: &Psm, g: &RatMatrix) -> StrongComparison {
    let claim = match LinearizationClaim::new(l.clone(), g.clone()) {
        Ok(c) => c,
        Err(e) => return StrongComparison::NotApplicable(e.to_string()),
    };
    let finite = claim.is_linearization_in(&Region::AllF);
    if let Some(w) = finite.witness {
        return StrongComparison::NotApplicable(format!("not a linearization in all of F: {w}"));
    }
    let n = l.n();
    let a1 = l.a().coefficient(1);
    if n > 0 && a1.det().map(|d| d.is_zero()).unwrap_or(true) {
        return StrongComparison::NotApplicable("leading state coefficient is singular".into());
    }
    let g_g = g.default_grade();
    let g_h = claim.ghat.default_grade();
    let zero = crate::scalars::Point::Finite(Rat::zero());
    let rev_g = g.g_reversal(g_g).invariant_orders(&zero);
    let rev_h = claim.ghat.g_reversal(g_h).invariant_orders(&zero);
    if rev_g.orders.len() + claim.s1 != rev_h.orders.len() + claim.s2 {
        return StrongComparison::NotApplicable("default reversals differ in rank".into());
    }
    if let Some(w) = compare_orders("of the default reversals at 0", &rev_g.orders, &rev_h.orders) {
        return StrongComparison::NotApplicable(w);
    }
    if n == 0 {
        return StrongComparison::GgStrong(g_g);
    }
    let x = {
        let ainv_b = a1.solve(&l.b().coefficient(1)).expect("invertible");
        let cab = l.c().coefficient(1).mul(&ainv_b).expect("shapes agree");
        l.d().coefficient(1).add(&cab).expect("shapes agree")
    };
    if !x.is_zero() {
        return StrongComparison::GgStrong(g_g);
    }
    let (q, r) = (claim.ghat.rows(), claim.ghat.cols());
    if q == g.rows() && r == g.cols() {
        StrongComparison::GgPlusOneStrong(g_g + 1)
    } else {
        StrongComparison::NotGStrongAnyG
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::polymat::PolyMatrix;
    use crate::scalars::{parse_poly, parse_ratfun, rat};

    fn pm(rows: &[&[&str]]) -> PolyMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_poly(s).unwrap()).collect()).collect())
    }

    fn rm(rows: &[&[&str]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
    }

    fn worked_pencil() -> Psm {
        Psm::leading(
            pm(&[
                &["l", "0", "1", "1"],
                &["0", "1", "0", "l"],
                &["1", "0", "l + 1", "0"],
                &["l", "l", "0", "l - 1"],
            ]),
            2,
        )
        .unwrap()
    }

    fn worked_g() -> RatMatrix {
        rm(&[&["(l^2 + l - 1)/(l)", "(-1)/(l)"], &["-1", "-l^2 + l - 2"]])
    }

    #[test]
    fn example_pencil_is_one_strong() {
        let claim = LinearizationClaim::new(worked_pencil(), worked_g()).unwrap();
        assert!(claim.is_linearization_in(&Region::AllF).holds);
        assert!(claim.is_g_strong(1).holds);
        assert!(!claim.is_linearization_at_infinity(2).holds);
        assert_eq!(recover_infinite_orders(&worked_pencil(), 1).unwrap().orders, vec![-2, -1]);
    }

    #[test]
    fn wrong_target_gives_witness() {
        let other = rm(&[&["(l^2 + l - 1)/(l)", "(-1)/(l - 1)"], &["-1", "-l^2 + l - 2"]]);
        let v = LinearizationClaim::new(worked_pencil(), other).unwrap().is_linearization_in(&Region::AllF);
        assert!(!v.holds);
        assert!(v.witness.is_some());
    }

    #[test]
    fn degree_two_rejected() {
        let l = Psm::empty_state(pm(&[&["l^2"]]));
        assert!(matches!(LinearizationClaim::new(l, rm(&[&["l^2"]])), Err(Error::NotPencil(2))));
    }

    #[test]
    fn padding_normalization() {
        let l = Psm::empty_state(pm(&[&["l", "0"], &["0", "1"]]));
        let g = rm(&[&["l"]]);
        let a = LinearizationClaim::new(l.clone(), g.clone()).unwrap();
        let b = LinearizationClaim::with_padding(l, g, 2, 1).unwrap();
        assert_eq!(a.paddings(), (1, 0));
        for x in [rat(0), rat(1)] {
            assert_eq!(a.is_linearization_at(&x), b.is_linearization_at(&x));
        }
        assert_eq!(a.is_g_strong(1), b.is_g_strong(1));
    }

    #[test]
    fn classifier_cases() {
        // constant feedthrough: grade one above the polynomial part
        let l = Psm::leading(pm(&[&["l - 1", "1"], &["-1", "2"]]), 1).unwrap();
        let g = l.transfer_function();
        assert_eq!(classify_vs_strong(&l, &g), StrongComparison::GgPlusOneStrong(1));
        // extra identity block and vanishing leading term
        let l = Psm::leading(pm(&[&["l", "1", "0"], &["-1", "0", "0"], &["0", "0", "1"]]), 1).unwrap();
        let g = rm(&[&["1/(l)"]]);
        assert_eq!(classify_vs_strong(&l, &g), StrongComparison::NotGStrongAnyG);
        // the example pencil has a singular leading state coefficient
        assert!(matches!(classify_vs_strong(&worked_pencil(), &worked_g()), StrongComparison::NotApplicable(_)));
    }
}
