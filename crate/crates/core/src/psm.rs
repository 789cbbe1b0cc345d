//! Polynomial system matrices: a polynomial matrix `P` with a designated
//! nonsingular square state block `A = P[state_rows, state_cols]`, placed
//! anywhere. With the other rows and columns taken in order,
//! `P ~ [A B; -C D]` and the represented rational matrix is `D + C·A⁻¹·B`.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::polymat::{ElementaryDivisors, PolyMatrix};
use crate::ratmat::{join_mults, InvariantOrders, RatMatrix, Region};
use crate::scalars::{coprime_basis, split_rational, Point, Poly, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Psm {
    p: PolyMatrix,
    state_rows: Vec<usize>,
    state_cols: Vec<usize>,
}

/// Points where minimality fails: rational ones explicitly, the rest as
/// square-free factors without rational roots.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DefectSet {
    pub points: Vec<Rat>,
    pub irrational: Vec<Poly>,
}

impl DefectSet {
    pub fn is_empty(&self) -> bool {
        self.points.is_empty() && self.irrational.is_empty()
    }

    /// Collects the rational roots and irrational factors of `polys`.
    pub fn from_polys(polys: &[Poly]) -> DefectSet {
        let mut points = BTreeSet::new();
        let mut rests = Vec::new();
        for p in polys {
            let (roots, rest) = split_rational(p);
            points.extend(roots.into_iter().map(|(a, _)| a));
            rests.push(rest);
        }
        DefectSet { points: points.into_iter().collect(), irrational: coprime_basis(&rests) }
    }
}

impl fmt::Display for DefectSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", pts.join(","))?;
        for p in &self.irrational {
            write!(f, " and roots of [{p}]")?;
        }
        Ok(())
    }
}

/// Pole and zero elementary divisors of the transfer function at a point,
/// read off the state block and the whole system matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsmStructureReport {
    pub pole_eds: ElementaryDivisors,
    pub zero_eds: ElementaryDivisors,
    pub point: Point,
    pub minimal: bool,
}

impl fmt::Display for PsmStructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "minimal at {}: {}", self.point, self.minimal)?;
        writeln!(f, "poles at {}: {}", self.point, join_mults(&self.pole_eds.multiplicities))?;
        write!(f, "zeros at {}: {}", self.point, join_mults(&self.zero_eds.multiplicities))
    }
}

fn check_indices(idx: &[usize], bound: usize, what: &str) -> Result<()> {
    let set: BTreeSet<usize> = idx.iter().copied().collect();
    if set.len() != idx.len() {
        return Err(Error::StateIndex(format!("repeated {what} index")));
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= bound) {
        return Err(Error::StateIndex(format!("{what} index {bad} out of range 0..{bound}")));
    }
    Ok(())
}

impl Psm {
    /// Validates the partition (0-based indices) and the state block.
    pub fn new(p: PolyMatrix, state_rows: Vec<usize>, state_cols: Vec<usize>) -> Result<Psm> {
        if state_rows.len() != state_cols.len() {
            return Err(Error::StateIndex(format!(
                "{} state rows but {} state columns",
                state_rows.len(),
                state_cols.len()
            )));
        }
        check_indices(&state_rows, p.rows(), "row")?;
        check_indices(&state_cols, p.cols(), "column")?;
        let psm = Psm { p, state_rows, state_cols };
        if psm.n() > 0 && psm.a().det()?.is_zero() {
            return Err(Error::StateSingular);
        }
        Ok(psm)
    }

    /// A system matrix with empty state: the represented matrix is `P` itself.
    pub fn empty_state(p: PolyMatrix) -> Psm {
        Psm { p, state_rows: Vec::new(), state_cols: Vec::new() }
    }

    /// `P` with the leading `n×n` block as state.
    pub fn leading(p: PolyMatrix, n: usize) -> Result<Psm> {
        Psm::new(p, (0..n).collect(), (0..n).collect())
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.p
    }

    pub fn state_rows(&self) -> &[usize] {
        &self.state_rows
    }

    pub fn state_cols(&self) -> &[usize] {
        &self.state_cols
    }

    /// Size of the state block.
    pub fn n(&self) -> usize {
        self.state_rows.len()
    }

    pub fn degree(&self) -> usize {
        self.p.degree().unwrap_or(0)
    }

    pub fn other_rows(&self) -> Vec<usize> {
        (0..self.p.rows()).filter(|i| !self.state_rows.contains(i)).collect()
    }

    pub fn other_cols(&self) -> Vec<usize> {
        (0..self.p.cols()).filter(|j| !self.state_cols.contains(j)).collect()
    }

    pub fn a(&self) -> PolyMatrix {
        self.p.select(&self.state_rows, &self.state_cols)
    }

    pub fn b(&self) -> PolyMatrix {
        self.p.select(&self.state_rows, &self.other_cols())
    }

    pub fn c(&self) -> PolyMatrix {
        self.p.select(&self.other_rows(), &self.state_cols).neg()
    }

    pub fn d(&self) -> PolyMatrix {
        self.p.select(&self.other_rows(), &self.other_cols())
    }

    /// `[A; -C]`: the state columns of `P`.
    fn state_columns(&self) -> PolyMatrix {
        self.p.select(&(0..self.p.rows()).collect::<Vec<_>>(), &self.state_cols)
    }

    /// `[A B]`: the state rows of `P`.
    fn state_row_block(&self) -> PolyMatrix {
        self.p.select(&self.state_rows, &(0..self.p.cols()).collect::<Vec<_>>())
    }

    /// Schur complement `D + C·A⁻¹·B`, by an exact solve over ℚ(λ).
    pub fn transfer_function(&self) -> RatMatrix {
        let d = self.d().to_rational();
        if self.n() == 0 {
            return d;
        }
        let x = self
            .a()
            .to_rational()
            .solve(&self.b().to_rational())
            .expect("state block is nonsingular");
        let cx = self.c().to_rational().mul(&x).expect("shapes agree");
        d.add(&cx).expect("shapes agree")
    }

    /// `rank P = n + rank G`.
    pub fn rank_relation_check(&self) -> bool {
        self.p.normal_rank() == self.n() + self.transfer_function().normal_rank()
    }

    pub fn is_minimal_at(&self, a: &Rat) -> bool {
        let n = self.n();
        n == 0 || (self.state_columns().rank_at(a) == n && self.state_row_block().rank_at(a) == n)
    }

    /// Where `[A; C]` or `[A B]` loses rank.
    pub fn minimality_defect_points(&self) -> DefectSet {
        if self.n() == 0 {
            return DefectSet::default();
        }
        let d1 = self.state_columns().smith_form().last();
        let d2 = self.state_row_block().smith_form().last();
        DefectSet::from_polys(&[d1, d2])
    }

    pub fn is_minimal_in(&self, region: &Region) -> bool {
        match region {
            Region::FiniteSet(pts) => pts.iter().all(|a| self.is_minimal_at(a)),
            _ => {
                let defects = self.minimality_defect_points();
                defects.irrational.is_empty() && defects.points.iter().all(|a| !region.contains(a))
            }
        }
    }

    /// Rank test on the coefficients of `λ^d`, `d = deg P`.
    pub fn is_minimal_at_infinity(&self) -> bool {
        let n = self.n();
        let d = self.degree();
        if n == 0 || d == 0 {
            return true;
        }
        let cols = self.state_columns().coefficient(d);
        let rows = self.state_row_block().coefficient(d);
        cols.rank() == n && rows.rank() == n
    }

    pub fn is_strongly_minimal(&self) -> bool {
        self.is_minimal_in(&Region::AllF) && self.is_minimal_at_infinity()
    }

    /// Pole elementary divisors from `A` and zero elementary divisors from
    /// `P` at `a`. Refuses when the system matrix is not minimal there.
    pub fn structure_at(&self, a: &Rat) -> Result<PsmStructureReport> {
        if !self.is_minimal_at(a) {
            return Err(Error::NotMinimal(format!("at {a}")));
        }
        let pole_eds = if self.n() == 0 {
            ElementaryDivisors { factor: crate::scalars::Factor::Linear(a.clone()), multiplicities: vec![] }
        } else {
            self.a().local_elementary_divisors(a)
        };
        Ok(PsmStructureReport {
            pole_eds,
            zero_eds: self.p.local_elementary_divisors(a),
            point: Point::Finite(a.clone()),
            minimal: true,
        })
    }

    /// Same partition on `rev_g P`. Requires `g >= deg P`.
    pub fn reversed(&self, g: usize) -> Psm {
        Psm {
            p: self.p.poly_reversal(g),
            state_rows: self.state_rows.clone(),
            state_cols: self.state_cols.clone(),
        }
    }

    /// Invariant orders at infinity of the transfer function, recovered
    /// from the reversed state block and reversed system matrix.
    pub fn structure_at_infinity(&self) -> Result<InvariantOrders> {
        if !self.is_minimal_at_infinity() {
            return Err(Error::NotMinimal("at infinity".into()));
        }
        let d = self.degree();
        let rank = self.p.normal_rank() - self.n();
        Ok(infinite_orders(&self.reversed(d), rank, d as i64))
    }
}

/// Orders `(-e reversed, 0, …, 0, ẽ) - shift` where `e`, `ẽ` are the
/// partial multiplicities at 0 of the state block and the whole matrix of
/// an already reversed system matrix.
pub(crate) fn infinite_orders(rev: &Psm, rank: usize, shift: i64) -> InvariantOrders {
    let zero = Rat::zero();
    let e = if rev.n() == 0 { vec![] } else { rev.a().local_elementary_divisors(&zero).multiplicities };
    let et = rev.p.local_elementary_divisors(&zero).multiplicities;
    let fill = rank.checked_sub(e.len() + et.len()).expect("partial multiplicities exceed the rank");
    let mut orders: Vec<i64> = e.iter().rev().map(|&k| -(k as i64)).collect();
    orders.extend(std::iter::repeat_n(0, fill));
    orders.extend(et.iter().map(|&k| k as i64));
    for o in &mut orders {
        *o -= shift;
    }
    InvariantOrders { orders, point: Point::Infinity }
}

impl fmt::Display for Psm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one_based = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "polymatrix {} {}", self.p.rows(), self.p.cols())?;
        write!(f, "{}", self.p)?;
        writeln!(f, "staterows: {}", one_based(&self.state_rows))?;
        writeln!(f, "statecols: {}", one_based(&self.state_cols))
    }
}

impl Matrix<Poly> {
    /// Shorthand for [`Psm::new`].
    pub fn with_state(self, rows: Vec<usize>, cols: Vec<usize>) -> Result<Psm> {
        Psm::new(self, rows, cols)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_poly, parse_ratfun, rat};

    fn pm(rows: &[&[&str]]) -> PolyMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_poly(s).unwrap()).collect()).collect())
    }

    fn worked_pencil() -> Psm {
        let p = pm(&[
            &["l", "0", "1", "1"],
            &["0", "1", "0", "l"],
            &["1", "0", "l + 1", "0"],
            &["l", "l", "0", "l - 1"],
        ]);
        Psm::leading(p, 2).unwrap()
    }

    fn scalar_saad(b1: &str) -> Psm {
        Psm::leading(pm(&[&["l", "1"], &[b1, "l"]]), 1).unwrap()
    }

    #[test]
    fn validation() {
        let p = pm(&[&["l", "1"], &["0", "1"]]);
        assert!(Psm::new(p.clone(), vec![0], vec![0]).is_ok());
        assert_eq!(Psm::new(p.clone(), vec![1], vec![0]), Err(Error::StateSingular));
        assert!(matches!(Psm::new(p.clone(), vec![0, 0], vec![0, 1]), Err(Error::StateIndex(_))));
        assert!(matches!(Psm::new(p, vec![0], vec![]), Err(Error::StateIndex(_))));
    }

    #[test]
    fn transfer_of_example_pencil() {
        let g = worked_pencil().transfer_function();
        let want: RatMatrix = Matrix::from_rows(vec![
            vec![parse_ratfun("(l^2 + l - 1)/(l)").unwrap(), parse_ratfun("(-1)/(l)").unwrap()],
            vec![parse_ratfun("-1").unwrap(), parse_ratfun("-l^2 + l - 2").unwrap()],
        ]);
        assert_eq!(g, want);
        assert!(worked_pencil().rank_relation_check());
    }

    #[test]
    fn scalar_saad_transfer_and_minimality() {
        // state l, B = 1, -C = -B1, D = l: transfer l + B1/l
        let s = scalar_saad("-1");
        assert_eq!(s.transfer_function().get(0, 0), &parse_ratfun("(l^2 + 1)/(l)").unwrap());
        assert!(s.is_minimal_at(&rat(0)));
        assert!(s.is_minimal_in(&Region::AllF));
        let z = scalar_saad("0");
        assert!(!z.is_minimal_at(&rat(0)));
        assert_eq!(z.minimality_defect_points().points, vec![rat(0)]);
        assert!(z.is_minimal_in(&Region::except([rat(0)])));
        assert!(!z.is_strongly_minimal());
        assert!(s.is_minimal_at_infinity());
    }

    #[test]
    fn empty_state() {
        let p = pm(&[&["l", "1"], &["2", "l"]]);
        let s = Psm::empty_state(p.clone());
        assert_eq!(s.transfer_function(), p.to_rational());
        assert!(s.is_minimal_at(&rat(3)));
        assert!(s.is_strongly_minimal());
        assert!(s.minimality_defect_points().is_empty());
    }

    #[test]
    fn example_pencil_structure() {
        let l = worked_pencil();
        assert!(l.is_strongly_minimal());
        let at0 = l.structure_at(&rat(0)).unwrap();
        assert_eq!(at0.pole_eds.multiplicities, vec![1]);
        assert_eq!(l.structure_at_infinity().unwrap().orders, vec![-2, -1]);
    }

    #[test]
    fn refuses_when_not_minimal() {
        assert!(matches!(scalar_saad("0").structure_at(&rat(0)), Err(Error::NotMinimal(_))));
    }

    #[test]
    fn display_is_one_based() {
        let text = worked_pencil().to_string();
        assert!(text.contains("staterows: 1 2"));
    }
}
