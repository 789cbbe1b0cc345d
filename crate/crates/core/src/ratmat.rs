//! Rational matrices: Smith–McMillan forms globally and on regions,
//! invariant orders at finite points and at infinity, pole/zero structure,
//! eigenvalues and reversals.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::matrix::{ConstMatrix, Matrix};
use crate::polymat::PolyMatrix;
use crate::scalars::{coprime_basis, parse_rat, reduce, split_rational, Point, Poly, Rat, RatFun};

/// Matrix with rational-function entries.
pub type RatMatrix = Matrix<RatFun>;

/// A subset of the scalar field: everything, a finite set, or the
/// complement of a finite set. Only rational points can be listed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    AllF,
    FiniteSet(BTreeSet<Rat>),
    Cofinite(BTreeSet<Rat>),
}

impl Region {
    pub fn only(points: impl IntoIterator<Item = Rat>) -> Region {
        Region::FiniteSet(points.into_iter().collect())
    }

    /// Complement of `points`; [`Region::AllF`] when nothing is excluded.
    pub fn except(points: impl IntoIterator<Item = Rat>) -> Region {
        let set: BTreeSet<Rat> = points.into_iter().collect();
        if set.is_empty() {
            Region::AllF
        } else {
            Region::Cofinite(set)
        }
    }

    pub fn contains(&self, a: &Rat) -> bool {
        match self {
            Region::AllF => true,
            Region::FiniteSet(s) => s.contains(a),
            Region::Cofinite(s) => !s.contains(a),
        }
    }

    /// True when the region contains every non-rational point.
    pub fn is_cofinite(&self) -> bool {
        !matches!(self, Region::FiniteSet(_))
    }

    pub fn excluded(&self) -> BTreeSet<Rat> {
        match self {
            Region::Cofinite(s) => s.clone(),
            _ => BTreeSet::new(),
        }
    }

    pub fn intersect(&self, other: &Region) -> Region {
        match (self, other) {
            (Region::AllF, r) | (r, Region::AllF) => r.clone(),
            (Region::FiniteSet(a), r) | (r, Region::FiniteSet(a)) => {
                Region::FiniteSet(a.iter().filter(|x| r.contains(x)).cloned().collect())
            }
            (Region::Cofinite(a), Region::Cofinite(b)) => Region::except(a.union(b).cloned()),
        }
    }

    /// Parses `all`, `only:{a,b}` or `except:{a,b}`.
    pub fn parse(s: &str) -> Result<Region> {
        let s = s.trim();
        if s == "all" {
            return Ok(Region::AllF);
        }
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad region `{s}`")))?;
        let inner = rest
            .trim()
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("region set needs braces in `{s}`")))?;
        let pts = inner
            .split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(parse_rat)
            .collect::<Result<Vec<_>>>()?;
        match kind.trim() {
            "only" => Ok(Region::only(pts)),
            "except" => Ok(Region::except(pts)),
            k => Err(Error::Parse(format!("unknown region kind `{k}`"))),
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |s: &BTreeSet<Rat>| s.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        match self {
            Region::AllF => write!(f, "all"),
            Region::FiniteSet(s) => write!(f, "only:{{{}}}", list(s)),
            Region::Cofinite(s) => write!(f, "except:{{{}}}", list(s)),
        }
    }
}

/// Diagonal fractions `εᵢ/ψᵢ` with `ε₁|…|ε_r`, `ψ_r|…|ψ₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithMcMillan {
    pub fractions: Vec<(Poly, Poly)>,
    pub rank: usize,
    pub rows: usize,
    pub cols: usize,
    pub region: Region,
}

impl SmithMcMillan {
    /// Invariant orders at `a`, ascending.
    pub fn orders_at(&self, a: &Rat) -> Vec<i64> {
        let mut v: Vec<i64> = self
            .fractions
            .iter()
            .map(|(e, p)| {
                e.root_multiplicity(a).unwrap_or(0) as i64 - p.root_multiplicity(a).unwrap_or(0) as i64
            })
            .collect();
        v.sort();
        v
    }

    /// Restricts the factors to those with roots in `region`.
    pub fn restrict(&self, region: &Region) -> SmithMcMillan {
        let keep = |p: &Poly| -> Poly {
            match region {
                Region::AllF => p.clone(),
                Region::FiniteSet(pts) => pts.iter().fold(Poly::one(), |acc, a| {
                    &acc * &Poly::linear_root(a).pow(p.root_multiplicity(a).unwrap_or(0))
                }),
                Region::Cofinite(ex) => ex.iter().fold(p.clone(), |acc, a| acc.strip_root(a)),
            }
        };
        SmithMcMillan {
            fractions: self.fractions.iter().map(|(e, p)| (keep(e), keep(p))).collect(),
            rank: self.rank,
            rows: self.rows,
            cols: self.cols,
            region: self.region.intersect(region),
        }
    }

    /// Every polynomial appearing in the form.
    pub fn polys(&self) -> impl Iterator<Item = &Poly> {
        self.fractions.iter().flat_map(|(e, p)| [e, p])
    }
}

impl fmt::Display for SmithMcMillan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "size: {}x{}", self.rows, self.cols)?;
        writeln!(f, "rank: {}", self.rank)?;
        writeln!(f, "region: {}", self.region)?;
        for (i, (e, p)) in self.fractions.iter().enumerate() {
            writeln!(f, "{}: ({}) / ({})", i + 1, e, p)?;
        }
        Ok(())
    }
}

/// Invariant orders `ν₁ ≤ … ≤ ν_r` at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantOrders {
    pub orders: Vec<i64>,
    pub point: Point,
}

impl InvariantOrders {
    pub fn local_structure(&self) -> LocalStructure {
        let mut pole_mults: Vec<usize> = self.orders.iter().filter(|&&v| v < 0).map(|&v| (-v) as usize).collect();
        pole_mults.sort();
        let zero_mults = self.orders.iter().filter(|&&v| v > 0).map(|&v| v as usize).collect();
        LocalStructure { pole_mults, zero_mults, point: self.point.clone() }
    }
}

impl fmt::Display for InvariantOrders {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o: Vec<String> = self.orders.iter().map(ToString::to_string).collect();
        write!(f, "orders at {}: {}", self.point, o.join(" "))
    }
}

/// Pole and zero partial multiplicities at a point, each ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalStructure {
    pub pole_mults: Vec<usize>,
    pub zero_mults: Vec<usize>,
    pub point: Point,
}

impl fmt::Display for LocalStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "poles at {}: {}", self.point, join_mults(&self.pole_mults))?;
        write!(f, "zeros at {}: {}", self.point, join_mults(&self.zero_mults))
    }
}

/// Space-separated multiplicities, `none` when empty.
pub(crate) fn join_mults(v: &[usize]) -> String {
    if v.is_empty() {
        return "none".into();
    }
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Eigenvalues: rational points with their zero partial multiplicities,
/// and square-free irrational factors with multiplicities across the
/// invariant numerators.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Eigenvalues {
    pub rational: Vec<(Rat, Vec<usize>)>,
    pub symbolic: Vec<(Poly, Vec<usize>)>,
}

impl fmt::Display for Eigenvalues {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rational.is_empty() && self.symbolic.is_empty() {
            return writeln!(f, "eigenvalues: none");
        }
        for (a, m) in &self.rational {
            writeln!(f, "eigenvalue {a}: {}", join_mults(m))?;
        }
        for (p, m) in &self.symbolic {
            writeln!(f, "roots of [{p}]: {}", join_mults(m))?;
        }
        Ok(())
    }
}

impl RatMatrix {
    pub fn from_poly(p: &PolyMatrix) -> Self {
        p.to_rational()
    }

    pub fn from_const(m: &ConstMatrix) -> Self {
        m.map(|c| RatFun::constant(c.clone()))
    }

    /// The polynomial matrix when every entry is a polynomial.
    pub fn to_poly(&self) -> Option<PolyMatrix> {
        self.entries()
            .all(RatFun::is_polynomial)
            .then(|| self.map(|f| f.num().clone()))
    }

    /// Monic lcm of the entry denominators.
    pub fn common_denominator(&self) -> Poly {
        self.entries().fold(Poly::one(), |acc, f| acc.lcm(f.den()))
    }

    /// `d·G` for the common denominator `d`.
    pub fn numerator_matrix(&self) -> (PolyMatrix, Poly) {
        let d = self.common_denominator();
        let n = self.map(|f| f.num() * &d.div_exact(f.den()));
        (n, d)
    }

    /// Polynomial part and strictly proper part, entrywise.
    pub fn poly_sp_split(&self) -> (PolyMatrix, RatMatrix) {
        let q = self.map(|f| f.split().0);
        let sp = self.map(|f| f.split().1);
        (q, sp)
    }

    pub fn normal_rank(&self) -> usize {
        self.numerator_matrix().0.normal_rank()
    }

    /// Value at `a`; `None` at a pole of some entry.
    pub fn eval(&self, a: &Rat) -> Option<ConstMatrix> {
        let vals: Option<Vec<Rat>> = self.entries().map(|f| f.eval(a)).collect();
        vals.map(|v| Matrix::new(self.rows(), self.cols(), v).expect("same shape"))
    }

    /// Value at a point, infinity included.
    pub fn eval_at(&self, point: &Point) -> Option<ConstMatrix> {
        match point {
            Point::Finite(a) => self.eval(a),
            Point::Infinity => {
                let vals: Option<Vec<Rat>> = self.entries().map(RatFun::eval_at_infinity).collect();
                vals.map(|v| Matrix::new(self.rows(), self.cols(), v).expect("same shape"))
            }
        }
    }

    pub fn smith_mcmillan(&self, region: &Region) -> SmithMcMillan {
        let (n, d) = self.numerator_matrix();
        let s = n.smith_form();
        let fractions = s
            .invariant_polys
            .iter()
            .map(|si| {
                let f = reduce(si, &d).expect("nonzero denominator");
                (f.num().monic(), f.den().clone())
            })
            .collect();
        let full = SmithMcMillan { fractions, rank: s.rank, rows: self.rows(), cols: self.cols(), region: Region::AllF };
        full.restrict(region)
    }

    pub fn invariant_orders(&self, point: &Point) -> InvariantOrders {
        match point {
            Point::Finite(a) => InvariantOrders {
                orders: self.smith_mcmillan(&Region::AllF).orders_at(a),
                point: point.clone(),
            },
            Point::Infinity => InvariantOrders {
                orders: self.g_reversal(0).invariant_orders(&Point::Finite(Rat::zero())).orders,
                point: Point::Infinity,
            },
        }
    }

    pub fn local_structure(&self, point: &Point) -> LocalStructure {
        self.invariant_orders(point).local_structure()
    }

    /// Finite zeros that are not poles.
    pub fn eigenvalues(&self) -> Eigenvalues {
        let sm = self.smith_mcmillan(&Region::AllF);
        let Some((eps_r, _)) = sm.fractions.last() else {
            return Eigenvalues::default();
        };
        let psi_1 = &sm.fractions[0].1;
        let (roots, _) = split_rational(eps_r);
        let rational = roots
            .into_iter()
            .filter(|(a, _)| !psi_1.eval(a).is_zero())
            .map(|(a, _)| {
                let mults = sm
                    .fractions
                    .iter()
                    .filter_map(|(e, _)| e.root_multiplicity(&a).filter(|&k| k > 0))
                    .collect();
                (a, mults)
            })
            .collect();

        let mut rests: Vec<Poly> = sm.fractions.iter().map(|(e, _)| split_rational(e).1).collect();
        let psi_rest = split_rational(psi_1).1;
        rests.push(psi_rest.clone());
        let basis = coprime_basis(&rests);
        rests.pop();
        let symbolic = basis
            .into_iter()
            .filter(|b| psi_rest.gcd(b).is_one() && b.divides(eps_r))
            .map(|b| {
                let mults = rests.iter().map(|r| factor_multiplicity(r, &b)).filter(|&k| k > 0).collect();
                (b, mults)
            })
            .collect();
        Eigenvalues { rational, symbolic }
    }

    /// Eigenvalues lying in `region`; irrational factors are kept only for
    /// regions that contain every non-rational point.
    pub fn eigenvalues_in(&self, region: &Region) -> Eigenvalues {
        let all = self.eigenvalues();
        Eigenvalues {
            rational: all.rational.into_iter().filter(|(a, _)| region.contains(a)).collect(),
            symbolic: if region.is_cofinite() { all.symbolic } else { Vec::new() },
        }
    }

    /// `λ^g·G(1/λ)`, entrywise reduced.
    pub fn g_reversal(&self, g: i64) -> RatMatrix {
        self.map(|f| f.reversal(g))
    }

    /// Degree of the polynomial part, or 0 when `G` is strictly proper.
    pub fn default_grade(&self) -> i64 {
        self.poly_sp_split().0.degree().map_or(0, |d| d as i64)
    }

    pub fn is_defined_at(&self, point: &Point) -> bool {
        self.eval_at(point).is_some()
    }

    pub fn is_regular_at(&self, point: &Point) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        Ok(match self.eval_at(point) {
            None => false,
            Some(m) => !m.det()?.is_zero(),
        })
    }

    /// Same Smith–McMillan form on `region` and the same normal rank.
    pub fn are_equivalent_in(&self, other: &RatMatrix, region: &Region) -> Result<bool> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::Dimension(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        let a = self.smith_mcmillan(region);
        let b = other.smith_mcmillan(region);
        Ok(a.rank == b.rank && a.fractions == b.fractions)
    }
}

fn factor_multiplicity(p: &Poly, b: &Poly) -> usize {
    let mut k = 0;
    let mut p = p.clone();
    while !p.is_zero() {
        let (q, r) = p.div_rem(b);
        if !r.is_zero() {
            break;
        }
        p = q;
        k += 1;
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{parse_poly, parse_ratfun, rat};

    fn rm(rows: &[&[&str]]) -> RatMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| parse_ratfun(s).unwrap()).collect()).collect())
    }

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn worked_g() -> RatMatrix {
        rm(&[&["(l^2 + l - 1)/(l)", "(-1)/(l)"], &["-1", "-l^2 + l - 2"]])
    }

    #[test]
    fn split_examples() {
        let (q, sp) = rm(&[&["(l^2 + 1)/(l)"]]).poly_sp_split();
        assert_eq!((q.get(0, 0), sp.get(0, 0)), (&p("l"), &parse_ratfun("1/(l)").unwrap()));
        let g = rm(&[&["1/(l - 1)", "0"]]);
        let (q, sp) = g.poly_sp_split();
        assert!(q.is_zero());
        assert_eq!(sp, g);
        let (q, sp) = worked_g().poly_sp_split();
        assert_eq!(q, Matrix::from_rows(vec![vec![p("l + 1"), p("0")], vec![p("-1"), p("-l^2 + l - 2")]]));
        assert_eq!(sp, rm(&[&["-1/(l)", "-1/(l)"], &["0", "0"]]));
    }

    #[test]
    fn ranks() {
        assert_eq!(RatMatrix::identity(3).normal_rank(), 3);
        assert_eq!(rm(&[&["1/(l)", "1/(l)"]]).normal_rank(), 1);
        assert_eq!(worked_g().normal_rank(), 2);
    }

    #[test]
    fn smith_mcmillan_examples() {
        let sm = rm(&[&["1/(l)", "0"], &["0", "l"]]).smith_mcmillan(&Region::AllF);
        assert_eq!(sm.fractions, vec![(p("1"), p("l")), (p("l"), p("1"))]);
        let id = RatMatrix::identity(2).smith_mcmillan(&Region::only([rat(3)]));
        assert_eq!(id.fractions, vec![(p("1"), p("1")); 2]);
        let sm = worked_g().smith_mcmillan(&Region::AllF);
        assert_eq!(sm.fractions[0].1, p("l"));
        assert_eq!(sm.fractions[1].1, p("1"));
    }

    #[test]
    fn orders() {
        assert_eq!(worked_g().invariant_orders(&Point::Infinity).orders, vec![-2, -1]);
        assert_eq!(rm(&[&["l", "0"], &["0", "1/(l)"]]).invariant_orders(&Point::Infinity).orders, vec![-1, 1]);
        let at0 = worked_g().invariant_orders(&Point::Finite(rat(0))).orders;
        assert_eq!(at0[0], -1);
        assert!(at0[1] >= 0);
        let ls = worked_g().local_structure(&Point::Infinity);
        assert_eq!((ls.pole_mults, ls.zero_mults), (vec![1, 2], vec![]));
    }

    #[test]
    fn eigenvalue_examples() {
        let e = rm(&[&["l - 2", "0"], &["0", "1"]]).eigenvalues();
        assert_eq!(e.rational, vec![(rat(2), vec![1])]);
        assert!(rm(&[&["1/(l)", "0"], &["0", "l"]]).eigenvalues().rational.is_empty());
        let e = rm(&[&["l^2 - 2"]]).eigenvalues();
        assert!(e.rational.is_empty());
        assert_eq!(e.symbolic, vec![(p("l^2 - 2"), vec![1])]);
    }

    #[test]
    fn reversal_and_grade() {
        let c = rm(&[&["3", "1"]]);
        assert_eq!(c.g_reversal(0), c);
        assert_eq!(rm(&[&["2*l - 1"]]).g_reversal(1), rm(&[&["-l + 2"]]));
        assert_eq!(worked_g().default_grade(), 2);
        assert_eq!(rm(&[&["1/(l)"]]).default_grade(), 0);
    }

    #[test]
    fn definedness() {
        let id = RatMatrix::identity(2);
        assert!(id.is_regular_at(&Point::Finite(rat(4))).unwrap());
        assert!(id.is_regular_at(&Point::Infinity).unwrap());
        assert!(!rm(&[&["1/(l)"]]).is_defined_at(&Point::Finite(rat(0))));
        assert!(!rm(&[&["l"]]).is_defined_at(&Point::Infinity));
        assert!(rm(&[&["1", "2"]]).is_regular_at(&Point::Infinity).is_err());
    }

    #[test]
    fn equivalence_examples() {
        let g = worked_g();
        let u = rm(&[&["1", "l"], &["0", "1"]]);
        assert!(g.are_equivalent_in(&u.mul(&g).unwrap(), &Region::AllF).unwrap());
        let a = rm(&[&["l", "0"], &["0", "1"]]);
        assert!(a.are_equivalent_in(&RatMatrix::identity(2), &Region::except([rat(0)])).unwrap());
        assert!(!a.are_equivalent_in(&RatMatrix::identity(2), &Region::AllF).unwrap());
    }

    #[test]
    fn region_syntax() {
        for s in ["all", "only:{-1/2,3}", "except:{0}"] {
            assert_eq!(Region::parse(s).unwrap().to_string(), s);
        }
        assert_eq!(Region::parse("except:{}").unwrap(), Region::AllF);
        assert!(Region::parse("some:{1}").is_err());
    }
}
