//! Algebraic laws checked on random instances.

mod common;

use common::{orders_at_by_minors, Gen};
use proptest::prelude::*;
use ratlin::fullrank::{full_row_rank_region, minimal_basis_factor};
use ratlin::io::{format_polymatrix, format_psm, format_ratmatrix, parse_polymatrix, parse_psm, parse_ratmatrix};
use ratlin::linearize::LinearizationClaim;
use ratlin::matrix::Matrix;
use ratlin::polymat::PolyMatrix;
use ratlin::psm::Psm;
use ratlin::ratmat::{RatMatrix, Region};
use ratlin::scalars::{rat, rational_roots, Point, Poly, Rat, RatFun, Valuation};

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(-4i64..=4, 1..=max_deg + 1).prop_map(|c| Poly::from_ints(&c))
}

fn nonzero_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    poly_strategy(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfun_strategy() -> impl Strategy<Value = RatFun> {
    (poly_strategy(3), nonzero_poly(3)).prop_map(|(n, d)| RatFun::new(n, d))
}

fn add_val(a: Valuation, b: Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinite,
    }
}

fn diag_with_identity(g: &RatMatrix, s: usize) -> RatMatrix {
    Matrix::block_diag(g, &RatMatrix::identity(s))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn valuations_add(f in ratfun_strategy(), g in ratfun_strategy(), a in -3i64..=3) {
        let a = rat(a);
        let fg = &f * &g;
        prop_assert_eq!(fg.valuation_at(&a), add_val(f.valuation_at(&a), g.valuation_at(&a)));
        prop_assert_eq!(fg.valuation_at_infinity(), add_val(f.valuation_at_infinity(), g.valuation_at_infinity()));
    }

    #[test]
    fn fractions_are_canonical(n in poly_strategy(3), d in nonzero_poly(3), h in nonzero_poly(2)) {
        let f = RatFun::new(n.clone(), d.clone());
        prop_assert_eq!(RatFun::new(&n * &h, &d * &h), f.clone());
        prop_assert_eq!(RatFun::new(f.num().clone(), f.den().clone()), f.clone());
        prop_assert!(f.den().is_monic());
        prop_assert!(f.num().gcd(f.den()).is_one());
    }

    #[test]
    fn rational_roots_are_exact(roots in prop::collection::vec((-9i64..=9, 1i64..=9), 0..6), rest in nonzero_poly(3)) {
        let mut want: Vec<Rat> = roots.iter().map(|&(p, q)| Rat::new(p.into(), q.into())).collect();
        let f = want.iter().fold(rest.clone(), |acc, r| &acc * &Poly::linear_root(r));
        let found = rational_roots(&f);
        for r in &found {
            prop_assert!(f.eval(r) == rat(0));
        }
        want.extend(rational_roots(&rest));
        want.sort();
        want.dedup();
        prop_assert_eq!(found, want);
    }

    #[test]
    fn ratfun_reversal_shifts_orders(f in ratfun_strategy(), g in -3i64..=3) {
        prop_assume!(!f.is_zero());
        let at_inf = f.valuation_at_infinity().finite().unwrap();
        prop_assert_eq!(f.reversal(g).valuation_at(&rat(0)), Valuation::Finite(at_inf + g));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn smith_products_and_divisibility(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let n = gen.size(1, 4);
        let p = gen.polymatrix(n, n, 2, 0.2);
        let s = p.smith_form();
        for w in s.invariant_polys.windows(2) {
            prop_assert!(w[0].divides(&w[1]));
        }
        let det = p.det().unwrap();
        if det.is_zero() {
            prop_assert!(s.rank < n);
        } else {
            let prod = s.invariant_polys.iter().fold(Poly::one(), |acc, d| &acc * d);
            prop_assert_eq!(prod, det.monic());
        }
    }

    #[test]
    fn reversal_is_an_involution(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (rp, cp) = (gen.size(1, 3), gen.size(1, 3));
        let p = gen.polymatrix(rp, cp, 3, 0.3);
        let d = p.degree().unwrap_or(0) + gen.size(0, 2);
        prop_assert_eq!(p.poly_reversal(d).poly_reversal(d), p);
    }

    #[test]
    fn smith_mcmillan_chains(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (rg, cg) = (gen.size(1, 3), gen.size(1, 3));
        let g = gen.ratmatrix(rg, cg, 2);
        let sm = g.smith_mcmillan(&Region::AllF);
        prop_assert_eq!(sm.rank, g.normal_rank());
        for (e, p) in &sm.fractions {
            prop_assert!(e.gcd(p).is_one());
        }
        for w in sm.fractions.windows(2) {
            prop_assert!(w[0].0.divides(&w[1].0));
            prop_assert!(w[1].1.divides(&w[0].1));
        }
    }

    #[test]
    fn equivalence_under_unimodular_transforms(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (r, c) = (gen.size(1, 3), gen.size(1, 3));
        let g = gen.ratmatrix(r, c, 2);
        let u = RatMatrix::from_const(&gen.unimodular_const(r));
        let v = RatMatrix::from_const(&gen.unimodular_const(c));
        let h = u.mul(&g).unwrap().mul(&v).unwrap();
        prop_assert!(g.are_equivalent_in(&h, &Region::AllF).unwrap());
        prop_assert!(h.are_equivalent_in(&g, &Region::AllF).unwrap());
        prop_assert!(g.are_equivalent_in(&g, &Region::AllF).unwrap());
    }

    #[test]
    fn identity_padding_inserts_zero_orders(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (rg, cg) = (gen.size(1, 3), gen.size(1, 3));
        let g = gen.ratmatrix(rg, cg, 2);
        let s = gen.size(1, 2);
        let a = rat(gen.int(-2, 2));
        let mut want = g.invariant_orders(&Point::Finite(a.clone())).orders;
        want.extend(std::iter::repeat_n(0, s));
        want.sort();
        let padded = diag_with_identity(&g, s);
        prop_assert_eq!(padded.invariant_orders(&Point::Finite(a.clone())).orders, want.clone());
        prop_assert_eq!(orders_at_by_minors(&padded, &a), want);
    }

    #[test]
    fn system_matrix_rank_relation(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let with_infinite = gen.chance(0.5);
        let l = gen.psm(with_infinite, 2);
        prop_assert_eq!(l.matrix().normal_rank(), l.n() + l.transfer_function().normal_rank());
        prop_assert!(l.rank_relation_check());
    }

    #[test]
    fn minimality_ignores_layout(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let l = gen.psm(false, 1);
        let rows = l.matrix().rows();
        let cols = l.matrix().cols();
        let rp: Vec<usize> = (0..rows).rev().collect();
        let cp: Vec<usize> = (0..cols).rev().collect();
        let moved = Psm::new(
            l.matrix().select(&rp, &cp),
            l.state_rows().iter().map(|&i| rows - 1 - i).collect(),
            l.state_cols().iter().map(|&j| cols - 1 - j).collect(),
        )
        .unwrap();
        let t = l.transfer_function();
        let (tr, tc): (Vec<usize>, Vec<usize>) = ((0..t.rows()).rev().collect(), (0..t.cols()).rev().collect());
        prop_assert_eq!(moved.transfer_function(), t.select(&tr, &tc));
        for a in -2..=2 {
            prop_assert_eq!(moved.is_minimal_at(&rat(a)), l.is_minimal_at(&rat(a)));
        }
        prop_assert_eq!(moved.is_minimal_at_infinity(), l.is_minimal_at_infinity());
    }

    #[test]
    fn minimal_pencils_linearize_their_transfer(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let l = gen.psm(true, 1);
        let g = l.transfer_function();
        let claim = LinearizationClaim::new(l.clone(), g.clone()).unwrap();
        for a in -2..=2 {
            if l.is_minimal_at(&rat(a)) {
                prop_assert!(claim.is_linearization_at(&rat(a)).holds);
            }
        }
        if l.is_minimal_in(&Region::AllF) {
            prop_assert!(claim.is_linearization_in(&Region::AllF).holds);
        }
        // reversals use the actual degree, so a constant matrix has grade 0
        let ell = l.degree();
        if l.is_minimal_at_infinity() {
            prop_assert!(claim.is_linearization_at_infinity(ell as i64).holds);
        }
        let grade = gen.int(-2, 2);
        let at_zero = LinearizationClaim::new(l.reversed(ell), g.g_reversal(grade)).unwrap();
        prop_assert_eq!(
            claim.is_linearization_at_infinity(grade).holds,
            at_zero.is_linearization_at(&rat(0)).holds
        );
        // equal paddings on both sides normalize away
        let k = gen.size(1, 2);
        let padded = LinearizationClaim::with_padding(l.clone(), g.clone(), k, k).unwrap();
        for a in -2..=2 {
            prop_assert_eq!(padded.is_linearization_at(&rat(a)).holds, claim.is_linearization_at(&rat(a)).holds);
        }
        prop_assert_eq!(padded.is_linearization_at_infinity(1).holds, claim.is_linearization_at_infinity(1).holds);
    }

    #[test]
    fn minimal_basis_factorization(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let p = gen.size(1, 2);
        let cols = p + gen.size(1, 2);
        let r = gen.ratmatrix(p, cols, 1);
        prop_assume!(r.normal_rank() == p);
        let (s, t) = minimal_basis_factor(&r).unwrap();
        prop_assert_eq!(s.mul(&t.to_rational()).unwrap(), r);
        prop_assert!(t.is_minimal_basis().unwrap());
        prop_assert_eq!(s.normal_rank(), p);
    }

    #[test]
    fn full_row_rank_region_is_exact(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let p = gen.size(1, 2);
        let extra = gen.size(0, 2);
        let r = gen.ratmatrix(p, p + extra, 1);
        prop_assume!(r.normal_rank() == p);
        let region = full_row_rank_region(&r).unwrap();
        for a in -4..=4 {
            let a = rat(a);
            let full = r.eval(&a).is_some_and(|m| m.rank() == p);
            prop_assert_eq!(region.region.contains(&a), full, "at {}", a);
        }
    }

    #[test]
    fn files_round_trip(seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (rp, cp) = (gen.size(1, 3), gen.size(1, 3));
        let p = gen.polymatrix(rp, cp, 3, 0.3);
        prop_assert_eq!(parse_polymatrix(&format_polymatrix(&p)).unwrap(), p);
        let (rg, cg) = (gen.size(1, 3), gen.size(1, 3));
        let g = gen.ratmatrix(rg, cg, 2);
        prop_assert_eq!(parse_ratmatrix(&format_ratmatrix(&g)).unwrap(), g);
        let l = gen.psm(true, 2);
        let back = parse_psm(&format_psm(&l)).unwrap();
        prop_assert_eq!(back.matrix(), l.matrix());
        prop_assert_eq!(back.state_rows(), l.state_rows());
        prop_assert_eq!(back.state_cols(), l.state_cols());
    }
}

#[test]
fn empty_polymatrix_degree_is_none() {
    assert_eq!(PolyMatrix::zeros(2, 2).degree(), None);
}
