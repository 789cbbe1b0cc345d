use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::fullrank::BlockFullRank;
use crate::matrix::{ConstMatrix, Matrix};
use crate::polymat::PolyMatrix;
use crate::psm::Psm;
use crate::ratmat::RatMatrix;
use crate::scalars::{Poly, Rat, RatFun};

use super::hcat;

/// `G(λ) = −B₀ + λA₀ + Σ Bᵢ/(λ − σᵢ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaadParams {
    pub a0: ConstMatrix,
    pub b0: ConstMatrix,
    pub b: Vec<ConstMatrix>,
    pub sigma: Vec<Rat>,
}

/// Everything built from [`SaadParams`].
#[derive(Clone, Debug)]
pub struct Saad {
    pub g: RatMatrix,
    /// State `diag((λ − σᵢ)I)` in the leading block.
    pub psm: Psm,
    /// `[M; K₁]`, the last block row of the pencil on top.
    pub fullrank: BlockFullRank,
    pub dual: RatMatrix,
}

impl SaadParams {
    fn validate(&self) -> Result<usize> {
        let m = self.a0.rows();
        let all = std::iter::once(&self.a0).chain(std::iter::once(&self.b0)).chain(&self.b);
        if all.into_iter().any(|x| x.rows() != m || x.cols() != m) {
            return Err(Error::Dimension("all coefficients must be square of one size".into()));
        }
        if self.b.len() != self.sigma.len() {
            return Err(Error::Dimension(format!("{} residues for {} shifts", self.b.len(), self.sigma.len())));
        }
        if self.sigma.iter().collect::<BTreeSet<_>>().len() != self.sigma.len() {
            return Err(Error::InvalidParams("shifts must be distinct".into()));
        }
        Ok(m)
    }

    pub fn build(&self) -> Result<Saad> {
        let m = self.validate()?;
        let s = self.sigma.len();
        let tail = PolyMatrix::pencil(&self.b0.neg(), &self.a0)?;

        let mut g = RatMatrix::from_poly(&tail);
        for (bi, si) in self.b.iter().zip(&self.sigma) {
            let f = RatFun::new(Poly::one(), Poly::linear_root(si));
            g = g.add(&RatMatrix::from_const(bi).scale(&f))?;
        }

        let eye = PolyMatrix::identity(m);
        let zero = PolyMatrix::zeros(m, m);
        let shifted: Vec<PolyMatrix> = self.sigma.iter().map(|si| eye.scale(&Poly::linear_root(si))).collect();
        let mut rows: Vec<Vec<Option<&PolyMatrix>>> = Vec::with_capacity(s + 1);
        for i in 0..s {
            let mut row: Vec<Option<&PolyMatrix>> = vec![Some(&zero); s];
            row[i] = Some(&shifted[i]);
            row.push(Some(&eye));
            rows.push(row);
        }
        let neg_b: Vec<PolyMatrix> = self.b.iter().map(|bi| PolyMatrix::from_const(&bi.neg())).collect();
        let mut last: Vec<Option<&PolyMatrix>> = neg_b.iter().map(Some).collect();
        last.push(Some(&tail));
        rows.push(last);
        let p = Matrix::block(&rows)?;
        let psm = Psm::leading(p.clone(), s * m)?;

        let k1 = p.select(&(0..s * m).collect::<Vec<_>>(), &(0..p.cols()).collect::<Vec<_>>());
        let mut m_row = neg_b;
        m_row.push(tail);
        let fullrank = BlockFullRank::new(hcat(&m_row)?, Some(k1), None)?;
        let mut dual_blocks: Vec<RatMatrix> = self
            .sigma
            .iter()
            .map(|si| {
                let f = RatFun::new(Poly::one(), Poly::linear_root(si));
                RatMatrix::identity(m).scale(&-f)
            })
            .collect();
        dual_blocks.push(RatMatrix::identity(m));
        let dual = Matrix::block(&[dual_blocks.iter().map(Some).collect()])?;
        Ok(Saad { g, psm, fullrank, dual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::Region;
    use crate::scalars::rat;

    fn c(rows: &[&[i64]]) -> ConstMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn params(b1: ConstMatrix) -> SaadParams {
        SaadParams {
            a0: c(&[&[1, 0], &[0, 2]]),
            b0: c(&[&[0, 1], &[1, 0]]),
            b: vec![b1, c(&[&[1, 1], &[0, 1]])],
            sigma: vec![rat(1), rat(-2)],
        }
    }

    #[test]
    fn transfer_and_minimality() {
        let built = params(c(&[&[2, 0], &[0, 1]])).build().unwrap();
        assert_eq!(built.psm.transfer_function(), built.g);
        assert!(built.psm.is_minimal_in(&Region::AllF));
        let singular = params(c(&[&[1, 1], &[1, 1]])).build().unwrap();
        assert!(!singular.psm.is_minimal_at(&rat(1)));
        assert!(singular.psm.is_minimal_in(&Region::except([rat(1)])));
    }

    #[test]
    fn empty_sum_is_polynomial() {
        let p = SaadParams { a0: c(&[&[1]]), b0: c(&[&[3]]), b: vec![], sigma: vec![] };
        let built = p.build().unwrap();
        assert_eq!(built.g.to_poly().unwrap(), built.psm.matrix().clone());
    }

    #[test]
    fn duplicate_shift_rejected() {
        let mut p = params(c(&[&[1, 0], &[0, 1]]));
        p.sigma[1] = rat(1);
        assert!(matches!(p.build(), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn fullrank_view() {
        let built = params(c(&[&[2, 0], &[0, 1]])).build().unwrap();
        let (g, omega) = built.fullrank.linearization_region(Some(&built.dual), None).unwrap();
        assert_eq!(g, built.g);
        assert_eq!(omega.region, Region::except([rat(1), rat(-2)]));
        let v = built.fullrank.linearization_at_infinity_grade(Some(&built.dual), None, 0, 0).unwrap();
        assert!(v.verdict.holds);
        assert_eq!(v.grade, 1);
    }
}
