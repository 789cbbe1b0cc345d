use crate::error::{Error, Result};
use crate::fullrank::BlockFullRank;
use crate::matrix::{ConstMatrix, Matrix};
use crate::polymat::PolyMatrix;
use crate::psm::Psm;
use crate::ratmat::RatMatrix;
use crate::scalars::{rat, Poly, RatFun};

use super::times;

/// `G(λ) = Σ Dᵢλⁱ + C(λI − A)⁻¹B` with `q ≥ 2` and `D_q ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuBaiParams {
    /// `D₀ … D_q`.
    pub d: Vec<ConstMatrix>,
    pub a: ConstMatrix,
    pub b: ConstMatrix,
    pub c: ConstMatrix,
}

/// The companion-like pencil and its three readings.
#[derive(Clone, Debug)]
pub struct SuBai {
    pub g: RatMatrix,
    pub pencil: PolyMatrix,
    /// State: everything but the first block row and the `D₀` block column.
    pub psm: Psm,
    /// State: the trailing `λI − A` block.
    pub psm_small_state: Psm,
    /// `[M; K₁]` with `M` the first block row.
    pub fullrank: BlockFullRank,
    /// `[λ^{q−1}I … I  −((λI − A)⁻¹B)ᵀ]`.
    pub dual: RatMatrix,
    q: usize,
    m: usize,
    n: usize,
}

impl SuBaiParams {
    pub fn q(&self) -> usize {
        self.d.len().saturating_sub(1)
    }

    fn validate(&self) -> Result<(usize, usize, usize)> {
        let q = self.q();
        if q < 2 {
            return Err(Error::InvalidParams(format!("need degree q >= 2, got {q}")));
        }
        if self.d[q].is_zero() {
            return Err(Error::InvalidParams("leading coefficient D_q is zero".into()));
        }
        let (p, m) = (self.d[0].rows(), self.d[0].cols());
        let n = self.a.rows();
        let ok = self.d.iter().all(|x| x.rows() == p && x.cols() == m)
            && self.a.cols() == n
            && self.b.rows() == n
            && self.b.cols() == m
            && self.c.rows() == p
            && self.c.cols() == n;
        if !ok {
            return Err(Error::Dimension("D (p×m), A (n×n), B (n×m), C (p×n) do not fit".into()));
        }
        Ok((p, m, n))
    }

    pub fn build(&self) -> Result<SuBai> {
        let (p, m, n) = self.validate()?;
        let q = self.q();
        let lam = Poly::x();
        let resolvent = self.resolvent(n)?;

        let poly_part = PolyMatrix::from_coefficients(&self.d)?;
        let g = RatMatrix::from_poly(&poly_part)
            .add(&RatMatrix::from_const(&self.c).mul(&resolvent)?.mul(&RatMatrix::from_const(&self.b))?)?;

        let eye = PolyMatrix::identity(m);
        let lam_eye = eye.scale(&lam);
        let neg_eye = eye.neg();
        let lead = times(&lam, &self.d[q]).add(&PolyMatrix::from_const(&self.d[q - 1]))?;
        let coeffs: Vec<PolyMatrix> = (0..q - 1).rev().map(|k| PolyMatrix::from_const(&self.d[k])).collect();
        let neg_c = PolyMatrix::from_const(&self.c.neg());
        let bp = PolyMatrix::from_const(&self.b);
        let state_tail = PolyMatrix::pencil(&self.a.neg(), &ConstMatrix::identity(n))?;

        let mut first: Vec<Option<&PolyMatrix>> = vec![Some(&lead)];
        first.extend(coeffs.iter().map(Some));
        first.push(Some(&neg_c));
        let mut rows = vec![first];
        for i in 1..q {
            let mut row: Vec<Option<&PolyMatrix>> = vec![None; q + 1];
            row[i - 1] = Some(&neg_eye);
            row[i] = Some(&lam_eye);
            rows.push(row);
        }
        let mut last: Vec<Option<&PolyMatrix>> = vec![None; q + 1];
        last[q - 1] = Some(&bp);
        last[q] = Some(&state_tail);
        rows.push(last);
        let pencil = Matrix::block(&rows)?;

        let all_rows: Vec<usize> = (0..pencil.rows()).collect();
        let state_rows: Vec<usize> = (p..pencil.rows()).collect();
        let state_cols: Vec<usize> = (0..(q - 1) * m).chain(q * m..q * m + n).collect();
        let psm = Psm::new(pencil.clone(), state_rows, state_cols)?;
        let tail: Vec<usize> = (pencil.rows() - n..pencil.rows()).collect();
        let tail_cols: Vec<usize> = (q * m..q * m + n).collect();
        let psm_small_state = Psm::new(pencil.clone(), tail, tail_cols)?;

        let all_cols: Vec<usize> = (0..pencil.cols()).collect();
        let m_row = pencil.select(&(0..p).collect::<Vec<_>>(), &all_cols);
        let k1 = pencil.select(&all_rows[p..], &all_cols);
        let fullrank = BlockFullRank::new(m_row, Some(k1), None)?;

        let mut dual = RatMatrix::zeros(m, q * m + n);
        for k in 0..q {
            let f = RatFun::from_poly(Poly::monomial(rat(1), q - 1 - k));
            for i in 0..m {
                dual.set(i, k * m + i, f.clone());
            }
        }
        let state_part = resolvent.mul(&RatMatrix::from_const(&self.b))?.neg().transpose();
        for i in 0..m {
            for j in 0..n {
                dual.set(i, q * m + j, state_part.get(i, j).clone());
            }
        }
        Ok(SuBai { g, pencil, psm, psm_small_state, fullrank, dual, q, m, n })
    }

    /// `(λI − A)⁻¹`.
    fn resolvent(&self, n: usize) -> Result<RatMatrix> {
        RatMatrix::from_poly(&PolyMatrix::pencil(&self.a.neg(), &ConstMatrix::identity(n))?).inverse()
    }
}

impl SuBai {
    pub fn degree(&self) -> usize {
        self.q
    }

    /// The last two block columns of the state inverse, in closed form:
    /// `[−λ^{q−2}I … −λI −I 0]ᵀ` and `[0 … 0 (λI − A)⁻¹]ᵀ`.
    pub fn closed_form_inverse_columns(&self, a: &ConstMatrix) -> Result<(RatMatrix, RatMatrix)> {
        let (q, m, n) = (self.q, self.m, self.n);
        let size = (q - 1) * m + n;
        let mut first = RatMatrix::zeros(size, m);
        for k in 0..q - 1 {
            let f = -RatFun::from_poly(Poly::monomial(rat(1), q - 2 - k));
            for i in 0..m {
                first.set(k * m + i, i, f.clone());
            }
        }
        let res = RatMatrix::from_poly(&PolyMatrix::pencil(&a.neg(), &ConstMatrix::identity(n))?).inverse()?;
        let mut second = RatMatrix::zeros(size, n);
        for i in 0..n {
            for j in 0..n {
                second.set((q - 1) * m + i, j, res.get(i, j).clone());
            }
        }
        Ok((first, second))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmat::Region;


    fn c(rows: &[&[i64]]) -> ConstMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect())
    }

    fn params(dq: ConstMatrix) -> SuBaiParams {
        SuBaiParams {
            d: vec![c(&[&[1, 0], &[0, 1]]), c(&[&[0, 1], &[1, 0]]), dq],
            a: c(&[&[2]]),
            b: c(&[&[1, 1]]),
            c: c(&[&[1], &[0]]),
        }
    }

    #[test]
    fn transfer_identity_and_inverse_columns() {
        let sb = params(c(&[&[1, 0], &[0, 0]])).build().unwrap();
        assert_eq!(sb.psm.transfer_function(), sb.g);
        let inv = RatMatrix::from_poly(&sb.psm.a()).inverse().unwrap();
        let (first, second) = sb.closed_form_inverse_columns(&c(&[&[2]])).unwrap();
        let size = inv.rows();
        let rows: Vec<usize> = (0..size).collect();
        assert_eq!(inv.select(&rows, &[size - 3, size - 2]), first);
        assert_eq!(inv.select(&rows, &[size - 1]), second);
    }

    #[test]
    fn fullrank_view_and_grade() {
        let sb = params(c(&[&[1, 0], &[0, 0]])).build().unwrap();
        let (g, omega) = sb.fullrank.linearization_region(Some(&sb.dual), None).unwrap();
        assert_eq!(g, sb.g);
        assert_eq!(omega.region, Region::except([rat(2)]));
        let v = sb.fullrank.linearization_at_infinity_grade(Some(&sb.dual), None, 1, 0).unwrap();
        assert!(v.verdict.holds);
        assert_eq!(v.grade, 2);
    }

    #[test]
    fn minimal_at_infinity_iff_full_rank_lead() {
        assert!(!params(c(&[&[1, 0], &[0, 0]])).build().unwrap().psm.is_minimal_at_infinity());
        assert!(params(c(&[&[1, 0], &[0, 3]])).build().unwrap().psm.is_minimal_at_infinity());
    }

    #[test]
    fn rejects_low_degree() {
        let mut p = params(c(&[&[1, 0], &[0, 1]]));
        p.d.pop();
        assert!(matches!(p.build(), Err(Error::InvalidParams(_))));
    }
}
