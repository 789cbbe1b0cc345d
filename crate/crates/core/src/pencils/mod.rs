//! Concrete pencil families: Saad, Su–Bai, and the two NLEIGS families,
//! each with the views (system matrix, block full rank) and the dedicated
//! minimality tests that apply to them.

mod nleigs;
mod saad;
mod subai;

pub use nleigs::{
    LowRankTest, NleigsBasic, NleigsBuild, NleigsCertificate, NleigsLowRank, NleigsParams, PoleCheck,
};
pub use saad::{Saad, SaadParams};
pub use subai::{SuBai, SuBaiParams};

use crate::matrix::{ConstMatrix, Matrix};
use crate::polymat::PolyMatrix;
use crate::scalars::Poly;

/// `p(λ)·D` as a polynomial matrix.
fn times(p: &Poly, d: &ConstMatrix) -> PolyMatrix {
    PolyMatrix::from_const(d).scale(p)
}

/// Horizontal concatenation of blocks sharing a row count.
fn hcat(blocks: &[PolyMatrix]) -> crate::error::Result<PolyMatrix> {
    Matrix::block(&[blocks.iter().map(Some).collect()])
}
