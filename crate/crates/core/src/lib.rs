//! Exact local pole/zero structure of rational matrices over ℚ, and
//! verification of linearization pencils.
//!
//! See the book in `book/` for a guided tour; every snippet there runs as
//! a doc-test of this crate.

pub mod cli;
pub mod error;
pub mod fullrank;
pub mod io;
pub mod linearize;
pub mod matrix;
pub mod pencils;
pub mod polymat;
pub mod psm;
pub mod ratmat;
pub mod scalars;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/scalars.md")]
    mod scalars {}
    #[doc = include_str!("../../../book/src/smith.md")]
    mod smith {}
    #[doc = include_str!("../../../book/src/system-matrices.md")]
    mod system_matrices {}
    #[doc = include_str!("../../../book/src/linearizations.md")]
    mod linearizations {}
    #[doc = include_str!("../../../book/src/block-full-rank.md")]
    mod block_full_rank {}
    #[doc = include_str!("../../../book/src/pencil-families.md")]
    mod pencil_families {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../docs/formats.md")]
    mod formats {}
}
