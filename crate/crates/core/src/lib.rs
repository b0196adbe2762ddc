//! Connected covering designs: exact bounds, explicit constructions,
//! verification, witness search and a covering-number catalog.
//!
//! An `(n,k,r)`-covering is a family of `k`-subsets of `{1..n}` such that
//! every `r`-subset lies in some block. It is connected when the graph on
//! blocks, joining two blocks that share an `r`-subset, is connected.
//! Complementing every block turns an `(n,k,r)`-covering into an
//! `(n,n-r,n-k)`-Turán system and back.

pub mod bounds;
pub mod catalog;
pub mod construct;
pub mod error;
pub mod io;
pub mod model;
pub mod orbits;
pub mod solver;
pub mod table;
pub mod verify;

mod union_find;

pub use error::{Error, Result};
pub use model::{
    binom, binom_u64, complement_block, k_subsets, Block, BinomialTable, CoverParams, DesignFamily, DesignKind,
    DesignParams, TuranParams,
};
pub use verify::{
    block_graph, connectivity, dualize, is_covering, is_turan_system, verify_connected_covering,
    verify_connected_turan, verify_family, BlockGraph, Connectivity, Verdict, VerifyReport,
};
