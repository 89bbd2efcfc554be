//! Enumeration, counting and verification of gapsets, the finite
//! complements of numerical semigroups.
//!
//! The crate is organised around the tree of numerical semigroups:
//!
//! - [`gapset`] and [`filtration`]: the value types, validity checks and
//!   the bijection between gapsets and their m-filtrations.
//! - [`tree`]: parent/children and pruned, parallel depth-first counting.
//! - [`growth`]: the genus-growth maps on depth-≤3 filtrations, their
//!   image classification and the sandwich bounds they yield.
//! - [`families`]: closed forms for multiplicities 3 and 4.
//! - [`graph`]: the refinement graph between consecutive genera.
//! - [`analysis`]: Fibonacci/tribonacci references and ratio reports.

pub mod analysis;
pub mod error;
pub mod families;
pub mod filtration;
pub mod gapset;
pub mod graph;
pub mod growth;
pub mod intset;
pub mod tree;

pub use error::{Error, Result};
pub use filtration::{
    format_filtration, is_gapset_filtration, parse_filtration, phi, tau, Filtration,
};
pub use gapset::{
    format_generators, is_gapset, parse_gap_list, parse_generators, Gapset, GapsetStats,
};
pub use intset::IntSet;
pub use tree::{
    children, count, count_with, enumerate, parent, CountTable, EnumFilter, EnumOptions, TreeNode,
};
