//! Exact enumeration and limit laws for the height of rooted non-plane
//! binary trees.
//!
//! - [`series`]: truncated integer power series and the Pólya substitution.
//! - [`enumeration`]: tree counts, height-bounded counts, exact height laws.
//! - [`constants`]: certified `rho`, `lambda` and evaluations of `y`, `y'`.
//! - [`limit_laws`]: theta survival and density, moments, deviation bounds.
//! - [`sampler`]: uniform random trees of a given size.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]

extern crate alloc;

pub mod certified;
pub mod constants;
pub mod enumeration;
pub mod error;
pub mod limit_laws;
pub mod sampler;
pub mod series;
pub mod special;
pub mod tree;

pub use certified::CertifiedReal;
pub use enumeration::{
    brute_force_enumerate, count_trees, exact_moment, exceedance_counts, height_bounded_columns,
    height_bounded_counts, height_distribution, BruteForce, CountTable, ExceedanceTable,
    HeightCountTable, HeightDistribution,
};
pub use error::Error;
pub use series::TruncatedIntSeries;
pub use tree::Tree;
