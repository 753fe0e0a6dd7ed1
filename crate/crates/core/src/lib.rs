//! Exact-arithmetic toolkit for group-ring valued L-values over abelian
//! extensions of Q: Stickelberger elements and their Euler factors, Fitting
//! ideals over finite group rings, the explicit local lattices behind them,
//! and group-ring valued Eisenstein series with their Hecke calculus. Every
//! identity the library claims is machine-checked exactly, either over Q and
//! cyclotomic fields or in p-adic rings at a fixed finite precision.

pub mod dirichlet;
pub mod eisenstein;
pub mod error;
pub mod group;
pub mod group_ring;
pub mod fitting;
pub mod linalg;
pub mod random;
pub mod ritter_weiss;
pub mod rings;
pub mod stickelberger;
pub mod suite;

pub use error::{CsError, Result};
