//! Exact algorithms for number rings and the integer structures beneath them.
//!
//! The crate is organized in layers. At the bottom sit arbitrary-precision
//! integers and rationals ([`exact`]) together with a quarantined factoring
//! oracle ([`factor`]) that stands in for the provably hard sub-problems.
//! On top of those: coprime-basis factorization over the integers
//! ([`coprime`]), exact-rational quadratic lattices with LLL and the
//! kernel-image algorithm ([`lattice`]), the calculus of finitely generated
//! abelian groups ([`abgroup`]), orders given by multiplication tables
//! ([`order`]), fractional ideals and blowups ([`ideal`]), multiplicative
//! relation kernels ([`units`]), finite commutative rings and nilradicals
//! ([`finring`]), maximal orders and the reduction web around them
//! ([`maxorder`]), and Jacobi-type symbols ([`symbols`]).
//!
//! Everything is exact: there is no floating-point arithmetic anywhere in
//! the computational paths. Where real numbers are unavoidable (logarithms
//! of complex embeddings) the crate works with certified rational enclosures
//! ([`certified`]) and recovers exact answers via relation lattices.
//!
//! The [`cli`] module exposes every operation through a batch front-end;
//! `examples/` holds one runnable demo per major capability.

pub mod abgroup;
pub mod certified;
pub mod cli;
pub mod coprime;
pub mod exact;
pub mod factor;
pub mod finring;
pub mod ideal;
pub mod lattice;
pub mod linalg;
pub mod mat;
pub mod maxorder;
pub mod order;
pub mod poly;
pub mod symbols;
pub mod units;

pub use exact::{Int, Rat};
