//! Exact symbolic computation in Lie conformal algebras and their universal
//! enveloping vertex algebras.
//!
//! The [`engine`] canonicalizes normally ordered products and computes
//! λ-brackets from a finite bracket table. On top of it sit the Jacobi
//! verifier ([`verify`]), the polynomial family and its classification
//! solvers ([`pfamily`]), builtin algebras and the text spec format
//! ([`algebras`]), the free field realization ([`wakimoto`]) and the Zhu
//! algebra presentation ([`zhu`]).
//!
//! Each major capability has a runnable example: `cargo run --example <name>`.

pub mod algebras;
pub mod cli;
pub mod engine;
pub mod expr;
pub mod pfamily;
pub mod poly;
pub mod report;
pub mod terms;
pub mod verify;
pub mod wakimoto;
pub mod zhu;
