//! Synthesis of abstract inductive invariants for control-flow-graph programs.
//!
//! The crate is organised bottom-up:
//!
//! * [`lattice_core`]: domain contract, product lattices, Kleene iteration,
//!   Galois insertions and closure operators.
//! * [`program_model`]: the CFG program representation and its text format.
//! * [`const_domain`]: Kildall's constant propagation domain over the integers.
//! * [`affine_domain`]: Karr's affine equalities over exact rationals.
//! * [`synthesis`]: forward least-fixpoint and backward greatest-fixpoint
//!   invariant synthesis on programs.
//! * [`finite_oracle`]: exhaustive checkers on small finite lattices and
//!   transition systems.
//! * [`cli`]: the `absinv` command line front end.

pub mod affine_domain;
pub mod cli;
pub mod const_domain;
pub mod finite_oracle;
pub mod lattice_core;
pub mod linalg;
pub mod program_model;
pub mod synthesis;

pub use num_rational::BigRational as Rational;
