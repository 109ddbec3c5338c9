//! Exhaustive checkers on small finite lattices, Galois insertions and
//! transition systems, plus the co-inductive synthesis loops instantiated
//! on explicit state spaces.

use thiserror::Error;

pub mod algorithms;
pub mod checks;
pub mod family;
pub mod random;
pub mod suites;
pub mod ts;

pub use algorithms::{
    counterexamples, greatest_coinvariant, greatest_invariant, run_algorithm1, run_algorithm2, run_algorithm3,
    run_algorithm4, Algorithm4Result, Choice, FiniteRun,
};
pub use checks::{
    abstract_witness, check_closure_adjunction, check_corollary9, check_fixpoint_completeness_char, check_lemma1,
    check_lemma1_abstract, check_lemma6, check_safe_inv, inductive_members, lfp_table, CompletenessReport,
    Lemma6Report, SafeInvReport,
};
pub use family::ClosureFamily;
pub use random::{random_instance, Instance, InstanceKind, InstanceParams, MAX_LATTICE};
pub use suites::{run_suite, CheckReport, SUITES};
pub use ts::{check_adjunctions, check_duality, gfp_sets, lfp_sets, FiniteTs, MAX_STATES};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("family is not intersection-closed: {0}")]
    FamilyNotClosed(String),
    #[error("family is not closed under unions")]
    NotUnionClosed,
    #[error("too many {what}: {size} exceeds the bound {bound}")]
    SizeBound {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("state {state} is outside a state space of size {size}")]
    StateOutOfRange { state: usize, size: usize },
    #[error("transition system has {system} states but the family ranges over {family}")]
    SizeMismatch { system: usize, family: usize },
    #[error("function is not monotone")]
    NotMonotone,
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
}
