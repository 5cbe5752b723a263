//! Quivers with potential and their decorated representations.

pub mod decorated;
pub mod mutation;
pub mod potential;

pub use decorated::{build_cluster_monomial, build_cluster_rep, e_inj, e_invariant, e_invariants, DecoratedRep};
pub use mutation::{qp_mutate, rep_mutate, MutationReport};
pub use potential::{chordless_cycles, cyclic_derivative, jacobian_check, primitive_potential, second_derivative, CyclicPath, Potential, Qp};
