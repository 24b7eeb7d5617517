//! Multiplicative-inverse chaining in finite fields F_{p^n} under
//! alternating polynomial bases.
//!
//! Elements of F_{p^n} are polynomials of degree below `n`; each monic
//! irreducible `f` of degree `n` gives its own inverse map `a -> a^{-1} mod f`.
//! Alternating those maps produces chains, which split the non-constant
//! elements into even cycles (two bases) or closed loops (more bases).

pub mod arith;
pub mod chain;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod field;
pub mod graph;
pub mod json;
pub mod loops;
pub mod permutation;
pub mod poly;

pub use arith::Prime;
pub use chain::{
    find_cycle, k_chain, partition, reverse_consistency_check, BasisSchedule, Chain, Cycle,
    CyclePartition, InverseTable,
};
pub use error::{Error, Result};
pub use field::{
    count_irreducibles, enumerate_irreducibles, inv, inv_oracle, is_irreducible, mul_mod,
    random_irreducible, Guard, IrreduciblePoly,
};
pub use loops::{enumerate_closed_loops, find_closed_loop, ClosedLoop, LoopCensus};
pub use permutation::{build_permutation, Orientation, Permutation};
pub use poly::{Degree, ElementIndex, Poly};
