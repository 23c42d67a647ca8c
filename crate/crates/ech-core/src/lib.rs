//! Exact combinatorics of convex generators for four-dimensional convex
//! toric domains.
//!
//! A convex generator is a convex lattice path from the y-axis to the x-axis
//! whose edges carry `e`/`h` labels. This crate computes its ECH index,
//! symplectic action, and the capacity sequence of polydisks, ellipsoids,
//! balls, and general convex toric domains, all in exact integer/rational
//! arithmetic. On top of that sit the `≤` relation between generators induced
//! by a symplectic cobordism, a complete backtracking search implementing the
//! pairwise-index form of the Hutchings embedding criterion, and the decision
//! pipeline that obstructs embeddings of the polydisk `P(a,1)` into balls
//! `B(c)` with `c < 2 + a/2` for `2 ≤ a` below the threshold `(5+√7)/3`.
//!
//! Everything is pure and deterministic: no floats on decision paths, no
//! global state, immutable value types throughout.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod capacity;
pub mod criterion;
pub mod domain;
pub mod enumerate;
mod error;
pub mod generator;
mod numutil;
pub mod pipeline;
pub mod rational;
pub mod sweeps;

pub use error::{EchError, Result};
pub use generator::{ConvexGenerator, Direction, Edge, EdgeLabel, GeneratorStats};
pub use rational::Rational;
