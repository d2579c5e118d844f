//! Geometry of evolving weighted graph states.
//!
//! A weighted graph `G(V, E)` with couplings `J_ij` defines the Ising
//! Hamiltonian `H = sum_{(i,j) in E} J_ij Z_i Z_j`. Evolving `|+...+>` under
//! `H` produces a weighted graph state whose velocity, curvature and torsion
//! are fixed by the second, third and fourth energy moments, which in turn are
//! fixed by a handful of graph invariants (weighted degree sums, triangle and
//! square weight sums).
//!
//! This crate is `no_std` and only needs `alloc`. File formats, QASM text and
//! the command line live in the `graphgeom` companion crate.
//!
//! All weights are dimensionless multiples of a reference coupling `J`, and
//! `hbar = gamma = 1`, so times are in units of `hbar / J`.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod circuits;
pub mod experiment;
pub mod geometry;
pub mod graph;
pub mod oracle;
mod sum;

pub use circuits::{CircuitDescription, CircuitError, Gate};
pub use experiment::{ErrorBudget, ExperimentError, SweepConfig, SweepResult};
pub use geometry::{EnergyMoments, GeometryError, GeometryReport, GraphInvariants};
pub use graph::{Edge, GraphError, PowerGraph, WeightedGraph};
pub use oracle::{EnergySpectrum, Oracle, OracleError};
