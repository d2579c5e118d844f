//! Brute-force reference for the graph formulas.
//!
//! `H` is diagonal in the computational basis and `|+...+>` weights every
//! configuration equally, so each expectation value is a plain average over
//! the `2^N` spin configurations. Configuration `z` is an `N`-bit integer with
//! bit `i` clear meaning `z_i = +1`.
//!
//! Since `E(z) = E(!z)`, reductions only visit configurations with the top
//! spin up; the average over that half equals the full average.

use alloc::vec::Vec;

use num_complex::Complex64;
use thiserror::Error;

use crate::geometry::EnergyMoments;
use crate::graph::WeightedGraph;
use crate::sum::Compensated;

pub const DEFAULT_SIZE_CAP: usize = 24;
const HARD_SIZE_CAP: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("graph has {nodes} nodes, brute-force cap is {cap}")]
    SizeCapExceeded { nodes: usize, cap: usize },
    #[error("invalid node pair ({i}, {j}) for {node_count} nodes")]
    InvalidNodes {
        i: usize,
        j: usize,
        node_count: usize,
    },
    #[error("moment order {0} not supported (1..=4)")]
    InvalidOrder(u32),
}

/// Brute-force evaluator with a node-count cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Oracle {
    cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self {
            cap: DEFAULT_SIZE_CAP,
        }
    }
}

/// All `2^N` energies `E(z) = sum_edges J_ij z_i z_j`, indexed by configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    pub node_count: usize,
    pub energies: Vec<f64>,
}

impl EnergySpectrum {
    pub fn energy(&self, config: u64) -> f64 {
        self.energies[config as usize]
    }
}

#[inline]
fn spin_product(config: u64, i: usize, j: usize) -> f64 {
    if ((config >> i) ^ (config >> j)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[inline]
fn energy(edges: &[(usize, usize, f64)], config: u64) -> f64 {
    edges
        .iter()
        .fold(0.0, |acc, &(i, j, w)| acc + w * spin_product(config, i, j))
}

fn edge_triples(g: &WeightedGraph) -> Vec<(usize, usize, f64)> {
    g.edges().iter().map(|e| (e.i, e.j, e.weight)).collect()
}

impl Oracle {
    /// Cap values above an internal hard limit are clamped to it.
    pub fn with_cap(cap: usize) -> Self {
        Self {
            cap: cap.min(HARD_SIZE_CAP),
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn check(&self, g: &WeightedGraph) -> Result<(), OracleError> {
        if g.node_count() > self.cap {
            Err(OracleError::SizeCapExceeded {
                nodes: g.node_count(),
                cap: self.cap,
            })
        } else {
            Ok(())
        }
    }

    pub fn spectrum(&self, g: &WeightedGraph) -> Result<EnergySpectrum, OracleError> {
        self.check(g)?;
        let edges = edge_triples(g);
        let energies = (0..1u64 << g.node_count())
            .map(|z| energy(&edges, z))
            .collect();
        Ok(EnergySpectrum {
            node_count: g.node_count(),
            energies,
        })
    }

    /// Visit `E(z)` for every configuration with the top spin up.
    fn for_half<F: FnMut(f64)>(&self, g: &WeightedGraph, mut f: F) -> Result<u64, OracleError> {
        self.check(g)?;
        let edges = edge_triples(g);
        let half = 1u64 << (g.node_count() - 1);
        for z in 0..half {
            f(energy(&edges, z));
        }
        Ok(half)
    }

    /// `2^-N sum_z E(z)^n` for `n` in `1..=4`.
    pub fn moment(&self, g: &WeightedGraph, n: u32) -> Result<f64, OracleError> {
        let m = self.moments(g)?;
        match n {
            // <H> vanishes on |+...+>
            1 => Ok(0.0),
            2 => Ok(m.m2),
            3 => Ok(m.m3),
            4 => Ok(m.m4),
            other => Err(OracleError::InvalidOrder(other)),
        }
    }

    /// Second to fourth moments in one pass.
    pub fn moments(&self, g: &WeightedGraph) -> Result<EnergyMoments, OracleError> {
        let mut acc = [Compensated::default(); 3];
        let count = self.for_half(g, |e| {
            let e2 = e * e;
            acc[0].add(e2);
            acc[1].add(e2 * e);
            acc[2].add(e2 * e2);
        })? as f64;
        Ok(EnergyMoments {
            m2: acc[0].value() / count,
            m3: acc[1].value() / count,
            m4: acc[2].value() / count,
        })
    }

    /// `<psi_0| exp(-i H t) |psi_0>`.
    pub fn loschmidt_amplitude(&self, g: &WeightedGraph, t: f64) -> Result<Complex64, OracleError> {
        let (mut re, mut im) = (Compensated::default(), Compensated::default());
        let count = self.for_half(g, |e| {
            let (s, c) = libm::sincos(e * t);
            re.add(c);
            im.add(-s);
        })? as f64;
        Ok(Complex64::new(re.value() / count, im.value() / count))
    }

    /// `|<U>|^2`, clamped into `[0, 1]` against rounding.
    pub fn return_probability(&self, g: &WeightedGraph, t: f64) -> Result<f64, OracleError> {
        Ok(self.loschmidt_amplitude(g, t)?.norm_sqr().clamp(0.0, 1.0))
    }

    /// `<psi(t)| Z_i Z_j |psi(t)>`.
    ///
    /// `Z_i Z_j` commutes with `H`, so the evolution drops out and the value is
    /// the uniform average of `z_i z_j`.
    pub fn zz_correlator(
        &self,
        g: &WeightedGraph,
        i: usize,
        j: usize,
        _t: f64,
    ) -> Result<f64, OracleError> {
        let n = g.node_count();
        if i == j || i >= n || j >= n {
            return Err(OracleError::InvalidNodes {
                i,
                j,
                node_count: n,
            });
        }
        self.check(g)?;
        let total: i64 = (0..1u64 << n).map(|z| spin_product(z, i, j) as i64).sum();
        Ok(total as f64 / (1u64 << n) as f64)
    }
}
