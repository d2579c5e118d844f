//! Measurement protocols as gate lists, plus a small dense statevector
//! simulator used to check them.
//!
//! Gate set: Hadamard, `RZZ(theta) = exp(-i theta Z_a Z_b / 2)` and a final
//! computational-basis measurement. Evolving for time `t` under an edge of
//! weight `J_ij` is `RZZ(2 J_ij t)`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, WeightedGraph};

/// Largest register the statevector simulator accepts.
pub const SIMULATION_QUBIT_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("circuit has no qubits")]
    NoQubits,
    #[error("qubit {qubit} out of range for {qubit_count} qubits")]
    QubitOutOfRange { qubit: usize, qubit_count: usize },
    #[error("gate acts twice on qubit {0}")]
    RepeatedQubit(usize),
    #[error("qubit {0} measured more than once")]
    RepeatedMeasurement(usize),
    #[error("classical bit {0} written more than once")]
    RepeatedClassicalBit(usize),
    #[error("gate after measurement")]
    GateAfterMeasurement,
    #[error("angle is not finite")]
    NonFiniteAngle,
    #[error("{qubits} qubits exceeds the simulation cap of {cap}")]
    TooLargeToSimulate { qubits: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    H { qubit: usize },
    Rzz { angle: f64, a: usize, b: usize },
    Measure { qubit: usize, clbit: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    /// Return probability `|<U>|^2` read off the all-zeros outcome.
    Usquared,
    /// `<++| Z_i Z_j |++>` from the four two-qubit outcome frequencies.
    Correlator,
    /// Hand-built or parsed circuit.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitMetadata {
    pub protocol: Protocol,
    /// Graph node carried by each circuit qubit.
    pub source_qubits: Vec<usize>,
    /// Evolution time in units of `hbar / J`, when the circuit has one.
    pub time: Option<f64>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDescription {
    pub qubit_count: usize,
    pub gates: Vec<Gate>,
    pub metadata: CircuitMetadata,
}

/// Fig-1 style protocol: `H^n`, one `RZZ(2 w t)` per edge in input order,
/// `H^n`, measure everything.
pub fn build_usquared_protocol(g: &WeightedGraph, t: f64) -> CircuitDescription {
    let n = g.node_count();
    let mut gates = Vec::with_capacity(3 * n + g.edge_count());
    gates.extend((0..n).map(|qubit| Gate::H { qubit }));
    gates.extend(g.edges().iter().map(|e| Gate::Rzz {
        angle: 2.0 * e.weight * t,
        a: e.i,
        b: e.j,
    }));
    gates.extend((0..n).map(|qubit| Gate::H { qubit }));
    gates.extend((0..n).map(|qubit| Gate::Measure {
        qubit,
        clbit: qubit,
    }));
    CircuitDescription {
        qubit_count: n,
        gates,
        metadata: CircuitMetadata {
            protocol: Protocol::Usquared,
            source_qubits: (0..n).collect(),
            time: Some(t),
            edges: g.edges().to_vec(),
        },
    }
}

/// Two-qubit correlator protocol for graph nodes `i` and `j`, mapped to
/// circuit qubits 0 and 1.
pub fn build_correlator_protocol(i: usize, j: usize) -> Result<CircuitDescription, CircuitError> {
    if i == j {
        return Err(CircuitError::RepeatedQubit(i));
    }
    Ok(CircuitDescription {
        qubit_count: 2,
        gates: vec![
            Gate::H { qubit: 0 },
            Gate::H { qubit: 1 },
            Gate::Measure { qubit: 0, clbit: 0 },
            Gate::Measure { qubit: 1, clbit: 1 },
        ],
        metadata: CircuitMetadata {
            protocol: Protocol::Correlator,
            source_qubits: vec![i, j],
            time: None,
            edges: Vec::new(),
        },
    })
}

impl CircuitDescription {
    pub fn validate(&self) -> Result<(), CircuitError> {
        let n = self.qubit_count;
        if n == 0 {
            return Err(CircuitError::NoQubits);
        }
        let in_range = |q: usize| {
            if q < n {
                Ok(())
            } else {
                Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    qubit_count: n,
                })
            }
        };
        let mut measured = vec![false; n];
        let mut written = vec![false; n];
        let mut measuring = false;
        for gate in &self.gates {
            match *gate {
                Gate::H { qubit } => {
                    in_range(qubit)?;
                    if measuring {
                        return Err(CircuitError::GateAfterMeasurement);
                    }
                }
                Gate::Rzz { angle, a, b } => {
                    in_range(a)?;
                    in_range(b)?;
                    if a == b {
                        return Err(CircuitError::RepeatedQubit(a));
                    }
                    if !angle.is_finite() {
                        return Err(CircuitError::NonFiniteAngle);
                    }
                    if measuring {
                        return Err(CircuitError::GateAfterMeasurement);
                    }
                }
                Gate::Measure { qubit, clbit } => {
                    in_range(qubit)?;
                    in_range(clbit)?;
                    measuring = true;
                    if core::mem::replace(&mut measured[qubit], true) {
                        return Err(CircuitError::RepeatedMeasurement(qubit));
                    }
                    if core::mem::replace(&mut written[clbit], true) {
                        return Err(CircuitError::RepeatedClassicalBit(clbit));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn count_h(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::H { .. }))
            .count()
    }

    pub fn count_rzz(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Rzz { .. }))
            .count()
    }

    pub fn count_measure(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Measure { .. }))
            .count()
    }

    /// Final state from `|0...0>`, ignoring measurements. Qubit `q` is bit `q`
    /// of the basis index.
    pub fn simulate(&self) -> Result<Vec<Complex64>, CircuitError> {
        self.validate()?;
        let n = self.qubit_count;
        if n > SIMULATION_QUBIT_CAP {
            return Err(CircuitError::TooLargeToSimulate {
                qubits: n,
                cap: SIMULATION_QUBIT_CAP,
            });
        }
        let dim = 1usize << n;
        let mut psi = vec![Complex64::new(0.0, 0.0); dim];
        psi[0] = Complex64::new(1.0, 0.0);
        for gate in &self.gates {
            match *gate {
                Gate::H { qubit } => apply_h(&mut psi, qubit),
                Gate::Rzz { angle, a, b } => apply_rzz(&mut psi, angle, a, b),
                Gate::Measure { .. } => {}
            }
        }
        Ok(psi)
    }

    /// Born probabilities of the computational basis outcomes.
    pub fn outcome_probabilities(&self) -> Result<Vec<f64>, CircuitError> {
        Ok(self.simulate()?.iter().map(|a| a.norm_sqr()).collect())
    }
}

fn apply_h(psi: &mut [Complex64], qubit: usize) {
    let mask = 1usize << qubit;
    for idx in 0..psi.len() {
        if idx & mask == 0 {
            let (x, y) = (psi[idx], psi[idx | mask]);
            psi[idx] = (x + y) * FRAC_1_SQRT_2;
            psi[idx | mask] = (x - y) * FRAC_1_SQRT_2;
        }
    }
}

fn apply_rzz(psi: &mut [Complex64], angle: f64, a: usize, b: usize) {
    let (s, c) = libm::sincos(angle / 2.0);
    let aligned = Complex64::new(c, -s);
    let anti = Complex64::new(c, s);
    for (idx, amp) in psi.iter_mut().enumerate() {
        let parity = ((idx >> a) ^ (idx >> b)) & 1;
        *amp *= if parity == 0 { aligned } else { anti };
    }
}
