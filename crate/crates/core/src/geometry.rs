//! Energy moments and the velocity, curvature and torsion of the evolving
//! graph state, computed from graph invariants alone.
//!
//! With `|psi_0> = |+...+>` the mean energy vanishes, so central and raw
//! moments coincide:
//!
//! * `<dH^2> = (1/2) sum_i n_i^(2)`
//! * `<dH^3> = 6 S_3`
//! * `<dH^4> = 24 S_4 + (3/4) (sum_i n_i^(2))^2 - sum_i n_i^(4)`
//!
//! The fourth moment is evaluated as `m2^2 + 4 P + 24 S_4` with
//! `P = sum_{e<f} J_e^2 J_f^2`, the same quantity without the cancellation
//! that would let `m4 < m2^2` by an ulp on single-edge graphs.
//!
//! Curvature and torsion are each available through two independent routes:
//! the moment ratios and the closed forms in terms of the invariants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::WeightedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("zero energy variance: graph has no edges, curvature and torsion are undefined")]
    ZeroVariance,
}

/// Invariants consumed by the moment formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphInvariants {
    pub sum_n2: f64,
    pub sum_n3: f64,
    pub sum_n4: f64,
    /// `sum_i (n_i^(2))^2`
    pub sum_n2_squared: f64,
    pub s3: f64,
    pub s4: f64,
    /// `sum_{e<f} J_e^2 J_f^2`
    pub edge_pairs: f64,
}

impl GraphInvariants {
    pub fn of(g: &WeightedGraph) -> Self {
        Self {
            sum_n2: g.degree_sum_unchecked(2),
            sum_n3: g.degree_sum_unchecked(3),
            sum_n4: g.degree_sum_unchecked(4),
            sum_n2_squared: g.squared_degree2_sum(),
            s3: g.triangle_weight_sum(),
            s4: g.square_weight_sum(),
            edge_pairs: g.edge_pair_weight_sum(),
        }
    }
}

/// `<dH^2>`, `<dH^3>`, `<dH^4>` in units of `J^2`, `J^3`, `J^4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyMoments {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
}

impl EnergyMoments {
    pub fn from_invariants(inv: &GraphInvariants) -> Self {
        let m2 = inv.sum_n2 / 2.0;
        Self {
            m2,
            m3: 6.0 * inv.s3,
            m4: m2 * m2 + (4.0 * inv.edge_pairs + 24.0 * inv.s4),
        }
    }

    /// Determinant of the Hankel moment matrix `[[1,0,m2],[0,m2,m3],[m2,m3,m4]]`.
    pub fn hankel_determinant(&self) -> f64 {
        self.m4 * self.m2 - self.m2 * self.m2 * self.m2 - self.m3 * self.m3
    }

    /// `(m4 - m2^2) / m2^2`.
    pub fn curvature(&self) -> Result<f64, GeometryError> {
        let m2 = self.nonzero_m2()?;
        Ok((self.m4 - m2 * m2) / (m2 * m2))
    }

    /// `curvature - m3^2 / m2^3`.
    pub fn torsion(&self) -> Result<f64, GeometryError> {
        let m2 = self.nonzero_m2()?;
        Ok(self.curvature()? - self.m3 * self.m3 / (m2 * m2 * m2))
    }

    pub fn velocity(&self) -> f64 {
        libm::sqrt(self.m2)
    }

    fn nonzero_m2(&self) -> Result<f64, GeometryError> {
        if self.m2 > 0.0 {
            Ok(self.m2)
        } else {
            Err(GeometryError::ZeroVariance)
        }
    }
}

pub fn moment2(g: &WeightedGraph) -> f64 {
    g.degree_sum_unchecked(2) / 2.0
}

pub fn moment3(g: &WeightedGraph) -> f64 {
    6.0 * g.triangle_weight_sum()
}

pub fn moment4(g: &WeightedGraph) -> f64 {
    let m2 = moment2(g);
    m2 * m2 + (4.0 * g.edge_pair_weight_sum() + 24.0 * g.square_weight_sum())
}

pub fn moments(g: &WeightedGraph) -> EnergyMoments {
    EnergyMoments::from_invariants(&GraphInvariants::of(g))
}

/// Velocity of evolution with `gamma = hbar = 1`.
pub fn velocity(g: &WeightedGraph) -> f64 {
    libm::sqrt(moment2(g))
}

/// Curvature `gamma^2 / R^2` from the moment ratio.
pub fn curvature(g: &WeightedGraph) -> Result<f64, GeometryError> {
    moments(g).curvature()
}

/// Torsion from the moment ratios.
pub fn torsion(g: &WeightedGraph) -> Result<f64, GeometryError> {
    moments(g).torsion()
}

/// `(96 S_4 + 2 (sum n^(2))^2 - 4 sum n^(4)) / (sum n^(2))^2`.
pub fn curvature_closed_form(inv: &GraphInvariants) -> Result<f64, GeometryError> {
    let x = inv.sum_n2;
    if x <= 0.0 {
        return Err(GeometryError::ZeroVariance);
    }
    Ok((96.0 * inv.s4 + 2.0 * x * x - 4.0 * inv.sum_n4) / (x * x))
}

/// Closed-form curvature minus `288 S_3^2 / (sum n^(2))^3`.
pub fn torsion_closed_form(inv: &GraphInvariants) -> Result<f64, GeometryError> {
    let x = inv.sum_n2;
    Ok(curvature_closed_form(inv)? - 288.0 * inv.s3 * inv.s3 / (x * x * x))
}

/// Everything the formulas produce for one graph.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryReport {
    pub velocity_over_gamma: f64,
    pub curvature: f64,
    pub torsion: f64,
    pub moments: EnergyMoments,
    pub invariants_used: GraphInvariants,
}

impl GeometryReport {
    pub fn of(g: &WeightedGraph) -> Result<Self, GeometryError> {
        let inv = GraphInvariants::of(g);
        let moments = EnergyMoments::from_invariants(&inv);
        Ok(Self {
            velocity_over_gamma: moments.velocity(),
            curvature: moments.curvature()?,
            torsion: moments.torsion()?,
            moments,
            invariants_used: inv,
        })
    }
}
