//! Shot-noise simulation of the small-time return-probability measurement.
//!
//! For each grid value `phi = J t / hbar` the true probability
//! `p(phi) = |<U(t = phi)>|^2` is either reported exactly or replaced by
//! `k / shots` with `k ~ Binomial(shots, p)`. The points are then fitted by
//! `b - a phi^2` with ordinary least squares; since
//! `|<U>|^2 = 1 - <dH^2> t^2 + O(t^4)`, `a` estimates `<dH^2>` and `2a`
//! estimates `sum_i n_i^(2)`.
//!
//! Each grid point draws from its own ChaCha20 stream (`seed`, point index),
//! so results do not depend on evaluation order.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuits::build_correlator_protocol;
use crate::graph::WeightedGraph;
use crate::oracle::{Oracle, OracleError};

/// Identifier of the sampling scheme, recorded in every result.
pub const RNG_ALGORITHM: &str = "chacha20 (rand_chacha 0.9) seed_from_u64(seed), stream = point index; binomial via rand_distr 0.5";

/// Shot count used by the hardware runs the defaults mirror.
pub const DEFAULT_SHOTS: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExperimentError {
    #[error("phi grid is empty")]
    EmptyGrid,
    #[error("phi value {0} is not finite")]
    NonFinitePhi(f64),
    #[error("shots must be at least 1")]
    NoShots,
    #[error("quadratic fit needs at least 3 distinct phi values, got {0}")]
    DegenerateFit(usize),
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid node pair ({i}, {j}) for {node_count} nodes")]
    InvalidNodes {
        i: usize,
        j: usize,
        node_count: usize,
    },
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `-3 pi/32 ..= 3 pi/32` in steps of `pi/64` (13 points).
pub fn default_phi_grid() -> Vec<f64> {
    (-6..=6).map(|k| k as f64 * PI / 64.0).collect()
}

/// `min, min + step, ...` up to `max` inclusive (with a small tolerance on the
/// last point). Points are computed as `min + k * step`, not accumulated.
pub fn phi_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>, ExperimentError> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) {
        return Err(ExperimentError::InvalidGrid(
            "bounds and step must be finite",
        ));
    }
    if step <= 0.0 {
        return Err(ExperimentError::InvalidGrid("step must be positive"));
    }
    if max < min {
        return Err(ExperimentError::InvalidGrid("max must not be below min"));
    }
    let steps = libm::floor((max - min) / step + 1e-9) as usize;
    if steps > 1_000_000 {
        return Err(ExperimentError::InvalidGrid("too many grid points"));
    }
    Ok((0..=steps).map(|k| min + k as f64 * step).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub graph: WeightedGraph,
    pub phi_values: Vec<f64>,
    pub shots: u64,
    pub seed: u64,
    /// Report exact probabilities, no shot noise.
    pub ideal: bool,
}

impl SweepConfig {
    /// Default grid, 1024 shots, seed 0, sampled.
    pub fn new(graph: WeightedGraph) -> Self {
        Self {
            graph,
            phi_values: default_phi_grid(),
            shots: DEFAULT_SHOTS,
            seed: 0,
            ideal: false,
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.phi_values.is_empty() {
            return Err(ExperimentError::EmptyGrid);
        }
        if let Some(&bad) = self.phi_values.iter().find(|p| !p.is_finite()) {
            return Err(ExperimentError::NonFinitePhi(bad));
        }
        if self.shots == 0 {
            return Err(ExperimentError::NoShots);
        }
        let distinct = distinct_count(&self.phi_values);
        if distinct < 3 {
            return Err(ExperimentError::DegenerateFit(distinct));
        }
        Ok(())
    }
}

fn distinct_count(values: &[f64]) -> usize {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v.len()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub phi: f64,
    /// Exact `|<U>|^2`.
    pub p_true: f64,
    /// Reported estimate (equal to `p_true` for ideal sweeps).
    pub p_est: f64,
    /// `sqrt(p_est (1 - p_est) / shots)`.
    pub stderr: f64,
}

/// `y = b - a x^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
}

impl QuadraticFit {
    pub fn eval(&self, phi: f64) -> f64 {
        self.b - self.a * phi * phi
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    pub fit: QuadraticFit,
    /// `a`, in units of `J^2`.
    pub inferred_m2: f64,
    /// `2a`, in units of `J^2`.
    pub inferred_sum_n2: f64,
    pub shots: u64,
    pub seed: u64,
    pub ideal: bool,
    pub rng: String,
}

impl SweepResult {
    pub fn mean_stderr(&self) -> f64 {
        self.points.iter().map(|p| p.stderr).sum::<f64>() / self.points.len() as f64
    }
}

/// Ordinary least squares for `y = b - a phi^2`.
pub fn fit_quadratic(phi: &[f64], y: &[f64]) -> Result<QuadraticFit, ExperimentError> {
    assert_eq!(phi.len(), y.len(), "phi and y lengths differ");
    let distinct = distinct_count(phi);
    if distinct < 3 {
        return Err(ExperimentError::DegenerateFit(distinct));
    }
    let n = phi.len() as f64;
    let x: Vec<f64> = phi.iter().map(|p| p * p).collect();
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (xi, yi) in x.iter().zip(y) {
        sxx += (xi - mean_x) * (xi - mean_x);
        sxy += (xi - mean_x) * (yi - mean_y);
    }
    if sxx <= 0.0 {
        // e.g. {-h, h, -h}: three values but one |phi|
        return Err(ExperimentError::DegenerateFit(distinct));
    }
    let slope = sxy / sxx;
    Ok(QuadraticFit {
        a: -slope,
        b: mean_y - slope * mean_x,
    })
}

pub fn standard_error(p: f64, shots: u64) -> f64 {
    libm::sqrt(p * (1.0 - p) / shots as f64)
}

fn point_rng(seed: u64, index: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn sample_binomial(rng: &mut ChaCha20Rng, trials: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    // p is clamped into [0, 1], which Binomial::new always accepts
    Binomial::new(trials, p).map(|d| d.sample(rng)).unwrap_or(0)
}

pub fn run_sweep(cfg: &SweepConfig, oracle: &Oracle) -> Result<SweepResult, ExperimentError> {
    cfg.validate()?;
    oracle.check(&cfg.graph)?;
    let mut points = Vec::with_capacity(cfg.phi_values.len());
    for (index, &phi) in cfg.phi_values.iter().enumerate() {
        // weights are in units of J, so t = phi
        let p_true = oracle.return_probability(&cfg.graph, phi)?;
        let p_est = if cfg.ideal {
            p_true
        } else {
            let mut rng = point_rng(cfg.seed, index as u64);
            sample_binomial(&mut rng, cfg.shots, p_true) as f64 / cfg.shots as f64
        };
        points.push(SweepPoint {
            phi,
            p_true,
            p_est,
            stderr: standard_error(p_est, cfg.shots),
        });
    }
    let phis: Vec<f64> = points.iter().map(|p| p.phi).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.p_est).collect();
    let fit = fit_quadratic(&phis, &ys)?;
    Ok(SweepResult {
        points,
        fit,
        inferred_m2: fit.a,
        inferred_sum_n2: 2.0 * fit.a,
        shots: cfg.shots,
        seed: cfg.seed,
        ideal: cfg.ideal,
        rng: RNG_ALGORITHM.into(),
    })
}

/// Outcome probabilities `[p00, p01, p10, p11]` of the correlator protocol;
/// the first digit is node `i`, the second node `j`.
pub fn correlator_probabilities(
    g: &WeightedGraph,
    i: usize,
    j: usize,
) -> Result<[f64; 4], ExperimentError> {
    let n = g.node_count();
    if i == j || i >= n || j >= n {
        return Err(ExperimentError::InvalidNodes {
            i,
            j,
            node_count: n,
        });
    }
    let circuit = build_correlator_protocol(i, j).map_err(|_| ExperimentError::InvalidNodes {
        i,
        j,
        node_count: n,
    })?;
    let p = circuit
        .outcome_probabilities()
        .map_err(|_| ExperimentError::InvalidNodes {
            i,
            j,
            node_count: n,
        })?;
    // basis index bit 0 is circuit qubit 0 (node i)
    Ok([p[0b00], p[0b10], p[0b01], p[0b11]])
}

/// `p00 - p01 - p10 + p11` from exact probabilities.
pub fn ideal_correlator(g: &WeightedGraph, i: usize, j: usize) -> Result<f64, ExperimentError> {
    let [p00, p01, p10, p11] = correlator_probabilities(g, i, j)?;
    Ok(p00 - p01 - p10 + p11)
}

/// Shot-sampled `p00 - p01 - p10 + p11`. Outcome counts are multinomial,
/// drawn as a chain of conditional binomials.
pub fn estimate_correlator(
    g: &WeightedGraph,
    i: usize,
    j: usize,
    shots: u64,
    seed: u64,
) -> Result<f64, ExperimentError> {
    if shots == 0 {
        return Err(ExperimentError::NoShots);
    }
    let probs = correlator_probabilities(g, i, j)?;
    let mut rng = point_rng(seed, 0);
    let mut counts = [0u64; 4];
    let (mut remaining, mut mass) = (shots, 1.0);
    for (slot, &p) in probs.iter().enumerate().take(3) {
        let k = if mass > 0.0 {
            sample_binomial(&mut rng, remaining, p / mass)
        } else {
            0
        };
        counts[slot] = k;
        remaining -= k;
        mass -= p;
    }
    counts[3] = remaining;
    let signed = counts[0] as f64 - counts[1] as f64 - counts[2] as f64 + counts[3] as f64;
    Ok(signed / shots as f64)
}

/// Additive error bars: gate, readout and statistical contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudget {
    pub gate_error: f64,
    pub readout_error: f64,
    pub standard_error: f64,
    pub total: f64,
}

pub fn error_budget(
    gate_errors: &[f64],
    readout_errors: &[f64],
    shots: u64,
    p: f64,
) -> Result<ErrorBudget, ExperimentError> {
    if shots == 0 {
        return Err(ExperimentError::NoShots);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(ExperimentError::InvalidProbability(p));
    }
    let gate_error: f64 = gate_errors.iter().sum();
    let readout_error: f64 = readout_errors.iter().sum();
    let standard_error = standard_error(p, shots);
    Ok(ErrorBudget {
        gate_error,
        readout_error,
        standard_error,
        total: gate_error + readout_error + standard_error,
    })
}
