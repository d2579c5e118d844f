//! Weighted graph model and the combinatorial invariants the moment formulas
//! consume.
//!
//! A [`WeightedGraph`] is simple and undirected: one edge per unordered pair,
//! no self-loops, finite non-zero weights. Negative weights (antiferromagnetic
//! couplings) are allowed.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    NoNodes,
    #[error("node index {node} out of range for {node_count} nodes")]
    IndexOutOfRange { node: usize, node_count: usize },
    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },
    #[error("duplicate edge ({i}, {j})")]
    DuplicateEdge { i: usize, j: usize },
    #[error("edge ({i}, {j}) has zero weight")]
    ZeroWeight { i: usize, j: usize },
    #[error("edge ({i}, {j}) has non-finite weight")]
    NonFiniteWeight { i: usize, j: usize },
    #[error("weight power {0} not supported")]
    InvalidPower(u32),
    #[error("scale factor must be finite and non-zero")]
    InvalidScale,
}

/// One coupling `J_ij` between nodes `i` and `j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Incrementally validates edges; produces an immutable [`WeightedGraph`].
#[derive(Debug, Clone)]
pub struct GraphBuilder {
    node_count: usize,
    edges: Vec<Edge>,
    seen: BTreeSet<(usize, usize)>,
}

impl GraphBuilder {
    pub fn new(node_count: usize) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::NoNodes);
        }
        Ok(Self {
            node_count,
            edges: Vec::new(),
            seen: BTreeSet::new(),
        })
    }

    pub fn add_edge(&mut self, i: usize, j: usize, weight: f64) -> Result<&mut Self, GraphError> {
        for node in [i, j] {
            if node >= self.node_count {
                return Err(GraphError::IndexOutOfRange {
                    node,
                    node_count: self.node_count,
                });
            }
        }
        if i == j {
            return Err(GraphError::SelfLoop { node: i });
        }
        if !weight.is_finite() {
            return Err(GraphError::NonFiniteWeight { i, j });
        }
        if weight == 0.0 {
            return Err(GraphError::ZeroWeight { i, j });
        }
        if !self.seen.insert((i.min(j), i.max(j))) {
            return Err(GraphError::DuplicateEdge { i, j });
        }
        self.edges.push(Edge { i, j, weight });
        Ok(self)
    }

    pub fn build(self) -> WeightedGraph {
        let mut adjacency = vec![Vec::new(); self.node_count];
        for e in &self.edges {
            adjacency[e.i].push((e.j, e.weight));
            adjacency[e.j].push((e.i, e.weight));
        }
        for row in &mut adjacency {
            row.sort_unstable_by_key(|&(n, _)| n);
        }
        WeightedGraph {
            node_count: self.node_count,
            edges: self.edges,
            adjacency,
        }
    }
}

/// Simple undirected weighted graph. Edge order is preserved from input.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    node_count: usize,
    edges: Vec<Edge>,
    /// Sorted by neighbour index.
    adjacency: Vec<Vec<(usize, f64)>>,
}

#[inline]
pub(crate) fn ipow(w: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= w;
    }
    acc
}

fn check_degree_power(k: u32) -> Result<(), GraphError> {
    if (1..=4).contains(&k) {
        Ok(())
    } else {
        Err(GraphError::InvalidPower(k))
    }
}

impl WeightedGraph {
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut b = GraphBuilder::new(node_count)?;
        for (i, j, w) in edges {
            b.add_edge(i, j, w)?;
        }
        Ok(b.build())
    }

    /// Graph with `node_count` nodes and no edges.
    pub fn empty(node_count: usize) -> Result<Self, GraphError> {
        Ok(GraphBuilder::new(node_count)?.build())
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    /// `J_ij`, or 0 when the pair is not an edge.
    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.adjacency
            .get(i)
            .and_then(|row| {
                row.binary_search_by_key(&j, |&(n, _)| n)
                    .ok()
                    .map(|pos| row[pos].1)
            })
            .unwrap_or(0.0)
    }

    /// Dense row-major adjacency matrix.
    pub fn adjacency_matrix(&self) -> Vec<f64> {
        let n = self.node_count;
        let mut a = vec![0.0; n * n];
        for e in &self.edges {
            a[e.i * n + e.j] = e.weight;
            a[e.j * n + e.i] = e.weight;
        }
        a
    }

    /// Same graph with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, GraphError> {
        if !factor.is_finite() || factor == 0.0 {
            return Err(GraphError::InvalidScale);
        }
        Self::from_edges(
            self.node_count,
            self.edges.iter().map(|e| (e.i, e.j, e.weight * factor)),
        )
    }

    fn check_node(&self, i: usize) -> Result<(), GraphError> {
        if i < self.node_count {
            Ok(())
        } else {
            Err(GraphError::IndexOutOfRange {
                node: i,
                node_count: self.node_count,
            })
        }
    }

    /// View of `G^(k)`, the graph with every weight raised to `k`.
    pub fn power(&self, k: u32) -> Result<PowerGraph<'_>, GraphError> {
        if (2..=4).contains(&k) {
            Ok(PowerGraph {
                base: self,
                power: k,
            })
        } else {
            Err(GraphError::InvalidPower(k))
        }
    }

    /// `n_i^(k) = sum_j J_ij^k`.
    pub fn weighted_degree(&self, k: u32, i: usize) -> Result<f64, GraphError> {
        check_degree_power(k)?;
        self.check_node(i)?;
        Ok(self.degree_unchecked(k, i))
    }

    fn degree_unchecked(&self, k: u32, i: usize) -> f64 {
        self.adjacency[i]
            .iter()
            .map(|&(_, w)| ipow(w, k))
            .fold(0.0, |acc, x| acc + x)
    }

    /// `sum_i n_i^(k)`, which counts every edge twice.
    pub fn weighted_degree_sum(&self, k: u32) -> Result<f64, GraphError> {
        check_degree_power(k)?;
        Ok(self.degree_sum_unchecked(k))
    }

    pub(crate) fn degree_sum_unchecked(&self, k: u32) -> f64 {
        (0..self.node_count)
            .map(|i| self.degree_unchecked(k, i))
            .fold(0.0, |acc, x| acc + x)
    }

    /// `sum_i (n_i^(2))^2`.
    pub fn squared_degree2_sum(&self) -> f64 {
        (0..self.node_count)
            .map(|i| {
                let d = self.degree_unchecked(2, i);
                d * d
            })
            .fold(0.0, |acc, x| acc + x)
    }

    /// `S_3`: sum over distinct triangles of the product of their three weights.
    pub fn triangle_weight_sum(&self) -> f64 {
        let mut total = 0.0;
        for e in &self.edges {
            let (u, v) = (e.i.min(e.j), e.i.max(e.j));
            // Only third vertices above v, so each triangle is seen from its lowest edge.
            for (w, wu, wv) in common_neighbors(&self.adjacency[u], &self.adjacency[v]) {
                if w > v {
                    total += e.weight * wu * wv;
                }
            }
        }
        total
    }

    /// `S_4`: sum over distinct 4-cycles (four distinct vertices) of the
    /// product of their four weights.
    ///
    /// Each 4-cycle has two diagonals; for every unordered pair `{i, k}` the
    /// pairs of common neighbours `{j, l}` close a cycle through `i, j, k, l`,
    /// so the raw pair sum sees every cycle twice.
    pub fn square_weight_sum(&self) -> f64 {
        let n = self.node_count;
        let mut total = 0.0;
        let mut paths: Vec<f64> = Vec::new();
        for i in 0..n {
            for k in (i + 1)..n {
                paths.clear();
                paths.extend(
                    common_neighbors(&self.adjacency[i], &self.adjacency[k])
                        .map(|(_, wi, wk)| wi * wk),
                );
                for (a, pa) in paths.iter().enumerate() {
                    for pb in &paths[a + 1..] {
                        total += pa * pb;
                    }
                }
            }
        }
        total / 2.0
    }

    /// `sum_{e<f} J_e^2 J_f^2` over unordered pairs of distinct edges.
    ///
    /// Accumulated as a running prefix so every term is non-negative.
    pub fn edge_pair_weight_sum(&self) -> f64 {
        let mut prefix = 0.0;
        let mut total = 0.0;
        for e in &self.edges {
            let a = e.weight * e.weight;
            total += a * prefix;
            prefix += a;
        }
        total
    }

    /// `tr(A^k)` from explicit dense matrix powers.
    pub fn adjacency_trace(&self, k: u32) -> Result<f64, GraphError> {
        if !(2..=4).contains(&k) {
            return Err(GraphError::InvalidPower(k));
        }
        let n = self.node_count;
        let a = self.adjacency_matrix();
        let mut p = a.clone();
        for _ in 1..k {
            p = mat_mul(&p, &a, n);
        }
        Ok((0..n).map(|i| p[i * n + i]).sum())
    }
}

fn mat_mul(x: &[f64], y: &[f64], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n * n];
    for r in 0..n {
        for m in 0..n {
            let xv = x[r * n + m];
            if xv == 0.0 {
                continue;
            }
            for c in 0..n {
                out[r * n + c] += xv * y[m * n + c];
            }
        }
    }
    out
}

/// Merge of two sorted adjacency rows: `(node, weight_in_a, weight_in_b)`.
fn common_neighbors<'a>(
    a: &'a [(usize, f64)],
    b: &'a [(usize, f64)],
) -> impl Iterator<Item = (usize, f64, f64)> + 'a {
    let (mut x, mut y) = (0, 0);
    core::iter::from_fn(move || {
        while x < a.len() && y < b.len() {
            let (na, wa) = a[x];
            let (nb, wb) = b[y];
            match na.cmp(&nb) {
                core::cmp::Ordering::Less => x += 1,
                core::cmp::Ordering::Greater => y += 1,
                core::cmp::Ordering::Equal => {
                    x += 1;
                    y += 1;
                    return Some((na, wa, wb));
                }
            }
        }
        None
    })
}

/// `G^(k)`: same nodes and edges as the base graph, weights `J_ij^k`.
#[derive(Debug, Clone, Copy)]
pub struct PowerGraph<'a> {
    base: &'a WeightedGraph,
    power: u32,
}

impl PowerGraph<'_> {
    pub fn base(&self) -> &WeightedGraph {
        self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        ipow(self.base.weight(i, j), self.power)
    }

    pub fn weighted_degree(&self, i: usize) -> Result<f64, GraphError> {
        self.base.weighted_degree(self.power, i)
    }

    pub fn weighted_degree_sum(&self) -> f64 {
        self.base.degree_sum_unchecked(self.power)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain() -> WeightedGraph {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    fn cycle4() -> WeightedGraph {
        WeightedGraph::from_edges(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    #[test]
    fn rejects_bad_edges() {
        let mut b = GraphBuilder::new(2).unwrap();
        assert_eq!(
            b.add_edge(0, 0, 1.0).unwrap_err(),
            GraphError::SelfLoop { node: 0 }
        );
        assert!(matches!(
            b.add_edge(0, 2, 1.0),
            Err(GraphError::IndexOutOfRange {
                node: 2,
                node_count: 2
            })
        ));
        assert!(matches!(
            b.add_edge(0, 1, 0.0),
            Err(GraphError::ZeroWeight { .. })
        ));
        assert!(matches!(
            b.add_edge(0, 1, f64::NAN),
            Err(GraphError::NonFiniteWeight { .. })
        ));
        b.add_edge(0, 1, 1.0).unwrap();
        assert!(matches!(
            b.add_edge(1, 0, 3.0),
            Err(GraphError::DuplicateEdge { i: 1, j: 0 })
        ));
        assert_eq!(GraphBuilder::new(0).unwrap_err(), GraphError::NoNodes);
    }

    #[test]
    fn chain_degrees() {
        let g = chain();
        assert_eq!(g.weighted_degree(2, 1).unwrap(), 5.0);
        assert_eq!(g.weighted_degree(4, 1).unwrap(), 17.0);
        assert_eq!(g.weighted_degree_sum(2).unwrap(), 10.0);
        assert_eq!(g.weighted_degree_sum(4).unwrap(), 34.0);
        assert_eq!(g.power(2).unwrap().weighted_degree_sum(), 10.0);
        assert_eq!(g.power(3).unwrap().weight(2, 1), 8.0);
        assert!(g.weighted_degree(2, 3).is_err());
        assert_eq!(
            g.weighted_degree(5, 0).unwrap_err(),
            GraphError::InvalidPower(5)
        );
    }

    #[test]
    fn isolated_and_empty() {
        let g = WeightedGraph::from_edges(3, [(0, 1, 1.5)]).unwrap();
        assert_eq!(g.weighted_degree(2, 2).unwrap(), 0.0);
        let e = WeightedGraph::empty(4).unwrap();
        for k in 1..=4 {
            assert_eq!(e.weighted_degree_sum(k).unwrap(), 0.0);
        }
        assert_eq!(e.triangle_weight_sum(), 0.0);
        assert_eq!(e.square_weight_sum(), 0.0);
    }

    #[test]
    fn cycle_sums() {
        let tri = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(tri.triangle_weight_sum(), 1.0);
        assert_eq!(chain().triangle_weight_sum(), 0.0);
        assert_eq!(cycle4().square_weight_sum(), 1.0);
        assert_eq!(chain().square_weight_sum(), 0.0);
        let k4 = WeightedGraph::from_edges(
            4,
            [
                (0, 1, 1.0),
                (0, 2, 1.0),
                (0, 3, 1.0),
                (1, 2, 1.0),
                (1, 3, 1.0),
                (2, 3, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(k4.triangle_weight_sum(), 4.0);
        assert_eq!(k4.square_weight_sum(), 3.0);
    }

    #[test]
    fn traces() {
        let single = WeightedGraph::from_edges(2, [(0, 1, 1.5)]).unwrap();
        assert_eq!(single.adjacency_trace(2).unwrap(), 4.5);
        let tri = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert_eq!(tri.adjacency_trace(3).unwrap(), 6.0);
        // A^2 = [[1,0,2],[0,5,0],[2,0,4]], tr(A^4) = |A^2|_F^2.
        assert_eq!(chain().adjacency_trace(4).unwrap(), 50.0);
        assert!(chain().adjacency_trace(5).is_err());
    }

    #[test]
    fn scaling_rejects_zero() {
        assert_eq!(chain().scaled(0.0).unwrap_err(), GraphError::InvalidScale);
        assert_eq!(chain().scaled(-2.0).unwrap().weight(1, 2), -4.0);
    }
}
