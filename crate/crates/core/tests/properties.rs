//! Cross-checks between the graph formulas, direct enumeration over vertex
//! tuples, the configuration-sum oracle and the statevector simulator.

use graphgeom_core::circuits::build_usquared_protocol;
use graphgeom_core::experiment::{run_sweep, SweepConfig};
use graphgeom_core::geometry::{
    curvature, curvature_closed_form, moment2, moment3, moment4, moments, torsion,
    torsion_closed_form, velocity, GraphInvariants,
};
use graphgeom_core::{Oracle, WeightedGraph};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Random simple graph: every pair present with probability 1/2, weight in
/// [-2, 2] \ {0}.
fn graph_strategy(max_nodes: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_nodes).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        prop::collection::vec((any::<bool>(), -2.0f64..2.0), pairs).prop_map(move |slots| {
            let mut edges = Vec::new();
            let mut it = slots.into_iter();
            for i in 0..n {
                for j in (i + 1)..n {
                    let (present, w) = it.next().unwrap();
                    if present && w != 0.0 {
                        edges.push((i, j, w));
                    }
                }
            }
            WeightedGraph::from_edges(n, edges).unwrap()
        })
    })
}

/// `(1/6) sum_{i,j,k} J_ij J_jk J_ki` over all ordered triples.
fn s3_by_tuples(g: &WeightedGraph) -> f64 {
    let n = g.node_count();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                total += g.weight(i, j) * g.weight(j, k) * g.weight(k, i);
            }
        }
    }
    total / 6.0
}

/// `(1/8) sum_{i,j,k,l; i != k, j != l} J_ij J_jk J_kl J_li`.
fn s4_by_tuples(g: &WeightedGraph) -> f64 {
    let n = g.node_count();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if k == i {
                    continue;
                }
                for l in 0..n {
                    if l == j {
                        continue;
                    }
                    total += g.weight(i, j) * g.weight(j, k) * g.weight(k, l) * g.weight(l, i);
                }
            }
        }
    }
    total / 8.0
}

fn relabel(g: &WeightedGraph, perm: &[usize]) -> WeightedGraph {
    WeightedGraph::from_edges(
        g.node_count(),
        g.edges().iter().map(|e| (perm[e.i], perm[e.j], e.weight)),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn degree_sums_match_per_node(g in graph_strategy(8)) {
        for k in 1..=4 {
            let per_node: f64 = (0..g.node_count()).map(|i| g.weighted_degree(k, i).unwrap()).sum();
            prop_assert_eq!(per_node, g.weighted_degree_sum(k).unwrap());
            let twice: f64 = g.edges().iter().map(|e| 2.0 * e.weight.powi(k as i32)).sum();
            prop_assert!(rel_close(twice, per_node, 1e-12));
        }
        prop_assert!(rel_close(g.adjacency_trace(2).unwrap(), g.weighted_degree_sum(2).unwrap(), 1e-12));
    }

    #[test]
    fn cycle_sums_match_tuple_enumeration(g in graph_strategy(6)) {
        prop_assert!(rel_close(g.triangle_weight_sum(), s3_by_tuples(&g), 1e-12));
        prop_assert!(rel_close(g.square_weight_sum(), s4_by_tuples(&g), 1e-12));
    }

    #[test]
    fn trace_identities(g in graph_strategy(7)) {
        let tr3 = g.adjacency_trace(3).unwrap();
        prop_assert!(rel_close(6.0 * g.triangle_weight_sum(), tr3, 1e-9));
        let tr4 = g.adjacency_trace(4).unwrap();
        let rhs = tr4 - 2.0 * g.squared_degree2_sum() + g.weighted_degree_sum(4).unwrap();
        prop_assert!(rel_close(8.0 * g.square_weight_sum(), rhs, 1e-9));
    }

    #[test]
    fn formula_moments_match_oracle(g in graph_strategy(10)) {
        let o = Oracle::default().moments(&g).unwrap();
        prop_assert!(rel_close(moment2(&g), o.m2, 1e-9));
        prop_assert!(rel_close(moment3(&g), o.m3, 1e-9));
        prop_assert!(rel_close(moment4(&g), o.m4, 1e-9));
    }

    #[test]
    fn invariants_survive_relabelling(g in graph_strategy(7), seed in any::<u64>()) {
        let n = g.node_count();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by a splitmix-style sequence
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let h = relabel(&g, &perm);
        let (a, b) = (GraphInvariants::of(&g), GraphInvariants::of(&h));
        prop_assert!(rel_close(a.sum_n2, b.sum_n2, 1e-12));
        prop_assert!(rel_close(a.sum_n4, b.sum_n4, 1e-12));
        prop_assert!(rel_close(a.s3, b.s3, 1e-12));
        prop_assert!(rel_close(a.s4, b.s4, 1e-12));
    }

    #[test]
    fn scaling_laws(g in graph_strategy(7), lambda in prop_oneof![-3.0f64..-0.25, 0.25f64..3.0]) {
        let h = g.scaled(lambda).unwrap();
        for k in 1..=4u32 {
            let expect = lambda.powi(k as i32) * g.weighted_degree_sum(k).unwrap();
            prop_assert!(rel_close(h.weighted_degree_sum(k).unwrap(), expect, 1e-12));
        }
        prop_assert!(rel_close(h.triangle_weight_sum(), lambda.powi(3) * g.triangle_weight_sum(), 1e-12));
        prop_assert!(rel_close(h.square_weight_sum(), lambda.powi(4) * g.square_weight_sum(), 1e-12));
        prop_assert!(rel_close(velocity(&h), lambda.abs() * velocity(&g), 1e-12));
        if g.edge_count() > 0 {
            prop_assert!(rel_close(curvature(&h).unwrap(), curvature(&g).unwrap(), 1e-9));
            prop_assert!(rel_close(torsion(&h).unwrap(), torsion(&g).unwrap(), 1e-9));
        }
    }

    #[test]
    fn moment_matrix_positivity(g in graph_strategy(9)) {
        let m = moments(&g);
        prop_assert!(m.m2 >= 0.0);
        prop_assert!(m.m4 >= m.m2 * m.m2 - 1e-12 * m.m4.abs().max(1.0));
        prop_assert!(m.hankel_determinant() >= -1e-9 * (m.m4 * m.m2).abs().max(1.0));
        if g.edge_count() > 0 {
            let (c, t) = (curvature(&g).unwrap(), torsion(&g).unwrap());
            prop_assert!(c >= -1e-12);
            prop_assert!(t >= -1e-12);
            prop_assert!(t <= c + 1e-12);
            if g.triangle_weight_sum() == 0.0 {
                prop_assert_eq!(t, c);
            }
            let inv = GraphInvariants::of(&g);
            prop_assert!(rel_close(c, curvature_closed_form(&inv).unwrap(), 1e-12));
            prop_assert!(rel_close(t, torsion_closed_form(&inv).unwrap(), 1e-12));
        }
    }

    #[test]
    fn loschmidt_bounded(g in graph_strategy(8), t in -5.0f64..5.0) {
        let u = Oracle::default().loschmidt_amplitude(&g, t).unwrap();
        prop_assert!(u.norm_sqr() <= 1.0 + 1e-12);
    }

    #[test]
    fn spectrum_flip_symmetry(g in graph_strategy(8)) {
        let s = Oracle::default().spectrum(&g).unwrap();
        let mask = (1u64 << g.node_count()) - 1;
        for z in 0..=mask {
            prop_assert_eq!(s.energy(z), s.energy(!z & mask));
        }
        let total: f64 = s.energies.iter().sum();
        prop_assert!(total.abs() < 1e-9);
    }

    #[test]
    fn circuit_reproduces_return_probability(g in graph_strategy(8), t in -1.0f64..1.0) {
        let p_circuit = build_usquared_protocol(&g, t).outcome_probabilities().unwrap()[0];
        let p_oracle = Oracle::default().loschmidt_amplitude(&g, t).unwrap().norm_sqr();
        prop_assert!((p_circuit - p_oracle).abs() < 1e-12);
    }
}

#[test]
fn small_time_second_derivative() {
    let chain = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
    let o = Oracle::default();
    let h = 1e-4;
    let f = |t: f64| o.loschmidt_amplitude(&chain, t).unwrap().norm_sqr();
    let d2 = (f(h) - 2.0 * f(0.0) + f(-h)) / (h * h);
    assert!(rel_close(d2, -10.0, 1e-5), "{d2}");
}

#[test]
fn shot_estimator_is_unbiased() {
    let chain = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
    let oracle = Oracle::default();
    let seeds = 1000u64;
    let mut cfg = SweepConfig::new(chain);
    let n_points = cfg.phi_values.len();
    let mut sums = vec![0.0; n_points];
    let mut p_true = vec![0.0; n_points];
    for seed in 0..seeds {
        cfg.seed = seed;
        let r = run_sweep(&cfg, &oracle).unwrap();
        for (k, p) in r.points.iter().enumerate() {
            sums[k] += p.p_est;
            p_true[k] = p.p_true;
        }
    }
    for k in 0..n_points {
        let mean = sums[k] / seeds as f64;
        let p = p_true[k];
        let se_mean = (p * (1.0 - p) / (cfg.shots as f64 * seeds as f64)).sqrt();
        assert!(
            (mean - p).abs() <= 3.0 * se_mean + 1e-12,
            "point {k}: mean {mean} vs {p} (se {se_mean})"
        );
    }
}

#[test]
fn sweep_fit_is_scale_consistent() {
    let chain = WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap();
    let oracle = Oracle::default();
    let mut cfg = SweepConfig::new(chain.clone());
    cfg.ideal = true;
    let base = run_sweep(&cfg, &oracle).unwrap();
    for lambda in [0.5, 2.0, -1.5] {
        let mut scaled = SweepConfig::new(chain.scaled(lambda).unwrap());
        scaled.ideal = true;
        scaled.phi_values = cfg.phi_values.iter().map(|p| p / lambda).collect();
        let r = run_sweep(&scaled, &oracle).unwrap();
        assert!(rel_close(r.fit.b, base.fit.b, 1e-12));
        assert!(rel_close(r.fit.a, base.fit.a * lambda * lambda, 1e-9));
    }
}

#[test]
fn ideal_sweep_matches_oracle_exactly() {
    let g = WeightedGraph::from_edges(4, [(0, 1, 0.5), (1, 2, -1.5), (2, 3, 1.0), (0, 2, 0.75)])
        .unwrap();
    let oracle = Oracle::default();
    let mut cfg = SweepConfig::new(g.clone());
    cfg.ideal = true;
    let r = run_sweep(&cfg, &oracle).unwrap();
    for p in &r.points {
        assert_eq!(p.p_est, oracle.return_probability(&g, p.phi).unwrap());
    }
}
