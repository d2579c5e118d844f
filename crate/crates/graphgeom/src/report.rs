//! JSON/CSV documents written by the command line tool.

use std::fmt::Write as _;

use graphgeom_core::experiment::SweepResult;
use graphgeom_core::geometry::{
    curvature_closed_form, torsion_closed_form, EnergyMoments, GraphInvariants,
};
use graphgeom_core::{Oracle, OracleError, WeightedGraph};
use serde::{Deserialize, Serialize};

pub const TOOL_NAME: &str = "graphgeom";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: TOOL_NAME.into(),
            version: TOOL_VERSION.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
}

impl GraphSummary {
    pub fn of(g: &WeightedGraph) -> Self {
        Self {
            nodes: g.node_count(),
            edges: g.edge_count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantsOut {
    pub sum_n2: f64,
    pub sum_n3: f64,
    pub sum_n4: f64,
    pub sum_n2_squared: f64,
    pub s3: f64,
    pub s4: f64,
    pub trace_a2: f64,
    pub trace_a3: f64,
    pub trace_a4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub curvature: f64,
    pub torsion: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometryOut {
    pub velocity: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curvature: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub torsion: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<ClosedForms>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleCheck {
    pub m2: f64,
    pub m3: f64,
    pub m4: f64,
    pub configurations: u64,
    pub max_relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub moments: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOutput {
    pub tool: ToolInfo,
    pub graph: GraphSummary,
    pub invariants: InvariantsOut,
    pub moments: EnergyMoments,
    pub geometry: GeometryOut,
    pub provenance: Provenance,
}

/// `|a - b| / max(|a|, |b|)`, or the absolute difference when both are below 1.
pub fn relative_deviation(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

pub fn analyze(g: &WeightedGraph, oracle: Option<&Oracle>) -> Result<AnalysisOutput, OracleError> {
    let inv = GraphInvariants::of(g);
    let moments = EnergyMoments::from_invariants(&inv);
    let trace = |k| {
        g.adjacency_trace(k)
            .expect("trace powers 2..=4 are supported")
    };
    let invariants = InvariantsOut {
        sum_n2: inv.sum_n2,
        sum_n3: inv.sum_n3,
        sum_n4: inv.sum_n4,
        sum_n2_squared: inv.sum_n2_squared,
        s3: inv.s3,
        s4: inv.s4,
        trace_a2: trace(2),
        trace_a3: trace(3),
        trace_a4: trace(4),
    };
    let geometry = match (moments.curvature(), moments.torsion()) {
        (Ok(curvature), Ok(torsion)) => GeometryOut {
            velocity: moments.velocity(),
            curvature: Some(curvature),
            torsion: Some(torsion),
            closed_form: Some(ClosedForms {
                curvature: curvature_closed_form(&inv).expect("non-zero variance"),
                torsion: torsion_closed_form(&inv).expect("non-zero variance"),
            }),
            note: None,
        },
        (Err(e), _) | (_, Err(e)) => GeometryOut {
            velocity: moments.velocity(),
            curvature: None,
            torsion: None,
            closed_form: None,
            note: Some(e.to_string()),
        },
    };
    let oracle = oracle
        .map(|o| -> Result<OracleCheck, OracleError> {
            let m = o.moments(g)?;
            let max_relative_deviation = [
                relative_deviation(m.m2, moments.m2),
                relative_deviation(m.m3, moments.m3),
                relative_deviation(m.m4, moments.m4),
            ]
            .into_iter()
            .fold(0.0, f64::max);
            Ok(OracleCheck {
                m2: m.m2,
                m3: m.m3,
                m4: m.m4,
                configurations: 1u64 << g.node_count(),
                max_relative_deviation,
            })
        })
        .transpose()?;
    Ok(AnalysisOutput {
        tool: ToolInfo::default(),
        graph: GraphSummary::of(g),
        invariants,
        moments,
        geometry,
        provenance: Provenance {
            moments: "graph-formula".into(),
            oracle,
        },
    })
}

pub fn analysis_table(a: &AnalysisOutput) -> String {
    let mut s = String::new();
    let mut row = |name: &str, value: String| {
        let _ = writeln!(s, "{name:<24} {value}");
    };
    row("nodes", a.graph.nodes.to_string());
    row("edges", a.graph.edges.to_string());
    let inv = &a.invariants;
    for (name, v) in [
        ("sum n^(2)", inv.sum_n2),
        ("sum n^(3)", inv.sum_n3),
        ("sum n^(4)", inv.sum_n4),
        ("S3", inv.s3),
        ("S4", inv.s4),
        ("<dH^2>", a.moments.m2),
        ("<dH^3>", a.moments.m3),
        ("<dH^4>", a.moments.m4),
        ("velocity", a.geometry.velocity),
    ] {
        row(name, format!("{v:.12}"));
    }
    match (a.geometry.curvature, a.geometry.torsion) {
        (Some(c), Some(t)) => {
            row("curvature", format!("{c:.12}"));
            row("torsion", format!("{t:.12}"));
        }
        _ => row(
            "curvature/torsion",
            a.geometry.note.clone().unwrap_or_default(),
        ),
    }
    if let Some(o) = &a.provenance.oracle {
        row(
            "oracle max rel. dev.",
            format!("{:.3e}", o.max_relative_deviation),
        );
    }
    s
}

/// Fit published for the same chain measured on superconducting hardware
/// (1024 shots); reported alongside simulations for comparison only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardwareReference {
    pub a: f64,
    pub b: f64,
    pub sum_n2: f64,
    pub curvature: f64,
    pub torsion: f64,
    pub note: String,
}

impl HardwareReference {
    pub fn chain() -> Self {
        Self {
            a: 4.08,
            b: 0.94,
            sum_n2: 10.36,
            curvature: 0.649,
            torsion: 0.619,
            note:
                "measured on ibm_sherbrooke for the chain J01=1, J12=2; gate and readout noise are \
                   not simulated, so these values are not reproduced here"
                    .into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub tool: ToolInfo,
    pub graph: GraphSummary,
    /// `<dH^2>` from the graph formula, the value `a` estimates.
    pub formula_m2: f64,
    pub mean_stderr: f64,
    pub result: SweepResult,
    pub hardware_reference: HardwareReference,
}

impl SweepOutput {
    pub fn new(g: &WeightedGraph, result: SweepResult) -> Self {
        Self {
            tool: ToolInfo::default(),
            graph: GraphSummary::of(g),
            formula_m2: graphgeom_core::geometry::moment2(g),
            mean_stderr: result.mean_stderr(),
            result,
            hardware_reference: HardwareReference::chain(),
        }
    }
}

/// `phi,p_est,stderr` table.
pub fn sweep_csv(r: &SweepResult) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["phi", "p_est", "stderr"])?;
    for p in &r.points {
        w.serialize((p.phi, p.p_est, p.stderr))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
}

pub fn sweep_table(out: &SweepOutput) -> String {
    let r = &out.result;
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:>14} {:>12} {:>12} {:>10}",
        "phi", "p_true", "p_est", "stderr"
    );
    for p in &r.points {
        let _ = writeln!(
            s,
            "{:>14.10} {:>12.8} {:>12.8} {:>10.6}",
            p.phi, p.p_true, p.p_est, p.stderr
        );
    }
    let _ = writeln!(s, "fit: {:.6} - {:.6} phi^2", r.fit.b, r.fit.a);
    let _ = writeln!(
        s,
        "inferred <dH^2> = {:.6}  (formula {:.6})",
        r.inferred_m2, out.formula_m2
    );
    let _ = writeln!(s, "inferred sum n^(2) = {:.6}", r.inferred_sum_n2);
    let _ = writeln!(s, "mean standard error = {:.6}", out.mean_stderr);
    let h = &out.hardware_reference;
    let _ = writeln!(
        s,
        "hardware reference (not simulated): {:.2} - {:.2} phi^2",
        h.b, h.a
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use graphgeom_core::experiment::{run_sweep, SweepConfig};

    fn chain() -> WeightedGraph {
        WeightedGraph::from_edges(3, [(0, 1, 1.0), (1, 2, 2.0)]).unwrap()
    }

    #[test]
    fn chain_analysis() {
        let a = analyze(&chain(), Some(&Oracle::default())).unwrap();
        assert_eq!(a.invariants.sum_n2, 10.0);
        assert_eq!(a.invariants.trace_a4, 50.0);
        assert_eq!(a.moments.m4, 41.0);
        assert!((a.geometry.curvature.unwrap() - 0.64).abs() < 1e-12);
        assert!(a.provenance.oracle.unwrap().max_relative_deviation < 1e-12);
    }

    #[test]
    fn empty_graph_omits_geometry() {
        let a = analyze(&WeightedGraph::empty(3).unwrap(), None).unwrap();
        assert!(a.geometry.curvature.is_none());
        assert!(a.geometry.note.is_some());
        let json = serde_json::to_value(&a).unwrap();
        assert!(json["geometry"].get("curvature").is_none());
        assert_eq!(json["geometry"]["velocity"], 0.0);
    }

    #[test]
    fn oracle_cap_propagates() {
        let g = WeightedGraph::empty(6).unwrap();
        assert!(analyze(&g, Some(&Oracle::with_cap(5))).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let mut cfg = SweepConfig::new(chain());
        cfg.ideal = true;
        let r = run_sweep(&cfg, &Oracle::default()).unwrap();
        let text = sweep_csv(&r).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("phi,p_est,stderr"));
        assert_eq!(lines.count(), 13);
    }
}
