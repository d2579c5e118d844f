//! File formats, OpenQASM output and the `graphgeom` command line on top of
//! [`graphgeom_core`].

pub mod cli;
pub mod format;
pub mod qasm;
pub mod report;

pub use format::{load_graph, parse_graph, parse_graph_json, LoadError, ParseError};
pub use qasm::{format_real, parse_qasm, to_qasm, QasmError};

/// Process exit codes. Stable across releases.
pub mod exit {
    pub const OK: i32 = 0;
    /// I/O failure or anything not covered below.
    pub const FAILURE: i32 = 1;
    /// Graph file could not be parsed or validated.
    pub const PARSE: i32 = 2;
    /// Geometry requested for a graph with zero energy variance.
    pub const ZERO_VARIANCE: i32 = 3;
    /// Graph exceeds the brute-force oracle node cap.
    pub const ORACLE_CAP: i32 = 4;
    /// Invalid flags or parameters (protocol, qubit pair, grid, ...).
    pub const INVALID_ARGS: i32 = 5;
}

/// Environment variable overriding the oracle node cap.
pub const ORACLE_CAP_ENV: &str = "GRAPHGEOM_ORACLE_CAP";
