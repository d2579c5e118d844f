//! OpenQASM 2.0 emission (and a parser for the same subset, used to check
//! emitted files).
//!
//! Real numbers are written with 17 significant digits in positional
//! notation, so every `f64` survives a text round trip exactly and output is
//! byte-stable.

use std::fmt::Write as _;

use graphgeom_core::circuits::{CircuitDescription, CircuitMetadata, Gate, Protocol};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QasmError {
    #[error("circuit has no qubits")]
    EmptyCircuit,
    #[error("invalid circuit: {0}")]
    Invalid(#[from] graphgeom_core::CircuitError),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// 17 significant digits, positional for moderate exponents.
pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent in {:e} output");
    let exp: i32 = exp.parse().expect("integer exponent");
    let (sign, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => ("-", m),
        None => ("", mantissa),
    };
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    if !(-6..=16).contains(&exp) {
        return format!("{sign}{mantissa}e{exp}");
    }
    if exp < 0 {
        let zeros = "0".repeat((-exp - 1) as usize);
        format!("{sign}0.{zeros}{digits}")
    } else {
        let split = exp as usize + 1;
        let (int, frac) = digits.split_at(split);
        if frac.is_empty() {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }
}

fn protocol_name(p: Protocol) -> &'static str {
    match p {
        Protocol::Usquared => "usquared",
        Protocol::Correlator => "correlator",
        Protocol::Custom => "custom",
    }
}

pub fn to_qasm(c: &CircuitDescription) -> Result<String, QasmError> {
    if c.qubit_count == 0 {
        return Err(QasmError::EmptyCircuit);
    }
    c.validate()?;
    let mut out = String::new();
    let meta = &c.metadata;
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    let _ = writeln!(out, "// protocol: {}", protocol_name(meta.protocol));
    let sources: Vec<String> = meta.source_qubits.iter().map(|q| q.to_string()).collect();
    let _ = writeln!(out, "// source qubits: {}", sources.join(","));
    if let Some(t) = meta.time {
        let _ = writeln!(out, "// time: {}", format_real(t));
    }
    if c.count_rzz() > 0 {
        out.push_str("// rzz(theta) a,b == cx a,b; rz(theta) b; cx a,b;\n");
    }
    let _ = writeln!(out, "qreg q[{}];", c.qubit_count);
    let _ = writeln!(out, "creg c[{}];", c.qubit_count);
    for gate in &c.gates {
        match *gate {
            Gate::H { qubit } => {
                let _ = writeln!(out, "h q[{qubit}];");
            }
            Gate::Rzz { angle, a, b } => {
                let _ = writeln!(out, "rzz({}) q[{a}],q[{b}];", format_real(angle));
            }
            Gate::Measure { qubit, clbit } => {
                let _ = writeln!(out, "measure q[{qubit}] -> c[{clbit}];");
            }
        }
    }
    Ok(out)
}

fn syntax(line: usize, message: impl Into<String>) -> QasmError {
    QasmError::Syntax {
        line,
        message: message.into(),
    }
}

fn register_index(line: usize, s: &str, reg: char) -> Result<usize, QasmError> {
    let s = s.trim();
    s.strip_prefix(reg)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| syntax(line, format!("expected {reg}[index], found {s:?}")))
}

/// Parse the subset [`to_qasm`] emits: one statement per line, `h`, `rzz`,
/// `measure`, a single `qreg q` and `creg c`.
pub fn parse_qasm(text: &str) -> Result<CircuitDescription, QasmError> {
    let mut qubit_count = None;
    let mut gates = Vec::new();
    let mut saw_header = false;
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| syntax(line_no, "missing ';'"))?
            .trim();
        if stmt == "OPENQASM 2.0" {
            saw_header = true;
        } else if !saw_header {
            return Err(syntax(line_no, "expected OPENQASM 2.0 header"));
        } else if stmt.starts_with("include") {
            continue;
        } else if let Some(rest) = stmt.strip_prefix("qreg ") {
            qubit_count = Some(register_index(line_no, rest, 'q')?);
        } else if let Some(rest) = stmt.strip_prefix("creg ") {
            register_index(line_no, rest, 'c')?;
        } else if let Some(rest) = stmt.strip_prefix("h ") {
            gates.push(Gate::H {
                qubit: register_index(line_no, rest, 'q')?,
            });
        } else if let Some(rest) = stmt.strip_prefix("rzz(") {
            let (angle, operands) = rest
                .split_once(')')
                .ok_or_else(|| syntax(line_no, "unclosed rzz parameter"))?;
            let angle: f64 = angle
                .trim()
                .parse()
                .map_err(|_| syntax(line_no, format!("bad angle {angle:?}")))?;
            let (a, b) = operands
                .split_once(',')
                .ok_or_else(|| syntax(line_no, "rzz needs two operands"))?;
            gates.push(Gate::Rzz {
                angle,
                a: register_index(line_no, a, 'q')?,
                b: register_index(line_no, b, 'q')?,
            });
        } else if let Some(rest) = stmt.strip_prefix("measure ") {
            let (q, c) = rest
                .split_once("->")
                .ok_or_else(|| syntax(line_no, "measure needs '->'"))?;
            gates.push(Gate::Measure {
                qubit: register_index(line_no, q, 'q')?,
                clbit: register_index(line_no, c, 'c')?,
            });
        } else {
            return Err(syntax(line_no, format!("unsupported statement {stmt:?}")));
        }
    }
    let qubit_count = qubit_count.ok_or_else(|| syntax(0, "no qreg declaration"))?;
    let circuit = CircuitDescription {
        qubit_count,
        gates,
        metadata: CircuitMetadata {
            protocol: Protocol::Custom,
            source_qubits: (0..qubit_count).collect(),
            time: None,
            edges: Vec::new(),
        },
    };
    circuit.validate()?;
    Ok(circuit)
}
