//! OpenQASM 2.0 emission and a reader for the subset it emits.
//!
//! Angles are printed in Rust's shortest round-trip form, so reading an
//! exported file back yields bit-identical parameters.

use std::fmt::Write;

use crate::circuit::{BoundCircuit, Circuit, Gate};
use crate::{Error, Result};

/// `OPENQASM 2.0` text for a bound circuit: one `q` register, then one
/// statement per gate in circuit order.
pub fn to_qasm(bound: &BoundCircuit) -> Result<String> {
    let c = &bound.circuit;
    let p = &bound.params;
    let mut out = String::new();
    out.push_str("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    writeln!(out, "qreg q[{}];", c.qubits()).unwrap();
    for g in c.gates() {
        match g {
            Gate::U3 { target, slots } => writeln!(
                out,
                "u3({},{},{}) q[{target}];",
                p[slots[0]], p[slots[1]], p[slots[2]]
            ),
            Gate::Cnot { control, target } => writeln!(out, "cx q[{control}],q[{target}];"),
            Gate::H { target } => writeln!(out, "h q[{target}];"),
            Gate::X { target } => writeln!(out, "x q[{target}];"),
            Gate::Mcx { controls, target } => match controls.as_slice() {
                [] => writeln!(out, "x q[{target}];"),
                [c0] => writeln!(out, "cx q[{c0}],q[{target}];"),
                [c0, c1] => writeln!(out, "ccx q[{c0}],q[{c1}],q[{target}];"),
                _ => return Err(Error::Unexportable("multi-controlled X with >2 controls")),
            },
        }
        .unwrap();
    }
    Ok(out)
}

/// Reads the subset written by [`to_qasm`] (plus `ccx`). U3 gates get fresh
/// slots in file order.
pub fn parse_qasm(text: &str) -> Result<BoundCircuit> {
    let mut circuit: Option<Circuit> = None;
    let mut params = Vec::new();
    let mut saw_header = false;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let err = |msg: String| Error::Qasm { line: line_no, msg };
        let line = raw.split("//").next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let stmt = line
            .strip_suffix(';')
            .ok_or_else(|| err("missing ';'".into()))?
            .trim();
        if stmt == "OPENQASM 2.0" {
            saw_header = true;
            continue;
        }
        if stmt.starts_with("include") {
            continue;
        }
        if !saw_header {
            return Err(err("expected 'OPENQASM 2.0;' header".into()));
        }
        if let Some(rest) = stmt.strip_prefix("qreg") {
            if circuit.is_some() {
                return Err(err("only one register is supported".into()));
            }
            let n = parse_register_ref(rest.trim()).map_err(err)?;
            circuit = Some(Circuit::new(n).map_err(|e| err(e.to_string()))?);
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err("gate before qreg declaration".into()))?;
        let (head, operands) = match stmt.find(|ch: char| ch.is_whitespace()) {
            Some(i) if !stmt[..i].contains('(') || stmt[..i].ends_with(')') => {
                (stmt[..i].trim(), stmt[i..].trim())
            }
            _ => {
                // `u3(a, b, c) q[0]` with spaces inside the parentheses
                let close = stmt.find(')').ok_or_else(|| err("malformed gate".into()))?;
                (stmt[..=close].trim(), stmt[close + 1..].trim())
            }
        };
        let wires = operands
            .split(',')
            .map(|w| parse_register_ref(w.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(err)?;
        let pushed = if let Some(args) = head.strip_prefix("u3(") {
            let args = args
                .strip_suffix(')')
                .ok_or_else(|| err("unclosed u3 arguments".into()))?;
            let angles = args
                .split(',')
                .map(|a| parse_angle(a.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(err)?;
            if angles.len() != 3 || wires.len() != 1 {
                return Err(err("u3 takes three angles and one qubit".into()));
            }
            params.extend(angles);
            c.push_u3(wires[0]).map(|_| ())
        } else {
            match (head, wires.as_slice()) {
                ("cx", [ctl, tgt]) => c.push_cnot(*ctl, *tgt).map(|_| ()),
                ("h", [t]) => c.push_h(*t).map(|_| ()),
                ("x", [t]) => c.push_x(*t).map(|_| ()),
                ("ccx", [c0, c1, t]) => c.push_mcx(vec![*c0, *c1], *t).map(|_| ()),
                _ => return Err(err(format!("unsupported statement '{stmt}'"))),
            }
        };
        pushed.map_err(|e| err(e.to_string()))?;
    }

    let circuit = circuit.ok_or(Error::Qasm {
        line: 0,
        msg: "no qreg declaration".into(),
    })?;
    BoundCircuit::new(circuit, params)
}

/// `q[3]` → 3.
fn parse_register_ref(s: &str) -> Result<usize, String> {
    s.strip_prefix("q[")
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|i| i.trim().parse().ok())
        .ok_or_else(|| format!("bad register reference '{s}'"))
}

/// Decimal literals and the forms `pi`, `-pi`, `pi/k`, `k*pi`.
fn parse_angle(s: &str) -> Result<f64, String> {
    let bad = || format!("bad angle '{s}'");
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s),
    };
    let pi = std::f64::consts::PI;
    let value = if body == "pi" {
        pi
    } else if let Some(den) = body.strip_prefix("pi/") {
        pi / den.trim().parse::<f64>().map_err(|_| bad())?
    } else if let Some(num) = body.strip_suffix("*pi") {
        num.trim().parse::<f64>().map_err(|_| bad())? * pi
    } else {
        return Err(bad());
    };
    Ok(sign * value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{basic_entangled_ansatz, mcx_circuit, nielsen_chuang_toffoli};

    #[test]
    fn zero_bound_basic_layer_text() {
        let c = basic_entangled_ansatz(3, 1).unwrap();
        let text = to_qasm(&BoundCircuit::new(c, vec![0.0; 9]).unwrap()).unwrap();
        assert_eq!(
            text,
            "OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[3];\n\
             u3(0,0,0) q[0];\nu3(0,0,0) q[1];\nu3(0,0,0) q[2];\n\
             cx q[0],q[1];\ncx q[1],q[2];\ncx q[2],q[0];\n"
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let nc = nielsen_chuang_toffoli();
        let back = parse_qasm(&to_qasm(&nc).unwrap()).unwrap();
        assert_eq!(back, nc);
    }

    #[test]
    fn reader_accepts_pi_forms_and_comments() {
        let text = "OPENQASM 2.0;\n// comment\ninclude \"qelib1.inc\";\nqreg q[2];\n\
                    u3(pi/2, 0, -pi) q[1]; // trailing\nu3(2*pi,1e-3,-0.5) q[0];\nh q[0];\nx q[1];\ncx q[0],q[1];\n";
        let b = parse_qasm(text).unwrap();
        assert_eq!(b.circuit.len(), 5);
        let pi = std::f64::consts::PI;
        assert_eq!(b.params, vec![pi / 2.0, 0.0, -pi, 2.0 * pi, 1e-3, -0.5]);
    }

    #[test]
    fn reader_errors() {
        for text in [
            "qreg q[2];\n",
            "OPENQASM 2.0;\ncx q[0],q[1];\n",
            "OPENQASM 2.0;\nqreg q[2];\ncx q[0],q[2];\n",
            "OPENQASM 2.0;\nqreg q[2];\nu3(1,2) q[0];\n",
            "OPENQASM 2.0;\nqreg q[2];\nrz(1) q[0];\n",
            "OPENQASM 2.0;\nqreg q[2];\nu3(a,0,0) q[0];\n",
            "OPENQASM 2.0;\nqreg q[2]\n",
            "OPENQASM 2.0;\n",
        ] {
            assert!(parse_qasm(text).is_err(), "accepted:\n{text}");
        }
    }

    #[test]
    fn wide_mcx_is_not_exportable() {
        let b = BoundCircuit::new(mcx_circuit(4).unwrap(), vec![]).unwrap();
        assert!(matches!(to_qasm(&b), Err(Error::Unexportable(_))));
        let b3 = BoundCircuit::new(mcx_circuit(3).unwrap(), vec![]).unwrap();
        assert!(to_qasm(&b3).unwrap().contains("ccx q[0],q[1],q[2];"));
    }
}
