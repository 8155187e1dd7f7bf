//! Circuit representation, ansatz builders and reference circuits.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use crate::statevector::MAX_QUBITS;
use crate::{Error, Result};

/// One gate. U3 angles are not stored inline; `slots` index into the
/// parameter array the circuit is run with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Gate {
    U3 { target: usize, slots: [usize; 3] },
    Cnot { control: usize, target: usize },
    H { target: usize },
    X { target: usize },
    Mcx { controls: Vec<usize>, target: usize },
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::U3 { .. } => "u3",
            Gate::Cnot { .. } => "cx",
            Gate::H { .. } => "h",
            Gate::X { .. } => "x",
            Gate::Mcx { .. } => "mcx",
        }
    }

    /// Controls first, target last.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::U3 { target, .. } | Gate::H { target } | Gate::X { target } => vec![*target],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Mcx { controls, target } => {
                let mut w = controls.clone();
                w.push(*target);
                w
            }
        }
    }

    pub fn param_slots(&self) -> &[usize] {
        match self {
            Gate::U3 { slots, .. } => slots,
            _ => &[],
        }
    }

    pub fn is_cnot(&self) -> bool {
        matches!(self, Gate::Cnot { .. })
    }

    /// Wire bounds and distinctness against a `qubits`-wide register.
    pub fn validate(&self, qubits: usize) -> Result<()> {
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= qubits {
                return Err(Error::WireOutOfRange { wire: w, qubits });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire { wire: w });
            }
        }
        Ok(())
    }

    fn with_wire_offset(&self, offset: usize) -> Gate {
        match self {
            Gate::U3 { target, slots } => Gate::U3 {
                target: target + offset,
                slots: *slots,
            },
            Gate::Cnot { control, target } => Gate::Cnot {
                control: control + offset,
                target: target + offset,
            },
            Gate::H { target } => Gate::H {
                target: target + offset,
            },
            Gate::X { target } => Gate::X {
                target: target + offset,
            },
            Gate::Mcx { controls, target } => Gate::Mcx {
                controls: controls.iter().map(|c| c + offset).collect(),
                target: target + offset,
            },
        }
    }

    fn with_slot_offset(&self, offset: usize) -> Gate {
        match self {
            Gate::U3 { target, slots } => Gate::U3 {
                target: *target,
                slots: slots.map(|s| s + offset),
            },
            other => other.clone(),
        }
    }
}

/// An ordered gate list over a fixed register.
///
/// Invariants: every wire is below `qubits`, and the U3 slots are exactly
/// `0..param_count`, each used once, so `param_count = 3 · #U3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
    param_count: usize,
}

impl Circuit {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::QubitCountOutOfRange {
                qubits,
                max: MAX_QUBITS,
            });
        }
        Ok(Self {
            qubits,
            gates: Vec::new(),
            param_count: 0,
        })
    }

    /// Checks every invariant of an externally assembled gate list.
    pub fn from_gates(qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(qubits)?;
        let mut used = Vec::new();
        for g in &gates {
            g.validate(qubits)?;
            used.extend_from_slice(g.param_slots());
        }
        used.sort_unstable();
        if used.iter().enumerate().any(|(i, &s)| i != s) {
            return Err(Error::InvalidSlots(format!(
                "slots must be 0..{} each used once, got {used:?}",
                used.len()
            )));
        }
        c.param_count = used.len();
        c.gates = gates;
        Ok(c)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn param_count(&self) -> usize {
        self.param_count
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Appends a U3 on `target` with the next three free slots.
    pub fn push_u3(&mut self, target: usize) -> Result<&mut Self> {
        let p = self.param_count;
        self.push(Gate::U3 {
            target,
            slots: [p, p + 1, p + 2],
        })?;
        self.param_count += 3;
        Ok(self)
    }

    pub fn push_cnot(&mut self, control: usize, target: usize) -> Result<&mut Self> {
        self.push(Gate::Cnot { control, target })
    }

    pub fn push_h(&mut self, target: usize) -> Result<&mut Self> {
        self.push(Gate::H { target })
    }

    pub fn push_x(&mut self, target: usize) -> Result<&mut Self> {
        self.push(Gate::X { target })
    }

    pub fn push_mcx(&mut self, controls: Vec<usize>, target: usize) -> Result<&mut Self> {
        self.push(Gate::Mcx { controls, target })
    }

    pub fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != self.param_count {
            return Err(Error::ParamCountMismatch {
                expected: self.param_count,
                got: params.len(),
            });
        }
        Ok(())
    }

    /// The same gates on a register of `qubits ≥ self.qubits` wires,
    /// starting at wire `offset`.
    pub fn embedded(&self, qubits: usize, offset: usize) -> Result<Circuit> {
        let gates = self
            .gates
            .iter()
            .map(|g| g.with_wire_offset(offset))
            .collect();
        Circuit::from_gates(qubits, gates)
    }

    /// `self` followed by `next`; `next`'s slots are shifted past ours.
    pub fn then(&self, next: &Circuit) -> Result<Circuit> {
        if next.qubits != self.qubits {
            return Err(Error::QubitMismatch {
                expected: self.qubits,
                got: next.qubits,
            });
        }
        let mut gates = self.gates.clone();
        gates.extend(next.gates.iter().map(|g| g.with_slot_offset(self.param_count)));
        Circuit::from_gates(self.qubits, gates)
    }

    /// Drops the run of CNOTs after the last non-CNOT gate. Parameter slots
    /// are untouched.
    pub fn strip_trailing_cnots(&self) -> Circuit {
        let keep = self
            .gates
            .iter()
            .rposition(|g| !g.is_cnot())
            .map_or(0, |i| i + 1);
        Circuit {
            qubits: self.qubits,
            gates: self.gates[..keep].to_vec(),
            param_count: self.param_count,
        }
    }

    /// Length of the longest wire-dependency chain: each gate lands one
    /// layer after the latest gate sharing any of its wires.
    pub fn depth(&self) -> usize {
        let mut finish = vec![0usize; self.qubits];
        let mut depth = 0;
        for g in &self.gates {
            let wires = g.wires();
            let layer = wires.iter().map(|&w| finish[w]).max().unwrap_or(0) + 1;
            for w in wires {
                finish[w] = layer;
            }
            depth = depth.max(layer);
        }
        depth
    }

    pub fn count_where(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }
}

pub fn depth(circuit: &Circuit) -> usize {
    circuit.depth()
}

/// Layered ansatz families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnsatzKind {
    /// U3 on every wire, then the ring `0→1, 1→2, …, (n-1)→0`.
    BasicEntangled,
    /// U3 on every wire, then `i → (i + r) mod n` for every `i`, with the
    /// range `r` cycling through `1..n` from layer to layer.
    StronglyEntangled,
}

impl AnsatzKind {
    pub fn build(self, qubits: usize, layers: usize) -> Result<Circuit> {
        match self {
            AnsatzKind::BasicEntangled => basic_entangled_ansatz(qubits, layers),
            AnsatzKind::StronglyEntangled => strongly_entangled_ansatz(qubits, layers),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AnsatzKind::BasicEntangled => "basic",
            AnsatzKind::StronglyEntangled => "strong",
        }
    }
}

impl fmt::Display for AnsatzKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnsatzKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "basic" => Ok(AnsatzKind::BasicEntangled),
            "strong" => Ok(AnsatzKind::StronglyEntangled),
            other => Err(format!("unknown ansatz '{other}' (expected basic or strong)")),
        }
    }
}

fn check_ansatz_shape(qubits: usize, layers: usize) -> Result<()> {
    if qubits < 2 {
        return Err(Error::TooFewQubits { qubits, min: 2 });
    }
    if layers == 0 {
        return Err(Error::NoLayers);
    }
    Ok(())
}

fn layered(qubits: usize, layers: usize, range: impl Fn(usize) -> usize) -> Result<Circuit> {
    check_ansatz_shape(qubits, layers)?;
    let mut c = Circuit::new(qubits)?;
    for layer in 0..layers {
        for q in 0..qubits {
            c.push_u3(q)?;
        }
        let r = range(layer);
        for q in 0..qubits {
            c.push_cnot(q, (q + r) % qubits)?;
        }
    }
    Ok(c)
}

pub fn basic_entangled_ansatz(qubits: usize, layers: usize) -> Result<Circuit> {
    layered(qubits, layers, |_| 1)
}

/// Range of the CNOT ring in layer `layer` of a strongly entangled ansatz.
pub fn strong_layer_range(qubits: usize, layer: usize) -> usize {
    layer % (qubits - 1) + 1
}

pub fn strongly_entangled_ansatz(qubits: usize, layers: usize) -> Result<Circuit> {
    layered(qubits, layers, |l| strong_layer_range(qubits, l))
}

/// A single MCX with controls `0..n-1` and target `n-1`.
pub fn mcx_circuit(qubits: usize) -> Result<Circuit> {
    if qubits < 2 {
        return Err(Error::TooFewQubits { qubits, min: 2 });
    }
    let mut c = Circuit::new(qubits)?;
    c.push_mcx((0..qubits - 1).collect(), qubits - 1)?;
    Ok(c)
}

/// H on wires `0..n`, then `CNOT(i → n+i)`: copies every basis input of the
/// first register into the second.
pub fn evaluation_prefix(qubits: usize) -> Result<Circuit> {
    if qubits == 0 {
        return Err(Error::TooFewQubits { qubits, min: 1 });
    }
    let mut c = Circuit::new(2 * qubits)?;
    for q in 0..qubits {
        c.push_h(q)?;
    }
    for q in 0..qubits {
        c.push_cnot(q, qubits + q)?;
    }
    Ok(c)
}

/// A circuit together with concrete angles for its slots.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCircuit {
    pub circuit: Circuit,
    pub params: Vec<f64>,
}

impl BoundCircuit {
    pub fn new(circuit: Circuit, params: Vec<f64>) -> Result<Self> {
        circuit.check_params(&params)?;
        Ok(Self { circuit, params })
    }
}

/// The textbook 15-gate Toffoli (controls 0, 1; target 2) written with U3
/// and CNOT only: `H = U3(π/2, 0, π)`, `T = U3(0, 0, π/4)`,
/// `T† = U3(0, 0, -π/4)`. Equal to MCX up to global phase.
pub fn nielsen_chuang_toffoli() -> BoundCircuit {
    #[derive(Clone, Copy)]
    enum Step {
        H(usize),
        T(usize),
        Tdg(usize),
        Cx(usize, usize),
    }
    use Step::*;
    const STEPS: [Step; 15] = [
        H(2),
        Cx(1, 2),
        Tdg(2),
        Cx(0, 2),
        T(2),
        Cx(1, 2),
        Tdg(2),
        Cx(0, 2),
        T(1),
        T(2),
        H(2),
        Cx(0, 1),
        T(0),
        Tdg(1),
        Cx(0, 1),
    ];

    let mut circuit = Circuit::new(3).expect("3 qubits");
    let mut params = Vec::new();
    for step in STEPS {
        let (wire, angles) = match step {
            Cx(c, t) => {
                circuit.push_cnot(c, t).expect("valid wires");
                continue;
            }
            H(q) => (q, [FRAC_PI_2, 0.0, PI]),
            T(q) => (q, [0.0, 0.0, FRAC_PI_4]),
            Tdg(q) => (q, [0.0, 0.0, -FRAC_PI_4]),
        };
        circuit.push_u3(wire).expect("valid wire");
        params.extend_from_slice(&angles);
    }
    BoundCircuit { circuit, params }
}
