//! The two training costs and the Toffoli truth table they are built from.
//!
//! * Hilbert–Schmidt: `1 - |Tr(U†V)|²/d²`, zero iff `V = U` up to a global
//!   phase.
//! * Observable: the expectation of `A = I - 2 Σ_k |in_k⟩⟨in_k| ⊗ |out_k⟩⟨out_k|`
//!   on the doubled-register state. Every projector is rank one in the
//!   computational basis, so `A` is never materialized: the expectation is
//!   `1 - 2 Σ_k |amp(out_k, in_k)|²`. It reaches `-1` iff `V` maps every
//!   `|in_k⟩` to `|out_k⟩` up to a per-input phase.
//!
//! On the doubled register the ansatz acts on wires `0..n` (the high bits)
//! and the copied input sits on wires `n..2n`, so the pair `(in, out)` lives
//! at combined index `out·2^n + in`.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{evaluation_prefix, Circuit};
use crate::par::Execution;
use crate::statevector::{self, simulate_basis_columns, DenseUnitary, StateVector, C64};
use crate::{Error, Result};

/// Input/output basis pairs of a reversible classical gate on `qubits`
/// wires. Inputs are `0..2^n` in order; outputs form a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    qubits: usize,
    outputs: Vec<usize>,
}

impl TruthTable {
    /// `outputs[i]` is the image of basis input `i`.
    pub fn from_outputs(qubits: usize, outputs: Vec<usize>) -> Result<Self> {
        if qubits == 0 || qubits > statevector::MAX_QUBITS / 2 {
            return Err(Error::InvalidTruthTable(format!(
                "unsupported width {qubits}"
            )));
        }
        let dim = 1usize << qubits;
        if outputs.len() != dim {
            return Err(Error::InvalidTruthTable(format!(
                "{} outputs for {dim} inputs",
                outputs.len()
            )));
        }
        let mut seen = vec![false; dim];
        for &o in &outputs {
            if o >= dim || std::mem::replace(&mut seen[o], true) {
                return Err(Error::InvalidTruthTable(
                    "outputs are not a permutation of the inputs".into(),
                ));
            }
        }
        Ok(Self { qubits, outputs })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn len(&self) -> usize {
        self.outputs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outputs.is_empty()
    }

    pub fn output(&self, input: usize) -> usize {
        self.outputs[input]
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// `(input, output)` in input order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.outputs.iter().copied().enumerate()
    }

    pub fn contains(&self, input: usize, output: usize) -> bool {
        self.outputs.get(input) == Some(&output)
    }

    /// The permutation matrix of the table.
    pub fn to_unitary(&self) -> Result<DenseUnitary> {
        DenseUnitary::permutation(&self.outputs)
    }
}

/// Identity on `0..2^n-2`, with `2^n-2` and `2^n-1` exchanged.
pub fn toffoli_truth_table(qubits: usize) -> Result<TruthTable> {
    if qubits < 2 {
        return Err(Error::TooFewQubits { qubits, min: 2 });
    }
    if qubits > statevector::MAX_QUBITS / 2 {
        return Err(Error::InvalidTruthTable(format!(
            "unsupported width {qubits}"
        )));
    }
    let dim = 1usize << qubits;
    let mut outputs: Vec<usize> = (0..dim).collect();
    outputs.swap(dim - 2, dim - 1);
    TruthTable::from_outputs(qubits, outputs)
}

fn check_width(circuit: &Circuit, qubits: usize) -> Result<()> {
    if circuit.qubits() != qubits {
        return Err(Error::QubitMismatch {
            expected: qubits,
            got: circuit.qubits(),
        });
    }
    Ok(())
}

/// `Tr(target† · V(params))` without building `V` as a matrix.
pub fn trace_overlap_with(
    exec: Execution,
    ansatz: &Circuit,
    params: &[f64],
    target: &DenseUnitary,
) -> Result<C64> {
    check_width(ansatz, target.qubits())?;
    if ansatz.qubits() > statevector::MAX_DENSE_QUBITS {
        return Err(Error::SizeCapExceeded {
            qubits: ansatz.qubits(),
            max: statevector::MAX_DENSE_QUBITS,
        });
    }
    ansatz.check_params(params)?;
    let columns = simulate_basis_columns(exec, ansatz, params)?;
    let mut acc = C64::new(0.0, 0.0);
    for (j, col) in columns.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            acc += target.get(i, j).conj() * v;
        }
    }
    Ok(acc)
}

/// `|Tr(target†·V)|² / d²`.
pub fn overlap_fidelity_with(
    exec: Execution,
    ansatz: &Circuit,
    params: &[f64],
    target: &DenseUnitary,
) -> Result<f64> {
    let tr = trace_overlap_with(exec, ansatz, params, target)?;
    let d = target.dim() as f64;
    Ok(tr.norm_sqr() / (d * d))
}

/// Hilbert–Schmidt cost `1 - |Tr(target†·V)|²/d²`.
pub fn hst_cost(ansatz: &Circuit, params: &[f64], target: &DenseUnitary) -> Result<f64> {
    hst_cost_with(Execution::default(), ansatz, params, target)
}

pub fn hst_cost_with(
    exec: Execution,
    ansatz: &Circuit,
    params: &[f64],
    target: &DenseUnitary,
) -> Result<f64> {
    Ok(1.0 - overlap_fidelity_with(exec, ansatz, params, target)?)
}

/// The doubled-register state: Hadamards and fan-out CNOTs, then the ansatz
/// on the first register. Equals `2^{-n/2} Σ_j V|j⟩ ⊗ |j⟩`.
pub fn evaluation_state(ansatz: &Circuit, params: &[f64]) -> Result<StateVector> {
    let n = ansatz.qubits();
    if 2 * n > statevector::MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            qubits: 2 * n,
            max: statevector::MAX_QUBITS,
        });
    }
    ansatz.check_params(params)?;
    let mut state = StateVector::zero(2 * n)?;
    state.run(&evaluation_prefix(n)?, &[])?;
    state.run(&ansatz.embedded(2 * n, 0)?, params)?;
    Ok(state)
}

/// `⟨ψ|A|ψ⟩` for a doubled-register state.
pub fn observable_expectation(state: &StateVector, table: &TruthTable) -> Result<f64> {
    let n = table.qubits();
    if state.qubits() != 2 * n {
        return Err(Error::QubitMismatch {
            expected: 2 * n,
            got: state.qubits(),
        });
    }
    let hit: f64 = table
        .pairs()
        .map(|(input, output)| state.amplitude((output << n) | input).norm_sqr())
        .sum();
    Ok(1.0 - 2.0 * hit)
}

/// `1 - (2/2^n) Σ_k |⟨out_k|V|in_k⟩|²`, by one n-qubit simulation per input.
/// Equal to [`observable_expectation`] of [`evaluation_state`].
pub fn observable_cost_direct(ansatz: &Circuit, params: &[f64], table: &TruthTable) -> Result<f64> {
    observable_cost_direct_with(Execution::default(), ansatz, params, table)
}

pub fn observable_cost_direct_with(
    exec: Execution,
    ansatz: &Circuit,
    params: &[f64],
    table: &TruthTable,
) -> Result<f64> {
    let success = success_probabilities_with(exec, ansatz, params, table)?;
    let hit: f64 = success.iter().sum();
    Ok(1.0 - 2.0 * hit / table.len() as f64)
}

/// `|⟨out_k|V|in_k⟩|²` for every input `k`.
pub(crate) fn success_probabilities_with(
    exec: Execution,
    ansatz: &Circuit,
    params: &[f64],
    table: &TruthTable,
) -> Result<Vec<f64>> {
    check_width(ansatz, table.qubits())?;
    ansatz.check_params(params)?;
    let n = ansatz.qubits();
    let dim = 1usize << n;
    exec.try_map_indexed(dim, |input| {
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[input] = C64::new(1.0, 0.0);
        statevector::run_gates(&mut amps, n, ansatz.gates(), params)?;
        Ok(amps[table.output(input)].norm_sqr())
    })
}

/// Which cost drives training.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Hst,
    Observable,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hst => "hst",
            Method::Observable => "observable",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "hst" => Ok(Method::Hst),
            "observable" => Ok(Method::Observable),
            other => Err(format!("unknown method '{other}' (expected hst or observable)")),
        }
    }
}

#[derive(Debug, Clone)]
enum Target {
    Unitary(DenseUnitary),
    Table(TruthTable),
}

/// A cost bound to an ansatz and its target, ready to be minimized.
#[derive(Debug, Clone)]
pub struct Objective {
    ansatz: Circuit,
    target: Target,
    exec: Execution,
}

impl Objective {
    pub fn hst(ansatz: Circuit, target: DenseUnitary) -> Result<Self> {
        check_width(&ansatz, target.qubits())?;
        Ok(Self {
            ansatz,
            target: Target::Unitary(target),
            exec: Execution::Sequential,
        })
    }

    pub fn observable(ansatz: Circuit, table: TruthTable) -> Result<Self> {
        check_width(&ansatz, table.qubits())?;
        Ok(Self {
            ansatz,
            target: Target::Table(table),
            exec: Execution::Sequential,
        })
    }

    /// MCX target on the ansatz width, for either method.
    pub fn toffoli(method: Method, ansatz: Circuit) -> Result<Self> {
        let n = ansatz.qubits();
        match method {
            Method::Hst => Self::hst(ansatz, DenseUnitary::mcx(n)?),
            Method::Observable => Self::observable(ansatz, toffoli_truth_table(n)?),
        }
    }

    /// Backend for the per-input simulations inside one evaluation.
    /// Sequential by default: the gradient already spreads evaluations.
    pub fn with_execution(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    pub fn method(&self) -> Method {
        match self.target {
            Target::Unitary(_) => Method::Hst,
            Target::Table(_) => Method::Observable,
        }
    }

    pub fn ansatz(&self) -> &Circuit {
        &self.ansatz
    }

    pub fn param_count(&self) -> usize {
        self.ansatz.param_count()
    }

    pub fn evaluate(&self, params: &[f64]) -> Result<f64> {
        match &self.target {
            Target::Unitary(u) => hst_cost_with(self.exec, &self.ansatz, params, u),
            Target::Table(t) => observable_cost_direct_with(self.exec, &self.ansatz, params, t),
        }
    }
}
