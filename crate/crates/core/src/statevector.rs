//! Exact statevector simulation over the {U3, CNOT, H, X, MCX} gate set.
//!
//! Gates act in place through stride-based pair updates; dense matrices are
//! only built by [`circuit_unitary`] for the Hilbert–Schmidt path.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::par::Execution;
use crate::{Error, Result};

pub type C64 = Complex64;

/// Largest register a [`StateVector`] may hold: twice the 7-qubit ansatz.
pub const MAX_QUBITS: usize = 14;

/// Largest circuit [`circuit_unitary`] will densify (128×128).
pub const MAX_DENSE_QUBITS: usize = 7;

pub type Matrix2 = [[C64; 2]; 2];

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Amplitudes of a `qubits`-qubit register, qubit 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn zero(qubits: usize) -> Result<Self> {
        Self::basis(qubits, 0)
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        check_register(qubits)?;
        let dim = 1usize << qubits;
        if index >= dim {
            return Err(Error::BasisIndexOutOfRange { index, dim });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { qubits, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two within the
    /// register cap; normalization is the caller's responsibility.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let dim = amps.len();
        if !dim.is_power_of_two() || dim < 2 {
            return Err(Error::QubitCountOutOfRange {
                qubits: 0,
                max: MAX_QUBITS,
            });
        }
        let qubits = dim.trailing_zeros() as usize;
        check_register(qubits)?;
        Ok(Self { qubits, amps })
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `|amps[i]|²` for every basis index.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.qubits != other.qubits {
            return Err(Error::QubitMismatch {
                expected: self.qubits,
                got: other.qubits,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies one gate. U3 angles are read from `params` at the gate's
    /// slots.
    pub fn apply_gate(&mut self, gate: &Gate, params: &[f64]) -> Result<()> {
        gate.validate(self.qubits)?;
        if let Gate::U3 { slots, .. } = gate {
            for &s in slots {
                if s >= params.len() {
                    return Err(Error::ParamCountMismatch {
                        expected: s + 1,
                        got: params.len(),
                    });
                }
            }
        }
        apply_gate_to(&mut self.amps, self.qubits, gate, params)
    }

    /// Runs every gate of `circuit` in list order.
    pub fn run(&mut self, circuit: &Circuit, params: &[f64]) -> Result<()> {
        if circuit.qubits() != self.qubits {
            return Err(Error::QubitMismatch {
                expected: circuit.qubits(),
                got: self.qubits,
            });
        }
        circuit.check_params(params)?;
        run_gates(&mut self.amps, self.qubits, circuit.gates(), params)
    }
}

fn check_register(qubits: usize) -> Result<()> {
    if qubits == 0 || qubits > MAX_QUBITS {
        return Err(Error::QubitCountOutOfRange {
            qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

pub fn zero_state(qubits: usize) -> Result<StateVector> {
    StateVector::zero(qubits)
}

pub fn basis_state(qubits: usize, index: usize) -> Result<StateVector> {
    StateVector::basis(qubits, index)
}

/// The general single-qubit unitary
///
/// ```text
/// [ cos(θ/2)          -e^{iλ} sin(θ/2)      ]
/// [ e^{iφ} sin(θ/2)    e^{i(φ+λ)} cos(θ/2)  ]
/// ```
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> Result<Matrix2> {
    for a in [theta, phi, lambda] {
        if !a.is_finite() {
            return Err(Error::NonFiniteAngle(a));
        }
    }
    Ok(u3_unchecked(theta, phi, lambda))
}

fn u3_unchecked(theta: f64, phi: f64, lambda: f64) -> Matrix2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), -C64::from_polar(s, lambda)],
        [C64::from_polar(s, phi), C64::from_polar(c, phi + lambda)],
    ]
}

pub fn hadamard_matrix() -> Matrix2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

/// Returns a copy of `state` with `gate` applied.
pub fn apply_gate(state: &StateVector, gate: &Gate, params: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply_gate(gate, params)?;
    Ok(out)
}

/// Returns a copy of `state` with the whole circuit applied.
pub fn run_circuit(state: &StateVector, circuit: &Circuit, params: &[f64]) -> Result<StateVector> {
    let mut out = state.clone();
    out.run(circuit, params)?;
    Ok(out)
}

pub fn probabilities(state: &StateVector) -> Vec<f64> {
    state.probabilities()
}

/// Runs gates that are already known to fit a `qubits`-wide register.
pub(crate) fn run_gates(
    amps: &mut [C64],
    qubits: usize,
    gates: &[Gate],
    params: &[f64],
) -> Result<()> {
    for gate in gates {
        apply_gate_to(amps, qubits, gate, params)?;
    }
    Ok(())
}

#[inline]
fn wire_mask(qubits: usize, wire: usize) -> usize {
    1 << (qubits - 1 - wire)
}

fn apply_gate_to(amps: &mut [C64], qubits: usize, gate: &Gate, params: &[f64]) -> Result<()> {
    match gate {
        Gate::U3 { target, slots } => {
            let m = u3_matrix(params[slots[0]], params[slots[1]], params[slots[2]])?;
            apply_single(amps, wire_mask(qubits, *target), &m);
        }
        Gate::H { target } => apply_single(amps, wire_mask(qubits, *target), &hadamard_matrix()),
        Gate::X { target } => apply_controlled_x(amps, 0, wire_mask(qubits, *target)),
        Gate::Cnot { control, target } => apply_controlled_x(
            amps,
            wire_mask(qubits, *control),
            wire_mask(qubits, *target),
        ),
        Gate::Mcx { controls, target } => {
            let cmask = controls.iter().fold(0, |m, &c| m | wire_mask(qubits, c));
            apply_controlled_x(amps, cmask, wire_mask(qubits, *target));
        }
    }
    Ok(())
}

/// Pair update `(a_i, a_j) ← m·(a_i, a_j)` for every `i` with the target bit
/// clear and `j = i | mask`.
fn apply_single(amps: &mut [C64], mask: usize, m: &Matrix2) {
    let dim = amps.len();
    for base in (0..dim).step_by(mask << 1) {
        for i in base..base + mask {
            let j = i | mask;
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m[0][0] * a + m[0][1] * b;
            amps[j] = m[1][0] * a + m[1][1] * b;
        }
    }
}

/// Swaps the target pair wherever every bit of `control_mask` is set.
fn apply_controlled_x(amps: &mut [C64], control_mask: usize, target_mask: usize) {
    let dim = amps.len();
    for base in (0..dim).step_by(target_mask << 1) {
        for i in base..base + target_mask {
            if i & control_mask == control_mask {
                amps.swap(i, i | target_mask);
            }
        }
    }
}

/// A `dim × dim` complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    dim: usize,
    entries: Vec<C64>,
}

impl DenseUnitary {
    pub fn identity(qubits: usize) -> Result<Self> {
        check_dense(qubits)?;
        let dim = 1 << qubits;
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = ONE;
        }
        Ok(Self { dim, entries })
    }

    /// Row-major entries; `entries.len()` must be a square of a power of two.
    pub fn from_row_major(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if !dim.is_power_of_two() || entries.len() != dim * dim {
            return Err(Error::QubitMismatch {
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_dense(dim.trailing_zeros() as usize)?;
        Ok(Self { dim, entries })
    }

    /// Builds a matrix from its columns, each of length `columns.len()`.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let dim = columns.len();
        let mut entries = vec![ZERO; dim * dim];
        for (c, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::QubitMismatch {
                    expected: dim,
                    got: col.len(),
                });
            }
            for (r, v) in col.iter().enumerate() {
                entries[r * dim + c] = *v;
            }
        }
        Self::from_row_major(dim, entries)
    }

    /// The permutation matrix sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let dim = perm.len();
        let mut seen = vec![false; dim];
        let mut entries = vec![ZERO; dim * dim];
        for (j, &p) in perm.iter().enumerate() {
            if p >= dim || seen[p] {
                return Err(Error::InvalidTruthTable(format!(
                    "{perm:?} is not a permutation"
                )));
            }
            seen[p] = true;
            entries[p * dim + j] = ONE;
        }
        Self::from_row_major(dim, entries)
    }

    /// The dense MCX on `qubits` wires: controls 0..n-2, target n-1.
    pub fn mcx(qubits: usize) -> Result<Self> {
        if qubits < 2 {
            return Err(Error::TooFewQubits { qubits, min: 2 });
        }
        check_dense(qubits)?;
        let dim = 1usize << qubits;
        let mut perm: Vec<usize> = (0..dim).collect();
        perm.swap(dim - 2, dim - 1);
        Self::permutation(&perm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// `Tr(self† · other)`.
    pub fn trace_overlap(&self, other: &DenseUnitary) -> Result<C64> {
        if self.dim != other.dim {
            return Err(Error::QubitMismatch {
                expected: self.qubits(),
                got: other.qubits(),
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// `self · rhs`.
    pub fn matmul(&self, rhs: &DenseUnitary) -> Result<DenseUnitary> {
        if self.dim != rhs.dim {
            return Err(Error::QubitMismatch {
                expected: self.qubits(),
                got: rhs.qubits(),
            });
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        Ok(DenseUnitary { dim: d, entries })
    }

    pub fn adjoint(&self) -> DenseUnitary {
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        DenseUnitary { dim: d, entries }
    }

    /// Every entry scaled by `factor`.
    pub fn scaled(&self, factor: C64) -> DenseUnitary {
        DenseUnitary {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    /// Largest entrywise deviation of `U†U` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.entries[k * d + i].conj() * self.entries[k * d + j];
                }
                let expect = if i == j { ONE } else { ZERO };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }

    /// Largest entrywise `|self - other|`.
    pub fn max_abs_diff(&self, other: &DenseUnitary) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn check_dense(qubits: usize) -> Result<()> {
    if qubits == 0 {
        return Err(Error::QubitCountOutOfRange {
            qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    if qubits > MAX_DENSE_QUBITS {
        return Err(Error::SizeCapExceeded {
            qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

/// Dense matrix of `circuit`: column `j` is the circuit applied to `|j⟩`.
pub fn circuit_unitary(circuit: &Circuit, params: &[f64]) -> Result<DenseUnitary> {
    circuit_unitary_with(Execution::default(), circuit, params)
}

pub fn circuit_unitary_with(
    exec: Execution,
    circuit: &Circuit,
    params: &[f64],
) -> Result<DenseUnitary> {
    let n = circuit.qubits();
    check_dense(n)?;
    circuit.check_params(params)?;
    let columns = simulate_basis_columns(exec, circuit, params)?;
    DenseUnitary::from_columns(&columns)
}

/// `V|j⟩` for every basis input `j`, in order.
pub(crate) fn simulate_basis_columns(
    exec: Execution,
    circuit: &Circuit,
    params: &[f64],
) -> Result<Vec<Vec<C64>>> {
    let n = circuit.qubits();
    let dim = 1usize << n;
    exec.try_map_indexed(dim, |j| {
        let mut amps = vec![ZERO; dim];
        amps[j] = ONE;
        run_gates(&mut amps, n, circuit.gates(), params)?;
        Ok(amps)
    })
}
