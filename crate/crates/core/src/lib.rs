//! Variational synthesis of multi-controlled Toffoli (MCX) gates.
//!
//! Circuits are built from U3 rotations and CNOTs and trained against one of
//! two costs on an exact statevector simulator:
//!
//! * the Hilbert–Schmidt cost `1 - |Tr(U†V)|²/d²` against the dense MCX
//!   matrix ([`cost::hst_cost`]);
//! * the expectation of the truth-table observable
//!   `A = I - 2 Σ |in⟩⟨in| ⊗ |out⟩⟨out|` on the doubled-register state
//!   ([`cost::observable_expectation`], [`cost::observable_cost_direct`]).
//!
//! Gradients come from the parameter-shift rule ([`optimize`]) and trained
//! circuits are checked input by input in [`verify`].
//!
//! Qubit 0 is the most significant bit of a basis index everywhere: the
//! basis index of `|q0 q1 … q(n-1)⟩` is `Σ q_i·2^(n-1-i)`.
//!
//! With the default `parallel` feature, independent cost evaluations and
//! per-input simulations are spread over a rayon pool. Reductions always
//! run in a fixed order, so results are bit-identical to the sequential
//! path.

pub mod circuit;
pub mod cost;
mod error;
pub mod optimize;
pub mod par;
pub mod qasm;
pub mod statevector;
pub mod verify;

pub use circuit::{AnsatzKind, BoundCircuit, Circuit, Gate};
pub use cost::TruthTable;
pub use error::{Error, Result};
pub use optimize::{OptimizationTrace, OptimizerConfig, StopMode, StopReason};
pub use par::Execution;
pub use statevector::{DenseUnitary, StateVector, C64};
pub use verify::TruthTableReport;
