//! Post-training checks: per-input truth-table success and process fidelity.

use crate::circuit::Circuit;
use crate::cost::{overlap_fidelity_with, success_probabilities_with, TruthTable};
use crate::par::Execution;
use crate::statevector::DenseUnitary;
use crate::Result;

/// Success probability `|⟨out_k|V|in_k⟩|²` for every input, phase-blind.
#[derive(Debug, Clone, PartialEq)]
pub struct TruthTableReport {
    pub per_input: Vec<(usize, f64)>,
    pub min_success: f64,
    pub mean_success: f64,
}

impl TruthTableReport {
    /// Inputs whose success is below `threshold`.
    pub fn failing(&self, threshold: f64) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.per_input
            .iter()
            .copied()
            .filter(move |&(_, p)| p < threshold)
    }
}

pub fn truth_table_report(
    ansatz: &Circuit,
    params: &[f64],
    table: &TruthTable,
) -> Result<TruthTableReport> {
    let success = success_probabilities_with(Execution::default(), ansatz, params, table)?;
    let min_success = success.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_success = success.iter().sum::<f64>() / success.len() as f64;
    Ok(TruthTableReport {
        per_input: success.into_iter().enumerate().collect(),
        min_success,
        mean_success,
    })
}

/// `|Tr(target†·V)|²/d²`, the complement of the Hilbert–Schmidt cost.
pub fn process_fidelity(ansatz: &Circuit, params: &[f64], target: &DenseUnitary) -> Result<f64> {
    overlap_fidelity_with(Execution::default(), ansatz, params, target)
}
