//! On-disk formats: the parameters JSON and the `step,cost` trace CSV.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use vqgf_core::circuit::AnsatzKind;
use vqgf_core::cost::Method;
use vqgf_core::Circuit;

pub const PARAMS_VERSION: u32 = 1;

/// Trained angles plus everything needed to rebuild the circuit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    pub version: u32,
    pub qubits: usize,
    pub ansatz: String,
    pub layers: usize,
    pub method: String,
    pub seed: u64,
    pub final_cost: f64,
    #[serde(default, skip_serializing_if = "is_false")]
    pub strip_trailing_cnots: bool,
    pub params: Vec<f64>,
}

fn is_false(b: &bool) -> bool {
    !*b
}

impl ParamsFile {
    pub fn read(path: &Path) -> Result<Self> {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: ParamsFile = serde_json::from_str(&text)
            .with_context(|| format!("parsing {}", path.display()))?;
        if file.version != PARAMS_VERSION {
            bail!("unsupported params file version {}", file.version);
        }
        if file.params.iter().any(|p| !p.is_finite()) {
            bail!("params contain non-finite values");
        }
        file.ansatz_kind()?;
        file.method()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn ansatz_kind(&self) -> Result<AnsatzKind> {
        self.ansatz.parse().map_err(anyhow::Error::msg)
    }

    pub fn method(&self) -> Result<Method> {
        self.method.parse().map_err(anyhow::Error::msg)
    }

    /// The circuit the params were trained on.
    pub fn circuit(&self) -> Result<Circuit> {
        let c = self.ansatz_kind()?.build(self.qubits, self.layers)?;
        Ok(if self.strip_trailing_cnots {
            c.strip_trailing_cnots()
        } else {
            c
        })
    }
}

/// Cost column format: 17 significant digits, so the value reads back
/// exactly.
pub fn format_cost(cost: f64) -> String {
    format!("{cost:.16e}")
}

pub fn write_trace(path: &Path, costs: &[f64]) -> Result<()> {
    let mut out = Vec::with_capacity(costs.len() * 28);
    writeln!(out, "step,cost")?;
    for (step, c) in costs.iter().enumerate() {
        writeln!(out, "{step},{}", format_cost(*c))?;
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))
}

/// Reads a trace back, checking the header and the step sequence.
pub fn read_trace(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    if lines.next() != Some("step,cost") {
        bail!("{}: missing 'step,cost' header", path.display());
    }
    let mut costs = Vec::new();
    for (i, line) in lines.enumerate() {
        let (step, cost) = line
            .split_once(',')
            .with_context(|| format!("row {i}: expected two columns"))?;
        let step: usize = step.parse().with_context(|| format!("row {i}: bad step"))?;
        if step != i {
            bail!("row {i}: step {step} out of sequence");
        }
        costs.push(cost.parse().with_context(|| format!("row {i}: bad cost"))?);
    }
    Ok(costs)
}
