//! Seeded initialization, parameter-shift gradients and plain gradient
//! descent.
//!
//! Every parameter of both costs enters through a U3 angle, and
//! `U3(θ, φ, λ) = e^{i(φ+λ)/2} Rz(φ) Ry(θ) Rz(λ)` up to that global phase,
//! so each cost is a trigonometric polynomial of degree one in every single
//! angle. The two-point shift by ±π/2 is then the exact derivative.

use std::f64::consts::{FRAC_PI_2, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Method;
use crate::par::Execution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub learning_rate: f64,
    pub max_steps: usize,
    /// HST runs stop once the cost is at or below this.
    pub hst_stop_eps: f64,
    /// Observable runs stop once the cost is at or below `-1 + eps`.
    pub observable_stop_eps: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            max_steps: 500,
            hst_stop_eps: 1e-6,
            observable_stop_eps: 1e-3,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate.is_finite() && self.learning_rate > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "learning rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be at least 1".into()));
        }
        for (name, eps) in [
            ("hst_stop_eps", self.hst_stop_eps),
            ("observable_stop_eps", self.observable_stop_eps),
        ] {
            if !(eps.is_finite() && eps > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must be positive, got {eps}"
                )));
            }
        }
        Ok(())
    }

    /// Whether `cost` meets the convergence threshold of `mode`.
    pub fn is_converged(&self, mode: StopMode, cost: f64) -> bool {
        match mode {
            StopMode::HstEps => cost <= self.hst_stop_eps,
            StopMode::ObservableFloor => cost <= -1.0 + self.observable_stop_eps,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    HstEps,
    ObservableFloor,
}

impl From<Method> for StopMode {
    fn from(m: Method) -> Self {
        match m {
            Method::Hst => StopMode::HstEps,
            Method::Observable => StopMode::ObservableFloor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxSteps,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxSteps => "max_steps",
        }
    }
}

/// `costs[k]` is the cost before update `k`; the last entry is the cost of
/// `final_params`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationTrace {
    pub costs: Vec<f64>,
    pub final_params: Vec<f64>,
    pub stop_reason: StopReason,
}

impl OptimizationTrace {
    pub fn steps_taken(&self) -> usize {
        self.costs.len() - 1
    }

    pub fn final_cost(&self) -> f64 {
        *self.costs.last().expect("trace holds at least one cost")
    }

    pub fn min_cost(&self) -> f64 {
        self.costs.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// `count` angles drawn uniformly from `[0, 2π)`.
pub fn init_params(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| rng.gen_range(0.0..TAU)).collect()
}

fn shifted(params: &[f64], index: usize, delta: f64) -> Vec<f64> {
    let mut p = params.to_vec();
    p[index] += delta;
    p
}

/// Central two-point rule with shifts `+a` and `-a` for every component,
/// scaled by `scale`.
fn two_point<F>(exec: Execution, cost: &F, params: &[f64], a: f64, scale: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let values = exec.try_map_indexed(2 * params.len(), |k| {
        let delta = if k % 2 == 0 { a } else { -a };
        cost(&shifted(params, k / 2, delta))
    })?;
    Ok(values
        .chunks_exact(2)
        .map(|pair| (pair[0] - pair[1]) * scale)
        .collect())
}

/// `[C(θ_j + π/2) - C(θ_j - π/2)] / 2` for every `j`.
pub fn param_shift_gradient<F>(cost: F, params: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    param_shift_gradient_with(Execution::default(), cost, params)
}

pub fn param_shift_gradient_with<F>(exec: Execution, cost: F, params: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    two_point(exec, &cost, params, FRAC_PI_2, 0.5)
}

/// `[C(θ_j + h) - C(θ_j - h)] / 2h`.
pub fn finite_diff_gradient<F>(cost: F, params: &[f64], h: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidStep(h));
    }
    two_point(Execution::default(), &cost, params, h, 0.5 / h)
}

/// `params ← params - lr · ∇C` until the stop rule of `mode` holds or
/// `max_steps` updates have been made.
pub fn gradient_descent<F>(
    cost: F,
    init: &[f64],
    config: &OptimizerConfig,
    mode: StopMode,
) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    gradient_descent_with(Execution::default(), cost, init, config, mode)
}

pub fn gradient_descent_with<F>(
    exec: Execution,
    cost: F,
    init: &[f64],
    config: &OptimizerConfig,
    mode: StopMode,
) -> Result<OptimizationTrace>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    config.validate()?;
    let mut params = init.to_vec();
    let mut costs = Vec::with_capacity(config.max_steps + 1);
    loop {
        let step = costs.len();
        let c = cost(&params)?;
        if !c.is_finite() {
            return Err(Error::NonFiniteCost {
                step,
                cost: c,
                params,
            });
        }
        costs.push(c);
        let stop_reason = if config.is_converged(mode, c) {
            Some(StopReason::Converged)
        } else if step == config.max_steps {
            Some(StopReason::MaxSteps)
        } else {
            None
        };
        if let Some(stop_reason) = stop_reason {
            return Ok(OptimizationTrace {
                costs,
                final_params: params,
                stop_reason,
            });
        }
        let grad = param_shift_gradient_with(exec, &cost, &params)?;
        for (p, g) in params.iter_mut().zip(&grad) {
            *p -= config.learning_rate * g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_cost(p: &[f64]) -> Result<f64> {
        Ok((1.0 - p[0].cos()) / 2.0)
    }

    #[test]
    fn init_is_seeded_and_in_range() {
        let a = init_params(9, 42);
        assert_eq!(a, init_params(9, 42));
        assert_ne!(a, init_params(9, 43));
        assert!(init_params(1000, 7).iter().all(|&x| (0.0..TAU).contains(&x)));
        assert!(init_params(0, 5).is_empty());
    }

    #[test]
    fn shift_rule_on_scalar_cost() {
        let g = param_shift_gradient(scalar_cost, &[FRAC_PI_2]).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-15);
        let g = param_shift_gradient(scalar_cost, &[0.0]).unwrap();
        assert!(g[0].abs() < 1e-15);
        let g = param_shift_gradient(scalar_cost, &[]).unwrap();
        assert!(g.is_empty());
    }

    #[test]
    fn finite_differences() {
        let g = finite_diff_gradient(|_| Ok(3.0), &[0.1, 0.2], 1e-5).unwrap();
        assert_eq!(g, vec![0.0, 0.0]);
        let g = finite_diff_gradient(scalar_cost, &[FRAC_PI_2], 1e-5).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-9);
        assert!(matches!(
            finite_diff_gradient(scalar_cost, &[0.0], 0.0),
            Err(Error::InvalidStep(_))
        ));
        assert!(finite_diff_gradient(scalar_cost, &[0.0], f64::NAN).is_err());
    }

    #[test]
    fn descent_matches_scalar_recurrence() {
        let cfg = OptimizerConfig {
            learning_rate: 0.5,
            max_steps: 60,
            ..Default::default()
        };
        let trace = gradient_descent(scalar_cost, &[2.0], &cfg, StopMode::HstEps).unwrap();
        // θ ← θ - 0.5·sin(θ)/2
        let mut theta = 2.0f64;
        for (k, c) in trace.costs.iter().enumerate() {
            assert_eq!(*c, (1.0 - theta.cos()) / 2.0, "step {k}");
            theta -= 0.25 * theta.sin();
        }
        assert!(trace.costs.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(trace.stop_reason, StopReason::Converged);
        assert!(trace.final_cost() <= 1e-6);
        assert_eq!(trace.final_cost(), scalar_cost(&trace.final_params).unwrap());
    }

    #[test]
    fn small_rates_never_increase_cost() {
        for lr in [0.01, 0.03, 0.05] {
            let cfg = OptimizerConfig {
                learning_rate: lr,
                max_steps: 200,
                ..Default::default()
            };
            let t = gradient_descent(scalar_cost, &[2.9], &cfg, StopMode::HstEps).unwrap();
            assert!(t.costs.windows(2).all(|w| w[1] <= w[0]));
        }
    }

    #[test]
    fn stop_rules() {
        let cfg = OptimizerConfig::default();
        let t = gradient_descent(|_| Ok(1e-7), &[0.3], &cfg, StopMode::HstEps).unwrap();
        assert_eq!(t.costs.len(), 1);
        assert_eq!(t.stop_reason, StopReason::Converged);

        let t = gradient_descent(|_| Ok(-0.9995), &[0.3], &cfg, StopMode::ObservableFloor).unwrap();
        assert_eq!(t.stop_reason, StopReason::Converged);

        let cfg5 = OptimizerConfig {
            max_steps: 5,
            ..Default::default()
        };
        let t = gradient_descent(|_| Ok(0.5), &[0.3], &cfg5, StopMode::ObservableFloor).unwrap();
        assert_eq!(t.costs.len(), 6);
        assert_eq!(t.steps_taken(), 5);
        assert_eq!(t.stop_reason, StopReason::MaxSteps);
    }

    #[test]
    fn non_finite_cost_aborts_with_snapshot() {
        let cfg = OptimizerConfig::default();
        let err = gradient_descent(
            |p: &[f64]| Ok(if (0.8..0.9).contains(&p[0]) { f64::NAN } else { p[0] }),
            &[1.0],
            &OptimizerConfig {
                learning_rate: 0.1,
                ..cfg
            },
            StopMode::HstEps,
        )
        .unwrap_err();
        match err {
            Error::NonFiniteCost { step, params, .. } => {
                assert_eq!(step, 1);
                assert!((params[0] - (1.0 - 0.1 * FRAC_PI_2)).abs() < 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn config_validation() {
        let bad = [
            OptimizerConfig {
                learning_rate: 0.0,
                ..Default::default()
            },
            OptimizerConfig {
                max_steps: 0,
                ..Default::default()
            },
            OptimizerConfig {
                hst_stop_eps: -1.0,
                ..Default::default()
            },
            OptimizerConfig {
                observable_stop_eps: f64::NAN,
                ..Default::default()
            },
        ];
        for cfg in bad {
            assert!(gradient_descent(scalar_cost, &[1.0], &cfg, StopMode::HstEps).is_err());
        }
        assert!(OptimizerConfig::default().validate().is_ok());
    }
}
