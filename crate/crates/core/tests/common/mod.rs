//! Brute-force reference: every gate is expanded to a full matrix as a
//! Kronecker product of per-wire 2×2 factors (qubit 0 leftmost), and
//! circuits are plain matrix products. Shares nothing with the stride
//! kernels under test.

#![allow(dead_code)]

use num_complex::Complex64 as C;
use vqgf_core::{Circuit, Gate};

#[derive(Clone, Debug)]
pub struct Mat {
    pub dim: usize,
    pub e: Vec<C>,
}

impl Mat {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            e: vec![C::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.e[i * dim + i] = C::new(1.0, 0.0);
        }
        m
    }

    pub fn at(&self, r: usize, c: usize) -> C {
        self.e[r * self.dim + c]
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        let d = self.dim;
        let mut out = Mat::zeros(d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = C::new(0.0, 0.0);
                for k in 0..d {
                    acc += self.at(r, k) * o.at(k, c);
                }
                out.e[r * d + c] = acc;
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        Mat {
            dim: self.dim,
            e: self.e.iter().zip(&o.e).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let d = self.dim * o.dim;
        let mut out = Mat::zeros(d);
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                for r2 in 0..o.dim {
                    for c2 in 0..o.dim {
                        out.e[(r1 * o.dim + r2) * d + c1 * o.dim + c2] =
                            self.at(r1, c1) * o.at(r2, c2);
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C {
        (0..self.dim).map(|i| self.at(i, i)).sum()
    }

    /// `Tr(self† · o)`.
    pub fn hs_inner(&self, o: &Mat) -> C {
        self.e.iter().zip(&o.e).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn apply(&self, v: &[C]) -> Vec<C> {
        (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.at(r, c) * v[c]).sum())
            .collect()
    }
}

fn m2(a: [[C; 2]; 2]) -> Mat {
    Mat {
        dim: 2,
        e: vec![a[0][0], a[0][1], a[1][0], a[1][1]],
    }
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat {
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    m2([
        [re(c), -C::from_polar(1.0, lambda) * s],
        [C::from_polar(1.0, phi) * s, C::from_polar(1.0, phi + lambda) * c],
    ])
}

pub fn pauli_x() -> Mat {
    m2([[re(0.0), re(1.0)], [re(1.0), re(0.0)]])
}

pub fn hadamard() -> Mat {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    m2([[re(h), re(h)], [re(h), re(-h)]])
}

fn proj1() -> Mat {
    m2([[re(0.0), re(0.0)], [re(0.0), re(1.0)]])
}

/// `⊗_w factor(w)` over wires `0..n`.
fn kron_wires(n: usize, factor: impl Fn(usize) -> Mat) -> Mat {
    (1..n).fold(factor(0), |acc, w| acc.kron(&factor(w)))
}

fn single(n: usize, target: usize, m: &Mat) -> Mat {
    kron_wires(n, |w| if w == target { m.clone() } else { Mat::identity(2) })
}

/// `I + (Π_c |1⟩⟨1|_c) ⊗ (X - I)_t`.
fn controlled_x(n: usize, controls: &[usize], target: usize) -> Mat {
    let x_minus_i = pauli_x().add(&Mat {
        dim: 2,
        e: vec![re(-1.0), re(0.0), re(0.0), re(-1.0)],
    });
    let term = kron_wires(n, |w| {
        if controls.contains(&w) {
            proj1()
        } else if w == target {
            x_minus_i.clone()
        } else {
            Mat::identity(2)
        }
    });
    Mat::identity(1 << n).add(&term)
}

pub fn gate_matrix(n: usize, gate: &Gate, params: &[f64]) -> Mat {
    match gate {
        Gate::U3 { target, slots } => single(
            n,
            *target,
            &u3(params[slots[0]], params[slots[1]], params[slots[2]]),
        ),
        Gate::H { target } => single(n, *target, &hadamard()),
        Gate::X { target } => single(n, *target, &pauli_x()),
        Gate::Cnot { control, target } => controlled_x(n, &[*control], *target),
        Gate::Mcx { controls, target } => controlled_x(n, controls, *target),
    }
}

pub fn circuit_matrix(c: &Circuit, params: &[f64]) -> Mat {
    let n = c.qubits();
    c.gates().iter().fold(Mat::identity(1 << n), |acc, g| {
        gate_matrix(n, g, params).mul(&acc)
    })
}

/// The n-qubit Toffoli as a matrix, assembled from its definition: flip the
/// last bit iff all others are one.
pub fn mcx_matrix(n: usize) -> Mat {
    let d = 1usize << n;
    let mut m = Mat::zeros(d);
    for j in 0..d {
        let controls_set = (j >> 1) == (d >> 1) - 1;
        let i = if controls_set { j ^ 1 } else { j };
        m.e[i * d + j] = re(1.0);
    }
    m
}

pub fn hst_oracle(c: &Circuit, params: &[f64], target: &Mat) -> f64 {
    let d = target.dim as f64;
    1.0 - target.hs_inner(&circuit_matrix(c, params)).norm_sqr() / (d * d)
}

/// `1 - (2/2^n) Σ_in |V[out(in), in]|²` by enumeration.
pub fn observable_oracle(c: &Circuit, params: &[f64], outputs: &[usize]) -> f64 {
    let v = circuit_matrix(c, params);
    let hit: f64 = outputs
        .iter()
        .enumerate()
        .map(|(input, &out)| v.at(out, input).norm_sqr())
        .sum();
    1.0 - 2.0 * hit / outputs.len() as f64
}

/// Random circuit over the full gate set with fresh U3 slots.
pub fn random_circuit(rng: &mut impl rand::Rng, qubits: usize, gates: usize) -> Circuit {
    let mut c = Circuit::new(qubits).unwrap();
    for _ in 0..gates {
        let kind = if qubits == 1 {
            rng.gen_range(0..3)
        } else {
            rng.gen_range(0..5)
        };
        let t = rng.gen_range(0..qubits);
        match kind {
            0 => {
                c.push_u3(t).unwrap();
            }
            1 => {
                c.push_h(t).unwrap();
            }
            2 => {
                c.push_x(t).unwrap();
            }
            3 => {
                let ctl = (t + rng.gen_range(1..qubits)) % qubits;
                c.push_cnot(ctl, t).unwrap();
            }
            _ => {
                let controls: Vec<usize> = (0..qubits)
                    .filter(|&w| w != t && rng.gen_bool(0.6))
                    .collect();
                c.push_mcx(controls, t).unwrap();
            }
        }
    }
    c
}

pub fn random_angles(rng: &mut impl rand::Rng, count: usize) -> Vec<f64> {
    (0..count)
        .map(|_| rng.gen_range(-2.0 * std::f64::consts::TAU..2.0 * std::f64::consts::TAU))
        .collect()
}
