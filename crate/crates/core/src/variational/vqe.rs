use std::f64::consts::{FRAC_PI_2, PI};

use rand::Rng;

use super::{run_restarts, Hamiltonian, RunOptions, SolverResult};
use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::optimize::{finite_difference_gradient, OptimizerConfig};
use crate::statevector::{Gate, Statevector, DEFAULT_QUBIT_CAP};

/// Hardware-efficient ansatz: an RY layer, then `depth` repetitions of a
/// linear CZ chain followed by another RY layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnsatzSpec {
    pub num_qubits: usize,
    pub depth: usize,
}

impl AnsatzSpec {
    pub const DEFAULT_DEPTH: usize = 2;

    pub fn new(num_qubits: usize, depth: usize) -> Self {
        Self { num_qubits, depth }
    }

    pub fn num_params(&self) -> usize {
        self.num_qubits * (self.depth + 1)
    }

    /// Gate list for parameters `theta`; `theta[l * m + q]` drives RY on
    /// qubit `q` in rotation layer `l`.
    pub fn gates(&self, theta: &[f64]) -> Result<Vec<Gate>> {
        if theta.len() != self.num_params() {
            return Err(Error::LengthMismatch {
                expected: self.num_params(),
                actual: theta.len(),
            });
        }
        let m = self.num_qubits;
        let mut gates = Vec::with_capacity(self.num_params() + self.depth * m.saturating_sub(1));
        gates.extend((0..m).map(|q| Gate::Ry(q, theta[q])));
        for layer in 1..=self.depth {
            gates.extend((0..m.saturating_sub(1)).map(|q| Gate::Cz(q, q + 1)));
            gates.extend((0..m).map(|q| Gate::Ry(q, theta[layer * m + q])));
        }
        Ok(gates)
    }

    pub fn state(&self, theta: &[f64]) -> Result<Statevector> {
        let mut s = Statevector::zero(self.num_qubits)?;
        s.apply_all(&self.gates(theta)?)?;
        Ok(s)
    }
}

/// VQE objective over a fixed Hamiltonian.
#[derive(Debug, Clone)]
pub struct VqeProblem {
    hamiltonian: Hamiltonian,
    spec: AnsatzSpec,
}

impl VqeProblem {
    pub fn new(ising: &IsingModel, depth: usize) -> Result<Self> {
        Self::from_hamiltonian(Hamiltonian::new(ising)?, depth)
    }

    pub fn from_hamiltonian(hamiltonian: Hamiltonian, depth: usize) -> Result<Self> {
        let spec = AnsatzSpec::new(hamiltonian.num_qubits(), depth);
        Ok(Self { hamiltonian, spec })
    }

    pub fn spec(&self) -> AnsatzSpec {
        self.spec
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    /// `<psi(theta)| H |psi(theta)>`.
    pub fn energy(&self, theta: &[f64]) -> Result<f64> {
        let amps = real_amplitudes(self.spec, theta)?;
        Ok(amps
            .iter()
            .zip(self.hamiltonian.diagonal())
            .map(|(a, e)| a * a * e)
            .sum())
    }

    /// Exact gradient by the two-term shift rule for RY parameters.
    pub fn parameter_shift_gradient(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let mut shifted = theta.to_vec();
        let mut grad = Vec::with_capacity(theta.len());
        for i in 0..theta.len() {
            shifted[i] = theta[i] + FRAC_PI_2;
            let plus = self.energy(&shifted)?;
            shifted[i] = theta[i] - FRAC_PI_2;
            let minus = self.energy(&shifted)?;
            shifted[i] = theta[i];
            grad.push((plus - minus) / 2.0);
        }
        Ok(grad)
    }

    /// Central-difference gradient of [`VqeProblem::energy`].
    pub fn finite_difference_gradient(&self, theta: &[f64], h: f64) -> Result<Vec<f64>> {
        self.spec.gates(theta)?;
        finite_difference_gradient(|t| self.energy(t).unwrap_or(f64::NAN), theta, h)
    }

    /// Best-of-restarts VQE. Each restart draws its initial angles uniformly
    /// from `[-pi, pi)`.
    pub fn run(&self, cfg: &OptimizerConfig, opts: &RunOptions) -> Result<SolverResult> {
        let n = self.spec.num_params();
        let mut result = run_restarts(
            &self.hamiltonian,
            cfg,
            opts,
            n,
            |rng| (0..n).map(|_| rng.gen_range(-PI..PI)).collect(),
            |theta| self.energy(theta),
            |theta| self.spec.state(theta),
        )?;
        result.method = "vqe".into();
        result.depth = self.spec.depth;
        Ok(result)
    }
}

/// Ansatz state with real amplitudes.
///
/// RY and CZ have real matrices, so from `|0...0>` the amplitudes stay real.
/// This is the path the optimizer evaluates; it moves half the data of the
/// complex engine and builds the first RY layer directly as a product state.
pub(crate) fn real_amplitudes(spec: AnsatzSpec, theta: &[f64]) -> Result<Vec<f64>> {
    if theta.len() != spec.num_params() {
        return Err(Error::LengthMismatch {
            expected: spec.num_params(),
            actual: theta.len(),
        });
    }
    let m = spec.num_qubits;
    if m == 0 {
        return Err(Error::InvalidParameter("need at least one qubit".into()));
    }
    if m > DEFAULT_QUBIT_CAP {
        return Err(Error::CapExceeded {
            needed: m as u128,
            cap: DEFAULT_QUBIT_CAP as u128,
        });
    }
    let mut amps = Vec::with_capacity(1 << m);
    amps.push(1.0);
    for &t in &theta[..m] {
        let (s, c) = (t / 2.0).sin_cos();
        let len = amps.len();
        amps.extend_from_within(..);
        amps[..len].iter_mut().for_each(|a| *a *= c);
        amps[len..].iter_mut().for_each(|a| *a *= s);
    }
    let chain = (1usize << m.saturating_sub(1)) - 1;
    for layer in 1..=spec.depth {
        // CZ on every neighboring pair flips the sign once per adjacent 11
        for (s, a) in amps.iter_mut().enumerate() {
            if (s & (s >> 1) & chain).count_ones() % 2 == 1 {
                *a = -*a;
            }
        }
        for q in 0..m {
            let (s, c) = (theta[layer * m + q] / 2.0).sin_cos();
            let stride = 1usize << q;
            for block in amps.chunks_exact_mut(2 * stride) {
                let (lo, hi) = block.split_at_mut(stride);
                for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                    let (x, y) = (*a, *b);
                    *a = c * x - s * y;
                    *b = s * x + c * y;
                }
            }
        }
    }
    Ok(amps)
}

/// Energy of the ansatz state; builds the Hamiltonian diagonal on each call.
pub fn vqe_energy(ising: &IsingModel, spec: AnsatzSpec, theta: &[f64]) -> Result<f64> {
    if spec.num_qubits != ising.num_qubits() {
        return Err(Error::LengthMismatch {
            expected: ising.num_qubits(),
            actual: spec.num_qubits,
        });
    }
    VqeProblem::new(ising, spec.depth)?.energy(theta)
}
