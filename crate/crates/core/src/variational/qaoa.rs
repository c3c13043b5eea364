use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{optimize_from, run_restarts, Hamiltonian, RunOptions, SolverResult};
use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::optimize::OptimizerConfig;
use crate::statevector::{Gate, Statevector};

/// QAOA over a fixed diagonal Hamiltonian.
///
/// Parameters are interleaved `(gamma_1, beta_1, ..., gamma_p, beta_p)`.
/// Layer `l` applies `exp(-i gamma_l H)` then `RX(2 beta_l)` on every qubit,
/// starting from the uniform superposition.
#[derive(Debug, Clone)]
pub struct QaoaProblem {
    hamiltonian: Hamiltonian,
    // distinct diagonal values and, per basis state, which one it takes;
    // the cost layer then needs one complex exponential per level
    levels: Vec<f64>,
    level_of: Vec<u32>,
}

impl QaoaProblem {
    pub fn new(ising: &IsingModel) -> Result<Self> {
        Ok(Self::from_hamiltonian(Hamiltonian::new(ising)?))
    }

    pub fn from_hamiltonian(hamiltonian: Hamiltonian) -> Self {
        let mut lookup: HashMap<u64, u32> = HashMap::new();
        let mut levels = Vec::new();
        let level_of = hamiltonian
            .diagonal()
            .iter()
            .map(|&e| {
                *lookup.entry(e.to_bits()).or_insert_with(|| {
                    levels.push(e);
                    (levels.len() - 1) as u32
                })
            })
            .collect();
        Self {
            hamiltonian,
            levels,
            level_of,
        }
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.hamiltonian
    }

    pub fn num_qubits(&self) -> usize {
        self.hamiltonian.num_qubits()
    }

    /// Cost-gate count of the textbook circuit for one layer: one RZ per
    /// linear term and a CX-RZ-CX triple per quadratic term.
    pub fn gates_per_layer(&self) -> usize {
        let ising = self.hamiltonian.ising();
        ising.linear().len() + 3 * ising.quadratic().len() + self.num_qubits()
    }

    pub fn state(&self, params: &[f64]) -> Result<Statevector> {
        if !params.len().is_multiple_of(2) {
            return Err(Error::LengthMismatch {
                expected: params.len() + 1,
                actual: params.len(),
            });
        }
        let mut s = Statevector::uniform(self.num_qubits())?;
        let mut phases = vec![Complex64::new(1.0, 0.0); self.levels.len()];
        for layer in params.chunks_exact(2) {
            let (gamma, beta) = (layer[0], layer[1]);
            for (ph, &e) in phases.iter_mut().zip(&self.levels) {
                *ph = Complex64::from_polar(1.0, -gamma * e);
            }
            s.apply_phase_levels(&phases, &self.level_of);
            for q in 0..self.num_qubits() {
                s.apply(&Gate::Rx(q, 2.0 * beta))?;
            }
        }
        Ok(s)
    }

    pub fn energy(&self, params: &[f64]) -> Result<f64> {
        self.state(params)?.expectation_diagonal(self.hamiltonian.diagonal())
    }

    /// Best-of-restarts QAOA at depth `p`: `gamma` drawn from `[0, 2pi)` and
    /// `beta` from `[0, pi)` per restart.
    pub fn run(&self, p: usize, cfg: &OptimizerConfig, opts: &RunOptions) -> Result<SolverResult> {
        if p == 0 {
            return Err(Error::InvalidParameter("QAOA needs p >= 1".into()));
        }
        let mut result = run_restarts(
            &self.hamiltonian,
            cfg,
            opts,
            2 * p,
            |rng| {
                (0..p)
                    .flat_map(|_| [rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI)])
                    .collect()
            },
            |params| self.energy(params),
            |params| self.state(params),
        )?;
        result.method = "qaoa".into();
        result.depth = p;
        Ok(result)
    }

    /// Single optimization from `initial` (length `2p`).
    pub fn run_from(&self, initial: &[f64], cfg: &OptimizerConfig, opts: &RunOptions) -> Result<SolverResult> {
        if initial.is_empty() || !initial.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "QAOA parameters must be a nonempty even-length vector, got {}",
                initial.len()
            )));
        }
        let mut result = optimize_from(
            &self.hamiltonian,
            cfg,
            opts,
            initial.len(),
            vec![initial.to_vec()],
            |params| self.energy(params),
            |params| self.state(params),
        )?;
        result.method = "qaoa".into();
        result.depth = initial.len() / 2;
        Ok(result)
    }

    /// Depths `1..=p_max`, each warm-started from the previous optimum padded
    /// with `(gamma, beta) = (0, 0)`, which leaves the state unchanged. The
    /// best energy is therefore non-increasing in `p`.
    pub fn run_schedule(&self, p_max: usize, cfg: &OptimizerConfig, opts: &RunOptions) -> Result<QaoaSchedule> {
        if p_max == 0 {
            return Err(Error::InvalidParameter("QAOA needs p >= 1".into()));
        }
        let mut results = vec![self.run(1, cfg, opts)?];
        for _ in 1..p_max {
            let mut start = results.last().expect("nonempty").best_params.clone();
            start.extend([0.0, 0.0]);
            results.push(self.run_from(&start, cfg, opts)?);
        }
        Ok(QaoaSchedule { results })
    }
}

/// Results of a warm-started depth sweep, index `i` holding `p = i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QaoaSchedule {
    pub results: Vec<SolverResult>,
}

impl QaoaSchedule {
    pub fn best_energies(&self) -> Vec<f64> {
        self.results.iter().map(|r| r.best_energy).collect()
    }
}

/// QAOA state for explicit angle lists, applying the cost layer with
/// [`Statevector::apply_diagonal_phase`].
pub fn qaoa_state(ising: &IsingModel, gammas: &[f64], betas: &[f64]) -> Result<Statevector> {
    if gammas.len() != betas.len() {
        return Err(Error::LengthMismatch {
            expected: gammas.len(),
            actual: betas.len(),
        });
    }
    let diagonal = ising.diagonal()?;
    let mut s = Statevector::uniform(ising.num_qubits())?;
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        s.apply_diagonal_phase(&diagonal, gamma)?;
        for q in 0..ising.num_qubits() {
            s.apply(&Gate::Rx(q, 2.0 * beta))?;
        }
    }
    Ok(s)
}
