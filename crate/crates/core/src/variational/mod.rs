//! VQE and QAOA loops over the statevector engine.
//!
//! Both minimize the exact expectation of the diagonal Hamiltonian (no shot
//! noise during optimization), keep the best of several seeded restarts, and
//! then sample the winning state once to extract a solution bitstring.

mod qaoa;
pub(crate) mod vqe;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::optimize::{minimize, Method, ObjectiveFunction, OptimizerConfig, OptimizerTrace, Termination};
use crate::qubo::{BitVector, ColoringQubo, Decoded};
use crate::statevector::{Counts, Statevector};

pub use qaoa::{qaoa_state, QaoaProblem, QaoaSchedule};
pub use vqe::{vqe_energy, AnsatzSpec, VqeProblem};

/// An Ising model together with its full diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    ising: IsingModel,
    diagonal: Vec<f64>,
}

impl Hamiltonian {
    pub fn new(ising: &IsingModel) -> Result<Self> {
        Ok(Self {
            diagonal: ising.diagonal()?,
            ising: ising.clone(),
        })
    }

    pub fn ising(&self) -> &IsingModel {
        &self.ising
    }

    pub fn num_qubits(&self) -> usize {
        self.ising.num_qubits()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn ground_energy(&self) -> f64 {
        self.diagonal.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Basis states within `tol` of the ground energy.
    pub fn ground_states(&self, tol: f64) -> Vec<usize> {
        let e0 = self.ground_energy();
        (0..self.diagonal.len())
            .filter(|&s| self.diagonal[s] - e0 <= tol)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub restarts: usize,
    pub seed: u64,
    pub shots: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            restarts: 5,
            seed: 7,
            shots: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RestartSummary {
    pub restart: usize,
    pub initial_params: Vec<f64>,
    pub best_energy: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub termination: Termination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    /// `vqe` or `qaoa`.
    pub method: String,
    /// Ansatz depth (VQE) or layer count `p` (QAOA).
    pub depth: usize,
    pub optimizer: Method,
    pub seed: u64,
    pub shots: usize,
    /// Trace of the winning restart.
    pub trace: OptimizerTrace,
    /// Expectation value at `best_params`.
    pub best_energy: f64,
    pub best_params: Vec<f64>,
    /// Lowest-energy bitstring among the final samples.
    pub best_bitstring: BitVector,
    pub best_sampled_energy: f64,
    /// Highest-probability basis state of the final state.
    pub most_probable: BitVector,
    pub counts: Counts,
    pub winning_restart: usize,
    pub restarts: Vec<RestartSummary>,
}

impl SolverResult {
    pub fn decode(&self, qubo: &ColoringQubo) -> Result<Decoded> {
        qubo.decode(&self.best_bitstring)
    }

    /// Fraction of shots that landed on the given basis state.
    pub fn sampled_fraction(&self, index: usize) -> f64 {
        self.counts.get(&index).copied().unwrap_or(0) as f64 / self.shots.max(1) as f64
    }
}

/// Random stream for restart `restart` under master seed `seed`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64 + 1);
    rng
}

// stream 0 of the master seed is reserved for final sampling
fn sampling_seed(seed: u64) -> u64 {
    seed.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15
}

fn run_restarts<I, E, S>(
    hamiltonian: &Hamiltonian,
    cfg: &OptimizerConfig,
    opts: &RunOptions,
    num_params: usize,
    init: I,
    energy: E,
    state: S,
) -> Result<SolverResult>
where
    I: Fn(&mut ChaCha8Rng) -> Vec<f64>,
    E: Fn(&[f64]) -> Result<f64> + Sync,
    S: Fn(&[f64]) -> Result<Statevector>,
{
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter("need at least one restart".into()));
    }
    let starts: Vec<Vec<f64>> = (0..opts.restarts)
        .map(|r| init(&mut restart_rng(opts.seed, r)))
        .collect();
    optimize_from(hamiltonian, cfg, opts, num_params, starts, energy, state)
}

// `energy` drives the optimizer; `state` rebuilds the winning state once
// for sampling
fn optimize_from<E, S>(
    hamiltonian: &Hamiltonian,
    cfg: &OptimizerConfig,
    opts: &RunOptions,
    num_params: usize,
    starts: Vec<Vec<f64>>,
    energy: E,
    state: S,
) -> Result<SolverResult>
where
    E: Fn(&[f64]) -> Result<f64> + Sync,
    S: Fn(&[f64]) -> Result<Statevector>,
{
    if opts.shots == 0 {
        return Err(Error::InvalidParameter("need at least one shot".into()));
    }
    let diagonal = hamiltonian.diagonal();
    let objective = ObjectiveFunction::new(num_params, |theta| energy(theta).unwrap_or(f64::NAN));
    let traces: Vec<OptimizerTrace> = starts
        .par_iter()
        .enumerate()
        .map(|(r, x0)| {
            minimize(&objective, x0, cfg).map_err(|e| Error::Restart {
                restart: r,
                source: Box::new(e),
            })
        })
        .collect::<Result<_>>()?;

    // lowest energy wins; earlier restart on ties
    let winner = (0..traces.len())
        .min_by(|&a, &b| traces[a].best_value.total_cmp(&traces[b].best_value).then(a.cmp(&b)))
        .expect("at least one restart");
    let restarts = traces
        .iter()
        .zip(&starts)
        .enumerate()
        .map(|(r, (t, x0))| RestartSummary {
            restart: r,
            initial_params: x0.clone(),
            best_energy: t.best_value,
            iterations: t.iterations(),
            evaluations: t.evaluations,
            termination: t.termination,
        })
        .collect();
    let trace = traces.into_iter().nth(winner).expect("winner in range");

    let final_state = state(&trace.best_params)?;
    let best_energy = final_state.expectation_diagonal(diagonal)?;
    let counts = final_state.sample(opts.shots, sampling_seed(opts.seed));
    let (best_index, best_sampled_energy) = lowest_energy_sample(&counts, diagonal);
    let m = hamiltonian.num_qubits();
    Ok(SolverResult {
        method: String::new(),
        depth: 0,
        optimizer: cfg.method,
        seed: opts.seed,
        shots: opts.shots,
        best_params: trace.best_params.clone(),
        trace,
        best_energy,
        best_bitstring: BitVector::from_index(best_index, m),
        best_sampled_energy,
        most_probable: final_state.most_probable(),
        counts,
        winning_restart: winner,
        restarts,
    })
}

// ties: more frequent first, then lower index
fn lowest_energy_sample(counts: &Counts, diagonal: &[f64]) -> (usize, f64) {
    let (&index, _) = counts
        .iter()
        .min_by(|(&a, &ca), (&b, &cb)| {
            diagonal[a]
                .total_cmp(&diagonal[b])
                .then(cb.cmp(&ca))
                .then(a.cmp(&b))
        })
        .expect("at least one shot");
    (index, diagonal[index])
}
