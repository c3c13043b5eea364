//! Dense statevector simulator.
//!
//! Basis index `s` holds qubit `j` in bit `j`. Printed bitstrings list qubit 0
//! first (leftmost), matching [`BitVector`]'s display order.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::qubo::BitVector;

/// Default upper bound on simulated qubits.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Gate vocabulary of the variational circuits.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cx { control: usize, target: usize },
    Cz(usize, usize),
    /// Multiplies amplitude `s` by `exp(-i * phases[s])`.
    DiagonalPhase(Vec<f64>),
}

impl Gate {
    /// Rotation angle, for the parameterized kinds.
    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Rx(_, a) | Gate::Ry(_, a) | Gate::Rz(_, a) => Some(a),
            _ => None,
        }
    }
}

/// Measurement outcome counts keyed by basis index.
pub type Counts = BTreeMap<usize, usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// `|0...0>` on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Result<Self> {
        Self::zero_with_cap(num_qubits, DEFAULT_QUBIT_CAP)
    }

    pub fn zero_with_cap(num_qubits: usize, cap: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter("need at least one qubit".into()));
        }
        if num_qubits > cap {
            return Err(Error::CapExceeded {
                needed: num_qubits as u128,
                cap: cap as u128,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Equal superposition `H^{\otimes m} |0...0>`.
    pub fn uniform(num_qubits: usize) -> Result<Self> {
        let mut s = Self::zero(num_qubits)?;
        let a = Complex64::new((s.amps.len() as f64).sqrt().recip(), 0.0);
        s.amps.iter_mut().for_each(|x| *x = a);
        Ok(s)
    }

    /// Wraps explicit amplitudes. The length must be a power of two; the
    /// vector is used as given, without normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "amplitude count {len} is not a power of two >= 2"
            )));
        }
        Ok(Self {
            num_qubits: len.trailing_zeros() as usize,
            amps,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: q,
                qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                actual: len,
            });
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        match *gate {
            Gate::H(q) => {
                self.check_qubit(q)?;
                self.apply_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y) * FRAC_1_SQRT_2;
                    *b = (x - y) * FRAC_1_SQRT_2;
                });
            }
            Gate::X(q) => {
                self.check_qubit(q)?;
                self.apply_pairs(q, std::mem::swap);
            }
            Gate::Rx(q, theta) => {
                self.check_qubit(q)?;
                let (s, c) = (theta / 2.0).sin_cos();
                let mis = Complex64::new(0.0, -s);
                self.apply_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c + y * mis;
                    *b = x * mis + y * c;
                });
            }
            Gate::Ry(q, theta) => {
                self.check_qubit(q)?;
                let (s, c) = (theta / 2.0).sin_cos();
                self.apply_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x * c - y * s;
                    *b = x * s + y * c;
                });
            }
            Gate::Rz(q, theta) => {
                self.check_qubit(q)?;
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                self.apply_pairs(q, |a, b| {
                    *a *= lo;
                    *b *= hi;
                });
            }
            Gate::Cx { control, target } => {
                self.check_qubit(control)?;
                self.check_qubit(target)?;
                if control == target {
                    return Err(Error::InvalidParameter("CX control equals target".into()));
                }
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for s in 0..self.amps.len() {
                    if s & cmask != 0 && s & tmask == 0 {
                        self.amps.swap(s, s | tmask);
                    }
                }
            }
            Gate::Cz(a, b) => {
                self.check_qubit(a)?;
                self.check_qubit(b)?;
                if a == b {
                    return Err(Error::InvalidParameter("CZ on a single qubit".into()));
                }
                let mask = (1usize << a) | (1usize << b);
                for (s, amp) in self.amps.iter_mut().enumerate() {
                    if s & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            Gate::DiagonalPhase(ref phases) => {
                self.check_len(phases.len())?;
                for (amp, &phi) in self.amps.iter_mut().zip(phases) {
                    *amp *= Complex64::from_polar(1.0, -phi);
                }
            }
        }
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a Gate>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    // `f(amp[s], amp[s | 1 << q])` for every `s` with bit `q` clear.
    fn apply_pairs(&mut self, q: usize, mut f: impl FnMut(&mut Complex64, &mut Complex64)) {
        let stride = 1usize << q;
        for block in self.amps.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a, b);
            }
        }
    }

    /// Multiplies amplitude `s` by `exp(-i * gamma * energies[s])`.
    pub fn apply_diagonal_phase(&mut self, energies: &[f64], gamma: f64) -> Result<()> {
        self.check_len(energies.len())?;
        for (amp, &e) in self.amps.iter_mut().zip(energies) {
            *amp *= Complex64::from_polar(1.0, -gamma * e);
        }
        Ok(())
    }

    /// Multiplies amplitude `s` by `factors[level_of[s]]`.
    pub(crate) fn apply_phase_levels(&mut self, factors: &[Complex64], level_of: &[u32]) {
        debug_assert_eq!(level_of.len(), self.amps.len());
        for (amp, &l) in self.amps.iter_mut().zip(level_of) {
            *amp *= factors[l as usize];
        }
    }

    /// `sum_s |amp_s|^2 * energies[s]`.
    pub fn expectation_diagonal(&self, energies: &[f64]) -> Result<f64> {
        self.check_len(energies.len())?;
        Ok(self
            .amps
            .iter()
            .zip(energies)
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum())
    }

    /// Draws `shots` basis states from `|amp|^2`; deterministic per seed.
    pub fn sample(&self, shots: usize, seed: u64) -> Counts {
        let mut cumulative = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts = Counts::new();
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let s = cumulative
                .partition_point(|&c| c <= u)
                .min(self.amps.len() - 1);
            *counts.entry(s).or_insert(0) += 1;
        }
        counts
    }

    /// Basis index of largest probability; ties go to the lowest index.
    pub fn most_probable_index(&self) -> usize {
        let mut best = 0;
        let mut best_p = f64::NEG_INFINITY;
        for (s, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > best_p {
                best = s;
                best_p = p;
            }
        }
        best
    }

    pub fn most_probable(&self) -> BitVector {
        BitVector::from_index(self.most_probable_index(), self.num_qubits)
    }
}

/// Printable bitstring for a basis index, qubit 0 leftmost.
pub fn bitstring(index: usize, num_qubits: usize) -> String {
    BitVector::from_index(index, num_qubits).to_string()
}
