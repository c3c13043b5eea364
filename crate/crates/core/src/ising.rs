//! Diagonal Ising Hamiltonians.
//!
//! Bits map to spins as `z = 1 - 2b`: bit 0 is spin +1, bit 1 is spin -1.
//! Equivalently each binary variable is replaced by `x = (1 - Z) / 2`, so a
//! measured bitstring reads directly as the QUBO assignment.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::qubo::{BinaryQuadratic, BitVector, ColoringQubo};

/// Largest qubit count for which a full diagonal is materialized by default.
pub const DEFAULT_DIAGONAL_CAP: usize = 24;

/// `offset + sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IsingModel {
    num_qubits: usize,
    linear: BTreeMap<usize, f64>,
    quadratic: BTreeMap<(usize, usize), f64>,
    offset: f64,
}

impl IsingModel {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            ..Self::default()
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn linear(&self) -> &BTreeMap<usize, f64> {
        &self.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.quadratic
    }

    pub fn add_offset(&mut self, value: f64) {
        self.offset += value;
    }

    pub fn add_linear(&mut self, i: usize, value: f64) -> Result<()> {
        self.check_qubit(i)?;
        accumulate(&mut self.linear, i, value);
        Ok(())
    }

    /// Adds `value * Z_i Z_j`. `i == j` folds into the offset since `Z^2 = 1`.
    pub fn add_quadratic(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        self.check_qubit(i)?;
        self.check_qubit(j)?;
        if i == j {
            self.offset += value;
        } else {
            accumulate(&mut self.quadratic, (i.min(j), i.max(j)), value);
        }
        Ok(())
    }

    fn check_qubit(&self, i: usize) -> Result<()> {
        if i >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                index: i,
                qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Substitutes `x = (1 - Z) / 2` into a binary quadratic form.
    pub fn from_binary_quadratic(form: &BinaryQuadratic) -> Self {
        let mut model = Self::new(form.num_vars);
        model.offset = form.offset;
        for (i, &a) in form.linear.iter().enumerate() {
            // a x = a/2 - (a/2) Z
            model.offset += a / 2.0;
            accumulate(&mut model.linear, i, -a / 2.0);
        }
        for (&(i, j), &b) in &form.quadratic {
            // b x_i x_j = (b/4)(1 - Z_i - Z_j + Z_i Z_j)
            model.offset += b / 4.0;
            accumulate(&mut model.linear, i, -b / 4.0);
            accumulate(&mut model.linear, j, -b / 4.0);
            accumulate(&mut model.quadratic, (i.min(j), i.max(j)), b / 4.0);
        }
        model
    }

    pub fn energy(&self, bits: &BitVector) -> Result<f64> {
        if bits.len() != self.num_qubits {
            return Err(Error::LengthMismatch {
                expected: self.num_qubits,
                actual: bits.len(),
            });
        }
        let b = bits.bits();
        let spin = |i: usize| 1.0 - 2.0 * b[i] as f64;
        let mut e = self.offset;
        for (&i, &h) in &self.linear {
            e += h * spin(i);
        }
        for (&(i, j), &w) in &self.quadratic {
            e += w * spin(i) * spin(j);
        }
        Ok(e)
    }

    /// Energy of every basis state; entry `s` has qubit `j` in bit `j` of `s`.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        self.diagonal_with_cap(DEFAULT_DIAGONAL_CAP)
    }

    pub fn diagonal_with_cap(&self, cap: usize) -> Result<Vec<f64>> {
        let m = self.num_qubits;
        if m > cap {
            return Err(Error::CapExceeded {
                needed: 1u128 << m.min(127),
                cap: 1u128 << cap.min(127),
            });
        }
        let dim = 1usize << m;
        // Build by doubling: states with qubit j set differ from their
        // partner only in terms touching j.
        let mut diag = vec![0.0; dim];
        diag[0] = self.offset
            + self.linear.values().sum::<f64>()
            + self.quadratic.values().sum::<f64>();
        let mut neighbors: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for (&(i, j), &w) in &self.quadratic {
            neighbors[j].push((i, w));
            neighbors[i].push((j, w));
        }
        for j in 0..m {
            let h = self.linear.get(&j).copied().unwrap_or(0.0);
            let half = 1usize << j;
            for s in 0..half {
                // flip qubit j from +1 to -1 on top of state s (qubits > j all zero)
                let mut delta = -2.0 * h;
                for &(other, w) in &neighbors[j] {
                    let z_other = if other < j {
                        1.0 - 2.0 * ((s >> other) & 1) as f64
                    } else {
                        1.0
                    };
                    delta -= 2.0 * w * z_other;
                }
                diag[s | half] = diag[s] + delta;
            }
        }
        Ok(diag)
    }

    /// One term per line: `Z i c`, `ZZ i j c`, then `CONST c`.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (&i, &h) in &self.linear {
            let _ = writeln!(out, "Z {i} {h}");
        }
        for (&(i, j), &w) in &self.quadratic {
            let _ = writeln!(out, "ZZ {i} {j} {w}");
        }
        let _ = writeln!(out, "CONST {}", self.offset);
        out
    }

    /// Parses the format written by [`IsingModel::to_text`].
    pub fn from_text(num_qubits: usize, text: &str) -> Result<Self> {
        let mut model = Self::new(num_qubits);
        for (lineno, line) in text.lines().enumerate() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || Error::InvalidParameter(format!("line {}: `{line}`", lineno + 1));
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad());
            let idx = |s: &str| s.parse::<usize>().map_err(|_| bad());
            match fields.as_slice() {
                [] => {}
                ["Z", i, c] => model.add_linear(idx(i)?, num(c)?)?,
                ["ZZ", i, j, c] => model.add_quadratic(idx(i)?, idx(j)?, num(c)?)?,
                ["CONST", c] => model.add_offset(num(c)?),
                _ => return Err(bad()),
            }
        }
        Ok(model)
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, f64>, key: K, value: f64) {
    let entry = map.entry(key).or_insert(0.0);
    *entry += value;
    if *entry == 0.0 {
        map.retain(|_, v| *v != 0.0);
    }
}

/// Ising model whose diagonal equals the coloring penalty energy.
pub fn qubo_to_ising(qubo: &ColoringQubo) -> IsingModel {
    IsingModel::from_binary_quadratic(&qubo.penalty_form())
}
