//! Linear-approximation trust region (unconstrained COBYLA).
//!
//! Keeps `n + 1` interpolation points. Each step fits the linear model
//! through them, moves from the best point to the trust-region boundary
//! along the model's steepest descent, and swaps the trial point into the
//! simplex. After a trial that falls well short of the model's prediction,
//! a degenerate or stretched simplex is repaired with a geometry step;
//! otherwise the radius halves.

use nalgebra::{DMatrix, DVector};

use super::{dot, norm, OptimizerConfig, Recorder, Termination};
use crate::error::Result;

// acceptable simplex: every vertex within BETA * rho of the best one and at
// least ALPHA * rho from the opposite face
const ALPHA: f64 = 0.25;
const BETA: f64 = 2.1;
const GAMMA: f64 = 0.5;
const POOR_RATIO: f64 = 0.1;

struct Simplex {
    points: Vec<Vec<f64>>,
    values: Vec<f64>,
}

impl Simplex {
    fn best(&self) -> usize {
        let mut b = 0;
        for (j, &v) in self.values.iter().enumerate() {
            if v < self.values[b] {
                b = j;
            }
        }
        b
    }

    fn spread(&self) -> f64 {
        let (lo, hi) = self
            .values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        hi - lo
    }

    /// Offsets of the non-best vertices from the best one (as rows) and the
    /// vertex index each row belongs to.
    fn offsets(&self, b: usize) -> (DMatrix<f64>, Vec<usize>) {
        let n = self.points[0].len();
        let others: Vec<usize> = (0..self.points.len()).filter(|&j| j != b).collect();
        let mut d = DMatrix::zeros(n, n);
        for (r, &j) in others.iter().enumerate() {
            for c in 0..n {
                d[(r, c)] = self.points[j][c] - self.points[b][c];
            }
        }
        (d, others)
    }
}

pub(super) fn run(rec: &mut Recorder<'_, '_>, x0: &[f64], cfg: &OptimizerConfig) -> Result<Termination> {
    let n = x0.len();
    let budget = cfg.max_iter;
    let mut rho = cfg.initial_step;
    let rho_end = cfg.step_tol.min(rho);

    let mut simplex = Simplex {
        points: vec![x0.to_vec()],
        values: vec![rec.eval(x0)?],
    };
    if n == 0 {
        return Ok(Termination::Converged);
    }
    for i in 0..n {
        if rec.iterations() >= budget {
            return Ok(Termination::MaxIterations);
        }
        let mut x = x0.to_vec();
        x[i] += rho;
        let v = rec.eval(&x)?;
        simplex.points.push(x);
        simplex.values.push(v);
    }

    // set after an unproductive trial step on an unacceptable simplex
    let mut improve_geometry = false;
    loop {
        if rec.iterations() >= budget {
            return Ok(Termination::MaxIterations);
        }
        let b = simplex.best();
        let xb = simplex.points[b].clone();
        let fb = simplex.values[b];
        let (d, others) = simplex.offsets(b);

        let Some(w) = d.clone().try_inverse() else {
            // collapsed simplex: rebuild it around the best point
            for (r, &j) in others.iter().enumerate() {
                if rec.iterations() >= budget {
                    return Ok(Termination::MaxIterations);
                }
                let mut x = xb.clone();
                x[r] += rho;
                simplex.values[j] = rec.eval(&x)?;
                simplex.points[j] = x;
            }
            improve_geometry = false;
            continue;
        };

        // acceptability: no vertex too far from the best one, none too close
        // to its opposite face (distance 1 / |W e_r|)
        let lengths: Vec<f64> = (0..n).map(|r| d.row(r).norm()).collect();
        let heights: Vec<f64> = (0..n).map(|r| 1.0 / w.column(r).norm()).collect();
        let (far, far_len) = argmax(&lengths);
        let (low, low_h) = argmin(&heights);
        let misplaced = if far_len > BETA * rho {
            Some(far)
        } else if low_h < ALPHA * rho {
            Some(low)
        } else {
            None
        };
        let grad = model_gradient(&w, &simplex, &others, fb);

        if improve_geometry {
            improve_geometry = false;
            if let Some(row) = misplaced {
                let normal: Vec<f64> = w.column(row).iter().copied().collect();
                let len = norm(&normal);
                let mut step: Vec<f64> = normal.iter().map(|v| GAMMA * rho * v / len).collect();
                if dot(&grad, &step) > 0.0 {
                    step.iter_mut().for_each(|v| *v = -*v);
                }
                let x: Vec<f64> = xb.iter().zip(&step).map(|(a, s)| a + s).collect();
                let j = others[row];
                simplex.values[j] = rec.eval(&x)?;
                simplex.points[j] = x;
                continue;
            }
        }

        let gnorm = norm(&grad);
        let mut productive = false;
        if gnorm > 0.0 {
            let step: Vec<f64> = grad.iter().map(|g| -rho * g / gnorm).collect();
            let trial: Vec<f64> = xb.iter().zip(&step).map(|(a, s)| a + s).collect();
            let ft = rec.eval(&trial)?;
            let ratio = (fb - ft) / (rho * gnorm);
            productive = ratio >= POOR_RATIO;

            // barycentric weights of the trial point w.r.t. the non-best
            // vertices; swapping vertex j scales the volume by |weight_j|
            let lambda = w.transpose() * DVector::from_column_slice(&step);
            let improved = ft < fb;
            let mut choice = improved.then_some(b);
            let mut score_max = if improved { 1.0 } else { 0.0 };
            for (r, &j) in others.iter().enumerate() {
                let dist2: f64 = simplex.points[j]
                    .iter()
                    .zip(&trial)
                    .map(|(a, c)| (a - c) * (a - c))
                    .sum();
                let score = lambda[r].abs() * (dist2 / (rho * rho)).max(1.0);
                if score > score_max {
                    score_max = score;
                    choice = Some(j);
                }
            }
            if let Some(j) = choice {
                simplex.points[j] = trial;
                simplex.values[j] = ft;
            }
        }

        if !productive {
            if misplaced.is_some() && gnorm > 0.0 {
                improve_geometry = true;
                continue;
            }
            if rho <= rho_end {
                return Ok(Termination::StepTolerance);
            }
            if simplex.spread() < cfg.ftol && rho < cfg.initial_step {
                return Ok(Termination::Converged);
            }
            rho = (rho * 0.5).max(rho_end);
        }
    }
}

fn model_gradient(w: &DMatrix<f64>, simplex: &Simplex, others: &[usize], fb: f64) -> Vec<f64> {
    let df = DVector::from_iterator(others.len(), others.iter().map(|&j| simplex.values[j] - fb));
    (w * df).iter().copied().collect()
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, x)| if x > acc.1 { (i, x) } else { acc })
}

fn argmin(v: &[f64]) -> (usize, f64) {
    v.iter()
        .copied()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, x)| if x < acc.1 { (i, x) } else { acc })
}
