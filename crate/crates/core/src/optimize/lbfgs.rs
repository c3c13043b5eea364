//! Limited-memory BFGS with central-difference gradients and a backtracking
//! Armijo line search.

use std::collections::VecDeque;

use super::{dot, norm, OptimizerConfig, Recorder, Termination};
use crate::error::Result;

/// Curvature pairs kept for the two-loop recursion.
pub const LBFGS_MEMORY: usize = 10;

const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;
const GRAD_TOL: f64 = 1e-9;

pub(super) fn run(rec: &mut Recorder<'_, '_>, x0: &[f64], cfg: &OptimizerConfig) -> Result<Termination> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = rec.eval(&x)?;
    if n == 0 {
        return Ok(Termination::Converged);
    }
    let mut grad = gradient(rec, &x, cfg.fd_step)?;
    let mut memory: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(LBFGS_MEMORY);

    while rec.iterations() < cfg.max_iter {
        if norm(&grad) <= GRAD_TOL {
            return Ok(Termination::StepTolerance);
        }
        let mut direction = two_loop(&grad, &memory);
        let mut slope = dot(&grad, &direction);
        if !(slope < 0.0) {
            memory.clear();
            direction = grad.iter().map(|g| -g).collect();
            slope = dot(&grad, &direction);
        }
        // without curvature information the raw gradient has no scale
        let mut alpha = if memory.is_empty() {
            (cfg.initial_step / norm(&direction)).min(1.0)
        } else {
            1.0
        };

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = x.iter().zip(&direction).map(|(a, d)| a + alpha * d).collect();
            let ft = rec.probe(&trial)?;
            if ft <= fx + ARMIJO * alpha * slope {
                accepted = Some((trial, ft));
                break;
            }
            alpha *= 0.5;
        }
        let Some((x_new, f_new)) = accepted else {
            if memory.is_empty() {
                return Ok(Termination::StepTolerance);
            }
            // stale curvature; retry along the gradient
            memory.clear();
            continue;
        };
        rec.record(&x_new, f_new);

        let grad_new = gradient(rec, &x_new, cfg.fd_step)?;
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = grad_new.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) && sy > 0.0 {
            if memory.len() == LBFGS_MEMORY {
                memory.pop_front();
            }
            memory.push_back((s, y, 1.0 / sy));
        }

        let decrease = fx - f_new;
        x = x_new;
        grad = grad_new;
        fx = f_new;
        if decrease <= cfg.ftol * fx.abs().max(1.0) {
            return Ok(Termination::Converged);
        }
    }
    Ok(Termination::MaxIterations)
}

fn gradient(rec: &mut Recorder<'_, '_>, x: &[f64], h: f64) -> Result<Vec<f64>> {
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = rec.probe(&probe)?;
        probe[i] = x[i] - h;
        let down = rec.probe(&probe)?;
        probe[i] = x[i];
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

/// `-H g` via the standard two-loop recursion.
fn two_loop(grad: &[f64], memory: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = grad.to_vec();
    let mut alphas = Vec::with_capacity(memory.len());
    for (s, y, rho) in memory.iter().rev() {
        let a = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= a * yi);
        alphas.push(a);
    }
    if let Some((s, y, _)) = memory.back() {
        let scale = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= scale);
    }
    for ((s, y, rho), a) in memory.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (a - b) * si);
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}
