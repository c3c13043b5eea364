//! Downhill simplex with dimension-adaptive coefficients.

use super::{OptimizerConfig, Recorder, Termination};
use crate::error::Result;

pub(super) fn run(rec: &mut Recorder<'_, '_>, x0: &[f64], cfg: &OptimizerConfig) -> Result<Termination> {
    let n = x0.len();
    let mut points = vec![x0.to_vec()];
    let mut values = vec![rec.eval(x0)?];
    if n == 0 {
        return Ok(Termination::Converged);
    }
    let nf = n as f64;
    let (reflect, expand) = (1.0, 1.0 + 2.0 / nf);
    let contract = 0.75 - 1.0 / (2.0 * nf);
    let shrink = 1.0 - 1.0 / nf.max(2.0);

    for i in 0..n {
        if rec.iterations() >= cfg.max_iter {
            return Ok(Termination::MaxIterations);
        }
        let mut x = x0.to_vec();
        x[i] += cfg.initial_step;
        values.push(rec.eval(&x)?);
        points.push(x);
    }

    loop {
        // stable sort keeps the older vertex first on ties
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        points = order.iter().map(|&i| points[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[n] - values[0];
        let size = points[1..]
            .iter()
            .map(|p| p.iter().zip(&points[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread <= cfg.ftol && size <= cfg.step_tol.max(cfg.ftol) {
            return Ok(Termination::Converged);
        }
        if size <= cfg.step_tol {
            return Ok(Termination::StepTolerance);
        }
        if rec.iterations() >= cfg.max_iter {
            return Ok(Termination::MaxIterations);
        }

        let centroid: Vec<f64> = (0..n)
            .map(|c| points[..n].iter().map(|p| p[c]).sum::<f64>() / nf)
            .collect();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&points[n])
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(reflect);
        let fr = rec.eval(&xr)?;
        if fr < values[0] {
            if rec.iterations() >= cfg.max_iter {
                points[n] = xr;
                values[n] = fr;
                continue;
            }
            let xe = along(expand);
            let fe = rec.eval(&xe)?;
            if fe < fr {
                points[n] = xe;
                values[n] = fe;
            } else {
                points[n] = xr;
                values[n] = fr;
            }
            continue;
        }
        if fr < values[n - 1] {
            points[n] = xr;
            values[n] = fr;
            continue;
        }
        if rec.iterations() >= cfg.max_iter {
            continue;
        }
        let (xc, fc) = if fr < values[n] {
            let xc = along(contract);
            let fc = rec.eval(&xc)?;
            (xc, fc)
        } else {
            let xc = along(-contract);
            let fc = rec.eval(&xc)?;
            (xc, fc)
        };
        if fc < values[n].min(fr) {
            points[n] = xc;
            values[n] = fc;
            continue;
        }
        for i in 1..=n {
            if rec.iterations() >= cfg.max_iter {
                break;
            }
            let x: Vec<f64> = points[i]
                .iter()
                .zip(&points[0])
                .map(|(p, b)| b + shrink * (p - b))
                .collect();
            values[i] = rec.eval(&x)?;
            points[i] = x;
        }
    }
}
