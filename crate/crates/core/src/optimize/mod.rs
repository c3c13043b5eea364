//! Unconstrained minimizers for the variational loops.
//!
//! Three methods share one entry point, [`minimize`]:
//!
//! * [`Method::Cobyla`]: derivative-free trust region over a simplex of
//!   interpolation points with a linear model, in the style of Powell's
//!   COBYLA (no constraints).
//! * [`Method::QuasiNewtonFd`]: limited-memory BFGS driven by central finite
//!   difference gradients.
//! * [`Method::NelderMead`]: adaptive downhill simplex.
//!
//! For the derivative-free methods one iteration is one objective
//! evaluation. For the quasi-Newton method one iteration is one accepted
//! line-search step; its gradient evaluations do not count against the
//! budget.

mod cobyla;
mod lbfgs;
mod nelder_mead;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use lbfgs::LBFGS_MEMORY;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Cobyla,
    QuasiNewtonFd,
    NelderMead,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Cobyla, Method::QuasiNewtonFd, Method::NelderMead];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cobyla => "cobyla",
            Method::QuasiNewtonFd => "quasi-newton-fd",
            Method::NelderMead => "nelder-mead",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "cobyla" => Ok(Method::Cobyla),
            "quasi-newton-fd" | "quasi-newton" | "lbfgs" | "l-bfgs" => Ok(Method::QuasiNewtonFd),
            "nelder-mead" | "nm" => Ok(Method::NelderMead),
            other => Err(Error::InvalidParameter(format!("unknown optimizer `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iter: usize,
    /// Stop once successive best values (or the simplex spread) differ by
    /// less than this.
    pub ftol: f64,
    /// Initial trust radius (COBYLA), initial simplex edge (Nelder-Mead), or
    /// cap on the first line-search step length (quasi-Newton).
    pub initial_step: f64,
    /// Final trust radius / simplex size.
    pub step_tol: f64,
    /// Central-difference step for gradients.
    pub fd_step: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Cobyla,
            max_iter: 500,
            ftol: 1e-6,
            initial_step: 0.5,
            step_tol: 1e-6,
            fd_step: 1e-6,
        }
    }
}

impl OptimizerConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if self.max_iter == 0 {
            return bad("iteration budget must be positive");
        }
        if !(self.fd_step > 0.0) {
            return bad("finite-difference step must be positive");
        }
        if !(self.initial_step > 0.0) {
            return bad("initial step must be positive");
        }
        if !(self.ftol >= 0.0) || !(self.step_tol >= 0.0) {
            return bad("tolerances must be nonnegative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// Function-value tolerance met.
    Converged,
    /// Trust radius, simplex or gradient shrank below tolerance.
    StepTolerance,
    MaxIterations,
}

impl fmt::Display for Termination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Termination::Converged => "converged",
            Termination::StepTolerance => "step-tolerance",
            Termination::MaxIterations => "max-iterations",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TracePoint {
    pub iteration: usize,
    pub params: Vec<f64>,
    pub value: f64,
    /// Lowest value recorded so far, this point included.
    pub best: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerTrace {
    pub method: Method,
    pub points: Vec<TracePoint>,
    pub best_value: f64,
    pub best_params: Vec<f64>,
    pub termination: Termination,
    /// Objective calls, gradient evaluations included.
    pub evaluations: usize,
}

impl OptimizerTrace {
    pub fn iterations(&self) -> usize {
        self.points.last().map_or(0, |p| p.iteration)
    }
}

/// Objective with a declared parameter count.
pub struct ObjectiveFunction<'a> {
    arity: usize,
    eval: Box<dyn Fn(&[f64]) -> f64 + Sync + 'a>,
}

impl<'a> ObjectiveFunction<'a> {
    pub fn new(arity: usize, eval: impl Fn(&[f64]) -> f64 + Sync + 'a) -> Self {
        Self {
            arity,
            eval: Box::new(eval),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }
}

/// Counts calls, rejects non-finite values, and records the trace.
pub(crate) struct Recorder<'f, 'a> {
    f: &'f ObjectiveFunction<'a>,
    points: Vec<TracePoint>,
    best_value: f64,
    best_params: Vec<f64>,
    evaluations: usize,
}

impl<'f, 'a> Recorder<'f, 'a> {
    fn new(f: &'f ObjectiveFunction<'a>) -> Self {
        Self {
            f,
            points: Vec::new(),
            best_value: f64::INFINITY,
            best_params: Vec::new(),
            evaluations: 0,
        }
    }

    /// Evaluates without recording a trace point.
    pub(crate) fn probe(&mut self, x: &[f64]) -> Result<f64> {
        self.evaluations += 1;
        let value = self.f.eval(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                value,
                params: x.to_vec(),
            });
        }
        Ok(value)
    }

    /// Records `(x, value)` as the next iteration.
    pub(crate) fn record(&mut self, x: &[f64], value: f64) {
        if value < self.best_value || self.points.is_empty() {
            self.best_value = value;
            self.best_params = x.to_vec();
        }
        let iteration = self.points.len();
        self.points.push(TracePoint {
            iteration,
            params: x.to_vec(),
            value,
            best: self.best_value,
        });
    }

    /// Evaluates and records in one step.
    pub(crate) fn eval(&mut self, x: &[f64]) -> Result<f64> {
        let value = self.probe(x)?;
        self.record(x, value);
        Ok(value)
    }

    /// Number of recorded iterations beyond the starting point.
    pub(crate) fn iterations(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    fn finish(self, method: Method, termination: Termination) -> OptimizerTrace {
        OptimizerTrace {
            method,
            points: self.points,
            best_value: self.best_value,
            best_params: self.best_params,
            termination,
            evaluations: self.evaluations,
        }
    }
}

/// Minimizes `f` from `x0`.
///
/// The first recorded point is always `x0` itself, so the best value never
/// exceeds `f(x0)`.
pub fn minimize(f: &ObjectiveFunction<'_>, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptimizerTrace> {
    cfg.validate()?;
    if x0.len() != f.arity() {
        return Err(Error::LengthMismatch {
            expected: f.arity(),
            actual: x0.len(),
        });
    }
    let mut rec = Recorder::new(f);
    let termination = match cfg.method {
        Method::Cobyla => cobyla::run(&mut rec, x0, cfg)?,
        Method::QuasiNewtonFd => lbfgs::run(&mut rec, x0, cfg)?,
        Method::NelderMead => nelder_mead::run(&mut rec, x0, cfg)?,
    };
    Ok(rec.finish(cfg.method, termination))
}

/// Central differences `(f(x + h e_i) - f(x - h e_i)) / 2h`.
pub fn finite_difference_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter("finite-difference step must be positive".into()));
    }
    let mut probe = x.to_vec();
    let mut grad = Vec::with_capacity(x.len());
    for i in 0..x.len() {
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        for v in [up, down] {
            if !v.is_finite() {
                return Err(Error::NonFiniteObjective {
                    value: v,
                    params: probe.clone(),
                });
            }
        }
        grad.push((up - down) / (2.0 * h));
    }
    Ok(grad)
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
