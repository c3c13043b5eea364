//! Implementation of the `qcolor` command-line tool.
//!
//! Exit codes: 0 when a proper coloring was found (or a dump succeeded),
//! 2 when the instance is infeasible or a variational run did not reach a
//! proper coloring, 1 for usage and I/O errors.

pub mod args;
pub mod output;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use qcolor_core::cases::{builtin_case, load_case, BUILTIN_CASES};
use qcolor_core::coloring::{backtrack_kcolor, brute_force_colorings, greedy_color_natural, is_proper_coloring};
use qcolor_core::{
    qubo_to_ising, ColorAssignment, ColoringQubo, Decoded, Hamiltonian, Method, OptimizerConfig, QaoaProblem,
    RunOptions, SolverResult, VqeProblem,
};
use rayon::prelude::*;
use serde::Serialize;

use args::{CaseArgs, Cli, Command, CompareArgs, CompareMethod, DumpArgs, SolveArgs, SolveMethod, VariationalArgs};
use output::{color_labels, output_path, solution_table, trace_rows, write_text, write_trace_csv, ResultFile, TraceRow};

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(CliError::stdout)?
    };
}

macro_rules! put {
    ($out:expr, $($arg:tt)*) => {
        write!($out, $($arg)*).map_err(CliError::stdout)?
    };
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error(transparent)]
    Core(#[from] qcolor_core::Error),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn stdout(source: std::io::Error) -> Self {
        CliError::Io {
            path: PathBuf::from("<stdout>"),
            source,
        }
    }

    /// True when the reader of standard output went away, as with `| head`.
    pub fn is_broken_pipe(&self) -> bool {
        matches!(self, CliError::Io { source, .. } if source.kind() == std::io::ErrorKind::BrokenPipe)
    }

    pub fn csv(path: &Path, source: csv::Error) -> Self {
        CliError::Csv {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Whether a command found what it was asked for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Solved,
    NotSolved,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Solved => 0,
            Outcome::NotSolved => 2,
        }
    }
}

pub const USAGE_EXIT: u8 = 1;

/// Runs a parsed command, printing its report to standard output.
pub fn run(cli: Cli) -> Result<Outcome, CliError> {
    run_to(cli, &mut std::io::stdout().lock())
}

/// Runs a parsed command, writing its report to `out`. Notes about written
/// files still go to standard error.
pub fn run_to(cli: Cli, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let outcome = match cli.command {
        Command::DumpQubo(a) => dump_qubo(&a, out),
        Command::DumpIsing(a) => dump_ising(&a, out),
        Command::Solve(a) => solve(&a, out),
        Command::Compare(a) => compare(&a, out),
    }?;
    out.flush().map_err(CliError::stdout)?;
    Ok(outcome)
}

/// A case with any `--k` / `--penalty` overrides applied.
pub struct Resolved {
    pub case: qcolor_core::CaseStudy,
    pub qubo: ColoringQubo,
}

pub fn resolve_case(args: &CaseArgs) -> Result<Resolved, CliError> {
    let mut case = match &args.case_file {
        Some(path) => load_case(path)?,
        None => builtin_case(&args.case).ok_or_else(|| {
            CliError::Usage(format!(
                "unknown case `{}` (built-in cases: {})",
                args.case,
                BUILTIN_CASES.join(", ")
            ))
        })?,
    };
    if let Some(k) = args.k {
        if k == 0 {
            return Err(CliError::Usage("--k must be at least 1".into()));
        }
        case.colors = color_labels(&case, k);
        case.k = k;
    }
    if let Some(p) = args.penalty {
        if !(p.is_finite() && p > 0.0) {
            return Err(CliError::Usage(format!("--penalty must be positive, got {p}")));
        }
        case.penalty = p;
    }
    let qubo = ColoringQubo::new(&case.graph, case.k, case.penalty)?;
    Ok(Resolved { case, qubo })
}

fn variable_names(r: &Resolved) -> Vec<String> {
    r.case
        .graph
        .nodes()
        .iter()
        .flat_map(|n| r.case.colors.iter().map(move |c| format!("{n}:{c}")))
        .collect()
}

#[derive(Serialize)]
struct QuboFile {
    case: String,
    k: usize,
    penalty: f64,
    variables: Vec<String>,
    q: Vec<Vec<f64>>,
    g: Vec<f64>,
    constant: f64,
}

fn dump_qubo(args: &DumpArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let r = resolve_case(&args.case)?;
    let path = output_path(
        args.output.out.as_ref(),
        &args.output.out_dir,
        &format!("{}-qubo.json", r.case.name),
    );
    say!(out,
        "# case {}: {} nodes, k = {}, P = {}; variables {}",
        r.case.name,
        r.case.graph.node_count(),
        r.case.k,
        r.case.penalty,
        variable_names(&r).join(" ")
    );
    say!(out, "Q =");
    put!(out, "{}", r.qubo.q_grid());
    say!(out, "g =");
    put!(out, "{}", r.qubo.g_row());
    say!(out, "constant = {}", r.qubo.constant());
    let file = QuboFile {
        case: r.case.name.clone(),
        k: r.case.k,
        penalty: r.case.penalty,
        variables: variable_names(&r),
        q: r.qubo.q().to_dense(),
        g: r.qubo.g().to_vec(),
        constant: r.qubo.constant(),
    };
    let json = serde_json::to_string_pretty(&file).expect("matrix serializes") + "\n";
    write_text(&path, &json)?;
    eprintln!("wrote {}", path.display());
    Ok(Outcome::Solved)
}

fn dump_ising(args: &DumpArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let r = resolve_case(&args.case)?;
    let path = output_path(
        args.output.out.as_ref(),
        &args.output.out_dir,
        &format!("{}-ising.txt", r.case.name),
    );
    let text = qubo_to_ising(&r.qubo).to_text();
    put!(out, "{text}");
    write_text(&path, &text)?;
    eprintln!("wrote {}", path.display());
    Ok(Outcome::Solved)
}

fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(CliError::Usage("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn run_options(run: &VariationalArgs, default_restarts: usize) -> RunOptions {
    RunOptions {
        restarts: run.restarts.unwrap_or(default_restarts),
        seed: run.seed,
        shots: run.shots,
    }
}

fn optimizer_config(method: Method, run: &VariationalArgs) -> Result<OptimizerConfig, CliError> {
    let cfg = OptimizerConfig {
        max_iter: run.max_iter,
        ..OptimizerConfig::with_method(method)
    };
    cfg.validate()?;
    Ok(cfg)
}

fn solve(args: &SolveArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let r = resolve_case(&args.case)?;
    let method = args.method;
    let stem = format!("{}-{}", r.case.name, method.name());
    let result_path = output_path(args.output.out.as_ref(), &args.output.out_dir, &format!("{stem}.toml"));
    let mut file = ResultFile::new(&r.case, method.name(), r.case.k, r.case.penalty);

    let found = if method.is_variational() {
        let trace_path = args.trace_out.clone().unwrap_or_else(|| {
            let name = format!("{stem}-trace.csv");
            result_path.parent().map(|d| d.join(&name)).unwrap_or_else(|| name.into())
        });
        let (config, result) = run_variational(&r, args)?;
        write_trace_csv(&trace_path, &trace_rows(&config, &result.trace))?;
        file.trace = Some(trace_path.display().to_string());
        fill_variational(&mut file, &r, &result, args)?;
        say!(out,
            "{} ({}): best energy {:.6e}, best sampled energy {}, restart {} won after {} iterations",
            config,
            args.optimizer,
            result.best_energy,
            result.best_sampled_energy,
            result.winning_restart,
            result.trace.iterations()
        );
        put!(out, "{}", solution_table(&r.case, r.case.k, &result.best_bitstring));
        eprintln!("wrote {}", trace_path.display());
        file.proper
    } else {
        let assignment = solve_classical(&r, method, &mut file)?;
        match &assignment {
            Some(a) => {
                let used = a.iter().map(|(_, c)| c + 1).max().unwrap_or(0);
                let k = used.max(r.case.k);
                let qubo = ColoringQubo::new(&r.case.graph, k, r.case.penalty)?;
                let mut shown = r.case.clone();
                shown.colors = color_labels(&r.case, k);
                file.colors_used = Some(a.colors_used());
                file.assignment = named(&shown.colors, a);
                file.proper = is_proper_coloring(&r.case.graph, a)? && used <= r.case.k;
                say!(out,
                    "{}: {} colors used (k = {})",
                    method.name(),
                    a.colors_used(),
                    r.case.k
                );
                put!(out, "{}", solution_table(&shown, k, &qubo.encode(a)?));
            }
            None => say!(out, "{}: no proper {}-coloring exists", method.name(), r.case.k),
        }
        file.proper
    };

    write_text(&result_path, &file.to_toml())?;
    eprintln!("wrote {}", result_path.display());
    if found {
        Ok(Outcome::Solved)
    } else {
        if method.is_variational() {
            say!(out, "no proper coloring among the sampled bitstrings");
            for d in &file.defects {
                say!(out, "  {d}");
            }
        }
        Ok(Outcome::NotSolved)
    }
}

fn solve_classical(
    r: &Resolved,
    method: SolveMethod,
    file: &mut ResultFile,
) -> Result<Option<ColorAssignment>, CliError> {
    Ok(match method {
        SolveMethod::Greedy => Some(greedy_color_natural(&r.case.graph)),
        SolveMethod::Backtrack => backtrack_kcolor(&r.case.graph, r.case.k)?,
        SolveMethod::Brute => {
            let all = brute_force_colorings(&r.case.graph, r.case.k, true)?;
            file.solutions = Some(all.count);
            all.colorings.and_then(|c| c.into_iter().next())
        }
        SolveMethod::Vqe | SolveMethod::Qaoa => unreachable!("handled by run_variational"),
    })
}

fn named(colors: &[String], a: &ColorAssignment) -> BTreeMap<String, String> {
    a.iter()
        .map(|(n, c)| (n.to_string(), colors[c].clone()))
        .collect()
}

fn run_variational(r: &Resolved, args: &SolveArgs) -> Result<(String, SolverResult), CliError> {
    let hamiltonian = Hamiltonian::new(&qubo_to_ising(&r.qubo))?;
    let cfg = optimizer_config(args.optimizer, &args.run)?;
    with_workers(args.run.workers, || -> Result<_, CliError> {
        Ok(match args.method {
            SolveMethod::Vqe => {
                let opts = run_options(&args.run, 5);
                let problem = VqeProblem::from_hamiltonian(hamiltonian, args.depth)?;
                (config_name("vqe", args.depth, cfg.method), problem.run(&cfg, &opts)?)
            }
            _ => {
                let opts = run_options(&args.run, 10);
                let problem = QaoaProblem::from_hamiltonian(hamiltonian);
                (config_name("qaoa", args.p, cfg.method), problem.run(args.p, &cfg, &opts)?)
            }
        })
    })?
}

fn fill_variational(file: &mut ResultFile, r: &Resolved, result: &SolverResult, args: &SolveArgs) -> Result<(), CliError> {
    match args.method {
        SolveMethod::Vqe => file.depth = Some(result.depth),
        _ => file.p = Some(result.depth),
    }
    file.optimizer = Some(result.optimizer.to_string());
    file.seed = Some(result.seed);
    file.restarts = Some(result.restarts.len());
    file.shots = Some(result.shots);
    file.max_iter = Some(args.run.max_iter);
    file.best_energy = Some(result.best_energy);
    file.best_bitstring = Some(result.best_bitstring.to_string());
    file.best_sampled_energy = Some(result.best_sampled_energy);
    file.most_probable = Some(result.most_probable.to_string());
    file.winning_restart = Some(result.winning_restart);
    file.iterations = Some(result.trace.iterations());
    file.evaluations = Some(result.trace.evaluations);
    file.termination = Some(result.trace.termination.to_string());
    match result.decode(&r.qubo)? {
        Decoded::Valid(a) => {
            file.proper = is_proper_coloring(&r.case.graph, &a)? && result.best_sampled_energy == 0.0;
            for (u, v) in qcolor_core::coloring::conflicting_edges(&r.case.graph, &a)? {
                file.defects.push(format!("edge {u}-{v} has both ends the same color"));
            }
            file.assignment = named(&r.case.colors, &a);
        }
        Decoded::Invalid(defects) => {
            file.defects = defects
                .iter()
                .map(|d| match d.colors.as_slice() {
                    [] => format!("node {} has no color", d.label),
                    cs => format!(
                        "node {} has {} colors: {}",
                        d.label,
                        cs.len(),
                        cs.iter().map(|&c| r.case.colors[c].as_str()).collect::<Vec<_>>().join(" ")
                    ),
                })
                .collect();
        }
    }
    Ok(())
}

pub fn config_name(method: &str, depth: usize, optimizer: Method) -> String {
    match method {
        "vqe" => format!("vqe-d{depth}-{optimizer}"),
        _ => format!("qaoa-p{depth}-{optimizer}"),
    }
}

struct Series {
    name: String,
    result: Result<SolverResult, qcolor_core::Error>,
}

fn compare(args: &CompareArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let r = resolve_case(&args.case)?;
    let mut optimizers = args.optimizer.clone();
    optimizers.sort();
    optimizers.dedup();
    let mut depths = match args.method {
        CompareMethod::Vqe => args.depth.clone(),
        CompareMethod::Qaoa => args.p.clone(),
    };
    depths.sort();
    depths.dedup();
    if args.method == CompareMethod::Qaoa && depths.contains(&0) {
        return Err(CliError::Usage("QAOA needs --p >= 1".into()));
    }
    if optimizers.len() * depths.len() < 2 {
        return Err(CliError::Usage(
            "compare needs at least two configurations (several --optimizer, --depth or --p values)".into(),
        ));
    }
    let configs: Vec<OptimizerConfig> = optimizers
        .iter()
        .map(|&m| optimizer_config(m, &args.run))
        .collect::<Result<_, _>>()?;
    let hamiltonian = Hamiltonian::new(&qubo_to_ising(&r.qubo))?;
    let path = output_path(
        args.output.out.as_ref(),
        &args.output.out_dir,
        &format!("{}-compare.csv", r.case.name),
    );

    let mut series: Vec<Series> = with_workers(args.run.workers, || match args.method {
        CompareMethod::Vqe => {
            let opts = run_options(&args.run, 5);
            let jobs: Vec<(usize, &OptimizerConfig)> =
                depths.iter().flat_map(|&d| configs.iter().map(move |c| (d, c))).collect();
            jobs.par_iter()
                .map(|&(d, cfg)| Series {
                    name: config_name("vqe", d, cfg.method),
                    result: VqeProblem::from_hamiltonian(hamiltonian.clone(), d).and_then(|p| p.run(cfg, &opts)),
                })
                .collect()
        }
        CompareMethod::Qaoa => {
            let opts = run_options(&args.run, 10);
            let problem = QaoaProblem::from_hamiltonian(hamiltonian.clone());
            let p_max = *depths.last().expect("nonempty");
            configs
                .par_iter()
                .flat_map_iter(|cfg| {
                    // one warm-started sweep per optimizer, keeping the requested depths
                    let sweep = problem.run_schedule(p_max, cfg, &opts);
                    depths
                        .iter()
                        .map(|&p| Series {
                            name: config_name("qaoa", p, cfg.method),
                            result: sweep
                                .as_ref()
                                .map(|s| s.results[p - 1].clone())
                                .map_err(Clone::clone),
                        })
                        .collect::<Vec<_>>()
                })
                .collect()
        }
    })?;
    series.sort_by(|a, b| a.name.cmp(&b.name));

    let mut rows: Vec<TraceRow> = Vec::new();
    let mut all_solved = true;
    say!(out, "{:<28} {:>14} {:>10}  proper", "config", "best_energy", "iterations");
    for s in &series {
        match &s.result {
            Ok(result) => {
                rows.extend(trace_rows(&s.name, &result.trace));
                let proper = match result.decode(&r.qubo)? {
                    Decoded::Valid(a) => is_proper_coloring(&r.case.graph, &a)?,
                    Decoded::Invalid(_) => false,
                };
                all_solved &= proper;
                say!(out,
                    "{:<28} {:>14.6e} {:>10}  {}",
                    s.name,
                    result.best_energy,
                    result.trace.iterations(),
                    if proper { "yes" } else { "no" }
                );
            }
            Err(e) => {
                all_solved = false;
                say!(out, "{:<28} failed: {e}", s.name);
            }
        }
    }
    write_trace_csv(&path, &rows)?;
    eprintln!("wrote {}", path.display());
    Ok(if all_solved { Outcome::Solved } else { Outcome::NotSolved })
}
