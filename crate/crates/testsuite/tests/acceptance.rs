//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines always reach the terminal.
//! Every criterion runs even if an earlier one fails; the process exits
//! nonzero if any line reads FAIL.

use std::f64::consts::PI;
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::Parser;
use num_complex::Complex64;
use qcolor_cli::args::Cli;
use qcolor_cli::run_to;
use qcolor_core::cases::{builtin_case, BUILTIN_CASES};
use qcolor_core::coloring::{
    backtrack_kcolor, brute_force_colorings, chromatic_number, greedy_color_natural, is_proper_coloring,
};
use qcolor_core::{
    qubo_to_ising, BitVector, CaseStudy, ColoringQubo, Gate, Graph, Hamiltonian, Method, OptimizerConfig,
    QaoaProblem, RunOptions, Statevector, VqeProblem,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const FLIGHT_Q: [[i32; 18]; 18] = [
    [0, -4, -4, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-4, 0, -4, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [-4, -4, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, -4, -4, 0, 0, 0, -2, 0, 0, -2, 0, 0, 0, 0, 0],
    [0, 0, 0, -4, 0, -4, 0, 0, 0, 0, -2, 0, 0, -2, 0, 0, 0, 0],
    [0, 0, 0, -4, -4, 0, 0, 0, 0, 0, 0, -2, 0, 0, -2, 0, 0, 0],
    [-2, 0, 0, 0, 0, 0, 0, -4, -4, 0, 0, 0, -2, 0, 0, 0, 0, 0],
    [0, -2, 0, 0, 0, 0, -4, 0, -4, 0, 0, 0, 0, -2, 0, 0, 0, 0],
    [0, 0, -2, 0, 0, 0, -4, -4, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0],
    [0, 0, 0, -2, 0, 0, 0, 0, 0, 0, -4, -4, -2, 0, 0, -2, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, 0, 0, -4, 0, -4, 0, -2, 0, 0, -2, 0],
    [0, 0, 0, 0, 0, -2, 0, 0, 0, -4, -4, 0, 0, 0, -2, 0, 0, -2],
    [0, 0, 0, -2, 0, 0, -2, 0, 0, -2, 0, 0, 0, -4, -4, 0, 0, 0],
    [0, 0, 0, 0, -2, 0, 0, -2, 0, 0, -2, 0, -4, 0, -4, 0, 0, 0],
    [0, 0, 0, 0, 0, -2, 0, 0, -2, 0, 0, -2, -4, -4, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, 0, 0, -4, -4],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0, 0, -4, 0, -4],
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, -2, 0, 0, 0, -4, -4, 0],
];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:.2?}, limit {limit:?}"))
}

fn cases() -> Vec<CaseStudy> {
    BUILTIN_CASES.iter().map(|n| builtin_case(n).unwrap()).collect()
}

fn qubo(case: &CaseStudy) -> ColoringQubo {
    ColoringQubo::new(&case.graph, case.k, case.penalty).unwrap()
}

fn triangle() -> ColoringQubo {
    ColoringQubo::new(&Graph::complete(["A", "B", "C"]).unwrap(), 3, 4.0).unwrap()
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> BitVector {
    BitVector::from_bits((0..len).map(|_| rng.gen_range(0..2u8)).collect()).unwrap()
}

fn random_state(rng: &mut ChaCha8Rng, m: usize) -> Statevector {
    let amps: Vec<Complex64> = (0..1 << m)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    Statevector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}

fn proper_bits(q: &ColoringQubo, bits: &BitVector) -> bool {
    q.decode(bits)
        .unwrap()
        .assignment()
        .map(|a| is_proper_coloring(q.graph(), a).unwrap())
        .unwrap_or(false)
}

/// Runs a `qcolor` command line in-process and returns its exit code and
/// standard output.
fn qcolor(args: &[&str]) -> Result<(u8, String), String> {
    let cli = Cli::try_parse_from(std::iter::once("qcolor").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    let code = match run_to(cli, &mut out) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => return Err(format!("{args:?}: {e}")),
    };
    Ok((code, String::from_utf8(out).map_err(|e| e.to_string())?))
}

fn c1_matrix_reproduction() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let json_path = dir.path().join("q.json");
    let start = Instant::now();
    let json_arg = json_path.display().to_string();
    let (code, stdout) = qcolor(&["dump-qubo", "--case", "flight", "--penalty", "4", "--out", &json_arg])?;
    let elapsed = start.elapsed();
    ensure(code == 0, || format!("exit code {code}"))?;

    let grid: Vec<Vec<i32>> = stdout
        .lines()
        .skip_while(|l| *l != "Q =")
        .skip(1)
        .take(18)
        .map(|l| l.split_whitespace().map(|v| v.parse().unwrap()).collect())
        .collect();
    let expected: Vec<Vec<i32>> = FLIGHT_Q.iter().map(|r| r.to_vec()).collect();
    ensure(grid == expected, || "printed Q grid differs from the published matrix".into())?;
    let g: Vec<i32> = stdout
        .lines()
        .skip_while(|l| *l != "g =")
        .nth(1)
        .unwrap_or_default()
        .split_whitespace()
        .map(|v| v.parse().unwrap())
        .collect();
    ensure(g == vec![4; 18], || format!("printed g = {g:?}"))?;

    let file: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json_path).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let q: Vec<Vec<f64>> = serde_json::from_value(file["q"].clone()).map_err(|e| e.to_string())?;
    let as_float: Vec<Vec<f64>> = FLIGHT_Q.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
    ensure(q == as_float, || "JSON Q differs from the published matrix".into())?;
    let gj: Vec<f64> = serde_json::from_value(file["g"].clone()).map_err(|e| e.to_string())?;
    ensure(gj == vec![4.0; 18], || format!("JSON g = {gj:?}"))?;
    within(elapsed, Duration::from_secs(1))?;
    Ok(format!("18x18 Q and 18-entry g exact, {elapsed:.2?}"))
}

fn c2_objective_identity() -> Outcome {
    let start = Instant::now();
    let tri = triangle();
    for s in 0..512 {
        let x = BitVector::from_index(s, 9);
        let sum = tri.matrix_objective(&x).unwrap() + tri.penalty_energy(&x).unwrap();
        ensure((sum - 12.0).abs() <= 1e-9, || format!("K3 state {x}: sum {sum}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for case in cases() {
        let q = qubo(&case);
        let target = case.graph.node_count() as f64 * case.penalty;
        for _ in 0..10_000 {
            let x = random_bits(&mut rng, q.num_vars());
            let sum = q.matrix_objective(&x).unwrap() + q.penalty_energy(&x).unwrap();
            ensure((sum - target).abs() <= 1e-9, || format!("{} state {x}: sum {sum}", case.name))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("K3 exhaustive + 3x10^4 random vectors, {:.2?}", start.elapsed()))
}

fn c3_ising_fidelity() -> Outcome {
    let start = Instant::now();
    let tri = triangle();
    let diag = qubo_to_ising(&tri).diagonal().unwrap();
    for (s, &e) in diag.iter().enumerate() {
        let p = tri.penalty_energy(&BitVector::from_index(s, 9)).unwrap();
        ensure(e == p, || format!("K3 state {s}: diagonal {e}, penalty {p}"))?;
    }
    let mut details = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for case in cases() {
        let q = qubo(&case);
        let h = Hamiltonian::new(&qubo_to_ising(&q)).unwrap();
        if case.name == "flight" {
            for _ in 0..10_000 {
                let x = random_bits(&mut rng, q.num_vars());
                let (d, p) = (h.diagonal()[x.to_index()], q.penalty_energy(&x).unwrap());
                ensure((d - p).abs() <= 1e-9, || format!("flight state {x}: diagonal {d}, penalty {p}"))?;
            }
        }
        ensure(h.ground_energy() == 0.0, || format!("{} ground energy {}", case.name, h.ground_energy()))?;
        let grounds = h.ground_states(1e-9).len() as u64;
        let colorings = brute_force_colorings(&case.graph, 3, false).unwrap().count;
        ensure(grounds == colorings, || {
            format!("{}: {grounds} ground states vs {colorings} colorings", case.name)
        })?;
        details.push(format!("{} {grounds}", case.name));
    }
    within(start.elapsed(), Duration::from_secs(30))?;
    Ok(format!("ground states = colorings ({}), {:.2?}", details.join(", "), start.elapsed()))
}

fn c4_classical_baselines() -> Outcome {
    let start = Instant::now();
    for case in cases() {
        let g = &case.graph;
        let found = backtrack_kcolor(g, 3).unwrap().ok_or(format!("{}: no 3-coloring", case.name))?;
        ensure(is_proper_coloring(g, &found).unwrap(), || format!("{}: improper 3-coloring", case.name))?;
        ensure(backtrack_kcolor(g, 2).unwrap().is_none(), || format!("{}: 2-colorable", case.name))?;
        let chi = chromatic_number(g).unwrap();
        ensure(chi == 3, || format!("{}: chromatic number {chi}", case.name))?;
    }
    let greedy = greedy_color_natural(&builtin_case("flight").unwrap().graph).colors_used();
    ensure(greedy == 3, || format!("greedy used {greedy} colors on flight"))?;
    within(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("backtrack/greedy/chromatic as expected, {:.2?}", start.elapsed()))
}

fn c5_vqe_convergence() -> Outcome {
    let opts = RunOptions {
        restarts: 5,
        seed: 7,
        shots: 4096,
    };
    let mut report = Vec::new();
    let mut failures = Vec::new();
    for case in cases() {
        let q = qubo(&case);
        let problem = VqeProblem::new(&qubo_to_ising(&q), 2).unwrap();
        for method in [Method::Cobyla, Method::QuasiNewtonFd] {
            let start = Instant::now();
            let cfg = OptimizerConfig::with_method(method);
            let r = problem.run(&cfg, &opts).unwrap();
            let within_budget = r.restarts.iter().all(|s| s.iterations <= 500);
            let ok = r.best_energy <= 1e-3 && proper_bits(&q, &r.best_bitstring) && within_budget;
            let line = format!(
                "{}/{method}: best {:.2e} ({:.1?})",
                case.name,
                r.best_energy,
                start.elapsed()
            );
            if !ok {
                failures.push(line.clone());
            }
            report.push(line);
        }
    }
    if failures.is_empty() {
        Ok(report.join("; "))
    } else {
        Err(format!("not converged: {}; all runs: {}", failures.join("; "), report.join("; ")))
    }
}

fn c6_qaoa_convergence() -> Outcome {
    let opts = RunOptions {
        restarts: 10,
        seed: 7,
        shots: 4096,
    };
    let mut report = Vec::new();
    for case in cases() {
        let start = Instant::now();
        let q = qubo(&case);
        let problem = QaoaProblem::new(&qubo_to_ising(&q)).unwrap();
        let r = problem.run(3, &OptimizerConfig::with_method(Method::Cobyla), &opts).unwrap();
        let penalty = q.penalty_energy(&r.best_bitstring).unwrap();
        ensure(penalty == 0.0 && proper_bits(&q, &r.best_bitstring), || {
            format!("{}: best sample {} has penalty {penalty}", case.name, r.best_bitstring)
        })?;
        report.push(format!("{} {} ({:.1?})", case.name, r.best_bitstring, start.elapsed()));
    }
    Ok(report.join("; "))
}

fn c7_qaoa_monotonicity() -> Outcome {
    let case = builtin_case("flight").unwrap();
    let problem = QaoaProblem::new(&qubo_to_ising(&qubo(&case))).unwrap();
    let opts = RunOptions {
        restarts: 10,
        seed: 7,
        shots: 4096,
    };
    let e = problem
        .run_schedule(3, &OptimizerConfig::with_method(Method::Cobyla), &opts)
        .unwrap()
        .best_energies();
    ensure(e[1] <= e[0] + 1e-6 && e[2] <= e[1] + 1e-6, || format!("energies {e:?}"))?;
    Ok(format!("E*(p=1,2,3) = {:.4}, {:.4}, {:.4}", e[0], e[1], e[2]))
}

fn c8_gradient_cross_check() -> Outcome {
    let edge = ColoringQubo::new(&Graph::complete(["A", "B"]).unwrap(), 2, 4.0).unwrap();
    let problem = VqeProblem::new(&qubo_to_ising(&edge), 2).unwrap();
    let h = OptimizerConfig::default().fd_step;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let theta: Vec<f64> = (0..problem.spec().num_params()).map(|_| rng.gen_range(-PI..PI)).collect();
        let ps = problem.parameter_shift_gradient(&theta).unwrap();
        let fd = problem.finite_difference_gradient(&theta, h).unwrap();
        for (a, b) in ps.iter().zip(&fd) {
            worst = worst.max((a - b).abs());
        }
    }
    ensure(worst <= 1e-5, || format!("max difference {worst:.2e}"))?;
    Ok(format!("max |PS - FD| = {worst:.2e} over 20 points"))
}

fn random_gate(rng: &mut ChaCha8Rng, m: usize) -> Gate {
    let q = rng.gen_range(0..m);
    let mut other = rng.gen_range(0..m - 1);
    if other >= q {
        other += 1;
    }
    let angle = rng.gen_range(-2.0 * PI..2.0 * PI);
    match rng.gen_range(0..8) {
        0 => Gate::H(q),
        1 => Gate::X(q),
        2 => Gate::Rx(q, angle),
        3 => Gate::Ry(q, angle),
        4 => Gate::Rz(q, angle),
        5 => Gate::Cx { control: q, target: other },
        6 => Gate::Cz(q, other),
        _ => Gate::DiagonalPhase((0..1 << m).map(|_| rng.gen_range(-PI..PI)).collect()),
    }
}

fn c9_simulator_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let mut s = random_state(&mut rng, 5);
    let mut worst_norm = 0.0f64;
    for _ in 0..1000 {
        let before = s.norm_sqr();
        s.apply(&random_gate(&mut rng, 5)).unwrap();
        worst_norm = worst_norm.max((s.norm_sqr() - before).abs());
    }
    ensure(worst_norm <= 1e-10, || format!("norm drift {worst_norm:.2e}"))?;

    let diag = qubo_to_ising(&triangle()).diagonal().unwrap();
    let mut worst_prob = 0.0f64;
    for _ in 0..20 {
        let mut s = random_state(&mut rng, 9);
        let before = s.probabilities();
        s.apply_diagonal_phase(&diag, rng.gen_range(-PI..PI)).unwrap();
        for (a, b) in before.iter().zip(s.probabilities()) {
            worst_prob = worst_prob.max((a - b).abs());
        }
    }
    ensure(worst_prob <= 1e-12, || format!("cost layer changed probabilities by {worst_prob:.2e}"))?;

    let mut worst_zz = 0.0f64;
    for _ in 0..50 {
        let s = random_state(&mut rng, 3);
        let (i, j) = [(0, 1), (1, 2), (0, 2), (2, 0)][rng.gen_range(0..4)];
        let (gamma, coupling) = (rng.gen_range(-PI..PI), rng.gen_range(-3.0..3.0));
        let phases: Vec<f64> = (0..8usize)
            .map(|b| {
                let zi = 1.0 - 2.0 * ((b >> i) & 1) as f64;
                let zj = 1.0 - 2.0 * ((b >> j) & 1) as f64;
                gamma * coupling * zi * zj
            })
            .collect();
        let mut direct = s.clone();
        direct.apply(&Gate::DiagonalPhase(phases)).unwrap();
        let mut circuit = s.clone();
        circuit
            .apply_all(&[
                Gate::Cx { control: i, target: j },
                Gate::Rz(j, 2.0 * gamma * coupling),
                Gate::Cx { control: i, target: j },
            ])
            .unwrap();
        for (a, b) in direct.amplitudes().iter().zip(circuit.amplitudes()) {
            worst_zz = worst_zz.max((a - b).norm());
        }
    }
    ensure(worst_zz <= 1e-10, || format!("ZZ circuit differs by {worst_zz:.2e}"))?;

    let mut worst_tv = 0.0f64;
    for m in 1..=4 {
        let s = random_state(&mut rng, m);
        let shots = 100_000;
        let counts = s.sample(shots, 1000 + m as u64);
        let tv: f64 = s
            .probabilities()
            .iter()
            .enumerate()
            .map(|(i, p)| (p - *counts.get(&i).unwrap_or(&0) as f64 / shots as f64).abs())
            .sum::<f64>()
            / 2.0;
        worst_tv = worst_tv.max(tv);
    }
    ensure(worst_tv < 0.01, || format!("TV distance {worst_tv:.4}"))?;
    Ok(format!(
        "norm {worst_norm:.1e}, cost layer {worst_prob:.1e}, ZZ {worst_zz:.1e}, TV {worst_tv:.4}"
    ))
}

fn c10_reference_solutions() -> Outcome {
    let mut n = 0;
    for case in cases() {
        let q = qubo(&case);
        for r in &case.references {
            ensure(is_proper_coloring(&case.graph, &r.assignment).unwrap(), || {
                format!("{} {} is not proper", case.name, r.label)
            })?;
            let e = q.penalty_energy(&q.encode(&r.assignment).unwrap()).unwrap();
            ensure(e == 0.0, || format!("{} {} has penalty {e}", case.name, r.label))?;
            n += 1;
        }
    }
    Ok(format!("{n} shipped references proper with zero penalty"))
}

fn c11_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["--method", "vqe", "--case", "frequency", "--optimizer", "cobyla", "--restarts", "2"],
        &["--method", "qaoa", "--case", "register", "--p", "1", "--restarts", "2"],
        &["--method", "vqe", "--case", "flight", "--optimizer", "quasi-newton-fd", "--restarts", "1", "--max-iter", "3"],
    ];
    for (n, extra) in runs.iter().enumerate() {
        let mut outputs = Vec::new();
        for rep in 0..2 {
            let result = dir.path().join(format!("run{n}.toml"));
            let trace = dir.path().join(format!("run{n}-{rep}.csv"));
            let (result_arg, trace_arg) = (result.display().to_string(), trace.display().to_string());
            let mut args = vec!["solve"];
            args.extend_from_slice(extra);
            args.extend(["--seed", "11", "--shots", "2048", "--out", &result_arg, "--trace-out", &trace_arg]);
            let (code, _) = qcolor(&args)?;
            ensure(code == 0 || code == 2, || format!("{extra:?}: exit code {code}"))?;
            let text = fs::read_to_string(&result).map_err(|e| e.to_string())?;
            let trace_text = fs::read_to_string(&trace).map_err(|e| e.to_string())?;
            // the result file names its own trace path, which differs per repetition
            outputs.push((text.replace(&format!("-{rep}.csv"), ".csv"), trace_text));
        }
        ensure(outputs[0] == outputs[1], || format!("{extra:?}: outputs differ between runs"))?;
    }
    Ok("result files and traces byte-identical across repeated solves".into())
}

fn main() -> ExitCode {
    // keep `cargo test -- --list` cheap
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance_criteria: test");
        return ExitCode::SUCCESS;
    }
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("matrix reproduction", c1_matrix_reproduction),
        ("objective identity", c2_objective_identity),
        ("ising fidelity", c3_ising_fidelity),
        ("classical baselines", c4_classical_baselines),
        ("vqe convergence", c5_vqe_convergence),
        ("qaoa convergence", c6_qaoa_convergence),
        ("qaoa monotonicity", c7_qaoa_monotonicity),
        ("gradient cross-check", c8_gradient_cross_check),
        ("simulator properties", c9_simulator_properties),
        ("reference solutions", c10_reference_solutions),
        ("determinism", c11_determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                println!("FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
