use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use shufflesor::analysis::{
    compare_matrices, evaluate_bounds, expected_contraction, expected_llt_bruteforce, expected_llt_closed,
    expected_llt_min_index_formula, expected_truncation_norm, log_factor, min_truncation_exhaustive,
    min_truncation_heuristic, verify_llt_norm_bounds, AveragingMode, BoundConstants, BoundReport, MAX_ENUMERATION_N,
};
use shufflesor::linalg::{self, DEFAULT_EIGEN_TOL, DEFAULT_RANK_TOL};
use shufflesor::problems::{self, consistency_check, fan_example, low_rank_psd, random_normalized_factor};
use shufflesor::solver::{empirical_rate, run_kaczmarz, run_solver};
use shufflesor::{
    c64, derive_seed, Complex64, DenseMatrix, HermitianMatrix, IterationHistory, OrderingStrategy, RngState, SolverConfig, StrategyKind,
};

use crate::args::{
    AnalyzeArgs, BoundsArgs, Cli, Command, CompareArgs, Format, GenerateArgs, InputArgs, Method, PlotArgs,
    ProblemKindArg, RunArgs, SolveArgs,
};
use crate::error::{usage, CliError, CliResult};
use crate::history::{self, Row};
use crate::{mtx, plot};

/// Relative tolerance for `b ∈ Ran(B)`.
const CONSISTENCY_TOL: f64 = 1e-8;
/// Largest `n` for which the expected contraction is averaged exactly.
const EXACT_CONTRACTION_N: usize = 7;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult<()> {
    match cli.command {
        Command::Generate(a) => generate(&a, out),
        Command::Solve(a) => solve(&a, out),
        Command::Compare(a) => compare(&a, out),
        Command::Analyze(a) => analyze(&a, out),
        Command::Bounds(a) => bounds(&a, out),
        Command::Plot(a) => plot_cmd(&a, out),
    }
}

// ---------------------------------------------------------------- generate

fn require(value: Option<usize>, flag: &str, kind: &str) -> CliResult<usize> {
    match value {
        Some(v) if v >= 1 => Ok(v),
        Some(_) => Err(usage(format!("--{flag} must be at least 1 for --kind {kind}"))),
        None => Err(usage(format!("--kind {kind} requires --{flag}"))),
    }
}

fn generate(a: &GenerateArgs, out: &mut dyn Write) -> CliResult<()> {
    let mut rng = RngState::new(a.seed);
    let p = match a.kind {
        ProblemKindArg::Fan => fan_example(require(a.m, "m", "fan")?)?,
        ProblemKindArg::Random => {
            let n = require(a.n, "n", "random")?;
            let m = require(a.m, "m", "random")?;
            random_normalized_factor(n, m, a.complex, &mut rng)?
        }
        ProblemKindArg::Lowrank => {
            let n = require(a.n, "n", "lowrank")?;
            let r = require(a.r, "r", "lowrank")?;
            if r > n {
                return Err(usage(format!("--r {r} exceeds --n {n}")));
            }
            low_rank_psd(n, r, &mut rng)?
        }
    };
    fs::create_dir_all(&a.out_dir).with_context(|| format!("creating {}", a.out_dir.display()))?;
    let meta = [("problem", p.describe())];
    let write = |name: &str, text: String| mtx::write_text(&a.out_dir.join(name), &text);
    write("matrix.mtx", mtx::format_hermitian(&p.matrix, &meta))?;
    write("rhs.mtx", mtx::format_vector(&p.rhs, &meta))?;
    write("solution.mtx", mtx::format_vector(&p.ybar, &meta))?;
    if let Some(f) = &p.factor {
        write("factor.mtx", mtx::format_dense(f, &meta))?;
    }
    let summary = p.matrix.spectral_summary(DEFAULT_RANK_TOL)?;
    let mut text = String::new();
    text.push_str(&format!("problem: {}\n", p.describe()));
    text.push_str(&format!("n: {}\n", p.n()));
    if let Some(f) = &p.factor {
        text.push_str(&format!("factor_cols: {}\n", f.cols()));
    }
    text.push_str(&format!("seed: {}\n", a.seed));
    text.push_str(&format!("rank: {}\n", summary.rank));
    text.push_str(&format!("lambda1: {}\n", summary.lambda1));
    text.push_str(&format!("kappa_bar: {}\n", summary.kappa_bar));
    fs::write(a.out_dir.join("meta.txt"), &text)?;
    write!(out, "{text}")?;
    writeln!(out, "out_dir: {}", a.out_dir.display())?;
    Ok(())
}

// ---------------------------------------------------------------- inputs

struct Problem {
    matrix: HermitianMatrix,
    rhs: Vec<Complex64>,
    ybar: Vec<Complex64>,
    factor: Option<DenseMatrix>,
    xbar: Option<Vec<Complex64>>,
}

fn resolve(explicit: &Option<PathBuf>, dir: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
    explicit
        .clone()
        .or_else(|| dir.as_ref().map(|d| d.join(name)).filter(|p| p.exists()))
}

fn matrix_path(input: &InputArgs) -> CliResult<PathBuf> {
    match (&input.matrix, &input.dir) {
        (Some(p), _) => Ok(p.clone()),
        (None, Some(d)) => Ok(d.join("matrix.mtx")),
        (None, None) => Err(usage("give --dir or --matrix")),
    }
}

fn load_matrix(input: &InputArgs) -> CliResult<HermitianMatrix> {
    Ok(mtx::read_hermitian(&matrix_path(input)?)?)
}

fn check_len(name: &str, v: &[Complex64], n: usize) -> CliResult<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(CliError::Runtime(anyhow::anyhow!("{name} has length {}, matrix is {n}×{n}", v.len())))
    }
}

/// Minimum-norm solution `B^+ b` from the eigendecomposition.
fn pseudo_solution(b: &HermitianMatrix, rhs: &[Complex64]) -> CliResult<Vec<Complex64>> {
    let eig = b.eigen(DEFAULT_EIGEN_TOL)?;
    let scale = eig.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut y = vec![c64(0.0, 0.0); b.n()];
    for (k, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() > DEFAULT_RANK_TOL * scale {
            let v = eig.vector(k);
            let coeff = linalg::dot(rhs, &v) / lambda;
            for (yi, vi) in y.iter_mut().zip(&v) {
                *yi += coeff * vi;
            }
        }
    }
    Ok(y)
}

fn load_problem(input: &InputArgs, method: Method) -> CliResult<Problem> {
    let matrix = load_matrix(input)?;
    let n = matrix.n();
    let rhs = match resolve(&input.rhs, &input.dir, "rhs.mtx") {
        Some(p) => mtx::read_vector(&p)?,
        None => return Err(usage("missing right-hand side: give --rhs or a --dir containing rhs.mtx")),
    };
    check_len("rhs", &rhs, n)?;
    let ybar = match resolve(&input.solution, &input.dir, "solution.mtx") {
        Some(p) => mtx::read_vector(&p)?,
        None => pseudo_solution(&matrix, &rhs)?,
    };
    check_len("solution", &ybar, n)?;
    let factor = match resolve(&input.factor, &input.dir, "factor.mtx") {
        Some(p) => Some(mtx::read_file(&p)?.matrix),
        None if method == Method::Kaczmarz => {
            return Err(usage("--method kaczmarz needs the factor: give --factor or a --dir containing factor.mtx"))
        }
        None => None,
    };
    let xbar = match &factor {
        Some(a) => {
            if a.rows() != n {
                return Err(CliError::Runtime(anyhow::anyhow!("factor has {} rows, matrix is {n}×{n}", a.rows())));
            }
            Some(a.adjoint_mul_vec(&ybar)?)
        }
        None => None,
    };
    Ok(Problem {
        matrix,
        rhs,
        ybar,
        factor,
        xbar,
    })
}

fn start_vector(run: &RunArgs, p: &Problem) -> CliResult<Vec<Complex64>> {
    match &run.y0 {
        Some(path) => {
            let y0 = mtx::read_vector(path)?;
            check_len("y0", &y0, p.matrix.n())?;
            Ok(y0)
        }
        None => Ok(problems::default_start(&p.rhs)),
    }
}

fn check_consistency(run: &RunArgs, p: &Problem) -> CliResult<()> {
    if !run.allow_inconsistent && !consistency_check(&p.matrix, &p.rhs, CONSISTENCY_TOL)? {
        return Err(CliError::Runtime(anyhow::anyhow!(
            "system inconsistent: b is not in the range of B (pass --allow-inconsistent to run anyway)"
        )));
    }
    Ok(())
}

fn check_strategy(kind: StrategyKind, run: &RunArgs) -> CliResult<()> {
    match kind {
        StrategyKind::Fixed if run.sigma.is_none() => Err(usage("strategy fixed requires --sigma")),
        StrategyKind::Preshuffled if run.sigma.is_none() && run.seed.is_none() => {
            Err(usage("strategy preshuffled requires --sigma or an explicit --seed"))
        }
        _ => Ok(()),
    }
}

fn validate_run(run: &RunArgs) -> CliResult<()> {
    if run.sweeps == 0 {
        return Err(usage("--sweeps must be at least 1"));
    }
    if !(run.target >= 0.0) {
        return Err(usage("--target must be non-negative"));
    }
    if run.window == Some(0) {
        return Err(usage("--window must be at least 1"));
    }
    Ok(())
}

fn check_sigma_used(run: &RunArgs, kinds: &[StrategyKind]) -> CliResult<()> {
    if run.sigma.is_some() && !kinds.iter().any(|k| k.needs_permutation()) {
        return Err(usage("--sigma only applies to the fixed and preshuffled strategies"));
    }
    Ok(())
}

/// One trial: the seed is `derive_seed(base, trial)`; a preshuffled order
/// without `--sigma` is drawn from a stream derived from that seed.
fn run_trial(
    p: &Problem,
    run: &RunArgs,
    kind: StrategyKind,
    y0: &[Complex64],
    trial: usize,
) -> CliResult<IterationHistory> {
    let n = p.matrix.n();
    let seed = derive_seed(run.seed.unwrap_or(0), trial as u64);
    let sigma = if kind.needs_permutation() { run.sigma.clone() } else { None };
    if let Some(s) = &sigma {
        if s.len() != n {
            return Err(usage(format!("--sigma has length {}, system has {n} equations", s.len())));
        }
    }
    let strategy = match (kind, sigma) {
        (StrategyKind::Preshuffled, None) => OrderingStrategy::preshuffled(n, &mut RngState::for_trial(seed, 1))?,
        (k, s) => OrderingStrategy::from_kind(k, s).map_err(|e| usage(e.to_string()))?,
    };
    let config = SolverConfig {
        omega: run.omega,
        max_sweeps: run.sweeps,
        target_error_sq: run.target,
        seed,
        record_orders: false,
    };
    let history = match run.method {
        Method::Sor => run_solver(&p.matrix, &p.rhs, y0, &p.ybar, &config, &strategy)?,
        Method::Kaczmarz => {
            let a = p.factor.as_ref().expect("checked on load");
            let x0 = a.adjoint_mul_vec(y0)?;
            run_kaczmarz(a, &p.rhs, &x0, p.xbar.as_ref().expect("set with factor"), &config, &strategy)?
        }
    };
    Ok(history)
}

/// Errors at or below this fraction of the initial error are treated as
/// rounding noise when measuring a rate.
const RATE_FLOOR: f64 = 1e-14;

/// Rate over the last `window` sweeps before the error first falls to
/// `RATE_FLOOR · e0`. The rate is 0 when the first sweep already reaches
/// exactly zero.
fn rate_of(errors: &[f64], window: Option<usize>) -> Option<(f64, usize)> {
    if errors.len() < 2 {
        return None;
    }
    let floor = RATE_FLOOR * errors[0];
    let end = match errors.iter().position(|&e| e <= floor) {
        Some(cut) => cut.saturating_sub(1).max(1),
        None => errors.len() - 1,
    };
    let w = window.unwrap_or(10).min(end);
    let h = IterationHistory {
        errors_sq: errors[..=end].to_vec(),
        residuals: vec![0.0; end + 1],
        orders: None,
        final_iterate: Vec::new(),
    };
    empirical_rate(&h, w).ok().map(|r| (r, w))
}

fn write_csv(path: Option<&Path>, rows: &[Row], out: &mut dyn Write) -> CliResult<()> {
    match path {
        Some(p) => {
            let file = fs::File::create(p).with_context(|| format!("creating {}", p.display()))?;
            history::write_rows(std::io::BufWriter::new(file), rows)?;
        }
        None => history::write_rows(out, rows)?,
    }
    Ok(())
}

// ---------------------------------------------------------------- solve

fn solve(a: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    validate_run(&a.run)?;
    check_strategy(a.strategy, &a.run)?;
    check_sigma_used(&a.run, &[a.strategy])?;
    let p = load_problem(&a.run.input, a.run.method)?;
    check_consistency(&a.run, &p)?;
    let y0 = start_vector(&a.run, &p)?;
    let h = run_trial(&p, &a.run, a.strategy, &y0, 0)?;
    let rows = history::rows_from_history(a.strategy.name(), 0, &h);

    // With the CSV on stdout the summary goes to stderr.
    let mut stderr = std::io::stderr();
    let report: &mut dyn Write = if a.out.is_some() { &mut *out } else { &mut stderr };
    writeln!(report, "strategy: {}", a.strategy)?;
    writeln!(report, "method: {}", method_name(a.run.method))?;
    writeln!(report, "omega: {}", a.run.omega)?;
    writeln!(report, "sweeps: {}", h.sweeps())?;
    writeln!(report, "initial_error_sq: {:e}", h.errors_sq[0])?;
    writeln!(report, "final_error_sq: {:e}", h.errors_sq.last().unwrap())?;
    writeln!(report, "final_residual: {:e}", h.residuals.last().unwrap())?;
    match rate_of(&h.errors_sq, a.run.window) {
        Some((r, w)) => {
            writeln!(report, "empirical_rate: {r}")?;
            writeln!(report, "rate_window: {w}")?;
        }
        None => writeln!(report, "empirical_rate: n/a")?,
    }
    write_csv(a.out.as_deref(), &rows, out)
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Sor => "sor",
        Method::Kaczmarz => "kaczmarz",
    }
}

// ---------------------------------------------------------------- compare

fn theoretical_rate(report: &BoundReport, kind: StrategyKind) -> f64 {
    match kind {
        StrategyKind::Cyclic | StrategyKind::Fixed => report.rate_cyclic,
        StrategyKind::Shuffled => report.rate_shuffled,
        StrategyKind::Preshuffled => report.rate_preshuffled,
        StrategyKind::SingleStepRandom => report.rate_single_step,
    }
}

fn compare(a: &CompareArgs, out: &mut dyn Write) -> CliResult<()> {
    validate_run(&a.run)?;
    if a.trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if a.strategies.is_empty() {
        return Err(usage("--strategies must name at least one strategy"));
    }
    for &k in &a.strategies {
        check_strategy(k, &a.run)?;
    }
    check_sigma_used(&a.run, &a.strategies)?;
    let p = load_problem(&a.run.input, a.run.method)?;
    check_consistency(&a.run, &p)?;
    let y0 = start_vector(&a.run, &p)?;

    let mut rows = Vec::new();
    for &kind in &a.strategies {
        for trial in 0..a.trials {
            let h = run_trial(&p, &a.run, kind, &y0, trial)?;
            rows.extend(history::rows_from_history(kind.name(), trial, &h));
        }
    }
    write_csv(Some(&a.out), &rows, out)?;

    let constants = BoundConstants {
        c1: a.c1,
        ..Default::default()
    };
    let bounds = evaluate_bounds(&p.matrix, a.run.omega, constants);
    writeln!(out, "trials: {}", a.trials)?;
    writeln!(out, "omega: {}", a.run.omega)?;
    writeln!(out, "method: {}", method_name(a.run.method))?;
    writeln!(out, "seed: {}", a.run.seed.unwrap_or(0))?;
    if let Err(e) = &bounds {
        writeln!(out, "bounds: n/a ({e})")?;
    }
    let curves = history::mean_curves(&rows);
    for (name, mean) in &curves {
        let kind: StrategyKind = name.parse().expect("names written by this command");
        match rate_of(mean, a.run.window) {
            Some((r, _)) => writeln!(out, "rate.{name}.empirical: {r}")?,
            None => writeln!(out, "rate.{name}.empirical: n/a")?,
        }
        if let Ok(b) = &bounds {
            writeln!(out, "rate.{name}.bound: {}", theoretical_rate(b, kind))?;
        }
        writeln!(out, "final_mean_error_sq.{name}: {:e}", mean.last().copied().unwrap_or(0.0))?;
    }
    writeln!(out, "mean_error_sq:")?;
    let names: Vec<&str> = curves.iter().map(|(n, _)| n.as_str()).collect();
    writeln!(out, "sweep,{}", names.join(","))?;
    let len = curves.iter().map(|(_, m)| m.len()).max().unwrap_or(0);
    for k in 0..len {
        let cells: Vec<String> = curves
            .iter()
            .map(|(_, m)| m.get(k).map_or(String::new(), |v| format!("{v:e}")))
            .collect();
        writeln!(out, "{k},{}", cells.join(","))?;
    }
    if let Some(path) = &a.plot {
        let svg = plot::render(&plot::series_from_rows(&rows), "mean squared error per sweep", a.per_trial)?;
        fs::write(path, svg).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

// ---------------------------------------------------------------- analyze

fn analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.restarts == 0 || a.trials == 0 {
        return Err(usage("--restarts and --trials must be at least 1"));
    }
    let b = load_matrix(&a.input)?;
    let n = b.n();
    writeln!(out, "n: {n}")?;

    let summary = b.spectral_summary(DEFAULT_RANK_TOL);
    match &summary {
        Ok(s) => {
            writeln!(out, "spectral.lambda1: {}", s.lambda1)?;
            writeln!(out, "spectral.lambda_r: {}", s.lambda_r)?;
            writeln!(out, "spectral.rank: {}", s.rank)?;
            writeln!(out, "spectral.kappa_bar: {}", s.kappa_bar)?;
            writeln!(out, "spectral.norm: {}", s.spectral_norm)?;
        }
        Err(e) => {
            let values = b.eigenvalues(DEFAULT_EIGEN_TOL)?;
            writeln!(out, "spectral.psd: no ({e})")?;
            writeln!(out, "spectral.max_eigenvalue: {}", values[0])?;
            writeln!(out, "spectral.min_eigenvalue: {}", values[n - 1])?;
        }
    }

    let mut rng = RngState::new(a.seed);
    writeln!(out, "truncation.log_bound: {}", log_factor(n))?;
    match truncation_report(&b, a, &mut rng, out) {
        Ok(()) => {}
        Err(CliError::Runtime(e)) => writeln!(out, "truncation: n/a ({e})")?,
        Err(e) => return Err(e),
    }

    let report = verify_llt_norm_bounds(&b)?;
    writeln!(out, "llt.norm_e: {}", report.norm_e)?;
    writeln!(out, "llt.norm_b: {}", report.norm_b)?;
    writeln!(out, "llt.norm_h: {}", report.norm_h)?;
    writeln!(out, "llt.bound_general: {}", pass(report.general_ok && report.h_general_ok))?;
    match (report.psd_ok, report.h_psd_ok) {
        (Some(e_ok), Some(h_ok)) => writeln!(out, "llt.bound_psd: {}", pass(e_ok && h_ok))?,
        _ => writeln!(out, "llt.bound_psd: n/a (not PSD with unit diagonal)")?,
    }
    let closed = expected_llt_closed(&b);
    let oracle = if n <= MAX_ENUMERATION_N {
        let brute = expected_llt_bruteforce(&b)?;
        let scale = report.norm_b.powi(2).max(1.0);
        let cmp = compare_matrices(&brute, &closed, 1e-12 * scale)?;
        writeln!(out, "llt.oracle: bruteforce")?;
        writeln!(out, "llt.closed_form_max_diff: {:e}", cmp.max_abs_diff)?;
        writeln!(out, "llt.closed_form: {}", if cmp.agrees { "agrees" } else { "DISAGREES" })?;
        brute
    } else {
        writeln!(out, "llt.oracle: closed-form")?;
        closed
    };
    let formula = expected_llt_min_index_formula(&b);
    let scale = report.norm_b.powi(2).max(1.0);
    let cmp = compare_matrices(&oracle, &formula, 1e-12 * scale)?;
    if cmp.agrees {
        writeln!(out, "llt.min_index_formula: agrees")?;
    } else {
        let (i, j) = cmp.worst_entry;
        writeln!(out, "llt.min_index_formula: DISAGREES")?;
        writeln!(out, "llt.min_index_formula.entry: ({},{})", i + 1, j + 1)?;
        writeln!(out, "llt.min_index_formula.oracle: {}", fmt_complex(cmp.oracle_value))?;
        writeln!(out, "llt.min_index_formula.formula: {}", fmt_complex(cmp.candidate_value))?;
    }

    if summary.is_ok() && b.is_unit_diagonal() {
        let mode = if n <= EXACT_CONTRACTION_N {
            AveragingMode::Exact
        } else {
            AveragingMode::Sampled {
                trials: a.trials,
                seed: a.seed,
            }
        };
        let rho = expected_contraction(&b, a.omega, mode)?;
        writeln!(out, "contraction.omega: {}", a.omega)?;
        writeln!(
            out,
            "contraction.mode: {}",
            if mode == AveragingMode::Exact { "exact" } else { "sampled" }
        )?;
        writeln!(out, "contraction.expected: {rho}")?;
        match evaluate_bounds(&b, a.omega, BoundConstants::default()) {
            Ok(r) => writeln!(out, "contraction.bound_shuffled: {}", r.rate_shuffled)?,
            Err(e) => writeln!(out, "contraction.bound_shuffled: n/a ({e})")?,
        }
    }
    Ok(())
}

fn truncation_report(b: &HermitianMatrix, a: &AnalyzeArgs, rng: &mut RngState, out: &mut dyn Write) -> CliResult<()> {
    let stats = if b.n() <= MAX_ENUMERATION_N {
        min_truncation_exhaustive(b)?
    } else {
        min_truncation_heuristic(b, a.restarts, rng)?
    };
    writeln!(out, "truncation.method: {}", stats.method)?;
    writeln!(out, "truncation.samples: {}", stats.samples)?;
    writeln!(out, "truncation.ratio_identity: {}", stats.ratio_identity)?;
    writeln!(out, "truncation.min_ratio: {}", stats.min_ratio)?;
    writeln!(out, "truncation.argmin: {}", stats.argmin)?;
    writeln!(out, "truncation.mean_ratio: {}", stats.mean_ratio)?;
    writeln!(out, "truncation.max_ratio: {}", stats.max_ratio)?;
    if b.n() > MAX_ENUMERATION_N {
        let mc = expected_truncation_norm(b, a.trials, rng)?;
        writeln!(out, "truncation.montecarlo_mean: {}", mc.mean)?;
        writeln!(out, "truncation.montecarlo_std_error: {}", mc.std_error)?;
        writeln!(out, "truncation.montecarlo_samples: {}", mc.samples)?;
    }
    Ok(())
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}

fn fmt_complex(v: Complex64) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else {
        format!("{}{:+}i", v.re, v.im)
    }
}

// ---------------------------------------------------------------- bounds

fn bounds(a: &BoundsArgs, out: &mut dyn Write) -> CliResult<()> {
    let b = load_matrix(&a.input)?;
    let constants = BoundConstants {
        c0: a.c0,
        c1: a.c1,
        c2: a.c2,
    };
    let r = evaluate_bounds(&b, a.omega, constants)?;
    let mut fields: Vec<(&str, String)> = vec![
        ("omega", r.omega.to_string()),
        ("n", r.n.to_string()),
        ("rank", r.rank.to_string()),
        ("lambda1", r.lambda1.to_string()),
        ("lambda_r", r.lambda_r.to_string()),
        ("kappa_bar", r.kappa_bar.to_string()),
        ("log_factor", log_factor(r.n).to_string()),
        ("rate_cyclic", r.rate_cyclic.to_string()),
    ];
    if let Some(v) = r.rate_cyclic_small_rank {
        fields.push(("rate_cyclic_small_rank", v.to_string()));
    } else if a.c0.is_some() {
        fields.push(("rate_cyclic_small_rank", "n/a (rank < 2)".to_string()));
    }
    fields.extend([
        ("rate_single_step", r.rate_single_step.to_string()),
        ("rate_shuffled", r.rate_shuffled.to_string()),
        ("rate_preshuffled", r.rate_preshuffled.to_string()),
    ]);
    if let Some(c0) = r.constants.c0 {
        fields.push(("c0", c0.to_string()));
    }
    fields.push(("c1", r.constants.c1.to_string()));
    fields.push(("c2", r.constants.c2.to_string()));
    match a.format {
        Format::Text => {
            for (k, v) in &fields {
                writeln!(out, "{k}: {v}")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["key", "value"]).map_err(anyhow::Error::from)?;
            for (k, v) in &fields {
                w.write_record([*k, v.as_str()]).map_err(anyhow::Error::from)?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

// ---------------------------------------------------------------- plot

fn plot_cmd(a: &PlotArgs, out: &mut dyn Write) -> CliResult<()> {
    let file = fs::File::open(&a.input).with_context(|| format!("opening {}", a.input.display()))?;
    let rows = history::read_rows(file).with_context(|| format!("reading {}", a.input.display()))?;
    let svg = plot::render(&plot::series_from_rows(&rows), &a.title, a.per_trial)?;
    fs::write(&a.output, svg).with_context(|| format!("writing {}", a.output.display()))?;
    writeln!(out, "rows: {}", rows.len())?;
    writeln!(out, "output: {}", a.output.display())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_stops_at_rounding_floor() {
        let errors = [1.0, 0.5, 0.25, 0.125, 1e-15, 3e-16, 0.0];
        let (rate, w) = rate_of(&errors, None).unwrap();
        assert_eq!(w, 3);
        assert!((rate - 0.5).abs() < 1e-15);
        assert_eq!(rate_of(&[2.0, 0.0, 0.0], None), Some((0.0, 1)));
        assert_eq!(rate_of(&[2.0], None), None);
    }

    #[test]
    fn geometric_history_uses_full_window() {
        let errors: Vec<f64> = (0..30).map(|k| 0.9f64.powi(k)).collect();
        let (rate, w) = rate_of(&errors, Some(5)).unwrap();
        assert_eq!(w, 5);
        assert!((rate - 0.9).abs() < 1e-12);
    }
}
