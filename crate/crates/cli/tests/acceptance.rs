//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p shufflesor-cli --test acceptance -- --nocapture`.
//! Lines go straight to stderr so they also show up without `--nocapture`.

use std::io::Write as _;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use shufflesor::analysis::{
    compare_matrices, evaluate_bounds, expected_contraction, expected_llt_bruteforce, expected_llt_closed,
    expected_llt_min_index_formula, hermitian_norm, log_factor, min_truncation_exhaustive, min_truncation_heuristic,
    verify_llt_norm_bounds, AveragingMode,
};
use shufflesor::linalg::{norm, sub};
use shufflesor::problems::{fan_example, random_normalized_factor};
use shufflesor::solver::{empirical_rate, kaczmarz_sweep, run_kaczmarz, run_solver, sor_sweep};
use shufflesor::{
    c64, derive_seed, Complex64, DenseMatrix, HermitianMatrix, OrderingStrategy, RngState, SolverConfig,
    DEFAULT_EIGEN_TOL, DEFAULT_NORM_TOL, DEFAULT_RANK_TOL,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(label: &str, started: Instant, outcome: &Outcome) {
    let status = if outcome.pass { "PASS" } else { "FAIL" };
    let line = format!(
        "{status} {label}: {} ({:.2}s)\n",
        outcome.detail,
        started.elapsed().as_secs_f64()
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
}

fn random_hermitian(n: usize, complex: bool, rng: &mut RngState) -> HermitianMatrix {
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = c64(rng.standard_normal(), 0.0);
        for j in 0..i {
            let im = if complex { rng.standard_normal() } else { 0.0 };
            let v = c64(rng.standard_normal(), im);
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    HermitianMatrix::new(m).unwrap()
}

fn random_vector(n: usize, complex: bool, rng: &mut RngState) -> Vec<Complex64> {
    (0..n)
        .map(|_| c64(rng.standard_normal(), if complex { rng.standard_normal() } else { 0.0 }))
        .collect()
}

/// Half general Hermitian, half PSD unit-diagonal; real and complex; n = 2..=7.
fn llt_corpus() -> Vec<HermitianMatrix> {
    let mut rng = RngState::new(0xACCE_0001);
    let mut corpus = Vec::new();
    for k in 0..240 {
        let n = 2 + k % 6;
        let complex = (k / 6) % 2 == 1;
        if k % 2 == 0 {
            corpus.push(random_hermitian(n, complex, &mut rng));
        } else {
            let m = 1 + rng.uniform_index(2 * n);
            corpus.push(random_normalized_factor(n, m, complex, &mut rng).unwrap().matrix);
        }
    }
    corpus
}

fn criterion_1(corpus: &[HermitianMatrix]) -> Outcome {
    let started = Instant::now();
    let mut worst = 0.0f64;
    for b in corpus {
        let norm_b = hermitian_norm(b).unwrap();
        let brute = expected_llt_bruteforce(b).unwrap();
        let closed = expected_llt_closed(b);
        let diff = brute.max_abs_diff(&closed).unwrap();
        worst = worst.max(diff / (norm_b * norm_b));
    }
    let secs = started.elapsed().as_secs_f64();
    Outcome {
        pass: worst <= 1e-12 && secs < 60.0,
        detail: format!(
            "closed-form E[LL*] vs all n! orderings on {} matrices, max diff / |B|^2 = {worst:.2e} (tol 1e-12), {secs:.1}s (limit 60s)",
            corpus.len()
        ),
    }
}

fn criterion_2(corpus: &[HermitianMatrix]) -> Outcome {
    let mut general_worst = 0.0f64;
    let mut psd_worst = 0.0f64;
    let mut psd_count = 0;
    let mut pass = true;
    for b in corpus {
        let r = verify_llt_norm_bounds(b).unwrap();
        pass &= r.pass();
        let nb2 = r.norm_b * r.norm_b;
        general_worst = general_worst.max(r.norm_e / nb2);
        if r.psd_unit_diagonal {
            psd_count += 1;
            psd_worst = psd_worst.max(r.norm_e / nb2);
        }
    }
    let h = 0.5;
    let b = HermitianMatrix::from_real(2, &[1.0, h, h, 1.0]).unwrap();
    let formula = compare_matrices(&expected_llt_bruteforce(&b).unwrap(), &expected_llt_min_index_formula(&b), 1e-12)
        .unwrap();
    let flagged = !formula.agrees
        && formula.worst_entry == (0, 0)
        && (formula.oracle_value.re - 0.125).abs() < 1e-15
        && formula.candidate_value.norm() < 1e-15;
    Outcome {
        pass: pass && psd_count > 0 && flagged,
        detail: format!(
            "max |E|/|B|^2 = {general_worst:.4} (<= 4) over {}, {psd_worst:.4} (< 1) over {psd_count} PSD unit-diagonal; \
             min-index formula at n=2 h=0.5 entry (1,1): oracle {:.4} vs formula {:.4}, flagged={flagged}",
            corpus.len(),
            formula.oracle_value.re,
            formula.candidate_value.re
        ),
    }
}

fn criterion_3() -> Outcome {
    let mut pass = true;
    let mut worst_gram = 0.0f64;
    let mut worst_summary = 0.0f64;
    for m in [1usize, 2, 4, 8, 16] {
        let p = fan_example(m).unwrap();
        let a = p.factor.as_ref().unwrap();
        let gram = a.adjoint().matmul(a).unwrap();
        let target = DenseMatrix::identity(2).scale(m as f64);
        worst_gram = worst_gram.max(gram.max_abs_diff(&target).unwrap());
        let s = p.matrix.spectral_summary(DEFAULT_RANK_TOL).unwrap();
        let d = (s.lambda1 - m as f64).abs().max((s.kappa_bar - 1.0).abs());
        worst_summary = worst_summary.max(d);
        pass &= s.rank == 2;
    }
    Outcome {
        pass: pass && worst_gram <= 1e-12 && worst_summary <= 1e-8,
        detail: format!(
            "fan m in {{1,2,4,8,16}}: max |A*A - mI| = {worst_gram:.2e} (tol 1e-12), \
             max |(lambda1, kappa) - (m, 1)| = {worst_summary:.2e} (tol 1e-8), rank 2"
        ),
    }
}

fn criterion_4() -> Outcome {
    let started = Instant::now();
    let p = fan_example(4).unwrap();
    let a = p.factor.as_ref().unwrap();
    let x0 = a.adjoint_mul_vec(&p.default_start()).unwrap();
    let config = SolverConfig {
        omega: 1.0,
        max_sweeps: 40,
        target_error_sq: 0.0,
        ..SolverConfig::default()
    };
    let h = run_kaczmarz(a, &p.rhs, &x0, p.xbar.as_ref().unwrap(), &config, &OrderingStrategy::Cyclic).unwrap();
    let ratios: Vec<f64> = (5..40).map(|k| h.errors_sq[k + 1] / h.errors_sq[k]).collect();
    let spread = ratios.iter().fold(0.0f64, |acc, r| acc.max((r - ratios[0]).abs()));
    let rate = empirical_rate(&h, 35).unwrap();
    let base = (std::f64::consts::PI / 8.0).cos();
    let exponent = rate.ln() / base.ln();
    let nearest = exponent.round();
    let secs = started.elapsed().as_secs_f64();
    let matches = |p: f64| (rate - base.powf(p)).abs() <= 1e-6;
    Outcome {
        pass: spread <= 1e-6 && (exponent - nearest).abs() < 1e-6 && nearest == 16.0 && secs < 1.0,
        detail: format!(
            "fan m=4 cyclic omega=1: per-sweep ratio {rate:.16} constant to {spread:.1e} over sweeps 5-40; \
             measured exponent of cos(pi/8) = {exponent:.6}; cos^8 = {:.6} ({}), cos^16 = {:.6} ({}); {secs:.3}s",
            base.powi(8),
            if matches(8.0) { "matches" } else { "differs" },
            base.powi(16),
            if matches(16.0) { "matches" } else { "differs" },
        ),
    }
}

fn criterion_5() -> Outcome {
    let mut rng = RngState::new(0xACCE_0005);
    let mut worst = 0.0f64;
    let strategies = ["cyclic", "shuffled", "preshuffled", "single-step-random"];
    for inst in 0..20 {
        let n = 2 + rng.uniform_index(15);
        let m = 1 + rng.uniform_index(16);
        let complex = inst % 2 == 1;
        let p = random_normalized_factor(n, m, complex, &mut rng).unwrap();
        let a = p.factor.as_ref().unwrap();
        let strategy = match strategies[inst % 4] {
            "cyclic" => OrderingStrategy::Cyclic,
            "shuffled" => OrderingStrategy::Shuffled,
            "preshuffled" => OrderingStrategy::preshuffled(n, &mut rng).unwrap(),
            _ => OrderingStrategy::SingleStepRandom,
        };
        let omega = [0.5, 1.0, 1.5][inst % 3];
        let mut y = random_vector(n, complex, &mut rng);
        let mut x = a.adjoint_mul_vec(&y).unwrap();
        let mut order_rng = RngState::new(derive_seed(0xACCE_0005, inst as u64));
        for _ in 0..30 {
            let order = strategy.sweep_order(n, &mut order_rng).unwrap();
            sor_sweep(&p.matrix, &p.rhs, &mut y, omega, &order).unwrap();
            kaczmarz_sweep(a, &p.rhs, &mut x, omega, &order).unwrap();
            let ay = a.adjoint_mul_vec(&y).unwrap();
            worst = worst.max(norm(&sub(&ay, &x)));
        }
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("20 random instances, 30 sweeps each, max |A*y_k - x_k| = {worst:.2e} (tol 1e-10)"),
    }
}

fn criterion_6() -> Outcome {
    let mut rng = RngState::new(0xACCE_0006);
    let trials = 500usize;
    let sweeps = 50usize;
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    let mut worst_margin = f64::NEG_INFINITY;
    for inst in 0..10 {
        let n = 16;
        let m = 32 + 2 * inst;
        let p = random_normalized_factor(n, m, inst % 2 == 1, &mut rng).unwrap();
        let y0 = vec![c64(0.0, 0.0); n];
        for (w_idx, omega) in [0.5, 1.0, 1.5].into_iter().enumerate() {
            let rho = evaluate_bounds(&p.matrix, omega, Default::default()).unwrap().rate_shuffled;
            let mut sum = vec![0.0; sweeps + 1];
            let mut sum_sq = vec![0.0; sweeps + 1];
            let base = derive_seed(0xACCE_0006, (inst * 3 + w_idx) as u64);
            for t in 0..trials {
                let config = SolverConfig {
                    omega,
                    max_sweeps: sweeps,
                    target_error_sq: 0.0,
                    seed: derive_seed(base, t as u64),
                    record_orders: false,
                };
                let h = run_solver(&p.matrix, &p.rhs, &y0, &p.ybar, &config, &OrderingStrategy::Shuffled).unwrap();
                for k in 0..=sweeps {
                    let e = h.errors_sq[k.min(h.errors_sq.len() - 1)];
                    sum[k] += e;
                    sum_sq[k] += e * e;
                }
            }
            let e0 = sum[0] / trials as f64;
            for k in 0..=sweeps {
                let mean = sum[k] / trials as f64;
                let var = (sum_sq[k] / trials as f64 - mean * mean).max(0.0) * trials as f64 / (trials - 1) as f64;
                let se = (var / trials as f64).sqrt();
                let bound = rho.powi(k as i32) * e0;
                let slack = 3.0 * se + 1e-12 * e0;
                pass &= mean <= bound + slack;
                worst_margin = worst_margin.max((mean - bound - slack) / e0);
                if k > 0 {
                    worst_ratio = worst_ratio.max(mean / bound);
                }
            }
        }
    }
    Outcome {
        pass,
        detail: format!(
            "10 instances n=16 x omega in {{0.5,1,1.5}} x {trials} shuffled trials: \
             max mean(e_k)/(rho^k e_0) = {worst_ratio:.3e} for k in 1..={sweeps}, worst margin {worst_margin:.2e} e_0 (must be <= 0)"
        ),
    }
}

fn criterion_7() -> Outcome {
    let mut rng = RngState::new(0xACCE_0007);
    let mut pass = true;
    let mut worst = 0.0f64;
    let mut count = 0;
    for inst in 0..15 {
        let n = 3 + inst % 5;
        let m = 1 + rng.uniform_index(2 * n);
        let p = random_normalized_factor(n, m, inst % 2 == 0, &mut rng).unwrap();
        for omega in [0.5, 1.0, 1.5] {
            let rho = evaluate_bounds(&p.matrix, omega, Default::default()).unwrap().rate_shuffled;
            let c = expected_contraction(&p.matrix, omega, AveragingMode::Exact).unwrap();
            pass &= c <= rho + 1e-12;
            worst = worst.max(c / rho);
            count += 1;
        }
    }
    Outcome {
        pass,
        detail: format!("{count} (instance, omega) pairs with n <= 7: max exact E-contraction / rho_shuffled = {worst:.4} (<= 1)"),
    }
}

fn criterion_8() -> Outcome {
    let mut rng = RngState::new(0xACCE_0008);
    let mut pass = true;
    let mut worst_ratio = 0.0f64;
    let mut worst_cross = 0.0f64;
    for inst in 0..100 {
        let n = 2 + rng.uniform_index(23);
        let m = 1 + rng.uniform_index(2 * n);
        let b = random_normalized_factor(n, m, inst % 2 == 1, &mut rng).unwrap().matrix;
        let norm_b = b.as_dense().spectral_norm(DEFAULT_NORM_TOL);
        let cap = log_factor(n);
        for _ in 0..20 {
            let sigma = rng.permutation(n);
            let l = b.permuted_strict_lower(&sigma).unwrap();
            let power = l.spectral_norm(DEFAULT_NORM_TOL);
            let llt = HermitianMatrix::new(l.mul_adjoint(&l).unwrap()).unwrap();
            let jacobi = llt.eigenvalues(DEFAULT_EIGEN_TOL).unwrap()[0].max(0.0).sqrt();
            let ratio = power.max(jacobi) / norm_b;
            pass &= ratio <= cap * (1.0 + 1e-12);
            worst_ratio = worst_ratio.max(ratio / cap);
            if jacobi > 0.0 {
                worst_cross = worst_cross.max((power - jacobi).abs() / jacobi);
            }
        }
    }
    pass &= worst_cross <= 1e-6;
    Outcome {
        pass,
        detail: format!(
            "100 instances x 20 orderings: max |L_sigma| / (floor(log2 2n)/2 |B|) = {worst_ratio:.4} (<= 1), \
             power vs Jacobi relative gap {worst_cross:.1e} (tol 1e-6)"
        ),
    }
}

fn criterion_9() -> Outcome {
    let mut rng = RngState::new(0xACCE_0009);
    let total = 50;
    let mut matched = 0;
    let mut beaten = 0;
    for inst in 0..total {
        let n = 3 + inst % 6;
        let m = 1 + rng.uniform_index(2 * n);
        let b = random_normalized_factor(n, m, inst % 2 == 1, &mut rng).unwrap().matrix;
        let exact = min_truncation_exhaustive(&b).unwrap();
        let heur = min_truncation_heuristic(&b, 20, &mut rng).unwrap();
        if heur.min_ratio < exact.min_ratio {
            beaten += 1;
        }
        if (heur.min_ratio - exact.min_ratio).abs() <= 1e-9 * exact.min_ratio {
            matched += 1;
        }
    }
    let fraction = matched as f64 / total as f64;
    Outcome {
        pass: fraction >= 0.8 && beaten == 0,
        detail: format!(
            "{total} instances n in 3..=8: heuristic (20 restarts) matches exhaustive minimum in {matched} ({:.0}%, need >= 80%), below it in {beaten}",
            100.0 * fraction
        ),
    }
}

fn run_cli(args: &[&str]) {
    let status = Command::new(env!("CARGO_BIN_EXE_shufflesor"))
        .args(args)
        .stdout(std::process::Stdio::null())
        .status()
        .expect("spawn shufflesor");
    assert!(status.success(), "shufflesor {args:?} failed: {status}");
}

fn compare_into(problem: &Path, out: &Path) -> (Vec<u8>, Vec<u8>) {
    let csv = out.join("history.csv");
    let svg = out.join("plot.svg");
    run_cli(&[
        "compare",
        "--dir",
        problem.to_str().unwrap(),
        "--trials",
        "5",
        "--sweeps",
        "30",
        "--seed",
        "11",
        "--out",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
        "--per-trial",
    ]);
    (std::fs::read(csv).unwrap(), std::fs::read(svg).unwrap())
}

fn criterion_10() -> Outcome {
    let problem = tempfile::tempdir().unwrap();
    run_cli(&[
        "generate",
        "--kind",
        "lowrank",
        "--n",
        "8",
        "--r",
        "2",
        "--seed",
        "7",
        "--out-dir",
        problem.path().to_str().unwrap(),
    ]);
    let first = tempfile::tempdir().unwrap();
    let second = tempfile::tempdir().unwrap();
    let (csv_a, svg_a) = compare_into(problem.path(), first.path());
    let (csv_b, svg_b) = compare_into(problem.path(), second.path());
    let rows = csv_a.iter().filter(|&&c| c == b'\n').count();
    Outcome {
        pass: csv_a == csv_b && svg_a == svg_b && rows > 1,
        detail: format!(
            "two compare runs (seed 11, 5 trials, 4 strategies): CSV {} bytes / {rows} lines identical={}, SVG {} bytes identical={}",
            csv_a.len(),
            csv_a == csv_b,
            svg_a.len(),
            svg_a == svg_b
        ),
    }
}

fn fan_bound_values() -> Outcome {
    let p = fan_example(4).unwrap();
    let r = evaluate_bounds(&p.matrix, 1.0, Default::default()).unwrap();
    let expected = [(r.rate_cyclic, 1.0 - 4.0 / 81.0), (r.rate_shuffled, 0.84), (r.rate_single_step, 0.00390625)];
    let worst = expected.iter().fold(0.0f64, |acc, (got, want)| acc.max((got - want).abs()));
    Outcome {
        pass: worst <= 1e-12,
        detail: format!(
            "fan m=4 omega=1: cyclic {:.16}, shuffled {:.16}, single-step {:.16}; max deviation from hand values {worst:.1e} (tol 1e-12)",
            r.rate_cyclic, r.rate_shuffled, r.rate_single_step
        ),
    }
}

#[test]
fn acceptance_criteria() {
    let mut failures = Vec::new();
    let mut check = |label: &str, f: &dyn Fn() -> Outcome| {
        let started = Instant::now();
        let outcome = f();
        report(label, started, &outcome);
        if !outcome.pass {
            failures.push(label.to_string());
        }
    };
    let _ = std::io::stderr().write_all(b"\n");
    let corpus = llt_corpus();
    check("criterion 1 (E[LL*] closed form)", &|| criterion_1(&corpus));
    check("criterion 2 (E[LL*] norm bounds)", &|| criterion_2(&corpus));
    check("criterion 3 (fan spectrum)", &criterion_3);
    check("criterion 4 (fan cyclic rate)", &criterion_4);
    check("criterion 5 (SOR/Kaczmarz equivalence)", &criterion_5);
    check("criterion 6 (shuffled expected decay)", &criterion_6);
    check("criterion 7 (exact expected contraction)", &criterion_7);
    check("criterion 8 (triangular truncation)", &criterion_8);
    check("criterion 9 (best-ordering heuristic)", &criterion_9);
    check("criterion 10 (CLI reproducibility)", &criterion_10);
    check("fan bound values", &fan_bound_values);
    assert!(failures.is_empty(), "failed: {failures:?}");
}

