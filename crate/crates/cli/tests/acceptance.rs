//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits non-zero if any
//! criterion fails.

use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use secplan_cli::config::{Grid, D_GRID, LAMBDA_GRID};
use secplan_cli::sweep::{sweep_density, sweep_distance};
use secplan_core::specfun::{
    complete_gamma, inverse_upper_incomplete_gamma, upper_incomplete_gamma, NumericTolerance,
};
use secplan_core::{
    critical_distance, lambda_threshold, optimal_guard_radius, optimal_power_split, p_active,
    p_cov_an, p_cov_gz, p_sec_an, p_sec_gz, run_an_trials, run_gz_trials, selection_value,
    GuardZoneDesign, NoiseSplitDesign, SystemParams, TrialConfig,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn random_params(rng: &mut ChaCha8Rng) -> SystemParams {
    let alpha: f64 = rng.random_range(2.5..6.0);
    let p_t: f64 = rng.random_range(0.1..10.0);
    let beta_t = rng.random_range(0.1..5.0);
    let sigma2_p = rng.random_range(0.1..5.0);
    // keep the link noise exponent β_t σ_P² d^α / P_t in (0.05, 5) so that
    // coverage stays well clear of underflow
    let exponent: f64 = rng.random_range(0.05..5.0);
    let d = (exponent * p_t / (beta_t * sigma2_p)).powf(1.0 / alpha);
    let base = SystemParams {
        alpha,
        p_t,
        beta_t,
        beta_e: rng.random_range(0.1..5.0),
        epsilon: rng.random_range(0.5..0.99),
        sigma2_p,
        sigma2_s: rng.random_range(0.1..5.0),
        lambda_e: 0.0,
        d,
    };
    let threshold = lambda_threshold(&base).unwrap();
    base.with_lambda_e(threshold * rng.random_range(1.001..10.0))
}

fn threshold_reproduction() -> Check {
    let lambda = lambda_threshold(&SystemParams::default()).map_err(|e| e.to_string())?;
    ensure(
        (lambda - 0.0378).abs() <= 1e-4,
        format!("lambda_e* = {lambda}, expected 0.0378 +/- 1e-4"),
    )?;
    Ok(format!("lambda_e* = {lambda:.7}"))
}

fn binding_constraint() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for i in 0..100 {
        let p = random_params(&mut rng);
        let gz = optimal_guard_radius(&p).map_err(|e| format!("set {i}: {e}"))?;
        let an = optimal_power_split(&p).map_err(|e| format!("set {i}: {e}"))?;
        let s_gz = p_sec_gz(&p, &GuardZoneDesign { r_g: gz.parameter }).unwrap();
        let s_an = p_sec_an(
            &p,
            &NoiseSplitDesign {
                gamma: an.parameter,
            },
        )
        .unwrap();
        for (name, s) in [("guard zone", s_gz), ("noise split", s_an)] {
            let err = (s - p.epsilon).abs();
            worst = worst.max(err);
            ensure(
                err <= 1e-9,
                format!("set {i} {name}: p_sec = {s}, eps = {}", p.epsilon),
            )?;
        }
    }
    Ok(format!("100 sets, max |p_sec - eps| = {worst:.2e}"))
}

fn grid_optimality() -> Check {
    const N: usize = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst_cells: f64 = 0.0;
    for i in 0..20 {
        let p = random_params(&mut rng);
        let gz = optimal_guard_radius(&p).unwrap();
        let hi = 3.0 * gz.parameter;
        let cell = hi / N as f64;
        let (r_best, _) = (0..=N)
            .map(|k| k as f64 * cell)
            .filter(|&r| p_sec_gz(&p, &GuardZoneDesign { r_g: r }).unwrap() >= p.epsilon)
            .map(|r| (r, p_cov_gz(&p, &GuardZoneDesign { r_g: r }).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(format!("set {i}: no feasible guard radius on the grid"))?;
        let off = (r_best - gz.parameter).abs() / cell;
        worst_cells = worst_cells.max(off);
        ensure(
            off <= 1.0,
            format!("set {i}: grid r_g {r_best} vs r_g* {}", gz.parameter),
        )?;

        let an = optimal_power_split(&p).unwrap();
        let cell = 1.0 / N as f64;
        let (g_best, _) = (1..=N)
            .map(|k| k as f64 * cell)
            .filter(|&g| p_sec_an(&p, &NoiseSplitDesign { gamma: g }).unwrap() >= p.epsilon)
            .map(|g| (g, p_cov_an(&p, &NoiseSplitDesign { gamma: g }).unwrap()))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .ok_or(format!("set {i}: no feasible power split on the grid"))?;
        let off = (g_best - an.parameter).abs() / cell;
        worst_cells = worst_cells.max(off);
        ensure(
            off <= 1.0,
            format!("set {i}: grid gamma {g_best} vs gamma* {}", an.parameter),
        )?;
    }
    Ok(format!(
        "20 sets, optima within {worst_cells:.3} grid cells"
    ))
}

fn distance_selection() -> Check {
    let p = SystemParams::default();
    let grid = Grid::new(D_GRID.0, D_GRID.1, D_GRID.2).unwrap();
    let f: Vec<f64> = grid
        .points()
        .iter()
        .map(|&d| selection_value(&p, d).unwrap())
        .collect();
    let changes = f
        .windows(2)
        .filter(|w| (w[0] > 0.0) != (w[1] > 0.0))
        .count();
    ensure(
        changes == 1,
        format!("F changes sign {changes} times on the grid"),
    )?;

    let d_star = critical_distance(&p, None)
        .map_err(|e| e.to_string())?
        .d_star;
    let f_star = selection_value(&p, d_star).unwrap();
    ensure(f_star.abs() < 1e-8, format!("|F(d*)| = {f_star:e}"))?;

    let cfg = TrialConfig {
        n_trials: 1_000_000,
        seed: 2024,
        ..TrialConfig::default()
    };
    let sweep = sweep_distance(&p, &grid, Some(&cfg)).map_err(|e| e.to_string())?;
    let mut checked = 0;
    for row in &sweep.rows {
        if (row.d - d_star).abs() <= 0.05 {
            continue;
        }
        let (gz, an) = (row.mc_p_cov_gz.unwrap(), row.mc_p_cov_an.unwrap());
        let ci = row.mc_p_cov_gz_half_width.unwrap() + row.mc_p_cov_an_half_width.unwrap();
        let f = row.f_value.unwrap();
        ensure(
            (gz - an > 0.0) == (f > 0.0),
            format!(
                "d = {}: MC difference {} disagrees with F = {f}",
                row.d,
                gz - an
            ),
        )?;
        ensure(
            (gz - an).abs() > ci,
            format!("d = {}: MC difference {} within CI {ci}", row.d, gz - an),
        )?;
        checked += 1;
    }
    Ok(format!(
        "one sign change, d* = {d_star:.6}, |F(d*)| = {:.1e}, MC signs agree at {checked} points",
        f_star.abs()
    ))
}

fn density_curve() -> Check {
    let grid = Grid::new(LAMBDA_GRID.0, LAMBDA_GRID.1, LAMBDA_GRID.2).unwrap();
    let sweep = sweep_density(&SystemParams::default(), &grid).map_err(|e| e.to_string())?;
    let roots: Vec<f64> = sweep
        .rows
        .iter()
        .map(|r| {
            r.d_star
                .ok_or(format!("lambda_e = {}: {}", r.lambda_e, r.status))
        })
        .collect::<Result<_, _>>()?;
    ensure(
        roots.windows(2).all(|w| w[1] > w[0]),
        format!("d* not strictly increasing: {roots:?}"),
    )?;
    Ok(format!(
        "d* rises from {:.4} to {:.4} over {} densities",
        roots[0],
        roots[roots.len() - 1],
        roots.len()
    ))
}

struct Point {
    params: SystemParams,
    r_g: f64,
    gamma: f64,
}

fn agreement_points() -> Vec<Point> {
    let base = SystemParams::default();
    vec![
        Point {
            params: base,
            r_g: 1.0,
            gamma: 0.571_603_8,
        },
        Point {
            params: SystemParams {
                lambda_e: 0.2,
                d: 0.6,
                ..base
            },
            r_g: 0.8,
            gamma: 0.7,
        },
        Point {
            params: SystemParams {
                alpha: 3.0,
                beta_e: 0.5,
                lambda_e: 0.05,
                d: 0.8,
                ..base
            },
            r_g: 1.2,
            gamma: 0.8,
        },
        Point {
            params: SystemParams {
                alpha: 5.0,
                p_t: 2.0,
                beta_t: 1.0,
                sigma2_s: 0.5,
                lambda_e: 0.3,
                d: 1.2,
                ..base
            },
            r_g: 0.6,
            gamma: 0.6,
        },
        Point {
            params: SystemParams {
                alpha: 3.5,
                epsilon: 0.8,
                beta_e: 2.0,
                lambda_e: 0.15,
                d: 0.5,
                ..base
            },
            r_g: 0.9,
            gamma: 0.9,
        },
    ]
}

fn analytic_agreement() -> Check {
    let mut worst: f64 = 0.0;
    let mut control_gap = f64::INFINITY;
    for (i, pt) in agreement_points().iter().enumerate() {
        let p = &pt.params;
        let cfg = TrialConfig {
            n_trials: 1_000_000,
            seed: 100 + i as u64,
            ..TrialConfig::default()
        };
        let gz_design = GuardZoneDesign { r_g: pt.r_g };
        let an_design = NoiseSplitDesign { gamma: pt.gamma };
        let gz = run_gz_trials(p, &gz_design, &cfg).map_err(|e| format!("point {i}: {e}"))?;
        let an = run_an_trials(p, &an_design, &cfg).map_err(|e| format!("point {i}: {e}"))?;
        let checks = [
            ("p_active", gz.p_active, p_active(p, &gz_design).unwrap()),
            (
                "p_cov guard zone",
                gz.p_cov,
                p_cov_gz(p, &gz_design).unwrap(),
            ),
            (
                "p_sec guard zone",
                gz.p_sec,
                p_sec_gz(p, &gz_design).unwrap(),
            ),
            (
                "p_cov noise split",
                an.p_cov,
                p_cov_an(p, &an_design).unwrap(),
            ),
            (
                "p_sec noise split",
                an.p_sec,
                p_sec_an(p, &an_design).unwrap(),
            ),
        ];
        for (name, est, closed) in checks {
            let widths = (est.mean - closed).abs() / est.half_width;
            worst = worst.max(widths);
            ensure(
                est.agrees_with(closed, 3.0),
                format!(
                    "point {i} {name}: MC {} +/- {} vs closed form {closed}",
                    est.mean, est.half_width
                ),
            )?;
        }
        // negative control: ignoring the activity condition must be detectable
        let closed = p_sec_gz(p, &gz_design).unwrap();
        let control = gz.p_sec_unconditioned;
        let widths = (control.mean - closed).abs() / control.half_width;
        control_gap = control_gap.min(widths);
        ensure(
            !control.agrees_with(closed, 3.0),
            format!(
                "point {i}: unconditioned estimate {} +/- {} agrees with {closed}",
                control.mean, control.half_width
            ),
        )?;
    }
    Ok(format!(
        "25 estimates within {worst:.2} half-widths, unconditioned control off by >= {control_gap:.1}"
    ))
}

fn special_functions() -> Check {
    let tol = NumericTolerance::default();
    let within = |got: f64, want: f64| (got - want).abs() <= tol.rel_tol * want.abs() + tol.abs_tol;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut count = 0;
    for i in 0..=300 {
        let x = 0.1 * i as f64;
        let g = upper_incomplete_gamma(1.0, x, tol).unwrap();
        ensure(within(g, (-x).exp()), format!("Gamma(1, {x}) = {g}"))?;
        count += 1;
    }
    for i in 0..=200 {
        let x = 0.05 * i as f64;
        let g = upper_incomplete_gamma(0.5, x, tol).unwrap();
        let want = sqrt_pi * libm::erfc(x.sqrt());
        ensure(within(g, want), format!("Gamma(1/2, {x}) = {g} vs {want}"))?;
        count += 1;
    }
    for ai in 1..=20 {
        let a = 0.05 * ai as f64;
        let full = complete_gamma(a, tol).unwrap();
        let mut prev = f64::INFINITY;
        for xi in 0..=400 {
            let x = 0.1 * xi as f64;
            let g = upper_incomplete_gamma(a, x, tol).unwrap();
            ensure(
                g < prev || (g == 0.0 && prev == 0.0),
                format!("not decreasing at a={a}, x={x}"),
            )?;
            ensure(
                (0.0..=full).contains(&g),
                format!("Gamma({a}, {x}) = {g} outside [0, {full}]"),
            )?;
            if g > 0.0 && x <= 30.0 {
                let back = inverse_upper_incomplete_gamma(a, g, tol).unwrap();
                ensure(
                    (back - x).abs() <= 10.0 * tol.rel_tol * x.max(1.0),
                    format!("round trip a={a}, x={x} gave {back}"),
                )?;
            }
            prev = g;
            count += 1;
        }
    }
    Ok(format!("{count} evaluations within rel {:e}", tol.rel_tol))
}

fn run_bin(args: &[&str], threads: Option<&str>) -> Result<Vec<u8>, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_secplan"));
    cmd.args(args);
    match threads {
        Some(n) => cmd.env("RAYON_NUM_THREADS", n),
        None => cmd.env_remove("RAYON_NUM_THREADS"),
    };
    let out = cmd.output().map_err(|e| e.to_string())?;
    ensure(
        out.status.success(),
        format!("{args:?} exited with {}", out.status),
    )?;
    Ok(out.stdout)
}

fn determinism() -> Check {
    let sweeps: [&[&str]; 2] = [
        &["sweep-d", "--trials", "50000", "--seed", "7"],
        &["sweep-lambda"],
    ];
    for args in sweeps {
        let reference = run_bin(args, None)?;
        ensure(
            run_bin(args, None)? == reference,
            format!("{args:?}: rerun differs"),
        )?;
        for threads in ["1", "4"] {
            ensure(
                run_bin(args, Some(threads))? == reference,
                format!("{args:?}: RAYON_NUM_THREADS={threads} differs"),
            )?;
        }
    }
    Ok(
        "sweep-d (with MC) and sweep-lambda CSV byte-identical across reruns and thread counts"
            .into(),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("density threshold", threshold_reproduction),
        ("binding secrecy constraint", binding_constraint),
        ("optimality against grid search", grid_optimality),
        ("selection over link distance", distance_selection),
        ("critical distance over density", density_curve),
        ("closed form vs Monte-Carlo", analytic_agreement),
        ("special functions", special_functions),
        ("deterministic sweeps", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {reason} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
