//! The verify subcommand: runs the crate's defining identities at the
//! requested configuration and reports one line per check.

use dirac_susy::ladder::{
    apply_a_minus, apply_a_plus, coeffwise_residual, eigen_equation_residual, excited_state_f,
    ground_state_f, remainder_r, remainder_sum, upper_component_hatted, v_minus, v_plus,
};
use dirac_susy::spectral::{
    effective_lambda, ground_state_energy, k_hat, level_energy_closed, level_energy_implicit,
    Branch, Couplings,
};
use dirac_susy::Error;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{OutputFormat, RunConfig};
use crate::AppError;

/// Test hook: controlled perturbations for exercising failure paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Perturb the shape-invariance remainder by 1e-6 inside the
    /// commutator check.
    Remainder,
}

impl Fault {
    pub fn parse(s: &str) -> Result<Self, AppError> {
        match s {
            "remainder" => Ok(Fault::Remainder),
            other => Err(AppError::Usage(format!("unknown fault kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Serialize)]
struct Check {
    name: &'static str,
    status: Status,
    residual: Option<f64>,
    tolerance: f64,
    note: Option<String>,
}

impl Check {
    fn graded(name: &'static str, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Check { name, status, residual: Some(residual), tolerance, note: None }
    }

    fn skipped(name: &'static str, tolerance: f64, note: String) -> Self {
        Check { name, status: Status::Skip, residual: None, tolerance, note: Some(note) }
    }
}

#[derive(Debug, Serialize)]
struct VerifyOutput<'a> {
    meta: &'a RunConfig,
    checks: Vec<Check>,
    passed: bool,
}

fn shape_invariance_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc0ffee);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let r = rng.gen_range(1e-3..50.0);
        let lambda = rng.gen_range(0.3..5.0);
        let q = rng.gen_range(0.1..3.0);
        let plus = v_plus(r, lambda, q).expect("r > 0");
        let shifted = v_minus(r, lambda + 1.0, q).expect("r > 0");
        let remainder = q * q / (lambda * lambda) - q * q / ((lambda + 1.0) * (lambda + 1.0));
        worst = worst.max((plus - shifted - remainder).abs() / plus.abs().max(1.0));
    }
    Check::graded("shape-invariance", worst, 1e-12)
}

/// Levels of the configured channel with their Coulomb strengths, or the
/// reason the channel has none.
struct ChannelLevels {
    lambda: f64,
    per_level: Vec<(u32, f64, f64)>, // (n_r, energy, q)
}

fn channel_levels(config: &RunConfig, max_n: u32) -> Result<ChannelLevels, String> {
    let couplings = Couplings::new(config.a1, config.a2, config.mass)
        .map_err(|e| e.to_string())?;
    let lambda = match effective_lambda(config.kappa, &couplings) {
        Ok(l) => l,
        Err(e) => return Err(e.to_string()),
    };
    let mut per_level = Vec::new();
    for n_r in 0..=max_n {
        let level = match level_energy_implicit(&couplings, lambda, n_r, Branch::Plus) {
            Ok(l) => l,
            Err(e) => return Err(e.to_string()),
        };
        let q = couplings.coulomb_strength(level.energy);
        if !(q > 0.0) {
            return Err(format!("level n_r={n_r} has non-positive Coulomb strength {q}"));
        }
        per_level.push((n_r, level.energy, q));
    }
    Ok(ChannelLevels { lambda, per_level })
}

fn annihilation_check(levels: &ChannelLevels) -> Check {
    let (_, _, q0) = levels.per_level[0];
    let f0 = ground_state_f(levels.lambda, q0).expect("binding channel");
    let residual = match apply_a_minus(&f0, levels.lambda, q0) {
        Ok(g) => g.max_abs_coeff() / f0.max_abs_coeff(),
        Err(_) => f64::INFINITY,
    };
    Check::graded("annihilation", residual, 1e-14)
}

fn eigen_equation_check(config: &RunConfig, levels: &ChannelLevels) -> Check {
    let couplings = Couplings::new(config.a1, config.a2, config.mass).expect("validated");
    let lambda = levels.lambda;
    let mut worst = 0.0f64;
    for &(n_r, energy, q) in &levels.per_level {
        let f = match excited_state_f(n_r, lambda, q) {
            Ok(f) => f,
            Err(_) => return Check::graded("ladder-eigen-equation", f64::INFINITY, 1e-10),
        };
        let a_sq = dirac_susy::spectral::a_squared(energy, &couplings, lambda);
        let eig = a_sq * config.mass * config.mass / (lambda * lambda);
        worst = worst.max(eigen_equation_residual(&f, lambda, q, eig));
    }
    Check::graded("ladder-eigen-equation", worst, 1e-10)
}

fn intertwining_check(config: &RunConfig, levels: &ChannelLevels) -> Check {
    let couplings = Couplings::new(config.a1, config.a2, config.mass).expect("validated");
    let lambda = levels.lambda;
    let mut worst = 0.0f64;
    for &(n_r, energy, q) in levels.per_level.iter().filter(|(n, _, _)| *n >= 1) {
        let run = || -> Result<f64, Error> {
            let kh = k_hat(energy, &couplings, lambda, config.kappa, config.c, config.d)?;
            let f = excited_state_f(n_r, lambda, q)?;
            let g = upper_component_hatted(&f, lambda, q, &kh)?;
            let forward = apply_a_plus(&g, lambda, q)?;
            let res_fwd = coeffwise_residual(&forward, &f.scale(kh.kminus));
            let back = apply_a_minus(&f, lambda, q)?;
            let res_back = coeffwise_residual(&back, &g.scale(-kh.kplus));
            Ok(res_fwd.max(res_back))
        };
        worst = worst.max(run().unwrap_or(f64::INFINITY));
    }
    Check::graded("intertwining", worst, 1e-9)
}

fn commutator_check(levels: &ChannelLevels, fault: Option<Fault>) -> Check {
    // evaluate at coordinates above the remainder pole
    let base = levels.lambda + 1.0;
    let (_, _, q0) = levels.per_level[0];
    let mut worst = 0.0f64;
    for n in 0..=2u32 {
        let coordinate = base + f64::from(n);
        let run = || -> Result<f64, Error> {
            let f = excited_state_f(n, coordinate, q0)?;
            let raised = apply_a_plus(&f, coordinate - 1.0, q0)?;
            let fwd = apply_a_minus(&raised, coordinate - 1.0, q0)?;
            let lowered = apply_a_minus(&f, coordinate, q0)?;
            let bwd = apply_a_plus(&lowered, coordinate, q0)?;
            let mut r_val = remainder_r(coordinate, q0)?;
            if fault == Some(Fault::Remainder) {
                r_val *= 1.0 + 1e-6;
            }
            let commutator = fwd.sub(&bwd)?;
            Ok(coeffwise_residual(&commutator, &f.scale(r_val)))
        };
        worst = worst.max(run().unwrap_or(f64::INFINITY));
    }
    Check::graded("commutator", worst, 1e-10)
}

fn branch_consistency_check() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xbadc0de);
    let kappas = [1, -1, 2, -2, 3, -3];
    let mut worst = 0.0f64;
    let mut checked = 0;
    while checked < 60 {
        let a1 = rng.gen_range(0.0..0.9);
        let a2 = rng.gen_range(0.0..0.9);
        let kappa = kappas[rng.gen_range(0..kappas.len())];
        let n_r = rng.gen_range(0..=5u32);
        let couplings = Couplings::new(a1, a2, 1.0).expect("finite");
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        for branch in [Branch::Plus, Branch::Minus] {
            let implicit = level_energy_implicit(&couplings, lambda, n_r, branch)
                .expect("binding channel")
                .energy;
            let closed = level_energy_closed(&couplings, lambda + f64::from(n_r), branch)
                .expect("binding channel");
            worst = worst.max(((implicit - closed) / closed.abs().max(1e-3)).abs());
        }
        checked += 1;
    }
    Check::graded("branch-consistency", worst, 1e-10)
}

fn ground_identity_check(config: &RunConfig) -> Check {
    let couplings = match Couplings::new(config.a1, config.a2, config.mass) {
        Ok(c) => c,
        Err(e) => return Check::skipped("ground-state-identity", 1e-12, e.to_string()),
    };
    let mut worst = 0.0f64;
    let mut any = false;
    for kappa in [1, -1, 2, -2, 3, -3] {
        let Ok(lambda) = effective_lambda(kappa, &couplings) else { continue };
        any = true;
        for branch in [Branch::Plus, Branch::Minus] {
            let (Ok(g), Ok(c)) = (
                ground_state_energy(&couplings, lambda, branch),
                level_energy_closed(&couplings, lambda, branch),
            ) else {
                return Check::graded("ground-state-identity", f64::INFINITY, 1e-12);
            };
            worst = worst.max(((g - c) / g.abs().max(1e-3)).abs());
        }
    }
    if !any {
        return Check::skipped("ground-state-identity", 1e-12, "no binding kappa".into());
    }
    Check::graded("ground-state-identity", worst, 1e-12)
}

fn reductions_check() -> Check {
    let mut worst = 0.0f64;
    for n_r in 0..=3u32 {
        // pure vector: E = nhat / sqrt(nhat^2 + a1^2)
        for a1 in [0.5, 0.007_297_352_569_3] {
            let couplings = Couplings::new(a1, 0.0, 1.0).expect("finite");
            let lambda = effective_lambda(-1, &couplings).expect("binding");
            let nhat = lambda + f64::from(n_r);
            let e = level_energy_closed(&couplings, nhat, Branch::Plus).expect("bound");
            let want = nhat / (nhat * nhat + a1 * a1).sqrt();
            worst = worst.max(((e - want) / want).abs());
        }
        // pure scalar: E = +- sqrt(1 - a2^2/nhat^2)
        let couplings = Couplings::new(0.0, 0.5, 1.0).expect("finite");
        let lambda = effective_lambda(-1, &couplings).expect("binding");
        let nhat = lambda + f64::from(n_r);
        for branch in [Branch::Plus, Branch::Minus] {
            let e = level_energy_closed(&couplings, nhat, branch).expect("bound");
            let want = branch.sign() * (1.0 - 0.25 / (nhat * nhat)).sqrt();
            worst = worst.max(((e - want) / want).abs());
        }
        // equal couplings: E = (nhat^2 - a^2)/(nhat^2 + a^2)
        let couplings = Couplings::new(0.5, 0.5, 1.0).expect("finite");
        let lambda = effective_lambda(-1, &couplings).expect("binding");
        let nhat = lambda + f64::from(n_r);
        let e = level_energy_closed(&couplings, nhat, Branch::Plus).expect("bound");
        let want = (nhat * nhat - 0.25) / (nhat * nhat + 0.25);
        worst = worst.max(((e - want) / want).abs());
    }
    Check::graded("reductions", worst, 1e-12)
}

fn a_squared_checks(config: &RunConfig, levels: &ChannelLevels) -> (Check, Check) {
    let couplings = Couplings::new(config.a1, config.a2, config.mass).expect("validated");
    let lambda = levels.lambda;
    let m2 = config.mass * config.mass;

    let (_, e0, _) = levels.per_level[0];
    let ground_residual =
        dirac_susy::spectral::a_squared(e0, &couplings, lambda).abs() / m2.max(1.0);
    let ground = Check::graded("a-squared-ground", ground_residual, 1e-10);

    let mut worst = 0.0f64;
    for &(n_r, energy, q) in levels.per_level.iter().filter(|(n, _, _)| *n >= 1) {
        let a_sq = dirac_susy::spectral::a_squared(energy, &couplings, lambda);
        let lhs = a_sq * m2 / (lambda * lambda);
        match remainder_sum(lambda, q, n_r) {
            Ok(sum) => worst = worst.max(((lhs - sum) / sum).abs()),
            Err(_) => worst = f64::INFINITY,
        }
    }
    let telescoped = Check::graded("a-squared-telescoped", worst, 1e-10);
    (ground, telescoped)
}

pub fn run_verify(config: &RunConfig, fault: Option<Fault>) -> Result<(), AppError> {
    let mut checks = vec![
        shape_invariance_check(),
        branch_consistency_check(),
        ground_identity_check(config),
        reductions_check(),
    ];

    match channel_levels(config, 3) {
        Ok(levels) => {
            checks.push(annihilation_check(&levels));
            checks.push(eigen_equation_check(config, &levels));
            checks.push(intertwining_check(config, &levels));
            checks.push(commutator_check(&levels, fault));
            let (ground, telescoped) = a_squared_checks(config, &levels);
            checks.push(ground);
            checks.push(telescoped);
        }
        Err(reason) => {
            for name in [
                "annihilation",
                "ladder-eigen-equation",
                "intertwining",
                "commutator",
                "a-squared-ground",
                "a-squared-telescoped",
            ] {
                checks.push(Check::skipped(name, f64::NAN, reason.clone()));
            }
        }
    }

    let passed = checks.iter().all(|c| c.status != Status::Fail);

    match config.format {
        OutputFormat::Json => {
            let out = VerifyOutput { meta: config, checks, passed };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
            if !out.passed {
                return Err(AppError::VerifyFailed);
            }
        }
        OutputFormat::Csv => {
            let mut counts = (0usize, 0usize, 0usize);
            for check in &checks {
                match check.status {
                    Status::Pass => {
                        counts.0 += 1;
                        println!(
                            "PASS {:<24} residual={:.3e} tol={:.1e}",
                            check.name,
                            check.residual.unwrap_or(f64::NAN),
                            check.tolerance
                        );
                    }
                    Status::Fail => {
                        counts.1 += 1;
                        println!(
                            "FAIL {:<24} residual={:.3e} tol={:.1e}",
                            check.name,
                            check.residual.unwrap_or(f64::NAN),
                            check.tolerance
                        );
                    }
                    Status::Skip => {
                        counts.2 += 1;
                        println!(
                            "SKIP {:<24} {}",
                            check.name,
                            check.note.as_deref().unwrap_or("")
                        );
                    }
                }
            }
            println!("verify: {} passed, {} failed, {} skipped", counts.0, counts.1, counts.2);
            if counts.1 > 0 {
                return Err(AppError::VerifyFailed);
            }
        }
    }
    Ok(())
}
