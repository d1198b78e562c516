//! The spectrum, wavefunction and compare subcommands.

use dirac_susy::ladder::{
    excited_state_f, norm_squared, normalize, similarity_s, to_physical, upper_component_hatted,
    PolyExpFunction, SpinorRadialPair,
};
use dirac_susy::oracle::{self_consistent_energy, RadialGrid};
use dirac_susy::spectral::{
    k_hat, level_energy_closed, level_energy_implicit, Branch, Channel, Couplings,
    EnergyLevel,
};
use serde::Serialize;

use crate::config::{BasisSel, Normalization, OutputFormat, RunConfig};
use crate::AppError;

/// 17 significant digits, the canonical CSV float format.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn branch_name(branch: Branch) -> &'static str {
    match branch {
        Branch::Plus => "plus",
        Branch::Minus => "minus",
    }
}

#[derive(Debug, Serialize)]
struct LevelRow {
    n_r: u32,
    nhat: f64,
    branch: &'static str,
    energy: f64,
    energy_over_mass: f64,
    a_squared: f64,
    gamma: f64,
}

impl LevelRow {
    fn from_level(level: &EnergyLevel, mass: f64) -> Self {
        LevelRow {
            n_r: level.n_r,
            nhat: level.nhat,
            branch: branch_name(level.branch),
            energy: level.energy,
            energy_over_mass: level.energy / mass,
            a_squared: level.a_sq,
            gamma: level.gamma,
        }
    }
}

#[derive(Debug, Serialize)]
struct SpectrumOutput<'a> {
    meta: &'a RunConfig,
    levels: Vec<LevelRow>,
}

pub fn run_spectrum(config: &RunConfig) -> Result<(), AppError> {
    let couplings = Couplings::new(config.a1, config.a2, config.mass)?;
    let lambda = Channel::new(config.kappa, &couplings)?.lambda();
    let mut levels = Vec::new();
    for n_r in 0..=config.nr_max {
        for branch in config.branch.branches() {
            let level = level_energy_implicit(&couplings, lambda, n_r, branch)?;
            levels.push(LevelRow::from_level(&level, config.mass));
        }
    }
    match config.format {
        OutputFormat::Json => {
            let out = SpectrumOutput { meta: config, levels };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        OutputFormat::Csv => {
            println!("# config: {}", config.compact_json());
            println!("n_r,nhat,branch,energy,energy_over_mass,a_squared,gamma");
            for row in &levels {
                println!(
                    "{},{},{},{},{},{},{}",
                    row.n_r,
                    fmt_float(row.nhat),
                    row.branch,
                    fmt_float(row.energy),
                    fmt_float(row.energy_over_mass),
                    fmt_float(row.a_squared),
                    fmt_float(row.gamma)
                );
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct ComponentDesc {
    power: f64,
    rate: f64,
    coeffs: Vec<f64>,
    norm_before: f64,
}

#[derive(Debug, Serialize)]
struct WavefunctionOutput<'a> {
    meta: &'a RunConfig,
    level: LevelRow,
    basis: &'static str,
    sample_window: f64,
    lower: ComponentDesc,
    upper: Option<ComponentDesc>,
    samples: Vec<SampleRow>,
}

#[derive(Debug, Serialize)]
struct SampleRow {
    r: f64,
    f: f64,
    g: f64,
}

fn describe(f: &PolyExpFunction, norm_before: f64) -> ComponentDesc {
    ComponentDesc {
        power: f.power(),
        rate: f.rate(),
        coeffs: f.coeffs().to_vec(),
        norm_before,
    }
}

/// Build the requested level's radial pair in the requested basis and
/// normalization.
pub fn build_pair(config: &RunConfig) -> Result<(EnergyLevel, SpinorRadialPair), AppError> {
    let branch = config
        .branch
        .single()
        .ok_or_else(|| AppError::Usage("this command needs --branch plus or minus".into()))?;
    let couplings = Couplings::new(config.a1, config.a2, config.mass)?;
    let lambda = Channel::new(config.kappa, &couplings)?.lambda();
    let level = level_energy_implicit(&couplings, lambda, config.nr, branch)?;
    let q = couplings.coulomb_strength(level.energy);
    let f_hat = excited_state_f(config.nr, lambda, q)?;
    let khat = k_hat(level.energy, &couplings, lambda, config.kappa, config.c, config.d)?;
    let g_hat = upper_component_hatted(&f_hat, lambda, q, &khat)?;
    let pair = SpinorRadialPair::hatted(f_hat, g_hat);
    let pair = match config.basis {
        BasisSel::Hatted => pair,
        BasisSel::Physical => {
            let s = similarity_s(config.c, config.d, &couplings, lambda, config.kappa)?;
            to_physical(&pair, &s)?
        }
    };

    let pair = match config.normalization {
        Normalization::Component => {
            let (lower, _) = normalize(&pair.lower)?;
            let upper = if pair.upper.is_zero() {
                PolyExpFunction::zero()
            } else {
                normalize(&pair.upper)?.0
            };
            SpinorRadialPair { lower, upper, ..pair }
        }
        Normalization::Joint => {
            let total = norm_squared(&pair.lower)? + norm_squared(&pair.upper)?;
            let scale = 1.0 / total.sqrt();
            SpinorRadialPair {
                lower: pair.lower.scale(scale),
                upper: pair.upper.scale(scale),
                ..pair
            }
        }
    };
    Ok((level, pair))
}

pub fn run_wavefunction(config: &RunConfig) -> Result<(), AppError> {
    let couplings = Couplings::new(config.a1, config.a2, config.mass)?;
    let (level, pair) = build_pair(config)?;

    let lower_norm = norm_squared(&pair.lower)?.sqrt();
    let upper_norm = norm_squared(&pair.upper)?.sqrt();
    let window = config.r_max.unwrap_or(14.0 / pair.lower.rate());
    let mut samples = Vec::with_capacity(config.samples);
    for i in 1..=config.samples {
        let r = window * i as f64 / config.samples as f64;
        samples.push(SampleRow { r, f: pair.lower.eval(r), g: pair.upper.eval(r) });
    }

    let basis = match config.basis {
        BasisSel::Hatted => "hatted",
        BasisSel::Physical => "physical",
    };
    let lower_desc = describe(&pair.lower, lower_norm);
    let upper_desc =
        if pair.upper.is_zero() { None } else { Some(describe(&pair.upper, upper_norm)) };

    match config.format {
        OutputFormat::Json => {
            let out = WavefunctionOutput {
                meta: config,
                level: LevelRow::from_level(&level, couplings.mass()),
                basis,
                sample_window: window,
                lower: lower_desc,
                upper: upper_desc,
                samples,
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        OutputFormat::Csv => {
            println!("# config: {}", config.compact_json());
            println!(
                "# level: n_r={} branch={} energy={}",
                level.n_r,
                branch_name(level.branch),
                fmt_float(level.energy)
            );
            println!(
                "# lower: power={} rate={} coeffs={:?}",
                fmt_float(lower_desc.power),
                fmt_float(lower_desc.rate),
                lower_desc.coeffs
            );
            match &upper_desc {
                Some(u) => println!(
                    "# upper: power={} rate={} coeffs={:?}",
                    fmt_float(u.power),
                    fmt_float(u.rate),
                    u.coeffs
                ),
                None => println!("# upper: zero"),
            }
            println!("r,f,g");
            for s in &samples {
                println!("{},{},{}", fmt_float(s.r), fmt_float(s.f), fmt_float(s.g));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct CompareRow {
    n_r: u32,
    e_closed: f64,
    e_oracle: f64,
    abs_delta: f64,
    r_max: f64,
    points: usize,
}

#[derive(Debug, Serialize)]
struct CompareOutput<'a> {
    meta: &'a RunConfig,
    branch: &'static str,
    rows: Vec<CompareRow>,
}

pub fn run_compare(config: &RunConfig) -> Result<(), AppError> {
    let branch = config
        .branch
        .single()
        .ok_or_else(|| AppError::Usage("compare needs --branch plus or minus".into()))?;
    let couplings = Couplings::new(config.a1, config.a2, config.mass)?;
    let lambda = Channel::new(config.kappa, &couplings)?.lambda();
    let mut rows = Vec::new();
    for n_r in 0..=config.nr_max {
        let e_closed = level_energy_closed(&couplings, lambda + f64::from(n_r), branch)?;
        // grid sizing only; the oracle brackets by defect sign changes
        let q_scale = couplings.coulomb_strength(e_closed);
        if !(q_scale > 0.0) {
            return Err(dirac_susy::Error::UnboundState { q: q_scale }.into());
        }
        let default = RadialGrid::default_for(lambda, n_r, q_scale);
        let grid = RadialGrid::new(
            config.r_max.unwrap_or(default.r_max()),
            config.points.unwrap_or(default.points()),
        )?;
        let e_oracle = self_consistent_energy(&couplings, lambda, n_r, branch, &grid)?;
        rows.push(CompareRow {
            n_r,
            e_closed,
            e_oracle,
            abs_delta: (e_closed - e_oracle).abs(),
            r_max: grid.r_max(),
            points: grid.points(),
        });
    }
    match config.format {
        OutputFormat::Json => {
            let out = CompareOutput { meta: config, branch: branch_name(branch), rows };
            println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
        }
        OutputFormat::Csv => {
            println!("# config: {}", config.compact_json());
            println!("n_r,e_closed,e_oracle,abs_delta,r_max,points");
            for row in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    row.n_r,
                    fmt_float(row.e_closed),
                    fmt_float(row.e_oracle),
                    fmt_float(row.abs_delta),
                    fmt_float(row.r_max),
                    row.points
                );
            }
        }
    }
    Ok(())
}
