//! Flag parsing and the resolved run configuration that every output
//! artifact echoes.

use clap::{Args, ValueEnum};
use dirac_susy::spectral::Branch;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BranchSel {
    Plus,
    Minus,
    Both,
}

impl BranchSel {
    pub fn branches(self) -> Vec<Branch> {
        match self {
            BranchSel::Plus => vec![Branch::Plus],
            BranchSel::Minus => vec![Branch::Minus],
            BranchSel::Both => vec![Branch::Plus, Branch::Minus],
        }
    }

    /// The single branch this selection denotes, if it is single.
    pub fn single(self) -> Option<Branch> {
        match self {
            BranchSel::Plus => Some(Branch::Plus),
            BranchSel::Minus => Some(Branch::Minus),
            BranchSel::Both => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    /// Unit L2 norm per nonzero component.
    Component,
    /// Unit integral of G^2 + F^2.
    Joint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisSel {
    Hatted,
    Physical,
}

/// Flags shared by all subcommands. Defaults make `spectrum` with no
/// flags emit the equal-coupling workhorse channel.
#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Vector Coulomb strength (potential -a1/r)
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub a1: f64,

    /// Lorentz scalar Coulomb strength (mass term -a2/r)
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub a2: f64,

    /// Particle mass (natural units)
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,

    /// Dirac quantum number (nonzero integer)
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    pub kappa: i32,

    /// Highest radial quantum number in tables
    #[arg(long = "nr-max", default_value_t = 3)]
    pub nr_max: u32,

    /// Radial quantum number for single-level commands
    #[arg(long = "nr", default_value_t = 0)]
    pub nr: u32,

    /// Energy branch: particle (plus), antiparticle root (minus), or both
    #[arg(long, value_enum, default_value_t = BranchSel::Plus)]
    pub branch: BranchSel,

    /// Output format on stdout
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,

    /// Radial window override: oracle box for compare, sample window for
    /// wavefunction
    #[arg(long = "rmax")]
    pub r_max: Option<f64>,

    /// Interior grid points for the finite-difference oracle
    #[arg(long)]
    pub points: Option<usize>,

    /// Number of wavefunction samples
    #[arg(long, default_value_t = 64)]
    pub samples: usize,

    /// Wavefunction normalization convention
    #[arg(long, value_enum, default_value_t = Normalization::Component)]
    pub normalization: Normalization,

    /// Radial basis for wavefunction output
    #[arg(long, value_enum, default_value_t = BasisSel::Physical)]
    pub basis: BasisSel,

    /// Similarity transform parameter c
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub c: f64,

    /// Similarity transform parameter d
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub d: f64,
}

/// Fully resolved configuration, embedded verbatim in every artifact.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub a1: f64,
    pub a2: f64,
    pub mass: f64,
    pub kappa: i32,
    pub nr_max: u32,
    pub nr: u32,
    pub branch: BranchSel,
    pub format: OutputFormat,
    pub r_max: Option<f64>,
    pub points: Option<usize>,
    pub samples: usize,
    pub normalization: Normalization,
    pub basis: BasisSel,
    pub c: f64,
    pub d: f64,
}

impl From<&CommonArgs> for RunConfig {
    fn from(args: &CommonArgs) -> Self {
        RunConfig {
            a1: args.a1,
            a2: args.a2,
            mass: args.mass,
            kappa: args.kappa,
            nr_max: args.nr_max,
            nr: args.nr,
            branch: args.branch,
            format: args.format,
            r_max: args.r_max,
            points: args.points,
            samples: args.samples,
            normalization: args.normalization,
            basis: args.basis,
            c: args.c,
            d: args.d,
        }
    }
}

impl RunConfig {
    /// Compact one-line JSON used in CSV comment headers.
    pub fn compact_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
