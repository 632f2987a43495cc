//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sympolar",
    version,
    about = "Lagrangian polar duality for centered ellipsoids"
)]
pub struct Cli {
    /// Override a tolerance, e.g. `--tol spd=1e-12` (repeatable).
    #[arg(long = "tol", value_name = "KEY=VALUE", global = true)]
    pub tol: Vec<String>,
    /// Pretty-print the report with this many spaces per level.
    #[arg(long = "json-indent", value_name = "WIDTH", global = true)]
    pub json_indent: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

/// Optional transverse pair; the coordinate pair `(ℓ_X, ℓ_P)` by default.
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// Basis of the first plane (`plane-basis` document).
    #[arg(long = "plane-l", value_name = "FILE")]
    pub plane_l: Option<String>,
    /// Basis of the second plane (`plane-basis` document).
    #[arg(long = "plane-lp", value_name = "FILE")]
    pub plane_lp: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArg {
    #[arg(long, env = "SYMPOLAR_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Onto {
    X,
    P,
    First,
    Second,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlaneSide {
    First,
    Second,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symplectic eigenvalues of a 2n×2n SPD matrix.
    Spectrum {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Williamson normal form M = Sᵀ diag(Λ, Λ) S.
    Williamson {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Symplectic capacity of {Mz·z ≤ 1}, optionally its support value.
    Capacity {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Option<Vec<f64>>,
    },
    /// Polar dual and Mahler volume of {Ax·x ≤ 1} on ℓ_X, optionally its image under a linear map.
    Dual {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long = "map", value_name = "FILE")]
        map: Option<String>,
    },
    /// Lagrangian polar dual of an ellipsoid on the first plane, carried to the second.
    Lagdual {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Orthogonal or Lagrangian projection of {Mz·z ≤ 1}.
    Project {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_enum)]
        onto: Onto,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// John ellipsoid of the product of an ellipsoid and its Lagrangian polar.
    John {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Randomized projection-inclusion harness.
    Thm1 {
        /// Fixed ellipsoid; random symplectic unit balls when absent.
        #[arg(long, value_name = "FILE")]
        omega: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long = "max-dof", default_value_t = 3)]
        max_dof: usize,
        #[arg(long, default_value_t = 0.5)]
        spread: f64,
    },
    /// Symplectic ball projecting to an ellipsoid and to its Lagrangian polar.
    Reconstruct {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Decide whether (X, Y) on a transverse pair is a dual pair.
    Pairtest {
        #[arg(long, value_name = "FILE")]
        x: String,
        #[arg(long, value_name = "FILE")]
        y: String,
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Capacity of {Ax·x ≤ 1} × {Bp·p ≤ 1}.
    ProductCapacity {
        #[arg(long, value_name = "FILE")]
        a: String,
        #[arg(long, value_name = "FILE")]
        b: String,
    },
    /// Quantum admissibility of a covariance matrix.
    Certify {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Hardy test for decay bounds (A, B), or the sub-Gaussian Wigner test for M.
    Hardy {
        #[arg(long, value_name = "FILE", requires = "b", conflicts_with = "m")]
        a: Option<String>,
        #[arg(long, value_name = "FILE", requires = "a")]
        b: Option<String>,
        #[arg(long, value_name = "FILE", required_unless_present = "a")]
        m: Option<String>,
    },
    /// Simultaneous diagonalization LᵀAL = L⁻¹BL⁻ᵀ = Λ.
    Jointdiag {
        #[arg(long, value_name = "FILE")]
        a: String,
        #[arg(long, value_name = "FILE")]
        b: String,
    },
    /// Wigner function of a Gaussian state (A, B) or of a Gaussian with covariance Σ.
    Wigner {
        #[arg(long, value_name = "FILE", conflicts_with = "sigma")]
        a: Option<String>,
        #[arg(long, value_name = "FILE", requires = "a")]
        b: Option<String>,
        #[arg(
            long,
            value_name = "FILE",
            required_unless_present = "a",
            requires = "z"
        )]
        sigma: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Option<Vec<f64>>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            requires = "sigma"
        )]
        zbar: Option<Vec<f64>>,
    },
    /// Eigendecomposition, PSD margin and square roots of a symmetric matrix.
    Roots {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Symplecticity residual, J, and optionally ω(z, w).
    Symcheck {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            requires = "w"
        )]
        z: Option<Vec<f64>>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            requires = "z"
        )]
        w: Option<Vec<f64>>,
    },
    /// Lagrangian plane from a basis or from (A, B), optionally against a second plane.
    Plane {
        #[arg(long, value_name = "FILE", conflicts_with_all = ["a", "b"])]
        basis: Option<String>,
        #[arg(long, value_name = "FILE", requires = "b")]
        a: Option<String>,
        #[arg(
            long,
            value_name = "FILE",
            requires = "a",
            required_unless_present = "basis"
        )]
        b: Option<String>,
        #[arg(long, value_name = "FILE")]
        other: Option<String>,
    },
    /// Sampling oracles and random generators.
    #[command(subcommand)]
    Oracle(OracleCommand),
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Sampled test of p ∈ X° against the exact dual form.
    Polar {
        #[arg(long = "in", value_name = "FILE")]
        input: String,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        candidate: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Sampled support function of a Lagrangian projection.
    Shadow {
        #[arg(long, value_name = "FILE")]
        omega: String,
        #[arg(long, value_enum)]
        onto: PlaneSide,
        #[arg(long, default_value_t = 8)]
        directions: usize,
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Trapezoid quadrature of the Wigner integral of a one-dimensional state.
    Quadrature {
        #[arg(long, value_name = "FILE")]
        a: String,
        #[arg(long, value_name = "FILE")]
        b: Option<String>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        z: Vec<f64>,
        #[arg(long = "half-width")]
        half_width: Option<f64>,
        #[arg(long, default_value_t = 2001)]
        points: usize,
    },
    /// Random SPD matrix with eigenvalues in [1/cap, cap].
    Spd {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10.0)]
        cap: f64,
        #[command(flatten)]
        seed: SeedArg,
    },
    /// Random symplectic matrix.
    Symplectic {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        spread: f64,
        #[command(flatten)]
        seed: SeedArg,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum { .. } => "spectrum",
            Command::Williamson { .. } => "williamson",
            Command::Capacity { .. } => "capacity",
            Command::Dual { .. } => "dual",
            Command::Lagdual { .. } => "lagdual",
            Command::Project { .. } => "project",
            Command::John { .. } => "john",
            Command::Thm1 { .. } => "thm1",
            Command::Reconstruct { .. } => "reconstruct",
            Command::Pairtest { .. } => "pairtest",
            Command::ProductCapacity { .. } => "product-capacity",
            Command::Certify { .. } => "certify",
            Command::Hardy { .. } => "hardy",
            Command::Jointdiag { .. } => "jointdiag",
            Command::Wigner { .. } => "wigner",
            Command::Roots { .. } => "roots",
            Command::Symcheck { .. } => "symcheck",
            Command::Plane { .. } => "plane",
            Command::Oracle(OracleCommand::Polar { .. }) => "oracle polar",
            Command::Oracle(OracleCommand::Shadow { .. }) => "oracle shadow",
            Command::Oracle(OracleCommand::Quadrature { .. }) => "oracle quadrature",
            Command::Oracle(OracleCommand::Spd { .. }) => "oracle spd",
            Command::Oracle(OracleCommand::Symplectic { .. }) => "oracle symplectic",
        }
    }
}
