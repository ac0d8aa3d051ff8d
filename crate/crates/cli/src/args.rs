use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "tame", version, about = "Valuations, tame covers and their cohomology over F_q(t)")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Field size, a prime power <= 81.
    #[arg(long, global = true, env = "TAME_Q")]
    pub q: Option<u32>,
    /// Half-width of the starting exponent window.
    #[arg(long, global = true, env = "TAME_WINDOW", default_value_t = 16)]
    pub window: i64,
    /// Random samples per check (homotopy sweeps, split witnesses).
    #[arg(long, global = true, default_value_t = 16)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decompose a place in an extension given by a polynomial in T.
    ClassifyExt {
        /// Base field such as GF(4); defaults to GF(q).
        #[arg(long)]
        field: Option<String>,
        #[arg(long)]
        place: String,
        #[arg(long)]
        poly: String,
    },
    /// Decide whether a cover belongs to a site along boundary valuations.
    Admissible {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "tame")]
        site: String,
        /// Comma-separated valuations; composites as `inf;t`.
        #[arg(long)]
        boundary: String,
    },
    /// Integrality of a tensor element: threshold criterion and oracle.
    Integral {
        #[arg(long, default_value = "t")]
        place: String,
        /// Generators `m=2:alpha=t`, several joined by `;`.
        #[arg(long)]
        kummer: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        element: String,
    },
    /// Character matrix of (Z/m)^(n-1) and its inverse.
    Vandermonde {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
    },
    /// Window homology and homotopy check of the integral Amitsur complex.
    Amitsur {
        #[arg(long, default_value = "t")]
        place: String,
        #[arg(long)]
        kummer: String,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
    /// Laurent cover of a place-set pair along f.
    Laurent {
        #[arg(long)]
        places: String,
        #[arg(long)]
        f: String,
    },
    /// Čech complex of O⁺ on a chart cover preset.
    Cech {
        #[arg(long)]
        space: String,
    },
    /// Truncated cokernel of the Artin–Schreier map on a ring.
    Coker {
        #[arg(long)]
        ring: String,
        #[arg(long = "N", id = "N")]
        n: usize,
        /// Corrupt the canonical count, to exercise the mismatch path.
        #[arg(long, hide = true)]
        perturb_canonical: bool,
    },
    /// Tame cohomology table with Z/p coefficients.
    Cohomology {
        #[arg(long)]
        space: String,
    },
    /// Compare an open piece with its ambient space.
    Purity {
        #[arg(long, default_value = "gm-in-a1")]
        instance: String,
    },
    /// Compare Spec F_q with the affine line over it.
    Homotopy,
    /// Decide whether a valuation is a point of Spa(A, A⁺).
    ClassifyPoint {
        #[arg(long)]
        pair: String,
        #[arg(long)]
        point: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ClassifyExt { .. } => "classify-ext",
            Command::Admissible { .. } => "admissible",
            Command::Integral { .. } => "integral",
            Command::Vandermonde { .. } => "vandermonde",
            Command::Amitsur { .. } => "amitsur",
            Command::Laurent { .. } => "laurent",
            Command::Cech { .. } => "cech",
            Command::Coker { .. } => "coker",
            Command::Cohomology { .. } => "cohomology",
            Command::Purity { .. } => "purity",
            Command::Homotopy => "homotopy",
            Command::ClassifyPoint { .. } => "classify-point",
        }
    }
}
