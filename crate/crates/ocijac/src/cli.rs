use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "ocijac", version, about = "Jacobian rings of open complete intersections")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct ConfigArg {
    /// Configuration file (`n`, `field`, `F`, `G`).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension and standard monomials of B_q(ell).
    #[command(allow_negative_numbers = true)]
    Dim {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        q: i64,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        json: bool,
    },
    /// Table of log Hodge numbers h^{p,q} with p + q = n - r.
    #[command(allow_negative_numbers = true)]
    Hodge {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long, default_value_t = 0)]
        ell: i64,
        /// Add the hyperplane class in the middle (only changes s = 0, ell = 0).
        #[arg(long)]
        full: bool,
        #[arg(long)]
        json: bool,
    },
    /// The socle piece and its trace functional.
    Trace {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        json: bool,
    },
    /// Pairing matrix h_p(ell) and, with --check, its verdict.
    #[command(allow_negative_numbers = true)]
    Pairing {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        check: bool,
        #[arg(long)]
        json: bool,
    },
    /// Kernel of eta on B_0(d + e - n - 1) against the trivial forms.
    Eta {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        json: bool,
    },
    /// Middle homology of the Koszul complex for a subspace V of B_1(0).
    #[command(allow_negative_numbers = true)]
    Koszul {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        ell: i64,
        #[arg(long)]
        q: i64,
        /// Codimension of a random V (requires --seed).
        #[arg(long, requires = "seed", conflicts_with = "subspace")]
        codim: Option<usize>,
        #[arg(long, requires = "codim")]
        seed: Option<u64>,
        /// Explicit basis of V, one integer vector per line.
        #[arg(long, value_name = "PATH", required_unless_present = "codim")]
        subspace: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Kernel of multiplication by W on B_q(d + e - n - 1).
    #[command(allow_negative_numbers = true)]
    Nabla {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        p: i64,
        #[arg(long)]
        q: i64,
        /// Basis of W (default: all of B_1(0)).
        #[arg(long, value_name = "PATH")]
        subspace: Option<PathBuf>,
        #[arg(long = "cS", default_value_t = 0)]
        c_s: i64,
        #[arg(long)]
        json: bool,
    },
    /// Lower bound for the codimension of the Noether-Lefschetz locus.
    #[command(allow_negative_numbers = true)]
    Nlbound {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: usize,
        #[arg(long)]
        s: usize,
        /// Comma-separated degrees of F.
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        d: Vec<u32>,
        /// Comma-separated degrees of G.
        #[arg(long, value_delimiter = ',', value_name = "LIST")]
        e: Vec<u32>,
        #[arg(long = "cS", default_value_t = 0)]
        c_s: i64,
        #[arg(long)]
        json: bool,
    },
    /// Codimension of the plane curves of degree d containing a line.
    #[command(allow_negative_numbers = true)]
    Sigma {
        #[arg(long)]
        d: i64,
        #[arg(long)]
        json: bool,
    },
    /// Smoothness and transversality diagnostic via the socle dimension.
    Smoothcheck {
        #[command(flatten)]
        config: ConfigArg,
        #[arg(long)]
        json: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Dim { .. } => "dim",
            Command::Hodge { .. } => "hodge",
            Command::Trace { .. } => "trace",
            Command::Pairing { .. } => "pairing",
            Command::Eta { .. } => "eta",
            Command::Koszul { .. } => "koszul",
            Command::Nabla { .. } => "nabla",
            Command::Nlbound { .. } => "nlbound",
            Command::Sigma { .. } => "sigma",
            Command::Smoothcheck { .. } => "smoothcheck",
        }
    }

    pub fn json(&self) -> bool {
        match self {
            Command::Dim { json, .. }
            | Command::Hodge { json, .. }
            | Command::Trace { json, .. }
            | Command::Pairing { json, .. }
            | Command::Eta { json, .. }
            | Command::Koszul { json, .. }
            | Command::Nabla { json, .. }
            | Command::Nlbound { json, .. }
            | Command::Sigma { json, .. }
            | Command::Smoothcheck { json, .. } => *json,
        }
    }

    pub fn config(&self) -> Option<&ConfigArg> {
        match self {
            Command::Dim { config, .. }
            | Command::Hodge { config, .. }
            | Command::Trace { config, .. }
            | Command::Pairing { config, .. }
            | Command::Eta { config, .. }
            | Command::Koszul { config, .. }
            | Command::Nabla { config, .. }
            | Command::Smoothcheck { config, .. } => Some(config),
            Command::Nlbound { .. } | Command::Sigma { .. } => None,
        }
    }
}
