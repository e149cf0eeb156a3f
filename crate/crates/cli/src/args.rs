use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "partfn", version, about = "Exact partition-function coefficients, occupancy LPs and extremal checks")]
pub struct Cli {
    /// Print rationals as (lossy) floating-point numbers.
    #[arg(long, global = true)]
    pub float: bool,
    /// Worker threads for enumeration-driven commands.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coefficient vector of a graph.
    Poly {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "match")]
        kind: String,
    },
    /// Occupancy fraction, size distribution and free volumes.
    Obs {
        #[arg(long)]
        graph: String,
        #[arg(long, default_value = "match")]
        kind: String,
        /// Comma-separated fugacities; defaults to the standard grid.
        #[arg(long)]
        lambda: Option<String>,
        /// Also find λ with this mean size.
        #[arg(long)]
        tune: Option<String>,
    },
    /// Sampling distance between two graphs.
    Dist {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long, default_value_t = 6)]
        rmax: usize,
        /// Also compute the exact infinite sum.
        #[arg(long)]
        exact: bool,
    },
    /// Build and solve the occupancy LP.
    Lp {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value = "match")]
        kind: String,
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Zero-slack views and the stability constant.
        #[arg(long)]
        stability: bool,
        /// Check the stability inequality on this graph.
        #[arg(long)]
        graph: Option<String>,
        /// Print the LP in text form and stop.
        #[arg(long)]
        dump: bool,
    },
    /// Dominance hierarchy report for two coefficient vectors.
    Hier(HierArgs),
    /// Convolution powers, local limit comparison and the ratio lemma.
    Llt {
        #[command(subcommand)]
        command: LltCommand,
    },
    /// Exhaustive verification over a class of regular graphs.
    Verify(VerifyArgs),
    /// Transfer inequalities at concrete parameters.
    Audit(AuditArgs),
}

#[derive(Args, Debug)]
pub struct HierArgs {
    /// Comma-separated coefficients, or @file.json holding `poly` output.
    #[arg(long, requires = "zh", conflicts_with_all = ["g", "h"])]
    pub zg: Option<String>,
    #[arg(long)]
    pub zh: Option<String>,
    #[arg(long, requires = "h")]
    pub g: Option<String>,
    #[arg(long)]
    pub h: Option<String>,
    #[arg(long, default_value = "match")]
    pub kind: String,
}

#[derive(Subcommand, Debug)]
pub enum LltCommand {
    /// Size distribution of K copies of K_{d,d}.
    Power(BaseArgs),
    /// Deviation from the Gaussian density.
    Gnedenko {
        #[command(flatten)]
        base: BaseArgs,
        /// Emit the per-k table as CSV.
        #[arg(long)]
        csv: bool,
    },
    /// The ratio sandwich on H_{d,n}.
    Ratio {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 6)]
        rmax: usize,
        #[arg(long, default_value = "1/10")]
        delta: String,
        #[arg(long, default_value = "match")]
        kind: String,
        /// Also report the first n ≤ this bound where the sandwich holds at
        /// the same k/n.
        #[arg(long)]
        scan_to: Option<usize>,
    },
}

#[derive(Args, Debug)]
pub struct BaseArgs {
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value = "match")]
    pub kind: String,
    #[arg(long, default_value = "1")]
    pub lambda: String,
    /// Number of components.
    #[arg(long)]
    pub k: usize,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// coef, part, girth5 or bregman.
    pub statement: String,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "match")]
    pub kind: String,
    #[arg(long)]
    pub girth: Option<usize>,
    /// Inclusive range a..b of coefficient indices.
    #[arg(long)]
    pub k_range: Option<String>,
    /// Comma-separated fugacities for `part`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Check only this graph.
    #[arg(long)]
    pub graph6: Option<String>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long)]
    pub gprime: String,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    /// small1, small2 or large.
    #[arg(long)]
    pub case: String,
    #[arg(long, default_value = "match")]
    pub kind: String,
    #[arg(long, default_value = "1/3")]
    pub delta: String,
    #[arg(long, default_value = "1/10")]
    pub delta_prime: String,
}
