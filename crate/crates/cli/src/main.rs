mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use graphzip::mdl::PrecisionFamily;
use graphzip::{Class, CoderSpec, Family, Mode};

use report::Usage;

/// Lossless compression of graph structure and MDL graphical model
/// selection.
#[derive(Parser, Debug)]
#[command(name = "graphzip", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Encode an edge list into a bitstream.
    Compress(CompressArgs),
    /// Decode a bitstream into an edge list of an isomorphic graph.
    Decompress(DecompressArgs),
    /// Learn coder statistics from a directory of edge lists.
    Train(TrainArgs),
    /// Codelength table: one row per graph, one column per coder.
    Benchmark(BenchmarkArgs),
    /// Choose a graphical model for a data matrix by total codelength.
    Select(SelectArgs),
    /// Write synthetic graphs or Gaussian data.
    Generate {
        #[command(subcommand)]
        what: GenerateCommand,
    },
}

#[derive(Args, Debug, Clone)]
struct CoderArgs {
    /// iid, triangle, common-neighbor or four-motif.
    #[arg(long, default_value = "iid")]
    coder: Family,
    /// 1 (node by node) or 2 (level by level with degrees).
    #[arg(long, default_value = "1")]
    class: Class,
    /// universal (adaptive) or learned (requires --stats).
    #[arg(long, default_value = "universal")]
    mode: Mode,
    /// Trained statistics for learned mode.
    #[arg(long)]
    stats: Option<PathBuf>,
}

impl CoderArgs {
    fn spec(&self) -> CoderSpec {
        CoderSpec::new(self.coder, self.class, self.mode)
    }
}

#[derive(Args, Debug)]
struct CompressArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    coder: CoderArgs,
    /// Pick tree vertices at random with this seed instead of by smallest id.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DecompressArgs {
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TrainArgs {
    /// Directory (or files) of edge lists.
    corpus: Vec<PathBuf>,
    #[arg(long, default_value = "iid")]
    coder: Family,
    #[arg(long, default_value = "1")]
    class: Class,
    #[arg(short, long)]
    output: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct BenchmarkArgs {
    /// Edge-list files or directories of them.
    inputs: Vec<PathBuf>,
    /// Coder as family/class[/mode], repeatable; all eight universal coders
    /// by default.
    #[arg(long = "spec")]
    specs: Vec<CoderSpec>,
    /// Statistics files for learned specs, matched by family and class.
    #[arg(long)]
    stats: Vec<PathBuf>,
    /// Write the CSV table here instead of stdout.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the full JSON report.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SelectArgs {
    /// Numeric matrix, one observation per row.
    data: PathBuf,
    #[arg(long)]
    lambda_min: Option<f64>,
    #[arg(long)]
    lambda_max: Option<f64>,
    #[arg(long)]
    lambda_step: Option<f64>,
    #[command(flatten)]
    coder: CoderArgs,
    /// True graph as an edge list; adds the F1 score to the report.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum GenerateCommand {
    /// Erdős–Rényi G(n, p).
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Barabási–Albert preferential attachment.
    Ba {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Watts–Strogatz small world.
    Ws {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        common: GenerateCommon,
    },
    Empty {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenerateCommon,
    },
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        common: GenerateCommon,
    },
    /// Gaussian samples from a structured precision matrix.
    Data {
        /// cycle, ar1, erdos-renyi or hub.
        #[arg(long)]
        family: PrecisionFamily,
        /// Number of variables.
        #[arg(long)]
        p: usize,
        /// Number of observations.
        #[arg(long)]
        samples: usize,
        /// Also write the true conditional independence graph.
        #[arg(long)]
        truth: Option<PathBuf>,
        #[command(flatten)]
        common: GenerateCommon,
    },
}

#[derive(Args, Debug)]
struct GenerateCommon {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn init_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("GRAPHZIP_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| report::usage(format!("GRAPHZIP_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()?;
    Ok(())
}

fn is_usage(err: &anyhow::Error) -> bool {
    err.downcast_ref::<Usage>().is_some()
        || matches!(err.downcast_ref::<graphzip::Error>(), Some(graphzip::Error::Config(_)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Compress(a) => commands::compress(a),
        Command::Decompress(a) => commands::decompress(a),
        Command::Train(a) => commands::train(a),
        Command::Benchmark(a) => commands::benchmark(a),
        Command::Select(a) => commands::select(a),
        Command::Generate { what } => commands::generate(what),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(if is_usage(&err) { 2 } else { 1 })
        }
    }
}
