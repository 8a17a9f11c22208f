use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hazefuse::{BitDepth, FusionConfig, HazeMapMode};
use hazefuse_cli::{append_report, emit_table, run_batch, run_single, CliError, ManifestEntry};

/// Remove haze from registered RGB + NIR image pairs.
#[derive(Parser, Debug)]
#[command(name = "hazefuse", version, args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,

    #[command(flatten)]
    single: SingleArgs,

    #[command(flatten)]
    fusion: FusionArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Process every pair listed in a CSV manifest (header: rgb,nir,out[,label]).
    Batch {
        #[arg(long)]
        manifest: PathBuf,

        /// JSON report to write.
        #[arg(long)]
        report: PathBuf,

        /// Optional CSV summary table, one row per label.
        #[arg(long)]
        table: Option<PathBuf>,

        /// Worker threads; defaults to the available parallelism.
        #[arg(long)]
        jobs: Option<usize>,

        #[command(flatten)]
        fusion: FusionArgs,
    },
}

#[derive(Args, Debug)]
struct SingleArgs {
    /// Color image (PNG or TIFF).
    #[arg(long)]
    rgb: Option<PathBuf>,

    /// NIR image registered to --rgb.
    #[arg(long)]
    nir: Option<PathBuf>,

    /// Output PNG.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Append the metrics record to this JSON report.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Label for the report record; defaults to the output file stem.
    #[arg(long)]
    label: Option<String>,
}

#[derive(Args, Debug)]
struct FusionArgs {
    /// Wavelet decomposition levels.
    #[arg(long, default_value_t = 2)]
    levels: usize,

    /// How the blue channel becomes haze weights.
    #[arg(long, value_enum, default_value_t = HazeMap::Scale)]
    haze_map: HazeMap,

    /// Histogram bins used for matching.
    #[arg(long, default_value_t = 256)]
    bins: usize,

    /// Output bit depth (8 or 16).
    #[arg(long, default_value_t = 8)]
    bit_depth: u32,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HazeMap {
    Scale,
    Minmax,
}

impl FusionArgs {
    fn config(&self) -> Result<(FusionConfig, BitDepth), CliError> {
        let mode = match self.haze_map {
            HazeMap::Scale => HazeMapMode::Scale,
            HazeMap::Minmax => HazeMapMode::MinMax,
        };
        let wrap = |source| CliError::Core {
            context: "configuration".into(),
            source,
        };
        let cfg = FusionConfig::new(self.levels, mode, self.bins).map_err(wrap)?;
        let depth = BitDepth::try_from(self.bit_depth).map_err(wrap)?;
        Ok((cfg, depth))
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Some(Command::Batch {
            manifest,
            report,
            table,
            jobs,
            fusion,
        }) => {
            let (cfg, depth) = fusion.config()?;
            let jobs = jobs.unwrap_or_else(|| {
                std::thread::available_parallelism().map_or(1, |n| n.get())
            });
            let records = run_batch(&manifest, &report, cfg, depth, jobs)?;
            let failed: Vec<_> = records.iter().filter(|r| !r.is_success()).collect();
            for r in &failed {
                eprintln!("{}: {}", r.label, r.error.as_deref().unwrap_or_default());
            }
            if let Some(table) = table {
                std::fs::write(&table, emit_table(&records)).map_err(|source| CliError::Io {
                    path: table.clone(),
                    source,
                })?;
            }
            eprintln!(
                "processed {} entries, {} failed",
                records.len(),
                failed.len()
            );
            Ok(failed.is_empty())
        }
        None => {
            let (cfg, depth) = cli.fusion.config()?;
            let SingleArgs {
                rgb,
                nir,
                out,
                report,
                label,
            } = cli.single;
            let (Some(rgb), Some(nir), Some(out)) = (rgb, nir, out) else {
                eprintln!("--rgb, --nir and --out are required (or use the batch subcommand)");
                return Ok(false);
            };
            let entry = ManifestEntry {
                rgb,
                nir,
                out,
                label,
            };
            let record = run_single(&entry, &cfg, depth)?;
            println!("{}", serde_json::to_string_pretty(&record).expect("serializable record"));
            if let Some(report) = report {
                append_report(report, record)?;
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
