use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Arg, ArgMatches, Args, FromArgMatches, Parser, Subcommand};
use ttsprep::corpus::{
    corpus_stats, run_pipeline, CorpusManifest, PipelineConfig, PipelineOptions, Stages,
};

#[derive(Parser)]
#[command(name = "ttsprep", version, about = "Spanish TTS data preparation: text, features and alignment")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write normalized transcripts (<id>.txt).
    Normalize(RunArgs),
    /// Write phoneme sequences (<id>.phn) and the inventory.
    G2p(RunArgs),
    /// Write normalized log-mel features (<id>.mel) and norm_stats.txt.
    Features(RunArgs),
    /// Write phoneme durations (<id>.dur) from posteriorgrams.
    Align(RunArgs),
    /// Print sample, word and trimmed-hour counts.
    Stats(CommonArgs),
    /// Run every stage.
    All(RunArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Corpus manifest: id<TAB>path<TAB>transcript per line.
    #[arg(long)]
    manifest: PathBuf,
    /// Directory audio paths are relative to [default: the manifest's directory]
    #[arg(long)]
    root: Option<PathBuf>,
    /// `key = value` configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Directory of <id>.post posteriorgrams.
    #[arg(long)]
    posteriors: Option<PathBuf>,
}

/// One `--<key> <value>` flag per configuration key.
#[derive(Default)]
struct Overrides(Vec<(&'static str, String)>);

impl FromArgMatches for Overrides {
    fn from_arg_matches(m: &ArgMatches) -> Result<Self, clap::Error> {
        Ok(Self(
            PipelineConfig::KEYS
                .iter()
                .filter_map(|&k| m.get_one::<String>(k).map(|v| (k, v.clone())))
                .collect(),
        ))
    }

    fn update_from_arg_matches(&mut self, m: &ArgMatches) -> Result<(), clap::Error> {
        *self = Self::from_arg_matches(m)?;
        Ok(())
    }
}

impl Args for Overrides {
    fn augment_args(cmd: clap::Command) -> clap::Command {
        PipelineConfig::KEYS.iter().fold(cmd, |cmd, &key| {
            cmd.arg(
                Arg::new(key)
                    .long(key)
                    .value_name("VALUE")
                    .help_heading("Configuration overrides"),
            )
        })
    }

    fn augment_args_for_update(cmd: clap::Command) -> clap::Command {
        Self::augment_args(cmd)
    }
}

/// Errors that exit with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0:#}")]
struct UsageError(anyhow::Error);

struct Setup {
    manifest: CorpusManifest,
    root: PathBuf,
    config: PipelineConfig,
}

fn setup(args: &CommonArgs) -> Result<Setup> {
    let usage = |e: anyhow::Error| anyhow::Error::new(UsageError(e));
    let mut config = PipelineConfig::default();
    if let Some(path) = &args.config {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(usage)?;
        config
            .apply_text(&text)
            .with_context(|| format!("in {}", path.display()))
            .map_err(usage)?;
    }
    for (key, value) in &args.overrides.0 {
        config
            .set(key, value)
            .with_context(|| format!("--{key}"))
            .map_err(usage)?;
    }
    config.validate().map_err(|e| usage(e.into()))?;
    let manifest = CorpusManifest::load(&args.manifest)
        .with_context(|| format!("manifest {}", args.manifest.display()))
        .map_err(usage)?;
    let root = args.root.clone().unwrap_or_else(|| {
        args.manifest
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .unwrap_or(Path::new("."))
            .to_path_buf()
    });
    Ok(Setup {
        manifest,
        root,
        config,
    })
}

fn run_stages(args: &RunArgs, stages: Stages) -> Result<ExitCode> {
    let s = setup(&args.common)?;
    if stages.durations && !stages.features && args.posteriors.is_none() {
        return Err(UsageError(anyhow::anyhow!("align needs --posteriors <dir>")).into());
    }
    let opts = PipelineOptions {
        stages,
        workers: args.common.workers,
        posteriors: args.posteriors.clone(),
    };
    let report = run_pipeline(&s.manifest, &s.root, &s.config, &args.out, &opts)?;
    for (id, r) in &report.outcomes {
        if let Err(msg) = r {
            eprintln!("{id}: {msg}");
        }
    }
    let failed = report.n_failed();
    println!(
        "{} of {} utterances processed, {failed} failed; artifacts in {}",
        report.outcomes.len() - failed,
        report.outcomes.len(),
        args.out.display()
    );
    Ok(if failed > 0 {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn run(cli: Cli) -> Result<ExitCode> {
    let only = |f: fn(&mut Stages)| {
        let mut s = Stages {
            text: false,
            phonemes: false,
            features: false,
            durations: false,
        };
        f(&mut s);
        s
    };
    match &cli.command {
        Command::Normalize(a) => run_stages(a, only(|s| s.text = true)),
        Command::G2p(a) => run_stages(a, only(|s| s.phonemes = true)),
        Command::Features(a) => run_stages(a, only(|s| s.features = true)),
        Command::Align(a) => run_stages(a, only(|s| s.durations = true)),
        Command::All(a) => run_stages(a, Stages::ALL),
        Command::Stats(a) => {
            let s = setup(a)?;
            let pool = rayon::ThreadPoolBuilder::new().num_threads(a.workers).build()?;
            let stats = pool.install(|| {
                corpus_stats(&s.manifest, &s.root, s.config.features.trim_threshold_db)
            })?;
            println!("{stats}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
