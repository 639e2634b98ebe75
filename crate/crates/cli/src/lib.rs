//! Command-line front end for cross-diffusion filtering experiments.

use std::fmt;
use std::path::PathBuf;

use anyhow::Result;
use clap::{value_parser, Args, Parser, Subcommand};
use crossdiff::InitialKind;

pub mod artifacts;
pub mod commands;
pub mod manifest;

use commands::SweepAxis;
use manifest::{parse_matrix, NoiseManifest, RunManifest};

/// Bad arguments detected after parsing; exits with status 2 like clap's own.
#[derive(Debug)]
pub struct UsageError(String);

impl UsageError {
    pub fn new(message: impl Into<String>) -> Self {
        UsageError(message.into())
    }
}

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "crossdiff", version, about = "Linear cross-diffusion filtering of signals and images")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the canonical form of a diffusion matrix.
    Decompose(DecomposeArgs),
    /// Filter an image at a grid of times and score it.
    Filter(RunArgs),
    /// Small-theta edge map next to the Prewitt baseline.
    Edges(RunArgs),
    /// SNR/PSNR over a list of p values, matrices or noise levels.
    Sweep(SweepArgs),
    /// Profiles of a filtered 1D signal.
    Demo1d(Demo1dArgs),
}

#[derive(Args, Debug, Default, Clone)]
pub struct DecomposeArgs {
    /// d11,d12,d21,d22
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    pub d: Option<[f64; 4]>,
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct RunArgs {
    /// JSON run manifest; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// PGM image (or single-column CSV signal for demo1d).
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Synthetic input: box, step, disk, checkerboard, gaussian, phantom.
    #[arg(long, conflicts_with = "input")]
    pub pattern: Option<String>,
    /// Side (or length) of the synthetic input.
    #[arg(long)]
    pub size: Option<usize>,
    /// Clean image to score against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    /// d11,d12,d21,d22
    #[arg(long, value_parser = parse_matrix, allow_hyphen_values = true)]
    pub d: Option<[f64; 4]>,
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated, strictly increasing.
    #[arg(long = "times", alias = "t", value_delimiter = ',')]
    pub times: Option<Vec<f64>>,
    /// Initial distribution: 0 = (f, 0), 1 = (f, |∇f|), 2 = (f, |∇f|·Δf).
    #[arg(long, value_parser = value_parser!(u8).range(0..=2))]
    pub kind: Option<u8>,
    /// Standard deviation of additive Gaussian noise, in grey levels.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Padding margin per side as a fraction of the image size.
    #[arg(long)]
    pub padding: Option<f64>,
    /// Also write unquantized values as single-column CSV.
    #[arg(long)]
    pub raw: bool,
    /// PSNR with the mean squared error instead of the sum of squares.
    #[arg(long)]
    pub mse_psnr: bool,
}

#[derive(Args, Debug, Default, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    #[arg(long, value_delimiter = ',')]
    pub p_list: Option<Vec<f64>>,
    /// Matrices separated by `;`, entries by `,`.
    #[arg(long, value_delimiter = ';', value_parser = parse_matrix, allow_hyphen_values = true)]
    pub d_list: Option<Vec<[f64; 4]>>,
    #[arg(long, value_delimiter = ',')]
    pub sigma_list: Option<Vec<f64>>,
    /// Initial distributions to run at every point.
    #[arg(long, value_delimiter = ',', value_parser = value_parser!(u8).range(0..=2))]
    pub kinds: Option<Vec<u8>>,
}

#[derive(Args, Debug, Default, Clone)]
pub struct Demo1dArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// The signal lives on (−L, L).
    #[arg(long)]
    pub half_width: Option<f64>,
}

impl RunArgs {
    /// The manifest file (if any) overlaid with the flags.
    pub fn manifest(&self) -> Result<RunManifest> {
        let base = match &self.config {
            Some(path) => RunManifest::load(path)?,
            None => RunManifest::default(),
        };
        let noise = match (self.sigma, self.seed, base.noise) {
            (Some(sigma), seed, previous) => Some(NoiseManifest {
                sigma,
                seed: seed.or(previous.map(|n| n.seed)).unwrap_or(0),
            }),
            (None, Some(seed), Some(previous)) => Some(NoiseManifest { seed, ..previous }),
            (None, _, previous) => previous,
        };
        let flags = RunManifest {
            d: self.d,
            p: self.p,
            kind: self.kind,
            time_grid: self.times.clone(),
            noise,
            input: self.input.clone(),
            pattern: self.pattern.clone(),
            size: self.size,
            reference: self.reference.clone(),
            output_dir: self.output_dir.clone(),
            padding: self.padding,
            raw: self.raw.then_some(true),
            mse_psnr: self.mse_psnr.then_some(true),
        };
        Ok(base.overlay(flags))
    }
}

impl SweepArgs {
    pub fn axis(&self) -> Result<SweepAxis> {
        let axes: Vec<SweepAxis> = [
            self.p_list.clone().map(SweepAxis::P),
            self.d_list.clone().map(SweepAxis::D),
            self.sigma_list.clone().map(SweepAxis::Sigma),
        ]
        .into_iter()
        .flatten()
        .collect();
        match <[SweepAxis; 1]>::try_from(axes) {
            Ok([axis]) => Ok(axis),
            Err(_) => Err(UsageError::new("give exactly one of --p-list, --d-list, --sigma-list").into()),
        }
    }

    pub fn kinds(&self) -> Result<Vec<InitialKind>> {
        self.kinds
            .iter()
            .flatten()
            .map(|&k| InitialKind::try_from(k).map_err(Into::into))
            .collect()
    }
}

/// Runs one command and returns what should go to standard output.
pub fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Decompose(args) => {
            let m = match &args.config {
                Some(path) => RunManifest::load(path)?,
                None => RunManifest::default(),
            };
            let m = m.overlay(RunManifest {
                d: args.d,
                ..Default::default()
            });
            if m.d.is_none() {
                return Err(UsageError::new("decompose needs --d d11,d12,d21,d22").into());
            }
            Ok(commands::decompose_report(&m.diffusion([0.0; 4])?))
        }
        Command::Filter(args) => Ok(commands::filter(&args.manifest()?)?.csv.as_str().to_string()),
        Command::Edges(args) => {
            let out = commands::edges(&args.manifest()?)?;
            Ok(format!(
                "edges: min {} max {}\nprewitt: min {} max {}\n",
                out.edge_range.min, out.edge_range.max, out.prewitt_range.min, out.prewitt_range.max
            ))
        }
        Command::Sweep(args) => {
            let m = args.run.manifest()?;
            let base_seed = m.noise.map_or(args.run.seed.unwrap_or(0), |n| n.seed);
            let out = commands::sweep(&m, &args.axis()?, &args.kinds()?, base_seed)?;
            Ok(out.csv.as_str().to_string())
        }
        Command::Demo1d(args) => {
            let m = args.run.manifest()?;
            let profiles = commands::demo1d(&m, args.half_width)?;
            Ok(format!(
                "wrote {} samples at {} times to {}\n",
                profiles.x.len(),
                profiles.times.len(),
                m.output_dir().join("profiles.csv").display()
            ))
        }
    }
}

/// Process exit status for an error returned by [`run`].
pub fn exit_code(error: &anyhow::Error) -> i32 {
    if error.is::<UsageError>() {
        2
    } else {
        1
    }
}
