//! Command-line experiment runner: configs, artifacts and exit codes.

mod artifacts;
mod config;
mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use artifacts::Artifacts;
pub use config::{ExperimentConfig, ExperimentKind, SweepRegime, XrayRecoverConfig, SCHEMA_VERSION};
pub use run::{exit_code, run, Gate, RunOutcome};

use crate::error::{Error, Result};

pub const DEFAULT_OUT: &str = "fracgo-out";

#[derive(Debug, Parser)]
#[command(
    name = "fracgo",
    version,
    about = "Geometrical-optics experiments for the fractional Helmholtz equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run an experiment; exit 0 iff every gate passes.
    Run(RunArgs),
    /// Print the fully resolved default config of an experiment.
    Config {
        #[arg(value_enum)]
        kind: ExperimentKind,
    },
}

fn parse_list<T: std::str::FromStr>(s: &str) -> std::result::Result<Vec<T>, String> {
    s.split(',')
        .map(|p| p.trim().parse::<T>().map_err(|_| format!("cannot parse {p:?}")))
        .collect()
}

#[derive(Debug, clap::Args)]
pub struct RunArgs {
    #[arg(value_enum)]
    pub kind: ExperimentKind,
    /// TOML experiment file; flags override its keys.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub s: Option<f64>,
    #[arg(long = "M", visible_alias = "m")]
    pub m: Option<usize>,
    #[arg(long, value_enum)]
    pub regime: Option<SweepRegime>,
    #[arg(long)]
    pub potential: Option<f64>,
    #[arg(long)]
    pub no_phi1: bool,
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated frequencies.
    #[arg(long, value_parser = parse_list::<f64>)]
    pub taus: Option<Vec<f64>>,
    #[arg(long)]
    pub no_refine: bool,
    #[arg(long)]
    pub slope_gate: Option<f64>,
    /// Comma-separated noise levels (stability-exp).
    #[arg(long, value_parser = parse_list::<f64>)]
    pub deltas: Option<Vec<f64>>,
    /// Comma-separated seeds (stability-exp).
    #[arg(long, value_parser = parse_list::<u64>)]
    pub seeds: Option<Vec<u64>>,
    #[arg(long)]
    pub t_m: Option<f64>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Output root; the run writes to `<out>/<kind>`.
    #[arg(long, env = "FRACGO_OUT")]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long)]
    pub jobs: Option<usize>,
}

impl RunArgs {
    /// Config file (or defaults) with flags applied on top.
    pub fn to_config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
                let c = ExperimentConfig::from_toml(&text)?;
                if c.kind != self.kind {
                    return Err(Error::Config(format!(
                        "{} describes {}, not {}",
                        p.display(),
                        c.kind.name(),
                        self.kind.name()
                    )));
                }
                c
            }
            None => ExperimentConfig::new(self.kind),
        };
        macro_rules! set {
            ($field:ident) => {
                if let Some(v) = &self.$field {
                    c.$field = Some(v.clone());
                }
            };
        }
        set!(s);
        set!(m);
        set!(regime);
        set!(potential);
        set!(tau);
        set!(taus);
        set!(slope_gate);
        set!(jobs);
        if self.no_phi1 {
            c.with_phi1 = Some(false);
        }
        if self.no_refine {
            c.refine_check = Some(false);
        }
        if let Some(o) = &self.out {
            c.output = Some(o.clone());
        }
        if self.deltas.is_some() || self.seeds.is_some() || self.t_m.is_some() || self.iterations.is_some() {
            match self.kind {
                ExperimentKind::StabilityExp => {
                    let st = c.stability.get_or_insert_with(Default::default);
                    if let Some(d) = &self.deltas {
                        st.deltas = d.clone();
                    }
                    if let Some(s) = &self.seeds {
                        st.seeds = s.clone();
                    }
                    if let Some(t) = self.t_m {
                        st.t_m = t;
                    }
                    if let Some(i) = self.iterations {
                        st.iterations = i;
                    }
                }
                ExperimentKind::XrayRecover if self.deltas.is_none() && self.seeds.is_none() && self.t_m.is_none() => {
                    c.xray.get_or_insert_with(Default::default).iterations = self.iterations.unwrap_or(200);
                }
                _ => {
                    return Err(Error::Config(format!(
                        "--deltas/--seeds/--t-m/--iterations do not apply to {}",
                        self.kind.name()
                    )))
                }
            }
        }
        Ok(c)
    }
}

fn execute(args: &RunArgs) -> Result<RunOutcome> {
    let config = args.to_config()?;
    let resolved = config.resolve()?;
    if let Some(j) = resolved.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| Error::Config(format!("cannot size the worker pool: {e}")))?;
    }
    let root = resolved.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    run(&resolved, &root)
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match cli.command {
        Command::Config { kind } => match ExperimentConfig::new(kind).resolve().and_then(|c| c.to_toml()) {
            Ok(t) => {
                print!("{t}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
        Command::Run(args) => match execute(&args) {
            Ok(outcome) => {
                print!("{}", outcome.summary());
                println!("  artifacts in {}", outcome.dir.display());
                outcome.exit_code()
            }
            Err(e) => {
                let code = exit_code(&e);
                eprintln!("error (exit {code}): {e}");
                code
            }
        },
    }
}
