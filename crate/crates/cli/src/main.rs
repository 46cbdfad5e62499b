use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use dirac_qca_cli::config::{parse_angle, ConfigDoc, ConfigError, Experiment, ExperimentConfig, OutputFormat, RunConfig};
use dirac_qca_cli::experiments::{
    run_collision, run_dispersion, run_double_slit, run_packet, run_refraction_curve, ExperimentOutput,
};
use dirac_qca_cli::output::{json_string, summary_path, write_file};
use dirac_qca_cli::verify::{run_verify, Suite};

#[derive(Parser)]
#[command(name = "dirac-qca", version, about = "Dirac quantum cellular automaton experiments and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Information speed against mass.
    RefractionCurve(Flags),
    /// Single Gaussian packet.
    Packet(Flags),
    /// Two localized sources at +n and -n.
    DoubleSlit(Flags),
    /// Two packets colliding, as a two-particle amplitude matrix.
    Collide(Flags),
    /// Eigenphase and group velocity over the Brillouin zone.
    Dispersion(Flags),
    /// Run a named invariant suite and report residuals.
    Verify {
        suite: Suite,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Args, Default)]
struct Flags {
    /// Mass angle in radians, or an expression such as pi/8.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Mass in Planck units, instead of --theta.
    #[arg(long)]
    m_ratio: Option<f64>,
    #[arg(long)]
    sites: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    n0: Option<i64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k: Option<i64>,
    /// Relative sign of the two spinor components: + or -.
    #[arg(long, allow_hyphen_values = true)]
    sign: Option<String>,
    #[arg(long)]
    slit_n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<i64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Steps between matrix dumps in collide.
    #[arg(long)]
    dump_every: Option<usize>,
    /// Output file; the summary goes next to it as <out>.summary.json.
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn to_doc(&self) -> Result<ConfigDoc, ConfigError> {
        let theta = self
            .theta
            .as_deref()
            .map(parse_angle)
            .transpose()
            .map_err(|message| ConfigError::Field { field: "theta", message })?;
        Ok(ConfigDoc {
            experiment: None,
            theta,
            m_ratio: self.m_ratio,
            sites: self.sites,
            steps: self.steps,
            n0: self.n0,
            delta: self.delta,
            k: self.k,
            sign: self.sign.clone(),
            slit_n: self.slit_n,
            x0: self.x0,
            samples: self.samples,
            dump_every: self.dump_every,
            out: self.out.clone(),
            format: self.format.clone(),
            threads: self.threads,
        })
    }
}

enum Failure {
    Config(ConfigError),
    Runtime(anyhow::Error),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e)
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn resolve(experiment: Experiment, flags: &Flags) -> Result<RunConfig, ConfigError> {
    let base = match &flags.config {
        Some(path) => ConfigDoc::from_file(path)?,
        None => ConfigDoc::default(),
    };
    RunConfig::resolve(experiment, base.overridden_by(flags.to_doc()?))
}

fn set_threads(cfg: &RunConfig) -> anyhow::Result<()> {
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring the thread pool")?;
    }
    Ok(())
}

fn emit(cfg: &RunConfig, output: &ExperimentOutput) -> anyhow::Result<()> {
    let summary = json_string(&output.summary);
    match (&cfg.out, cfg.format) {
        (Some(path), OutputFormat::Csv) => {
            write_file(path, &output.table.to_csv())?;
            write_file(&summary_path(path), &summary)?;
        }
        (Some(path), OutputFormat::Json) => write_file(path, &summary)?,
        (None, OutputFormat::Csv) => print!("{}", output.table.to_csv()),
        (None, OutputFormat::Json) => print!("{summary}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let (experiment, flags, suite) = match &cli.command {
        Command::RefractionCurve(f) => (Experiment::RefractionCurve, f, None),
        Command::Packet(f) => (Experiment::Packet, f, None),
        Command::DoubleSlit(f) => (Experiment::DoubleSlit, f, None),
        Command::Collide(f) => (Experiment::Collide, f, None),
        Command::Dispersion(f) => (Experiment::Dispersion, f, None),
        Command::Verify { suite, flags } => (Experiment::Verify, flags, Some(*suite)),
    };
    let cfg = resolve(experiment, flags)?;
    set_threads(&cfg)?;

    if let Some(suite) = suite {
        let report = run_verify(suite)?;
        for c in report.failures() {
            log::error!("{suite}: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
        }
        let text = json_string(&serde_json::to_value(&report).context("serializing the report")?);
        match &cfg.out {
            Some(path) => write_file(path, &text)?,
            None => print!("{text}"),
        }
        return Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) });
    }

    let output = match &cfg.experiment {
        ExperimentConfig::RefractionCurve { samples } => run_refraction_curve(*samples)?,
        ExperimentConfig::Packet(c) => run_packet(c)?,
        ExperimentConfig::DoubleSlit(c) => run_double_slit(c)?,
        ExperimentConfig::Collide(c) => run_collision(c)?,
        ExperimentConfig::Dispersion(c) => run_dispersion(c)?,
        ExperimentConfig::Verify => unreachable!("handled above"),
    };
    emit(&cfg, &output)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Config(e)) => {
            eprintln!("config error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
