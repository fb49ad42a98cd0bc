//! Command-line front end. Exit codes: 0 success, 2 usage or validation
//! error, 3 numerical failure.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rcmlab_core::enumerate::ExactMeasure;
use rcmlab_core::extremal::{extremal_distance_report, HarmonicSolution};
use rcmlab_core::sampler::Chain;
use rcmlab_core::{BoundaryPartition, Quad, Weights};

use crate::config::{ExperimentConfig, MaskName};
use crate::error::{CliError, CliResult};
use crate::exec::Parallel;
use crate::experiments;
use crate::io::{self, AlgorithmName, ChainSpecJson, ExtremalReport, MeasureSummary};
use crate::record::{to_csv, to_json};

/// Enumeration refuses domains with more edges than this.
pub const ENUMERATION_CAP: usize = 26;
const EXTREMAL_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "rcmlab", version, about = "Random-cluster model experiments on Z²")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact partition function of a small domain.
    Enumerate(EnumerateArgs),
    /// Dump Monte Carlo samples of a domain.
    Sample(SampleArgs),
    /// Crossing probabilities against extremal distance.
    Crossing(ExperimentArgs),
    /// Arm-event frequencies, exponent fits and quasi-multiplicativity.
    Arms(ExperimentArgs),
    /// Chains of clusters and the events G, H, F.
    Chains(ExperimentArgs),
    /// Core-to-boundary connection in R-centred domains.
    Touch(ExperimentArgs),
    /// Exact and Monte Carlo checks of the parafermionic contour identity.
    Parafermion(ParafermionArgs),
    /// Discrete extremal distance of a quad given by a domain file with four marks.
    Extremal(ExtremalArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Bc {
    Free,
    Wired,
}

#[derive(Args, Debug)]
struct MeasureArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    /// Defaults to p_c(q).
    #[arg(long)]
    p: Option<f64>,
    #[arg(long, value_enum, default_value_t = Bc::Free)]
    bc: Bc,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    measure: MeasureArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    #[arg(long, default_value_t = 1)]
    thin: u64,
    #[arg(long, value_enum, default_value_t = AlgorithmArg::Auto)]
    algorithm: AlgorithmArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgorithmArg {
    HeatBath,
    ChayesMachta,
    Auto,
}

impl From<AlgorithmArg> for AlgorithmName {
    fn from(a: AlgorithmArg) -> AlgorithmName {
        match a {
            AlgorithmArg::HeatBath => AlgorithmName::HeatBath,
            AlgorithmArg::ChayesMachta => AlgorithmName::ChayesMachta,
            AlgorithmArg::Auto => AlgorithmName::Auto,
        }
    }
}

/// Flags override the corresponding fields of `--config` (or the defaults).
#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    q: Vec<f64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long = "burn-in")]
    burn_in: Option<u64>,
    #[arg(long)]
    thin: Option<u64>,
    #[arg(long, value_enum)]
    algorithm: Option<AlgorithmArg>,
    /// Arm words such as 10101.
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<String>,
    #[arg(long = "half-plane", conflicts_with = "quarter_plane")]
    half_plane: bool,
    #[arg(long = "quarter-plane")]
    quarter_plane: bool,
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    #[arg(long = "R", value_delimiter = ',')]
    big_r: Vec<u32>,
    #[arg(long, value_delimiter = ',')]
    rho: Vec<u32>,
    #[arg(long = "box-factor")]
    box_factor: Option<u32>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long = "domains-per-family")]
    domains_per_family: Option<usize>,
    /// Chains: rectangle height N.
    #[arg(long = "N")]
    n: Option<u32>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long = "k-max")]
    k_max: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    alpha: Vec<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    refine: Option<u32>,
    /// Write wall_ms as 0 so that output depends on the configuration only.
    #[arg(long = "no-wall-time")]
    no_wall_time: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args, Debug)]
struct ParafermionArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    /// Run only the exact enumeration (no Monte Carlo).
    #[arg(long)]
    enumerate: bool,
    #[arg(long = "max-edges")]
    max_edges: Option<usize>,
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
}

#[derive(Args, Debug)]
struct ExtremalArgs {
    #[arg(long)]
    domain: PathBuf,
    #[arg(long, default_value_t = 32)]
    refine: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command) -> CliResult<()> {
    match command {
        Command::Enumerate(a) => enumerate(a),
        Command::Sample(a) => sample(a),
        Command::Crossing(a) => experiment("crossing", a, |_| {}),
        Command::Arms(a) => experiment("arms", a, |_| {}),
        Command::Chains(a) => experiment("chains", a, |_| {}),
        Command::Touch(a) => experiment("touch", a, |_| {}),
        Command::Parafermion(a) => {
            let ParafermionArgs { mut common, enumerate, max_edges, mc_samples } = a;
            common.format.get_or_insert(Format::Json);
            experiment("parafermion", common, |cfg| {
                if let Some(m) = max_edges {
                    cfg.max_edges = m;
                }
                if let Some(n) = mc_samples {
                    cfg.mc_samples = n;
                }
                if enumerate {
                    cfg.mc_samples = 0;
                }
            })
        }
        Command::Extremal(a) => extremal(a),
    }
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

fn measure_setup(m: &MeasureArgs) -> CliResult<(io::DomainFile, BoundaryPartition, Weights)> {
    let file = io::read_domain(&m.domain)?;
    let bc = match m.bc {
        Bc::Free => BoundaryPartition::free(&file.domain),
        Bc::Wired => BoundaryPartition::wired(&file.domain),
    };
    let w = match m.p {
        Some(p) => Weights::new(p, m.q)?,
        None => Weights::critical(m.q)?,
    };
    Ok((file, bc, w))
}

fn enumerate(a: EnumerateArgs) -> CliResult<()> {
    let (file, bc, w) = measure_setup(&a.measure)?;
    let m = ExactMeasure::build(&file.domain, &bc, w, ENUMERATION_CAP, &Parallel::from_env())?;
    write_output(a.out.as_deref(), &(serde_json::to_string_pretty(&MeasureSummary::of(&m))? + "\n"))
}

/// First line: the chain spec as JSON. Then one `sweep bits` line per sample.
fn sample(a: SampleArgs) -> CliResult<()> {
    let (file, bc, w) = measure_setup(&a.measure)?;
    let spec = ChainSpecJson {
        q: w.q(),
        p: w.p(),
        algorithm: a.algorithm.into(),
        seed: a.seed,
        burn_in: a.burn_in,
        thin: a.thin,
    }
    .to_spec()?;
    let mut chain = Chain::new(&file.domain, &bc, spec)?;
    let mut text = format!("# {}\n", serde_json::to_string(&ChainSpecJson::from_spec(&spec))?);
    for _ in 0..a.samples {
        let (t, c) = chain.next_sample();
        text.push_str(&io::format_sample(t, c));
        text.push('\n');
    }
    write_output(a.out.as_deref(), &text)
}

fn extremal(a: ExtremalArgs) -> CliResult<()> {
    let file = io::read_domain(&a.domain)?;
    let marks: [rcmlab_core::Point; 4] = file
        .marks
        .as_slice()
        .try_into()
        .map_err(|_| CliError::Invalid(format!("extremal needs exactly four MARK lines, found {}", file.marks.len())))?;
    let quad = Quad::new(file.domain, marks)?;
    let primal: HarmonicSolution = extremal_distance_report(&quad, a.refine, EXTREMAL_TOL)?;
    let dual = extremal_distance_report(&quad.rotated(), a.refine, EXTREMAL_TOL)?;
    let report = ExtremalReport {
        ell: primal.ell,
        dual_ell: dual.ell,
        product: primal.ell * dual.ell,
        refinement: a.refine,
        residual: primal.residual.max(dual.residual),
    };
    write_output(a.out.as_deref(), &(serde_json::to_string_pretty(&report)? + "\n"))
}

/// Builds the config: `--config` file or defaults, then flag overrides.
fn build_config(name: &str, a: &ExperimentArgs) -> CliResult<ExperimentConfig> {
    let mut cfg: ExperimentConfig = match &a.config {
        Some(path) => serde_json::from_str(&io::read_to_string(path)?)?,
        None => ExperimentConfig::default(),
    };
    if !cfg.experiment.is_empty() && cfg.experiment != name {
        return Err(CliError::Invalid(format!("config is for experiment {:?}, not {name:?}", cfg.experiment)));
    }
    cfg.experiment = name.to_string();
    fn set<T: Clone>(field: &mut T, v: &Option<T>) {
        if let Some(v) = v {
            *field = v.clone();
        }
    }
    fn set_list<T: Clone>(field: &mut Vec<T>, v: &[T]) {
        if !v.is_empty() {
            *field = v.to_vec();
        }
    }
    set_list(&mut cfg.q, &a.q);
    if a.p.is_some() {
        cfg.p = a.p;
    }
    set(&mut cfg.seed, &a.seed);
    set(&mut cfg.samples, &a.samples);
    set(&mut cfg.chains, &a.chains);
    if a.burn_in.is_some() {
        cfg.burn_in = a.burn_in;
    }
    set(&mut cfg.thin, &a.thin);
    set(&mut cfg.algorithm, &a.algorithm.map(Into::into));
    set_list(&mut cfg.sigma, &a.sigma);
    if a.half_plane {
        cfg.mask = MaskName::Half;
    }
    if a.quarter_plane {
        cfg.mask = MaskName::Quarter;
    }
    set_list(&mut cfg.r, &a.r);
    set_list(&mut cfg.big_r, &a.big_r);
    set_list(&mut cfg.rho, &a.rho);
    set(&mut cfg.box_factor, &a.box_factor);
    if a.family.is_some() {
        cfg.family = a.family.clone();
    }
    set(&mut cfg.domains_per_family, &a.domains_per_family);
    set(&mut cfg.n, &a.n);
    set(&mut cfg.ell, &a.ell);
    set(&mut cfg.k_max, &a.k_max);
    set_list(&mut cfg.alpha, &a.alpha);
    set(&mut cfg.delta, &a.delta);
    set(&mut cfg.refine, &a.refine);
    if a.no_wall_time {
        cfg.record_wall_time = false;
    }
    if a.out.is_some() {
        cfg.out = a.out.clone();
    }
    Ok(cfg)
}

fn experiment(name: &str, a: ExperimentArgs, adjust: impl FnOnce(&mut ExperimentConfig)) -> CliResult<()> {
    let mut cfg = build_config(name, &a)?;
    adjust(&mut cfg);
    let records = experiments::run(&cfg, &Parallel::from_env())?;
    let text = match a.format.unwrap_or(Format::Csv) {
        Format::Csv => to_csv(&records),
        Format::Json => to_json(&records),
    };
    write_output(cfg.out.as_deref(), &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<Cli, clap::Error> {
        Cli::try_parse_from(std::iter::once("rcmlab").chain(args.iter().copied()))
    }

    #[test]
    fn arms_flags_override_defaults() {
        let cli = parse(&["arms", "--q", "1", "--sigma", "10", "--half-plane", "--r", "2", "--R", "16", "--samples", "20000", "--seed", "42"])
            .unwrap();
        let Command::Arms(a) = cli.command else { panic!("wrong subcommand") };
        let cfg = build_config("arms", &a).unwrap();
        assert_eq!(cfg.mask, MaskName::Half);
        assert_eq!((cfg.r.clone(), cfg.big_r.clone(), cfg.samples, cfg.seed), (vec![2], vec![16], 20000, 42));
        assert_eq!(cfg.sigma, vec!["10".to_string()]);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["rcmlab", "arms", "--bogus"]), 2);
        assert_eq!(run(["rcmlab", "frobnicate"]), 2);
        assert_eq!(run(["rcmlab", "arms", "--half-plane", "--quarter-plane"]), 2);
        // Validation failure after parsing.
        assert_eq!(run(["rcmlab", "arms", "--R", "8,4", "--samples", "10"]), 2);
    }

    #[test]
    fn lists_accept_commas() {
        let cli = parse(&["touch", "--q", "1,2,3", "--R", "4,8"]).unwrap();
        let Command::Touch(a) = cli.command else { panic!("wrong subcommand") };
        assert_eq!(a.q, vec![1.0, 2.0, 3.0]);
        assert_eq!(a.big_r, vec![4, 8]);
    }
}
