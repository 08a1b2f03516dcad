//! The `growthlab` command line: argument parsing, dispatch, manifests and diagnostics.
//!
//! Exit codes: 0 on success, 2 on validation errors, 1 on internal failures.
//! Diagnostics go to stderr as one JSON object per line; stdout carries progress only.

mod plot;

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::census::{coefficient_census, liminf_profile};
use crate::criteria::{
    score_block_sum, score_blockwise, score_sup_ratio, BlockOptions, ScoreReport, SupRatioKind,
};
use crate::disk::{bloch_profile, randomize, Flavor, DEFAULT_OVERSAMPLE};
use crate::error::{Error, Result};
use crate::mc::{
    fit_growth, riesz_probe, riesz_sign_sweep, run_growth_ensemble, salem_zygmund_probe, Candidate,
    ExperimentConfig, RadiiRule, RieszRow, DEFAULT_MAX_WORK,
};
use crate::random::{RandomModel, SeedSpec};
use crate::schemes::{CoefficientScheme, NuSequence, Prop22Variant, Provenance};
use crate::sphere::{cap_stability_check, write_cap_csv, CapReport};
use crate::weight::{block_sequence, doubling_audit, BlockSpec, Weight};

pub use plot::{emit_plotdata, PlotKind, PlotSource};

#[derive(Debug, Parser)]
#[command(
    name = "growthlab",
    version,
    about = "Random harmonic series in weighted growth spaces"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
struct GlobalArgs {
    /// JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, default_value = "growthlab-out")]
    out: PathBuf,
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[arg(long, global = true)]
    oversample: Option<f64>,
    #[arg(long, global = true, env = "GROWTHLAB_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Block sequence and doubling audit of a weight.
    Weights(WeightsArgs),
    /// Write a coefficient scheme as CSV.
    Scheme(SchemeOnly),
    /// Score a coefficient criterion.
    Check(CheckArgs),
    /// Coefficient census and block liminf profile.
    Census(CensusArgs),
    /// Monte Carlo growth ensemble.
    Growth(GrowthArgs),
    /// Salem-Zygmund probe on single blocks.
    ProbeSz(SzArgs),
    /// Lacunary cosine sums against the sum of coefficients.
    ProbeRiesz(RieszArgs),
    /// Cap-measure stability on the sphere.
    Cap(CapArgs),
    /// Bloch-type targets and gradient profile.
    Bloch(BlochArgs),
    /// Growth ensemble for analytic series `sum a_m xi_m z^m`.
    Analytic(GrowthArgs),
    /// Growth ensemble from `--config`.
    Run,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Weights(_) => "weights",
            Command::Scheme(_) => "scheme",
            Command::Check(_) => "check",
            Command::Census(_) => "census",
            Command::Growth(_) => "growth",
            Command::ProbeSz(_) => "probe-sz",
            Command::ProbeRiesz(_) => "probe-riesz",
            Command::Cap(_) => "cap",
            Command::Bloch(_) => "bloch",
            Command::Analytic(_) => "analytic",
            Command::Run => "run",
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct WeightsArgs {
    /// power, logpower, logpower2, loglogpower, bloch-power or bloch-log.
    #[arg(long, default_value = "power")]
    family: String,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long = "ratio-A", default_value_t = 2.0)]
    ratio_a: f64,
    #[arg(long, default_value_t = 1)]
    n0: u64,
    #[arg(long = "k-max", default_value_t = 10)]
    k_max: usize,
    /// Skip the `n_(k+1) >= 2 n_k` check.
    #[arg(long)]
    allow_slow_growth: bool,
    /// Upper end of the doubling audit grid.
    #[arg(long, default_value_t = 1e6)]
    audit_x_max: f64,
}

#[derive(Debug, Args, Serialize)]
struct SchemeArgs {
    /// prop22, remark32, riesz, saturating, rudin-shapiro, hadamard, grs, constant, weight-profile, random-uniform.
    #[arg(long, default_value = "remark32")]
    scheme: String,
    /// Read the scheme from a CSV written by the `scheme` subcommand instead.
    #[arg(long)]
    scheme_file: Option<PathBuf>,
    /// Weight of the block construction, e.g. `power:1`.
    #[arg(long = "scheme-weight", default_value = "power:1")]
    scheme_weight: String,
    #[arg(long = "ratio-A", default_value_t = 2.0)]
    ratio_a: f64,
    #[arg(long, default_value_t = 1)]
    n0: u64,
    /// Defaults to 4 for remark32 and 10 otherwise.
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    /// `log`, `sqrt` or a constant.
    #[arg(long, default_value = "1")]
    nu: String,
    /// I, II or III.
    #[arg(long, default_value = "II")]
    variant: String,
    #[arg(long)]
    both_components: bool,
    #[arg(long, default_value_t = 1024)]
    degree: u64,
    #[arg(long, default_value_t = 1.0)]
    value: f64,
}

impl SchemeArgs {
    fn provenance(&self, seed: u64) -> Result<Provenance> {
        let weight: Weight = self.scheme_weight.parse()?;
        let nu: NuSequence = self.nu.parse()?;
        let k_max = self
            .k_max
            .unwrap_or(if self.scheme == "remark32" { 4 } else { 10 });
        let blocks = BlockSpec::Generated {
            weight: weight.clone(),
            ratio_a: self.ratio_a,
            n0: self.n0,
            k_max,
            require_doubling_growth: true,
        };
        let variant = match self.variant.as_str() {
            "I" => Prop22Variant::I,
            "II" => Prop22Variant::II,
            "III" => Prop22Variant::III,
            v => return Err(Error::InvalidArgument(format!("unknown variant `{v}`"))),
        };
        Ok(match self.scheme.replace('_', "-").as_str() {
            "prop22" => Provenance::Prop22 {
                blocks,
                variant,
                both_components: self.both_components,
            },
            "remark32" => Provenance::Remark32 { k_max },
            "riesz" | "riesz-lacunary" => Provenance::RieszLacunary {
                weight,
                ratio_a: self.ratio_a,
                nu,
                k_max,
            },
            "saturating" => Provenance::Saturating {
                weight,
                ratio_a: self.ratio_a,
                nu,
                k_max,
            },
            "rudin-shapiro" => Provenance::RudinShapiro { blocks },
            "hadamard" | "hadamard-lacunary" => Provenance::HadamardLacunary { blocks },
            "grs" | "grs-polynomial" => Provenance::GrsPolynomial {
                m: self.degree as usize,
            },
            "constant" => Provenance::Constant {
                value: self.value,
                max_degree: self.degree,
            },
            "weight-profile" => Provenance::WeightProfile {
                weight,
                max_degree: self.degree,
            },
            "random-uniform" => Provenance::RandomUniform {
                seed,
                max_degree: self.degree,
                both_components: self.both_components,
            },
            other => return Err(Error::InvalidArgument(format!("unknown scheme `{other}`"))),
        })
    }

    fn build(&self, seed: u64) -> Result<CoefficientScheme> {
        match &self.scheme_file {
            Some(path) => {
                CoefficientScheme::read_csv(File::open(path).map_err(|e| Error::io(path, e))?)
            }
            None => self.provenance(seed)?.build(),
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SchemeOnly {
    #[command(flatten)]
    scheme: SchemeArgs,
}

#[derive(Debug, Args, Serialize)]
struct CheckArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// L2_CUM, L1_CUM, L1_SQRT, L2_LOG, BLOCK_SUM or BLOCKWISE.
    #[arg(long, default_value = "L2_LOG")]
    kind: String,
    /// Target weight `g`; defaults to the scheme's block weight.
    #[arg(long)]
    weight: Option<String>,
    #[arg(long)]
    n_max: Option<u64>,
    /// Weight block sums by `j^2`.
    #[arg(long)]
    m_weighted: bool,
    /// Bloch weight, e.g. `bloch-power:0.5`.
    #[arg(long)]
    bloch_w: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct CensusArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    weight: Option<String>,
    /// Threshold sequence `p_j`.
    #[arg(long, default_value = "log")]
    p: String,
    #[arg(long)]
    n_max: Option<u64>,
    #[arg(long)]
    bloch_w: Option<String>,
}

#[derive(Debug, Args, Serialize)]
struct GrowthArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long)]
    model: Option<String>,
    /// Block indices `N` giving radii `1 - 1/n_N`.
    #[arg(long, value_delimiter = ',')]
    radii_blocks: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    radii: Vec<f64>,
    /// Candidate growth functions, e.g. `logpower:0.5`.
    #[arg(long = "candidate")]
    candidates: Vec<String>,
    #[arg(long)]
    refine: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_WORK)]
    max_work: f64,
}

#[derive(Debug, Args, Serialize)]
struct SzArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    #[arg(long, default_value = "rademacher")]
    model: String,
    #[arg(long, value_delimiter = ',', default_value = "8,10")]
    blocks: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.5")]
    constants: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
struct RieszArgs {
    #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5,6")]
    n_terms: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0,1,10,100")]
    offsets: Vec<u64>,
    /// Explicit coefficients; replaces the sign sweep.
    #[arg(long, value_delimiter = ',')]
    coeffs: Vec<f64>,
}

#[derive(Debug, Args, Serialize)]
struct CapArgs {
    #[arg(long, value_delimiter = ',', default_value = "4,8,16,32")]
    degrees: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    combinations: usize,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 2.0)]
    slack: f64,
}

#[derive(Debug, Args, Serialize)]
struct BlochArgs {
    #[command(flatten)]
    scheme: SchemeArgs,
    /// `power` for `w(r) = (1 - r)^alpha`, `log` for `(log 1/(1 - r))^(-alpha)`.
    #[arg(long, default_value = "power")]
    preset: String,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value = "rademacher")]
    model: String,
}

/// Record of one invocation, written before the run and finalized after it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_path: Option<PathBuf>,
    pub config_hash: String,
    pub output_dir: PathBuf,
    pub tool_version: String,
    pub seed: u64,
    pub argv: Vec<String>,
    pub status: String,
    pub wall_time_s: Option<f64>,
}

impl RunManifest {
    fn write(&self) -> Result<()> {
        write_json(&self.output_dir.join("manifest.json"), self)
    }
}

const DEFAULT_SEED: u64 = 1;

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return clap_failure(e),
    };
    let argv: Vec<String> = argv
        .iter()
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match execute(cli, argv) {
        Ok(()) => 0,
        Err(e) => {
            diagnose(&e);
            if e.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn clap_failure(e: clap::Error) -> i32 {
    use clap::error::ErrorKind;
    match e.kind() {
        ErrorKind::DisplayHelp
        | ErrorKind::DisplayVersion
        | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            print!("{e}");
            0
        }
        kind => {
            let text = e.to_string();
            let message = text
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ")
                .to_string();
            let err = if matches!(
                kind,
                ErrorKind::InvalidSubcommand | ErrorKind::MissingSubcommand
            ) {
                let name = match e.get(clap::error::ContextKind::InvalidSubcommand) {
                    Some(clap::error::ContextValue::String(s)) => s.clone(),
                    _ => String::new(),
                };
                Error::UnknownSubcommand(name)
            } else {
                Error::InvalidArgument(message)
            };
            diagnose(&err);
            2
        }
    }
}

fn diagnose(e: &Error) {
    let pointer = match e {
        Error::ConfigInvalid { pointer, .. } => Some(pointer.clone()),
        _ => None,
    };
    let message = match e {
        Error::ConfigInvalid { message, .. } => message.clone(),
        other => other.to_string(),
    };
    let line = serde_json::json!({ "error": e.code(), "pointer": pointer, "message": message });
    eprintln!("{line}");
}

fn execute(cli: Cli, argv: Vec<String>) -> Result<()> {
    let threads = cli.global.threads.unwrap_or(0);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    pool.install(|| dispatch(cli, argv))
}

struct Context {
    global: GlobalArgs,
    seed: u64,
    out: PathBuf,
}

impl Context {
    fn oversample(&self) -> f64 {
        self.global.oversample.unwrap_or(DEFAULT_OVERSAMPLE)
    }

    fn path(&self, name: &str) -> PathBuf {
        self.out.join(name)
    }

    fn csv(&self, name: &str) -> Result<BufWriter<File>> {
        let path = self.path(name);
        println!("writing {}", path.display());
        Ok(BufWriter::new(
            File::create(&path).map_err(|e| Error::io(&path, e))?,
        ))
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        let path = self.path(name);
        println!("writing {}", path.display());
        write_json(&path, value)
    }

    fn plot(&self, source: PlotSource, kind: PlotKind) -> Result<()> {
        for p in emit_plotdata(&source, kind, &self.out)? {
            println!("writing {}", p.display());
        }
        Ok(())
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    std::io::Write::write_all(&mut w, b"\n").map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn hash_json<T: Serialize>(value: &T) -> String {
    hex::encode(Sha256::digest(
        serde_json::to_vec(value).expect("arguments serialize"),
    ))
}

/// Loads a JSON file, mapping every failure to `CONFIG_INVALID` with a JSON pointer.
pub fn load_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::ConfigInvalid {
        pointer: String::new(),
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let mut pointer = String::new();
        for seg in e.path().iter() {
            use serde_path_to_error::Segment;
            match seg {
                Segment::Seq { index } => pointer.push_str(&format!("/{index}")),
                Segment::Map { key } => {
                    pointer.push_str(&format!("/{}", key.replace('~', "~0").replace('/', "~1")))
                }
                Segment::Enum { variant } => pointer.push_str(&format!("/{variant}")),
                Segment::Unknown => pointer.push_str("/?"),
            }
        }
        Error::ConfigInvalid {
            pointer,
            message: e.into_inner().to_string(),
        }
    })
}

fn dispatch(cli: Cli, argv: Vec<String>) -> Result<()> {
    let start = Instant::now();
    let Cli { global, command } = cli;
    let experiment = match (&command, &global.config) {
        (Command::Run, None) => {
            return Err(Error::ConfigInvalid {
                pointer: String::new(),
                message: "`run` needs --config".into(),
            })
        }
        (Command::Run | Command::Growth(_) | Command::Analytic(_), Some(path)) => {
            let mut cfg: ExperimentConfig = load_config(path)?;
            if let Some(s) = global.seed {
                cfg.seed = s;
            }
            if let Some(t) = global.trials {
                cfg.trials = t;
            }
            if let Some(o) = global.oversample {
                cfg.oversample = o;
            }
            if matches!(command, Command::Analytic(_)) {
                cfg.flavor = Flavor::AnalyticComplex;
            }
            Some(cfg)
        }
        (Command::Growth(a), None) => Some(growth_config(
            &global,
            global.seed.unwrap_or(DEFAULT_SEED),
            a,
            Flavor::RealHarmonic,
        )?),
        (Command::Analytic(a), None) => Some(growth_config(
            &global,
            global.seed.unwrap_or(DEFAULT_SEED),
            a,
            Flavor::AnalyticComplex,
        )?),
        _ => None,
    };
    let seed = experiment
        .as_ref()
        .map_or(global.seed.unwrap_or(DEFAULT_SEED), |c| c.seed);
    fs::create_dir_all(&global.out).map_err(|e| Error::io(&global.out, e))?;
    let config_hash = match &experiment {
        Some(cfg) => cfg.hash(),
        None => hash_json(&(&command, &global.trials, &global.oversample, seed)),
    };
    let mut manifest = RunManifest {
        subcommand: command.name().to_string(),
        config_path: global.config.clone(),
        config_hash,
        output_dir: global.out.clone(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        argv,
        status: "running".into(),
        wall_time_s: None,
    };
    manifest.write()?;
    let ctx = Context {
        out: global.out.clone(),
        global,
        seed,
    };
    let result = match (&command, experiment) {
        (_, Some(cfg)) => growth_from_config(&ctx, cfg),
        (Command::Weights(a), None) => weights(&ctx, a),
        (Command::Scheme(a), None) => scheme(&ctx, &a.scheme),
        (Command::Check(a), None) => check(&ctx, a),
        (Command::Census(a), None) => census(&ctx, a),
        (Command::ProbeSz(a), None) => probe_sz(&ctx, a),
        (Command::ProbeRiesz(a), None) => probe_riesz(&ctx, a),
        (Command::Cap(a), None) => cap(&ctx, a),
        (Command::Bloch(a), None) => bloch(&ctx, a),
        (Command::Run | Command::Growth(_) | Command::Analytic(_), None) => {
            unreachable!("growth commands always carry a config")
        }
    };
    manifest.status = if result.is_ok() { "ok" } else { "failed" }.into();
    manifest.wall_time_s = Some(start.elapsed().as_secs_f64());
    manifest.write()?;
    result
}

fn weights(ctx: &Context, a: &WeightsArgs) -> Result<()> {
    let w: Weight = format!("{}:{}", a.family, a.alpha).parse()?;
    let blocks = block_sequence(&w, a.ratio_a, a.n0, a.k_max, !a.allow_slow_growth)?;
    blocks.write_csv(ctx.csv("blocks.csv")?)?;
    let audit = doubling_audit(&w, a.audit_x_max, 2000)?;
    ctx.json(
        "doubling.json",
        &serde_json::json!({
            "weight": w,
            "d_hat": audit.d_hat,
            "worst_x": audit.worst_x,
            "analytic": w.analytic_doubling(),
        }),
    )
}

fn scheme(ctx: &Context, a: &SchemeArgs) -> Result<()> {
    let s = a.build(ctx.seed)?;
    s.write_csv(ctx.csv("scheme.csv")?)?;
    if let Some(b) = s.blocks() {
        b.write_csv(ctx.csv("blocks.csv")?)?;
    }
    Ok(())
}

fn target_weight(explicit: &Option<String>, s: &CoefficientScheme) -> Result<Weight> {
    match explicit {
        Some(w) => w.parse(),
        None => Ok(s.blocks().map_or_else(
            || Weight::power(1.0).expect("valid"),
            |b| b.weight().clone(),
        )),
    }
}

fn parse_opt_weight(w: &Option<String>) -> Result<Option<Weight>> {
    w.as_deref().map(str::parse).transpose()
}

fn check(ctx: &Context, a: &CheckArgs) -> Result<()> {
    let s = a.scheme.build(ctx.seed)?;
    let weight = target_weight(&a.weight, &s)?;
    let bloch = parse_opt_weight(&a.bloch_w)?;
    let report: ScoreReport = match a.kind.to_ascii_uppercase().as_str() {
        k @ ("BLOCK_SUM" | "BLOCKWISE") => {
            let blocks = s
                .blocks()
                .ok_or_else(|| Error::InvalidArgument(format!("{k} needs a scheme with blocks")))?;
            let opts = BlockOptions {
                m_weighted: a.m_weighted,
                bloch_w: bloch.as_ref(),
            };
            if k == "BLOCK_SUM" {
                score_block_sum(&s, blocks, &weight, opts)?
            } else {
                score_blockwise(&s, blocks, &weight, opts)?
            }
        }
        other => {
            let kind: SupRatioKind = other.parse()?;
            score_sup_ratio(kind, &s, &weight, a.n_max.unwrap_or(s.degree().max(1)))?
        }
    };
    ctx.json("score.json", &report)?;
    report.write_csv(ctx.csv("score.csv")?)?;
    ctx.plot(PlotSource::Score(&report), PlotKind::Score)
}

fn census(ctx: &Context, a: &CensusArgs) -> Result<()> {
    let s = a.scheme.build(ctx.seed)?;
    let weight = target_weight(&a.weight, &s)?;
    let bloch = parse_opt_weight(&a.bloch_w)?;
    let p: NuSequence = a.p.parse()?;
    let report = coefficient_census(
        &s,
        &weight,
        p,
        a.n_max.unwrap_or(s.degree().max(1)),
        bloch.as_ref(),
    )?;
    ctx.json("census.json", &report)?;
    report.write_csv(ctx.csv("census.csv")?)?;
    if let Some(blocks) = s.blocks() {
        ctx.json(
            "liminf.json",
            &liminf_profile(&s, blocks, &weight, bloch.as_ref())?,
        )?;
    }
    ctx.plot(PlotSource::Census(&report), PlotKind::Census)
}

fn growth_config(
    global: &GlobalArgs,
    seed: u64,
    a: &GrowthArgs,
    flavor: Flavor,
) -> Result<ExperimentConfig> {
    let provenance = match &a.scheme.scheme_file {
        Some(_) => {
            return Err(Error::InvalidArgument(
                "growth ensembles rebuild the scheme from its recipe; use --scheme".into(),
            ))
        }
        None => a.scheme.provenance(seed)?,
    };
    let default_model = match flavor {
        Flavor::RealHarmonic => "rademacher",
        Flavor::AnalyticComplex => "steinhaus",
    };
    let model: RandomModel = a.model.as_deref().unwrap_or(default_model).parse()?;
    let radii = if !a.radii.is_empty() {
        RadiiRule::Explicit {
            radii: a.radii.clone(),
        }
    } else if !a.radii_blocks.is_empty() {
        RadiiRule::BlockRadii {
            indices: a.radii_blocks.clone(),
        }
    } else {
        let k = provenance
            .blocks()?
            .ok_or_else(|| {
                Error::InvalidArgument("give --radii for schemes without blocks".into())
            })?
            .k_max();
        RadiiRule::BlockRadii {
            indices: (1..=k).collect(),
        }
    };
    let mut candidates = a
        .candidates
        .iter()
        .map(|c| Ok(Candidate::new(c, c.parse()?)))
        .collect::<Result<Vec<_>>>()?;
    if candidates.is_empty() {
        if let Some(b) = provenance.blocks()? {
            candidates.push(Candidate::new("block_weight", b.weight().clone()));
        }
    }
    Ok(ExperimentConfig {
        scheme: provenance,
        model,
        seed,
        trials: global.trials.unwrap_or(200),
        radii,
        oversample: global.oversample.unwrap_or(DEFAULT_OVERSAMPLE),
        refine: a.refine,
        candidates,
        flavor,
        max_work: a.max_work,
    })
}

fn growth_from_config(ctx: &Context, cfg: ExperimentConfig) -> Result<()> {
    ctx.json("config.json", &cfg)?;
    let report = run_growth_ensemble(&cfg)?;
    println!("{} trials in {:.2} s", report.trials, report.wall_time_s);
    ctx.json("report.json", &report)?;
    report.write_radii_csv(ctx.csv("radii.csv")?)?;
    for table in &report.candidates {
        report.write_candidate_csv(
            table,
            ctx.csv(&format!("candidate_{}.csv", file_safe(&table.name)))?,
        )?;
    }
    if report.radii.len() >= 3 && !cfg.candidates.is_empty() {
        ctx.json("fit.json", &fit_growth(&report, &cfg.candidates)?)?;
    }
    ctx.plot(PlotSource::Growth(&report), PlotKind::Growth)
}

fn file_safe(name: &str) -> String {
    name.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn probe_sz(ctx: &Context, a: &SzArgs) -> Result<()> {
    let s = a.scheme.build(ctx.seed)?;
    let model: RandomModel = a.model.parse()?;
    let trials = ctx.global.trials.unwrap_or(500);
    let report = salem_zygmund_probe(
        &s,
        &model,
        &SeedSpec::new(ctx.seed),
        trials,
        &a.blocks,
        &a.constants,
        ctx.oversample(),
    )?;
    ctx.json("sz.json", &report)?;
    let mut w = csv::Writer::from_writer(ctx.csv("sz.csv")?);
    w.write_record([
        "block",
        "n_k",
        "r",
        "R",
        "T4",
        "c_implied",
        "q05",
        "q10",
        "median",
        "q90",
    ])?;
    for r in &report.rows {
        w.write_record(
            [
                r.block as f64,
                r.n_k as f64,
                r.r,
                r.r_sum,
                r.t4,
                r.c_implied,
                r.q05,
                r.q10,
                r.median,
                r.q90,
            ]
            .map(|v| v.to_string()),
        )?;
    }
    w.flush().map_err(|e| Error::io(ctx.path("sz.csv"), e))?;
    Ok(())
}

fn write_riesz_rows(ctx: &Context, rows: &[RieszRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(ctx.csv("riesz.csv")?);
    w.write_record(["n_terms", "offset", "sum_abs", "lower", "upper", "ratio"])?;
    for r in rows {
        w.write_record([
            r.n_terms.to_string(),
            r.offset.to_string(),
            r.sum_abs.to_string(),
            r.lower.to_string(),
            r.upper.to_string(),
            r.ratio.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io(ctx.path("riesz.csv"), e))?;
    Ok(())
}

fn probe_riesz(ctx: &Context, a: &RieszArgs) -> Result<()> {
    if !a.coeffs.is_empty() {
        let rows = a
            .offsets
            .iter()
            .map(|&off| riesz_probe(&a.coeffs, off, ctx.oversample()))
            .collect::<Result<Vec<_>>>()?;
        ctx.json("riesz.json", &rows)?;
        return write_riesz_rows(ctx, &rows);
    }
    let sweep = riesz_sign_sweep(&a.n_terms, &a.offsets, ctx.oversample())?;
    ctx.json("riesz.json", &sweep)?;
    let worst: Vec<RieszRow> = sweep.iter().map(|s| s.worst.clone()).collect();
    write_riesz_rows(ctx, &worst)
}

fn cap(ctx: &Context, a: &CapArgs) -> Result<()> {
    let report = cap_stability_check(
        &a.degrees,
        a.combinations,
        a.alpha,
        a.slack,
        &SeedSpec::new(ctx.seed),
    )?;
    println!(
        "cap stability {}",
        if report.pass { "passes" } else { "fails" }
    );
    ctx.json("cap.json", &report)?;
    let rows: Vec<CapReport> = report
        .rows
        .iter()
        .map(|r| CapReport {
            degree: r.degree,
            alpha: a.alpha,
            fraction: r.min_fraction,
            grid_k: r.grid_k,
            c_implied: r.c_min,
        })
        .collect();
    write_cap_csv(&rows, ctx.csv("cap.csv")?)
}

fn bloch(ctx: &Context, a: &BlochArgs) -> Result<()> {
    let w = match a.preset.as_str() {
        "power" => Weight::bloch_power(a.alpha)?,
        "log" => Weight::bloch_log(a.alpha)?,
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown Bloch preset `{other}`"
            )))
        }
    };
    let s = a.scheme.build(ctx.seed)?;
    let blocks = s.blocks().ok_or_else(|| {
        Error::InvalidArgument("the Bloch criteria need a scheme with blocks".into())
    })?;
    let opts = BlockOptions {
        m_weighted: true,
        bloch_w: Some(&w),
    };
    let weight = blocks.weight().clone();
    let blockwise = score_blockwise(&s, blocks, &weight, opts)?;
    let block_sum = score_block_sum(&s, blocks, &weight, opts)?;
    ctx.json("bloch_blockwise.json", &blockwise)?;
    blockwise.write_csv(ctx.csv("bloch_blockwise.csv")?)?;
    ctx.json("bloch_block_sum.json", &block_sum)?;
    let model: RandomModel = a.model.parse()?;
    let series = randomize(
        &s,
        &model,
        &SeedSpec::new(ctx.seed),
        0,
        Flavor::RealHarmonic,
    )?;
    let radii: Vec<f64> = blocks.ends()[1..]
        .iter()
        .map(|&n| 1.0 - 1.0 / n as f64)
        .collect();
    let profile = bloch_profile(&series, &radii, &w, ctx.oversample(), true)?;
    ctx.json("bloch_profile.json", &profile)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_in(dir: &Path, args: &[&str]) -> i32 {
        let mut v = vec!["growthlab".to_string()];
        v.extend(args.iter().map(|s| s.to_string()));
        v.push("--out".into());
        v.push(dir.display().to_string());
        run(v)
    }

    #[test]
    fn weights_writes_dyadic_blocks() {
        let dir = tempfile::tempdir().unwrap();
        let code = run_in(
            dir.path(),
            &[
                "weights",
                "--family",
                "power",
                "--alpha",
                "1",
                "--ratio-A",
                "2",
                "--n0",
                "1",
                "--k-max",
                "10",
            ],
        );
        assert_eq!(code, 0);
        let text = fs::read_to_string(dir.path().join("blocks.csv")).unwrap();
        let ns: Vec<u64> = text
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(ns, (0..=10).map(|k| 1u64 << k).collect::<Vec<_>>());
        let m: RunManifest =
            serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
                .unwrap();
        assert_eq!(m.status, "ok");
        assert_eq!(m.subcommand, "weights");
    }

    #[test]
    fn missing_config_is_validation_error() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(
            run_in(
                dir.path(),
                &["run", "--config", "/nonexistent/missing.json"]
            ),
            2
        );
    }

    #[test]
    fn unknown_subcommand_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(run_in(dir.path(), &["frobnicate"]), 2);
    }

    #[test]
    fn config_pointer_names_field() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(
            &path,
            r#"{"scheme": {"scheme": "remark32", "k_max": 2}, "model": {"kind": "rademacher"}, "seed": 1, "trials": "many", "radii": {"rule": "explicit", "radii": [0.5]}}"#,
        )
        .unwrap();
        match load_config::<ExperimentConfig>(&path) {
            Err(Error::ConfigInvalid { pointer, .. }) => assert_eq!(pointer, "/trials"),
            other => panic!("unexpected {other:?}"),
        }
    }
}
