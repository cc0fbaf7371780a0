//! Command-line front end: parses a run configuration, evaluates one
//! subcommand on a system file and writes a deterministic report.
//!
//! Exit codes: 0 on success, 1 on invalid input, 2 when the report carries
//! a flag (truncated counts or an inconclusive drop test).

pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, ValueEnum};
use ifsdim::dimension::{
    default_partition, lyapunov, projection_dimension, qint_lower_bound, sample_points, verify_partition,
    DimensionReport, DimensionSettings, DropVerdict, EmpiricalSettings, DEFAULT_LYAPUNOV_N, DEFAULT_POINTS,
    DEFAULT_POINT_DEPTH,
};
use ifsdim::overlap::{
    measure_overlap, topological_overlap, OverlapEstimate, DEFAULT_COVER_DEPTH, DEFAULT_NODE_BUDGET,
};
use ifsdim::thermo::{pressure, variational_residual};
use ifsdim::{BernoulliWeights, GibbsMeasure, IfsSystem, LocalPotential, OverlapSettings, SystemFile, Word};

use report::{points_csv, to_csv_row, to_json, write_output, Object, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_FLAGGED: i32 = 2;

pub const MAX_N: usize = 64;
pub const MAX_SAMPLES: usize = 10_000_000;
pub const MAX_COVER_DEPTH: usize = 30;
pub const MAX_Q: usize = 12;
pub const MIN_EMPIRICAL_POINTS: usize = 1000;

/// Header fields shared by every report, in output order.
pub const REPORT_KEYS: [&str; 10] = [
    "h", "chi", "log_o", "log_o_err", "hd", "hd_naive", "bound", "drop", "separated", "flags",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Dimension formula, bounds and drop test
    Dimension,
    /// Overlap number estimate
    Overlap,
    /// Lyapunov exponent
    Lyapunov,
    /// Topological pressure of a potential
    Pressure,
    /// Partition lower bound
    Bound,
    /// Formula value next to the empirical pointwise dimension
    Verify,
    /// Sampled points of the projected measure
    Cloud,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OverlapKind {
    /// `o(S, μ)` with the genericity filter
    Measure,
    /// `o(S)` from uniform samples
    Topological,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Psi {
    /// `ψ = 0`
    Zero,
    /// `ψ = log p` from the weights (uniform when absent)
    Weights,
    /// The potential of the system file
    Potential,
}

/// Parsed command line of one run.
#[derive(Clone, Debug, PartialEq, Parser)]
#[command(name = "ifsdim", version, about = "Dimension of self-conformal measures with overlaps")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// System file (JSON)
    #[arg(long)]
    pub system: PathBuf,
    /// Word length, 1..=64
    #[arg(long, default_value_t = 12)]
    pub n: usize,
    /// Monte Carlo samples
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Master seed
    #[arg(long)]
    pub seed: u64,
    /// Depth of the limit-set cover used by membership tests, 0..=30
    #[arg(long, default_value_t = DEFAULT_COVER_DEPTH)]
    pub cover_depth: usize,
    /// Genericity tolerance; default 0.1·(max ψ - min ψ)
    #[arg(long)]
    pub tau: Option<f64>,
    /// Block length of the partition, 1..=12
    #[arg(long, default_value_t = 1)]
    pub q: usize,
    /// Output format; csv for cloud, json otherwise
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Points for the empirical dimension or the cloud
    #[arg(long)]
    pub points: Option<usize>,
    /// Which overlap number the overlap command estimates
    #[arg(long, value_enum, default_value_t = OverlapKind::Measure)]
    pub kind: OverlapKind,
    /// Potential for the pressure command; the file's potential or weights when absent
    #[arg(long, value_enum)]
    pub psi: Option<Psi>,
    /// Word length for Lyapunov sampling
    #[arg(long, default_value_t = DEFAULT_LYAPUNOV_N)]
    pub lyapunov_n: usize,
    /// Search nodes per overlap sample before its count is truncated
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: u64,
}

impl RunConfig {
    /// Parses an argument list that starts with the program name.
    pub fn parse_args<I, T>(argv: I) -> std::result::Result<Self, clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        Self::try_parse_from(argv)
    }

    /// An argument list (program name first) that parses back to `self`.
    pub fn to_args(&self) -> Vec<OsString> {
        let mut a: Vec<OsString> = vec!["ifsdim".into(), value_name(self.command).into()];
        let mut flag = |name: &str, v: OsString| {
            a.push(format!("--{name}").into());
            a.push(v);
        };
        flag("system", self.system.clone().into_os_string());
        flag("n", self.n.to_string().into());
        flag("samples", self.samples.to_string().into());
        flag("seed", self.seed.to_string().into());
        flag("cover-depth", self.cover_depth.to_string().into());
        if let Some(t) = self.tau {
            flag("tau", format!("{t:?}").into());
        }
        flag("q", self.q.to_string().into());
        if let Some(f) = self.format {
            flag("format", value_name(f).into());
        }
        if let Some(o) = &self.out {
            flag("out", o.clone().into_os_string());
        }
        if let Some(p) = self.points {
            flag("points", p.to_string().into());
        }
        flag("kind", value_name(self.kind).into());
        if let Some(p) = self.psi {
            flag("psi", value_name(p).into());
        }
        flag("lyapunov-n", self.lyapunov_n.to_string().into());
        flag("node-budget", self.node_budget.to_string().into());
        a
    }

    /// Range checks not expressible as clap parsers.
    pub fn validate(&self) -> Result<()> {
        let check = |ok: bool, msg: &str| if ok { Ok(()) } else { Err(anyhow!("{msg}")) };
        check((1..=MAX_N).contains(&self.n), "--n must be in 1..=64")?;
        check(
            (1..=MAX_SAMPLES).contains(&self.samples),
            "--samples must be in 1..=10000000",
        )?;
        check(self.cover_depth <= MAX_COVER_DEPTH, "--cover-depth must be at most 30")?;
        check(self.node_budget >= 1, "--node-budget must be at least 1")?;
        check(
            self.tau.map_or(true, |t| t > 0.0 && t.is_finite()),
            "--tau must be positive and finite",
        )?;
        check((1..=MAX_Q).contains(&self.q), "--q must be in 1..=12")?;
        check(
            (1..=MAX_SAMPLES).contains(&self.lyapunov_n),
            "--lyapunov-n must be in 1..=10000000",
        )?;
        if let Some(p) = self.points {
            check((1..=MAX_SAMPLES).contains(&p), "--points must be in 1..=10000000")?;
            if matches!(self.command, Command::Dimension | Command::Verify) {
                check(
                    p >= MIN_EMPIRICAL_POINTS,
                    "--points must be at least 1000 for the empirical dimension",
                )?;
            }
        }
        Ok(())
    }

    pub fn output_format(&self) -> Format {
        self.format.unwrap_or(match self.command {
            Command::Cloud => Format::Csv,
            _ => Format::Json,
        })
    }

    fn overlap_settings(&self) -> OverlapSettings {
        let mut s = OverlapSettings::new(self.n, self.samples, self.seed);
        s.cover_depth = self.cover_depth;
        s.tau = self.tau;
        s.node_budget = self.node_budget;
        s
    }

    /// Everything needed to rerun, except the output location.
    fn echo(&self, file: &SystemFile) -> Object {
        Object::new()
            .with("command", value_name(self.command))
            .with("system", self.system.display().to_string())
            .with("system_definition", Value::Raw(file.to_compact_json()))
            .with("n", self.n)
            .with("samples", self.samples)
            .with("seed", self.seed)
            .with("cover_depth", self.cover_depth)
            .with("tau", self.tau)
            .with("q", self.q)
            .with("format", value_name(self.output_format()))
            .with("points", self.points)
            .with("kind", value_name(self.kind))
            .with("psi", self.psi.map(value_name))
            .with("lyapunov_n", self.lyapunov_n)
            .with("node_budget", self.node_budget)
            .with("version", env!("CARGO_PKG_VERSION"))
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_string()
}

/// A finished report: the bytes to write and the flags that set the exit
/// code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub flags: Vec<String>,
}

/// Runs one command line (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::parse_args(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&config).and_then(|o| {
        write_output(&o.text, config.out.as_deref())?;
        Ok(o)
    }) {
        Ok(o) if o.flags.is_empty() => EXIT_OK,
        Ok(o) => {
            eprintln!("flags: {}", o.flags.join(", "));
            EXIT_FLAGGED
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INVALID
        }
    }
}

/// Evaluates a configuration without writing anything.
pub fn execute(config: &RunConfig) -> Result<Outcome> {
    config.validate()?;
    let file = SystemFile::load(&config.system)?;
    let sys = file.build().context("building the system")?;
    let m = sys.len();
    match config.command {
        Command::Dimension => dimension(config, &file, &sys, config.points),
        Command::Verify => dimension(config, &file, &sys, Some(config.points.unwrap_or(DEFAULT_POINTS))),
        Command::Overlap => overlap(config, &file, &sys),
        Command::Lyapunov => {
            let mu = file.measure(m)?;
            let l = lyapunov(&sys, &mu, config.lyapunov_n, config.samples, config.seed)?;
            let mut o = header(Header {
                h: Some(mu.entropy()),
                chi: Some(l.value()),
                ..Header::default()
            });
            o.push(
                "lyapunov",
                Object::new()
                    .with("n", l.n)
                    .with("samples", l.samples)
                    .with("mean", l.mean)
                    .with("std_err", l.std_err)
                    .with("exact", l.exact)
                    .with("bias_bound", l.bias_bound),
            );
            finish(config, &file, o, Vec::new())
        }
        Command::Pressure => {
            let psi = match config.psi {
                Some(Psi::Zero) => LocalPotential::zero(m),
                Some(Psi::Potential) => file
                    .potential(m)?
                    .ok_or_else(|| anyhow!("the system file has no potential"))?,
                Some(Psi::Weights) | None => match file.potential(m)? {
                    Some(p) if config.psi.is_none() => p,
                    _ => LocalPotential::from_bernoulli(&weights(&file, m)?),
                },
            };
            let p = pressure(&psi)?;
            let mu = GibbsMeasure::equilibrium(&psi)?;
            let mut o = header(Header {
                h: Some(mu.entropy()),
                ..Header::default()
            });
            o.push("pressure", p);
            o.push("integral", mu.integral(&psi));
            o.push("variational_residual", variational_residual(&psi, &mu)?);
            o.push("locality", psi.locality());
            finish(config, &file, o, Vec::new())
        }
        Command::Bound => {
            let mu = file.measure(m)?;
            let l = lyapunov(&sys, &mu, config.lyapunov_n, config.samples, config.seed)?;
            let chi = l.value();
            let scheme = default_partition(&sys, config.q)?;
            let check = verify_partition(&sys, &scheme)?;
            let b = qint_lower_bound(&scheme, &mu, chi)?;
            let h = mu.entropy();
            let mut o = header(Header {
                h: Some(h),
                chi: Some(chi),
                hd_naive: Some(h / -chi),
                bound: Some(b.value),
                ..Header::default()
            });
            o.push("chi_err", l.error());
            o.push("bound_raw", b.raw);
            o.push("bound_clamped", b.clamped);
            o.push("partition_verified", check.accepted);
            o.push("groups", groups_value(scheme.groups()));
            finish(config, &file, o, Vec::new())
        }
        Command::Cloud => {
            let mu = file.measure(m)?;
            let n = config.points.unwrap_or(DEFAULT_POINTS);
            let pts = sample_points(&sys, &mu, n, DEFAULT_POINT_DEPTH, config.seed)?;
            let dim = sys.ambient_dim();
            let text = match config.output_format() {
                Format::Csv => points_csv(&pts, dim),
                Format::Json => {
                    let rows: Vec<Value> = pts
                        .iter()
                        .map(|p| {
                            if dim == 1 {
                                Value::from(vec![p.re])
                            } else {
                                Value::from(vec![p.re, p.im])
                            }
                        })
                        .collect();
                    let o = Object::new()
                        .with("dimension", dim)
                        .with("points", Value::Array(rows))
                        .with("config", config.echo(&file));
                    to_json(&o.into())
                }
            };
            Ok(Outcome {
                text,
                flags: Vec::new(),
            })
        }
    }
}

fn weights(file: &SystemFile, m: usize) -> Result<BernoulliWeights> {
    let p = file.weights()?.unwrap_or_else(|| BernoulliWeights::uniform(m));
    if p.len() != m {
        bail!("{} weights for {m} maps", p.len());
    }
    Ok(p)
}

#[derive(Default)]
struct Header {
    h: Option<f64>,
    chi: Option<f64>,
    log_o: Option<f64>,
    log_o_err: Option<f64>,
    hd: Option<f64>,
    hd_naive: Option<f64>,
    bound: Option<f64>,
    verdict: Option<DropVerdict>,
    flags: Vec<String>,
}

fn header(h: Header) -> Object {
    Object::new()
        .with("h", h.h)
        .with("chi", h.chi)
        .with("log_o", h.log_o)
        .with("log_o_err", h.log_o_err)
        .with("hd", h.hd)
        .with("hd_naive", h.hd_naive)
        .with("bound", h.bound)
        .with("drop", h.verdict.map(DropVerdict::drop))
        .with("separated", h.verdict.map(DropVerdict::separated))
        .with("flags", h.flags)
}

fn finish(config: &RunConfig, file: &SystemFile, mut o: Object, warnings: Vec<String>) -> Result<Outcome> {
    let flags = match o.get("flags") {
        Some(Value::Array(items)) => items
            .iter()
            .filter_map(|v| match v {
                Value::Str(s) => Some(s.clone()),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    };
    o.push("warnings", warnings);
    let text = match config.output_format() {
        Format::Json => {
            o.push("config", config.echo(file));
            to_json(&o.into())
        }
        Format::Csv => to_csv_row(&o, &REPORT_KEYS[..9]),
    };
    Ok(Outcome { text, flags })
}

fn word_value(w: &Word) -> Value {
    Value::Array(w.iter().map(|s| Value::Int(i64::from(s))).collect())
}

fn groups_value(groups: &[Vec<Word>]) -> Value {
    Value::Array(
        groups
            .iter()
            .map(|g| Value::Array(g.iter().map(word_value).collect()))
            .collect(),
    )
}

fn overlap_value(e: &OverlapEstimate) -> Object {
    Object::new()
        .with("n", e.n)
        .with("samples", e.samples)
        .with("tau", e.tau)
        .with("mean", e.mean)
        .with("std_err", e.std_err)
        .with("lower", e.lower)
        .with("upper", e.upper)
        .with("truncated", e.truncated)
        .with("zero_counts", e.zero_counts)
        .with("tau_warning", e.tau_warning)
        .with(
            "sensitivity",
            Value::Array(
                e.sensitivity
                    .iter()
                    .map(|s| {
                        Object::new()
                            .with("tau", s.tau)
                            .with("mean", s.mean)
                            .with("std_err", s.std_err)
                            .into()
                    })
                    .collect(),
            ),
        )
}

fn overlap_flags(e: &OverlapEstimate, verdict: DropVerdict) -> (Vec<String>, Vec<String>) {
    let mut flags = Vec::new();
    if e.truncated > 0 {
        flags.push("truncated".to_string());
    }
    if verdict == DropVerdict::Inconclusive {
        flags.push("inconclusive".to_string());
    }
    let mut warnings = Vec::new();
    if e.tau_warning {
        warnings.push("tau_warning".to_string());
    }
    if e.zero_counts > 0 {
        warnings.push("zero_counts".to_string());
    }
    (flags, warnings)
}

fn overlap(config: &RunConfig, file: &SystemFile, sys: &IfsSystem) -> Result<Outcome> {
    let settings = config.overlap_settings();
    let (h, e) = match config.kind {
        OverlapKind::Measure => {
            let mu = file.measure(sys.len())?;
            (mu.entropy(), measure_overlap(sys, &mu, &settings)?)
        }
        OverlapKind::Topological => ((sys.len() as f64).ln(), topological_overlap(sys, &settings)?),
    };
    let verdict = DropVerdict::from_bracket(e.lower, e.upper, e.n);
    let (flags, warnings) = overlap_flags(&e, verdict);
    let mut o = header(Header {
        h: Some(h),
        log_o: Some(e.mean),
        log_o_err: Some(e.std_err),
        verdict: Some(verdict),
        flags,
        ..Header::default()
    });
    o.push("verdict", verdict.as_str());
    o.push("overlap", overlap_value(&e));
    finish(config, file, o, warnings)
}

fn dimension(config: &RunConfig, file: &SystemFile, sys: &IfsSystem, points: Option<usize>) -> Result<Outcome> {
    let mu = file.measure(sys.len())?;
    if config.command == Command::Verify && mu.locality() != 1 {
        bail!("verify needs a Bernoulli measure; the empirical estimate samples the first projection only");
    }
    let mut settings = DimensionSettings::new(config.n, config.samples, config.seed);
    settings.overlap = config.overlap_settings();
    settings.lyapunov_n = config.lyapunov_n;
    settings.scheme = Some(default_partition(sys, config.q)?);
    settings.empirical = points.map(|p| EmpiricalSettings::new(p, config.seed));
    let r = projection_dimension(sys, &mu, &settings)?;
    dimension_outcome(config, file, &r, settings.scheme.as_ref().unwrap().groups())
}

fn dimension_outcome(
    config: &RunConfig,
    file: &SystemFile,
    r: &DimensionReport,
    groups: &[Vec<Word>],
) -> Result<Outcome> {
    let (flags, mut warnings) = overlap_flags(&r.overlap, r.verdict);
    if r.log_o_clamped {
        warnings.push("log_o_clamped".to_string());
    }
    let bound = r.bound.expect("dimension runs carry a scheme");
    if bound.clamped {
        warnings.push("bound_clamped".to_string());
    }
    let mut o = header(Header {
        h: Some(r.h),
        chi: Some(r.chi),
        log_o: Some(r.log_o),
        log_o_err: Some(r.log_o_err),
        hd: Some(r.hd),
        hd_naive: Some(r.hd_naive),
        bound: Some(bound.value),
        verdict: Some(r.verdict),
        flags,
    });
    o.push("verdict", r.verdict.as_str());
    o.push("hd_err", r.hd_err);
    o.push("chi_err", r.chi_err);
    o.push("log_o_lower", r.log_o_lower);
    o.push("log_o_upper", r.log_o_upper);
    o.push("bound_raw", bound.raw);
    o.push("groups", groups_value(groups));
    o.push("overlap", overlap_value(&r.overlap));
    o.push(
        "lyapunov",
        Object::new()
            .with("n", r.lyapunov.n)
            .with("samples", r.lyapunov.samples)
            .with("mean", r.lyapunov.mean)
            .with("std_err", r.lyapunov.std_err)
            .with("exact", r.lyapunov.exact)
            .with("bias_bound", r.lyapunov.bias_bound),
    );
    o.push(
        "empirical",
        match &r.empirical {
            Some(e) => Object::new()
                .with("median", e.median)
                .with("iqr", e.iqr)
                .with("difference", r.hd - e.median)
                .with("pivots", e.slopes.len())
                .with("radii", e.radii.clone())
                .into(),
            None => Value::Null,
        },
    );
    finish(config, file, o, warnings)
}
