use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use kq_core::algebra::{AlgebraKind, TruncatedAlgebra};
use kq_core::mckay::{build_mckay, McKayData};
use kq_core::oracle::{enumerate_colored_partitions, partition_to_rep, ColoredPartition};
use kq_core::pipeline::{run_pipeline, PipelineConfig};
use kq_core::quiver::{frame, ArrowSet};
use kq_core::stability::{
    cartan_blocks, cartan_inverse_nonneg, construct_vprime, face_of, theta_i,
};
use kq_core::{DimVector, GroupFamily, Stability, Vertex, Q};
use serde::Serialize;

use crate::config::{ConfigError, RunConfig, DEFAULT_ALGEBRA_CAP};
use crate::dot::to_dot;
use crate::exec::RayonExecutor;
use crate::formats::{
    DimVectorJson, FormatError, McKayJson, RationalJson, ReportJson, RepresentationJson,
    StabilityJson, VPrimeJson, SCHEMA_VERSION,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_INVARIANT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] kq_core::Error),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        let core = |e: &kq_core::Error| {
            if e.is_resource_guard() {
                EXIT_RESOURCE
            } else if e.is_invariant() {
                EXIT_INVARIANT
            } else {
                EXIT_USAGE
            }
        };
        match self {
            CliError::Core(e) | CliError::Format(FormatError::Core(e)) => core(e),
            CliError::Invariant(_) => EXIT_INVARIANT,
            _ => EXIT_USAGE,
        }
    }
}

type Res<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "kq",
    version,
    about = "Framed McKay quivers, cornered algebras and stability certificates"
)]
pub struct Cli {
    /// Worker threads for solver restarts (0: one per core) [env: KQ_THREADS]
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML file with run settings; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Log progress to stderr; repeat for more
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// McKay graphs
    #[command(subcommand)]
    Mckay(MckayCmd),
    /// Weights, the vector v' and Cartan positivity
    #[command(subcommand)]
    Stability(StabilityCmd),
    /// Truncated path algebras modulo relations
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Checks on representation files
    #[command(subcommand)]
    Rep(RepCmd),
    /// Colored partitions for cyclic groups
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Certificates for a whole (group, I, n_I)
    #[command(subcommand)]
    Pipeline(PipelineCmd),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum TableFormat {
    #[default]
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum QuiverKind {
    /// Every arrow including b and b*
    #[default]
    Framed,
    /// Without b*
    Qstar,
    /// The doubled McKay quiver alone
    Gamma,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Pi,
    A,
    B,
    #[value(name = "b_i", alias = "B_I")]
    BI,
    #[value(name = "a_i", alias = "A_I")]
    AI,
}

#[derive(Args, Debug)]
pub struct GroupArg {
    /// A<n>, D<n>, E6, E7 or E8
    #[arg(long)]
    pub group: String,
}

#[derive(Subcommand, Debug)]
pub enum MckayCmd {
    Show {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    Dot {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum, default_value_t)]
        quiver: QuiverKind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum StabilityCmd {
    /// θ_I at the dimension vector (1, v)
    ThetaI {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "I", value_delimiter = ',', required = true)]
        index_set: Vec<usize>,
        /// Node dimensions of v
        #[arg(long, value_delimiter = ',', required = true)]
        v: Vec<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    Vprime {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long = "I", value_delimiter = ',', required = true)]
        index_set: Vec<usize>,
        #[arg(long = "nI", value_delimiter = ',', required = true)]
        n_i: Vec<u32>,
        /// Starting node dimensions; zero off I when omitted
        #[arg(long, value_delimiter = ',')]
        v: Option<Vec<u32>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Nonnegativity of inverse Cartan matrices of induced subdiagrams
    CartanCheck {
        #[command(flatten)]
        group: GroupArg,
        /// One vertex subset; every proper nonempty subset when omitted
        #[arg(long = "K", value_delimiter = ',')]
        k: Option<Vec<usize>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum AlgebraCmd {
    /// Dimensions of the graded pieces up to a degree cap
    Basis {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long = "I", value_delimiter = ',')]
        index_set: Vec<usize>,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        format: TableFormat,
    },
}

#[derive(Subcommand, Debug)]
pub enum RepCmd {
    /// Dimensions and relations of a representation file
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// King verdict for θ_I or explicit weights
    Stability {
        input: PathBuf,
        #[arg(long = "I", value_delimiter = ',', conflicts_with = "theta")]
        index_set: Option<Vec<usize>>,
        /// Weights at inf, 0, 1, ... as integers or fractions a/b
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        theta: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum OracleCmd {
    /// Colored partitions of ℤ/m with the given content
    Count {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        v: Vec<u32>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Representation of a monomial ideal, as JSON
    Certify {
        #[arg(long)]
        m: usize,
        #[arg(long, value_delimiter = ',', required = true)]
        partition: Vec<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PipelineCmd {
    Run(PipelineArgs),
}

#[derive(Args, Debug, Default)]
pub struct PipelineArgs {
    #[arg(long)]
    pub group: Option<String>,
    #[arg(long = "I", value_delimiter = ',')]
    pub index_set: Option<Vec<usize>>,
    #[arg(long = "nI", value_delimiter = ',')]
    pub n_i: Option<Vec<u32>>,
    /// [env: KQ_SEED]
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// Longest generating path in the restriction to the corner
    #[arg(long)]
    pub cap: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub json: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Normal output goes to `out`, diagnostics to stderr.
pub fn run<I, T>(args: I, env: impl Fn(&str) -> Option<String>, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
    match dispatch(cli, &env, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli, env: &dyn Fn(&str) -> Option<String>, out: &mut dyn Write) -> Res<u8> {
    let file = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let global = RunConfig {
        threads: cli.threads,
        verbosity: (cli.verbose > 0).then_some(cli.verbose),
        ..Default::default()
    };
    let cfg = file.overlay(RunConfig::from_env(env)?).overlay(global);
    match cli.command {
        Command::Mckay(c) => mckay_cmd(c, out),
        Command::Stability(c) => stability_cmd(c, out),
        Command::Algebra(c) => algebra_cmd(c, &cfg, out),
        Command::Rep(c) => rep_cmd(c, out),
        Command::Oracle(c) => oracle_cmd(c, out),
        Command::Pipeline(PipelineCmd::Run(a)) => pipeline_cmd(a, cfg, out),
    }
}

fn group(s: &str) -> Res<(GroupFamily, McKayData)> {
    let g: GroupFamily = s
        .parse()
        .map_err(|e: kq_core::Error| CliError::Usage(e.to_string()))?;
    Ok((g, build_mckay(g)?))
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Res<()> {
    out.write_all(text.as_bytes())
        .map_err(io_err(Path::new("<stdout>")))
}

fn json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

fn write_or_emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Res<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => emit(out, text),
    }
}

fn index_set(mckay: &McKayData, xs: &[usize]) -> Res<BTreeSet<usize>> {
    let set: BTreeSet<usize> = xs.iter().copied().collect();
    if set.len() != xs.len() {
        return Err(CliError::Usage("--I has repeated vertices".into()));
    }
    if let Some(i) = set.iter().find(|&&i| i >= mckay.num_vertices()) {
        return Err(CliError::Usage(format!(
            "vertex {i} out of range for {} (vertices 0..={})",
            mckay.group,
            mckay.rank()
        )));
    }
    Ok(set)
}

fn node_vector(mckay: &McKayData, v: &[u32]) -> Res<DimVector> {
    if v.len() != mckay.num_vertices() {
        return Err(CliError::Usage(format!(
            "expected {} node dimensions, got {}",
            mckay.num_vertices(),
            v.len()
        )));
    }
    Ok(DimVector::framed(1, v.to_vec()))
}

fn n_map(set: &[usize], n: &[u32]) -> Res<BTreeMap<usize, u32>> {
    if set.len() != n.len() {
        return Err(CliError::Usage(
            "--I and --nI must have the same length".into(),
        ));
    }
    Ok(set.iter().copied().zip(n.iter().copied()).collect())
}

fn q_text(x: &Q) -> String {
    x.to_string()
}

fn stability_text(t: &Stability) -> String {
    let nodes: Vec<String> = t.nodes.iter().map(q_text).collect();
    format!("({};{})", q_text(&t.inf), nodes.join(","))
}

fn mckay_cmd(c: MckayCmd, out: &mut dyn Write) -> Res<u8> {
    match c {
        MckayCmd::Show { group: g, format } => {
            let (_, m) = group(&g.group)?;
            m.check_invariants()?;
            let j = McKayJson::from(&m);
            let text = match format {
                Format::Json => json(&j),
                Format::Text => {
                    let mut s = format!(
                        "{} {} order {}\ndims {:?}\n",
                        j.group, j.family, j.order, j.dims
                    );
                    for row in &j.adjacency {
                        s.push_str(&format!("  {row:?}\n"));
                    }
                    s.push_str(&format!("delta {:?}\n", j.delta));
                    s
                }
            };
            emit(out, &text)?;
        }
        MckayCmd::Dot {
            group: g,
            quiver,
            output,
        } => {
            let (gf, m) = group(&g.group)?;
            let set = match quiver {
                QuiverKind::Framed => ArrowSet::Framed,
                QuiverKind::Qstar => ArrowSet::QStar,
                QuiverKind::Gamma => ArrowSet::Gamma,
            };
            let name = format!("{gf} {quiver:?}").to_lowercase();
            write_or_emit(output.as_deref(), &to_dot(&frame(&m), set, &name), out)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CartanReport {
    schema_version: u32,
    group: String,
    subsets: usize,
    blocks: usize,
    failures: Vec<Vec<usize>>,
    all_nonnegative: bool,
}

fn stability_cmd(c: StabilityCmd, out: &mut dyn Write) -> Res<u8> {
    match c {
        StabilityCmd::ThetaI {
            group: g,
            index_set: i,
            v,
            format,
        } => {
            let (_, m) = group(&g.group)?;
            let set = index_set(&m, &i)?;
            let t = theta_i(&m, &set, &node_vector(&m, &v)?)?;
            let text = match format {
                Format::Json => json(&StabilityJson::from(&t)),
                Format::Text => {
                    let face = face_of(&t).map_or("none".to_string(), |f| format!("{f:?}"));
                    format!("theta_I = {}\nface I = {face}\n", stability_text(&t))
                }
            };
            emit(out, &text)?;
        }
        StabilityCmd::Vprime {
            group: g,
            index_set: i,
            n_i,
            v,
            format,
        } => {
            let (_, m) = group(&g.group)?;
            index_set(&m, &i)?;
            let n = n_map(&i, &n_i)?;
            let start = match v {
                Some(v) => node_vector(&m, &v)?,
                None => {
                    let mut d = DimVector::framed(1, vec![0; m.num_vertices()]);
                    for (&k, &x) in &n {
                        d.nodes[k] = x;
                    }
                    d
                }
            };
            let vp = construct_vprime(&m, &n, &start)?;
            let text = match format {
                Format::Json => json(&VPrimeJson::from(&vp)),
                Format::Text => format!(
                    "v' = {}\nN = {}\npath = {:?}\nK' = {:?}\n",
                    vp.v, vp.n, vp.path, vp.k_prime
                ),
            };
            emit(out, &text)?;
        }
        StabilityCmd::CartanCheck {
            group: g,
            k,
            format,
        } => {
            let (_, m) = group(&g.group)?;
            let n = m.num_vertices();
            let subsets: Vec<BTreeSet<usize>> = match k {
                Some(k) => vec![index_set(&m, &k)?],
                None => (1u32..(1 << n) - 1)
                    .map(|mask| (0..n).filter(|b| mask >> b & 1 == 1).collect())
                    .collect(),
            };
            let mut blocks = 0;
            let mut failures = Vec::new();
            for s in &subsets {
                for b in cartan_blocks(&m, s)? {
                    blocks += 1;
                    if !cartan_inverse_nonneg(&b)?.0 {
                        failures.push(b.vertices.clone());
                    }
                }
            }
            let r = CartanReport {
                schema_version: SCHEMA_VERSION,
                group: m.group.to_string(),
                subsets: subsets.len(),
                blocks,
                all_nonnegative: failures.is_empty(),
                failures,
            };
            let text = match format {
                Format::Json => json(&r),
                Format::Text => format!(
                    "{}: {} subsets, {} blocks, inverse Cartan nonnegative: {}\n",
                    r.group, r.subsets, r.blocks, r.all_nonnegative
                ),
            };
            emit(out, &text)?;
            if !r.all_nonnegative {
                return Err(CliError::Invariant(format!(
                    "negative inverse Cartan entries on {:?}",
                    r.failures
                )));
            }
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PieceRow {
    tail: String,
    head: String,
    degree: usize,
    dim: usize,
}

#[derive(Serialize)]
struct BasisReport {
    schema_version: u32,
    group: String,
    kind: String,
    #[serde(rename = "I")]
    index_set: Vec<usize>,
    cap: usize,
    degree_dims: Vec<usize>,
    cumulative: Vec<usize>,
    pieces: Vec<PieceRow>,
}

fn algebra_cmd(c: AlgebraCmd, cfg: &RunConfig, out: &mut dyn Write) -> Res<u8> {
    let AlgebraCmd::Basis {
        group: g,
        kind,
        index_set: i,
        cap,
        format,
    } = c;
    let (_, m) = group(&g.group)?;
    let set = index_set(&m, &i)?;
    let cap = cap.or(cfg.cap).unwrap_or(DEFAULT_ALGEBRA_CAP);
    let k = match kind {
        KindArg::Pi => AlgebraKind::Pi,
        KindArg::A => AlgebraKind::A,
        KindArg::B => AlgebraKind::B,
        KindArg::BI => AlgebraKind::BI,
        KindArg::AI => AlgebraKind::AI,
    };
    let alg = TruncatedAlgebra::new(&frame(&m), k, &set, cap)?;
    let dims = alg.degree_dims();
    let cumulative: Vec<usize> = dims
        .iter()
        .scan(0, |acc, &d| {
            *acc += d;
            Some(*acc)
        })
        .collect();
    let mut counts: BTreeMap<(Vertex, Vertex, usize), usize> = BTreeMap::new();
    for (t, h, d, _) in alg.basis() {
        *counts.entry((t, h, d)).or_default() += 1;
    }
    let kind_name = kind
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    match format {
        TableFormat::Json => {
            let r = BasisReport {
                schema_version: SCHEMA_VERSION,
                group: m.group.to_string(),
                kind: kind_name,
                index_set: set.iter().copied().collect(),
                cap,
                degree_dims: dims,
                cumulative,
                pieces: counts
                    .into_iter()
                    .map(|((t, h, d), n)| PieceRow {
                        tail: t.to_string(),
                        head: h.to_string(),
                        degree: d,
                        dim: n,
                    })
                    .collect(),
            };
            emit(out, &json(&r))?;
        }
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "dim", "cumulative"])
                .and_then(|_| {
                    dims.iter()
                        .zip(&cumulative)
                        .enumerate()
                        .try_for_each(|(d, (n, c))| {
                            w.write_record([d.to_string(), n.to_string(), c.to_string()])
                        })
                })
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let bytes = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
            emit(out, &String::from_utf8(bytes).expect("ascii"))?;
        }
    }
    Ok(EXIT_OK)
}

fn read_rep(path: &Path) -> Res<(GroupFamily, kq_core::Representation<Q>)> {
    let text = std::fs::read_to_string(path).map_err(io_err(path))?;
    let j: RepresentationJson = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(j.to_rep()?)
}

#[derive(Serialize)]
struct RepCheck {
    schema_version: u32,
    group: String,
    dims: DimVectorJson,
    preprojective: bool,
    b_star_zero: bool,
    a_module: bool,
    generated_at_inf: bool,
}

#[derive(Serialize)]
struct RepVerdict {
    schema_version: u32,
    theta: StabilityJson,
    verdict: String,
}

fn parse_q(s: &str) -> Res<Q> {
    let bad = || CliError::Usage(format!("bad weight `{s}`"));
    let (n, d) = match s.trim().split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<i64>().map_err(|_| bad())?,
            d.trim().parse::<i64>().map_err(|_| bad())?,
        ),
        None => (s.trim().parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d == 0 {
        return Err(bad());
    }
    Ok(RationalJson::Small([n, d]).to_q()?)
}

fn rep_cmd(c: RepCmd, out: &mut dyn Write) -> Res<u8> {
    match c {
        RepCmd::Check { input, format } => {
            let (g, rep) = read_rep(&input)?;
            let r = RepCheck {
                schema_version: SCHEMA_VERSION,
                group: g.to_string(),
                dims: (&rep.dim_vector()).into(),
                preprojective: rep.is_preprojective(),
                b_star_zero: rep.map(rep.quiver().b_star()).is_zero(),
                a_module: rep.is_a_module(),
                generated_at_inf: rep.framing_closure().is_full(),
            };
            let text = match format {
                Format::Json => json(&r),
                Format::Text => format!(
                    "{} dims {}\npreprojective relation: {}\nb* = 0: {}\ngenerated at inf: {}\n",
                    r.group,
                    rep.dim_vector(),
                    r.preprojective,
                    r.b_star_zero,
                    r.generated_at_inf
                ),
            };
            emit(out, &text)?;
            if !r.a_module {
                return Err(CliError::Invariant("not a module over A".into()));
            }
        }
        RepCmd::Stability {
            input,
            index_set: i,
            theta,
            format,
        } => {
            let (g, rep) = read_rep(&input)?;
            let m = build_mckay(g)?;
            let t = match (i, theta) {
                (Some(i), None) => theta_i(&m, &index_set(&m, &i)?, &rep.dim_vector())?,
                (None, Some(ws)) => {
                    if ws.len() != m.num_vertices() + 1 {
                        return Err(CliError::Usage(format!(
                            "--theta needs {} weights (inf first)",
                            m.num_vertices() + 1
                        )));
                    }
                    let ws: Vec<Q> = ws.iter().map(|s| parse_q(s)).collect::<Res<_>>()?;
                    Stability {
                        inf: ws[0].clone(),
                        nodes: ws[1..].to_vec(),
                    }
                }
                _ => {
                    return Err(CliError::Usage(
                        "give exactly one of --I and --theta".into(),
                    ))
                }
            };
            let verdict = rep.verdict(&t)?;
            let text = match format {
                Format::Json => json(&RepVerdict {
                    schema_version: SCHEMA_VERSION,
                    theta: (&t).into(),
                    verdict: verdict.as_str().into(),
                }),
                Format::Text => format!("theta {}: {verdict}\n", stability_text(&t)),
            };
            emit(out, &text)?;
        }
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct CountReport {
    schema_version: u32,
    m: usize,
    v: Vec<u32>,
    count: usize,
    partitions: Vec<Vec<u32>>,
}

fn oracle_cmd(c: OracleCmd, out: &mut dyn Write) -> Res<u8> {
    match c {
        OracleCmd::Count { m, v, format } => {
            if v.len() != m {
                return Err(CliError::Usage(format!("--v needs {m} entries")));
            }
            let ps = enumerate_colored_partitions(m, &v)?;
            let text = match format {
                Format::Json => json(&CountReport {
                    schema_version: SCHEMA_VERSION,
                    m,
                    count: ps.len(),
                    partitions: ps.iter().map(|p| p.parts.clone()).collect(),
                    v,
                }),
                Format::Text => format!("{}\n", ps.len()),
            };
            emit(out, &text)?;
        }
        OracleCmd::Certify {
            m,
            partition,
            output,
        } => {
            let g = GroupFamily::Cyclic(m).validate()?;
            let mckay = build_mckay(g)?;
            let p = ColoredPartition::new(partition, m)?;
            let rep = partition_to_rep(&p, &frame(&mckay))?;
            if !rep.is_a_module() || !rep.framing_closure().is_full() {
                return Err(CliError::Invariant(
                    "partition module is not cyclic at inf".into(),
                ));
            }
            write_or_emit(
                output.as_deref(),
                &json(&RepresentationJson::new(g, &rep)),
                out,
            )?;
        }
    }
    Ok(EXIT_OK)
}

fn pipeline_cmd(a: PipelineArgs, base: RunConfig, out: &mut dyn Write) -> Res<u8> {
    let flags = RunConfig {
        group: a.group,
        index_set: a.index_set,
        n_i: a.n_i,
        seed: a.seed,
        restarts: a.restarts,
        max_iters: a.max_iters,
        cap: a.cap,
        output: a.json,
        ..Default::default()
    };
    let cfg = base.overlay(flags);
    let g = cfg
        .group
        .as_deref()
        .ok_or_else(|| CliError::Usage("pipeline run needs --group".into()))?;
    let (gf, m) = group(g)?;
    let i = cfg
        .index_set
        .clone()
        .ok_or_else(|| CliError::Usage("pipeline run needs --I".into()))?;
    let n_i = cfg
        .n_i
        .clone()
        .ok_or_else(|| CliError::Usage("pipeline run needs --nI".into()))?;
    index_set(&m, &i)?;
    let n = n_map(&i, &n_i)?;
    let mut pcfg = PipelineConfig::default();
    pcfg.solver.seed = cfg.seed();
    pcfg.solver.restarts = cfg.restarts();
    pcfg.solver.max_iters = cfg.max_iters();
    pcfg.restrict_cap = cfg.cap;
    let exec = RayonExecutor::new(cfg.threads()).map_err(|e| CliError::Usage(e.to_string()))?;
    log::info!(
        "pipeline {gf} n_I={n:?} seed={} threads={}",
        cfg.seed(),
        exec.threads()
    );
    let report = run_pipeline(gf, &n, &pcfg, &exec);
    let j = ReportJson::from(&report);
    log::info!(
        "quiver variety {}, moduli {}, invariants ok {}",
        j.quiver_variety,
        j.moduli,
        j.invariants_ok
    );
    match &cfg.output {
        Some(p) => {
            std::fs::write(p, json(&j)).map_err(io_err(p))?;
            let vp = j.vprime.as_ref().map(|v| DimVector::from(&v.v).to_string());
            emit(
                out,
                &format!(
                    "{gf} n_I={n:?}: v'={} quiver variety {}, moduli {}, invariants ok {}\n",
                    vp.unwrap_or_else(|| "-".into()),
                    j.quiver_variety,
                    j.moduli,
                    j.invariants_ok
                ),
            )?;
        }
        None => emit(out, &json(&j))?,
    }
    for e in &j.errors {
        eprintln!("stage error: {e}");
    }
    for e in &j.invariant_violations {
        eprintln!("invariant violated: {e}");
    }
    Ok(if !report.invariants_ok() {
        EXIT_INVARIANT
    } else if report.errors.iter().any(kq_core::Error::is_resource_guard) {
        EXIT_RESOURCE
    } else {
        EXIT_OK
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (u8, String) {
        let mut buf = Vec::new();
        let code = run(
            std::iter::once("kq").chain(args.iter().copied()),
            |_| None,
            &mut buf,
        );
        (code, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["mckay", "show"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["mckay", "show", "--group", "B3"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&[
                "stability",
                "vprime",
                "--group",
                "A2",
                "--I",
                "1,2",
                "--nI",
                "2"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&[
                "stability",
                "vprime",
                "--group",
                "A2",
                "--I",
                "7",
                "--nI",
                "2"
            ])
            .0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn weights_parse() {
        assert_eq!(parse_q("-3/6").unwrap(), kq_core::field::q(-1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn cartan_check_a3() {
        let (code, out) = run_str(&[
            "stability",
            "cartan-check",
            "--group",
            "A3",
            "--format",
            "json",
        ]);
        assert_eq!(code, EXIT_OK);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["subsets"], 14);
        assert_eq!(v["all_nonnegative"], true);
    }

    #[test]
    fn algebra_csv() {
        let (code, out) = run_str(&[
            "algebra", "basis", "--group", "A1", "--kind", "b_i", "--I", "0", "--cap", "2",
            "--format", "csv",
        ]);
        assert_eq!(code, EXIT_OK);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "degree,dim,cumulative");
        assert_eq!(lines.len(), 4);
    }
}
