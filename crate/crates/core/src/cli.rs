//! Command-line front end. Every command reads JSON documents and writes one report.
//!
//! Exit codes: 0 success, 1 internal error, 2 invalid input, 3 the requested
//! statement's hypotheses fail so no claim is made.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::Value;

use crate::duals::{
    approx_dual_pushforward, bound_inequalities, certify, neumann_sequence, pushforward_dual, rescue_exact_dual,
    search_dual, uncertainty_product, DualCertificate, EXACT_TOL,
};
use crate::error::Error;
use crate::fixtures::{self, Fixture};
use crate::frames::{analyze, canonical_dual, FrameReport, TIGHT_RTOL};
use crate::measures::DiscreteMeasure;
use crate::numerics::Matrix;
use crate::perturbation::{
    discrete_dual_pipeline, matched_mixed_dual, perturbed_approx_dual, perturbed_frame_bound, standard_sampler,
    variant_certificates, Assertion, EtaSource, PipelineConfig,
};
use crate::redundancy::{redundancy_rank, redundancy_trace};
use crate::transport::{solve_w2, Coupling, FW_DEFAULT_TOL, MARGINAL_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_CLAIM: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "probframe", version, about = "Probabilistic frames, couplings and dual frames on discrete measures")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Tolerance for exact duals (spectral deviation) and tightness.
    #[arg(long, global = true, default_value_t = EXACT_TOL)]
    pub tol: f64,
    /// Seed for randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Iteration cap for the Frank-Wolfe coupling search.
    #[arg(long, global = true, default_value_t = crate::transport::FW_DEFAULT_ITERS)]
    pub iters: usize,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    /// Use a bundled fixture instead of the input file(s).
    #[arg(long, global = true)]
    pub fixture: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Frame operator, optimal bounds, flags and redundancy of a measure.
    Analyze { input: Option<PathBuf> },
    /// Exact W₂ between two measures.
    W2 { mu: Option<PathBuf>, nu: Option<PathBuf> },
    /// Validates a coupling and reports its mixed frame operator.
    CouplingCheck { input: Option<PathBuf> },
    /// Classifies a coupling as exact, approximate or pseudo dual.
    Certify {
        input: Option<PathBuf>,
        /// Search Γ(MU, NU) for a coupling with mixed operator Id instead.
        #[arg(long, num_args = 2, value_names = ["MU", "NU"])]
        search: Option<Vec<PathBuf>>,
        /// Duality-gap tolerance of the search.
        #[arg(long, default_value_t = FW_DEFAULT_TOL)]
        gap_tol: f64,
    },
    /// Canonical dual S⁻¹#μ with its graph coupling.
    CanonicalDual { input: Option<PathBuf> },
    /// Approximate dual (AᵗS⁻¹)#μ for ‖A − Id‖ < 1.
    ApproxDual {
        input: Option<PathBuf>,
        /// Matrix A, rows separated by ';' and entries by ','.
        #[arg(long)]
        matrix: String,
    },
    /// Neumann partial sums ν_0, …, ν_N from an approximate dual coupling.
    Neumann {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 5)]
        order: usize,
    },
    /// Exact dual obtained by pushing ν through the inverse transposed mixed operator.
    Rescue { input: Option<PathBuf> },
    /// Pushforward of a measure by an affine map, an explicit map, or the dual construction with h.
    Pushforward {
        input: Option<PathBuf>,
        /// Linear part of x ↦ Mx + b.
        #[arg(long, conflicts_with_all = ["map", "dual_h"])]
        matrix: Option<String>,
        /// Offset b of the affine map.
        #[arg(long, requires = "matrix")]
        offset: Option<String>,
        /// JSON list of atom images.
        #[arg(long, conflicts_with = "dual_h")]
        map: Option<PathBuf>,
        /// JSON list of h values; builds the exact dual of pushforward type.
        #[arg(long)]
        dual_h: Option<PathBuf>,
    },
    /// Both sides of the uncertainty inequality for a direction f.
    Uncertainty {
        input: Option<PathBuf>,
        #[arg(long)]
        f: String,
    },
    /// Frame-bound inequalities between the marginals of a dual pair.
    BoundsIneq { input: Option<PathBuf> },
    /// Perturbation statements for η near μ.
    Perturb(PerturbArgs),
    /// Approximate dual of η from N atoms (subsample or i.i.d. draws).
    SampleDual(SampleArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PerturbMode {
    FrameBound,
    ApproxDual,
    Variants,
    Matched,
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long, value_enum, default_value_t = PerturbMode::FrameBound)]
    pub mode: PerturbMode,
    /// Reference frame μ.
    #[arg(long)]
    pub mu: PathBuf,
    /// Perturbed measure η.
    #[arg(long)]
    pub eta: PathBuf,
    /// Coupling π ∈ Γ(η, μ); defaults to the optimal W₂ plan.
    #[arg(long)]
    pub coupling: Option<PathBuf>,
    /// Base coupling γ ∈ Γ(μ, ν); defaults to the canonical dual of μ.
    #[arg(long)]
    pub dual: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Discrete η; omit to sample from a Gaussian.
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    /// Override A_N (default: A_η / 4).
    #[arg(long)]
    pub a_n: Option<f64>,
    /// Mean of the Gaussian sampler, comma separated.
    #[arg(long)]
    pub gaussian_mean: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub gaussian_std: f64,
    /// Held-out draws used to estimate W₂ in sampler mode.
    #[arg(long)]
    pub holdout: Option<usize>,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Internal(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Invalid(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A report plus the exit status it implies.
struct Outcome {
    value: Value,
    code: i32,
    note: Option<String>,
}

impl Outcome {
    fn ok<T: Serialize>(v: &T) -> CliResult<Self> {
        Ok(Outcome { value: to_value(v)?, code: EXIT_OK, note: None })
    }

    fn with_assertion<T: Serialize>(v: &T, a: Assertion) -> CliResult<Self> {
        let (code, note) = match a {
            Assertion::Holds => (EXIT_OK, None),
            Assertion::NotApplicable => (EXIT_NO_CLAIM, Some("hypotheses not satisfied; no claim made".to_string())),
            Assertion::Violated => (EXIT_INTERNAL, Some("claimed inequality violated".to_string())),
        };
        Ok(Outcome { value: to_value(v)?, code, note })
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeOutput {
    #[serde(flatten)]
    pub report: FrameReport,
    pub atoms: usize,
    pub distinct_atoms: usize,
    pub redundancy: usize,
    pub redundancy_trace: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingCheck {
    pub valid: bool,
    pub max_row_residual: f64,
    pub max_column_residual: f64,
    pub mixed_operator: Matrix,
    pub transport_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualOutput {
    pub dual: DiscreteMeasure,
    pub coupling: Coupling,
    pub certificate: DualCertificate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutput {
    pub certificate: DualCertificate,
    pub residual: f64,
    pub duality_gap: f64,
    pub iterations: usize,
    pub coupling: Coupling,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PushforwardOutput {
    pub measure: DiscreteMeasure,
    pub coupling: Coupling,
    pub certificate: Option<DualCertificate>,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let rendered = match cli.global.output {
                OutputFormat::Json => render_json(&outcome.value),
                OutputFormat::Text => Ok(render_text(&outcome.value)),
            };
            match rendered {
                Ok(text) => {
                    if writeln!(out, "{text}").is_err() {
                        return EXIT_INTERNAL;
                    }
                }
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    return EXIT_INTERNAL;
                }
            }
            if let Some(note) = outcome.note {
                let _ = writeln!(err, "{note}");
            }
            outcome.code
        }
        Err(CliError::Invalid(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_INVALID
        }
        Err(CliError::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
    }
}

/// Entry point for the binary.
pub fn main_exit() -> ! {
    let stdout = io::stdout();
    let stderr = io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code)
}

fn read_doc<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn missing(what: &str) -> CliError {
    CliError::Invalid(format!("missing {what}: give a file or --fixture"))
}

fn load_measure(g: &GlobalOpts, path: Option<&PathBuf>) -> CliResult<DiscreteMeasure> {
    match (path, &g.fixture) {
        (Some(p), _) => read_doc(p),
        (None, Some(name)) => Ok(fixtures::measure(name)?),
        (None, None) => Err(missing("measure")),
    }
}

fn load_coupling(g: &GlobalOpts, path: Option<&PathBuf>) -> CliResult<Coupling> {
    match (path, &g.fixture) {
        (Some(p), _) => read_doc(p),
        (None, Some(name)) => Ok(fixtures::coupling(name)?),
        (None, None) => Err(missing("coupling")),
    }
}

fn parse_vector(s: &str) -> CliResult<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| CliError::Invalid(format!("bad number '{t}': {e}"))))
        .collect()
}

fn parse_matrix(s: &str) -> CliResult<Matrix> {
    let rows = s.split(';').map(parse_vector).collect::<CliResult<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows)?)
}

fn execute(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Analyze { input } => {
            let m = load_measure(g, input.as_ref())?;
            let report = analyze(&m, g.tol.max(TIGHT_RTOL));
            let trace = if report.is_frame { redundancy_trace(&m).ok() } else { None };
            Outcome::ok(&AnalyzeOutput {
                atoms: m.len(),
                distinct_atoms: m.coalesced().len(),
                redundancy: redundancy_rank(&m, None),
                redundancy_trace: trace,
                report,
            })
        }
        Command::W2 { mu, nu } => {
            let (mu, nu) = match (mu, nu, &g.fixture) {
                (Some(a), Some(b), _) => (read_doc(a)?, read_doc(b)?),
                (None, None, Some(name)) => match fixtures::load(name)? {
                    Fixture::Pair(p) => (p.mu, p.nu),
                    _ => return Err(CliError::Invalid(format!("fixture '{name}' is not a measure pair"))),
                },
                _ => return Err(missing("two measures")),
            };
            Outcome::ok(&solve_w2(&mu, &nu)?)
        }
        Command::CouplingCheck { input } => {
            let c = load_coupling(g, input.as_ref())?;
            let plan = c.plan();
            let row = (0..plan.rows())
                .map(|i| (plan.row(i).iter().sum::<f64>() - c.source().weight(i)).abs())
                .fold(0.0, f64::max);
            let col = (0..plan.cols())
                .map(|j| ((0..plan.rows()).map(|i| plan[(i, j)]).sum::<f64>() - c.target().weight(j)).abs())
                .fold(0.0, f64::max);
            Outcome::ok(&CouplingCheck {
                valid: row <= MARGINAL_TOL && col <= MARGINAL_TOL,
                max_row_residual: row,
                max_column_residual: col,
                mixed_operator: c.mixed_frame_operator(),
                transport_cost: c.transport_cost(),
            })
        }
        Command::Certify { input, search, gap_tol } => match search {
            Some(paths) => {
                let mu: DiscreteMeasure = read_doc(&paths[0])?;
                let nu: DiscreteMeasure = read_doc(&paths[1])?;
                let (certificate, fit) = search_dual(&mu, &nu, g.iters, *gap_tol, g.tol)?;
                Outcome::ok(&SearchOutput {
                    certificate,
                    residual: fit.residual,
                    duality_gap: fit.duality_gap,
                    iterations: fit.iterations,
                    coupling: fit.coupling,
                })
            }
            None => Outcome::ok(&certify(&load_coupling(g, input.as_ref())?, g.tol)),
        },
        Command::CanonicalDual { input } => {
            let m = load_measure(g, input.as_ref())?;
            let (dual, coupling) = canonical_dual(&m)?;
            let certificate = certify(&coupling, g.tol);
            Outcome::ok(&DualOutput { dual, coupling, certificate })
        }
        Command::ApproxDual { input, matrix } => {
            let m = load_measure(g, input.as_ref())?;
            let a = parse_matrix(matrix)?;
            let (dual, coupling) = approx_dual_pushforward(&m, &a)?;
            let certificate = certify(&coupling, g.tol);
            Outcome::ok(&DualOutput { dual, coupling, certificate })
        }
        Command::Neumann { input, order } => {
            let c = load_coupling(g, input.as_ref())?;
            Outcome::ok(&neumann_sequence(&c, *order)?)
        }
        Command::Rescue { input } => {
            let c = load_coupling(g, input.as_ref())?;
            let (dual, coupling) = rescue_exact_dual(&c)?;
            let certificate = certify(&coupling, g.tol);
            Outcome::ok(&DualOutput { dual, coupling, certificate })
        }
        Command::Pushforward { input, matrix, offset, map, dual_h } => {
            let m = load_measure(g, input.as_ref())?;
            let out = if let Some(path) = dual_h {
                let h: Vec<Vec<f64>> = read_doc(path)?;
                let (measure, coupling) = pushforward_dual(&m, &h)?;
                let certificate = Some(certify(&coupling, g.tol));
                PushforwardOutput { measure, coupling, certificate }
            } else {
                let images: Vec<Vec<f64>> = match (matrix, map) {
                    (Some(text), _) => {
                        let a = parse_matrix(text)?;
                        let b = match offset {
                            Some(o) => parse_vector(o)?,
                            None => vec![0.0; m.dim()],
                        };
                        if b.len() != m.dim() {
                            return Err(Error::DimMismatch { expected: m.dim(), found: b.len() }.into());
                        }
                        let pushed = m.pushforward_linear(&a)?;
                        pushed.atoms().iter().map(|x| x.iter().zip(&b).map(|(p, q)| p + q).collect()).collect()
                    }
                    (None, Some(path)) => read_doc(path)?,
                    (None, None) => {
                        return Err(CliError::Invalid("pushforward needs --matrix, --map or --dual-h".into()))
                    }
                };
                let coupling = Coupling::graph(&m, &images)?;
                PushforwardOutput { measure: coupling.target().clone(), coupling, certificate: None }
            };
            Outcome::ok(&out)
        }
        Command::Uncertainty { input, f } => {
            let c = load_coupling(g, input.as_ref())?;
            Outcome::ok(&uncertainty_product(&c, &parse_vector(f)?)?)
        }
        Command::BoundsIneq { input } => {
            let c = load_coupling(g, input.as_ref())?;
            Outcome::ok(&bound_inequalities(&c)?)
        }
        Command::Perturb(args) => perturb(g, args),
        Command::SampleDual(args) => sample_dual(g, args),
    }
}

fn perturb(g: &GlobalOpts, args: &PerturbArgs) -> CliResult<Outcome> {
    let mu: DiscreteMeasure = read_doc(&args.mu)?;
    let eta: DiscreteMeasure = read_doc(&args.eta)?;
    let pi: Option<Coupling> = args.coupling.as_deref().map(read_doc).transpose()?;
    if args.mode == PerturbMode::FrameBound {
        let r = perturbed_frame_bound(&mu, &eta, pi.as_ref())?;
        return Outcome::with_assertion(&r, r.assertion);
    }
    let pi = match pi {
        Some(p) => p,
        None => solve_w2(&eta, &mu)?.plan,
    };
    let base = match &args.dual {
        Some(p) => read_doc(p)?,
        None => canonical_dual(&mu)?.1,
    };
    match args.mode {
        PerturbMode::ApproxDual => {
            let r = perturbed_approx_dual(&mu, &base, &eta, &pi, g.tol)?;
            Outcome::with_assertion(&r, r.assertion)
        }
        PerturbMode::Variants => {
            let r = variant_certificates(&mu, &base, &eta, &pi, g.tol)?;
            Outcome::with_assertion(&r, r.assertion)
        }
        PerturbMode::Matched => {
            let (dual, coupling) = matched_mixed_dual(&mu, &base, &eta, &pi, g.tol)?;
            let certificate = certify(&coupling, g.tol);
            Outcome::ok(&DualOutput { dual, coupling, certificate })
        }
        PerturbMode::FrameBound => unreachable!("handled above"),
    }
}

fn sample_dual(g: &GlobalOpts, args: &SampleArgs) -> CliResult<Outcome> {
    let config =
        PipelineConfig { samples: args.samples, seed: g.seed, a_n: args.a_n, holdout: args.holdout, tol: g.tol };
    let out = if let Some(mean) = &args.gaussian_mean {
        let sampler = standard_sampler(parse_vector(mean)?, args.gaussian_std);
        discrete_dual_pipeline(EtaSource::Sampler(&sampler), &config)?
    } else {
        let eta = load_measure(g, args.input.as_ref())?;
        discrete_dual_pipeline(EtaSource::Discrete(&eta), &config)?
    };
    Outcome::with_assertion(&out, out.report.assertion)
}

/// JSON with every float printed to 17 significant digits.
pub fn render_json(value: &Value) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFigFormatter::default());
    value.serialize(&mut ser).map_err(io::Error::other)?;
    String::from_utf8(buf).map_err(io::Error::other)
}

/// Serializes any value through [`render_json`].
pub fn to_json<T: Serialize>(v: &T) -> io::Result<String> {
    render_json(&serde_json::to_value(v).map_err(io::Error::other)?)
}

#[derive(Default)]
struct SigFigFormatter {
    inner: PrettyFormatter<'static>,
}

impl Formatter for SigFigFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(w, "{value:.16e}")
        } else {
            w.write_all(b"null")
        }
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.inner.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.inner.end_object_value(w)
    }
}

/// Six significant digits, fixed notation for moderate magnitudes.
pub fn format_sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".into();
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{x:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        format!("{x:.5e}")
    }
}

/// Indented key/value rendering of a report.
pub fn render_text(value: &Value) -> String {
    let mut out = String::new();
    text_value(value, 0, &mut out);
    out.trim_end().to_string()
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(match n.as_f64() {
            Some(x) if !n.is_u64() && !n.is_i64() => format_sig6(x),
            _ => n.to_string(),
        }),
        Value::String(s) => Some(s.clone()),
        Value::Array(items) if items.iter().all(|i| matches!(i, Value::Number(_) | Value::Bool(_) | Value::Null)) => {
            let parts: Vec<String> = items.iter().filter_map(inline).collect();
            Some(format!("[{}]", parts.join(", ")))
        }
        _ => None,
    }
}

fn text_value(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, item) in map {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        text_value(item, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match inline(item) {
                    Some(s) => out.push_str(&format!("{pad}{s}\n")),
                    None => {
                        out.push_str(&format!("{pad}-\n"));
                        text_value(item, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", inline(other).unwrap_or_default())),
    }
}
