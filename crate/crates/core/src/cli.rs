//! Command-line front end. [`run`] is the whole program minus process exit,
//! so it can be driven from tests.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;

use crate::algebras::{self, H};
use crate::engine::{AlgebraSpec, Engine};
use crate::expr::parse_expr;
use crate::pfamily::{self, PPoly, SolutionKind};
use crate::report::Report;
use crate::terms::scalar::{format_scalar, parse_scalar};
use crate::terms::{render_lambda, Generator, Parity, Scalar};
use crate::verify;
use crate::wakimoto;
use crate::zhu::{HamiltonianData, Zhu};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "conformal-calc", version, about = "Exact λ-bracket calculus for non-linear Lie conformal algebras")]
struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Target {
    /// `builtin:NAME` followed by `key=value` arguments.
    #[arg(value_name = "BUILTIN [KEY=VALUE]...")]
    builtin: Vec<String>,
    /// Spec file in the text format.
    #[arg(long, value_name = "PATH", conflicts_with = "builtin")]
    spec: Option<String>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Quantum,
    Classical,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Jacobi and skew-symmetry checks on all generator triples, plus property sweeps.
    Verify {
        #[command(flatten)]
        target: Target,
        /// Bound on the weight of random inputs in the property sweeps.
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
        /// Drop the spec's relations before checking.
        #[arg(long)]
        no_relations: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random cases per property; 0 skips the sweeps.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
    /// Solve for admissible `[e_λ f]` of a given degree.
    Classify {
        #[arg(long)]
        degree: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Quantum)]
        mode: ModeArg,
        /// `nonzero` (quantum only) or a rational value of α.
        #[arg(long, default_value = "nonzero")]
        alpha: String,
    },
    /// Free field identities, the homomorphisms π_n and the kernel witness.
    Wakimoto {
        #[arg(long, default_value_t = 2)]
        degree: u32,
        /// Only this π_n; all n ≤ degree when absent.
        #[arg(long)]
        index: Option<u32>,
        /// Bound N on the indices in the identity checks.
        #[arg(long, default_value_t = wakimoto::DEFAULT_N)]
        bound: u32,
    },
    /// Presentation of the Zhu algebra.
    Zhu {
        #[command(flatten)]
        target: Target,
        /// Conformal weight of `e` for `h, e, f` specs.
        #[arg(long, allow_hyphen_values = true)]
        delta_e: Option<String>,
    },
    /// Canonical form of an expression, e.g. `[e _ f]`.
    Expand {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        expr: String,
    },
}

/// Exit code and the two output streams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn usage(message: impl Into<String>) -> Self {
        Outcome { code: EXIT_USAGE, stdout: String::new(), stderr: message.into() }
    }
}

fn load_target(t: &Target) -> Result<AlgebraSpec, String> {
    if let Some(path) = &t.spec {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?;
        return algebras::load(&text).map_err(|e| format!("{}: {}", path, e));
    }
    let (head, rest) = t.builtin.split_first().ok_or("expected `builtin:NAME` or `--spec PATH`")?;
    let name = head.strip_prefix("builtin:").ok_or_else(|| format!("expected `builtin:NAME`, found `{}`", head))?;
    let mut args = Vec::new();
    for kv in rest {
        let (k, v) = kv.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, found `{}`", kv))?;
        args.push((k.to_string(), v.to_string()));
    }
    let id = algebras::parse_builtin(name, &args).map_err(|e| e.to_string())?;
    algebras::make(&id).map_err(|e| e.to_string())
}

fn rational(text: &str) -> Result<Scalar, String> {
    parse_scalar(text).ok_or_else(|| format!("`{}` is not a rational number", text))
}

/// Renders a `P` in `λ, h, Th, ...` with `L` for `λ`.
pub fn render_p(p: &PPoly) -> String {
    let gens = [Generator::new("h", Parity::Even, Scalar::from_integer(1.into()))];
    render_lambda(&pfamily::to_lambda_poly(p, H), &gens)
}

fn describe(s: &pfamily::ClassificationSolution) -> String {
    let beta = s.beta.as_ref().map_or("any".to_string(), format_scalar);
    let kind = match &s.kind {
        SolutionKind::RMinusOne => "r_minus_one".to_string(),
        SolutionKind::Lattice => "lattice".to_string(),
        SolutionKind::Current => "current".to_string(),
        SolutionKind::PolynomialInH(basis) => {
            format!("polynomial in h: {}", basis.iter().map(render_p).collect::<Vec<_>>().join(", "))
        }
        SolutionKind::Other => "other".to_string(),
    };
    format!("beta = {}, e {}, {}", beta, s.parity_e, kind)
}

fn basis_line(label: &str, b: &[PPoly]) -> String {
    if b.is_empty() {
        format!("{}: none", label)
    } else {
        format!("{}: {}", label, b.iter().map(render_p).collect::<Vec<_>>().join(", "))
    }
}

fn cmd_verify(spec: AlgebraSpec, max_weight: u32, no_relations: bool, seed: u64, cases: usize) -> Result<Report, String> {
    let spec = if no_relations { spec.without_relations() } else { spec };
    let mut report = Report::new("verify").with_subject(&spec);
    let checks = verify::verify_algebra(&spec).map_err(|e| e.to_string())?;
    report.add_checks(&checks, &spec.generators);
    if cases > 0 {
        let props = verify::property_sweep(&spec, seed, max_weight, cases).map_err(|e| e.to_string())?;
        report.add_properties(&props);
        let swept = verify::swept_properties(&spec);
        for name in verify::PROPERTY_NAMES.iter().filter(|n| !swept.contains(n)) {
            report.results.push(format!("property {} not swept: spec has relations", name));
        }
    }
    Ok(report)
}

fn cmd_classify(d: u32, mode: ModeArg, alpha: &str) -> Result<Report, String> {
    if d == 0 {
        return Err("degree must be positive".into());
    }
    let mut report = Report::new("classify");
    let alpha = if alpha == "nonzero" { None } else { Some(rational(alpha)?) };
    match (mode, alpha) {
        (ModeArg::Quantum, None) => {
            report.results.push(format!("quantum, degree {}, alpha nonzero", d));
            let sols = pfamily::classify_nonzero_alpha(d);
            report.results.extend(sols.iter().map(describe));
            if sols.is_empty() {
                report.results.push("no solutions".into());
            }
        }
        (ModeArg::Quantum, Some(a)) if a.is_zero() => {
            report.results.push(format!("quantum, degree {}, alpha 0", d));
            let s = pfamily::alpha0_solve(d).map_err(|e| e.to_string())?;
            report.results.push(basis_line("e side", &s.e_side));
            report.results.push(basis_line("f side", &s.f_side));
            report.results.push(basis_line("both", &s.both));
        }
        (ModeArg::Quantum, Some(_)) => return Err("quantum classification takes --alpha nonzero or 0".into()),
        (ModeArg::Classical, None) => return Err("classical classification needs a value for --alpha".into()),
        (ModeArg::Classical, Some(a)) => {
            report.results.push(format!("classical, degree {}, alpha {}", d, format_scalar(&a)));
            let sols = pfamily::classical_classify(d, &a).map_err(|e| e.to_string())?;
            report.results.extend(sols.iter().map(describe));
            if sols.is_empty() {
                report.results.push("no solutions".into());
            }
        }
    }
    Ok(report)
}

fn cmd_wakimoto(d: u32, index: Option<u32>, bound: u32) -> Result<Report, String> {
    if d == 0 {
        return Err("degree must be positive".into());
    }
    let indices: Vec<u32> = match index {
        Some(n) if n > d => return Err(format!("index {} exceeds degree {}", n, d)),
        Some(n) => vec![n],
        None => (0..=d).collect(),
    };
    let fock = wakimoto::fock_spec();
    let mut report = Report::new("wakimoto").with_subject(&fock);
    let mut checks = wakimoto::check_lemma(bound).map_err(|e| e.to_string())?;
    for n in indices {
        checks.push(wakimoto::check_pi(d, n).map_err(|e| e.to_string())?);
        checks.push(wakimoto::kernel_witness(d, n).map_err(|e| e.to_string())?);
    }
    report.add_checks(&checks, &fock.generators);
    Ok(report)
}

fn cmd_zhu(spec: AlgebraSpec, delta_e: Option<&str>) -> Result<Report, String> {
    let ham = match delta_e {
        Some(q) => HamiltonianData::hef(&spec, &rational(q)?).map_err(|e| e.to_string())?,
        None => HamiltonianData::from_spec(&spec),
    };
    let mut report = Report::new("zhu").with_subject(&spec);
    let weights: Vec<String> =
        spec.generators.iter().zip(&ham.weights).map(|(g, w)| format!("{} = {}", g.name, format_scalar(w))).collect();
    report.results.push(format!("weights: {}", weights.join(", ")));
    let p = Zhu::new(&spec, &ham).and_then(|z| z.presentation()).map_err(|e| e.to_string())?;
    report.results.extend(p.lines());
    Ok(report)
}

fn cmd_expand(spec: AlgebraSpec, expr: &str) -> Result<Report, String> {
    let e = parse_expr(expr).map_err(|e| e.to_string())?;
    let mut report = Report::new("expand").with_subject(&spec);
    let eng = Engine::new(spec.clone());
    let out = eng.eval(&e).map(|p| render_lambda(&p, eng.gens())).map_err(|e| e.to_string())?;
    report.results.push(out);
    Ok(report)
}

/// Runs the program on `args` (including the program name).
pub fn run<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::usage(text)
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            };
        }
    };
    let start = Instant::now();
    let result = verify::on_worker(|| match &cli.command {
        Command::Verify { target, max_weight, no_relations, seed, cases } => {
            load_target(target).and_then(|s| cmd_verify(s, *max_weight, *no_relations, *seed, *cases))
        }
        Command::Classify { degree, mode, alpha } => cmd_classify(*degree, *mode, alpha),
        Command::Wakimoto { degree, index, bound } => cmd_wakimoto(*degree, *index, *bound),
        Command::Zhu { target, delta_e } => load_target(target).and_then(|s| cmd_zhu(s, delta_e.as_deref())),
        Command::Expand { target, expr } => load_target(target).and_then(|s| cmd_expand(s, expr)),
    });
    let mut report = match result {
        Ok(r) => r,
        Err(m) => return Outcome::usage(format!("error: {}\n", m)),
    };
    report.set_elapsed(start.elapsed());
    let code = if report.all_passed() { EXIT_OK } else { EXIT_FAIL };
    let stdout = if cli.json { report.to_json() } else { report.to_text() };
    Outcome { code, stdout, stderr: String::new() }
}

