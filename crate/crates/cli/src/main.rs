use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gegenfun::brafman::{algebraicity, AlgebraicityClause};
use gegenfun::gegenbauer::{check_lambda, gegenbauer_recurrence};
use gegenfun::legendre::{classify, closed_form, legendre_p_real, Branch, LegendreIndex};
use gegenfun::poisson::{closed_form_value, elliptic_e, elliptic_k, KernelArgs, KernelKind, KernelVariant};
use gegenfun::verify::{format_complex, format_g, run_many, RunConfig, CATALOG, CSV_HEADER};
use gegenfun::{Complex, Error};

mod config;

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "gegenfun", version, about = "Verify Gegenbauer generating-function identities and evaluate the functions behind them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the identity catalog.
    List,
    /// Run identity checks and print one report per identity.
    Verify(VerifyArgs),
    /// Evaluate a single function value.
    Eval {
        #[command(subcommand)]
        function: EvalFunction,
    },
    /// Classify (lambda, gamma) for algebraicity or (nu, mu) by closed-form case.
    Classify(ClassifyArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Identity ids, or `all`.
    #[arg(required = true)]
    ids: Vec<String>,
    /// Reporting order.
    #[arg(long)]
    order: Option<usize>,
    /// Pass threshold for the mixed deviation.
    #[arg(long)]
    tol: Option<f64>,
    /// Replace every x grid, e.g. `--x 1.5,0.3`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = config::parse_complex)]
    x: Option<Vec<Complex>>,
    /// Replace the u grid, e.g. `--u 0.4,0.7+0.2i`.
    #[arg(long, allow_hyphen_values = true, value_delimiter = ',', value_parser = config::parse_complex)]
    u: Option<Vec<Complex>>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// `key = value` file; flags take precedence over its entries.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Subcommand)]
enum EvalFunction {
    /// Complete elliptic integral of the first kind, parameter m.
    #[command(name = "K")]
    K { m: f64 },
    /// Complete elliptic integral of the second kind, parameter m.
    #[command(name = "E")]
    E { m: f64 },
    /// C_n^lambda(x) by the three-term recurrence.
    Gegenbauer {
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, value_parser = config::parse_complex)]
        x: Complex,
    },
    /// P_nu^mu(cosh xi), Ferrers P_nu^mu(cos theta), or either at z.
    Legendre(LegendreArgs),
    /// Poisson kernel for Gegenbauer polynomials.
    Kernel(KernelCli),
    /// Companion of the Poisson kernel.
    Companion(KernelCli),
}

#[derive(Args)]
struct LegendreArgs {
    #[arg(long, allow_hyphen_values = true)]
    nu: f64,
    #[arg(long, allow_hyphen_values = true)]
    mu: f64,
    /// Legendre branch at z = cosh(xi).
    #[arg(long, allow_hyphen_values = true, group = "point")]
    xi: Option<f64>,
    /// Ferrers branch at z = cos(theta).
    #[arg(long, allow_hyphen_values = true, group = "point")]
    theta: Option<f64>,
    /// Argument z; the branch follows from |z| > 1 or |z| < 1.
    #[arg(long, allow_hyphen_values = true, group = "point")]
    z: Option<f64>,
}

#[derive(Args)]
struct KernelCli {
    #[arg(long, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, allow_hyphen_values = true)]
    theta: f64,
    #[arg(long, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    #[arg(long, value_enum, default_value = "tilde")]
    variant: VariantCli,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantCli {
    Tilde,
    Z,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("pair").required(true).args(["lambda", "nu"]))]
struct ClassifyArgs {
    #[arg(long, allow_hyphen_values = true, requires = "gamma", conflicts_with_all = ["nu", "mu"])]
    lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true, requires = "mu")]
    nu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    mu: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            list();
            ExitCode::SUCCESS
        }
        Command::Verify(args) => verify(args),
        Command::Eval { function } => match eval(function) {
            Ok(line) => {
                println!("{line}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(EXIT_FAIL)
            }
        },
        Command::Classify(args) => {
            println!("{}", classify_text(&args));
            ExitCode::SUCCESS
        }
    }
}

fn list() {
    let width = CATALOG.iter().map(|e| e.id.len()).max().unwrap_or(0);
    for entry in CATALOG {
        println!("{:<width$}  {}", entry.id, entry.summary);
    }
}

fn verify(args: VerifyArgs) -> ExitCode {
    let file = match args.config.as_deref().map(config::load).transpose() {
        Ok(f) => f.unwrap_or_default(),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let format = match (args.format, file.format.as_deref()) {
        (Some(f), _) => f,
        (None, None | Some("jsonl")) => Format::Jsonl,
        (None, Some("csv")) => Format::Csv,
        (None, Some(other)) => {
            eprintln!("error: unknown format `{other}` in config");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let defaults = RunConfig::default();
    let cfg = RunConfig {
        order: args.order.or(file.order).unwrap_or(defaults.order),
        working_order: file.working_order.unwrap_or(defaults.working_order),
        tol: args.tol.or(file.tol).unwrap_or(defaults.tol),
        x_grid: args.x.or(file.x),
        u_grid: args.u.or(file.u),
    };
    let reports = match run_many(&args.ids, &cfg) {
        Ok(r) => r,
        Err(e @ Error::UnknownIdentity(_)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_FAIL);
        }
    };
    let mut out = io::stdout().lock();
    let written = (|| -> io::Result<()> {
        if format == Format::Csv {
            writeln!(out, "{CSV_HEADER}")?;
        }
        for report in &reports {
            match format {
                Format::Jsonl => writeln!(out, "{}", report.to_json_line())?,
                Format::Csv => {
                    for row in report.csv_rows() {
                        writeln!(out, "{row}")?;
                    }
                }
            }
        }
        out.flush()
    })();
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_FAIL);
    }
    let passed = reports.iter().filter(|r| r.overall_pass).count();
    eprintln!("{passed}/{} identities passed", reports.len());
    if passed == reports.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn eval(function: EvalFunction) -> gegenfun::Result<String> {
    match function {
        EvalFunction::K { m } => elliptic_k(m).map(format_g),
        EvalFunction::E { m } => elliptic_e(m).map(format_g),
        EvalFunction::Gegenbauer { lambda, n, x } => {
            check_lambda(lambda)?;
            let value = gegenbauer_recurrence(lambda, n, x)[n];
            Ok(if x.im == 0.0 {
                format_g(value.re)
            } else {
                format_complex(value)
            })
        }
        EvalFunction::Legendre(args) => eval_legendre(&args).map(format_g),
        EvalFunction::Kernel(args) => eval_kernel(&args, KernelKind::Kernel).map(format_g),
        EvalFunction::Companion(args) => eval_kernel(&args, KernelKind::Companion).map(format_g),
    }
}

fn eval_legendre(args: &LegendreArgs) -> gegenfun::Result<f64> {
    let (z, branch) = match (args.xi, args.theta, args.z) {
        (Some(xi), _, _) => (xi.cosh(), Branch::Legendre),
        (_, Some(theta), _) => (theta.cos(), Branch::Ferrers),
        (_, _, Some(z)) if z.abs() > 1.0 => (z, Branch::Legendre),
        (_, _, Some(z)) => (z, Branch::Ferrers),
        _ => return Err(Error::ArgumentOutOfDomain("one of --xi, --theta, --z is required".into())),
    };
    let idx = LegendreIndex::new(args.nu, args.mu, branch);
    match closed_form(&idx, z) {
        Err(Error::NotClosedForm { .. }) => legendre_p_real(&idx, z),
        other => other,
    }
}

fn eval_kernel(args: &KernelCli, kind: KernelKind) -> gegenfun::Result<f64> {
    let variant = match args.variant {
        VariantCli::Tilde => KernelVariant::Tilde,
        VariantCli::Z => KernelVariant::Z,
    };
    let kernel_args = KernelArgs::new(args.lambda, args.theta, args.phi, args.t)?;
    closed_form_value(&kernel_args, kind, variant)
}

fn classify_text(args: &ClassifyArgs) -> String {
    if let (Some(lambda), Some(gamma)) = (args.lambda, args.gamma) {
        return match algebraicity(lambda, gamma) {
            Some(AlgebraicityClause::Quarter) => "algebraic (clause 1)".to_string(),
            Some(AlgebraicityClause::Sixth) => "algebraic (clause 2)".to_string(),
            None => "not covered".to_string(),
        };
    }
    let (nu, mu) = (args.nu.unwrap_or_default(), args.mu.unwrap_or_default());
    let c = classify(nu, mu);
    if c.is_icosahedral() {
        format!("{:?} (icosahedral)", c.tag())
    } else {
        format!("{:?}", c.tag())
    }
}
