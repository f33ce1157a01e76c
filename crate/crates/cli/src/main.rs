use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mbbox_cli::config::{parse_cut, parse_method, parse_rule};
use mbbox_cli::{cmd_eval, cmd_expand, cmd_sweep, cmd_verify, parse_grid, CliError, Integral, QuadOverrides, RunConfig, Suite};
use mbbox_core::closed_form::{Kinematics, Method};
use mbbox_core::quad::QuadRule;
use mbbox_core::specfun::CutPrescription;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "mbbox", version, about = "One-loop scalar box integrals in dimensional regularization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the box at one kinematic point.
    Eval(EvalArgs),
    /// Print the Laurent coefficients c₋₂, c₋₁, c₀ in ε.
    Expand {
        #[command(flatten)]
        point: PointArgs,
        /// Highest power of ε to print (−2, −1 or 0).
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        order: i32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        /// Replaces the identity tolerance (identities) or the cross-method tolerance (grids).
        #[arg(long, env = "MBBOX_TOL")]
        tol: Option<f64>,
        #[command(flatten)]
        quad: QuadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate every point of a JSON grid file.
    Sweep {
        grid: PathBuf,
        /// Where to write the report; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        quad: QuadArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum IntegralArg {
    Massless,
    Onemass,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Identities,
    Massless,
    Onemass,
    All,
}

#[derive(Args)]
struct PointArgs {
    #[arg(long, value_enum, default_value = "massless")]
    integral: IntegralArg,
    #[arg(long, allow_hyphen_values = true)]
    s: f64,
    #[arg(long, allow_hyphen_values = true)]
    t: f64,
    /// External mass squared (one-mass integral only).
    #[arg(long, allow_hyphen_values = true)]
    msq: Option<f64>,
    #[arg(long, default_value_t = 0.3)]
    eps: f64,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    point: PointArgs,
    /// closed, closed_alt, mb, residue or feynman.
    #[arg(long, default_value = "closed", value_parser = parse_method)]
    method: Method,
    /// pv, above or below.
    #[arg(long, default_value = "pv", value_parser = parse_cut)]
    cut: CutPrescription,
    /// Relative node-doubling tolerance of the MB quadrature.
    #[arg(long, env = "MBBOX_TOL")]
    tol: Option<f64>,
    #[command(flatten)]
    quad: QuadArgs,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct QuadArgs {
    /// Base node count of the MB quadrature (values are taken at 4× this).
    #[arg(long, env = "MBBOX_QUAD_NODES")]
    nodes: Option<usize>,
    /// Half-length of the truncated MB contour.
    #[arg(long, env = "MBBOX_QUAD_HEIGHT")]
    height: Option<f64>,
    /// Real part of the (first) MB contour.
    #[arg(long, allow_hyphen_values = true)]
    abscissa: Option<f64>,
    /// Real part of the second one-mass MB contour.
    #[arg(long, allow_hyphen_values = true)]
    abscissa_beta: Option<f64>,
    /// gl or tanh_sinh.
    #[arg(long, value_parser = parse_rule)]
    rule: Option<QuadRule>,
}

impl QuadArgs {
    fn overrides(&self, tolerance: Option<f64>) -> QuadOverrides {
        QuadOverrides {
            abscissa: self.abscissa,
            abscissa_beta: self.abscissa_beta,
            height: self.height,
            nodes: self.nodes,
            rule: self.rule,
            tolerance,
        }
    }
}

#[derive(Args)]
struct OutArgs {
    /// Emit JSON (the default; kept for explicitness in scripts).
    #[arg(long)]
    json: bool,
    /// Pretty-print the JSON.
    #[arg(long)]
    pretty: bool,
}

impl PointArgs {
    fn config(&self, method: Method) -> RunConfig {
        let k = Kinematics { s: self.s, t: self.t, msq: self.msq, eps: self.eps };
        let mut cfg = RunConfig::new(k, method);
        cfg.integral = match self.integral {
            IntegralArg::Massless => Integral::Massless,
            IntegralArg::Onemass => Integral::Onemass,
        };
        cfg
    }
}

/// Writes one line to stdout; a closed pipe (`mbbox … | head`) is not an error.
fn print_line(text: &str) -> Result<(), CliError> {
    use std::io::Write;
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(v: &T, pretty: bool) -> Result<String, CliError> {
    let text = if pretty { serde_json::to_string_pretty(v) } else { serde_json::to_string(v) };
    text.map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Eval(a) => {
            let mut cfg = a.point.config(a.method);
            cfg.cut = a.cut;
            cfg.quad = a.quad.overrides(a.tol);
            let rec = cmd_eval(&cfg)?;
            print_line(&emit(&rec, a.out.pretty)?)?;
            Ok(0)
        }
        Command::Expand { point, order, out } => {
            let rec = cmd_expand(&point.config(Method::Closed), order)?;
            print_line(&emit(&rec, out.pretty)?)?;
            Ok(0)
        }
        Command::Verify { suite, tol, quad, out } => {
            let suite = match suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Massless => Suite::Massless,
                SuiteArg::Onemass => Suite::Onemass,
                SuiteArg::All => Suite::All,
            };
            let report = cmd_verify(suite, tol, &quad.overrides(None));
            print_line(&emit(&report, out.pretty)?)?;
            for f in &report.summary.failures {
                eprintln!("failed: {f}");
            }
            Ok(report.exit_code())
        }
        Command::Sweep { grid, out, quad } => {
            let text = std::fs::read_to_string(&grid)?;
            let grid = parse_grid(&text)?;
            let report = cmd_sweep(&grid, &quad.overrides(None));
            let json = emit(&report, true)?;
            match out {
                Some(path) => std::fs::write(path, json + "\n")?,
                None => print_line(&json)?,
            }
            if report.summary.warnings > 0 {
                eprintln!("warning: {} point(s) skipped as degenerate", report.summary.warnings);
            }
            for f in &report.summary.failures {
                eprintln!("failed: {f}");
            }
            Ok(report.exit_code())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
