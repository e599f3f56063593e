use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use clonekit::cloners::HeisenbergFamily;
use clonekit::objectives::registry;
use clonekit::sdp::{asym_tradeoff, SdpOptions};
use clonekit::Error;

mod fidelity;
mod output;
mod simulate;

use output::{json_string, num, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "clonekit", version, about = "Optimal quantum cloning machines: fidelity tables, SDP curves and optical simulations")]
struct Cli {
    /// Output format for tables.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Seed for anything randomized (the SDP starting point).
    #[arg(long, default_value_t = 7, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form fidelity next to the value read off the constructed machine.
    Fidelity(FidelityArgs),
    /// SDP trade-off curve (F_A, F_B) over weights p.
    Optimize(OptimizeArgs),
    /// Run an optical or Gaussian simulation and print a JSON report.
    Simulate {
        #[command(subcommand)]
        scenario: simulate::Scenario,
    },
    /// Dump the closed-form registry as JSON.
    Registry {
        /// Keep entries whose id contains this substring.
        #[arg(long)]
        id: Option<String>,
    },
}

#[derive(Args, Debug)]
struct FidelityArgs {
    /// universal, phase, fourier, pauli, asym-universal, pc, orthopair, unot or cv.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 2)]
    d: usize,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    m: usize,
    /// Family-specific asymmetry: F_A for universal/phase/fourier, α for asym-universal,
    /// x,y,z for pauli, an equatorial phase for pc.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    asymmetry: Vec<f64>,
    /// Tolerance for the `agree` column.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Args, Debug)]
struct OptimizeArgs {
    /// universal, phase or fourier.
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 2)]
    d: usize,
    /// Comma-separated weights in (0, 1).
    #[arg(long, value_delimiter = ',', conflicts_with = "points")]
    p: Vec<f64>,
    /// Evenly spaced interior grid with this many points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, default_value_t = 50_000)]
    max_iter: usize,
}

/// Failure with its process exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotConverged { .. } => 3,
            Error::SizeCap { .. } => 4,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn cmd_fidelity(a: &FidelityArgs, format: Format) -> Result<String, Failure> {
    let rows = fidelity::rows(&a.family, a.d, a.n, a.m, a.asymmetry.clone())?;
    let mut t = Table::new(&["family", "d", "n", "m", "clone", "closed_form", "machine", "abs_delta", "agree"]);
    for r in rows {
        let delta = (r.closed_form - r.machine).abs();
        t.push(vec![
            json!(a.family),
            json!(a.d),
            json!(a.n),
            json!(a.m),
            json!(r.clone),
            num(r.closed_form),
            num(r.machine),
            num(delta),
            json!(delta <= a.tol),
        ]);
    }
    Ok(t.render(format))
}

/// Rows are printed even when some points fail to certify; the exit code then reports it.
fn cmd_optimize(a: &OptimizeArgs, format: Format, seed: u64) -> Result<(String, u8), Failure> {
    let family = HeisenbergFamily::parse(&a.family)?;
    let grid: Vec<f64> = match a.points {
        Some(0) => return Err(usage("--points must be positive")),
        Some(k) => (1..=k).map(|i| i as f64 / (k + 1) as f64).collect(),
        None if a.p.is_empty() => vec![0.5],
        None => a.p.clone(),
    };
    if !(a.tol > 0.0) {
        return Err(usage(format!("--tol {} must be positive", a.tol)));
    }
    let opts = SdpOptions { tol: a.tol, max_iter: a.max_iter, seed };
    let points = asym_tradeoff(family, a.d, &grid, &opts)?;
    let mut t = Table::new(&["family", "d", "p", "fa", "fb", "value", "fb_closed_form", "value_closed_form", "converged", "certified"]);
    let mut all_ok = true;
    for pt in &points {
        all_ok &= pt.certified && pt.converged;
        t.push(vec![
            json!(family.name()),
            json!(a.d),
            num(pt.p),
            num(pt.fa),
            num(pt.fb),
            num(pt.value),
            num(pt.fb_closed_form),
            num(pt.value_closed_form),
            json!(pt.converged),
            json!(pt.certified),
        ]);
    }
    Ok((t.render(format), if all_ok { 0 } else { 3 }))
}

fn cmd_registry(filter: Option<&str>) -> String {
    let entries: Vec<Value> = registry()
        .into_iter()
        .filter(|f| filter.map_or(true, |s| f.id.contains(s)))
        .map(|f| {
            json!({
                "id": f.id,
                "kind": f.kind,
                "params": f.params,
                "citation": f.source,
                "conjectured": f.conjectured,
            })
        })
        .collect();
    json_string(&Value::Array(entries))
}

fn run(cli: &Cli) -> Result<(String, u8), Failure> {
    match &cli.command {
        Command::Fidelity(a) => Ok((cmd_fidelity(a, cli.format)?, 0)),
        Command::Optimize(a) => cmd_optimize(a, cli.format, cli.seed),
        Command::Simulate { scenario } => Ok((json_string(&simulate::run(scenario)?), 0)),
        Command::Registry { id } => Ok((cmd_registry(id.as_deref()), 0)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((text, code)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(text.as_bytes()).and_then(|_| out.flush()).is_err() {
                return ExitCode::from(1);
            }
            if code == 3 {
                eprintln!("clonekit: some points did not converge or certify");
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("clonekit: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
