use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hsca_core::verify::{run_suites, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "hsca", version, about = "Exact verification of higher-spin Clifford operator identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and report PASS/FAIL/SKIP per (suite, m, k).
    Verify(VerifyArgs),
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// Suites to run: clifford, almansi, theorem1, factorization, maxwell,
    /// stokes, kernels, fundamental, borel_probe or all.
    #[arg(default_value = "all", env = "HSCA_SUITES", value_delimiter = ',')]
    suites: Vec<String>,
    #[arg(long, env = "HSCA_M", value_delimiter = ',', default_value = "3,4,5")]
    m: Vec<usize>,
    #[arg(long, env = "HSCA_K", value_delimiter = ',', default_value = "1,2")]
    k: Vec<usize>,
    /// Largest x-degree of spanning sets and random fields.
    #[arg(long, env = "HSCA_XDEG", default_value_t = 4)]
    xdeg: usize,
    #[arg(long, env = "HSCA_SAMPLES", default_value_t = 100)]
    samples: usize,
    #[arg(long, env = "HSCA_SEED", default_value_t = 42)]
    seed: u64,
    /// Tolerance for floating-point checks; exact checks always use zero.
    #[arg(long, env = "HSCA_TOL", default_value_t = 1e-8)]
    tol: f64,
    /// Write the JSON report here.
    #[arg(long, env = "HSCA_REPORT")]
    report: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, env = "HSCA_WORKERS", default_value_t = 0)]
    workers: usize,
    /// Print the JSON report to stdout instead of the summary table.
    #[arg(long)]
    json: bool,
}

const EXIT_USAGE: u8 = 2;

fn verify(args: VerifyArgs) -> ExitCode {
    let mut suites = Vec::new();
    for name in &args.suites {
        match Suite::parse_list(name) {
            Ok(list) => suites.extend(list),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
    }
    let cfg = SuiteConfig {
        suites,
        m_list: args.m,
        k_list: args.k,
        xdeg: args.xdeg,
        samples: args.samples,
        seed: args.seed,
        tol: args.tol,
        report_path: args.report,
        workers: args.workers,
    };
    let report = match run_suites(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if args.json {
        println!("{}", report.to_json());
    } else {
        for line in report.summary_lines() {
            println!("{line}");
        }
        let s = &report.summary;
        println!("pass={} fail={} skip={}", s.pass, s.fail, s.skip);
    }
    if let Some(path) = &cfg.report_path {
        if let Err(e) = std::fs::write(path, report.to_json()) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify(args) => verify(args),
    }
}
