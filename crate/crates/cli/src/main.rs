use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sasakian::gauge::CohomologyMethod;
use sasakian::lattice::DerivativeMode;
use sasakian::reports::{
    run_cohomology, run_flow, run_verify_algebra, run_verify_symbols, to_json, write_artifact, Exit, Mutation,
    ReportError, RunConfig,
};

#[derive(Parser)]
#[command(name = "sasakian", version, about = "Exact and lattice checks for gauge theory on the contact Calabi-Yau 7-model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact checks of every algebraic table and identity.
    VerifyAlgebra {
        #[command(flatten)]
        common: Common,
        /// Comma-separated groups; an empty string selects none.
        #[arg(long)]
        suites: Option<String>,
        /// Use the opposite orientation in the Hodge star (mutation test).
        #[arg(long, hide = true)]
        flip_star: bool,
    },
    /// Exactness of the symbol complexes on random or fixed covectors.
    VerifySymbols {
        #[command(flatten)]
        common: Common,
        /// Fixed covector "c1,...,c7" with rational entries.
        #[arg(long)]
        covector: Option<String>,
    },
    /// Descent to a selfdual contact instanton from a perturbed flat connection.
    Flow {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Basic and quotient cohomology at the flat connection.
    Cohomology {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_method)]
        method: Option<CohomologyMethod>,
    },
}

#[derive(Args)]
struct Common {
    /// Flat key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Grid size, or the number of covectors for verify-symbols.
    #[arg(long)]
    n: Option<usize>,
    /// Directory for reports and artifacts.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_parser = parse_mode)]
    mode: Option<DerivativeMode>,
    /// "su2" or "u1".
    #[arg(long)]
    algebra: Option<String>,
    /// Print the JSON report on stdout.
    #[arg(long)]
    json: bool,
}

fn parse_mode(s: &str) -> Result<DerivativeMode, String> {
    s.parse()
}

fn parse_method(s: &str) -> Result<CohomologyMethod, String> {
    match s {
        "fourier" => Ok(CohomologyMethod::Fourier),
        "dense" => Ok(CohomologyMethod::Dense),
        _ => Err(format!("unknown method '{s}' (expected fourier or dense)")),
    }
}

impl Common {
    /// The config file, if any, with flags taking precedence.
    fn config(&self, n_is_sweep: bool) -> Result<RunConfig, ReportError> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        match (self.n, n_is_sweep) {
            (Some(n), true) => cfg.sweep_n = n,
            (Some(n), false) => cfg.n = n,
            _ => {}
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.display().to_string());
        }
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(a) = &self.algebra {
            cfg.algebra = a.clone();
        }
        if n_is_sweep && cfg.sweep_n == 0 && cfg.covector.is_none() {
            return Err(ReportError::Usage("n must be at least 1".into()));
        }
        Ok(cfg)
    }
}

fn emit(json: bool, cfg: &RunConfig, name: &str, report: &str, summary: String) -> Result<(), ReportError> {
    if let Some(dir) = &cfg.out {
        let dir = Path::new(dir);
        write_artifact(dir, name, report)?;
        write_artifact(dir, "config.toml", &cfg.to_text())?;
    }
    if json {
        print!("{report}");
    } else {
        println!("{summary}");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<Exit, ReportError> {
    match cli.command {
        Command::VerifyAlgebra { common, suites, flip_star } => {
            let mut cfg = common.config(false)?;
            if suites.is_some() {
                cfg.suites = suites;
            }
            let mutation = if flip_star { Mutation::FlipStar } else { Mutation::None };
            let r = run_verify_algebra(&cfg, mutation)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            let mut summary = format!("verify-algebra: {} passed, {} failed", r.passed, r.failed);
            for c in r.checks.iter().filter(|c| !c.passed) {
                summary.push_str(&format!("\n  FAIL {} [{}]: {}\n       {}", c.id, c.group, c.anchor, c.detail));
            }
            emit(common.json, &cfg, "algebra.json", &to_json(&r), summary)?;
            Ok(Exit::from_passed(r.all_passed()))
        }
        Command::VerifySymbols { common, covector } => {
            let mut cfg = common.config(true)?;
            if covector.is_some() {
                cfg.covector = covector;
            }
            let r = run_verify_symbols(&cfg)?;
            let summary = format!(
                "verify-symbols: extended {} failures of {}, quotient {} failures of {} (horizontal covectors: {}, {})",
                r.extended.failures,
                r.extended.n,
                r.quotient.failures,
                r.quotient.n,
                r.extended.failures_with_horizontal_covector,
                r.quotient.failures_with_horizontal_covector
            );
            emit(common.json, &cfg, "symbols.json", &to_json(&r), summary)?;
            Ok(r.exit())
        }
        Command::Flow { common, max_iter } => {
            let mut cfg = common.config(false)?;
            if let Some(m) = max_iter {
                cfg.max_iter = m;
            }
            let run = run_flow(&cfg)?;
            if let Some(dir) = &cfg.out {
                run.write(Path::new(dir))?;
            }
            let r = &run.report;
            let summary = format!(
                "flow: {:?} after {} iterations, residual {:e}, monotone {}",
                r.record.status, r.record.iteration, r.record.residual, r.monotone
            );
            emit(common.json, &cfg, "flow.json", &to_json(r), summary)?;
            Ok(Exit::from_passed(run.passed()))
        }
        Command::Cohomology { common, method } => {
            let mut cfg = common.config(false)?;
            if let Some(m) = method {
                cfg.method = m;
            }
            let run = run_cohomology(&cfg)?;
            let r = &run.report;
            let summary = format!(
                "cohomology: h_B = ({}, {}, {}), h = ({}, {}, {}, {}), index_T {}, omega cup rank {}, indeterminate {}",
                r.h0_b, r.h1_b, r.h2_b, r.h0, r.h1, r.h2, r.h3, r.index_t, r.rank_omega_cup, r.indeterminate
            );
            emit(common.json, &cfg, "cohomology.json", &to_json(&run), summary)?;
            Ok(run.exit())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exit = run(cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit()
    });
    ExitCode::from(exit.code() as u8)
}
