//! The verify-symbols, flow and cohomology commands.

use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::algebra::{verify_algebra, Group, Mutation, SuiteReport};
use super::{to_json, write_artifact, Exit, ReportError, RunConfig};
use crate::exterior::{Blade, Form, Q};
use crate::gauge::{
    cohomology_dims_capped, curvature, energy_csv, pointwise_predicates, sdci_flow, CohomologyReport, FlowRecord,
    PredicateSummary,
};
use crate::lattice::{Connection, ConnectionSnapshot, DerivativeMode, FloatLie, Grid};
use crate::symbols::{exactness_sweep, sweep_covectors, SweepReport, Which};

/// Parses the `suites` key: absent means every group, "" means none.
pub fn parse_suites(s: Option<&str>) -> Result<Vec<Group>, ReportError> {
    match s {
        None => Ok(Group::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .filter(|x| !x.trim().is_empty())
            .map(|x| x.parse().map_err(ReportError::Usage))
            .collect(),
    }
}

pub fn run_verify_algebra(cfg: &RunConfig, mutation: Mutation) -> Result<SuiteReport, ReportError> {
    Ok(verify_algebra(&parse_suites(cfg.suites.as_deref())?, mutation, cfg.seed))
}

/// Parses "c1,...,c7" with integer or p/q entries into a nonzero covector.
pub fn parse_covector(s: &str) -> Result<Form<Q>, ReportError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 7 {
        return Err(ReportError::Usage(format!("covector needs 7 entries, got {}", parts.len())));
    }
    let mut c = Form::zero();
    for (i, p) in parts.iter().enumerate() {
        let x: Q = p.parse().map_err(|_| ReportError::Usage(format!("bad rational '{p}'")))?;
        c.add_term(Blade::basis(i + 1), x);
    }
    if c.is_zero() {
        return Err(ReportError::Usage("covector must be nonzero".into()));
    }
    Ok(c)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolsReport {
    pub suite: String,
    pub seed: u64,
    pub fixed_covector: Option<String>,
    pub extended: SweepReport,
    pub quotient: SweepReport,
    pub passed: bool,
}

pub fn run_verify_symbols(cfg: &RunConfig) -> Result<SymbolsReport, ReportError> {
    let sweep = |which| -> Result<SweepReport, ReportError> {
        match &cfg.covector {
            Some(c) => Ok(sweep_covectors(&[parse_covector(c)?], cfg.seed, which)),
            None if cfg.sweep_n == 0 => Err(ReportError::Usage("n must be at least 1".into())),
            None => Ok(exactness_sweep(cfg.sweep_n, cfg.seed, which)),
        }
    };
    let extended = sweep(Which::Extended)?;
    let quotient = sweep(Which::Quotient)?;
    let passed = extended.failures == 0 && quotient.failures == 0;
    Ok(SymbolsReport {
        suite: "verify-symbols".into(),
        seed: cfg.seed,
        fixed_covector: cfg.covector.clone(),
        extended,
        quotient,
        passed,
    })
}

fn grid_and_lie(cfg: &RunConfig) -> Result<(Grid, std::sync::Arc<FloatLie>), ReportError> {
    cfg.validate()?;
    let grid = Grid::new(cfg.n, cfg.mode)?;
    let lie = FloatLie::by_name(&cfg.algebra).expect("validated");
    Ok((grid, lie))
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub suite: String,
    pub n: usize,
    pub algebra: String,
    pub mode: DerivativeMode,
    pub seed: u64,
    pub amplitude: f64,
    pub tol: f64,
    pub record: FlowRecord,
    pub converged: bool,
    pub monotone: bool,
    /// Points where each predicate holds for the final curvature.
    pub predicates: PredicateSummary,
    pub predicate_tol: f64,
}

#[derive(Clone, Debug)]
pub struct FlowRun {
    pub report: FlowReport,
    pub energy_csv: String,
    pub snapshot: ConnectionSnapshot,
}

impl FlowRun {
    pub fn passed(&self) -> bool {
        self.report.converged
    }

    /// Writes flow.json, energy.csv and connection.json.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>, ReportError> {
        Ok(vec![
            write_artifact(dir, "flow.json", &to_json(&self.report))?,
            write_artifact(dir, "energy.csv", &self.energy_csv)?,
            write_artifact(dir, "connection.json", &to_json(&self.snapshot))?,
        ])
    }
}

/// Flows from a seeded random perturbation of the flat connection.
pub fn run_flow(cfg: &RunConfig) -> Result<FlowRun, ReportError> {
    let (grid, lie) = grid_and_lie(cfg)?;
    let a0 = Connection::random(&grid, &lie, &mut ChaCha8Rng::seed_from_u64(cfg.seed), cfg.amplitude);
    let state = sdci_flow(&grid, &a0, &cfg.flow())?;
    let f = curvature(&grid, &state.connection)?;
    // E bounds the squared curvature obstruction, so sqrt(tol) bounds it pointwise up to the volume.
    let predicate_tol = (cfg.tol * grid.points() as f64).sqrt().max(1e-12);
    let predicates = pointwise_predicates(&f, predicate_tol).map_err(|e| ReportError::Usage(e.to_string()))?;
    let report = FlowReport {
        suite: "flow".into(),
        n: cfg.n,
        algebra: cfg.algebra.clone(),
        mode: cfg.mode,
        seed: cfg.seed,
        amplitude: cfg.amplitude,
        tol: cfg.tol,
        record: FlowRecord::from(&state),
        converged: state.converged(),
        monotone: state.is_monotone(),
        predicates,
        predicate_tol,
    };
    Ok(FlowRun { energy_csv: energy_csv(&state.energy_history)?, snapshot: state.connection.snapshot(), report })
}

#[derive(Clone, Debug, Serialize)]
pub struct CohomologyRun {
    pub suite: String,
    pub mode: DerivativeMode,
    pub background: String,
    pub report: CohomologyReport,
    pub passed: bool,
}

/// Cohomology at the flat connection.
pub fn run_cohomology(cfg: &RunConfig) -> Result<CohomologyRun, ReportError> {
    let (grid, lie) = grid_and_lie(cfg)?;
    let a = Connection::zero(&grid, &lie);
    let report = cohomology_dims_capped(&grid, &a, cfg.method, cfg.rank_cut(), cfg.cap)?;
    let c = &report.checks;
    let passed = !report.indeterminate
        && c.h1_equals_h1_b
        && c.omega_cup_injective
        && c.h0_equals_h0_b
        && c.h3_equals_h2_b
        && c.h2_relation
        && c.index_relation;
    Ok(CohomologyRun { suite: "cohomology".into(), mode: cfg.mode, background: "flat".into(), report, passed })
}

impl SymbolsReport {
    pub fn exit(&self) -> Exit {
        Exit::from_passed(self.passed)
    }
}

impl CohomologyRun {
    pub fn exit(&self) -> Exit {
        Exit::from_passed(self.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gauge::CohomologyMethod;

    #[test]
    fn suite_selection() {
        assert_eq!(parse_suites(None).unwrap().len(), 8);
        assert!(parse_suites(Some("")).unwrap().is_empty());
        assert_eq!(parse_suites(Some("lsigma, basis")).unwrap(), vec![Group::Lsigma, Group::Basis]);
        assert!(matches!(parse_suites(Some("lsigma,bogus")), Err(ReportError::Usage(_))));
    }

    #[test]
    fn covector_parsing() {
        let c = parse_covector("0,1/2,0,0,0,0,-3").unwrap();
        assert_eq!(c.coeff(Blade::basis(2)), crate::exterior::q(1, 2));
        assert_eq!(c.coeff(Blade::basis(7)), crate::exterior::q(-3, 1));
        assert!(parse_covector("0,0,0,0,0,0,0").is_err());
        assert!(parse_covector("1,2").is_err());
        assert!(parse_covector("1,x,0,0,0,0,0").is_err());
    }

    #[test]
    fn fixed_covector_with_reeb_component_passes() {
        let cfg = RunConfig { covector: Some("0,1,0,0,0,0,3".into()), ..Default::default() };
        let r = run_verify_symbols(&cfg).unwrap();
        assert!(r.passed);
        assert_eq!((r.extended.n, r.quotient.n), (1, 1));
    }

    #[test]
    fn horizontal_covector_fails() {
        let cfg = RunConfig { covector: Some("1,0,0,0,0,0,0".into()), ..Default::default() };
        assert_eq!(run_verify_symbols(&cfg).unwrap().exit(), Exit::Fail);
        let cfg = RunConfig { sweep_n: 0, ..Default::default() };
        assert_eq!(run_verify_symbols(&cfg).unwrap_err().exit(), Exit::Usage);
    }

    #[test]
    fn flow_iteration_cap_fails() {
        let cfg = RunConfig { max_iter: 1, ..Default::default() };
        let run = run_flow(&cfg).unwrap();
        assert!(!run.passed());
        assert_eq!(run.report.record.energy_history.len(), 2);
        assert!(run.energy_csv.starts_with("iteration,energy\n0,"));
        let back = Connection::from_snapshot(&run.snapshot).unwrap();
        assert_eq!(back.n(), 3);
    }

    #[test]
    fn flat_abelian_cohomology_run() {
        let cfg = RunConfig { algebra: "u1".into(), ..Default::default() };
        let run = run_cohomology(&cfg).unwrap();
        assert!(run.passed);
        assert_eq!((run.report.h0_b, run.report.h1_b), (1, 6));
    }

    #[test]
    fn dense_request_over_cap_is_usage_error() {
        let cfg = RunConfig { n: 8, method: CohomologyMethod::Dense, ..Default::default() };
        assert_eq!(run_cohomology(&cfg).unwrap_err().exit(), Exit::Usage);
        let cfg = RunConfig { n: 9, ..Default::default() };
        assert_eq!(run_flow(&cfg).unwrap_err().exit(), Exit::Usage);
    }

    #[test]
    fn reports_are_deterministic() {
        let cfg = RunConfig { max_iter: 3, ..Default::default() };
        let a = run_flow(&cfg).unwrap();
        let b = run_flow(&cfg).unwrap();
        assert_eq!(to_json(&a.report), to_json(&b.report));
        assert_eq!(a.energy_csv, b.energy_csv);
    }
}
