//! Run configuration: a flat `key = value` file in TOML syntax.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::ReportError;
use crate::gauge::{CohomologyMethod, FlowConfig, RankCut};
use crate::lattice::DerivativeMode;
use crate::lattice::operator::DENSE_CAP;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Points per axis of the transverse grid.
    pub n: usize,
    /// "su2" or "u1".
    pub algebra: String,
    pub seed: u64,
    pub mode: DerivativeMode,
    pub method: CohomologyMethod,
    /// Size of the random perturbation of the flat connection that starts the flow.
    pub amplitude: f64,
    pub max_iter: usize,
    pub tol: f64,
    pub memory: usize,
    /// Output directory for artifacts; nothing is written when absent.
    pub out: Option<String>,
    /// Number of random covectors per complex in verify-symbols.
    pub sweep_n: usize,
    /// Comma-separated verify-algebra groups; absent means all.
    pub suites: Option<String>,
    /// Fixed covector "c1,...,c7" with rational entries, replacing the random sweep.
    pub covector: Option<String>,
    pub rel_cut: f64,
    pub min_gap: f64,
    /// Largest dense matrix, in entries.
    pub cap: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let flow = FlowConfig::default();
        let cut = RankCut::default();
        RunConfig {
            n: 3,
            algebra: "su2".into(),
            seed: 7,
            mode: DerivativeMode::Spectral,
            method: CohomologyMethod::Fourier,
            amplitude: 0.1,
            max_iter: flow.max_iter,
            tol: flow.tol,
            memory: flow.memory,
            out: None,
            sweep_n: 1000,
            suites: None,
            covector: None,
            rel_cut: cut.rel_cut,
            min_gap: cut.min_gap,
            cap: DENSE_CAP,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ReportError> {
        toml::from_str(text).map_err(|e| ReportError::Config(e.message().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, ReportError> {
        let text = std::fs::read_to_string(path).map_err(|e| ReportError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_text(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn flow(&self) -> FlowConfig {
        FlowConfig { max_iter: self.max_iter, tol: self.tol, memory: self.memory, ..FlowConfig::default() }
    }

    pub fn rank_cut(&self) -> RankCut {
        RankCut { rel_cut: self.rel_cut, min_gap: self.min_gap }
    }

    pub fn validate(&self) -> Result<(), ReportError> {
        let bad = |m: String| Err(ReportError::Usage(m));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if crate::lattice::FloatLie::by_name(&self.algebra).is_none() {
            return bad(format!("unknown algebra '{}' (expected su2 or u1)", self.algebra));
        }
        if !(self.tol > 0.0 && self.amplitude >= 0.0 && self.rel_cut > 0.0 && self.min_gap >= 1.0) {
            return bad("tol and rel_cut must be positive, amplitude nonnegative, min_gap at least 1".into());
        }
        Ok(())
    }
}
