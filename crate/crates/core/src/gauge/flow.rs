//! Descent on E(A) = ||p(F_A)||^2 + ||F_V||^2, whose zeros are the
//! selfdual contact instantons.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::functionals::sdci_energy_of;
use super::GaugeError;
use crate::lattice::{cov_d_op, Connection, Grid, GridField, Op};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FlowConfig {
    pub max_iter: usize,
    pub tol: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo_c: f64,
    /// Backtracking factor.
    pub backtrack: f64,
    pub max_backtracks: usize,
    /// Number of stored L-BFGS pairs; 0 gives plain gradient descent.
    pub memory: usize,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig { max_iter: 500, tol: 1e-8, armijo_c: 1e-4, backtrack: 0.5, max_backtracks: 60, memory: 50 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowStatus {
    Converged,
    MaxIterations,
    /// No step satisfied the line search.
    Stalled,
}

#[derive(Clone, Debug)]
pub struct FlowState {
    pub connection: Connection,
    /// Energies of the initial point and of every accepted step.
    pub energy_history: Vec<f64>,
    /// Current E(A).
    pub residual: f64,
    /// Last accepted step length.
    pub step: f64,
    pub iteration: usize,
    pub status: FlowStatus,
}

impl FlowState {
    pub fn converged(&self) -> bool {
        self.status == FlowStatus::Converged
    }

    pub fn is_monotone(&self) -> bool {
        self.energy_history.windows(2).all(|w| w[1] <= w[0])
    }
}

/// Serializable summary of a flow run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlowRecord {
    pub energy_history: Vec<f64>,
    pub residual: f64,
    pub step: f64,
    pub iteration: usize,
    pub status: FlowStatus,
}

impl From<&FlowState> for FlowRecord {
    fn from(s: &FlowState) -> Self {
        FlowRecord {
            energy_history: s.energy_history.clone(),
            residual: s.residual,
            step: s.step,
            iteration: s.iteration,
            status: s.status,
        }
    }
}

/// E and its gradient 2 d_A^*(Q F) as a grade-1 field.
pub fn energy_and_gradient(grid: &Grid, a: &Connection) -> Result<(f64, GridField<f64>), GaugeError> {
    let (e, qf) = sdci_energy_of(grid, a)?;
    let adj: Op<f64> = Op::from(cov_d_op(a, 1)).adjoint();
    let g = adj.apply(grid, qf.data()).into_iter().map(|v| 2.0 * v).collect();
    Ok((e, GridField::from_data(grid, 1, a.lie().dim(), g)?))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// L-BFGS directions with Armijo backtracking; every accepted step
/// decreases E.
pub fn sdci_flow(grid: &Grid, a0: &Connection, cfg: &FlowConfig) -> Result<FlowState, GaugeError> {
    let mut a = a0.clone();
    let (mut e, mut g) = energy_and_gradient(grid, &a)?;
    if !e.is_finite() {
        return Err(GaugeError::Divergence { iteration: 0 });
    }
    let mut state = FlowState {
        connection: a.clone(),
        energy_history: vec![e],
        residual: e,
        step: 0.0,
        iteration: 0,
        status: FlowStatus::MaxIterations,
    };
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>)> = VecDeque::new();
    let mut t_prev: f64 = 1.0;
    while state.iteration < cfg.max_iter {
        if e <= cfg.tol {
            state.status = FlowStatus::Converged;
            break;
        }
        let gv = g.data().to_vec();
        let mut dir = lbfgs_direction(&gv, &pairs);
        let mut slope = dot(&gv, &dir);
        if slope >= 0.0 {
            pairs.clear();
            dir = gv.iter().map(|x| -x).collect();
            slope = dot(&gv, &dir);
        }
        // Steepest descent gets the previous step as a scale hint.
        let mut t = if pairs.is_empty() { t_prev.max(1e-3) } else { 1.0 };
        let mut accepted = None;
        for _ in 0..cfg.max_backtracks {
            let trial = a.shifted(&GridField::from_data(grid, 1, g.lie_dim(), dir.iter().map(|d| t * d).collect())?)?;
            let (et, gt) = energy_and_gradient(grid, &trial)?;
            if !et.is_finite() {
                return Err(GaugeError::Divergence { iteration: state.iteration });
            }
            if et <= e + cfg.armijo_c * t * slope {
                accepted = Some((trial, et, gt));
                break;
            }
            t *= cfg.backtrack;
        }
        let Some((trial, et, gt)) = accepted else {
            if pairs.is_empty() {
                state.status = FlowStatus::Stalled;
                break;
            }
            pairs.clear();
            continue;
        };
        let s: Vec<f64> = dir.iter().map(|d| t * d).collect();
        let y: Vec<f64> = gt.data().iter().zip(&gv).map(|(u, v)| u - v).collect();
        if dot(&s, &y) > 1e-16 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() && cfg.memory > 0 {
            pairs.push_back((s, y));
            if pairs.len() > cfg.memory {
                pairs.pop_front();
            }
        }
        a = trial;
        e = et;
        g = gt;
        t_prev = t;
        state.iteration += 1;
        state.step = t;
        state.residual = e;
        state.energy_history.push(e);
    }
    if e <= cfg.tol {
        state.status = FlowStatus::Converged;
    }
    state.connection = a;
    state.residual = e;
    Ok(state)
}

fn lbfgs_direction(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y) in pairs.iter().rev() {
        let rho = 1.0 / dot(y, s);
        let alpha = rho * dot(s, &q);
        q.iter_mut().zip(y).for_each(|(qi, yi)| *qi -= alpha * yi);
        alphas.push((rho, alpha));
    }
    if let Some((s, y)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y), (rho, alpha)) in pairs.iter().zip(alphas.into_iter().rev()) {
        let beta = rho * dot(y, &q);
        q.iter_mut().zip(s).for_each(|(qi, si)| *qi += (alpha - beta) * si);
    }
    q.iter().map(|v| -v).collect()
}

/// CSV text "iteration,energy".
pub fn energy_csv(history: &[f64]) -> Result<String, GaugeError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["iteration", "energy"]).map_err(|e| GaugeError::Io(e.to_string()))?;
    for (i, e) in history.iter().enumerate() {
        w.write_record([i.to_string(), format!("{e:e}")]).map_err(|e| GaugeError::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| GaugeError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| GaugeError::Io(e.to_string()))
}
