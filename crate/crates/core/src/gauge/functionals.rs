//! Curvature, Yang-Mills energy, the charge kappa, Chern-Simons and d_7.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::exterior::{Blade, Form};
use crate::lattice::{
    bracket_wedge, cov_d, ext_d, form_matrix, integrate_top, p_matrix, pair_wedge, pointwise_op, route_matrix,
    wedge_constant, Connection, FloatLie, Grid, GridField, LatticeError,
};
use crate::sasaki::{l_sigma, omega, p1, sigma};

/// F_A = dA + (1/2)[A ^ A].
pub fn curvature(grid: &Grid, a: &Connection) -> Result<GridField<f64>, LatticeError> {
    let lie = a.lie();
    let af = a.one_form();
    ext_d(grid, lie, &af)?.add(&bracket_wedge(grid, lie, &af, &af)?.scale(0.5))
}

/// Matrix of L_sigma on the horizontal part of a 2-form (zero on vertical blades).
pub fn l_sigma_matrix() -> DMatrix<f64> {
    let b = Blade::of_grade(2);
    form_matrix(&b, &b, |x| {
        let h = x.filter(|c| c.is_horizontal());
        l_sigma(&h).expect("grade 2")
    })
}

/// Orthogonal projector onto Omega^2_1 (horizontal).
pub fn p1_matrix() -> DMatrix<f64> {
    let b = Blade::of_grade(2);
    form_matrix(&b, &b, |x| p1(&x.filter(|c| c.is_horizontal())))
}

fn vertical_matrix() -> DMatrix<f64> {
    let b = Blade::of_grade(2);
    DMatrix::from_fn(b.len(), b.len(), |i, j| if i == j && !b[i].is_horizontal() { 1.0 } else { 0.0 })
}

fn apply_pointwise(grid: &Grid, m: DMatrix<f64>, f: &GridField<f64>, lie: &std::sync::Arc<FloatLie>, grade: usize) -> Result<GridField<f64>, LatticeError> {
    GridField::from_data(grid, grade, f.lie_dim(), pointwise_op(m, lie).apply(grid, f.data()))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyDecomposition {
    /// ||F||^2.
    pub ym: f64,
    /// ||F_H^+||^2 with F_H^+ = (1/2)(F_H + L_sigma F_H).
    pub h_plus: f64,
    /// ||F_H^-||^2 with F_H^- = (1/2)(F_H - L_sigma F_H).
    pub h_minus: f64,
    /// ||F_V||^2.
    pub vertical: f64,
    /// ||P1 F_H||^2.
    pub omega1: f64,
    /// |ym - (h_plus + h_minus + vertical)|.
    pub residual: f64,
    /// |ym - (h_plus + h_minus + vertical - (3/2) omega1)|.
    pub corrected_residual: f64,
}

pub fn energy_of_curvature(grid: &Grid, lie: &std::sync::Arc<FloatLie>, f: &GridField<f64>) -> Result<EnergyDecomposition, LatticeError> {
    let lf = apply_pointwise(grid, l_sigma_matrix(), f, lie, 2)?;
    let fh = f.horizontal_part();
    let plus = fh.add(&lf)?.scale(0.5);
    let minus = fh.sub(&lf)?.scale(0.5);
    let fv = f.sub(&fh)?;
    let f1 = apply_pointwise(grid, p1_matrix(), f, lie, 2)?;
    let ym = f.norm2();
    let (h_plus, h_minus, vertical, omega1) = (plus.norm2(), minus.norm2(), fv.norm2(), f1.norm2());
    let sum = h_plus + h_minus + vertical;
    Ok(EnergyDecomposition {
        ym,
        h_plus,
        h_minus,
        vertical,
        omega1,
        residual: (ym - sum).abs(),
        corrected_residual: (ym - (sum - 1.5 * omega1)).abs(),
    })
}

pub fn energy_decomposition(grid: &Grid, a: &Connection) -> Result<EnergyDecomposition, LatticeError> {
    energy_of_curvature(grid, a.lie(), &curvature(grid, a)?)
}

fn scalar_wedge(grid: &Grid, f: &Form<f64>, x: &GridField<f64>) -> Result<GridField<f64>, LatticeError> {
    wedge_constant(grid, &FloatLie::u1(), f, x)
}

/// kappa = int <F ^ F> ^ sigma with the positive invariant pairing.
pub fn kappa_of_curvature(grid: &Grid, f: &GridField<f64>) -> Result<f64, LatticeError> {
    let ff = pair_wedge(grid, f, f)?;
    Ok(integrate_top(&scalar_wedge(grid, &sigma(), &ff)?))
}

pub fn charge_kappa(grid: &Grid, a: &Connection) -> Result<f64, LatticeError> {
    kappa_of_curvature(grid, &curvature(grid, a)?)
}

/// int <a ^ b> ^ omega^2 for a 1-form a and a 2-form b (or any degrees summing to 3).
fn pair_omega2(grid: &Grid, a: &GridField<f64>, b: &GridField<f64>) -> Result<f64, LatticeError> {
    let w = omega::<f64>();
    let w2 = w.wedge(&w);
    Ok(integrate_top(&scalar_wedge(grid, &w2, &pair_wedge(grid, a, b)?)?))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GaugeVariation {
    pub kappa: f64,
    pub kappa_shifted: f64,
    /// int tr(F_A ^ alpha) ^ omega^2 with the literal matrix trace (tr = -<,>).
    pub literal_term: f64,
    /// kappa(A) - kappa(A + alpha) - literal_term.
    pub residual: f64,
    /// kappa(A + alpha) - kappa(A) - int (2<alpha ^ F> + <alpha ^ d_A alpha>
    /// + (1/3)<alpha ^ [alpha ^ alpha]>) ^ omega^2.
    pub corrected_residual: f64,
}

pub fn charge_gauge_variation(grid: &Grid, a: &Connection, alpha: &GridField<f64>) -> Result<GaugeVariation, LatticeError> {
    let lie = a.lie();
    let f = curvature(grid, a)?;
    let kappa = kappa_of_curvature(grid, &f)?;
    let shifted = a.shifted(alpha)?;
    let kappa_shifted = charge_kappa(grid, &shifted)?;
    let literal_term = -pair_omega2(grid, &f, alpha)?;
    let residual = kappa - kappa_shifted - literal_term;
    let linear = 2.0 * pair_omega2(grid, alpha, &f)?;
    let quadratic = pair_omega2(grid, alpha, &cov_d(grid, a, alpha)?)?;
    let cubic = pair_omega2(grid, alpha, &bracket_wedge(grid, lie, alpha, alpha)?)? / 3.0;
    let corrected_residual = kappa_shifted - kappa - (linear + quadratic + cubic);
    Ok(GaugeVariation { kappa, kappa_shifted, literal_term, residual, corrected_residual })
}

/// CS(A0 + alpha) = (1/2) int tr(d_{A0} alpha ^ alpha + (2/3) alpha ^ alpha ^ alpha) ^ *sigma
/// with tr = -<,>, tr(alpha^3) = (1/2) tr(alpha ^ [alpha ^ alpha]) and *sigma = -(1/2) omega^2
/// for vol = e^{1..7}.
pub fn chern_simons(grid: &Grid, a0: &Connection, alpha: &GridField<f64>) -> Result<f64, LatticeError> {
    let lie = a0.lie();
    let da = cov_d(grid, a0, alpha)?;
    let quad = pair_wedge(grid, &da, alpha)?;
    let cubic = pair_wedge(grid, alpha, &bracket_wedge(grid, lie, alpha, alpha)?)?;
    let integrand = quad.add(&cubic.scale(1.0 / 3.0))?.scale(-1.0);
    let star_sigma = crate::sasaki::star_sigma::<f64>();
    Ok(0.5 * integrate_top(&scalar_wedge(grid, &star_sigma, &integrand)?))
}

/// d_7 alpha = p(d_A alpha).
pub fn d7(grid: &Grid, a: &Connection, alpha: &GridField<f64>) -> Result<GridField<f64>, LatticeError> {
    apply_pointwise(grid, p_matrix(), &cov_d(grid, a, alpha)?, a.lie(), 2)
}

/// The route through L_{*sigma}: keep what *sigma ^ . sees (Omega^2_1 and
/// the vertical part) and map the vertical part to Omega^2_6 by the table.
pub fn d7_route(grid: &Grid, a: &Connection, alpha: &GridField<f64>) -> Result<GridField<f64>, LatticeError> {
    apply_pointwise(grid, route_matrix(), &cov_d(grid, a, alpha)?, a.lie(), 2)
}

/// E(A) = ||p(F)||^2 + ||F_V||^2 and the projected curvature Q F.
pub fn sdci_energy_of(grid: &Grid, a: &Connection) -> Result<(f64, GridField<f64>), LatticeError> {
    let f = curvature(grid, a)?;
    let q = &p_matrix() + vertical_matrix();
    let qf = apply_pointwise(grid, q, &f, a.lie(), 2)?;
    Ok((qf.norm2(), qf))
}

/// Per-point instanton predicates of the curvature, every Lie component.
pub fn pointwise_predicates(f: &GridField<f64>, tol: f64) -> Result<PredicateSummary, crate::sasaki::SasakiError> {
    let points = f.data().len() / f.comps();
    let mut s = PredicateSummary { points, ..Default::default() };
    for p in 0..points {
        let (mut sd, mut asd, mut hym, mut g2) = (true, true, true, true);
        for c in 0..f.lie_dim() {
            let r = crate::sasaki::instanton_predicates(&f.component_form(p, c), tol)?;
            sd &= r.sdci;
            asd &= r.asdci;
            hym &= r.hym;
            g2 &= r.g2;
        }
        s.sdci += sd as usize;
        s.asdci += asd as usize;
        s.hym += hym as usize;
        s.g2 += g2 as usize;
    }
    Ok(s)
}

/// Number of points at which each predicate holds.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSummary {
    pub points: usize,
    pub sdci: usize,
    pub asdci: usize,
    pub hym: usize,
    pub g2: usize,
}
