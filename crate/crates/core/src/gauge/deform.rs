//! Kuranishi map, obstruction map, moduli Kaehler data and harmonic
//! tangent representatives.

use serde::{Deserialize, Serialize};

use super::cohomology::{d_t_rep_op, ComplexKind, HarmonicGreen, RankCut};
use super::GaugeError;
use crate::exterior::Blade;
use crate::lattice::{
    bracket_wedge, form_matrix, integrate_top, pair_wedge, pointwise_op, quotient_d_op, reduce_matrix, wedge_constant,
    Connection, FloatLie, Grid, GridField, Op,
};
use crate::lie::IdealKind;
use crate::sasaki::{eta, j_map, omega};

/// Deformation data at a constant background: harmonic theory of L^1, L^2.
#[derive(Clone, Debug)]
pub struct Deformation {
    pub connection: Connection,
    pub h1: HarmonicGreen,
    pub h2: HarmonicGreen,
    d1: Op<f64>,
    /// Largest allowed ||alpha|| for the Kuranishi map and its inverse.
    pub radius: f64,
    pub newton_tol: f64,
    pub newton_max: usize,
}

impl Deformation {
    pub fn new(grid: &Grid, a: &Connection, cut: RankCut) -> Result<Self, GaugeError> {
        Ok(Deformation {
            connection: a.clone(),
            h1: HarmonicGreen::new(grid, a, ComplexKind::Quotient, 1, cut)?,
            h2: HarmonicGreen::new(grid, a, ComplexKind::Quotient, 2, cut)?,
            d1: quotient_d_op(a, 1, IdealKind::Eight).into(),
            radius: 0.5,
            newton_tol: 1e-13,
            newton_max: 60,
        })
    }

    fn lie(&self) -> &std::sync::Arc<FloatLie> {
        self.connection.lie()
    }

    /// [x, y] in L^2 (reduced).
    pub fn bracket(&self, grid: &Grid, x: &GridField<f64>, y: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        let b = bracket_wedge(grid, self.lie(), x, y)?;
        let r = pointwise_op(reduce_matrix(2, IdealKind::Eight), self.lie());
        Ok(GridField::from_data(grid, 2, b.lie_dim(), r.apply(grid, b.data()))?)
    }

    /// delta = D^* G on L^2.
    pub fn delta(&self, grid: &Grid, y: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        let g = self.h2.green(grid, y)?;
        Ok(GridField::from_data(grid, 1, y.lie_dim(), self.d1.adjoint().apply(grid, g.data()))?)
    }

    fn check_radius(&self, alpha: &GridField<f64>) -> Result<(), GaugeError> {
        let norm = alpha.norm();
        if norm > self.radius {
            Err(GaugeError::OutsideRadius { norm, radius: self.radius })
        } else {
            Ok(())
        }
    }

    /// F(alpha) = alpha + (1/2) delta [alpha, alpha].
    pub fn kuranishi(&self, grid: &Grid, alpha: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.check_radius(alpha)?;
        let q = self.delta(grid, &self.bracket(grid, alpha, alpha)?)?;
        Ok(alpha.add(&q.scale(0.5))?)
    }

    /// Solve v + delta [beta, v] = r by fixed-point iteration.
    fn solve_linearized(&self, grid: &Grid, beta: &GridField<f64>, r: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        let mut v = r.clone();
        let scale = r.norm().max(1e-300);
        for it in 0..self.newton_max {
            let next = r.sub(&self.delta(grid, &self.bracket(grid, beta, &v)?)?)?;
            let change = next.sub(&v)?.norm();
            v = next;
            if change <= self.newton_tol * scale {
                return Ok(v);
            }
            if !change.is_finite() || it + 1 == self.newton_max {
                return Err(GaugeError::NewtonNonConvergence { iterations: it + 1, residual: change / scale });
            }
        }
        Ok(v)
    }

    /// F^{-1}(alpha) by Newton's method.
    pub fn kuranishi_inverse(&self, grid: &Grid, alpha: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.check_radius(alpha)?;
        let mut beta = alpha.clone();
        let scale = alpha.norm().max(1e-300);
        for it in 0..self.newton_max {
            let r = self.kuranishi(grid, &beta)?.sub(alpha)?;
            let res = r.norm();
            if res <= self.newton_tol * scale {
                return Ok(beta);
            }
            if !res.is_finite() {
                break;
            }
            let step = self.solve_linearized(grid, &beta, &r)?;
            beta = beta.sub(&step)?;
            if it + 1 == self.newton_max {
                return Err(GaugeError::NewtonNonConvergence { iterations: it + 1, residual: res / scale });
            }
        }
        Err(GaugeError::NewtonNonConvergence { iterations: self.newton_max, residual: f64::NAN })
    }

    /// Psi(alpha) = H [F^{-1}(alpha), F^{-1}(alpha)] for harmonic alpha.
    pub fn obstruction(&self, grid: &Grid, alpha: &GridField<f64>, tol: f64) -> Result<GridField<f64>, GaugeError> {
        let defect = self.h1.harmonic_defect(grid, alpha)?;
        if defect > tol {
            return Err(GaugeError::NotHarmonic { defect });
        }
        let beta = self.kuranishi_inverse(grid, alpha)?;
        self.h2.project(grid, &self.bracket(grid, &beta, &beta)?)
    }

    /// max ||(F(t v) - F(0)) / t - v|| / ||v||: deviation of F'(0) from the identity.
    pub fn linearization_defect(&self, grid: &Grid, v: &GridField<f64>, t: f64) -> Result<f64, GaugeError> {
        let fv = self.kuranishi(grid, &v.scale(t))?;
        let f0 = self.kuranishi(grid, &v.scale(0.0))?;
        let diff = fv.sub(&f0)?.scale(1.0 / t).sub(v)?;
        Ok(diff.norm() / v.norm())
    }
}

/// J on one-forms (vertical components dropped).
pub fn j_matrix() -> nalgebra::DMatrix<f64> {
    let b = Blade::of_grade(1);
    form_matrix(&b, &b, |x| j_map(&x.filter(|c| c.is_horizontal())).expect("horizontal"))
}

pub fn apply_j(grid: &Grid, lie: &std::sync::Arc<FloatLie>, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
    Ok(GridField::from_data(grid, 1, x.lie_dim(), pointwise_op(j_matrix(), lie).apply(grid, x.data()))?)
}

/// Omega(alpha, beta) = (1/2) int <alpha ^ beta> ^ eta ^ omega^2.
pub fn kahler_form(grid: &Grid, alpha: &GridField<f64>, beta: &GridField<f64>) -> Result<f64, GaugeError> {
    let w = omega::<f64>();
    let vol5 = eta::<f64>().wedge(&w).wedge(&w);
    let pb = pair_wedge(grid, alpha, beta)?;
    Ok(0.5 * integrate_top(&wedge_constant(grid, &FloatLie::u1(), &vol5, &pb)?))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KahlerData {
    /// g(alpha, beta) = (alpha^h, beta^h).
    pub g: f64,
    pub omega: f64,
    /// Omega(alpha, beta) + Omega(beta, alpha).
    pub skew_defect: f64,
    /// Omega(alpha, alpha).
    pub omega_alpha_alpha: f64,
    /// Omega(alpha, beta) - g(alpha, J beta).
    pub compatibility_defect: f64,
    /// Omega(J alpha, J beta) - Omega(alpha, beta).
    pub j_invariance_defect: f64,
    /// ||J J alpha + alpha|| / ||alpha||.
    pub j_squared_defect: f64,
    /// ||J alpha - H J alpha|| / ||J alpha||.
    pub j_closure_defect: f64,
}

/// Moduli Kaehler data on the transverse harmonic space of degree 1.
pub fn moduli_kahler_data(
    grid: &Grid,
    lie: &std::sync::Arc<FloatLie>,
    harmonic: &HarmonicGreen,
    alpha: &GridField<f64>,
    beta: &GridField<f64>,
    tol: f64,
) -> Result<(KahlerData, GridField<f64>), GaugeError> {
    for x in [alpha, beta] {
        let defect = harmonic.harmonic_defect(grid, x)?;
        if defect > tol {
            return Err(GaugeError::NotHarmonic { defect });
        }
    }
    let ja = apply_j(grid, lie, alpha)?;
    let jb = apply_j(grid, lie, beta)?;
    let g = alpha.horizontal_part().inner(&beta.horizontal_part())?;
    let om = kahler_form(grid, alpha, beta)?;
    let jj = apply_j(grid, lie, &ja)?;
    let na = alpha.norm().max(1e-300);
    let data = KahlerData {
        g,
        omega: om,
        skew_defect: om + kahler_form(grid, beta, alpha)?,
        omega_alpha_alpha: kahler_form(grid, alpha, alpha)?,
        compatibility_defect: om - alpha.horizontal_part().inner(&jb)?,
        j_invariance_defect: kahler_form(grid, &ja, &jb)? - om,
        j_squared_defect: jj.add(alpha)?.norm() / na,
        j_closure_defect: harmonic.harmonic_defect(grid, &ja)?,
    };
    Ok((data, ja))
}

#[derive(Clone, Debug)]
pub struct TangentRep {
    pub gamma: GridField<f64>,
    /// ||D*_{T, A + alpha^+} gamma||.
    pub coulomb_residual: f64,
    /// ||gamma - (lambda - delta [lambda, alpha] + D_T f)||.
    pub first_order_gap: f64,
    /// h^0_B > 0 at A + alpha^+: f is not unique (the minimal one is used).
    pub reducible: bool,
}

/// Harmonic representative of the tangent vector lambda at the point of
/// the Kuranishi slice over alpha.
pub fn harmonic_tangent_rep(
    grid: &Grid,
    defo: &Deformation,
    alpha: &GridField<f64>,
    lambda: &GridField<f64>,
    cut: RankCut,
) -> Result<TangentRep, GaugeError> {
    let defect = defo.h1.harmonic_defect(grid, alpha)?;
    if defect > 1e-8 {
        return Err(GaugeError::NotHarmonic { defect });
    }
    let beta = defo.kuranishi_inverse(grid, alpha)?;
    // Tangent to the slice: d/dt F^{-1}(alpha + t lambda).
    let lam_t = defo.solve_linearized(grid, &beta, lambda)?;
    // Harmonic alpha is constant up to roundoff; the exact average keeps
    // the shifted background translation invariant.
    let shifted = defo.connection.shifted(&alpha.horizontal_part().averaged())?;
    let green0 = HarmonicGreen::new(grid, &shifted, ComplexKind::Transverse, 0, cut)?;
    let dt: Op<f64> = d_t_rep_op(&shifted, 0).into();
    let d = alpha.lie_dim();
    let dts = GridField::from_data(grid, 0, d, dt.adjoint().apply(grid, lam_t.data()))?;
    let f = green0.green(grid, &dts)?.scale(-1.0);
    let dtf = GridField::from_data(grid, 1, d, dt.apply(grid, f.data()))?;
    let gamma = lam_t.add(&dtf)?;
    let coulomb = GridField::from_data(grid, 0, d, dt.adjoint().apply(grid, gamma.data()))?;
    let first_order = lambda.sub(&defo.delta(grid, &defo.bracket(grid, lambda, alpha)?)?)?.add(&dtf)?;
    Ok(TangentRep {
        coulomb_residual: coulomb.norm(),
        first_order_gap: gamma.sub(&first_order)?.norm(),
        reducible: green0.kernel_dim > 0,
        gamma,
    })
}
