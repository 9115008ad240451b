//! Basic and quotient cohomology, transverse Laplacians, harmonic
//! projectors and Green operators.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GaugeError;
use crate::lattice::fourier::per_mode;
use crate::lattice::operator::DENSE_CAP;
use crate::lattice::{
    contract_reeb_matrix, cov_d_op, horizontal_matrix, l_omega_matrix, p_matrix, pointwise_op, quotient_d_op,
    reduce_matrix, Connection, FirstOrder, Grid, GridField, ModeBlocks, Op, AXES,
};
use crate::lie::IdealKind;

type C = Complex64;

/// Numerical rank cut: values below rel_cut * (largest) are zero, and the
/// ratio between the last kept and first dropped value must reach min_gap.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankCut {
    pub rel_cut: f64,
    pub min_gap: f64,
}

impl Default for RankCut {
    fn default() -> Self {
        RankCut { rel_cut: 1e-7, min_gap: 1e3 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageDiag {
    pub stage: String,
    pub domain_dim: usize,
    pub rank: usize,
    pub sigma_max: f64,
    pub last_kept: Option<f64>,
    pub first_dropped: Option<f64>,
    /// last_kept / first_dropped; None when nothing nonzero was dropped.
    pub gap: Option<f64>,
    pub determinate: bool,
}

impl StageDiag {
    fn from_values(stage: &str, domain_dim: usize, values: &[f64], cut: RankCut) -> Self {
        let sigma_max = values.iter().copied().fold(0.0, f64::max);
        let threshold = cut.rel_cut * sigma_max;
        let kept: Vec<f64> = values.iter().copied().filter(|v| *v > threshold).collect();
        let last_kept = kept.iter().copied().reduce(f64::min);
        let first_dropped = values.iter().copied().filter(|v| *v <= threshold).reduce(f64::max);
        let gap = match (last_kept, first_dropped) {
            (Some(k), Some(d)) if d > 0.0 => Some(k / d),
            _ => None,
        };
        StageDiag {
            stage: stage.to_string(),
            domain_dim,
            rank: kept.len(),
            sigma_max,
            last_kept,
            first_dropped,
            gap,
            determinate: gap.map_or(true, |g| g >= cut.min_gap),
        }
    }
}

fn kron_identity(m: &DMatrix<f64>, d: usize) -> DMatrix<C> {
    DMatrix::from_fn(m.nrows() * d, m.ncols() * d, |i, j| {
        if i % d == j % d {
            C::new(m[(i / d, j / d)], 0.0)
        } else {
            C::new(0.0, 0.0)
        }
    })
}

/// Orthonormal basis of the common null space of the given constraints.
fn null_basis(constraints: &[DMatrix<C>], n: usize) -> DMatrix<C> {
    let mut g = DMatrix::<C>::zeros(n, n);
    for c in constraints {
        g += c.adjoint() * c;
    }
    let eig = nalgebra::SymmetricEigen::new(g);
    let scale = eig.eigenvalues.iter().copied().fold(1.0, f64::max);
    let cols: Vec<DVector<C>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() <= 1e-9 * scale)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// Orthonormal basis of the right singular vectors with singular value <= t.
fn kernel_below(s: &DMatrix<C>, t: f64) -> DMatrix<C> {
    let n = s.ncols();
    let eig = nalgebra::SymmetricEigen::new(s.adjoint() * s);
    let cols: Vec<DVector<C>> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, v)| v.max(0.0).sqrt() <= t)
        .map(|(i, _)| eig.eigenvectors.column(i).into_owned())
        .collect();
    if cols.is_empty() {
        DMatrix::zeros(n, 0)
    } else {
        DMatrix::from_columns(&cols)
    }
}

/// A cochain complex C^0 -> C^1 -> ... described by operators on full
/// grade fields plus pointwise constraints cutting out each C^k.
struct ComplexSpec {
    name: &'static str,
    /// Differentials C^k -> C^{k+1}.
    ops: Vec<Op<f64>>,
    /// Constraint operators per degree (their common kernel is C^k).
    constraints: Vec<Vec<Op<f64>>>,
}

/// Per-mode restricted data: bases and restricted stage matrices.
struct Restricted {
    dims: Vec<usize>,
    stages: Vec<DMatrix<C>>,
    bases: Vec<DMatrix<C>>,
}

fn restrict(symbols: &[DMatrix<C>], constraint_syms: &[Vec<DMatrix<C>>], dims_full: &[usize]) -> Restricted {
    let bases: Vec<DMatrix<C>> =
        constraint_syms.iter().zip(dims_full).map(|(cs, n)| null_basis(cs, *n)).collect();
    let stages = symbols.iter().enumerate().map(|(k, s)| bases[k + 1].adjoint() * s * &bases[k]).collect();
    Restricted { dims: bases.iter().map(|b| b.ncols()).collect(), stages, bases }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CohomologyMethod {
    /// Block-diagonalize by Fourier modes (constant connections).
    Fourier,
    /// Assemble dense matrices (small grids, any connection).
    Dense,
}

/// Cohomology of one complex: dimensions and rank diagnostics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexCohomology {
    pub name: String,
    pub cochain_dims: Vec<usize>,
    pub betti: Vec<usize>,
    pub stages: Vec<StageDiag>,
}

struct Solved {
    coh: ComplexCohomology,
    per_mode: Vec<Restricted>,
    thresholds: Vec<f64>,
}

fn solve(grid: &Grid, spec: &ComplexSpec, method: CohomologyMethod, cut: RankCut, cap: usize) -> Result<Solved, GaugeError> {
    let dims_full: Vec<usize> = spec.constraints.iter().enumerate().map(|(k, _)| {
        if k < spec.ops.len() { spec.ops[k].dom() } else { spec.ops[k - 1].cod() }
    }).collect();
    let per_mode: Vec<Restricted> = match method {
        CohomologyMethod::Fourier => {
            let all_invariant = spec.ops.iter().chain(spec.constraints.iter().flatten()).all(|o| o.is_translation_invariant());
            if !all_invariant {
                return Err(GaugeError::NotTranslationInvariant);
            }
            per_mode(grid, |k: [usize; AXES]| {
                let syms: Vec<DMatrix<C>> = spec.ops.iter().map(|o| o.symbol(grid, k).expect("invariant")).collect();
                let cs: Vec<Vec<DMatrix<C>>> = spec
                    .constraints
                    .iter()
                    .map(|v| v.iter().map(|o| o.symbol(grid, k).expect("invariant")).collect())
                    .collect();
                restrict(&syms, &cs, &dims_full)
            })
        }
        CohomologyMethod::Dense => {
            let dense = |o: &Op<f64>| -> Result<DMatrix<C>, GaugeError> {
                Ok(o.assemble(grid, cap)?.map(|x| C::new(x, 0.0)))
            };
            let syms = spec.ops.iter().map(dense).collect::<Result<Vec<_>, _>>()?;
            let cs = spec
                .constraints
                .iter()
                .map(|v| v.iter().map(dense).collect::<Result<Vec<_>, _>>())
                .collect::<Result<Vec<_>, _>>()?;
            let full: Vec<usize> = dims_full.iter().map(|d| d * grid.points()).collect();
            vec![restrict(&syms, &cs, &full)]
        }
    };
    let cochain_dims: Vec<usize> = (0..dims_full.len()).map(|k| per_mode.iter().map(|r| r.dims[k]).sum()).collect();
    let mut stages = Vec::new();
    let mut thresholds = Vec::new();
    for k in 0..spec.ops.len() {
        let values: Vec<f64> = per_mode
            .par_iter()
            .flat_map(|r| r.stages[k].singular_values().iter().copied().collect::<Vec<_>>())
            .collect();
        let diag = StageDiag::from_values(&format!("{}{}", spec.name, k), cochain_dims[k], &values, cut);
        thresholds.push(cut.rel_cut * diag.sigma_max);
        stages.push(diag);
    }
    let betti = (0..cochain_dims.len())
        .map(|k| {
            let out = if k < stages.len() { stages[k].rank } else { 0 };
            let inc = if k > 0 { stages[k - 1].rank } else { 0 };
            cochain_dims[k] - out - inc
        })
        .collect();
    Ok(Solved { coh: ComplexCohomology { name: spec.name.to_string(), cochain_dims, betti, stages }, per_mode, thresholds })
}

fn pw(m: DMatrix<f64>, a: &Connection) -> Op<f64> {
    pointwise_op(m, a.lie())
}

fn complement(m: &DMatrix<f64>) -> DMatrix<f64> {
    DMatrix::identity(m.nrows(), m.ncols()) - m
}

/// Projector onto the horizontal representatives of L^k_H (k = 0, 1, 2).
pub fn horizontal_rep_matrix(k: usize) -> DMatrix<f64> {
    match k {
        0 | 1 => horizontal_matrix(k),
        2 => p_matrix(),
        _ => DMatrix::zeros(crate::lattice::field::blade_count(k), crate::lattice::field::blade_count(k)),
    }
}

/// D_T between horizontal representatives, L^k_H -> L^{k+1}_H.
pub fn d_t_rep_op(a: &Connection, k: usize) -> FirstOrder<f64> {
    cov_d_op(a, k).sandwich(&horizontal_rep_matrix(k + 1), &horizontal_rep_matrix(k))
}

/// D_V on horizontal representatives of degree k.
pub fn d_v_rep_op(a: &Connection, k: usize) -> FirstOrder<f64> {
    let r = horizontal_rep_matrix(k);
    cov_d_op(a, k).sandwich(&(&r * contract_reeb_matrix(k)), &r)
}

/// The basic deformation complex Omega^0_B -> Omega^1_B -> (Omega^2_{6+1})_B.
fn basic_spec(a: &Connection) -> ComplexSpec {
    let ops = vec![d_t_rep_op(a, 0).into(), d_t_rep_op(a, 1).into()];
    let constraints = (0..3)
        .map(|k| vec![pw(complement(&horizontal_rep_matrix(k)), a), d_v_rep_op(a, k).into()])
        .collect();
    ComplexSpec { name: "D_B", ops, constraints }
}

/// The quotient complex L^0 -> L^1 -> L^2 -> L^3.
fn quotient_spec(a: &Connection) -> ComplexSpec {
    let kind = IdealKind::Eight;
    let ops = (0..3).map(|k| quotient_d_op(a, k, kind).into()).collect();
    let constraints = (0..4).map(|k| vec![pw(complement(&reduce_matrix(k, kind)), a)]).collect();
    ComplexSpec { name: "D_L", ops, constraints }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GysinChecks {
    pub h1_equals_h1_b: bool,
    pub omega_cup_injective: bool,
    pub h0_equals_h0_b: bool,
    pub h3_equals_h2_b: bool,
    pub h2_relation: bool,
    pub index_relation: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub n: usize,
    pub algebra: String,
    pub method: CohomologyMethod,
    pub h0_b: usize,
    pub h1_b: usize,
    pub h2_b: usize,
    pub h0: usize,
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
    pub index_t: i64,
    pub rank_omega_cup: usize,
    pub checks: GysinChecks,
    pub singular_values: Vec<StageDiag>,
    pub indeterminate: bool,
}

/// Basic and quotient cohomology at a background connection.
pub fn cohomology_dims(
    grid: &Grid,
    a: &Connection,
    method: CohomologyMethod,
    cut: RankCut,
) -> Result<CohomologyReport, GaugeError> {
    cohomology_dims_capped(grid, a, method, cut, DENSE_CAP)
}

pub fn cohomology_dims_capped(
    grid: &Grid,
    a: &Connection,
    method: CohomologyMethod,
    cut: RankCut,
    cap: usize,
) -> Result<CohomologyReport, GaugeError> {
    let basic = solve(grid, &basic_spec(a), method, cut, cap)?;
    let quotient = solve(grid, &quotient_spec(a), method, cut, cap)?;
    let rank_omega_cup = omega_cup_rank(grid, a, &basic, method, cut, cap)?;
    let (hb, hq) = (&basic.coh.betti, &quotient.coh.betti);
    let index_t = hb[0] as i64 - hb[1] as i64 + hb[2] as i64;
    let checks = GysinChecks {
        h1_equals_h1_b: hq[1] == hb[1],
        omega_cup_injective: rank_omega_cup == hb[0],
        h0_equals_h0_b: hq[0] == hb[0],
        h3_equals_h2_b: hq[3] == hb[2],
        h2_relation: hq[2] as i64 == hb[2] as i64 - hb[0] as i64 + hb[1] as i64,
        index_relation: index_t == hb[0] as i64 - hb[1] as i64 + hb[2] as i64,
    };
    let mut singular_values = basic.coh.stages.clone();
    singular_values.extend(quotient.coh.stages.iter().cloned());
    let indeterminate = singular_values.iter().any(|s| !s.determinate);
    Ok(CohomologyReport {
        n: grid.n(),
        algebra: a.lie().name().to_string(),
        method,
        h0_b: hb[0],
        h1_b: hb[1],
        h2_b: hb[2],
        h0: hq[0],
        h1: hq[1],
        h2: hq[2],
        h3: hq[3],
        index_t,
        rank_omega_cup,
        checks,
        singular_values,
        indeterminate,
    })
}

/// rank of omega ^ : H^0_B -> H^2_B, with H^2_B realized as the cokernel
/// of the last basic stage.
fn omega_cup_rank(
    grid: &Grid,
    a: &Connection,
    basic: &Solved,
    method: CohomologyMethod,
    cut: RankCut,
    cap: usize,
) -> Result<usize, GaugeError> {
    let w: Op<f64> = pw(&p_matrix() * l_omega_matrix(0), a);
    let t0 = basic.thresholds[0];
    let t1 = basic.thresholds[1];
    let rank_of = |r: &Restricted, wsym: &DMatrix<C>| -> usize {
        // H^0: kernel of stage 0 inside C^0.
        let ker = kernel_below(&r.stages[0], t0);
        if ker.ncols() == 0 {
            return 0;
        }
        let k0 = ker;
        let img = r.bases[2].adjoint() * wsym * &r.bases[0] * k0;
        let s1 = &r.stages[1];
        let svd1 = s1.clone().svd(true, false);
        let u = svd1.u.expect("u requested");
        let keep: Vec<usize> = svd1.singular_values.iter().enumerate().filter(|(_, s)| **s > t1).map(|(i, _)| i).collect();
        let mut y = img.clone();
        for i in keep {
            let ui = u.column(i);
            let coeff = ui.adjoint() * &y;
            y -= ui * coeff;
        }
        y.singular_values().iter().filter(|s| **s > cut.rel_cut.max(1e-9)).count()
    };
    match method {
        CohomologyMethod::Fourier => {
            let ranks: Vec<usize> = (0..grid.points())
                .into_par_iter()
                .map(|m| {
                    let k = grid.coords(m);
                    let wsym = w.symbol(grid, k).expect("pointwise");
                    rank_of(&basic.per_mode[m], &wsym)
                })
                .collect();
            Ok(ranks.into_iter().sum())
        }
        CohomologyMethod::Dense => {
            let wd = w.assemble(grid, cap)?.map(|x| C::new(x, 0.0));
            Ok(rank_of(&basic.per_mode[0], &wd))
        }
    }
}

/// Which complex a Laplacian belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ComplexKind {
    /// L^k with D = reduce d_A.
    Quotient,
    /// L^k_H with D_T, D_V; Delta_T = D_T D_T* + D_T* D_T - D_V^2.
    Transverse,
}

fn rep_projector(kind: ComplexKind, k: usize) -> DMatrix<f64> {
    match kind {
        ComplexKind::Quotient => reduce_matrix(k, IdealKind::Eight),
        ComplexKind::Transverse => horizontal_rep_matrix(k),
    }
}

fn complex_d(kind: ComplexKind, a: &Connection, k: usize) -> Op<f64> {
    match kind {
        ComplexKind::Quotient => quotient_d_op(a, k, IdealKind::Eight).into(),
        ComplexKind::Transverse => d_t_rep_op(a, k).into(),
    }
}

/// Delta on degree k of the chosen complex (matrix-free).
pub fn laplacian(kind: ComplexKind, a: &Connection, k: usize) -> Op<f64> {
    let top = match kind {
        ComplexKind::Quotient => 3,
        ComplexKind::Transverse => 2,
    };
    let mut terms: Vec<Op<f64>> = Vec::new();
    if k > 0 {
        let d = complex_d(kind, a, k - 1);
        terms.push(d.after(&d.adjoint()));
    }
    if k < top {
        let d = complex_d(kind, a, k);
        terms.push(d.adjoint().after(&d));
    }
    if kind == ComplexKind::Transverse {
        let v: Op<f64> = d_v_rep_op(a, k).into();
        terms.push(v.after(&v).scale(-1.0));
    }
    Op::Sum(terms)
}

/// Delta_T := D_T D_T* + D_T* D_T - D_V^2 on L^k_H, k in {0, 1, 2}.
pub fn transverse_laplacian(a: &Connection, k: usize) -> Result<Op<f64>, GaugeError> {
    if k > 2 {
        return Err(GaugeError::Degree(k));
    }
    Ok(laplacian(ComplexKind::Transverse, a, k))
}

/// Harmonic projector H, Green operator G and Laplacian per Fourier mode.
#[derive(Clone, Debug)]
pub struct HarmonicGreen {
    pub kind: ComplexKind,
    pub degree: usize,
    pub laplacian: ModeBlocks,
    pub harmonic: ModeBlocks,
    pub green: ModeBlocks,
    /// Projector onto the representatives of the degree (identity on L^k).
    pub reps: ModeBlocks,
    pub kernel_dim: usize,
    pub diag: StageDiag,
}

impl HarmonicGreen {
    pub fn new(grid: &Grid, a: &Connection, kind: ComplexKind, k: usize, cut: RankCut) -> Result<Self, GaugeError> {
        let lap = laplacian(kind, a, k);
        if !lap.is_translation_invariant() {
            return Err(GaugeError::NotTranslationInvariant);
        }
        let d = a.lie().dim();
        let r = kron_identity(&rep_projector(kind, k), d);
        let n = lap.dom();
        let blocks = per_mode(grid, |m| {
            let s = lap.symbol(grid, m).expect("invariant");
            let herm = (&s + s.adjoint()) * C::new(0.5, 0.0);
            let eig = nalgebra::SymmetricEigen::new(herm);
            (eig.eigenvalues, eig.eigenvectors)
        });
        let rank_dim: usize = n * grid.points();
        let values: Vec<f64> = blocks.iter().flat_map(|(e, _)| e.iter().map(|v| v.abs()).collect::<Vec<_>>()).collect();
        // Eigenvalues of the complement of the representatives are zero too;
        // the rank cut is taken over the whole fiber.
        let diag = StageDiag::from_values(&format!("{kind:?}-laplacian-{k}"), rank_dim, &values, cut);
        let threshold = cut.rel_cut * diag.sigma_max;
        let mut lap_b = Vec::with_capacity(blocks.len());
        let mut h_b = Vec::with_capacity(blocks.len());
        let mut g_b = Vec::with_capacity(blocks.len());
        let mut kernel_dim = 0;
        for (m, (vals, vecs)) in blocks.into_iter().enumerate() {
            let s = lap.symbol(grid, grid.coords(m)).expect("invariant");
            let mut g = DMatrix::<C>::zeros(n, n);
            let mut range = DMatrix::<C>::zeros(n, n);
            for (i, v) in vals.iter().enumerate() {
                let col = vecs.column(i);
                if v.abs() > threshold {
                    let outer = &col * col.adjoint();
                    g += &outer * C::new(1.0 / v, 0.0);
                    range += outer;
                }
            }
            let h = &r - &range;
            kernel_dim += (h.trace().re).round() as usize;
            lap_b.push(s);
            h_b.push(h);
            g_b.push(g);
        }
        let mk = |blocks| ModeBlocks { dom: n, cod: n, blocks };
        let reps = mk(vec![r; grid.points()]);
        Ok(HarmonicGreen {
            kind,
            degree: k,
            laplacian: mk(lap_b),
            harmonic: mk(h_b),
            green: mk(g_b),
            reps,
            kernel_dim,
            diag,
        })
    }

    fn apply_blocks(&self, grid: &Grid, b: &ModeBlocks, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        Ok(GridField::from_data(grid, x.grade(), x.lie_dim(), b.apply_real(grid, x.data())?)?)
    }

    pub fn project(&self, grid: &Grid, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.apply_blocks(grid, &self.harmonic, x)
    }

    pub fn green(&self, grid: &Grid, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.apply_blocks(grid, &self.green, x)
    }

    pub fn laplacian(&self, grid: &Grid, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.apply_blocks(grid, &self.laplacian, x)
    }

    /// Orthogonal projection onto the representatives of the degree.
    pub fn representative(&self, grid: &Grid, x: &GridField<f64>) -> Result<GridField<f64>, GaugeError> {
        self.apply_blocks(grid, &self.reps, x)
    }

    /// ||x - H x|| / ||x||.
    pub fn harmonic_defect(&self, grid: &Grid, x: &GridField<f64>) -> Result<f64, GaugeError> {
        let n = x.norm();
        if n == 0.0 {
            return Ok(0.0);
        }
        Ok(x.sub(&self.project(grid, x)?)?.norm() / n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{FloatLie, LatticeError};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Flat constant connection with values in a Cartan direction.
    fn constant_su2(grid: &Grid) -> Connection {
        let mut comps: [Vec<f64>; 7] = std::array::from_fn(|_| vec![0.0; 3]);
        comps[0] = vec![0.3, 0.0, 0.0];
        comps[4] = vec![-0.2, 0.0, 0.0];
        Connection::constant(grid, &FloatLie::su2(), &comps).unwrap()
    }

    #[test]
    fn flat_abelian_cohomology() {
        let grid = Grid::spectral(3).unwrap();
        let r = cohomology_dims(&grid, &Connection::zero(&grid, &FloatLie::u1()), CohomologyMethod::Fourier, RankCut::default()).unwrap();
        assert_eq!((r.h0_b, r.h1_b), (1, 6));
        assert_eq!((r.h0, r.h1, r.h3), (1, 6, r.h2_b));
        assert_eq!(r.index_t, r.h0_b as i64 - r.h1_b as i64 + r.h2_b as i64);
        assert_eq!(r.rank_omega_cup, 1);
        assert!(!r.indeterminate);
        assert!(r.checks.h1_equals_h1_b && r.checks.omega_cup_injective && r.checks.h2_relation);
    }

    #[test]
    fn two_point_grid_is_degenerate() {
        // Every derivative vanishes at N = 2, so each of the 2^6 modes is harmonic.
        let grid = Grid::spectral(2).unwrap();
        let r = cohomology_dims(&grid, &Connection::zero(&grid, &FloatLie::u1()), CohomologyMethod::Fourier, RankCut::default()).unwrap();
        assert_eq!((r.h0_b, r.h1_b), (64, 384));
    }

    #[test]
    fn dense_method_respects_the_cap() {
        let grid = Grid::spectral(3).unwrap();
        let err = cohomology_dims_capped(&grid, &Connection::zero(&grid, &FloatLie::u1()), CohomologyMethod::Dense, RankCut::default(), 1000);
        assert!(matches!(err, Err(GaugeError::Lattice(LatticeError::SizeCap { .. }))));
    }

    #[test]
    fn fourier_method_needs_a_constant_background() {
        let grid = Grid::spectral(3).unwrap();
        let a = Connection::random(&grid, &FloatLie::su2(), &mut ChaCha8Rng::seed_from_u64(1), 0.1);
        let r = cohomology_dims(&grid, &a, CohomologyMethod::Fourier, RankCut::default());
        assert!(matches!(r, Err(GaugeError::NotTranslationInvariant)));
    }

    #[test]
    fn stage_diag_flags_small_gaps() {
        let cut = RankCut::default();
        let d = StageDiag::from_values("s", 4, &[1.0, 0.5, 1e-3, 1e-12], cut);
        assert_eq!(d.rank, 3);
        assert!(d.determinate);
        let d = StageDiag::from_values("s", 3, &[1.0, 2e-7, 5e-8], cut);
        assert!(!d.determinate);
    }

    #[test]
    fn transverse_laplacian_is_symmetric_and_nonnegative() {
        let grid = Grid::spectral(2).unwrap();
        let a = Connection::random(&grid, &FloatLie::su2(), &mut ChaCha8Rng::seed_from_u64(4), 0.5);
        for k in 0..3 {
            let m = transverse_laplacian(&a, k).unwrap().assemble(&grid, DENSE_CAP).unwrap();
            let asym = (&m - m.transpose()).abs().max();
            assert!(asym <= 1e-9, "k = {k}: {asym}");
            let shifted = &m + DMatrix::identity(m.nrows(), m.ncols()) * 1e-9;
            assert!(shifted.cholesky().is_some(), "k = {k}");
        }
        assert!(matches!(transverse_laplacian(&a, 3), Err(GaugeError::Degree(3))));
    }

    #[test]
    fn transverse_kernel_is_harmonic() {
        let grid = Grid::spectral(3).unwrap();
        let a = constant_su2(&grid);
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in 0..2 {
            let hg = HarmonicGreen::new(&grid, &a, ComplexKind::Transverse, k, RankCut::default()).unwrap();
            assert!(hg.kernel_dim > 0);
            let x = hg.project(&grid, &GridField::random(&grid, k, 3, &mut rng, 1.0)).unwrap();
            let dt: Op<f64> = d_t_rep_op(&a, k).into();
            let dv: Op<f64> = d_v_rep_op(&a, k).into();
            let scale = x.norm().max(1e-300);
            let dtx = GridField::from_data(&grid, k + 1, 3, dt.apply(&grid, x.data())).unwrap().norm();
            let dvx = GridField::from_data(&grid, k, 3, dv.apply(&grid, x.data())).unwrap().norm();
            assert!(dtx <= 1e-8 * scale && dvx <= 1e-8 * scale, "k = {k}: {dtx} {dvx}");
            if k > 0 {
                let prev: Op<f64> = d_t_rep_op(&a, k - 1).into();
                let dts = GridField::from_data(&grid, k - 1, 3, prev.adjoint().apply(&grid, x.data())).unwrap().norm();
                assert!(dts <= 1e-8 * scale);
            }
        }
    }

    #[test]
    fn constant_fields_are_transverse_harmonic_when_flat() {
        let grid = Grid::spectral(3).unwrap();
        let hg = HarmonicGreen::new(&grid, &Connection::zero(&grid, &FloatLie::su2()), ComplexKind::Transverse, 0, RankCut::default()).unwrap();
        let c = GridField::constant(&grid, 0, 3, &[1.0, -2.0, 0.5]).unwrap();
        assert!(hg.laplacian(&grid, &c).unwrap().max_abs() < 1e-12);
        assert!(hg.harmonic_defect(&grid, &c).unwrap() < 1e-12);
        assert_eq!(hg.kernel_dim, 3);
    }

    #[test]
    fn green_operator_identities() {
        let grid = Grid::spectral(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for a in [Connection::zero(&grid, &FloatLie::su2()), constant_su2(&grid)] {
            for (kind, k) in [(ComplexKind::Quotient, 1), (ComplexKind::Quotient, 2), (ComplexKind::Transverse, 1)] {
                let hg = HarmonicGreen::new(&grid, &a, kind, k, RankCut::default()).unwrap();
                let x = hg.representative(&grid, &GridField::random(&grid, k, 3, &mut rng, 1.0)).unwrap();
                let h = hg.project(&grid, &x).unwrap();
                let hh = hg.project(&grid, &h).unwrap();
                assert!(hh.sub(&h).unwrap().norm() <= 1e-10 * x.norm());
                let lg = hg.laplacian(&grid, &hg.green(&grid, &x).unwrap()).unwrap();
                assert!(lg.add(&h).unwrap().sub(&x).unwrap().norm() <= 1e-8 * x.norm());
                assert!(hg.green(&grid, &h).unwrap().norm() <= 1e-10 * x.norm());
                assert!(hg.diag.determinate);
            }
        }
    }
}
