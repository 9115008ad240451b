use std::sync::OnceLock;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sasakian::gauge::*;
use sasakian::lattice::*;

struct Setup {
    grid: Grid,
    defo: Deformation,
}

fn su2() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| {
        let grid = Grid::spectral(3).unwrap();
        let a = Connection::zero(&grid, &FloatLie::su2());
        let defo = Deformation::new(&grid, &a, RankCut::default()).unwrap();
        Setup { grid, defo }
    })
}

fn u1() -> &'static Setup {
    static S: OnceLock<Setup> = OnceLock::new();
    S.get_or_init(|| {
        let grid = Grid::spectral(3).unwrap();
        let a = Connection::zero(&grid, &FloatLie::u1());
        let defo = Deformation::new(&grid, &a, RankCut::default()).unwrap();
        Setup { grid, defo }
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_of_norm(s: &Setup, d: usize, r: &mut ChaCha8Rng, norm: f64) -> GridField<f64> {
    let x = GridField::random(&s.grid, 1, d, r, 1.0);
    x.scale(norm / x.norm())
}

fn harmonic_of_norm(s: &Setup, d: usize, r: &mut ChaCha8Rng, norm: f64) -> GridField<f64> {
    let x = s.defo.h1.project(&s.grid, &GridField::random(&s.grid, 1, d, r, 1.0)).unwrap();
    x.scale(norm / x.norm())
}

#[test]
fn flat_harmonic_dimensions() {
    let s = su2();
    assert_eq!(s.defo.h1.kernel_dim, 18);
    assert!(s.defo.h1.diag.determinate && s.defo.h2.diag.determinate);
}

#[test]
fn kuranishi_map_basics() {
    let s = su2();
    let mut r = rng(1);
    let zero = GridField::zeros(&s.grid, 1, 3);
    assert_eq!(s.defo.kuranishi(&s.grid, &zero).unwrap().max_abs(), 0.0);
    let v = random_of_norm(s, 3, &mut r, 0.2);
    assert!(s.defo.linearization_defect(&s.grid, &v, 1e-6).unwrap() <= 1e-6);
    let d1 = s.defo.kuranishi(&s.grid, &v).unwrap().sub(&v).unwrap().norm();
    let d2 = s.defo.kuranishi(&s.grid, &v.scale(0.5)).unwrap().sub(&v.scale(0.5)).unwrap().norm();
    assert!(d1 > 1e-6);
    assert!((3.6..=4.4).contains(&(d1 / d2)), "{}", d1 / d2);
}

#[test]
fn kuranishi_inverse_round_trip() {
    let s = su2();
    let v = random_of_norm(s, 3, &mut rng(2), 0.3);
    let b = s.defo.kuranishi_inverse(&s.grid, &v).unwrap();
    assert!(s.defo.kuranishi(&s.grid, &b).unwrap().sub(&v).unwrap().norm() <= 1e-12);
    let big = v.scale(10.0);
    assert!(matches!(s.defo.kuranishi(&s.grid, &big), Err(GaugeError::OutsideRadius { .. })));
}

#[test]
fn abelian_kuranishi_is_identity() {
    let s = u1();
    let v = random_of_norm(s, 1, &mut rng(3), 0.3);
    assert!(s.defo.kuranishi(&s.grid, &v).unwrap().sub(&v).unwrap().max_abs() <= 1e-15);
}

#[test]
fn obstruction_scales_quadratically() {
    let s = su2();
    let mut r = rng(4);
    let h = harmonic_of_norm(s, 3, &mut r, 0.2);
    assert_eq!(s.defo.obstruction(&s.grid, &h.scale(0.0), 1e-8).unwrap().max_abs(), 0.0);
    let p1 = s.defo.obstruction(&s.grid, &h, 1e-8).unwrap();
    let p2 = s.defo.obstruction(&s.grid, &h.scale(0.5), 1e-8).unwrap();
    assert!(p1.norm() > 1e-6);
    let ratio = p2.norm() / p1.norm();
    assert!((0.2..=0.3).contains(&ratio), "{ratio}");
    // The image lies in the harmonic space of degree 2.
    let again = s.defo.h2.project(&s.grid, &p1).unwrap();
    assert!(again.sub(&p1).unwrap().norm() <= 1e-9 * p1.norm());
}

#[test]
fn obstruction_rejects_non_harmonic_input() {
    let s = su2();
    let v = random_of_norm(s, 3, &mut rng(5), 0.2);
    assert!(matches!(s.defo.obstruction(&s.grid, &v, 1e-8), Err(GaugeError::NotHarmonic { .. })));
}

#[test]
fn abelian_obstruction_vanishes() {
    let s = u1();
    let h = harmonic_of_norm(s, 1, &mut rng(6), 0.3);
    assert!(s.defo.obstruction(&s.grid, &h, 1e-8).unwrap().max_abs() <= 1e-15);
}

#[test]
fn moduli_kahler_shadow() {
    let s = su2();
    let lie = FloatLie::su2();
    let t = HarmonicGreen::new(&s.grid, &s.defo.connection, ComplexKind::Transverse, 1, RankCut::default()).unwrap();
    let mut r = rng(7);
    let x = t.project(&s.grid, &GridField::random(&s.grid, 1, 3, &mut r, 1.0)).unwrap();
    let y = t.project(&s.grid, &GridField::random(&s.grid, 1, 3, &mut r, 1.0)).unwrap();
    let (k, jx) = moduli_kahler_data(&s.grid, &lie, &t, &x, &y, 1e-8).unwrap();
    assert!(k.omega.abs() > 1e-6);
    assert!(k.skew_defect.abs() <= 1e-10);
    assert!(k.omega_alpha_alpha.abs() <= 1e-10);
    assert!(k.compatibility_defect.abs() <= 1e-9);
    assert!(k.j_invariance_defect.abs() <= 1e-9);
    assert!(k.j_squared_defect <= 1e-9);
    assert!(k.j_closure_defect <= 1e-8);
    assert!((k.g - x.inner(&y).unwrap()).abs() <= 1e-12);
    assert!((jx.norm() - x.norm()).abs() <= 1e-12);
    let bad = GridField::random(&s.grid, 1, 3, &mut r, 1.0);
    assert!(matches!(moduli_kahler_data(&s.grid, &lie, &t, &bad, &y, 1e-8), Err(GaugeError::NotHarmonic { .. })));
}

#[test]
fn tangent_representative() {
    let s = su2();
    let mut r = rng(8);
    let lam = harmonic_of_norm(s, 3, &mut r, 1.0);
    let alpha = harmonic_of_norm(s, 3, &mut r, 0.1);
    let at_zero = harmonic_tangent_rep(&s.grid, &s.defo, &alpha.scale(0.0), &lam, RankCut::default()).unwrap();
    assert!(at_zero.gamma.sub(&lam).unwrap().norm() <= 1e-12);
    assert!(at_zero.reducible);
    let rep = harmonic_tangent_rep(&s.grid, &s.defo, &alpha, &lam, RankCut::default()).unwrap();
    assert!(rep.coulomb_residual <= 1e-7);
    assert!(rep.first_order_gap <= 1e-10);
    assert!(!rep.reducible);
    let bad = random_of_norm(s, 3, &mut r, 0.1);
    assert!(harmonic_tangent_rep(&s.grid, &s.defo, &bad, &lam, RankCut::default()).is_err());
}

#[test]
fn abelian_tangent_representative_is_lambda() {
    let s = u1();
    let mut r = rng(9);
    let lam = harmonic_of_norm(s, 1, &mut r, 1.0);
    let alpha = harmonic_of_norm(s, 1, &mut r, 0.1);
    let rep = harmonic_tangent_rep(&s.grid, &s.defo, &alpha, &lam, RankCut::default()).unwrap();
    assert!(rep.gamma.sub(&lam).unwrap().norm() <= 1e-12);
}
