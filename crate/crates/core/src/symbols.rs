//! Principal-symbol complexes at a covector and exact exactness checks.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{QMatrix, StageRank};
use crate::exterior::{Blade, Form, Q, Scalar, REEB};
use crate::lie::{reduce_form, IdealKind};
use crate::sasaki::{eta, omega, star_sigma, v_basis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolError {
    #[error("the covector must be a nonzero 1-form")]
    BadCovector,
}

/// Which complex to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    /// Lambda^0 -> Lambda^1 -> Lambda^6 -> Lambda^7.
    Extended,
    /// L^0 -> L^1 -> L^2 -> L^3.
    #[serde(rename = "L")]
    Quotient,
}

impl Which {
    pub fn label(self) -> &'static str {
        match self {
            Which::Extended => "extended",
            Which::Quotient => "L",
        }
    }
}

/// Symbol maps between consecutive fibers at one covector.
#[derive(Clone, Debug)]
pub struct SymbolComplex {
    pub covector: Form<Q>,
    pub fiber_dims: Vec<usize>,
    pub stages: Vec<QMatrix>,
}

fn check_covector(c: &Form<Q>) -> Result<(), SymbolError> {
    if c.is_zero() || !c.is_of_grade(1) {
        return Err(SymbolError::BadCovector);
    }
    Ok(())
}

/// Stages c∧·, *sigma ∧ c ∧ ·, c∧· on Lambda^0, Lambda^1, Lambda^6, Lambda^7.
pub fn build_extended_symbol(c: &Form<Q>) -> Result<SymbolComplex, SymbolError> {
    check_covector(c)?;
    let f: Vec<Vec<Blade>> = [0, 1, 6, 7].iter().map(|&k| Blade::of_grade(k)).collect();
    let ss = star_sigma::<Q>();
    let stages = vec![
        QMatrix::of_form_map(&f[0], &f[1], |a| c.wedge(a)),
        QMatrix::of_form_map(&f[1], &f[2], |a| ss.wedge(&c.wedge(a))),
        QMatrix::of_form_map(&f[2], &f[3], |a| c.wedge(a)),
    ];
    Ok(SymbolComplex { covector: c.clone(), fiber_dims: f.iter().map(|x| x.len()).collect(), stages })
}

/// Orthogonal bases of the quotient fibers L^0..L^3 (as representatives).
pub fn quotient_fiber_bases() -> Vec<Vec<Form<Q>>> {
    let v = v_basis::<Q>();
    let w = omega::<Q>();
    let et = eta::<Q>();
    let l0 = vec![Form::one()];
    let l1: Vec<Form<Q>> = (1..=7).map(Form::basis1).collect();
    let mut l2: Vec<Form<Q>> = v.to_vec();
    l2.push(w.clone());
    l2.extend((1..=6).map(|i| et.wedge(&Form::basis1(i))));
    let mut l3: Vec<Form<Q>> = v.iter().map(|x| et.wedge(x)).collect();
    l3.push(et.wedge(&w));
    vec![l0, l1, l2, l3]
}

/// Coordinates of `y` in an orthogonal basis, checking that `y` lies in its span.
fn orthogonal_coords(y: &Form<Q>, basis: &[Form<Q>]) -> Vec<Q> {
    let coords: Vec<Q> = basis.iter().map(|b| y.inner(b) / b.inner(b)).collect();
    let rebuilt = basis.iter().zip(&coords).fold(Form::zero(), |acc, (b, x)| &acc + &b.scale(x));
    assert_eq!(&rebuilt, y, "representative outside the quotient basis");
    coords
}

/// Stages p(c∧·) between the quotient fibers.
pub fn build_l_symbol(c: &Form<Q>) -> Result<SymbolComplex, SymbolError> {
    check_covector(c)?;
    let bases = quotient_fiber_bases();
    let stages = (0..3)
        .map(|k| {
            let cols: Vec<Vec<Q>> = bases[k]
                .iter()
                .map(|x| orthogonal_coords(&reduce_form(&c.wedge(x), IdealKind::Eight), &bases[k + 1]))
                .collect();
            QMatrix::from_columns(bases[k + 1].len(), &cols)
        })
        .collect();
    Ok(SymbolComplex { covector: c.clone(), fiber_dims: bases.iter().map(|b| b.len()).collect(), stages })
}

pub fn build_symbol(which: Which, c: &Form<Q>) -> Result<SymbolComplex, SymbolError> {
    match which {
        Which::Extended => build_extended_symbol(c),
        Which::Quotient => build_l_symbol(c),
    }
}

/// Exactness data of one symbol complex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolCheck {
    /// Covector coefficients on e^1..e^7, rendered exactly.
    pub covector: Vec<String>,
    pub stages: Vec<StageRank>,
    /// Consecutive compositions vanish.
    pub complex: bool,
    /// exact_at[k]: kernel of the outgoing map equals the image of the incoming one at fiber k.
    pub exact_at: Vec<bool>,
    pub exact: bool,
}

impl SymbolComplex {
    pub fn compositions_vanish(&self) -> bool {
        self.stages.windows(2).all(|w| w[1].mul(&w[0]).is_zero())
    }

    pub fn check(&self) -> SymbolCheck {
        let stages: Vec<StageRank> = self.stages.iter().map(StageRank::of).collect();
        let n = self.fiber_dims.len();
        let exact_at: Vec<bool> = (0..n)
            .map(|k| {
                let incoming = if k == 0 { 0 } else { stages[k - 1].rank };
                let outgoing_kernel = if k == n - 1 { self.fiber_dims[k] } else { stages[k].kernel };
                incoming == outgoing_kernel
            })
            .collect();
        let complex = self.compositions_vanish();
        let exact = complex && exact_at.iter().all(|&b| b);
        SymbolCheck {
            covector: (1..=7).map(|i| self.covector.coeff(Blade::basis(i)).to_string()).collect(),
            stages,
            complex,
            exact_at,
            exact,
        }
    }
}

/// Result of a randomized sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub which: Which,
    pub n: usize,
    pub seed: u64,
    pub checks: Vec<SymbolCheck>,
    pub failures: usize,
    /// Failing draws whose eta coefficient is zero.
    pub failures_with_horizontal_covector: usize,
}

/// A random nonzero covector with entries p/q, |p| <= 3, 1 <= q <= 3.
pub fn random_covector(rng: &mut impl Rng) -> Form<Q> {
    loop {
        let c = Form::from_terms((1..=7).map(|i| {
            let p: i64 = rng.random_range(-3..=3);
            let d: i64 = rng.random_range(1..=3);
            (Blade::basis(i), Q::new(BigInt::from(p), BigInt::from(d)))
        }));
        if !c.is_zero() {
            return c;
        }
    }
}

/// Checks `n` seeded random covectors. Draws are sequential so the sample
/// does not depend on the thread count; the checks run in parallel.
pub fn exactness_sweep(n: usize, seed: u64, which: Which) -> SweepReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let covectors: Vec<Form<Q>> = (0..n).map(|_| random_covector(&mut rng)).collect();
    sweep_covectors(&covectors, seed, which)
}

/// Checks an explicit list of covectors.
pub fn sweep_covectors(covectors: &[Form<Q>], seed: u64, which: Which) -> SweepReport {
    let checks: Vec<SymbolCheck> = covectors
        .par_iter()
        .map(|c| build_symbol(which, c).expect("sampled covectors are nonzero").check())
        .collect();
    let failures = checks.iter().filter(|c| !c.exact).count();
    let failures_with_horizontal_covector = checks
        .iter()
        .zip(covectors)
        .filter(|(c, v)| !c.exact && v.coeff(Blade::basis(REEB)).is_zero())
        .count();
    SweepReport { which, n: covectors.len(), seed, checks, failures, failures_with_horizontal_covector }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{e, qi};

    #[test]
    fn extended_at_e1() {
        let s = build_extended_symbol(&e(&[1])).unwrap();
        assert!(s.compositions_vanish());
        let c = s.check();
        assert_eq!(c.stages[0].rank, 1);
        // horizontal covectors are not exact at Lambda^1
        assert_eq!(c.stages[1].kernel, 5);
        assert!(!c.exact);
    }

    #[test]
    fn extended_at_eta_is_exact() {
        let c = build_extended_symbol(&e(&[7])).unwrap().check();
        assert!(c.exact);
        assert_eq!(c.stages.iter().map(|s| s.rank).collect::<Vec<_>>(), vec![1, 6, 1]);
    }

    #[test]
    fn quotient_examples() {
        let s = build_l_symbol(&e(&[1])).unwrap();
        assert!(s.compositions_vanish());
        let c = s.check();
        assert!(c.exact_at[1]);
        let c = build_l_symbol(&(e(&[2]) + e(&[7]).scale(&qi(3)))).unwrap().check();
        assert!(c.exact);
    }

    #[test]
    fn zero_covector_is_rejected() {
        assert_eq!(build_l_symbol(&Form::zero()).unwrap_err(), SymbolError::BadCovector);
        assert!(build_extended_symbol(&e(&[1, 2])).is_err());
    }

    #[test]
    fn sweep_is_reproducible() {
        let a = exactness_sweep(20, 7, Which::Quotient);
        let b = exactness_sweep(20, 7, Which::Quotient);
        assert_eq!(a.checks, b.checks);
        assert_eq!(a.failures, a.failures_with_horizontal_covector);
    }

    #[test]
    fn rank_invariant_under_rescaling() {
        let c = e(&[1]) + e(&[3]).scale(&qi(-2)) + e(&[7]);
        let a = build_l_symbol(&c).unwrap().check();
        let b = build_l_symbol(&c.scale(&Q::ratio(-5, 3))).unwrap().check();
        assert_eq!(a.stages, b.stages);
    }
}
