//! The exact algebra suite: every table and identity of the contact
//! Calabi-Yau model checked with rational arithmetic.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exact::QMatrix;
use crate::exterior::{q, Blade, ComplexScalar, Form, Orientation, Q, QC};
use crate::lie::{ideal_dim, quotient_dim, reduce_form, IdealKind};
use crate::sasaki::{
    dz, dzbar, eigen_split, epsilon, eta, instanton_predicates, j_map, l_epsilon, l_sigma_oriented, lambda3_decompose,
    omega, phi, psi, sigma, theta_minus, theta_plus, transverse_star, v_basis, vertical_to_six_table, w_basis,
};

/// One row of a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub group: String,
    /// The identity being checked.
    pub anchor: String,
    pub passed: bool,
    /// Computed value when the check fails.
    pub detail: String,
}

/// Groups of the algebra suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Exterior,
    Lsigma,
    Basis,
    Star,
    Kernels,
    Lambda3,
    Instantons,
    Ideal,
}

impl Group {
    pub const ALL: [Group; 8] = [
        Group::Exterior,
        Group::Lsigma,
        Group::Basis,
        Group::Star,
        Group::Kernels,
        Group::Lambda3,
        Group::Instantons,
        Group::Ideal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Group::Exterior => "exterior",
            Group::Lsigma => "lsigma",
            Group::Basis => "basis",
            Group::Star => "star",
            Group::Kernels => "kernels",
            Group::Lambda3 => "lambda3",
            Group::Instantons => "instantons",
            Group::Ideal => "ideal",
        }
    }
}

impl std::str::FromStr for Group {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Group::ALL.into_iter().find(|g| g.name() == s.trim()).ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

/// Deliberate corruption of the Hodge star, used to show that the suite
/// detects sign errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mutation {
    #[default]
    None,
    FlipStar,
}

/// Checks that fail under the implemented conventions because the stated
/// identity is false (see the README section on conventions).
pub const KNOWN_CONFLICTS: &[&str] = &[
    "star-sigma",
    "star-phi-psi",
    "star-t-j",
    "epsilon-normalization",
    "leps-kernel-six",
    "leps-table-e17",
    "leps-table-e37",
    "leps-table-e57",
    "ideal-codims",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub mutation: Mutation,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failing_ids(&self) -> Vec<&str> {
        self.checks.iter().filter(|c| !c.passed).map(|c| c.id.as_str()).collect()
    }
}

struct Ctx {
    orientation: Orientation,
    checks: Vec<Check>,
    group: Group,
}

impl Ctx {
    fn star(&self, a: &Form<Q>) -> Form<Q> {
        a.hodge_star_oriented(self.orientation)
    }

    fn l_sigma(&self, a: &Form<Q>) -> Form<Q> {
        l_sigma_oriented(a, self.orientation).expect("grade 2")
    }

    fn push(&mut self, id: &str, anchor: &str, passed: bool, detail: impl FnOnce() -> String) {
        let detail = if passed { String::new() } else { detail() };
        self.checks.push(Check { id: id.to_string(), group: self.group.name().to_string(), anchor: anchor.to_string(), passed, detail });
    }

    fn equal(&mut self, id: &str, anchor: &str, got: &Form<Q>, want: &Form<Q>) {
        self.push(id, anchor, got == want, || format!("got {}, expected {}", got.render(), want.render()));
    }

    fn equal_c(&mut self, id: &str, anchor: &str, got: &Form<QC>, want: &Form<QC>) {
        self.push(id, anchor, got == want, || format!("got {}, expected {}", got.render(), want.render()));
    }
}

fn e(idx: &[usize]) -> Form<Q> {
    Form::e(idx)
}

fn blade_id(b: Blade) -> String {
    b.label()
}

/// Runs the selected groups (all when `groups` is empty is the caller's choice).
pub fn verify_algebra(groups: &[Group], mutation: Mutation, seed: u64) -> SuiteReport {
    let orientation = match mutation {
        Mutation::None => Orientation::Positive,
        Mutation::FlipStar => Orientation::Negative,
    };
    let mut ctx = Ctx { orientation, checks: Vec::new(), group: Group::Exterior };
    let mut warnings = Vec::new();
    if groups.is_empty() {
        warnings.push("empty suite selection: no checks run".to_string());
    }
    for &g in groups {
        ctx.group = g;
        match g {
            Group::Exterior => exterior(&mut ctx),
            Group::Lsigma => lsigma(&mut ctx),
            Group::Basis => basis(&mut ctx),
            Group::Star => star(&mut ctx),
            Group::Kernels => kernels(&mut ctx),
            Group::Lambda3 => lambda3(&mut ctx),
            Group::Instantons => instantons(&mut ctx, seed),
            Group::Ideal => ideal(&mut ctx),
        }
    }
    let failed = ctx.checks.iter().filter(|c| !c.passed).count();
    SuiteReport {
        suite: "verify-algebra".to_string(),
        mutation,
        seed,
        passed: ctx.checks.len() - failed,
        failed,
        checks: ctx.checks,
        warnings,
    }
}

fn exterior(ctx: &mut Ctx) {
    let w = omega::<Q>();
    let want = (e(&[1, 2, 4, 5]) + e(&[1, 3, 4, 6]) + e(&[2, 3, 5, 6])).scale(&q(-2, 1));
    ctx.equal("omega-squared", "omega ^ omega = -2(e1245 + e1346 + e2356)", &w.wedge(&w), &want);
    let all = Blade::all();
    let bad: Vec<String> = all
        .iter()
        .filter(|b| {
            let f = Form::<Q>::term(**b, q(1, 1));
            ctx.star(&ctx.star(&f)) != f
        })
        .map(|b| blade_id(*b))
        .collect();
    ctx.push("star-involution", "** = 1 on every blade", bad.is_empty(), || bad.join(","));
    let bad: Vec<String> = all
        .iter()
        .filter(|b| {
            let f = Form::<Q>::term(**b, q(1, 1));
            let p = b.grade();
            let lhs = ctx.star(&f).contract_reeb();
            let rhs = ctx.star(&eta::<Q>().wedge(&f));
            let rhs = if p % 2 == 0 { rhs } else { -rhs };
            lhs != rhs
        })
        .map(|b| blade_id(*b))
        .collect();
    ctx.push("contraction-star", "i_xi(*a) = (-1)^p *(eta ^ a) on every blade", bad.is_empty(), || bad.join(","));
    let orthonormal = all.iter().all(|a| {
        all.iter().all(|b| {
            let x = Form::<Q>::term(*a, q(1, 1)).inner(&Form::term(*b, q(1, 1)));
            x == if a == b { q(1, 1) } else { q(0, 1) }
        })
    });
    ctx.push("orthonormal-blades", "<e^I, e^J> = delta_IJ", orthonormal, || "pairing is not the identity".into());
    let s = sigma::<Q>();
    ctx.push("sigma-norm", "<sigma, sigma> = 3", s.inner(&s) == q(3, 1), || s.inner(&s).to_string());
}

/// The L_sigma action table on horizontal basis 2-forms.
fn lsigma_table() -> Vec<(Vec<usize>, Form<Q>)> {
    vec![
        (vec![1, 2], e(&[4, 5])),
        (vec![1, 3], e(&[4, 6])),
        (vec![1, 5], e(&[2, 4])),
        (vec![1, 4], -(e(&[3, 6]) + e(&[2, 5]))),
        (vec![4, 5], e(&[1, 2])),
        (vec![1, 6], e(&[3, 4])),
        (vec![2, 3], e(&[5, 6])),
        (vec![2, 4], e(&[1, 5])),
        (vec![2, 5], -(e(&[3, 6]) + e(&[1, 4]))),
        (vec![4, 6], e(&[1, 3])),
        (vec![2, 6], e(&[3, 5])),
        (vec![3, 4], e(&[1, 6])),
        (vec![3, 5], e(&[2, 6])),
        (vec![3, 6], -(e(&[2, 5]) + e(&[1, 4]))),
        (vec![5, 6], e(&[2, 3])),
    ]
}

fn lsigma(ctx: &mut Ctx) {
    for (idx, want) in lsigma_table() {
        let b = Blade::new(&idx).expect("valid blade");
        let got = ctx.l_sigma(&e(&idx));
        ctx.equal(&format!("lsigma-table-{}", blade_id(b)), &format!("L_sigma({}) = {}", b.label(), want.render()), &got, &want);
    }
    for (i, v) in v_basis::<Q>().iter().enumerate() {
        let got = ctx.l_sigma(v);
        ctx.equal(&format!("lsigma-v{}", i + 1), &format!("L_sigma(v_{}) = -v_{}", i + 1, i + 1), &got, &-v.clone());
    }
    for (i, w) in w_basis::<Q>().iter().enumerate() {
        let got = ctx.l_sigma(w);
        ctx.equal(&format!("lsigma-w{}", i + 1), &format!("L_sigma(w_{}) = w_{}", i + 1, i + 1), &got, w);
    }
    let w = omega::<Q>();
    let got = ctx.l_sigma(&w);
    ctx.equal("lsigma-omega", "L_sigma(omega) = -2 omega", &got, &w.scale(&q(-2, 1)));
    let blades = Blade::of_grade(2);
    let m = QMatrix::of_form_map(&blades, &blades, |a| ctx.l_sigma(a));
    let mult: Vec<usize> = [-2, -1, 1, 0]
        .iter()
        .map(|&l| m.sub(&QMatrix::identity(blades.len()).scale(&q(l, 1))).nullity())
        .collect();
    ctx.push(
        "lsigma-spectrum",
        "L_sigma has eigenvalues -2, -1, +1, 0 with multiplicities 1, 6, 8, 6",
        mult == [1, 6, 8, 6],
        || format!("{mult:?}"),
    );
}

fn basis(ctx: &mut Ctx) {
    let i = QC::i();
    let half = QC::from_real(q(1, 2));
    let c = |f: &Form<Q>| Form::<QC>::from_real(f);
    let v = v_basis::<Q>();
    let w = w_basis::<Q>();
    let pairs = [(1, 2), (1, 3), (2, 3)];
    for (k, (a, b)) in pairs.iter().enumerate() {
        let got = dz::<QC>(*a).wedge(&dz(*b));
        let want = &c(&v[2 * k]) + &c(&v[2 * k + 1]).scale(&i);
        ctx.equal_c(&format!("dz{a}dz{b}"), &format!("dz{a} ^ dz{b} = v_{} + i v_{}", 2 * k + 1, 2 * k + 2), &got, &want);
        let got = dzbar::<QC>(*a).wedge(&dzbar(*b));
        let want = &c(&v[2 * k]) - &c(&v[2 * k + 1]).scale(&i);
        ctx.equal_c(&format!("dzbar{a}dzbar{b}"), &format!("dzbar{a} ^ dzbar{b} = v_{} - i v_{}", 2 * k + 1, 2 * k + 2), &got, &want);
    }
    let m = |a: usize, b: usize| dz::<QC>(a).wedge(&dzbar(b));
    for (k, (a, b)) in pairs.iter().enumerate() {
        let re = (&m(*a, *b) - &m(*b, *a)).scale(&half);
        ctx.equal_c(&format!("w{}", 2 * k + 1), &format!("w_{} = (1/2)(dz{a} ^ dzbar{b} - dz{b} ^ dzbar{a})", 2 * k + 1), &re, &c(&w[2 * k]));
        let im = (&m(*a, *b) + &m(*b, *a)).scale(&(half.clone() * i.clone()));
        ctx.equal_c(&format!("w{}", 2 * k + 2), &format!("w_{} = (i/2)(dz{a} ^ dzbar{b} + dz{b} ^ dzbar{a})", 2 * k + 2), &im, &c(&w[2 * k + 1]));
    }
    let ih = half.clone() * i.clone();
    ctx.equal_c("w7", "w_7 = (i/2)(dz1 ^ dzbar1 - dz3 ^ dzbar3)", &(&m(1, 1) - &m(3, 3)).scale(&ih), &c(&w[6]));
    ctx.equal_c("w8", "w_8 = (i/2)(dz2 ^ dzbar2 - dz3 ^ dzbar3)", &(&m(2, 2) - &m(3, 3)).scale(&ih), &c(&w[7]));
    let om = &(&m(1, 1) + &m(2, 2)) + &m(3, 3);
    ctx.equal_c("omega-complex", "omega = (i/2) sum dz_j ^ dzbar_j", &om.scale(&ih), &c(&omega()));
}

fn star(ctx: &mut Ctx) {
    let w = omega::<Q>();
    let half_w2 = w.wedge(&w).scale(&q(1, 2));
    let got = ctx.star(&sigma());
    ctx.equal("star-sigma", "*sigma = (1/2) omega^2", &got, &half_w2);
    let got = ctx.star(&phi());
    ctx.equal("star-phi-psi", "*phi = psi = (1/2) omega^2 + eta ^ Theta_+", &got, &psi());
    let vol = e(&[1, 2, 3, 4, 5, 6, 7]);
    let w3 = w.wedge(&w).wedge(&w).scale(&q(1, 6));
    let vol_formula = eta::<Q>().wedge(&w3);
    ctx.push(
        "volume-form",
        "eta ^ omega^3 / 3! = -e1234567 in the coframe",
        vol_formula == -vol.clone(),
        || vol_formula.render(),
    );
    // *_T from the definition against (1/2) J beta ^ omega^2.
    let bad: Vec<String> = (1..=6)
        .filter(|&i| {
            let b = Form::<Q>::basis1(i);
            let lhs = transverse_star(&b).expect("horizontal");
            let rhs = j_map(&b).expect("horizontal").wedge(&w.wedge(&w)).scale(&q(1, 2));
            lhs != rhs
        })
        .map(|i| format!("e{i}"))
        .collect();
    ctx.push("star-t-j", "*_T beta = (1/2) J beta ^ omega^2 for beta = e1..e6", bad.is_empty(), || bad.join(","));
    let bad: Vec<String> = Blade::all()
        .into_iter()
        .filter(|b| b.is_horizontal())
        .filter(|b| {
            let f = Form::<Q>::term(*b, q(1, 1));
            ctx.star(&f) != transverse_star(&f).expect("horizontal").wedge(&eta())
        })
        .map(blade_id)
        .collect();
    ctx.push("star-transverse", "*a = *_T a ^ eta on horizontal blades", bad.is_empty(), || bad.join(","));
    let eps = epsilon::<QC>();
    let lhs = eps.wedge(&eps.conj());
    // (-1)^{n(n+1)/2} i^n omega^n with n = 3.
    let wc = Form::<QC>::from_real(&w);
    let rhs = wc.wedge(&wc).wedge(&wc).scale(&(QC::i() * QC::i() * QC::i()));
    ctx.equal_c("epsilon-normalization", "epsilon ^ conj(epsilon) = (-1)^6 i^3 omega^3", &lhs, &rhs);
    let tp = theta_plus::<Q>();
    let tm = theta_minus::<Q>();
    let want_tp = &(&e(&[1, 2, 3]) + &e(&[2, 4, 6])) - &(&e(&[3, 4, 5]) + &e(&[1, 5, 6]));
    let want_tm = &(&e(&[1, 2, 6]) + &e(&[2, 3, 4])) - &(&e(&[4, 5, 6]) + &e(&[1, 3, 5]));
    ctx.equal("theta-plus", "Theta_+ = e123 + e246 - e345 - e156", &tp, &want_tp);
    ctx.equal("theta-minus", "Theta_- = e126 + e234 - e456 - e135", &tm, &want_tm);
}

fn kernels(ctx: &mut Ctx) {
    let ss = ctx.star(&sigma());
    let bad: Vec<String> = v_basis::<Q>()
        .iter()
        .map(|v| ("v", v.clone()))
        .chain(w_basis::<Q>().iter().map(|w| ("w", w.clone())))
        .enumerate()
        .filter(|(_, (_, f))| !f.wedge(&ss).is_zero())
        .map(|(k, (n, _))| format!("{n}{}", if k < 6 { k + 1 } else { k - 5 }))
        .collect();
    ctx.push("lstar-kernel", "L_{*sigma} = 0 on Omega^2_8 + Omega^2_6", bad.is_empty(), || bad.join(","));
    let dom: Vec<Form<Q>> = std::iter::once(omega::<Q>()).chain((1..=6).map(|i| e(&[i, 7]))).collect();
    let cols: Vec<Vec<Q>> = dom.iter().map(|f| f.wedge(&ss).coords(&Blade::of_grade(6))).collect();
    let rank = QMatrix::from_columns(7, &cols).rank();
    ctx.push("lstar-iso", "L_{*sigma}: Omega^2_1 + Omega^2_V -> Lambda^6 is bijective", rank == 7, || format!("rank {rank}"));
    let mut bad = Vec::new();
    for (k, w) in w_basis::<Q>().iter().enumerate() {
        if !l_epsilon(w).is_zero() {
            bad.push(format!("w{}", k + 1));
        }
    }
    if !l_epsilon(&omega::<Q>()).is_zero() {
        bad.push("omega".into());
    }
    ctx.push("leps-kernel-eight-one", "L_eps = 0 on Omega^2_8 + Omega^2_1", bad.is_empty(), || bad.join(","));
    let bad: Vec<String> = v_basis::<Q>()
        .iter()
        .enumerate()
        .filter(|(_, v)| !l_epsilon(*v).is_zero())
        .map(|(k, v)| format!("v{} -> {}", k + 1, l_epsilon(v).render()))
        .collect();
    ctx.push("leps-kernel-six", "L_eps = 0 on Omega^2_6", bad.is_empty(), || bad.join("; "));
    let v = v_basis::<Q>();
    let table = [(1, 5), (2, 3), (3, 1), (4, 6), (5, 4), (6, 2)];
    for (i, t) in table {
        let a = e(&[i, 7]);
        let want = -v[t - 1].clone();
        let got = l_epsilon(&a);
        ctx.equal(&format!("leps-table-e{i}7"), &format!("L_eps(e{i}7) = -v_{t}"), &got, &want);
        let got = vertical_to_six_table(&a);
        ctx.equal(&format!("t-table-e{i}7"), &format!("T(e{i}7) = -v_{t}"), &got, &want);
    }
}

fn lambda3(ctx: &mut Ctx) {
    let blades = Blade::horizontal_of_grade(3);
    let parts: Vec<_> = blades.iter().map(|b| lambda3_decompose(&Form::term(*b, q(1, 1))).expect("horizontal 3-form")).collect();
    let rank_of = |pick: &dyn Fn(usize) -> Form<Q>| {
        let cols: Vec<Vec<Q>> = (0..blades.len()).map(|k| pick(k).coords(&blades)).collect();
        QMatrix::from_columns(blades.len(), &cols).rank()
    };
    let dims = [
        rank_of(&|k| parts[k].re.clone()),
        rank_of(&|k| parts[k].im.clone()),
        rank_of(&|k| parts[k].six.clone()),
        rank_of(&|k| parts[k].twelve.clone()),
    ];
    ctx.push("lambda3-dims", "Lambda^3_H splits with dimensions 1, 1, 6, 12", dims == [1, 1, 6, 12], || format!("{dims:?}"));
    let top = e(&[1, 2, 3, 4, 5, 6]);
    let w = omega::<Q>();
    let tp = theta_plus::<Q>();
    let tm = theta_minus::<Q>();
    let rows: [(&[usize], i64, i64); 8] = [
        (&[3, 4, 5], 0, 1),
        (&[1, 5, 6], 0, 1),
        (&[1, 2, 6], 1, 0),
        (&[1, 3, 5], -1, 0),
        (&[4, 5, 6], -1, 0),
        (&[2, 3, 4], 1, 0),
        (&[1, 2, 3], 0, -1),
        (&[2, 4, 6], 0, -1),
    ];
    for (idx, cp, cm) in rows {
        let a = e(idx);
        let got = (a.wedge(&w), a.wedge(&tp), a.wedge(&tm));
        let want = (Form::zero(), top.scale(&q(cp, 1)), top.scale(&q(cm, 1)));
        let b = Blade::new(idx).expect("valid blade");
        ctx.push(
            &format!("lambda3-table-{}", blade_id(b)),
            &format!("{} ^ (omega, Theta_+, Theta_-) = (0, {cp} e123456, {cm} e123456)", b.label()),
            got == want,
            || format!("({}, {}, {})", got.0.render(), got.1.render(), got.2.render()),
        );
    }
    let bad: Vec<String> = blades
        .iter()
        .filter(|b| !reduce_form(&Form::<Q>::term(**b, q(1, 1)), IdealKind::Eight).is_zero())
        .map(|b| blade_id(*b))
        .collect();
    ctx.push("lambda3-in-ideal", "every horizontal 3-form reduces to 0 in L^3", bad.is_empty(), || bad.join(","));
}

fn random_w_span(rng: &mut ChaCha8Rng) -> Form<Q> {
    w_basis::<Q>().iter().fold(Form::zero(), |acc, w| &acc + &w.scale(&q(rng.random_range(-5..=5), rng.random_range(1..=4))))
}

fn instantons(ctx: &mut Ctx, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ps = psi::<Q>();
    let bad = (0..1000).filter(|_| !random_w_span(&mut rng).wedge(&ps).is_zero()).count();
    ctx.push("sdci-implies-g2", "F in span(w) => F ^ psi = 0 (1000 random F)", bad == 0, || format!("{bad} failures"));
    let blades = Blade::of_grade(2);
    let mut mismatches = 0;
    let mut both = 0;
    for k in 0..1000 {
        // Half of the draws lie in span(w) plus a random perturbation in a
        // random subset of directions, so both outcomes occur.
        let mut f = random_w_span(&mut rng);
        if k % 2 == 1 {
            let b = blades[rng.random_range(0..blades.len())];
            f = &f + &Form::term(b, q(rng.random_range(1..=3), 1));
        }
        let p = instanton_predicates(&f, 0.0).expect("grade 2");
        if p.sdci != p.hym {
            mismatches += 1;
        }
        both += p.sdci as usize;
    }
    ctx.push(
        "sdci-iff-hym",
        "eigen_split has only a p8 part <=> type (1,1) and <F, omega> = 0 (1000 random F)",
        mismatches == 0 && both > 0 && both < 1000,
        || format!("{mismatches} mismatches, {both} selfdual"),
    );
    let w2 = &w_basis::<Q>()[1];
    let p = instanton_predicates(w2, 0.0).expect("grade 2");
    ctx.push("predicates-w2", "w_2 is SDCI, HYM and G2", p.sdci && p.hym && p.g2, || format!("{p:?}"));
    let p = instanton_predicates(&omega::<Q>(), 0.0).expect("grade 2");
    ctx.push("predicates-omega", "omega is not SDCI, HYM or G2", !p.sdci && !p.hym && !p.g2, || format!("{p:?}"));
    let split = eigen_split(&e(&[1, 2])).expect("grade 2");
    let v = v_basis::<Q>();
    let w = w_basis::<Q>();
    let ok = split.p6 == v[0].scale(&q(1, 2)) && split.p8 == w[0].scale(&q(1, 2)) && split.p1.is_zero() && split.pv.is_zero();
    ctx.push("split-e12", "e12 = v_1 / 2 + w_1 / 2", ok, || format!("{split:?}"));
}

fn ideal(ctx: &mut Ctx) {
    let dims: Vec<usize> = (0..=7).map(|k| quotient_dim(k, IdealKind::Eight)).collect();
    ctx.push("quotient-dims", "dim L^k = 1, 7, 13, 7, 0, 0, 0, 0 per Lie direction", dims == [1, 7, 13, 7, 0, 0, 0, 0], || format!("{dims:?}"));
    let six: Vec<usize> = (0..=7).map(|k| quotient_dim(k, IdealKind::Six)).collect();
    ctx.push("quotient-dims-six", "with I generated by Omega^2_6: dim L^k = 1, 7, 15, 9, 0, ...", six == [1, 7, 15, 9, 0, 0, 0, 0], || format!("{six:?}"));
    let codims: Vec<usize> = (0..=7).map(|k| Blade::of_grade(k).len() - ideal_dim(k, IdealKind::Eight)).collect();
    ctx.push(
        "ideal-codims",
        "the ideal generated by Omega^2_8 has codimensions 1, 7, 13, 7, 0, ...",
        codims == [1, 7, 13, 7, 0, 0, 0, 0],
        || format!("{codims:?}"),
    );
    let examples: [(&str, Form<Q>, bool); 4] = [
        ("reduce-w1", w_basis::<Q>()[0].clone(), true),
        ("reduce-w3e5", w_basis::<Q>()[2].wedge(&Form::basis1(5)), true),
        ("reduce-omega", omega::<Q>(), false),
        ("reduce-eta-v2", eta::<Q>().wedge(&v_basis::<Q>()[1]), false),
    ];
    for (id, f, member) in examples {
        let r = reduce_form(&f, IdealKind::Eight);
        let anchor = format!("{} {} the ideal", f.render(), if member { "lies in" } else { "is not in" });
        ctx.push(id, &anchor, r.is_zero() == member, || r.render());
    }
}
