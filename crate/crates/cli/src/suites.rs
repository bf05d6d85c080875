//! Verification suites behind `verify --suite <name>`.

use anyhow::{bail, Result};

use twistloop_core::groupwords::{
    a_act, a_neg, a_plus, c_of, chi_hat, kernel_test, phi_h, torus_of, zk_element, AElt, AtomKind,
    GenAtom, KMAtom, Payload,
};
use twistloop_core::loopalg::{
    bracket, chev_generators, chevalley_pair, h_hat, in_omega, is_fixed, norm_sq, verify_serre,
    AffineRealRoot, Case,
};
use twistloop_core::matrep::{
    adjoint_model, commutator_check, commutator_table, diagram_check, eta_check, natural_model,
    verify_gal_act, verify_lemma, MatS, RepModel,
};
use twistloop_core::roots::{Kind, RootType};
use twistloop_core::scalars::{rat, rat_int, Cyc, Laurent, Rat};
use twistloop_core::su3::{decompose, eval_su3, is_su3, StepKind};

use crate::commands::{case_label, class_name, expected_label};
use crate::report::Report;
use crate::sample::Sampler;

/// All individually addressable suite names, sorted.
pub const SUITE_NAMES: &[&str] = &[
    "aelt",
    "affine",
    "chevalley-pairs",
    "diagram",
    "fold",
    "gal-act",
    "kernel",
    "matrep",
    "norms",
    "signs",
    "su3",
];

/// Model restriction for the matrix-oracle suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelChoice {
    Natural,
    Adjoint,
}

/// Shared knobs for all suites.
#[derive(Debug, Clone)]
pub struct SuiteParams {
    pub samples: usize,
    pub seed: u64,
    pub nmax: i64,
    pub slow: bool,
    pub model: Option<ModelChoice>,
}

const SALT_AELT: u64 = 1;
const SALT_MATREP: u64 = 2;
const SALT_KERNEL: u64 = 3;
const SALT_DIAGRAM: u64 = 4;
const SALT_SU3: u64 = 5;

/// Stable per-case offset so per-case sample streams are independent of the
/// order in which cases run.
fn case_salt(base: u64, case: &Case) -> u64 {
    let kind = match case.rs().kind() {
        Kind::A => 1u64,
        Kind::D => 2,
        Kind::E => 3,
    };
    base.wrapping_add(kind * 10_000 + (case.rs().rank() as u64) * 100 + u64::from(case.r()))
}

pub fn run_suite(name: &str, cases: &[Case], params: &SuiteParams, rep: &mut Report) -> Result<()> {
    match name {
        "fold" => suite_fold(cases, rep),
        "signs" => suite_signs(cases, rep),
        "affine" => suite_affine(cases, rep),
        "chevalley-pairs" => suite_chevalley_pairs(cases, params, rep),
        "norms" => suite_norms(cases, rep),
        "aelt" => suite_aelt(params, rep),
        "matrep" => suite_matrep(cases, params, rep),
        "kernel" => suite_kernel(cases, params, rep),
        "gal-act" => suite_gal_act(cases, rep),
        "diagram" => suite_diagram(cases, params, rep),
        "su3" => suite_su3(params, rep),
        "all" => {
            for suite in SUITE_NAMES {
                run_suite(suite, cases, params, rep)?;
            }
            Ok(())
        }
        other => bail!(
            "unknown suite {other:?}; expected one of {} or \"all\"",
            SUITE_NAMES.join(", ")
        ),
    }
}

// Reference data for the two tabulated foldings: the positive-class
// partition by type and the root correspondence.
type ClassRow = (RootType, &'static [&'static [i64]]);
type CorrRow = (&'static [i64], &'static [i64]);

const A4_CLASSES: &[ClassRow] = &[
    (RootType::SummingPair, &[&[0, 1], &[1, 1]]),
    (RootType::Pair, &[&[1, 0], &[1, 2]]),
    (RootType::Fixed, &[&[0, 2], &[2, 2]]),
];

const A4_CORRESPONDENCE: &[CorrRow] = &[
    (&[0, 1], &[0, 1, 0, 0]),
    (&[1, 1], &[1, 1, 0, 0]),
    (&[1, 0], &[1, 0, 0, 0]),
    (&[1, 2], &[1, 1, 1, 0]),
    (&[0, 2], &[0, 1, 1, 0]),
    (&[2, 2], &[1, 1, 1, 1]),
    (&[0, -1], &[0, 0, -1, 0]),
    (&[-1, -1], &[0, 0, -1, -1]),
    (&[-1, 0], &[0, 0, 0, -1]),
    (&[-1, -2], &[0, -1, -1, -1]),
    (&[0, -2], &[0, -1, -1, 0]),
    (&[-2, -2], &[-1, -1, -1, -1]),
];

const D4_CLASSES: &[ClassRow] = &[
    (RootType::Triple, &[&[0, 1], &[1, 1], &[1, 2]]),
    (RootType::Fixed, &[&[1, 0], &[1, 3], &[2, 3]]),
];

const D4_CORRESPONDENCE: &[CorrRow] = &[
    (&[0, 1], &[1, 0, 0, 0]),
    (&[1, 1], &[1, 1, 0, 0]),
    (&[1, 2], &[0, 1, 1, 1]),
    (&[0, -1], &[-1, 0, 0, 0]),
    (&[-1, -1], &[-1, -1, 0, 0]),
    (&[-1, -2], &[0, -1, -1, -1]),
];

fn check_reference_tables(
    case: &Case,
    label: &str,
    expect_classes: &[ClassRow],
    expect_corr: &[CorrRow],
    rep: &mut Report,
) {
    let fs = case.fold();
    let mut fails = Vec::new();
    for (rtype, members) in expect_classes {
        let got: Vec<Vec<i64>> = fs
            .entries()
            .iter()
            .take(fs.positive_count())
            .filter(|e| e.rtype == *rtype)
            .map(|e| e.coords.clone())
            .collect();
        let want: Vec<Vec<i64>> = members.iter().map(|m| m.to_vec()).collect();
        if got != want {
            fails.push(format!("{} class is {got:?}, expected {want:?}", class_name(*rtype)));
        }
    }
    for (coords, alpha) in expect_corr {
        match fs.correspondent(coords) {
            Ok(id) if fs.ambient().root(id).as_slice() == *alpha => {}
            Ok(id) => fails.push(format!(
                "correspondent of {coords:?} is {:?}, expected {alpha:?}",
                fs.ambient().root(id)
            )),
            Err(e) => fails.push(format!("correspondent of {coords:?}: {e}")),
        }
    }
    let detail = if fails.is_empty() {
        format!(
            "tables: {} partition classes and {} correspondence rows match the reference",
            expect_classes.len(),
            expect_corr.len()
        )
    } else {
        format!("tables: {}", fails.join("; "))
    };
    rep.push("fold", label, fails.is_empty(), detail);
}

fn suite_fold(cases: &[Case], rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let fs = case.fold();
        let rs = fs.ambient();

        let want = expected_label(rs.kind(), rs.rank(), case.r());
        let got = fs.label().to_string();
        rep.push(
            "fold",
            &label,
            got == want,
            format!("label: folded type {got} (expected {want})"),
        );

        let mut fails = Vec::new();
        let has_doubled = fs.has_doubled_roots();
        for e in fs.entries() {
            let want_twisted = !(has_doubled && e.rtype == RootType::Fixed);
            if e.in_twisted != want_twisted {
                fails.push(format!("{:?} has the wrong twisted flag", e.coords));
            }
            let orbit = match e.rtype {
                RootType::Fixed => 1,
                RootType::Pair | RootType::SummingPair => 2,
                RootType::Triple => 3,
            };
            if e.preimages.len() != orbit {
                fails.push(format!("{:?} has {} preimages", e.coords, e.preimages.len()));
            }
            if fs.project(rs.root(e.correspondent)) != e.coords {
                fails.push(format!("{:?} does not project back", e.coords));
            }
            let neg: Vec<i64> = e.coords.iter().map(|c| -c).collect();
            match fs.entry(&neg) {
                Ok(m) if m.rtype == e.rtype && m.length == e.length => {}
                Ok(_) => fails.push(format!("negative of {:?} is classified differently", e.coords)),
                Err(_) => fails.push(format!("negative of {:?} is missing", e.coords)),
            }
        }
        if fs.entries().len() != 2 * fs.positive_count() {
            fails.push("positive and negative halves differ in size".to_string());
        }
        let detail = if fails.is_empty() {
            format!(
                "partition: {} folded roots classified consistently",
                fs.entries().len()
            )
        } else {
            format!("partition: {}", fails.join("; "))
        };
        rep.push("fold", &label, fails.is_empty(), detail);

        if rs.kind() == Kind::A && rs.rank() == 4 && case.r() == 2 {
            check_reference_tables(case, &label, A4_CLASSES, A4_CORRESPONDENCE, rep);
        }
        if rs.kind() == Kind::D && rs.rank() == 4 && case.r() == 3 {
            check_reference_tables(case, &label, D4_CLASSES, D4_CORRESPONDENCE, rep);
        }
    }
    Ok(())
}

fn suite_signs(cases: &[Case], rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let rs = case.rs();
        let aut = case.fold().aut();
        let tbl = case.chev();

        let bad = tbl.verify_sign_identities(rs, aut);
        rep.push(
            "signs",
            &label,
            bad.is_empty(),
            if bad.is_empty() {
                format!("identities: twisted constants agree on all {} root pairs", rs.num_roots() * rs.num_roots())
            } else {
                format!("identities: {} pairs violate the sign relations", bad.len())
            },
        );

        let doubled = case.fold().has_doubled_roots();
        let mut fails = 0usize;
        for a in rs.all_ids() {
            let fixed = case.sigma_root_id(a) == a;
            let want = if doubled && fixed { -1 } else { 1 };
            if tbl.k(a) != want || tbl.k(a) != tbl.k(case.sigma_root_id(a)) {
                fails += 1;
            }
            if aut.has_omega() && tbl.k_omega(a) != 1 {
                fails += 1;
            }
        }
        rep.push(
            "signs",
            &label,
            fails == 0,
            if fails == 0 {
                format!("pattern: signs are -1 exactly on summed fixed roots ({} roots)", rs.num_roots())
            } else {
                format!("pattern: {fails} roots carry the wrong sign")
            },
        );
    }
    Ok(())
}

fn suite_affine(cases: &[Case], rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let gcm = match chev_generators(case) {
            Ok(g) => g,
            Err(e) => {
                rep.push("affine", &label, false, format!("gcm: {e}"));
                continue;
            }
        };
        let m = gcm.matrix();
        let n = gcm.size();
        let mut fails = Vec::new();
        if n != case.fold().ell() + 1 {
            fails.push(format!("size {n} is not rank + 1"));
        }
        for p in 0..n {
            if m[p][p] != 2 {
                fails.push(format!("diagonal entry at {p} is {}", m[p][p]));
            }
            for q in 0..n {
                if p != q && m[p][q] > 0 {
                    fails.push(format!("positive off-diagonal entry at ({p}, {q})"));
                }
                if (m[p][q] == 0) != (m[q][p] == 0) {
                    fails.push(format!("asymmetric vanishing at ({p}, {q})"));
                }
            }
        }
        let detail = if fails.is_empty() {
            format!("gcm: {n}x{n} matrix has the generalized Cartan shape")
        } else {
            format!("gcm: {}", fails.join("; "))
        };
        rep.push("affine", &label, fails.is_empty(), detail);

        // Symmetrizing diagonal: propagate d across the nonzero graph, then
        // confirm d_p a_pq = d_q a_qp globally with every d positive.
        let mut d: Vec<Option<Rat>> = vec![None; n];
        d[0] = Some(rat_int(1));
        let mut queue = vec![0usize];
        while let Some(p) = queue.pop() {
            for q in 0..n {
                if p != q && m[p][q] != 0 && d[q].is_none() {
                    let dp = d[p].clone().expect("queued nodes carry a value");
                    d[q] = Some(&dp * &rat(m[p][q], m[q][p]));
                    queue.push(q);
                }
            }
        }
        let mut sym_ok = d.iter().all(|v| matches!(v, Some(x) if *x > rat_int(0)));
        if sym_ok {
            for p in 0..n {
                for q in 0..n {
                    let (dp, dq) = (d[p].clone().unwrap(), d[q].clone().unwrap());
                    if &dp * &rat_int(m[p][q]) != &dq * &rat_int(m[q][p]) {
                        sym_ok = false;
                    }
                }
            }
        }
        rep.push(
            "affine",
            &label,
            sym_ok,
            if sym_ok {
                "symmetrizable: a positive diagonal symmetrizes the matrix".to_string()
            } else {
                "symmetrizable: no positive symmetrizing diagonal".to_string()
            },
        );

        let serre = verify_serre(case, &gcm);
        rep.push(
            "affine",
            &label,
            serre.is_empty(),
            if serre.is_empty() {
                "serre: generators satisfy all defining relations".to_string()
            } else {
                format!("serre: {}", serre.join("; "))
            },
        );
    }
    Ok(())
}

fn suite_chevalley_pairs(cases: &[Case], params: &SuiteParams, rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let fs = case.fold();
        let mut checked = 0usize;
        let mut fails = Vec::new();
        let coords: Vec<Vec<i64>> = fs.entries().iter().map(|e| e.coords.clone()).collect();
        for a in &coords {
            for n in -params.nmax..=params.nmax {
                let root = AffineRealRoot::new(a.clone(), n);
                if !in_omega(fs, &root) {
                    continue;
                }
                checked += 1;
                let tag = || format!("{a:?}+{n}d");
                match chevalley_pair(case, &root) {
                    Err(e) => fails.push(format!("{}: {e}", tag())),
                    Ok((plus, minus)) => {
                        if !is_fixed(case, &plus) || !is_fixed(case, &minus) {
                            fails.push(format!("{}: image leaves the fixed algebra", tag()));
                        } else {
                            match h_hat(case, &root) {
                                Err(e) => fails.push(format!("{}: {e}", tag())),
                                Ok(expect) => {
                                    if bracket(case, &plus, &minus) != expect {
                                        fails.push(format!("{}: bracket misses the coroot", tag()));
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        let ok = fails.is_empty();
        rep.push(
            "chevalley-pairs",
            &label,
            ok,
            if ok {
                format!(
                    "pairs: {checked} affine pairs bracket to the coroot side (|n| <= {})",
                    params.nmax
                )
            } else {
                format!("pairs: {}", fails[..fails.len().min(3)].join("; "))
            },
        );
    }
    Ok(())
}

fn suite_norms(cases: &[Case], rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let fs = case.fold();
        let mut fails = Vec::new();
        for e in fs.entries() {
            let want = match e.rtype {
                RootType::Fixed => rat(2, 1),
                RootType::Pair => rat(1, 1),
                RootType::SummingPair => rat(1, 2),
                RootType::Triple => rat(2, 3),
            };
            if fs.norm_sq_folded(&e.coords) != want {
                fails.push(format!("{:?} has the wrong folded norm", e.coords));
                continue;
            }
            let degree = if e.in_twisted { 0 } else { 1 };
            let root = AffineRealRoot::new(e.coords.clone(), degree);
            match norm_sq(fs, &root) {
                Ok(v) if v == want => {}
                Ok(v) => fails.push(format!("{:?} has affine norm {v}", e.coords)),
                Err(err) => fails.push(format!("{:?}: {err}", e.coords)),
            }
        }
        let ok = fails.is_empty();
        rep.push(
            "norms",
            &label,
            ok,
            if ok {
                format!(
                    "classes: all {} folded roots take the tabulated values 2, 1, 1/2, 2/3",
                    fs.entries().len()
                )
            } else {
                format!("classes: {}", fails.join("; "))
            },
        );
    }
    Ok(())
}

fn suite_aelt(params: &SuiteParams, rep: &mut Report) -> Result<()> {
    let n = params.samples;
    let mut gen = Sampler::new(params.seed, SALT_AELT);
    let valid = |x: &AElt| AElt::new(x.first().clone(), x.second().clone()).is_ok();

    let mut assoc = 0usize;
    let mut unit = 0usize;
    let mut inverse = 0usize;
    let mut member = 0usize;
    let mut action = 0usize;
    for _ in 0..n {
        let (chi, phi, psi) = (gen.aelt(), gen.aelt(), gen.aelt());
        if a_plus(&a_plus(&chi, &phi), &psi) != a_plus(&chi, &a_plus(&phi, &psi)) {
            assoc += 1;
        }
        let zero = AElt::zero();
        if a_plus(&zero, &chi) != chi || a_plus(&chi, &zero) != chi {
            unit += 1;
        }
        if a_plus(&chi, &a_neg(&chi)) != zero || a_plus(&a_neg(&chi), &chi) != zero {
            inverse += 1;
        }
        if !valid(&a_plus(&chi, &phi)) || !valid(&a_neg(&chi)) {
            member += 1;
        }
        let s = gen.mono(2, -2, 2);
        let t = gen.mono(2, -2, 2);
        let st = &s * &t;
        if a_act(&st, &chi) != a_act(&s, &a_act(&t, &chi))
            || a_act(&s, &a_plus(&chi, &phi)) != a_plus(&a_act(&s, &chi), &a_act(&s, &phi))
            || !valid(&a_act(&s, &chi))
        {
            action += 1;
        }
    }
    let law = |rep: &mut Report, name: &str, fails: usize, what: &str| {
        rep.push(
            "aelt",
            "pairs",
            fails == 0,
            if fails == 0 {
                format!("{name}: {what} on {n} random triples")
            } else {
                format!("{name}: {fails} of {n} triples fail")
            },
        );
    };
    law(rep, "associativity", assoc, "composition associates");
    law(rep, "unit", unit, "the zero pair is neutral");
    law(rep, "inverse", inverse, "negation inverts composition");
    law(rep, "membership", member, "composites satisfy the defining identity");
    law(rep, "action", action, "the scalar action is multiplicative and additive");

    // Coordinate multiplicativity: a product of summing-pair torus atoms is
    // the identity exactly when the product of its coordinates is 1.
    let case = Case::new(Kind::A, 4, 2).expect("reference case");
    let coords = [0i64, 1];
    let mut small = vec![AElt::one_half()];
    for positive in [true, false] {
        for deg in [0i64, 1] {
            for nu in [rat_int(1), rat_int(2), rat(1, 2)] {
                small.push(chi_hat(positive, deg, &nu));
            }
        }
    }
    let mut pairs = Vec::new();
    for zeta in &small {
        for gamma in &small {
            pairs.push((zeta.clone(), gamma.clone()));
        }
    }
    let one = Laurent::one(2);
    let atom = |zg: &(AElt, AElt)| {
        GenAtom::ht(case.fold(), &coords, Payload::DoublePair(zg.0.clone(), zg.1.clone()))
            .expect("unit-second pairs")
    };
    let mut total = 0usize;
    let mut hits = 0usize;
    let mut fails = 0usize;
    for p in &pairs {
        let c = c_of(&p.0, &p.1).expect("unit seconds");
        let is_id = torus_of(&case, &[atom(p)]).expect("torus word").is_identity();
        total += 1;
        hits += usize::from(is_id);
        if is_id != (c == one) {
            fails += 1;
        }
    }
    for p in &pairs {
        for q in &pairs {
            let c = &c_of(&p.0, &p.1).expect("unit seconds") * &c_of(&q.0, &q.1).expect("unit seconds");
            let is_id = torus_of(&case, &[atom(p), atom(q)]).expect("torus word").is_identity();
            total += 1;
            hits += usize::from(is_id);
            if is_id != (c == one) {
                fails += 1;
            }
        }
    }
    rep.push(
        "aelt",
        "pairs",
        fails == 0 && hits > 0 && hits < total,
        if fails == 0 {
            format!("coordinate-multiplicativity: {total} torus products, {hits} land on the identity")
        } else {
            format!("coordinate-multiplicativity: {fails} of {total} products disagree with the coordinate")
        },
    );
    Ok(())
}

/// Applicable matrix models, most specific first, honoring `--model`.
fn models_for(case: &Case, choice: Option<ModelChoice>) -> Vec<(&'static str, RepModel)> {
    let rs = case.rs();
    let aut = case.fold().aut();
    let tbl = case.chev();
    let mut out = Vec::new();
    if choice != Some(ModelChoice::Natural) {
        out.push(("adjoint", adjoint_model(rs, aut, tbl).expect("adjoint model exists")));
    }
    if choice != Some(ModelChoice::Adjoint) && rs.kind() == Kind::A {
        out.push(("natural", natural_model(rs, aut, tbl).expect("natural model exists for type A")));
    }
    out
}

fn is_exhaustive_case(case: &Case, slow: bool) -> bool {
    let key = (case.rs().kind(), case.rs().rank(), case.r());
    matches!(key, (Kind::A, 2, 2) | (Kind::A, 4, 2) | (Kind::D, 4, 3))
        || (key == (Kind::E, 6, 2) && slow)
}

fn suite_matrep(cases: &[Case], params: &SuiteParams, rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let fs = case.fold();
        let models = models_for(case, params.model);
        let mut verdicts: Vec<bool> = Vec::new();

        for (model_name, model) in &models {
            for kind in [AtomKind::X, AtomKind::W, AtomKind::H] {
                let mut gen = Sampler::new(params.seed, case_salt(SALT_MATREP, case));
                let entries: Vec<Vec<i64>> = fs.entries().iter().map(|e| e.coords.clone()).collect();
                let samples: Vec<(Vec<i64>, Payload)> = (0..params.samples)
                    .map(|_| {
                        let coords = entries[gen.pick(entries.len())].clone();
                        let payload = gen.payload(case, &coords, kind);
                        (coords, payload)
                    })
                    .collect();
                let kind_name = match kind {
                    AtomKind::X => "x",
                    AtomKind::W => "w",
                    AtomKind::H => "h",
                };
                match verify_lemma(case, model, kind, &samples) {
                    Ok(report) => {
                        let ok = report.all_pass() && report.checked >= samples.len();
                        verdicts.push(ok);
                        rep.push(
                            "matrep",
                            &label,
                            ok,
                            if ok {
                                format!(
                                    "lemma-{kind_name} [{model_name}]: {} identities hold on {} sampled payloads",
                                    report.checked,
                                    samples.len()
                                )
                            } else {
                                format!(
                                    "lemma-{kind_name} [{model_name}]: {}",
                                    report.failures[..report.failures.len().min(3)].join("; ")
                                )
                            },
                        );
                    }
                    Err(e) => {
                        verdicts.push(false);
                        rep.push("matrep", &label, false, format!("lemma-{kind_name} [{model_name}]: {e}"));
                    }
                }
            }
        }
        if models.len() > 1 {
            let ok = verdicts.iter().all(|v| *v);
            rep.push(
                "matrep",
                &label,
                ok,
                if ok {
                    "models-agree: natural and adjoint verdicts coincide".to_string()
                } else {
                    "models-agree: the models disagree on the shared checks".to_string()
                },
            );
        }

        if !is_exhaustive_case(case, params.slow) {
            continue;
        }
        let rs = case.rs();
        let r = case.r();
        let adj = adjoint_model(rs, fs.aut(), case.chev()).expect("adjoint model exists");
        let nat = (params.model != Some(ModelChoice::Adjoint) && rs.kind() == Kind::A)
            .then(|| natural_model(rs, fs.aut(), case.chev()).expect("natural model exists"));
        let table = match commutator_table(rs, &adj) {
            Ok(t) => t,
            Err(e) => {
                rep.push("matrep", &label, false, format!("commutator: {e}"));
                continue;
            }
        };
        let nu = Laurent::monomial(r, 1, Cyc::from_rat(r, rat(2, 3)));
        let mu = &Laurent::monomial(r, -1, Cyc::from_rat(r, rat(1, 2))) + &Laurent::one(r);
        let mut checked = 0usize;
        let mut comm_fails = 0usize;
        let mut agree_fails = 0usize;
        for a in rs.all_ids() {
            for b in rs.all_ids() {
                if a == b || b == rs.neg_id(a) {
                    continue;
                }
                checked += 1;
                let in_adj = commutator_check(&adj, &table, a, b, &nu, &mu).unwrap_or(false);
                if !in_adj {
                    comm_fails += 1;
                }
                if let Some(nat) = &nat {
                    let in_nat = commutator_check(nat, &table, a, b, &nu, &mu).unwrap_or(!in_adj);
                    if in_nat != in_adj {
                        agree_fails += 1;
                    }
                }
            }
        }
        rep.push(
            "matrep",
            &label,
            comm_fails == 0,
            if comm_fails == 0 {
                format!("commutator: the bracket law holds on all {checked} root pairs")
            } else {
                format!("commutator: {comm_fails} of {checked} pairs fail")
            },
        );
        if nat.is_some() {
            rep.push(
                "matrep",
                &label,
                agree_fails == 0,
                if agree_fails == 0 {
                    format!("commutator-agreement: natural matches adjoint on {checked} pairs")
                } else {
                    format!("commutator-agreement: {agree_fails} of {checked} pairs disagree")
                },
            );
        }

        let mut eta_fails = 0usize;
        let mut eta_checked = 0usize;
        for a in rs.all_ids() {
            for b in rs.all_ids() {
                eta_checked += 1;
                if eta_check(&adj, rs, a, b).is_err() {
                    eta_fails += 1;
                }
            }
        }
        rep.push(
            "matrep",
            &label,
            eta_fails == 0,
            if eta_fails == 0 {
                format!("eta: all {eta_checked} reflection signs are unit integers")
            } else {
                format!("eta: {eta_fails} of {eta_checked} reflection images are malformed")
            },
        );
    }
    Ok(())
}

fn suite_kernel(cases: &[Case], params: &SuiteParams, rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let fs = case.fold();
        let mut gen = Sampler::new(params.seed, case_salt(SALT_KERNEL, case));

        let to_atoms = |word: &[KMAtom]| -> Result<Vec<GenAtom>, twistloop_core::Error> {
            word.iter().map(|a| phi_h(fs, a)).collect()
        };

        let mut member_fails = 0usize;
        for _ in 0..20 {
            let tau = gen.tau();
            let ok = zk_element(fs, &tau)
                .and_then(|word| to_atoms(&word))
                .and_then(|atoms| kernel_test(case, &atoms))
                .unwrap_or(false);
            if !ok {
                member_fails += 1;
            }
        }
        rep.push(
            "kernel",
            &label,
            member_fails == 0,
            if member_fails == 0 {
                "members: 20 central torus words pass the kernel test".to_string()
            } else {
                format!("members: {member_fails} of 20 central words fail")
            },
        );

        let mut perturbed_fails = 0usize;
        for _ in 0..50 {
            let tau = gen.tau();
            let in_kernel = zk_element(fs, &tau)
                .and_then(|mut word| {
                    let j = gen.pick(word.len());
                    let old = word[j].payload.clone();
                    // Either square the payload or shift it by tau; both move
                    // off the dual-label exponent pattern because |tau| != 1.
                    let new = if gen.coin() { &old * &old } else { &old * &tau };
                    word[j] = KMAtom::h(word[j].root.clone(), new)?;
                    to_atoms(&word)
                })
                .and_then(|atoms| kernel_test(case, &atoms))
                .unwrap_or(true);
            if in_kernel {
                perturbed_fails += 1;
            }
        }
        rep.push(
            "kernel",
            &label,
            perturbed_fails == 0,
            if perturbed_fails == 0 {
                "perturbed: 50 off-pattern torus words fail the kernel test".to_string()
            } else {
                format!("perturbed: {perturbed_fails} of 50 off-pattern words slip through")
            },
        );
    }
    Ok(())
}

fn suite_gal_act(cases: &[Case], rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        let adj = adjoint_model(case.rs(), case.fold().aut(), case.chev())
            .expect("adjoint model exists");
        match verify_gal_act(case, &adj) {
            Ok(report) => {
                let ok = report.all_pass() && report.checked > 0;
                rep.push(
                    "gal-act",
                    &label,
                    ok,
                    if ok {
                        format!("identities: {} twisted sign relations hold [adjoint]", report.checked)
                    } else {
                        format!(
                            "identities: {}",
                            report.failures[..report.failures.len().min(3)].join("; ")
                        )
                    },
                );
            }
            Err(e) => rep.push("gal-act", &label, false, format!("identities: {e}")),
        }
    }
    Ok(())
}

fn suite_diagram(cases: &[Case], params: &SuiteParams, rep: &mut Report) -> Result<()> {
    for case in cases {
        let label = case_label(case);
        for (model_name, model) in models_for(case, params.model) {
            for kind in [AtomKind::X, AtomKind::W, AtomKind::H] {
                let mut gen = Sampler::new(params.seed, case_salt(SALT_DIAGRAM, case));
                let kind_name = match kind {
                    AtomKind::X => "x",
                    AtomKind::W => "w",
                    AtomKind::H => "h",
                };
                let mut fails = 0usize;
                for _ in 0..params.samples {
                    let atom = gen.km_atom(case, kind);
                    if !diagram_check(case, &model, &atom).unwrap_or(false) {
                        fails += 1;
                    }
                }
                rep.push(
                    "diagram",
                    &label,
                    fails == 0,
                    if fails == 0 {
                        format!(
                            "triangle-{kind_name} [{model_name}]: {} atoms lift and evaluate identically",
                            params.samples
                        )
                    } else {
                        format!(
                            "triangle-{kind_name} [{model_name}]: {fails} of {} atoms disagree",
                            params.samples
                        )
                    },
                );
            }
        }
    }
    Ok(())
}

fn suite_su3(params: &SuiteParams, rep: &mut Report) -> Result<()> {
    let mut gen = Sampler::new(params.seed, SALT_SU3);
    let n = params.samples;
    let mut roundtrip_fails = 0usize;
    let mut descent_fails = 0usize;
    let mut member_fails = 0usize;
    for _ in 0..n {
        let word = gen.su3_word(12);
        let target = match eval_su3(&word) {
            Ok(m) => m,
            Err(_) => {
                roundtrip_fails += 1;
                continue;
            }
        };
        let (decomp, trace) = match decompose(&target) {
            Ok(pair) => pair,
            Err(_) => {
                roundtrip_fails += 1;
                continue;
            }
        };
        match eval_su3(&decomp) {
            Ok(m) if m == target => {}
            _ => roundtrip_fails += 1,
        }
        let mut cur = target.clone();
        for step in &trace.steps {
            if step.kind == StepKind::Euclid && step.k_after >= step.k_before {
                descent_fails += 1;
            }
            cur = match eval_su3(&step.atoms) {
                Ok(e) => e.mul(&cur),
                Err(_) => {
                    member_fails += 1;
                    break;
                }
            };
            if !is_su3(&cur).unwrap_or(false) {
                member_fails += 1;
            }
        }
        if !cur.is_identity() {
            roundtrip_fails += 1;
        }
    }
    let push = |rep: &mut Report, name: &str, fails: usize, good: String| {
        rep.push(
            "su3",
            "decomposition",
            fails == 0,
            if fails == 0 { good } else { format!("{name}: {fails} of {n} words fail") },
        );
    };
    push(rep, "round-trip", roundtrip_fails, format!("round-trip: {n} random words rebuild their matrices exactly"));
    push(rep, "descent", descent_fails, format!("descent: every euclid step strictly lowers the corner spread ({n} words)"));
    push(rep, "membership", member_fails, format!("membership: every intermediate matrix stays in the group ({n} words)"));
    Ok(())
}

pub fn is_identity_mat(m: &MatS) -> bool {
    m.is_identity()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(samples: usize) -> SuiteParams {
        SuiteParams { samples, seed: 7, nmax: 2, slow: false, model: None }
    }

    fn quick_cases() -> Vec<Case> {
        vec![Case::new(Kind::A, 3, 2).unwrap(), Case::new(Kind::D, 4, 3).unwrap()]
    }

    #[test]
    fn structural_suites_pass_on_the_reference_cases() {
        let cases =
            vec![Case::new(Kind::A, 4, 2).unwrap(), Case::new(Kind::D, 4, 3).unwrap()];
        let mut rep = Report::new();
        suite_fold(&cases, &mut rep).unwrap();
        suite_signs(&cases, &mut rep).unwrap();
        suite_norms(&cases, &mut rep).unwrap();
        rep.finalize();
        assert!(rep.all_pass(), "structural suites:\n{}", rep.render_table());
    }

    #[test]
    fn affine_and_pair_suites_pass_at_low_degree() {
        let cases = quick_cases();
        let mut rep = Report::new();
        suite_affine(&cases, &mut rep).unwrap();
        suite_chevalley_pairs(&cases, &params(10), &mut rep).unwrap();
        rep.finalize();
        assert!(rep.all_pass(), "affine suites:\n{}", rep.render_table());
    }

    #[test]
    fn pair_group_and_su3_suites_pass_on_small_samples() {
        let mut rep = Report::new();
        suite_aelt(&params(25), &mut rep).unwrap();
        suite_su3(&params(5), &mut rep).unwrap();
        rep.finalize();
        assert!(rep.all_pass(), "sampled suites:\n{}", rep.render_table());
    }

    #[test]
    fn oracle_suites_pass_on_a_small_twisted_case() {
        let cases = vec![Case::new(Kind::A, 2, 2).unwrap()];
        let mut rep = Report::new();
        suite_matrep(&cases, &params(5), &mut rep).unwrap();
        suite_kernel(&cases, &params(5), &mut rep).unwrap();
        suite_gal_act(&cases, &mut rep).unwrap();
        suite_diagram(&cases, &params(5), &mut rep).unwrap();
        rep.finalize();
        assert!(rep.all_pass(), "oracle suites:\n{}", rep.render_table());
    }

    #[test]
    fn unknown_suites_are_rejected_with_the_valid_names() {
        let mut rep = Report::new();
        let err = run_suite("bogus", &[], &params(1), &mut rep).unwrap_err();
        assert!(err.to_string().contains("expected one of"), "lists valid names: {err}");
    }
}
