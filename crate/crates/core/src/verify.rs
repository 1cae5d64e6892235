//! The acceptance checklist: eleven reproduction criteria as callable
//! checks with pass/fail outcomes and detail lines, shared by the
//! `reproduce` command and the acceptance test target, together with the
//! fixed-seed property suites that back the final criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalog::{action_table_vars, fixtures, load_catalog, resolve_entry};
use crate::classify::{
    classify_nilpotent, induced_action_matrix, madsen_swann_crosscheck, pullback_action,
    su_constraints, sweep_catalog, Outcome,
};
use crate::derivations::derivation_space;
use crate::exterior::{KForm, MIdx};
use crate::g2::{
    exactness_obstruction, g2_bilinear, g2_nondegenerate, generic_exact_form,
    standard_adapted_form, G2Candidate, Obstruction, PrimitiveOutcome,
};
use crate::liealg::{d_form, LieAlgebra};
use crate::notation::parse_tuple;
use crate::ring::{
    rat_int, solve_affine, LinSolution, LinearSystem, Matrix, Poly, Quad, Rat,
};
use crate::rng::SplitMix64;

type Check = std::result::Result<Vec<String>, String>;
type Property = std::result::Result<String, String>;
type PropertyRun = (&'static str, fn() -> Property);

/// One acceptance criterion's result.
#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub index: usize,
    pub tag: &'static str,
    pub title: &'static str,
    pub pass: bool,
    pub details: Vec<String>,
}

struct Criterion {
    index: usize,
    tag: &'static str,
    title: &'static str,
    run: fn() -> Check,
}

fn criteria() -> Vec<Criterion> {
    vec![
        Criterion {
            index: 1,
            tag: "betti-s",
            title: "Betti vector of the solvable example",
            run: criterion_betti_s,
        },
        Criterion {
            index: 2,
            tag: "exact-g2-s",
            title: "Closed and exact G2-structure on the solvable example",
            run: criterion_exact_g2_s,
        },
        Criterion {
            index: 3,
            tag: "su-failure-s",
            title: "Unimodular but not strongly unimodular",
            run: criterion_su_failure_s,
        },
        Criterion {
            index: 4,
            tag: "thm-2.4",
            title: "Classification sweep over the 34-entry catalog",
            run: criterion_sweep,
        },
        Criterion {
            index: 5,
            tag: "worked-a1",
            title: "Degree-one action of the worked exclusion",
            run: criterion_worked_action,
        },
        Criterion {
            index: 6,
            tag: "trace-systems",
            title: "Trace constraint systems and published sample derivations",
            run: criterion_trace_systems,
        },
        Criterion {
            index: 7,
            tag: "appendix-tables",
            title: "Transcribed action tables",
            run: criterion_reference_tables,
        },
        Criterion {
            index: 8,
            tag: "thm-2.5",
            title: "Exactness obstruction certificates",
            run: criterion_obstructions,
        },
        Criterion {
            index: 9,
            tag: "dalpha-127",
            title: "Symbolic exact-form coefficient",
            run: criterion_dalpha_coefficient,
        },
        Criterion {
            index: 10,
            tag: "h-example",
            title: "The quadratic-field frame example",
            run: criterion_h_example,
        },
        Criterion {
            index: 11,
            tag: "properties",
            title: "Fixed-seed property suites",
            run: criterion_properties,
        },
    ]
}

/// Tags in checklist order, for usage messages.
pub fn criterion_tags() -> Vec<&'static str> {
    criteria().iter().map(|c| c.tag).collect()
}

fn run_one(c: &Criterion) -> CriterionOutcome {
    let outcome = catch_unwind(AssertUnwindSafe(c.run));
    let (pass, details) = match outcome {
        Ok(Ok(details)) => (true, details),
        Ok(Err(msg)) => (false, vec![msg]),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "check panicked".to_string());
            (false, vec![format!("panicked: {msg}")])
        }
    };
    CriterionOutcome { index: c.index, tag: c.tag, title: c.title, pass, details }
}

/// Runs every criterion in order.
pub fn run_all() -> Vec<CriterionOutcome> {
    criteria().iter().map(run_one).collect()
}

/// Runs the criteria whose tag or index matches `only`; `None` runs all.
pub fn run_matching(only: Option<&str>) -> Vec<CriterionOutcome> {
    match only {
        None => run_all(),
        Some(key) => criteria()
            .iter()
            .filter(|c| c.tag == key || c.index.to_string() == key)
            .map(run_one)
            .collect(),
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err_str<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn catalog_algebra(key: &str) -> std::result::Result<LieAlgebra, String> {
    let entries = err_str(load_catalog())?;
    let entry = err_str(resolve_entry(&entries, key))?;
    err_str(LieAlgebra::nilpotent_from_tuple(err_str(parse_tuple(&entry.tuple))?))
}

fn criterion_betti_s() -> Check {
    let fx = err_str(fixtures())?;
    let betti = fx.s_example.betti_vector();
    ensure(betti == vec![1, 1, 0, 0, 0, 0, 1, 1], format!("betti mismatch: {betti:?}"))?;
    Ok(vec!["betti = (1,1,0,0,0,0,1,1)".to_string()])
}

fn criterion_exact_g2_s() -> Check {
    let fx = err_str(fixtures())?;
    let phi = standard_adapted_form::<Rat>();
    ensure(fx.s_example.d(&fx.s_primitive) == phi, "d(primitive) differs from the adapted form")?;
    let cand = err_str(G2Candidate::on_algebra(&fx.s_example, phi))?;
    ensure(cand.is_closed(), "adapted form is not closed on the example")?;
    let nd = g2_nondegenerate(&cand);
    ensure(nd.is_g2, "adapted form is not nondegenerate")?;
    let solved = matches!(err_str(cand.exact_primitive())?, PrimitiveOutcome::Primitive(_));
    ensure(solved, "no primitive found by the solver")?;
    Ok(vec![
        "d(recorded primitive) = adapted form".to_string(),
        format!("nondegenerate with sign {}", nd.sign.unwrap_or(0)),
        "solver also produced a primitive".to_string(),
    ])
}

fn criterion_su_failure_s() -> Check {
    let fx = err_str(fixtures())?;
    let rep = fx.s_example.unimodularity();
    ensure(rep.unimodular, "example must be unimodular")?;
    ensure(!rep.strongly_unimodular, "example must fail strong unimodularity")?;
    let w = rep.strong_witness.ok_or("missing failure witness")?;
    ensure(w.basis_index == 7 && w.level == 3, format!("witness at (e{}, level {})", w.basis_index, w.level))?;
    let half3 = Rat::new(3.into(), 2.into());
    ensure(w.trace.clone() * w.trace.clone() == half3.clone() * half3, format!("trace {}", w.trace))?;
    Ok(vec![format!(
        "witness: restriction to the level-3 ideal under e{} has trace {}",
        w.basis_index, w.trace
    )])
}

fn criterion_sweep() -> Check {
    let verdicts = err_str(sweep_catalog())?;
    ensure(verdicts.len() == 34, format!("{} catalog entries", verdicts.len()))?;
    let mut admitting = Vec::new();
    let mut by_degree = [0usize; 4];
    for v in &verdicts {
        match &v.outcome {
            Outcome::Excluded { degree } => by_degree[*degree] += 1,
            Outcome::Admits { .. } => admitting.push(v.id.unwrap_or(0)),
        }
    }
    ensure(admitting == vec![32, 33, 34], format!("admitting ids {admitting:?}"))?;
    ensure(
        by_degree[1..] == [25, 2, 4],
        format!("exclusion partition {:?}", &by_degree[1..]),
    )?;
    Ok(vec![
        "admitting: ids 32, 33, 34 (abelian and the two two-step algebras)".to_string(),
        "excluded: 25 at degree 1, 2 at degree 2, 4 at degree 3".to_string(),
    ])
}

fn criterion_worked_action() -> Check {
    let alg = catalog_algebra("worked")?;
    let ds = derivation_space(&alg);
    let am = err_str(induced_action_matrix(&alg, ds.generic(), 1, None))?;
    let a1 = Poly::var_named(ds.vars(), "a1");
    ensure(am.matrix.nrows() == 2, format!("H^1 dimension {}", am.matrix.nrows()))?;
    ensure(
        am.matrix[(0, 0)] == -a1.clone()
            && am.matrix[(1, 1)] == -(a1.clone() + a1.clone())
            && am.matrix[(0, 1)].is_zero()
            && am.matrix[(1, 0)].is_zero(),
        "matrix is not diag(-a1, -2a1)",
    )?;
    let det = am.matrix.det_cofactor();
    ensure(det == Poly::int(2) * a1.clone() * a1, format!("det {}", det))?;
    Ok(vec!["action = diag(-a1, -2a1), determinant 2*a1^2".to_string()])
}

fn published_points() -> Vec<(&'static str, Vec<(usize, i64)>)> {
    vec![
        ("n1", vec![(0, 1), (3, 3), (4, 2), (7, -6)]),
        ("n2", vec![(0, 1), (3, 2), (4, 2), (6, -1), (7, 1)]),
    ]
}

fn criterion_trace_systems() -> Check {
    let mut details = Vec::new();
    let expected: [(&str, &[&str]); 2] =
        [("n1", &["a1", "a4", "a5", "a8"]), ("n2", &["a1", "a7"])];
    for (key, names) in expected {
        let alg = catalog_algebra(key)?;
        let ds = derivation_space(&alg);
        let su = err_str(su_constraints(&alg, ds.generic()))?;
        let sum = names
            .iter()
            .fold(Poly::zero(), |acc, n| acc + Poly::var_named(ds.vars(), n));
        ensure(
            su.equations() == std::slice::from_ref(&sum),
            format!("{key}: unexpected constraint system"),
        )?;
        details.push(format!("{key}: constraints reduce to {} = 0", sum));
    }
    for (key, assignments) in published_points() {
        let alg = catalog_algebra(key)?;
        let ds = derivation_space(&alg);
        let su = err_str(su_constraints(&alg, ds.generic()))?;
        let mut point = vec![Rat::zero(); ds.vars().len()];
        for (idx, val) in &assignments {
            point[*idx] = rat_int(*val);
        }
        ensure(
            su.equations().iter().all(|eq| eq.eval(&point).is_zero()),
            format!("{key}: published point violates the constraints"),
        )?;
        let mut dets = Vec::new();
        for k in 1..=3 {
            let am = err_str(induced_action_matrix(&alg, ds.generic(), k, None))?;
            let det = am.matrix.eval(&point).det();
            ensure(!det.is_zero(), format!("{key}: degree {k} action singular at the point"))?;
            dets.push(format!("{det}"));
        }
        details.push(format!(
            "{key}: published derivation has action determinants ({}) at degrees 1..3",
            dets.join(", ")
        ));
    }
    Ok(details)
}

fn aligned_su(alg: &LieAlgebra) -> std::result::Result<(Matrix<Poly>, LinSolution), String> {
    let ds = derivation_space(alg);
    let su = err_str(su_constraints(alg, ds.generic()))?;
    let sol = err_str(solve_affine(&su))?;
    Ok((ds.generic().clone(), sol))
}

fn matches_modulo(
    label: &str,
    mine: &Matrix<Poly>,
    printed: &Matrix<Poly>,
    sol: &LinSolution,
    transpose_negate: bool,
) -> std::result::Result<(), String> {
    ensure(
        (mine.nrows(), mine.ncols()) == (printed.nrows(), printed.ncols()),
        format!("{label}: size mismatch"),
    )?;
    for r in 0..printed.nrows() {
        for c in 0..printed.ncols() {
            let diff = if transpose_negate {
                printed[(r, c)].clone() + mine[(c, r)].clone()
            } else {
                printed[(r, c)].clone() - mine[(r, c)].clone()
            };
            ensure(
                sol.substitute(&diff).is_zero(),
                format!("{label}: cell ({}, {}) differs", r + 1, c + 1),
            )?;
        }
    }
    Ok(())
}

fn criterion_reference_tables() -> Check {
    let fx = err_str(fixtures())?;
    let mut details = Vec::new();
    let n1 = catalog_algebra("n1")?;
    let n2 = catalog_algebra("n2")?;

    for (key, alg, table) in
        [("n1", &n1, &fx.n1_actions[0]), ("n2", &n2, &fx.n2_actions[0])]
    {
        let (generic, sol) = aligned_su(alg)?;
        let am = err_str(induced_action_matrix(alg, &generic, 1, Some(&table.basis)))?;
        matches_modulo(key, &am.matrix, &table.matrix, &sol, false)?;
        details.push(format!("{key}: degree-1 table matches entrywise modulo constraints"));
    }

    let (generic1, sol1) = aligned_su(&n1)?;
    let am2 = err_str(induced_action_matrix(&n1, &generic1, 2, Some(&fx.n1_actions[1].basis)))?;
    matches_modulo("n1 degree 2", &am2.matrix, &fx.n1_actions[1].matrix, &sol1, false)?;
    details.push("n1: degree-2 table matches entrywise modulo constraints".to_string());
    let am3 = err_str(induced_action_matrix(&n1, &generic1, 3, Some(&fx.n1_actions[2].basis)))?;
    matches_modulo("n1 degree 3", &am3.matrix, &fx.n1_actions[2].matrix, &sol1, true)?;
    details.push(
        "n1: degree-3 table matches as the negated transpose (opposite printed convention)"
            .to_string(),
    );

    let tvars = action_table_vars();
    let (generic2, sol2) = aligned_su(&n2)?;
    for (table, k) in [(&fx.n2_actions[1], 2usize), (&fx.n2_actions[2], 3usize)] {
        let mine = err_str(induced_action_matrix(&n2, &generic2, k, None))?.matrix;
        let mine_sub = mine.map(|p| sol2.substitute(p));
        let printed = table.matrix.map(|p| p.in_registry(&tvars));
        let printed_sub = printed.map(|p| sol2.substitute(p));
        let mine_det = mine_sub.det_cofactor();
        let printed_det = printed_sub.det_cofactor();
        if k == 2 {
            ensure(mine_det == printed_det, "n2 degree 2: determinant mismatch")?;
            details.push(
                "n2: degree-2 determinant after substitution matches the printed table"
                    .to_string(),
            );
        } else {
            ensure(!mine_det.is_zero() && !printed_det.is_zero(), "n2 degree 3: zero determinant")?;
            ensure(
                mine_det != printed_det,
                "n2 degree 3: the logged transcription defect disappeared; retranscribe",
            )?;
            details.push(
                "n2: degree-3 printed table carries transcription defects (logged); behavioral \
                 agreement checked instead"
                    .to_string(),
            );
        }
        let mut rng = SplitMix64::new(0x7e57 + k as u64);
        for _ in 0..5 {
            let frees: Vec<Rat> =
                (0..sol2.free_cols().len()).map(|_| rng.rat_in(6)).collect();
            let point = sol2.point(&frees);
            let dm = mine.eval(&point).det();
            let dp = printed.eval(&point).det();
            ensure(
                dm.is_zero() == dp.is_zero(),
                format!("n2 degree {k}: singularity disagreement at a sample point"),
            )?;
            if k == 2 {
                ensure(dm == dp, "n2 degree 2: value disagreement at a sample point")?;
            }
        }
        details.push(format!(
            "n2: degree-{k} singularity behavior agrees at 5 constraint-variety points"
        ));
    }
    Ok(details)
}

fn criterion_obstructions() -> Check {
    let mut details = Vec::new();

    let n1 = catalog_algebra("n1")?;
    let ds1 = derivation_space(&n1);
    let empty1 = LinearSystem::new(ds1.vars().clone());
    match err_str(exactness_obstruction(&n1, ds1.generic(), &empty1))? {
        Obstruction::Certificate(c) => {
            let w = c.find(6).ok_or("n1: e6 does not certify")?;
            ensure(w.identically_zero, "n1: P_e6 should vanish identically")?;
            details.push("n1: P_e6 = 0 identically, no constraints needed".to_string());
        }
        Obstruction::Refuted { .. } => return Err("n1: no certificate".to_string()),
    }

    let n2 = catalog_algebra("n2")?;
    let ds2 = derivation_space(&n2);
    let su2 = err_str(su_constraints(&n2, ds2.generic()))?;
    match err_str(exactness_obstruction(&n2, ds2.generic(), &su2))? {
        Obstruction::Certificate(c) => {
            let w = c.find(6).ok_or("n2: e6 does not certify")?;
            ensure(!w.identically_zero, "n2: P_e6 should need the constraints")?;
            let sef = generic_exact_form(&n2, ds2.generic());
            let v = |name: &str| Poly::var_named(&sef.vars, name);
            let expected =
                Poly::int(12) * v("c56") * v("c56") * v("c56") * (v("a1") + v("a7"));
            ensure(
                w.raw == expected || w.raw == -expected,
                format!("n2: P_e6 = {} has the wrong factor structure", w.raw),
            )?;
            details.push(format!("n2: P_e6 = {}, vanishing under the trace constraints", w.raw));
        }
        Obstruction::Refuted { .. } => return Err("n2: no certificate".to_string()),
    }

    let ab = catalog_algebra("abelian")?;
    let dsa = derivation_space(&ab);
    let emptya = LinearSystem::new(dsa.vars().clone());
    match err_str(exactness_obstruction(&ab, dsa.generic(), &emptya))? {
        Obstruction::Certificate(c) => {
            let w = c.find(1).ok_or("abelian: e1 does not certify")?;
            ensure(w.identically_zero, "abelian: P_e1 should vanish identically")?;
            details.push("abelian: P_e1 = 0 identically".to_string());
        }
        Obstruction::Refuted { .. } => return Err("abelian: no certificate".to_string()),
    }
    Ok(details)
}

fn criterion_dalpha_coefficient() -> Check {
    let n1 = catalog_algebra("n1")?;
    let ds = derivation_space(&n1);
    let sef = generic_exact_form(&n1, ds.generic());
    let v = |name: &str| Poly::var_named(&sef.vars, name);
    let expected = -v("a1") * v("c12") - v("a4") * v("c12") + v("a9") * v("c25")
        - v("a10") * v("c15")
        + v("a13") * v("c26")
        - v("a14") * v("c16")
        + v("c57");
    let coeff = sef.d_alpha.coeff(MIdx::from_indices(&[1, 2, 7]));
    ensure(coeff == expected, format!("coefficient of e127 is {coeff}"))?;
    Ok(vec![format!("coefficient of e127 in d(alpha): {coeff}")])
}

fn criterion_h_example() -> Check {
    let fx = err_str(fixtures())?;
    let h = &fx.h_example;
    let mut details = Vec::new();

    let betti = h.betti_vector();
    ensure(betti == vec![1, 2, 1, 0, 0, 1, 2, 1], format!("betti {betti:?}"))?;
    details.push("betti = (1,2,1,0,0,1,2,1)".to_string());

    let rep = h.unimodularity();
    ensure(rep.unimodular && !rep.strongly_unimodular, "unimodularity pattern")?;
    let w = rep.strong_witness.ok_or("missing witness")?;
    ensure(
        w.basis_index == 1 && w.level == 2 && w.trace == rat_int(3),
        format!("witness (e{}, level {}, trace {})", w.basis_index, w.level, w.trace),
    )?;
    details.push("not strongly unimodular: ad restricted to the level-2 ideal has trace 3".to_string());

    let m = &fx.h_basis_change;
    let n = crate::ring::invert(m).ok_or("basis change is singular")?;
    for i in 0..7 {
        let mut de = KForm::zero(2);
        for j in 0..7 {
            let old = h.differential(j + 1).map(|c| Quad::from_parts(c.clone(), Rat::zero()));
            de = de + old.scale(&m[(i, j)]);
        }
        ensure(
            de.change_of_frame(&n) == fx.h_new_differentials[i],
            format!("structure equation {} not reproduced", i + 1),
        )?;
    }
    details.push("all seven new-frame structure equations reproduced from the basis change".to_string());

    let phi = standard_adapted_form::<Quad>();
    let cand =
        err_str(G2Candidate::from_differentials(fx.h_new_differentials.clone(), phi.clone()))?;
    ensure(cand.is_closed(), "adapted form is not closed in the new frame")?;
    let primitive = fx.h_primitive.map(|c| Quad::from_parts(c.clone(), Rat::zero()));
    ensure(
        d_form(&fx.h_new_differentials, &primitive) == phi,
        "recorded primitive does not differentiate to the adapted form",
    )?;
    let nd = g2_nondegenerate(&cand);
    ensure(nd.is_g2, "adapted form is not nondegenerate in the new frame")?;
    details.push(format!(
        "adapted form closed with the recorded primitive; nondegenerate with sign {}",
        nd.sign.unwrap_or(0)
    ));
    Ok(details)
}

fn criterion_properties() -> Check {
    let runs: Vec<PropertyRun> = vec![
        ("d-squared-zero", property_d_squared_zero),
        ("contraction-antiderivation", property_contraction_antiderivation),
        ("poincare-duality", property_poincare_duality),
        ("semidirect-differential", property_semidirect_differential),
        ("crosscheck-agreement", property_crosscheck_agreement),
        ("adapted-bilinear", property_adapted_bilinear),
        ("certificate-degeneracy", property_certificate_degeneracy),
    ];
    let mut details = Vec::new();
    for (name, run) in runs {
        match run() {
            Ok(summary) => details.push(format!("{name}: {summary}")),
            Err(msg) => return Err(format!("{name}: {msg}")),
        }
    }
    Ok(details)
}

fn random_form(rng: &mut SplitMix64, dim: usize, degree: usize, bound: i64) -> KForm<Rat> {
    KForm::from_terms(
        degree,
        MIdx::enumerate(dim, degree)
            .into_iter()
            .map(|m| (m, rng.rat_in(bound)))
            .collect(),
    )
}

/// d(d(form)) = 0 on every catalog algebra and both fixtures, for random
/// forms in every degree.
pub fn property_d_squared_zero() -> Property {
    let entries = err_str(load_catalog())?;
    let fx = err_str(fixtures())?;
    let mut algebras: Vec<LieAlgebra> = Vec::new();
    for e in &entries {
        algebras.push(err_str(LieAlgebra::nilpotent_from_tuple(err_str(parse_tuple(
            &e.tuple,
        ))?))?);
    }
    algebras.push(fx.s_example.clone());
    algebras.push(fx.h_example.clone());
    let mut rng = SplitMix64::new(0xd5ed);
    let mut checked = 0usize;
    for la in &algebras {
        for degree in 1..la.dim() {
            let f = random_form(&mut rng, la.dim(), degree, 5);
            ensure(la.d(&la.d(&f)).is_zero(), format!("d^2 != 0 at degree {degree}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} random forms across {} algebras", algebras.len()))
}

/// Contraction is an antiderivation: i_k(a^b) = i_k(a)^b + (-1)^deg(a)
/// a^i_k(b) for random forms on a seven-dimensional space.
pub fn property_contraction_antiderivation() -> Property {
    let mut rng = SplitMix64::new(0xc0de);
    let mut checked = 0usize;
    for _ in 0..50 {
        let p = 1 + (rng.next_u64() % 3) as usize;
        let q = 1 + (rng.next_u64() % 3) as usize;
        let k = 1 + (rng.next_u64() % 7) as usize;
        let a = random_form(&mut rng, 7, p, 4);
        let b = random_form(&mut rng, 7, q, 4);
        let lhs = a.wedge(&b).contract(k);
        let signed = if p.is_multiple_of(2) { a.contract(k).wedge(&b) + a.wedge(&b.contract(k)) } else {
            a.contract(k).wedge(&b) - a.wedge(&b.contract(k))
        };
        ensure(lhs == signed, format!("failed for degrees ({p}, {q}) at slot {k}"))?;
        checked += 1;
    }
    Ok(format!("{checked} random wedge pairs"))
}

/// Poincare duality b_k = b_(n-k) on the unimodular fixtures and on the
/// strongly unimodular sample extensions of the admitting algebras.
pub fn property_poincare_duality() -> Property {
    let fx = err_str(fixtures())?;
    let mut algebras = vec![("s".to_string(), fx.s_example.clone()), ("h".to_string(), fx.h_example.clone())];
    for key in ["abelian", "n1", "n2"] {
        let alg = catalog_algebra(key)?;
        let verdict = err_str(classify_nilpotent(&alg))?;
        match verdict.outcome {
            Outcome::Admits { derivation, .. } => {
                let ext = err_str(alg.extend_by_derivation(&derivation))?;
                algebras.push((format!("extension of {key}"), ext));
            }
            _ => return Err(format!("{key} should admit")),
        }
    }
    for (name, la) in &algebras {
        let betti = la.betti_vector();
        let n = la.dim();
        for k in 0..=n {
            ensure(
                betti[k] == betti[n - k],
                format!("{name}: b_{k} = {} but b_{} = {}", betti[k], n - k, betti[n - k]),
            )?;
        }
    }
    Ok(format!("betti symmetry on {} unimodular algebras", algebras.len()))
}

/// The semidirect differential identity d(g) = d_base(g) +
/// (-1)^(deg+1) D*(g) ^ e7 for random derivations and random forms.
pub fn property_semidirect_differential() -> Property {
    let mut rng = SplitMix64::new(0x5d11);
    let mut checked = 0usize;
    for key in ["worked", "abelian", "n1", "n2"] {
        let alg = catalog_algebra(key)?;
        let ds = derivation_space(&alg);
        for _ in 0..3 {
            let point: Vec<Rat> = (0..ds.vars().len()).map(|_| rng.rat_in(4)).collect();
            let d = ds.at_point(&point);
            let ext = err_str(alg.extension_differentials(&d))?;
            for degree in 1..=3 {
                let gamma = random_form(&mut rng, 6, degree, 4);
                let lhs = d_form(&ext, &gamma);
                let pull = pullback_action(&d.to_poly(), &gamma).map(|p| p.eval(&[]));
                let e7 = KForm::basis_element(MIdx::from_indices(&[7]), Rat::one());
                let correction = pull.wedge(&e7);
                let rhs = if degree % 2 == 1 {
                    alg.d(&gamma) + correction
                } else {
                    alg.d(&gamma) - correction
                };
                ensure(lhs == rhs, format!("{key}: identity failed at degree {degree}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} derivation/form pairs"))
}

/// The action route and the Betti route of the rank-one extension test
/// agree on random rational derivations of each admitting algebra.
pub fn property_crosscheck_agreement() -> Property {
    let mut rng = SplitMix64::new(0xcc01);
    let mut agreements = 0usize;
    for key in ["abelian", "n1", "n2"] {
        let alg = catalog_algebra(key)?;
        let ds = derivation_space(&alg);
        for _ in 0..10 {
            let point: Vec<Rat> = (0..ds.vars().len()).map(|_| rng.rat_in(4)).collect();
            let cc = err_str(madsen_swann_crosscheck(&alg, &ds.at_point(&point)))?;
            ensure(
                cc.via_action == cc.via_betti,
                format!("{key}: routes disagree at a random derivation"),
            )?;
            agreements += 1;
        }
    }
    Ok(format!("{agreements} random derivations, two routes always agreeing"))
}

/// The bilinear form of the adapted frame is 6 times the identity.
pub fn property_adapted_bilinear() -> Property {
    let cand = err_str(G2Candidate::pointwise(standard_adapted_form::<Rat>()))?;
    let data = g2_bilinear(&cand);
    ensure(
        data.matrix == Matrix::identity(7).scale(&rat_int(6)),
        "bilinear form is not 6 Id",
    )?;
    Ok("B(adapted) = 6 Id".to_string())
}

/// Every certificate family instantiates to degenerate 3-forms: random
/// constrained parameter choices always fail nondegeneracy, with the
/// certified witnesses isotropic.
pub fn property_certificate_degeneracy() -> Property {
    let mut rng = SplitMix64::new(0xdead);
    let mut instantiations = 0usize;
    for (key, constrained) in [("abelian", false), ("n1", false), ("n2", true)] {
        let alg = catalog_algebra(key)?;
        let ds = derivation_space(&alg);
        let sys = if constrained {
            err_str(su_constraints(&alg, ds.generic()))?
        } else {
            LinearSystem::new(ds.vars().clone())
        };
        let sol = err_str(solve_affine(&sys))?;
        let witnesses: Vec<usize> =
            match err_str(exactness_obstruction(&alg, ds.generic(), &sys))? {
                Obstruction::Certificate(c) => c.witnesses.iter().map(|w| w.vector).collect(),
                Obstruction::Refuted { .. } => return Err(format!("{key}: no certificate")),
            };
        for _ in 0..20 {
            let frees: Vec<Rat> =
                (0..sol.free_cols().len()).map(|_| rng.rat_in(5)).collect();
            let point = sol.point(&frees);
            let d = ds.at_point(&point);
            let ext = err_str(alg.extension_differentials(&d))?;
            let alpha = random_form(&mut rng, 7, 2, 5);
            let phi = d_form(&ext, &alpha);
            let cand = err_str(G2Candidate::from_differentials(ext, phi))?;
            ensure(!g2_nondegenerate(&cand).is_g2, format!("{key}: instantiation nondegenerate"))?;
            let b = g2_bilinear(&cand).matrix;
            for &w in &witnesses {
                ensure(
                    b[(w - 1, w - 1)].is_zero(),
                    format!("{key}: witness e{w} not isotropic"),
                )?;
            }
            instantiations += 1;
        }
    }
    Ok(format!("{instantiations} constrained instantiations, all degenerate"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filters_select_by_tag_and_index() {
        let all = criteria();
        assert_eq!(all.len(), 11);
        let by_tag = run_matching(Some("betti-s"));
        assert_eq!(by_tag.len(), 1);
        assert_eq!(by_tag[0].index, 1);
        assert!(by_tag[0].pass, "{:?}", by_tag[0].details);
        let by_index = run_matching(Some("5"));
        assert_eq!(by_index.len(), 1);
        assert_eq!(by_index[0].tag, "worked-a1");
        assert!(by_index[0].pass, "{:?}", by_index[0].details);
        assert!(run_matching(Some("nonsense")).is_empty());
    }

    #[test]
    fn failing_checks_are_reported_not_hidden() {
        let bad = Criterion {
            index: 99,
            tag: "bad",
            title: "always fails",
            run: || Err("expected failure".to_string()),
        };
        let outcome = run_one(&bad);
        assert!(!outcome.pass);
        assert_eq!(outcome.details, vec!["expected failure".to_string()]);
        let panicky = Criterion {
            index: 98,
            tag: "panic",
            title: "panics",
            run: || panic!("boom"),
        };
        let outcome = run_one(&panicky);
        assert!(!outcome.pass);
        assert!(outcome.details[0].contains("boom"));
    }

    #[test]
    fn quick_criteria_pass() {
        for key in ["betti-s", "exact-g2-s", "su-failure-s", "worked-a1", "dalpha-127"] {
            let out = run_matching(Some(key));
            assert_eq!(out.len(), 1, "{key}");
            assert!(out[0].pass, "{key}: {:?}", out[0].details);
        }
    }
}
