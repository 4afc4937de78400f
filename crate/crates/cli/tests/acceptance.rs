//! The acceptance criteria, one test each. Every test writes a single
//! PASS/FAIL line to stderr with its runtime and bound.

use std::collections::BTreeMap;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_rational::BigRational;
use num_traits::{One, Zero};
use ql_bridge_cli::commands::OPERATION_COVERAGE;
use ql_bridge_cli::fixtures;
use ql_bridge_cli::input::{self, Settings};
use ql_bridge_core::contextuality::{
    instances, mcp_solve, mgp_check, Assignment, LawForm, ObservableConstraintSystem, Status,
    DEFAULT_BUDGET,
};
use ql_bridge_core::hilbert::{self, born, qubit, HilbertSpace, QuantumState};
use ql_bridge_core::language::{Fragment, Wff};
use ql_bridge_core::order::{lattice_diagnostics, order_isomorphic, IsoResult, OrthoStructure};
use ql_bridge_core::pragmatics::{
    quantum_fragment_structure, spot_check, AssertiveFormula as Af, QuantumOracle,
};
use ql_bridge_core::probability::{
    born_model_synthesize, collapse_contexts, compatibility, cond_prob, conditional_q_prob,
    mean_probability_measurement, q_probability, ContextDraw, ProbabilityError, SynthesisOptions,
};
use ql_bridge_core::random::{self, ModelBounds};
use ql_bridge_core::semantics::{
    evaluate, extension, logical_preorder, physical_preorder, ClassicalModel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if $cond {
        } else {
            return Err(format!($($msg)+));
        }
    };
}

fn criterion(id: u32, name: &str, limit_secs: u64, body: impl FnOnce() -> Check) {
    let limit = Duration::from_secs(limit_secs);
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let result = match outcome {
        Ok(Ok(detail)) if elapsed <= limit => Ok(detail),
        Ok(Ok(detail)) => Err(format!("{detail}; over time")),
        Ok(Err(e)) => Err(e),
        Err(_) => Err("panicked".into()),
    };
    let (tag, detail) = match &result {
        Ok(d) => ("PASS", d.as_str()),
        Err(d) => ("FAIL", d.as_str()),
    };
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id:>2} {tag}: {name} ({detail}) {:.2}s / {limit_secs}s",
        elapsed.as_secs_f64()
    );
    if let Err(e) = result {
        panic!("criterion {id} failed: {e}");
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn by_objects(m: &ClassicalModel, w: &Wff) -> Result<FixedBitSet, String> {
    let mut set = FixedBitSet::with_capacity(m.universe().len());
    for o in 0..m.universe().len() {
        set.set(o, evaluate(w, m, o).map_err(err)?);
    }
    Ok(set)
}

#[test]
fn c01_logical_order_implies_physical_order() {
    criterion(1, "logical preorder implies physical preorder", 10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x01);
        let (mut pairs, mut ordered, mut strict) = (0, 0, 0);
        for _ in 0..500 {
            let m = random::classical_model(&mut rng, ModelBounds::default());
            let sig = m.signature().clone();
            for _ in 0..6 {
                let a = random::state_free_wff(&mut rng, &sig, 3);
                let b = if rng.random_bool(0.5) {
                    Wff::or(a.clone(), random::state_free_wff(&mut rng, &sig, 2))
                } else {
                    random::state_free_wff(&mut rng, &sig, 3)
                };
                let (ea, eb) = (by_objects(&m, &a)?, by_objects(&m, &b)?);
                let le = ea.is_subset(&eb);
                ensure!(
                    logical_preorder(&a, &b, &m).map_err(err)? == le,
                    "logical order disagrees on {a}, {b}"
                );
                let phys = physical_preorder(&a, &b, &m).map_err(err)?;
                ensure!(!le || phys, "counterexample: {a} < {b} but not physically");
                pairs += 1;
                ordered += usize::from(le);
                strict += usize::from(phys && !le);
            }
        }
        let w = input::classical("witness_model").map_err(err)?;
        let (e1, e2) = (Wff::property("E1"), Wff::property("E2"));
        ensure!(
            physical_preorder(&e2, &e1, &w).map_err(err)?,
            "witness: E2 should precede E1 physically"
        );
        ensure!(
            !logical_preorder(&e2, &e1, &w).map_err(err)?,
            "witness: E2 must not precede E1 logically"
        );
        Ok(format!("{pairs} pairs, {ordered} ordered, 0 counterexamples, {strict} strictly physical; witness E2 vs E1"))
    });
}

/// Rewrites property atoms into formulas with the same extension.
fn equivalent_rewrite(w: &Wff, other: &Wff, variant: usize) -> Wff {
    w.map_atoms(&|leaf: &Wff| match leaf {
        Wff::Property(_) => match variant % 3 {
            0 => Wff::not(Wff::not(leaf.clone())),
            1 => Wff::and(leaf.clone(), Wff::or(leaf.clone(), other.clone())),
            _ => Wff::or(leaf.clone(), Wff::and(leaf.clone(), other.clone())),
        },
        _ => leaf.clone(),
    })
}

#[test]
fn c02_boolean_semantics() {
    criterion(2, "extension homomorphism and T-functionality", 10, || {
        let mut rng = ChaCha8Rng::seed_from_u64(0x02);
        let mut m = random::classical_model(&mut rng, ModelBounds::default());
        for i in 0..10_000 {
            if i % 25 == 0 {
                m = random::classical_model(&mut rng, ModelBounds::default());
            }
            let sig = m.signature().clone();
            let w = random::wff(&mut rng, &sig, 4, Fragment::Basic);
            let ext = extension(&w, &m).map_err(err)?;
            let full = m.full_set();
            let complement = |s: &FixedBitSet| {
                let mut c = full.clone();
                c.difference_with(s);
                c
            };
            let sub = |x: &Wff| extension(x, &m).map_err(err);
            let expected = match &w {
                Wff::Not(a) => complement(&sub(a)?),
                Wff::And(a, b) => {
                    let mut s = sub(a)?;
                    s.intersect_with(&sub(b)?);
                    s
                }
                Wff::Or(a, b) => {
                    let mut s = sub(a)?;
                    s.union_with(&sub(b)?);
                    s
                }
                Wff::Implies(a, b) => {
                    let mut s = complement(&sub(a)?);
                    s.union_with(&sub(b)?);
                    s
                }
                leaf => m
                    .atom_extension(&leaf.as_atom().expect("atom"))
                    .map_err(err)?,
            };
            ensure!(ext == expected, "homomorphism fails on {w}");
            ensure!(
                ext == by_objects(&m, &w)?,
                "pointwise evaluation disagrees on {w}"
            );
            let other = random::wff(&mut rng, &sig, 2, Fragment::Basic);
            let rewritten = equivalent_rewrite(&w, &other, i);
            ensure!(
                extension(&rewritten, &m).map_err(err)? == ext,
                "T-functionality fails on {w}"
            );
        }
        Ok("10000 formulas".into())
    });
}

/// Meets and joins read off the order alone, then both laws checked over
/// every pair and triple.
fn brute_force_laws(s: &OrthoStructure) -> (bool, usize) {
    let n = s.len();
    let bound = |a: usize, b: usize, lower: bool| -> usize {
        let cands: Vec<usize> = (0..n)
            .filter(|&x| {
                if lower {
                    s.leq(x, a) && s.leq(x, b)
                } else {
                    s.leq(a, x) && s.leq(b, x)
                }
            })
            .collect();
        *cands
            .iter()
            .find(|&&x| {
                cands
                    .iter()
                    .all(|&y| if lower { s.leq(y, x) } else { s.leq(x, y) })
            })
            .expect("lattice")
    };
    let mut orthomodular = true;
    for a in 0..n {
        for b in 0..n {
            if s.leq(a, b) && !s.equivalent(bound(a, bound(s.ortho(a), b, true), false), b) {
                orthomodular = false;
            }
        }
    }
    let mut failures = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = bound(a, bound(b, c, false), true);
                let rhs = bound(bound(a, b, true), bound(a, c, true), false);
                if !s.equivalent(lhs, rhs) {
                    failures += 1;
                }
            }
        }
    }
    (orthomodular, failures)
}

#[test]
fn c03_lattice_diagnostics() {
    criterion(
        3,
        "C^2 lattice orthomodular, not distributive; Boolean 8 both",
        1,
        || {
            let six = qubit::six_element_lattice();
            let eps = 1e-9;
            ensure!(six.len() == 6, "expected 6 elements, found {}", six.len());
            let label = |ket| {
                six.elements()[six.find(&qubit::proj(&ket)).expect("element")]
                    .0
                    .clone()
            };
            let (p0, pp, pm) = (
                label(qubit::zero()),
                label(qubit::plus()),
                label(qubit::minus()),
            );
            let s = six.to_ortho_structure();
            let r = lattice_diagnostics(&s).map_err(err)?;
            ensure!(
                r.orthomodular && !r.distributive,
                "six-element report {r:?}"
            );
            ensure!(
                r.distributivity_witnesses
                    .contains(&(p0.clone(), pp.clone(), pm.clone())),
                "witness ({p0}, {pp}, {pm}) missing"
            );
            let (om, failures) = brute_force_laws(&s);
            ensure!(
                om && failures == r.distributivity_failures,
                "enumeration disagrees: {om} {failures}"
            );
            // The same triple with matrix arithmetic.
            let (a, b, c) = (
                six.get(&p0).map_err(err)?,
                six.get(&pp).map_err(err)?,
                six.get(&pm).map_err(err)?,
            );
            let lhs =
                hilbert::meet(a, &hilbert::join(b, c, eps).map_err(err)?, eps).map_err(err)?;
            let rhs = hilbert::join(
                &hilbert::meet(a, b, eps).map_err(err)?,
                &hilbert::meet(a, c, eps).map_err(err)?,
                eps,
            )
            .map_err(err)?;
            ensure!(
                !lhs.approx_eq(&rhs, eps),
                "matrix computation shows no failure"
            );
            for (x, _) in six.elements() {
                for (y, _) in six.elements() {
                    let (px, py) = (six.get(x).map_err(err)?, six.get(y).map_err(err)?);
                    if hilbert::leq(px, py, eps) {
                        let back = hilbert::join(
                            px,
                            &hilbert::meet(&hilbert::ortho(px), py, eps).map_err(err)?,
                            eps,
                        )
                        .map_err(err)?;
                        ensure!(
                            back.approx_eq(py, eps),
                            "orthomodular law fails on matrices at ({x}, {y})"
                        );
                    }
                }
            }
            let b8 = input::ortho_structure(
                "boolean8",
                Settings {
                    tolerance: None,
                    budget: None,
                    resolution: 1000,
                },
            )
            .map_err(err)?;
            let r8 = lattice_diagnostics(&b8).map_err(err)?;
            ensure!(
                r8.orthomodular && r8.distributive && r8.boolean,
                "boolean8 report {r8:?}"
            );
            ensure!(
                brute_force_laws(&b8) == (true, 0),
                "enumeration disagrees on boolean8"
            );
            Ok(format!(
                "witness ({p0}, {pp}, {pm}), {} distributivity failures",
                r.distributivity_failures
            ))
        },
    );
}

/// Checks a reported isomorphism against both structures directly.
fn verify_iso(iso: &IsoResult, a: &OrthoStructure, b: &OrthoStructure) -> Result<usize, String> {
    let mapping = iso
        .mapping()
        .ok_or_else(|| format!("not isomorphic: {iso:?}"))?;
    let idx: Vec<(usize, usize)> = mapping
        .iter()
        .map(|(l, r)| {
            (
                a.index_of(l).expect("left label"),
                b.index_of(r).expect("right label"),
            )
        })
        .collect();
    let qa = a.quotient().structure.len();
    let qb = b.quotient().structure.len();
    ensure!(
        idx.len() == qa && qa == qb,
        "mapping covers {} of {qa}/{qb} classes",
        idx.len()
    );
    for &(x, y) in &idx {
        for &(u, v) in &idx {
            ensure!(
                a.leq(x, u) == b.leq(y, v),
                "order not preserved at {} {}",
                a.label(x),
                a.label(u)
            );
        }
        let image = idx
            .iter()
            .find(|&&(u, _)| a.equivalent(u, a.ortho(x)))
            .ok_or("ortho class not mapped")?;
        ensure!(
            b.equivalent(image.1, b.ortho(y)),
            "ortho not preserved at {}",
            a.label(x)
        );
    }
    Ok(idx.len())
}

#[test]
fn c04_embeddings_are_isomorphic() {
    criterion(
        4,
        "concrete logic and pragmatic fragment match the C^2 lattice",
        30,
        || {
            let six = qubit::six_element_lattice();
            let target = six.to_ortho_structure();
            let export = six.classical_export().map_err(err)?;
            let cl = ql_bridge_core::semantics::concrete_logic(
                &export.model,
                &export.phi_v,
                &export.ortho,
            )
            .map_err(err)?;
            let n1 = verify_iso(&order_isomorphic(&cl, &target), &cl, &target)?;
            let oracle = QuantumOracle::new(
                [
                    ("P0".to_string(), qubit::proj(&qubit::zero())),
                    ("Pplus".to_string(), qubit::proj(&qubit::plus())),
                ]
                .into(),
                2,
                1e-9,
            )
            .map_err(err)?;
            let fs = quantum_fragment_structure(&oracle, 3, 100_000).map_err(err)?;
            let n2 = verify_iso(
                &order_isomorphic(&fs.structure, &target),
                &fs.structure,
                &target,
            )?;
            Ok(format!(
                "export {n1} classes, fragment {n2} classes from {} formulas",
                fs.enumerated
            ))
        },
    );
}

#[test]
fn c05_negation_is_not_justification_functional() {
    criterion(
        5,
        "N is not J-functional; K/A and exclusion on 200 Haar states",
        5,
        || {
            let p0 = qubit::proj(&qubit::zero());
            let o = QuantumOracle::new(
                [
                    ("P0".to_string(), p0.clone()),
                    ("Pplus".to_string(), qubit::proj(&qubit::plus())),
                ]
                .into(),
                2,
                1e-9,
            )
            .map_err(err)?;
            let d = Af::assert(Wff::property("P0"));
            let (one, plus) = (qubit::state(&qubit::one()), qubit::state(&qubit::plus()));
            let j = |f: &Af, s: &QuantumState| o.justify(f, s).map_err(err);
            ensure!(j(&d, &one)? == j(&d, &plus)?, "elementary values differ");
            ensure!(!j(&d, &one)?, "|-P0 justified at |1>");
            ensure!(
                j(&Af::n(d.clone()), &one)? && !j(&Af::n(d.clone()), &plus)?,
                "N values do not differ"
            );

            let mut rng = ChaCha8Rng::seed_from_u64(0x05);
            let names = vec!["P0".to_string(), "Pplus".to_string()];
            let mut disagreements = 0;
            for _ in 0..200 {
                let s = QuantumState::haar_random(2, &mut rng);
                let d1 = random::assertive(&mut rng, &names, 2);
                let d2 = random::assertive(&mut rng, &names, 2);
                let (j1, j2) = (j(&d1, &s)?, j(&d2, &s)?);
                if j(&Af::k(d1.clone(), d2.clone()), &s)? != (j1 && j2) {
                    disagreements += 1;
                }
                if j(&Af::a(d1.clone(), d2.clone()), &s)? != (j1 || j2) {
                    disagreements += 1;
                }
                if j1 && j(&Af::n(d1.clone()), &s)? {
                    disagreements += 1;
                }
                // Elementary justification straight from the Born value.
                let direct = born(&s, &p0).map_err(err)? >= 1.0 - 1e-9;
                if j(&d, &s)? != direct {
                    disagreements += 1;
                }
            }
            ensure!(disagreements == 0, "{disagreements} disagreements");
            let formulas: Vec<Af> = (0..10)
                .map(|_| random::assertive(&mut rng, &names, 2))
                .collect();
            let report = spot_check(&o, &formulas, 200, &mut rng).map_err(err)?;
            ensure!(
                report.mismatches.is_empty(),
                "spot check mismatches {:?}",
                report.mismatches
            );
            Ok(format!(
                "0 disagreements; spot check {} samples, {} justified hits",
                report.samples, report.justified_hits
            ))
        },
    );
}

#[test]
fn c06_kolmogorov() {
    criterion(
        6,
        "conditional probability is Kolmogorov, exactly",
        10,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x06);
            let mut checked = 0;
            for _ in 0..1000 {
                let mm = random::mu_context_model(&mut rng, ModelBounds::default());
                let m = mm.base();
                let sig = m.signature().clone();
                let a = random::wff(&mut rng, &sig, 3, Fragment::Contextual);
                let b = random::wff(&mut rng, &sig, 3, Fragment::Contextual);
                let c = random::wff(&mut rng, &sig, 2, Fragment::Contextual);
                let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
                for o in 0..m.universe().len() {
                    if evaluate(&c, m, o).map_err(err)? {
                        den += m.measure().weight(o);
                        if evaluate(&a, m, o).map_err(err)? {
                            num += m.measure().weight(o);
                        }
                    }
                }
                if den.is_zero() {
                    ensure!(
                        matches!(cond_prob(&a, &c, m), Err(ProbabilityError::ZeroMeasure(_))),
                        "zero-measure condition not rejected"
                    );
                    continue;
                }
                let p = |x: &Wff| cond_prob(x, &c, m).map_err(err);
                let pa = p(&a)?;
                ensure!(pa == num / &den, "value differs from the weight sum");
                ensure!(pa >= BigRational::zero(), "negative");
                ensure!(p(&c)? == BigRational::one(), "not normalized");
                ensure!(
                    p(&Wff::not(a.clone()))? == BigRational::one() - &pa,
                    "complement fails"
                );
                let disjoint = Wff::and(b.clone(), Wff::not(a.clone()));
                ensure!(
                    p(&Wff::or(a.clone(), disjoint.clone()))? == &pa + p(&disjoint)?,
                    "additivity fails"
                );
                checked += 1;
            }
            ensure!(
                checked >= 500,
                "only {checked} models had a nonnull condition"
            );
            Ok(format!("{checked} of 1000 models with nonnull conditions"))
        },
    );
}

#[test]
fn c07_born_rule_recovery() {
    criterion(
        7,
        "synthesized Q-probabilities and sampling recover Born values",
        30,
        || {
            use std::f64::consts::PI;
            let thetas: Vec<f64> = [0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12]
                .iter()
                .map(|&k| f64::from(k) * PI / 12.0)
                .collect();
            for required in [0.0, PI / 3.0, PI / 2.0, 2.0 * PI / 3.0, PI] {
                ensure!(
                    thetas.iter().any(|t| (t - required).abs() < 1e-12),
                    "sweep misses {required}"
                );
            }
            let states: Vec<(String, QuantumState)> = thetas
                .iter()
                .enumerate()
                .map(|(i, &t)| (format!("S{i}"), qubit::state(&qubit::spin(t))))
                .collect();
            let props = vec![("Pz".to_string(), qubit::proj(&qubit::zero()))];
            let opts = SynthesisOptions {
                resolution: 1000,
                ..SynthesisOptions::default()
            };
            let syn = born_model_synthesize(&HilbertSpace::qubit(), &states, &props, opts)
                .map_err(err)?;
            let mut worst: f64 = 0.0;
            for (i, &t) in thetas.iter().enumerate() {
                let analytic = (t / 2.0).cos().powi(2);
                let b = born(&states[i].1, &props[0].1).map_err(err)?;
                ensure!(
                    (b - analytic).abs() < 1e-12,
                    "born disagrees with cos^2 at {t}"
                );
                let q = q_probability("Pz", &states[i].0, &syn.model)
                    .map_err(err)?
                    .value
                    .to_f64();
                worst = worst.max((q - analytic).abs());
            }
            ensure!(worst <= 1e-3, "worst deviation {worst}");
            let s = thetas
                .iter()
                .position(|t| (t - PI / 3.0).abs() < 1e-12)
                .expect("pi/3");
            let r = mean_probability_measurement(
                &Wff::contextual("Pz", "m0"),
                &Wff::state(states[s].0.clone()),
                &syn.model,
                100_000,
                0,
            )
            .map_err(err)?;
            let gap = (r.frequency - 0.75).abs();
            ensure!(gap <= 0.01, "sampled {} vs 0.75", r.frequency);
            Ok(format!(
                "worst |q - cos^2| = {worst:.2e}; sampled {:.4} at pi/3",
                r.frequency
            ))
        },
    );
}

#[test]
fn c08_compatibility() {
    criterion(
        8,
        "compatibility reflexive, symmetric, not transitive",
        1,
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(0x08);
            let settings = Settings {
                tolerance: None,
                budget: None,
                resolution: 1000,
            };
            let mut models = vec![
                input::mu_model("qubit_model", settings).map_err(err)?,
                input::mu_model("compat_triple", settings).map_err(err)?,
            ];
            models.extend(
                (0..200).map(|_| random::mu_context_model(&mut rng, ModelBounds::default())),
            );
            for m in &models {
                let props: Vec<String> = m.signature().properties().map(String::from).collect();
                for e in &props {
                    ensure!(
                        compatibility(e, e, m).map_err(err)?,
                        "{e} not compatible with itself"
                    );
                    for f in &props {
                        ensure!(
                            compatibility(e, f, m).map_err(err)?
                                == compatibility(f, e, m).map_err(err)?,
                            "asymmetric on {e}, {f}"
                        );
                    }
                }
            }
            let t = &models[1];
            let k = |e: &str, f: &str| compatibility(e, f, t).map_err(err);
            ensure!(
                k("E1", "E2")? && k("E2", "E3")? && !k("E1", "E3")?,
                "triple is transitive"
            );
            Ok(format!("{} models; E1~E2, E2~E3, not E1~E3", models.len()))
        },
    );
}

#[test]
fn c09_bayes_violation() {
    criterion(
        9,
        "Bayes inversion fails on the synthesized qubit, holds when collapsed",
        5,
        || {
            let settings = Settings {
                tolerance: None,
                budget: None,
                resolution: 1000,
            };
            let m = input::mu_model("qubit_hilbert", settings).map_err(err)?;
            let r =
                conditional_q_prob("Ex", "Ez", "S0", &m, ContextDraw::Independent).map_err(err)?;
            // Born: x after z on |0>: 1/2; z after x: 1/2; Bayes predicts 1/2 * 1/2 / 1.
            ensure!(
                (r.value.to_f64() - 0.5).abs() <= 1e-3,
                "value {}",
                r.value.to_f64()
            );
            ensure!(
                (r.bayes_prediction.to_f64() - 0.25).abs() <= 1e-3,
                "prediction {}",
                r.bayes_prediction.to_f64()
            );
            let gap = r.bayes_gap.to_f64();
            ensure!(gap > 0.1, "gap {gap}");
            let c = collapse_contexts(&m).map_err(err)?;
            let rc =
                conditional_q_prob("Ex", "Ez", "S0", &c, ContextDraw::Independent).map_err(err)?;
            ensure!(rc.bayes_gap.0.is_zero(), "collapsed gap {}", rc.bayes_gap.0);
            Ok(format!("gap {} -> 0 after collapse", r.bayes_gap.0))
        },
    );
}

/// Counts global assignments satisfying every law, without the solver.
fn enumerate(sys: &ObservableConstraintSystem) -> (u64, u64) {
    let obs = sys.observables();
    let mut idx = vec![0usize; obs.len()];
    let (mut total, mut good) = (0, 0);
    loop {
        let a: Assignment = obs
            .iter()
            .zip(&idx)
            .map(|(o, &i)| (o.name.clone(), o.domain[i]))
            .collect();
        total += 1;
        good += u64::from(
            sys.laws()
                .iter()
                .all(|l| holds(&a, &l.observables, &l.form)),
        );
        let mut k = 0;
        loop {
            if k == obs.len() {
                return (total, good);
            }
            idx[k] += 1;
            if idx[k] < obs[k].domain.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn holds(a: &Assignment, observables: &[String], form: &LawForm) -> bool {
    let vals: Vec<i64> = observables.iter().map(|o| a[o]).collect();
    match form {
        LawForm::Product { target } => vals.iter().product::<i64>() == *target,
        LawForm::Sum {
            target,
            coefficients,
        } => {
            let coeffs = coefficients.clone().unwrap_or_else(|| vec![1; vals.len()]);
            vals.iter().zip(&coeffs).map(|(v, c)| v * c).sum::<i64>() == *target
        }
        LawForm::Table { allowed } => allowed.contains(&vals),
    }
}

#[test]
fn c10_contextuality_suite() {
    criterion(
        10,
        "Mermin-Peres and GHZ-Mermin: MCP unsat, MGP sat; monotone; flips sat",
        10,
        || {
            for (sys, size) in [
                (instances::mermin_peres(), 512),
                (instances::ghz_mermin(), 64),
            ] {
                let mcp = mcp_solve(&sys, DEFAULT_BUDGET, true);
                ensure!(mcp.status == Status::Unsat, "MCP status {}", mcp.status);
                let audit = mcp.audit.ok_or("no audit")?;
                ensure!(
                    audit.assignments == size && audit.satisfying == 0,
                    "audit {audit:?}"
                );
                ensure!(
                    enumerate(&sys) == (size as u64, 0),
                    "independent enumeration disagrees"
                );
                let mgp = mgp_check(&sys);
                ensure!(mgp.status == Status::Sat, "MGP status {}", mgp.status);
                ensure!(
                    mgp.per_law.len() == sys.laws().len(),
                    "per-law results missing"
                );
                for (law, r) in sys.laws().iter().zip(&mgp.per_law) {
                    let w = r
                        .witness
                        .as_ref()
                        .ok_or(format!("no witness for {}", law.name))?;
                    ensure!(
                        holds(w, &law.observables, &law.form),
                        "witness fails {}",
                        law.name
                    );
                }
            }
            ensure!(
                instances::mermin_peres().laws().len() == 6,
                "square should have 6 laws"
            );
            let mut rng = ChaCha8Rng::seed_from_u64(0x0a);
            let mut sat = 0;
            for _ in 0..100 {
                let sys = random::constraint_system(&mut rng);
                let mcp = mcp_solve(&sys, DEFAULT_BUDGET, false);
                let (_, good) = enumerate(&sys);
                ensure!(
                    (mcp.status == Status::Sat) == (good > 0),
                    "MCP disagrees with enumeration"
                );
                if mcp.is_sat() {
                    sat += 1;
                    ensure!(mgp_check(&sys).is_sat(), "MCP sat but MGP unsat");
                }
            }
            let square = instances::mermin_peres();
            for law in square.laws() {
                let target = law.target().ok_or("product law has a target")?;
                let flipped = square.with_target(&law.name, -target).map_err(err)?;
                ensure!(
                    mcp_solve(&flipped, DEFAULT_BUDGET, false).is_sat(),
                    "flip of {} unsat",
                    law.name
                );
                ensure!(
                    enumerate(&flipped).1 > 0,
                    "flip of {} has no assignment",
                    law.name
                );
            }
            Ok(format!(
                "audits 0/512 and 0/64; {sat} of 100 random systems MCP-sat; 6 flips sat"
            ))
        },
    );
}

fn invocations() -> Vec<Vec<String>> {
    let mut runs: Vec<Vec<String>> = OPERATION_COVERAGE
        .iter()
        .map(|(_, args)| args.iter().map(|s| s.to_string()).collect())
        .collect();
    let extra: &[&[&str]] = &[
        &["lattice-check", "boolean8"],
        &["eval", "S1(x) -> E1(x)", "witness_model"],
        &["prob", "q", "qubit_model"],
        &["prob", "q", "compat_triple"],
        &[
            "--format",
            "table",
            "pragmatic-eval",
            "qubit_hilbert",
            "K(|-(Ez(x)), N |-(Ex(x)))",
        ],
        &["ks", "report", "ghz_mermin"],
    ];
    runs.extend(
        extra
            .iter()
            .map(|a| a.iter().map(|s| s.to_string()).collect()),
    );
    runs
}

#[test]
fn c11_cli_determinism() {
    criterion(
        11,
        "repeated CLI runs over every fixture are byte-identical",
        30,
        || {
            let bin = env!("CARGO_BIN_EXE_ql-bridge");
            let runs = invocations();
            let mut used = BTreeMap::new();
            for args in &runs {
                let outputs: Vec<_> = (0..2)
                    .map(|_| Command::new(bin).args(args).output().expect("spawn"))
                    .collect();
                ensure!(
                    outputs[0].status.success(),
                    "{args:?} failed: {}",
                    String::from_utf8_lossy(&outputs[0].stderr)
                );
                ensure!(
                    outputs[0].stdout == outputs[1].stdout,
                    "{args:?} differs between runs"
                );
                ensure!(!outputs[0].stdout.is_empty(), "{args:?} printed nothing");
                for a in args {
                    if fixtures::get(a).is_some() {
                        *used.entry(a.clone()).or_insert(0) += 1;
                    }
                }
            }
            let missing: Vec<_> = fixtures::names()
                .filter(|n| !used.contains_key(*n))
                .collect();
            ensure!(missing.is_empty(), "fixtures never exercised: {missing:?}");
            Ok(format!(
                "{} invocations x 2 over {} fixtures",
                runs.len(),
                used.len()
            ))
        },
    );
}
