//! One handler per subcommand; each returns a JSON document.

use std::collections::BTreeMap;

use ql_bridge_core::contextuality::{
    check_law, contextuality_report, mcp_solve, mgp_check, Classification, Mode,
    ObservableConstraintSystem, SolveResult, Status, DEFAULT_BUDGET,
};
use ql_bridge_core::hilbert::{born, ProjectionLattice};
use ql_bridge_core::language::{fragment_of, print, Signature, Wff};
use ql_bridge_core::order::{lattice_diagnostics, order_isomorphic, OrthoStructure};
use ql_bridge_core::pragmatics::{
    parse_assertive, pragmatic_preorder, quantum_fragment_structure, spot_check, AssertiveFormula,
    Bindings, JustificationRules, QuantumOracle, QuantumPointOracle, StandardRules,
};
use ql_bridge_core::probability::{
    collapse_contexts, compatibility, cond_prob, conditional_q_prob, generalized_measure_check,
    jointly_testable, mean_cond_prob, mean_probability_measurement, q_probability, testable,
    ContextDraw, MeasureLatticeSpec, MuContextModel, Prob, ProbabilityError,
};
use ql_bridge_core::semantics::{
    c_truth, certainly_true_states, complement_ortho, concrete_logic, extension, logical_preorder,
    physical_preorder, verifiable_wffs, ClassicalModel, VerifiabilityOverride,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::error::{CliError, Kind, Result};
use crate::input::{self, Settings, Source};
use crate::{
    Cli, Command, ConcreteLogicArgs, DrawArg, FragmentArg, KsCommand, ModelArg, Outcome,
    ProbCommand,
};

/// Default cap on formulas built by the pragmatic fragment enumeration.
pub const DEFAULT_FRAGMENT_BUDGET: u64 = 100_000;

/// Each module operation and an invocation (fixture-backed) that reaches it.
pub const OPERATION_COVERAGE: &[(&str, &[&str])] = &[
    ("parse", &["parse", "E1(x) & ~E2(x)", "toy_model"]),
    ("print", &["parse", "E1(x)|~~E2(x)", "toy_model"]),
    ("fragment_of", &["parse", "S1(x) | E1[c1](x)", "toy_model"]),
    ("extension", &["eval", "E1(x) | E3(x)", "toy_model"]),
    ("c_truth", &["eval", "E1(x)", "toy_model"]),
    (
        "logical_preorder",
        &["preorder", "E3(x)", "E2(x)", "toy_model"],
    ),
    (
        "physical_preorder",
        &["preorder", "E2(x)", "E1(x)", "witness_model"],
    ),
    (
        "verifiable_wffs",
        &["concrete-logic", "toy_model", "--formula", "E1(x) | E3(x)"],
    ),
    (
        "concrete_logic",
        &["concrete-logic", "--hilbert", "qubit_hilbert"],
    ),
    ("ortho", &["lattice-check", "qubit_hilbert"]),
    ("meet", &["lattice-check", "qubit_hilbert"]),
    ("born", &["born", "qubit_hilbert", "--state", "Splus"]),
    ("lattice_diagnostics", &["lattice-check", "benzene"]),
    (
        "order_isomorphic",
        &["lattice-check", "qubit_hilbert", "--compare", "benzene"],
    ),
    (
        "justify",
        &["pragmatic-eval", "qubit_hilbert", "N |-(Ez(x))"],
    ),
    (
        "pragmatic_preorder",
        &[
            "pragmatic-eval",
            "qubit_hilbert",
            "|-(Ez(x))",
            "--compare",
            "N |-(Ezm(x))",
        ],
    ),
    (
        "quantum_fragment_structure",
        &["pragmatic-structure", "qubit_hilbert", "--atoms", "Ez,Ex"],
    ),
    (
        "cond_prob",
        &["prob", "cond", "E1(x)", "E2(x)", "toy_model"],
    ),
    (
        "testable",
        &["prob", "mean", "Ez[m0](x)", "S0(x)", "qubit_model"],
    ),
    (
        "compatibility",
        &[
            "prob",
            "cond-q",
            "--e",
            "E1",
            "--f",
            "E2",
            "--state",
            "S",
            "compat_triple",
        ],
    ),
    (
        "mean_cond_prob",
        &["prob", "mean", "Ez[m0](x)", "S0(x)", "qubit_model"],
    ),
    (
        "q_probability",
        &[
            "prob",
            "q",
            "--state",
            "S0",
            "--property",
            "Ez",
            "qubit_model",
        ],
    ),
    (
        "generalized_measure_check",
        &[
            "prob",
            "q",
            "qubit_measure_hilbert",
            "--lattice",
            "qubit_measure_lattice",
        ],
    ),
    (
        "conditional_q_prob",
        &[
            "prob",
            "cond-q",
            "--e",
            "Ex",
            "--f",
            "Ez",
            "--state",
            "S0",
            "qubit_hilbert",
        ],
    ),
    (
        "born_model_synthesize",
        &["prob", "synthesize", "qubit_hilbert"],
    ),
    (
        "mean_probability_measurement",
        &[
            "prob",
            "sample",
            "Ez[m0](x)",
            "S0(x)",
            "qubit_model",
            "--trials",
            "1000",
        ],
    ),
    ("check_law", &["ks", "solve", "spin1_triads_demo"]),
    (
        "mcp_solve",
        &["ks", "solve", "--mode", "mcp", "mermin_peres"],
    ),
    ("mgp_check", &["ks", "solve", "--mode", "mgp", "ghz_mermin"]),
    ("contextuality_report", &["ks", "report", "mermin_peres"]),
    ("run", &["ks", "report", "spin1_triads_demo"]),
];

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let settings = |resolution| Settings {
        tolerance: cli.tolerance,
        budget: cli.budget,
        resolution,
    };
    let base = settings(1000);
    match &cli.command {
        Command::Parse {
            formula,
            source,
            fragment,
        } => parse(formula, source, *fragment).map(Outcome::ok),
        Command::Eval {
            formula,
            model,
            fragment,
        } => eval(formula, model, *fragment).map(Outcome::ok),
        Command::Preorder { a, b, model } => preorder(a, b, model).map(Outcome::ok),
        Command::ConcreteLogic(args) => concrete(args, base).map(Outcome::ok),
        Command::LatticeCheck { file, compare } => {
            lattice_check(file, compare.as_deref(), base).map(Outcome::ok)
        }
        Command::Born {
            file,
            states,
            projections,
        } => born_table(file, states, projections, base).map(Outcome::ok),
        Command::PragmaticEval {
            file,
            formula,
            compare,
            samples,
        } => pragmatic_eval(file, formula, compare.as_deref(), *samples, cli.seed, base)
            .map(Outcome::ok),
        Command::PragmaticStructure { file, depth, atoms } => {
            pragmatic_structure(file, *depth, atoms, cli.budget, base)
        }
        Command::Prob(p) => prob(p, cli.seed, &settings),
        Command::Ks(k) => ks(k, cli.budget.unwrap_or(DEFAULT_BUDGET)),
    }
}

fn parse(text: &str, source: &str, fragment: FragmentArg) -> Result<Value> {
    let sig = input::signature(source)?;
    let w = input::formula(text, &sig, fragment.fragment())?;
    Ok(json!({
        "input": text,
        "fragment": input::fragment_for(text, fragment.fragment()),
        "printed": print(&w),
        "depth": w.depth(),
        "report": fragment_of(&w),
        "ast": w,
    }))
}

fn names(m: &ClassicalModel, set: &fixedbitset::FixedBitSet) -> Vec<String> {
    set.ones().map(|i| m.universe()[i].clone()).collect()
}

fn eval(text: &str, model: &str, fragment: FragmentArg) -> Result<Value> {
    let m = input::classical(model)?;
    let w = input::formula(text, m.signature(), fragment.fragment())?;
    let ext = extension(&w, &m)?;
    let certain = if w.contains_state() {
        Value::Null
    } else {
        let mut out = Map::new();
        for s in m.signature().states() {
            out.insert(
                s.to_string(),
                serde_json::to_value(c_truth(&w, s, &m)?).expect("serializable"),
            );
        }
        Value::Object(out)
    };
    Ok(json!({
        "formula": print(&w),
        "extension": names(&m, &ext),
        "measure": Prob(m.measure().of(&ext)),
        "c_truth": certain,
    }))
}

fn preorder(a: &str, b: &str, model: &str) -> Result<Value> {
    let m = input::classical(model)?;
    let wa = input::formula(a, m.signature(), None)?;
    let wb = input::formula(b, m.signature(), None)?;
    let ab = logical_preorder(&wa, &wb, &m)?;
    let ba = logical_preorder(&wb, &wa, &m)?;
    let mut out = json!({
        "a": print(&wa),
        "b": print(&wb),
        "logical": {"a_le_b": ab, "b_le_a": ba, "equivalent": ab && ba},
    });
    // The physical preorder is only defined on state-free formulas.
    if !wa.contains_state() && !wb.contains_state() {
        let pab = physical_preorder(&wa, &wb, &m)?;
        let pba = physical_preorder(&wb, &wa, &m)?;
        out["physical"] = json!({"a_le_b": pab, "b_le_a": pba, "equivalent": pab && pba});
        out["certainly_true_in"] = json!({
            "a": certainly_true_states(&wa, &m)?,
            "b": certainly_true_states(&wb, &m)?,
        });
        out["strictly_weaker"] = json!(pab && !ab);
    } else {
        out["physical"] = Value::Null;
    }
    Ok(out)
}

fn diagnostics(s: &OrthoStructure) -> Value {
    match lattice_diagnostics(s) {
        Ok(r) => serde_json::to_value(r).expect("serializable"),
        Err(e) => json!({"error": e.to_string()}),
    }
}

fn printed_ortho(ortho: &BTreeMap<Wff, Wff>) -> BTreeMap<String, String> {
    ortho.iter().map(|(k, v)| (print(k), print(v))).collect()
}

fn concrete(args: &ConcreteLogicArgs, s: Settings) -> Result<Value> {
    if let Some(file) = &args.hilbert {
        if !args.formulas.is_empty() || !args.verifiable.is_empty() {
            return Err(CliError::input(
                "--formula and --verifiable apply to model documents only",
            ));
        }
        let doc = input::hilbert(file, s)?;
        let lattice = doc.lattice()?;
        let export = lattice.classical_export()?;
        let structure = concrete_logic(&export.model, &export.phi_v, &export.ortho)?;
        return Ok(json!({
            "property_labels": export.property_labels,
            "phi_v": export.phi_v.iter().map(print).collect::<Vec<_>>(),
            "ortho": printed_ortho(&export.ortho),
            "structure": structure,
            "diagnostics": diagnostics(&structure),
            "isomorphism": order_isomorphic(&structure, &lattice.to_ortho_structure()),
        }));
    }
    let model = args
        .model
        .as_deref()
        .expect("clap requires a model without --hilbert");
    let m = input::classical(model)?;
    let sig = m.signature();
    let candidates: Vec<Wff> = if args.formulas.is_empty() {
        sig.properties()
            .flat_map(|p| [Wff::property(p), Wff::not(Wff::property(p))])
            .collect()
    } else {
        args.formulas
            .iter()
            .map(|f| input::formula(f, sig, None))
            .collect::<Result<_>>()?
    };
    let adjust = VerifiabilityOverride {
        add: args
            .verifiable
            .iter()
            .map(|f| input::formula(f, sig, None))
            .collect::<Result<_>>()?,
        remove: Vec::new(),
    };
    let phi_v = verifiable_wffs(&candidates, &m, Some(&adjust))?;
    let ortho = complement_ortho(&m, &phi_v)?;
    let structure = concrete_logic(&m, &phi_v, &ortho)?;
    Ok(json!({
        "candidates": candidates.iter().map(print).collect::<Vec<_>>(),
        "phi_v": phi_v.iter().map(print).collect::<Vec<_>>(),
        "ortho": printed_ortho(&ortho),
        "structure": structure,
        "diagnostics": diagnostics(&structure),
    }))
}

fn lattice_check(file: &str, compare: Option<&str>, s: Settings) -> Result<Value> {
    let structure = input::ortho_structure(file, s)?;
    let report = lattice_diagnostics(&structure)?;
    let mut out = json!({
        "elements": structure.labels(),
        "diagnostics": report,
        "structure": structure,
    });
    if let Some(other) = compare {
        let b = input::ortho_structure(other, s)?;
        out["isomorphism"] =
            serde_json::to_value(order_isomorphic(&structure, &b)).expect("serializable");
    }
    Ok(out)
}

fn select<'a, T>(
    all: &'a [(String, T)],
    wanted: &[String],
    what: &str,
) -> Result<Vec<&'a (String, T)>> {
    if wanted.is_empty() {
        return Ok(all.iter().collect());
    }
    wanted
        .iter()
        .map(|w| {
            all.iter()
                .find(|(n, _)| n == w)
                .ok_or_else(|| CliError::input(format!("unknown {what} `{w}`")))
        })
        .collect()
}

fn born_table(file: &str, states: &[String], projections: &[String], s: Settings) -> Result<Value> {
    let doc = input::hilbert(file, s)?;
    let lattice = doc.lattice()?;
    let all_states = doc.states()?;
    let mut table = Map::new();
    for (sn, st) in select(&all_states, states, "state")? {
        let mut row = Map::new();
        for (pn, p) in select(lattice.elements(), projections, "projection")? {
            row.insert(pn.clone(), json!(born(st, p)?));
        }
        table.insert(sn.clone(), Value::Object(row));
    }
    let ranks: BTreeMap<&str, usize> = lattice
        .elements()
        .iter()
        .map(|(n, p)| (n.as_str(), p.rank()))
        .collect();
    Ok(json!({"dim": doc.dim, "ranks": ranks, "born": table}))
}

fn oracle_for(doc: &ql_bridge_core::hilbert::HilbertDoc, only: &[String]) -> Result<QuantumOracle> {
    let all = doc.projections()?;
    let bindings: Bindings = select(&all, only, "projection")?
        .into_iter()
        .cloned()
        .collect();
    Ok(QuantumOracle::new(bindings, doc.dim, doc.tolerance)?)
}

fn assertive(text: &str, sig: &Signature) -> Result<AssertiveFormula> {
    parse_assertive(text, sig).map_err(|e| CliError::from(e).context(&format!("formula `{text}`")))
}

fn pragmatic_eval(
    file: &str,
    text: &str,
    compare: Option<&str>,
    samples: usize,
    seed: u64,
    s: Settings,
) -> Result<Value> {
    let doc = input::hilbert(file, s)?;
    let oracle = oracle_for(&doc, &[])?;
    let sig = oracle.signature()?;
    let d = assertive(text, &sig)?;
    let set = oracle.justification_set(&d)?;
    let points = QuantumPointOracle {
        bindings: oracle.bindings().clone(),
        points: doc.states()?,
        tolerance: doc.tolerance,
    };
    let pointwise = StandardRules.justification(&d, &points)?;
    let mut states = Map::new();
    for ((name, st), point) in points.points.iter().zip(&pointwise) {
        states.insert(
            name.clone(),
            json!({
                "analytic": oracle.justify(&d, st)?,
                "pointwise": point,
                "proved": oracle.assignment(st)?,
            }),
        );
    }
    let mut formulas = vec![d.clone()];
    let mut out = json!({
        "formula": d.to_string(),
        "depth": d.depth(),
        "justification": {
            "parts": set.parts().iter().map(|p| p.rank()).collect::<Vec<_>>(),
            "subspace_rank": set.as_subspace(doc.dim).map(|p| p.rank()),
        },
        "states": states,
    });
    if let Some(other) = compare {
        let d2 = assertive(other, &sig)?;
        let le = oracle.preorder(&d, &d2)?;
        let ge = oracle.preorder(&d2, &d)?;
        out["compare"] = json!({
            "formula": d2.to_string(),
            "analytic": {"a_le_b": le, "b_le_a": ge, "equivalent": le && ge},
            "pointwise": {
                "a_le_b": pragmatic_preorder(&d, &d2, &points, &StandardRules)?,
                "b_le_a": pragmatic_preorder(&d2, &d, &points, &StandardRules)?,
            },
        });
        formulas.push(d2);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    out["spot_check"] = serde_json::to_value(spot_check(&oracle, &formulas, samples, &mut rng)?)
        .expect("serializable");
    Ok(out)
}

fn pragmatic_structure(
    file: &str,
    depth: usize,
    atoms: &[String],
    budget: Option<u64>,
    s: Settings,
) -> Result<Outcome> {
    let doc = input::hilbert(file, Settings { budget: None, ..s })?;
    let oracle = oracle_for(&doc, atoms)?;
    let budget = usize::try_from(budget.unwrap_or(DEFAULT_FRAGMENT_BUDGET)).unwrap_or(usize::MAX);
    let fs = quantum_fragment_structure(&oracle, depth, budget)?;
    let generators: Vec<_> = oracle
        .bindings()
        .iter()
        .map(|(n, p)| (n.clone(), p.clone()))
        .collect();
    let lattice = ProjectionLattice::generate(doc.space()?, generators, doc.budget)?;
    Ok(Outcome::ok(json!({
        "atoms": oracle.bindings().keys().collect::<Vec<_>>(),
        "depth": depth,
        "enumerated": fs.enumerated,
        "closure_added": fs.closure_added,
        "classes": fs.classes,
        "structure": fs.structure,
        "diagnostics": diagnostics(&fs.structure),
        "generated_lattice": lattice.elements().iter().map(|(n, _)| n).collect::<Vec<_>>(),
        "isomorphism": order_isomorphic(&fs.structure, &lattice.to_ortho_structure()),
    })))
}

fn classical_or_synthesized(arg: &ModelArg, s: Settings) -> Result<ClassicalModel> {
    if Source::open(&arg.model)?.is_hilbert()? {
        Ok(input::mu_model(&arg.model, s)?.base().clone())
    } else {
        input::classical(&arg.model)
    }
}

fn formulas(m: &Signature, a: &str, b: &str) -> Result<(Wff, Wff)> {
    Ok((input::formula(a, m, None)?, input::formula(b, m, None)?))
}

fn prob(cmd: &ProbCommand, seed: u64, settings: &dyn Fn(usize) -> Settings) -> Result<Outcome> {
    let mu = |arg: &ModelArg| input::mu_model(&arg.model, settings(arg.resolution));
    let value = match cmd {
        ProbCommand::Cond { a, b, model } => {
            let m = classical_or_synthesized(model, settings(model.resolution))?;
            let (wa, wb) = formulas(m.signature(), a, b)?;
            json!({"a": print(&wa), "b": print(&wb), "value": Prob(cond_prob(&wa, &wb, &m)?)})
        }
        ProbCommand::Mean { a, b, model } => {
            let m = mu(model)?;
            let (wa, wb) = formulas(m.signature(), a, b)?;
            let testability = json!({
                "a": testable(&wa, &m)?,
                "b": testable(&wb, &m)?,
                "joint": jointly_testable(&wa, &wb, &m)?,
            });
            let report = mean_cond_prob(&wa, &wb, &m)?;
            json!({"a": print(&wa), "b": print(&wb), "testable": testability, "value": report.value, "report": report})
        }
        ProbCommand::Q {
            model,
            states,
            properties,
            lattice,
        } => {
            let m = mu(model)?;
            if let Some(spec) = lattice {
                let spec: MeasureLatticeSpec = Source::open(spec)?.json()?;
                let report = generalized_measure_check(&m, &spec)?;
                return Ok(Outcome::ok(
                    serde_json::to_value(report).expect("serializable"),
                ));
            }
            return q_table(&m, states, properties);
        }
        ProbCommand::CondQ {
            e,
            f,
            state,
            model,
            draw,
            collapse,
        } => {
            let mut m = mu(model)?;
            if *collapse {
                m = collapse_contexts(&m)?;
            }
            let draw = match draw {
                DrawArg::Independent => ContextDraw::Independent,
                DrawArg::Shared => ContextDraw::Shared,
            };
            let report = conditional_q_prob(e, f, state, &m, draw)?;
            json!({
                "e": e,
                "f": f,
                "state": state,
                "draw": draw,
                "collapsed": collapse,
                "compatible": compatibility(e, f, &m)?,
                "report": report,
            })
        }
        ProbCommand::Synthesize {
            file,
            resolution,
            no_closure,
            max_states,
            model_out,
        } => {
            let s = settings(*resolution);
            let doc = input::hilbert(file, s)?;
            let syn = input::synthesize(&doc, s, !no_closure, *max_states)?;
            if let Some(path) = model_out {
                let text = serde_json::to_string_pretty(&syn.model.to_doc()).expect("serializable");
                std::fs::write(path, text + "\n")
                    .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            }
            let transitions: Vec<_> = syn
                .model
                .transitions()
                .iter()
                .map(|((p, s), post)| json!({"property": p, "state": s, "post": post}))
                .collect();
            json!({
                "resolution": resolution,
                "objects": syn.model.base().universe().len(),
                "contexts": syn.model.signature().contexts().count(),
                "states": syn.states.iter().map(|(n, _)| n).collect::<Vec<_>>(),
                "added_states": syn.added_states,
                "transitions": transitions,
                "truncated": syn.truncated,
                "max_deviation": syn.max_deviation,
                "deviations": syn.deviations,
            })
        }
        ProbCommand::Sample {
            a,
            b,
            model,
            trials,
        } => {
            let m = mu(model)?;
            let (wa, wb) = formulas(m.signature(), a, b)?;
            let r = mean_probability_measurement(&wa, &wb, &m, *trials, seed)?;
            let error = (r.frequency - r.mean.to_f64()).abs();
            json!({"a": print(&wa), "b": print(&wb), "sample": r, "abs_error": error})
        }
    };
    Ok(Outcome::ok(value))
}

fn q_table(m: &MuContextModel, states: &[String], properties: &[String]) -> Result<Outcome> {
    let sig = m.signature();
    let pick = |wanted: &[String], all: Vec<String>, what: &str| -> Result<Vec<String>> {
        if wanted.is_empty() {
            return Ok(all);
        }
        for w in wanted {
            if !all.contains(w) {
                return Err(CliError::input(format!("unknown {what} `{w}`")));
            }
        }
        Ok(wanted.to_vec())
    };
    let states = pick(states, sig.states().map(String::from).collect(), "state")?;
    let properties = pick(
        properties,
        sig.properties().map(String::from).collect(),
        "property",
    )?;
    if let ([s], [p]) = (states.as_slice(), properties.as_slice()) {
        let report = q_probability(p, s, m)?;
        return Ok(Outcome::ok(
            json!({"state": s, "property": p, "value": report.value, "report": report}),
        ));
    }
    let mut table = Map::new();
    let mut violation = false;
    for s in &states {
        let mut row = Map::new();
        for p in &properties {
            let report = match q_probability(p, s, m) {
                Ok(r) => r,
                Err(ProbabilityError::TPrimeViolation(r)) => {
                    violation = true;
                    *r
                }
                Err(e) => return Err(e.into()),
            };
            row.insert(
                p.clone(),
                json!({"value": report.value, "spread": report.spread, "in_t_prime": report.in_t_prime}),
            );
        }
        table.insert(s.clone(), Value::Object(row));
    }
    Ok(Outcome {
        value: json!({"states": states, "properties": properties, "table": table}),
        status: violation.then_some(Kind::TPrime),
    })
}

/// Re-checks every witness the solver returned.
fn verified(r: &SolveResult, sys: &ObservableConstraintSystem) -> Result<Option<bool>> {
    Ok(match r.mode {
        Mode::Mcp => match &r.assignment {
            Some(a) => Some(
                sys.laws()
                    .iter()
                    .map(|l| check_law(a, l, sys))
                    .collect::<std::result::Result<Vec<_>, _>>()?
                    .into_iter()
                    .all(|b| b),
            ),
            None => None,
        },
        Mode::Mgp => {
            let mut all = true;
            for (law, res) in sys.laws().iter().zip(&r.per_law) {
                if let Some(w) = &res.witness {
                    all &= check_law(w, law, sys)?;
                }
            }
            Some(all)
        }
    })
}

fn ks(cmd: &KsCommand, budget: u64) -> Result<Outcome> {
    match cmd {
        KsCommand::Solve {
            instance,
            mode,
            audit,
        } => {
            let sys = input::constraint_system(instance)?;
            let r = match Mode::from(*mode) {
                Mode::Mcp => mcp_solve(&sys, budget, *audit),
                Mode::Mgp => mgp_check(&sys),
            };
            let mut value = serde_json::to_value(&r).expect("serializable");
            value["verified"] = json!(verified(&r, &sys)?);
            Ok(Outcome {
                value,
                status: (r.status == Status::BudgetExhausted).then_some(Kind::Budget),
            })
        }
        KsCommand::Report { instance } => {
            let sys = input::constraint_system(instance)?;
            let report = contextuality_report(&sys, budget);
            let inconclusive = report.classification == Classification::Inconclusive;
            Ok(Outcome {
                value: serde_json::to_value(report).expect("serializable"),
                status: inconclusive.then_some(Kind::Budget),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ql_bridge_core::language::Atom;

    #[test]
    fn coverage_names_are_unique() {
        let mut seen = std::collections::BTreeSet::new();
        for (op, _) in OPERATION_COVERAGE {
            assert!(seen.insert(*op), "{op}");
        }
    }

    #[test]
    fn atoms_resolve_in_fixture_signatures() {
        let sig = input::signature("qubit_model").unwrap();
        assert!(Atom::from_key("Ez[m0]", &sig).is_ok());
    }
}
