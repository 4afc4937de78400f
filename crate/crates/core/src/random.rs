//! Random instances for property tests and the acceptance suite.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::contextuality::{Context, Law, LawForm, Observable, ObservableConstraintSystem};
use crate::language::{Atom, Fragment, Signature, Wff};
use crate::pragmatics::AssertiveFormula;
use crate::probability::{MuContextModel, Procedure, DEFAULT_TOLERANCE};
use crate::semantics::{ClassicalModel, Measure};

/// Size bounds for random classical models.
#[derive(Debug, Clone, Copy)]
pub struct ModelBounds {
    pub max_objects: usize,
    pub max_states: usize,
    pub max_properties: usize,
    pub max_contexts: usize,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            max_objects: 8,
            max_states: 4,
            max_properties: 5,
            max_contexts: 2,
        }
    }
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn random_set<R: Rng + ?Sized>(rng: &mut R, n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    for i in 0..n {
        s.set(i, rng.random_bool(0.5));
    }
    s
}

fn random_measure<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Measure {
    if rng.random_bool(0.3) {
        Measure::uniform(n)
    } else {
        let masses = (0..n)
            .map(|_| BigInt::from(rng.random_range(1..=6u32)))
            .collect();
        Measure::from_masses(masses).expect("positive masses")
    }
}

fn fill_extensions<R: Rng + ?Sized>(rng: &mut R, m: &mut ClassicalModel) {
    let n = m.universe().len();
    for atom in m.signature().atoms() {
        m.set_extension(atom, random_set(rng, n))
            .expect("declared atom");
    }
}

/// A model with random extensions for every atom and random positive
/// object weights.
pub fn classical_model<R: Rng + ?Sized>(rng: &mut R, bounds: ModelBounds) -> ClassicalModel {
    let objects = rng.random_range(1..=bounds.max_objects);
    let states = rng.random_range(1..=bounds.max_states);
    let properties = rng.random_range(1..=bounds.max_properties);
    let contexts = rng.random_range(0..=bounds.max_contexts);
    let sig = Signature::new(
        names("S", states),
        names("E", properties),
        names("c", contexts),
        BTreeMap::new(),
    )
    .expect("generated names are valid");
    let mut m = ClassicalModel::new(sig, names("u", objects)).expect("nonempty universe");
    m.set_measure(random_measure(rng, objects))
        .expect("sized measure");
    fill_extensions(rng, &mut m);
    m
}

/// A random formula of nesting depth at most `depth` in the given
/// alphabet: plain property atoms and `->` in the basic one, contextual
/// atoms and no `->` in the contextual one.
pub fn wff<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, depth: usize, fragment: Fragment) -> Wff {
    let contextual = fragment == Fragment::Contextual;
    let atoms: Vec<Atom> = sig
        .atoms()
        .into_iter()
        .filter(|a| match a {
            Atom::State(_) => true,
            Atom::Property(_) => !contextual,
            Atom::Contextual { .. } => contextual,
        })
        .collect();
    wff_from(rng, &atoms, depth, !contextual)
}

/// A random formula over property atoms only, as the preorders require.
pub fn state_free_wff<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, depth: usize) -> Wff {
    let atoms: Vec<Atom> = sig
        .atoms()
        .into_iter()
        .filter(|a| matches!(a, Atom::Property(_)))
        .collect();
    wff_from(rng, &atoms, depth, true)
}

fn wff_from<R: Rng + ?Sized>(rng: &mut R, atoms: &[Atom], depth: usize, implies: bool) -> Wff {
    if depth == 0 || rng.random_bool(0.3) {
        return Wff::from_atom(atoms.choose(rng).expect("nonempty signature"));
    }
    let sub = |rng: &mut R| wff_from(rng, atoms, depth - 1, implies);
    match rng.random_range(0..if implies { 4 } else { 3 }) {
        0 => Wff::not(sub(rng)),
        1 => Wff::and(sub(rng), sub(rng)),
        2 => Wff::or(sub(rng), sub(rng)),
        _ => Wff::implies(sub(rng), sub(rng)),
    }
}

/// A random assertive formula of connective depth at most `depth` whose
/// radicals are formulas over the given properties.
pub fn assertive<R: Rng + ?Sized>(
    rng: &mut R,
    properties: &[String],
    depth: usize,
) -> AssertiveFormula {
    if depth == 0 || rng.random_bool(0.3) {
        let atoms: Vec<Atom> = properties.iter().cloned().map(Atom::Property).collect();
        let radical_depth = rng.random_range(0..=2);
        return AssertiveFormula::assert(wff_from(rng, &atoms, radical_depth, true));
    }
    let sub = |rng: &mut R| assertive(rng, properties, depth - 1);
    match rng.random_range(0..5) {
        0 => AssertiveFormula::n(sub(rng)),
        1 => AssertiveFormula::k(sub(rng), sub(rng)),
        2 => AssertiveFormula::a(sub(rng), sub(rng)),
        3 => AssertiveFormula::c(sub(rng), sub(rng)),
        _ => AssertiveFormula::e(sub(rng), sub(rng)),
    }
}

fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<BigRational> {
    let raw: Vec<i64> = (0..n).map(|_| rng.random_range(1..=5)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter()
        .map(|x| BigRational::new(x.into(), total.into()))
        .collect()
}

/// A mu-contextual model: random classical data plus a pool of
/// procedures, each with its own mu-contexts and rational weights, shared
/// among properties at random.
pub fn mu_context_model<R: Rng + ?Sized>(rng: &mut R, bounds: ModelBounds) -> MuContextModel {
    let objects = rng.random_range(1..=bounds.max_objects);
    let states = rng.random_range(1..=bounds.max_states);
    let n_props = rng.random_range(1..=bounds.max_properties);
    let n_ctx = rng.random_range(1..=bounds.max_contexts.max(1));
    let contexts = names("c", n_ctx);
    let pool = names("M", rng.random_range(1..=3));
    let properties = names("E", n_props);
    let mut assigned = BTreeMap::new();
    for p in &properties {
        let k = rng.random_range(1..=pool.len());
        let mut chosen: Vec<String> = pool.choose_multiple(rng, k).cloned().collect();
        chosen.sort();
        assigned.insert(p.clone(), chosen);
    }
    let sig = Signature::new(names("S", states), properties, contexts.clone(), assigned)
        .expect("generated names are valid");
    let mut base = ClassicalModel::new(sig, names("u", objects)).expect("nonempty universe");
    base.set_measure(random_measure(rng, objects))
        .expect("sized measure");
    fill_extensions(rng, &mut base);
    let procedures = pool
        .iter()
        .map(|name| {
            let k = rng.random_range(1..=contexts.len());
            let mut chosen: Vec<String> = contexts.choose_multiple(rng, k).cloned().collect();
            chosen.sort();
            let q = random_distribution(rng, chosen.len());
            let procedure = Procedure {
                macro_context: format!("{name}_macro"),
                contexts: chosen,
                q,
            };
            (name.clone(), procedure)
        })
        .collect();
    MuContextModel::new(base, procedures, DEFAULT_TOLERANCE).expect("consistent procedures")
}

/// A small constraint system: up to five observables, three contexts and
/// four laws of any supported form.
pub fn constraint_system<R: Rng + ?Sized>(rng: &mut R) -> ObservableConstraintSystem {
    let n = rng.random_range(2..=5);
    let parity = rng.random_bool(0.5);
    let observables: Vec<Observable> = names("o", n)
        .into_iter()
        .map(|name| Observable {
            name,
            domain: if parity { vec![1, -1] } else { vec![0, 1, 2] },
        })
        .collect();
    let obs_names: Vec<String> = observables.iter().map(|o| o.name.clone()).collect();
    let contexts: Vec<Context> = (0..rng.random_range(1..=3))
        .map(|i| {
            let k = rng.random_range(1..=n.min(3));
            let mut chosen: Vec<String> = obs_names.choose_multiple(rng, k).cloned().collect();
            chosen.sort();
            Context {
                name: format!("C{i}"),
                observables: chosen,
            }
        })
        .collect();
    let laws = (0..rng.random_range(0..=4))
        .map(|i| {
            let ctx = contexts.choose(rng).expect("at least one context");
            let k = rng.random_range(1..=ctx.observables.len());
            let mut chosen = ctx.observables.clone();
            chosen.shuffle(rng);
            chosen.truncate(k);
            let form = match rng.random_range(0..3) {
                0 if parity => LawForm::Product {
                    target: if rng.random_bool(0.5) { 1 } else { -1 },
                },
                1 => {
                    let coefficients = rng
                        .random_bool(0.5)
                        .then(|| (0..k).map(|_| rng.random_range(-2..=2)).collect());
                    LawForm::Sum {
                        target: rng.random_range(-2..=3),
                        coefficients,
                    }
                }
                _ => {
                    let dom: &[i64] = if parity { &[1, -1] } else { &[0, 1, 2] };
                    let rows = (0..rng.random_range(0..=3))
                        .map(|_| {
                            (0..k)
                                .map(|_| *dom.choose(rng).expect("nonempty"))
                                .collect()
                        })
                        .collect();
                    LawForm::Table { allowed: rows }
                }
            };
            Law {
                name: format!("L{i}"),
                context: ctx.name.clone(),
                observables: chosen,
                form,
            }
        })
        .collect();
    ObservableConstraintSystem::new(observables, contexts, laws).expect("generated system is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let m = classical_model(&mut rng, ModelBounds::default());
            assert!(m.universe().len() <= 8);
            assert!(m.signature().states().count() <= 4);
            assert!(m.signature().properties().count() <= 5);
            let w = wff(&mut rng, m.signature(), 4, Fragment::Contextual);
            assert!(w.depth() <= 4);
            mu_context_model(&mut rng, ModelBounds::default());
            constraint_system(&mut rng);
        }
    }
}
