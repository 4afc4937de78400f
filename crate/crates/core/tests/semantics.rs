use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use proptest::prelude::*;
use ql_bridge_core::language::{Atom, Fragment, Signature, Wff};
use ql_bridge_core::order::lattice_diagnostics;
use ql_bridge_core::random::{self, ModelBounds};
use ql_bridge_core::semantics::{
    c_truth, complement_ortho, concrete_logic, evaluate, extension, logical_preorder,
    logically_equivalent, physical_preorder, physically_equivalent, verifiable_wffs,
    ClassicalModel, VerifiabilityOverride,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn complement(mut s: FixedBitSet) -> FixedBitSet {
    s.toggle_range(..);
    s
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn extension_is_a_boolean_homomorphism(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random::classical_model(&mut rng, ModelBounds::default());
        let a = random::wff(&mut rng, m.signature(), 3, Fragment::Basic);
        let b = random::wff(&mut rng, m.signature(), 3, Fragment::Basic);
        let (ea, eb) = (extension(&a, &m).unwrap(), extension(&b, &m).unwrap());
        prop_assert_eq!(extension(&Wff::not(a.clone()), &m).unwrap(), complement(ea.clone()));
        let mut and = ea.clone();
        and.intersect_with(&eb);
        prop_assert_eq!(extension(&Wff::and(a.clone(), b.clone()), &m).unwrap(), and);
        let mut or = ea.clone();
        or.union_with(&eb);
        prop_assert_eq!(extension(&Wff::or(a.clone(), b.clone()), &m).unwrap(), or);
        let mut imp = complement(ea.clone());
        imp.union_with(&eb);
        prop_assert_eq!(extension(&Wff::implies(a.clone(), b), &m).unwrap(), imp);
        for o in 0..m.universe().len() {
            prop_assert_eq!(evaluate(&a, &m, o).unwrap(), ea.contains(o));
        }
    }

    #[test]
    fn truth_depends_only_on_atom_values(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut m = random::classical_model(&mut rng, ModelBounds::default());
        let atoms = m.signature().atoms();
        let from = atoms[rng.random_range(0..atoms.len())].clone();
        let to = atoms[rng.random_range(0..atoms.len())].clone();
        let shared = m.atom_extension(&from).unwrap();
        m.set_extension(to.clone(), shared).unwrap();
        let w = random::wff(&mut rng, m.signature(), 4, Fragment::Basic);
        let swapped = w.map_atoms(&|leaf| {
            if leaf.as_atom().as_ref() == Some(&from) { Wff::from_atom(&to) } else { leaf.clone() }
        });
        prop_assert_eq!(extension(&w, &m).unwrap(), extension(&swapped, &m).unwrap());
    }

    #[test]
    fn logical_order_implies_physical_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random::classical_model(&mut rng, ModelBounds::default());
        for _ in 0..8 {
            let a = random::state_free_wff(&mut rng, m.signature(), 3);
            let b = random::state_free_wff(&mut rng, m.signature(), 3);
            if logical_preorder(&a, &b, &m).unwrap() {
                prop_assert!(physical_preorder(&a, &b, &m).unwrap());
            }
            if logically_equivalent(&a, &b, &m).unwrap() {
                prop_assert!(physically_equivalent(&a, &b, &m).unwrap());
            }
            for s in m.signature().states() {
                prop_assert_eq!(
                    c_truth(&a, s, &m).unwrap().is_certainly_true(),
                    logical_preorder(&Wff::state(s), &a, &m).unwrap()
                );
            }
        }
    }

    /// Deterministic models: one state per object, every formula verifiable.
    #[test]
    fn deterministic_models_have_boolean_concrete_logic(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=3usize);
        let states: Vec<String> = (0..n).map(|i| format!("S{i}")).collect();
        let props: Vec<String> = (0..n).map(|i| format!("E{i}")).collect();
        let sig = Signature::new(states.clone(), props.clone(), Vec::<String>::new(), BTreeMap::new()).unwrap();
        let universe: Vec<String> = (0..n).map(|i| format!("u{i}")).collect();
        let mut m = ClassicalModel::new(sig, universe).unwrap();
        for i in 0..n {
            let mut one = FixedBitSet::with_capacity(n);
            one.insert(i);
            m.set_extension(Atom::State(states[i].clone()), one.clone()).unwrap();
            m.set_extension(Atom::Property(props[i].clone()), one).unwrap();
        }
        let mut candidates: Vec<Wff> = (0u32..1 << n)
            .map(|mask| {
                let members: Vec<Wff> = (0..n)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| Wff::property(props[i].clone()))
                    .collect();
                members
                    .into_iter()
                    .reduce(Wff::or)
                    .unwrap_or_else(|| Wff::and(Wff::property("E0"), Wff::not(Wff::property("E0"))))
            })
            .collect();
        let shift = rng.random_range(0..candidates.len());
        candidates.rotate_left(shift);
        let all = VerifiabilityOverride { add: candidates.clone(), remove: vec![] };
        let phi_v = verifiable_wffs(&candidates, &m, Some(&all)).unwrap();
        let ortho = complement_ortho(&m, &phi_v).unwrap();
        let logic = concrete_logic(&m, &phi_v, &ortho).unwrap();
        let report = lattice_diagnostics(&logic).unwrap();
        prop_assert!(report.boolean);
        prop_assert_eq!(report.classes, 1usize << n);
    }
}

#[test]
fn physical_order_is_strictly_weaker_on_a_witness() {
    let sig = Signature::new(["S1"], ["E1", "E2"], Vec::<String>::new(), BTreeMap::new()).unwrap();
    let mut m = ClassicalModel::new(sig, vec!["u1".into(), "u2".into(), "u3".into()]).unwrap();
    let set = |ix: &[usize]| {
        let mut s = FixedBitSet::with_capacity(3);
        ix.iter().for_each(|&i| s.insert(i));
        s
    };
    m.set_extension(Atom::State("S1".into()), set(&[0]))
        .unwrap();
    m.set_extension(Atom::Property("E1".into()), set(&[0, 1]))
        .unwrap();
    m.set_extension(Atom::Property("E2".into()), set(&[0, 2]))
        .unwrap();
    let (e1, e2) = (Wff::property("E1"), Wff::property("E2"));
    assert!(physical_preorder(&e1, &e2, &m).unwrap());
    assert!(!logical_preorder(&e1, &e2, &m).unwrap());
}
