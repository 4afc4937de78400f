use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use ql_bridge_core::hilbert::{born, qubit, HilbertSpace, QuantumState};
use ql_bridge_core::language::{Fragment, Wff};
use ql_bridge_core::probability::{
    born_model_synthesize, collapse_contexts, compatibility, cond_prob, conditional_q_prob,
    jointly_testable, mean_cond_prob, ContextDraw, ProbabilityError, SynthesisOptions,
};
use ql_bridge_core::random::{self, ModelBounds};
use ql_bridge_core::semantics::{evaluate, logical_preorder, ClassicalModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `μ(a ∧ b) / μ(b)` by summing object weights one by one.
fn direct(a: &Wff, b: &Wff, m: &ClassicalModel) -> Option<BigRational> {
    let (mut num, mut den) = (BigRational::zero(), BigRational::zero());
    for o in 0..m.universe().len() {
        if evaluate(b, m, o).unwrap() {
            den += m.measure().weight(o);
            if evaluate(a, m, o).unwrap() {
                num += m.measure().weight(o);
            }
        }
    }
    (!den.is_zero()).then(|| num / den)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn conditional_probability_is_kolmogorov(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mm = random::mu_context_model(&mut rng, ModelBounds::default());
        let m = mm.base();
        let sig = m.signature();
        let a = random::wff(&mut rng, sig, 3, Fragment::Contextual);
        let b = random::wff(&mut rng, sig, 3, Fragment::Contextual);
        let c = random::wff(&mut rng, sig, 2, Fragment::Contextual);
        let Some(expected) = direct(&a, &c, m) else {
            prop_assert!(matches!(cond_prob(&a, &c, m), Err(ProbabilityError::ZeroMeasure(_))));
            return Ok(());
        };
        let p = |x: &Wff| cond_prob(x, &c, m).unwrap();
        prop_assert_eq!(p(&a), expected);
        prop_assert!(p(&a) >= BigRational::zero());
        prop_assert_eq!(p(&c), BigRational::one());
        prop_assert_eq!(p(&Wff::not(a.clone())), BigRational::one() - p(&a));
        let disjoint = Wff::and(b.clone(), Wff::not(a.clone()));
        prop_assert_eq!(p(&Wff::or(a.clone(), disjoint.clone())), p(&a) + p(&disjoint));
        let bc = Wff::and(b.clone(), c.clone());
        if let Ok(given_bc) = cond_prob(&a, &bc, m) {
            prop_assert_eq!(p(&Wff::and(a.clone(), b.clone())), given_bc * p(&b));
        }
        if logical_preorder(&a, &b, m).unwrap() {
            prop_assert!(p(&a) <= p(&b));
        }
    }

    #[test]
    fn compatibility_is_reflexive_and_symmetric(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random::mu_context_model(&mut rng, ModelBounds::default());
        let props: Vec<String> = m.signature().properties().map(String::from).collect();
        for e in &props {
            prop_assert!(compatibility(e, e, &m).unwrap());
            for f in &props {
                prop_assert_eq!(compatibility(e, f, &m).unwrap(), compatibility(f, e, &m).unwrap());
            }
        }
    }

    #[test]
    fn one_context_restores_classical_probability(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = collapse_contexts(&random::mu_context_model(&mut rng, ModelBounds::default())).unwrap();
        let sig = m.signature().clone();
        let a = random::wff(&mut rng, &sig, 2, Fragment::Contextual);
        let b = random::wff(&mut rng, &sig, 2, Fragment::Contextual);
        if jointly_testable(&a, &b, &m).unwrap() {
            if let Ok(classical) = cond_prob(&a, &b, m.base()) {
                prop_assert_eq!(mean_cond_prob(&a, &b, &m).unwrap().value.0, classical);
            }
        }
        let props: Vec<String> = sig.properties().map(String::from).collect();
        let states: Vec<String> = sig.states().map(String::from).collect();
        let e = &props[rng.random_range(0..props.len())];
        let f = &props[rng.random_range(0..props.len())];
        let s = &states[rng.random_range(0..states.len())];
        match conditional_q_prob(e, f, s, &m, ContextDraw::Independent) {
            Ok(r) => {
                if r.reverse.is_some() {
                    prop_assert!(r.bayes_gap.0.is_zero());
                }
            }
            Err(ProbabilityError::EmptyPostSelection { .. } | ProbabilityError::ZeroMeasure(_)) => {}
            Err(other) => prop_assert!(false, "{other}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn synthesis_stays_within_the_grid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let resolution = 200;
        let states: Vec<(String, QuantumState)> = (0..2)
            .map(|i| (format!("S{i}"), QuantumState::haar_random(2, &mut rng)))
            .collect();
        let properties: Vec<_> = (0..2)
            .map(|i| (format!("E{i}"), qubit::proj(&qubit::spin(rng.random_range(0.0..std::f64::consts::PI)))))
            .collect();
        let opts = SynthesisOptions { resolution, max_states: 8, ..SynthesisOptions::default() };
        let syn = born_model_synthesize(&HilbertSpace::qubit(), &states, &properties, opts).unwrap();
        prop_assert!(syn.max_deviation <= 1.0 / resolution as f64);
        for d in &syn.deviations {
            let s = &syn.states.iter().find(|(n, _)| n == &d.state).unwrap().1;
            let p = &properties.iter().find(|(n, _)| n == &d.property).unwrap().1;
            prop_assert!((born(s, p).unwrap() - d.born).abs() < 1e-12);
        }
    }
}
