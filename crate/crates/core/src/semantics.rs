//! Classical finite-model semantics.
//!
//! An interpretation of `x` is the choice of one object of the universe, so
//! a formula is fully described by its extension. Everything below is
//! computed by exhaustive quantification over the finite universe and the
//! finite set of states.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::language::{Atom, Fragment, LanguageError, Signature, Wff};
use crate::order::{OrderError, OrthoStructure, OrthoViolation};

pub type ObjectSet = FixedBitSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("`{0}` contains a state atom; only state-free formulas are allowed here")]
    StateAtom(String),
    #[error("ortho map is not closed: `{0}` has no image among the verifiable formulas")]
    OrthoNotClosed(String),
    #[error("weak orthocomplementation fails ({} violation(s))", .0.len())]
    OrthoViolations(Vec<OrthoViolation>),
}

pub type Result<T> = std::result::Result<T, SemanticsError>;

/// Parses `"3"`, `"1/3"` or `"0.25"` into an exact rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(digits, scale));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Object weights held as integer masses over a common denominator, so
/// that measures of sets are integer sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    masses: Vec<BigInt>,
    total: BigInt,
    uniform: bool,
}

impl Measure {
    pub fn uniform(n: usize) -> Self {
        Measure {
            masses: vec![BigInt::one(); n],
            total: BigInt::from(n),
            uniform: true,
        }
    }

    pub fn from_weights(weights: &[BigRational]) -> Result<Self> {
        if weights.is_empty() {
            return Err(SemanticsError::InvalidWeights("empty universe".into()));
        }
        if weights.iter().any(|w| *w < BigRational::zero()) {
            return Err(SemanticsError::InvalidWeights("negative weight".into()));
        }
        let sum: BigRational = weights.iter().sum();
        if sum != BigRational::one() {
            return Err(SemanticsError::InvalidWeights(format!(
                "weights sum to {sum}, not 1"
            )));
        }
        let mut denom = BigInt::one();
        for w in weights {
            let d = w.denom();
            denom = num_integer_lcm(&denom, d);
        }
        let masses = weights
            .iter()
            .map(|w| w.numer() * (&denom / w.denom()))
            .collect();
        Ok(Measure::build(masses, denom))
    }

    /// Integer masses proportional to the weights; need not sum to one.
    pub fn from_masses(masses: Vec<BigInt>) -> Result<Self> {
        if masses.iter().any(|m| m < &BigInt::zero()) {
            return Err(SemanticsError::InvalidWeights("negative mass".into()));
        }
        let total: BigInt = masses.iter().sum();
        if total.is_zero() {
            return Err(SemanticsError::InvalidWeights("zero total mass".into()));
        }
        Ok(Measure::build(masses, total))
    }

    fn build(masses: Vec<BigInt>, total: BigInt) -> Self {
        let uniform = masses.windows(2).all(|w| w[0] == w[1]);
        Measure {
            masses,
            total,
            uniform,
        }
    }

    /// All objects carry the same weight.
    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn weight(&self, object: usize) -> BigRational {
        BigRational::new(self.masses[object].clone(), self.total.clone())
    }

    pub fn mass(&self, object: usize) -> &BigInt {
        &self.masses[object]
    }

    pub fn mass_of(&self, set: &ObjectSet) -> BigInt {
        if self.uniform {
            return match self.masses.first() {
                Some(m) => m * BigInt::from(set.count_ones(..)),
                None => BigInt::zero(),
            };
        }
        set.ones().map(|i| &self.masses[i]).sum()
    }

    pub fn of(&self, set: &ObjectSet) -> BigRational {
        BigRational::new(self.mass_of(set), self.total.clone())
    }

    /// `μ(a ∩ b) / μ(b)`, or `None` when `μ(b) = 0`.
    pub fn conditional(&self, a: &ObjectSet, b: &ObjectSet) -> Option<BigRational> {
        let denom = self.mass_of(b);
        if denom.is_zero() {
            return None;
        }
        let mut both = a.clone();
        both.intersect_with(b);
        Some(BigRational::new(self.mass_of(&both), denom))
    }
}

fn num_integer_lcm(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}

/// A finite classical model: universe, atom extensions and object weights.
#[derive(Debug, Clone)]
pub struct ClassicalModel {
    signature: Signature,
    universe: Vec<String>,
    extensions: BTreeMap<Atom, ObjectSet>,
    measure: Measure,
}

/// Serialized form of a [`ClassicalModel`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelDoc {
    pub signature: Signature,
    pub universe: Vec<String>,
    /// Object weights as rational strings; uniform when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
    /// Atom key (`S`, `E` or `E[c]`) to member objects.
    #[serde(default)]
    pub extensions: BTreeMap<String, Vec<String>>,
}

impl ClassicalModel {
    /// A model with every extension empty and uniform weights.
    pub fn new(signature: Signature, universe: Vec<String>) -> Result<Self> {
        if universe.is_empty() {
            return Err(SemanticsError::InvalidWeights("empty universe".into()));
        }
        let measure = Measure::uniform(universe.len());
        Ok(ClassicalModel {
            signature,
            universe,
            extensions: BTreeMap::new(),
            measure,
        })
    }

    pub fn from_doc(doc: ModelDoc) -> Result<Self> {
        let mut m = ClassicalModel::new(doc.signature, doc.universe)?;
        if let Some(w) = doc.weights {
            let mut weights = vec![BigRational::zero(); m.universe.len()];
            for (obj, value) in &w {
                let i = m.object_index(obj)?;
                weights[i] = parse_rational(value).ok_or_else(|| {
                    SemanticsError::InvalidWeights(format!("`{value}` is not a rational"))
                })?;
            }
            m.measure = Measure::from_weights(&weights)?;
        }
        for (key, members) in &doc.extensions {
            let atom = Atom::from_key(key, &m.signature)?;
            let mut set = m.empty_set();
            for obj in members {
                set.insert(m.object_index(obj)?);
            }
            m.extensions.insert(atom, set);
        }
        Ok(m)
    }

    pub fn to_doc(&self) -> ModelDoc {
        let uniform = Measure::uniform(self.universe.len());
        let weights =
            if (0..self.universe.len()).all(|i| self.measure.weight(i) == uniform.weight(i)) {
                None
            } else {
                Some(
                    self.universe
                        .iter()
                        .enumerate()
                        .map(|(i, u)| (u.clone(), self.measure.weight(i).to_string()))
                        .collect(),
                )
            };
        ModelDoc {
            signature: self.signature.clone(),
            universe: self.universe.clone(),
            weights,
            extensions: self
                .extensions
                .iter()
                .filter(|(_, set)| set.count_ones(..) > 0)
                .map(|(atom, set)| {
                    (
                        atom.key(),
                        set.ones().map(|i| self.universe[i].clone()).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn measure(&self) -> &Measure {
        &self.measure
    }

    pub fn set_measure(&mut self, measure: Measure) -> Result<()> {
        if measure.len() != self.universe.len() {
            return Err(SemanticsError::InvalidWeights(format!(
                "{} weights for {} objects",
                measure.len(),
                self.universe.len()
            )));
        }
        self.measure = measure;
        Ok(())
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.universe
            .iter()
            .position(|u| u == name)
            .ok_or_else(|| SemanticsError::UnknownObject(name.to_string()))
    }

    pub fn empty_set(&self) -> ObjectSet {
        FixedBitSet::with_capacity(self.universe.len())
    }

    pub fn full_set(&self) -> ObjectSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// Sets the extension of a signature atom.
    pub fn set_extension(&mut self, atom: Atom, members: ObjectSet) -> Result<()> {
        self.check_atom(&atom)?;
        assert_eq!(members.len(), self.universe.len(), "object set size");
        self.extensions.insert(atom, members);
        Ok(())
    }

    fn check_atom(&self, atom: &Atom) -> Result<()> {
        match atom {
            Atom::State(s) => self.signature.require_state(s)?,
            Atom::Property(p) => self.signature.require_property(p)?,
            Atom::Contextual { property, context } => {
                self.signature.require_property(property)?;
                self.signature.require_context(context)?;
            }
        }
        Ok(())
    }

    /// Extension of an atom; atoms never assigned have empty extension.
    pub fn atom_extension(&self, atom: &Atom) -> Result<ObjectSet> {
        self.check_atom(atom)?;
        Ok(self
            .extensions
            .get(atom)
            .cloned()
            .unwrap_or_else(|| self.empty_set()))
    }

    pub fn assigned_atoms(&self) -> impl Iterator<Item = (&Atom, &ObjectSet)> {
        self.extensions.iter()
    }

    pub fn parse(&self, text: &str, fragment: Fragment) -> Result<Wff> {
        Ok(crate::language::parse(text, &self.signature, fragment)?)
    }
}

/// `ext(w)`: the set of objects at which `w` is true.
pub fn extension(w: &Wff, m: &ClassicalModel) -> Result<ObjectSet> {
    Ok(match w {
        Wff::Not(a) => {
            let mut s = extension(a, m)?;
            s.toggle_range(..);
            s
        }
        Wff::And(a, b) => {
            let mut s = extension(a, m)?;
            s.intersect_with(&extension(b, m)?);
            s
        }
        Wff::Or(a, b) => {
            let mut s = extension(a, m)?;
            s.union_with(&extension(b, m)?);
            s
        }
        Wff::Implies(a, b) => {
            let mut s = extension(a, m)?;
            s.toggle_range(..);
            s.union_with(&extension(b, m)?);
            s
        }
        leaf => m.atom_extension(&leaf.as_atom().expect("leaf"))?,
    })
}

/// `ν_σ(w)` for the interpretation `σ(x) = object`, by the recursive truth
/// tables rather than through extensions.
pub fn evaluate(w: &Wff, m: &ClassicalModel, object: usize) -> Result<bool> {
    Ok(match w {
        Wff::Not(a) => !evaluate(a, m, object)?,
        Wff::And(a, b) => evaluate(a, m, object)? && evaluate(b, m, object)?,
        Wff::Or(a, b) => evaluate(a, m, object)? || evaluate(b, m, object)?,
        Wff::Implies(a, b) => !evaluate(a, m, object)? || evaluate(b, m, object)?,
        leaf => m
            .atom_extension(&leaf.as_atom().expect("leaf"))?
            .contains(object),
    })
}

/// `a < b`: every interpretation making `a` true makes `b` true.
pub fn logical_preorder(a: &Wff, b: &Wff, m: &ClassicalModel) -> Result<bool> {
    Ok(extension(a, m)?.is_subset(&extension(b, m)?))
}

pub fn logically_equivalent(a: &Wff, b: &Wff, m: &ClassicalModel) -> Result<bool> {
    Ok(extension(a, m)? == extension(b, m)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CTruth {
    CertainlyTrue,
    CertainlyFalse,
    Indeterminate,
    /// The state has empty extension: both certainly true and certainly false.
    Vacuous,
}

impl CTruth {
    pub fn is_certainly_true(self) -> bool {
        matches!(self, CTruth::CertainlyTrue | CTruth::Vacuous)
    }

    pub fn is_certainly_false(self) -> bool {
        matches!(self, CTruth::CertainlyFalse | CTruth::Vacuous)
    }
}

fn require_state_free(a: &Wff) -> Result<()> {
    if a.contains_state() {
        Err(SemanticsError::StateAtom(a.to_string()))
    } else {
        Ok(())
    }
}

/// Certain truth of a state-free formula in a state.
pub fn c_truth(a: &Wff, state: &str, m: &ClassicalModel) -> Result<CTruth> {
    require_state_free(a)?;
    let s = m.atom_extension(&Atom::State(state.to_string()))?;
    let e = extension(a, m)?;
    Ok(c_truth_of_sets(&s, &e))
}

fn c_truth_of_sets(state: &ObjectSet, ext: &ObjectSet) -> CTruth {
    if state.count_ones(..) == 0 {
        return CTruth::Vacuous;
    }
    if state.is_subset(ext) {
        CTruth::CertainlyTrue
    } else if state.is_disjoint(ext) {
        CTruth::CertainlyFalse
    } else {
        CTruth::Indeterminate
    }
}

/// The states in which `a` is certainly true (vacuous states included).
pub fn certainly_true_states(a: &Wff, m: &ClassicalModel) -> Result<Vec<String>> {
    require_state_free(a)?;
    let e = extension(a, m)?;
    let mut out = Vec::new();
    for s in m.signature().states() {
        let ext = m.atom_extension(&Atom::State(s.to_string()))?;
        if c_truth_of_sets(&ext, &e).is_certainly_true() {
            out.push(s.to_string());
        }
    }
    Ok(out)
}

/// `a ≺ b`: in every state where `a` is certainly true, so is `b`.
pub fn physical_preorder(a: &Wff, b: &Wff, m: &ClassicalModel) -> Result<bool> {
    require_state_free(a)?;
    require_state_free(b)?;
    let ea = extension(a, m)?;
    let eb = extension(b, m)?;
    for s in m.signature().states() {
        let ext = m.atom_extension(&Atom::State(s.to_string()))?;
        if c_truth_of_sets(&ext, &ea).is_certainly_true()
            && !c_truth_of_sets(&ext, &eb).is_certainly_true()
        {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `a ≈ b`: mutual physical preorder.
pub fn physically_equivalent(a: &Wff, b: &Wff, m: &ClassicalModel) -> Result<bool> {
    Ok(physical_preorder(a, b, m)? && physical_preorder(b, a, m)?)
}

/// Explicit adjustments to the verifiable set, for theories whose
/// testability criteria differ from "equivalent to an elementary formula".
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifiabilityOverride {
    #[serde(default)]
    pub add: Vec<Wff>,
    #[serde(default)]
    pub remove: Vec<Wff>,
}

/// Candidates logically equivalent to some elementary property formula.
pub fn verifiable_wffs(
    candidates: &[Wff],
    m: &ClassicalModel,
    adjust: Option<&VerifiabilityOverride>,
) -> Result<Vec<Wff>> {
    let elementary: Vec<ObjectSet> = m
        .signature()
        .properties()
        .map(|p| m.atom_extension(&Atom::Property(p.to_string())))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for c in candidates {
        require_state_free(c)?;
        if let Some(adj) = adjust {
            if adj.remove.contains(c) {
                continue;
            }
            if adj.add.contains(c) {
                out.push(c.clone());
                continue;
            }
        }
        let e = extension(c, m)?;
        if elementary.contains(&e) {
            out.push(c.clone());
        }
    }
    if let Some(adj) = adjust {
        for a in &adj.add {
            if !out.contains(a) {
                require_state_free(a)?;
                out.push(a.clone());
            }
        }
    }
    Ok(out)
}

/// Builds `(φ_V(x), ≺, ⊥)` and checks the weak orthocomplementation
/// axioms. Any axiom failure is returned with its witnesses.
pub fn concrete_logic(
    m: &ClassicalModel,
    phi_v: &[Wff],
    ortho: &BTreeMap<Wff, Wff>,
) -> Result<OrthoStructure> {
    let n = phi_v.len();
    let mut ortho_idx = Vec::with_capacity(n);
    for w in phi_v {
        require_state_free(w)?;
        let image = ortho
            .get(w)
            .ok_or_else(|| SemanticsError::OrthoNotClosed(w.to_string()))?;
        let j = phi_v
            .iter()
            .position(|v| v == image)
            .ok_or_else(|| SemanticsError::OrthoNotClosed(w.to_string()))?;
        ortho_idx.push(j);
    }
    // the certainly-true state sets decide the whole preorder
    let states: Vec<ObjectSet> = m
        .signature()
        .states()
        .map(|s| m.atom_extension(&Atom::State(s.to_string())))
        .collect::<Result<_>>()?;
    let certain: Vec<Vec<bool>> = phi_v
        .iter()
        .map(|w| {
            let e = extension(w, m)?;
            Ok(states
                .iter()
                .map(|s| c_truth_of_sets(s, &e).is_certainly_true())
                .collect())
        })
        .collect::<Result<_>>()?;
    let leq = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| certain[a].iter().zip(&certain[b]).all(|(&x, &y)| !x || y))
                .collect()
        })
        .collect();
    let labels = phi_v.iter().map(|w| w.to_string()).collect();
    let s = OrthoStructure::new(labels, leq, ortho_idx)?;
    let violations = s.weak_ortho_violations();
    if violations.is_empty() {
        Ok(s)
    } else {
        Err(SemanticsError::OrthoViolations(violations))
    }
}

/// Set-complement ortho for formulas: `w ↦ ~w`, matched up to logical
/// equivalence inside `phi_v`.
pub fn complement_ortho(m: &ClassicalModel, phi_v: &[Wff]) -> Result<BTreeMap<Wff, Wff>> {
    let exts: Vec<ObjectSet> = phi_v
        .iter()
        .map(|w| extension(w, m))
        .collect::<Result<_>>()?;
    let mut map = BTreeMap::new();
    for (i, w) in phi_v.iter().enumerate() {
        let mut comp = exts[i].clone();
        comp.toggle_range(..);
        if let Some(j) = exts.iter().position(|e| *e == comp) {
            map.insert(w.clone(), phi_v[j].clone());
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::language::parse;

    fn model(
        universe: &[&str],
        states: &[&str],
        props: &[&str],
        ext: &[(&str, &[&str])],
    ) -> ClassicalModel {
        let sig = Signature::new(
            states.iter().copied(),
            props.iter().copied(),
            Vec::<String>::new(),
            BTreeMap::new(),
        )
        .unwrap();
        let doc = ModelDoc {
            signature: sig,
            universe: universe.iter().map(|s| s.to_string()).collect(),
            weights: None,
            extensions: ext
                .iter()
                .map(|(k, v)| (k.to_string(), v.iter().map(|s| s.to_string()).collect()))
                .collect(),
        };
        ClassicalModel::from_doc(doc).unwrap()
    }

    fn names(m: &ClassicalModel, s: &ObjectSet) -> Vec<String> {
        s.ones().map(|i| m.universe()[i].clone()).collect()
    }

    fn w(m: &ClassicalModel, text: &str) -> Wff {
        parse(text, m.signature(), Fragment::Basic).unwrap()
    }

    #[test]
    fn extensions_follow_the_truth_tables() {
        let m = model(
            &["u1", "u2", "u3"],
            &[],
            &["E1", "E2"],
            &[("E1", &["u1", "u2"]), ("E2", &["u2", "u3"])],
        );
        assert_eq!(
            extension(&w(&m, "E1(x) | ~E1(x)"), &m).unwrap(),
            m.full_set()
        );
        assert_eq!(
            names(&m, &extension(&w(&m, "E1(x) & E2(x)"), &m).unwrap()),
            ["u2"]
        );
        assert_eq!(
            names(&m, &extension(&w(&m, "E1(x) -> E2(x)"), &m).unwrap()),
            ["u2", "u3"]
        );
    }

    #[test]
    fn logical_preorder_examples() {
        let m = model(
            &["u1", "u2"],
            &[],
            &["E1", "E2"],
            &[("E1", &["u1"]), ("E2", &["u2"])],
        );
        let a = w(&m, "E1(x)");
        assert!(logical_preorder(&a, &a, &m).unwrap());
        assert!(logical_preorder(&w(&m, "E1(x) & E2(x)"), &a, &m).unwrap());
        assert!(!logical_preorder(&a, &w(&m, "E2(x)"), &m).unwrap());
    }

    #[test]
    fn c_truth_values() {
        let m = model(
            &["u1", "u2"],
            &["S", "T", "Z"],
            &["E1", "E2"],
            &[
                ("S", &["u1"]),
                ("T", &["u1", "u2"]),
                ("E1", &["u1", "u2"]),
                ("E2", &["u2"]),
            ],
        );
        assert_eq!(
            c_truth(&w(&m, "E1(x)"), "S", &m).unwrap(),
            CTruth::CertainlyTrue
        );
        assert_eq!(
            c_truth(&w(&m, "E2(x)"), "S", &m).unwrap(),
            CTruth::CertainlyFalse
        );
        assert_eq!(
            c_truth(&w(&m, "E2(x)"), "T", &m).unwrap(),
            CTruth::Indeterminate
        );
        assert_eq!(c_truth(&w(&m, "E2(x)"), "Z", &m).unwrap(), CTruth::Vacuous);
        assert!(matches!(
            c_truth(&w(&m, "S(x)"), "S", &m),
            Err(SemanticsError::StateAtom(_))
        ));
    }

    #[test]
    fn physical_preorder_is_strictly_weaker_on_the_witness_model() {
        let m = model(
            &["u1", "u2"],
            &["S1"],
            &["E1", "E2"],
            &[("S1", &["u1"]), ("E1", &["u1", "u2"]), ("E2", &["u1"])],
        );
        let a = w(&m, "E1(x)");
        let b = w(&m, "E2(x)");
        assert!(physical_preorder(&a, &a, &m).unwrap());
        assert!(physical_preorder(&a, &b, &m).unwrap());
        assert!(!logical_preorder(&a, &b, &m).unwrap());
        assert!(physically_equivalent(&a, &b, &m).unwrap());
    }

    #[test]
    fn verifiability() {
        let with_e3 = model(
            &["u1", "u2", "u3"],
            &[],
            &["E1", "E2", "E3"],
            &[("E1", &["u1"]), ("E2", &["u2"]), ("E3", &["u1", "u2"])],
        );
        let cands = vec![w(&with_e3, "E1(x)"), w(&with_e3, "E1(x) | E2(x)")];
        assert_eq!(verifiable_wffs(&cands, &with_e3, None).unwrap(), cands);
        let without = model(
            &["u1", "u2", "u3"],
            &[],
            &["E1", "E2"],
            &[("E1", &["u1"]), ("E2", &["u2"])],
        );
        let cands = vec![w(&without, "E1(x)"), w(&without, "E1(x) | E2(x)")];
        assert_eq!(
            verifiable_wffs(&cands, &without, None).unwrap(),
            cands[..1].to_vec()
        );
        let adj = VerifiabilityOverride {
            add: vec![cands[1].clone()],
            remove: vec![cands[0].clone()],
        };
        assert_eq!(
            verifiable_wffs(&cands, &without, Some(&adj)).unwrap(),
            cands[1..].to_vec()
        );
    }

    #[test]
    fn concrete_logic_with_complementary_pair() {
        let m = model(
            &["u1", "u2"],
            &["S1", "S2"],
            &["E1", "E2"],
            &[
                ("S1", &["u1"]),
                ("S2", &["u2"]),
                ("E1", &["u1"]),
                ("E2", &["u2"]),
            ],
        );
        let phi = vec![w(&m, "E1(x)"), w(&m, "E2(x)")];
        let ortho = complement_ortho(&m, &phi).unwrap();
        let s = concrete_logic(&m, &phi, &ortho).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.ortho(0), 1);
    }

    #[test]
    fn identity_ortho_fails_antitonicity() {
        let m = model(
            &["u1", "u2"],
            &["S1", "S2"],
            &["E1", "E2"],
            &[
                ("S1", &["u1"]),
                ("S2", &["u2"]),
                ("E1", &["u1"]),
                ("E2", &["u1", "u2"]),
            ],
        );
        let phi = vec![w(&m, "E1(x)"), w(&m, "E2(x)")];
        let ortho: BTreeMap<Wff, Wff> = phi.iter().map(|x| (x.clone(), x.clone())).collect();
        match concrete_logic(&m, &phi, &ortho) {
            Err(SemanticsError::OrthoViolations(v)) => assert_eq!(
                v,
                vec![OrthoViolation::Antitone {
                    a: "E1(x)".into(),
                    b: "E2(x)".into()
                }]
            ),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ortho_must_stay_inside_phi_v() {
        let m = model(&["u1"], &["S"], &["E1", "E2"], &[]);
        let phi = vec![w(&m, "E1(x)")];
        let mut ortho = BTreeMap::new();
        ortho.insert(phi[0].clone(), w(&m, "E2(x)"));
        assert!(matches!(
            concrete_logic(&m, &phi, &ortho),
            Err(SemanticsError::OrthoNotClosed(_))
        ));
    }

    #[test]
    fn rationals_and_weights() {
        assert_eq!(parse_rational("1/4"), parse_rational("0.25"));
        assert_eq!(
            parse_rational("2"),
            Some(BigRational::from_integer(2.into()))
        );
        assert!(parse_rational("1/0").is_none());
        let w = vec![
            parse_rational("1/2").unwrap(),
            parse_rational("1/3").unwrap(),
            parse_rational("1/6").unwrap(),
        ];
        let m = Measure::from_weights(&w).unwrap();
        assert_eq!(m.weight(1), w[1]);
        let bad = vec![
            parse_rational("1/2").unwrap(),
            parse_rational("1/3").unwrap(),
        ];
        assert!(Measure::from_weights(&bad).is_err());
    }

    #[test]
    fn document_round_trip() {
        let m = model(
            &["u1", "u2"],
            &["S"],
            &["E"],
            &[("S", &["u1"]), ("E", &["u2"])],
        );
        let back = ClassicalModel::from_doc(m.to_doc()).unwrap();
        assert_eq!(
            extension(&w(&m, "S(x) | E(x)"), &back).unwrap(),
            back.full_set()
        );
    }
}
