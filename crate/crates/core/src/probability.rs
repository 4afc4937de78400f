//! Mu-contextual probability on classical models.
//!
//! A measurement procedure `M` selects a macroscopic context and a finite
//! set of microscopic contexts `𝒞_M` drawn with probabilities `q_M`. The
//! mean conditional probability averages classical conditional
//! probabilities over `𝒞_M`; when that average does not depend on `M` it
//! defines the Q-probability `P_S(E)`. Everything is exact rational
//! arithmetic; floats appear only in reports.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hilbert::{self, HilbertError, HilbertSpace, Projection, QuantumState};
use crate::language::{Atom, LanguageError, Signature, SignatureDoc, Wff};
use crate::order::{lattice_diagnostics, LatticeReport, OrthoStructure};
use crate::semantics::{
    extension, parse_rational, ClassicalModel, ModelDoc, ObjectSet, SemanticsError,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProbabilityError {
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("invalid procedure `{procedure}`: {reason}")]
    InvalidProcedure { procedure: String, reason: String },
    #[error("invalid transition: {0}")]
    InvalidTransition(String),
    #[error("`{0}` has zero measure and cannot be conditioned on")]
    ZeroMeasure(String),
    #[error("`{0}` is not testable")]
    NotTestable(String),
    #[error("`{a}` and `{b}` are not jointly testable")]
    NotJointlyTestable { a: String, b: String },
    #[error("mean depends on the procedure (spread {} > tolerance)", .0.spread.0)]
    TPrimeViolation(Box<ProbabilityReport>),
    #[error("post-selection on `{property}` in state `{state}` is empty in every context")]
    EmptyPostSelection { property: String, state: String },
    #[error("resolution too coarse: deviation {deviation} exceeds tolerance {tolerance}")]
    Resolution { deviation: f64, tolerance: f64 },
    #[error("invalid lattice specification: {0}")]
    InvalidLatticeSpec(String),
    #[error("trials must be at least 1")]
    NoTrials,
}

pub type Result<T> = std::result::Result<T, ProbabilityError>;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// An exact probability; serialized as the exact fraction and a float.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Prob(pub BigRational);

impl Prob {
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn zero() -> Self {
        Prob(BigRational::zero())
    }
}

impl From<BigRational> for Prob {
    fn from(r: BigRational) -> Self {
        Prob(r)
    }
}

impl Serialize for Prob {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Prob", 2)?;
        st.serialize_field("exact", &self.0.to_string())?;
        st.serialize_field("value", &self.to_f64())?;
        st.end()
    }
}

fn ratio(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A measurement procedure: its macroscopic context and the distribution
/// `q_M` over its microscopic contexts `𝒞_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Procedure {
    pub macro_context: String,
    pub contexts: Vec<String>,
    pub q: Vec<BigRational>,
}

impl Procedure {
    pub fn uniform(macro_context: impl Into<String>, contexts: Vec<String>) -> Self {
        let n = contexts.len().max(1);
        Procedure {
            macro_context: macro_context.into(),
            q: vec![ratio(1, n); contexts.len()],
            contexts,
        }
    }

    fn terms(&self) -> impl Iterator<Item = (&str, &BigRational)> {
        self.contexts.iter().map(String::as_str).zip(&self.q)
    }

    fn q_of(&self, context: &str) -> Option<&BigRational> {
        self.contexts
            .iter()
            .position(|c| c == context)
            .map(|i| &self.q[i])
    }
}

/// How the two stages of a successive measurement draw their contexts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextDraw {
    #[default]
    Independent,
    Shared,
}

/// A classical model with mu-contextual procedures, plus optional
/// post-measurement transitions `(F, S) ↦ S'`.
#[derive(Debug, Clone)]
pub struct MuContextModel {
    base: ClassicalModel,
    procedures: BTreeMap<String, Procedure>,
    transitions: BTreeMap<(String, String), String>,
    tolerance: f64,
}

impl MuContextModel {
    pub fn new(
        base: ClassicalModel,
        procedures: BTreeMap<String, Procedure>,
        tolerance: f64,
    ) -> Result<Self> {
        let sig = base.signature();
        for (name, p) in &procedures {
            let bad = |reason: &str| ProbabilityError::InvalidProcedure {
                procedure: name.clone(),
                reason: reason.to_string(),
            };
            if p.contexts.is_empty() {
                return Err(bad("no mu-contexts"));
            }
            if p.q.len() != p.contexts.len() {
                return Err(bad("q and contexts differ in length"));
            }
            let distinct: BTreeSet<&String> = p.contexts.iter().collect();
            if distinct.len() != p.contexts.len() {
                return Err(bad("repeated mu-context"));
            }
            if let Some(c) = p.contexts.iter().find(|c| !sig.has_context(c)) {
                return Err(bad(&format!("context `{c}` is not declared")));
            }
            if p.q.iter().any(|q| q.is_negative()) {
                return Err(bad("negative q"));
            }
            if p.q.iter().sum::<BigRational>() != BigRational::one() {
                return Err(bad("q does not sum to 1"));
            }
        }
        for prop in sig.properties() {
            for m in sig.procedures_of(prop)? {
                if !procedures.contains_key(m) {
                    return Err(ProbabilityError::InvalidProcedure {
                        procedure: m.clone(),
                        reason: format!("used by `{prop}` but not defined"),
                    });
                }
            }
        }
        if tolerance.is_nan() || tolerance < 0.0 {
            return Err(ProbabilityError::InvalidProcedure {
                procedure: String::new(),
                reason: "tolerance must be nonnegative".into(),
            });
        }
        Ok(MuContextModel {
            base,
            procedures,
            transitions: BTreeMap::new(),
            tolerance,
        })
    }

    /// Declares that measuring `property` with outcome "yes" on `state`
    /// leaves the object in `post`.
    pub fn add_transition(&mut self, property: &str, state: &str, post: &str) -> Result<()> {
        let sig = self.base.signature();
        if !sig.has_property(property) {
            return Err(ProbabilityError::InvalidTransition(format!(
                "unknown property `{property}`"
            )));
        }
        for s in [state, post] {
            if !sig.has_state(s) {
                return Err(ProbabilityError::InvalidTransition(format!(
                    "unknown state `{s}`"
                )));
            }
        }
        self.transitions
            .insert((property.to_string(), state.to_string()), post.to_string());
        Ok(())
    }

    pub fn base(&self) -> &ClassicalModel {
        &self.base
    }

    pub fn signature(&self) -> &Signature {
        self.base.signature()
    }

    pub fn procedures(&self) -> &BTreeMap<String, Procedure> {
        &self.procedures
    }

    pub fn procedure(&self, name: &str) -> Result<&Procedure> {
        self.procedures
            .get(name)
            .ok_or_else(|| ProbabilityError::InvalidProcedure {
                procedure: name.to_string(),
                reason: "not defined".into(),
            })
    }

    pub fn transitions(&self) -> &BTreeMap<(String, String), String> {
        &self.transitions
    }

    pub fn transition(&self, property: &str, state: &str) -> Option<&str> {
        self.transitions
            .get(&(property.to_string(), state.to_string()))
            .map(String::as_str)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn set_tolerance(&mut self, tolerance: f64) {
        self.tolerance = tolerance;
    }

    /// First procedure of a property, in name order.
    fn primary_procedure(&self, property: &str) -> Result<(&str, &Procedure)> {
        let name = self
            .signature()
            .procedures_of(property)?
            .iter()
            .next()
            .expect("signatures give every property a procedure");
        Ok((name.as_str(), self.procedure(name)?))
    }

    pub fn from_doc(doc: MuContextDoc) -> Result<Self> {
        let base = ClassicalModel::from_doc(doc.model)?;
        let sig = base.signature().clone();
        let mut procedures = BTreeMap::new();
        let used: BTreeSet<String> = sig
            .properties()
            .map(|p| sig.procedures_of(p).cloned())
            .collect::<std::result::Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect();
        for name in used.iter().chain(doc.procedures.keys()) {
            if procedures.contains_key(name) {
                continue;
            }
            let p = match doc.procedures.get(name) {
                Some(pd) => {
                    let q = match &pd.q {
                        Some(qs) => qs
                            .iter()
                            .map(|s| {
                                parse_rational(s).ok_or_else(|| {
                                    ProbabilityError::InvalidProcedure {
                                        procedure: name.clone(),
                                        reason: format!("`{s}` is not a rational"),
                                    }
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                        None => vec![ratio(1, pd.contexts.len().max(1)); pd.contexts.len()],
                    };
                    Procedure {
                        macro_context: pd.macro_context.clone().unwrap_or_else(|| name.clone()),
                        contexts: pd.contexts.clone(),
                        q,
                    }
                }
                None => {
                    Procedure::uniform(name.clone(), sig.contexts().map(str::to_string).collect())
                }
            };
            procedures.insert(name.clone(), p);
        }
        let mut m =
            MuContextModel::new(base, procedures, doc.tolerance.unwrap_or(DEFAULT_TOLERANCE))?;
        for t in &doc.transitions {
            m.add_transition(&t.property, &t.state, &t.post)?;
        }
        Ok(m)
    }

    pub fn to_doc(&self) -> MuContextDoc {
        MuContextDoc {
            model: self.base.to_doc(),
            procedures: self
                .procedures
                .iter()
                .map(|(n, p)| {
                    (
                        n.clone(),
                        ProcedureDoc {
                            macro_context: Some(p.macro_context.clone()),
                            contexts: p.contexts.clone(),
                            q: Some(p.q.iter().map(|q| q.to_string()).collect()),
                        },
                    )
                })
                .collect(),
            transitions: self
                .transitions
                .iter()
                .map(|((property, state), post)| TransitionDoc {
                    property: property.clone(),
                    state: state.clone(),
                    post: post.clone(),
                })
                .collect(),
            tolerance: Some(self.tolerance),
        }
    }
}

/// Serialized [`MuContextModel`]: a model document plus procedures.
/// Procedures left out default to every declared context with uniform `q`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MuContextDoc {
    #[serde(flatten)]
    pub model: ModelDoc,
    #[serde(default)]
    pub procedures: BTreeMap<String, ProcedureDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transitions: Vec<TransitionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcedureDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub macro_context: Option<String>,
    pub contexts: Vec<String>,
    /// Rational strings; uniform when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionDoc {
    pub property: String,
    pub state: String,
    pub post: String,
}

/// `p(a|b) = μ(ext a ∩ ext b) / μ(ext b)`.
pub fn cond_prob(a: &Wff, b: &Wff, m: &ClassicalModel) -> Result<BigRational> {
    let ea = extension(a, m)?;
    let eb = extension(b, m)?;
    m.measure()
        .conditional(&ea, &eb)
        .ok_or_else(|| ProbabilityError::ZeroMeasure(b.to_string()))
}

/// `E k F`: the properties share a measurement procedure.
pub fn compatibility(e: &str, f: &str, m: &MuContextModel) -> Result<bool> {
    let sig = m.signature();
    Ok(!sig.procedures_of(e)?.is_disjoint(sig.procedures_of(f)?))
}

/// Procedures shared by every property in the set.
pub fn shared_procedures(
    properties: &BTreeSet<String>,
    m: &MuContextModel,
) -> Result<BTreeSet<String>> {
    let sig = m.signature();
    let mut iter = properties.iter();
    let Some(first) = iter.next() else {
        return Ok(BTreeSet::new());
    };
    let mut out = sig.procedures_of(first)?.clone();
    for p in iter {
        let other = sig.procedures_of(p)?;
        out.retain(|x| other.contains(x));
    }
    Ok(out)
}

fn contextual_atoms(w: &Wff) -> Vec<(String, String)> {
    w.atoms()
        .into_iter()
        .filter_map(|a| match a {
            Atom::Contextual { property, context } => Some((property, context)),
            _ => None,
        })
        .collect()
}

/// Testable: no contextual atom, or all contextual atoms carry the same
/// mu-context and their properties have a common procedure.
pub fn testable(w: &Wff, m: &MuContextModel) -> Result<bool> {
    let atoms = contextual_atoms(w);
    if atoms.is_empty() {
        return Ok(true);
    }
    let contexts: BTreeSet<&String> = atoms.iter().map(|(_, c)| c).collect();
    if contexts.len() > 1 {
        return Ok(false);
    }
    let props: BTreeSet<String> = atoms.into_iter().map(|(p, _)| p).collect();
    Ok(!shared_procedures(&props, m)?.is_empty())
}

pub fn jointly_testable(a: &Wff, b: &Wff, m: &MuContextModel) -> Result<bool> {
    testable(&Wff::and(a.clone(), b.clone()), m)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContextTerm {
    pub context: String,
    pub q: Prob,
    pub value: Prob,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProcedureValue {
    pub procedure: String,
    pub macro_context: String,
    pub value: Prob,
    pub contexts: Vec<ContextTerm>,
}

/// Mean conditional probability with its per-procedure breakdown.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityReport {
    pub value: Prob,
    pub procedures: Vec<ProcedureValue>,
    /// Max minus min over procedures.
    pub spread: Prob,
    pub in_t_prime: bool,
}

fn procedure_mean(
    a: &Wff,
    b: &Wff,
    name: &str,
    p: &Procedure,
    m: &ClassicalModel,
) -> Result<ProcedureValue> {
    let mut sum = BigRational::zero();
    let mut contexts = Vec::with_capacity(p.contexts.len());
    for (c, q) in p.terms() {
        let bc = b.at_context(c);
        let v = cond_prob(&a.at_context(c), &bc, m)?;
        sum += q * &v;
        contexts.push(ContextTerm {
            context: c.to_string(),
            q: Prob(q.clone()),
            value: Prob(v),
        });
    }
    Ok(ProcedureValue {
        procedure: name.to_string(),
        macro_context: p.macro_context.clone(),
        value: Prob(sum),
        contexts,
    })
}

/// `⟨p(a|b)⟩`: for each procedure shared by the contextual properties of
/// `a ∧ b`, the `q`-weighted mean of `p(a@C | b@C)` over its contexts.
/// Fails with the full report when the means differ by more than the
/// model tolerance.
pub fn mean_cond_prob(a: &Wff, b: &Wff, m: &MuContextModel) -> Result<ProbabilityReport> {
    if !jointly_testable(a, b, m)? {
        return Err(ProbabilityError::NotJointlyTestable {
            a: a.to_string(),
            b: b.to_string(),
        });
    }
    let both = Wff::and(a.clone(), b.clone());
    let props: BTreeSet<String> = contextual_atoms(&both)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    if props.is_empty() {
        let v = cond_prob(a, b, &m.base)?;
        return Ok(ProbabilityReport {
            value: Prob(v),
            procedures: Vec::new(),
            spread: Prob::zero(),
            in_t_prime: true,
        });
    }
    let procedures = shared_procedures(&props, m)?
        .iter()
        .map(|name| procedure_mean(a, b, name, m.procedure(name)?, &m.base))
        .collect::<Result<Vec<_>>>()?;
    let max = procedures
        .iter()
        .map(|p| &p.value.0)
        .max()
        .expect("nonempty");
    let min = procedures
        .iter()
        .map(|p| &p.value.0)
        .min()
        .expect("nonempty");
    let spread = max - min;
    let in_t_prime = spread.to_f64().unwrap_or(f64::INFINITY) <= m.tolerance;
    let report = ProbabilityReport {
        value: procedures[0].value.clone(),
        spread: Prob(spread),
        in_t_prime,
        procedures,
    };
    if in_t_prime {
        Ok(report)
    } else {
        Err(ProbabilityError::TPrimeViolation(Box::new(report)))
    }
}

/// `P_S(E) = ⟨p(E_C(x) | S(x))⟩`.
pub fn q_probability(property: &str, state: &str, m: &MuContextModel) -> Result<ProbabilityReport> {
    let sig = m.signature();
    sig.require_property(property)?;
    sig.require_state(state)?;
    let (_, p) = m.primary_procedure(property)?;
    let e = Wff::contextual(property, p.contexts[0].clone());
    mean_cond_prob(&e, &Wff::state(state), m)
}

pub fn q_value(property: &str, state: &str, m: &MuContextModel) -> Result<BigRational> {
    Ok(q_probability(property, state, m)?.value.0)
}

/// Declared lattice `(ℰ, ≺, ⊥)` for [`generalized_measure_check`].
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureLatticeSpec {
    pub properties: Vec<String>,
    pub ortho: BTreeMap<String, String>,
    pub unit: String,
    /// Disjoint pairs `(E, F)` with `E ≺ F⊥`, and the property that is
    /// their join.
    #[serde(default)]
    pub disjoint: Vec<DisjointJoin>,
    /// Optional expected order pairs `E ≺ F`, cross-checked against the
    /// computed preorder.
    #[serde(default)]
    pub order: Option<Vec<(String, String)>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisjointJoin {
    pub a: String,
    pub b: String,
    pub join: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureFailure {
    pub law: &'static str,
    pub state: Option<String>,
    pub properties: Vec<String>,
    pub expected: Option<Prob>,
    pub actual: Option<Prob>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GeneralizedMeasureReport {
    pub states: Vec<String>,
    /// States of zero measure, outside `Ψ⁺`.
    pub skipped_states: Vec<String>,
    /// `P_S(E)` by state, then by property in declaration order.
    pub table: BTreeMap<String, Vec<(String, Prob)>>,
    pub failures: Vec<MeasureFailure>,
    pub lattice: Option<LatticeReport>,
    pub lattice_error: Option<String>,
    pub passed: bool,
}

/// Checks that every `P_S` is a generalized probability measure on the
/// declared `(ℰ, ≺, ⊥)`, where `E ≺ F` iff `P_S(E) ≤ P_S(F)` for every
/// state, and classifies the resulting ortho structure.
pub fn generalized_measure_check(
    m: &MuContextModel,
    spec: &MeasureLatticeSpec,
) -> Result<GeneralizedMeasureReport> {
    let sig = m.signature();
    let props = &spec.properties;
    let index = |name: &str| {
        props
            .iter()
            .position(|p| p == name)
            .ok_or_else(|| ProbabilityError::InvalidLatticeSpec(format!("`{name}` is not in ℰ")))
    };
    for p in props {
        sig.require_property(p)?;
    }
    index(&spec.unit)?;
    let mut ortho = Vec::with_capacity(props.len());
    for p in props {
        let o = spec.ortho.get(p).ok_or_else(|| {
            ProbabilityError::InvalidLatticeSpec(format!("no orthocomplement for `{p}`"))
        })?;
        ortho.push(index(o)?);
    }
    for d in &spec.disjoint {
        for n in [&d.a, &d.b, &d.join] {
            index(n)?;
        }
    }

    let mut states = Vec::new();
    let mut skipped = Vec::new();
    let mut table: BTreeMap<String, Vec<(String, Prob)>> = BTreeMap::new();
    let mut values: Vec<Vec<BigRational>> = Vec::new();
    for s in sig.states() {
        let ext = m.base.atom_extension(&Atom::State(s.to_string()))?;
        if m.base.measure().mass_of(&ext).is_zero() {
            skipped.push(s.to_string());
            continue;
        }
        let row = props
            .iter()
            .map(|p| q_value(p, s, m))
            .collect::<Result<Vec<_>>>()?;
        table.insert(
            s.to_string(),
            props
                .iter()
                .cloned()
                .zip(row.iter().cloned().map(Prob))
                .collect(),
        );
        states.push(s.to_string());
        values.push(row);
    }

    let tol = BigRational::from_float(m.tolerance).unwrap_or_else(BigRational::zero);
    let close = |x: &BigRational, y: &BigRational| (x - y).abs() <= tol;
    let mut failures = Vec::new();
    let unit = index(&spec.unit)?;
    for (s, row) in states.iter().zip(&values) {
        if !close(&row[unit], &BigRational::one()) {
            failures.push(MeasureFailure {
                law: "unit",
                state: Some(s.clone()),
                properties: vec![spec.unit.clone()],
                expected: Some(Prob(BigRational::one())),
                actual: Some(Prob(row[unit].clone())),
            });
        }
        for (i, p) in props.iter().enumerate() {
            let want = BigRational::one() - &row[i];
            if !close(&row[ortho[i]], &want) {
                failures.push(MeasureFailure {
                    law: "orthocomplement",
                    state: Some(s.clone()),
                    properties: vec![p.clone(), props[ortho[i]].clone()],
                    expected: Some(Prob(want)),
                    actual: Some(Prob(row[ortho[i]].clone())),
                });
            }
        }
    }
    let n = props.len();
    let leq: Vec<Vec<bool>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| values.iter().all(|row| row[a] <= &row[b] + &tol))
                .collect()
        })
        .collect();
    for d in &spec.disjoint {
        let (a, b, j) = (index(&d.a)?, index(&d.b)?, index(&d.join)?);
        if !leq[a][ortho[b]] {
            failures.push(MeasureFailure {
                law: "disjointness",
                state: None,
                properties: vec![d.a.clone(), props[ortho[b]].clone()],
                expected: None,
                actual: None,
            });
        }
        for (s, row) in states.iter().zip(&values) {
            let want = &row[a] + &row[b];
            if !close(&row[j], &want) {
                failures.push(MeasureFailure {
                    law: "additivity",
                    state: Some(s.clone()),
                    properties: vec![d.a.clone(), d.b.clone(), d.join.clone()],
                    expected: Some(Prob(want)),
                    actual: Some(Prob(row[j].clone())),
                });
            }
        }
    }
    if let Some(order) = &spec.order {
        let declared: BTreeSet<(usize, usize)> = order
            .iter()
            .map(|(a, b)| Ok((index(a)?, index(b)?)))
            .collect::<Result<_>>()?;
        for (a, row) in leq.iter().enumerate() {
            for (b, &computed) in row.iter().enumerate() {
                let expected = a == b || declared.contains(&(a, b));
                if expected != computed {
                    failures.push(MeasureFailure {
                        law: "order",
                        state: None,
                        properties: vec![props[a].clone(), props[b].clone()],
                        expected: None,
                        actual: None,
                    });
                }
            }
        }
    }
    let (lattice, lattice_error) = match OrthoStructure::new(props.clone(), leq, ortho)
        .map_err(|e| e.to_string())
        .and_then(|s| lattice_diagnostics(&s).map_err(|e| e.to_string()))
    {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e)),
    };
    Ok(GeneralizedMeasureReport {
        passed: failures.is_empty(),
        states,
        skipped_states: skipped,
        table,
        failures,
        lattice,
        lattice_error,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SuccessiveMethod {
    /// The model declares the post-measurement state.
    Transition { post_state: String },
    /// Post-selection on `F_{C'} ∧ S` followed by an `E` draw.
    TwoStage { draw: ContextDraw },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionalReport {
    pub value: Prob,
    pub method: SuccessiveMethod,
    pub p_e: Prob,
    pub p_f: Prob,
    /// `F` after `E`, when `P_S(E) > 0`.
    pub reverse: Option<Prob>,
    /// `reverse · P_S(E) / P_S(F)`: what Bayes inversion predicts.
    pub bayes_prediction: Prob,
    /// `|value − bayes_prediction|`.
    pub bayes_gap: Prob,
    /// `|value − ⟨p(E_C ∧ F_C | S)⟩ / P_S(F)|`, when `E` and `F` are
    /// jointly testable.
    pub ratio_gap: Option<Prob>,
}

/// Probability of `E` on objects prepared in `S` that passed an
/// `F`-measurement, or `None` when that post-selection is empty.
fn successive(
    e: &str,
    f: &str,
    s: &str,
    m: &MuContextModel,
    draw: ContextDraw,
) -> Result<Option<(BigRational, SuccessiveMethod)>> {
    if let Some(post) = m.transition(f, s) {
        let value = q_value(e, post, m)?;
        return Ok(Some((
            value,
            SuccessiveMethod::Transition {
                post_state: post.to_string(),
            },
        )));
    }
    let base = &m.base;
    let measure = base.measure();
    let (_, pf) = m.primary_procedure(f)?;
    let (_, pe) = m.primary_procedure(e)?;
    let ext_s = base.atom_extension(&Atom::State(s.to_string()))?;
    let mut total = BigRational::zero();
    let mut acc = BigRational::zero();
    for (cf, qf) in pf.terms() {
        let mut post = base.atom_extension(&Atom::contextual(f, cf))?;
        post.intersect_with(&ext_s);
        let w = qf * measure.of(&post);
        if w.is_zero() {
            continue;
        }
        let inner = match draw {
            ContextDraw::Independent => {
                let mut sum = BigRational::zero();
                for (ce, qe) in pe.terms() {
                    sum += qe * conditional(base, &Atom::contextual(e, ce), &post)?;
                }
                sum
            }
            ContextDraw::Shared => {
                if pe.q_of(cf).is_none() {
                    return Err(ProbabilityError::InvalidProcedure {
                        procedure: pe.macro_context.clone(),
                        reason: format!("shared draw needs context `{cf}` in both procedures"),
                    });
                }
                conditional(base, &Atom::contextual(e, cf), &post)?
            }
        };
        acc += &w * inner;
        total += w;
    }
    if total.is_zero() {
        return Ok(None);
    }
    Ok(Some((acc / total, SuccessiveMethod::TwoStage { draw })))
}

fn conditional(m: &ClassicalModel, atom: &Atom, given: &ObjectSet) -> Result<BigRational> {
    let ext = m.atom_extension(atom)?;
    m.measure()
        .conditional(&ext, given)
        .ok_or_else(|| ProbabilityError::ZeroMeasure(atom.to_string()))
}

/// Conditional Q-probability of `E` given a successful `F`-measurement on
/// `S`, with the Bayes-inversion gap.
pub fn conditional_q_prob(
    e: &str,
    f: &str,
    s: &str,
    m: &MuContextModel,
    draw: ContextDraw,
) -> Result<ConditionalReport> {
    let p_e = q_value(e, s, m)?;
    let p_f = q_value(f, s, m)?;
    let empty = || ProbabilityError::EmptyPostSelection {
        property: f.to_string(),
        state: s.to_string(),
    };
    if p_f.is_zero() {
        return Err(empty());
    }
    let (value, method) = successive(e, f, s, m, draw)?.ok_or_else(empty)?;
    let reverse = if p_e.is_zero() {
        None
    } else {
        successive(f, e, s, m, draw)?.map(|(v, _)| v)
    };
    let prediction = match &reverse {
        Some(r) => r * &p_e / &p_f,
        None => BigRational::zero(),
    };
    let gap = (&value - &prediction).abs();
    let ratio_gap = {
        let (_, pe) = m.primary_procedure(e)?;
        let c = pe.contexts[0].clone();
        let both = Wff::and(Wff::contextual(e, c.clone()), Wff::contextual(f, c));
        if testable(&both, m)? {
            match mean_cond_prob(&both, &Wff::state(s), m) {
                Ok(r) => Some(Prob((&value - r.value.0 / &p_f).abs())),
                Err(ProbabilityError::TPrimeViolation(_)) => None,
                Err(other) => return Err(other),
            }
        } else {
            None
        }
    };
    Ok(ConditionalReport {
        value: Prob(value),
        method,
        p_e: Prob(p_e),
        p_f: Prob(p_f),
        reverse: reverse.map(Prob),
        bayes_prediction: Prob(prediction),
        bayes_gap: Prob(gap),
        ratio_gap,
    })
}

pub const COLLAPSED_CONTEXT: &str = "mu0";

/// The degenerate model: one mu-context shared by every procedure, each
/// contextual property keeping its extension at the first context of its
/// first procedure. Transitions are dropped.
pub fn collapse_contexts(m: &MuContextModel) -> Result<MuContextModel> {
    let sig = m.signature();
    let mut doc = SignatureDoc::from(sig.clone());
    doc.contexts = vec![COLLAPSED_CONTEXT.to_string()];
    let new_sig = Signature::try_from(doc)?;
    let mut base = ClassicalModel::new(new_sig, m.base.universe().to_vec())?;
    base.set_measure(m.base.measure().clone())?;
    for (atom, set) in m.base.assigned_atoms() {
        if !matches!(atom, Atom::Contextual { .. }) {
            base.set_extension(atom.clone(), set.clone())?;
        }
    }
    for p in sig.properties() {
        let (_, proc_) = m.primary_procedure(p)?;
        let ext = m
            .base
            .atom_extension(&Atom::contextual(p, proc_.contexts[0].clone()))?;
        base.set_extension(Atom::contextual(p, COLLAPSED_CONTEXT), ext)?;
    }
    let procedures = m
        .procedures
        .iter()
        .map(|(n, p)| {
            (
                n.clone(),
                Procedure {
                    macro_context: p.macro_context.clone(),
                    contexts: vec![COLLAPSED_CONTEXT.to_string()],
                    q: vec![BigRational::one()],
                },
            )
        })
        .collect();
    MuContextModel::new(base, procedures, m.tolerance)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthesisOptions {
    pub resolution: usize,
    /// Add the post-measurement states `PρP / tr(ρP)` and record the
    /// transitions.
    pub close_post_measurement: bool,
    pub max_states: usize,
    /// Fail when some `|P_S(E) − born(S, P_E)|` exceeds this.
    pub tolerance: Option<f64>,
}

impl Default for SynthesisOptions {
    fn default() -> Self {
        SynthesisOptions {
            resolution: 1000,
            close_post_measurement: true,
            max_states: 64,
            tolerance: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Deviation {
    pub state: String,
    pub property: String,
    pub born: f64,
    pub q: Prob,
    pub deviation: f64,
}

#[derive(Debug, Clone)]
pub struct Synthesis {
    pub model: MuContextModel,
    pub states: Vec<(String, QuantumState)>,
    pub deviations: Vec<Deviation>,
    pub max_deviation: f64,
    pub added_states: Vec<String>,
    /// Closure stopped at `max_states`.
    pub truncated: bool,
}

/// A finite mu-contextual model reproducing Born probabilities on a grid.
///
/// Each state owns `R` objects `(S, j)`; all properties see the contexts
/// `m0 .. m(R-1)` with uniform `q` through a private procedure, and
/// `(S, j) ∈ ext(E_{m_k})` iff `(j + k) mod R < round(R · born(S, P_E))`,
/// so every context sees the same fraction. A property whose projection
/// is the orthocomplement of an earlier one gets the exact complement.
pub fn born_model_synthesize(
    space: &HilbertSpace,
    states: &[(String, QuantumState)],
    properties: &[(String, Projection)],
    options: SynthesisOptions,
) -> Result<Synthesis> {
    let r = options.resolution;
    if r == 0 {
        return Err(ProbabilityError::InvalidProcedure {
            procedure: String::new(),
            reason: "resolution must be positive".into(),
        });
    }
    let tol = space.tolerance;
    for (_, s) in states {
        if s.dim() != space.dim {
            return Err(HilbertError::DimensionMismatch {
                left: space.dim,
                right: s.dim(),
            }
            .into());
        }
    }
    for (_, p) in properties {
        if p.dim() != space.dim {
            return Err(HilbertError::DimensionMismatch {
                left: space.dim,
                right: p.dim(),
            }
            .into());
        }
    }

    let mut all: Vec<(String, QuantumState)> = states.to_vec();
    let mut added = Vec::new();
    let mut transitions: Vec<(String, String, usize)> = Vec::new();
    let mut truncated = false;
    let match_tol = tol.sqrt().max(1e-7);
    let mut i = 0;
    while i < all.len() {
        for (pname, p) in properties {
            let Some(post) = all[i].1.conditioned_on(p, tol) else {
                continue;
            };
            if !options.close_post_measurement {
                continue;
            }
            let j = match all.iter().position(|(_, s)| s.approx_eq(&post, match_tol)) {
                Some(j) => j,
                None if all.len() < options.max_states => {
                    let mut name = format!("{}_{}", all[i].0, pname);
                    while all.iter().any(|(n, _)| *n == name)
                        || properties.iter().any(|(n, _)| *n == name)
                    {
                        name.push('_');
                    }
                    added.push(name.clone());
                    all.push((name, post));
                    all.len() - 1
                }
                None => {
                    truncated = true;
                    continue;
                }
            };
            transitions.push((pname.clone(), all[i].0.clone(), j));
        }
        i += 1;
    }

    let contexts: Vec<String> = (0..r).map(|k| format!("m{k}")).collect();
    let procedures_sig: BTreeMap<String, Vec<String>> = properties
        .iter()
        .map(|(n, _)| (n.clone(), vec![format!("M_{n}")]))
        .collect();
    let sig = Signature::new(
        all.iter().map(|(n, _)| n.clone()),
        properties.iter().map(|(n, _)| n.clone()),
        contexts.clone(),
        procedures_sig,
    )?;
    let universe: Vec<String> = all
        .iter()
        .flat_map(|(n, _)| (0..r).map(move |j| format!("{n}_{j}")))
        .collect();
    let mut base = ClassicalModel::new(sig, universe)?;
    for (si, (name, _)) in all.iter().enumerate() {
        let mut set = base.empty_set();
        set.insert_range(si * r..(si + 1) * r);
        base.set_extension(Atom::State(name.clone()), set)?;
    }
    let mut deviations = Vec::new();
    let mut max_dev = 0f64;
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for (pi, (pname, p)) in properties.iter().enumerate() {
        let complement_of = properties[..pi]
            .iter()
            .position(|(_, q)| hilbert::ortho(q).approx_eq(p, tol));
        let mut counts = Vec::with_capacity(all.len());
        for (si, (sname, s)) in all.iter().enumerate() {
            let b = hilbert::born(s, p)?;
            let n = match complement_of {
                Some(ci) => r - cells[ci][si],
                None => (b * r as f64).round().clamp(0.0, r as f64) as usize,
            };
            counts.push(n);
            let q = ratio(n, r);
            let dev = (q.to_f64().unwrap_or(f64::NAN) - b).abs();
            max_dev = max_dev.max(dev);
            if si < states.len() {
                deviations.push(Deviation {
                    state: sname.clone(),
                    property: pname.clone(),
                    born: b,
                    q: Prob(q),
                    deviation: dev,
                });
            }
        }
        for (k, c) in contexts.iter().enumerate() {
            let mut set = base.empty_set();
            for (si, &n) in counts.iter().enumerate() {
                for j in 0..r {
                    let inside = (j + k) % r < n;
                    let keep = match complement_of {
                        Some(_) => (j + k) % r >= r - n,
                        None => inside,
                    };
                    if keep {
                        set.insert(si * r + j);
                    }
                }
            }
            base.set_extension(Atom::contextual(pname.clone(), c.clone()), set)?;
        }
        cells.push(counts);
    }
    if let Some(t) = options.tolerance {
        if max_dev > t {
            return Err(ProbabilityError::Resolution {
                deviation: max_dev,
                tolerance: t,
            });
        }
    }
    let procedures = properties
        .iter()
        .map(|(n, _)| {
            (
                format!("M_{n}"),
                Procedure::uniform(format!("M_{n}"), contexts.clone()),
            )
        })
        .collect();
    let mut model = MuContextModel::new(base, procedures, DEFAULT_TOLERANCE)?;
    for (p, s, j) in transitions {
        model.add_transition(&p, &s, &all[j].0)?;
    }
    Ok(Synthesis {
        model,
        states: all,
        deviations,
        max_deviation: max_dev,
        added_states: added,
        truncated,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub trials: u64,
    pub hits: u64,
    pub frequency: f64,
    pub procedure: Option<String>,
    pub mean: Prob,
    pub seed: u64,
}

const BATCH: u64 = 8192;

/// Monte Carlo mean probability measurement: each trial draws a context
/// `C ~ q_M` (for the first shared procedure), then an object from
/// `ext(b@C)` by weight, and records whether `a@C` holds. Trials run in
/// fixed-size batches, batch `i` on stream `i` of a generator seeded with
/// `seed`.
pub fn mean_probability_measurement(
    a: &Wff,
    b: &Wff,
    m: &MuContextModel,
    trials: u64,
    seed: u64,
) -> Result<SampleReport> {
    if trials == 0 {
        return Err(ProbabilityError::NoTrials);
    }
    let mean = mean_cond_prob(a, b, m)?;
    let (procedure, contexts): (Option<String>, Vec<(Option<String>, f64)>) =
        match mean.procedures.first() {
            Some(pv) => {
                let p = m.procedure(&pv.procedure)?;
                (
                    Some(pv.procedure.clone()),
                    p.terms()
                        .map(|(c, q)| (Some(c.to_string()), q.to_f64().unwrap_or(0.0)))
                        .collect(),
                )
            }
            None => (None, vec![(None, 1.0)]),
        };
    let masses: Vec<f64> = (0..m.base.universe().len())
        .map(|i| m.base.measure().weight(i).to_f64().unwrap_or(0.0))
        .collect();
    let mut urns = Vec::with_capacity(contexts.len());
    for (c, _) in &contexts {
        let (ac, bc) = match c {
            Some(c) => (a.at_context(c), b.at_context(c)),
            None => (a.clone(), b.clone()),
        };
        let ea = extension(&ac, &m.base)?;
        let eb = extension(&bc, &m.base)?;
        let objects: Vec<usize> = eb.ones().filter(|&o| masses[o] > 0.0).collect();
        if objects.is_empty() {
            urns.push(None);
            continue;
        }
        let dist = WeightedIndex::new(objects.iter().map(|&o| masses[o]))
            .map_err(|_| ProbabilityError::ZeroMeasure(bc.to_string()))?;
        let hit: Vec<bool> = objects.iter().map(|&o| ea.contains(o)).collect();
        urns.push(Some((dist, hit)));
    }
    let context_dist =
        WeightedIndex::new(
            contexts
                .iter()
                .zip(&urns)
                .map(|((_, q), u)| if u.is_some() { *q } else { 0.0 }),
        )
        .map_err(|_| ProbabilityError::ZeroMeasure(b.to_string()))?;
    let mut hits = 0u64;
    let mut done = 0u64;
    let mut batch = 0u64;
    while done < trials {
        let n = BATCH.min(trials - done);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch);
        for _ in 0..n {
            let c = context_dist.sample(&mut rng);
            let (dist, hit) = urns[c].as_ref().expect("positive weight");
            if hit[dist.sample(&mut rng)] {
                hits += 1;
            }
        }
        done += n;
        batch += 1;
    }
    Ok(SampleReport {
        trials,
        hits,
        frequency: hits as f64 / trials as f64,
        procedure,
        mean: mean.value,
        seed,
    })
}
