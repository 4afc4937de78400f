//! Assertive formulas and their justification.
//!
//! Radical formulas are ordinary formulas of `L(x)` whose truth may be
//! undefined. An assertive formula prefixes radicals with `|-` and combines
//! the results with the pragmatic connectives `N`, `K`, `A`, `C`, `E`.
//! Justification is evaluated either over a finite family of points
//! ([`ProofOracle`] with pluggable [`JustificationRules`]) or analytically
//! over all pure states of a Hilbert space ([`QuantumOracle`]), where every
//! justification set is a finite union of subspaces.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::hilbert::{self, CVector, HilbertError, Projection, QuantumState, C64};
use crate::language::{self, Atom, LanguageError, Signature, Tok, Wff};
use crate::order::{OrderError, OrthoStructure};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PragmaticsError {
    #[error(transparent)]
    Language(#[from] LanguageError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("atom `{0}` has no projection binding")]
    Unbound(String),
    #[error("oracle proves `{atom}` both true and false at `{point}`")]
    OracleInconsistent { atom: String, point: String },
    #[error("point index {0} is out of range")]
    NoSuchPoint(usize),
    #[error("enumeration exceeded the budget of {0} formulas")]
    Budget(usize),
    #[error("radical has {0} distinct atoms; at most {MAX_RADICAL_ATOMS} are supported")]
    TooManyAtoms(usize),
}

pub type Result<T> = std::result::Result<T, PragmaticsError>;

pub const MAX_RADICAL_ATOMS: usize = 16;

/// `|-ρ`, `Nδ`, `K(δ, δ)`, `A(δ, δ)`, `C(δ, δ)`, `E(δ, δ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AssertiveFormula {
    Assert(Wff),
    N(Box<AssertiveFormula>),
    K(Box<AssertiveFormula>, Box<AssertiveFormula>),
    A(Box<AssertiveFormula>, Box<AssertiveFormula>),
    C(Box<AssertiveFormula>, Box<AssertiveFormula>),
    E(Box<AssertiveFormula>, Box<AssertiveFormula>),
}

use AssertiveFormula as Af;

impl AssertiveFormula {
    pub fn assert(w: Wff) -> Self {
        Af::Assert(w)
    }

    pub fn n(d: Af) -> Self {
        Af::N(Box::new(d))
    }

    pub fn k(a: Af, b: Af) -> Self {
        Af::K(Box::new(a), Box::new(b))
    }

    pub fn a(a: Af, b: Af) -> Self {
        Af::A(Box::new(a), Box::new(b))
    }

    pub fn c(a: Af, b: Af) -> Self {
        Af::C(Box::new(a), Box::new(b))
    }

    pub fn e(a: Af, b: Af) -> Self {
        Af::E(Box::new(a), Box::new(b))
    }

    /// Nesting of pragmatic connectives; `|-ρ` has depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Af::Assert(_) => 0,
            Af::N(d) => 1 + d.depth(),
            Af::K(a, b) | Af::A(a, b) | Af::C(a, b) | Af::E(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Radical formulas at the leaves, left to right.
    pub fn radicals(&self) -> Vec<&Wff> {
        let mut out = Vec::new();
        self.collect_radicals(&mut out);
        out
    }

    fn collect_radicals<'a>(&'a self, out: &mut Vec<&'a Wff>) {
        match self {
            Af::Assert(w) => out.push(w),
            Af::N(d) => d.collect_radicals(out),
            Af::K(a, b) | Af::A(a, b) | Af::C(a, b) | Af::E(a, b) => {
                a.collect_radicals(out);
                b.collect_radicals(out);
            }
        }
    }
}

impl fmt::Display for AssertiveFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Af::Assert(w) => write!(f, "|-({w})"),
            Af::N(d) => {
                let inner = d.to_string();
                if inner.starts_with(|c: char| c.is_ascii_alphabetic()) {
                    write!(f, "N {inner}")
                } else {
                    write!(f, "N{inner}")
                }
            }
            Af::K(a, b) => write!(f, "K({a}, {b})"),
            Af::A(a, b) => write!(f, "A({a}, {b})"),
            Af::C(a, b) => write!(f, "C({a}, {b})"),
            Af::E(a, b) => write!(f, "E({a}, {b})"),
        }
    }
}

impl Serialize for AssertiveFormula {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Parses an assertive formula; radicals must be basic formulas over `sig`.
pub fn parse_assertive(text: &str, sig: &Signature) -> Result<AssertiveFormula> {
    let tokens = language::lex(text)?;
    let classify = |name: &str| {
        if sig.has_state(name) {
            Some(true)
        } else if sig.has_property(name) {
            Some(false)
        } else {
            None
        }
    };
    let mut p = language::Parser {
        tokens: &tokens,
        pos: 0,
        len: text.len(),
        classify: &classify,
    };
    let d = assertive(&mut p)?;
    if let Some(tok) = p.peek() {
        return Err(p.error_at(tok.pos, "unexpected trailing input").into());
    }
    for w in d.radicals() {
        w.check(sig, language::Fragment::Basic)?;
    }
    Ok(d)
}

fn assertive(p: &mut language::Parser<'_>) -> Result<AssertiveFormula> {
    match p.peek_tok() {
        Some(Tok::Turnstile) => {
            p.pos += 1;
            p.expect(Tok::LParen, "`(` after `|-`")?;
            let (w, _) = p.expr()?;
            p.expect(Tok::RParen, "`)` closing the radical")?;
            Ok(Af::Assert(w))
        }
        Some(Tok::Ident(name)) => {
            let (name, pos) = (name.clone(), p.peek().map_or(0, |t| t.pos));
            if !name.is_empty() && name.chars().all(|c| c == 'N') {
                p.pos += 1;
                let mut d = assertive(p)?;
                for _ in 0..name.len() {
                    d = Af::n(d);
                }
                return Ok(d);
            }
            let ctor: fn(Af, Af) -> Af = match name.as_str() {
                "K" => Af::k,
                "A" => Af::a,
                "C" => Af::c,
                "E" => Af::e,
                _ => {
                    return Err(p
                        .error_at(pos, "expected `|-`, `N`, `K`, `A`, `C` or `E`")
                        .into())
                }
            };
            p.pos += 1;
            p.expect(Tok::LParen, "`(`")?;
            let a = assertive(p)?;
            p.expect(Tok::Comma, "`,`")?;
            let b = assertive(p)?;
            p.expect(Tok::RParen, "`)`")?;
            Ok(ctor(a, b))
        }
        _ => {
            let pos = p.peek().map_or(p.len, |t| t.pos);
            Err(p.error_at(pos, "expected an assertive formula").into())
        }
    }
}

/// Partial map from atoms to truth values; serialized keyed by atom key.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PartialTruthAssignment {
    values: BTreeMap<Atom, bool>,
}

impl Serialize for PartialTruthAssignment {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_map(self.values.iter().map(|(a, v)| (a.key(), v)))
    }
}

impl PartialTruthAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, atom: Atom, value: bool) {
        self.values.insert(atom, value);
    }

    pub fn get(&self, atom: &Atom) -> Option<bool> {
        self.values.get(atom).copied()
    }

    /// Classical value when every atom is defined, `None` otherwise.
    pub fn eval(&self, w: &Wff) -> Option<bool> {
        let mut defined = true;
        w.for_each_atom(&mut |a| defined &= self.values.contains_key(&a));
        if !defined {
            return None;
        }
        Some(classical_value(w, &|a| self.values[&a]))
    }
}

fn classical_value(w: &Wff, v: &impl Fn(Atom) -> bool) -> bool {
    match w {
        Wff::Not(a) => !classical_value(a, v),
        Wff::And(a, b) => classical_value(a, v) && classical_value(b, v),
        Wff::Or(a, b) => classical_value(a, v) || classical_value(b, v),
        Wff::Implies(a, b) => !classical_value(a, v) || classical_value(b, v),
        leaf => v(leaf.as_atom().expect("leaf")),
    }
}

/// A finite family of evaluation points with empirical proof.
pub trait ProofOracle {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, point: usize) -> String;

    /// Atoms proved true or false at the point.
    fn assignment(&self, point: usize) -> Result<PartialTruthAssignment>;

    /// Whether the two points are mutually exclusive, so that anything
    /// justified at `other` is ruled out at `point`.
    fn excludes(&self, point: usize, other: usize) -> Result<bool>;
}

/// How justification propagates through the pragmatic connectives.
pub trait JustificationRules {
    /// Justification value at every point of the oracle's family.
    fn justification<O: ProofOracle + ?Sized>(&self, d: &Af, oracle: &O) -> Result<Vec<bool>>;

    fn justify<O: ProofOracle + ?Sized>(&self, d: &Af, point: usize, oracle: &O) -> Result<bool> {
        self.justification(d, oracle)?
            .get(point)
            .copied()
            .ok_or(PragmaticsError::NoSuchPoint(point))
    }
}

/// `|-ρ` needs a proof of ρ; `Nδ` holds where the point excludes every
/// point justifying δ; `K`/`A` are conjunction/disjunction; `C(δ1, δ2)`
/// holds (everywhere) when δ1 is never justified without δ2;
/// `E = K(C(δ1, δ2), C(δ2, δ1))`.
#[derive(Debug, Clone, Copy, Default)]
pub struct StandardRules;

impl JustificationRules for StandardRules {
    fn justification<O: ProofOracle + ?Sized>(&self, d: &Af, oracle: &O) -> Result<Vec<bool>> {
        let n = oracle.len();
        Ok(match d {
            Af::Assert(w) => (0..n)
                .map(|i| Ok(oracle.assignment(i)?.eval(w) == Some(true)))
                .collect::<Result<_>>()?,
            Af::N(inner) => {
                let j = self.justification(inner, oracle)?;
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let mut ok = true;
                    for (k, &jk) in j.iter().enumerate() {
                        if jk && !oracle.excludes(i, k)? {
                            ok = false;
                            break;
                        }
                    }
                    out.push(ok);
                }
                out
            }
            Af::K(a, b) | Af::A(a, b) => {
                let ja = self.justification(a, oracle)?;
                let jb = self.justification(b, oracle)?;
                let and = matches!(d, Af::K(..));
                ja.iter()
                    .zip(&jb)
                    .map(|(&x, &y)| if and { x && y } else { x || y })
                    .collect()
            }
            Af::C(a, b) => {
                let ja = self.justification(a, oracle)?;
                let jb = self.justification(b, oracle)?;
                let holds = ja.iter().zip(&jb).all(|(&x, &y)| !x || y);
                vec![holds; n]
            }
            Af::E(a, b) => {
                let e = Af::k(
                    Af::c((**a).clone(), (**b).clone()),
                    Af::c((**b).clone(), (**a).clone()),
                );
                self.justification(&e, oracle)?
            }
        })
    }
}

/// `d1 ≺ d2` over the oracle's family: wherever `d1` is justified, so is `d2`.
pub fn pragmatic_preorder<O, R>(d1: &Af, d2: &Af, oracle: &O, rules: &R) -> Result<bool>
where
    O: ProofOracle + ?Sized,
    R: JustificationRules,
{
    let j1 = rules.justification(d1, oracle)?;
    let j2 = rules.justification(d2, oracle)?;
    Ok(j1.iter().zip(&j2).all(|(&a, &b)| !a || b))
}

pub fn pragmatically_equivalent<O, R>(d1: &Af, d2: &Af, oracle: &O, rules: &R) -> Result<bool>
where
    O: ProofOracle + ?Sized,
    R: JustificationRules,
{
    Ok(pragmatic_preorder(d1, d2, oracle, rules)? && pragmatic_preorder(d2, d1, oracle, rules)?)
}

/// Property names bound to projections.
pub type Bindings = BTreeMap<String, Projection>;

fn quantum_assignment(
    bindings: &Bindings,
    s: &QuantumState,
    label: &str,
    tolerance: f64,
) -> Result<PartialTruthAssignment> {
    let mut out = PartialTruthAssignment::new();
    for (name, p) in bindings {
        let b = hilbert::born(s, p)?;
        let t = b >= 1.0 - tolerance;
        let f = b <= tolerance;
        if t && f {
            return Err(PragmaticsError::OracleInconsistent {
                atom: name.clone(),
                point: label.to_string(),
            });
        }
        if t || f {
            out.set(Atom::Property(name.clone()), t);
        }
    }
    Ok(out)
}

/// Finite family of quantum states; `E(x)` is proved true where
/// `born(S, P_E) = 1` and false where it is 0.
#[derive(Debug, Clone)]
pub struct QuantumPointOracle {
    pub bindings: Bindings,
    pub points: Vec<(String, QuantumState)>,
    pub tolerance: f64,
}

impl ProofOracle for QuantumPointOracle {
    fn len(&self) -> usize {
        self.points.len()
    }

    fn label(&self, point: usize) -> String {
        self.points[point].0.clone()
    }

    fn assignment(&self, point: usize) -> Result<PartialTruthAssignment> {
        let (label, s) = self
            .points
            .get(point)
            .ok_or(PragmaticsError::NoSuchPoint(point))?;
        quantum_assignment(&self.bindings, s, label, self.tolerance)
    }

    fn excludes(&self, point: usize, other: usize) -> Result<bool> {
        let a = &self
            .points
            .get(point)
            .ok_or(PragmaticsError::NoSuchPoint(point))?
            .1;
        let b = &self
            .points
            .get(other)
            .ok_or(PragmaticsError::NoSuchPoint(other))?
            .1;
        Ok((a.density() * b.density()).trace().re <= self.tolerance)
    }
}

/// A finite union of subspaces, kept as an antichain of nonzero
/// projections. The empty union contains no state.
#[derive(Debug, Clone)]
pub struct JustificationSet {
    parts: Vec<Projection>,
}

impl JustificationSet {
    pub fn empty() -> Self {
        JustificationSet { parts: Vec::new() }
    }

    pub fn subspace(p: Projection, tolerance: f64) -> Self {
        Self::from_parts(vec![p], tolerance)
    }

    fn from_parts(parts: Vec<Projection>, tolerance: f64) -> Self {
        let parts: Vec<Projection> = parts.into_iter().filter(|p| p.rank() > 0).collect();
        let mut kept: Vec<Projection> = Vec::new();
        for (i, p) in parts.iter().enumerate() {
            let dominated = parts.iter().enumerate().any(|(j, q)| {
                j != i && hilbert::leq(p, q, tolerance) && (!hilbert::leq(q, p, tolerance) || j < i)
            });
            if !dominated {
                kept.push(p.clone());
            }
        }
        JustificationSet { parts: kept }
    }

    pub fn parts(&self) -> &[Projection] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// The set is a single subspace (possibly `{0}`).
    pub fn as_subspace(&self, dim: usize) -> Option<Projection> {
        match self.parts.as_slice() {
            [] => Some(Projection::zero(dim)),
            [p] => Some(p.clone()),
            _ => None,
        }
    }

    pub fn contains_state(&self, s: &QuantumState, tolerance: f64) -> Result<bool> {
        for p in &self.parts {
            if hilbert::born(s, p)? >= 1.0 - tolerance {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// A subspace inside a finite union of subspaces lies inside one of
    /// them, so inclusion is checked part by part.
    pub fn is_subset(&self, other: &JustificationSet, tolerance: f64) -> bool {
        self.parts
            .iter()
            .all(|p| other.parts.iter().any(|q| hilbert::leq(p, q, tolerance)))
    }

    pub fn same_as(&self, other: &JustificationSet, tolerance: f64) -> bool {
        self.is_subset(other, tolerance) && other.is_subset(self, tolerance)
    }

    fn union(&self, other: &JustificationSet, tolerance: f64) -> Self {
        Self::from_parts(
            self.parts.iter().chain(&other.parts).cloned().collect(),
            tolerance,
        )
    }

    fn intersection(&self, other: &JustificationSet, tolerance: f64) -> Result<Self> {
        let mut parts = Vec::new();
        for p in &self.parts {
            for q in &other.parts {
                parts.push(hilbert::meet(p, q, tolerance)?);
            }
        }
        Ok(Self::from_parts(parts, tolerance))
    }

    fn span(&self, dim: usize, tolerance: f64) -> Result<Projection> {
        let mut acc = Projection::zero(dim);
        for p in &self.parts {
            acc = hilbert::join(&acc, p, tolerance)?;
        }
        Ok(acc)
    }
}

/// Analytic oracle over all pure states of `C^n`.
#[derive(Debug, Clone)]
pub struct QuantumOracle {
    bindings: Bindings,
    dim: usize,
    tolerance: f64,
}

impl QuantumOracle {
    pub fn new(bindings: Bindings, dim: usize, tolerance: f64) -> Result<Self> {
        for p in bindings.values() {
            if p.dim() != dim {
                return Err(HilbertError::DimensionMismatch {
                    left: dim,
                    right: p.dim(),
                }
                .into());
            }
        }
        Ok(QuantumOracle {
            bindings,
            dim,
            tolerance,
        })
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Signature whose properties are the bound names.
    pub fn signature(&self) -> Result<Signature> {
        Ok(Signature::new(
            Vec::<String>::new(),
            self.bindings.keys().cloned(),
            Vec::<String>::new(),
            BTreeMap::new(),
        )?)
    }

    fn binding(&self, atom: &Atom) -> Result<&Projection> {
        match atom {
            Atom::Property(p) => self
                .bindings
                .get(p)
                .ok_or_else(|| PragmaticsError::Unbound(atom.key())),
            other => Err(PragmaticsError::Unbound(other.key())),
        }
    }

    /// Pure states at which `d` is justified.
    pub fn justification_set(&self, d: &Af) -> Result<JustificationSet> {
        let tol = self.tolerance;
        Ok(match d {
            Af::Assert(w) => self.proof_set(w)?,
            Af::N(inner) => {
                let j = self.justification_set(inner)?;
                JustificationSet::subspace(hilbert::ortho(&j.span(self.dim, tol)?), tol)
            }
            Af::K(a, b) => self
                .justification_set(a)?
                .intersection(&self.justification_set(b)?, tol)?,
            Af::A(a, b) => self
                .justification_set(a)?
                .union(&self.justification_set(b)?, tol),
            Af::C(a, b) => {
                if self
                    .justification_set(a)?
                    .is_subset(&self.justification_set(b)?, tol)
                {
                    self.everything()
                } else {
                    JustificationSet::empty()
                }
            }
            Af::E(a, b) => {
                let ja = self.justification_set(a)?;
                let jb = self.justification_set(b)?;
                if ja.same_as(&jb, tol) {
                    self.everything()
                } else {
                    JustificationSet::empty()
                }
            }
        })
    }

    fn everything(&self) -> JustificationSet {
        JustificationSet::subspace(Projection::identity(self.dim), self.tolerance)
    }

    /// States where ρ is proved true: for each classical valuation of its
    /// atoms making ρ true, the states proving exactly that valuation.
    fn proof_set(&self, w: &Wff) -> Result<JustificationSet> {
        let atoms: Vec<Atom> = w.atoms().into_iter().collect();
        if atoms.len() > MAX_RADICAL_ATOMS {
            return Err(PragmaticsError::TooManyAtoms(atoms.len()));
        }
        let projections: Vec<&Projection> = atoms
            .iter()
            .map(|a| self.binding(a))
            .collect::<Result<_>>()?;
        let mut parts = Vec::new();
        for mask in 0u32..(1u32 << atoms.len()) {
            let bit = |a: &Atom| {
                let i = atoms.iter().position(|b| b == a).expect("atom of w");
                mask & (1 << i) != 0
            };
            if !classical_value(w, &|a| bit(&a)) {
                continue;
            }
            let mut acc = Projection::identity(self.dim);
            for (i, p) in projections.iter().enumerate() {
                let side = if mask & (1 << i) != 0 {
                    (*p).clone()
                } else {
                    hilbert::ortho(p)
                };
                acc = hilbert::meet(&acc, &side, self.tolerance)?;
            }
            parts.push(acc);
        }
        Ok(JustificationSet::from_parts(parts, self.tolerance))
    }

    pub fn justify(&self, d: &Af, s: &QuantumState) -> Result<bool> {
        if s.dim() != self.dim {
            return Err(HilbertError::DimensionMismatch {
                left: self.dim,
                right: s.dim(),
            }
            .into());
        }
        self.justification_set(d)?.contains_state(s, self.tolerance)
    }

    /// Partial truth assignment of the bound atoms at `s`.
    pub fn assignment(&self, s: &QuantumState) -> Result<PartialTruthAssignment> {
        quantum_assignment(&self.bindings, s, "state", self.tolerance)
    }

    pub fn preorder(&self, d1: &Af, d2: &Af) -> Result<bool> {
        Ok(self
            .justification_set(d1)?
            .is_subset(&self.justification_set(d2)?, self.tolerance))
    }

    pub fn equivalent(&self, d1: &Af, d2: &Af) -> Result<bool> {
        Ok(self.preorder(d1, d2)? && self.preorder(d2, d1)?)
    }
}

/// Pointwise re-evaluation of the analytic oracle at sampled states.
#[derive(Debug, Clone, Serialize)]
pub struct SpotCheckReport {
    pub samples: usize,
    pub formulas: usize,
    pub justified_hits: usize,
    pub mismatches: Vec<(String, usize)>,
}

/// Compares analytic membership with a direct pointwise evaluation
/// (Born values for `|-`, truth tables for `K`/`A`, orthogonality to the
/// argument's justification set for `N`). Half of the samples are Haar
/// random; the rest are drawn inside the subspaces occurring in the
/// justification sets, so justified cases are exercised too.
pub fn spot_check<R: Rng + ?Sized>(
    oracle: &QuantumOracle,
    formulas: &[Af],
    samples: usize,
    rng: &mut R,
) -> Result<SpotCheckReport> {
    let tol = oracle.tolerance;
    let mut subspaces: Vec<Projection> = Vec::new();
    for d in formulas {
        subspaces.extend(oracle.justification_set(d)?.parts().iter().cloned());
    }
    let mut states = Vec::with_capacity(samples);
    for k in 0..samples {
        if k % 2 == 1 && !subspaces.is_empty() {
            let p = &subspaces[rng.random_range(0..subspaces.len())];
            states.push(random_state_in(p, rng));
        } else {
            states.push(QuantumState::haar_random(oracle.dim, rng));
        }
    }
    let mut report = SpotCheckReport {
        samples,
        formulas: formulas.len(),
        justified_hits: 0,
        mismatches: Vec::new(),
    };
    for d in formulas {
        for (k, s) in states.iter().enumerate() {
            let analytic = oracle.justify(d, s)?;
            let direct = pointwise(oracle, d, s, tol)?;
            report.justified_hits += usize::from(direct);
            if analytic != direct {
                report.mismatches.push((d.to_string(), k));
            }
        }
    }
    Ok(report)
}

fn random_state_in<R: Rng + ?Sized>(p: &Projection, rng: &mut R) -> QuantumState {
    let basis = p.range_basis();
    loop {
        let mut v = CVector::zeros(p.dim());
        for b in &basis {
            let c = C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5);
            v += b * c;
        }
        if let Ok(s) = QuantumState::pure(&v) {
            return s;
        }
    }
}

fn pointwise(oracle: &QuantumOracle, d: &Af, s: &QuantumState, tol: f64) -> Result<bool> {
    Ok(match d {
        Af::Assert(w) => oracle.assignment(s)?.eval(w) == Some(true),
        Af::N(inner) => {
            let j = oracle.justification_set(inner)?;
            let mut ok = true;
            for p in j.parts() {
                ok &= hilbert::born(s, p)? <= tol;
            }
            ok
        }
        Af::K(a, b) => pointwise(oracle, a, s, tol)? && pointwise(oracle, b, s, tol)?,
        Af::A(a, b) => pointwise(oracle, a, s, tol)? || pointwise(oracle, b, s, tol)?,
        Af::C(..) | Af::E(..) => oracle.justify(d, s)?,
    })
}

/// One equivalence class of the depth-bounded quantum fragment.
#[derive(Debug, Clone, Serialize)]
pub struct FragmentClass {
    pub label: String,
    pub representative: Option<AssertiveFormula>,
    pub depth: usize,
    pub rank: usize,
    #[serde(skip)]
    pub subspace: Projection,
}

#[derive(Debug, Clone)]
pub struct FragmentStructure {
    pub structure: OrthoStructure,
    pub classes: Vec<FragmentClass>,
    /// Formulas built during enumeration, before deduplication.
    pub enumerated: usize,
    /// Classes added past the depth bound to close under `N`.
    pub closure_added: usize,
}

pub const ABSURD: &str = "⊥";
pub const TRIVIAL: &str = "⊤";

/// Enumerates `|-E(x)` for the bound atoms, then closes under `N` and `K`
/// up to `depth`, deduplicating by justification set. Every class is a
/// subspace. The absurd and trivial classes are always present; classes
/// whose `N` image falls past the bound are completed with one more `N`.
pub fn quantum_fragment_structure(
    oracle: &QuantumOracle,
    depth: usize,
    budget: usize,
) -> Result<FragmentStructure> {
    let tol = oracle.tolerance;
    let dim = oracle.dim;
    let mut classes = vec![
        FragmentClass {
            label: ABSURD.into(),
            representative: None,
            depth: 0,
            rank: 0,
            subspace: Projection::zero(dim),
        },
        FragmentClass {
            label: TRIVIAL.into(),
            representative: None,
            depth: 0,
            rank: dim,
            subspace: Projection::identity(dim),
        },
    ];
    let mut enumerated = 0usize;
    let find = |classes: &[FragmentClass], p: &Projection| {
        classes.iter().position(|c| c.subspace.approx_eq(p, tol))
    };
    let push = |classes: &mut Vec<FragmentClass>, d: Af, level: usize| -> Result<()> {
        let j = oracle.justification_set(&d)?;
        let p = j
            .as_subspace(dim)
            .expect("N/K formulas have subspace justification sets");
        if find(classes, &p).is_none() {
            classes.push(FragmentClass {
                label: d.to_string(),
                rank: p.rank(),
                representative: Some(d),
                depth: level,
                subspace: p,
            });
        }
        Ok(())
    };
    for name in oracle.bindings.keys() {
        enumerated += 1;
        push(&mut classes, Af::assert(Wff::property(name.clone())), 0)?;
    }
    for level in 1..=depth {
        let reps: Vec<Af> = classes
            .iter()
            .filter_map(|c| c.representative.clone())
            .collect();
        let mut fresh = Vec::new();
        for r in &reps {
            fresh.push(Af::n(r.clone()));
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                fresh.push(Af::k(reps[i].clone(), reps[j].clone()));
            }
        }
        enumerated += fresh.len();
        if enumerated > budget {
            return Err(PragmaticsError::Budget(budget));
        }
        let before = classes.len();
        for d in fresh {
            push(&mut classes, d, level)?;
        }
        if classes.len() == before {
            break;
        }
    }
    let mut closure_added = 0;
    let mut i = 0;
    while i < classes.len() {
        let o = hilbert::ortho(&classes[i].subspace);
        if find(&classes, &o).is_none() {
            let d = Af::n(
                classes[i]
                    .representative
                    .clone()
                    .expect("bounds are ortho-closed"),
            );
            let level = classes[i].depth + 1;
            push(&mut classes, d, level)?;
            closure_added += 1;
        }
        i += 1;
    }
    let n = classes.len();
    let leq = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| hilbert::leq(&classes[a].subspace, &classes[b].subspace, tol))
                .collect()
        })
        .collect();
    let ortho = (0..n)
        .map(|a| find(&classes, &hilbert::ortho(&classes[a].subspace)).expect("closed"))
        .collect();
    let structure = OrthoStructure::new(
        classes.iter().map(|c| c.label.clone()).collect(),
        leq,
        ortho,
    )?;
    Ok(FragmentStructure {
        structure,
        classes,
        enumerated,
        closure_added,
    })
}

/// Atoms used by any radical of `d`.
pub fn radical_atoms(d: &Af) -> BTreeSet<Atom> {
    d.radicals().into_iter().flat_map(|w| w.atoms()).collect()
}
