//! Formulas of the single-variable language `L(x)`.
//!
//! Every atom is a monadic predicate applied to the implicit variable `x`:
//! a state `S(x)`, a property `E(x)`, or a contextual property `E[c](x)`.
//! The concrete grammar is
//!
//! ```text
//! wff  := atom | "~" wff | "(" wff bin wff ")" | wff bin wff
//! bin  := "&" | "|" | "->"
//! atom := ident "(" "x" ")" | ident "[" ident "]" "(" "x" ")"
//! ```
//!
//! with precedence `~` > `&` > `|` > `->`, all binary connectives left
//! associative. The printer parenthesizes every binary node, so its output
//! always parses back to the same tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LanguageError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown {kind} identifier `{name}`")]
    UnknownIdentifier { kind: &'static str, name: String },
    #[error("{construct} is not part of the {fragment} alphabet")]
    ForbiddenInFragment {
        construct: &'static str,
        fragment: Fragment,
    },
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
}

pub type Result<T> = std::result::Result<T, LanguageError>;

/// Which alphabet is active when reading a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Fragment {
    /// States and plain properties, connectives `~ & | ->`.
    #[default]
    Basic,
    /// States and contextual properties, connectives `~ & |` only.
    Contextual,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fragment::Basic => f.write_str("basic"),
            Fragment::Contextual => f.write_str("contextual"),
        }
    }
}

/// An atomic predicate, used as the key of extension maps.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atom {
    State(String),
    Property(String),
    Contextual { property: String, context: String },
}

impl Atom {
    pub fn contextual(property: impl Into<String>, context: impl Into<String>) -> Self {
        Atom::Contextual {
            property: property.into(),
            context: context.into(),
        }
    }

    /// Property name for property and contextual atoms.
    pub fn property(&self) -> Option<&str> {
        match self {
            Atom::State(_) => None,
            Atom::Property(p) | Atom::Contextual { property: p, .. } => Some(p),
        }
    }

    /// Parses the key form used in model documents: `S`, `E` or `E[c]`.
    /// Whether a bare name is a state or a property is decided by `sig`.
    pub fn from_key(key: &str, sig: &Signature) -> Result<Atom> {
        if let Some(open) = key.find('[') {
            let property = &key[..open];
            let context =
                key[open + 1..]
                    .strip_suffix(']')
                    .ok_or_else(|| LanguageError::Syntax {
                        pos: key.len(),
                        msg: format!("unterminated context in atom key `{key}`"),
                    })?;
            sig.require_property(property)?;
            sig.require_context(context)?;
            return Ok(Atom::contextual(property, context));
        }
        if sig.has_state(key) {
            Ok(Atom::State(key.to_string()))
        } else if sig.has_property(key) {
            Ok(Atom::Property(key.to_string()))
        } else {
            Err(LanguageError::UnknownIdentifier {
                kind: "atom",
                name: key.to_string(),
            })
        }
    }

    /// Inverse of [`Atom::from_key`].
    pub fn key(&self) -> String {
        match self {
            Atom::State(s) | Atom::Property(s) => s.clone(),
            Atom::Contextual { property, context } => format!("{property}[{context}]"),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x)", self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservableTag {
    pub observable: String,
    pub values: BTreeSet<i64>,
}

/// The non-logical vocabulary: states, properties, mu-contexts, measurement
/// procedures and the optional observable reading of each property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SignatureDoc", into = "SignatureDoc")]
pub struct Signature {
    states: BTreeSet<String>,
    properties: BTreeSet<String>,
    contexts: BTreeSet<String>,
    procedures: BTreeMap<String, BTreeSet<String>>,
    observables: BTreeMap<String, BTreeSet<i64>>,
    observable_tags: BTreeMap<String, ObservableTag>,
}

/// Serialized form of a [`Signature`]. Properties without an explicit
/// procedure list get a private procedure named `M_<property>`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SignatureDoc {
    #[serde(default)]
    pub states: Vec<String>,
    #[serde(default)]
    pub properties: Vec<String>,
    #[serde(default)]
    pub contexts: Vec<String>,
    #[serde(default)]
    pub procedures: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observables: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observable_tags: BTreeMap<String, ObservableTag>,
}

impl TryFrom<SignatureDoc> for Signature {
    type Error = LanguageError;

    fn try_from(doc: SignatureDoc) -> Result<Self> {
        let mut sig = Signature::new(doc.states, doc.properties, doc.contexts, doc.procedures)?;
        for (name, domain) in doc.observables {
            sig.declare_observable(name, domain)?;
        }
        for (property, tag) in doc.observable_tags {
            sig.tag_property(property, tag)?;
        }
        Ok(sig)
    }
}

impl From<Signature> for SignatureDoc {
    fn from(sig: Signature) -> Self {
        SignatureDoc {
            states: sig.states.into_iter().collect(),
            properties: sig.properties.into_iter().collect(),
            contexts: sig.contexts.into_iter().collect(),
            procedures: sig
                .procedures
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
            observables: sig
                .observables
                .into_iter()
                .map(|(k, v)| (k, v.into_iter().collect()))
                .collect(),
            observable_tags: sig.observable_tags,
        }
    }
}

fn valid_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Signature {
    pub fn new<S, P, C>(
        states: S,
        properties: P,
        contexts: C,
        procedures: BTreeMap<String, Vec<String>>,
    ) -> Result<Self>
    where
        S: IntoIterator,
        S::Item: Into<String>,
        P: IntoIterator,
        P::Item: Into<String>,
        C: IntoIterator,
        C::Item: Into<String>,
    {
        let states: BTreeSet<String> = states.into_iter().map(Into::into).collect();
        let properties: BTreeSet<String> = properties.into_iter().map(Into::into).collect();
        let contexts: BTreeSet<String> = contexts.into_iter().map(Into::into).collect();
        for name in states.iter().chain(&properties).chain(&contexts) {
            if !valid_ident(name) {
                return Err(LanguageError::InvalidSignature(format!(
                    "`{name}` is not a valid identifier"
                )));
            }
        }
        if let Some(shared) = states.intersection(&properties).next() {
            return Err(LanguageError::InvalidSignature(format!(
                "`{shared}` is declared both as a state and as a property"
            )));
        }
        for property in procedures.keys() {
            if !properties.contains(property) {
                return Err(LanguageError::InvalidSignature(format!(
                    "procedures declared for unknown property `{property}`"
                )));
            }
        }
        let mut procs = BTreeMap::new();
        for property in &properties {
            let set: BTreeSet<String> = match procedures.get(property) {
                Some(list) => list.iter().cloned().collect(),
                None => [format!("M_{property}")].into_iter().collect(),
            };
            if set.is_empty() {
                return Err(LanguageError::InvalidSignature(format!(
                    "property `{property}` has no measurement procedure"
                )));
            }
            procs.insert(property.clone(), set);
        }
        Ok(Signature {
            states,
            properties,
            contexts,
            procedures: procs,
            observables: BTreeMap::new(),
            observable_tags: BTreeMap::new(),
        })
    }

    pub fn declare_observable(
        &mut self,
        name: impl Into<String>,
        domain: impl IntoIterator<Item = i64>,
    ) -> Result<()> {
        let name = name.into();
        let domain: BTreeSet<i64> = domain.into_iter().collect();
        if domain.is_empty() {
            return Err(LanguageError::InvalidSignature(format!(
                "observable `{name}` has an empty value domain"
            )));
        }
        self.observables.insert(name, domain);
        Ok(())
    }

    /// Attach the classical reading `(A, Δ)` to a property.
    pub fn tag_property(&mut self, property: impl Into<String>, tag: ObservableTag) -> Result<()> {
        let property = property.into();
        self.require_property(&property)?;
        let domain = self.observables.get(&tag.observable).ok_or_else(|| {
            LanguageError::InvalidSignature(format!(
                "property `{property}` tagged with undeclared observable `{}`",
                tag.observable
            ))
        })?;
        if !tag.values.is_subset(domain) {
            return Err(LanguageError::InvalidSignature(format!(
                "value set of `{property}` is not a subset of the domain of `{}`",
                tag.observable
            )));
        }
        self.observable_tags.insert(property, tag);
        Ok(())
    }

    pub fn states(&self) -> impl Iterator<Item = &str> {
        self.states.iter().map(String::as_str)
    }

    pub fn properties(&self) -> impl Iterator<Item = &str> {
        self.properties.iter().map(String::as_str)
    }

    pub fn contexts(&self) -> impl Iterator<Item = &str> {
        self.contexts.iter().map(String::as_str)
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.states.contains(name)
    }

    pub fn has_property(&self, name: &str) -> bool {
        self.properties.contains(name)
    }

    pub fn has_context(&self, name: &str) -> bool {
        self.contexts.contains(name)
    }

    pub fn require_state(&self, name: &str) -> Result<()> {
        if self.has_state(name) {
            Ok(())
        } else {
            Err(LanguageError::UnknownIdentifier {
                kind: "state",
                name: name.to_string(),
            })
        }
    }

    pub fn require_property(&self, name: &str) -> Result<()> {
        if self.has_property(name) {
            Ok(())
        } else {
            Err(LanguageError::UnknownIdentifier {
                kind: "property",
                name: name.to_string(),
            })
        }
    }

    pub fn require_context(&self, name: &str) -> Result<()> {
        if self.has_context(name) {
            Ok(())
        } else {
            Err(LanguageError::UnknownIdentifier {
                kind: "context",
                name: name.to_string(),
            })
        }
    }

    /// The procedure set `M_E` of a property.
    pub fn procedures_of(&self, property: &str) -> Result<&BTreeSet<String>> {
        self.procedures
            .get(property)
            .ok_or_else(|| LanguageError::UnknownIdentifier {
                kind: "property",
                name: property.to_string(),
            })
    }

    pub fn observable_tag(&self, property: &str) -> Option<&ObservableTag> {
        self.observable_tags.get(property)
    }

    pub fn observable_domain(&self, observable: &str) -> Option<&BTreeSet<i64>> {
        self.observables.get(observable)
    }

    /// All atoms of the signature. Contextual atoms are included for every
    /// (property, context) pair.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut atoms: Vec<Atom> = self.states.iter().cloned().map(Atom::State).collect();
        atoms.extend(self.properties.iter().cloned().map(Atom::Property));
        for p in &self.properties {
            for c in &self.contexts {
                atoms.push(Atom::contextual(p.clone(), c.clone()));
            }
        }
        atoms
    }
}

/// Abstract syntax of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Wff {
    State(String),
    Property(String),
    Contextual(String, String),
    Not(Box<Wff>),
    And(Box<Wff>, Box<Wff>),
    Or(Box<Wff>, Box<Wff>),
    Implies(Box<Wff>, Box<Wff>),
}

impl Wff {
    pub fn state(name: impl Into<String>) -> Wff {
        Wff::State(name.into())
    }

    pub fn property(name: impl Into<String>) -> Wff {
        Wff::Property(name.into())
    }

    pub fn contextual(property: impl Into<String>, context: impl Into<String>) -> Wff {
        Wff::Contextual(property.into(), context.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(w: Wff) -> Wff {
        Wff::Not(Box::new(w))
    }

    pub fn and(a: Wff, b: Wff) -> Wff {
        Wff::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Wff, b: Wff) -> Wff {
        Wff::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Wff, b: Wff) -> Wff {
        Wff::Implies(Box::new(a), Box::new(b))
    }

    pub fn from_atom(atom: &Atom) -> Wff {
        match atom {
            Atom::State(s) => Wff::State(s.clone()),
            Atom::Property(p) => Wff::Property(p.clone()),
            Atom::Contextual { property, context } => {
                Wff::Contextual(property.clone(), context.clone())
            }
        }
    }

    /// The atom at this node, if it is a leaf.
    pub fn as_atom(&self) -> Option<Atom> {
        match self {
            Wff::State(s) => Some(Atom::State(s.clone())),
            Wff::Property(p) => Some(Atom::Property(p.clone())),
            Wff::Contextual(p, c) => Some(Atom::contextual(p.clone(), c.clone())),
            _ => None,
        }
    }

    /// Visits every atom occurrence, left to right.
    pub fn for_each_atom(&self, f: &mut impl FnMut(Atom)) {
        match self {
            Wff::Not(a) => a.for_each_atom(f),
            Wff::And(a, b) | Wff::Or(a, b) | Wff::Implies(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
            leaf => f(leaf.as_atom().expect("leaf")),
        }
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut out = BTreeSet::new();
        self.for_each_atom(&mut |a| {
            out.insert(a);
        });
        out
    }

    /// Properties occurring in the formula, plain or contextual.
    pub fn properties(&self) -> BTreeSet<String> {
        self.atoms()
            .into_iter()
            .filter_map(|a| a.property().map(str::to_string))
            .collect()
    }

    pub fn contains_state(&self) -> bool {
        self.atoms().iter().any(|a| matches!(a, Atom::State(_)))
    }

    /// Rebinds every contextual atom to `context`.
    pub fn at_context(&self, context: &str) -> Wff {
        self.map_atoms(&|atom| match atom {
            Wff::Contextual(p, _) => Wff::Contextual(p.clone(), context.to_string()),
            other => other.clone(),
        })
    }

    /// Replaces every leaf by `f(leaf)`.
    pub fn map_atoms(&self, f: &impl Fn(&Wff) -> Wff) -> Wff {
        match self {
            Wff::Not(a) => Wff::not(a.map_atoms(f)),
            Wff::And(a, b) => Wff::and(a.map_atoms(f), b.map_atoms(f)),
            Wff::Or(a, b) => Wff::or(a.map_atoms(f), b.map_atoms(f)),
            Wff::Implies(a, b) => Wff::implies(a.map_atoms(f), b.map_atoms(f)),
            leaf => f(leaf),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Wff::Not(a) => 1 + a.depth(),
            Wff::And(a, b) | Wff::Or(a, b) | Wff::Implies(a, b) => 1 + a.depth().max(b.depth()),
            _ => 0,
        }
    }

    /// Checks identifiers against `sig` and constructs against `fragment`.
    pub fn check(&self, sig: &Signature, fragment: Fragment) -> Result<()> {
        match self {
            Wff::State(s) => sig.require_state(s),
            Wff::Property(p) => {
                if fragment == Fragment::Contextual {
                    return Err(LanguageError::ForbiddenInFragment {
                        construct: "a property atom without context",
                        fragment,
                    });
                }
                sig.require_property(p)
            }
            Wff::Contextual(p, c) => {
                if fragment == Fragment::Basic {
                    return Err(LanguageError::ForbiddenInFragment {
                        construct: "a contextual property atom",
                        fragment,
                    });
                }
                sig.require_property(p)?;
                sig.require_context(c)
            }
            Wff::Not(a) => a.check(sig, fragment),
            Wff::And(a, b) | Wff::Or(a, b) => {
                a.check(sig, fragment)?;
                b.check(sig, fragment)
            }
            Wff::Implies(a, b) => {
                if fragment == Fragment::Contextual {
                    return Err(LanguageError::ForbiddenInFragment {
                        construct: "the connective `->`",
                        fragment,
                    });
                }
                a.check(sig, fragment)?;
                b.check(sig, fragment)
            }
        }
    }
}

impl fmt::Display for Wff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wff::State(s) | Wff::Property(s) => write!(f, "{s}(x)"),
            Wff::Contextual(p, c) => write!(f, "{p}[{c}](x)"),
            Wff::Not(a) => write!(f, "~{a}"),
            Wff::And(a, b) => write!(f, "({a} & {b})"),
            Wff::Or(a, b) => write!(f, "({a} | {b})"),
            Wff::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

/// Canonical rendering; the inverse of [`parse`].
pub fn print(w: &Wff) -> String {
    w.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentReport {
    /// No state atom occurs.
    pub in_phi: bool,
    pub contextual: bool,
    pub uses_implies: bool,
    /// Atom occurrences with multiplicity, keyed by atom key.
    pub atoms: BTreeMap<String, usize>,
}

pub fn fragment_of(w: &Wff) -> FragmentReport {
    let mut atoms = BTreeMap::new();
    let mut in_phi = true;
    let mut contextual = false;
    w.for_each_atom(&mut |a| {
        match &a {
            Atom::State(_) => in_phi = false,
            Atom::Contextual { .. } => contextual = true,
            Atom::Property(_) => {}
        }
        *atoms.entry(a.key()).or_insert(0) += 1;
    });
    FragmentReport {
        in_phi,
        contextual,
        uses_implies: uses_implies(w),
        atoms,
    }
}

fn uses_implies(w: &Wff) -> bool {
    match w {
        Wff::Implies(..) => true,
        Wff::Not(a) => uses_implies(a),
        Wff::And(a, b) | Wff::Or(a, b) => uses_implies(a) || uses_implies(b),
        _ => false,
    }
}

/// Parses `text` and resolves its identifiers in `sig`.
pub fn parse(text: &str, sig: &Signature, fragment: Fragment) -> Result<Wff> {
    let wff = parse_unresolved(text, &|name| {
        if sig.has_state(name) {
            Some(true)
        } else if sig.has_property(name) {
            Some(false)
        } else {
            None
        }
    })?;
    wff.check(sig, fragment)?;
    Ok(wff)
}

/// Parses without a signature; `classify` reports whether a bare name is a
/// state (`Some(true)`), a property (`Some(false)`) or unknown.
pub(crate) fn parse_unresolved(text: &str, classify: &dyn Fn(&str) -> Option<bool>) -> Result<Wff> {
    let tokens = lex(text)?;
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        len: text.len(),
        classify,
    };
    let (wff, _) = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(parser.error_at(tok.pos, "unexpected trailing input"));
    }
    Ok(wff)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Not,
    And,
    Or,
    Implies,
    Comma,
    Turnstile,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn lex(text: &str) -> Result<Vec<Token>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBracket,
            b']' => Tok::RBracket,
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b',' => Tok::Comma,
            b'|' if bytes.get(i + 1) == Some(&b'-') => {
                i += 1;
                Tok::Turnstile
            }
            b'|' => Tok::Or,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Implies
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i + 1 < bytes.len()
                    && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_')
                {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                return Err(LanguageError::Syntax {
                    pos,
                    msg: format!(
                        "unexpected character `{}`",
                        text[pos..].chars().next().unwrap()
                    ),
                })
            }
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

pub(crate) struct Parser<'a> {
    pub tokens: &'a [Token],
    pub pos: usize,
    pub len: usize,
    pub classify: &'a dyn Fn(&str) -> Option<bool>,
}

impl<'a> Parser<'a> {
    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    pub fn peek_tok(&self) -> Option<&'a Tok> {
        self.peek().map(|t| &t.tok)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.len, |t| t.pos)
    }

    pub fn error_at(&self, pos: usize, msg: &str) -> LanguageError {
        LanguageError::Syntax {
            pos,
            msg: msg.to_string(),
        }
    }

    pub fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        match self.peek() {
            Some(t) if t.tok == tok => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error_at(self.here(), &format!("expected {what}"))),
        }
    }

    pub fn ident(&mut self) -> Result<(String, usize)> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(name),
                pos,
            }) => {
                self.pos += 1;
                Ok((name.clone(), *pos))
            }
            _ => Err(self.error_at(self.here(), "expected identifier")),
        }
    }

    /// Returns the formula and whether a binary connective was consumed at
    /// this nesting level.
    pub fn expr(&mut self) -> Result<(Wff, bool)> {
        let (mut lhs, mut binary) = self.disjunction()?;
        while self.peek_tok() == Some(&Tok::Implies) {
            self.pos += 1;
            let (rhs, _) = self.disjunction()?;
            lhs = Wff::implies(lhs, rhs);
            binary = true;
        }
        Ok((lhs, binary))
    }

    fn disjunction(&mut self) -> Result<(Wff, bool)> {
        let (mut lhs, mut binary) = self.conjunction()?;
        while self.peek_tok() == Some(&Tok::Or) {
            self.pos += 1;
            let (rhs, _) = self.conjunction()?;
            lhs = Wff::or(lhs, rhs);
            binary = true;
        }
        Ok((lhs, binary))
    }

    fn conjunction(&mut self) -> Result<(Wff, bool)> {
        let mut lhs = self.unary()?;
        let mut binary = false;
        while self.peek_tok() == Some(&Tok::And) {
            self.pos += 1;
            let rhs = self.unary()?;
            lhs = Wff::and(lhs, rhs);
            binary = true;
        }
        Ok((lhs, binary))
    }

    fn unary(&mut self) -> Result<Wff> {
        match self.peek_tok() {
            Some(Tok::Not) => {
                self.pos += 1;
                Ok(Wff::not(self.unary()?))
            }
            Some(Tok::LParen) => {
                let open = self.here();
                self.pos += 1;
                let (inner, binary) = self.expr()?;
                if !binary {
                    return Err(self.error_at(open, "parentheses must enclose a binary formula"));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            Some(Tok::Ident(_)) => self.atom(),
            _ => Err(self.error_at(self.here(), "expected a formula")),
        }
    }

    fn atom(&mut self) -> Result<Wff> {
        let (name, _) = self.ident()?;
        let context = if self.peek_tok() == Some(&Tok::LBracket) {
            self.pos += 1;
            let (c, _) = self.ident()?;
            self.expect(Tok::RBracket, "`]`")?;
            Some(c)
        } else {
            None
        };
        self.expect(Tok::LParen, "`(` before the variable")?;
        match self.ident() {
            Ok((v, _)) if v == "x" => {}
            _ => return Err(self.error_at(self.here(), "expected the variable `x`")),
        }
        self.expect(Tok::RParen, "`)` after the variable")?;
        if let Some(c) = context {
            return Ok(Wff::Contextual(name, c));
        }
        match (self.classify)(&name) {
            Some(true) => Ok(Wff::State(name)),
            Some(false) => Ok(Wff::Property(name)),
            None => Err(LanguageError::UnknownIdentifier {
                kind: "predicate",
                name,
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new(
            ["S1", "S2"],
            ["E1", "E2", "E3"],
            ["c1", "c2"],
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn parses_state_atom() {
        assert_eq!(
            parse("S1(x)", &sig(), Fragment::Basic).unwrap(),
            Wff::state("S1")
        );
    }

    #[test]
    fn parses_contextual_conjunction() {
        let w = parse("E1[c1](x) & ~E2[c1](x)", &sig(), Fragment::Contextual).unwrap();
        assert_eq!(
            w,
            Wff::and(
                Wff::contextual("E1", "c1"),
                Wff::not(Wff::contextual("E2", "c1"))
            )
        );
    }

    #[test]
    fn implication_is_not_in_the_contextual_alphabet() {
        let sig = sig();
        let err = parse("E1[c1](x) -> E2[c1](x)", &sig, Fragment::Contextual).unwrap_err();
        assert!(matches!(err, LanguageError::ForbiddenInFragment { .. }));
        assert!(parse("E1(x) -> E2(x)", &sig, Fragment::Basic).is_ok());
    }

    #[test]
    fn contextual_atoms_need_the_contextual_alphabet() {
        let err = parse("E1[c1](x)", &sig(), Fragment::Basic).unwrap_err();
        assert!(matches!(err, LanguageError::ForbiddenInFragment { .. }));
    }

    #[test]
    fn printing() {
        assert_eq!(print(&Wff::state("S1")), "S1(x)");
        assert_eq!(print(&Wff::not(Wff::property("E1"))), "~E1(x)");
        let w = Wff::and(
            Wff::property("E1"),
            Wff::or(Wff::property("E2"), Wff::property("E3")),
        );
        assert_eq!(print(&w), "(E1(x) & (E2(x) | E3(x)))");
    }

    #[test]
    fn precedence_and_associativity() {
        let s = sig();
        let w = parse(
            "E1(x) | E2(x) & E3(x) -> S1(x) -> S2(x)",
            &s,
            Fragment::Basic,
        )
        .unwrap();
        let expected = Wff::implies(
            Wff::implies(
                Wff::or(
                    Wff::property("E1"),
                    Wff::and(Wff::property("E2"), Wff::property("E3")),
                ),
                Wff::state("S1"),
            ),
            Wff::state("S2"),
        );
        assert_eq!(w, expected);
        let w = parse("~E1(x) & E2(x)", &s, Fragment::Basic).unwrap();
        assert_eq!(
            w,
            Wff::and(Wff::not(Wff::property("E1")), Wff::property("E2"))
        );
    }

    #[test]
    fn errors_carry_positions_and_names() {
        let s = sig();
        match parse("E1(x) & ", &s, Fragment::Basic) {
            Err(LanguageError::Syntax { pos, .. }) => assert_eq!(pos, 8),
            other => panic!("unexpected {other:?}"),
        }
        match parse("E1(x) & E9(x)", &s, Fragment::Basic) {
            Err(LanguageError::UnknownIdentifier { name, .. }) => assert_eq!(name, "E9"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse("E1(y)", &s, Fragment::Basic).is_err());
        assert!(parse("(E1(x))", &s, Fragment::Basic).is_err());
        assert!(parse("E1[c9](x)", &s, Fragment::Contextual).is_err());
    }

    #[test]
    fn fragment_classification() {
        let s = sig();
        let r = fragment_of(&parse("E1(x) | E2(x)", &s, Fragment::Basic).unwrap());
        assert!(r.in_phi && !r.contextual);
        let r = fragment_of(&parse("S1(x) & E1(x)", &s, Fragment::Basic).unwrap());
        assert!(!r.in_phi);
        let r = fragment_of(&parse("E1[c1](x)", &s, Fragment::Contextual).unwrap());
        assert!(r.in_phi && r.contextual);
        let r = fragment_of(&parse("(E1(x) & E1(x)) -> S1(x)", &s, Fragment::Basic).unwrap());
        assert_eq!(r.atoms["E1"], 2);
        assert!(r.uses_implies);
    }

    #[test]
    fn signature_invariants() {
        assert!(Signature::new(["A"], ["A"], Vec::<String>::new(), BTreeMap::new()).is_err());
        let mut procs = BTreeMap::new();
        procs.insert("E".to_string(), vec![]);
        assert!(Signature::new(["S"], ["E"], Vec::<String>::new(), procs).is_err());
        let mut s = sig();
        s.declare_observable("A", [1, 2, 3]).unwrap();
        let ok = ObservableTag {
            observable: "A".into(),
            values: [1, 2].into_iter().collect(),
        };
        assert!(s.tag_property("E1", ok).is_ok());
        let bad = ObservableTag {
            observable: "A".into(),
            values: [4].into_iter().collect(),
        };
        assert!(s.tag_property("E2", bad).is_err());
    }

    #[test]
    fn signature_document_round_trip() {
        let json = r#"{"states":["S"],"properties":["E","F"],"contexts":["c"],
            "procedures":{"E":["M1"]}}"#;
        let sig: Signature = serde_json::from_str(json).unwrap();
        assert_eq!(
            sig.procedures_of("F").unwrap().iter().next().unwrap(),
            "M_F"
        );
        let back: Signature = serde_json::from_str(&serde_json::to_string(&sig).unwrap()).unwrap();
        assert_eq!(sig, back);
    }
}
