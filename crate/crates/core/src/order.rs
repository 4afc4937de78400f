//! Finite preordered sets with an orthocomplementation candidate.
//!
//! This is the common currency between the classical concrete logic, the
//! pragmatic quantum fragment and projection lattices: each of them is
//! exported as an [`OrthoStructure`] and compared here, either through
//! [`lattice_diagnostics`] or through [`order_isomorphic`].

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("structure has {labels} labels but a {rows}-row order matrix")]
    SizeMismatch { labels: usize, rows: usize },
    #[error("ortho map sends `{from}` outside the structure")]
    OrthoNotClosed { from: String },
    #[error("relation is not a preorder: {0}")]
    NotPreorder(String),
    #[error("`{a}` and `{b}` have no {op}")]
    NotLattice {
        a: String,
        b: String,
        op: &'static str,
    },
    #[error("no bottom or top element")]
    Unbounded,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
}

pub type Result<T> = std::result::Result<T, OrderError>;

/// A finite preorder with a self-map meant as (weak) orthocomplementation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrthoStructure {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
    ortho: Vec<usize>,
}

/// One failed axiom, named by element labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum OrthoViolation {
    /// `a⊥⊥` is not equivalent to `a`.
    Involution {
        element: String,
        double_ortho: String,
    },
    /// `a ≺ b` but not `b⊥ ≺ a⊥`.
    Antitone { a: String, b: String },
}

impl OrthoStructure {
    /// Builds a structure from an explicit relation matrix. The matrix must
    /// already be reflexive and transitive.
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>, ortho: Vec<usize>) -> Result<Self> {
        let n = labels.len();
        if leq.len() != n || leq.iter().any(|row| row.len() != n) || ortho.len() != n {
            return Err(OrderError::SizeMismatch {
                labels: n,
                rows: leq.len(),
            });
        }
        if let Some(i) = ortho.iter().position(|&j| j >= n) {
            return Err(OrderError::OrthoNotClosed {
                from: labels[i].clone(),
            });
        }
        let s = OrthoStructure { labels, leq, ortho };
        s.check_preorder()?;
        Ok(s)
    }

    /// Builds a structure from generating pairs `a ≤ b`; the reflexive and
    /// transitive closure is taken.
    pub fn from_pairs(
        labels: Vec<String>,
        pairs: &[(String, String)],
        ortho: &[(String, String)],
    ) -> Result<Self> {
        let index: BTreeMap<&str, usize> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| OrderError::UnknownElement(name.to_string()))
        };
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in pairs {
            leq[lookup(a)?][lookup(b)?] = true;
        }
        // Warshall
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut map: Vec<Option<usize>> = vec![None; n];
        for (a, b) in ortho {
            map[lookup(a)?] = Some(lookup(b)?);
        }
        let ortho = map
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                m.ok_or_else(|| OrderError::OrthoNotClosed {
                    from: labels[i].clone(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        OrthoStructure::new(labels, leq, ortho)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn equivalent(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] && self.leq[b][a]
    }

    pub fn ortho(&self, a: usize) -> usize {
        self.ortho[a]
    }

    fn check_preorder(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.leq[i][i] {
                return Err(OrderError::NotPreorder(format!(
                    "`{}` is not below itself",
                    self.labels[i]
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq[i][j] {
                    continue;
                }
                for k in 0..n {
                    if self.leq[j][k] && !self.leq[i][k] {
                        return Err(OrderError::NotPreorder(format!(
                            "`{}` ≤ `{}` ≤ `{}` but not `{}` ≤ `{}`",
                            self.labels[i],
                            self.labels[j],
                            self.labels[k],
                            self.labels[i],
                            self.labels[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Checks `a⊥⊥ ≈ a` and `a ≺ b ⇒ b⊥ ≺ a⊥`; returns every violation.
    pub fn weak_ortho_violations(&self) -> Vec<OrthoViolation> {
        let mut out = Vec::new();
        let n = self.len();
        for a in 0..n {
            let aa = self.ortho[self.ortho[a]];
            if !self.equivalent(a, aa) {
                out.push(OrthoViolation::Involution {
                    element: self.labels[a].clone(),
                    double_ortho: self.labels[aa].clone(),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if self.leq[a][b] && !self.leq[self.ortho[b]][self.ortho[a]] {
                    out.push(OrthoViolation::Antitone {
                        a: self.labels[a].clone(),
                        b: self.labels[b].clone(),
                    });
                }
            }
        }
        out
    }

    /// Collapses mutually-below elements. Each class keeps its first member
    /// as representative; the ortho map is read off the representative.
    pub fn quotient(&self) -> Quotient {
        let n = self.len();
        let mut class_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = members.len();
            let mut group = Vec::new();
            for j in i..n {
                if class_of[j] == usize::MAX && self.equivalent(i, j) {
                    class_of[j] = c;
                    group.push(j);
                }
            }
            members.push(group);
        }
        let k = members.len();
        let labels = members.iter().map(|m| self.labels[m[0]].clone()).collect();
        let leq = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| self.leq[members[a][0]][members[b][0]])
                    .collect()
            })
            .collect();
        let ortho = (0..k)
            .map(|a| class_of[self.ortho[members[a][0]]])
            .collect();
        Quotient {
            structure: OrthoStructure { labels, leq, ortho },
            class_of,
            members,
        }
    }

    /// True when the relation is antisymmetric.
    pub fn is_poset(&self) -> bool {
        (0..self.len()).all(|a| (0..self.len()).all(|b| a == b || !self.equivalent(a, b)))
    }

    /// Restricts the structure to the given element indices, in order.
    pub fn restrict(&self, keep: &[usize]) -> Result<OrthoStructure> {
        let pos: BTreeMap<usize, usize> = keep.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        let ortho = keep
            .iter()
            .map(|&k| {
                pos.get(&self.ortho[k])
                    .copied()
                    .ok_or_else(|| OrderError::OrthoNotClosed {
                        from: self.labels[k].clone(),
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(OrthoStructure {
            labels: keep.iter().map(|&k| self.labels[k].clone()).collect(),
            leq: keep
                .iter()
                .map(|&a| keep.iter().map(|&b| self.leq[a][b]).collect())
                .collect(),
            ortho,
        })
    }
}

#[derive(Debug, Clone)]
pub struct Quotient {
    /// The quotient poset, one element per class.
    pub structure: OrthoStructure,
    pub class_of: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

/// Meet and join tables of a finite bounded lattice.
#[derive(Debug, Clone)]
pub struct LatticeTables {
    pub bottom: usize,
    pub top: usize,
    pub meet: Vec<Vec<usize>>,
    pub join: Vec<Vec<usize>>,
}

impl LatticeTables {
    /// Computes greatest lower and least upper bounds in a poset.
    pub fn of(poset: &OrthoStructure) -> Result<Self> {
        let n = poset.len();
        let bound = |a: usize, b: usize, lower: bool| -> Option<usize> {
            let below = |x: usize, y: usize| {
                if lower {
                    poset.leq(x, y)
                } else {
                    poset.leq(y, x)
                }
            };
            let candidates: Vec<usize> = (0..n).filter(|&z| below(z, a) && below(z, b)).collect();
            candidates
                .iter()
                .copied()
                .find(|&z| candidates.iter().all(|&w| below(w, z)))
        };
        let mut meet = vec![vec![0; n]; n];
        let mut join = vec![vec![0; n]; n];
        for a in 0..n {
            for b in a..n {
                let m = bound(a, b, true).ok_or_else(|| OrderError::NotLattice {
                    a: poset.label(a).to_string(),
                    b: poset.label(b).to_string(),
                    op: "meet",
                })?;
                let j = bound(a, b, false).ok_or_else(|| OrderError::NotLattice {
                    a: poset.label(a).to_string(),
                    b: poset.label(b).to_string(),
                    op: "join",
                })?;
                meet[a][b] = m;
                meet[b][a] = m;
                join[a][b] = j;
                join[b][a] = j;
            }
        }
        let bottom = (0..n)
            .find(|&z| (0..n).all(|a| poset.leq(z, a)))
            .ok_or(OrderError::Unbounded)?;
        let top = (0..n)
            .find(|&z| (0..n).all(|a| poset.leq(a, z)))
            .ok_or(OrderError::Unbounded)?;
        Ok(LatticeTables {
            bottom,
            top,
            meet,
            join,
        })
    }
}

/// Outcome of [`lattice_diagnostics`]. Witnesses are element labels of
/// the quotient poset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeReport {
    pub elements: usize,
    pub classes: usize,
    pub orthocomplemented: bool,
    pub orthomodular: bool,
    /// First `(a, b)` with `a ≤ b` and `b ≠ a ∨ (a⊥ ∧ b)`.
    pub orthomodular_witness: Option<(String, String)>,
    pub distributive: bool,
    /// Failing `(a, b, c)` triples, in enumeration order, capped at
    /// [`MAX_WITNESSES`].
    pub distributivity_witnesses: Vec<(String, String, String)>,
    pub distributivity_failures: usize,
    pub boolean: bool,
}

pub const MAX_WITNESSES: usize = 64;

/// Orthomodularity, distributivity and Boolean-ness of a finite ortho
/// structure, evaluated on its quotient poset.
pub fn lattice_diagnostics(s: &OrthoStructure) -> Result<LatticeReport> {
    let q = s.quotient();
    let p = &q.structure;
    let t = LatticeTables::of(p)?;
    let n = p.len();
    let name = |i: usize| p.label(i).to_string();

    let orthocomplemented = (0..n).all(|a| {
        let o = p.ortho(a);
        p.ortho(o) == a && t.meet[a][o] == t.bottom && t.join[a][o] == t.top
    }) && (0..n)
        .all(|a| (0..n).all(|b| !p.leq(a, b) || p.leq(p.ortho(b), p.ortho(a))));

    let mut orthomodular_witness = None;
    'om: for a in 0..n {
        for b in 0..n {
            if p.leq(a, b) && t.join[a][t.meet[p.ortho(a)][b]] != b {
                orthomodular_witness = Some((name(a), name(b)));
                break 'om;
            }
        }
    }

    let mut witnesses = Vec::new();
    let mut failures = 0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = t.meet[a][t.join[b][c]];
                let rhs = t.join[t.meet[a][b]][t.meet[a][c]];
                if lhs != rhs {
                    failures += 1;
                    if witnesses.len() < MAX_WITNESSES {
                        witnesses.push((name(a), name(b), name(c)));
                    }
                }
            }
        }
    }
    let orthomodular = orthomodular_witness.is_none();
    let distributive = failures == 0;
    Ok(LatticeReport {
        elements: s.len(),
        classes: n,
        orthocomplemented,
        orthomodular,
        orthomodular_witness,
        distributive,
        distributivity_witnesses: witnesses,
        distributivity_failures: failures,
        boolean: orthocomplemented && distributive,
    })
}

/// Why two structures are not isomorphic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Refutation {
    Cardinality {
        left: usize,
        right: usize,
    },
    DegreeSequence {
        left: Vec<(usize, usize)>,
        right: Vec<(usize, usize)>,
    },
    /// The full search found no order- and ortho-preserving bijection.
    Exhausted {
        nodes: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum IsoResult {
    /// Pairs of class representatives, left to right.
    Isomorphic {
        mapping: Vec<(String, String)>,
    },
    NotIsomorphic {
        refutation: Refutation,
    },
}

impl IsoResult {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoResult::Isomorphic { .. })
    }

    pub fn mapping(&self) -> Option<&[(String, String)]> {
        match self {
            IsoResult::Isomorphic { mapping } => Some(mapping),
            IsoResult::NotIsomorphic { .. } => None,
        }
    }
}

fn degrees(p: &OrthoStructure) -> Vec<(usize, usize)> {
    (0..p.len())
        .map(|a| {
            let down = (0..p.len()).filter(|&b| p.leq(b, a)).count();
            let up = (0..p.len()).filter(|&b| p.leq(a, b)).count();
            (down, up)
        })
        .collect()
}

/// Searches an order- and ortho-preserving bijection between the quotients
/// of `a` and `b` by their equivalence relations.
pub fn order_isomorphic(a: &OrthoStructure, b: &OrthoStructure) -> IsoResult {
    let qa = a.quotient().structure;
    let qb = b.quotient().structure;
    if qa.len() != qb.len() {
        return IsoResult::NotIsomorphic {
            refutation: Refutation::Cardinality {
                left: qa.len(),
                right: qb.len(),
            },
        };
    }
    let da = degrees(&qa);
    let db = degrees(&qb);
    let mut sa = da.clone();
    let mut sb = db.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return IsoResult::NotIsomorphic {
            refutation: Refutation::DegreeSequence {
                left: sa,
                right: sb,
            },
        };
    }
    let n = qa.len();
    let mut search = IsoSearch {
        a: &qa,
        b: &qb,
        da: &da,
        db: &db,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        nodes: 0,
    };
    if search.extend(0) {
        let mapping = (0..n)
            .map(|i| (qa.label(i).to_string(), qb.label(search.map[i]).to_string()))
            .collect();
        IsoResult::Isomorphic { mapping }
    } else {
        IsoResult::NotIsomorphic {
            refutation: Refutation::Exhausted {
                nodes: search.nodes,
            },
        }
    }
}

struct IsoSearch<'a> {
    a: &'a OrthoStructure,
    b: &'a OrthoStructure,
    da: &'a [(usize, usize)],
    db: &'a [(usize, usize)],
    map: Vec<usize>,
    used: Vec<bool>,
    nodes: usize,
}

impl IsoSearch<'_> {
    fn consistent(&self, i: usize, j: usize) -> bool {
        if self.da[i] != self.db[j] {
            return false;
        }
        for k in 0..self.a.len() {
            let m = if k == i { j } else { self.map[k] };
            if m == usize::MAX {
                continue;
            }
            if self.a.leq(i, k) != self.b.leq(j, m) || self.a.leq(k, i) != self.b.leq(m, j) {
                return false;
            }
        }
        // ortho must commute with the partial map wherever both sides are known
        let oi = self.a.ortho(i);
        let image_of_oi = if oi == i { j } else { self.map[oi] };
        if image_of_oi != usize::MAX && image_of_oi != self.b.ortho(j) {
            return false;
        }
        for k in 0..self.a.len() {
            if self.map[k] != usize::MAX && self.a.ortho(k) == i && self.b.ortho(self.map[k]) != j {
                return false;
            }
        }
        true
    }

    fn extend(&mut self, i: usize) -> bool {
        if i == self.a.len() {
            return true;
        }
        for j in 0..self.b.len() {
            if self.used[j] {
                continue;
            }
            self.nodes += 1;
            if !self.consistent(i, j) {
                continue;
            }
            self.map[i] = j;
            self.used[j] = true;
            if self.extend(i + 1) {
                return true;
            }
            self.map[i] = usize::MAX;
            self.used[j] = false;
        }
        false
    }
}

/// Ortho structures used as fixtures and in tests.
pub mod examples {
    use super::*;

    /// The powerset of an `n`-element set, ordered by inclusion, with set
    /// complement as ortho.
    pub fn boolean(n: usize) -> OrthoStructure {
        let size = 1usize << n;
        let labels = (0..size)
            .map(|m| {
                let items: Vec<String> = (0..n)
                    .filter(|i| m >> i & 1 == 1)
                    .map(|i| i.to_string())
                    .collect();
                format!("{{{}}}", items.join(","))
            })
            .collect();
        let leq = (0..size)
            .map(|a| (0..size).map(|b| a & b == a).collect())
            .collect();
        let ortho = (0..size).map(|a| !a & (size - 1)).collect();
        OrthoStructure::new(labels, leq, ortho).expect("powerset is a preorder")
    }

    /// The six-element non-orthomodular ortholattice (the "benzene ring"):
    /// `0 < a < b < 1`, `0 < b' < a' < 1`.
    pub fn benzene() -> OrthoStructure {
        let labels: Vec<String> = ["0", "a", "b", "b'", "a'", "1"].map(String::from).to_vec();
        let pairs: Vec<(String, String)> = [
            ("0", "a"),
            ("a", "b"),
            ("b", "1"),
            ("0", "b'"),
            ("b'", "a'"),
            ("a'", "1"),
        ]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
        let ortho: Vec<(String, String)> = [
            ("0", "1"),
            ("1", "0"),
            ("a", "a'"),
            ("a'", "a"),
            ("b", "b'"),
            ("b'", "b"),
        ]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
        OrthoStructure::from_pairs(labels, &pairs, &ortho).expect("benzene ring")
    }

    /// The horizontal sum of `k` four-element Boolean blocks (MO_k).
    pub fn mo(k: usize) -> OrthoStructure {
        let mut labels = vec!["0".to_string(), "1".to_string()];
        let mut pairs = Vec::new();
        let mut ortho = vec![
            ("0".to_string(), "1".to_string()),
            ("1".to_string(), "0".to_string()),
        ];
        for i in 0..k {
            let x = format!("x{i}");
            let y = format!("x{i}'");
            for e in [&x, &y] {
                labels.push(e.clone());
                pairs.push(("0".to_string(), e.clone()));
                pairs.push((e.clone(), "1".to_string()));
            }
            ortho.push((x.clone(), y.clone()));
            ortho.push((y, x));
        }
        OrthoStructure::from_pairs(labels, &pairs, &ortho).expect("MO_k")
    }
}

#[cfg(test)]
mod tests {
    use super::examples::*;
    use super::*;

    #[test]
    fn powerset_is_boolean() {
        let r = lattice_diagnostics(&boolean(3)).unwrap();
        assert_eq!(r.classes, 8);
        assert!(r.orthomodular && r.distributive && r.boolean);
    }

    #[test]
    fn benzene_ring_is_not_orthomodular() {
        let r = lattice_diagnostics(&benzene()).unwrap();
        assert!(r.orthocomplemented);
        assert!(!r.orthomodular);
        assert_eq!(
            r.orthomodular_witness,
            Some(("a".to_string(), "b".to_string()))
        );
    }

    #[test]
    fn mo2_is_orthomodular_not_distributive() {
        let r = lattice_diagnostics(&mo(2)).unwrap();
        assert!(r.orthomodular);
        assert!(!r.distributive);
        assert!(!r.boolean);
    }

    #[test]
    fn non_lattice_is_reported() {
        // two incomparable upper bounds of two incomparable elements
        let labels: Vec<String> = ["0", "a", "b", "c", "d", "1"].map(String::from).to_vec();
        let pairs: Vec<(String, String)> = [
            ("0", "a"),
            ("0", "b"),
            ("a", "c"),
            ("a", "d"),
            ("b", "c"),
            ("b", "d"),
            ("c", "1"),
            ("d", "1"),
        ]
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect();
        let ortho: Vec<(String, String)> = labels.iter().map(|l| (l.clone(), l.clone())).collect();
        let s = OrthoStructure::from_pairs(labels, &pairs, &ortho).unwrap();
        assert!(matches!(
            lattice_diagnostics(&s),
            Err(OrderError::NotLattice { .. })
        ));
    }

    #[test]
    fn isomorphism_basics() {
        let b = boolean(2);
        let m = mo(1);
        assert!(order_isomorphic(&b, &b).is_isomorphic());
        assert!(order_isomorphic(&b, &m).is_isomorphic());
        match order_isomorphic(&boolean(3), &mo(2)) {
            IsoResult::NotIsomorphic {
                refutation: Refutation::Cardinality { left: 8, right: 6 },
            } => {}
            other => panic!("unexpected {other:?}"),
        }
        // same cardinality and shape, different ortho
        assert!(!order_isomorphic(&benzene(), &mo(2)).is_isomorphic());
    }

    #[test]
    fn ortho_must_be_respected() {
        // same order as MO2, but two atoms are their own ortho
        let base = mo(2);
        let mut twisted = base.clone();
        let i0 = base.index_of("x0").unwrap();
        let j0 = base.index_of("x0'").unwrap();
        twisted.ortho[i0] = i0;
        twisted.ortho[j0] = j0;
        assert!(!order_isomorphic(&base, &twisted).is_isomorphic());
        assert!(order_isomorphic(&twisted, &twisted).is_isomorphic());
    }

    #[test]
    fn quotient_merges_equivalent_elements() {
        let labels: Vec<String> = ["0", "a", "a2", "1"].map(String::from).to_vec();
        let pairs: Vec<(String, String)> = [("0", "a"), ("a", "a2"), ("a2", "a"), ("a2", "1")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        let ortho: Vec<(String, String)> = [("0", "1"), ("1", "0"), ("a", "a"), ("a2", "a2")]
            .iter()
            .map(|(x, y)| (x.to_string(), y.to_string()))
            .collect();
        let s = OrthoStructure::from_pairs(labels, &pairs, &ortho).unwrap();
        let q = s.quotient();
        assert_eq!(q.structure.len(), 3);
        assert_eq!(q.members[1], vec![1, 2]);
        assert!(q.structure.is_poset());
    }

    #[test]
    fn weak_ortho_violations_are_listed() {
        let s = OrthoStructure::from_pairs(
            vec!["p".into(), "q".into()],
            &[("p".into(), "q".into())],
            &[("p".into(), "p".into()), ("q".into(), "q".into())],
        )
        .unwrap();
        let v = s.weak_ortho_violations();
        assert_eq!(
            v,
            vec![OrthoViolation::Antitone {
                a: "p".into(),
                b: "q".into()
            }]
        );
    }
}
