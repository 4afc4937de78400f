//! Projections on a finite-dimensional complex Hilbert space.
//!
//! The reference quantum logic: subspaces (as orthogonal projections)
//! ordered by inclusion, with `I - P` as orthocomplement and the Born rule
//! `tr(ρP)` as probability. Lattices here are explicit finite element
//! lists, usually generated from a few projections.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::language::{Signature, Wff};
use crate::order::OrthoStructure;
use crate::semantics::{ClassicalModel, SemanticsError};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("invalid Hilbert space: {0}")]
    InvalidSpace(String),
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not idempotent (deviation {0:.3e})")]
    NotIdempotent(f64),
    #[error("density matrix is not positive semidefinite (eigenvalue {0:.3e})")]
    NotPositive(f64),
    #[error("density matrix trace is {0}, not 1")]
    NotUnitTrace(f64),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("matrix is not square or has ragged rows")]
    Shape,
    #[error("lattice is not closed: {0}")]
    NotClosed(String),
    #[error("lattice generation exceeded the budget of {0} elements")]
    Budget(usize),
    #[error("unknown element `{0}`")]
    Unknown(String),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

pub type Result<T> = std::result::Result<T, HilbertError>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HilbertSpace {
    pub dim: usize,
    pub tolerance: f64,
}

impl HilbertSpace {
    pub fn new(dim: usize, tolerance: f64) -> Result<Self> {
        if dim == 0 {
            return Err(HilbertError::InvalidSpace(
                "dimension must be positive".into(),
            ));
        }
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(HilbertError::InvalidSpace(
                "tolerance must be positive".into(),
            ));
        }
        Ok(HilbertSpace { dim, tolerance })
    }

    pub fn qubit() -> Self {
        HilbertSpace {
            dim: 2,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        Err(HilbertError::Shape)
    } else {
        Ok(())
    }
}

fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

fn normalize(v: &CVector) -> Result<CVector> {
    let n = v.norm();
    if n < 1e-300 {
        return Err(HilbertError::ZeroVector);
    }
    Ok(v / C64::new(n, 0.0))
}

/// An orthogonal projection, Hermitian and idempotent within tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Projection {
    matrix: CMatrix,
}

impl Projection {
    pub fn new(matrix: CMatrix, tolerance: f64) -> Result<Self> {
        check_square(&matrix)?;
        let h = max_abs_diff(&matrix, &matrix.adjoint());
        if h > tolerance {
            return Err(HilbertError::NotHermitian(h));
        }
        let i = max_abs_diff(&(&matrix * &matrix), &matrix);
        if i > tolerance {
            return Err(HilbertError::NotIdempotent(i));
        }
        Ok(Projection {
            matrix: hermitian_part(&matrix),
        })
    }

    pub fn zero(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Projection {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// Rank-one projection onto the (normalized) ket.
    pub fn onto_ket(ket: &CVector) -> Result<Self> {
        let v = normalize(ket)?;
        Ok(Projection {
            matrix: &v * v.adjoint(),
        })
    }

    /// Projection onto the span of the given vectors.
    pub fn onto_span(vectors: &[CVector], tolerance: f64) -> Result<Self> {
        let dim = vectors
            .first()
            .map(|v| v.len())
            .ok_or(HilbertError::ZeroVector)?;
        let mut basis: Vec<CVector> = Vec::new();
        for v in vectors {
            if v.len() != dim {
                return Err(HilbertError::DimensionMismatch {
                    left: dim,
                    right: v.len(),
                });
            }
            let mut w = v.clone();
            for b in &basis {
                let c = b.dotc(&w);
                w -= b * c;
            }
            if w.norm() > tolerance.sqrt() {
                basis.push(normalize(&w)?);
            }
        }
        Ok(Self::from_orthonormal(dim, &basis))
    }

    fn from_orthonormal(dim: usize, basis: &[CVector]) -> Self {
        let mut m = CMatrix::zeros(dim, dim);
        for v in basis {
            m += v * v.adjoint();
        }
        Projection {
            matrix: hermitian_part(&m),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    pub fn approx_eq(&self, other: &Projection, tolerance: f64) -> bool {
        self.dim() == other.dim() && max_abs_diff(&self.matrix, &other.matrix) <= tolerance
    }

    /// Orthonormal basis of the range.
    pub fn range_basis(&self) -> Vec<CVector> {
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut out: Vec<(usize, CVector)> = (0..self.dim())
            .filter(|&i| eig.eigenvalues[i] > 0.5)
            .map(|i| (i, eig.eigenvectors.column(i).into_owned()))
            .collect();
        out.sort_by_key(|(i, _)| *i);
        out.into_iter().map(|(_, v)| canonical_phase(v)).collect()
    }

    /// True when `v` (normalized) lies in the range.
    pub fn contains(&self, v: &CVector, tolerance: f64) -> bool {
        match normalize(v) {
            Ok(u) => ((&self.matrix * &u) - &u).norm() <= tolerance.sqrt(),
            Err(_) => true,
        }
    }
}

/// Rotates the global phase so the first non-negligible entry is real and
/// positive; makes eigenvector output reproducible.
fn canonical_phase(v: CVector) -> CVector {
    match v.iter().find(|c| c.norm() > 1e-12) {
        Some(&c) => {
            let phase = c / C64::new(c.norm(), 0.0);
            v / phase
        }
        None => v,
    }
}

fn same_dim(p: &Projection, q: &Projection) -> Result<()> {
    if p.dim() != q.dim() {
        Err(HilbertError::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        })
    } else {
        Ok(())
    }
}

/// `I - P`.
pub fn ortho(p: &Projection) -> Projection {
    Projection {
        matrix: CMatrix::identity(p.dim(), p.dim()) - &p.matrix,
    }
}

/// Projection onto `range(P) ∩ range(Q)`: the null space of the positive
/// operator `(I - P) + (I - Q)`, read off its eigendecomposition.
pub fn meet(p: &Projection, q: &Projection, tolerance: f64) -> Result<Projection> {
    same_dim(p, q)?;
    let n = p.dim();
    let m = ortho(p).matrix + ortho(q).matrix;
    let eig = SymmetricEigen::new(hermitian_part(&m));
    let basis: Vec<CVector> = (0..n)
        .filter(|&i| eig.eigenvalues[i].abs() <= tolerance)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    Ok(Projection::from_orthonormal(n, &basis))
}

/// De Morgan dual of [`meet`].
pub fn join(p: &Projection, q: &Projection, tolerance: f64) -> Result<Projection> {
    Ok(ortho(&meet(&ortho(p), &ortho(q), tolerance)?))
}

/// `P ≤ Q` iff `PQ = P`.
pub fn leq(p: &Projection, q: &Projection, tolerance: f64) -> bool {
    p.dim() == q.dim() && max_abs_diff(&(&p.matrix * &q.matrix), &p.matrix) <= tolerance
}

pub fn commute(p: &Projection, q: &Projection, tolerance: f64) -> bool {
    let pq = &p.matrix * &q.matrix;
    let qp = &q.matrix * &p.matrix;
    max_abs_diff(&pq, &qp) <= tolerance
}

/// A density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumState {
    density: CMatrix,
}

impl QuantumState {
    pub fn pure(ket: &CVector) -> Result<Self> {
        let v = normalize(ket)?;
        Ok(QuantumState {
            density: &v * v.adjoint(),
        })
    }

    pub fn mixed(density: CMatrix, tolerance: f64) -> Result<Self> {
        check_square(&density)?;
        let h = max_abs_diff(&density, &density.adjoint());
        if h > tolerance {
            return Err(HilbertError::NotHermitian(h));
        }
        let tr = density.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tolerance {
            return Err(HilbertError::NotUnitTrace(tr.re));
        }
        let density = hermitian_part(&density);
        let eig = SymmetricEigen::new(density.clone());
        let min = eig
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min < -tolerance {
            return Err(HilbertError::NotPositive(min));
        }
        Ok(QuantumState { density })
    }

    /// Haar-distributed pure state: normalized complex Gaussian vector.
    pub fn haar_random<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Self {
        loop {
            let v = CVector::from_fn(dim, |_, _| {
                C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            });
            if let Ok(s) = QuantumState::pure(&v) {
                return s;
            }
        }
    }

    pub fn density(&self) -> &CMatrix {
        &self.density
    }

    pub fn dim(&self) -> usize {
        self.density.nrows()
    }

    pub fn is_pure(&self, tolerance: f64) -> bool {
        ((&self.density * &self.density).trace().re - 1.0).abs() <= tolerance
    }

    pub fn approx_eq(&self, other: &QuantumState, tolerance: f64) -> bool {
        self.dim() == other.dim() && max_abs_diff(&self.density, &other.density) <= tolerance
    }

    /// Lüders update `PρP / tr(ρP)`, or `None` when the outcome is impossible.
    pub fn conditioned_on(&self, p: &Projection, tolerance: f64) -> Option<QuantumState> {
        let out = p.matrix() * &self.density * p.matrix();
        let tr = out.trace().re;
        if tr <= tolerance {
            return None;
        }
        Some(QuantumState {
            density: hermitian_part(&(out / C64::new(tr, 0.0))),
        })
    }
}

/// `tr(ρP)` clamped to `[0, 1]`.
pub fn born(s: &QuantumState, p: &Projection) -> Result<f64> {
    if s.dim() != p.dim() {
        return Err(HilbertError::DimensionMismatch {
            left: s.dim(),
            right: p.dim(),
        });
    }
    let v = (s.density() * p.matrix()).trace().re;
    Ok(v.clamp(0.0, 1.0))
}

/// A finite family of projections containing `0` and `I` and closed under
/// orthocomplement, with its order cached.
#[derive(Debug, Clone)]
pub struct ProjectionLattice {
    space: HilbertSpace,
    elements: Vec<(String, Projection)>,
    order: Vec<Vec<bool>>,
    ortho: Vec<usize>,
}

impl ProjectionLattice {
    /// Takes the elements as given; `0` and `I` are added when missing.
    pub fn new(space: HilbertSpace, elements: Vec<(String, Projection)>) -> Result<Self> {
        let mut all = Self::with_bounds(&space, elements)?;
        all.dedup_by(|b, a| a.1.approx_eq(&b.1, space.tolerance));
        Self::finish(space, all)
    }

    fn with_bounds(
        space: &HilbertSpace,
        elements: Vec<(String, Projection)>,
    ) -> Result<Vec<(String, Projection)>> {
        let tol = space.tolerance;
        for (_, p) in &elements {
            if p.dim() != space.dim {
                return Err(HilbertError::DimensionMismatch {
                    left: space.dim,
                    right: p.dim(),
                });
            }
        }
        let zero = Projection::zero(space.dim);
        let one = Projection::identity(space.dim);
        let mut all = Vec::new();
        if !elements.iter().any(|(_, p)| p.approx_eq(&zero, tol)) {
            all.push(("0".to_string(), zero));
        }
        if !elements.iter().any(|(_, p)| p.approx_eq(&one, tol)) {
            all.push(("I".to_string(), one));
        }
        all.extend(elements);
        Ok(all)
    }

    fn finish(space: HilbertSpace, elements: Vec<(String, Projection)>) -> Result<Self> {
        let tol = space.tolerance;
        let ortho = elements
            .iter()
            .map(|(name, p)| {
                let o = ortho(p);
                elements
                    .iter()
                    .position(|(_, q)| q.approx_eq(&o, tol))
                    .ok_or_else(|| {
                        HilbertError::NotClosed(format!("no orthocomplement for `{name}`"))
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        let order = elements
            .iter()
            .map(|(_, p)| elements.iter().map(|(_, q)| leq(p, q, tol)).collect())
            .collect();
        Ok(ProjectionLattice {
            space,
            elements,
            order,
            ortho,
        })
    }

    /// Closes the generators under orthocomplement and meet. Elements
    /// appear in discovery order: `0`, `I`, generators, then new elements
    /// breadth first.
    pub fn generate(
        space: HilbertSpace,
        generators: Vec<(String, Projection)>,
        budget: usize,
    ) -> Result<Self> {
        let tol = space.tolerance;
        let mut all = Self::with_bounds(&space, Vec::new())?;
        let find = |all: &[(String, Projection)], p: &Projection| {
            all.iter().position(|(_, q)| q.approx_eq(p, tol))
        };
        for (name, p) in generators {
            if p.dim() != space.dim {
                return Err(HilbertError::DimensionMismatch {
                    left: space.dim,
                    right: p.dim(),
                });
            }
            if find(&all, &p).is_none() {
                all.push((name, p));
            }
        }
        loop {
            let mut fresh: Vec<(String, Projection)> = Vec::new();
            let n = all.len();
            for i in 0..n {
                let o = ortho(&all[i].1);
                if find(&all, &o).is_none() && find(&fresh, &o).is_none() {
                    fresh.push((format!("~{}", all[i].0), o));
                }
            }
            for i in 0..n {
                for j in i + 1..n {
                    let m = meet(&all[i].1, &all[j].1, tol)?;
                    if find(&all, &m).is_none() && find(&fresh, &m).is_none() {
                        fresh.push((format!("({} ^ {})", all[i].0, all[j].0), m));
                    }
                }
            }
            if fresh.is_empty() {
                break;
            }
            all.extend(fresh);
            if all.len() > budget {
                return Err(HilbertError::Budget(budget));
            }
        }
        Self::finish(space, all)
    }

    pub fn space(&self) -> HilbertSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[(String, Projection)] {
        &self.elements
    }

    pub fn get(&self, name: &str) -> Result<&Projection> {
        self.elements
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| p)
            .ok_or_else(|| HilbertError::Unknown(name.to_string()))
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|(n, _)| n == name)
    }

    /// Index of the element equal to `p`, if any.
    pub fn find(&self, p: &Projection) -> Option<usize> {
        self.elements
            .iter()
            .position(|(_, q)| q.approx_eq(p, self.space.tolerance))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.order[a][b]
    }

    pub fn to_ortho_structure(&self) -> OrthoStructure {
        OrthoStructure::new(
            self.elements.iter().map(|(n, _)| n.clone()).collect(),
            self.order.clone(),
            self.ortho.clone(),
        )
        .expect("projection order is a partial order")
    }

    /// A classical model whose concrete logic reproduces this lattice.
    ///
    /// One state per distinct basis vector of the elements' ranges; each
    /// state `S_k` owns two objects. Property `E_i` (for element `i`) holds
    /// on the first object when `born(S_k, P_i) > 0` and on the second when
    /// `born(S_k, P_i) = 1`, so `E_i` is certainly true in `S_k` exactly when
    /// the state lies in the range of `P_i`.
    pub fn classical_export(&self) -> Result<HilbertExport> {
        let tol = self.space.tolerance;
        let mut kets: Vec<CVector> = Vec::new();
        for (_, p) in &self.elements {
            for v in p.range_basis() {
                let parallel = kets
                    .iter()
                    .any(|k| (k.dotc(&v).norm() - 1.0).abs() <= tol.sqrt());
                if !parallel {
                    kets.push(v);
                }
            }
        }
        let states: Vec<(String, QuantumState)> = kets
            .iter()
            .enumerate()
            .map(|(k, v)| Ok((format!("S{k}"), QuantumState::pure(v)?)))
            .collect::<Result<_>>()?;
        let properties: Vec<String> = (0..self.len()).map(|i| format!("E{i}")).collect();
        let sig = Signature::new(
            states.iter().map(|(n, _)| n.clone()),
            properties.clone(),
            Vec::<String>::new(),
            BTreeMap::new(),
        )
        .map_err(SemanticsError::from)?;
        let universe: Vec<String> = (0..states.len())
            .flat_map(|k| [format!("u{k}_0"), format!("u{k}_1")])
            .collect();
        let mut model = ClassicalModel::new(sig, universe)?;
        for (k, (name, _)) in states.iter().enumerate() {
            let mut set = model.empty_set();
            set.insert(2 * k);
            set.insert(2 * k + 1);
            model.set_extension(crate::language::Atom::State(name.clone()), set)?;
        }
        for (i, (_, p)) in self.elements.iter().enumerate() {
            let mut set = model.empty_set();
            for (k, (_, s)) in states.iter().enumerate() {
                let b = born(s, p)?;
                if b > tol {
                    set.insert(2 * k);
                }
                if b >= 1.0 - tol {
                    set.insert(2 * k + 1);
                }
            }
            model.set_extension(crate::language::Atom::Property(properties[i].clone()), set)?;
        }
        let phi_v: Vec<Wff> = properties.iter().map(Wff::property).collect();
        let ortho = (0..self.len())
            .map(|i| (phi_v[i].clone(), phi_v[self.ortho[i]].clone()))
            .collect();
        Ok(HilbertExport {
            model,
            phi_v,
            ortho,
            property_labels: properties
                .into_iter()
                .zip(self.elements.iter().map(|(n, _)| n.clone()))
                .collect(),
            states,
        })
    }
}

/// Output of [`ProjectionLattice::classical_export`].
#[derive(Debug, Clone)]
pub struct HilbertExport {
    pub model: ClassicalModel,
    pub phi_v: Vec<Wff>,
    pub ortho: BTreeMap<Wff, Wff>,
    /// Property name to lattice element label.
    pub property_labels: Vec<(String, String)>,
    pub states: Vec<(String, QuantumState)>,
}

/// A complex entry in documents: a bare real or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexDoc {
    Real(f64),
    Pair([f64; 2]),
}

impl From<ComplexDoc> for C64 {
    fn from(c: ComplexDoc) -> Self {
        match c {
            ComplexDoc::Real(r) => C64::new(r, 0.0),
            ComplexDoc::Pair([re, im]) => C64::new(re, im),
        }
    }
}

impl From<C64> for ComplexDoc {
    fn from(c: C64) -> Self {
        ComplexDoc::Pair([c.re, c.im])
    }
}

pub fn vector_from_doc(entries: &[ComplexDoc]) -> CVector {
    CVector::from_iterator(entries.len(), entries.iter().map(|&c| c.into()))
}

pub fn matrix_from_doc(rows: &[Vec<ComplexDoc>]) -> Result<CMatrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(HilbertError::Shape);
    }
    Ok(CMatrix::from_fn(n, rows[0].len(), |i, j| rows[i][j].into()))
}

pub fn matrix_to_doc(m: &CMatrix) -> Vec<Vec<ComplexDoc>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)].into()).collect())
        .collect()
}

/// A projection in a document: onto a ket, onto a span, or a full matrix
/// (row-major).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ProjectionDoc {
    Ket { ket: Vec<ComplexDoc> },
    Span { span: Vec<Vec<ComplexDoc>> },
    Matrix { matrix: Vec<Vec<ComplexDoc>> },
}

impl ProjectionDoc {
    pub fn build(&self, space: &HilbertSpace) -> Result<Projection> {
        let p = match self {
            ProjectionDoc::Ket { ket } => Projection::onto_ket(&vector_from_doc(ket))?,
            ProjectionDoc::Span { span } => {
                let vs: Vec<CVector> = span.iter().map(|v| vector_from_doc(v)).collect();
                Projection::onto_span(&vs, space.tolerance)?
            }
            ProjectionDoc::Matrix { matrix } => {
                Projection::new(matrix_from_doc(matrix)?, space.tolerance)?
            }
        };
        if p.dim() != space.dim {
            return Err(HilbertError::DimensionMismatch {
                left: space.dim,
                right: p.dim(),
            });
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateDoc {
    Ket { ket: Vec<ComplexDoc> },
    Density { density: Vec<Vec<ComplexDoc>> },
}

impl StateDoc {
    pub fn build(&self, space: &HilbertSpace) -> Result<QuantumState> {
        let s = match self {
            StateDoc::Ket { ket } => QuantumState::pure(&vector_from_doc(ket))?,
            StateDoc::Density { density } => {
                QuantumState::mixed(matrix_from_doc(density)?, space.tolerance)?
            }
        };
        if s.dim() != space.dim {
            return Err(HilbertError::DimensionMismatch {
                left: space.dim,
                right: s.dim(),
            });
        }
        Ok(s)
    }
}

/// A Hilbert-space document: named projections and states.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HilbertDoc {
    pub dim: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub projections: BTreeMap<String, ProjectionDoc>,
    #[serde(default)]
    pub states: BTreeMap<String, StateDoc>,
    /// Close the projections under meet and orthocomplement.
    #[serde(default)]
    pub generate: bool,
    #[serde(default = "default_budget")]
    pub budget: usize,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_budget() -> usize {
    256
}

impl HilbertDoc {
    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.dim, self.tolerance)
    }

    pub fn projections(&self) -> Result<Vec<(String, Projection)>> {
        let space = self.space()?;
        self.projections
            .iter()
            .map(|(n, p)| Ok((n.clone(), p.build(&space)?)))
            .collect()
    }

    pub fn states(&self) -> Result<Vec<(String, QuantumState)>> {
        let space = self.space()?;
        self.states
            .iter()
            .map(|(n, s)| Ok((n.clone(), s.build(&space)?)))
            .collect()
    }

    pub fn lattice(&self) -> Result<ProjectionLattice> {
        let space = self.space()?;
        let projections = self.projections()?;
        if self.generate {
            ProjectionLattice::generate(space, projections, self.budget)
        } else {
            ProjectionLattice::new(space, projections)
        }
    }
}

/// Common qubit vectors and projections.
pub mod qubit {
    use super::*;

    pub fn ket(a: C64, b: C64) -> CVector {
        CVector::from_vec(vec![a, b])
    }

    pub fn real_ket(a: f64, b: f64) -> CVector {
        ket(C64::new(a, 0.0), C64::new(b, 0.0))
    }

    pub fn zero() -> CVector {
        real_ket(1.0, 0.0)
    }

    pub fn one() -> CVector {
        real_ket(0.0, 1.0)
    }

    pub fn plus() -> CVector {
        real_ket(1.0, 1.0) / C64::new(2f64.sqrt(), 0.0)
    }

    pub fn minus() -> CVector {
        real_ket(1.0, -1.0) / C64::new(2f64.sqrt(), 0.0)
    }

    /// `cos(θ/2)|0⟩ + sin(θ/2)|1⟩`: spin up along the direction at polar
    /// angle θ in the x-z plane.
    pub fn spin(theta: f64) -> CVector {
        real_ket((theta / 2.0).cos(), (theta / 2.0).sin())
    }

    pub fn proj(v: &CVector) -> Projection {
        Projection::onto_ket(v).expect("nonzero ket")
    }

    pub fn state(v: &CVector) -> QuantumState {
        QuantumState::pure(v).expect("nonzero ket")
    }

    /// `{0, I, P0, P+, P1, P-}` generated from `P0` and `P+`.
    pub fn six_element_lattice() -> ProjectionLattice {
        ProjectionLattice::generate(
            HilbertSpace::qubit(),
            vec![
                ("P0".into(), proj(&zero())),
                ("Pplus".into(), proj(&plus())),
            ],
            64,
        )
        .expect("C^2 lattice")
    }
}
