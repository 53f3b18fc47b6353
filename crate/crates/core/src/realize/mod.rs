//! Realizations of Cartan matrices as mirror polytopes.
//!
//! A realization of dimension `d` consists of linear forms `α_s` and poles
//! `b_s` in `ℝ^{d+1}` with `α_s(b_t) = a_st`. The polytope is the cone
//! `{v : α_s(v) ≤ 0 for all s}` seen in the projective sphere; vertices are
//! stored on the affine chart `φ = 1` with `φ = −Σ α_s`.

mod hilbert;
mod orbit;

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use serde_json::json;

pub use hilbert::{hilbert_distance, Ball, ChartPolytope, ConvexRegion, Interval};
pub use orbit::{orbit_explore, to_ply, OrbitApproximation};

use crate::bits;
use crate::cartan::{CartanMatrix, ComponentType};
use crate::diagram_core::{CoxeterSystem, Order};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{FaceLattice, LabeledPolytope};

/// Relative tolerance for rank decisions.
const RANK_TOL: f64 = 1e-9;
/// Tolerance for a form to vanish at a unit vertex vector, relative to the form's norm.
const ACTIVE_TOL: f64 = 1e-8;
/// Edges must be cut strictly inside `(ε, 1 − ε)` for truncation.
const EDGE_EPS: f64 = 1e-7;

/// A vertex of a realized polytope.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizedVertex {
    /// Facets through the vertex.
    pub mask: u64,
    /// Representative with `φ = 1`.
    pub point: DVector<f64>,
}

/// Forms and poles realizing a Cartan matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    dim: usize,
    forms: DMatrix<f64>,
    poles: DMatrix<f64>,
    cartan: CartanMatrix,
    vertices: Vec<RealizedVertex>,
    lattice: FaceLattice,
    interior: DVector<f64>,
}

impl Realization {
    /// Realization from explicit forms (rows) and poles (rows) together with
    /// the Cartan matrix they must reproduce.
    pub fn from_parts(cartan: CartanMatrix, forms: DMatrix<f64>, poles: DMatrix<f64>) -> Result<Self> {
        let n = cartan.size();
        if forms.nrows() != n || poles.nrows() != n || forms.ncols() != poles.ncols() || forms.ncols() < 2 {
            return Err(Error::InvalidInput("forms and poles must be n rows of equal width ≥ 2".into()));
        }
        let product = &forms * poles.transpose();
        let err = linalg::max_abs_diff(&product, cartan.entries());
        if err > crate::TOL * linalg::max_abs(cartan.entries()).max(1.0) {
            return Err(Error::Numerical(format!("α_s(b_t) differs from the Cartan matrix by {err:.3e}")));
        }
        if linalg::rank(&forms, RANK_TOL) != forms.ncols() {
            return Err(Error::Precondition("the forms do not span the dual space".into()));
        }
        let dim = forms.ncols() - 1;
        let vertices = enumerate_vertices(&forms, dim)?;
        let lattice = build_lattice(&forms, dim, &vertices, cartan.system().generators())?;
        let mut interior = DVector::zeros(dim + 1);
        for v in &vertices {
            interior += &v.point;
        }
        interior /= vertices.len() as f64;
        let values = &forms * &interior;
        let scale = interior.norm();
        if values.iter().enumerate().any(|(s, &x)| x >= -crate::TOL * forms.row(s).norm() * scale) {
            return Err(Error::Numerical("the polytope has empty interior".into()));
        }
        Ok(Self { dim, forms, poles, cartan, vertices, lattice, interior })
    }

    /// Dimension `d`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Forms `α_s` as rows.
    pub fn forms(&self) -> &DMatrix<f64> {
        &self.forms
    }

    /// Poles `b_s` as rows.
    pub fn poles(&self) -> &DMatrix<f64> {
        &self.poles
    }

    /// The realized Cartan matrix.
    pub fn cartan(&self) -> &CartanMatrix {
        &self.cartan
    }

    /// Coxeter system.
    pub fn system(&self) -> &CoxeterSystem {
        self.cartan.system()
    }

    /// Vertices on the chart `φ = 1`.
    pub fn vertices(&self) -> &[RealizedVertex] {
        &self.vertices
    }

    /// Realized face lattice, with facets named by generators.
    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// A point with `α_s < 0` for every `s` (centroid of the vertices).
    pub fn interior(&self) -> &DVector<f64> {
        &self.interior
    }

    /// Chart covector `φ = −Σ α_s`.
    pub fn chart(&self) -> DVector<f64> {
        -self.forms.row_sum().transpose()
    }

    /// The realized labeled polytope.
    pub fn labeled_polytope(&self) -> Result<LabeledPolytope> {
        LabeledPolytope::new(self.lattice.clone(), self.system().clone())
    }

    /// Vertex by facet names.
    pub fn vertex<S: AsRef<str>>(&self, names: &[S]) -> Result<&RealizedVertex> {
        let mask = bits::from_indices(self.system().indices_of(names)?);
        self.vertices
            .iter()
            .find(|v| v.mask == mask)
            .ok_or_else(|| Error::UnknownVertex(names.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",")))
    }

    /// Whether `p` lies in the polytope cone (up to tolerance).
    pub fn contains(&self, p: &DVector<f64>) -> bool {
        let scale = p.norm().max(f64::MIN_POSITIVE);
        (0..self.forms.nrows()).all(|s| self.forms.row(s).dot(&p.transpose()) <= crate::TOL * scale * self.forms.row(s).norm())
    }

    /// JSON form `{"dim", "generators", "alpha", "b", "cartan", "vertices"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &DMatrix<f64>| -> Vec<Vec<f64>> {
            (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
        };
        let vertices: Vec<serde_json::Value> = self
            .vertices
            .iter()
            .map(|v| json!({"facets": self.lattice.names_of(v.mask), "point": v.point.iter().copied().collect::<Vec<_>>()}))
            .collect();
        json!({
            "dim": self.dim,
            "generators": self.system().generators(),
            "alpha": rows(&self.forms),
            "b": rows(&self.poles),
            "cartan": self.cartan.to_json(),
            "vertices": vertices,
            "f_vector": self.lattice.f_vector(),
        })
    }
}

/// Enumerates the extreme rays of `{v : F v ≤ 0}` through `d`-subsets of forms.
fn enumerate_vertices(forms: &DMatrix<f64>, d: usize) -> Result<Vec<RealizedVertex>> {
    let n = forms.nrows();
    if n > 24 {
        return Err(Error::InvalidInput("too many facets for vertex enumeration".into()));
    }
    let norms: Vec<f64> = (0..n).map(|s| forms.row(s).norm()).collect();
    let chart: DVector<f64> = -forms.row_sum().transpose();
    let mut found: BTreeMap<u64, DVector<f64>> = BTreeMap::new();
    for subset in bits::k_subsets(n, d) {
        let rows = linalg::submatrix(forms, &subset, &(0..d + 1).collect::<Vec<_>>());
        if linalg::rank(&rows, RANK_TOL) != d {
            continue;
        }
        let (mut v, _, _) = linalg::null_vector(&rows);
        let values = forms * &v;
        if values.iter().enumerate().any(|(s, &x)| x > ACTIVE_TOL * norms[s]) {
            v = -v;
        }
        let values = forms * &v;
        if values.iter().enumerate().any(|(s, &x)| x > ACTIVE_TOL * norms[s]) {
            continue;
        }
        let mask = (0..n).filter(|&s| values[s].abs() <= ACTIVE_TOL * norms[s]).fold(0u64, |m, s| m | bits::bit(s));
        if found.contains_key(&mask) {
            continue;
        }
        let phi = chart.dot(&v);
        if phi <= 0.0 {
            return Err(Error::Numerical("a vertex lies outside the affine chart".into()));
        }
        found.insert(mask, v / phi);
    }
    if found.len() < d + 1 {
        return Err(Error::Numerical(format!("only {} vertices found in dimension {d}", found.len())));
    }
    Ok(found.into_iter().map(|(mask, point)| RealizedVertex { mask, point }).collect())
}

/// Face lattice generated by the vertex facet sets under intersection.
fn build_lattice(forms: &DMatrix<f64>, d: usize, vertices: &[RealizedVertex], names: &[String]) -> Result<FaceLattice> {
    let mut masks: BTreeSet<u64> = vertices.iter().map(|v| v.mask).collect();
    loop {
        let current: Vec<u64> = masks.iter().copied().collect();
        let mut added = false;
        for (i, &a) in current.iter().enumerate() {
            for &b in &current[i + 1..] {
                if masks.insert(a & b) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    masks.insert(0);
    let cols: Vec<usize> = (0..d + 1).collect();
    let mut faces = BTreeMap::new();
    for m in masks {
        let r = if m == 0 { 0 } else { linalg::rank(&linalg::submatrix(forms, &bits::indices(m), &cols), RANK_TOL) };
        faces.insert(m, d - r);
    }
    FaceLattice::new(d, names.to_vec(), faces)
        .map_err(|e| Error::Numerical(format!("the realized faces do not form a polytope: {e}")))
}

/// Realizes an irreducible Cartan matrix of negative type by a rank factorization.
pub fn realize_cartan(a: &CartanMatrix) -> Result<Realization> {
    if !a.system().is_irreducible() {
        return Err(Error::Precondition("the Cartan matrix is reducible".into()));
    }
    if !a.type_decompose().all(ComponentType::Negative) {
        return Err(Error::Precondition("the Cartan matrix is not of negative type".into()));
    }
    let r = a.rank();
    if r < 2 {
        return Err(Error::Precondition("rank below 2".into()));
    }
    let cols = linalg::independent_columns(a.entries(), RANK_TOL);
    let all: Vec<usize> = (0..a.size()).collect();
    let forms = linalg::submatrix(a.entries(), &all, &cols);
    let coeffs = linalg::solve_least_squares(&forms, a.entries())
        .ok_or_else(|| Error::Numerical("rank factorization failed".into()))?;
    let mut poles = coeffs.transpose();
    // A witness is singular only up to its determinant tolerance; rescaling
    // each pole makes every reflection an exact involution.
    for s in 0..a.size() {
        let diag = forms.row(s).dot(&poles.row(s));
        if diag > 0.0 {
            poles.row_mut(s).scale_mut(2.0 / diag);
        }
    }
    Realization::from_parts(a.clone(), forms, poles)
}

/// The Tits simplex: dual-basis forms and poles given by the Gram matrix columns.
#[derive(Clone, Debug, PartialEq)]
pub struct TitsSimplex {
    /// Forms `α_t` (identity rows).
    pub forms: DMatrix<f64>,
    /// Poles `b_t` as rows.
    pub poles: DMatrix<f64>,
    /// `B_W(b_s, b_t)`, equal to the Gram matrix.
    pub bilinear: DMatrix<f64>,
    /// The Gram matrix as a Cartan matrix.
    pub cartan: CartanMatrix,
}

/// Tits simplex of a Coxeter system.
pub fn tits_simplex(w: &CoxeterSystem) -> TitsSimplex {
    let n = w.rank();
    let gram = w.gram_matrix();
    let forms = DMatrix::identity(n, n);
    let poles = gram.transpose();
    let bilinear = &forms * poles.transpose();
    TitsSimplex { forms, poles, bilinear, cartan: CartanMatrix::from_gram(w) }
}

impl TitsSimplex {
    /// As a [`Realization`] when the Gram matrix is nondegenerate enough to
    /// bound a simplex.
    pub fn realization(&self) -> Result<Realization> {
        Realization::from_parts(self.cartan.clone(), self.forms.clone(), self.poles.clone())
    }
}

/// Reflections `σ_s = Id − b_s ⊗ α_s` and their relation residuals.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionSet {
    /// Matrices by generator.
    pub matrices: BTreeMap<String, DMatrix<f64>>,
    /// `max_s ‖σ_s² − Id‖_∞`.
    pub involution_residual: f64,
    /// `max ‖(σ_sσ_t)^{m_st} − Id‖_∞` over pairs with finite order.
    pub relation_residual: f64,
}

/// Reflection matrices of a realization, with the Coxeter relations checked.
pub fn reflections_of(r: &Realization) -> Result<ReflectionSet> {
    let mats = reflection_matrices(r.forms(), r.poles());
    let n = mats.len();
    let id = DMatrix::identity(r.dim() + 1, r.dim() + 1);
    let mut inv: f64 = 0.0;
    for m in &mats {
        inv = inv.max(linalg::max_abs_diff(&(m * m), &id));
    }
    let mut rel: f64 = 0.0;
    for s in 0..n {
        for t in s + 1..n {
            if let Order::Finite(m) = r.system().order(s, t) {
                let p = &mats[s] * &mats[t];
                rel = rel.max(linalg::max_abs_diff(&p.pow(m), &id));
            }
        }
    }
    if inv > crate::TOL || rel > 1e-7 {
        return Err(Error::Numerical(format!("relation residuals {inv:.2e}, {rel:.2e} exceed tolerance")));
    }
    let matrices = r.system().generators().iter().cloned().zip(mats).collect();
    Ok(ReflectionSet { matrices, involution_residual: inv, relation_residual: rel })
}

pub(crate) fn reflection_matrices(forms: &DMatrix<f64>, poles: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let k = forms.ncols();
    (0..forms.nrows())
        .map(|s| DMatrix::identity(k, k) - poles.row(s).transpose() * forms.row(s))
        .collect()
}

/// Geometric class of a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexClass {
    /// The link matrix is of positive type.
    Elliptic,
    /// The link matrix is of zero type with rank `d − 1`.
    Parabolic,
    /// Anything else.
    Loxodromic,
}

/// Class and position of one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexInfo {
    /// Facets through the vertex.
    pub facets: Vec<String>,
    /// Facet mask.
    pub mask: u64,
    /// Representative with `φ = 1`.
    pub position: DVector<f64>,
    /// Geometric class.
    pub class: VertexClass,
}

/// Vertex classification of a realization.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexGeometry {
    /// Per-vertex data.
    pub vertices: Vec<VertexInfo>,
    /// Every vertex elliptic.
    pub perfect: bool,
    /// Every vertex elliptic or parabolic.
    pub quasi_perfect: bool,
    /// Every vertex link is combinatorially perfect.
    pub two_perfect: bool,
}

impl VertexGeometry {
    /// Number of vertices of a class.
    pub fn count(&self, class: VertexClass) -> usize {
        self.vertices.iter().filter(|v| v.class == class).count()
    }

    /// Class of the vertex with the given facets.
    pub fn class_of<S: AsRef<str>>(&self, names: &[S]) -> Option<VertexClass> {
        let want: BTreeSet<&str> = names.iter().map(|s| s.as_ref()).collect();
        self.vertices
            .iter()
            .find(|v| v.facets.iter().map(|s| s.as_str()).collect::<BTreeSet<_>>() == want)
            .map(|v| v.class)
    }
}

/// Classifies every realized vertex by the type and rank of its link matrix.
pub fn classify_vertices(r: &Realization) -> Result<VertexGeometry> {
    let d = r.dim();
    let vertices: Vec<VertexInfo> = r
        .vertices()
        .iter()
        .map(|v| {
            let idx = bits::indices(v.mask);
            let av = r.cartan().restrict(&idx);
            let td = av.type_decompose();
            let class = if td.all(ComponentType::Positive) {
                VertexClass::Elliptic
            } else if td.all(ComponentType::Zero) && av.rank() + 1 == d {
                VertexClass::Parabolic
            } else {
                VertexClass::Loxodromic
            };
            VertexInfo { facets: r.lattice().names_of(v.mask), mask: v.mask, position: v.point.clone(), class }
        })
        .collect();
    let perfect = vertices.iter().all(|v| v.class == VertexClass::Elliptic);
    let quasi_perfect = vertices.iter().all(|v| v.class != VertexClass::Loxodromic);
    let two_perfect = r.labeled_polytope()?.perfectness_report().two_perfect;
    Ok(VertexGeometry { vertices, perfect, quasi_perfect, two_perfect })
}

/// Evidence for or against truncating a vertex.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TruncationCertificate {
    /// Whether the vertex can be truncated.
    pub truncatable: bool,
    /// Linear dimension of the span of the poles at the vertex.
    pub span_dim: usize,
    /// For each edge at the vertex: the other endpoint and the parameter at
    /// which the hyperplane spanned by the poles cuts the edge.
    pub edges: Vec<(Vec<String>, f64)>,
}

fn vertex_by_mask(r: &Realization, v: u64) -> Result<&RealizedVertex> {
    r.vertices
        .iter()
        .find(|x| x.mask == v)
        .ok_or_else(|| Error::UnknownVertex(r.lattice.names_of(v).join(",")))
}

/// Covector of the hyperplane spanned by the poles at `v`, if they span one.
fn pole_hyperplane(r: &Realization, v: u64) -> (usize, Option<DVector<f64>>) {
    let idx = bits::indices(v);
    let cols: Vec<usize> = (0..r.dim + 1).collect();
    let rows = linalg::submatrix(&r.poles, &idx, &cols);
    let span = linalg::rank(&rows, RANK_TOL);
    if span != r.dim {
        return (span, None);
    }
    let (pi, _, _) = linalg::null_vector(&rows);
    (span, Some(pi))
}

/// Decides whether the vertex `v` (a facet mask) is truncatable.
pub fn truncatable(r: &Realization, v: u64) -> Result<TruncationCertificate> {
    let vert = vertex_by_mask(r, v)?;
    let (span_dim, pi) = pole_hyperplane(r, v);
    let mut edges = Vec::new();
    let mut ok = pi.is_some();
    for e in r.lattice.faces_of_dim(1) {
        if !bits::is_subset(e, v) {
            continue;
        }
        let other = r.vertices.iter().find(|w| w.mask != v && bits::is_subset(e, w.mask));
        let other = match other {
            Some(o) => o,
            None => {
                ok = false;
                continue;
            }
        };
        let t = match &pi {
            Some(pi) => {
                let (pv, pw) = (pi.dot(&vert.point), pi.dot(&other.point));
                if (pv - pw).abs() <= f64::EPSILON {
                    f64::NAN
                } else {
                    pv / (pv - pw)
                }
            }
            None => f64::NAN,
        };
        if !(t > EDGE_EPS && t < 1.0 - EDGE_EPS) {
            ok = false;
        }
        edges.push((r.lattice.names_of(other.mask), t));
    }
    Ok(TruncationCertificate { truncatable: ok, span_dim, edges })
}

/// Adds the facet supported by the pole hyperplane at `v`, with pole at `v`.
pub fn truncate_geometric(r: &Realization, v: u64) -> Result<Realization> {
    let cert = truncatable(r, v)?;
    if !cert.truncatable {
        return Err(Error::Precondition(format!("vertex {} is not truncatable", r.lattice.names_of(v).join(","))));
    }
    let point = vertex_by_mask(r, v)?.point.clone();
    let mut pi = pole_hyperplane(r, v).1.expect("certified hyperplane");
    if pi.dot(&point) < 0.0 {
        pi = -pi;
    }
    let pole = &point * (2.0 / pi.dot(&point));
    let n = r.forms.nrows();
    let k = r.dim + 1;
    let mut forms = r.forms.clone().insert_row(n, 0.0);
    let mut poles = r.poles.clone().insert_row(n, 0.0);
    for j in 0..k {
        forms[(n, j)] = pi[j];
        poles[(n, j)] = pole[j];
    }
    let entries = &forms * poles.transpose();
    let mut entries = entries;
    for s in bits::indices(v) {
        entries[(s, n)] = 0.0;
        entries[(n, s)] = 0.0;
    }
    let name = format!("t_{}", r.lattice.names_of(v).join("_"));
    let mut names = r.system().generators().to_vec();
    if names.contains(&name) {
        return Err(Error::InvalidInput(format!("facet name {name} is already used")));
    }
    names.push(name);
    let mut orders: Vec<Vec<Order>> = r.system().orders().to_vec();
    for (i, row) in orders.iter_mut().enumerate() {
        row.push(if v & bits::bit(i) != 0 { Order::Finite(2) } else { Order::Infinite });
    }
    let mut last: Vec<Order> = orders.iter().map(|row| row[n]).collect();
    last.push(Order::Finite(1));
    orders.push(last);
    let system = CoxeterSystem::from_orders(&names, orders)?;
    let cartan = CartanMatrix::new(system, entries)?;
    Realization::from_parts(cartan, forms, poles)
}

/// Whether the realized group preserves a Lorentzian form: the Cartan matrix
/// symmetrizes and the symmetric matrix has exactly one negative eigenvalue
/// and `d` positive ones.
pub fn is_hyperbolic(r: &Realization) -> bool {
    let a = r.cartan();
    let Some(dg) = a.symmetrize() else { return false };
    let n = a.size();
    let s = DMatrix::from_fn(n, n, |i, j| dg[i] * a.entries()[(i, j)] / dg[j]);
    let s = (&s + s.transpose()) * 0.5;
    let ev = linalg::symmetric_eigenvalues(&s);
    let scale = ev.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let neg = ev.iter().filter(|&&x| x < -1e-9 * scale).count();
    let pos = ev.iter().filter(|&&x| x > 1e-9 * scale).count();
    neg == 1 && pos == r.dim()
}

/// The 5-facet example with a perfect loxodromic apex, for `λ > 1`.
pub fn appendix_b(lambda: f64) -> Result<Realization> {
    if !(lambda > 1.0) {
        return Err(Error::InvalidInput("λ must exceed 1".into()));
    }
    let l = lambda;
    let c = l * l - 1.0;
    let forms = DMatrix::from_row_slice(
        5,
        4,
        &[
            1.0, 0.0, 0.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 0.0, 0.0, 1.0, //
            0.0, 1.0, 1.0 / l, -2.0 * c / l,
        ],
    );
    let poles = DMatrix::from_row_slice(
        5,
        4,
        &[
            2.0, -1.0, 0.0, 0.0, //
            -1.0, 2.0, -2.0 * l, 0.0, //
            0.0, -2.0 * l, 2.0, -1.0, //
            0.0, 0.0, -1.0, 2.0, //
            -1.0, 0.0, 0.0, -l / c,
        ],
    );
    let cartan = CartanMatrix::infer(&["1", "2", "3", "4", "5"], &forms * poles.transpose())?;
    Realization::from_parts(cartan, forms, poles)
}

/// The explicit Cartan matrix of [`appendix_b`].
pub fn appendix_b_matrix(lambda: f64) -> DMatrix<f64> {
    let l = lambda;
    DMatrix::from_row_slice(
        5,
        5,
        &[
            2.0, -1.0, 0.0, 0.0, -1.0, //
            -1.0, 2.0, -2.0 * l, 0.0, 0.0, //
            0.0, -2.0 * l, 2.0, -1.0, 0.0, //
            0.0, 0.0, -1.0, 2.0, -l / (l * l - 1.0), //
            -1.0, 0.0, 0.0, 3.0 / l - 4.0 * l, 2.0,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::build_special_form;
    use crate::deform::{tables, DeformationSpace, Family};
    use crate::diagram_core::parse_diagram;

    fn witness(i: u8, m: Order) -> CartanMatrix {
        let f = Family::infer(&tables::cox_gp(i).unwrap().bind_one("m", m).unwrap()).unwrap();
        let s = DeformationSpace::of_family(&f).unwrap();
        build_special_form(f.system(), &s.witnesses[0]).unwrap()
    }

    #[test]
    fn realizes_first_family() {
        let a = witness(1, Order::Finite(7));
        let r = realize_cartan(&a).unwrap();
        assert_eq!(r.dim(), 4);
        assert_eq!(r.vertices().len(), 9);
        let prod = r.forms() * r.poles().transpose();
        assert!(linalg::max_abs_diff(&prod, a.entries()) < 1e-9);
        let g = classify_vertices(&r).unwrap();
        assert!(g.perfect);
        let refl = reflections_of(&r).unwrap();
        assert!(refl.relation_residual < 1e-7);
        let target = Family::infer(a.system()).unwrap().labeled_polytope().unwrap();
        assert_eq!(r.lattice().faces(), target.lattice().faces());
    }

    #[test]
    fn limit_is_pyramid_over_prism() {
        let a = build_special_form(&tables::cox_gp(1).unwrap().bind_one("m", Order::Infinite).unwrap(), &{
            let mut p = BTreeMap::new();
            p.insert("lambda".to_string(), 1.0);
            p
        })
        .unwrap();
        let r = realize_cartan(&a).unwrap();
        assert_eq!(r.vertices().len(), 7);
        let g = classify_vertices(&r).unwrap();
        assert_eq!(g.class_of(&["1", "2", "3", "5", "6"]), Some(VertexClass::Parabolic));
        assert!(g.quasi_perfect && !g.perfect);
        assert!(is_hyperbolic(&r));
    }

    #[test]
    fn lanner_vertices_truncate() {
        let a = witness(2, Order::Finite(7));
        let r = realize_cartan(&a).unwrap();
        let g = classify_vertices(&r).unwrap();
        let v1 = r.vertex(&["1", "3", "4", "5"]).unwrap().mask;
        let v2 = r.vertex(&["2", "3", "4", "5"]).unwrap().mask;
        assert_eq!(g.count(VertexClass::Loxodromic), 2);
        assert!(truncatable(&r, v1).unwrap().truncatable);
        let t = truncate_geometric(&r, v1).unwrap();
        let v2t = t.vertex(&["2", "3", "4", "5"]).unwrap().mask;
        let t = truncate_geometric(&t, v2t).unwrap();
        assert_eq!(t.system().rank(), 8);
        assert!(classify_vertices(&t).unwrap().perfect);
        assert!(v2 != v1);
    }

    #[test]
    fn appendix_b_apex() {
        let r = appendix_b(2.0).unwrap();
        let a = appendix_b_matrix(2.0);
        assert!(linalg::max_abs_diff(r.cartan().entries(), &a) < 1e-12);
        let apex = r.vertex(&["2", "3", "4", "5"]).unwrap().mask;
        let c = truncatable(&r, apex).unwrap();
        assert!(!c.truncatable);
        assert_eq!(c.span_dim, 4);
        let r = appendix_b(1.5f64.sqrt()).unwrap();
        let apex = r.vertex(&["2", "3", "4", "5"]).unwrap().mask;
        assert_eq!(truncatable(&r, apex).unwrap().span_dim, 3);
    }

    #[test]
    fn tits_simplex_bilinear_form() {
        let w = parse_diagram("nodes 1..3; 1-2; 2-3; 1-3").unwrap();
        let t = tits_simplex(&w);
        assert!(linalg::max_abs_diff(&t.bilinear, &w.gram_matrix()) < 1e-12);
        let w = parse_diagram("nodes 1..2; 1-2").unwrap();
        let r = tits_simplex(&w).realization().unwrap();
        assert_eq!(r.vertices().len(), 2);
        assert!((t.bilinear[(0, 1)] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn reflections_are_exact_involutions_at_extreme_witnesses() {
        let w = parse_diagram("nodes 1,2,3,4,5,6,n1; 1-n1; 2-n1; 2-3; 3-1; 4-5; 5-6; 4-6; 3-4").unwrap();
        let s = DeformationSpace::of_family(&Family::infer(&w).unwrap()).unwrap();
        for p in &s.witnesses {
            let r = realize_cartan(&build_special_form(&w, p).unwrap()).unwrap();
            for k in 0..w.rank() {
                assert!((r.forms().row(k).dot(&r.poles().row(k)) - 2.0).abs() < 1e-12);
            }
            assert!(reflections_of(&r).unwrap().involution_residual < crate::TOL);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let w = parse_diagram("nodes 1..3; 1-2; 2-3").unwrap();
        assert!(matches!(realize_cartan(&CartanMatrix::from_gram(&w)), Err(Error::Precondition(_))));
    }
}
