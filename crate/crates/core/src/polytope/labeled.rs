//! Labeled polytopes: a face lattice whose facets are the generators of a
//! Coxeter system.
//!
//! Adjacent facets carry the finite order of their ridge label; non-adjacent
//! facets carry order ∞.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{remap, FaceLattice};
use crate::bits;
use crate::diagram_core::{iso::matrix_isomorphisms, CoxeterSystem, Kind, Order};
use crate::error::{Error, Result};

/// A face lattice with ridge labels, stored as the Coxeter system on its
/// facets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledPolytope {
    lattice: FaceLattice,
    system: CoxeterSystem,
}

impl LabeledPolytope {
    /// Checks that facet names match the generators and that a pair of facets
    /// is adjacent exactly when its order is finite.
    pub fn new(lattice: FaceLattice, system: CoxeterSystem) -> Result<Self> {
        if lattice.facets() != system.generators() {
            return Err(Error::InvalidLabeling("facet names differ from the generators".into()));
        }
        let n = system.rank();
        for i in 0..n {
            for j in i + 1..n {
                let adjacent = lattice.adjacent(i, j);
                let finite = system.order(i, j) != Order::Infinite;
                if adjacent && !finite {
                    return Err(Error::InvalidLabeling(format!(
                        "ridge {}∩{} cannot carry label ∞",
                        lattice.facets()[i],
                        lattice.facets()[j]
                    )));
                }
                if !adjacent && finite {
                    return Err(Error::InvalidLabeling(format!(
                        "facets {} and {} are not adjacent but m = {}",
                        lattice.facets()[i],
                        lattice.facets()[j],
                        system.order(i, j)
                    )));
                }
            }
        }
        Ok(Self { lattice, system })
    }

    /// Labels `lattice` by `w`; `assignment` maps facet names to generators.
    /// The result lists facets in the generator order of `w`.
    pub fn label(lattice: &FaceLattice, w: &CoxeterSystem, assignment: &BTreeMap<String, String>) -> Result<Self> {
        let n = lattice.facets().len();
        if assignment.len() != n || w.rank() != n {
            return Err(Error::InvalidLabeling("assignment is not a bijection onto the generators".into()));
        }
        let mut perm = vec![usize::MAX; n];
        for (facet, generator) in assignment {
            let f = lattice.facet_index(facet).map_err(|_| Error::InvalidLabeling(format!("unknown facet {facet}")))?;
            let g = w.index_of(generator)?;
            if perm[g] != usize::MAX {
                return Err(Error::InvalidLabeling(format!("generator {generator} assigned twice")));
            }
            perm[g] = f;
        }
        let relabeled = lattice.permuted(&perm).renamed(w.generators())?;
        Self::new(relabeled, w.clone())
    }

    /// Labels `lattice` by `w`, matching the `i`-th facet with the `i`-th generator.
    pub fn label_in_order(lattice: &FaceLattice, w: &CoxeterSystem) -> Result<Self> {
        let assignment = lattice.facets().iter().cloned().zip(w.generators().iter().cloned()).collect();
        Self::label(lattice, w, &assignment)
    }

    /// Underlying face lattice.
    pub fn lattice(&self) -> &FaceLattice {
        &self.lattice
    }

    /// Coxeter system on the facets.
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    /// Dimension.
    pub fn dim(&self) -> usize {
        self.lattice.dim()
    }

    /// Ridge labels keyed by facet-name pairs.
    pub fn labels(&self) -> BTreeMap<(String, String), Order> {
        self.lattice
            .ridges()
            .into_iter()
            .map(|r| {
                let ij = bits::indices(r);
                let f = self.lattice.facets();
                ((f[ij[0]].clone(), f[ij[1]].clone()), self.system.order(ij[0], ij[1]))
            })
            .collect()
    }

    /// Vertex with exactly the named facets.
    pub fn vertex<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        let label = || names.iter().map(|s| s.as_ref()).collect::<Vec<_>>().join(",");
        let mask = self.lattice.mask_of(names).map_err(|_| Error::UnknownVertex(label()))?;
        if self.lattice.face_dim(mask) == Some(0) {
            Ok(mask)
        } else {
            Err(Error::UnknownVertex(label()))
        }
    }

    /// Whether `v` is a simple vertex (contained in exactly `d` facets).
    pub fn is_simple_vertex(&self, v: u64) -> bool {
        self.lattice.face_dim(v) == Some(0) && bits::count(v) == self.dim()
    }

    /// Link of a vertex: faces through `v` with dimension lowered by one,
    /// labeled by the restriction of the Coxeter system to `S_v`.
    pub fn vertex_link(&self, v: u64) -> Result<LabeledPolytope> {
        if self.lattice.face_dim(v) != Some(0) {
            return Err(Error::UnknownVertex(self.lattice.names_of(v).join(",")));
        }
        let idx = bits::indices(v);
        let mut position = vec![usize::MAX; self.lattice.facets().len()];
        for (k, &i) in idx.iter().enumerate() {
            position[i] = k;
        }
        let faces = self
            .lattice
            .faces()
            .iter()
            .filter(|&(&m, _)| m != v && bits::is_subset(m, v))
            .map(|(&m, &d)| (remap(m, &position), d - 1))
            .collect();
        let system = self.system.subsystem_indices(&idx);
        let lattice = FaceLattice::new(self.dim() - 1, system.generators().to_vec(), faces)?;
        Ok(LabeledPolytope { lattice, system })
    }

    /// Per-vertex taxonomy of the vertex links.
    pub fn perfectness_report(&self) -> PerfectnessReport {
        let vertices: Vec<(Vec<String>, VertexLabel)> = self
            .lattice
            .vertices()
            .into_iter()
            .map(|v| (self.lattice.names_of(v), self.vertex_label(v)))
            .collect();
        let perfect = vertices.iter().all(|(_, l)| *l == VertexLabel::Spherical);
        let two_perfect = vertices.iter().all(|(_, l)| *l != VertexLabel::LargeOther);
        PerfectnessReport { vertices, perfect, two_perfect }
    }

    /// Label of one vertex link.
    pub fn vertex_label(&self, v: u64) -> VertexLabel {
        let w = self.system.subsystem_indices(&bits::indices(v));
        let comps = w.classify_components();
        if comps.iter().all(|(_, l)| l.kind == Kind::Spherical) {
            return VertexLabel::Spherical;
        }
        if bits::count(v) == self.dim() {
            // Simplex link: perfect iff irreducible affine or Lannér.
            if comps.len() == 1 {
                match comps[0].1.kind {
                    Kind::Affine => return VertexLabel::Affine,
                    Kind::Lanner => return VertexLabel::Lanner,
                    _ => {}
                }
            }
            return VertexLabel::LargeOther;
        }
        if self.is_cusp_vertex(v) {
            VertexLabel::Affine
        } else {
            VertexLabel::LargeOther
        }
    }

    /// Whether the link of `v` is a `(d−1)`-prism with group `Ã₁ × Ã_{d−2}`.
    pub fn is_cusp_vertex(&self, v: u64) -> bool {
        self.cusp_ends(v).is_ok()
    }

    /// For a prism vertex, the two facets forming the `Ã₁` factor.
    fn cusp_ends(&self, v: u64) -> Result<(usize, usize)> {
        let d = self.dim();
        let link = self.vertex_link(v)?;
        let w = link.system();
        let describe = || {
            w.classify_components()
                .iter()
                .map(|(_, l)| l.catalog_name.clone().unwrap_or_else(|| l.kind.to_string()))
                .collect::<Vec<_>>()
                .join(" x ")
        };
        let fail = || {
            Error::Precondition(format!(
                "link of vertex {} has group {}, not tilde_A_1 x tilde_A_{}",
                self.lattice.names_of(v).join(","),
                describe(),
                d.saturating_sub(2)
            ))
        };
        if d < 3 || bits::count(v) != d + 1 {
            return Err(fail());
        }
        let prism = FaceLattice::simplex_product(1, d - 2);
        if !link.lattice.is_isomorphic(&prism) {
            return Err(fail());
        }
        let comps = w.classify_components();
        let name_a1 = "tilde_A_1".to_string();
        let name_big = format!("tilde_A_{}", d - 2);
        let names: Vec<Option<String>> = comps.iter().map(|(_, l)| l.catalog_name.clone()).collect();
        let ok = comps.len() == 2
            && names.contains(&Some(name_a1.clone()))
            && (names.contains(&Some(name_big.clone())) || (d == 3 && names == vec![Some(name_a1.clone()); 2]));
        if !ok {
            return Err(fail());
        }
        let ends = comps.iter().find(|(g, l)| l.catalog_name.as_deref() == Some("tilde_A_1") && g.len() == 2).unwrap();
        let idx = bits::indices(v);
        let s = idx[w.index_of(&ends.0[0])?];
        let t = idx[w.index_of(&ends.0[1])?];
        if self.lattice.adjacent(s, t) {
            return Err(fail());
        }
        Ok((s.min(t), s.max(t)))
    }

    /// Replaces the prism vertex `v` by a ridge labeled `m` between the two
    /// `Ã₁` facets.
    pub fn dehn_fill(&self, v: u64, m: u32) -> Result<LabeledPolytope> {
        if m < 2 {
            return Err(Error::InvalidInput("the filling order must be at least 2".into()));
        }
        let (s, t) = self.cusp_ends(v)?;
        let d = self.dim();
        let st = bits::bit(s) | bits::bit(t);
        let rest = v & !st;
        let mut faces = self.lattice.faces().clone();
        faces.remove(&v);
        for sub in bits::submasks(rest) {
            if sub != rest {
                faces.insert(st | sub, d - 2 - bits::count(sub));
            }
        }
        let mut orders = self.system.orders().to_vec();
        orders[s][t] = Order::Finite(m);
        orders[t][s] = Order::Finite(m);
        let system = CoxeterSystem::from_orders(self.system.generators(), orders)?;
        let lattice = FaceLattice::new(d, self.lattice.facets().to_vec(), faces)?;
        LabeledPolytope::new(lattice, system)
    }

    /// Inverse of [`LabeledPolytope::dehn_fill`]: collapses the ridge between
    /// facets `s` and `t` to a vertex and sets their order to ∞.
    pub fn collapse(&self, s: &str, t: &str) -> Result<LabeledPolytope> {
        let (i, j) = (self.lattice.facet_index(s)?, self.lattice.facet_index(t)?);
        let d = self.dim();
        let st = bits::bit(i) | bits::bit(j);
        if !self.lattice.adjacent(i, j) {
            return Err(Error::Precondition(format!("facets {s} and {t} do not share a ridge")));
        }
        let through: Vec<u64> = self.lattice.faces().keys().copied().filter(|&m| bits::is_subset(st, m)).collect();
        let v = through.iter().fold(st, |acc, &m| acc | m);
        if bits::count(v) != d + 1 {
            return Err(Error::Precondition("the ridge is not a simplex with d−1 vertices".into()));
        }
        let mut faces = self.lattice.faces().clone();
        for m in through {
            faces.remove(&m);
        }
        faces.insert(v, 0);
        let mut orders = self.system.orders().to_vec();
        orders[i][j] = Order::Infinite;
        orders[j][i] = Order::Infinite;
        let system = CoxeterSystem::from_orders(self.system.generators(), orders)?;
        LabeledPolytope::new(FaceLattice::new(d, self.lattice.facets().to_vec(), faces)?, system)
    }

    /// Truncates simple vertices; each new facet meets the facets of its vertex
    /// at right angles. New facets are named `t_` followed by the vertex's facet
    /// names joined by `_`.
    pub fn truncate(&self, vertices: &[u64]) -> Result<LabeledPolytope> {
        let mut out = self.clone();
        let names: Vec<Vec<String>> = vertices.iter().map(|&v| self.lattice.names_of(v)).collect();
        for vnames in &names {
            let v = out.lattice.mask_of(vnames)?;
            out = out.truncate_one(v)?;
        }
        Ok(out)
    }

    fn truncate_one(&self, v: u64) -> Result<LabeledPolytope> {
        if !self.is_simple_vertex(v) {
            return Err(Error::Precondition(format!(
                "vertex {} is not simple",
                self.lattice.names_of(v).join(",")
            )));
        }
        let n = self.lattice.facets().len();
        if n >= 64 {
            return Err(Error::InvalidInput("too many facets".into()));
        }
        let d = self.dim();
        let new = bits::bit(n);
        let mut faces = self.lattice.faces().clone();
        for (&m, &dim) in self.lattice.faces() {
            if m != v && bits::is_subset(m, v) {
                faces.insert(m | new, dim - 1);
            }
        }
        faces.remove(&v);
        let name = format!("t_{}", self.lattice.names_of(v).join("_"));
        let mut facets = self.lattice.facets().to_vec();
        facets.push(name);
        let mut orders: Vec<Vec<Order>> = self.system.orders().to_vec();
        for (i, row) in orders.iter_mut().enumerate() {
            row.push(if v & bits::bit(i) != 0 { Order::Finite(2) } else { Order::Infinite });
        }
        let mut last: Vec<Order> = orders.iter().map(|r| r[n]).collect();
        last.push(Order::Finite(1));
        orders.push(last);
        let system = CoxeterSystem::from_orders(&facets, orders)?;
        LabeledPolytope::new(FaceLattice::new(d, facets, faces)?, system)
    }

    /// Label-preserving isomorphisms between the links at `v` of `self` and at
    /// `w` of `other`, as maps from facet names to facet names.
    pub fn link_isomorphisms(&self, v: u64, other: &LabeledPolytope, w: u64) -> Result<Vec<BTreeMap<String, String>>> {
        let la = self.vertex_link(v)?;
        let lb = other.vertex_link(w)?;
        let maps = matrix_isomorphisms(la.system.orders(), lb.system.orders(), usize::MAX);
        Ok(maps
            .into_iter()
            .filter(|p| la.lattice.faces().iter().all(|(&m, &d)| lb.lattice.face_dim(remap(m, p)) == Some(d)))
            .map(|p| {
                p.iter()
                    .enumerate()
                    .map(|(i, &j)| (la.system.generators()[i].clone(), lb.system.generators()[j].clone()))
                    .collect()
            })
            .collect())
    }

    /// Glues the truncations of `self` at `v` and of `other` at `w` along
    /// their new facets via `iso`. Each facet `s` through `v` merges with
    /// `iso(s)` into one facet named `1:s|2:iso(s)`; other facets are
    /// prefixed `1:` or `2:`.
    pub fn glue(&self, v: u64, other: &LabeledPolytope, w: u64, iso: &BTreeMap<String, String>) -> Result<GluedPolytope> {
        if !self.is_simple_vertex(v) || !other.is_simple_vertex(w) {
            return Err(Error::Precondition("gluing needs simple vertices".into()));
        }
        if self.dim() != other.dim() {
            return Err(Error::Precondition("polytopes of different dimensions".into()));
        }
        let valid = self.link_isomorphisms(v, other, w)?;
        if !valid.contains(iso) {
            return Err(Error::InvalidLabeling("the map is not a label-preserving link isomorphism".into()));
        }
        let d = self.dim();
        let fa = self.lattice.facets();
        let fb = other.lattice.facets();
        let merged_of_a: BTreeMap<usize, String> = bits::indices(v)
            .into_iter()
            .map(|i| (i, format!("1:{}|2:{}", fa[i], iso[&fa[i]])))
            .collect();
        let merged_of_b: BTreeMap<usize, String> = bits::indices(v)
            .into_iter()
            .map(|i| (other.lattice.facet_index(&iso[&fa[i]]).expect("iso image"), merged_of_a[&i].clone()))
            .collect();
        let name_a = |i: usize| merged_of_a.get(&i).cloned().unwrap_or_else(|| format!("1:{}", fa[i]));
        let name_b = |j: usize| merged_of_b.get(&j).cloned().unwrap_or_else(|| format!("2:{}", fb[j]));

        let mut facets: Vec<String> = (0..fa.len()).map(name_a).collect();
        facets.extend((0..fb.len()).filter(|j| !merged_of_b.contains_key(j)).map(name_b));
        let index: BTreeMap<String, usize> = facets.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();
        let map_a: Vec<usize> = (0..fa.len()).map(|i| index[&name_a(i)]).collect();
        let map_b: Vec<usize> = (0..fb.len()).map(|j| index[&name_b(j)]).collect();

        let mut faces = BTreeMap::new();
        for (lattice, vertex, map) in [(&self.lattice, v, &map_a), (&other.lattice, w, &map_b)] {
            for (&m, &dim) in lattice.faces() {
                if m == vertex {
                    continue;
                }
                let image = remap(m, map);
                if let Some(prev) = faces.insert(image, dim) {
                    if prev != dim {
                        return Err(Error::InvalidLabeling("halves disagree on a seam face".into()));
                    }
                }
            }
        }

        let n = facets.len();
        let mut orders = vec![vec![Order::Infinite; n]; n];
        for (i, row) in orders.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        for (system, map) in [(&self.system, &map_a), (&other.system, &map_b)] {
            for i in 0..system.rank() {
                for j in 0..system.rank() {
                    if i != j && system.order(i, j) != Order::Infinite {
                        orders[map[i]][map[j]] = system.order(i, j);
                    }
                }
            }
        }
        let system = CoxeterSystem::from_orders(&facets, orders)?;
        let polytope = LabeledPolytope::new(FaceLattice::new(d, facets, faces)?, system)?;
        let seam: BTreeSet<String> = merged_of_a.values().cloned().collect();
        Ok(GluedPolytope {
            polytope,
            seam,
            left: (0..fa.len()).map(|i| (name_a(i), fa[i].clone())).collect(),
            right: (0..fb.len()).map(|j| (name_b(j), fb[j].clone())).collect(),
            left_new: format!("t_{}", self.lattice.names_of(v).join("_")),
            right_new: format!("t_{}", other.lattice.names_of(w).join("_")),
        })
    }

    /// JSON object `{"dim", "facets", "faces", "labels"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut value = self.lattice.to_json();
        let labels: BTreeMap<String, String> =
            self.labels().into_iter().map(|((s, t), m)| (format!("{s},{t}"), m.to_string())).collect();
        value["labels"] = serde_json::json!(labels);
        value
    }
}

/// The result of gluing two truncated labeled polytopes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluedPolytope {
    /// The glued labeled polytope.
    pub polytope: LabeledPolytope,
    /// Names of the merged facets crossing the seam.
    pub seam: BTreeSet<String>,
    /// Glued facet name to facet name in the first piece.
    pub left: BTreeMap<String, String>,
    /// Glued facet name to facet name in the second piece.
    pub right: BTreeMap<String, String>,
    /// Name of the truncation facet in the first piece.
    pub left_new: String,
    /// Name of the truncation facet in the second piece.
    pub right_new: String,
}

impl GluedPolytope {
    /// Cuts along the seam, returning the two truncated pieces.
    pub fn cut(&self) -> Result<(LabeledPolytope, LabeledPolytope)> {
        Ok((self.piece(&self.left, &self.left_new)?, self.piece(&self.right, &self.right_new)?))
    }

    fn piece(&self, side: &BTreeMap<String, String>, new_name: &str) -> Result<LabeledPolytope> {
        let lattice = self.polytope.lattice();
        let system = self.polytope.system();
        let seam_mask = lattice.mask_of(&self.seam.iter().collect::<Vec<_>>())?;
        let side_mask = lattice.mask_of(&side.keys().collect::<Vec<_>>())?;
        let own_vertices: Vec<u64> = lattice
            .vertices()
            .into_iter()
            .filter(|&u| bits::is_subset(u, side_mask) && u & side_mask & !seam_mask != 0)
            .collect();
        // Piece facets in glued order, plus the truncation facet.
        let idx: Vec<usize> = bits::indices(side_mask);
        let mut position = vec![usize::MAX; lattice.facets().len()];
        for (k, &i) in idx.iter().enumerate() {
            position[i] = k;
        }
        let new_bit = bits::bit(idx.len());
        let mut faces = BTreeMap::new();
        for (&m, &dim) in lattice.faces() {
            if !bits::is_subset(m, side_mask) {
                continue;
            }
            if own_vertices.iter().any(|&u| bits::is_subset(m, u)) || m == 0 {
                faces.insert(remap(m, &position), dim);
            }
            if bits::is_subset(m, seam_mask) {
                faces.insert(remap(m, &position) | new_bit, dim - 1);
            }
        }
        let mut names: Vec<String> = idx.iter().map(|&i| side[&lattice.facets()[i]].clone()).collect();
        names.push(new_name.to_string());
        let n = names.len();
        let mut orders = vec![vec![Order::Infinite; n]; n];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                orders[a][b] = system.order(i, j);
            }
            let on_seam = seam_mask & bits::bit(i) != 0;
            orders[a][n - 1] = if on_seam { Order::Finite(2) } else { Order::Infinite };
            orders[n - 1][a] = orders[a][n - 1];
        }
        orders[n - 1][n - 1] = Order::Finite(1);
        let system = CoxeterSystem::from_orders(&names, orders)?;
        LabeledPolytope::new(FaceLattice::new(lattice.dim(), names, faces)?, system)
    }
}

/// Class of a vertex link.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexLabel {
    /// Spherical Coxeter group.
    Spherical,
    /// Irreducible affine simplex, or a prism with group `Ã₁ × Ã_{d−2}`.
    Affine,
    /// Lannér simplex.
    Lanner,
    /// Any other link.
    LargeOther,
}

/// Vertex taxonomy of a labeled polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectnessReport {
    /// Each vertex (by facet names) with its link class.
    pub vertices: Vec<(Vec<String>, VertexLabel)>,
    /// Every vertex link is spherical.
    pub perfect: bool,
    /// Every vertex link is perfect.
    pub two_perfect: bool,
}

impl PerfectnessReport {
    /// Number of vertices with the given label.
    pub fn count(&self, label: VertexLabel) -> usize {
        self.vertices.iter().filter(|(_, l)| *l == label).count()
    }
}
