//! Combinatorial polytopes, ridge labelings and the operations on them.
//!
//! A [`FaceLattice`] records every nonempty face by the set of facets that
//! contain it (a bit mask over the facet list) together with its dimension.
//! The whole polytope is the face with the empty facet set. Labeled polytopes,
//! links, Dehn filling, truncation and gluing live in [`labeled`]; the
//! prediction of faces from a Cartan matrix lives in [`predict`].

pub mod labeled;
pub mod predict;

use std::collections::BTreeMap;

use crate::bits;
use crate::diagram_core::iso::matrix_isomorphisms;
use crate::error::{Error, Result};

pub use labeled::{GluedPolytope, LabeledPolytope, PerfectnessReport, VertexLabel};
pub use predict::{faces_from_cartan, is_prismatic, FaceReason, PredictedFace};

/// Face lattice of a convex polytope, indexed by facet sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceLattice {
    dim: usize,
    facets: Vec<String>,
    faces: BTreeMap<u64, usize>,
}

impl FaceLattice {
    /// Lattice from explicit faces; `faces` maps facet masks to dimensions.
    pub fn new(dim: usize, facets: Vec<String>, faces: BTreeMap<u64, usize>) -> Result<Self> {
        let n = facets.len();
        if n > 64 {
            return Err(Error::InvalidInput("at most 64 facets are supported".into()));
        }
        for (i, f) in facets.iter().enumerate() {
            if facets[..i].contains(f) {
                return Err(Error::InvalidInput(format!("duplicate facet name {f}")));
            }
            if faces.get(&bits::bit(i)) != Some(&(dim.wrapping_sub(1))) {
                return Err(Error::InvalidInput(format!("facet {f} is missing or has the wrong dimension")));
            }
        }
        if faces.get(&0) != Some(&dim) {
            return Err(Error::InvalidInput("the polytope itself must be a face".into()));
        }
        if faces.keys().any(|&m| !bits::is_subset(m, bits::full(n))) {
            return Err(Error::InvalidInput("face mask refers to an unknown facet".into()));
        }
        Ok(Self { dim, facets, faces })
    }

    /// The `n`-simplex with facets `prefix1, …, prefix(n+1)`.
    pub fn simplex(n: usize, prefix: &str) -> Self {
        let facets: Vec<String> = (1..=n + 1).map(|i| format!("{prefix}{i}")).collect();
        let faces = bits::submasks(bits::full(n + 1))
            .filter(|&m| bits::count(m) <= n)
            .map(|m| (m, n - bits::count(m)))
            .collect();
        Self { dim: n, facets, faces }
    }

    /// Cartesian product; facet names must be disjoint.
    pub fn product(&self, other: &FaceLattice) -> Result<Self> {
        let shift = self.facets.len();
        if shift + other.facets.len() > 64 {
            return Err(Error::InvalidInput("too many facets".into()));
        }
        let mut facets = self.facets.clone();
        for f in &other.facets {
            if facets.contains(f) {
                return Err(Error::InvalidInput(format!("facet name {f} appears in both factors")));
            }
            facets.push(f.clone());
        }
        let mut faces = BTreeMap::new();
        for (&ma, &da) in &self.faces {
            for (&mb, &db) in &other.faces {
                faces.insert(ma | (mb << shift), da + db);
            }
        }
        Ok(Self { dim: self.dim + other.dim, facets, faces })
    }

    /// `Δ_e × Δ_f` with facets `a1..a(e+1)` and `b1..b(f+1)`.
    pub fn simplex_product(e: usize, f: usize) -> Self {
        Self::simplex(e, "a").product(&Self::simplex(f, "b")).expect("distinct prefixes")
    }

    /// Pyramid over `self`; the base facet is the first unused name `c1`, `c2`, ….
    pub fn pyramid(&self) -> Self {
        let n = self.facets.len();
        let base_name = (1..).map(|k| format!("c{k}")).find(|c| !self.facets.contains(c)).expect("unbounded");
        let base = bits::bit(n);
        let all = bits::full(n);
        let mut faces = BTreeMap::new();
        faces.insert(all, 0);
        for (&m, &d) in &self.faces {
            faces.insert(m | base, d);
            faces.insert(m, d + 1);
        }
        let mut facets = self.facets.clone();
        facets.push(base_name);
        Self { dim: self.dim + 1, facets, faces }
    }

    /// Dimension of the polytope.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Facet names in order.
    pub fn facets(&self) -> &[String] {
        &self.facets
    }

    /// All faces as `mask → dimension`, including the polytope itself (mask 0).
    pub fn faces(&self) -> &BTreeMap<u64, usize> {
        &self.faces
    }

    /// Dimension of the face with the given facet set.
    pub fn face_dim(&self, mask: u64) -> Option<usize> {
        self.faces.get(&mask).copied()
    }

    /// Whether the facet set is the facet set of a face.
    pub fn is_face(&self, mask: u64) -> bool {
        self.faces.contains_key(&mask)
    }

    /// Faces of dimension `k`.
    pub fn faces_of_dim(&self, k: usize) -> Vec<u64> {
        self.faces.iter().filter(|&(_, &d)| d == k).map(|(&m, _)| m).collect()
    }

    /// Vertex facet sets.
    pub fn vertices(&self) -> Vec<u64> {
        self.faces_of_dim(0)
    }

    /// Ridge facet sets.
    pub fn ridges(&self) -> Vec<u64> {
        if self.dim < 2 {
            return Vec::new();
        }
        self.faces_of_dim(self.dim - 2)
    }

    /// `f_k` for `k = 0..=d`, with `f_d = 1`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for &d in self.faces.values() {
            f[d] += 1;
        }
        f
    }

    /// `Σ (−1)^k f_k` over all faces including the polytope; 1 for polytopes.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().iter().enumerate().map(|(k, &f)| if k % 2 == 0 { f as i64 } else { -(f as i64) }).sum()
    }

    /// Facet set of the smallest face containing every facet in `mask`, or
    /// `None` when those facets have empty intersection.
    pub fn closure(&self, mask: u64) -> Option<u64> {
        let mut acc: Option<u64> = None;
        for v in self.vertices() {
            if bits::is_subset(mask, v) {
                acc = Some(acc.map_or(v, |a| a & v));
            }
        }
        acc.filter(|m| self.is_face(*m))
    }

    /// Whether every pair of meeting faces meets in a recorded face.
    pub fn is_intersection_closed(&self) -> bool {
        let masks: Vec<u64> = self.faces.keys().copied().collect();
        let vertices = self.vertices();
        for (i, &a) in masks.iter().enumerate() {
            for &b in &masks[i..] {
                let meet = a | b;
                let containing: Vec<u64> = vertices.iter().copied().filter(|&v| bits::is_subset(meet, v)).collect();
                if containing.is_empty() {
                    continue;
                }
                let face = containing.iter().fold(u64::MAX, |x, &v| x & v);
                if !self.is_face(face) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether two facets share a ridge.
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        i != j && self.dim >= 2 && self.face_dim(bits::bit(i) | bits::bit(j)) == Some(self.dim - 2)
    }

    /// Position of a facet name.
    pub fn facet_index(&self, name: &str) -> Result<usize> {
        self.facets
            .iter()
            .position(|f| f == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown facet {name}")))
    }

    /// Mask of a list of facet names.
    pub fn mask_of<S: AsRef<str>>(&self, names: &[S]) -> Result<u64> {
        names.iter().try_fold(0, |m, n| Ok(m | bits::bit(self.facet_index(n.as_ref())?)))
    }

    /// Facet names in a mask.
    pub fn names_of(&self, mask: u64) -> Vec<String> {
        bits::indices(mask).into_iter().map(|i| self.facets[i].clone()).collect()
    }

    /// Vertices lying on the face with the given facet set.
    pub fn vertices_of(&self, mask: u64) -> Vec<u64> {
        self.vertices().into_iter().filter(|&v| bits::is_subset(mask, v)).collect()
    }

    /// Same lattice with new facet names.
    pub fn renamed(&self, names: &[String]) -> Result<Self> {
        if names.len() != self.facets.len() {
            return Err(Error::InvalidInput("rename list has the wrong length".into()));
        }
        Self::new(self.dim, names.to_vec(), self.faces.clone())
    }

    /// Lattice with facets reordered: facet `k` of the result is facet `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let mut inverse = vec![0; perm.len()];
        for (k, &p) in perm.iter().enumerate() {
            inverse[p] = k;
        }
        let faces = self.faces.iter().map(|(&m, &d)| (remap(m, &inverse), d)).collect();
        let facets = perm.iter().map(|&p| self.facets[p].clone()).collect();
        Self { dim: self.dim, facets, faces }
    }

    fn pair_signature(&self) -> Vec<Vec<(i64, i64)>> {
        let n = self.facets.len();
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let m = bits::bit(i) | bits::bit(j);
                        match self.closure(m) {
                            Some(c) => (bits::count(c) as i64, self.face_dim(c).map_or(-1, |d| d as i64)),
                            None => (-1, -1),
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Facet bijections `p` (facet `i` ↦ facet `p[i]` of `other`) carrying faces
    /// to faces of the same dimension, up to `limit` results.
    pub fn isomorphisms(&self, other: &FaceLattice, limit: usize) -> Vec<Vec<usize>> {
        if self.dim != other.dim || self.facets.len() != other.facets.len() || self.faces.len() != other.faces.len() {
            return Vec::new();
        }
        let candidates = matrix_isomorphisms(&self.pair_signature(), &other.pair_signature(), usize::MAX);
        candidates
            .into_iter()
            .filter(|p| self.faces.iter().all(|(&m, &d)| other.face_dim(remap(m, p)) == Some(d)))
            .take(limit)
            .collect()
    }

    /// Whether the two lattices are combinatorially equivalent.
    pub fn is_isomorphic(&self, other: &FaceLattice) -> bool {
        !self.isomorphisms(other, 1).is_empty()
    }

    /// JSON object `{"dim", "facets", "faces": [{"facets", "dim"}]}`.
    pub fn to_json(&self) -> serde_json::Value {
        let faces: Vec<serde_json::Value> = self
            .faces
            .iter()
            .map(|(&m, &d)| serde_json::json!({"facets": self.names_of(m), "dim": d}))
            .collect();
        serde_json::json!({"dim": self.dim, "facets": self.facets, "faces": faces})
    }
}

/// Image of a mask under the position map `map` (bit `i` goes to `map[i]`).
pub fn remap(mask: u64, map: &[usize]) -> u64 {
    bits::indices(mask).into_iter().fold(0, |acc, i| acc | bits::bit(map[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(l: &FaceLattice) -> (usize, usize, usize) {
        (l.facets().len(), l.ridges().len(), l.vertices().len())
    }

    #[test]
    fn products_of_simplices() {
        assert_eq!(counts(&FaceLattice::simplex_product(2, 2)), (6, 15, 9));
        let prism = FaceLattice::simplex_product(1, 2);
        assert_eq!((prism.facets().len(), prism.faces_of_dim(1).len(), prism.vertices().len()), (5, 9, 6));
        let square = FaceLattice::simplex_product(1, 1);
        assert_eq!((square.facets().len(), square.vertices().len()), (4, 4));
    }

    #[test]
    fn pyramids() {
        let p = FaceLattice::simplex_product(1, 2).pyramid();
        assert_eq!(counts(&p), (6, 14, 7));
        assert!(FaceLattice::simplex(3, "x").pyramid().is_isomorphic(&FaceLattice::simplex(4, "y")));
        let pp = FaceLattice::simplex_product(1, 1).pyramid().pyramid();
        assert_eq!(pp.dim(), 4);
        let n = pp.facets().len();
        let non_adjacent =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| !pp.adjacent(i, j)).count();
        assert_eq!(non_adjacent, 2);
    }

    #[test]
    fn closure_and_adjacency() {
        let l = FaceLattice::simplex_product(2, 2);
        let a = l.mask_of(&["a1", "a2", "a3"]).unwrap();
        assert_eq!(l.closure(a), None);
        assert!(l.adjacent(0, 3));
        assert!(l.is_intersection_closed());
    }

    #[test]
    fn isomorphism_detects_structure() {
        let a = FaceLattice::simplex_product(1, 3);
        let b = FaceLattice::simplex_product(2, 2);
        assert!(!a.is_isomorphic(&b));
        assert_eq!(b.isomorphisms(&b, usize::MAX).len(), 72);
    }

    #[test]
    fn pyramid_face_counts_closed_form() {
        // Vertices (e+1)(f+1)+g and edges (e+1)(f+1)(g+(e+f)/2)+g(g-1)/2.
        for e in 1..=2usize {
            for f in e..=3usize {
                for g in 0..=2usize {
                    let mut l = FaceLattice::simplex_product(e, f);
                    for _ in 0..g {
                        l = l.pyramid();
                    }
                    let v = (e + 1) * (f + 1) + g;
                    let edges = (e + 1) * (f + 1) * (2 * g + e + f) / 2 + g * (g.saturating_sub(1)) / 2;
                    assert_eq!(l.vertices().len(), v, "e={e} f={f} g={g}");
                    assert_eq!(l.faces_of_dim(1).len(), edges, "e={e} f={f} g={g}");
                    assert_eq!(l.euler_characteristic(), 1);
                    assert!(l.is_intersection_closed());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn euler_relation_for_products(e in 1usize..4, f in 1usize..4, pyr in 0usize..3) {
            let mut l = FaceLattice::simplex_product(e, f);
            for _ in 0..pyr {
                l = l.pyramid();
            }
            prop_assert_eq!(l.euler_characteristic(), 1);
            prop_assert_eq!(l.facets().len(), e + f + 2 + pyr);
        }

        #[test]
        fn permutation_gives_isomorphic_lattice(seed in any::<u64>()) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let l = FaceLattice::simplex_product(1, 2).pyramid();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut perm: Vec<usize> = (0..l.facets().len()).collect();
            perm.shuffle(&mut rng);
            prop_assert!(l.permuted(&perm).is_isomorphic(&l));
        }
    }
}
