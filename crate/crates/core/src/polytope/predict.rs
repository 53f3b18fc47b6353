//! Faces forced by a Cartan matrix, and prismatic facet sets.

use serde::{Deserialize, Serialize};

use super::FaceLattice;
use crate::bits;
use crate::cartan::{CartanMatrix, ComponentType};
use crate::diagram_core::Kind;
use crate::error::{Error, Result};

/// Which criterion produced a predicted face.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FaceReason {
    /// `W_T` spherical: a face of dimension `d − |T|`.
    Spherical,
    /// `A_T` of zero type and `Z(T)` without zero-type part.
    ZeroType,
    /// `A_T` of zero type with `W_T` virtually `Z^{d−1}`: a vertex.
    Cusp,
    /// `T⁰ ∪ T⁻` is already a face.
    Closure,
}

/// A facet set that must be a face of every polytope realizing the matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictedFace {
    /// Facet positions.
    pub mask: u64,
    /// Dimension when the criterion determines it.
    pub dim: Option<usize>,
    /// Justification.
    pub reason: FaceReason,
}

/// Applies the four face criteria to every proper subset of generators.
///
/// Requires an irreducible matrix of negative type and rank `d + 1`.
pub fn faces_from_cartan(a: &CartanMatrix, d: usize) -> Result<Vec<PredictedFace>> {
    let n = a.size();
    if n > 20 {
        return Err(Error::InvalidInput("too many generators for subset enumeration".into()));
    }
    if !a.system().is_irreducible() {
        return Err(Error::Precondition("the Cartan matrix is reducible".into()));
    }
    if !a.type_decompose().all(ComponentType::Negative) {
        return Err(Error::Precondition("the Cartan matrix is not of negative type".into()));
    }
    if a.rank() != d + 1 {
        return Err(Error::Precondition(format!("rank {} differs from d + 1 = {}", a.rank(), d + 1)));
    }
    let w = a.system();
    let all = bits::full(n);
    let mut kind_of = std::collections::HashMap::new();
    let mut out: Vec<PredictedFace> = Vec::new();
    let mut predicted = std::collections::HashSet::new();
    for t in 1..all {
        let idx = bits::indices(t);
        let sub = w.subsystem_indices(&idx);
        if sub.is_spherical() {
            out.push(PredictedFace { mask: t, dim: Some(d - idx.len()), reason: FaceReason::Spherical });
            predicted.insert(t);
            continue;
        }
        let td = a.restrict(&idx).type_decompose();
        kind_of.insert(t, td.clone());
        if !td.all(ComponentType::Zero) {
            continue;
        }
        let comps = sub.classify_components();
        let free_rank: usize = comps
            .iter()
            .map(|(g, l)| if l.kind == Kind::Affine { g.len() - 1 } else { 0 })
            .sum();
        let all_affine = comps.iter().all(|(_, l)| l.kind == Kind::Affine);
        if all_affine && free_rank + 1 == d {
            out.push(PredictedFace { mask: t, dim: Some(0), reason: FaceReason::Cusp });
            predicted.insert(t);
            continue;
        }
        let z: Vec<usize> = (0..n)
            .filter(|&s| t & bits::bit(s) == 0 && idx.iter().all(|&u| a.entries()[(s, u)].abs() <= crate::TOL))
            .collect();
        let z_has_zero = !z.is_empty()
            && a.restrict(&z).type_decompose().components.iter().any(|c| c.kind == ComponentType::Zero);
        if !z_has_zero {
            out.push(PredictedFace { mask: t, dim: None, reason: FaceReason::ZeroType });
            predicted.insert(t);
        }
    }
    // Closure: T is a face when its non-positive part is.
    loop {
        let mut added = false;
        for t in 1..all {
            if predicted.contains(&t) {
                continue;
            }
            let td = match kind_of.get(&t) {
                Some(td) => td,
                None => continue,
            };
            let idx = bits::indices(t);
            let core: u64 = td
                .components
                .iter()
                .filter(|c| c.kind != ComponentType::Positive)
                .flat_map(|c| c.indices.iter().map(|&k| bits::bit(idx[k])))
                .fold(0, |m, b| m | b);
            if core != t && (core == 0 || predicted.contains(&core)) {
                out.push(PredictedFace { mask: t, dim: None, reason: FaceReason::Closure });
                predicted.insert(t);
                added = true;
            }
        }
        if !added {
            break;
        }
    }
    out.sort_by_key(|f| f.mask);
    Ok(out)
}

/// Whether the facets in `set` have empty common intersection while every
/// subset missing one facet meets in a face of the expected dimension.
pub fn is_prismatic(lattice: &FaceLattice, set: u64) -> bool {
    let k = bits::count(set);
    if k < 2 || lattice.closure(set).is_some() {
        return false;
    }
    bits::indices(set).into_iter().all(|i| {
        let rest = set & !bits::bit(i);
        lattice.face_dim(rest).is_some_and(|dim| dim + k - 1 == lattice.dim())
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prismatic_sets_of_products() {
        let l = FaceLattice::simplex_product(2, 3);
        let b = l.mask_of(&["b1", "b2", "b3", "b4"]).unwrap();
        assert!(is_prismatic(&l, b));
        let a = l.mask_of(&["a1", "a2", "a3"]).unwrap();
        assert!(is_prismatic(&l, a));
        assert!(!is_prismatic(&l, l.mask_of(&["a1", "b1"]).unwrap()));
        // No prismatic subset with f + 2 = 5 facets.
        for sub in bits::k_subsets(7, 5) {
            assert!(!is_prismatic(&l, bits::from_indices(sub)));
        }
    }
}
