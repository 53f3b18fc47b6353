//! Families of `d`-polytopes with `d + 2` facets built from two diagram blocks.
//!
//! The Coxeter diagram must split along a single bridge edge `p — q` into two
//! blocks, each a tree or containing exactly one cycle through the bridge end.
//! Blocks of size at least 3 with finite labels are simplex factors; a block
//! of size 2 joined by `∞` is a segment factor; a block of size 3 containing
//! one `∞` pair turns the polytope into a pyramid over `Δ₁ × Δ_f` whose base is
//! the third node of that block.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bits;
use crate::diagram_core::{CoxeterSystem, Order};
use crate::error::{Error, Result};
use crate::polytope::{FaceLattice, LabeledPolytope};

/// Underlying polytope of a family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    /// `Δ_e × Δ_f` with the blocks as the two simplex factors.
    Product,
    /// `Pyr(Δ₁ × Δ_f)`: `base` is the base facet and `ends` the `∞` pair.
    Pyramid {
        /// Base facet position.
        base: usize,
        /// The two facets meeting only at the apex.
        ends: (usize, usize),
    },
}

/// A two-block family member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    system: CoxeterSystem,
    blocks: [Vec<usize>; 2],
    bridge: (usize, usize),
    shape: Shape,
}

/// Number of independent cycles of the diagram restricted to `idx`.
fn cycle_rank(w: &CoxeterSystem, idx: &[usize]) -> usize {
    let sub = w.subsystem_indices(idx);
    sub.edges().len() + sub.components().len() - sub.rank()
}

/// Nodes of `idx` lying on a cycle of the restricted diagram.
fn cycle_nodes(w: &CoxeterSystem, idx: &[usize]) -> Vec<usize> {
    let sub = w.subsystem_indices(idx);
    let base = cycle_rank(w, idx);
    (0..idx.len())
        .filter(|&k| {
            let rest: Vec<usize> = (0..idx.len()).filter(|&j| j != k).collect();
            let without = sub.subsystem_indices(&rest);
            let r = without.edges().len() + without.components().len() - without.rank();
            r < base
        })
        .map(|k| idx[k])
        .collect()
}

impl Family {
    /// Finds the unique admissible bridge split of `w`.
    pub fn infer(w: &CoxeterSystem) -> Result<Family> {
        if !w.is_irreducible() {
            return Err(Error::UnsupportedFamily("the diagram is not connected".into()));
        }
        let mut found = Vec::new();
        for (p, q, _) in w.edges() {
            if let Some(split) = Self::split_at(w, p, q) {
                if let Ok(f) = Self::from_split(w, split.0, split.1, (p, q)) {
                    found.push(f);
                }
            }
        }
        match found.len() {
            1 => Ok(found.pop().unwrap()),
            0 => Err(Error::UnsupportedFamily(
                "no bridge splits the diagram into two admissible blocks".into(),
            )),
            k => Err(Error::UnsupportedFamily(format!("{k} admissible bridge splits; specify the blocks"))),
        }
    }

    /// Family with explicitly named blocks.
    pub fn with_blocks<S: AsRef<str>>(w: &CoxeterSystem, first: &[S], second: &[S]) -> Result<Family> {
        let mut b1 = w.indices_of(first)?;
        let mut b2 = w.indices_of(second)?;
        b1.sort_unstable();
        b2.sort_unstable();
        let mut union: Vec<usize> = b1.iter().chain(&b2).copied().collect();
        union.sort_unstable();
        union.dedup();
        if union.len() != w.rank() || b1.len() + b2.len() != w.rank() {
            return Err(Error::UnsupportedFamily("blocks must partition the generators".into()));
        }
        let cross: Vec<(usize, usize)> = b1
            .iter()
            .flat_map(|&s| b2.iter().map(move |&t| (s, t)))
            .filter(|&(s, t)| w.order(s, t).is_edge())
            .collect();
        if cross.len() != 1 {
            return Err(Error::UnsupportedFamily("blocks must be joined by exactly one edge".into()));
        }
        Self::from_split(w, b1, b2, cross[0])
    }

    fn split_at(w: &CoxeterSystem, p: usize, q: usize) -> Option<(Vec<usize>, Vec<usize>)> {
        let n = w.rank();
        let mut side = vec![false; n];
        side[p] = true;
        let mut stack = vec![p];
        while let Some(v) = stack.pop() {
            for u in w.neighbors(v) {
                if (v, u) == (p, q) || (v, u) == (q, p) || side[u] {
                    continue;
                }
                side[u] = true;
                stack.push(u);
            }
        }
        if side[q] {
            return None;
        }
        let b1: Vec<usize> = (0..n).filter(|&i| side[i]).collect();
        let b2: Vec<usize> = (0..n).filter(|&i| !side[i]).collect();
        Some((b1, b2))
    }

    fn from_split(w: &CoxeterSystem, b1: Vec<usize>, b2: Vec<usize>, bridge: (usize, usize)) -> Result<Family> {
        let (p, q) = if b1.contains(&bridge.0) { bridge } else { (bridge.1, bridge.0) };
        if w.order(p, q) == Order::Infinite {
            return Err(Error::UnsupportedFamily("the bridge edge has order ∞".into()));
        }
        let mut shape = Shape::Product;
        for (block, end) in [(&b1, p), (&b2, q)] {
            let infinite: Vec<(usize, usize)> = block
                .iter()
                .flat_map(|&s| block.iter().map(move |&t| (s, t)))
                .filter(|&(s, t)| s < t && w.order(s, t) == Order::Infinite)
                .collect();
            match (block.len(), infinite.len()) {
                (0 | 1, _) => return Err(Error::UnsupportedFamily("a block has fewer than two nodes".into())),
                (2, 1) => {}
                (2, _) => return Err(Error::UnsupportedFamily("a two-node block needs an ∞ edge".into())),
                (_, 0) => {}
                (3, 1) => {
                    if shape != Shape::Product {
                        return Err(Error::UnsupportedFamily("both blocks contain ∞ pairs".into()));
                    }
                    let (s, t) = infinite[0];
                    let base = *block.iter().find(|&&x| x != s && x != t).unwrap();
                    shape = Shape::Pyramid { base, ends: (s, t) };
                }
                _ => return Err(Error::UnsupportedFamily("unsupported ∞ pattern inside a block".into())),
            }
            match cycle_rank(w, block) {
                0 => {}
                1 => {
                    if !cycle_nodes(w, block).contains(&end) {
                        return Err(Error::UnsupportedFamily("the bridge end is not on its block's cycle".into()));
                    }
                }
                _ => return Err(Error::UnsupportedFamily("a block has more than one cycle".into())),
            }
        }
        if let Shape::Pyramid { .. } = shape {
            let other_has_inf = [&b1, &b2].iter().any(|b| b.len() == 2);
            if other_has_inf {
                return Err(Error::UnsupportedFamily("pyramid over a product with a segment factor".into()));
            }
        }
        Ok(Family { system: w.clone(), blocks: [b1, b2], bridge: (p, q), shape })
    }

    /// Coxeter system.
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    /// The two blocks as position lists; the bridge joins `bridge().0 ∈ blocks()[0]`
    /// to `bridge().1 ∈ blocks()[1]`.
    pub fn blocks(&self) -> &[Vec<usize>; 2] {
        &self.blocks
    }

    /// Bridge edge.
    pub fn bridge(&self) -> (usize, usize) {
        self.bridge
    }

    /// Underlying polytope type.
    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    /// Dimension `d = |S| − 2`.
    pub fn dim(&self) -> usize {
        self.system.rank() - 2
    }

    /// Cycle rank of each block.
    pub fn block_cycle_ranks(&self) -> [usize; 2] {
        [cycle_rank(&self.system, &self.blocks[0]), cycle_rank(&self.system, &self.blocks[1])]
    }

    /// The labeled polytope of the family.
    pub fn labeled_polytope(&self) -> Result<LabeledPolytope> {
        let g = self.system.generators();
        let mut assignment = BTreeMap::new();
        let lattice = match &self.shape {
            Shape::Product => {
                let [b1, b2] = &self.blocks;
                for (k, &i) in b1.iter().enumerate() {
                    assignment.insert(format!("a{}", k + 1), g[i].clone());
                }
                for (k, &i) in b2.iter().enumerate() {
                    assignment.insert(format!("b{}", k + 1), g[i].clone());
                }
                FaceLattice::simplex_product(b1.len() - 1, b2.len() - 1)
            }
            Shape::Pyramid { base, ends } => {
                let other = if self.blocks[0].contains(base) { &self.blocks[1] } else { &self.blocks[0] };
                assignment.insert("a1".into(), g[ends.0].clone());
                assignment.insert("a2".into(), g[ends.1].clone());
                for (k, &i) in other.iter().enumerate() {
                    assignment.insert(format!("b{}", k + 1), g[i].clone());
                }
                assignment.insert("c1".into(), g[*base].clone());
                FaceLattice::simplex_product(1, other.len() - 1).pyramid()
            }
        };
        LabeledPolytope::label(&lattice, &self.system, &assignment)
    }

    /// Apex facet set of a pyramid family.
    pub fn apex(&self) -> Option<u64> {
        match self.shape {
            Shape::Pyramid { base, .. } => Some(bits::full(self.system.rank()) & !bits::bit(base)),
            Shape::Product => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram_core::parse_diagram;

    #[test]
    fn infers_blocks_of_w1() {
        let w = parse_diagram("nodes 1..6; 1-2; 2-3; 1-3; 3-4; 4-5; 5-6:7").unwrap();
        let f = Family::infer(&w).unwrap();
        assert_eq!(f.blocks(), &[vec![0, 1, 2], vec![3, 4, 5]]);
        assert_eq!(f.bridge(), (2, 3));
        assert_eq!(f.shape(), &Shape::Product);
        let g = f.labeled_polytope().unwrap();
        assert_eq!(g.lattice().vertices().len(), 9);
    }

    #[test]
    fn infers_pyramid_for_infinite_label() {
        let w = parse_diagram("nodes 1..6; 1-2; 2-3; 1-3; 3-4; 4-5; 5-6:inf").unwrap();
        let f = Family::infer(&w).unwrap();
        assert_eq!(f.shape(), &Shape::Pyramid { base: 3, ends: (4, 5) });
        let g = f.labeled_polytope().unwrap();
        assert_eq!(g.lattice().vertices().len(), 7);
        assert!(g.lattice().is_face(f.apex().unwrap()));
    }

    #[test]
    fn rejects_unsupported_diagrams() {
        let w = parse_diagram("nodes 1..5; 1-2; 2-3; 3-4; 4-5; 5-1").unwrap();
        assert!(matches!(Family::infer(&w), Err(Error::UnsupportedFamily(_))));
        let w = parse_diagram("nodes 1..4; 1-2; 2-3; 3-4").unwrap();
        assert!(matches!(Family::infer(&w), Err(Error::UnsupportedFamily(_))));
    }

    #[test]
    fn explicit_blocks() {
        let w = parse_diagram("nodes 1..6; 1-2:4; 2-3; 1-3; 3-4:5; 4-5; 5-6:4; 4-6").unwrap();
        let f = Family::with_blocks(&w, &["1", "2", "3"], &["4", "5", "6"]).unwrap();
        assert_eq!(f, Family::infer(&w).unwrap());
        assert!(Family::with_blocks(&w, &["1", "2"], &["3", "4", "5", "6"]).is_err());
    }
}
