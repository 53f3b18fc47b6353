//! Orbit exploration: images of the polytope under short words of the group.

use std::collections::HashSet;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::{reflection_matrices, Realization};
use crate::bits;
use crate::error::{Error, Result};

/// Scale of the rounding key used to identify group elements.
const KEY_SCALE: f64 = 1e6;
/// Margin for the strict-interior test of sampled points.
const INTERIOR_TOL: f64 = 1e-9;

/// Group elements reached by words of bounded length, with their tiles.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitApproximation {
    /// Shortlex-minimal word of each element, as generator positions.
    pub words: Vec<Vec<usize>>,
    /// Matrix of each element.
    pub elements: Vec<DMatrix<f64>>,
    /// Images of the polytope vertices under each element.
    pub tiles: Vec<Vec<DVector<f64>>>,
    /// Number of sampled point pairs in the disjointness test.
    pub sampled_pairs: usize,
    /// Samples that landed in the interior of two different tiles.
    pub violations: usize,
    /// Unit-normalized vertex images, a sample of the union of tiles.
    pub hull_samples: Vec<DVector<f64>>,
    generators: Vec<String>,
}

impl OrbitApproximation {
    /// Number of distinct elements.
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Whether no element was found (never the case: the identity is always present).
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Word of element `i` as generator names.
    pub fn word_names(&self, i: usize) -> Vec<String> {
        self.words[i].iter().map(|&s| self.generators[s].clone()).collect()
    }

    /// JSON summary with the words and the disjointness counts.
    pub fn to_json(&self) -> serde_json::Value {
        let words: Vec<String> = (0..self.len()).map(|i| self.word_names(i).join(" ")).collect();
        json!({
            "elements": self.len(),
            "words": words,
            "sampled_pairs": self.sampled_pairs,
            "violations": self.violations,
            "hull_samples": self.hull_samples.len(),
        })
    }
}

fn key(m: &DMatrix<f64>) -> Vec<i64> {
    m.iter().map(|x| (x * KEY_SCALE).round() as i64).collect()
}

/// Explores the orbit of the polytope under words of length at most `max_len`
/// and samples `samples` point pairs for tile overlaps, using `seed` for the
/// sampler.
pub fn orbit_explore(r: &Realization, max_len: usize, samples: usize, seed: u64) -> OrbitApproximation {
    let gens = reflection_matrices(r.forms(), r.poles());
    let k = r.dim() + 1;
    let identity = DMatrix::identity(k, k);
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    seen.insert(key(&identity));
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut elements = vec![identity];
    let mut frontier = vec![0usize];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &i in &frontier {
            for (s, g) in gens.iter().enumerate() {
                if words[i].last() == Some(&s) {
                    continue;
                }
                let m = &elements[i] * g;
                if seen.insert(key(&m)) {
                    let mut w = words[i].clone();
                    w.push(s);
                    words.push(w);
                    elements.push(m);
                    next.push(elements.len() - 1);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    let verts: Vec<DVector<f64>> = r.vertices().iter().map(|v| v.point.clone()).collect();
    let tiles: Vec<Vec<DVector<f64>>> =
        elements.iter().map(|g| verts.iter().map(|v| g * v).collect()).collect();
    let hull_samples = tiles.iter().flatten().map(|p| p / p.norm()).collect();

    let mut violations = 0;
    let mut sampled_pairs = 0;
    if elements.len() > 1 {
        let inverses: Vec<DMatrix<f64>> = words
            .iter()
            .map(|w| w.iter().rev().fold(DMatrix::identity(k, k), |acc, &s| acc * &gens[s]))
            .collect();
        let norms: Vec<f64> = (0..r.forms().nrows()).map(|s| r.forms().row(s).norm()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let i = rng.gen_range(0..elements.len());
            let mut j = rng.gen_range(0..elements.len() - 1);
            if j >= i {
                j += 1;
            }
            let weights: Vec<f64> = (0..verts.len()).map(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln()).collect();
            let total: f64 = weights.iter().sum();
            let local = verts.iter().zip(&weights).fold(DVector::zeros(k), |acc, (v, w)| acc + v * (w / total));
            let x = &elements[i] * local;
            let y = &inverses[j] * x;
            let scale = y.norm();
            let values = r.forms() * &y;
            if values.iter().enumerate().all(|(s, &v)| v < -INTERIOR_TOL * norms[s] * scale) {
                violations += 1;
            }
            sampled_pairs += 1;
        }
    }
    OrbitApproximation {
        words,
        elements,
        tiles,
        sampled_pairs,
        violations,
        hull_samples,
        generators: r.system().generators().to_vec(),
    }
}

/// ASCII PLY triangle soup of the tiles of a 3-dimensional realization, in an
/// affine chart centred on the mean vertex direction.
pub fn to_ply(r: &Realization, orbit: &OrbitApproximation) -> Result<String> {
    if r.dim() != 3 {
        return Err(Error::Precondition("PLY export needs a 3-dimensional realization".into()));
    }
    let mean = orbit.hull_samples.iter().fold(DVector::zeros(4), |a, p| a + p);
    if mean.norm() < f64::EPSILON {
        return Err(Error::Numerical("the orbit has no affine chart".into()));
    }
    let centre = &mean / mean.norm();
    // Orthonormal basis of the complement of the chart direction.
    let mut basis: Vec<DVector<f64>> = Vec::new();
    for e in 0..4 {
        let mut v = DVector::zeros(4);
        v[e] = 1.0;
        v -= &centre * centre.dot(&v);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        if v.norm() > 1e-6 {
            basis.push(&v / v.norm());
        }
        if basis.len() == 3 {
            break;
        }
    }
    let chart = |p: &DVector<f64>| -> Result<[f64; 3]> {
        let h = centre.dot(p);
        if h <= 0.0 {
            return Err(Error::Numerical("a tile leaves the export chart".into()));
        }
        Ok([basis[0].dot(p) / h, basis[1].dot(p) / h, basis[2].dot(p) / h])
    };
    let facet_vertices: Vec<Vec<usize>> = (0..r.system().rank())
        .map(|s| {
            r.vertices().iter().enumerate().filter(|(_, v)| v.mask & bits::bit(s) != 0).map(|(i, _)| i).collect()
        })
        .collect();
    let mut points: Vec<[f64; 3]> = Vec::new();
    let mut faces: Vec<[usize; 3]> = Vec::new();
    for tile in &orbit.tiles {
        let offset = points.len();
        for p in tile {
            points.push(chart(p)?);
        }
        for fv in &facet_vertices {
            if fv.len() < 3 {
                continue;
            }
            for tri in fan(&points[offset..], fv) {
                faces.push([offset + tri[0], offset + tri[1], offset + tri[2]]);
            }
        }
    }
    let mut out = String::new();
    let _ = writeln!(out, "ply\nformat ascii 1.0");
    let _ = writeln!(out, "element vertex {}\nproperty float x\nproperty float y\nproperty float z", points.len());
    let _ = writeln!(out, "element face {}\nproperty list uchar int vertex_indices\nend_header", faces.len());
    for p in &points {
        let _ = writeln!(out, "{:.9} {:.9} {:.9}", p[0], p[1], p[2]);
    }
    for f in &faces {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    Ok(out)
}

/// Fan triangulation of a planar convex polygon given by unordered vertex indices.
fn fan(points: &[[f64; 3]], idx: &[usize]) -> Vec<[usize; 3]> {
    let n = idx.len() as f64;
    let c: [f64; 3] = std::array::from_fn(|k| idx.iter().map(|&i| points[i][k]).sum::<f64>() / n);
    let rel = |i: usize| -> [f64; 3] { std::array::from_fn(|k| points[i][k] - c[k]) };
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let u = rel(idx[0]);
    let un = dot(u, u).sqrt();
    let u = u.map(|x| x / un);
    // Second in-plane axis: the component of another vertex orthogonal to `u`.
    let mut v = [0.0; 3];
    for &i in &idx[1..] {
        let w = rel(i);
        let p = dot(w, u);
        let cand: [f64; 3] = std::array::from_fn(|k| w[k] - p * u[k]);
        if dot(cand, cand) > dot(v, v) {
            v = cand;
        }
    }
    let vn = dot(v, v).sqrt();
    let v = v.map(|x| x / vn);
    let mut order: Vec<(f64, usize)> = idx.iter().map(|&i| (dot(rel(i), v).atan2(dot(rel(i), u)), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0));
    (1..order.len() - 1).map(|k| [order[0].1, order[k].1, order[k + 1].1]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram_core::parse_diagram;
    use crate::realize::tits_simplex;

    #[test]
    fn dihedral_orders() {
        for k in 2..=8u32 {
            let w = parse_diagram(&format!("nodes 1..2; 1-2:{k}")).unwrap();
            let r = tits_simplex(&w).realization().unwrap();
            let o = orbit_explore(&r, 2 * k as usize, 2000, 0);
            assert_eq!(o.len(), 2 * k as usize, "k = {k}");
            assert_eq!(o.violations, 0);
        }
    }

    #[test]
    fn zero_length_is_identity() {
        let w = parse_diagram("nodes 1..2; 1-2:3").unwrap();
        let r = tits_simplex(&w).realization().unwrap();
        let o = orbit_explore(&r, 0, 100, 0);
        assert_eq!(o.len(), 1);
        assert_eq!(o.tiles.len(), 1);
        assert_eq!(o.sampled_pairs, 0);
    }

    #[test]
    fn words_are_shortlex() {
        let w = parse_diagram("nodes 1..2; 1-2:3").unwrap();
        let r = tits_simplex(&w).realization().unwrap();
        let o = orbit_explore(&r, 5, 0, 0);
        assert_eq!(o.words, vec![vec![], vec![0], vec![1], vec![0, 1], vec![1, 0], vec![0, 1, 0]]);
    }

    #[test]
    fn ply_for_tetrahedral_group() {
        let w = parse_diagram("nodes 1..4; 1-2; 2-3; 3-4").unwrap();
        let r = tits_simplex(&w).realization().unwrap();
        let o = orbit_explore(&r, 2, 0, 0);
        let ply = to_ply(&r, &o).unwrap();
        assert!(ply.starts_with("ply\n"));
        assert!(ply.contains(&format!("element vertex {}", 4 * o.len())));
        assert!(ply.contains(&format!("element face {}", 4 * o.len())));
    }
}
