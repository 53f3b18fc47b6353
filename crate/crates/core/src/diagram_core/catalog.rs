//! Irreducible spherical, affine and Lannér diagrams and the classifier.
//!
//! Ranks 1 to 3 are decided exactly from the edge labels. From rank 4 on, the
//! system is matched by labeled-graph isomorphism against the finite lists of
//! each rank; unmatched systems fall back to the Gram-matrix eigenvalue test.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::iso::are_isomorphic;
use super::{CoxeterSystem, Order};
use crate::error::{Error, Result};
use crate::linalg;

/// Class of an irreducible Coxeter system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    /// Finite group; positive definite Gram matrix.
    Spherical,
    /// Irreducible affine group.
    Affine,
    /// Group of a compact hyperbolic simplex.
    Lanner,
    /// Neither spherical nor affine.
    Large,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Spherical => "Spherical",
            Kind::Affine => "Affine",
            Kind::Lanner => "Lanner",
            Kind::Large => "Large",
        })
    }
}

/// Classification of an irreducible system with its catalog name, if any.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassificationLabel {
    /// Class.
    pub kind: Kind,
    /// Catalog name such as `"H_3"`, `"tilde_A_2"` or `"Lanner-4-5335"`.
    pub catalog_name: Option<String>,
}

impl ClassificationLabel {
    fn named(kind: Kind, name: impl Into<String>) -> Self {
        Self { kind, catalog_name: Some(name.into()) }
    }

    fn unnamed(kind: Kind) -> Self {
        Self { kind, catalog_name: None }
    }
}

impl fmt::Display for ClassificationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.catalog_name {
            Some(name) => write!(f, "{} {}", self.kind, name),
            None => write!(f, "{}", self.kind),
        }
    }
}

/// A named catalog diagram.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    /// Catalog name.
    pub name: String,
    /// Class of the diagram.
    pub kind: Kind,
    /// The diagram itself, on generators `"1".."n"`.
    pub system: CoxeterSystem,
}

fn f(m: u32) -> Order {
    Order::Finite(m)
}

fn build(n: usize, edges: &[(usize, usize, u32)]) -> CoxeterSystem {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let edges: Vec<(usize, usize, Order)> = edges.iter().map(|&(i, j, m)| (i, j, f(m))).collect();
    CoxeterSystem::new(&names, &edges).expect("catalog diagrams are well formed")
}

/// Path on `labels.len() + 1` nodes with the given edge labels.
pub fn chain(labels: &[u32]) -> CoxeterSystem {
    let edges: Vec<_> = labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
    build(labels.len() + 1, &edges)
}

/// Cycle on `labels.len()` nodes with the given edge labels.
pub fn cycle(labels: &[u32]) -> CoxeterSystem {
    let n = labels.len();
    let edges: Vec<_> = labels.iter().enumerate().map(|(i, &m)| (i, (i + 1) % n, m)).collect();
    build(n, &edges)
}

/// Path with labels `labels` plus one extra node joined (label 3) to the
/// path node at position `at`.
fn chain_with_branch(labels: &[u32], at: usize) -> CoxeterSystem {
    let n = labels.len() + 1;
    let mut edges: Vec<_> = labels.iter().enumerate().map(|(i, &m)| (i, i + 1, m)).collect();
    edges.push((at, n, 3));
    build(n + 1, &edges)
}

/// Catalog entries of a given rank (rank at least 4; lower ranks are decided
/// from labels directly, see [`classify_irreducible`]).
pub fn entries_of_rank(n: usize) -> Vec<CatalogEntry> {
    let mut out = Vec::new();
    let mut push = |name: String, kind: Kind, system: CoxeterSystem| out.push(CatalogEntry { name, kind, system });
    if n < 4 {
        return Vec::new();
    }
    let threes = |k: usize| vec![3u32; k];

    // Spherical.
    push(format!("A_{n}"), Kind::Spherical, chain(&threes(n - 1)));
    let mut b = vec![4];
    b.extend(threes(n - 2));
    push(format!("B_{n}"), Kind::Spherical, chain(&b));
    push(format!("D_{n}"), Kind::Spherical, chain_with_branch(&threes(n - 2), n - 3));
    match n {
        4 => {
            push("H_4".into(), Kind::Spherical, chain(&[5, 3, 3]));
            push("F_4".into(), Kind::Spherical, chain(&[3, 4, 3]));
        }
        6..=8 => push(format!("E_{n}"), Kind::Spherical, chain_with_branch(&threes(n - 2), 2)),
        _ => {}
    }

    // Affine, of rank n = k + 1.
    let k = n - 1;
    push(format!("tilde_A_{k}"), Kind::Affine, cycle(&threes(n)));
    {
        // v1 -4- v2 - ... - v_{k-1}, which forks to v_k and v_{k+1}.
        let mut labels = vec![4];
        labels.extend(threes(k - 2));
        push(format!("tilde_B_{k}"), Kind::Affine, chain_with_branch(&labels, k - 2));
    }
    {
        let mut labels = vec![4];
        labels.extend(threes(k - 2));
        labels.push(4);
        push(format!("tilde_C_{k}"), Kind::Affine, chain(&labels));
    }
    if k >= 4 {
        // Forks at both ends: chain v1..v_{k-1} with extra nodes at v2 and v_{k-2}.
        let mut edges: Vec<(usize, usize, u32)> = (0..k - 2).map(|i| (i, i + 1, 3)).collect();
        edges.push((1, k - 1, 3));
        edges.push((k - 3, k, 3));
        push(format!("tilde_D_{k}"), Kind::Affine, build(n, &edges));
    }
    match n {
        5 => push("tilde_F_4".into(), Kind::Affine, chain(&[3, 4, 3, 3])),
        7 => {
            // 1-2-3-4-5 with 3-6-7.
            let edges = [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3), (5, 6, 3)];
            push("tilde_E_6".into(), Kind::Affine, build(7, &edges));
        }
        8 => push("tilde_E_7".into(), Kind::Affine, chain_with_branch(&threes(6), 3)),
        9 => push("tilde_E_8".into(), Kind::Affine, chain_with_branch(&threes(7), 2)),
        _ => {}
    }

    // Lannér simplices.
    match n {
        4 => {
            push("Lanner-3-353".into(), Kind::Lanner, chain(&[3, 5, 3]));
            push("Lanner-3-534".into(), Kind::Lanner, chain(&[5, 3, 4]));
            push("Lanner-3-535".into(), Kind::Lanner, chain(&[5, 3, 5]));
            push("Lanner-3-Y533".into(), Kind::Lanner, build(4, &[(0, 1, 5), (0, 2, 3), (0, 3, 3)]));
            push("Lanner-3-C4333".into(), Kind::Lanner, cycle(&[4, 3, 3, 3]));
            push("Lanner-3-C5333".into(), Kind::Lanner, cycle(&[5, 3, 3, 3]));
            push("Lanner-3-C4343".into(), Kind::Lanner, cycle(&[4, 3, 4, 3]));
            push("Lanner-3-C5343".into(), Kind::Lanner, cycle(&[5, 3, 4, 3]));
            push("Lanner-3-C5353".into(), Kind::Lanner, cycle(&[5, 3, 5, 3]));
        }
        5 => {
            push("Lanner-4-5333".into(), Kind::Lanner, chain(&[5, 3, 3, 3]));
            push("Lanner-4-5335".into(), Kind::Lanner, chain(&[5, 3, 3, 5]));
            push("Lanner-4-5334".into(), Kind::Lanner, chain(&[5, 3, 3, 4]));
            push("Lanner-4-C43333".into(), Kind::Lanner, cycle(&[4, 3, 3, 3, 3]));
            push(
                "Lanner-4-Y533".into(),
                Kind::Lanner,
                build(5, &[(0, 1, 5), (1, 2, 3), (2, 3, 3), (2, 4, 3)]),
            );
        }
        _ => {}
    }
    out
}

/// Exact classification of ranks 1 to 3 from the labels.
fn classify_small(w: &CoxeterSystem) -> Option<ClassificationLabel> {
    use ClassificationLabel as L;
    match w.rank() {
        1 => Some(L::named(Kind::Spherical, "A_1")),
        2 => Some(match w.order(0, 1) {
            Order::Infinite => L::named(Kind::Affine, "tilde_A_1"),
            Order::Finite(3) => L::named(Kind::Spherical, "A_2"),
            Order::Finite(4) => L::named(Kind::Spherical, "B_2"),
            Order::Finite(p) => L::named(Kind::Spherical, format!("I_2({p})")),
        }),
        3 => {
            let pairs = [w.order(0, 1), w.order(1, 2), w.order(0, 2)];
            if pairs.contains(&Order::Infinite) {
                return Some(L::unnamed(Kind::Large));
            }
            let mut ms: Vec<u64> = pairs.iter().map(|m| m.finite().unwrap() as u64).collect();
            ms.sort_unstable();
            if ms[0] == 2 {
                // A path with labels p ≤ q; compare 1/p + 1/q with 1/2.
                let (p, q) = (ms[1], ms[2]);
                let lhs = 2 * (p + q);
                let rhs = p * q;
                Some(if lhs > rhs {
                    match (p, q) {
                        (3, 3) => L::named(Kind::Spherical, "A_3"),
                        (3, 4) => L::named(Kind::Spherical, "B_3"),
                        _ => L::named(Kind::Spherical, "H_3"),
                    }
                } else if lhs == rhs {
                    match (p, q) {
                        (4, 4) => L::named(Kind::Affine, "tilde_C_2"),
                        _ => L::named(Kind::Affine, "tilde_G_2"),
                    }
                } else {
                    L::named(Kind::Lanner, format!("Lanner-2-({p},{q})"))
                })
            } else {
                let (p, q, r) = (ms[0], ms[1], ms[2]);
                let lhs = q * r + p * r + p * q;
                let rhs = p * q * r;
                Some(if lhs == rhs {
                    L::named(Kind::Affine, "tilde_A_2")
                } else {
                    L::named(Kind::Lanner, format!("Lanner-2-({p},{q},{r})"))
                })
            }
        }
        _ => None,
    }
}

fn require_irreducible(w: &CoxeterSystem) -> Result<()> {
    if w.rank() == 0 {
        return Err(Error::InvalidInput("the empty system has no classification".into()));
    }
    if !w.is_irreducible() {
        return Err(Error::Reducible);
    }
    Ok(())
}

/// Catalog name of an irreducible system, if it appears in the tables.
pub fn catalog_match(w: &CoxeterSystem) -> Result<Option<String>> {
    require_irreducible(w)?;
    if let Some(label) = classify_small(w) {
        return Ok(label.catalog_name);
    }
    Ok(entries_of_rank(w.rank())
        .into_iter()
        .find(|e| are_isomorphic(&e.system, w))
        .map(|e| e.name))
}

/// Classification by the Gram matrix spectrum alone.
pub fn classify_numeric(w: &CoxeterSystem) -> Kind {
    let g = w.gram_matrix();
    let n = w.rank();
    if linalg::is_positive_definite(&g, crate::TOL) {
        return Kind::Spherical;
    }
    let minors_pd = (0..n).all(|s| {
        let keep: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        linalg::is_positive_definite(&linalg::principal(&g, &keep), crate::TOL)
    });
    if !minors_pd {
        return Kind::Large;
    }
    let det = linalg::det(&g);
    if det.abs() < crate::TOL {
        Kind::Affine
    } else if det < 0.0 {
        Kind::Lanner
    } else {
        Kind::Spherical
    }
}

/// Classifies an irreducible system: catalog first, eigenvalue test otherwise.
pub fn classify_irreducible(w: &CoxeterSystem) -> Result<ClassificationLabel> {
    require_irreducible(w)?;
    if let Some(label) = classify_small(w) {
        return Ok(label);
    }
    if let Some(e) = entries_of_rank(w.rank()).into_iter().find(|e| are_isomorphic(&e.system, w)) {
        return Ok(ClassificationLabel::named(e.kind, e.name));
    }
    Ok(ClassificationLabel::unnamed(classify_numeric(w)))
}
