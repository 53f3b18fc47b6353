//! Coxeter systems, their diagrams and their classification.
//!
//! A [`CoxeterSystem`] stores an ordered generator list and a symmetric order
//! matrix. Diagrams are read from a small text format (see [`parse`]) and
//! irreducible systems are matched against the spherical, affine and Lannér
//! catalogs (see [`catalog`]).

pub mod catalog;
pub mod iso;
pub mod parse;

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use catalog::{catalog_match, classify_irreducible, ClassificationLabel, Kind};
pub use parse::{parse_diagram, parse_template, DiagramTemplate, Label};

/// Order `m_st` of the product of two generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Order {
    /// A finite order; `1` only on the diagonal.
    Finite(u32),
    /// Infinite order.
    Infinite,
}

impl Order {
    /// `cos(π/m)`, with `cos(π/∞) = 1`.
    pub fn cos_pi_over(self) -> f64 {
        match self {
            Order::Finite(m) => (std::f64::consts::PI / m as f64).cos(),
            Order::Infinite => 1.0,
        }
    }

    /// Whether the pair is joined by an edge in the diagram (order other than 2).
    pub fn is_edge(self) -> bool {
        !matches!(self, Order::Finite(1) | Order::Finite(2))
    }

    /// Finite value, if any.
    pub fn finite(self) -> Option<u32> {
        match self {
            Order::Finite(m) => Some(m),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(m) => write!(f, "{m}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A Coxeter system `(S, M)`: ordered generators and a symmetric order matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxeterSystem {
    generators: Vec<String>,
    orders: Vec<Vec<Order>>,
}

impl CoxeterSystem {
    /// System with the given generators and edges; unlisted pairs get order 2.
    pub fn new<S: AsRef<str>>(generators: &[S], edges: &[(usize, usize, Order)]) -> Result<Self> {
        let generators: Vec<String> = generators.iter().map(|s| s.as_ref().to_string()).collect();
        let n = generators.len();
        for i in 0..n {
            for j in 0..i {
                if generators[i] == generators[j] {
                    return Err(Error::DuplicateNode(generators[i].clone()));
                }
            }
        }
        let mut orders = vec![vec![Order::Finite(2); n]; n];
        for (i, row) in orders.iter_mut().enumerate() {
            row[i] = Order::Finite(1);
        }
        let mut seen = vec![vec![false; n]; n];
        for &(s, t, m) in edges {
            if s >= n || t >= n {
                return Err(Error::UnknownGenerator(format!("index {}", s.max(t))));
            }
            if s == t {
                return Err(Error::SelfEdge(generators[s].clone()));
            }
            if seen[s][t] {
                return Err(Error::DuplicateEdge(generators[s].clone(), generators[t].clone()));
            }
            if let Order::Finite(k) = m {
                if k < 2 {
                    return Err(Error::InvalidInput(format!(
                        "edge {}-{} has order {k}; orders must be at least 2",
                        generators[s], generators[t]
                    )));
                }
            }
            seen[s][t] = true;
            seen[t][s] = true;
            orders[s][t] = m;
            orders[t][s] = m;
        }
        Ok(Self { generators, orders })
    }

    /// System built from a full order matrix; checks symmetry and the diagonal.
    pub fn from_orders<S: AsRef<str>>(generators: &[S], orders: Vec<Vec<Order>>) -> Result<Self> {
        let n = generators.len();
        if orders.len() != n || orders.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("order matrix has the wrong shape".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            if orders[i][i] != Order::Finite(1) {
                return Err(Error::InvalidInput("diagonal orders must be 1".into()));
            }
            for j in i + 1..n {
                if orders[i][j] != orders[j][i] {
                    return Err(Error::InvalidInput("order matrix is not symmetric".into()));
                }
                if orders[i][j] != Order::Finite(2) {
                    edges.push((i, j, orders[i][j]));
                }
            }
        }
        Self::new(generators, &edges)
    }

    /// The empty system.
    pub fn empty() -> Self {
        Self { generators: Vec::new(), orders: Vec::new() }
    }

    /// Number of generators.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Generator names in order.
    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// Order of the product of generators `i` and `j`.
    pub fn order(&self, i: usize, j: usize) -> Order {
        self.orders[i][j]
    }

    /// Full order matrix.
    pub fn orders(&self) -> &[Vec<Order>] {
        &self.orders
    }

    /// Position of a generator name.
    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.generators
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    /// Positions of several generator names.
    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    /// Order between two named generators.
    pub fn order_by_name(&self, s: &str, t: &str) -> Result<Order> {
        Ok(self.orders[self.index_of(s)?][self.index_of(t)?])
    }

    /// Diagram edges `(i, j, m)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize, Order)> {
        let n = self.rank();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.orders[i][j].is_edge() {
                    out.push((i, j, self.orders[i][j]));
                }
            }
        }
        out
    }

    /// Diagram neighbours of generator `i`, in increasing order.
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&j| j != i && self.orders[i][j].is_edge()).collect()
    }

    /// Connected components of the diagram as index lists, each sorted, ordered
    /// by their smallest element.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut k = 0;
            while k < comp.len() {
                let v = comp[k];
                for w in self.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
                k += 1;
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Whether the diagram is connected (the empty system counts as irreducible).
    pub fn is_irreducible(&self) -> bool {
        self.components().len() <= 1
    }

    /// Restriction to the given generator positions, preserving their order.
    pub fn subsystem_indices(&self, idx: &[usize]) -> CoxeterSystem {
        let generators = idx.iter().map(|&i| self.generators[i].clone()).collect();
        let orders = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.orders[i][j]).collect())
            .collect();
        CoxeterSystem { generators, orders }
    }

    /// Restriction `W_T` to the named generators (kept in system order).
    pub fn subsystem<S: AsRef<str>>(&self, names: &[S]) -> Result<CoxeterSystem> {
        let mut idx = self.indices_of(names)?;
        idx.sort_unstable();
        idx.dedup();
        Ok(self.subsystem_indices(&idx))
    }

    /// Connected components as subsystems.
    pub fn split_components(&self) -> Vec<CoxeterSystem> {
        self.components().iter().map(|c| self.subsystem_indices(c)).collect()
    }

    /// Gram matrix `Cos(W)` with entries `-2 cos(π/m_st)` and diagonal 2.
    pub fn gram_matrix(&self) -> DMatrix<f64> {
        let n = self.rank();
        DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                2.0
            } else {
                match self.orders[i][j] {
                    Order::Finite(2) => 0.0,
                    m => -2.0 * m.cos_pi_over(),
                }
            }
        })
    }

    /// System with generators renamed.
    pub fn renamed<S: AsRef<str>>(&self, names: &[S]) -> Result<CoxeterSystem> {
        if names.len() != self.rank() {
            return Err(Error::InvalidInput("rename list has the wrong length".into()));
        }
        CoxeterSystem::from_orders(names, self.orders.clone())
    }

    /// System with generators reordered: position `k` of the result is the
    /// generator `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> CoxeterSystem {
        self.subsystem_indices(perm)
    }

    /// Canonical text form accepted by [`parse_diagram`].
    pub fn to_dsl(&self) -> String {
        parse::serialize(self)
    }

    /// Classification of every connected component.
    pub fn classify_components(&self) -> Vec<(Vec<String>, ClassificationLabel)> {
        self.split_components()
            .into_iter()
            .map(|c| {
                let label = classify_irreducible(&c).expect("components are irreducible");
                (c.generators().to_vec(), label)
            })
            .collect()
    }

    /// Whether every component is spherical (the empty system is spherical).
    pub fn is_spherical(&self) -> bool {
        self.classify_components().iter().all(|(_, l)| l.kind == Kind::Spherical)
    }

    /// Whether the system is nonempty and every component is irreducible affine.
    pub fn is_affine(&self) -> bool {
        self.rank() > 0 && self.classify_components().iter().all(|(_, l)| l.kind == Kind::Affine)
    }
}

impl fmt::Display for CoxeterSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsl())
    }
}
