//! Cartan matrices realizing Coxeter systems.
//!
//! A [`CartanMatrix`] pairs a real matrix with the Coxeter system it realizes.
//! Equivalence under conjugation by positive diagonal matrices is detected by
//! cyclic products over a fundamental cycle basis; [`SpecialForm`] picks the
//! representative that is symmetric on a spanning tree and carries one
//! parameter per independent cycle.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::diagram_core::{classify_irreducible, parse_diagram, CoxeterSystem, Kind, Order};
use crate::error::{Error, Result};
use crate::linalg;
use crate::TOL;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}

/// A square matrix with diagonal 2 realizing a Coxeter system.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanMatrix {
    system: CoxeterSystem,
    entries: DMatrix<f64>,
    params: BTreeMap<String, f64>,
}

impl CartanMatrix {
    /// Validates `entries` against `system`.
    pub fn new(system: CoxeterSystem, entries: DMatrix<f64>) -> Result<Self> {
        let n = system.rank();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::InvalidCartan(format!(
                "expected a {n}x{n} matrix, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let g = system.generators();
        for i in 0..n {
            if (entries[(i, i)] - 2.0).abs() > TOL {
                return Err(Error::InvalidCartan(format!("diagonal entry of {} is not 2", g[i])));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                let (a, b) = (entries[(i, j)], entries[(j, i)]);
                if a > TOL {
                    return Err(Error::InvalidCartan(format!("entry ({}, {}) is positive", g[i], g[j])));
                }
                if (a.abs() <= TOL) != (b.abs() <= TOL) {
                    return Err(Error::InvalidCartan(format!("zero pattern of ({}, {}) is not symmetric", g[i], g[j])));
                }
                let p = a * b;
                let ok = match system.order(i, j) {
                    Order::Infinite => p >= 4.0 - TOL,
                    m => (p - 4.0 * m.cos_pi_over().powi(2)).abs() <= TOL * 1f64.max(p.abs()),
                };
                if !ok {
                    return Err(Error::InvalidCartan(format!(
                        "product a_st a_ts = {p} does not realize m = {} for ({}, {})",
                        system.order(i, j),
                        g[i],
                        g[j]
                    )));
                }
            }
        }
        Ok(Self { system, entries, params: BTreeMap::new() })
    }

    /// Reads the Coxeter system off the products `a_st a_ts`.
    pub fn infer<S: AsRef<str>>(generators: &[S], entries: DMatrix<f64>) -> Result<Self> {
        let n = generators.len();
        if entries.nrows() != n || entries.ncols() != n {
            return Err(Error::InvalidCartan("matrix size does not match the generator list".into()));
        }
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let p = entries[(i, j)] * entries[(j, i)];
                let m = infer_order(p).ok_or_else(|| {
                    Error::InvalidCartan(format!(
                        "product {p} of ({}, {}) is not 4cos²(π/m)",
                        generators[i].as_ref(),
                        generators[j].as_ref()
                    ))
                })?;
                if m != Order::Finite(2) {
                    edges.push((i, j, m));
                }
            }
        }
        Self::new(CoxeterSystem::new(generators, &edges)?, entries)
    }

    /// The Gram matrix of `w`, a symmetric Cartan matrix.
    pub fn from_gram(w: &CoxeterSystem) -> Self {
        Self { system: w.clone(), entries: w.gram_matrix(), params: BTreeMap::new() }
    }

    /// Attaches the parameter values used to build this matrix.
    pub fn with_params(mut self, params: BTreeMap<String, f64>) -> Self {
        self.params = params;
        self
    }

    /// Realized Coxeter system.
    pub fn system(&self) -> &CoxeterSystem {
        &self.system
    }

    /// Matrix entries.
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// Parameters recorded at construction.
    pub fn params(&self) -> &BTreeMap<String, f64> {
        &self.params
    }

    /// Number of generators.
    pub fn size(&self) -> usize {
        self.system.rank()
    }

    /// Principal submatrix on the given positions.
    pub fn restrict(&self, idx: &[usize]) -> CartanMatrix {
        CartanMatrix {
            system: self.system.subsystem_indices(idx),
            entries: linalg::principal(&self.entries, idx),
            params: BTreeMap::new(),
        }
    }

    /// Transposed matrix (the dual polytope's Cartan matrix).
    pub fn transpose(&self) -> CartanMatrix {
        CartanMatrix { system: self.system.clone(), entries: self.entries.transpose(), params: BTreeMap::new() }
    }

    /// `D A D⁻¹` for a positive diagonal `D` given by its diagonal.
    pub fn conjugate(&self, d: &[f64]) -> Result<CartanMatrix> {
        if d.len() != self.size() || d.iter().any(|&x| !(x > 0.0)) {
            return Err(Error::InvalidInput("conjugation needs a positive diagonal of matching size".into()));
        }
        let n = self.size();
        let entries = DMatrix::from_fn(n, n, |i, j| d[i] * self.entries[(i, j)] / d[j]);
        Ok(CartanMatrix { system: self.system.clone(), entries, params: BTreeMap::new() })
    }

    /// Numerical rank with a cutoff relative to the largest singular value.
    pub fn rank(&self) -> usize {
        linalg::rank(&self.entries, TOL)
    }

    /// Determinant.
    pub fn det(&self) -> f64 {
        linalg::det(&self.entries)
    }

    /// Cyclic products over the fundamental cycles of the diagram.
    pub fn cyclic_products(&self) -> BTreeMap<String, f64> {
        let basis = CycleBasis::of(&self.system);
        basis.cycles.iter().map(|c| (c.id.clone(), cycle_product(&self.entries, &c.nodes))).collect()
    }

    /// Whether `other` is `D self D⁻¹` for some positive diagonal `D`.
    pub fn are_equivalent(&self, other: &CartanMatrix) -> Result<bool> {
        if self.system != other.system {
            return Err(Error::InvalidInput("Cartan matrices realize different systems".into()));
        }
        let n = self.size();
        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (self.entries[(i, j)], other.entries[(i, j)]);
                if (a.abs() <= TOL) != (b.abs() <= TOL) {
                    return Ok(false);
                }
                let pa = a * self.entries[(j, i)];
                let pb = b * other.entries[(j, i)];
                if !close(pa, pb, TOL) {
                    return Ok(false);
                }
            }
        }
        let pa = self.cyclic_products();
        let pb = other.cyclic_products();
        Ok(pa.iter().all(|(k, v)| close(*v, pb[k], TOL)))
    }

    /// Splits into irreducible components and types each one.
    pub fn type_decompose(&self) -> TypeDecomposition {
        let components = self
            .system
            .components()
            .into_iter()
            .map(|idx| {
                let sub = self.restrict(&idx);
                let min_eigenvalue = linalg::min_real_eigenvalue(sub.entries()).unwrap_or(f64::NAN);
                let kind = match catalog_type(&sub) {
                    Some(kind) => kind,
                    None if min_eigenvalue > TOL => ComponentType::Positive,
                    None if min_eigenvalue < -TOL => ComponentType::Negative,
                    None => ComponentType::Zero,
                };
                TypeComponent { indices: idx, kind, min_eigenvalue }
            })
            .collect();
        TypeDecomposition { components }
    }

    /// Positive diagonal `D` with `D A D⁻¹` symmetric, if one exists.
    pub fn symmetrize(&self) -> Option<DVector<f64>> {
        let basis = CycleBasis::of(&self.system);
        let d = basis.tree_scaling(&self.entries);
        let n = self.size();
        let s = DMatrix::from_fn(n, n, |i, j| d[i] * self.entries[(i, j)] / d[j]);
        let scale = linalg::max_abs(&s).max(1.0);
        let asym = linalg::max_abs_diff(&s, &s.transpose());
        (asym <= TOL * scale).then_some(d)
    }

    /// JSON object `{"system", "entries", "params"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<f64>> =
            (0..self.size()).map(|i| (0..self.size()).map(|j| self.entries[(i, j)]).collect()).collect();
        serde_json::json!({
            "system": self.system.to_dsl(),
            "entries": rows,
            "params": self.params,
        })
    }

    /// Inverse of [`CartanMatrix::to_json`].
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let dump: CartanDump = serde_json::from_value(value.clone())
            .map_err(|e| Error::InvalidInput(format!("malformed Cartan matrix JSON: {e}")))?;
        let system = parse_diagram(&dump.system)?;
        let n = system.rank();
        if dump.entries.len() != n || dump.entries.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCartan("entry array has the wrong shape".into()));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| dump.entries[i][j]);
        Ok(Self::new(system, entries)?.with_params(dump.params))
    }
}

#[derive(Deserialize)]
struct CartanDump {
    system: String,
    entries: Vec<Vec<f64>>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
}

/// Coxeter order realized by the product `a_st a_ts`, if any.
pub fn infer_order(p: f64) -> Option<Order> {
    if p.abs() <= TOL {
        return Some(Order::Finite(2));
    }
    if p >= 4.0 - TOL {
        return Some(Order::Infinite);
    }
    if p < 0.0 {
        return None;
    }
    let m = (PI / (p.sqrt() / 2.0).acos()).round();
    if m < 3.0 || m > u32::MAX as f64 {
        return None;
    }
    let order = Order::Finite(m as u32);
    ((p - 4.0 * order.cos_pi_over().powi(2)).abs() <= 1e-7).then_some(order)
}

/// Product `A[s1][s2] A[s2][s3] ⋯ A[sk][s1]` along a closed walk.
pub fn cycle_product(a: &DMatrix<f64>, nodes: &[usize]) -> f64 {
    let k = nodes.len();
    (0..k).map(|i| a[(nodes[i], nodes[(i + 1) % k])]).product()
}

/// Type of a component decided by the catalog when the component is
/// equivalent to its Gram matrix.
fn catalog_type(sub: &CartanMatrix) -> Option<ComponentType> {
    let gram = CartanMatrix::from_gram(sub.system());
    if !sub.are_equivalent(&gram).ok()? {
        return None;
    }
    let label = classify_irreducible(sub.system()).ok()?;
    Some(match label.kind {
        Kind::Spherical => ComponentType::Positive,
        Kind::Affine => ComponentType::Zero,
        Kind::Lanner | Kind::Large => ComponentType::Negative,
    })
}

/// Sign class of an irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ComponentType {
    /// Smallest real eigenvalue positive.
    Positive,
    /// Smallest real eigenvalue zero.
    Zero,
    /// Smallest real eigenvalue negative.
    Negative,
}

/// One irreducible component of a Cartan matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeComponent {
    /// Generator positions in the component.
    pub indices: Vec<usize>,
    /// Its type.
    pub kind: ComponentType,
    /// Its smallest real eigenvalue.
    pub min_eigenvalue: f64,
}

/// The decomposition `A⁺ ⊕ A⁰ ⊕ A⁻`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TypeDecomposition {
    /// Components ordered by smallest generator position.
    pub components: Vec<TypeComponent>,
}

impl TypeDecomposition {
    /// Whether every component has the given type (vacuously true when empty).
    pub fn all(&self, kind: ComponentType) -> bool {
        self.components.iter().all(|c| c.kind == kind)
    }

    /// Positions in components of the given type, sorted.
    pub fn part(&self, kind: ComponentType) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.components.iter().filter(|c| c.kind == kind).flat_map(|c| c.indices.iter().copied()).collect();
        out.sort_unstable();
        out
    }
}

/// A fundamental cycle of the diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cycle {
    /// Parameter name of the cycle.
    pub id: String,
    /// Closing (non-tree) edge `(s, t)` with `s < t`.
    pub closing: (usize, usize),
    /// Nodes in canonical orientation: start at the smallest position and
    /// continue to the smaller of its two cycle neighbours.
    pub nodes: Vec<usize>,
}

/// Depth-first spanning forest of a diagram together with its fundamental
/// cycles and infinite-order edges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleBasis {
    /// Tree edges `(parent, child)`.
    pub tree_edges: Vec<(usize, usize)>,
    /// Parent of each node (`None` for component roots).
    pub parent: Vec<Option<usize>>,
    /// Fundamental cycles sorted by closing edge.
    pub cycles: Vec<Cycle>,
    /// Infinite-order edges `(s, t)` with `s < t` and their parameter names.
    pub infinite: Vec<(usize, usize, String)>,
}

/// Name of the `i`-th cycle parameter (0-based).
pub fn cycle_param_name(i: usize) -> String {
    match i {
        0 => "lambda".into(),
        1 => "mu".into(),
        _ => format!("lambda{}", i + 1),
    }
}

impl CycleBasis {
    /// Depth-first search from the smallest position of each component,
    /// visiting neighbours in increasing order.
    pub fn of(w: &CoxeterSystem) -> Self {
        let n = w.rank();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        let mut tree_edges = Vec::new();
        fn dfs(
            w: &CoxeterSystem,
            v: usize,
            seen: &mut [bool],
            parent: &mut [Option<usize>],
            tree: &mut Vec<(usize, usize)>,
        ) {
            seen[v] = true;
            for u in w.neighbors(v) {
                if !seen[u] {
                    parent[u] = Some(v);
                    tree.push((v, u));
                    dfs(w, u, seen, parent, tree);
                }
            }
        }
        for root in 0..n {
            if !seen[root] {
                dfs(w, root, &mut seen, &mut parent, &mut tree_edges);
            }
        }
        let is_tree = |s: usize, t: usize| parent[t] == Some(s) || parent[s] == Some(t);
        let mut closing: Vec<(usize, usize)> =
            w.edges().into_iter().filter(|&(s, t, _)| !is_tree(s, t)).map(|(s, t, _)| (s, t)).collect();
        closing.sort_unstable();
        let cycles = closing
            .into_iter()
            .enumerate()
            .map(|(i, (s, t))| Cycle { id: cycle_param_name(i), closing: (s, t), nodes: fundamental_cycle(&parent, s, t) })
            .collect();
        let infinite = w
            .edges()
            .into_iter()
            .filter(|e| e.2 == Order::Infinite)
            .map(|(s, t, _)| (s, t, format!("t:{}-{}", w.generators()[s], w.generators()[t])))
            .collect();
        Self { tree_edges, parent, cycles, infinite }
    }

    /// Whether `(s, t)` is a tree edge in either direction.
    pub fn is_tree_edge(&self, s: usize, t: usize) -> bool {
        self.parent[t] == Some(s) || self.parent[s] == Some(t)
    }

    /// Diagonal `d` making `d_s a_st / d_t` symmetric on every tree edge, with
    /// `d = 1` at the roots.
    pub fn tree_scaling(&self, a: &DMatrix<f64>) -> DVector<f64> {
        let mut d = DVector::from_element(a.nrows(), 1.0);
        for &(s, t) in &self.tree_edges {
            d[t] = d[s] * (a[(s, t)] / a[(t, s)]).sqrt();
        }
        d
    }

    /// All parameter names: cycles first, then infinite-order couplings.
    pub fn param_names(&self) -> Vec<String> {
        self.cycles.iter().map(|c| c.id.clone()).chain(self.infinite.iter().map(|e| e.2.clone())).collect()
    }
}

fn path_to_root(parent: &[Option<usize>], mut v: usize) -> Vec<usize> {
    let mut out = vec![v];
    while let Some(p) = parent[v] {
        out.push(p);
        v = p;
    }
    out
}

fn fundamental_cycle(parent: &[Option<usize>], s: usize, t: usize) -> Vec<usize> {
    let ps = path_to_root(parent, s);
    let pt = path_to_root(parent, t);
    let lca = *ps.iter().find(|v| pt.contains(v)).expect("endpoints share a tree");
    let mut walk: Vec<usize> = ps.iter().copied().take_while(|&v| v != lca).collect();
    walk.push(lca);
    let down: Vec<usize> = pt.iter().copied().take_while(|&v| v != lca).collect();
    walk.extend(down.into_iter().rev());
    canonical_orientation(walk)
}

/// Rotates and orients a cycle to start at its smallest node and continue to
/// the smaller neighbour.
pub fn canonical_orientation(mut walk: Vec<usize>) -> Vec<usize> {
    let k = walk.len();
    let start = (0..k).min_by_key(|&i| walk[i]).expect("nonempty cycle");
    walk.rotate_left(start);
    if k > 2 && walk[k - 1] < walk[1] {
        walk[1..].reverse();
    }
    walk
}

/// Special-form Cartan matrix of `w`: symmetric `-2cos(π/m)` on tree edges
/// and, on the closing edge `(s, t)` (`s < t`) of a cycle with parameter `λ`,
/// `a_st = -2cos(π/m)/λ` and `a_ts = -2cos(π/m)·λ`. Infinite-order edges carry
/// a coupling `t ≥ 1` (default 1) multiplying both entries.
pub fn build_special_form(w: &CoxeterSystem, params: &BTreeMap<String, f64>) -> Result<CartanMatrix> {
    let basis = CycleBasis::of(w);
    let mut a = w.gram_matrix();
    let mut used = BTreeMap::new();
    for (s, t, name) in &basis.infinite {
        let c = params.get(name).copied().unwrap_or(1.0);
        if !(c > 0.0) {
            return Err(Error::NonPositiveParameter(name.clone()));
        }
        if c < 1.0 {
            return Err(Error::InvalidInput(format!("coupling `{name}` must be at least 1")));
        }
        a[(*s, *t)] *= c;
        a[(*t, *s)] *= c;
        used.insert(name.clone(), c);
    }
    for cycle in &basis.cycles {
        let lambda = *params.get(&cycle.id).ok_or_else(|| Error::MissingParameter(cycle.id.clone()))?;
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::NonPositiveParameter(cycle.id.clone()));
        }
        let (s, t) = cycle.closing;
        a[(s, t)] /= lambda;
        a[(t, s)] *= lambda;
        used.insert(cycle.id.clone(), lambda);
    }
    Ok(CartanMatrix::new(w.clone(), a)?.with_params(used))
}

/// A Cartan matrix brought to special form.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialForm {
    /// The special-form representative.
    pub base: CartanMatrix,
    /// Tree edges on which the representative is symmetric.
    pub tree_edges: Vec<(usize, usize)>,
    /// Cycle parameters and infinite-order couplings.
    pub cycle_params: BTreeMap<String, f64>,
}

impl SpecialForm {
    /// Normalizes `a`: conjugates it to be symmetric on the spanning tree and
    /// reads each cycle parameter off its closing edge.
    pub fn of(a: &CartanMatrix) -> Result<SpecialForm> {
        let basis = CycleBasis::of(a.system());
        let d = basis.tree_scaling(a.entries());
        let conj = a.conjugate(d.as_slice())?;
        let e = conj.entries();
        let mut params = BTreeMap::new();
        for (s, t, name) in &basis.infinite {
            params.insert(name.clone(), (e[(*s, *t)] * e[(*t, *s)]).sqrt() / 2.0);
        }
        for cycle in &basis.cycles {
            let (s, t) = cycle.closing;
            params.insert(cycle.id.clone(), (e[(t, s)] / e[(s, t)]).sqrt());
        }
        let base = build_special_form(a.system(), &params)?;
        Ok(SpecialForm { base, tree_edges: basis.tree_edges, cycle_params: params })
    }
}

/// For the cyclic matrix with unit diagonal, couplings `-c_i` between
/// consecutive nodes and `λ` on the closing edge, returns `(D₁, ∏ cᵢ)` with
/// `det = D₁ − ∏cᵢ·(λ + λ⁻¹ − 2)`.
pub fn loop_det_reduce(c: &[f64]) -> Result<(f64, f64)> {
    if c.len() < 3 {
        return Err(Error::Precondition("a loop needs at least three nodes".into()));
    }
    Ok((linalg::det(&loop_matrix(c, 1.0)), c.iter().product()))
}

/// The cyclic matrix of [`loop_det_reduce`] at a given `λ`.
pub fn loop_matrix(c: &[f64], lambda: f64) -> DMatrix<f64> {
    let n = c.len();
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        let j = (i + 1) % n;
        m[(i, j)] = -c[i];
        m[(j, i)] = -c[i];
    }
    m[(0, n - 1)] = -c[n - 1] / lambda;
    m[(n - 1, 0)] = -c[n - 1] * lambda;
    m
}

/// `1 − cos²α − cos²β − cos²γ − 2 cosα cosβ cosγ`.
pub fn psi_triple(alpha: f64, beta: f64, gamma: f64) -> f64 {
    let (a, b, c) = (alpha.cos(), beta.cos(), gamma.cos());
    1.0 - a * a - b * b - c * c - 2.0 * a * b * c
}

/// Product form `−4 ∏ cos((±α ± β ± γ)/2)` of [`psi_triple`] over the four
/// sign patterns with a leading `+`.
pub fn psi_triple_product(alpha: f64, beta: f64, gamma: f64) -> f64 {
    -4.0 * ((alpha + beta + gamma) / 2.0).cos()
        * ((alpha + beta - gamma) / 2.0).cos()
        * ((alpha - beta + gamma) / 2.0).cos()
        * ((-alpha + beta + gamma) / 2.0).cos()
}
