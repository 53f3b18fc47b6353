//! Deformation spaces of two-block families.
//!
//! For a family whose diagram splits along a bridge `p — q` into blocks `B₁`
//! and `B₂`, the special-form determinant factors as
//!
//! ```text
//! det A = det A_{B₁} · det A_{B₂} − κ · det A_{B₁∖p} · det A_{B₂∖q}
//! ```
//!
//! with `κ = a_pq a_qp`. A block with one cycle `C` has
//! `det A_B = α − β (x − 2)`, where `x = λ + λ⁻¹`, `α` is the determinant at
//! `λ = 1` and `β = 2^{|C|} ∏ cᵢ · det A_{B∖C}`. The zero set of the
//! determinant in `x, y ≥ 2` is then a point set, a union of lines or a
//! circle, decided from the coefficients alone.

mod family;
mod limit;
pub mod tables;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

pub use family::{Family, Shape};
pub use limit::{limit_family, limit_template, LimitReport};

use crate::cartan::{build_special_form, CartanMatrix, CycleBasis, SpecialForm};
use crate::diagram_core::{iso, parse_diagram, CoxeterSystem, Kind};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::LabeledPolytope;

/// Coefficients within this distance of zero are treated as zero when
/// classifying the topology.
const COEFF_TOL: f64 = 1e-12;

/// Number of grid points used to sample curve branches.
const GRID: usize = 64;

/// Topological type of a deformation space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DeformationKind {
    /// No realization.
    Empty,
    /// Finitely many points.
    FinitePoints,
    /// A disjoint union of lines.
    Curves,
    /// A closed curve.
    Circle,
}

impl std::fmt::Display for DeformationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            DeformationKind::Empty => "Empty",
            DeformationKind::FinitePoints => "FinitePoints",
            DeformationKind::Curves => "Curves",
            DeformationKind::Circle => "Circle",
        };
        f.write_str(s)
    }
}

/// Determinant data of one block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockTerms {
    /// Generator names of the block.
    pub generators: Vec<String>,
    /// Cycle parameter of the block, if it has a cycle.
    pub param: Option<String>,
    /// `det A_B` at parameter value 1.
    pub alpha: f64,
    /// Slope of `det A_B` in `x − 2` (zero for trees).
    pub beta: f64,
    /// `det A_{B∖end}` where `end` is the bridge node of the block.
    pub delta: f64,
}

/// The reduced equation `(α₁ − β₁X)(α₂ − β₂Y) = γ` with `X = x − 2`,
/// `Y = y − 2` and `γ = κ δ₁ δ₂`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedEquation {
    /// The two blocks.
    pub blocks: [BlockTerms; 2],
    /// `a_pq a_qp` on the bridge.
    pub kappa: f64,
    /// `κ δ₁ δ₂`.
    pub gamma: f64,
    /// For two cycles: `(A₁, A₂, B)` with `(x − A₁)(y − A₂) = B`.
    pub normal_form: Option<(f64, f64, f64)>,
    /// For one cycle: the unique admissible `x`, if the equation is not degenerate.
    pub x0: Option<f64>,
}

impl ReducedEquation {
    /// Computes the reduced equation of a family with all `∞` couplings at 1.
    pub fn of(family: &Family) -> Result<Self> {
        let w = family.system();
        let basis = CycleBasis::of(w);
        let ones: BTreeMap<String, f64> = basis.param_names().into_iter().map(|n| (n, 1.0)).collect();
        let a = build_special_form(w, &ones)?.entries().clone();
        let (p, q) = family.bridge();
        let block = |k: usize, end: usize| -> BlockTerms {
            let idx = &family.blocks()[k];
            let cycle = basis.cycles.iter().find(|c| c.nodes.iter().all(|v| idx.contains(v)));
            let alpha = exact_det(w, &a, idx);
            let rest: Vec<usize> = idx.iter().copied().filter(|&v| v != end).collect();
            let delta = exact_det(w, &a, &rest);
            let (param, beta) = match cycle {
                Some(c) => {
                    let k = c.nodes.len();
                    let prod: f64 = (0..k).map(|i| -a[(c.nodes[i], c.nodes[(i + 1) % k])] / 2.0).product();
                    let off: Vec<usize> = idx.iter().copied().filter(|v| !c.nodes.contains(v)).collect();
                    let beta = 2f64.powi(k as i32) * prod * plain_det(&a, &off);
                    (Some(c.id.clone()), beta)
                }
                None => (None, 0.0),
            };
            BlockTerms {
                generators: idx.iter().map(|&i| w.generators()[i].clone()).collect(),
                param,
                alpha,
                beta,
                delta,
            }
        };
        let b1 = block(0, p);
        let b2 = block(1, q);
        let kappa = a[(p, q)] * a[(q, p)];
        let gamma = kappa * b1.delta * b2.delta;
        let mut eq = ReducedEquation { blocks: [b1, b2], kappa, gamma, normal_form: None, x0: None };
        match (eq.blocks[0].param.is_some(), eq.blocks[1].param.is_some()) {
            (true, true) => {
                let [b1, b2] = &eq.blocks;
                if b1.beta.abs() <= COEFF_TOL || b2.beta.abs() <= COEFF_TOL {
                    return Err(Error::UnsupportedFamily("a cycle block has a degenerate slope".into()));
                }
                let a1 = 2.0 + b1.alpha / b1.beta;
                let a2 = 2.0 + b2.alpha / b2.beta;
                eq.normal_form = Some((a1, a2, gamma / (b1.beta * b2.beta)));
            }
            (true, false) | (false, true) => {
                let (lp, cst) = eq.loop_and_constant();
                if lp.beta.abs() <= COEFF_TOL {
                    return Err(Error::UnsupportedFamily("the cycle block has a degenerate slope".into()));
                }
                if cst.alpha.abs() > COEFF_TOL {
                    eq.x0 = Some(2.0 + (lp.alpha * cst.alpha - gamma) / (lp.beta * cst.alpha));
                }
            }
            (false, false) => {}
        }
        Ok(eq)
    }

    /// For one cycle: the block with the cycle and the constant block.
    fn loop_and_constant(&self) -> (&BlockTerms, &BlockTerms) {
        if self.blocks[0].param.is_some() {
            (&self.blocks[0], &self.blocks[1])
        } else {
            (&self.blocks[1], &self.blocks[0])
        }
    }

    /// Evaluates `(α₁ − β₁X)(α₂ − β₂Y) − γ`.
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let [b1, b2] = &self.blocks;
        (b1.alpha - b1.beta * (x - 2.0)) * (b2.alpha - b2.beta * (y - 2.0)) - self.gamma
    }

    /// JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Determinant of a principal block, exactly zero when the corresponding
/// subsystem has an affine component.
fn exact_det(w: &CoxeterSystem, a: &nalgebra::DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        return 1.0;
    }
    let sub = w.subsystem_indices(idx);
    if sub.classify_components().iter().any(|(_, l)| l.kind == Kind::Affine) {
        return 0.0;
    }
    plain_det(a, idx)
}

fn plain_det(a: &nalgebra::DMatrix<f64>, idx: &[usize]) -> f64 {
    if idx.is_empty() {
        1.0
    } else {
        linalg::det(&linalg::principal(a, idx))
    }
}

/// The larger root `λ ≥ 1` of `λ + λ⁻¹ = 2 + X` for `X ≥ 0`.
pub fn lambda_from_shift(shift: f64) -> f64 {
    let s = shift.max(0.0);
    (2.0 + s + (s * (s + 4.0)).sqrt()) / 2.0
}

/// `λ + λ⁻¹ − 2`, computed without cancellation.
pub fn shift_of(lambda: f64) -> f64 {
    (lambda - 1.0).powi(2) / lambda
}

fn log_grid() -> Vec<f64> {
    let lo = (1.0f64 / 16.0).ln();
    let hi = 16f64.ln();
    (0..GRID).map(|i| (lo + (hi - lo) * i as f64 / (GRID - 1) as f64).exp()).collect()
}

/// Deformation space of a family member.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeformationSpace {
    /// Topological type.
    pub kind: DeformationKind,
    /// Number of connected components (points or lines); 1 for a circle.
    pub branches: usize,
    /// Sampled or exact parameter assignments.
    pub witnesses: Vec<BTreeMap<String, f64>>,
    /// Coefficients of the reduced equation.
    pub reduced: ReducedEquation,
    /// For a circle: admissible ranges `[2, x_max]` and `[2, y_max]`.
    pub bounds: Option<(f64, f64)>,
    /// Largest `|det A|` over the witnesses.
    pub max_witness_det: f64,
    /// Diagram of the family.
    pub diagram: String,
}

impl DeformationSpace {
    /// Deformation space of the labeled polytope `g`.
    pub fn of(g: &LabeledPolytope) -> Result<Self> {
        let family = Family::infer(g.system())?;
        let expected = family.labeled_polytope()?;
        if g.lattice().facets().len() != g.dim() + 2 {
            return Err(Error::UnsupportedFamily("the polytope does not have d + 2 facets".into()));
        }
        if !g.lattice().is_isomorphic(expected.lattice()) || expected.labels() != g.labels() {
            return Err(Error::UnsupportedFamily("the labeled polytope is not the family's polytope".into()));
        }
        Self::of_family(&family)
    }

    /// Deformation space of an inferred family.
    pub fn of_family(family: &Family) -> Result<Self> {
        let eq = ReducedEquation::of(family)?;
        let (kind, branches, raw, bounds) = solve(&eq, family)?;
        let w = family.system();
        let mut witnesses = Vec::new();
        let mut max_det: f64 = 0.0;
        for params in raw {
            let a = build_special_form(w, &params)?;
            max_det = max_det.max(a.det().abs());
            witnesses.push(params);
        }
        Ok(DeformationSpace {
            kind,
            branches,
            witnesses,
            reduced: eq,
            bounds,
            max_witness_det: max_det,
            diagram: w.to_dsl(),
        })
    }

    /// Values of the first cycle parameter solving the equation at a fixed
    /// value of the second one (two-cycle families only).
    pub fn lambdas_at(&self, mu: f64) -> Result<Vec<f64>> {
        let (a1, a2, b) = self
            .reduced
            .normal_form
            .ok_or_else(|| Error::Precondition("the family does not have two cycles".into()))?;
        if !(mu > 0.0) {
            return Err(Error::NonPositiveParameter("mu".into()));
        }
        let (p, q) = (2.0 - a1, 2.0 - a2);
        let y = shift_of(mu);
        let denom = y + q;
        if denom.abs() <= COEFF_TOL {
            return Err(Error::Precondition("every λ solves the equation at this μ".into()));
        }
        let x = b / denom - p;
        Ok(lambda_pair(x))
    }

    /// JSON form with `kind`, `reduced`, `witnesses` and `checks`.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "kind": self.kind.to_string(),
            "branches": self.branches,
            "diagram": self.diagram,
            "reduced": self.reduced.to_json(),
            "bounds": self.bounds.map(|(x, y)| json!({"x": [2.0, x], "y": [2.0, y]})),
            "witnesses": self.witnesses,
            "checks": {
                "witness_count": self.witnesses.len(),
                "max_abs_det": self.max_witness_det,
                "all_below_tolerance": self.max_witness_det < crate::TOL,
            },
        })
    }
}

/// Convenience wrapper for [`DeformationSpace::of`].
pub fn deformation_space(g: &LabeledPolytope) -> Result<DeformationSpace> {
    DeformationSpace::of(g)
}

/// Deformation space of a polytope labeled by the `U` diagram.
pub fn circle_space(g: &LabeledPolytope) -> Result<DeformationSpace> {
    let u = parse_diagram(tables::U_DIAGRAM)?;
    if !iso::are_isomorphic(g.system(), &u) {
        return Err(Error::InvalidInput("the polytope is not labeled by the U diagram".into()));
    }
    let space = DeformationSpace::of(g)?;
    if space.kind != DeformationKind::Circle {
        return Err(Error::Numerical(format!("expected a circle, found {}", space.kind)));
    }
    Ok(space)
}

/// `{λ, λ⁻¹}` for `X > 0`, `{1}` for `X = 0`, nothing for `X < 0`.
fn lambda_pair(x: f64) -> Vec<f64> {
    if x > COEFF_TOL {
        let l = lambda_from_shift(x);
        vec![l, 1.0 / l]
    } else if x >= -COEFF_TOL {
        vec![1.0]
    } else {
        Vec::new()
    }
}

type Solved = (DeformationKind, usize, Vec<BTreeMap<String, f64>>, Option<(f64, f64)>);

fn assignment(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Refines a root of the one-cycle equation by bisection on the direct
/// determinant in a small bracket around the closed form.
fn polish_root(family: &Family, name: &str, shift: f64) -> Result<f64> {
    let w = family.system();
    let f = |s: f64| -> Result<f64> {
        let mut params = BTreeMap::new();
        params.insert(name.to_string(), lambda_from_shift(s));
        Ok(build_special_form(w, &params)?.det())
    };
    let width = 1e-6 * shift.abs().max(1e-6);
    let (mut lo, mut hi) = ((shift - width).max(0.0), shift + width);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo == 0.0 {
        return Ok(lo);
    }
    if flo.signum() == fhi.signum() {
        return Ok(shift);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn solve(eq: &ReducedEquation, family: &Family) -> Result<Solved> {
    let [b1, b2] = &eq.blocks;
    match (&b1.param, &b2.param) {
        (None, None) => {
            let det = b1.alpha * b2.alpha - eq.gamma;
            if det.abs() <= crate::TOL {
                Ok((DeformationKind::FinitePoints, 1, vec![BTreeMap::new()], None))
            } else {
                Ok((DeformationKind::Empty, 0, Vec::new(), None))
            }
        }
        (Some(_), None) | (None, Some(_)) => {
            let (lp, _) = eq.loop_and_constant();
            let name = lp.param.clone().unwrap();
            match eq.x0 {
                Some(x0) => {
                    let shift = x0 - 2.0;
                    let pts = lambda_pair(shift);
                    if pts.is_empty() {
                        return Ok((DeformationKind::Empty, 0, Vec::new(), None));
                    }
                    let refined = if pts.len() == 2 { polish_root(family, &name, shift)? } else { 0.0 };
                    let l = lambda_from_shift(refined);
                    let pts = if pts.len() == 2 { vec![l, 1.0 / l] } else { pts };
                    let n = pts.len();
                    let wit = pts.into_iter().map(|v| assignment(&[(&name, v)])).collect();
                    Ok((DeformationKind::FinitePoints, n, wit, None))
                }
                None => {
                    if eq.gamma.abs() > COEFF_TOL {
                        Ok((DeformationKind::Empty, 0, Vec::new(), None))
                    } else {
                        let wit = log_grid().into_iter().map(|v| assignment(&[(&name, v)])).collect();
                        Ok((DeformationKind::Curves, 1, wit, None))
                    }
                }
            }
        }
        (Some(n1), Some(n2)) => solve_two(eq, n1, n2),
    }
}

fn solve_two(eq: &ReducedEquation, n1: &str, n2: &str) -> Result<Solved> {
    let (a1, a2, b) = eq.normal_form.expect("two-cycle normal form");
    let (p, q) = (2.0 - a1, 2.0 - a2);
    let zero = |v: f64| v.abs() <= COEFF_TOL;
    let grid = log_grid();
    // Witnesses with a free first parameter and the second solved.
    let over_lambda = |wit: &mut Vec<BTreeMap<String, f64>>| {
        for &l in &grid {
            let x = shift_of(l);
            if x + p <= COEFF_TOL {
                continue;
            }
            for m in lambda_pair(b / (x + p) - q) {
                wit.push(assignment(&[(n1, l), (n2, m)]));
            }
        }
    };
    let over_mu = |wit: &mut Vec<BTreeMap<String, f64>>| {
        for &m in &grid {
            let y = shift_of(m);
            if y + q <= COEFF_TOL {
                continue;
            }
            for l in lambda_pair(b / (y + q) - p) {
                wit.push(assignment(&[(n1, l), (n2, m)]));
            }
        }
    };
    let mut wit = Vec::new();
    if zero(b) {
        let lines = |c: f64| if zero(c) { 1 } else if c < 0.0 { 2 } else { 0 };
        let (nx, ny) = (lines(p), lines(q));
        if nx > 0 && ny > 0 {
            return Err(Error::UnsupportedFamily("the solution lines cross".into()));
        }
        if nx > 0 {
            for l in lambda_pair(-p) {
                for &m in &grid {
                    wit.push(assignment(&[(n1, l), (n2, m)]));
                }
            }
        }
        if ny > 0 {
            for m in lambda_pair(-q) {
                for &l in &grid {
                    wit.push(assignment(&[(n1, l), (n2, m)]));
                }
            }
        }
        let kind = if nx + ny == 0 { DeformationKind::Empty } else { DeformationKind::Curves };
        return Ok((kind, nx + ny, wit, None));
    }
    if b < 0.0 {
        if p >= -COEFF_TOL && q >= -COEFF_TOL {
            return Ok((DeformationKind::Empty, 0, wit, None));
        }
        return Err(Error::UnsupportedFamily("negative constant with a negative shift".into()));
    }
    match (p > COEFF_TOL, q > COEFF_TOL) {
        (true, true) => {
            let x_max = b / q - p;
            let y_max = b / p - q;
            if x_max < -COEFF_TOL {
                Ok((DeformationKind::Empty, 0, wit, None))
            } else if x_max <= COEFF_TOL {
                wit.push(assignment(&[(n1, 1.0), (n2, 1.0)]));
                Ok((DeformationKind::FinitePoints, 1, wit, None))
            } else {
                let samples = GRID / 4;
                for k in 0..samples {
                    let x = x_max * (k as f64 + 0.5) / samples as f64;
                    let y = b / (x + p) - q;
                    let (l, m) = (lambda_from_shift(x), lambda_from_shift(y));
                    for (ll, mm) in [(l, m), (l, 1.0 / m), (1.0 / l, m), (1.0 / l, 1.0 / m)] {
                        wit.push(assignment(&[(n1, ll), (n2, mm)]));
                    }
                }
                Ok((DeformationKind::Circle, 1, wit, Some((2.0 + x_max, 2.0 + y_max))))
            }
        }
        (true, false) => {
            over_lambda(&mut wit);
            Ok((DeformationKind::Curves, 2, wit, None))
        }
        (false, true) => {
            over_mu(&mut wit);
            Ok((DeformationKind::Curves, 2, wit, None))
        }
        (false, false) => {
            if p < -COEFF_TOL && q < -COEFF_TOL && p * q >= b {
                return Err(Error::UnsupportedFamily("the bounded branch of the hyperbola is admissible".into()));
            }
            over_mu(&mut wit);
            Ok((DeformationKind::Curves, 4, wit, None))
        }
    }
}

/// The μ-invariant of a Cartan matrix on a two-cycle diagram.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuInvariant {
    /// Second cycle parameter of the special form.
    pub value: f64,
}

/// Reads the μ-invariant off the special form of `a`.
pub fn mu_invariant(a: &CartanMatrix) -> Result<MuInvariant> {
    let basis = CycleBasis::of(a.system());
    if basis.cycles.len() != 2 {
        return Err(Error::Precondition(format!("the diagram has cycle rank {}, not 2", basis.cycles.len())));
    }
    let sf = SpecialForm::of(a)?;
    let id = &basis.cycles[1].id;
    Ok(MuInvariant { value: sf.cycle_params[id] })
}
