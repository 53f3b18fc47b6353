//! The `reproduce` subcommand: full pipelines over the bundled tables.

use std::f64::consts::PI;

use anyhow::Result;
use coxfill::cartan::build_special_form;
use coxfill::deform::{limit_family, tables, DeformationKind, DeformationSpace, Family};
use coxfill::realize::{
    appendix_b, classify_vertices, is_hyperbolic, orbit_explore, realize_cartan, reflections_of, truncatable,
    VertexClass,
};
use coxfill::relhyp::{caprace_check, default_peripherals, PeripheralCollection};
use coxfill::{CoxeterSystem, Order};
use serde_json::{json, Value};

use crate::commands::{Settings, RELATION_TOL};
use crate::report::RunReport;

/// Identifiers accepted by `reproduce`.
pub const IDS: [&str; 9] = ["cox_gp", "ex1A", "ex1B", "ex1C", "ex1D", "ex2", "mix", "appendixB", "circle"];

/// Facts that are stated for these families but not computed here.
const NOT_COMPUTED: [&str; 3] = [
    "strict convexity and C1 boundary of the convex domain",
    "finite covolume of the quotient",
    "Gromov-Hausdorff convergence of the quotients",
];

/// Unknown table identifier.
#[derive(Debug)]
pub struct UnknownTable(pub String);

impl std::fmt::Display for UnknownTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "unknown table `{}`; expected one of {}", self.0, IDS.join(", "))
    }
}

impl std::error::Error for UnknownTable {}

fn w_i(i: u8, m: Order) -> Result<CoxeterSystem> {
    Ok(tables::cox_gp(i)?.bind_one("m", m)?)
}

fn space(w: &CoxeterSystem) -> Result<DeformationSpace> {
    Ok(DeformationSpace::of_family(&Family::infer(w)?)?)
}

fn class_counts(w: &CoxeterSystem) -> Result<[usize; 3]> {
    let s = space(w)?;
    let a = build_special_form(w, &s.witnesses[0])?;
    let g = classify_vertices(&realize_cartan(&a)?)?;
    Ok([g.count(VertexClass::Elliptic), g.count(VertexClass::Parabolic), g.count(VertexClass::Loxodromic)])
}

/// Realizes every witness and compares with the family polytope.
fn realize_witnesses(rep: &mut RunReport, name: &str, w: &CoxeterSystem, s: &DeformationSpace) -> Result<()> {
    let target = Family::infer(w)?.labeled_polytope()?;
    let mut lattice_ok = true;
    let mut residual: f64 = 0.0;
    for p in &s.witnesses {
        let r = realize_cartan(&build_special_form(w, p)?)?;
        lattice_ok &= r.lattice().faces() == target.lattice().faces();
        residual = residual.max(reflections_of(&r)?.relation_residual);
    }
    rep.check(format!("{name}: realized lattices match"), lattice_ok, json!(s.witnesses.len()));
    rep.check(format!("{name}: coxeter relations"), residual < RELATION_TOL, json!(residual));
    Ok(())
}

fn cox_gp(rep: &mut RunReport, st: Settings) -> Result<Value> {
    let mut sizes = Vec::new();
    for i in [1u8, 2] {
        let mut empty = true;
        for m in 3..=6 {
            empty &= space(&w_i(i, Order::Finite(m))?)?.kind == DeformationKind::Empty;
        }
        rep.check(format!("W{i}: empty for m = 3..6"), empty, Value::Null);
        let mut two = true;
        let mut worst: f64 = 0.0;
        for m in 7..=40 {
            let s = space(&w_i(i, Order::Finite(m))?)?;
            two &= s.kind == DeformationKind::FinitePoints && s.witnesses.len() == 2;
            if s.witnesses.len() == 2 {
                worst = worst.max((s.witnesses[0]["lambda"] * s.witnesses[1]["lambda"] - 1.0).abs());
            }
            sizes.push(json!({"family": i, "m": m, "kind": s.kind.to_string(), "points": s.witnesses.len()}));
        }
        rep.check(format!("W{i}: two points for m = 7..40"), two, Value::Null);
        rep.check(format!("W{i}: lambda0 * lambda1 = 1"), worst < st.tol, json!(worst));
    }
    let mut branches_ok = true;
    for m in 3..=20 {
        let s = space(&w_i(3, Order::Finite(m))?)?;
        branches_ok &= s.kind == DeformationKind::Curves && s.branches == if m == 3 { 4 } else { 2 };
        sizes.push(json!({"family": 3, "m": m, "kind": s.kind.to_string(), "branches": s.branches}));
    }
    rep.check("W3: four branches at m = 3, two for m = 4..20", branches_ok, Value::Null);

    let mut limits = Vec::new();
    for (i, mu) in [(1u8, None), (2, None), (3, Some(1.0)), (3, Some(0.5)), (3, Some(2.0))] {
        let lim = limit_family(i, mu)?;
        let real = realize_cartan(&lim.limit)?;
        let hyperbolic = is_hyperbolic(&real);
        let tag = match mu {
            Some(mu) => format!("W3 at mu = {mu}"),
            None => format!("W{i}"),
        };
        rep.check(format!("{tag}: limit by extrapolation"), lim.monotone && lim.max_entry_diff < 1e-7, json!(lim.max_entry_diff));
        rep.check(format!("{tag}: limit has 7 vertices"), real.vertices().len() == 7, json!(real.vertices().len()));
        let want_hyp = mu.is_none_or(|mu| mu == 1.0);
        rep.check(format!("{tag}: limit hyperbolic is {want_hyp}"), hyperbolic == want_hyp, json!(hyperbolic));
        limits.push(json!({"family": tag, "limit": lim.to_json(), "hyperbolic": hyperbolic}));
    }

    let mut classes = Vec::new();
    for (i, m, want) in [
        (1u8, Order::Finite(7), [9, 0, 0]),
        (2, Order::Finite(7), [7, 0, 2]),
        (1, Order::Infinite, [6, 1, 0]),
        (2, Order::Infinite, [4, 1, 2]),
        (3, Order::Finite(7), [9, 0, 0]),
    ] {
        let got = class_counts(&w_i(i, m)?)?;
        rep.check(format!("P{i} at m = {m}: vertex classes"), got == want, json!(got));
        classes.push(json!({"family": i, "m": m.to_string(), "elliptic_parabolic_loxodromic": got}));
    }

    let w17 = w_i(1, Order::Finite(7))?;
    let s = space(&w17)?;
    let r = realize_cartan(&build_special_form(&w17, &s.witnesses[0])?)?;
    let o = orbit_explore(&r, st.max_word_length, 10_000, st.seed);
    rep.check("P1 at m = 7: sampled tiles are disjoint", o.violations == 0, json!(o.violations));
    rep.note(format!("{} orbit elements up to length {}", o.len(), st.max_word_length));
    Ok(json!({
        "deformation_spaces": sizes,
        "limits": limits,
        "vertex_classes": classes,
        "orbit": {"elements": o.len(), "sampled_pairs": o.sampled_pairs, "violations": o.violations},
        "not_computed": NOT_COMPUTED,
    }))
}

fn family_table(rep: &mut RunReport, id: &str, st: Settings) -> Result<Value> {
    let fillings = id.starts_with("ex1");
    let mut rows = Vec::new();
    for e in tables::table(id)? {
        let ms: Vec<Order> =
            if e.has_m() { vec![Order::Finite(7), Order::Finite(9), Order::Infinite] } else { vec![Order::Finite(2)] };
        for m in ms {
            let w = e.at(m)?;
            let name = if e.has_m() { format!("{} at m = {m}", e.name) } else { e.name.clone() };
            let family = Family::infer(&w)?;
            let s = DeformationSpace::of_family(&family)?;
            rep.check(format!("{name}: non-empty"), s.kind != DeformationKind::Empty, json!(s.kind.to_string()));
            rep.check(format!("{name}: witness determinants"), s.max_witness_det < st.tol, json!(s.max_witness_det));
            let loops: usize = family.block_cycle_ranks().iter().sum();
            if fillings && m != Order::Infinite {
                let kind = if loops == 1 { DeformationKind::FinitePoints } else { DeformationKind::Curves };
                let got = if loops == 1 { s.witnesses.len() } else { s.branches };
                rep.check(format!("{name}: {kind} with two components"), s.kind == kind && got == 2, json!(got));
            }
            realize_witnesses(rep, &name, &w, &s)?;
            let coll = default_peripherals(&w)?;
            let holds = caprace_check(&w, &coll)?.holds;
            rep.check(format!("{name}: default peripherals"), holds, json!(coll.subsets()));
            rows.push(json!({
                "name": e.name, "m": m.to_string(), "dim": family.dim(), "loops": loops,
                "kind": s.kind.to_string(), "branches": s.branches, "peripherals": coll.subsets(),
                "affine_cores": coll.affine_cores(&w)?,
            }));
        }
        if fillings {
            let f = Family::infer(&e.at(Order::Infinite)?)?;
            let g = f.labeled_polytope()?;
            let filled = f.apex().map(|apex| g.dehn_fill(apex, 7));
            let target = Family::infer(&e.at(Order::Finite(7))?)?.labeled_polytope()?;
            let ok = matches!(&filled, Some(Ok(p)) if p.lattice().faces() == target.lattice().faces());
            rep.check(format!("{}: filling the apex gives the m = 7 polytope", e.name), ok, Value::Null);
        }
    }
    rep.note(format!("{} family members", rows.len()));
    Ok(json!({"entries": rows}))
}

fn appendix(rep: &mut RunReport) -> Result<Value> {
    let mut sym = Vec::new();
    for l in [1.1, 1.5f64.sqrt(), 2.0] {
        let poly = 4.0 * l.powi(4) - 8.0 * l * l + 3.0;
        let got = appendix_b(l)?.cartan().symmetrize().is_some();
        rep.check(format!("lambda = {l:.6}: symmetrizable iff the polynomial vanishes"), got == (poly.abs() < 1e-9), json!(poly));
        sym.push(json!({"lambda": l, "symmetrizable": got, "polynomial": poly}));
    }
    let apex = ["2", "3", "4", "5"];
    let r = appendix_b(2.0)?;
    let cert2 = truncatable(&r, r.vertex(&apex)?.mask)?;
    rep.check("lambda = 2: apex not truncatable", !cert2.truncatable, json!(cert2.span_dim));
    let r = appendix_b(1.5f64.sqrt())?;
    let cert = truncatable(&r, r.vertex(&apex)?.mask)?;
    rep.check("lambda = sqrt(3/2): poles at the apex span a hyperplane", cert.span_dim == r.dim(), json!(cert.span_dim));
    Ok(json!({"symmetrizable": sym, "apex_at_2": cert2, "apex_at_sqrt_3_2": cert}))
}

fn circle(rep: &mut RunReport, st: Settings) -> Result<Value> {
    let mut out = Vec::new();
    for e in tables::table("circle")? {
        let w = e.at(Order::Infinite)?;
        let s = space(&w)?;
        rep.check(format!("{}: circle", e.name), s.kind == DeformationKind::Circle, json!(s.kind.to_string()));
        rep.check(format!("{}: witness determinants", e.name), s.max_witness_det < st.tol, json!(s.max_witness_det));
        if let Some((a1, a2, b)) = s.reduced.normal_form {
            let violation = ((2.0 - a1) * (2.0 - a2) - b).abs();
            rep.check(format!("{}: lambda = mu = 1 excluded", e.name), violation > 0.0, json!(violation));
            rep.check(format!("{}: bounded", e.name), s.bounds.is_some(), json!(s.bounds));
            if e.name == "U" {
                let constant = 8.0 * (PI / 5.0).cos().powi(2);
                rep.check("U: reduced constant", (b - constant).abs() < 1e-12, json!(b));
                rep.check("U: violation at lambda = mu = 1 at least 1.2", violation >= 1.2, json!(violation));
            }
        }
        realize_witnesses(rep, &e.name, &w, &s)?;
        // U has only elliptic vertices; V has a cusp whose group is affine.
        let hyperbolic = caprace_check(&w, &PeripheralCollection::empty())?.holds;
        let cusped = e.name == "V";
        rep.check(format!("{}: hyperbolic group is {}", e.name, !cusped), hyperbolic != cusped, Value::Null);
        let coll = default_peripherals(&w)?;
        let relative = caprace_check(&w, &coll)?.holds;
        rep.check(format!("{}: default peripherals", e.name), relative, json!(coll.subsets()));
        out.push(json!({"name": e.name, "space": s.to_json()}));
    }
    Ok(json!(out))
}

/// Runs the pipeline for a table identifier.
pub fn reproduce(id: &str, st: Settings) -> Result<RunReport> {
    let mut rep = RunReport::new("reproduce", json!({"id": id, "seed": st.seed, "tol": st.tol}));
    rep.findings = match id {
        "cox_gp" => cox_gp(&mut rep, st)?,
        "ex1A" | "ex1B" | "ex1C" | "ex1D" | "ex2" | "mix" => family_table(&mut rep, id, st)?,
        "appendixB" => appendix(&mut rep)?,
        "circle" => circle(&mut rep, st)?,
        other => return Err(UnknownTable(other.into()).into()),
    };
    Ok(rep)
}
