//! One function per subcommand, each returning a [`RunReport`].

use std::path::Path;

use anyhow::{bail, Result};
use coxfill::deform::limit_template;
use coxfill::diagram_core::classify_irreducible;
use coxfill::realize::{
    classify_vertices, is_hyperbolic, orbit_explore, realize_cartan, reflections_of, to_ply, truncatable,
    truncate_geometric, Realization, VertexClass, VertexGeometry,
};
use coxfill::relhyp::{affine_subsystems, caprace_check, default_peripherals, PeripheralCollection};
use coxfill::{CoxeterSystem, DeformationKind, DeformationSpace, Family, Order};
use serde_json::{json, Value};

use crate::input::{self, Input, UsageError};
use crate::report::RunReport;

/// Residual allowed in the Coxeter relations of reflection matrices.
pub const RELATION_TOL: f64 = 1e-7;

/// Settings shared by all subcommands.
#[derive(Clone, Copy, Debug)]
pub struct Settings {
    /// Sampling seed.
    pub seed: u64,
    /// Determinant tolerance for witnesses.
    pub tol: f64,
    /// Longest word explored in orbit computations.
    pub max_word_length: usize,
}

fn path_json(p: &Path) -> Value {
    json!(p.display().to_string())
}

fn m_json(m: Option<Order>) -> Value {
    m.map_or(Value::Null, |m| json!(m.to_string()))
}

/// Class counts and per-vertex classes.
pub fn geometry_json(g: &VertexGeometry) -> Value {
    let vertices: Vec<Value> =
        g.vertices.iter().map(|v| json!({"facets": v.facets, "class": format!("{:?}", v.class)})).collect();
    json!({
        "elliptic": g.count(VertexClass::Elliptic),
        "parabolic": g.count(VertexClass::Parabolic),
        "loxodromic": g.count(VertexClass::Loxodromic),
        "perfect": g.perfect,
        "quasi_perfect": g.quasi_perfect,
        "two_perfect": g.two_perfect,
        "vertices": vertices,
    })
}

/// Classification of the whole system and of each component.
pub fn classify(path: &Path, m: Option<Order>) -> Result<RunReport> {
    let mut rep = RunReport::new("classify", json!({"path": path_json(path), "m": m_json(m)}));
    let w = input::system(&input::load(path)?, m)?;
    if w.rank() == 0 {
        bail!(UsageError("the diagram has no nodes".into()));
    }
    let components: Vec<Value> = w
        .classify_components()
        .into_iter()
        .map(|(g, l)| json!({"generators": g, "kind": l.kind.to_string(), "catalog_name": l.catalog_name}))
        .collect();
    let irreducible = w.is_irreducible();
    let whole = if irreducible { Some(classify_irreducible(&w)?) } else { None };
    let affine = affine_subsystems(&w, 1)?;
    rep.findings = json!({
        "diagram": w.to_dsl(),
        "rank": w.rank(),
        "irreducible": irreducible,
        "kind": whole.as_ref().map(|l| l.kind.to_string()),
        "catalog_name": whole.as_ref().and_then(|l| l.catalog_name.clone()),
        "components": components,
        "affine_subsystems": affine.len(),
        "largest_affine_subsystem": affine.iter().map(|t| t.len()).max().unwrap_or(0),
    });
    match &whole {
        Some(l) => rep.note(format!("{l} (irreducible), rank {}", w.rank())),
        None => {
            for (g, l) in w.classify_components() {
                rep.note(format!("component {{{}}}: {l}", g.join(",")));
            }
        }
    }
    Ok(rep)
}

fn deform_one(rep: &mut RunReport, w: &CoxeterSystem, mu: Option<f64>, tol: f64) -> Result<Value> {
    let family = Family::infer(w)?;
    let space = DeformationSpace::of_family(&family)?;
    let mut out = space.to_json();
    rep.check(
        format!("witness determinants {}", w.to_dsl()),
        space.max_witness_det < tol,
        json!({"max_abs_det": space.max_witness_det, "tol": tol}),
    );
    if let Some(mu) = mu {
        if space.reduced.normal_form.is_some() && space.kind != DeformationKind::Empty {
            let lambdas = space.lambdas_at(mu)?;
            out["at_mu"] = json!({"mu": mu, "lambdas": lambdas});
        }
    }
    Ok(out)
}

/// Deformation space of a diagram at each requested label.
pub fn deform(path: &Path, ms: &[Order], mu: Option<f64>, s: Settings) -> Result<RunReport> {
    let ms_json: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
    let mut rep = RunReport::new("deform", json!({"path": path_json(path), "m": ms_json, "mu": mu}));
    let template = match input::load(path)? {
        Input::Diagram(t) => t,
        Input::Cartan(_) => bail!(UsageError("deform needs a diagram file".into())),
    };
    let mut per_m = Vec::new();
    if template.unbound().is_empty() {
        let w = input::bind(&template, None)?;
        let out = deform_one(&mut rep, &w, mu, s.tol)?;
        rep.note(format!("{} with {} branch(es)", out["kind"].as_str().unwrap_or("?"), out["branches"]));
        per_m.push(json!({"m": Value::Null, "space": out}));
    } else {
        for &m in ms {
            let w = input::bind(&template, Some(m))?;
            let out = deform_one(&mut rep, &w, mu, s.tol)?;
            rep.note(format!("m = {m}: {} with {} branch(es)", out["kind"].as_str().unwrap_or("?"), out["branches"]));
            per_m.push(json!({"m": m.to_string(), "space": out}));
        }
    }
    rep.findings = json!(per_m);
    Ok(rep)
}

/// Limit of a family as its label `m` grows.
pub fn limit(path: &Path, mu: Option<f64>, m_max: u32) -> Result<RunReport> {
    let mut rep = RunReport::new("limit", json!({"path": path_json(path), "mu": mu, "m_max": m_max}));
    let template = match input::load(path)? {
        Input::Diagram(t) => t,
        Input::Cartan(_) => bail!(UsageError("limit needs a diagram file".into())),
    };
    let lim = limit_template(&template, mu, m_max)?;
    let mut out = lim.to_json();
    rep.check("lambda decreasing to 1", lim.monotone, json!(lim.sweep.len()));
    rep.check("extrapolation matches the limit", lim.max_entry_diff < 1e-7, json!(lim.max_entry_diff));
    let real = realize_cartan(&lim.limit)?;
    let hyperbolic = is_hyperbolic(&real);
    out["realized_vertices"] = json!(real.vertices().len());
    out["f_vector"] = json!(real.lattice().f_vector());
    out["hyperbolic"] = json!(hyperbolic);
    rep.check(
        "predicted vertices are realized",
        real.vertices().len() == lim.predicted_vertices(),
        json!({"predicted": lim.predicted_vertices(), "realized": real.vertices().len()}),
    );
    rep.note(format!(
        "limit differs from extrapolation by {:.2e}; {} vertices; hyperbolic: {hyperbolic}",
        lim.max_entry_diff,
        real.vertices().len()
    ));
    rep.findings = out;
    Ok(rep)
}

fn realization_checks(rep: &mut RunReport, r: &Realization) -> Result<Value> {
    let refl = reflections_of(r)?;
    rep.check("coxeter relations", refl.relation_residual < RELATION_TOL, json!(refl.relation_residual));
    if let Ok(family) = Family::infer(r.system()) {
        if let Ok(target) = family.labeled_polytope() {
            rep.check("face lattice matches the family polytope", r.lattice().faces() == target.lattice().faces(), json!(r.lattice().f_vector()));
        }
    }
    let g = classify_vertices(r)?;
    rep.note(format!(
        "dimension {}, f-vector {:?}; {} elliptic, {} parabolic, {} loxodromic vertices",
        r.dim(),
        r.lattice().f_vector(),
        g.count(VertexClass::Elliptic),
        g.count(VertexClass::Parabolic),
        g.count(VertexClass::Loxodromic)
    ));
    Ok(json!({
        "realization": r.to_json(),
        "geometry": geometry_json(&g),
        "hyperbolic": is_hyperbolic(r),
        "involution_residual": refl.involution_residual,
        "relation_residual": refl.relation_residual,
    }))
}

/// Realization of a diagram witness or a Cartan matrix dump.
pub fn realize(path: &Path, m: Option<Order>, witness: usize, mu: Option<f64>) -> Result<RunReport> {
    let inputs = json!({"path": path_json(path), "m": m_json(m), "witness": witness, "mu": mu});
    let mut rep = RunReport::new("realize", inputs);
    let a = input::cartan(&input::load(path)?, m, witness, mu)?;
    let r = realize_cartan(&a)?;
    rep.findings = realization_checks(&mut rep, &r)?;
    Ok(rep)
}

/// Bounded orbit exploration, with an optional PLY export of the tiles.
pub fn orbit(
    path: &Path,
    m: Option<Order>,
    witness: usize,
    samples: usize,
    out: Option<&Path>,
    s: Settings,
) -> Result<RunReport> {
    let inputs = json!({
        "path": path_json(path), "m": m_json(m), "witness": witness, "samples": samples,
        "seed": s.seed, "max_word_length": s.max_word_length,
    });
    let mut rep = RunReport::new("orbit", inputs);
    let a = input::cartan(&input::load(path)?, m, witness, None)?;
    let r = realize_cartan(&a)?;
    let o = orbit_explore(&r, s.max_word_length, samples, s.seed);
    rep.check("tiles are disjoint on samples", o.violations == 0, json!({"pairs": o.sampled_pairs, "violations": o.violations}));
    if let Some(p) = out {
        std::fs::write(p, to_ply(&r, &o)?)?;
        rep.note(format!("wrote {}", p.display()));
    }
    rep.note(format!("{} elements up to length {}; {} overlap(s)", o.len(), s.max_word_length, o.violations));
    rep.findings = o.to_json();
    Ok(rep)
}

fn parse_subsets(spec: &str) -> Vec<Vec<String>> {
    spec.split(';')
        .map(|t| t.split(',').map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect::<Vec<_>>())
        .filter(|t| !t.is_empty())
        .collect()
}

/// Relative hyperbolicity check against a given or default peripheral collection.
pub fn relhyp(path: &Path, m: Option<Order>, peripherals: Option<&str>) -> Result<RunReport> {
    let inputs = json!({"path": path_json(path), "m": m_json(m), "peripherals": peripherals});
    let mut rep = RunReport::new("relhyp", inputs);
    let w = input::system(&input::load(path)?, m)?;
    let coll = match peripherals {
        Some(spec) => PeripheralCollection::new(&parse_subsets(spec))?,
        None => default_peripherals(&w)?,
    };
    let verdict = caprace_check(&w, &coll)?;
    rep.check("relatively hyperbolic", verdict.holds, verdict.to_json());
    rep.findings = json!({
        "peripherals": coll.subsets(),
        "affine_cores": coll.affine_cores(&w)?,
        "abelian_ranks": coll.abelian_ranks(&w)?,
        "verdict": verdict.to_json(),
    });
    for v in &verdict.violations {
        rep.note(format!("condition {} fails: {:?}", v.condition, v.witnesses));
    }
    rep.note(format!("{} peripheral subgroup(s); verdict: {}", coll.len(), verdict.holds));
    Ok(rep)
}

/// Truncates the listed vertices one after another.
pub fn truncate(path: &Path, m: Option<Order>, witness: usize, vertices: &[String]) -> Result<RunReport> {
    let inputs = json!({"path": path_json(path), "m": m_json(m), "witness": witness, "vertices": vertices});
    let mut rep = RunReport::new("truncate", inputs);
    let a = input::cartan(&input::load(path)?, m, witness, None)?;
    let mut r = realize_cartan(&a)?;
    let mut certificates = Vec::new();
    for spec in vertices {
        let names: Vec<&str> = spec.split(',').map(str::trim).collect();
        let mask = r.vertex(&names)?.mask;
        let cert = truncatable(&r, mask)?;
        let ok = rep.check(format!("vertex {spec} truncatable"), cert.truncatable, json!(cert.span_dim));
        certificates.push(json!({"vertex": names, "certificate": cert}));
        if !ok {
            rep.note(format!("vertex {spec} is not truncatable"));
            break;
        }
        r = truncate_geometric(&r, mask)?;
    }
    let mut out = realization_checks(&mut rep, &r)?;
    out["certificates"] = json!(certificates);
    rep.findings = out;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_lists() {
        assert_eq!(parse_subsets("1,2,3; 5,6;"), vec![vec!["1", "2", "3"], vec!["5", "6"]]);
        assert!(parse_subsets("").is_empty());
    }
}
