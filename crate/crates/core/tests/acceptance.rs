//! End-to-end acceptance checks, one line per criterion.
//!
//! Each check compares library output with an independent computation
//! (closed forms, direct determinants, eigenvalue signatures or exact group
//! orders) at the stated tolerance.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use coxfill::cartan::{build_special_form, loop_det_reduce, psi_triple, psi_triple_product};
use coxfill::deform::{limit_family, tables, DeformationKind, DeformationSpace, Family, Shape};
use coxfill::diagram_core::catalog::entries_of_rank;
use coxfill::diagram_core::{classify_irreducible, parse_diagram, Kind, Order};
use coxfill::realize::{
    appendix_b, classify_vertices, is_hyperbolic, orbit_explore, realize_cartan, reflections_of, tits_simplex,
    VertexClass,
};
use coxfill::relhyp::{caprace_check, default_peripherals, PeripheralCollection};
use coxfill::{linalg, CartanMatrix, CoxeterSystem};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<(), String>;
type NamedCheck = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn cos_pi(m: u32) -> f64 {
    (PI / m as f64).cos()
}

fn params(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

fn w(i: u8, m: Order) -> CoxeterSystem {
    tables::cox_gp(i).unwrap().bind_one("m", m).unwrap()
}

fn family(w: &CoxeterSystem) -> Family {
    Family::infer(w).unwrap()
}

/// Determinant by cofactor expansion along the first row, independent of the
/// LU-based routine in the library.
fn cofactor_det(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    if n == 1 {
        return m[(0, 0)];
    }
    (0..n)
        .filter(|&j| m[(0, j)] != 0.0)
        .map(|j| {
            let minor = m.clone().remove_row(0).remove_column(j);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * m[(0, j)] * cofactor_det(&minor)
        })
        .sum()
}

fn c1_psi() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (a, b, c) = (rng.gen_range(0.0..PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..PI));
        let direct = 1.0 - a.cos().powi(2) - b.cos().powi(2) - c.cos().powi(2) - 2.0 * a.cos() * b.cos() * c.cos();
        let add = psi_triple(a, b, c);
        let prod = psi_triple_product(a, b, c);
        ensure!((add - prod).abs() < 1e-12, "forms differ at ({a}, {b}, {c}): {add} vs {prod}");
        ensure!((add - direct).abs() < 1e-12, "additive form differs from the definition");
    }
    Ok(())
}

fn c2_det_factorization() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..500 {
        let m: Vec<u32> = (0..6).map(|_| rng.gen_range(3..=9)).collect();
        let text = format!(
            "nodes 1..6; 1-2:{}; 2-3:{}; 1-3:{}; 3-4:{}; 4-5:{}; 5-6:{}; 4-6",
            m[0], m[1], m[2], m[3], m[4], m[5]
        );
        let m64 = rng.gen_range(3..=9u32);
        let text = text.replace("4-6", &format!("4-6:{m64}"));
        let sys = ok(parse_diagram(&text))?;
        let (l, mu) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
        let a = ok(build_special_form(&sys, &params(&[("lambda", l), ("mu", mu)])))?;
        let (c12, c23, c31, c34, c45, c56, c64) =
            (cos_pi(m[0]), cos_pi(m[1]), cos_pi(m[2]), cos_pi(m[3]), cos_pi(m[4]), cos_pi(m[5]), cos_pi(m64));
        let d1 = 1.0 - (c12 * c12 + c23 * c23 + c31 * c31) - c12 * c23 * c31 * (l + 1.0 / l);
        let d2 = 1.0 - (c45 * c45 + c56 * c56 + c64 * c64) - c45 * c56 * c64 * (mu + 1.0 / mu);
        let rhs = d1 * d2 - (1.0 - c12 * c12) * c34 * c34 * (1.0 - c56 * c56);
        let lhs = a.det() / 64.0;
        ensure!((lhs - rhs).abs() < 1e-10, "{text} at λ={l}, μ={mu}: {lhs} vs {rhs}");
    }
    Ok(())
}

fn c3_loop_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 3..=8usize {
        for _ in 0..200 {
            let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.5..1.5)).collect();
            let lambda = rng.gen_range(0.05..20.0);
            let mut m = DMatrix::identity(n, n);
            for i in 0..n - 1 {
                m[(i, i + 1)] = -c[i];
                m[(i + 1, i)] = -c[i];
            }
            m[(0, n - 1)] = -c[n - 1] / lambda;
            m[(n - 1, 0)] = -c[n - 1] * lambda;
            let direct = cofactor_det(&m);
            let (d1, prod) = ok(loop_det_reduce(&c))?;
            let reduced = d1 - prod * (lambda + 1.0 / lambda - 2.0);
            ensure!((direct - reduced).abs() < 1e-10 * direct.abs().max(1.0), "n = {n}: {direct} vs {reduced}");
        }
    }
    Ok(())
}

fn c4_beta_sizes() -> Check {
    for i in [1u8, 2] {
        for m in 3..=6 {
            let s = ok(DeformationSpace::of_family(&family(&w(i, Order::Finite(m)))))?;
            ensure!(s.kind == DeformationKind::Empty, "W{i} at m = {m} is {:?}", s.kind);
        }
        for m in 7..=40 {
            let f = family(&w(i, Order::Finite(m)));
            let s = ok(DeformationSpace::of_family(&f))?;
            ensure!(s.kind == DeformationKind::FinitePoints && s.witnesses.len() == 2, "W{i} at m = {m}: {:?}", s.kind);
            let prod = s.witnesses[0]["lambda"] * s.witnesses[1]["lambda"];
            ensure!((prod - 1.0).abs() < 1e-9, "λ₀λ₁ = {prod} for W{i} at m = {m}");
            for p in &s.witnesses {
                let a = ok(build_special_form(f.system(), p))?;
                ensure!(cofactor_det(a.entries()).abs() < 1e-9, "witness is not a root at m = {m}");
            }
        }
    }
    for m in 3..=20 {
        let s = ok(DeformationSpace::of_family(&family(&w(3, Order::Finite(m)))))?;
        let want = if m == 3 { 4 } else { 2 };
        ensure!(s.kind == DeformationKind::Curves && s.branches == want, "W3 at m = {m}: {:?} {}", s.kind, s.branches);
    }
    Ok(())
}

fn c5_circle() -> Check {
    let u = ok(parse_diagram(tables::U_DIAGRAM))?;
    let f = family(&u);
    let s = ok(DeformationSpace::of_family(&f))?;
    ensure!(s.kind == DeformationKind::Circle, "U is {:?}", s.kind);
    let constant = 8.0 * cos_pi(5).powi(2);
    let (a1, a2, b) = s.reduced.normal_form.ok_or("no normal form")?;
    ensure!((b - constant).abs() < 1e-12, "constant {b} vs {constant}");
    let violation = ((2.0 - a1) * (2.0 - a2) - b).abs();
    ensure!(violation >= 1.2, "λ = μ = 1 violates the equation by only {violation}");
    ensure!(s.witnesses.len() == 64, "{} witnesses", s.witnesses.len());
    // With x, y ≥ 2 and xy = B, each coordinate is at most B/2.
    let bound = constant / 2.0;
    let (xm, ym) = s.bounds.ok_or("no bounds")?;
    ensure!((xm - bound).abs() < 1e-12 && (ym - bound).abs() < 1e-12, "bounds ({xm}, {ym})");
    for p in &s.witnesses {
        let a = ok(build_special_form(f.system(), p))?;
        ensure!(cofactor_det(a.entries()).abs() < 1e-9, "witness {p:?} has det {}", a.det());
        let x = p["lambda"] + 1.0 / p["lambda"];
        let y = p["mu"] + 1.0 / p["mu"];
        ensure!((2.0..=bound + 1e-9).contains(&x) && (2.0..=bound + 1e-9).contains(&y), "witness out of bounds");
    }
    Ok(())
}

fn paper_limit(i: u8, mu: f64) -> DMatrix<f64> {
    let mut a = DMatrix::zeros(6, 6);
    for k in 0..6 {
        a[(k, k)] = 2.0;
    }
    let mut set = |s: usize, t: usize, st: f64, ts: f64| {
        a[(s, t)] = st;
        a[(t, s)] = ts;
    };
    set(0, 1, -1.0, -1.0);
    set(0, 2, -1.0, -1.0);
    set(1, 2, -1.0, -1.0);
    set(3, 4, -1.0, -1.0);
    set(4, 5, -2.0, -2.0);
    match i {
        1 => set(2, 3, -2.0 * cos_pi(3), -2.0 * cos_pi(3)),
        2 => set(2, 3, -2.0 * cos_pi(5), -2.0 * cos_pi(5)),
        _ => {
            set(2, 3, -1.0, -1.0);
            set(3, 5, -1.0 / mu, -mu);
        }
    }
    a
}

fn c6_limits() -> Check {
    for (i, mu) in [(1u8, None), (2, None), (3, Some(1.0)), (3, Some(2.0))] {
        let r = ok(limit_family(i, mu))?;
        ensure!(r.monotone && r.sweep.iter().all(|p| p.1 > 1.0), "W{i}: λ(m) not decreasing to 1");
        let target = paper_limit(i, mu.unwrap_or(1.0));
        let diff = linalg::max_abs_diff(r.extrapolated.entries(), &target);
        ensure!(diff < 1e-7, "W{i}: extrapolated matrix differs by {diff:.3e}");
        ensure!(linalg::max_abs_diff(r.limit.entries(), &target) < 1e-12, "W{i}: limit matrix mismatch");
        let real = ok(realize_cartan(&r.limit))?;
        let fam = family(&w(i, Order::Infinite));
        ensure!(matches!(fam.shape(), Shape::Pyramid { .. }), "W{i}∞ is not a pyramid family");
        let target = ok(fam.labeled_polytope())?;
        ensure!(real.vertices().len() == 7, "W{i}∞ realizes {} vertices", real.vertices().len());
        ensure!(real.lattice().faces() == target.lattice().faces(), "W{i}∞ lattice differs from the pyramid over the prism");
    }
    Ok(())
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// f-vector of `Δ_a × Δ_b` from the product of face counts.
fn product_f_vector(a: usize, b: usize) -> Vec<usize> {
    (0..=a + b)
        .map(|k| (0..=k).map(|i| binom(a + 1, i + 1) * binom(b + 1, k - i + 1)).sum())
        .collect()
}

fn round_trip(a: &CartanMatrix, expected_f: &[usize]) -> Check {
    let r = ok(realize_cartan(a))?;
    let back = r.forms() * r.poles().transpose();
    let rebuilt = ok(CartanMatrix::new(a.system().clone(), back))?;
    let (p, q) = (a.cyclic_products(), rebuilt.cyclic_products());
    ensure!(p.len() == q.len(), "cyclic product sets differ");
    for (k, v) in &p {
        let u = q.get(k).ok_or("missing cycle")?;
        ensure!((u - v).abs() < 1e-9 * v.abs().max(1.0), "cyclic product {k}: {v} vs {u}");
    }
    let target = ok(ok(Family::infer(a.system()))?.labeled_polytope())?;
    ensure!(r.lattice().faces() == target.lattice().faces(), "realized lattice differs from the target");
    ensure!(r.lattice().f_vector() == expected_f, "f-vector {:?}", r.lattice().f_vector());
    let refl = ok(reflections_of(&r))?;
    ensure!(refl.relation_residual < 1e-7, "relation residual {}", refl.relation_residual);
    Ok(())
}

fn c7_round_trip() -> Check {
    let f4 = product_f_vector(2, 2);
    ensure!(f4 == vec![9, 18, 15, 6, 1], "product f-vector oracle {f4:?}");
    let mut cases: Vec<(CoxeterSystem, Vec<BTreeMap<String, f64>>)> = Vec::new();
    for i in [1u8, 2] {
        for m in 7..=40 {
            let f = family(&w(i, Order::Finite(m)));
            cases.push((f.system().clone(), ok(DeformationSpace::of_family(&f))?.witnesses));
        }
    }
    for m in 3..=20 {
        let f = family(&w(3, Order::Finite(m)));
        cases.push((f.system().clone(), ok(DeformationSpace::of_family(&f))?.witnesses));
    }
    let u = ok(parse_diagram(tables::U_DIAGRAM))?;
    cases.push((u.clone(), ok(DeformationSpace::of_family(&family(&u)))?.witnesses));
    let mut count = 0;
    for (sys, wit) in &cases {
        for p in wit {
            round_trip(&ok(build_special_form(sys, p))?, &f4)?;
            count += 1;
        }
    }
    for id in ["ex1B", "ex1C", "ex1D"] {
        for e in ok(tables::table(id))? {
            let sys = ok(e.at(Order::Finite(9)))?;
            let s = ok(DeformationSpace::of_family(&family(&sys)))?;
            ensure!(!s.witnesses.is_empty(), "{} has no witness", e.name);
            let d = sys.rank() - 2;
            for p in s.witnesses.iter().take(2) {
                round_trip(&ok(build_special_form(&sys, p))?, &product_f_vector(2, d - 2))
                    .map_err(|m| format!("{}: {m}", e.name))?;
                count += 1;
            }
        }
    }
    ensure!(count > 100, "only {count} witnesses");
    Ok(())
}

fn classes(i: u8, m: Order) -> std::result::Result<[usize; 3], String> {
    let f = family(&w(i, m));
    let s = ok(DeformationSpace::of_family(&f))?;
    let a = ok(build_special_form(f.system(), &s.witnesses[0]))?;
    let g = ok(classify_vertices(&ok(realize_cartan(&a))?))?;
    Ok([g.count(VertexClass::Elliptic), g.count(VertexClass::Parabolic), g.count(VertexClass::Loxodromic)])
}

fn c8_vertex_geometry() -> Check {
    for m in [7, 8, 12, 30] {
        ensure!(classes(1, Order::Finite(m))? == [9, 0, 0], "P1 at m = {m}: {:?}", classes(1, Order::Finite(m))?);
        ensure!(classes(2, Order::Finite(m))? == [7, 0, 2], "P2 at m = {m}: {:?}", classes(2, Order::Finite(m))?);
    }
    ensure!(classes(1, Order::Infinite)? == [6, 1, 0], "P1∞: {:?}", classes(1, Order::Infinite)?);
    ensure!(classes(2, Order::Infinite)? == [4, 1, 2], "P2∞: {:?}", classes(2, Order::Infinite)?);
    Ok(())
}

fn c9_appendix_b() -> Check {
    for l in [1.1, 1.5f64.sqrt(), 2.0] {
        let poly = 4.0 * l.powi(4) - 8.0 * l * l + 3.0;
        let r = ok(appendix_b(l))?;
        let sym = r.cartan().symmetrize().is_some();
        ensure!(sym == (poly.abs() < 1e-9), "λ = {l}: symmetrizable {sym}, polynomial {poly}");
    }
    let r = ok(appendix_b(2.0))?;
    let apex = ok(r.vertex(&["2", "3", "4", "5"]))?.mask;
    ensure!(!ok(coxfill::realize::truncatable(&r, apex))?.truncatable, "apex truncatable at λ = 2");
    let r = ok(appendix_b(1.5f64.sqrt()))?;
    let apex = ok(r.vertex(&["2", "3", "4", "5"]))?.mask;
    let cert = ok(coxfill::realize::truncatable(&r, apex))?;
    ensure!(cert.span_dim == r.dim(), "pole span dimension {} at λ = √(3/2)", cert.span_dim);
    Ok(())
}

/// Kind from the Gram signature: positive definite, positive semidefinite with
/// a one-dimensional kernel, or one negative eigenvalue with every proper
/// principal submatrix positive definite.
fn signature_kind(sys: &CoxeterSystem) -> Kind {
    let g = sys.gram_matrix();
    let n = g.nrows();
    let ev = g.clone().symmetric_eigen().eigenvalues;
    let neg = ev.iter().filter(|&&x| x < -1e-9).count();
    let zero = ev.iter().filter(|&&x| x.abs() <= 1e-9).count();
    if neg == 0 && zero == 0 {
        return Kind::Spherical;
    }
    if neg == 0 && zero == 1 {
        return Kind::Affine;
    }
    let proper_pd = (0..n).all(|s| {
        let keep: Vec<usize> = (0..n).filter(|&t| t != s).collect();
        let sub = linalg::principal(&g, &keep);
        sub.symmetric_eigen().eigenvalues.iter().all(|&x| x > 1e-9)
    });
    if neg == 1 && zero == 0 && proper_pd {
        Kind::Lanner
    } else {
        Kind::Large
    }
}

fn c10_catalog() -> Check {
    let mut checked = 0;
    for n in 4..=9 {
        for e in entries_of_rank(n) {
            let label = ok(classify_irreducible(&e.system))?;
            ensure!(label.kind == e.kind, "{}: got {:?}", e.name, label.kind);
            ensure!(label.catalog_name.as_deref() == Some(e.name.as_str()), "{}: named {:?}", e.name, label.catalog_name);
            ensure!(signature_kind(&e.system) == e.kind, "{}: Gram signature disagrees", e.name);
            checked += 1;
        }
    }
    for p in 3..=12u32 {
        let sys = ok(parse_diagram(&format!("nodes 1..2; 1-2:{p}")))?;
        ensure!(ok(classify_irreducible(&sys))?.kind == Kind::Spherical, "I2({p})");
        checked += 1;
    }
    let sys = ok(parse_diagram("nodes 1..2; 1-2:inf"))?;
    ensure!(ok(classify_irreducible(&sys))?.kind == Kind::Affine, "tilde_A_1");
    for p in 3..=12u32 {
        for q in p..=12u32 {
            let sys = ok(parse_diagram(&format!("nodes 1..3; 1-2:{p}; 2-3:{q}")))?;
            let s = 1.0 / p as f64 + 1.0 / q as f64;
            let want = if (s - 0.5).abs() < 1e-12 {
                Kind::Affine
            } else if s > 0.5 {
                Kind::Spherical
            } else {
                Kind::Lanner
            };
            ensure!(ok(classify_irreducible(&sys))?.kind == want, "chain ({p},{q})");
            ensure!(signature_kind(&sys) == want, "chain ({p},{q}) signature");
            for r in q..=12u32 {
                let sys = ok(parse_diagram(&format!("nodes 1..3; 1-2:{p}; 2-3:{q}; 1-3:{r}")))?;
                let s = 1.0 / p as f64 + 1.0 / q as f64 + 1.0 / r as f64;
                let want = if (s - 1.0).abs() < 1e-12 { Kind::Affine } else { Kind::Lanner };
                ensure!(ok(classify_irreducible(&sys))?.kind == want, "triangle ({p},{q},{r})");
                ensure!(signature_kind(&sys) == want, "triangle ({p},{q},{r}) signature");
                checked += 1;
            }
            checked += 1;
        }
    }
    ensure!(checked > 300, "only {checked} diagrams");
    Ok(())
}

fn sorted(mut v: Vec<String>) -> Vec<String> {
    v.sort();
    v
}

fn c11_relhyp() -> Check {
    let u = ok(parse_diagram(tables::U_DIAGRAM))?;
    ensure!(ok(caprace_check(&u, &PeripheralCollection::empty()))?.holds, "U is not hyperbolic");
    let w17 = w(1, Order::Finite(7));
    let bad = ok(PeripheralCollection::new(&[vec!["1", "2", "3"]]))?;
    let v = ok(caprace_check(&w17, &bad))?;
    ensure!(!v.holds && v.violates(4), "condition 4 not reported: {v:?}");
    let good = ok(PeripheralCollection::new(&[vec!["1", "2", "3", "5", "6"]]))?;
    ensure!(ok(caprace_check(&w17, &good))?.holds, "{{1,2,3,5,6}} rejected");
    for id in ["ex1A", "ex1B", "ex1C", "ex1D"] {
        for e in ok(tables::table(id))? {
            for m in [Order::Finite(7), Order::Infinite] {
                let sys = ok(e.at(m))?;
                let d = sys.rank() - 2;
                let p = ok(default_peripherals(&sys))?;
                ensure!(ok(caprace_check(&sys, &p))?.holds, "{} at {m}: default collection fails", e.name);
                let cores = ok(p.affine_cores(&sys))?;
                let loop_core = format!("tilde_A_{}", d - 2);
                let mut want = vec![loop_core.clone()];
                if m == Order::Infinite {
                    want.push("tilde_A_1".into());
                }
                // The peripheral carrying the loop block is the filling cusp;
                // any other member must be the group of a parabolic vertex,
                // that is a single irreducible affine subsystem of rank d.
                let cusp: Vec<usize> = (0..cores.len()).filter(|&k| cores[k].contains(&loop_core)).collect();
                ensure!(cusp.len() == 1, "{} at {m}: {} peripherals with a {loop_core} core", e.name, cusp.len());
                ensure!(sorted(cores[cusp[0]].clone()) == sorted(want.clone()), "{} at {m}: cores {cores:?}, want {want:?}", e.name);
                for (k, t) in p.subsets().iter().enumerate() {
                    if k != cusp[0] {
                        let sub = ok(sys.subsystem(t))?;
                        ensure!(
                            t.len() == d && sub.is_irreducible() && sub.is_affine(),
                            "{} at {m}: extra peripheral {t:?} is not a parabolic vertex group",
                            e.name
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

fn c12_dehn_fill() -> Check {
    let v = ok(parse_diagram(tables::V_DIAGRAM))?;
    let g = ok(family(&v).labeled_polytope())?;
    let vert = ok(g.vertex(&["2", "3", "4", "5"]))?;
    let link = ok(v.subsystem(&["2", "3", "4", "5"]))?;
    ensure!(ok(classify_irreducible(&link))?.catalog_name.as_deref() == Some("tilde_C_3"), "link is not C̃₃");
    ensure!(g.dehn_fill(vert, 7).is_err(), "C̃₃ vertex accepted");
    let mut count = 0;
    for id in ["ex1A", "ex1B", "ex1C", "ex1D"] {
        for e in ok(tables::table(id))? {
            let f = family(&ok(e.at(Order::Infinite))?);
            let apex = f.apex().ok_or(format!("{} has no apex", e.name))?;
            let g = ok(f.labeled_polytope())?;
            let filled = g.dehn_fill(apex, 7).map_err(|x| format!("{}: {x}", e.name))?;
            ensure!(filled.lattice().faces() == family(&ok(e.at(Order::Finite(7)))?).labeled_polytope().unwrap().lattice().faces(), "{}: filled lattice differs", e.name);
            count += 1;
        }
    }
    ensure!(count == 26, "{count} apices");
    Ok(())
}

fn c13_orbit() -> Check {
    let start = Instant::now();
    let f = family(&w(1, Order::Finite(7)));
    let s = ok(DeformationSpace::of_family(&f))?;
    let r = ok(realize_cartan(&ok(build_special_form(f.system(), &s.witnesses[0]))?))?;
    let o = orbit_explore(&r, 4, 10_000, 0);
    ensure!(o.sampled_pairs == 10_000, "{} pairs sampled", o.sampled_pairs);
    ensure!(o.violations == 0, "{} overlap violations", o.violations);
    let secs = start.elapsed().as_secs_f64();
    ensure!(secs <= 10.0, "took {secs:.1}s");
    for k in 2..=8u32 {
        let sys = ok(parse_diagram(&format!("nodes 1..2; 1-2:{k}")))?;
        let r = ok(tits_simplex(&sys).realization())?;
        let o = orbit_explore(&r, 2 * k as usize + 2, 1000, 0);
        ensure!(o.len() == 2 * k as usize, "I2({k}) has {} elements", o.len());
    }
    Ok(())
}

fn c14_hyperbolic() -> Check {
    let limit = |i: u8, mu: Option<f64>| -> std::result::Result<bool, String> {
        Ok(is_hyperbolic(&ok(realize_cartan(&ok(limit_family(i, mu))?.limit))?))
    };
    ensure!(limit(1, None)?, "A1∞ not hyperbolic");
    ensure!(limit(2, None)?, "A2∞ not hyperbolic");
    ensure!(limit(3, Some(1.0))?, "A3∞ at μ = 1 not hyperbolic");
    for mu in [0.5, 2.0] {
        ensure!(!limit(3, Some(mu))?, "A3∞ at μ = {mu} reported hyperbolic");
    }
    Ok(())
}

fn main() {
    let checks: Vec<NamedCheck> = vec![
        ("1 psi identity", c1_psi),
        ("2 determinant factorization", c2_det_factorization),
        ("3 loop reduction", c3_loop_reduction),
        ("4 deformation space sizes", c4_beta_sizes),
        ("5 circle space", c5_circle),
        ("6 limits", c6_limits),
        ("7 realization round trip", c7_round_trip),
        ("8 vertex geometry", c8_vertex_geometry),
        ("9 non-truncatable example", c9_appendix_b),
        ("10 catalog regression", c10_catalog),
        ("11 relative hyperbolicity", c11_relhyp),
        ("12 dehn filling precondition", c12_dehn_fill),
        ("13 orbit sanity", c13_orbit),
        ("14 hyperbolicity boundary", c14_hyperbolic),
    ];
    let total = Instant::now();
    let mut failed = 0;
    for (name, f) in checks {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let ms = start.elapsed().as_millis();
        match result {
            Ok(()) => println!("PASS criterion {name} ({ms} ms)"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name} ({ms} ms): {msg}");
            }
        }
    }
    println!("acceptance: {failed} failed, total {:.1}s", total.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
