//! Relative hyperbolicity of Coxeter groups with respect to standard subgroups.
//!
//! The check evaluates four conditions on a collection `𝒯` of subsets of `S`:
//!
//! 1. every affine subsystem of rank at least 3 lies in some `T ∈ 𝒯`;
//! 2. every pair of perpendicular irreducible non-spherical subsystems lies
//!    jointly in some `T`;
//! 3. distinct members of `𝒯` meet in spherical subsystems;
//! 4. for each `T` and each irreducible non-spherical `U ⊆ T`, `U^⊥ ⊆ T`.
//!
//! Every subset of `S` is enumerated, so systems are limited to 16 generators.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::bits;
use crate::diagram_core::{classify_irreducible, CoxeterSystem, Kind, Order};
use crate::error::{Error, Result};

/// Largest system accepted by the exhaustive subset scan.
pub const MAX_GENERATORS: usize = 16;

/// A collection of standard subgroups, given by generator subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeripheralCollection {
    subsets: Vec<Vec<String>>,
}

impl PeripheralCollection {
    /// Collection from generator-name subsets; each must be nonempty and all distinct.
    pub fn new<S: AsRef<str>>(subsets: &[Vec<S>]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for t in subsets {
            let set: BTreeSet<String> = t.iter().map(|s| s.as_ref().to_string()).collect();
            if set.is_empty() {
                return Err(Error::InvalidInput("peripheral subsets must be nonempty".into()));
            }
            if !seen.insert(set.clone()) {
                return Err(Error::InvalidInput("peripheral subsets must be distinct".into()));
            }
            out.push(set.into_iter().collect());
        }
        Ok(Self { subsets: out })
    }

    /// The empty collection.
    pub fn empty() -> Self {
        Self { subsets: Vec::new() }
    }

    fn from_masks(w: &CoxeterSystem, masks: &[u64]) -> Self {
        Self { subsets: masks.iter().map(|&m| names(w, m)).collect() }
    }

    /// Subsets by generator name.
    pub fn subsets(&self) -> &[Vec<String>] {
        &self.subsets
    }

    /// Number of subsets.
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    /// Whether the collection is empty.
    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    fn masks(&self, w: &CoxeterSystem) -> Result<Vec<u64>> {
        self.subsets.iter().map(|t| Ok(bits::from_indices(w.indices_of(t)?))).collect()
    }

    /// Catalog names of the affine components of each subset, in subset order.
    pub fn affine_cores(&self, w: &CoxeterSystem) -> Result<Vec<Vec<String>>> {
        self.subsets
            .iter()
            .map(|t| {
                let sub = w.subsystem(t)?;
                Ok(sub
                    .classify_components()
                    .into_iter()
                    .filter(|(_, l)| l.kind == Kind::Affine)
                    .map(|(_, l)| l.catalog_name.unwrap_or_else(|| "affine".into()))
                    .collect())
            })
            .collect()
    }

    /// Virtual abelian rank of each subgroup: `Σ (|C| − 1)` over its affine components.
    pub fn abelian_ranks(&self, w: &CoxeterSystem) -> Result<Vec<usize>> {
        self.subsets
            .iter()
            .map(|t| {
                let sub = w.subsystem(t)?;
                Ok(sub
                    .classify_components()
                    .into_iter()
                    .filter(|(_, l)| l.kind == Kind::Affine)
                    .map(|(c, _)| c.len() - 1)
                    .sum())
            })
            .collect()
    }
}

/// One violated condition with its first witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// Condition number, 1 to 4.
    pub condition: u8,
    /// Witness subsets by generator name.
    pub witnesses: Vec<Vec<String>>,
}

/// Outcome of [`caprace_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelHypVerdict {
    /// Whether all four conditions hold.
    pub holds: bool,
    /// Violated conditions in increasing order.
    pub violations: Vec<Violation>,
}

impl RelHypVerdict {
    /// Whether condition `k` is violated.
    pub fn violates(&self, k: u8) -> bool {
        self.violations.iter().any(|v| v.condition == k)
    }

    /// JSON form with per-condition status and witnesses.
    pub fn to_json(&self) -> serde_json::Value {
        let conditions: Vec<serde_json::Value> = (1..=4u8)
            .map(|k| {
                let v = self.violations.iter().find(|v| v.condition == k);
                json!({"condition": k, "holds": v.is_none(), "witnesses": v.map(|v| v.witnesses.clone())})
            })
            .collect();
        json!({"holds": self.holds, "conditions": conditions})
    }
}

fn names(w: &CoxeterSystem, mask: u64) -> Vec<String> {
    bits::indices(mask).into_iter().map(|i| w.generators()[i].clone()).collect()
}

/// Classification of every subset of the generators.
struct SubsetTable<'a> {
    w: &'a CoxeterSystem,
    /// Kind of each connected subset; `None` for empty or disconnected ones.
    connected: Vec<Option<Kind>>,
    spherical: Vec<bool>,
    affine: Vec<bool>,
}

impl<'a> SubsetTable<'a> {
    fn new(w: &'a CoxeterSystem) -> Result<Self> {
        let n = w.rank();
        if n > MAX_GENERATORS {
            return Err(Error::InvalidInput(format!("at most {MAX_GENERATORS} generators are supported")));
        }
        let size = 1usize << n;
        let mut connected = vec![None; size];
        for mask in 1..size as u64 {
            if is_connected(w, mask) {
                let sub = w.subsystem_indices(&bits::indices(mask));
                connected[mask as usize] = Some(classify_irreducible(&sub)?.kind);
            }
        }
        let mut spherical = vec![false; size];
        let mut affine = vec![false; size];
        spherical[0] = true;
        for mask in 1..size as u64 {
            let comps = components(w, mask);
            let kinds: Vec<Kind> = comps.iter().map(|&c| connected[c as usize].expect("components are connected")).collect();
            spherical[mask as usize] = kinds.iter().all(|&k| k == Kind::Spherical);
            affine[mask as usize] = kinds.iter().all(|&k| k == Kind::Affine);
        }
        Ok(Self { w, connected, spherical, affine })
    }

    fn irreducible_nonspherical(&self) -> Vec<u64> {
        (1..self.connected.len() as u64)
            .filter(|&m| matches!(self.connected[m as usize], Some(k) if k != Kind::Spherical))
            .collect()
    }

    fn perp(&self, mask: u64) -> u64 {
        perp_mask(self.w, mask)
    }

    /// Pairs `(U₁, U₂)` of perpendicular irreducible non-spherical subsets with `U₁ < U₂`.
    fn perpendicular_pairs(&self) -> Vec<(u64, u64)> {
        let irr = self.irreducible_nonspherical();
        let mut out = Vec::new();
        for &u in &irr {
            let p = self.perp(u);
            for &v in &irr {
                if u < v && bits::is_subset(v, p) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

fn components(w: &CoxeterSystem, mask: u64) -> Vec<u64> {
    let mut rest = mask;
    let mut out = Vec::new();
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut stack = vec![start.trailing_zeros() as usize];
        while let Some(v) = stack.pop() {
            for u in w.neighbors(v) {
                let b = bits::bit(u);
                if mask & b != 0 && comp & b == 0 {
                    comp |= b;
                    stack.push(u);
                }
            }
        }
        out.push(comp);
        rest &= !comp;
    }
    out
}

fn is_connected(w: &CoxeterSystem, mask: u64) -> bool {
    mask != 0 && components(w, mask).len() == 1
}

fn perp_mask(w: &CoxeterSystem, mask: u64) -> u64 {
    let idx = bits::indices(mask);
    (0..w.rank())
        .filter(|&s| mask & bits::bit(s) == 0 && idx.iter().all(|&t| w.order(s, t) == Order::Finite(2)))
        .fold(0, |m, s| m | bits::bit(s))
}

/// All subsets `T` with every component irreducible affine and `|T| ≥ min_rank`,
/// by generator name, in increasing mask order.
pub fn affine_subsystems(w: &CoxeterSystem, min_rank: usize) -> Result<Vec<Vec<String>>> {
    if min_rank == 0 {
        return Err(Error::InvalidInput("min_rank must be at least 1".into()));
    }
    let table = SubsetTable::new(w)?;
    Ok((1..table.affine.len() as u64)
        .filter(|&m| table.affine[m as usize] && bits::count(m) >= min_rank)
        .map(|m| names(w, m))
        .collect())
}

/// Generators outside `T` commuting with every generator of `T`.
pub fn perp<S: AsRef<str>>(w: &CoxeterSystem, t: &[S]) -> Result<Vec<String>> {
    let mask = bits::from_indices(w.indices_of(t)?);
    Ok(names(w, perp_mask(w, mask)))
}

fn check_masks(table: &SubsetTable, ts: &[u64]) -> RelHypVerdict {
    let w = table.w;
    let inside = |u: u64| ts.iter().any(|&t| bits::is_subset(u, t));
    let mut violations = Vec::new();

    if let Some(u) = (1..table.affine.len() as u64).find(|&m| table.affine[m as usize] && bits::count(m) >= 3 && !inside(m)) {
        violations.push(Violation { condition: 1, witnesses: vec![names(w, u)] });
    }
    if let Some((u, v)) = table.perpendicular_pairs().into_iter().find(|&(u, v)| !inside(u | v)) {
        violations.push(Violation { condition: 2, witnesses: vec![names(w, u), names(w, v)] });
    }
    'three: for (i, &a) in ts.iter().enumerate() {
        for &b in &ts[i + 1..] {
            if !table.spherical[(a & b) as usize] {
                violations.push(Violation { condition: 3, witnesses: vec![names(w, a), names(w, b)] });
                break 'three;
            }
        }
    }
    let irr = table.irreducible_nonspherical();
    'four: for &t in ts {
        for &u in irr.iter().filter(|&&u| bits::is_subset(u, t)) {
            let p = table.perp(u);
            if !bits::is_subset(p, t) {
                violations.push(Violation { condition: 4, witnesses: vec![names(w, t), names(w, u), names(w, p)] });
                break 'four;
            }
        }
    }
    RelHypVerdict { holds: violations.is_empty(), violations }
}

/// Evaluates the four conditions for `W` relative to `collection`.
pub fn caprace_check(w: &CoxeterSystem, collection: &PeripheralCollection) -> Result<RelHypVerdict> {
    let table = SubsetTable::new(w)?;
    Ok(check_masks(&table, &collection.masks(w)?))
}

/// Adds `new` to `ts`, merging every member that meets it in a non-spherical subset.
fn absorb(table: &SubsetTable, ts: &mut Vec<u64>, new: u64) {
    let mut acc = new;
    loop {
        let hit = ts.iter().position(|&t| t != acc && !table.spherical[(t & acc) as usize]);
        match hit {
            Some(i) => acc |= ts.remove(i),
            None => break,
        }
    }
    ts.retain(|&t| !bits::is_subset(t, acc));
    ts.push(acc);
    ts.sort_unstable();
}

/// Candidate peripheral collection: maximal affine subsystems of rank at least
/// 3, closed under perpendicular-pair unions and perpendicular absorption.
pub fn default_peripherals(w: &CoxeterSystem) -> Result<PeripheralCollection> {
    let table = SubsetTable::new(w)?;
    let affine: Vec<u64> =
        (1..table.affine.len() as u64).filter(|&m| table.affine[m as usize] && bits::count(m) >= 3).collect();
    let mut ts: Vec<u64> = Vec::new();
    for &a in &affine {
        if !affine.iter().any(|&b| b != a && bits::is_subset(a, b)) {
            absorb(&table, &mut ts, a);
        }
    }
    let pairs = table.perpendicular_pairs();
    let irr = table.irreducible_nonspherical();
    loop {
        let inside = |ts: &[u64], u: u64| ts.iter().any(|&t| bits::is_subset(u, t));
        if let Some(&(u, v)) = pairs.iter().find(|&&(u, v)| !inside(&ts, u | v)) {
            absorb(&table, &mut ts, u | v);
            continue;
        }
        let grow = ts.iter().find_map(|&t| {
            irr.iter()
                .filter(|&&u| bits::is_subset(u, t))
                .map(|&u| table.perp(u))
                .find(|&p| !bits::is_subset(p, t))
                .map(|p| (t, p))
        });
        match grow {
            Some((t, p)) => absorb(&table, &mut ts, t | p),
            None => break,
        }
    }
    Ok(PeripheralCollection::from_masks(w, &ts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deform::tables;
    use crate::diagram_core::parse_diagram;

    fn w1(m: Order) -> CoxeterSystem {
        tables::cox_gp(1).unwrap().bind_one("m", m).unwrap()
    }

    fn set(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn affine_subsystems_of_first_family() {
        assert_eq!(affine_subsystems(&w1(Order::Finite(7)), 3).unwrap(), vec![set(&["1", "2", "3"])]);
        let inf = affine_subsystems(&w1(Order::Infinite), 3).unwrap();
        assert!(inf.contains(&set(&["1", "2", "3"])));
        assert!(inf.contains(&set(&["1", "2", "3", "5", "6"])));
        let sph = parse_diagram("nodes 1..3; 1-2; 2-3:5").unwrap();
        assert!(affine_subsystems(&sph, 1).unwrap().is_empty());
        assert!(affine_subsystems(&sph, 0).is_err());
    }

    #[test]
    fn perpendicular_sets() {
        assert_eq!(perp(&w1(Order::Finite(7)), &["1", "2", "3"]).unwrap(), set(&["5", "6"]));
        let w3 = tables::cox_gp(3).unwrap().bind_one("m", Order::Finite(7)).unwrap();
        assert_eq!(perp(&w3, &["1", "2", "3"]).unwrap(), set(&["5", "6"]));
        let empty: [&str; 0] = [];
        assert_eq!(perp(&w3, &empty).unwrap().len(), 6);
    }

    #[test]
    fn conditions_on_first_family() {
        let w = w1(Order::Finite(7));
        let v = caprace_check(&w, &PeripheralCollection::new(&[set(&["1", "2", "3"])]).unwrap()).unwrap();
        assert!(!v.holds);
        let four = v.violations.iter().find(|x| x.condition == 4).unwrap();
        assert_eq!(four.witnesses[1], set(&["1", "2", "3"]));
        assert_eq!(four.witnesses[2], set(&["5", "6"]));
        let good = PeripheralCollection::new(&[set(&["1", "2", "3", "5", "6"])]).unwrap();
        assert!(caprace_check(&w, &good).unwrap().holds);
        assert!(caprace_check(&w, &PeripheralCollection::empty()).unwrap().violates(1));
    }

    #[test]
    fn circle_diagram_is_hyperbolic() {
        let u = parse_diagram(tables::U_DIAGRAM).unwrap();
        assert!(caprace_check(&u, &PeripheralCollection::empty()).unwrap().holds);
        assert!(default_peripherals(&u).unwrap().is_empty());
    }

    #[test]
    fn default_collections() {
        for m in [Order::Finite(7), Order::Infinite] {
            let w = w1(m);
            let p = default_peripherals(&w).unwrap();
            assert_eq!(p.subsets(), &[set(&["1", "2", "3", "5", "6"])]);
            assert!(caprace_check(&w, &p).unwrap().holds);
        }
        let cores = default_peripherals(&w1(Order::Infinite)).unwrap().affine_cores(&w1(Order::Infinite)).unwrap();
        let mut c = cores[0].clone();
        c.sort();
        assert_eq!(c, set(&["tilde_A_1", "tilde_A_2"]));
        let p = default_peripherals(&w1(Order::Infinite)).unwrap();
        assert_eq!(p.abelian_ranks(&w1(Order::Infinite)).unwrap(), vec![3]);
        let sph = parse_diagram("nodes 1..3; 1-2; 2-3:5").unwrap();
        assert!(default_peripherals(&sph).unwrap().is_empty());
    }

    #[test]
    fn collection_validation() {
        assert!(PeripheralCollection::new(&[Vec::<String>::new()]).is_err());
        assert!(PeripheralCollection::new(&[set(&["1"]), set(&["1"])]).is_err());
        let w = w1(Order::Finite(7));
        assert!(caprace_check(&w, &PeripheralCollection::new(&[set(&["x"])]).unwrap()).is_err());
    }

    #[test]
    fn verdict_invariant_under_relabeling() {
        let w = w1(Order::Finite(8));
        let r = w.renamed(&["f", "e", "d", "c", "b", "a"]).unwrap();
        let p = PeripheralCollection::new(&[set(&["1", "2", "3"])]).unwrap();
        let q = PeripheralCollection::new(&[set(&["f", "e", "d"])]).unwrap();
        let a = caprace_check(&w, &p).unwrap();
        let b = caprace_check(&r, &q).unwrap();
        assert_eq!(a.holds, b.holds);
        assert_eq!(
            a.violations.iter().map(|v| v.condition).collect::<Vec<_>>(),
            b.violations.iter().map(|v| v.condition).collect::<Vec<_>>()
        );
    }
}
