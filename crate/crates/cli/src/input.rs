//! Reading diagram files and Cartan matrix dumps.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use coxfill::cartan::build_special_form;
use coxfill::diagram_core::{parse_template, DiagramTemplate};
use coxfill::{CartanMatrix, CoxeterSystem, DeformationSpace, Family, Order};
use serde_json::Value;

/// Contents of an input file.
pub enum Input {
    /// Diagram text, possibly with a symbolic label `m`.
    Diagram(DiagramTemplate),
    /// A Cartan matrix, given directly or inside a realization dump.
    Cartan(CartanMatrix),
}

/// Problem with the command-line values rather than with the mathematics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Reads `path` as a JSON dump when it starts with `{`, as diagram text otherwise.
pub fn load(path: &Path) -> Result<Input> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not valid JSON", path.display()))?;
        let cartan = v.get("cartan").unwrap_or(&v);
        return Ok(Input::Cartan(CartanMatrix::from_json(cartan)?));
    }
    Ok(Input::Diagram(parse_template(&text)?))
}

/// Parses one label value: a positive integer or `inf`.
pub fn parse_order(s: &str) -> Result<Order> {
    let s = s.trim();
    if s == "inf" || s == "∞" {
        return Ok(Order::Infinite);
    }
    match s.parse::<u32>() {
        Ok(m) if m >= 2 => Ok(Order::Finite(m)),
        _ => Err(UsageError(format!("`{s}` is not a label (an integer ≥ 2 or `inf`)")).into()),
    }
}

/// Parses a comma-separated list of labels and ranges such as `3..9,inf`.
pub fn parse_orders(spec: &str) -> Result<Vec<Order>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        if let Some((a, b)) = part.split_once("..") {
            let (lo, hi) = match (parse_order(a)?, parse_order(b.trim_start_matches('='))?) {
                (Order::Finite(lo), Order::Finite(hi)) if lo <= hi => (lo, hi),
                _ => return Err(UsageError(format!("`{part}` is not an increasing finite range")).into()),
            };
            out.extend((lo..=hi).map(Order::Finite));
        } else {
            out.push(parse_order(part)?);
        }
    }
    Ok(out)
}

/// Binds the label `m` of a template, if it has one.
pub fn bind(t: &DiagramTemplate, m: Option<Order>) -> Result<CoxeterSystem> {
    let unbound = t.unbound();
    if unbound.is_empty() {
        return Ok(t.bind(&BTreeMap::new())?);
    }
    if unbound.iter().any(|p| p != "m") {
        let names: Vec<&str> = unbound.iter().map(|s| s.as_str()).collect();
        bail!(UsageError(format!("only the label `m` may be symbolic; found {}", names.join(", "))));
    }
    let m = m.ok_or_else(|| UsageError("the diagram has a symbolic label; pass --m".into()))?;
    Ok(t.bind_one("m", m)?)
}

/// Coxeter system of an input.
pub fn system(input: &Input, m: Option<Order>) -> Result<CoxeterSystem> {
    match input {
        Input::Diagram(t) => bind(t, m),
        Input::Cartan(a) => Ok(a.system().clone()),
    }
}

/// Cartan matrix of an input: the dump itself, or the chosen witness of the
/// deformation space of the diagram. With `mu`, the first cycle parameter is
/// solved at that value of the second one and `witness` picks the solution.
pub fn cartan(input: &Input, m: Option<Order>, witness: usize, mu: Option<f64>) -> Result<CartanMatrix> {
    let w = match input {
        Input::Cartan(a) => return Ok(a.clone()),
        Input::Diagram(t) => bind(t, m)?,
    };
    let space = DeformationSpace::of_family(&Family::infer(&w)?)?;
    if space.witnesses.is_empty() {
        bail!(coxfill::Error::Precondition(format!("the deformation space is {}", space.kind)));
    }
    let params = match mu {
        Some(mu) => {
            let lambdas = space.lambdas_at(mu)?;
            let lambda = *lambdas
                .get(witness)
                .ok_or_else(|| UsageError(format!("witness {witness} out of range (0..{})", lambdas.len())))?;
            let mut p = space.witnesses[0].clone();
            p.insert("lambda".into(), lambda);
            p.insert("mu".into(), mu);
            p
        }
        None => space
            .witnesses
            .get(witness)
            .cloned()
            .ok_or_else(|| UsageError(format!("witness {witness} out of range (0..{})", space.witnesses.len())))?,
    };
    Ok(build_special_form(&w, &params)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_ranges() {
        let v = parse_orders("3..5,inf,9").unwrap();
        assert_eq!(v, vec![Order::Finite(3), Order::Finite(4), Order::Finite(5), Order::Infinite, Order::Finite(9)]);
        assert!(parse_orders("5..3").is_err());
        assert!(parse_orders("x").is_err());
        assert!(parse_order("1").is_err());
    }

    #[test]
    fn symbolic_label_needs_a_value() {
        let t = parse_template("nodes 1..2; 1-2:m").unwrap();
        assert!(bind(&t, None).unwrap_err().downcast_ref::<UsageError>().is_some());
        assert_eq!(bind(&t, Some(Order::Finite(5))).unwrap().order(0, 1), Order::Finite(5));
    }
}
