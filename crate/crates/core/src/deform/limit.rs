//! Behaviour of the two-point deformation spaces as the label `m → ∞`.

use std::collections::BTreeMap;

use serde_json::json;

use super::{lambda_from_shift, shift_of, tables, Family, ReducedEquation};
use crate::cartan::{build_special_form, CartanMatrix, CycleBasis};
use crate::diagram_core::{DiagramTemplate, Order};
use crate::error::{Error, Result};
use crate::linalg;
use crate::polytope::{faces_from_cartan, PredictedFace};

/// Outcome of a limit computation.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    /// `(m, λ(m))` on the branch `λ > 1`.
    pub sweep: Vec<(u32, f64)>,
    /// Whether the sweep is strictly decreasing and stays above 1.
    pub monotone: bool,
    /// Fixed second cycle parameter, for two-cycle families.
    pub mu: Option<f64>,
    /// Largest `m` used for extrapolation.
    pub m_max: u32,
    /// `λ + λ⁻¹ − 2` extrapolated to `m = ∞` from `m_max` and `2·m_max`.
    pub extrapolated_shift: f64,
    /// Special form at `m_max` with the extrapolated parameter.
    pub extrapolated: CartanMatrix,
    /// The limit matrix at `m = ∞` with first cycle parameter 1.
    pub limit: CartanMatrix,
    /// `max |extrapolated − limit|` entrywise.
    pub max_entry_diff: f64,
    /// Faces of the limit forced by its Cartan matrix.
    pub predicted_faces: Vec<PredictedFace>,
}

impl LimitReport {
    /// Number of predicted vertices of the limit polytope.
    pub fn predicted_vertices(&self) -> usize {
        self.predicted_faces.iter().filter(|f| f.dim == Some(0)).count()
    }

    /// JSON summary.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "mu": self.mu,
            "monotone": self.monotone,
            "m_max": self.m_max,
            "sweep_len": self.sweep.len(),
            "lambda_first": self.sweep.first().map(|p| json!({"m": p.0, "lambda": p.1})),
            "lambda_last": self.sweep.last().map(|p| json!({"m": p.0, "lambda": p.1})),
            "extrapolated_shift": self.extrapolated_shift,
            "max_entry_diff": self.max_entry_diff,
            "limit": self.limit.to_json(),
            "predicted_vertices": self.predicted_vertices(),
        })
    }
}

/// `λ + λ⁻¹ − 2` on the admissible branch of the family at label `m`.
fn shift_at(template: &DiagramTemplate, m: Order, mu: Option<f64>) -> Result<f64> {
    let family = Family::infer(&template.bind_one("m", m)?)?;
    let eq = ReducedEquation::of(&family)?;
    match (eq.normal_form, eq.x0, mu) {
        (Some((a1, a2, b)), _, Some(mu)) => {
            let denom = shift_of(mu) + 2.0 - a2;
            if denom <= 0.0 {
                return Err(Error::Numerical(format!("no admissible λ at m = {m}")));
            }
            Ok(b / denom - (2.0 - a1))
        }
        (Some(_), _, None) => Err(Error::MissingParameter("mu".into())),
        (None, _, Some(_)) => Err(Error::InvalidInput("μ is only meaningful for two-cycle families".into())),
        (None, Some(x0), None) => Ok(x0 - 2.0),
        (None, None, None) => Err(Error::UnsupportedFamily("the family has no cycle parameter".into())),
    }
}

fn params_for(template: &DiagramTemplate, m: Order, lambda: f64, mu: Option<f64>) -> Result<BTreeMap<String, f64>> {
    let w = template.bind_one("m", m)?;
    let basis = CycleBasis::of(&w);
    let mut params = BTreeMap::new();
    params.insert(basis.cycles[0].id.clone(), lambda);
    if let Some(mu) = mu {
        params.insert(basis.cycles[1].id.clone(), mu);
    }
    Ok(params)
}

fn sweep_values(m_max: u32) -> Vec<u32> {
    let mut ms: Vec<u32> = (7..=1000.min(m_max)).collect();
    let mut scale = 1000u64;
    while scale < m_max as u64 {
        for k in [2u64, 5, 10] {
            let v = scale * k;
            if v <= m_max as u64 {
                ms.push(v as u32);
            }
        }
        scale *= 10;
    }
    if *ms.last().unwrap() != m_max {
        ms.push(m_max);
    }
    ms
}

/// Limit of a family template with a symbolic label `m`.
pub fn limit_template(template: &DiagramTemplate, mu: Option<f64>, m_max: u32) -> Result<LimitReport> {
    if !template.unbound().contains("m") {
        return Err(Error::InvalidInput("the template has no parameter `m`".into()));
    }
    if !(1000..=u32::MAX / 2).contains(&m_max) {
        return Err(Error::InvalidInput("m_max must lie in [1000, 2^31)".into()));
    }
    let mut sweep = Vec::new();
    for m in sweep_values(m_max) {
        let s = shift_at(template, Order::Finite(m), mu)?;
        sweep.push((m, lambda_from_shift(s)));
    }
    let monotone = sweep.windows(2).all(|p| p[1].1 < p[0].1) && sweep.iter().all(|p| p.1 > 1.0);
    if !monotone {
        return Err(Error::Numerical("λ(m) is not strictly decreasing to 1".into()));
    }
    let s1 = shift_at(template, Order::Finite(m_max), mu)?;
    let s2 = shift_at(template, Order::Finite(2 * m_max), mu)?;
    let extrapolated_shift = ((4.0 * s2 - s1) / 3.0).max(0.0);
    let w_max = template.bind_one("m", Order::Finite(m_max))?;
    let extrapolated =
        build_special_form(&w_max, &params_for(template, Order::Finite(m_max), lambda_from_shift(extrapolated_shift), mu)?)?;
    let w_inf = template.bind_one("m", Order::Infinite)?;
    let limit = build_special_form(&w_inf, &params_for(template, Order::Infinite, 1.0, mu)?)?;
    let max_entry_diff = linalg::max_abs_diff(extrapolated.entries(), limit.entries());
    let predicted_faces = faces_from_cartan(&limit, w_inf.rank() - 2)?;
    Ok(LimitReport {
        sweep,
        monotone,
        mu,
        m_max,
        extrapolated_shift,
        extrapolated,
        limit,
        max_entry_diff,
        predicted_faces,
    })
}

/// Limit of `W^i` for `i ∈ {1, 2, 3}`, with `μ` required exactly for `i = 3`.
pub fn limit_family(i: u8, mu: Option<f64>) -> Result<LimitReport> {
    limit_template(&tables::cox_gp(i)?, mu, 1_000_000)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_family_limit() {
        let r = limit_family(1, None).unwrap();
        assert!(r.monotone);
        assert!(r.max_entry_diff < 1e-7, "{}", r.max_entry_diff);
        let a = r.limit.entries();
        assert!((a[(2, 3)] + 1.0).abs() < 1e-12);
        assert!((a[(4, 5)] + 2.0).abs() < 1e-12);
        assert!((a[(5, 4)] + 2.0).abs() < 1e-12);
        assert_eq!(r.predicted_vertices(), 7);
    }

    #[test]
    fn third_family_limit_is_symmetric_at_mu_one() {
        let r = limit_family(3, Some(1.0)).unwrap();
        let a = r.limit.entries();
        assert!(linalg::max_abs_diff(a, &a.transpose()) < 1e-12);
        assert!(r.max_entry_diff < 1e-7);
        let r = limit_family(3, Some(2.0)).unwrap();
        assert!(r.monotone);
        assert!(limit_family(3, None).is_err());
        assert!(limit_family(1, Some(2.0)).is_err());
    }

    #[test]
    fn sweep_covers_range() {
        let ms = sweep_values(1_000_000);
        assert_eq!(ms[0], 7);
        assert_eq!(*ms.last().unwrap(), 1_000_000);
        assert!(ms.windows(2).all(|p| p[0] < p[1]));
    }
}
