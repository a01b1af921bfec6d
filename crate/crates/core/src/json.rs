//! JSON renderings with sorted keys and rationals as `"p"` / `"p/q"` strings.

use serde_json::{json, Value};

use crate::chart::{Matrix, Splitting};
use crate::flow::{FlowJet, HorizontalityReport, MumfordJet, WeightedPair};
use crate::grassmann::{ChartPoint, MonomialSplitting};
use crate::jet::Jet;
use crate::scalar::{format_scalar, Scalar};
use crate::super_ns::{SuperIndex, SuperSplitting};

pub fn scalar(q: &Scalar) -> Value {
    Value::String(format_scalar(q))
}

/// Basis indices: bare integers, or `{level, parity}` on super spaces.
pub trait JsonIndex {
    fn to_json(&self) -> Value;
}

impl JsonIndex for i64 {
    fn to_json(&self) -> Value {
        json!(self)
    }
}

impl JsonIndex for SuperIndex {
    fn to_json(&self) -> Value {
        json!({ "level": self.level, "parity": self.parity })
    }
}

pub trait JsonSplitting {
    fn to_json(&self) -> Value;
}

impl JsonSplitting for MonomialSplitting {
    fn to_json(&self) -> Value {
        json!({ "in": self.shift_in_set(), "out": self.shift_out_set() })
    }
}

impl JsonSplitting for SuperSplitting {
    fn to_json(&self) -> Value {
        json!({ "even": self.even.to_json(), "odd": self.odd.to_json() })
    }
}

/// `[[monomial exponents], "p/q"], ...` in monomial order.
pub fn jet(j: &Jet) -> Value {
    Value::Array(j.terms().iter().map(|(m, c)| json!([m, scalar(c)])).collect())
}

pub fn scalar_matrix<I: JsonIndex + Ord>(m: &Matrix<I, Scalar>) -> Value {
    Value::Array(m.iter().map(|((r, c), v)| json!([r.to_json(), c.to_json(), scalar(v)])).collect())
}

pub fn jet_matrix<I: JsonIndex + Ord>(m: &Matrix<I, Jet>) -> Value {
    Value::Array(m.iter().map(|((r, c), v)| json!([r.to_json(), c.to_json(), jet(v)])).collect())
}

pub fn chart_point<S>(p: &ChartPoint<S>) -> Value
where
    S: Splitting + JsonSplitting,
    S::Index: JsonIndex,
{
    json!({ "splitting": p.splitting().to_json(), "entries": scalar_matrix(p.entries()) })
}

pub fn weighted_pair<S>(base: &WeightedPair<S>) -> Value
where
    S: Splitting + JsonSplitting,
    S::Index: JsonIndex,
{
    json!({
        "p2": chart_point(&base.p2),
        "p1": chart_point(&base.p1),
        "w2": base.w2,
        "w1": base.w1,
    })
}

pub fn mumford_jet<S>(mj: &MumfordJet<S>) -> Value
where
    S: Splitting + JsonSplitting,
    S::Index: JsonIndex,
{
    json!({
        "variables": mj.space.variables(),
        "order": mj.space.order(),
        "phi": jet(&mj.phi),
        "a2": jet_matrix(&mj.a2),
        "a1": jet_matrix(&mj.a1),
        "basepoint": weighted_pair(&mj.basepoint),
    })
}

pub fn flow_jet(f: &FlowJet) -> Value {
    json!({
        "variables": f.space.variables(),
        "order": f.space.order(),
        "a": jet_matrix(&f.a),
        "phi": jet(&f.phi),
    })
}

pub fn horizontality(report: &HorizontalityReport) -> Value {
    json!({
        "symmetric": report.is_symmetric(),
        "pairs": report.pairs.iter().map(|p| json!({
            "first": p.first,
            "second": p.second,
            "forward": scalar(&p.forward),
            "backward": scalar(&p.backward),
            "bracket_term": scalar(&p.bracket_term),
            "defect": scalar(&p.defect),
            "curvature_defect": scalar(&p.curvature_defect),
        })).collect::<Vec<_>>(),
    })
}

/// Pretty-printed with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{mumford_jet as compute, NamedGenerator};
    use crate::scalar::frac;
    use crate::witt::WittElement;

    #[test]
    fn chart_point_layout() {
        let p = ChartPoint::from_triples(MonomialSplitting::standard(), [(0, -1, frac(1, 2))]).unwrap();
        let v = chart_point(&p);
        assert_eq!(v["entries"], json!([[0, -1, "1/2"]]));
        assert_eq!(v["splitting"], json!({"in": [], "out": []}));
    }

    #[test]
    fn keys_are_sorted() {
        let mj = compute(&WeightedPair::default(), &[NamedGenerator::even("t", WittElement::l(-1))], 2).unwrap();
        let text = render(&mumford_jet(&mj));
        let a1 = text.find("\"a1\"").unwrap();
        let a2 = text.find("\"a2\"").unwrap();
        let phi = text.find("\"phi\"").unwrap();
        assert!(a1 < a2 && a2 < phi);
    }
}
