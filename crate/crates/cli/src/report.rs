//! JSON and text rendering of engine results.

use serde_json::{json, Map, Number, Value};
use spf_core::derived::Comparison;
use spf_core::linalg::{factorize, GradedModule, Homology, Int};

/// How torsion is listed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum View {
    /// Invariant factors d_1 | d_2 | …
    Invariant,
    /// Elementary divisors p^e, sorted.
    PrimePower,
}

fn integer(x: &Int) -> Value {
    let s = x.to_string();
    match s.parse::<Number>() {
        Ok(n) if n.is_u64() || n.is_i64() => Value::Number(n),
        _ => Value::String(s),
    }
}

fn torsion(h: &Homology, view: View) -> Vec<Int> {
    match view {
        View::Invariant => h.torsion.clone(),
        View::PrimePower => {
            let mut out: Vec<Int> =
                h.torsion.iter().flat_map(factorize).map(|(p, e)| num_pow(&p, e)).collect();
            out.sort();
            out
        }
    }
}

fn num_pow(p: &Int, e: usize) -> Int {
    (0..e).fold(Int::from(1), |acc, _| acc * p)
}

/// `{"q": {"rank": r, "torsion": [...]}}` in increasing degree.
pub fn degrees(g: &GradedModule, view: View) -> Value {
    let mut m = Map::new();
    for (q, h) in &g.degrees {
        let t: Vec<Value> = torsion(h, view).iter().map(integer).collect();
        m.insert(q.to_string(), json!({"rank": h.free_rank, "torsion": t}));
    }
    Value::Object(m)
}

pub fn module(g: &GradedModule, view: View) -> Value {
    json!({ "degrees": degrees(g, view) })
}

pub fn comparison(c: &Comparison, view: View) -> Value {
    json!({
        "title": c.title,
        "match": c.matches(),
        "lhs": {"name": c.lhs_name, "degrees": degrees(&c.lhs, view)},
        "rhs": {"name": c.rhs_name, "degrees": degrees(&c.rhs, view)},
    })
}

pub fn text_module(g: &GradedModule, view: View) -> String {
    let mut out = String::new();
    if g.degrees.is_empty() {
        out.push_str("0\n");
    }
    for (q, h) in &g.degrees {
        let shown = Homology { free_rank: h.free_rank, torsion: torsion(h, view) };
        out.push_str(&format!("{q:>4}  {shown}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use spf_core::linalg::Ring;

    #[test]
    fn prime_power_view_splits_factors() {
        let mut g = GradedModule::new(Ring::Integers);
        g.set(1, 2, vec![Int::from(2), Int::from(12)]);
        assert_eq!(
            module(&g, View::Invariant).to_string(),
            r#"{"degrees":{"1":{"rank":2,"torsion":[2,12]}}}"#
        );
        assert_eq!(
            module(&g, View::PrimePower).to_string(),
            r#"{"degrees":{"1":{"rank":2,"torsion":[2,3,4]}}}"#
        );
    }

    #[test]
    fn degrees_keep_numeric_order() {
        let mut g = GradedModule::new(Ring::Rationals);
        for q in [10, 2, -1] {
            g.set(q, 1, Vec::new());
        }
        let keys: Vec<String> = degrees(&g, View::Invariant).as_object().unwrap().keys().cloned().collect();
        assert_eq!(keys, ["-1", "2", "10"]);
    }
}
