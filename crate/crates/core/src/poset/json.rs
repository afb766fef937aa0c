//! JSON interchange and Graphviz export.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use super::{Poset, PosetError};

/// `{"n": int, "labels": [str], "covers": [[i, j], ...]}`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PosetJson {
    pub n: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub covers: Vec<[usize; 2]>,
}

impl PosetJson {
    pub fn from_poset(p: &Poset) -> Self {
        PosetJson {
            n: p.len(),
            labels: (0..p.len()).map(|x| p.label(x)).collect(),
            covers: p.hasse().into_iter().map(|(x, y)| [x, y]).collect(),
        }
    }

    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|c| (c[0], c[1])).collect();
        let p = Poset::from_relations(self.n, &pairs)?;
        if self.labels.is_empty() {
            return Ok(p);
        }
        let p = p.with_labels(self.labels.clone())?;
        Ok(p)
    }
}

/// Parses the JSON poset format; schema problems carry line and column.
pub fn parse_poset_json(text: &str) -> Result<Poset, PosetError> {
    let parsed: PosetJson = serde_json::from_str(text).map_err(|e| {
        PosetError::Schema(format!("line {} column {}: {e}", e.line(), e.column()))
    })?;
    match parsed.to_poset() {
        Err(PosetError::Cycle(a, b)) if !parsed.labels.is_empty() => {
            let name = |s: &str| {
                s.parse::<usize>().ok().and_then(|i| parsed.labels.get(i).cloned()).unwrap_or(s.into())
            };
            Err(PosetError::Cycle(name(&a), name(&b)))
        }
        other => other,
    }
}

pub fn poset_to_json(p: &Poset) -> String {
    serde_json::to_string(&PosetJson::from_poset(p)).expect("poset json serializes")
}

/// Hasse diagram in DOT, edges drawn upward. Nodes in `highlight` are filled.
pub fn export_dot(p: &Poset, highlight: Option<&FixedBitSet>) -> String {
    let mut out = String::new();
    out.push_str("digraph poset {\n  rankdir=BT;\n  node [shape=circle];\n");
    for x in 0..p.len() {
        let label = p.label(x).replace('"', "\\\"");
        let marked = highlight.is_some_and(|h| h.contains(x));
        if marked {
            let _ = writeln!(out, "  {x} [label=\"{label}\", style=filled, fillcolor=lightgray];");
        } else {
            let _ = writeln!(out, "  {x} [label=\"{label}\"];");
        }
    }
    for (x, y) in p.hasse() {
        let _ = writeln!(out, "  {x} -> {y};");
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_poset_fixture() {
        let text = r#"{"n": 4, "labels": ["a","b","c","d"], "covers": [[0,1],[2,1],[2,3]]}"#;
        let p = parse_poset_json(text).unwrap();
        assert!(p.same_order(&Poset::n_poset()));
    }

    #[test]
    fn empty_covers_give_antichain() {
        let p = parse_poset_json(r#"{"n": 3, "covers": []}"#).unwrap();
        assert!(p.same_order(&Poset::antichain(3)));
    }

    #[test]
    fn malformed_json_is_a_schema_error() {
        assert!(matches!(parse_poset_json("{\"n\": 3,"), Err(PosetError::Schema(_))));
        assert!(matches!(parse_poset_json(r#"{"n": "x", "covers": []}"#), Err(PosetError::Schema(_))));
    }

    #[test]
    fn cycle_reports_labels() {
        let text = r#"{"n": 2, "labels": ["u","v"], "covers": [[0,1],[1,0]]}"#;
        assert_eq!(parse_poset_json(text), Err(PosetError::Cycle("u".into(), "v".into())));
    }

    #[test]
    fn dot_is_deterministic() {
        let c = Poset::chain(2);
        let a = export_dot(&c, None);
        assert_eq!(a, export_dot(&c, None));
        assert_eq!(a.matches("->").count(), 1);
        assert_eq!(a.matches("[label=").count(), 2);
    }

    #[test]
    fn json_roundtrip() {
        let p = Poset::n_family(2);
        let q = parse_poset_json(&poset_to_json(&p)).unwrap();
        assert_eq!(p, q);
    }
}
