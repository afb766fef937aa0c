//! Named construction steps read from JSON.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    adjoin_extremum, antichain_blowup_semilattice, blowup_cert, compose_cert, find_parallel_sigma,
    find_retract, k_blowup_monoid, product_cert, retract_to_full, series_parallel_cert,
    weak_order_cert, CertifiedPoset, Composition, ConstructionError, Extremum,
};
use crate::algebra::{Certificate, CertificateJson, Kind};
use crate::poset::{Endomorphism, PosetJson, SpExpr};
use crate::recognizer::{recognize, SearchConfig};

/// One step; later steps refer to earlier results by `name`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Chain { name: String, n: usize },
    Antichain { name: String, n: usize },
    WeakOrder {
        name: String,
        levels: Vec<usize>,
        /// Keep the monoid certificate instead of the full one.
        #[serde(default)]
        monoid: bool,
    },
    SeriesParallel { name: String, expr: SpExpr },
    Semilattice {
        name: String,
        poset: PosetJson,
        #[serde(default)]
        replacements: Vec<(usize, usize)>,
    },
    /// A poset with a user-supplied certificate.
    Given { name: String, poset: PosetJson, certificate: CertificateJson },
    /// A poset with a certificate found by search.
    Search { name: String, poset: PosetJson, kind: Kind },
    Adjoin { name: String, input: String, which: Extremum },
    Product { name: String, left: String, right: String },
    Compose {
        name: String,
        lower: String,
        upper: String,
        how: Composition,
        /// Explicit homomorphism for a monoid parallel composition.
        #[serde(default)]
        sigma: Option<Vec<usize>>,
        /// Search for such a homomorphism instead.
        #[serde(default)]
        find_sigma: bool,
    },
    Blowup { name: String, input: String, x: usize, with: String },
    Retract {
        name: String,
        input: String,
        /// Searched for when absent.
        #[serde(default)]
        sigma: Option<Vec<usize>>,
    },
    KBlowup { name: String, input: String, k: usize },
}

impl Step {
    pub fn name(&self) -> &str {
        match self {
            Step::Chain { name, .. }
            | Step::Antichain { name, .. }
            | Step::WeakOrder { name, .. }
            | Step::SeriesParallel { name, .. }
            | Step::Semilattice { name, .. }
            | Step::Given { name, .. }
            | Step::Search { name, .. }
            | Step::Adjoin { name, .. }
            | Step::Product { name, .. }
            | Step::Compose { name, .. }
            | Step::Blowup { name, .. }
            | Step::Retract { name, .. }
            | Step::KBlowup { name, .. } => name,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("step {step} ({name}): unknown input {input:?}")]
    UnknownInput { step: usize, name: String, input: String },
    #[error("step {step} ({name}): name already used")]
    DuplicateName { step: usize, name: String },
    #[error("step {step} ({name}): {source}")]
    Construction { step: usize, name: String, source: ConstructionError },
    #[error("step {step} ({name}): {message}")]
    Input { step: usize, name: String, message: String },
}

/// Runs the steps in order and returns every named result.
pub fn run_pipeline(steps: &[Step]) -> Result<Vec<(String, CertifiedPoset)>, PipelineError> {
    let mut done: BTreeMap<String, usize> = BTreeMap::new();
    let mut out: Vec<(String, CertifiedPoset)> = Vec::new();
    for (i, step) in steps.iter().enumerate() {
        let name = step.name().to_string();
        if done.contains_key(&name) {
            return Err(PipelineError::DuplicateName { step: i, name });
        }
        let get = |input: &String| -> Result<&CertifiedPoset, PipelineError> {
            done.get(input).map(|&k| &out[k].1).ok_or_else(|| PipelineError::UnknownInput {
                step: i,
                name: name.clone(),
                input: input.clone(),
            })
        };
        let wrap = |source: ConstructionError| PipelineError::Construction { step: i, name: name.clone(), source };
        let input_err = |message: String| PipelineError::Input { step: i, name: name.clone(), message };
        let cp = match step {
            Step::Chain { n, .. } => CertifiedPoset::chain(*n),
            Step::Antichain { n, .. } => CertifiedPoset::antichain(*n),
            Step::WeakOrder { levels, monoid, .. } => {
                let w = weak_order_cert(levels).map_err(wrap)?;
                if *monoid {
                    w.monoid
                } else {
                    w.full
                }
            }
            Step::SeriesParallel { expr, .. } => series_parallel_cert(expr),
            Step::Semilattice { poset, replacements, .. } => {
                let p = poset.to_poset().map_err(|e| input_err(e.to_string()))?;
                antichain_blowup_semilattice(&p, replacements).map_err(wrap)?
            }
            Step::Given { poset, certificate, .. } => {
                let p = poset.to_poset().map_err(|e| input_err(e.to_string()))?;
                let c = Certificate::from_json(certificate).map_err(|e| input_err(e.to_string()))?;
                CertifiedPoset::new(p, c).map_err(wrap)?
            }
            Step::Search { poset, kind, .. } => {
                let p = poset.to_poset().map_err(|e| input_err(e.to_string()))?;
                let o = recognize(&p, (*kind).into(), &SearchConfig::deterministic());
                let c = o
                    .verdict
                    .certificate()
                    .cloned()
                    .ok_or_else(|| input_err(format!("no {kind} certificate: {}", o.verdict.label())))?;
                CertifiedPoset::new(p, c).map_err(wrap)?
            }
            Step::Adjoin { input, which, .. } => adjoin_extremum(get(input)?, *which).map_err(wrap)?,
            Step::Product { left, right, .. } => product_cert(get(left)?, get(right)?).map_err(wrap)?,
            Step::Compose { lower, upper, how, sigma, find_sigma, .. } => {
                let (a, b) = (get(lower)?, get(upper)?);
                let sigma = match (sigma, find_sigma) {
                    (Some(s), _) => Some(s.clone()),
                    (None, true) => Some(
                        find_parallel_sigma(a, b).ok_or_else(|| input_err("no homomorphism found".into()))?,
                    ),
                    (None, false) => None,
                };
                compose_cert(a, b, *how, sigma.as_deref()).map_err(wrap)?
            }
            Step::Blowup { input, x, with, .. } => blowup_cert(get(input)?, *x, get(with)?).map_err(wrap)?,
            Step::Retract { input, sigma, .. } => {
                let cp = get(input)?;
                let sigma = match sigma {
                    Some(m) => Endomorphism { map: m.clone() },
                    None => find_retract(cp).ok_or_else(|| input_err("no retract found".into()))?,
                };
                retract_to_full(cp, &sigma).map_err(wrap)?
            }
            Step::KBlowup { input, k, .. } => k_blowup_monoid(get(input)?, *k).map_err(wrap)?,
        };
        done.insert(name.clone(), out.len());
        out.push((name, cp));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_pipeline() {
        let text = r#"[
            {"op": "antichain", "name": "a", "n": 2},
            {"op": "adjoin", "name": "v", "input": "a", "which": "min"},
            {"op": "chain", "name": "c", "n": 2},
            {"op": "product", "name": "p", "left": "v", "right": "c"}
        ]"#;
        let steps: Vec<Step> = serde_json::from_str(text).unwrap();
        let out = run_pipeline(&steps).unwrap();
        assert_eq!(out.len(), 4);
        assert_eq!(out[3].1.len(), 6);
        assert_eq!(out[3].1.kind(), Kind::FullMonoid);
    }

    #[test]
    fn unknown_input_is_reported() {
        let steps = vec![Step::Adjoin { name: "x".into(), input: "nope".into(), which: Extremum::Max }];
        assert!(matches!(run_pipeline(&steps), Err(PipelineError::UnknownInput { .. })));
    }
}
