use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{DimensionEngine, GammaValue, ShatterNode};
use crate::error::{Error, Result};
use crate::problem::VersionSpace;
use crate::rational::{self, Rational};

/// A shattering tree of depth `depth` rooted at `root`, stored as the
/// finite set of (version space, remaining depth) nodes it visits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShatteringCertificate {
    pub gamma: GammaValue,
    pub root: VersionSpace,
    pub depth: usize,
    pub nodes: BTreeMap<(VersionSpace, usize), ShatterNode>,
}

impl ShatteringCertificate {
    pub(super) fn extract(engine: &DimensionEngine, root: &VersionSpace) -> Result<Self> {
        let depth = engine.dimension(root)?;
        let mut nodes = BTreeMap::new();
        let mut pending = vec![(root.clone(), depth)];
        while let Some((space, d)) = pending.pop() {
            if d == 0 || nodes.contains_key(&(space.clone(), d)) {
                continue;
            }
            let node = engine.node(&space, d)?;
            for c in &node.candidates {
                pending.push((c.child.clone(), d - 1));
            }
            nodes.insert((space, d), node);
        }
        Ok(ShatteringCertificate {
            gamma: engine.gamma().clone(),
            root: root.clone(),
            depth,
            nodes,
        })
    }

    pub fn node(&self, space: &VersionSpace, depth: usize) -> Result<&ShatterNode> {
        self.nodes
            .get(&(space.clone(), depth))
            .ok_or(Error::DepthExhausted)
    }

    pub fn to_document(&self) -> CertificateDocument {
        CertificateDocument {
            gamma: rational::format(self.gamma.value()),
            strict: self.gamma.is_strict(),
            root: self.root.to_vec(),
            depth: self.depth,
            nodes: self
                .nodes
                .iter()
                .map(|((space, depth), node)| NodeDocument {
                    space: space.to_vec(),
                    depth: *depth,
                    instance: node.instance,
                    value: node.value.clone(),
                    candidates: node
                        .candidates
                        .iter()
                        .map(|c| CandidateDocument {
                            y: c.candidate.label,
                            eps: c.candidate.threshold.clone(),
                            child: c.child.to_vec(),
                            child_dimension: c.child_dimension,
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Deterministic JSON: sorted keys, rationals as strings.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self.to_document()).expect("certificate serializes");
        serde_json::to_string_pretty(&value).expect("value serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub gamma: String,
    pub strict: bool,
    pub root: Vec<usize>,
    pub depth: usize,
    pub nodes: Vec<NodeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDocument {
    pub space: Vec<usize>,
    pub depth: usize,
    pub instance: usize,
    #[serde(with = "rational::serde_text")]
    pub value: Rational,
    pub candidates: Vec<CandidateDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateDocument {
    pub y: usize,
    #[serde(with = "rational::serde_text")]
    pub eps: Rational,
    pub child: Vec<usize>,
    pub child_dimension: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::builtin;
    use crate::rational::ratio;

    #[test]
    fn json_is_deterministic_and_closed() {
        let t = builtin::thresholds(3).unwrap();
        let g = GammaValue::new(ratio(1, 4)).unwrap();
        let a = DimensionEngine::new(t.clone(), g.clone()).certificate(&t.full_space()).unwrap();
        let b = DimensionEngine::new(t.clone(), g).certificate(&t.full_space()).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        // every child referenced at depth ≥ 1 has its own node
        for ((_, d), node) in &a.nodes {
            for c in &node.candidates {
                if *d > 1 {
                    assert!(a.node(&c.child, d - 1).is_ok());
                }
                assert!(c.child_dimension + 1 >= *d);
            }
        }
        let doc: CertificateDocument = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(doc, a.to_document());
    }
}
