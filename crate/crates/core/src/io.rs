//! JSON instance files.
//!
//! A bipartite instance is `{"n", "m", "k", "weights"?, "adj"}` where `adj`
//! holds one array of candidate indices per agent. A laminar instance replaces
//! `adj` with `sets`, one array of element indices per set. Omitted weights
//! mean unit weights.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::laminar::LaminarFamily;
use crate::instance::Instance;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    m: usize,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    adj: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sets: Option<Vec<Vec<usize>>>,
}

/// A parsed instance file.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceDoc {
    Bipartite(Instance),
    Laminar(LaminarFamily),
}

impl InstanceDoc {
    /// The bipartite form; laminar families are flattened (agents are
    /// elements, candidates are sets).
    pub fn to_instance(&self) -> Result<Instance> {
        match self {
            InstanceDoc::Bipartite(i) => Ok(i.clone()),
            InstanceDoc::Laminar(f) => f.to_instance(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        match (file.adj, file.sets) {
            (Some(adj), None) => {
                if adj.len() != file.n {
                    return Err(Error::InvalidInstance(vec![format!(
                        "field n = {} but adj has {} rows",
                        file.n,
                        adj.len()
                    )]));
                }
                Ok(InstanceDoc::Bipartite(Instance::new(file.m, adj, file.weights, file.k)?))
            }
            (None, Some(sets)) => {
                if sets.len() != file.m {
                    return Err(Error::InvalidInstance(vec![format!(
                        "field m = {} but sets has {} entries",
                        file.m,
                        sets.len()
                    )]));
                }
                let weights = file.weights.unwrap_or_else(|| vec![1.0; file.m]);
                Ok(InstanceDoc::Laminar(LaminarFamily::new(file.n, sets, weights, file.k)?))
            }
            (Some(_), Some(_)) => Err(Error::InvalidInstance(vec![
                "an instance has either `adj` or `sets`, not both".into(),
            ])),
            (None, None) => Err(Error::InvalidInstance(vec!["missing `adj` or `sets`".into()])),
        }
    }

    pub fn to_json(&self) -> String {
        let file = match self {
            InstanceDoc::Bipartite(i) => InstanceFile {
                n: i.n_agents(),
                m: i.n_candidates,
                k: i.demand,
                weights: non_unit(&i.weights),
                adj: Some(i.adj.clone()),
                sets: None,
            },
            InstanceDoc::Laminar(f) => InstanceFile {
                n: f.n_elements,
                m: f.sets.len(),
                k: f.demand,
                weights: non_unit(&f.weights),
                adj: None,
                sets: Some(f.sets.clone()),
            },
        };
        serde_json::to_string(&file).expect("instance serializes")
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = self.to_json();
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

fn non_unit(weights: &[f64]) -> Option<Vec<f64>> {
    if weights.iter().all(|&w| w == 1.0) {
        None
    } else {
        Some(weights.to_vec())
    }
}
