//! Network description files.
//!
//! ```json
//! {
//!   "nodes": 4,
//!   "edges": [{"tail": 1, "head": 2}, {"tail": 2, "head": 3, "sign": -1}],
//!   "alpha": [1, 1, 1, 1],
//!   "typeOneCount": 3,
//!   "groups": [[1, 2], [3, 4]],
//!   "groupEdges": [{"tail": 1, "head": 2}]
//! }
//! ```
//!
//! `nodes` is either a count (labels `1..=n`) or a list of labels. Edges
//! carry at most one of `weight` (default 1) and `sign` (±1). Group edges
//! refer to groups by their 1-based position in `groups`. The first
//! `typeOneCount` nodes, in label order, are the dynamic ones.

use std::collections::HashMap;
use std::path::Path;

use netdyn_core::dae::HeterogeneousNetwork;
use netdyn_core::flows::PotentialFlow;
use netdyn_core::{Digraph, Error as CoreError, Sign, SignedDigraph, TwoLevelNetwork};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Nodes {
    Count(usize),
    Labels(Vec<Label>),
}

/// A node label written either as a JSON number or a string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Index(u64),
    Name(String),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Index(i) => i.to_string(),
            Label::Name(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub tail: Label,
    pub head: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sign: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupEdge {
    pub tail: usize,
    pub head: usize,
}

/// The document as written on disk, before validation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct NetworkFile {
    pub nodes: Nodes,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u8>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub type_one_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<Vec<Label>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_edges: Option<Vec<GroupEdge>>,
}

/// How an edge's flow law was given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum EdgeLaw {
    Weight(f64),
    Sign(Sign),
}

impl EdgeLaw {
    pub fn weight(self) -> f64 {
        match self {
            EdgeLaw::Weight(w) => w,
            EdgeLaw::Sign(s) => s.value() as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Groups {
    /// Group index of each node.
    pub membership: Vec<usize>,
    pub graph: Digraph,
}

/// A validated network.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    /// Labels were given as a node count.
    counted: bool,
    graph: Digraph,
    laws: Vec<EdgeLaw>,
    alpha: Vec<u8>,
    alpha_given: bool,
    type_one_count: Option<usize>,
    groups: Option<Groups>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

impl Network {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_file(&file)
    }

    pub fn from_file(file: &NetworkFile) -> Result<Self> {
        let (labels, counted) = match &file.nodes {
            Nodes::Count(n) => ((1..=*n).map(|i| i.to_string()).collect::<Vec<_>>(), true),
            Nodes::Labels(l) => (l.iter().map(Label::text).collect(), false),
        };
        if labels.is_empty() {
            return Err(invalid("a network needs at least one node"));
        }
        let mut index = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(invalid(format!("labels unique: duplicate node label \"{l}\"")));
            }
        }
        let lookup = |l: &Label, edge: usize| {
            let t = l.text();
            index
                .get(&t)
                .copied()
                .ok_or_else(|| invalid(format!("edges reference existing labels: edge {} uses unknown node \"{t}\"", edge + 1)))
        };

        let mut pairs = Vec::with_capacity(file.edges.len());
        let mut laws = Vec::with_capacity(file.edges.len());
        for (j, e) in file.edges.iter().enumerate() {
            pairs.push((lookup(&e.tail, j)?, lookup(&e.head, j)?));
            let law = match (e.weight, e.sign) {
                (Some(_), Some(_)) => {
                    return Err(invalid(format!(
                        "at most one of weight/sign per edge: edge {} has both",
                        j + 1
                    )))
                }
                (Some(w), None) if !w.is_finite() => {
                    return Err(invalid(format!("edge {} has a non-finite weight", j + 1)))
                }
                (Some(w), None) => EdgeLaw::Weight(w),
                (None, Some(s)) => EdgeLaw::Sign(
                    Sign::from_i64(j, s).map_err(|_| invalid(format!("edge {} has sign {s}; signs are +1 or -1", j + 1)))?,
                ),
                (None, None) => EdgeLaw::Weight(1.0),
            };
            laws.push(law);
        }
        let graph = Digraph::new(labels.len(), pairs).map_err(|e| graph_error(e, &labels, "edge"))?;

        let n = labels.len();
        let alpha_given = file.alpha.is_some();
        let alpha = file.alpha.clone().unwrap_or_else(|| vec![1; n]);
        if alpha.len() != n {
            return Err(invalid(format!("alpha lists {} values for {n} nodes", alpha.len())));
        }
        if let Some(i) = alpha.iter().position(|&a| a > 1) {
            return Err(invalid(format!("alpha entries are 0 or 1: node \"{}\" has {}", labels[i], alpha[i])));
        }

        if let Some(r) = file.type_one_count {
            if r == 0 || r >= n {
                return Err(invalid(format!("typeOneCount must lie in [1, {}], got {r}", n - 1)));
            }
        }

        let groups = match (&file.groups, &file.group_edges) {
            (None, None) => None,
            (None, Some(_)) => return Err(invalid("groupEdges given without groups")),
            (Some(lists), edges) => Some(Self::validate_groups(lists, edges.as_deref().unwrap_or(&[]), &index, n)?),
        };

        Ok(Self {
            labels,
            counted,
            graph,
            laws,
            alpha,
            alpha_given,
            type_one_count: file.type_one_count,
            groups,
        })
    }

    fn validate_groups(
        lists: &[Vec<Label>],
        edges: &[GroupEdge],
        index: &HashMap<String, usize>,
        n: usize,
    ) -> Result<Groups> {
        if lists.is_empty() {
            return Err(invalid("groups partition nodes: no groups given"));
        }
        let mut membership = vec![usize::MAX; n];
        for (g, members) in lists.iter().enumerate() {
            if members.is_empty() {
                return Err(invalid(format!("groups partition nodes: group {} is empty", g + 1)));
            }
            for m in members {
                let t = m.text();
                let i = *index
                    .get(&t)
                    .ok_or_else(|| invalid(format!("groups partition nodes: group {} lists unknown node \"{t}\"", g + 1)))?;
                if membership[i] != usize::MAX {
                    return Err(invalid(format!("groups partition nodes: node \"{t}\" appears in more than one group")));
                }
                membership[i] = g;
            }
        }
        if let Some(i) = membership.iter().position(|&g| g == usize::MAX) {
            let label = index.iter().find(|(_, &v)| v == i).map(|(k, _)| k.clone()).unwrap_or_default();
            return Err(invalid(format!("groups partition nodes: node \"{label}\" is in no group")));
        }
        let p = lists.len();
        let group_labels: Vec<String> = (1..=p).map(|g| g.to_string()).collect();
        let mut pairs = Vec::with_capacity(edges.len());
        for (k, e) in edges.iter().enumerate() {
            for end in [e.tail, e.head] {
                if end == 0 || end > p {
                    return Err(invalid(format!(
                        "groupEdges reference existing groups: group edge {} uses group {end} of {p}",
                        k + 1
                    )));
                }
            }
            pairs.push((e.tail - 1, e.head - 1));
        }
        let graph = Digraph::new(p, pairs).map_err(|e| graph_error(e, &group_labels, "group edge"))?;
        Ok(Groups { membership, graph })
    }

    pub fn to_file(&self) -> NetworkFile {
        let label = |i: usize| {
            if self.counted {
                Label::Index(i as u64 + 1)
            } else {
                Label::Name(self.labels[i].clone())
            }
        };
        let edges = self
            .graph
            .edges()
            .iter()
            .zip(&self.laws)
            .map(|(&(t, h), law)| {
                let (weight, sign) = match *law {
                    EdgeLaw::Weight(1.0) => (None, None),
                    EdgeLaw::Weight(w) => (Some(w), None),
                    EdgeLaw::Sign(s) => (None, Some(s.value())),
                };
                EdgeEntry {
                    tail: label(t),
                    head: label(h),
                    weight,
                    sign,
                }
            })
            .collect();
        let (groups, group_edges) = match &self.groups {
            None => (None, None),
            Some(g) => {
                let p = g.graph.node_count();
                let lists = (0..p)
                    .map(|k| (0..self.labels.len()).filter(|&i| g.membership[i] == k).map(label).collect())
                    .collect();
                let edges = g
                    .graph
                    .edges()
                    .iter()
                    .map(|&(t, h)| GroupEdge { tail: t + 1, head: h + 1 })
                    .collect();
                (Some(lists), Some(edges))
            }
        };
        NetworkFile {
            nodes: if self.counted {
                Nodes::Count(self.labels.len())
            } else {
                Nodes::Labels(self.labels.iter().cloned().map(Label::Name).collect())
            },
            edges,
            alpha: self.alpha_given.then(|| self.alpha.clone()),
            type_one_count: self.type_one_count,
            groups,
            group_edges,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("network files always serialize")
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn graph(&self) -> &Digraph {
        &self.graph
    }

    pub fn laws(&self) -> &[EdgeLaw] {
        &self.laws
    }

    pub fn weights(&self) -> Vec<f64> {
        self.laws.iter().map(|l| l.weight()).collect()
    }

    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn type_one_count(&self) -> Option<usize> {
        self.type_one_count
    }

    pub fn groups(&self) -> Option<&Groups> {
        self.groups.as_ref()
    }

    /// Labels for groups: `g1`, `g2`, ...
    pub fn group_labels(&self) -> Vec<String> {
        let p = self.groups.as_ref().map_or(0, |g| g.graph.node_count());
        (1..=p).map(|k| format!("g{k}")).collect()
    }

    /// Signed view; every edge must carry a sign or a weight of ±1.
    pub fn signed(&self) -> Result<SignedDigraph> {
        let signs = self
            .laws
            .iter()
            .enumerate()
            .map(|(j, law)| match *law {
                EdgeLaw::Sign(s) => Ok(s),
                EdgeLaw::Weight(1.0) => Ok(Sign::Positive),
                EdgeLaw::Weight(-1.0) => Ok(Sign::Negative),
                EdgeLaw::Weight(w) => Err(CliError::ModelMismatch(format!(
                    "signed analysis needs every edge to be +1 or -1; edge {} has weight {w}",
                    j + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SignedDigraph::new(self.graph.clone(), signs)?)
    }

    /// Linear potential-driven flow with the file's weights and α.
    pub fn flow(&self) -> Result<PotentialFlow> {
        Ok(PotentialFlow::linear(self.graph.clone(), &self.weights())?.with_alpha(self.alpha.clone())?)
    }

    pub fn heterogeneous(&self) -> Result<HeterogeneousNetwork> {
        let r = self
            .type_one_count
            .ok_or_else(|| CliError::ModelMismatch("the dae model needs typeOneCount".into()))?;
        Ok(HeterogeneousNetwork::new(self.graph.clone(), r)?)
    }

    pub fn two_level(&self) -> Result<TwoLevelNetwork> {
        let g = self
            .groups
            .as_ref()
            .ok_or_else(|| CliError::ModelMismatch("two-level analysis needs groups and groupEdges".into()))?;
        Ok(TwoLevelNetwork::new(self.graph.clone(), g.graph.clone(), g.membership.clone())?)
    }
}

fn graph_error(e: CoreError, labels: &[String], what: &str) -> CliError {
    match e {
        CoreError::SelfLoop { edge, node } => invalid(format!(
            "no self-loops: {what} {} joins \"{}\" to itself",
            edge + 1,
            labels[node]
        )),
        CoreError::DuplicatePair { edge, first } => invalid(format!(
            "duplicate unordered pair: {what}s {} and {} join the same nodes",
            first + 1,
            edge + 1
        )),
        other => invalid(other.to_string()),
    }
}
