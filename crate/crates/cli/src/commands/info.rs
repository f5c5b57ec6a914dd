use serde::Serialize;

use super::{rows, Report};
use crate::error::Result;
use crate::format::Fmt;
use crate::network::Network;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InfoReport {
    pub labels: Vec<String>,
    pub n: usize,
    pub m: usize,
    pub connected: bool,
    /// `[tail, head]` labels per edge.
    pub edges: Vec<[String; 2]>,
    pub weights: Vec<f64>,
    /// `A`, nodes by edges: +1 at the tail, -1 at the head.
    pub incidence: Vec<Vec<f64>>,
    /// `AAᵀ`.
    pub laplacian: Vec<Vec<f64>>,
    /// `AWAᵀ` with the file's weights or signs.
    pub weighted_laplacian: Vec<Vec<f64>>,
    pub alpha: Vec<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub type_one_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub groups: Option<GroupInfo>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GroupInfo {
    pub p: usize,
    pub q: usize,
    /// `n_j`, members per group.
    pub sizes: Vec<usize>,
    pub group_graph_connected: bool,
    /// `[tail, head]` as 1-based group indices.
    pub group_edges: Vec<[usize; 2]>,
    /// `A_H`, agents by groups: 1 where the agent belongs to the group.
    pub agent_group_incidence: Vec<Vec<f64>>,
}

pub fn run(net: &Network) -> Result<InfoReport> {
    let g = net.graph();
    let labels = net.labels();
    let groups = match net.groups() {
        None => None,
        Some(gr) => {
            let t = net.two_level()?;
            Some(GroupInfo {
                p: t.group_count(),
                q: gr.graph.edge_count(),
                sizes: t.group_sizes().to_vec(),
                group_graph_connected: gr.graph.is_connected(),
                group_edges: gr.graph.edges().iter().map(|&(a, b)| [a + 1, b + 1]).collect(),
                agent_group_incidence: rows(&t.group_incidence()),
            })
        }
    };
    Ok(InfoReport {
        labels: labels.to_vec(),
        n: g.node_count(),
        m: g.edge_count(),
        connected: g.is_connected(),
        edges: g.edges().iter().map(|&(a, b)| [labels[a].clone(), labels[b].clone()]).collect(),
        weights: net.weights(),
        incidence: rows(&g.incidence_matrix()),
        laplacian: rows(&g.laplacian(None)?),
        weighted_laplacian: rows(&g.laplacian(Some(&net.weights()))?),
        alpha: net.alpha().to_vec(),
        type_one_count: net.type_one_count(),
        groups,
    })
}

impl Report for InfoReport {
    fn render(&self, f: &Fmt) -> String {
        let mut s = format!(
            "nodes: {}\nedges: {}\nconnected: {}\nlabels: {}\n",
            self.n,
            self.m,
            if self.connected { "yes" } else { "no" },
            self.labels.join(" ")
        );
        if self.m > 0 {
            s.push_str("edge list:\n");
            for (k, ([t, h], w)) in self.edges.iter().zip(&self.weights).enumerate() {
                s.push_str(&format!("  e{}: {t} -> {h}  weight {}\n", k + 1, f.num(*w)));
            }
            s.push_str("incidence matrix:\n");
            s.push_str(&f.matrix(&self.incidence, "  "));
        }
        s.push_str("laplacian:\n");
        s.push_str(&f.matrix(&self.laplacian, "  "));
        if self.weights.iter().any(|&w| w != 1.0) {
            s.push_str("weighted laplacian:\n");
            s.push_str(&f.matrix(&self.weighted_laplacian, "  "));
        }
        if self.alpha.contains(&0) {
            let a: Vec<String> = self.alpha.iter().map(u8::to_string).collect();
            s.push_str(&format!("alpha: {}\n", a.join(" ")));
        }
        if let Some(r) = self.type_one_count {
            s.push_str(&format!("type-one nodes: {r}\n"));
        }
        if let Some(g) = &self.groups {
            let sizes: Vec<String> = g.sizes.iter().map(usize::to_string).collect();
            s.push_str(&format!(
                "groups: {}\ngroup edges: {}\ngroup sizes: {}\ngroup graph connected: {}\n",
                g.p,
                g.q,
                sizes.join(" "),
                if g.group_graph_connected { "yes" } else { "no" }
            ));
            s.push_str("agent-group incidence:\n");
            s.push_str(&f.matrix(&g.agent_group_incidence, "  "));
        }
        s
    }
}
