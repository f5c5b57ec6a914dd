use netdyn_core::equilibria::{signed_tree_counts, tree_weight_sum_det, tree_weight_sum_enum};
use netdyn_core::{Error as CoreError, WeightedDigraph};
use serde::Serialize;

use super::{exact_weights, ExactValue, Report};
use crate::error::{CliError, Result};
use crate::format::Fmt;
use crate::network::Network;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TreesReport {
    pub tree_count: u128,
    pub cap: u128,
    /// Sum over enumerated trees of the product of edge weights.
    pub tree_weight_sum_enum: ExactValue,
    /// Same sum as a reduced weighted Laplacian determinant.
    pub tree_weight_sum_det: ExactValue,
    pub agree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signed: Option<SignedCounts>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SignedCounts {
    pub positive: u128,
    pub negative: u128,
    /// Equal counts, so the signed tree sum vanishes.
    pub degenerate: bool,
}

pub fn run(net: &Network, cap: u128, signed: bool) -> Result<TreesReport> {
    let g = net.graph();
    if !g.is_connected() {
        return Err(CoreError::NotConnected.into());
    }
    // Check the sign requirement before the possibly long enumeration.
    let signed_graph = signed.then(|| net.signed()).transpose()?;
    let wg = WeightedDigraph::new(g.clone(), exact_weights(&net.weights())?)?;
    let det = tree_weight_sum_det(&wg)?;
    let tree_count = g.tree_count()?;
    if tree_count > cap {
        return Err(CliError::CapExceeded {
            count: tree_count,
            cap,
            determinant: det.to_string(),
        });
    }
    let en = tree_weight_sum_enum(&wg, cap)?;
    let signed = signed_graph
        .map(|s| signed_tree_counts(&s, cap))
        .transpose()?
        .map(|c| SignedCounts {
            positive: c.positive,
            negative: c.negative,
            degenerate: c.is_degenerate(),
        });
    Ok(TreesReport {
        tree_count,
        cap,
        agree: en == det,
        tree_weight_sum_enum: ExactValue::exact(&en),
        tree_weight_sum_det: ExactValue::exact(&det),
        signed,
    })
}

impl Report for TreesReport {
    fn render(&self, f: &Fmt) -> String {
        let mut s = format!(
            "spanning trees: {}\ntree-weight sum (enumeration): {}\ntree-weight sum (determinant): {}\nagree: {}\n",
            self.tree_count,
            self.tree_weight_sum_enum.render(f),
            self.tree_weight_sum_det.render(f),
            if self.agree { "yes" } else { "no" }
        );
        if let Some(c) = &self.signed {
            s.push_str(&format!(
                "positive trees: {}\nnegative trees: {}\ndegenerate: {}\n",
                c.positive,
                c.negative,
                if c.degenerate { "yes" } else { "no" }
            ));
        }
        s
    }
}
