use netdyn_core::equilibria::{corank_one_test_with_cap, Decision, LocalDimension, TreeWeightSum};
use serde::Serialize;

use super::{check_len, ExactValue, Report};
use crate::error::Result;
use crate::format::{relation, Fmt};
use crate::network::Network;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct EquilibriaReport {
    pub labels: Vec<String>,
    pub at: Vec<f64>,
    pub jacobian_rank: usize,
    pub corank: usize,
    /// Orthonormal basis of the Jacobian kernel, one row per vector.
    pub kernel_basis: Vec<Vec<f64>>,
    /// For linear flows, relations `c · x = 0` whose common solutions are the
    /// kernel, as exact coefficient rows and as text.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_relations: Option<Vec<Vec<String>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_relations_text: Option<Vec<String>>,
    /// Derivative of each edge function at the tested state.
    pub edge_weights: Vec<f64>,
    /// Absent when the tree count exceeds the cap.
    pub tree_weight_sum_enum: Option<ExactValue>,
    pub tree_weight_sum_det: ExactValue,
    /// `exact` or `numerical`.
    pub decision: &'static str,
    pub corank_one_certified: bool,
    pub cross_check_agrees: bool,
    pub local_dimension: Dimension,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Dimension {
    pub certified: bool,
    /// The dimension when certified, otherwise a lower bound.
    pub value: usize,
}

fn sum(t: &TreeWeightSum) -> ExactValue {
    match &t.exact {
        Some(r) => ExactValue::exact(r),
        None => ExactValue::float(t.value),
    }
}

pub fn run(net: &Network, at: Option<Vec<f64>>, cap: u128) -> Result<EquilibriaReport> {
    let n = net.labels().len();
    let at = at.unwrap_or_else(|| vec![0.0; n]);
    check_len(&at, n, "--at")?;
    let flow = net.flow()?;
    let rep = corank_one_test_with_cap(&flow, &at, cap)?;
    let labels = net.labels().to_vec();
    let relations = rep
        .kernel_relations
        .as_ref()
        .map(|rs| rs.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect());
    let relations_text = rep
        .kernel_relations
        .as_ref()
        .map(|rs| rs.iter().map(|r| relation(r, &labels)).collect());
    let local_dimension = match rep.local_dimension {
        LocalDimension::Certified(d) => Dimension {
            certified: true,
            value: d,
        },
        LocalDimension::Uncertified { at_least } => Dimension {
            certified: false,
            value: at_least,
        },
    };
    Ok(EquilibriaReport {
        labels,
        at,
        jacobian_rank: rep.jacobian_rank,
        corank: rep.corank,
        kernel_basis: rep.kernel_basis,
        kernel_relations: relations,
        kernel_relations_text: relations_text,
        edge_weights: rep.edge_weights,
        tree_weight_sum_enum: rep.tree_weight_sum_enum.as_ref().map(sum),
        tree_weight_sum_det: sum(&rep.tree_weight_sum_det),
        decision: match rep.decision {
            Decision::Exact => "exact",
            Decision::Numerical => "numerical",
        },
        corank_one_certified: rep.corank_one_certified,
        cross_check_agrees: rep.cross_check_agrees,
        local_dimension,
    })
}

impl Report for EquilibriaReport {
    fn render(&self, f: &Fmt) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!(
            "state: {}\njacobian rank: {}\ncorank: {}\n",
            f.vector(&self.at),
            self.jacobian_rank,
            self.corank
        );
        s.push_str("kernel basis:\n");
        s.push_str(&f.matrix(&self.kernel_basis, "  "));
        if let Some(rs) = &self.kernel_relations_text {
            s.push_str("kernel relations:\n");
            for r in rs {
                s.push_str(&format!("  {r}\n"));
            }
        }
        s.push_str(&format!(
            "tree-weight sum (enumeration): {}\ntree-weight sum (determinant): {}\ndecision: {}\ncorank one certified: {}\ncross-check agrees: {}\n",
            self.tree_weight_sum_enum.as_ref().map_or("skipped (above cap)".into(), |v| v.render(f)),
            self.tree_weight_sum_det.render(f),
            self.decision,
            yes(self.corank_one_certified),
            yes(self.cross_check_agrees),
        ));
        let d = &self.local_dimension;
        if d.certified {
            s.push_str(&format!("equilibrium set dimension: {}\n", d.value));
        } else {
            s.push_str(&format!("equilibrium set dimension: at least {} (uncertified)\n", d.value));
        }
        s
    }
}
