use netdyn_core::multilevel::{TwoLevelSystem, Variant};
use serde::Serialize;

use super::Report;
use crate::error::Result;
use crate::format::Fmt;
use crate::network::Network;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GershgorinReport {
    /// One disc per column of the system matrix: agents first, then groups.
    pub discs: Vec<DiscEntry>,
    pub all_in_closed_left_half_plane: bool,
    pub tangent_at_origin: bool,
    pub kernel_dimension: usize,
    pub zero_eigenvalue_simple: bool,
    /// Largest real part among nonzero eigenvalues; empirical, absent for
    /// large systems.
    pub convergence_rate: Option<f64>,
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscEntry {
    pub label: String,
    /// `agent` or `group`.
    pub kind: &'static str,
    pub center: f64,
    pub radius: f64,
}

pub fn run(net: &Network) -> Result<GershgorinReport> {
    let sys = TwoLevelSystem::build(net.two_level()?, Variant::Simplified)?;
    let cert = sys.stability_certificate()?;
    let labels = net
        .labels()
        .iter()
        .map(|l| (l.clone(), "agent"))
        .chain(net.group_labels().into_iter().map(|l| (l, "group")));
    let discs = cert
        .discs
        .iter()
        .zip(labels)
        .map(|(d, (label, kind))| DiscEntry {
            label,
            kind,
            center: d.center,
            radius: d.radius,
        })
        .collect();
    Ok(GershgorinReport {
        discs,
        all_in_closed_left_half_plane: cert.all_in_closed_left_half_plane,
        tangent_at_origin: cert.tangent_at_origin,
        kernel_dimension: cert.kernel_dimension,
        zero_eigenvalue_simple: cert.zero_eigenvalue_simple,
        convergence_rate: sys.convergence_rate()?,
    })
}

impl Report for GershgorinReport {
    fn render(&self, f: &Fmt) -> String {
        let yes = |b: bool| if b { "yes" } else { "no" };
        let mut s = String::from("discs (center, radius):\n");
        let width = self.discs.iter().map(|d| d.label.len()).max().unwrap_or(0);
        for d in &self.discs {
            s.push_str(&format!(
                "  {:<5} {:<width$}  ({}, {})\n",
                d.kind,
                d.label,
                f.num(d.center),
                f.num(d.radius)
            ));
        }
        s.push_str(&format!(
            "all discs in closed left half-plane: {}\ntangent at origin: {}\nkernel dimension: {}\nzero eigenvalue simple: {}\n",
            yes(self.all_in_closed_left_half_plane),
            yes(self.tangent_at_origin),
            self.kernel_dimension,
            yes(self.zero_eigenvalue_simple),
        ));
        match self.convergence_rate {
            Some(r) => s.push_str(&format!("slowest decay rate (empirical): {}\n", f.num(r))),
            None => s.push_str("slowest decay rate: not computed for this size\n"),
        }
        s
    }
}
