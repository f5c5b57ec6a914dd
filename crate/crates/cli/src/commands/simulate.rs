use netdyn_core::multilevel::{TwoLevelSystem, Variant};
use netdyn_core::sim::{integrate_linear, IntegratorConfig, Termination};
use serde::Serialize;

use super::{check_len, parse_state, Report};
use crate::args::{MethodArg, Model, SimulateArgs, VariantArg};
use crate::error::{CliError, Result};
use crate::format::Fmt;
use crate::network::Network;
use crate::trajectory::TrajectoryTable;

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationSummary {
    pub model: &'static str,
    pub method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<&'static str>,
    pub labels: Vec<String>,
    pub initial_state: Vec<f64>,
    pub final_time: f64,
    pub samples: usize,
    /// `horizonReached` or `converged`.
    pub termination: &'static str,
    #[serde(flatten)]
    pub terminal: TerminalSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
}

/// The part of a summary that depends only on the trajectory rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TerminalSummary {
    pub terminal_state: Vec<f64>,
    /// Limit predicted from the initial state, when one is known for the model.
    pub predicted_equilibrium: Option<Vec<f64>>,
    /// Largest absolute difference between terminal and predicted states.
    pub deviation: Option<f64>,
}

fn model_name(m: Model) -> &'static str {
    match m {
        Model::Consensus => "consensus",
        Model::Dae => "dae",
        Model::Twolevel => "twolevel",
        Model::Flow => "flow",
    }
}

fn variant(v: VariantArg) -> Variant {
    match v {
        VariantArg::Simplified => Variant::Simplified,
        VariantArg::Full => Variant::Full,
        VariantArg::NodeGroup => Variant::NodeGroupOnly,
    }
}

fn variant_name(v: VariantArg) -> &'static str {
    match v {
        VariantArg::Simplified => "simplified",
        VariantArg::Full => "full",
        VariantArg::NodeGroup => "node-group",
    }
}

/// Column labels of the state vector for `model`.
pub fn state_labels(net: &Network, model: Model) -> Vec<String> {
    let mut labels = net.labels().to_vec();
    if model == Model::Twolevel {
        labels.extend(net.group_labels());
    }
    labels
}

fn mean_state(x0: &[f64]) -> Vec<f64> {
    let mean = x0.iter().sum::<f64>() / x0.len() as f64;
    vec![mean; x0.len()]
}

fn two_level_system(net: &Network, v: VariantArg) -> Result<TwoLevelSystem> {
    Ok(TwoLevelSystem::build(net.two_level()?, variant(v))?)
}

fn predicted(net: &Network, model: Model, v: VariantArg, initial: &[f64]) -> Result<Option<Vec<f64>>> {
    let connected = net.graph().is_connected();
    Ok(match model {
        Model::Consensus => connected.then(|| mean_state(initial)),
        Model::Flow => (connected && net.weights().iter().all(|&w| w > 0.0)).then(|| mean_state(initial)),
        Model::Dae => {
            let h = net.heterogeneous()?;
            let (y, z) = h.predicted_equilibrium(&initial[..h.dynamic_count()])?;
            Some([y, z].concat())
        }
        Model::Twolevel => {
            if v != VariantArg::Simplified {
                return Ok(None);
            }
            let sys = two_level_system(net, v)?;
            let n = net.labels().len();
            Some(sys.predicted_limit(&initial[..n], &initial[n..])?.stacked())
        }
    })
}

/// Terminal state, predicted limit and deviation from a trajectory table.
/// Re-reading a written CSV gives an identical result.
pub fn terminal_summary(
    net: &Network,
    model: Model,
    v: VariantArg,
    table: &TrajectoryTable,
) -> Result<TerminalSummary> {
    let terminal = table.final_state().to_vec();
    let predicted = predicted(net, model, v, table.first_state())?;
    let deviation = predicted.as_ref().map(|p| {
        p.iter()
            .zip(&terminal)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    });
    Ok(TerminalSummary {
        terminal_state: terminal,
        predicted_equilibrium: predicted,
        deviation,
    })
}

fn config(args: &SimulateArgs) -> Result<IntegratorConfig> {
    let base = match args.method {
        MethodArg::Rk4 => IntegratorConfig::default(),
        MethodArg::Rk45 => IntegratorConfig::adaptive(),
    };
    let cfg = base.with_horizon(args.horizon).with_step(args.step);
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

pub fn run(net: &Network, args: &SimulateArgs) -> Result<SimulationSummary> {
    let cfg = config(args)?;
    let n = net.labels().len();
    let labels = state_labels(net, args.model);
    let (times, states, termination) = match args.model {
        Model::Consensus | Model::Flow => {
            let m = if args.model == Model::Consensus {
                net.graph().laplacian::<f64>(None)?.neg()
            } else {
                let flow = net.flow()?;
                if !flow.all_dynamic() {
                    return Err(CliError::ModelMismatch(
                        "the flow model needs alpha = 1 on every node; mixed alpha is only evaluated, not simulated".into(),
                    ));
                }
                flow.jacobian(&vec![0.0; n])?
            };
            let x0 = parse_state(&args.x0, n)?;
            check_len(&x0, n, "--x0")?;
            let tr = integrate_linear(&m, &x0, &cfg)?;
            (tr.times, tr.states, tr.termination)
        }
        Model::Dae => {
            let h = net.heterogeneous()?;
            let r = h.dynamic_count();
            let x0 = parse_state(&args.x0, r)?;
            let y0 = match x0.len() {
                len if len == r => x0,
                len if len == n => {
                    // A supplied z0 that violates the constraint is replaced.
                    h.initialize(&x0[..r], Some(&x0[r..]))?;
                    x0[..r].to_vec()
                }
                len => {
                    return Err(CliError::Usage(format!(
                        "--x0 has {len} entries, expected {r} (dynamic nodes) or {n} (all nodes)"
                    )))
                }
            };
            let tr = h.simulate(&y0, &cfg)?;
            let states = (0..tr.times.len()).map(|k| tr.full_state(k)).collect();
            (tr.times, states, tr.termination)
        }
        Model::Twolevel => {
            let sys = two_level_system(net, args.variant)?;
            let x0 = parse_state(&args.x0, labels.len())?;
            check_len(&x0, labels.len(), "--x0")?;
            let tr = sys.simulate(&x0[..n], &x0[n..], &cfg)?;
            (tr.times, tr.states, tr.termination)
        }
    };
    let table = TrajectoryTable { labels, times, states };
    if let Some(path) = &args.out {
        table.save(path)?;
    }
    Ok(SimulationSummary {
        model: model_name(args.model),
        method: match args.method {
            MethodArg::Rk4 => "rk4",
            MethodArg::Rk45 => "rk45",
        },
        variant: (args.model == Model::Twolevel).then(|| variant_name(args.variant)),
        initial_state: table.first_state().to_vec(),
        final_time: *table.times.last().expect("trajectory holds the initial time"),
        samples: table.times.len(),
        termination: match termination {
            Termination::HorizonReached => "horizonReached",
            Termination::Converged => "converged",
        },
        terminal: terminal_summary(net, args.model, args.variant, &table)?,
        out: args.out.as_ref().map(|p| p.display().to_string()),
        labels: table.labels,
    })
}

impl Report for SimulationSummary {
    fn render(&self, f: &Fmt) -> String {
        let mut s = format!("model: {}", self.model);
        if let Some(v) = self.variant {
            s.push_str(&format!(" ({v})"));
        }
        s.push_str(&format!(
            "\nmethod: {}\nsamples: {}\nfinal time: {}\ntermination: {}\n",
            self.method,
            self.samples,
            f.num(self.final_time),
            self.termination
        ));
        let t = &self.terminal;
        let width = self.labels.iter().map(String::len).max().unwrap_or(0).max(5);
        s.push_str(&format!(
            "  {:<width$}  {:>12} {:>12} {:>12}\n",
            "state", "initial", "terminal", "predicted"
        ));
        for (i, label) in self.labels.iter().enumerate() {
            let p = t
                .predicted_equilibrium
                .as_ref()
                .map_or("-".to_string(), |p| f.num(p[i]));
            s.push_str(&format!(
                "  {label:<width$}  {:>12} {:>12} {:>12}\n",
                f.num(self.initial_state[i]),
                f.num(t.terminal_state[i]),
                p
            ));
        }
        match t.deviation {
            Some(d) => s.push_str(&format!("deviation from prediction: {}\n", f.num(d))),
            None => s.push_str("no predicted equilibrium for this model\n"),
        }
        if let Some(out) = &self.out {
            s.push_str(&format!("trajectory written to {out}\n"));
        }
        s
    }
}
