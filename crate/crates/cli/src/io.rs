//! JSON instance and solution files. Edge identity is the position in the `edges` array.

use std::path::Path;

use rsnd_core::graph::Edge;
use rsnd_core::{Demand, EdgeId, EdgeSet, Instance, Multigraph, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// A weight as written in a file: an integer or a `"p/q"` string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum WeightRepr {
    Int(i64),
    Text(String),
}

impl WeightRepr {
    fn parse(&self) -> Result<Rational, String> {
        let q: Rational = match self {
            WeightRepr::Int(v) => Rational::from_integer((*v).into()),
            WeightRepr::Text(s) => s.trim().parse().map_err(|e| format!("{s:?} is not a rational: {e}"))?,
        };
        if q < Rational::default() {
            return Err(format!("negative weight {q}"));
        }
        Ok(q)
    }

    pub fn from_rational(q: &Rational) -> Self {
        if q.is_integer() {
            if let Ok(v) = i64::try_from(q.to_integer()) {
                return WeightRepr::Int(v);
            }
        }
        WeightRepr::Text(q.to_string())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: usize,
    pub v: usize,
    pub w: WeightRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DemandRecord {
    pub s: usize,
    pub t: usize,
    pub k: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<EdgeRecord>,
    #[serde(default)]
    pub demands: Vec<DemandRecord>,
}

impl InstanceFile {
    pub fn to_instance(&self) -> Result<Instance, CliError> {
        let mut edges = Vec::with_capacity(self.edges.len());
        for (i, e) in self.edges.iter().enumerate() {
            for (name, end) in [("u", e.u), ("v", e.v)] {
                if end >= self.n {
                    return Err(CliError::Input(format!("edges[{i}].{name}: node {end} outside 0..{}", self.n)));
                }
            }
            let w = e.w.parse().map_err(|msg| CliError::Input(format!("edges[{i}].w: {msg}")))?;
            edges.push(Edge::new(i, e.u, e.v, w));
        }
        let mut demands = Vec::with_capacity(self.demands.len());
        for (i, d) in self.demands.iter().enumerate() {
            for (name, end) in [("s", d.s), ("t", d.t)] {
                if end >= self.n {
                    return Err(CliError::Input(format!("demands[{i}].{name}: node {end} outside 0..{}", self.n)));
                }
            }
            demands.push(Demand::new(d.s, d.t, d.k));
        }
        let graph = Multigraph::new(self.n, edges).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(Instance { graph, demands })
    }

    pub fn from_instance(inst: &Instance) -> Self {
        Self {
            n: inst.graph.node_count(),
            edges: inst
                .graph
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: e.u,
                    v: e.v,
                    w: WeightRepr::from_rational(&e.weight),
                })
                .collect(),
            demands: inst
                .demands
                .iter()
                .map(|d| DemandRecord { s: d.s, t: d.t, k: d.k })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolutionFile {
    pub edges: Vec<usize>,
    pub cost: String,
    #[serde(default)]
    pub trace: Value,
}

impl SolutionFile {
    pub fn new(g: &Multigraph, h: &EdgeSet, trace: Value) -> Self {
        Self {
            edges: h.iter().map(|id| id.0).collect(),
            cost: g.weight_of(h).to_string(),
            trace,
        }
    }

    /// Edge set after checking indices and the recorded cost.
    pub fn to_edge_set(&self, g: &Multigraph) -> Result<EdgeSet, CliError> {
        let mut h = EdgeSet::new();
        for (i, &e) in self.edges.iter().enumerate() {
            if e >= g.edge_count() {
                return Err(CliError::Input(format!("edges[{i}]: index {e} outside 0..{}", g.edge_count())));
            }
            h.insert(EdgeId(e));
        }
        let recorded: Rational = self
            .cost
            .parse()
            .map_err(|e| CliError::Input(format!("cost: {:?} is not a rational: {e}", self.cost)))?;
        let actual = g.weight_of(&h);
        if recorded != actual {
            return Err(CliError::Input(format!("cost: recorded {recorded} but edges sum to {actual}")));
        }
        Ok(h)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline, to `path` or stdout.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
