//! Exact max-flow / min-cut between node sets and integral min-cost flow.
//!
//! Undirected edges become a pair of opposite arcs that are each other's residual twin, so
//! both directions share the edge capacity. The returned source side is the set reachable
//! from the sources in the final residual network: the minimum cut closest to the sources.

use std::collections::{BTreeMap, VecDeque};

use num_traits::{Signed, Zero};

use crate::graph::{Multigraph, NodeSet};
use crate::{EdgeId, Error, Rational, Result};

pub type EdgeMap<T> = BTreeMap<EdgeId, T>;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowResult {
    pub value: Rational,
    /// Signed flow per edge: positive means from `edge.u` to `edge.v`. Edges with both
    /// endpoints on the same terminal side carry zero and are omitted.
    pub flow_per_edge: EdgeMap<Rational>,
    pub source_side: NodeSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinCostFlowResult {
    pub cost: Rational,
    /// Net flow on every edge that carries some.
    pub edge_flow: EdgeMap<u64>,
}

impl MinCostFlowResult {
    pub fn support(&self) -> crate::EdgeSet {
        self.edge_flow.keys().copied().collect()
    }
}

/// Capacity 1 on every edge.
pub fn unit_capacities(g: &Multigraph) -> EdgeMap<Rational> {
    g.edges().iter().map(|e| (e.id, crate::int(1))).collect()
}

struct Residual {
    head: Vec<usize>,
    cap: Vec<Rational>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(n: usize) -> Self {
        Self {
            head: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Adds an undirected edge; returns the index of the `a -> b` arc.
    fn add_undirected(&mut self, a: usize, b: usize, cap: Rational) -> usize {
        let arc = self.head.len();
        self.head.push(b);
        self.cap.push(cap.clone());
        self.adj[a].push(arc);
        self.head.push(a);
        self.cap.push(cap);
        self.adj[b].push(arc + 1);
        arc
    }

    fn reachable(&self, from: usize) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.adj[v] {
                let w = self.head[a];
                if !seen[w] && self.cap[a].is_positive() {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Edmonds–Karp; returns the flow value.
    fn max_flow(&mut self, source: usize, sink: usize) -> Rational {
        let mut total = Rational::zero();
        loop {
            let mut via: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[source] = true;
            let mut queue = VecDeque::from([source]);
            while let Some(v) = queue.pop_front() {
                if v == sink {
                    break;
                }
                for &a in &self.adj[v] {
                    let w = self.head[a];
                    if !seen[w] && self.cap[a].is_positive() {
                        seen[w] = true;
                        via[w] = Some(a);
                        queue.push_back(w);
                    }
                }
            }
            if !seen[sink] {
                return total;
            }
            let mut path = Vec::new();
            let mut v = sink;
            while let Some(a) = via[v] {
                path.push(a);
                v = self.head[a ^ 1];
            }
            let bottleneck = path
                .iter()
                .map(|&a| &self.cap[a])
                .min()
                .cloned()
                .expect("augmenting path has at least one arc");
            for &a in &path {
                self.cap[a] -= &bottleneck;
                self.cap[a ^ 1] += &bottleneck;
            }
            total += bottleneck;
        }
    }
}

/// Maximum flow from node set `x` to node set `y`; missing capacities count as zero.
pub fn max_flow_min_cut(
    g: &Multigraph,
    capacity: &EdgeMap<Rational>,
    x: &NodeSet,
    y: &NodeSet,
) -> Result<FlowResult> {
    let n = g.node_count();
    if x.is_empty() || y.is_empty() {
        return Err(Error::invalid("flow terminals must be nonempty"));
    }
    if x.iter().chain(y).any(|&v| v >= n) {
        return Err(Error::invalid("flow terminal outside the graph"));
    }
    if x.intersection(y).next().is_some() {
        return Err(Error::invalid("source and sink sets intersect"));
    }
    // 0 = contracted sources, 1 = contracted sinks, others shifted by two.
    let slot: Vec<usize> = (0..n)
        .map(|v| {
            if x.contains(&v) {
                0
            } else if y.contains(&v) {
                1
            } else {
                v + 2
            }
        })
        .collect();
    let mut net = Residual::new(n + 2);
    let mut arcs = Vec::new();
    for e in g.edges() {
        let (a, b) = (slot[e.u], slot[e.v]);
        if a == b {
            continue;
        }
        let cap = capacity.get(&e.id).cloned().unwrap_or_else(Rational::zero);
        if cap.is_negative() {
            return Err(Error::invalid(format!("negative capacity on {}", e.id)));
        }
        arcs.push((e.id, net.add_undirected(a, b, cap.clone()), cap));
    }
    let value = net.max_flow(0, 1);
    let flow_per_edge = arcs
        .into_iter()
        .map(|(id, arc, cap)| (id, cap - &net.cap[arc]))
        .collect();
    let reach = net.reachable(0);
    let source_side = (0..n).filter(|&v| reach[slot[v]]).collect();
    Ok(FlowResult {
        value,
        flow_per_edge,
        source_side,
    })
}

/// Number of edge-disjoint paths between two node sets.
pub fn edge_connectivity(g: &Multigraph, x: &NodeSet, y: &NodeSet) -> Result<u64> {
    let flow = max_flow_min_cut(g, &unit_capacities(g), x, y)?;
    Ok(flow
        .value
        .to_integer()
        .try_into()
        .expect("unit-capacity flow is a small nonnegative integer"))
}

/// Number of edge-disjoint `a`–`b` paths.
pub fn pair_connectivity(g: &Multigraph, a: usize, b: usize) -> Result<u64> {
    edge_connectivity(g, &NodeSet::from([a]), &NodeSet::from([b]))
}

struct CostArc {
    to: usize,
    cap: u64,
    cost: Rational,
}

/// Integral min-cost flow of exactly `amount` units by successive shortest paths.
pub fn min_cost_flow(
    g: &Multigraph,
    cost: &EdgeMap<Rational>,
    capacity: &EdgeMap<u64>,
    src: usize,
    sink: usize,
    amount: u64,
) -> Result<MinCostFlowResult> {
    let n = g.node_count();
    if src >= n || sink >= n {
        return Err(Error::invalid("flow terminal outside the graph"));
    }
    if amount == 0 {
        return Ok(MinCostFlowResult {
            cost: Rational::zero(),
            edge_flow: EdgeMap::new(),
        });
    }
    if src == sink {
        return Err(Error::invalid("source equals sink"));
    }
    let mut arcs: Vec<CostArc> = Vec::new();
    let mut adj = vec![Vec::new(); n];
    // For each edge: index of its u->v arc and its v->u arc (each with a zero-capacity twin).
    let mut edge_arcs = Vec::new();
    for e in g.edges() {
        let c = cost.get(&e.id).cloned().unwrap_or_else(Rational::zero);
        if c.is_negative() {
            return Err(Error::invalid(format!("negative cost on {}", e.id)));
        }
        let cap = capacity.get(&e.id).copied().unwrap_or(0);
        let mut add = |from: usize, to: usize| {
            let a = arcs.len();
            arcs.push(CostArc {
                to,
                cap,
                cost: c.clone(),
            });
            arcs.push(CostArc {
                to: from,
                cap: 0,
                cost: -c.clone(),
            });
            adj[from].push(a);
            adj[to].push(a + 1);
            a
        };
        let forward = add(e.u, e.v);
        let backward = add(e.v, e.u);
        edge_arcs.push((e.id, forward, backward, cap, c));
    }

    let mut sent = 0u64;
    while sent < amount {
        // Bellman–Ford: residual costs may be negative but never form negative cycles.
        let mut dist: Vec<Option<Rational>> = vec![None; n];
        let mut via: Vec<Option<usize>> = vec![None; n];
        dist[src] = Some(Rational::zero());
        for _ in 0..n {
            let mut changed = false;
            for v in 0..n {
                let Some(dv) = dist[v].clone() else { continue };
                for &a in &adj[v] {
                    let arc = &arcs[a];
                    if arc.cap == 0 {
                        continue;
                    }
                    let cand = &dv + &arc.cost;
                    if dist[arc.to].as_ref().is_none_or(|d| cand < *d) {
                        dist[arc.to] = Some(cand);
                        via[arc.to] = Some(a);
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        if dist[sink].is_none() {
            return Err(Error::FlowInfeasible {
                requested: amount,
                max: sent,
            });
        }
        let mut path = Vec::new();
        let mut v = sink;
        while let Some(a) = via[v] {
            path.push(a);
            v = arcs[a ^ 1].to;
        }
        let push = path
            .iter()
            .map(|&a| arcs[a].cap)
            .min()
            .unwrap_or(0)
            .min(amount - sent);
        for &a in &path {
            arcs[a].cap -= push;
            arcs[a ^ 1].cap += push;
        }
        sent += push;
    }

    let mut total = Rational::zero();
    let mut edge_flow = EdgeMap::new();
    for (id, forward, backward, cap, c) in edge_arcs {
        let along = (cap - arcs[forward].cap) as i128;
        let against = (cap - arcs[backward].cap) as i128;
        let net = (along - against).unsigned_abs() as u64;
        if net > 0 {
            total += &c * Rational::from_integer(net.into());
            edge_flow.insert(id, net);
        }
    }
    Ok(MinCostFlowResult {
        cost: total,
        edge_flow,
    })
}

/// Min-cost flow with edge weights as costs and unit capacities: the cheapest `amount`
/// edge-disjoint `src`–`sink` paths.
pub fn cheapest_disjoint_paths(
    g: &Multigraph,
    src: usize,
    sink: usize,
    amount: u64,
) -> Result<MinCostFlowResult> {
    let cost = g.edges().iter().map(|e| (e.id, e.weight.clone())).collect();
    let capacity = g.edges().iter().map(|e| (e.id, 1)).collect();
    min_cost_flow(g, &cost, &capacity, src, sink, amount)
}
