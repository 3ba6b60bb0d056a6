//! 2-RSND by reduction plus SND rounding, and single-demand RSND with k = 3 via the 2-chain.

use crate::chain::{build_chain, Chain};
use crate::flow::cheapest_disjoint_paths;
use crate::graph::{Multigraph, NodeSet};
use crate::reduction::{solve_via_components, DemandFunction};
use crate::rounding::snd_jain;
use crate::steiner::steiner_forest;
use crate::{Demand, EdgeSet, Error, Rational, Result};

/// 2-RSND: every demand at most 2. Cost at most twice optimal.
pub fn rsnd2(g: &Multigraph, demands: &[Demand]) -> Result<EdgeSet> {
    if let Some(d) = demands.iter().find(|d| d.k > 2) {
        return Err(Error::invalid(format!(
            "demand ({}, {}, {}) exceeds 2",
            d.s, d.t, d.k
        )));
    }
    let r = DemandFunction::from_demands(demands);
    let (h, _) = solve_via_components(g, &r, |gc, ds| Ok(snd_jain(gc, ds)?.0))?;
    Ok(h)
}

/// Min-cost flow of 3 between two contracted boundaries.
#[derive(Debug, Clone)]
pub struct FlowSubproblem {
    pub graph: Multigraph,
    pub source: usize,
    pub sink: usize,
}

/// 2-RSND with one boundary contracted to `supernode`.
#[derive(Debug, Clone)]
pub struct ContractedRsnd {
    pub graph: Multigraph,
    pub supernode: usize,
    pub demands: Vec<Demand>,
}

/// The four subinstances of a chain component; degenerate ones are `None` or empty.
#[derive(Debug, Clone)]
pub struct ComponentSubproblems {
    pub flow: Option<FlowSubproblem>,
    /// Left boundary contracted, demand 2 to each right node.
    pub left_rsnd: Option<ContractedRsnd>,
    /// Right boundary contracted, demand 2 to each left node.
    pub right_rsnd: Option<ContractedRsnd>,
    /// Connected boundary pairs, as nodes of `g_i`.
    pub steiner_pairs: Vec<(usize, usize)>,
}

fn contracted_rsnd(g_i: &Multigraph, side: &NodeSet, targets: &NodeSet) -> Result<Option<ContractedRsnd>> {
    let c = g_i.contract(side)?;
    let demands: Vec<Demand> = targets
        .iter()
        .filter(|v| !side.contains(v))
        .map(|&v| Demand::new(c.supernode, c.node_map[v], 2))
        .collect();
    Ok((!demands.is_empty()).then_some(ContractedRsnd {
        graph: c.graph,
        supernode: c.supernode,
        demands,
    }))
}

pub fn component_subinstances(g_i: &Multigraph, left: &NodeSet, right: &NodeSet) -> Result<ComponentSubproblems> {
    if left.is_empty() || right.is_empty() {
        return Err(Error::invalid("chain boundaries must be nonempty"));
    }
    let flow = if left.is_disjoint(right) {
        let first = g_i.contract(left)?;
        let mapped: NodeSet = right.iter().map(|&v| first.node_map[v]).collect();
        let second = first.graph.contract(&mapped)?;
        Some(FlowSubproblem {
            source: second.node_map[first.supernode],
            sink: second.supernode,
            graph: second.graph,
        })
    } else {
        None
    };
    let labels = g_i.component_labels();
    let mut steiner_pairs: Vec<(usize, usize)> = left
        .iter()
        .flat_map(|&u| right.iter().map(move |&v| (u, v)))
        .filter(|&(u, v)| u != v && labels[u] == labels[v])
        .map(|(u, v)| (u.min(v), u.max(v)))
        .collect();
    steiner_pairs.sort_unstable();
    steiner_pairs.dedup();
    Ok(ComponentSubproblems {
        flow,
        left_rsnd: contracted_rsnd(g_i, left, right)?,
        right_rsnd: contracted_rsnd(g_i, right, left)?,
        steiner_pairs,
    })
}

/// Cost of each subroutine's output in one chain component, before taking the union.
#[derive(Debug, Clone, PartialEq)]
pub struct PartCosts {
    pub flow: Rational,
    pub left_rsnd: Rational,
    pub right_rsnd: Rational,
    pub steiner: Rational,
    pub steiner_pairs: usize,
    /// Cost of the union restricted to the component.
    pub union: Rational,
}

/// Work done inside one 2-edge-connected block. Node ids are local to the block.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTrace {
    /// Original ids of the block's nodes, indexed by local id.
    pub nodes: Vec<usize>,
    pub demand: Demand,
    pub chain: Option<Chain>,
    /// Cost of the three cheapest disjoint paths when there is no chain.
    pub direct_flow_cost: Option<Rational>,
    pub parts: Vec<PartCosts>,
    pub separator_cost: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Rsnd3Trace {
    pub required_bridges: EdgeSet,
    pub blocks: Vec<BlockTrace>,
}

/// Single demand `(s, t, 3)`. Cost at most 27/4 times optimal.
pub fn rsnd3_single(g: &Multigraph, s: usize, t: usize) -> Result<(EdgeSet, Rsnd3Trace)> {
    if s == t {
        return Err(Error::invalid("s and t must differ"));
    }
    let r = DemandFunction::from_demands(&[Demand::new(s, t, 3)]);
    let mut blocks = Vec::new();
    let (h, reduced) = solve_via_components(g, &r, |gc, ds| {
        let [d] = ds else {
            return Err(Error::internal(format!(
                "expected one lifted demand per block, got {}",
                ds.len()
            )));
        };
        let (h, mut trace) = solve_block(gc, d.s, d.t)?;
        trace.nodes = (0..gc.node_count()).collect();
        blocks.push(trace);
        Ok(h)
    })?;
    let mut block_iter = blocks.into_iter();
    let mut blocks = Vec::new();
    for (c, nodes) in reduced.structure.tree.components.iter().enumerate() {
        if reduced.component_demands(c).is_empty() {
            continue;
        }
        let mut b = block_iter.next().expect("one trace per solved block");
        b.nodes = nodes.iter().copied().collect();
        blocks.push(b);
    }
    Ok((
        h,
        Rsnd3Trace {
            required_bridges: reduced.required_bridges,
            blocks,
        },
    ))
}

fn solve_block(g: &Multigraph, s: usize, t: usize) -> Result<(EdgeSet, BlockTrace)> {
    let demand = Demand::new(s, t, 3);
    let Some(chain) = build_chain(g, s, t)? else {
        let flow = cheapest_disjoint_paths(g, s, t, 3)?;
        return Ok((
            flow.support(),
            BlockTrace {
                nodes: Vec::new(),
                demand,
                chain: None,
                direct_flow_cost: Some(flow.cost),
                parts: Vec::new(),
                separator_cost: Rational::default(),
            },
        ));
    };
    let separators = chain.separator_edges();
    let mut h = separators.clone();
    let mut parts = Vec::new();
    for (i, nodes) in chain.components.iter().enumerate() {
        let sub = g.induced_subgraph(nodes)?;
        let left = sub.to_local(&chain.left_boundaries[i]);
        let right = sub.to_local(&chain.right_boundaries[i]);
        let sp = component_subinstances(&sub.graph, &left, &right)?;
        if sp.steiner_pairs.len() > 4 {
            return Err(Error::internal(format!(
                "{} Steiner pairs in one chain component",
                sp.steiner_pairs.len()
            )));
        }
        let flow = match &sp.flow {
            Some(f) => cheapest_disjoint_paths(&f.graph, f.source, f.sink, 3)?.support(),
            None => EdgeSet::new(),
        };
        let rsnd = |inst: &Option<ContractedRsnd>| match inst {
            Some(c) => rsnd2(&c.graph, &c.demands),
            None => Ok(EdgeSet::new()),
        };
        let left_rsnd = rsnd(&sp.left_rsnd)?;
        let right_rsnd = rsnd(&sp.right_rsnd)?;
        let steiner = steiner_forest(&sub.graph, &sp.steiner_pairs)?;
        let mut union = flow.clone();
        union.extend(&left_rsnd);
        union.extend(&right_rsnd);
        union.extend(&steiner);
        parts.push(PartCosts {
            flow: g.weight_of(&flow),
            left_rsnd: g.weight_of(&left_rsnd),
            right_rsnd: g.weight_of(&right_rsnd),
            steiner: g.weight_of(&steiner),
            steiner_pairs: sp.steiner_pairs.len(),
            union: g.weight_of(&union),
        });
        h.extend(union);
    }
    let separator_cost = g.weight_of(&separators);
    Ok((
        h,
        BlockTrace {
            nodes: Vec::new(),
            demand,
            chain: Some(chain),
            direct_flow_cost: None,
            parts,
            separator_cost,
        },
    ))
}
