//! Undirected multigraphs with stable edge identifiers.
//!
//! Every derived graph (induced subgraph, contraction, edge restriction) keeps the ids of the
//! edges it retains, so a solution computed on a derived graph is directly a solution on the
//! original one.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::{Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

pub type EdgeSet = BTreeSet<EdgeId>;
pub type NodeSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge {
    pub id: EdgeId,
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

impl Edge {
    pub fn new(id: usize, u: usize, v: usize, weight: Rational) -> Self {
        Self {
            id: EdgeId(id),
            u,
            v,
            weight,
        }
    }

    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// True when exactly one endpoint lies inside the set described by `inside`.
    pub fn crosses(&self, inside: &[bool]) -> bool {
        inside[self.u] != inside[self.v]
    }
}

/// Undirected multigraph. Edges are kept sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Multigraph {
    node_count: usize,
    edges: Vec<Edge>,
}

/// Result of contracting a node set into one supernode.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub graph: Multigraph,
    pub supernode: usize,
    /// `node_map[old]` is the node index of `old` in the contracted graph.
    pub node_map: Vec<usize>,
}

/// Induced subgraph with its node relabelling.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: Multigraph,
    /// `nodes[new]` is the original index of node `new`.
    pub nodes: Vec<usize>,
    /// `local[old]` is the new index of `old`, if it was kept.
    pub local: Vec<Option<usize>>,
}

impl Subgraph {
    pub fn to_local(&self, set: &NodeSet) -> NodeSet {
        set.iter().filter_map(|&v| self.local[v]).collect()
    }

    pub fn to_original(&self, set: &NodeSet) -> NodeSet {
        set.iter().map(|&v| self.nodes[v]).collect()
    }
}

/// A node subset together with its boundary `δ(S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutSide {
    pub nodes: NodeSet,
    pub boundary: EdgeSet,
}

impl CutSide {
    pub fn new(g: &Multigraph, nodes: NodeSet) -> Result<Self> {
        let boundary = g.cut_edges(&nodes)?;
        Ok(Self { nodes, boundary })
    }
}

/// The 2-edge-connected components of a graph and the bridges joining them.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTree {
    pub components: Vec<NodeSet>,
    pub tree_edges: EdgeSet,
    /// `component_of[v]` indexes into `components`.
    pub component_of: Vec<usize>,
    /// For each component: `(bridge, neighbouring component)` pairs.
    adjacency: Vec<Vec<(EdgeId, usize)>>,
}

impl ComponentTree {
    /// Bridges on the unique tree path between two components, in path order.
    /// `None` when the components lie in different connected components of the graph.
    pub fn tree_path(&self, from: usize, to: usize) -> Option<Vec<EdgeId>> {
        if from == to {
            return Some(Vec::new());
        }
        let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; self.components.len()];
        let mut seen = vec![false; self.components.len()];
        let mut queue = std::collections::VecDeque::from([from]);
        seen[from] = true;
        while let Some(c) = queue.pop_front() {
            if c == to {
                break;
            }
            for &(e, d) in &self.adjacency[c] {
                if !seen[d] {
                    seen[d] = true;
                    parent[d] = Some((c, e));
                    queue.push_back(d);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut c = to;
        while let Some((p, e)) = parent[c] {
            path.push(e);
            c = p;
        }
        path.reverse();
        Some(path)
    }

    pub fn neighbours(&self, component: usize) -> &[(EdgeId, usize)] {
        &self.adjacency[component]
    }
}

/// Union-find over `0..n` with path halving.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

impl Multigraph {
    pub fn new(node_count: usize, mut edges: Vec<Edge>) -> Result<Self> {
        edges.sort_by_key(|e| e.id);
        for pair in edges.windows(2) {
            if pair[0].id == pair[1].id {
                return Err(Error::invalid(format!("duplicate edge id {}", pair[0].id)));
            }
        }
        for e in &edges {
            if e.u >= node_count || e.v >= node_count {
                return Err(Error::invalid(format!(
                    "edge {} has endpoint outside 0..{node_count}",
                    e.id
                )));
            }
            if e.u == e.v {
                return Err(Error::invalid(format!("edge {} is a self-loop", e.id)));
            }
            if e.weight.is_negative() {
                return Err(Error::invalid(format!("edge {} has negative weight", e.id)));
            }
        }
        Ok(Self { node_count, edges })
    }

    /// Unit-weight graph; edge ids are the positions in `pairs`.
    pub fn unweighted(node_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(u, v))| Edge::new(i, u, v, crate::int(1)))
            .collect();
        Self::new(node_count, edges)
    }

    /// Weighted graph; edge ids are the positions in `edges`.
    pub fn weighted(node_count: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, (u, v, w))| Edge::new(i, *u, *v, w.clone()))
            .collect();
        Self::new(node_count, edges)
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn position(&self, id: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&id, |e| e.id).ok()
    }

    pub fn edge(&self, id: EdgeId) -> Option<&Edge> {
        self.position(id).map(|p| &self.edges[p])
    }

    pub fn edge_ids(&self) -> EdgeSet {
        self.edges.iter().map(|e| e.id).collect()
    }

    pub fn contains_edge(&self, id: EdgeId) -> bool {
        self.position(id).is_some()
    }

    /// Sum of the weights of the listed edges; ids not in the graph are ignored.
    pub fn weight_of<'a>(&self, ids: impl IntoIterator<Item = &'a EdgeId>) -> Rational {
        ids.into_iter()
            .filter_map(|&id| self.edge(id))
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    pub fn total_weight(&self) -> Rational {
        self.edges
            .iter()
            .fold(Rational::zero(), |acc, e| acc + &e.weight)
    }

    /// True when all edges carry the same weight.
    pub fn is_uniformly_weighted(&self) -> bool {
        self.edges.windows(2).all(|w| w[0].weight == w[1].weight)
    }

    /// `adjacency()[v]` lists `(neighbour, edge position)`.
    pub fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.node_count];
        for (p, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, p));
            adj[e.v].push((e.u, p));
        }
        adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.u == v || e.v == v).count()
    }

    pub fn membership(&self, set: &NodeSet) -> Vec<bool> {
        let mut inside = vec![false; self.node_count];
        for &v in set {
            if v < self.node_count {
                inside[v] = true;
            }
        }
        inside
    }

    fn check_nodes(&self, set: &NodeSet) -> Result<()> {
        match set.iter().next_back() {
            Some(&v) if v >= self.node_count => Err(Error::invalid(format!(
                "node {v} outside 0..{}",
                self.node_count
            ))),
            _ => Ok(()),
        }
    }

    /// `δ(S)`: ids of the edges with exactly one endpoint in `s`.
    pub fn cut_edges(&self, s: &NodeSet) -> Result<EdgeSet> {
        self.check_nodes(s)?;
        if s.is_empty() || s.len() == self.node_count {
            return Err(Error::invalid("cut side must be a nonempty proper subset"));
        }
        Ok(self.boundary(&self.membership(s)))
    }

    /// `δ(S)` for a membership vector; no properness check.
    pub fn boundary(&self, inside: &[bool]) -> EdgeSet {
        self.edges
            .iter()
            .filter(|e| e.crosses(inside))
            .map(|e| e.id)
            .collect()
    }

    /// Merges `s` into one node. Internal edges disappear, all others keep id and weight.
    /// The supernode takes the slot of the smallest member of `s`.
    pub fn contract(&self, s: &NodeSet) -> Result<Contraction> {
        self.check_nodes(s)?;
        let Some(&anchor) = s.first() else {
            return Err(Error::invalid("cannot contract an empty node set"));
        };
        let mut node_map = vec![0; self.node_count];
        let mut next = 0;
        let mut supernode = 0;
        for (v, slot) in node_map.iter_mut().enumerate() {
            if s.contains(&v) && v != anchor {
                continue;
            }
            if v == anchor {
                supernode = next;
            }
            *slot = next;
            next += 1;
        }
        for &v in s {
            node_map[v] = supernode;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| node_map[e.u] != node_map[e.v])
            .map(|e| Edge {
                id: e.id,
                u: node_map[e.u],
                v: node_map[e.v],
                weight: e.weight.clone(),
            })
            .collect();
        Ok(Contraction {
            graph: Multigraph::new(next, edges)?,
            supernode,
            node_map,
        })
    }

    /// `G[S]` with nodes relabelled in increasing original order.
    pub fn induced_subgraph(&self, s: &NodeSet) -> Result<Subgraph> {
        self.check_nodes(s)?;
        let nodes: Vec<usize> = s.iter().copied().collect();
        let mut local = vec![None; self.node_count];
        for (i, &v) in nodes.iter().enumerate() {
            local[v] = Some(i);
        }
        let edges = self
            .edges
            .iter()
            .filter_map(|e| match (local[e.u], local[e.v]) {
                (Some(u), Some(v)) => Some(Edge {
                    id: e.id,
                    u,
                    v,
                    weight: e.weight.clone(),
                }),
                _ => None,
            })
            .collect();
        Ok(Subgraph {
            graph: Multigraph::new(nodes.len(), edges)?,
            nodes,
            local,
        })
    }

    /// Same node set, only the edges in `keep`.
    pub fn restrict(&self, keep: &EdgeSet) -> Multigraph {
        Multigraph {
            node_count: self.node_count,
            edges: self
                .edges
                .iter()
                .filter(|e| keep.contains(&e.id))
                .cloned()
                .collect(),
        }
    }

    /// Same node set without the edges in `drop`.
    pub fn without(&self, drop: &EdgeSet) -> Multigraph {
        Multigraph {
            node_count: self.node_count,
            edges: self
                .edges
                .iter()
                .filter(|e| !drop.contains(&e.id))
                .cloned()
                .collect(),
        }
    }

    /// Component label per node; labels are dense and ordered by smallest member.
    pub fn component_labels(&self) -> Vec<usize> {
        let mut sets = DisjointSets::new(self.node_count);
        for e in &self.edges {
            sets.union(e.u, e.v);
        }
        let mut label = vec![usize::MAX; self.node_count];
        let mut next = 0;
        (0..self.node_count)
            .map(|v| {
                let r = sets.find(v);
                if label[r] == usize::MAX {
                    label[r] = next;
                    next += 1;
                }
                label[r]
            })
            .collect()
    }

    pub fn connected_components(&self) -> Vec<NodeSet> {
        let labels = self.component_labels();
        let count = labels.iter().copied().max().map_or(0, |m| m + 1);
        let mut comps = vec![NodeSet::new(); count];
        for (v, &l) in labels.iter().enumerate() {
            comps[l].insert(v);
        }
        comps
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        let labels = self.component_labels();
        labels[a] == labels[b]
    }

    /// Bridges (via low-link DFS keyed on edge positions, so parallel edges are handled)
    /// and the 2-edge-connected components they separate.
    pub fn bridges_and_2ecc(&self) -> ComponentTree {
        let n = self.node_count;
        let adj = self.adjacency();
        let mut tin = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut is_bridge = vec![false; self.edges.len()];
        let mut timer = 0;
        for root in 0..n {
            if tin[root] != usize::MAX {
                continue;
            }
            // (node, edge position used to enter it, next adjacency index)
            let mut stack: Vec<(usize, Option<usize>, usize)> = vec![(root, None, 0)];
            tin[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(top) = stack.last_mut() {
                let (v, via) = (top.0, top.1);
                if top.2 < adj[v].len() {
                    let (w, p) = adj[v][top.2];
                    top.2 += 1;
                    if Some(p) == via {
                        continue;
                    }
                    if tin[w] == usize::MAX {
                        tin[w] = timer;
                        low[w] = timer;
                        timer += 1;
                        stack.push((w, Some(p), 0));
                    } else {
                        low[v] = low[v].min(tin[w]);
                    }
                } else {
                    stack.pop();
                    if let (Some(p), Some(&(parent, _, _))) = (via, stack.last()) {
                        low[parent] = low[parent].min(low[v]);
                        if low[v] > tin[parent] {
                            is_bridge[p] = true;
                        }
                    }
                }
            }
        }

        let tree_edges: EdgeSet = self
            .edges
            .iter()
            .zip(&is_bridge)
            .filter(|(_, &b)| b)
            .map(|(e, _)| e.id)
            .collect();
        let component_of = self.without(&tree_edges).component_labels();
        let count = component_of.iter().copied().max().map_or(0, |m| m + 1);
        let mut components = vec![NodeSet::new(); count];
        for (v, &c) in component_of.iter().enumerate() {
            components[c].insert(v);
        }
        let mut adjacency = vec![Vec::new(); count];
        for e in self.edges.iter().filter(|e| tree_edges.contains(&e.id)) {
            let (cu, cv) = (component_of[e.u], component_of[e.v]);
            adjacency[cu].push((e.id, cv));
            adjacency[cv].push((e.id, cu));
        }
        ComponentTree {
            components,
            tree_edges,
            component_of,
            adjacency,
        }
    }
}
