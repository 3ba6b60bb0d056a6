//! Reduction from general instances to 2-edge-connected ones: bridges split the graph into
//! a tree of 2-edge-connected components, demands are lifted onto the terminals where
//! their routes enter and leave each component, and component solutions are reassembled.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{ComponentTree, Multigraph, NodeSet};
use crate::{Demand, EdgeId, EdgeSet, Error, Result};

/// Symmetric sparse demand `r(u, v)`; absent pairs are zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DemandFunction {
    map: BTreeMap<(usize, usize), u32>,
}

impl DemandFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Maximum over duplicate pairs; self-pairs and zero demands are dropped.
    pub fn from_demands(demands: &[Demand]) -> Self {
        let mut r = Self::new();
        for d in demands {
            r.raise(d.s, d.t, d.k);
        }
        r
    }

    fn key(u: usize, v: usize) -> (usize, usize) {
        (u.min(v), u.max(v))
    }

    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.map.get(&Self::key(u, v)).copied().unwrap_or(0)
    }

    /// Sets `r(u, v) = max(r(u, v), k)`.
    pub fn raise(&mut self, u: usize, v: usize, k: u32) {
        if u == v || k == 0 {
            return;
        }
        let slot = self.map.entry(Self::key(u, v)).or_insert(0);
        *slot = (*slot).max(k);
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.map.iter().map(|(&(u, v), &k)| (u, v, k))
    }

    pub fn to_demands(&self) -> Vec<Demand> {
        self.iter().map(|(u, v, k)| Demand::new(u, v, k)).collect()
    }

    pub fn max_value(&self) -> u32 {
        self.map.values().copied().max().unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// One component visited by a cross-component route, with the nodes where the route enters
/// and leaves it (the demand endpoints themselves at either end).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RouteStep {
    pub component: usize,
    pub entry: usize,
    pub exit: usize,
}

/// Bridges, terminals and the component tree of a graph.
#[derive(Debug, Clone)]
pub struct BridgeStructure {
    pub tree: ComponentTree,
    /// Endpoints of bridges.
    pub terminals: NodeSet,
    endpoints: BTreeMap<EdgeId, (usize, usize)>,
}

impl BridgeStructure {
    pub fn new(g: &Multigraph) -> Self {
        let tree = g.bridges_and_2ecc();
        let mut terminals = NodeSet::new();
        let mut endpoints = BTreeMap::new();
        for id in &tree.tree_edges {
            let e = g.edge(*id).expect("bridge is an edge of the graph");
            terminals.insert(e.u);
            terminals.insert(e.v);
            endpoints.insert(*id, (e.u, e.v));
        }
        Self {
            tree,
            terminals,
            endpoints,
        }
    }

    pub fn component_of(&self, v: usize) -> usize {
        self.tree.component_of[v]
    }

    /// Bridges on every `u`–`v` path; `None` if `u` and `v` are disconnected.
    pub fn bridges_between(&self, u: usize, v: usize) -> Option<Vec<EdgeId>> {
        self.tree
            .tree_path(self.component_of(u), self.component_of(v))
    }

    /// Components crossed by the `u`–`v` route, in order.
    pub fn route(&self, u: usize, v: usize) -> Option<Vec<RouteStep>> {
        let bridges = self.bridges_between(u, v)?;
        let mut steps = Vec::with_capacity(bridges.len() + 1);
        let mut entry = u;
        let mut component = self.component_of(u);
        for b in bridges {
            let (a, c) = self.endpoints[&b];
            let (exit, next) = if self.component_of(a) == component {
                (a, c)
            } else {
                (c, a)
            };
            steps.push(RouteStep {
                component,
                entry,
                exit,
            });
            entry = next;
            component = self.component_of(next);
        }
        steps.push(RouteStep {
            component,
            entry,
            exit: v,
        });
        Some(steps)
    }

    /// `(u, v) ∈ P_t`: different components, and every `u`–`v` path uses a bridge at `t`.
    pub fn pt_contains(&self, t: usize, u: usize, v: usize) -> bool {
        if self.component_of(u) == self.component_of(v) {
            return false;
        }
        self.bridges_between(u, v).is_some_and(|path| {
            path.iter().any(|b| {
                let (a, c) = self.endpoints[b];
                a == t || c == t
            })
        })
    }
}

/// `terminals_and_pt` under its structural name.
pub fn terminals_and_pt(g: &Multigraph) -> BridgeStructure {
    BridgeStructure::new(g)
}

#[derive(Debug, Clone)]
pub struct ReducedInstance {
    pub structure: BridgeStructure,
    /// Lifted demands, including the value-1 cross-component pairs.
    pub lifted: DemandFunction,
    pub cross_component_ones: BTreeSet<(usize, usize)>,
    /// Bridges on the route of some positive cross-component demand.
    pub required_bridges: EdgeSet,
}

impl ReducedInstance {
    /// Lifted demands with both endpoints in component `c`.
    pub fn component_demands(&self, c: usize) -> Vec<Demand> {
        self.lifted
            .iter()
            .filter(|&(u, v, _)| {
                self.structure.component_of(u) == c && self.structure.component_of(v) == c
            })
            .map(|(u, v, k)| Demand::new(u, v, k))
            .collect()
    }
}

/// Lifts `r` so that each 2-edge-connected component can be solved on its own.
pub fn lift_demands(g: &Multigraph, r: &DemandFunction) -> Result<ReducedInstance> {
    if let Some((u, v, _)) = r.iter().find(|&(u, v, _)| u.max(v) >= g.node_count()) {
        return Err(Error::invalid(format!("demand ({u}, {v}) outside the graph")));
    }
    let structure = BridgeStructure::new(g);
    let mut lifted = DemandFunction::new();
    let mut cross = BTreeSet::new();
    let mut required_bridges = EdgeSet::new();
    for (u, v, k) in r.iter() {
        let Some(route) = structure.route(u, v) else {
            continue;
        };
        if route.len() == 1 {
            lifted.raise(u, v, k);
            continue;
        }
        for step in &route {
            lifted.raise(step.entry, step.exit, k);
        }
        lifted.raise(u, v, 1);
        cross.insert((u, v));
        required_bridges.extend(structure.bridges_between(u, v).unwrap_or_default());
    }
    Ok(ReducedInstance {
        structure,
        lifted,
        cross_component_ones: cross,
        required_bridges,
    })
}

/// Runs `solver` on `G[C]` with the lifted demands of every component `C` that has any,
/// and adds the required bridges. Demands handed to `solver` use local node indices;
/// returned edge ids are those of `g`.
pub fn solve_via_components<F>(g: &Multigraph, r: &DemandFunction, mut solver: F) -> Result<(EdgeSet, ReducedInstance)>
where
    F: FnMut(&Multigraph, &[Demand]) -> Result<EdgeSet>,
{
    let reduced = lift_demands(g, r)?;
    let mut h = reduced.required_bridges.clone();
    for (c, nodes) in reduced.structure.tree.components.iter().enumerate() {
        let demands = reduced.component_demands(c);
        if demands.is_empty() {
            continue;
        }
        let sub = g.induced_subgraph(nodes)?;
        let local: Vec<Demand> = demands
            .iter()
            .map(|d| {
                Demand::new(
                    sub.local[d.s].expect("demand inside component"),
                    sub.local[d.t].expect("demand inside component"),
                    d.k,
                )
            })
            .collect();
        let part = solver(&sub.graph, &local)?;
        if let Some(id) = part.iter().find(|id| !sub.graph.contains_edge(**id)) {
            return Err(Error::internal(format!(
                "component solver returned {id}, which lies outside its component"
            )));
        }
        h.extend(part);
    }
    Ok((h, reduced))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{exact_opt, verify_rsnd, Requirement, DEFAULT_OPT_BUDGET};
    use proptest::prelude::*;

    /// Triangles {0,1,2} and {3,4,5} joined by the bridge (2,3), which is edge 3.
    fn two_triangles() -> Multigraph {
        Multigraph::unweighted(
            6,
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)],
        )
        .unwrap()
    }

    fn exact_solver(g: &Multigraph, ds: &[Demand]) -> Result<EdgeSet> {
        Ok(exact_opt(g, &Requirement::Pairs(ds.to_vec()), DEFAULT_OPT_BUDGET)?.1)
    }

    #[test]
    fn terminals_and_pairs() {
        let g = two_triangles();
        let b = terminals_and_pt(&g);
        assert_eq!(b.terminals, NodeSet::from([2, 3]));
        assert!(b.pt_contains(2, 0, 4));
        assert!(b.pt_contains(3, 0, 4));
        assert!(!b.pt_contains(2, 0, 1));

        let k4 = Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(terminals_and_pt(&k4).terminals.is_empty());

        let path = Multigraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let b = terminals_and_pt(&path);
        assert_eq!(b.terminals, NodeSet::from([0, 1, 2]));
        assert!(b.pt_contains(1, 0, 2));
    }

    #[test]
    fn lifting_examples() {
        let g = two_triangles();
        let r = DemandFunction::from_demands(&[Demand::new(0, 4, 2)]);
        let red = lift_demands(&g, &r).unwrap();
        assert_eq!(red.lifted.get(0, 2), 2);
        assert_eq!(red.lifted.get(3, 4), 2);
        assert_eq!(red.lifted.get(0, 4), 1);
        assert_eq!(red.required_bridges, EdgeSet::from([EdgeId(3)]));

        let k4 = Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let r = DemandFunction::from_demands(&[Demand::new(0, 3, 2), Demand::new(1, 2, 1)]);
        assert_eq!(lift_demands(&k4, &r).unwrap().lifted, r);

        // two terminals of the middle component of a path of triangles
        let mut pairs = vec![(0, 1), (1, 2), (0, 2)];
        pairs.extend([(2, 3), (3, 4), (4, 5), (3, 5), (5, 6), (6, 7), (7, 8), (6, 8)]);
        let g = Multigraph::unweighted(9, &pairs).unwrap();
        let r = DemandFunction::from_demands(&[Demand::new(3, 5, 2)]);
        assert_eq!(lift_demands(&g, &r).unwrap().lifted.get(3, 5), 2);
    }

    #[test]
    fn terminal_endpoint_is_lifted_to_its_exit() {
        // 0 is a terminal through the pendant bridge (0,6); its demand to 4 leaves via 2
        let g = Multigraph::unweighted(
            7,
            &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5), (0, 6)],
        )
        .unwrap();
        let r = DemandFunction::from_demands(&[Demand::new(0, 4, 2)]);
        let red = lift_demands(&g, &r).unwrap();
        assert_eq!(red.lifted.get(0, 2), 2);
    }

    #[test]
    fn assembly_examples() {
        let g = two_triangles();
        let r = DemandFunction::from_demands(&[Demand::new(0, 4, 2)]);
        let (h, _) = solve_via_components(&g, &r, exact_solver).unwrap();
        assert_eq!(h.len(), 7);
        let (cost, _) = exact_opt(&g, &Requirement::Pairs(r.to_demands()), DEFAULT_OPT_BUDGET).unwrap();
        assert_eq!(g.weight_of(&h), cost);

        let (h, _) = solve_via_components(&g, &DemandFunction::new(), exact_solver).unwrap();
        assert!(h.is_empty());

        let r = DemandFunction::from_demands(&[Demand::new(3, 5, 2)]);
        let (h, _) = solve_via_components(&g, &r, exact_solver).unwrap();
        assert_eq!(h, EdgeSet::from([EdgeId(4), EdgeId(5), EdgeId(6)]));
    }

    fn arb_instance() -> impl Strategy<Value = (Multigraph, Vec<Demand>)> {
        (4usize..8).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0..n), n - 1..n + 4),
                prop::collection::vec((0..n, 0..n, 1u32..4), 1..4),
            )
                .prop_map(move |(es, ds)| {
                    let es: Vec<_> = es.into_iter().filter(|(u, v)| u != v).take(11).collect();
                    let ds = ds
                        .into_iter()
                        .filter(|(s, t, _)| s != t)
                        .map(|(s, t, k)| Demand::new(s, t, k))
                        .collect();
                    (Multigraph::unweighted(n, &es).unwrap(), ds)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn pt_matches_path_definition((g, _) in arb_instance()) {
            let b = terminals_and_pt(&g);
            for &t in &b.terminals {
                let at_t: EdgeSet = b.tree.tree_edges.iter().copied().filter(|id| {
                    let e = g.edge(*id).unwrap();
                    e.u == t || e.v == t
                }).collect();
                let cut = g.without(&at_t);
                for u in 0..g.node_count() {
                    for v in 0..g.node_count() {
                        let expected = b.component_of(u) != b.component_of(v)
                            && g.connected(u, v)
                            && !cut.connected(u, v);
                        prop_assert_eq!(b.pt_contains(t, u, v), expected);
                    }
                }
            }
        }

        #[test]
        fn lifted_and_original_agree_on_every_subgraph(
            (g, ds) in arb_instance(),
            masks in prop::collection::vec(any::<u64>(), 6),
        ) {
            let r = DemandFunction::from_demands(&ds);
            let red = lift_demands(&g, &r).unwrap();
            let original = Requirement::Pairs(r.to_demands());
            let lifted = Requirement::Pairs(red.lifted.to_demands());
            for mask in masks {
                let h: EdgeSet = g.edges().iter().enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.id).collect();
                prop_assert_eq!(
                    verify_rsnd(&g, &h, &original).unwrap().is_none(),
                    verify_rsnd(&g, &h, &lifted).unwrap().is_none()
                );
            }
        }

        #[test]
        fn exact_components_give_exact_optimum((g, ds) in arb_instance()) {
            let r = DemandFunction::from_demands(&ds);
            let req = Requirement::Pairs(r.to_demands());
            let (h, red) = solve_via_components(&g, &r, exact_solver).unwrap();
            prop_assert!(verify_rsnd(&g, &h, &req).unwrap().is_none());
            let (cost, opt) = exact_opt(&g, &req, DEFAULT_OPT_BUDGET).unwrap();
            prop_assert_eq!(g.weight_of(&h), cost);
            prop_assert!(red.required_bridges.is_subset(&opt));
        }
    }
}
