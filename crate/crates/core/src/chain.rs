//! Closest important 2-separators, the s–t 2-chain, and the per-component structure checker.

use std::fmt;

use crate::flow::{edge_connectivity, max_flow_min_cut, unit_capacities};
use crate::graph::{DisjointSets, Multigraph, NodeSet};
use crate::verify::for_each_combination;
use crate::{EdgeId, EdgeSet, Error, Result};

/// A size-2 separator together with the nodes still reachable from the source side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separator {
    pub edges: EdgeSet,
    pub reachable: NodeSet,
}

/// The minimum `X`–`t` cut closest to `X` when it has size 2; `None` when it has size ≥ 3.
pub fn closest_important_separator_2(g: &Multigraph, x: &NodeSet, t: usize) -> Result<Option<Separator>> {
    if x.contains(&t) {
        return Err(Error::invalid(format!("sink {t} lies in the source set")));
    }
    let flow = max_flow_min_cut(g, &unit_capacities(g), x, &NodeSet::from([t]))?;
    if flow.value <= crate::int(1) {
        return Err(Error::Structural(format!(
            "input not 2-connected between {x:?} and {t} (min cut {})",
            flow.value
        )));
    }
    if flow.value >= crate::int(3) {
        return Ok(None);
    }
    let edges = g.cut_edges(&flow.source_side)?;
    debug_assert_eq!(edges.len(), 2);
    Ok(Some(Separator {
        edges,
        reachable: flow.source_side,
    }))
}

fn reachable_without(g: &Multigraph, x: &NodeSet, removed: &EdgeSet) -> NodeSet {
    let mut sets = DisjointSets::new(g.node_count());
    for e in g.edges() {
        if !removed.contains(&e.id) {
            sets.union(e.u, e.v);
        }
    }
    let roots: NodeSet = x.iter().map(|&v| sets.find(v)).collect();
    (0..g.node_count())
        .filter(|&v| roots.contains(&sets.find(v)))
        .collect()
}

/// Checks importance by enumeration: `sep` separates `x` from `y`, is minimal, and no separator
/// of size at most `|sep|` leaves a strictly smaller reachable set.
pub fn brute_force_important(g: &Multigraph, x: &NodeSet, y: &NodeSet, sep: &EdgeSet) -> bool {
    let separates = |s: &EdgeSet| -> Option<NodeSet> {
        let r = reachable_without(g, x, s);
        r.is_disjoint(y).then_some(r)
    };
    let Some(reach) = separates(sep) else {
        return false;
    };
    let ids: Vec<EdgeId> = sep.iter().copied().collect();
    for size in 0..ids.len() {
        let mut smaller = false;
        for_each_combination(ids.len(), size, |c| {
            smaller = separates(&c.iter().map(|&i| ids[i]).collect()).is_some();
            smaller
        });
        if smaller {
            return false;
        }
    }
    let all: Vec<EdgeId> = g.edges().iter().map(|e| e.id).collect();
    let mut closer = false;
    for size in 0..=sep.len() {
        for_each_combination(all.len(), size, |c| {
            let other: EdgeSet = c.iter().map(|&i| all[i]).collect();
            closer = separates(&other).is_some_and(|r| r.len() < reach.len() && r.is_subset(&reach));
            closer
        });
        if closer {
            return false;
        }
    }
    true
}

/// Components `R_0..R_p` joined by 2-edge separators `S_0..S_{p-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub s: usize,
    pub t: usize,
    pub components: Vec<NodeSet>,
    pub separators: Vec<EdgeSet>,
    /// `V_(i,ℓ)`: nodes of `R_i` incident to `S_{i-1}`, or `{s}`.
    pub left_boundaries: Vec<NodeSet>,
    /// `V_(i,r)`: nodes of `R_i` incident to `S_i`, or `{t}`.
    pub right_boundaries: Vec<NodeSet>,
}

impl Chain {
    /// Index of the last component.
    pub fn p(&self) -> usize {
        self.components.len() - 1
    }

    pub fn separator_edges(&self) -> EdgeSet {
        self.separators.iter().flatten().copied().collect()
    }
}

/// The s–t 2-chain of a 2-edge-connected graph, or `None` if every s–t cut has size ≥ 3.
pub fn build_chain(g: &Multigraph, s: usize, t: usize) -> Result<Option<Chain>> {
    let n = g.node_count();
    if s >= n || t >= n {
        return Err(Error::invalid("chain endpoint outside the graph"));
    }
    if s == t {
        return Err(Error::invalid("chain endpoints must differ"));
    }
    if g.connected_components().len() != 1 || !g.bridges_and_2ecc().tree_edges.is_empty() {
        return Err(Error::Structural("input graph is not 2-edge-connected".into()));
    }
    let mut chain = Chain {
        s,
        t,
        components: Vec::new(),
        separators: Vec::new(),
        left_boundaries: Vec::new(),
        right_boundaries: Vec::new(),
    };
    let mut residue: NodeSet = (0..n).collect();
    let mut left = NodeSet::from([s]);
    loop {
        let sub = g.induced_subgraph(&residue)?;
        let found = if left.contains(&t) {
            None
        } else {
            let local_t = sub.local[t].expect("t is never removed");
            closest_important_separator_2(&sub.graph, &sub.to_local(&left), local_t)?
        };
        let Some(sep) = found else {
            if chain.components.is_empty() {
                return Ok(None);
            }
            chain.components.push(residue);
            chain.left_boundaries.push(left);
            chain.right_boundaries.push(NodeSet::from([t]));
            return Ok(Some(chain));
        };
        let reach = sub.to_original(&sep.reachable);
        let mut right = NodeSet::new();
        let mut next = NodeSet::new();
        for id in &sep.edges {
            let e = g.edge(*id).expect("separator edge exists");
            for v in [e.u, e.v] {
                if reach.contains(&v) {
                    right.insert(v);
                } else {
                    next.insert(v);
                }
            }
        }
        residue.retain(|v| !reach.contains(v));
        chain.components.push(reach);
        chain.separators.push(sep.edges);
        chain.left_boundaries.push(left);
        chain.right_boundaries.push(right);
        left = next;
    }
}

/// One failed condition of the structure characterization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureViolation {
    SeparatorEdgeAbsent { separator: usize, edge: EdgeId },
    /// Fewer than three edge-disjoint boundary-to-boundary paths in `H_i`.
    FewDisjointPaths { component: usize, paths: u64 },
    /// A set-to-node demand of value 2 fails under `fault`; `from_left` tells which boundary
    /// was contracted.
    SetDemand {
        component: usize,
        from_left: bool,
        target: usize,
        fault: EdgeSet,
    },
    /// A boundary pair connected in `G_i` but not in `H_i`.
    BoundaryPair { component: usize, u: usize, v: usize },
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SeparatorEdgeAbsent { separator, edge } => {
                write!(f, "separator edge absent: {edge} of S_{separator}")
            }
            Self::FewDisjointPaths { component, paths } => {
                write!(f, "component {component}: only {paths} disjoint boundary paths")
            }
            Self::SetDemand {
                component,
                from_left,
                target,
                fault,
            } => {
                let side = if *from_left { "left" } else { "right" };
                write!(
                    f,
                    "component {component}: {side} boundary loses node {target} under fault {fault:?}"
                )
            }
            Self::BoundaryPair { component, u, v } => {
                write!(f, "component {component}: boundary pair ({u}, {v}) disconnected")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

fn labels_without(g: &Multigraph, keep: impl Fn(EdgeId) -> bool) -> Vec<usize> {
    let mut sets = DisjointSets::new(g.node_count());
    for e in g.edges() {
        if keep(e.id) {
            sets.union(e.u, e.v);
        }
    }
    (0..g.node_count()).map(|v| sets.find(v)).collect()
}

/// Evaluates every condition of the structure characterization for `h` on `chain`.
pub fn check_structure(g: &Multigraph, h: &EdgeSet, chain: &Chain) -> Result<StructureReport> {
    let mut report = StructureReport::default();
    for (i, sep) in chain.separators.iter().enumerate() {
        for id in sep {
            if !h.contains(id) {
                report.violations.push(StructureViolation::SeparatorEdgeAbsent {
                    separator: i,
                    edge: *id,
                });
            }
        }
    }
    for (i, nodes) in chain.components.iter().enumerate() {
        let sub = g.induced_subgraph(nodes)?;
        let gi = &sub.graph;
        let hi = gi.restrict(h);
        let left = sub.to_local(&chain.left_boundaries[i]);
        let right = sub.to_local(&chain.right_boundaries[i]);

        if left.is_disjoint(&right) {
            let paths = edge_connectivity(&hi, &left, &right)?;
            if paths < 3 {
                report
                    .violations
                    .push(StructureViolation::FewDisjointPaths { component: i, paths });
            }
        }

        let in_h: EdgeSet = hi.edge_ids();
        let faults: Vec<Option<EdgeId>> =
            std::iter::once(None).chain(gi.edges().iter().map(|e| Some(e.id))).collect();
        'faults: for fault in faults {
            let g_lab = labels_without(gi, |id| Some(id) != fault);
            let h_lab = labels_without(gi, |id| Some(id) != fault && in_h.contains(&id));
            for (from_left, source, targets) in [(true, &left, &right), (false, &right, &left)] {
                for &target in targets.iter().filter(|v| !source.contains(v)) {
                    let reaches = |lab: &[usize]| source.iter().any(|&x| lab[x] == lab[target]);
                    if reaches(&g_lab) && !reaches(&h_lab) {
                        report.violations.push(StructureViolation::SetDemand {
                            component: i,
                            from_left,
                            target: sub.nodes[target],
                            fault: fault.into_iter().collect(),
                        });
                        break 'faults;
                    }
                }
            }
        }

        let g_lab = labels_without(gi, |_| true);
        let h_lab = labels_without(gi, |id| in_h.contains(&id));
        for &u in &left {
            for &v in &right {
                if u != v && g_lab[u] == g_lab[v] && h_lab[u] != h_lab[v] {
                    report.violations.push(StructureViolation::BoundaryPair {
                        component: i,
                        u: sub.nodes[u],
                        v: sub.nodes[v],
                    });
                }
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{gen_random, verify_rsnd, DemandSpec, GenParams, Requirement};
    use crate::Demand;
    use proptest::prelude::*;

    /// Two K4s on {0..3} and {4..7} joined by (2,4) and (3,5), which are edges 12 and 13.
    fn ch2() -> Multigraph {
        let mut pairs = Vec::new();
        for base in [0, 4] {
            for a in 0..4 {
                for b in a + 1..4 {
                    pairs.push((base + a, base + b));
                }
            }
        }
        pairs.extend([(2, 4), (3, 5)]);
        Multigraph::unweighted(8, &pairs).unwrap()
    }

    fn k4() -> Multigraph {
        Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn ids(v: &[usize]) -> EdgeSet {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    fn set(v: &[usize]) -> NodeSet {
        v.iter().copied().collect()
    }

    #[test]
    fn separator_examples() {
        let g = ch2();
        let sep = closest_important_separator_2(&g, &set(&[0]), 7).unwrap().unwrap();
        assert_eq!(sep.edges, ids(&[12, 13]));
        assert_eq!(sep.reachable, set(&[0, 1, 2, 3]));
        assert!(brute_force_important(&g, &set(&[0]), &set(&[7]), &sep.edges));

        assert_eq!(closest_important_separator_2(&k4(), &set(&[0]), 3).unwrap(), None);

        let c4 = Multigraph::unweighted(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let sep = closest_important_separator_2(&c4, &set(&[0]), 2).unwrap().unwrap();
        assert_eq!(sep.edges, ids(&[0, 3]));
        assert_eq!(sep.reachable, set(&[0]));
        assert!(brute_force_important(&c4, &set(&[0]), &set(&[2]), &sep.edges));
        assert!(!brute_force_important(&c4, &set(&[0]), &set(&[2]), &ids(&[0, 2])));

        let path = Multigraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            closest_important_separator_2(&path, &set(&[0]), 2),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn chain_examples() {
        let g = ch2();
        let c = build_chain(&g, 0, 7).unwrap().unwrap();
        assert_eq!(c.p(), 1);
        assert_eq!(c.components, vec![set(&[0, 1, 2, 3]), set(&[4, 5, 6, 7])]);
        assert_eq!(c.separators, vec![ids(&[12, 13])]);
        assert_eq!(c.right_boundaries[0], set(&[2, 3]));
        assert_eq!(c.left_boundaries[1], set(&[4, 5]));
        assert_eq!(c.left_boundaries[0], set(&[0]));
        assert_eq!(c.right_boundaries[1], set(&[7]));

        assert_eq!(build_chain(&k4(), 0, 3).unwrap(), None);

        let tt = Multigraph::unweighted(
            6,
            &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (1, 3), (2, 4)],
        )
        .unwrap();
        let c = build_chain(&tt, 0, 5).unwrap().unwrap();
        assert_eq!(c.p(), 3);
        assert_eq!(
            c.components,
            vec![set(&[0]), set(&[1, 2]), set(&[3, 4]), set(&[5])]
        );
        assert_eq!(c.left_boundaries[1], set(&[1, 2]));
        assert_eq!(c.right_boundaries[1], set(&[1, 2]));
    }

    #[test]
    fn chain_rejects_bridges() {
        let path = Multigraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(build_chain(&path, 0, 2), Err(Error::Structural(_))));
        assert!(matches!(build_chain(&k4(), 1, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn structure_examples() {
        let g = ch2();
        let c = build_chain(&g, 0, 7).unwrap().unwrap();
        assert!(check_structure(&g, &g.edge_ids(), &c).unwrap().holds());
        let h = &g.edge_ids() - &ids(&[12]);
        let report = check_structure(&g, &h, &c).unwrap();
        assert!(!report.holds());
        assert_eq!(
            report.violations[0],
            StructureViolation::SeparatorEdgeAbsent {
                separator: 0,
                edge: EdgeId(12)
            }
        );
        assert!(report.violations[0].to_string().starts_with("separator edge absent"));
    }

    fn arb_two_connected() -> impl Strategy<Value = Multigraph> {
        (4usize..8).prop_flat_map(|n| {
            prop::collection::vec((0..n, 0..n), 0..6).prop_map(move |extra| {
                let mut pairs: Vec<(usize, usize)> = (0..n).map(|v| (v, (v + 1) % n)).collect();
                pairs.extend(extra.into_iter().filter(|(u, v)| u != v));
                pairs.truncate(14);
                Multigraph::unweighted(n, &pairs).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn separators_are_important(g in arb_two_connected(), t_off in 1usize..8) {
            let t = t_off % g.node_count();
            prop_assume!(t != 0);
            if let Some(sep) = closest_important_separator_2(&g, &set(&[0]), t).unwrap() {
                prop_assert_eq!(sep.edges.len(), 2);
                prop_assert!(brute_force_important(&g, &set(&[0]), &set(&[t]), &sep.edges));
            }
        }

        #[test]
        fn chain_is_a_path_of_components(g in arb_two_connected(), t_off in 1usize..8) {
            let t = t_off % g.node_count();
            prop_assume!(t != 0);
            let Some(c) = build_chain(&g, 0, t).unwrap() else { return Ok(()); };
            let mut seen = NodeSet::new();
            for r in &c.components {
                prop_assert!(r.is_disjoint(&seen));
                seen.extend(r);
            }
            prop_assert_eq!(seen.len(), g.node_count());
            let comp_of = |v: usize| c.components.iter().position(|r| r.contains(&v)).unwrap();
            for e in g.edges() {
                let (a, b) = (comp_of(e.u), comp_of(e.v));
                prop_assert!(a.abs_diff(b) <= 1);
                if a != b {
                    prop_assert!(c.separators[a.min(b)].contains(&e.id));
                }
            }
            for sep in &c.separators {
                prop_assert!(!g.without(sep).connected(0, t));
            }
        }

        #[test]
        fn structure_matches_fault_enumeration(seed in 0u64..10_000, drops in prop::collection::vec(0usize..16, 1..4)) {
            let inst = gen_random(&GenParams {
                planted_two_cut: true,
                demands: DemandSpec::Single(3),
                max_edges: 14,
                seed,
                ..Default::default()
            }).unwrap();
            let g = &inst.graph;
            let d = inst.demands[0];
            let c = build_chain(g, d.s, d.t).unwrap().unwrap();
            let drop: EdgeSet = drops.iter().map(|&i| g.edges()[i % g.edge_count()].id).collect();
            let h = &g.edge_ids() - &drop;
            let by_structure = check_structure(g, &h, &c).unwrap().holds();
            let by_faults = verify_rsnd(g, &h, &Requirement::Pairs(vec![Demand::new(d.s, d.t, 3)]))
                .unwrap()
                .is_none();
            prop_assert_eq!(by_structure, by_faults);
        }
    }
}
