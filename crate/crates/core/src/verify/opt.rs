//! Exact optimum by branch and bound over edge subsets.

use num_traits::Zero;

use super::{fault_set_count, for_each_combination, Requirement};
use crate::graph::{DisjointSets, Multigraph};
use crate::{EdgeSet, Error, Rational, Result};

/// Largest `2^m` explored by default (m ≤ 18).
pub const DEFAULT_OPT_BUDGET: u64 = 1 << 18;

/// Every fault set with the node pairs its survivors must keep connected, over edge bitmasks.
#[derive(Debug, Clone)]
pub struct FeasibilityTable {
    n: usize,
    endpoints: Vec<(usize, usize)>,
    groups: Vec<(u64, Vec<(usize, usize)>)>,
}

impl FeasibilityTable {
    pub fn new(g: &Multigraph, req: &Requirement, fault_budget: u64) -> Result<Self> {
        req.validate(g)?;
        let m = g.edge_count();
        if m > 64 {
            return Err(Error::Resource(format!("{m} edges exceed the 64-edge bitmask")));
        }
        let max_k = req.max_k();
        let needed = fault_set_count(m, max_k);
        if needed > fault_budget {
            return Err(Error::Resource(format!(
                "{needed} fault sets exceed the budget of {fault_budget}"
            )));
        }
        let n = g.node_count();
        let endpoints: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        let mut groups = Vec::new();
        for size in 0..max_k as usize {
            for_each_combination(m, size, |fault| {
                let fault_mask = fault.iter().fold(0u64, |acc, &i| acc | 1 << i);
                let mut sets = DisjointSets::new(n);
                let mut forest = Vec::new();
                for (i, &(u, v)) in endpoints.iter().enumerate() {
                    if fault_mask >> i & 1 == 0 && sets.union(u, v) {
                        forest.push((u, v));
                    }
                }
                let pairs = match req {
                    // components agree iff every spanning-forest edge of G \ F is bridged
                    Requirement::AllPairs { .. } => forest,
                    Requirement::Pairs(ds) => {
                        let mut pairs: Vec<(usize, usize)> = ds
                            .iter()
                            .filter(|d| (size as u64) < u64::from(d.k) && d.s != d.t)
                            .filter(|d| sets.same(d.s, d.t))
                            .map(|d| (d.s.min(d.t), d.s.max(d.t)))
                            .collect();
                        pairs.sort_unstable();
                        pairs.dedup();
                        pairs
                    }
                };
                if !pairs.is_empty() {
                    groups.push((fault_mask, pairs));
                }
                false
            });
        }
        Ok(Self {
            n,
            endpoints,
            groups,
        })
    }

    pub fn feasible(&self, h: u64) -> bool {
        let mut parent: Vec<usize> = Vec::with_capacity(self.n);
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        self.groups.iter().all(|(fault, pairs)| {
            parent.clear();
            parent.extend(0..self.n);
            let alive = h & !fault;
            for (i, &(u, v)) in self.endpoints.iter().enumerate() {
                if alive >> i & 1 == 1 {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
            pairs
                .iter()
                .all(|&(s, t)| find(&mut parent, s) == find(&mut parent, t))
        })
    }
}

/// Minimum-weight feasible edge set. Among equal costs the first set in include-first
/// edge-id order wins.
pub fn exact_opt(g: &Multigraph, req: &Requirement, budget: u64) -> Result<(Rational, EdgeSet)> {
    let table = FeasibilityTable::new(g, req, super::DEFAULT_FAULT_BUDGET)?;
    exact_opt_by(g, budget, |mask| table.feasible(mask))
}

/// Branch and bound for any superset-closed feasibility predicate over edge bitmasks
/// (bit `i` is the edge at position `i`).
pub fn exact_opt_by(
    g: &Multigraph,
    budget: u64,
    feasible: impl Fn(u64) -> bool,
) -> Result<(Rational, EdgeSet)> {
    let m = g.edge_count();
    if m >= 64 || (1u64 << m) > budget {
        return Err(Error::Resource(format!(
            "2^{m} edge subsets exceed the budget of {budget}"
        )));
    }
    let all = if m == 0 { 0 } else { u64::MAX >> (64 - m) };
    if !feasible(all) {
        return Err(Error::Infeasible("the whole edge set is not feasible".into()));
    }
    let weights: Vec<Rational> = g.edges().iter().map(|e| e.weight.clone()).collect();
    let mut search = Search {
        weights: &weights,
        feasible: &feasible,
        m,
        best: None,
    };
    search.dfs(0, 0, Rational::zero());
    let (cost, mask) = search.best.expect("the full edge set is feasible");
    let ids = g
        .edges()
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, e)| e.id)
        .collect();
    Ok((cost, ids))
}

struct Search<'a, F> {
    weights: &'a [Rational],
    feasible: &'a F,
    m: usize,
    best: Option<(Rational, u64)>,
}

impl<F: Fn(u64) -> bool> Search<'_, F> {
    fn dfs(&mut self, i: usize, chosen: u64, cost: Rational) {
        if self.best.as_ref().is_some_and(|(b, _)| cost >= *b) {
            return;
        }
        if (self.feasible)(chosen) {
            self.best = Some((cost, chosen));
            return;
        }
        if i == self.m {
            return;
        }
        let undecided = (u64::MAX >> (64 - self.m)) & !((1u64 << i) - 1);
        if !(self.feasible)(chosen | undecided) {
            return;
        }
        let with = &cost + &self.weights[i];
        self.dfs(i + 1, chosen | 1 << i, with);
        self.dfs(i + 1, chosen, cost);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::verify_rsnd;
    use crate::{int, Demand};
    use proptest::prelude::*;

    fn k4() -> Multigraph {
        Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    #[test]
    fn small_optima() {
        let tri = Multigraph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let (c, _) = exact_opt(&tri, &Requirement::AllPairs { k: 2 }, DEFAULT_OPT_BUDGET).unwrap();
        assert_eq!(c, int(3));
        let (c, h) = exact_opt(&k4(), &Requirement::AllPairs { k: 2 }, DEFAULT_OPT_BUDGET).unwrap();
        assert_eq!(c, int(4));
        assert_eq!(h.len(), 4);
        let (c, _) = exact_opt(
            &k4(),
            &Requirement::Pairs(vec![Demand::new(0, 3, 3)]),
            DEFAULT_OPT_BUDGET,
        )
        .unwrap();
        assert_eq!(c, int(5));
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            exact_opt(&k4(), &Requirement::AllPairs { k: 2 }, 32),
            Err(Error::Resource(_))
        ));
    }

    fn arb_case() -> impl Strategy<Value = (Multigraph, Requirement)> {
        (3usize..6).prop_flat_map(|n| {
            (
                prop::collection::vec((0..n, 0..n, 1i64..4), 2..9),
                prop::collection::vec((0..n, 0..n, 1u32..4), 1..3),
                any::<bool>(),
                1u32..4,
            )
                .prop_map(move |(es, ds, all, k)| {
                    let es: Vec<_> = es
                        .into_iter()
                        .filter(|(u, v, _)| u != v)
                        .map(|(u, v, w)| (u, v, int(w)))
                        .collect();
                    let g = Multigraph::weighted(n, &es).unwrap();
                    let req = if all {
                        Requirement::AllPairs { k }
                    } else {
                        Requirement::Pairs(
                            ds.into_iter()
                                .filter(|(s, t, _)| s != t)
                                .map(|(s, t, k)| Demand::new(s, t, k))
                                .collect(),
                        )
                    };
                    (g, req)
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn table_agrees_with_fault_enumeration((g, req) in arb_case(), masks in prop::collection::vec(any::<u64>(), 8)) {
            let table = FeasibilityTable::new(&g, &req, 1 << 20).unwrap();
            for mask in masks {
                let mask = mask & ((1u64 << g.edge_count()) - 1);
                let h: EdgeSet = g.edges().iter().enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.id).collect();
                prop_assert_eq!(table.feasible(mask), verify_rsnd(&g, &h, &req).unwrap().is_none());
            }
        }

        #[test]
        fn branch_and_bound_matches_full_scan((g, req) in arb_case()) {
            let (cost, h) = exact_opt(&g, &req, DEFAULT_OPT_BUDGET).unwrap();
            prop_assert!(verify_rsnd(&g, &h, &req).unwrap().is_none());
            prop_assert_eq!(g.weight_of(&h), cost.clone());
            let table = FeasibilityTable::new(&g, &req, 1 << 20).unwrap();
            let m = g.edge_count();
            let best = (0u64..1 << m)
                .filter(|&mask| table.feasible(mask))
                .map(|mask| g.edges().iter().enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(int(0), |acc, (_, e)| acc + &e.weight))
                .min()
                .unwrap();
            prop_assert_eq!(cost, best);
        }
    }
}
