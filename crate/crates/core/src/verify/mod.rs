//! Ground truth: fault enumeration, exact optimum, instance generation and the
//! approximation-ratio harness.

mod generate;
mod harness;
mod opt;

pub use generate::{gen_random, DemandSpec, GenParams, WeightSpec};
pub use harness::{ratio_harness, HarnessReport, InstanceOutcome, SolverTag};
pub use opt::{exact_opt, exact_opt_by, FeasibilityTable, DEFAULT_OPT_BUDGET};

use crate::graph::{DisjointSets, Multigraph};
use crate::{Demand, EdgeSet, Error, Result};

/// Default cap on the number of fault sets examined.
pub const DEFAULT_FAULT_BUDGET: u64 = 10_000_000;

/// What `H` has to preserve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Requirement {
    /// Components of `H \ F` equal those of `G \ F` for every `|F| < k`.
    AllPairs { k: u32 },
    Pairs(Vec<Demand>),
}

impl Requirement {
    pub fn max_k(&self) -> u32 {
        match self {
            Requirement::AllPairs { k } => *k,
            Requirement::Pairs(ds) => ds.iter().map(|d| d.k).max().unwrap_or(0),
        }
    }

    fn validate(&self, g: &Multigraph) -> Result<()> {
        if let Requirement::Pairs(ds) = self {
            for d in ds {
                if d.s >= g.node_count() || d.t >= g.node_count() {
                    return Err(Error::invalid(format!(
                        "demand ({}, {}) outside the graph",
                        d.s, d.t
                    )));
                }
            }
        }
        Ok(())
    }
}

/// A fault set after which `s` and `t` are connected in `G \ F` but not in `H \ F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index of the violated demand; `None` for all-pairs requirements.
    pub demand: Option<usize>,
    pub k: u32,
    pub fault: EdgeSet,
    pub s: usize,
    pub t: usize,
}

impl Violation {
    /// Recomputes both component structures and confirms the discrepancy.
    pub fn replay(&self, g: &Multigraph, h: &EdgeSet) -> bool {
        let g_rest = g.without(&self.fault);
        let h_rest = g.restrict(&(h - &self.fault));
        (self.fault.len() as u64) < u64::from(self.k)
            && g_rest.connected(self.s, self.t)
            && !h_rest.connected(self.s, self.t)
    }
}

/// Number of fault sets of size below `k` over `m` edges.
pub fn fault_set_count(m: usize, k: u32) -> u64 {
    let mut total = 0u64;
    let mut binom = 1u64;
    for j in 0..u64::from(k) {
        if j > m as u64 {
            break;
        }
        total = total.saturating_add(binom);
        binom = binom.saturating_mul(m as u64 - j) / (j + 1);
    }
    total
}

/// Calls `visit` on every size-`j` subset of `0..m` in lexicographic order until it
/// returns `true`.
pub fn for_each_combination(m: usize, j: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if j > m {
        return;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        if visit(&idx) {
            return;
        }
        let Some(i) = (0..j).rev().find(|&i| idx[i] < m - j + i) else {
            return;
        };
        idx[i] += 1;
        for l in i + 1..j {
            idx[l] = idx[l - 1] + 1;
        }
    }
}

fn labels(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut sets = DisjointSets::new(n);
    for (u, v) in edges {
        sets.union(u, v);
    }
    (0..n).map(|v| sets.find(v)).collect()
}

/// First violation in the order: fault size, then lexicographic fault set, then demand.
pub fn verify_rsnd(g: &Multigraph, h: &EdgeSet, req: &Requirement) -> Result<Option<Violation>> {
    verify_rsnd_with_budget(g, h, req, DEFAULT_FAULT_BUDGET)
}

pub fn verify_rsnd_with_budget(
    g: &Multigraph,
    h: &EdgeSet,
    req: &Requirement,
    budget: u64,
) -> Result<Option<Violation>> {
    req.validate(g)?;
    if let Some(id) = h.iter().find(|id| !g.contains_edge(**id)) {
        return Err(Error::invalid(format!("solution edge {id} is not in the graph")));
    }
    let m = g.edge_count();
    let n = g.node_count();
    let max_k = req.max_k();
    let needed = fault_set_count(m, max_k);
    if needed > budget {
        return Err(Error::Resource(format!(
            "{needed} fault sets exceed the budget of {budget}"
        )));
    }
    let edges = g.edges();
    let in_h: Vec<bool> = edges.iter().map(|e| h.contains(&e.id)).collect();
    let mut found = None;
    for size in 0..max_k as usize {
        for_each_combination(m, size, |fault| {
            let mut removed = vec![false; m];
            for &i in fault {
                removed[i] = true;
            }
            let g_lab = labels(n, (0..m).filter(|&i| !removed[i]).map(|i| (edges[i].u, edges[i].v)));
            let h_lab = labels(
                n,
                (0..m)
                    .filter(|&i| !removed[i] && in_h[i])
                    .map(|i| (edges[i].u, edges[i].v)),
            );
            let fault_ids = || fault.iter().map(|&i| edges[i].id).collect::<EdgeSet>();
            match req {
                Requirement::AllPairs { k } => {
                    let bad = (0..m)
                        .filter(|&i| !removed[i])
                        .map(|i| &edges[i])
                        .find(|e| h_lab[e.u] != h_lab[e.v]);
                    if let Some(e) = bad {
                        found = Some(Violation {
                            demand: None,
                            k: *k,
                            fault: fault_ids(),
                            s: e.u.min(e.v),
                            t: e.u.max(e.v),
                        });
                    }
                }
                Requirement::Pairs(ds) => {
                    let bad = ds.iter().enumerate().find(|(_, d)| {
                        (size as u64) < u64::from(d.k)
                            && g_lab[d.s] == g_lab[d.t]
                            && h_lab[d.s] != h_lab[d.t]
                    });
                    if let Some((i, d)) = bad {
                        found = Some(Violation {
                            demand: Some(i),
                            k: d.k,
                            fault: fault_ids(),
                            s: d.s,
                            t: d.t,
                        });
                    }
                }
            }
            found.is_some()
        });
        if found.is_some() {
            break;
        }
    }
    Ok(found)
}

/// All-pairs demand list equivalent to `Requirement::AllPairs { k }`.
pub fn all_pairs_demands(n: usize, k: u32) -> Vec<Demand> {
    (0..n)
        .flat_map(|s| (s + 1..n).map(move |t| Demand::new(s, t, k)))
        .collect()
}
