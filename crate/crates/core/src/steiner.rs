//! Primal-dual Steiner forest: synchronized moat growth, then reverse deletion.

use num_traits::{Signed, Zero};

use crate::graph::{DisjointSets, Multigraph};
use crate::{int, EdgeSet, Error, Rational, Result};

fn pairs_connected(g: &Multigraph, chosen: &[usize], pairs: &[(usize, usize)]) -> bool {
    let mut sets = DisjointSets::new(g.node_count());
    for &i in chosen {
        let e = &g.edges()[i];
        sets.union(e.u, e.v);
    }
    pairs.iter().all(|&(a, b)| sets.same(a, b))
}

/// Forest connecting every pair, of cost at most `(2 − 1/k)` times optimal for `k` pairs.
/// Ties between simultaneous tight edges go to the smallest edge id.
pub fn steiner_forest(g: &Multigraph, pairs: &[(usize, usize)]) -> Result<EdgeSet> {
    let n = g.node_count();
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| a >= n || b >= n) {
        return Err(Error::invalid(format!("pair ({a}, {b}) outside the graph")));
    }
    if let Some(&(a, b)) = pairs.iter().find(|&&(a, b)| !g.connected(a, b)) {
        return Err(Error::invalid(format!("pair ({a}, {b}) is disconnected in the graph")));
    }
    if let Some(e) = g.edges().iter().find(|e| e.weight.is_negative()) {
        return Err(Error::invalid(format!("negative cost on {}", e.id)));
    }
    let pairs: Vec<(usize, usize)> = pairs.iter().copied().filter(|(a, b)| a != b).collect();

    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&i| g.edges()[i].id);

    let mut sets = DisjointSets::new(n);
    let mut dual = vec![Rational::zero(); n];
    let mut bought: Vec<usize> = Vec::new();
    loop {
        let active: Vec<bool> = {
            let mut active = vec![false; n];
            for &(a, b) in &pairs {
                let (ra, rb) = (sets.find(a), sets.find(b));
                if ra != rb {
                    active[ra] = true;
                    active[rb] = true;
                }
            }
            active
        };
        if !active.iter().any(|&x| x) {
            break;
        }
        let mut best: Option<(Rational, usize)> = None;
        for &i in &order {
            let e = &g.edges()[i];
            let (ru, rv) = (sets.find(e.u), sets.find(e.v));
            if ru == rv {
                continue;
            }
            let rate = i64::from(active[ru]) + i64::from(active[rv]);
            if rate == 0 {
                continue;
            }
            let slack = &e.weight - &dual[e.u] - &dual[e.v];
            let time = slack / int(rate);
            if best.as_ref().is_none_or(|(t, _)| time < *t) {
                best = Some((time, i));
            }
        }
        let (delta, i) = best.ok_or_else(|| {
            Error::internal("active moat with no outgoing edge despite connected pairs")
        })?;
        for v in 0..n {
            if active[sets.find(v)] {
                dual[v] += &delta;
            }
        }
        let e = &g.edges()[i];
        sets.union(e.u, e.v);
        bought.push(i);
    }

    let mut kept = bought.clone();
    for &i in bought.iter().rev() {
        let without: Vec<usize> = kept.iter().copied().filter(|&j| j != i).collect();
        if pairs_connected(g, &without, &pairs) {
            kept = without;
        }
    }
    Ok(kept.into_iter().map(|i| g.edges()[i].id).collect())
}
