//! Cut requirement functions, their separation oracles and the supermodularity lab.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::flow::{max_flow_min_cut, pair_connectivity, EdgeMap};
use crate::graph::{CutSide, Multigraph, NodeSet};
use crate::lp::CoveringRow;
use crate::{Demand, EdgeId, EdgeSet, Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForcedSet {
    pub k: u32,
    pub edges: EdgeSet,
}

/// Edges lying in some cut of at most `k` edges.
pub fn forced_edges(g: &Multigraph, k: u32) -> Result<ForcedSet> {
    if k == 0 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let mut connectivity: BTreeMap<(usize, usize), u64> = BTreeMap::new();
    let mut edges = EdgeSet::new();
    for e in g.edges() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        let lambda = match connectivity.get(&key) {
            Some(&l) => l,
            None => {
                let l = pair_connectivity(g, key.0, key.1)?;
                connectivity.insert(key, l);
                l
            }
        };
        if lambda <= u64::from(k) {
            edges.insert(e.id);
        }
    }
    Ok(ForcedSet { k, edges })
}

/// `f(S) = min(k, |δ_G(S)|) − |δ_G(S) ∩ F'|`, always measured in the original graph.
#[derive(Debug, Clone)]
pub struct CutRequirement<'g> {
    pub g: &'g Multigraph,
    pub k: u32,
    pub forced: EdgeSet,
}

impl<'g> CutRequirement<'g> {
    /// No containment check is made: the oracle stays exact for any `forced` set.
    pub fn new(g: &'g Multigraph, k: u32, forced: EdgeSet) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("k must be at least 1"));
        }
        if let Some(id) = forced.iter().find(|id| !g.contains_edge(**id)) {
            return Err(Error::invalid(format!("forced edge {id} is not in the graph")));
        }
        Ok(Self { g, k, forced })
    }

    /// Requirement with `F' = F`.
    pub fn initial(g: &'g Multigraph, k: u32) -> Result<Self> {
        let forced = forced_edges(g, k)?.edges;
        Self::new(g, k, forced)
    }

    pub fn f_of_boundary(&self, boundary: &EdgeSet) -> i64 {
        let size = boundary.len() as i64;
        let forced = boundary.intersection(&self.forced).count() as i64;
        size.min(i64::from(self.k)) - forced
    }

    pub fn f_value(&self, s: &CutSide) -> i64 {
        self.f_of_boundary(&s.boundary)
    }

    pub fn f_of_set(&self, s: &NodeSet) -> i64 {
        self.f_of_boundary(&self.g.boundary(&self.g.membership(s)))
    }

    pub fn is_empty_cut(&self, s: &CutSide) -> bool {
        s.boundary.is_subset(&self.forced)
    }

    pub fn free_edges(&self) -> FreeEdges {
        FreeEdges::new(self.g, &self.forced)
    }

    /// A cut whose row `Σ_{δ(S)∖F'} x ≥ f(S)` fails at `x` (missing entries read as zero).
    pub fn separate(&self, x: &EdgeMap<Rational>) -> Result<Option<CutSide>> {
        let capacity = self.capacities(x);
        let n = self.g.node_count();
        let mut pairs = BTreeSet::new();
        for e in self.g.edges() {
            pairs.insert((e.u.min(e.v), e.u.max(e.v)));
        }
        for (u, v) in pairs {
            let flow = max_flow_min_cut(
                self.g,
                &capacity,
                &NodeSet::from([u]),
                &NodeSet::from([v]),
            )?;
            debug_assert!(flow.source_side.len() < n);
            let side = CutSide::new(self.g, flow.source_side)?;
            if self.row_violated(&side, &capacity) {
                return Ok(Some(side));
            }
        }
        Ok(None)
    }

    fn capacities(&self, x: &EdgeMap<Rational>) -> EdgeMap<Rational> {
        self.g
            .edges()
            .iter()
            .map(|e| {
                let c = if self.forced.contains(&e.id) {
                    Rational::one()
                } else {
                    x.get(&e.id).cloned().unwrap_or_else(Rational::zero)
                };
                (e.id, c)
            })
            .collect()
    }

    fn row_violated(&self, side: &CutSide, capacity: &EdgeMap<Rational>) -> bool {
        // cap(δ(S)) counts F' at one, so the row fails iff cap < min(k, |δ(S)|).
        let cap = side
            .boundary
            .iter()
            .fold(Rational::zero(), |acc, id| acc + &capacity[id]);
        let need = (side.boundary.len() as i64).min(i64::from(self.k));
        cap < Rational::from_integer(need.into())
    }

    /// Every violated row by subset enumeration.
    pub fn brute_force_violated(&self, x: &EdgeMap<Rational>) -> Result<Vec<CutSide>> {
        let capacity = self.capacities(x);
        let mut out = Vec::new();
        for side in proper_subsets(self.g.node_count())? {
            let side = CutSide::new(self.g, side)?;
            if self.row_violated(&side, &capacity) {
                out.push(side);
            }
        }
        Ok(out)
    }
}

/// All `S` with `0 ∈ S ≠ V`; one side of each cut.
pub fn proper_subsets(n: usize) -> Result<Vec<NodeSet>> {
    if n > 20 {
        return Err(Error::Resource(format!("subset enumeration over {n} nodes")));
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    Ok((0u32..1 << (n - 1))
        .map(|m| {
            let mut s: NodeSet = (1..n).filter(|&v| m >> (v - 1) & 1 == 1).collect();
            s.insert(0);
            s
        })
        .filter(|s| s.len() < n)
        .collect())
}

/// `separate_kefts` as a free function.
pub fn separate_kefts(req: &CutRequirement, x: &EdgeMap<Rational>) -> Result<Option<CutSide>> {
    req.separate(x)
}

/// Indexing of the edges outside `F'` as LP variables.
#[derive(Debug, Clone)]
pub struct FreeEdges {
    pub ids: Vec<EdgeId>,
    index: BTreeMap<EdgeId, usize>,
}

impl FreeEdges {
    pub fn new(g: &Multigraph, forced: &EdgeSet) -> Self {
        let ids: Vec<EdgeId> = g
            .edges()
            .iter()
            .map(|e| e.id)
            .filter(|id| !forced.contains(id))
            .collect();
        let index = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
        Self { ids, index }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn objective(&self, g: &Multigraph) -> Vec<Rational> {
        self.ids
            .iter()
            .map(|id| g.edge(*id).expect("free edge in graph").weight.clone())
            .collect()
    }

    pub fn to_map(&self, x: &[Rational]) -> EdgeMap<Rational> {
        self.ids.iter().copied().zip(x.iter().cloned()).collect()
    }

    pub fn row(&self, boundary: &EdgeSet, rhs: i64) -> CoveringRow {
        CoveringRow::new(
            boundary.iter().filter_map(|id| self.index.get(id).copied()),
            Rational::from_integer(rhs.into()),
        )
    }
}

/// SND requirement `f(S) = max separated demand − |δ(S) ∩ F'|`.
#[derive(Debug, Clone)]
pub struct SndRequirement<'g> {
    pub g: &'g Multigraph,
    pub demands: Vec<Demand>,
    pub forced: EdgeSet,
}

impl<'g> SndRequirement<'g> {
    /// Fails unless every demand is met by `g` itself.
    pub fn new(g: &'g Multigraph, demands: &[Demand], forced: EdgeSet) -> Result<Self> {
        for d in demands {
            if d.s >= g.node_count() || d.t >= g.node_count() || d.s == d.t {
                return Err(Error::invalid(format!("bad demand ({}, {})", d.s, d.t)));
            }
            let lambda = pair_connectivity(g, d.s, d.t)?;
            if lambda < u64::from(d.k) {
                return Err(Error::invalid(format!(
                    "demand ({}, {}, {}) exceeds the connectivity {lambda} of the graph",
                    d.s, d.t, d.k
                )));
            }
        }
        Ok(Self {
            g,
            demands: demands.to_vec(),
            forced,
        })
    }

    pub fn requirement(&self, inside: &[bool]) -> i64 {
        self.demands
            .iter()
            .filter(|d| inside[d.s] != inside[d.t])
            .map(|d| i64::from(d.k))
            .max()
            .unwrap_or(0)
    }

    pub fn f_value(&self, s: &CutSide) -> i64 {
        let inside = self.g.membership(&s.nodes);
        self.requirement(&inside) - s.boundary.intersection(&self.forced).count() as i64
    }

    pub fn separate(&self, x: &EdgeMap<Rational>) -> Result<Option<CutSide>> {
        let capacity: EdgeMap<Rational> = self
            .g
            .edges()
            .iter()
            .map(|e| {
                let c = if self.forced.contains(&e.id) {
                    Rational::one()
                } else {
                    x.get(&e.id).cloned().unwrap_or_else(Rational::zero)
                };
                (e.id, c)
            })
            .collect();
        for d in &self.demands {
            if d.k == 0 {
                continue;
            }
            let flow = max_flow_min_cut(
                self.g,
                &capacity,
                &NodeSet::from([d.s]),
                &NodeSet::from([d.t]),
            )?;
            if flow.value < Rational::from_integer(d.k.into()) {
                return Ok(Some(CutSide::new(self.g, flow.source_side)?));
            }
        }
        Ok(None)
    }
}

pub fn separate_snd(
    g: &Multigraph,
    demands: &[Demand],
    forced: &EdgeSet,
    x: &EdgeMap<Rational>,
) -> Result<Option<CutSide>> {
    SndRequirement::new(g, demands, forced.clone())?.separate(x)
}

/// Which property a pair of sets breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LwsFailure {
    /// Both uncrossing inequalities fail.
    Inequalities,
    /// Neither {A∖B, B∖A} nor {A∩B, A∪B} are both nonempty cuts.
    NonemptyPairs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPairViolation {
    pub a: NodeSet,
    pub b: NodeSet,
    pub failure: LwsFailure,
}

/// Values of a set function on every subset, indexed by bitmask.
pub struct SetTable {
    pub n: usize,
    pub values: Vec<i64>,
    /// Whether the set is a nonempty cut.
    pub nonempty: Vec<bool>,
}

impl SetTable {
    pub fn kefts(req: &CutRequirement) -> Result<Self> {
        Self::build(req.g, |boundary| {
            (req.f_of_boundary(boundary), !boundary.is_subset(&req.forced))
        })
    }

    /// `min(k, |δ(S)|)` with no forced edges.
    pub fn plain_min_cut(g: &Multigraph, k: u32) -> Result<Self> {
        Self::build(g, |boundary| {
            ((boundary.len() as i64).min(i64::from(k)), !boundary.is_empty())
        })
    }

    fn build(g: &Multigraph, eval: impl Fn(&EdgeSet) -> (i64, bool)) -> Result<Self> {
        let n = g.node_count();
        if n > 12 {
            return Err(Error::Resource(format!(
                "set-pair enumeration limited to 12 nodes, got {n}"
            )));
        }
        let mut values = Vec::with_capacity(1 << n);
        let mut nonempty = Vec::with_capacity(1 << n);
        for m in 0u32..1 << n {
            let inside: Vec<bool> = (0..n).map(|v| m >> v & 1 == 1).collect();
            let (f, ne) = eval(&g.boundary(&inside));
            values.push(f);
            nonempty.push(ne);
        }
        Ok(Self {
            n,
            values,
            nonempty,
        })
    }

    fn nodes(&self, m: u32) -> NodeSet {
        (0..self.n).filter(|v| m >> v & 1 == 1).collect()
    }

    fn both_inequalities_fail(&self, a: u32, b: u32) -> bool {
        let f = &self.values;
        let lhs = f[a as usize] + f[b as usize];
        let diff = f[(a & !b) as usize] + f[(b & !a) as usize];
        let meet = f[(a & b) as usize] + f[(a | b) as usize];
        lhs > diff && lhs > meet
    }

    /// Plain weak supermodularity over all pairs.
    pub fn weak_supermodularity_violation(&self) -> Option<(NodeSet, NodeSet)> {
        let full = 1u32 << self.n;
        for a in 0..full {
            for b in a + 1..full {
                if self.both_inequalities_fail(a, b) {
                    return Some((self.nodes(a), self.nodes(b)));
                }
            }
        }
        None
    }

    /// Local weak supermodularity plus the nonempty-pairs property, over nonempty cuts.
    pub fn local_violation(&self) -> Option<SetPairViolation> {
        let full = 1u32 << self.n;
        let ne = |m: u32| self.nonempty[m as usize];
        for a in (0..full).filter(|&a| ne(a)) {
            for b in (a + 1..full).filter(|&b| ne(b)) {
                let failure = if self.both_inequalities_fail(a, b) {
                    Some(LwsFailure::Inequalities)
                } else if !(ne(a & !b) && ne(b & !a)) && !(ne(a & b) && ne(a | b)) {
                    Some(LwsFailure::NonemptyPairs)
                } else {
                    None
                };
                if let Some(failure) = failure {
                    return Some(SetPairViolation {
                        a: self.nodes(a),
                        b: self.nodes(b),
                        failure,
                    });
                }
            }
        }
        None
    }
}

/// Searches for a pair of nonempty cuts breaking local weak supermodularity.
pub fn lws_check(req: &CutRequirement) -> Result<Option<SetPairViolation>> {
    Ok(SetTable::kefts(req)?.local_violation())
}

/// Six cut sizes between the regions `A∖B`, `B∖A`, `A∩B` and the outside.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbstractCutProfile {
    pub amb_out: usize,
    pub bma_out: usize,
    pub ab_out: usize,
    pub amb_bma: usize,
    pub amb_ab: usize,
    pub bma_ab: usize,
}

impl AbstractCutProfile {
    pub const AMB: usize = 0;
    pub const BMA: usize = 1;
    pub const AB: usize = 2;
    pub const OUT: usize = 3;

    /// First counterexample profile (`k = 100`).
    pub fn forced_counterexample() -> Self {
        Self {
            amb_out: 49,
            bma_out: 105,
            ab_out: 3,
            amb_bma: 0,
            amb_ab: 2,
            bma_ab: 49,
        }
    }

    /// Second counterexample profile (`k = 100`).
    pub fn plain_counterexample() -> Self {
        Self {
            amb_out: 95,
            bma_out: 95,
            ab_out: 55,
            amb_bma: 0,
            amb_ab: 0,
            bma_ab: 0,
        }
    }

    fn links(&self) -> [(usize, usize, usize); 6] {
        use AbstractCutProfile as P;
        [
            (P::AMB, P::OUT, self.amb_out),
            (P::BMA, P::OUT, self.bma_out),
            (P::AB, P::OUT, self.ab_out),
            (P::AMB, P::BMA, self.amb_bma),
            (P::AMB, P::AB, self.amb_ab),
            (P::BMA, P::AB, self.bma_ab),
        ]
    }

    /// One node per region, parallel edges as counted.
    pub fn region_graph(&self) -> Multigraph {
        let mut pairs = Vec::new();
        for (a, b, count) in self.links() {
            pairs.extend(std::iter::repeat_n((a, b), count));
        }
        Multigraph::unweighted(4, &pairs).expect("profile graph is well formed")
    }

    /// Each region becomes `size` nodes joined in a ring of `density`-fold parallel edges;
    /// cross-region edges are spread round-robin over the members.
    pub fn dense_graph(&self, size: usize, density: usize) -> Multigraph {
        let mut pairs = Vec::new();
        for region in 0..4 {
            for i in 0..size {
                let (a, b) = (region * size + i, region * size + (i + 1) % size);
                if a != b && (size > 2 || i == 0) {
                    pairs.extend(std::iter::repeat_n((a, b), density));
                }
            }
        }
        for (a, b, count) in self.links() {
            for j in 0..count {
                pairs.push((a * size + j % size, b * size + (j / size) % size));
            }
        }
        Multigraph::unweighted(4 * size, &pairs).expect("dense profile graph is well formed")
    }

    pub fn a(size: usize) -> NodeSet {
        Self::regions(&[Self::AMB, Self::AB], size)
    }

    pub fn b(size: usize) -> NodeSet {
        Self::regions(&[Self::BMA, Self::AB], size)
    }

    pub fn regions(regions: &[usize], size: usize) -> NodeSet {
        regions
            .iter()
            .flat_map(|r| r * size..(r + 1) * size)
            .collect()
    }
}
