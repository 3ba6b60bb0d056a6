//! Iterative rounding: the weighted k-EFTS loop, the one-shot unweighted rounding and the
//! classical SND loop used inside the 2-RSND solver.

use num_traits::{One, Signed, Zero};

use crate::cuts::{CutRequirement, FreeEdges, SndRequirement};
use crate::flow::EdgeMap;
use crate::graph::{CutSide, Multigraph};
use crate::lp::{cutting_plane_solve_seeded, CoveringRow, CuttingPlaneOptions, CuttingPlaneOutcome};
use crate::{ratio, Demand, EdgeSet, Error, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    /// |F'| at the start of the round.
    pub forced_size: usize,
    pub lp_objective: Rational,
    pub fractional: usize,
    pub max_x: Rational,
    pub promoted: EdgeSet,
    pub cutting_plane_rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingTrace {
    pub initial_forced: EdgeSet,
    pub rounds: Vec<RoundRecord>,
}

impl RoundingTrace {
    /// Checks `w(promoted_r) ≤ 2 (LP_r − LP_{r+1})` for each round, with a final LP of zero,
    /// and that F' grows every round.
    pub fn check_accounting(&self, g: &Multigraph) -> Result<()> {
        let two = Rational::from_integer(2.into());
        for (r, round) in self.rounds.iter().enumerate() {
            if round.promoted.is_empty() {
                return Err(Error::internal(format!("round {r} promoted nothing")));
            }
            let next = self
                .rounds
                .get(r + 1)
                .map(|n| n.lp_objective.clone())
                .unwrap_or_else(Rational::zero);
            let paid = g.weight_of(&round.promoted);
            if paid > &two * (&round.lp_objective - &next) {
                return Err(Error::internal(format!(
                    "round {r}: promoted weight {paid} exceeds twice the LP drop"
                )));
            }
            if let Some(n) = self.rounds.get(r + 1) {
                if n.forced_size != round.forced_size + round.promoted.len() {
                    return Err(Error::internal(format!("round {r}: forced set bookkeeping")));
                }
            }
        }
        Ok(())
    }

    pub fn first_lp_objective(&self) -> Rational {
        self.rounds
            .first()
            .map(|r| r.lp_objective.clone())
            .unwrap_or_else(Rational::zero)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RoundingOptions {
    pub cutting_plane: CuttingPlaneOptions,
}

/// A cut requirement with a mutable forced set.
trait Residual {
    fn graph(&self) -> &Multigraph;
    fn forced(&self) -> &EdgeSet;
    fn set_forced(&mut self, forced: EdgeSet);
    fn separate(&self, x: &EdgeMap<Rational>) -> Result<Option<CutSide>>;
    fn f_value(&self, side: &CutSide) -> i64;
}

impl Residual for CutRequirement<'_> {
    fn graph(&self) -> &Multigraph {
        self.g
    }
    fn forced(&self) -> &EdgeSet {
        &self.forced
    }
    fn set_forced(&mut self, forced: EdgeSet) {
        self.forced = forced;
    }
    fn separate(&self, x: &EdgeMap<Rational>) -> Result<Option<CutSide>> {
        CutRequirement::separate(self, x)
    }
    fn f_value(&self, side: &CutSide) -> i64 {
        CutRequirement::f_value(self, side)
    }
}

impl Residual for SndRequirement<'_> {
    fn graph(&self) -> &Multigraph {
        self.g
    }
    fn forced(&self) -> &EdgeSet {
        &self.forced
    }
    fn set_forced(&mut self, forced: EdgeSet) {
        self.forced = forced;
    }
    fn separate(&self, x: &EdgeMap<Rational>) -> Result<Option<CutSide>> {
        SndRequirement::separate(self, x)
    }
    fn f_value(&self, side: &CutSide) -> i64 {
        SndRequirement::f_value(self, side)
    }
}

/// Solves LP(F') to a vertex of the full polytope. `cuts` carries boundaries found in
/// earlier rounds; their rows are re-derived for the current F' and used as a seed.
fn solve_residual_lp<R: Residual>(
    req: &R,
    cuts: &mut Vec<CutSide>,
    options: &RoundingOptions,
) -> Result<(FreeEdges, CuttingPlaneOutcome)> {
    let g = req.graph();
    let free = FreeEdges::new(g, req.forced());
    let seed: Vec<CoveringRow> = cuts
        .iter()
        .map(|c| free.row(&c.boundary, req.f_value(c)))
        .filter(|row| row.rhs.is_positive())
        .collect();
    let objective = free.objective(g);
    let mut found = Vec::new();
    let outcome = cutting_plane_solve_seeded(
        &objective,
        seed,
        |x| {
            let point = free.to_map(x);
            Ok(req.separate(&point)?.map(|side| {
                let row = free.row(&side.boundary, req.f_value(&side));
                found.push(side);
                row
            }))
        },
        options.cutting_plane,
    )?;
    cuts.extend(found);
    Ok((free, outcome))
}

fn round_iteratively<R: Residual>(mut req: R, options: &RoundingOptions) -> Result<(EdgeSet, RoundingTrace)> {
    let initial_forced = req.forced().clone();
    let mut rounds = Vec::new();
    let mut cuts = Vec::new();
    let half = ratio(1, 2);
    while req.separate(&EdgeMap::new())?.is_some() {
        let (free, outcome) = solve_residual_lp(&req, &mut cuts, options)?;
        let x = &outcome.solution.values;
        let max_x = x.iter().max().cloned().unwrap_or_else(Rational::zero);
        if max_x < half {
            return Err(Error::internal(format!(
                "basic solution with maximum {max_x} below one half"
            )));
        }
        let promoted: EdgeSet = free
            .ids
            .iter()
            .zip(x)
            .filter(|(_, v)| **v >= half)
            .map(|(id, _)| *id)
            .collect();
        rounds.push(RoundRecord {
            forced_size: req.forced().len(),
            lp_objective: outcome.solution.objective_value.clone(),
            fractional: x.iter().filter(|v| v.is_positive() && !v.is_one()).count(),
            max_x,
            promoted: promoted.clone(),
            cutting_plane_rounds: outcome.objective_history.len(),
        });
        let grown = req.forced() | &promoted;
        req.set_forced(grown);
    }
    Ok((
        req.forced().clone(),
        RoundingTrace {
            initial_forced,
            rounds,
        },
    ))
}

/// Weighted k-EFTS by iterative rounding; returns the solution and its trace.
pub fn kefts_weighted(g: &Multigraph, k: u32) -> Result<(EdgeSet, RoundingTrace)> {
    kefts_weighted_with(g, k, &RoundingOptions::default())
}

pub fn kefts_weighted_with(
    g: &Multigraph,
    k: u32,
    options: &RoundingOptions,
) -> Result<(EdgeSet, RoundingTrace)> {
    round_iteratively(CutRequirement::initial(g, k)?, options)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnweightedReport {
    pub forced: EdgeSet,
    pub lp_objective: Rational,
    pub ones: usize,
    pub fractional: usize,
    /// Nodes of degree at least k in G.
    pub high_degree: usize,
}

/// Unweighted k-EFTS: one vertex of LP(F), every edge in its support is kept.
pub fn kefts_unweighted(g: &Multigraph, k: u32) -> Result<(EdgeSet, UnweightedReport)> {
    kefts_unweighted_with(g, k, &RoundingOptions::default())
}

pub fn kefts_unweighted_with(
    g: &Multigraph,
    k: u32,
    options: &RoundingOptions,
) -> Result<(EdgeSet, UnweightedReport)> {
    if !g.is_uniformly_weighted() {
        return Err(Error::invalid("unweighted rounding needs equal edge weights"));
    }
    let req = CutRequirement::initial(g, k)?;
    let (free, outcome) = solve_residual_lp(&req, &mut Vec::new(), options)?;
    let x = &outcome.solution.values;
    let fractional = x.iter().filter(|v| v.is_positive() && !v.is_one()).count();
    let ones = x.iter().filter(|v| v.is_one()).count();
    let high_degree = (0..g.node_count())
        .filter(|&v| g.degree(v) >= k as usize)
        .count();
    if fractional > 2 * high_degree {
        return Err(Error::internal(format!(
            "{fractional} fractional edges exceed twice the {high_degree} high-degree nodes"
        )));
    }
    let mut h = req.forced.clone();
    h.extend(
        free.ids
            .iter()
            .zip(x)
            .filter(|(_, v)| v.is_positive())
            .map(|(id, _)| *id),
    );
    Ok((
        h,
        UnweightedReport {
            forced: req.forced.clone(),
            lp_objective: outcome.solution.objective_value,
            ones,
            fractional,
            high_degree,
        },
    ))
}

/// Classical SND by iterative rounding; every demand must be met by `g`.
pub fn snd_jain(g: &Multigraph, demands: &[Demand]) -> Result<(EdgeSet, RoundingTrace)> {
    snd_jain_with(g, demands, &RoundingOptions::default())
}

pub fn snd_jain_with(
    g: &Multigraph,
    demands: &[Demand],
    options: &RoundingOptions,
) -> Result<(EdgeSet, RoundingTrace)> {
    round_iteratively(SndRequirement::new(g, demands, EdgeSet::new())?, options)
}

/// Whether `h` is a k-EFTS of `g`, decided by the cut oracle at the integral point of `h`.
pub fn kefts_feasible(g: &Multigraph, k: u32, h: &EdgeSet) -> Result<bool> {
    violated_kefts_cut(g, k, h).map(|c| c.is_none())
}

/// A cut certifying that `h` is not a k-EFTS, if any.
pub fn violated_kefts_cut(g: &Multigraph, k: u32, h: &EdgeSet) -> Result<Option<CutSide>> {
    CutRequirement::new(g, k, h.clone())?.separate(&EdgeMap::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::forced_edges;
    use crate::int;

    fn k4() -> Multigraph {
        Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn tri() -> Multigraph {
        Multigraph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    fn ids(xs: &[usize]) -> EdgeSet {
        xs.iter().map(|&i| crate::EdgeId(i)).collect()
    }

    #[test]
    fn weighted_examples() {
        let (h, trace) = kefts_weighted(&tri(), 2).unwrap();
        assert_eq!(h, tri().edge_ids());
        assert!(trace.rounds.is_empty());

        let g = k4();
        let (h, trace) = kefts_weighted(&g, 2).unwrap();
        assert!(kefts_feasible(&g, 2, &h).unwrap());
        assert!(g.weight_of(&h) <= int(8));
        trace.check_accounting(&g).unwrap();
        assert_eq!(trace.first_lp_objective(), int(4));

        let path = Multigraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(kefts_weighted(&path, 3).unwrap().0, path.edge_ids());
    }

    #[test]
    fn unweighted_examples() {
        let g = k4();
        let (h, report) = kefts_unweighted(&g, 2).unwrap();
        assert!(kefts_feasible(&g, 2, &h).unwrap());
        assert!(report.fractional <= 2 * report.high_degree);
        assert!(h.len() <= 6);

        assert_eq!(kefts_unweighted(&tri(), 2).unwrap().0, tri().edge_ids());

        let star = Multigraph::unweighted(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(kefts_unweighted(&star, 2).unwrap().0, star.edge_ids());

        let weighted = Multigraph::weighted(2, &[(0, 1, int(1)), (0, 1, int(2))]).unwrap();
        assert!(matches!(kefts_unweighted(&weighted, 1), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn snd_examples() {
        let (h, _) = snd_jain(&tri(), &[Demand::new(0, 2, 2)]).unwrap();
        assert_eq!(h, tri().edge_ids());

        let g = k4();
        let (h, trace) = snd_jain(&g, &[Demand::new(0, 3, 2)]).unwrap();
        let sub = g.restrict(&h);
        assert!(crate::flow::pair_connectivity(&sub, 0, 3).unwrap() >= 2);
        assert!(g.weight_of(&h) <= int(8));
        trace.check_accounting(&g).unwrap();

        // a tree with unit demands keeps exactly the tree paths
        let tree = Multigraph::unweighted(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let (h, _) = snd_jain(&tree, &[Demand::new(0, 2, 1), Demand::new(2, 4, 1)]).unwrap();
        assert_eq!(h, ids(&[0, 1, 2, 3]));
        let (h, _) = snd_jain(&tree, &[Demand::new(0, 2, 1)]).unwrap();
        assert_eq!(h, ids(&[0, 1]));

        let path = Multigraph::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(
            snd_jain(&path, &[Demand::new(0, 2, 2)]),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn feasibility_examples() {
        let g = k4();
        assert!(kefts_feasible(&g, 2, &g.edge_ids()).unwrap());
        // triangle on {0,1,2}: edges 0-1, 0-2, 1-2
        assert!(!kefts_feasible(&g, 2, &ids(&[0, 1, 3])).unwrap());
        // 4-cycle 0-1-3-2-0: edges 0-1, 1-3, 2-3, 0-2
        assert!(kefts_feasible(&g, 2, &ids(&[0, 4, 5, 1])).unwrap());
        assert!(forced_edges(&g, 2).unwrap().edges.is_empty());
    }
}
