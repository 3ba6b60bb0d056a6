//! Runs a solver over a batch and compares each output with the exact optimum.

use std::fmt;

use super::{exact_opt, verify_rsnd, Requirement, DEFAULT_OPT_BUDGET};
use crate::rounding::{kefts_unweighted, kefts_weighted};
use crate::rsnd::{rsnd2, rsnd3_single};
use crate::{int, Demand, EdgeSet, Error, Instance, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverTag {
    KeftsWeighted { k: u32 },
    KeftsUnweighted { k: u32 },
    Rsnd2,
    Rsnd3Single,
}

impl SolverTag {
    /// Proven approximation factor.
    pub fn guarantee(&self) -> Rational {
        match *self {
            SolverTag::KeftsWeighted { .. } | SolverTag::Rsnd2 => int(2),
            SolverTag::KeftsUnweighted { k } => int(1) + Rational::new(4.into(), i64::from(k).into()),
            SolverTag::Rsnd3Single => crate::ratio(27, 4),
        }
    }

    pub fn requirement(&self, demands: &[Demand]) -> Requirement {
        match *self {
            SolverTag::KeftsWeighted { k } | SolverTag::KeftsUnweighted { k } => Requirement::AllPairs { k },
            SolverTag::Rsnd2 | SolverTag::Rsnd3Single => Requirement::Pairs(demands.to_vec()),
        }
    }

    pub fn solve(&self, inst: &Instance) -> Result<EdgeSet> {
        let g = &inst.graph;
        match *self {
            SolverTag::KeftsWeighted { k } => Ok(kefts_weighted(g, k)?.0),
            SolverTag::KeftsUnweighted { k } => Ok(kefts_unweighted(g, k)?.0),
            SolverTag::Rsnd2 => rsnd2(g, &inst.demands),
            SolverTag::Rsnd3Single => match inst.demands.as_slice() {
                [d] if d.k == 3 => Ok(rsnd3_single(g, d.s, d.t)?.0),
                _ => Err(Error::invalid("single demand k=3 required")),
            },
        }
    }
}

impl fmt::Display for SolverTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolverTag::KeftsWeighted { k } => write!(f, "kefts-weighted(k={k})"),
            SolverTag::KeftsUnweighted { k } => write!(f, "kefts-unweighted(k={k})"),
            SolverTag::Rsnd2 => write!(f, "rsnd2"),
            SolverTag::Rsnd3Single => write!(f, "rsnd3-single"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceOutcome {
    Compared {
        cost: Rational,
        opt: Rational,
        feasible: bool,
    },
    /// The solver itself returned an error.
    SolverError(String),
    /// The oracle exceeded its budget.
    Skipped(String),
}

impl InstanceOutcome {
    /// `cost / opt`, or 1 when both are zero.
    pub fn ratio(&self) -> Option<Rational> {
        match self {
            InstanceOutcome::Compared { cost, opt, .. } if *opt == int(0) => {
                (*cost == int(0)).then(|| int(1))
            }
            InstanceOutcome::Compared { cost, opt, .. } => Some(cost / opt),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarnessReport {
    pub tag: SolverTag,
    pub guarantee: Rational,
    pub outcomes: Vec<InstanceOutcome>,
}

impl HarnessReport {
    pub fn compared(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, InstanceOutcome::Compared { .. }))
            .count()
    }

    pub fn feasible_count(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, InstanceOutcome::Compared { feasible: true, .. }))
            .count()
    }

    pub fn skipped(&self) -> usize {
        self.outcomes
            .iter()
            .filter(|o| matches!(o, InstanceOutcome::Skipped(_)))
            .count()
    }

    pub fn max_ratio(&self) -> Option<Rational> {
        self.outcomes.iter().filter_map(InstanceOutcome::ratio).max()
    }

    /// Indices of instances that are infeasible, errored, or above the guarantee.
    pub fn failures(&self) -> Vec<usize> {
        self.outcomes
            .iter()
            .enumerate()
            .filter(|(_, o)| match o {
                InstanceOutcome::Compared { cost, opt, feasible } => {
                    !feasible || *cost > &self.guarantee * opt
                }
                InstanceOutcome::SolverError(_) => true,
                InstanceOutcome::Skipped(_) => false,
            })
            .map(|(i, _)| i)
            .collect()
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Solves, verifies and compares with `exact_opt` every instance of the batch.
pub fn ratio_harness(tag: SolverTag, batch: &[Instance]) -> HarnessReport {
    let outcomes = batch.iter().map(|inst| run_one(tag, inst)).collect();
    HarnessReport {
        tag,
        guarantee: tag.guarantee(),
        outcomes,
    }
}

fn run_one(tag: SolverTag, inst: &Instance) -> InstanceOutcome {
    let g = &inst.graph;
    let req = tag.requirement(&inst.demands);
    let opt = match exact_opt(g, &req, DEFAULT_OPT_BUDGET) {
        Ok((cost, _)) => cost,
        Err(Error::Resource(msg)) => return InstanceOutcome::Skipped(msg),
        Err(e) => return InstanceOutcome::SolverError(format!("oracle: {e}")),
    };
    let h = match tag.solve(inst) {
        Ok(h) => h,
        Err(e) => return InstanceOutcome::SolverError(e.to_string()),
    };
    let feasible = match verify_rsnd(g, &h, &req) {
        Ok(v) => v.is_none(),
        Err(Error::Resource(msg)) => return InstanceOutcome::Skipped(msg),
        Err(e) => return InstanceOutcome::SolverError(format!("verifier: {e}")),
    };
    InstanceOutcome::Compared {
        cost: g.weight_of(&h),
        opt,
        feasible,
    }
}
