//! Solver traces as JSON, and the bench suites.

use rsnd_core::chain::Chain;
use rsnd_core::rounding::{RoundingTrace, UnweightedReport};
use rsnd_core::rsnd::Rsnd3Trace;
use rsnd_core::verify::{gen_random, ratio_harness, DemandSpec, GenParams, HarnessReport, SolverTag, WeightSpec};
use rsnd_core::{ratio, EdgeSet, Instance, NodeSet};
use serde_json::{json, Value};

use crate::CliError;

fn ids(set: &EdgeSet) -> Vec<usize> {
    set.iter().map(|id| id.0).collect()
}

pub fn rounding(trace: &RoundingTrace) -> Value {
    json!({
        "initial_forced": ids(&trace.initial_forced),
        "rounds": trace.rounds.iter().map(|r| json!({
            "forced_size": r.forced_size,
            "lp_objective": r.lp_objective.to_string(),
            "fractional": r.fractional,
            "max_x": r.max_x.to_string(),
            "promoted": ids(&r.promoted),
            "cutting_plane_rounds": r.cutting_plane_rounds,
        })).collect::<Vec<_>>(),
    })
}

pub fn unweighted(report: &UnweightedReport) -> Value {
    json!({
        "forced": ids(&report.forced),
        "lp_objective": report.lp_objective.to_string(),
        "ones": report.ones,
        "fractional": report.fractional,
        "high_degree": report.high_degree,
    })
}

fn chain(c: &Chain, nodes: &[usize]) -> Value {
    let map = |s: &NodeSet| s.iter().map(|&v| nodes[v]).collect::<Vec<_>>();
    json!({
        "components": c.components.iter().map(map).collect::<Vec<_>>(),
        "separators": c.separators.iter().map(ids).collect::<Vec<_>>(),
        "left_boundaries": c.left_boundaries.iter().map(map).collect::<Vec<_>>(),
        "right_boundaries": c.right_boundaries.iter().map(map).collect::<Vec<_>>(),
    })
}

pub fn rsnd3(trace: &Rsnd3Trace) -> Value {
    json!({
        "required_bridges": ids(&trace.required_bridges),
        "blocks": trace.blocks.iter().map(|b| json!({
            "nodes": b.nodes,
            "demand": { "s": b.nodes[b.demand.s], "t": b.nodes[b.demand.t], "k": b.demand.k },
            "chain": b.chain.as_ref().map(|c| chain(c, &b.nodes)),
            "direct_flow_cost": b.direct_flow_cost.as_ref().map(|c| c.to_string()),
            "separator_cost": b.separator_cost.to_string(),
            "parts": b.parts.iter().map(|p| json!({
                "flow": p.flow.to_string(),
                "left_rsnd": p.left_rsnd.to_string(),
                "right_rsnd": p.right_rsnd.to_string(),
                "steiner": p.steiner.to_string(),
                "steiner_pairs": p.steiner_pairs,
                "union": p.union.to_string(),
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn batch(tag: SolverTag, count: usize, seed: u64) -> Vec<Instance> {
    (0..count as u64)
        .map(|i| {
            let seed = seed * 1_000_000 + i;
            let params = match tag {
                SolverTag::KeftsWeighted { .. } => GenParams {
                    n: 4 + (i % 3) as usize,
                    edge_probability: ratio(3, 4),
                    weights: WeightSpec::Rational {
                        max_numer: 9,
                        max_denom: 4,
                    },
                    seed,
                    ..Default::default()
                },
                SolverTag::KeftsUnweighted { .. } => GenParams {
                    n: 4 + (i % 3) as usize,
                    edge_probability: ratio(3, 4),
                    seed,
                    ..Default::default()
                },
                SolverTag::Rsnd2 => GenParams {
                    n: 4 + (i % 3) as usize,
                    edge_probability: ratio(3, 5),
                    weights: WeightSpec::Integer { min: 1, max: 6 },
                    demands: DemandSpec::Pairs { count: 3, max_k: 2 },
                    seed,
                    ..Default::default()
                },
                SolverTag::Rsnd3Single => GenParams {
                    planted_two_cut: true,
                    weights: WeightSpec::Integer { min: 1, max: 6 },
                    demands: DemandSpec::Single(3),
                    seed,
                    ..Default::default()
                },
            };
            gen_random(&params).expect("bench parameters are valid")
        })
        .collect()
}

/// Runs a named suite; returns the table and whether every algorithm passed.
pub fn bench(suite: &str) -> Result<(String, bool), CliError> {
    let count = match suite {
        "smoke" => 8,
        "ratios" => 60,
        other => {
            return Err(CliError::Input(format!(
                "--suite: unknown suite {other:?} (expected smoke or ratios)"
            )))
        }
    };
    let tags = [
        SolverTag::KeftsWeighted { k: 2 },
        SolverTag::KeftsWeighted { k: 3 },
        SolverTag::KeftsUnweighted { k: 2 },
        SolverTag::KeftsUnweighted { k: 3 },
        SolverTag::Rsnd2,
        SolverTag::Rsnd3Single,
    ];
    let reports: Vec<HarnessReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = tags
            .iter()
            .enumerate()
            .map(|(i, &tag)| scope.spawn(move || ratio_harness(tag, &batch(tag, count, i as u64 + 1))))
            .collect();
        handles.into_iter().map(|h| h.join().expect("bench worker")).collect()
    });
    let mut table = format!(
        "{:<22} {:>9} {:>9} {:>8} {:>10} {:>10}  status\n",
        "algorithm", "compared", "feasible", "skipped", "max ratio", "guarantee"
    );
    let mut all = true;
    for r in &reports {
        let pass = r.passed();
        all &= pass;
        table.push_str(&format!(
            "{:<22} {:>9} {:>9} {:>8} {:>10} {:>10}  {}\n",
            r.tag.to_string(),
            r.compared(),
            r.feasible_count(),
            r.skipped(),
            r.max_ratio().map_or("-".into(), |m| m.to_string()),
            r.guarantee.to_string(),
            if pass { "ok" } else { "FAILED" }
        ));
    }
    Ok((table, all))
}
