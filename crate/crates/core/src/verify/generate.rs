//! Seeded random instances.

use num_traits::ToPrimitive;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Edge, Multigraph};
use crate::{int, ratio, Demand, Error, Instance, Rational, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    Unit,
    /// Uniform integer in `min..=max`.
    Integer { min: i64, max: i64 },
    /// `p/q` with `p` in `0..=max_numer`, `q` in `1..=max_denom`.
    Rational { max_numer: i64, max_denom: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DemandSpec {
    None,
    /// Every node pair with requirement `k`.
    Kefts(u32),
    /// One random pair; in planted mode `s` is in the first block and `t` in the last.
    Single(u32),
    Pairs { count: usize, max_k: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub edge_probability: Rational,
    /// Chance of each extra parallel copy of a present edge.
    pub parallel_probability: Rational,
    pub weights: WeightSpec,
    pub demands: DemandSpec,
    pub seed: u64,
    /// Build 2 or 3 two-edge-connected blocks in a row joined by exactly two edges each;
    /// `n` is ignored and `edge_probability` drives the chords.
    pub planted_two_cut: bool,
    pub max_edges: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n: 5,
            edge_probability: ratio(1, 2),
            parallel_probability: int(0),
            weights: WeightSpec::Unit,
            demands: DemandSpec::None,
            seed: 0,
            planted_two_cut: false,
            max_edges: 16,
        }
    }
}

fn bernoulli(rng: &mut ChaCha8Rng, p: &Rational) -> bool {
    let numer = p.numer().to_i64().unwrap_or(0);
    let denom = p.denom().to_i64().unwrap_or(1).max(1);
    rng.random_range(0..denom) < numer
}

fn weight(rng: &mut ChaCha8Rng, spec: &WeightSpec) -> Rational {
    match *spec {
        WeightSpec::Unit => int(1),
        WeightSpec::Integer { min, max } => int(rng.random_range(min..=max)),
        WeightSpec::Rational {
            max_numer,
            max_denom,
        } => ratio(rng.random_range(0..=max_numer), rng.random_range(1..=max_denom)),
    }
}

/// Deterministic in `params`.
pub fn gen_random(params: &GenParams) -> Result<Instance> {
    if params.edge_probability < int(0) || params.edge_probability > int(1) {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    match params.weights {
        WeightSpec::Integer { min, max } if min < 0 || min > max => {
            return Err(Error::invalid("integer weights need 0 ≤ min ≤ max"))
        }
        WeightSpec::Rational {
            max_numer,
            max_denom,
        } if max_numer < 0 || max_denom < 1 => {
            return Err(Error::invalid("rational weights need max_numer ≥ 0 and max_denom ≥ 1"))
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (n, pairs, blocks) = if params.planted_two_cut {
        planted(&mut rng, params)
    } else {
        if params.n < 2 {
            return Err(Error::invalid("need at least two nodes"));
        }
        let mut pairs = Vec::new();
        for u in 0..params.n {
            for v in u + 1..params.n {
                if bernoulli(&mut rng, &params.edge_probability) {
                    pairs.push((u, v));
                    while bernoulli(&mut rng, &params.parallel_probability) {
                        pairs.push((u, v));
                    }
                }
            }
        }
        (params.n, pairs, vec![(0..params.n).collect::<Vec<_>>()])
    };
    let edges = pairs
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| Edge::new(i, u, v, weight(&mut rng, &params.weights)))
        .collect();
    let graph = Multigraph::new(n, edges)?;
    let demands = match params.demands {
        DemandSpec::None => Vec::new(),
        DemandSpec::Kefts(k) => super::all_pairs_demands(n, k),
        DemandSpec::Single(k) => {
            let first = blocks.first().expect("at least one block");
            let last = blocks.last().expect("at least one block");
            let s = *first.choose(&mut rng).expect("blocks are nonempty");
            let mut t = *last.choose(&mut rng).expect("blocks are nonempty");
            while t == s {
                t = rng.random_range(0..n);
            }
            vec![Demand::new(s, t, k)]
        }
        DemandSpec::Pairs { count, max_k } => (0..count)
            .map(|_| {
                let s = rng.random_range(0..n);
                let mut t = rng.random_range(0..n - 1);
                if t >= s {
                    t += 1;
                }
                Demand::new(s, t, rng.random_range(1..=max_k.max(1)))
            })
            .collect(),
    };
    Ok(Instance { graph, demands })
}

type Planted = (usize, Vec<(usize, usize)>, Vec<Vec<usize>>);

fn planted(rng: &mut ChaCha8Rng, params: &GenParams) -> Planted {
    let count = rng.random_range(2..=3);
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut next = 0;
    for _ in 0..count {
        let size = rng.random_range(3..=4);
        blocks.push((next..next + size).collect());
        next += size;
    }
    let mut pairs = Vec::new();
    for b in &blocks {
        for i in 0..b.len() {
            pairs.push((b[i], b[(i + 1) % b.len()]));
        }
    }
    for w in blocks.windows(2) {
        for _ in 0..2 {
            let u = *w[0].choose(rng).expect("nonempty block");
            let v = *w[1].choose(rng).expect("nonempty block");
            pairs.push((u, v));
        }
    }
    for b in &blocks {
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                if pairs.len() < params.max_edges && bernoulli(rng, &params.edge_probability) {
                    pairs.push((b[i], b[j]));
                }
            }
        }
    }
    (next, pairs, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::pair_connectivity;

    #[test]
    fn deterministic_per_seed() {
        let p = GenParams {
            n: 6,
            weights: WeightSpec::Rational {
                max_numer: 7,
                max_denom: 3,
            },
            demands: DemandSpec::Pairs { count: 3, max_k: 3 },
            seed: 42,
            ..Default::default()
        };
        assert_eq!(gen_random(&p).unwrap(), gen_random(&p).unwrap());
        let other = GenParams { seed: 43, ..p.clone() };
        assert_ne!(gen_random(&p).unwrap(), gen_random(&other).unwrap());
    }

    #[test]
    fn probability_one_gives_complete_graph() {
        let p = GenParams {
            n: 6,
            edge_probability: int(1),
            ..Default::default()
        };
        let inst = gen_random(&p).unwrap();
        assert_eq!(inst.graph.edge_count(), 15);
    }

    #[test]
    fn planted_instances_have_a_two_cut() {
        for seed in 0..50 {
            let p = GenParams {
                planted_two_cut: true,
                demands: DemandSpec::Single(3),
                seed,
                ..Default::default()
            };
            let inst = gen_random(&p).unwrap();
            let d = inst.demands[0];
            assert!(inst.graph.edge_count() <= 16);
            assert_eq!(pair_connectivity(&inst.graph, d.s, d.t).unwrap(), 2, "seed {seed}");
            assert!(inst.graph.bridges_and_2ecc().tree_edges.is_empty());
        }
    }
}
