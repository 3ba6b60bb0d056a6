//! Solvers and exact verification oracles for relative fault-tolerant network design.
//!
//! A subgraph `H` of `G` is relatively fault tolerant for a demand `(s, t, k)` when every
//! fault set `F` with `|F| < k` that leaves `s` and `t` connected in `G \ F` also leaves them
//! connected in `H \ F`. The crate provides:
//!
//! * iterative LP rounding for the all-pairs variant (`k`-EFTS), weighted and unweighted,
//! * a 2-approximation for instances whose demands are at most 2,
//! * the important-separator chain algorithm for a single demand with `k = 3`,
//! * brute-force oracles (fault enumeration, exact optimum) to certify all of the above.
//!
//! All arithmetic is exact; weights, LP values and flows are [`Rational`]s.

pub mod chain;
pub mod cuts;
pub mod error;
pub mod flow;
pub mod graph;
pub mod lp;
pub mod reduction;
pub mod rounding;
pub mod rsnd;
pub mod steiner;
pub mod verify;

pub use error::{Error, Result};
pub use graph::{Edge, EdgeId, EdgeSet, Multigraph, NodeSet};

/// Exact rational number used for every weight, capacity and LP value.
pub type Rational = num_rational::BigRational;

/// Builds a rational from an integer numerator and denominator.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(numer.into(), denom.into())
}

/// Builds an integral rational.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(value.into())
}

/// A connectivity demand `(s, t, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Demand {
    pub s: usize,
    pub t: usize,
    pub k: u32,
}

impl Demand {
    pub fn new(s: usize, t: usize, k: u32) -> Self {
        Self { s, t, k }
    }
}

/// A graph together with its list of demands.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub graph: Multigraph,
    pub demands: Vec<Demand>,
}
