//! Exact covering LPs over the unit box.
//!
//! `min c·x  s.t.  Σ_{e∈S_i} x_e ≥ b_i,  0 ≤ x ≤ 1` is solved by a bounded-variable primal
//! simplex in rational arithmetic with Bland's rule. Starting from `x = 1` with every
//! surplus variable basic is always primal feasible (unless some `b_i > |S_i|`), so no
//! phase one is needed. The optimum is a basic solution, hence a vertex of the polytope.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::{Error, Rational, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoveringRow {
    pub vars: BTreeSet<usize>,
    pub rhs: Rational,
}

impl CoveringRow {
    pub fn new(vars: impl IntoIterator<Item = usize>, rhs: Rational) -> Self {
        Self {
            vars: vars.into_iter().collect(),
            rhs,
        }
    }

    pub fn lhs(&self, x: &[Rational]) -> Rational {
        self.vars.iter().fold(Rational::zero(), |acc, &v| acc + &x[v])
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        self.lhs(x) >= self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub variable_count: usize,
    pub objective: Vec<Rational>,
    pub rows: Vec<CoveringRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexSolution {
    pub values: Vec<Rational>,
    pub objective_value: Rational,
    pub tight_rows: Vec<usize>,
}

impl LinearProgram {
    pub fn new(objective: Vec<Rational>) -> Self {
        Self {
            variable_count: objective.len(),
            objective,
            rows: Vec::new(),
        }
    }

    pub fn with_rows(mut self, rows: impl IntoIterator<Item = CoveringRow>) -> Self {
        self.rows.extend(rows);
        self
    }

    fn validate(&self) -> Result<()> {
        if self.objective.len() != self.variable_count {
            return Err(Error::invalid("objective length differs from variable count"));
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.vars.iter().any(|&v| v >= self.variable_count) {
                return Err(Error::invalid(format!("row {i} references an unknown variable")));
            }
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.variable_count
            && x.iter().all(|v| !v.is_negative() && *v <= Rational::one())
            && self.rows.iter().all(|r| r.is_satisfied(x))
    }

    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.rows.len())
            .filter(|&i| self.rows[i].lhs(x) == self.rows[i].rhs)
            .collect()
    }
}

/// Optimal vertex of `lp`; deterministic.
pub fn solve_vertex(lp: &LinearProgram) -> Result<VertexSolution> {
    lp.validate()?;
    for (i, row) in lp.rows.iter().enumerate() {
        if row.rhs > Rational::from_integer(row.vars.len().into()) {
            return Err(Error::Infeasible(format!(
                "row {i} needs {} from {} variables bounded by one",
                row.rhs,
                row.vars.len()
            )));
        }
    }
    let active: Vec<&CoveringRow> = lp.rows.iter().filter(|r| r.rhs.is_positive()).collect();
    let values = Simplex::new(lp.variable_count, &lp.objective, &active).run()?;
    let objective_value = values
        .iter()
        .zip(&lp.objective)
        .fold(Rational::zero(), |acc, (x, c)| acc + x * c);
    let tight_rows = lp.tight_rows(&values);
    Ok(VertexSolution {
        values,
        objective_value,
        tight_rows,
    })
}

struct Simplex {
    n: usize,
    /// Canonical rows: `x_basis[i] + Σ_{j nonbasic} tab[i][j] x_j = const`.
    tab: Vec<Vec<Rational>>,
    basis: Vec<usize>,
    /// Reduced costs over all columns (zero on basic ones).
    reduced: Vec<Rational>,
    value: Vec<Rational>,
    is_basic: Vec<bool>,
}

impl Simplex {
    /// Columns `0..n` are the x variables, `n..n+m` the surplus variables.
    fn new(n: usize, objective: &[Rational], rows: &[&CoveringRow]) -> Self {
        let m = rows.len();
        let mut tab = vec![vec![Rational::zero(); n + m]; m];
        let mut value = vec![Rational::one(); n];
        value.resize(n + m, Rational::zero());
        for (i, row) in rows.iter().enumerate() {
            // Σ x − s = b, negated so that s has coefficient one.
            for &v in &row.vars {
                tab[i][v] = -Rational::one();
            }
            tab[i][n + i] = Rational::one();
            value[n + i] = Rational::from_integer(row.vars.len().into()) - &row.rhs;
        }
        let mut reduced = objective.to_vec();
        reduced.resize(n + m, Rational::zero());
        let mut is_basic = vec![false; n + m];
        for flag in &mut is_basic[n..] {
            *flag = true;
        }
        Self {
            n,
            tab,
            basis: (n..n + m).collect(),
            reduced,
            value,
            is_basic,
        }
    }

    fn upper(&self, j: usize) -> Option<Rational> {
        (j < self.n).then(Rational::one)
    }

    fn run(mut self) -> Result<Vec<Rational>> {
        loop {
            // Bland: lowest-index improving column.
            let entering = (0..self.reduced.len()).find(|&j| {
                if self.is_basic[j] {
                    return false;
                }
                let d = &self.reduced[j];
                let at_upper = self.upper(j).is_some_and(|u| self.value[j] == u);
                (d.is_negative() && !at_upper) || (d.is_positive() && !self.value[j].is_zero())
            });
            let Some(q) = entering else {
                self.value.truncate(self.n);
                return Ok(self.value);
            };
            let increasing = self.reduced[q].is_negative();

            // Ratio test. Basic i moves by -tab[i][q] * dir * theta.
            let mut step = self.upper(q);
            let mut leaving: Option<usize> = None;
            for i in 0..self.basis.len() {
                let a = &self.tab[i][q];
                if a.is_zero() {
                    continue;
                }
                let b = self.basis[i];
                let rate = if increasing { -a.clone() } else { a.clone() };
                let limit = if rate.is_negative() {
                    Some(&self.value[b] / -rate)
                } else {
                    self.upper(b).map(|u| (u - &self.value[b]) / rate)
                };
                let Some(limit) = limit else { continue };
                let better = match &step {
                    None => true,
                    Some(s) => {
                        limit < *s
                            || (limit == *s
                                && leaving.is_some_and(|l| self.basis[l] > b))
                    }
                };
                if better {
                    step = Some(limit);
                    leaving = Some(i);
                }
            }
            let Some(theta) = step else {
                return Err(Error::internal("covering LP reported unbounded"));
            };

            let signed = if increasing { theta.clone() } else { -theta.clone() };
            for i in 0..self.basis.len() {
                let a = &self.tab[i][q];
                if !a.is_zero() {
                    let b = self.basis[i];
                    self.value[b] = &self.value[b] - a * &signed;
                }
            }
            self.value[q] += &signed;

            if let Some(r) = leaving {
                self.pivot(r, q);
            }
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let pivot = self.tab[r][q].clone();
        for v in &mut self.tab[r] {
            *v /= &pivot;
        }
        let pivot_row = self.tab[r].clone();
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        let factor = self.reduced[q].clone();
        if !factor.is_zero() {
            for (v, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        let old = self.basis[r];
        self.is_basic[old] = false;
        self.is_basic[q] = true;
        self.basis[r] = q;
    }
}

/// Rank of the constraints tight at `x`: tight rows plus variables at 0 or 1.
pub fn tight_constraint_rank(lp: &LinearProgram, x: &[Rational]) -> usize {
    let n = lp.variable_count;
    let mut vectors: Vec<Vec<Rational>> = Vec::new();
    for i in lp.tight_rows(x) {
        let mut v = vec![Rational::zero(); n];
        for &j in &lp.rows[i].vars {
            v[j] = Rational::one();
        }
        vectors.push(v);
    }
    for (j, xj) in x.iter().enumerate() {
        if xj.is_zero() || xj.is_one() {
            let mut v = vec![Rational::zero(); n];
            v[j] = Rational::one();
            vectors.push(v);
        }
    }
    rank(vectors, n)
}

/// Exact rank by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>, columns: usize) -> usize {
    let mut r = 0;
    for c in 0..columns {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        let pivot_row: Vec<Rational> = rows[r].iter().map(|v| v / &pivot).collect();
        for row in rows.iter_mut().skip(r + 1) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v -= &factor * p;
            }
        }
        r += 1;
    }
    r
}

#[derive(Debug, Clone, Copy)]
pub struct CuttingPlaneOptions {
    pub max_rounds: usize,
}

impl Default for CuttingPlaneOptions {
    fn default() -> Self {
        Self { max_rounds: 10_000 }
    }
}

#[derive(Debug, Clone)]
pub struct CuttingPlaneOutcome {
    pub solution: VertexSolution,
    /// Rows generated by the oracle, in order.
    pub rows: Vec<CoveringRow>,
    /// Objective after each solve, first to last.
    pub objective_history: Vec<Rational>,
}

impl CuttingPlaneOutcome {
    pub fn program(&self, objective: &[Rational]) -> LinearProgram {
        LinearProgram::new(objective.to_vec()).with_rows(self.rows.iter().cloned())
    }
}

/// Repeatedly solves the working LP to a vertex and adds the row the oracle returns
/// until the oracle accepts the point.
pub fn cutting_plane_solve<F>(
    objective: &[Rational],
    separation: F,
    options: CuttingPlaneOptions,
) -> Result<CuttingPlaneOutcome>
where
    F: FnMut(&[Rational]) -> Result<Option<CoveringRow>>,
{
    cutting_plane_solve_seeded(objective, Vec::new(), separation, options)
}

/// As [`cutting_plane_solve`], starting from `seed` rows that must be valid for the
/// implicit polytope.
pub fn cutting_plane_solve_seeded<F>(
    objective: &[Rational],
    seed: Vec<CoveringRow>,
    mut separation: F,
    options: CuttingPlaneOptions,
) -> Result<CuttingPlaneOutcome>
where
    F: FnMut(&[Rational]) -> Result<Option<CoveringRow>>,
{
    let mut lp = LinearProgram::new(objective.to_vec()).with_rows(seed);
    lp.validate()?;
    let mut history: Vec<Rational> = Vec::new();
    for _ in 0..options.max_rounds {
        let solution = solve_vertex(&lp)?;
        if history.last().is_some_and(|prev| solution.objective_value < *prev) {
            return Err(Error::internal("cutting-plane objective decreased"));
        }
        history.push(solution.objective_value.clone());
        match separation(&solution.values)? {
            None => {
                return Ok(CuttingPlaneOutcome {
                    solution,
                    rows: lp.rows,
                    objective_history: history,
                })
            }
            Some(row) => {
                if row.vars.iter().any(|&v| v >= lp.variable_count) {
                    return Err(Error::internal("separation row references an unknown variable"));
                }
                if row.is_satisfied(&solution.values) {
                    return Err(Error::internal(
                        "separation oracle returned a row that the point satisfies",
                    ));
                }
                lp.rows.push(row);
            }
        }
    }
    Err(Error::Resource(format!(
        "cutting plane did not converge within {} rounds",
        options.max_rounds
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{int, ratio};
    use proptest::prelude::*;

    fn ones(n: usize) -> Vec<Rational> {
        vec![int(1); n]
    }

    #[test]
    fn single_half_row() {
        let lp = LinearProgram::new(ones(1)).with_rows([CoveringRow::new([0], ratio(1, 2))]);
        let s = solve_vertex(&lp).unwrap();
        assert_eq!(s.values, vec![ratio(1, 2)]);
        assert_eq!(s.tight_rows, vec![0]);
    }

    #[test]
    fn returns_a_vertex_not_the_midpoint() {
        let lp = LinearProgram::new(ones(2)).with_rows([CoveringRow::new([0, 1], int(1))]);
        let s = solve_vertex(&lp).unwrap();
        assert_eq!(s.objective_value, int(1));
        assert!(s.values == vec![int(1), int(0)] || s.values == vec![int(0), int(1)]);
        assert_eq!(tight_constraint_rank(&lp, &s.values), 2);
    }

    /// Cut rows of 2-ECSS on K4, unit weights.
    fn k4_two_cut_lp() -> LinearProgram {
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut lp = LinearProgram::new(ones(6));
        for mask in 1u32..8 {
            // sides containing node 3 are complements of these
            let inside = |v: usize| v < 3 && mask >> v & 1 == 1;
            let vars = (0..6).filter(|&e| inside(pairs[e].0) != inside(pairs[e].1));
            lp.rows.push(CoveringRow::new(vars, int(2)));
        }
        lp
    }

    #[test]
    fn k4_two_edge_connected_relaxation() {
        let lp = k4_two_cut_lp();
        let s = solve_vertex(&lp).unwrap();
        assert_eq!(s.objective_value, int(4));
        assert!(lp.is_feasible_point(&s.values));
        assert_eq!(tight_constraint_rank(&lp, &s.values), 6);
    }

    #[test]
    fn infeasible_row_is_named() {
        let lp = LinearProgram::new(ones(2)).with_rows([
            CoveringRow::new([0], int(0)),
            CoveringRow::new([0, 1], int(3)),
        ]);
        match solve_vertex(&lp) {
            Err(Error::Infeasible(msg)) => assert!(msg.contains("row 1")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn nonpositive_rows_are_vacuous() {
        let lp = LinearProgram::new(ones(2)).with_rows([CoveringRow::new([0, 1], int(-3))]);
        let s = solve_vertex(&lp).unwrap();
        assert_eq!(s.values, vec![int(0), int(0)]);
    }

    #[test]
    fn cutting_plane_trivial_oracles() {
        let out = cutting_plane_solve(&ones(3), |_| Ok(None), Default::default()).unwrap();
        assert_eq!(out.solution.values, vec![int(0); 3]);
        assert_eq!(out.solution.objective_value, int(0));

        let mut asked = false;
        let out = cutting_plane_solve(
            &ones(1),
            |x| {
                if x[0] < int(1) && !asked {
                    asked = true;
                    return Ok(Some(CoveringRow::new([0], int(1))));
                }
                Ok(None)
            },
            Default::default(),
        )
        .unwrap();
        assert_eq!(out.solution.values, vec![int(1)]);
        assert_eq!(out.objective_history, vec![int(0), int(1)]);
    }

    #[test]
    fn cutting_plane_rejects_non_violated_rows() {
        let err = cutting_plane_solve(
            &ones(1),
            |_| Ok(Some(CoveringRow::new([0], int(0)))),
            Default::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InternalLogic(_)));
    }

    #[test]
    fn cutting_plane_round_cap() {
        let err = cutting_plane_solve(
            &ones(1),
            |_| Ok(Some(CoveringRow::new([0], int(1)))),
            CuttingPlaneOptions { max_rounds: 1 },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Resource(_)));
    }

    #[test]
    fn cutting_plane_matches_explicit_k4() {
        let full = k4_two_cut_lp();
        let out = cutting_plane_solve(
            &ones(6),
            |x| Ok(full.rows.iter().find(|r| !r.is_satisfied(x)).cloned()),
            Default::default(),
        )
        .unwrap();
        assert_eq!(out.solution.objective_value, int(4));
        assert!(full.is_feasible_point(&out.solution.values));
        assert_eq!(tight_constraint_rank(&full, &out.solution.values), 6);
    }

    /// Optimum over all vertices: every choice of n independent tight constraints.
    fn brute_optimum(lp: &LinearProgram) -> Option<Rational> {
        let n = lp.variable_count;
        // Candidate constraints as (coefficients, rhs).
        let mut cons: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for j in 0..n {
            let mut e = vec![int(0); n];
            e[j] = int(1);
            cons.push((e.clone(), int(0)));
            cons.push((e, int(1)));
        }
        for r in &lp.rows {
            let mut v = vec![int(0); n];
            for &j in &r.vars {
                v[j] = int(1);
            }
            cons.push((v, r.rhs.clone()));
        }
        let mut best: Option<Rational> = None;
        let k = cons.len();
        let mut pick = Vec::new();
        fn rec(
            start: usize,
            k: usize,
            n: usize,
            pick: &mut Vec<usize>,
            cons: &[(Vec<Rational>, Rational)],
            lp: &LinearProgram,
            best: &mut Option<Rational>,
        ) {
            if pick.len() == n {
                if let Some(x) = solve_square(pick.iter().map(|&i| cons[i].clone()).collect(), n) {
                    if lp.is_feasible_point(&x) {
                        let obj = x.iter().zip(&lp.objective).fold(int(0), |a, (x, c)| a + x * c);
                        if best.as_ref().is_none_or(|b| obj < *b) {
                            *best = Some(obj);
                        }
                    }
                }
                return;
            }
            for i in start..k {
                pick.push(i);
                rec(i + 1, k, n, pick, cons, lp, best);
                pick.pop();
            }
        }
        rec(0, k, n, &mut pick, &cons, lp, &mut best);
        best
    }

    fn solve_square(mut a: Vec<(Vec<Rational>, Rational)>, n: usize) -> Option<Vec<Rational>> {
        for c in 0..n {
            let p = (c..n).find(|&i| !a[i].0[c].is_zero())?;
            a.swap(c, p);
            let piv = a[c].0[c].clone();
            let (row, rhs) = a[c].clone();
            let row: Vec<Rational> = row.iter().map(|v| v / &piv).collect();
            let rhs = rhs / &piv;
            a[c] = (row.clone(), rhs.clone());
            for (i, entry) in a.iter_mut().enumerate() {
                if i != c && !entry.0[c].is_zero() {
                    let f = entry.0[c].clone();
                    for (v, p) in entry.0.iter_mut().zip(&row) {
                        *v -= &f * p;
                    }
                    entry.1 -= &f * &rhs;
                }
            }
        }
        Some(a.into_iter().map(|(_, r)| r).collect())
    }

    fn arb_lp() -> impl Strategy<Value = LinearProgram> {
        (1usize..5).prop_flat_map(|n| {
            (
                prop::collection::vec((0i64..6, 1i64..4), n),
                prop::collection::vec((prop::collection::btree_set(0..n, 1..=n), 0i64..5, 1i64..3), 0..5),
            )
                .prop_map(move |(obj, rows)| {
                    let mut lp =
                        LinearProgram::new(obj.into_iter().map(|(a, b)| ratio(a, b)).collect());
                    for (vars, a, b) in rows {
                        let rhs = ratio(a, b);
                        if rhs <= int(vars.len() as i64) {
                            lp.rows.push(CoveringRow { vars, rhs });
                        }
                    }
                    lp
                })
        })
    }

    proptest! {
        #[test]
        fn simplex_matches_vertex_enumeration(lp in arb_lp()) {
            let s = solve_vertex(&lp).unwrap();
            prop_assert!(lp.is_feasible_point(&s.values));
            prop_assert_eq!(tight_constraint_rank(&lp, &s.values), lp.variable_count);
            prop_assert_eq!(Some(s.objective_value), brute_optimum(&lp));
        }
    }
}
