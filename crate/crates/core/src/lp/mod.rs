//! Exact rational linear programming with certified outcomes.
//!
//! Problems are always minimizations. Every outcome carries a certificate
//! that [`check_certificate`] re-verifies from the problem data alone:
//!
//! * `Optimal`: a primal point and one dual multiplier per row. Multipliers
//!   of `>=` rows are nonnegative, of `<=` rows nonpositive, of `=` rows
//!   free; reduced costs `c - A⊤y` vanish on free variables and are
//!   nonnegative on nonnegative ones; `c⊤x = rhs⊤y`.
//! * `Unbounded`: a feasible point and a ray along which every row stays
//!   satisfied and the objective strictly decreases.
//! * `Infeasible`: Farkas multipliers (same sign convention as duals) whose
//!   row combination has zero coefficients on free variables, nonpositive
//!   coefficients on nonnegative variables and a strictly positive
//!   right-hand side.

mod simplex;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::space::dot;
use crate::Rational;

pub use simplex::solve_with;

/// Default pivot budget per solve.
pub const DEFAULT_MAX_PIVOTS: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Domain {
    Free,
    NonNegative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<Rational>, relation: Relation, rhs: Rational) -> Self {
        Constraint {
            coeffs,
            relation,
            rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub rows: Vec<Constraint>,
    pub domains: Vec<Domain>,
}

impl LpProblem {
    /// Problem with the given objective and every variable free.
    pub fn new(objective: Vec<Rational>) -> Self {
        let domains = vec![Domain::Free; objective.len()];
        LpProblem {
            objective,
            rows: Vec::new(),
            domains,
        }
    }

    pub fn with_domains(objective: Vec<Rational>, domains: Vec<Domain>) -> Self {
        LpProblem {
            objective,
            rows: Vec::new(),
            domains,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_row(&mut self, coeffs: Vec<Rational>, relation: Relation, rhs: Rational) {
        self.rows.push(Constraint::new(coeffs, relation, rhs));
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.domains.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.domains.len(),
            });
        }
        for row in &self.rows {
            if row.coeffs.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.coeffs.len(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
        duals: Vec<Rational>,
    },
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
    Infeasible {
        farkas: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
            LpOutcome::Infeasible { .. } => LpStatus::Infeasible,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

/// Anti-cycling pivot rules.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PivotRule {
    /// Smallest-index entering and leaving variables.
    #[default]
    Bland,
    /// Most negative reduced cost with a lexicographic ratio test.
    Lexicographic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverOptions {
    pub pivot_rule: PivotRule,
    pub max_pivots: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            pivot_rule: PivotRule::Bland,
            max_pivots: DEFAULT_MAX_PIVOTS,
        }
    }
}

/// Solves with default options.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome> {
    solve_with(problem, &SolverOptions::default())
}

fn row_activity(row: &Constraint, x: &[Rational]) -> Rational {
    dot(&row.coeffs, x)
}

fn satisfies(value: &Rational, relation: Relation, rhs: &Rational) -> bool {
    match relation {
        Relation::Ge => value >= rhs,
        Relation::Le => value <= rhs,
        Relation::Eq => value == rhs,
    }
}

fn multiplier_sign_ok(m: &Rational, relation: Relation) -> bool {
    match relation {
        Relation::Ge => !m.is_negative(),
        Relation::Le => !m.is_positive(),
        Relation::Eq => true,
    }
}

/// Whether `x` satisfies every row and variable domain exactly.
pub fn is_feasible(problem: &LpProblem, x: &[Rational]) -> bool {
    x.len() == problem.num_vars()
        && x.iter()
            .zip(&problem.domains)
            .all(|(v, d)| *d == Domain::Free || !v.is_negative())
        && problem
            .rows
            .iter()
            .all(|row| satisfies(&row_activity(row, x), row.relation, &row.rhs))
}

/// `A⊤m`, the row combination with multipliers `m`.
fn combine_rows(problem: &LpProblem, m: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); problem.num_vars()];
    for (row, mi) in problem.rows.iter().zip(m) {
        if mi.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(&row.coeffs) {
            if !a.is_zero() {
                *o += a * mi;
            }
        }
    }
    out
}

/// Re-verifies an outcome's certificate against the problem, exactly.
pub fn check_certificate(problem: &LpProblem, outcome: &LpOutcome) -> bool {
    if problem.validate().is_err() {
        return false;
    }
    let n = problem.num_vars();
    let m = problem.rows.len();
    match outcome {
        LpOutcome::Optimal {
            value,
            point,
            duals,
        } => {
            if duals.len() != m || !is_feasible(problem, point) {
                return false;
            }
            if dot(&problem.objective, point) != *value {
                return false;
            }
            if !duals
                .iter()
                .zip(&problem.rows)
                .all(|(y, row)| multiplier_sign_ok(y, row.relation))
            {
                return false;
            }
            let aty = combine_rows(problem, duals);
            let reduced_ok = problem
                .objective
                .iter()
                .zip(&aty)
                .zip(&problem.domains)
                .all(|((c, a), d)| {
                    let r = c - a;
                    match d {
                        Domain::Free => r.is_zero(),
                        Domain::NonNegative => !r.is_negative(),
                    }
                });
            let dual_value: Rational = problem
                .rows
                .iter()
                .zip(duals)
                .map(|(row, y)| &row.rhs * y)
                .sum();
            reduced_ok && dual_value == *value
        }
        LpOutcome::Unbounded { point, ray } => {
            if ray.len() != n || !is_feasible(problem, point) {
                return false;
            }
            let ray_in_domain = ray
                .iter()
                .zip(&problem.domains)
                .all(|(r, d)| *d == Domain::Free || !r.is_negative());
            let rows_ok = problem.rows.iter().all(|row| {
                let act = row_activity(row, ray);
                satisfies(&act, row.relation, &Rational::zero())
            });
            ray_in_domain && rows_ok && dot(&problem.objective, ray).is_negative()
        }
        LpOutcome::Infeasible { farkas } => {
            if farkas.len() != m {
                return false;
            }
            if !farkas
                .iter()
                .zip(&problem.rows)
                .all(|(z, row)| multiplier_sign_ok(z, row.relation))
            {
                return false;
            }
            let combo = combine_rows(problem, farkas);
            let lhs_ok = combo.iter().zip(&problem.domains).all(|(a, d)| match d {
                Domain::Free => a.is_zero(),
                Domain::NonNegative => !a.is_positive(),
            });
            let rhs: Rational = problem
                .rows
                .iter()
                .zip(farkas)
                .map(|(row, z)| &row.rhs * z)
                .sum();
            lhs_ok && rhs.is_positive()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn bounded_maximization() {
        // min -x  s.t. x <= 1, x >= 0
        let mut p = LpProblem::with_domains(vec![r(-1)], vec![Domain::NonNegative]);
        p.add_row(vec![r(1)], Relation::Le, r(1));
        let out = solve(&p).unwrap();
        match &out {
            LpOutcome::Optimal { value, duals, .. } => {
                assert_eq!(*value, r(-1));
                assert_eq!(duals, &vec![r(-1)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(check_certificate(&p, &out));
    }

    #[test]
    fn unbounded_ray() {
        let p = LpProblem::with_domains(vec![r(-1)], vec![Domain::NonNegative]);
        let out = solve(&p).unwrap();
        match &out {
            LpOutcome::Unbounded { ray, .. } => assert_eq!(ray, &vec![r(1)]),
            other => panic!("expected unbounded, got {other:?}"),
        }
        assert!(check_certificate(&p, &out));
    }

    #[test]
    fn infeasible_farkas() {
        // x >= 1 and -x >= 0
        let mut p = LpProblem::new(vec![r(0)]);
        p.add_row(vec![r(1)], Relation::Ge, r(1));
        p.add_row(vec![r(-1)], Relation::Ge, r(0));
        let out = solve(&p).unwrap();
        match &out {
            LpOutcome::Infeasible { farkas } => assert_eq!(farkas, &vec![r(1), r(1)]),
            other => panic!("expected infeasible, got {other:?}"),
        }
        assert!(check_certificate(&p, &out));
    }

    #[test]
    fn perturbed_dual_is_rejected() {
        let mut p = LpProblem::with_domains(vec![r(-1)], vec![Domain::NonNegative]);
        p.add_row(vec![r(1)], Relation::Le, r(1));
        let mut out = solve(&p).unwrap();
        if let LpOutcome::Optimal { duals, .. } = &mut out {
            duals[0] += q(1, 1_000_000_000);
        }
        assert!(!check_certificate(&p, &out));
    }

    #[test]
    fn flat_ray_is_rejected() {
        let mut p = LpProblem::new(vec![r(1), r(0)]);
        p.add_row(vec![r(1), r(0)], Relation::Ge, r(0));
        let bogus = LpOutcome::Unbounded {
            point: vec![r(0), r(0)],
            ray: vec![r(0), r(1)],
        };
        assert!(!check_certificate(&p, &bogus));
    }

    #[test]
    fn free_variables_and_equalities() {
        // min x + y s.t. x - y = 3, y >= -2  (x, y free)
        let mut p = LpProblem::new(vec![r(1), r(1)]);
        p.add_row(vec![r(1), r(-1)], Relation::Eq, r(3));
        p.add_row(vec![r(0), r(1)], Relation::Ge, r(-2));
        let out = solve(&p).unwrap();
        match &out {
            LpOutcome::Optimal { value, point, .. } => {
                assert_eq!(*value, r(-1));
                assert_eq!(point, &vec![r(1), r(-2)]);
            }
            other => panic!("expected optimal, got {other:?}"),
        }
        assert!(check_certificate(&p, &out));
    }

    #[test]
    fn redundant_equalities() {
        // x + y = 1 twice, 2x + 2y = 2, minimize x with x, y >= 0
        let mut p = LpProblem::with_domains(vec![r(1), r(0)], vec![Domain::NonNegative; 2]);
        p.add_row(vec![r(1), r(1)], Relation::Eq, r(1));
        p.add_row(vec![r(1), r(1)], Relation::Eq, r(1));
        p.add_row(vec![r(2), r(2)], Relation::Eq, r(2));
        let out = solve(&p).unwrap();
        assert_eq!(out.status(), LpStatus::Optimal);
        assert!(check_certificate(&p, &out));
    }

    #[test]
    fn pivot_limit_is_reported() {
        let mut p = LpProblem::with_domains(vec![r(-1), r(-1)], vec![Domain::NonNegative; 2]);
        p.add_row(vec![r(1), r(2)], Relation::Le, r(4));
        p.add_row(vec![r(3), r(1)], Relation::Le, r(6));
        let opts = SolverOptions {
            max_pivots: 0,
            ..SolverOptions::default()
        };
        assert!(matches!(solve_with(&p, &opts), Err(Error::PivotLimit(0))));
    }

    #[test]
    fn lexicographic_rule_agrees_with_bland() {
        let mut p =
            LpProblem::with_domains(vec![r(-3), r(-2), r(-4)], vec![Domain::NonNegative; 3]);
        p.add_row(vec![r(1), r(1), r(2)], Relation::Le, r(4));
        p.add_row(vec![r(2), r(0), r(3)], Relation::Le, r(5));
        p.add_row(vec![r(2), r(1), r(3)], Relation::Le, r(7));
        let lex = SolverOptions {
            pivot_rule: PivotRule::Lexicographic,
            ..SolverOptions::default()
        };
        let a = solve(&p).unwrap();
        let b = solve_with(&p, &lex).unwrap();
        assert!(check_certificate(&p, &b));
        match (a, b) {
            (LpOutcome::Optimal { value: va, .. }, LpOutcome::Optimal { value: vb, .. }) => {
                assert_eq!(va, vb)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let mut p = LpProblem::new(vec![r(1)]);
        p.add_row(vec![r(1), r(1)], Relation::Ge, r(0));
        assert!(matches!(solve(&p), Err(Error::DimensionMismatch { .. })));
    }
}
