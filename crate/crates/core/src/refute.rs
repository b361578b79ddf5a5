//! Counterexample hints for inequalities that are not provable.
//!
//! Bounding every single-party entropy by one (`Ws <= 1`) makes
//! `min b⊤s s.t. Gs >= 0, Qs = 0, Ws <= 1` finite. An optimal dual
//! `(y*, mu*, lambda*)` satisfies `b⊤ = y*⊤G - mu*⊤Q - lambda*⊤W`, so any
//! entropic vector `s'` with `G_i s' = 0` for every `y*_i > 0`, `Qs' = 0`
//! and `0 < Ws' <= 1` has `b⊤s' = -lambda*⊤Ws' < 0`.

use num_traits::{One, Signed, Zero};

use crate::elemental::{generate_elemental, ElementalSystem};
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, LpProblem, Relation, SolverOptions};
use crate::parser::{render_balanced_equality, render_expr, Query};
use crate::prover::{certificate_lp, check_query};
use crate::space::{dot, LinearForm, SystemContext};
use crate::Rational;

/// `W = [I | 0]`: one row per party selecting its single-party entropy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundMatrix {
    rows: Vec<LinearForm>,
}

impl BoundMatrix {
    pub fn new(ctx: &SystemContext) -> Self {
        let rows = (0..ctx.n())
            .map(|x| LinearForm::entropy(ctx, ctx.singleton(x)))
            .collect();
        BoundMatrix { rows }
    }

    pub fn rows(&self) -> &[LinearForm] {
        &self.rows
    }

    /// `lambda⊤W` as a form.
    pub fn combine(&self, ctx: &SystemContext, lambda: &[Rational]) -> LinearForm {
        let mut out = LinearForm::zero(ctx);
        for (l, w) in lambda.iter().zip(&self.rows) {
            if !l.is_zero() {
                out = &out + &w.scale(l);
            }
        }
        out
    }
}

/// An elemental row reported as an equality `G_i s = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightRow {
    pub index: usize,
    /// `y*_i`, strictly positive.
    pub weight: Rational,
    pub form: LinearForm,
    /// e.g. `S(A,B) + S(B,C) = S(B) + S(A,B,C)`.
    pub equality: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HintReport {
    /// Optimum of the bounded problem, `-lambda*⊤1`.
    pub optimal_value: Rational,
    pub y_star: Vec<Rational>,
    pub mu_star: Vec<Rational>,
    pub lambda_star: Vec<Rational>,
    pub tight: Vec<TightRow>,
    pub constraint_equalities: Vec<String>,
    /// `0 < (S(A), S(B), ...) <= 1`, at least one entry strictly positive.
    pub bound_conditions: String,
    /// `b⊤s' = -(lambda*⊤Ws')` rendered over the single-party entropies.
    pub predicted_violation: String,
    /// Primal optimum of the bounded problem, when it was solved.
    pub witness: Option<LinearForm>,
}

impl HintReport {
    pub fn tight_equalities(&self) -> Vec<&str> {
        self.tight.iter().map(|t| t.equality.as_str()).collect()
    }
}

fn bound_conditions(ctx: &SystemContext) -> String {
    let singles: Vec<String> = (0..ctx.n())
        .map(|x| format!("S({})", ctx.parties()[x]))
        .collect();
    format!(
        "0 < ({}) <= 1 (each at most 1, at least one positive)",
        singles.join(", ")
    )
}

fn predicted_violation(ctx: &SystemContext, bounds: &BoundMatrix, lambda: &[Rational]) -> String {
    let combo = bounds.combine(ctx, lambda);
    format!("b's' = -({})", render_expr(&combo))
}

fn build_report(
    system: &ElementalSystem,
    query: &Query,
    y: Vec<Rational>,
    mu: Vec<Rational>,
    lambda: Vec<Rational>,
    witness: Option<LinearForm>,
) -> Result<HintReport> {
    let ctx = &query.context;
    if lambda.iter().all(Zero::is_zero) {
        return Err(Error::ZeroBoundMultipliers);
    }
    let bounds = BoundMatrix::new(ctx);
    let tight = y
        .iter()
        .zip(system.rows())
        .enumerate()
        .filter(|(_, (yi, _))| yi.is_positive())
        .map(|(index, (yi, row))| TightRow {
            index,
            weight: yi.clone(),
            form: row.form().clone(),
            equality: render_balanced_equality(row.form()),
        })
        .collect();
    let optimal_value = -lambda.iter().sum::<Rational>();
    Ok(HintReport {
        optimal_value,
        constraint_equalities: query
            .constraints
            .iter()
            .map(render_balanced_equality)
            .collect(),
        bound_conditions: bound_conditions(ctx),
        predicted_violation: predicted_violation(ctx, &bounds, &lambda),
        y_star: y,
        mu_star: mu,
        lambda_star: lambda,
        tight,
        witness,
    })
}

pub fn hints(query: &Query) -> Result<HintReport> {
    hints_with(query, &SolverOptions::default())
}

pub fn hints_with(query: &Query, options: &SolverOptions) -> Result<HintReport> {
    let system = generate_elemental(&query.context)?;
    hints_in(&system, query, options)
}

/// The bounded problem `min b⊤s s.t. Gs >= 0, Qs = 0, Ws <= 1`.
pub fn bounded_problem(system: &ElementalSystem, query: &Query) -> LpProblem {
    let ctx = &query.context;
    let mut problem = LpProblem::new(query.b.coeffs().to_vec());
    for g in system.forms() {
        problem.add_row(g.coeffs().to_vec(), Relation::Ge, Rational::zero());
    }
    for q in &query.constraints {
        problem.add_row(q.coeffs().to_vec(), Relation::Eq, Rational::zero());
    }
    for w in BoundMatrix::new(ctx).rows() {
        problem.add_row(w.coeffs().to_vec(), Relation::Le, Rational::one());
    }
    problem
}

pub fn hints_in(
    system: &ElementalSystem,
    query: &Query,
    options: &SolverOptions,
) -> Result<HintReport> {
    check_query(system, query)?;
    let problem = bounded_problem(system, query);
    let (value, point, duals) = match lp::solve_with(&problem, options)? {
        LpOutcome::Optimal {
            value,
            point,
            duals,
        } => (value, point, duals),
        other => {
            return Err(Error::Certificate(format!(
                "bounded problem ended {:?}",
                other.status()
            )))
        }
    };
    if !value.is_negative() {
        return Err(Error::NothingToRefute);
    }
    let m = system.len();
    let q = query.constraints.len();
    // LP duals use b = G⊤d_G + Q⊤d_Q + W⊤d_W with d_W <= 0.
    let y = duals[..m].to_vec();
    let mu: Vec<Rational> = duals[m..m + q].iter().map(|d| -d).collect();
    let lambda: Vec<Rational> = duals[m + q..].iter().map(|d| -d).collect();
    let witness = LinearForm::from_coeffs(&query.context, point)?;
    let report = build_report(system, query, y, mu, lambda, Some(witness))?;
    if report.optimal_value != value {
        return Err(Error::Certificate(format!(
            "bound multipliers give {} but the optimum is {value}",
            report.optimal_value
        )));
    }
    Ok(report)
}

/// Re-solves for the ℓ1-smallest `[y, mu]` with
/// `b⊤ + lambda⊤W = y⊤G - mu⊤Q`.
pub fn shortest_hints(query: &Query, lambda_star: &[Rational]) -> Result<HintReport> {
    shortest_hints_with(query, lambda_star, &SolverOptions::default())
}

pub fn shortest_hints_with(
    query: &Query,
    lambda_star: &[Rational],
    options: &SolverOptions,
) -> Result<HintReport> {
    let system = generate_elemental(&query.context)?;
    shortest_hints_in(&system, query, lambda_star, options)
}

pub fn shortest_hints_in(
    system: &ElementalSystem,
    query: &Query,
    lambda_star: &[Rational],
    options: &SolverOptions,
) -> Result<HintReport> {
    check_query(system, query)?;
    let ctx = &query.context;
    if lambda_star.len() != ctx.n() {
        return Err(Error::DimensionMismatch {
            expected: ctx.n(),
            found: lambda_star.len(),
        });
    }
    if lambda_star.iter().any(Signed::is_negative) {
        return Err(Error::InconsistentMultipliers);
    }
    if lambda_star.iter().all(Zero::is_zero) {
        return Err(Error::ZeroBoundMultipliers);
    }
    let target = &query.b + &BoundMatrix::new(ctx).combine(ctx, lambda_star);
    let problem = certificate_lp(system, &query.constraints, &target, true);
    let point = match lp::solve_with(&problem, options)? {
        LpOutcome::Optimal { point, .. } => point,
        LpOutcome::Infeasible { .. } => return Err(Error::InconsistentMultipliers),
        LpOutcome::Unbounded { .. } => {
            return Err(Error::Certificate("l1 objective reported unbounded".into()))
        }
    };
    let m = system.len();
    let q = query.constraints.len();
    let y = point[..m].to_vec();
    let mu = point[m..m + q].to_vec();
    build_report(system, query, y, mu, lambda_star.to_vec(), None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    /// `Gs >= 0`.
    pub in_cone: bool,
    /// Every reported tight equality holds; true when no report was given.
    pub tight_equalities_hold: bool,
    /// `Qs = 0`.
    pub constraints_hold: bool,
    /// `0 <= Ws <= 1` with some single-party entropy strictly positive.
    pub bounds_hold: bool,
    /// `b⊤s`.
    pub value: Rational,
    pub confirmed: bool,
}

/// Checks a candidate entropic vector against the cone, the hint system and
/// the inequality, exactly.
pub fn check_vector(
    query: &Query,
    s: &LinearForm,
    report: Option<&HintReport>,
) -> Result<CheckResult> {
    let system = generate_elemental(&query.context)?;
    check_vector_in(&system, query, s, report)
}

pub fn check_vector_in(
    system: &ElementalSystem,
    query: &Query,
    s: &LinearForm,
    report: Option<&HintReport>,
) -> Result<CheckResult> {
    check_query(system, query)?;
    query.context.check_same(s.context())?;
    let sv = s.coeffs();
    let in_cone = system.forms().all(|g| !dot(g.coeffs(), sv).is_negative());
    let tight_equalities_hold = report.is_none_or(|r| {
        r.tight
            .iter()
            .all(|t| t.form.context() == s.context() && dot(t.form.coeffs(), sv).is_zero())
    });
    let constraints_hold = query
        .constraints
        .iter()
        .all(|q| dot(q.coeffs(), sv).is_zero());
    let one = Rational::one();
    let singles: Vec<&Rational> = (0..query.context.n())
        .map(|x| s.coeff(query.context.singleton(x)))
        .collect();
    let bounds_hold = singles.iter().all(|v| !v.is_negative() && **v <= one)
        && singles.iter().any(|v| v.is_positive());
    let value = dot(query.b.coeffs(), sv);
    let confirmed =
        in_cone && tight_equalities_hold && constraints_hold && bounds_hold && value.is_negative();
    Ok(CheckResult {
        in_cone,
        tight_equalities_hold,
        constraints_hold,
        bounds_hold,
        value,
        confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_constraint_in;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn cond_entropy() -> Query {
        Query::parse_with(
            "S(A|B) >= 0",
            &[] as &[&str],
            Some(&["A".into(), "B".into(), "C".into()]),
            8,
        )
        .unwrap()
    }

    #[test]
    fn bound_matrix_picks_singletons() {
        let ctx = SystemContext::lettered(3).unwrap();
        let w = BoundMatrix::new(&ctx);
        assert_eq!(w.rows().len(), 3);
        // A, B, AB, C: singleton C is coordinate 3
        assert_eq!(
            w.rows()[2],
            LinearForm::from_integers(&ctx, &[0, 0, 0, 1, 0, 0, 0]).unwrap()
        );
    }

    #[test]
    fn conditional_entropy_hints() {
        let q = cond_entropy();
        let report = hints(&q).unwrap();
        assert_eq!(report.optimal_value, r(-1));
        assert!(!report.tight.is_empty());
        let witness = report.witness.clone().unwrap();
        let check = check_vector(&q, &witness, Some(&report)).unwrap();
        assert!(check.confirmed, "{check:?}");
        assert_eq!(check.value, r(-1));
    }

    #[test]
    fn provable_query_has_nothing_to_refute() {
        let q = Query::parse("I(A;B) >= 0", &[] as &[&str]).unwrap();
        assert_eq!(hints(&q), Err(Error::NothingToRefute));
    }

    #[test]
    fn bell_vector_confirms() {
        let q = cond_entropy();
        let report = hints(&q).unwrap();
        let s = LinearForm::from_integers(&q.context, &[1, 1, 0, 0, 1, 1, 0]).unwrap();
        let check = check_vector(&q, &s, Some(&report)).unwrap();
        assert!(check.confirmed);
        assert_eq!(check.value, r(-1));
        for text in [
            "S(A,C) = S(A) + S(C)",
            "S(A,B) + S(B,C) = S(B) + S(A,B,C)",
            "S(A,B) + S(A,C) = S(A) + S(A,B,C)",
            "S(A) + S(A,B,C) = S(B,C)",
            "S(A,B) + S(B,C) = S(A) + S(C)",
        ] {
            let f = parse_constraint_in(text, &q.context).unwrap();
            assert!(f.eval(&s).unwrap().is_zero(), "{text}");
        }
    }

    #[test]
    fn product_vector_and_origin_are_not_counterexamples() {
        let q = cond_entropy();
        let product = LinearForm::from_integers(&q.context, &[1, 1, 2, 1, 2, 2, 3]).unwrap();
        let check = check_vector(&q, &product, None).unwrap();
        assert!(check.in_cone);
        assert_eq!(check.value, r(1));
        assert!(!check.confirmed);
        let origin = LinearForm::zero(&q.context);
        let check = check_vector(&q, &origin, None).unwrap();
        assert!(!check.bounds_hold);
        assert!(!check.confirmed);
    }

    #[test]
    fn shortest_hints_are_no_longer() {
        let q = cond_entropy();
        let plain = hints(&q).unwrap();
        let short = shortest_hints(&q, &plain.lambda_star).unwrap();
        assert!(short.tight.len() <= plain.tight.len());
        assert_eq!(short.optimal_value, plain.optimal_value);
        let s = LinearForm::from_integers(&q.context, &[1, 1, 0, 0, 1, 1, 0]).unwrap();
        assert!(check_vector(&q, &s, Some(&short)).unwrap().confirmed);
    }

    #[test]
    fn zero_lambda_is_rejected() {
        let q = cond_entropy();
        assert_eq!(
            shortest_hints(&q, &[r(0), r(0), r(0)]),
            Err(Error::ZeroBoundMultipliers)
        );
    }
}
