//! ℓ1-minimal proof certificates.
//!
//! Minimizes `1⊤y + 1⊤t` over `y⊤G - mu⊤Q = b⊤`, `-t <= mu <= t`,
//! `y, t >= 0`. This is a relaxation of the fewest-terms proof; the result is
//! ℓ1-optimal, and its term count is reported without any claim of
//! cardinality optimality.

use num_traits::Signed;

use crate::elemental::{generate_elemental, ElementalSystem};
use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome, SolverOptions};
use crate::parser::Query;
use crate::prover::{certificate_lp, check_query, verify_in, ProofCertificate};
use crate::space::LinearForm;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestProofResult {
    pub certificate: ProofCertificate,
    /// `1⊤y + Σ|mu|`.
    pub l1_weight: Rational,
    /// Nonzero entries of `y`.
    pub term_count: usize,
    /// Dual optimum restricted to the coordinate rows. Without constraints
    /// it satisfies `Gu <= 1` and `b⊤u = l1_weight`, which bounds the weight
    /// of every certificate from below.
    pub minimality_witness: LinearForm,
}

pub fn shortest_proof(query: &Query) -> Result<ShortestProofResult> {
    shortest_proof_with(query, &SolverOptions::default())
}

pub fn shortest_proof_with(query: &Query, options: &SolverOptions) -> Result<ShortestProofResult> {
    let system = generate_elemental(&query.context)?;
    shortest_proof_in(&system, query, options)
}

pub fn shortest_proof_in(
    system: &ElementalSystem,
    query: &Query,
    options: &SolverOptions,
) -> Result<ShortestProofResult> {
    check_query(system, query)?;
    let m = system.len();
    let q = query.constraints.len();
    let problem = certificate_lp(system, &query.constraints, &query.b, true);
    match lp::solve_with(&problem, options)? {
        LpOutcome::Optimal {
            value,
            point,
            duals,
        } => {
            let y = point[..m].to_vec();
            let mu = point[m..m + q].to_vec();
            let certificate = ProofCertificate::new(system, &query.constraints, y, mu);
            if !verify_in(system, query, &certificate) {
                return Err(Error::Certificate(
                    "shortest certificate does not verify".into(),
                ));
            }
            let l1_weight = certificate.l1_weight();
            if l1_weight != value {
                return Err(Error::Certificate(format!(
                    "l1 weight {l1_weight} differs from LP optimum {value}"
                )));
            }
            let k = query.context.k();
            let witness = LinearForm::from_coeffs(&query.context, duals[..k].to_vec())?;
            Ok(ShortestProofResult {
                term_count: certificate.term_count(),
                certificate,
                l1_weight,
                minimality_witness: witness,
            })
        }
        LpOutcome::Infeasible { .. } => Err(Error::NotProvable),
        LpOutcome::Unbounded { .. } => {
            Err(Error::Certificate("l1 objective reported unbounded".into()))
        }
    }
}

/// Whether `u` proves that no certificate of `query` (without constraints)
/// has weight below `weight`: `Gu <= 1` and `b⊤u = weight`.
pub fn is_minimality_witness(
    system: &ElementalSystem,
    query: &Query,
    u: &LinearForm,
    weight: &Rational,
) -> bool {
    let one = Rational::from_integer(1.into());
    query.constraints.is_empty()
        && system
            .forms()
            .all(|g| g.eval(u).map(|v| v <= one).unwrap_or(false))
        && query.b.eval(u).map(|v| v == *weight).unwrap_or(false)
        && !weight.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::SystemContext;
    use num_traits::Zero;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn elemental_row_has_unit_weight() {
        let ctx = SystemContext::lettered(3).unwrap();
        let system = generate_elemental(&ctx).unwrap();
        for row in system.rows() {
            let q = Query::unconstrained(row.form().clone());
            let res = shortest_proof(&q).unwrap();
            assert_eq!(res.l1_weight, r(1));
            assert_eq!(res.term_count, 1);
        }
    }

    #[test]
    fn zero_inequality_has_empty_proof() {
        let ctx = SystemContext::lettered(3).unwrap();
        let res = shortest_proof(&Query::unconstrained(LinearForm::zero(&ctx))).unwrap();
        assert!(res.l1_weight.is_zero());
        assert_eq!(res.term_count, 0);
        assert!(res.certificate.terms.is_empty());
    }

    #[test]
    fn unprovable_input_is_an_error() {
        let q = Query::parse("S(A|B) >= 0", &[] as &[&str]).unwrap();
        assert_eq!(shortest_proof(&q), Err(Error::NotProvable));
    }

    #[test]
    fn constrained_weight_counts_multipliers() {
        let q = Query::parse("S(A|B) >= 0", &["S(A,B) = S(B)"]).unwrap();
        let res = shortest_proof(&q).unwrap();
        assert_eq!(res.l1_weight, r(1));
        assert!(res.certificate.y.iter().all(Zero::is_zero));
    }
}
