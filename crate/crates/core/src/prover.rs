//! Deciding whether `b⊤s >= 0` holds on the von-Neumann cone intersected
//! with `Qs = 0`.
//!
//! A single LP decides it: find `y >= 0` and free `mu` with
//! `y⊤G - mu⊤Q = b⊤`. A feasible point is a proof certificate. If the system
//! is infeasible, its Farkas multipliers `z` give `s* = -z` with
//! `Gs* >= 0`, `Qs* = 0` and `b⊤s* < 0`, a ray along which the inequality
//! fails.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::elemental::{generate_elemental, ElementalSystem};
use crate::error::{Error, Result};
use crate::lp::{self, Domain, LpOutcome, LpProblem, Relation, SolverOptions};
use crate::parser::{render_constraint, Query};
use crate::space::{dot, LinearForm};
use crate::Rational;

/// One nonzero entry of a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTerm {
    /// Coefficient of the term in `b = Σ coeff · term`.
    pub coeff: Rational,
    pub source: TermSource,
    /// `I(A;B|C) >= 0` for elemental rows, `... = 0` for constraints.
    pub description: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermSource {
    Elemental(usize),
    Constraint(usize),
}

/// Multipliers with `y >= 0` and `y⊤G - mu⊤Q = b⊤`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofCertificate {
    pub y: Vec<Rational>,
    pub mu: Vec<Rational>,
    pub terms: Vec<ProofTerm>,
}

impl ProofCertificate {
    /// Builds a certificate from raw multipliers, filling in the rendered
    /// terms. Does not check validity; see [`verify_certificate`].
    pub fn new(
        system: &ElementalSystem,
        constraints: &[LinearForm],
        y: Vec<Rational>,
        mu: Vec<Rational>,
    ) -> Self {
        let mut terms = Vec::new();
        for (i, (yi, row)) in y.iter().zip(system.rows()).enumerate() {
            if !yi.is_zero() {
                terms.push(ProofTerm {
                    coeff: yi.clone(),
                    source: TermSource::Elemental(i),
                    description: row.describe(),
                });
            }
        }
        for (l, (ml, q)) in mu.iter().zip(constraints).enumerate() {
            if !ml.is_zero() {
                terms.push(ProofTerm {
                    coeff: -ml,
                    source: TermSource::Constraint(l),
                    description: render_constraint(q),
                });
            }
        }
        ProofCertificate { y, mu, terms }
    }

    /// Zero certificate for a system of `m` rows and `q` constraints.
    pub fn zero(system: &ElementalSystem, q: usize) -> Self {
        ProofCertificate {
            y: vec![Rational::zero(); system.len()],
            mu: vec![Rational::zero(); q],
            terms: Vec::new(),
        }
    }

    /// `1⊤y + ‖mu‖₁`.
    pub fn l1_weight(&self) -> Rational {
        self.y.iter().chain(&self.mu).map(|v| v.abs()).sum()
    }

    /// Number of nonzero elemental multipliers.
    pub fn term_count(&self) -> usize {
        self.y.iter().filter(|v| !v.is_zero()).count()
    }
}

/// A direction `s*` with `Gs* >= 0`, `Qs* = 0` and `b⊤s* < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolatingRay {
    s_star: LinearForm,
    value: Rational,
}

impl ViolatingRay {
    /// Checks all three conditions exactly; `None` if any fails.
    pub fn new(system: &ElementalSystem, query: &Query, s_star: LinearForm) -> Option<Self> {
        if query.context.check_same(s_star.context()).is_err() {
            return None;
        }
        let in_cone = system
            .forms()
            .all(|g| !dot(g.coeffs(), s_star.coeffs()).is_negative());
        let on_constraints = query
            .constraints
            .iter()
            .all(|q| dot(q.coeffs(), s_star.coeffs()).is_zero());
        let value = dot(query.b.coeffs(), s_star.coeffs());
        (in_cone && on_constraints && value.is_negative()).then_some(ViolatingRay { s_star, value })
    }

    pub fn s_star(&self) -> &LinearForm {
        &self.s_star
    }

    /// `b⊤s*`, strictly negative.
    pub fn value(&self) -> &Rational {
        &self.value
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Provable(ProofCertificate),
    NotProvable(ViolatingRay),
}

impl Verdict {
    pub fn is_provable(&self) -> bool {
        matches!(self, Verdict::Provable(_))
    }

    pub fn certificate(&self) -> Option<&ProofCertificate> {
        match self {
            Verdict::Provable(c) => Some(c),
            Verdict::NotProvable(_) => None,
        }
    }

    pub fn ray(&self) -> Option<&ViolatingRay> {
        match self {
            Verdict::Provable(_) => None,
            Verdict::NotProvable(r) => Some(r),
        }
    }
}

/// Decides `q` against the elemental system of its context.
pub fn prove(query: &Query) -> Result<Verdict> {
    prove_with(query, &SolverOptions::default())
}

pub fn prove_with(query: &Query, options: &SolverOptions) -> Result<Verdict> {
    let system = generate_elemental(&query.context)?;
    prove_in(&system, query, options)
}

/// Decides `q` against an arbitrary row system `G` over the same context.
pub fn prove_in(
    system: &ElementalSystem,
    query: &Query,
    options: &SolverOptions,
) -> Result<Verdict> {
    check_query(system, query)?;
    if query.b.is_zero() {
        return Ok(Verdict::Provable(ProofCertificate::zero(
            system,
            query.constraints.len(),
        )));
    }
    let problem = certificate_lp(system, &query.constraints, &query.b, false);
    match lp::solve_with(&problem, options)? {
        LpOutcome::Optimal { point, .. } => {
            let m = system.len();
            let y = point[..m].to_vec();
            let mu = point[m..m + query.constraints.len()].to_vec();
            let cert = ProofCertificate::new(system, &query.constraints, y, mu);
            if !verify_in(system, query, &cert) {
                return Err(Error::Certificate(
                    "proof certificate does not verify".into(),
                ));
            }
            Ok(Verdict::Provable(cert))
        }
        LpOutcome::Infeasible { farkas } => {
            let s_star =
                LinearForm::from_coeffs(&query.context, farkas.iter().map(|z| -z).collect())?;
            ViolatingRay::new(system, query, s_star)
                .map(Verdict::NotProvable)
                .ok_or_else(|| {
                    Error::Certificate("Farkas ray does not violate the inequality".into())
                })
        }
        LpOutcome::Unbounded { .. } => Err(Error::Certificate(
            "feasibility problem reported unbounded".into(),
        )),
    }
}

pub(crate) fn check_query(system: &ElementalSystem, query: &Query) -> Result<()> {
    system.context().check_same(&query.context)?;
    query.context.check_same(query.b.context())?;
    for q in &query.constraints {
        query.context.check_same(q.context())?;
    }
    Ok(())
}

/// LP over `[y, mu]` (and `t` when `l1` is set) with rows
/// `y⊤G - mu⊤Q = target⊤`.
///
/// With `l1` the objective is `1⊤y + 1⊤t` subject to `-t <= mu <= t`;
/// otherwise it is zero.
pub(crate) fn certificate_lp(
    system: &ElementalSystem,
    constraints: &[LinearForm],
    target: &LinearForm,
    l1: bool,
) -> LpProblem {
    let m = system.len();
    let q = constraints.len();
    let k = target.coeffs().len();
    let nvars = m + q + if l1 { q } else { 0 };
    let one = Rational::from_integer(1.into());

    let mut objective = vec![Rational::zero(); nvars];
    let mut domains = vec![Domain::NonNegative; nvars];
    for d in &mut domains[m..m + q] {
        *d = Domain::Free;
    }
    if l1 {
        for (i, c) in objective.iter_mut().enumerate() {
            if i < m || i >= m + q {
                *c = one.clone();
            }
        }
    }
    let mut problem = LpProblem::with_domains(objective, domains);

    for j in 0..k {
        let mut row = vec![Rational::zero(); nvars];
        for (i, g) in system.forms().enumerate() {
            row[i] = g.coeffs()[j].clone();
        }
        for (l, c) in constraints.iter().enumerate() {
            row[m + l] = -&c.coeffs()[j];
        }
        problem.add_row(row, Relation::Eq, target.coeffs()[j].clone());
    }
    if l1 {
        for l in 0..q {
            let mut plus = vec![Rational::zero(); nvars];
            plus[m + l] = one.clone();
            plus[m + q + l] = one.clone();
            problem.add_row(plus, Relation::Ge, Rational::zero());
            let mut minus = vec![Rational::zero(); nvars];
            minus[m + l] = -&one;
            minus[m + q + l] = one.clone();
            problem.add_row(minus, Relation::Ge, Rational::zero());
        }
    }
    problem
}

/// Exact check of `y >= 0` and `y⊤G - mu⊤Q = b⊤` against a freshly
/// generated elemental system.
pub fn verify_certificate(query: &Query, cert: &ProofCertificate) -> bool {
    match generate_elemental(&query.context) {
        Ok(system) => verify_in(&system, query, cert),
        Err(_) => false,
    }
}

/// [`verify_certificate`] against a given row system.
pub fn verify_in(system: &ElementalSystem, query: &Query, cert: &ProofCertificate) -> bool {
    if check_query(system, query).is_err()
        || cert.y.len() != system.len()
        || cert.mu.len() != query.constraints.len()
        || cert.y.iter().any(Signed::is_negative)
    {
        return false;
    }
    let mut combo = LinearForm::zero(&query.context);
    for (yi, g) in cert.y.iter().zip(system.forms()) {
        if !yi.is_zero() {
            combo = &combo + &g.scale(yi);
        }
    }
    for (ml, q) in cert.mu.iter().zip(&query.constraints) {
        if !ml.is_zero() {
            combo = &combo - &q.scale(ml);
        }
    }
    combo == query.b
}

/// One line per nonzero term: `coeff · [I(A;B|C) >= 0]` for elemental rows
/// and `coeff · [using constraint: ... = 0]` for constraints, such that the
/// inequality equals the sum of the lines.
pub fn render_proof(cert: &ProofCertificate) -> String {
    let mut out = String::new();
    for term in &cert.terms {
        let c = &term.coeff;
        match term.source {
            TermSource::Elemental(_) => {
                let _ = writeln!(out, "{c} · [{}]", term.description);
            }
            TermSource::Constraint(_) => {
                let _ = writeln!(out, "{c} · [using constraint: {}]", term.description);
            }
        }
    }
    if out.is_empty() {
        out.push_str("0 (trivial)\n");
    }
    out
}
