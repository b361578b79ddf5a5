//! Test-side oracles, independent of the library's own algorithms.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use qep::lp::{Domain, LpOutcome, LpProblem, LpStatus, Relation};
use qep::parser::Query;
use qep::{LinearForm, Rational, SystemContext};
use rand::Rng;
use std::collections::BTreeSet;

pub fn r(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

/// Integer coefficient vector over masks `1..2^n`, indexed by `mask - 1`.
pub type IntForm = Vec<i64>;

fn add(form: &mut IntForm, mask: u32, c: i64) {
    if mask != 0 {
        form[mask as usize - 1] += c;
    }
}

/// Every elemental row, found by scanning all ordered subset pairs `(I, J)`
/// and testing conditions (i) and (ii) literally.
pub fn brute_force_elemental(n: usize) -> BTreeSet<IntForm> {
    let full = (1u32 << n) - 1;
    let k = full as usize;
    let single =
        |m: u32| -> Option<usize> { (m.count_ones() == 1).then(|| m.trailing_zeros() as usize) };
    let mut rows = BTreeSet::new();
    for i_set in 0..=full {
        for j_set in 0..=full {
            // (i) I\J = {i}, J\I = {j}, j > i
            if let (Some(i), Some(j)) = (single(i_set & !j_set), single(j_set & !i_set)) {
                if j > i {
                    let mut f = vec![0; k];
                    add(&mut f, i_set, 1);
                    add(&mut f, j_set, 1);
                    add(&mut f, i_set | j_set, -1);
                    add(&mut f, i_set & j_set, -1);
                    rows.insert(f);
                }
            }
            // (ii) I∩J = {k}, I∪J = N, k + 1 ∈ I (party indices wrap)
            if let Some(kk) = single(i_set & j_set) {
                if i_set | j_set == full && i_set & (1 << ((kk + 1) % n)) != 0 {
                    let mut f = vec![0; k];
                    add(&mut f, i_set, 1);
                    add(&mut f, j_set, 1);
                    add(&mut f, i_set & !j_set, -1);
                    add(&mut f, j_set & !i_set, -1);
                    rows.insert(f);
                }
            }
        }
    }
    rows
}

pub fn to_int_form(form: &LinearForm) -> IntForm {
    form.coeffs()
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            i64::try_from(c.to_integer()).unwrap()
        })
        .collect()
}

pub fn lettered(n: usize) -> SystemContext {
    SystemContext::lettered(n).unwrap()
}

/// A random `b` over three parties: either a nonnegative combination of
/// elemental-like integer rows, perturbed now and then, or pure noise.
pub fn random_query<R: Rng>(rng: &mut R, ctx: &SystemContext) -> Query {
    let k = ctx.k();
    let mut coeffs = vec![0i64; k];
    if rng.gen_bool(0.5) {
        let rows: Vec<IntForm> = brute_force_elemental(ctx.n()).into_iter().collect();
        for _ in 0..rng.gen_range(1..4) {
            let row = &rows[rng.gen_range(0..rows.len())];
            let w = rng.gen_range(1..3);
            for (c, x) in coeffs.iter_mut().zip(row) {
                *c += w * x;
            }
        }
        if rng.gen_bool(0.3) {
            coeffs[rng.gen_range(0..k)] += rng.gen_range(-1..=1);
        }
    } else {
        for _ in 0..rng.gen_range(1..4) {
            coeffs[rng.gen_range(0..k)] += rng.gen_range(-2..=2);
        }
    }
    Query::unconstrained(LinearForm::from_integers(ctx, &coeffs).unwrap())
}

// ---------------------------------------------------------------------------
// LP oracle: vertex enumeration over all basic solutions.

/// `Ax (rel) b` over nonnegative variables only.
struct Standard {
    rows: Vec<(Vec<Rational>, Relation, Rational)>,
    objective: Vec<Rational>,
}

/// Splits free variables into two nonnegative halves.
fn standardize(p: &LpProblem) -> Standard {
    let split = |v: &[Rational]| -> Vec<Rational> {
        let mut out = Vec::new();
        for (x, d) in v.iter().zip(&p.domains) {
            out.push(x.clone());
            if *d == Domain::Free {
                out.push(-x);
            }
        }
        out
    };
    Standard {
        rows: p
            .rows
            .iter()
            .map(|c| (split(&c.coeffs), c.relation, c.rhs.clone()))
            .collect(),
        objective: split(&p.objective),
    }
}

/// Solves a square system by Gaussian elimination; `None` if singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot = a[col].clone();
        let pivot_rhs = b[col].clone();
        for (r, (row, rhs)) in a.iter_mut().zip(b.iter_mut()).enumerate() {
            if r != col && !row[col].is_zero() {
                let f = &row[col] / &pivot[col];
                for (x, p) in row.iter_mut().zip(&pivot).skip(col) {
                    *x -= &f * p;
                }
                *rhs -= &f * &pivot_rhs;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

/// Vertices of `{x >= 0 : rows}`.
fn vertices(rows: &[(Vec<Rational>, Relation, Rational)], dim: usize) -> Vec<Vec<Rational>> {
    // Candidate active constraints: every row as an equality plus x_j = 0.
    let mut hyper: Vec<(Vec<Rational>, Rational)> = rows
        .iter()
        .map(|(a, _, b)| (a.clone(), b.clone()))
        .collect();
    for j in 0..dim {
        let mut e = vec![r(0); dim];
        e[j] = r(1);
        hyper.push((e, r(0)));
    }
    let feasible = |x: &[Rational]| {
        x.iter().all(|v| !v.is_negative())
            && rows.iter().all(|(a, rel, b)| {
                let v: Rational = a.iter().zip(x).map(|(p, q)| p * q).sum();
                match rel {
                    Relation::Ge => &v >= b,
                    Relation::Le => &v <= b,
                    Relation::Eq => &v == b,
                }
            })
    };
    let mut out = Vec::new();
    for pick in combinations(hyper.len(), dim) {
        let a = pick.iter().map(|&i| hyper[i].0.clone()).collect();
        let b = pick.iter().map(|&i| hyper[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Status and optimal value by brute force.
pub fn oracle(p: &LpProblem) -> (LpStatus, Option<Rational>) {
    let s = standardize(p);
    let dim = s.objective.len();
    let verts = vertices(&s.rows, dim);
    if verts.is_empty() {
        return (LpStatus::Infeasible, None);
    }
    // Recession directions normalized by 1⊤d = 1.
    let mut cone: Vec<_> = s
        .rows
        .iter()
        .map(|(a, rel, _)| (a.clone(), *rel, r(0)))
        .collect();
    cone.push((vec![r(1); dim], Relation::Eq, r(1)));
    let dot = |x: &[Rational]| -> Rational { s.objective.iter().zip(x).map(|(c, v)| c * v).sum() };
    if vertices(&cone, dim).iter().any(|d| dot(d).is_negative()) {
        return (LpStatus::Unbounded, None);
    }
    let best = verts.iter().map(|x| dot(x)).min().unwrap();
    (LpStatus::Optimal, Some(best))
}

pub fn outcome_value(o: &LpOutcome) -> Option<Rational> {
    match o {
        LpOutcome::Optimal { value, .. } => Some(value.clone()),
        _ => None,
    }
}

/// A random LP with up to three variables and four rows.
pub fn random_lp<R: Rng>(rng: &mut R) -> LpProblem {
    let nv = rng.gen_range(1..=3);
    let domains = (0..nv)
        .map(|_| {
            if rng.gen_bool(0.7) {
                Domain::NonNegative
            } else {
                Domain::Free
            }
        })
        .collect();
    let objective = (0..nv).map(|_| r(rng.gen_range(-3..=3))).collect();
    let mut p = LpProblem::with_domains(objective, domains);
    for _ in 0..rng.gen_range(1..=4) {
        let coeffs = (0..nv).map(|_| r(rng.gen_range(-3..=3))).collect();
        let rel = match rng.gen_range(0..5) {
            0 => Relation::Eq,
            1 | 2 => Relation::Ge,
            _ => Relation::Le,
        };
        p.add_row(coeffs, rel, q(rng.gen_range(-6..=6), rng.gen_range(1..=2)));
    }
    p
}

pub fn is_one(x: &Rational) -> bool {
    x.is_one()
}
