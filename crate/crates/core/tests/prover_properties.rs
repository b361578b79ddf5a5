mod common;

use common::{lettered, q, r, random_query};
use num_traits::{Signed, Zero};
use qep::elemental::{generate_basic, generate_elemental};
use qep::error::Error;
use qep::lp::SolverOptions;
use qep::parser::{parse_constraint_in, Query};
use qep::prover::{prove, prove_in, verify_certificate, verify_in, ProofCertificate, Verdict};
use qep::refute::hints;
use qep::shortest::{is_minimality_witness, shortest_proof};
use qep::LinearForm;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn opts() -> SolverOptions {
    SolverOptions::default()
}

#[test]
fn every_elemental_row_proves_itself_with_unit_weight() {
    for n in 2..=4 {
        let system = generate_elemental(&lettered(n)).unwrap();
        for (i, row) in system.rows().iter().enumerate() {
            let query = Query::unconstrained(row.form().clone());
            let result = shortest_proof(&query).unwrap();
            assert_eq!(result.l1_weight, r(1), "{}", row.describe());
            assert_eq!(result.term_count, 1);
            assert_eq!(result.certificate.y[i], r(1));
        }
    }
}

#[test]
fn single_entropies_are_nonnegative() {
    for n in 2..=5 {
        let ctx = lettered(n);
        let system = generate_elemental(&ctx).unwrap();
        for subset in ctx.subsets() {
            let query = Query::unconstrained(LinearForm::entropy(&ctx, subset));
            match prove_in(&system, &query, &opts()).unwrap() {
                Verdict::Provable(c) => assert!(verify_in(&system, &query, &c)),
                Verdict::NotProvable(_) => panic!("S({}) >= 0 n={n}", ctx.subset_label(subset)),
            }
        }
    }
}

#[test]
fn basic_inequalities_follow_from_elemental_rows() {
    for n in 2..=3 {
        let ctx = lettered(n);
        let system = generate_elemental(&ctx).unwrap();
        for basic in generate_basic(&ctx).unwrap() {
            let query = Query::unconstrained(basic.form.clone());
            assert!(
                prove_in(&system, &query, &opts()).unwrap().is_provable(),
                "{basic:?}"
            );
        }
    }
}

#[test]
fn elemental_rows_are_irredundant() {
    for n in 2..=3 {
        let system = generate_elemental(&lettered(n)).unwrap();
        for (i, row) in system.rows().iter().enumerate() {
            let rest = system.without(i);
            let query = Query::unconstrained(row.form().clone());
            match prove_in(&rest, &query, &opts()).unwrap() {
                Verdict::NotProvable(ray) => {
                    // The ray lies in the cone of the remaining rows only.
                    assert!(rest
                        .forms()
                        .all(|g| !g.eval(ray.s_star()).unwrap().is_negative()));
                    assert!(row.form().eval(ray.s_star()).unwrap().is_negative());
                }
                Verdict::Provable(_) => panic!("row {} is redundant", row.describe()),
            }
        }
    }
}

#[test]
fn verdicts_agree_with_the_bounded_primal() {
    let ctx = lettered(3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..60 {
        let query = random_query(&mut rng, &ctx);
        match prove(&query).unwrap() {
            Verdict::Provable(c) => {
                assert!(verify_certificate(&query, &c));
                assert!(matches!(hints(&query), Err(Error::NothingToRefute)));
            }
            Verdict::NotProvable(ray) => {
                assert!(ray.value().is_negative());
                let report = hints(&query).unwrap();
                assert!(report.optimal_value.is_negative());
            }
        }
    }
}

#[test]
fn verdicts_are_invariant_under_relabeling_and_scaling() {
    let ctx = lettered(3);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut provable = 0;
    for _ in 0..100 {
        let query = random_query(&mut rng, &ctx);
        let base = prove(&query).unwrap().is_provable();
        provable += base as usize;
        let mut perm = vec![0, 1, 2];
        perm.shuffle(&mut rng);
        assert_eq!(prove(&query.permute(&perm)).unwrap().is_provable(), base);
        let scaled = Query::unconstrained(query.b.scale(&q(7, 3)));
        assert_eq!(prove(&scaled).unwrap().is_provable(), base);
    }
    assert!((20..=80).contains(&provable), "verdict mix {provable}/100");
}

#[test]
fn constraints_only_help() {
    let ctx = lettered(3);
    let constraint = parse_constraint_in("I(A;C|B) = 0", &ctx).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let query = random_query(&mut rng, &ctx);
        let constrained = Query::new(query.b.clone(), vec![constraint.clone()]).unwrap();
        let with = prove(&constrained).unwrap();
        if prove(&query).unwrap().is_provable() {
            assert!(with.is_provable());
        }
        if let Verdict::Provable(c) = with {
            assert!(verify_certificate(&constrained, &c));
        }
    }
}

#[test]
fn constrained_markov_chain_identity() {
    // I(A;C|B) = 0 makes I(A;B) >= I(A;C) provable.
    let query = Query::parse("I(A;B) >= I(A;C)", &["I(A;C|B) = 0"]).unwrap();
    let Verdict::Provable(c) = prove(&query).unwrap() else {
        panic!("data processing should follow from the constraint");
    };
    assert!(verify_certificate(&query, &c));
    assert!(
        !prove(&Query::parse::<&str>("I(A;B) >= I(A;C)", &[]).unwrap())
            .unwrap()
            .is_provable()
    );
}

#[test]
fn tampered_certificates_are_rejected() {
    let query = Query::parse::<&str>("I(A;B|C) + I(A;C) >= 0", &[]).unwrap();
    let Verdict::Provable(c) = prove(&query).unwrap() else {
        panic!()
    };
    let system = generate_elemental(&query.context).unwrap();
    let i = c.y.iter().position(|v| !v.is_zero()).unwrap();
    let mut y = c.y.clone();
    y[i] += q(1, 1000);
    assert!(!verify_certificate(
        &query,
        &ProofCertificate::new(&system, &[], y, vec![])
    ));
    let mut y = c.y.clone();
    y[i] = -y[i].clone();
    assert!(!verify_certificate(
        &query,
        &ProofCertificate::new(&system, &[], y, vec![])
    ));
}

#[test]
fn ho_identity_decompositions() {
    let query =
        Query::parse::<&str>("S(A,B,C) - S(A|B,C) - S(B|A,C) - S(C|A,B) >= 0", &[]).unwrap();
    let system = generate_elemental(&query.context).unwrap();
    let ssa = |i, j, cond| {
        system
            .position(&qep::elemental::RowKind::Ssa { i, j, cond })
            .unwrap()
    };
    // I(A;B|C), I(A;C), I(B;C|A) and its two relabelings.
    let families = [
        [ssa(0, 1, 0b100), ssa(0, 2, 0), ssa(1, 2, 0b001)],
        [ssa(1, 2, 0b001), ssa(0, 1, 0), ssa(0, 2, 0b010)],
        [ssa(0, 2, 0b010), ssa(1, 2, 0), ssa(0, 1, 0b100)],
    ];
    let weights = [q(8, 10), q(1, 10), q(1, 10)];
    let mut mixed = vec![r(0); system.len()];
    for (family, w) in families.iter().zip(&weights) {
        let mut y = vec![r(0); system.len()];
        for &row in family {
            y[row] += r(1);
            mixed[row] += w.clone();
        }
        let cert = ProofCertificate::new(&system, &[], y, vec![]);
        assert!(verify_certificate(&query, &cert));
    }
    let cert = ProofCertificate::new(&system, &[], mixed, vec![]);
    assert!(verify_certificate(&query, &cert));
    assert_eq!(cert.l1_weight(), r(3));

    let best = shortest_proof(&query).unwrap();
    assert_eq!(best.l1_weight, r(3));
    assert_eq!(best.term_count, 3);
    assert!(verify_certificate(&query, &best.certificate));
    assert!(is_minimality_witness(
        &system,
        &query,
        &best.minimality_witness,
        &best.l1_weight
    ));
}

#[test]
fn shortest_weight_never_exceeds_any_found_certificate() {
    let ctx = lettered(3);
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    for _ in 0..40 {
        let query = random_query(&mut rng, &ctx);
        if let Verdict::Provable(c) = prove(&query).unwrap() {
            let best = shortest_proof(&query).unwrap();
            assert!(best.l1_weight <= c.l1_weight());
            assert!(verify_certificate(&query, &best.certificate));
        } else {
            assert!(matches!(shortest_proof(&query), Err(Error::NotProvable)));
        }
    }
}
