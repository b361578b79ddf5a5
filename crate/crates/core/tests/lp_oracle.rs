mod common;

use common::{oracle, outcome_value, random_lp};
use qep::lp::{check_certificate, is_feasible, solve_with, LpOutcome, PivotRule, SolverOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_lps_agree_with_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 3];
    for case in 0..200 {
        let p = random_lp(&mut rng);
        let (status, value) = oracle(&p);
        for rule in [PivotRule::Bland, PivotRule::Lexicographic] {
            let opts = SolverOptions {
                pivot_rule: rule,
                ..SolverOptions::default()
            };
            let out = solve_with(&p, &opts).unwrap();
            assert_eq!(out.status(), status, "case {case} {rule:?}: {p:?}");
            assert_eq!(outcome_value(&out), value, "case {case} {rule:?}");
            assert!(check_certificate(&p, &out), "case {case} {rule:?}");
            match &out {
                LpOutcome::Optimal { point, .. } | LpOutcome::Unbounded { point, .. } => {
                    assert!(is_feasible(&p, point))
                }
                LpOutcome::Infeasible { .. } => {}
            }
        }
        seen[status as usize] += 1;
    }
    assert!(seen.iter().all(|&c| c >= 10), "status mix {seen:?}");
}
