// Solves small linear programs exactly and checks their certificates.

use qep::lp::{check_certificate, solve, Domain, LpOutcome, LpProblem, Relation};
use qep::Rational;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // min -x - y  s.t. x + 2y <= 4, 3x + y <= 6, x, y >= 0
    let mut lp = LpProblem::with_domains(vec![q(-1, 1), q(-1, 1)], vec![Domain::NonNegative; 2]);
    lp.add_row(vec![q(1, 1), q(2, 1)], Relation::Le, q(4, 1));
    lp.add_row(vec![q(3, 1), q(1, 1)], Relation::Le, q(6, 1));
    let outcome = solve(&lp)?;
    if let LpOutcome::Optimal {
        value,
        point,
        duals,
    } = &outcome
    {
        println!(
            "optimum {value} at ({}, {}), duals ({}, {})",
            point[0], point[1], duals[0], duals[1]
        );
    }
    if !check_certificate(&lp, &outcome) || outcome != solve(&lp)? {
        return Err("bad optimality certificate".into());
    }

    // x + y >= 2 and x + y <= 1 have no common point.
    let mut lp = LpProblem::new(vec![q(0, 1), q(0, 1)]);
    lp.add_row(vec![q(1, 1), q(1, 1)], Relation::Ge, q(2, 1));
    lp.add_row(vec![q(1, 1), q(1, 1)], Relation::Le, q(1, 1));
    let outcome = solve(&lp)?;
    match &outcome {
        LpOutcome::Infeasible { farkas } => println!(
            "infeasible, Farkas multipliers ({}, {})",
            farkas[0], farkas[1]
        ),
        _ => return Err("expected infeasibility".into()),
    }
    if !check_certificate(&lp, &outcome) {
        return Err("bad Farkas certificate".into());
    }

    // min -x with x >= 0 only.
    let mut lp = LpProblem::with_domains(vec![q(-1, 1)], vec![Domain::NonNegative]);
    lp.add_row(vec![q(1, 1)], Relation::Ge, q(0, 1));
    let outcome = solve(&lp)?;
    if !matches!(outcome, LpOutcome::Unbounded { .. }) || !check_certificate(&lp, &outcome) {
        return Err("expected a certified unbounded ray".into());
    }
    if let LpOutcome::Unbounded { point, ray } = &outcome {
        println!("unbounded from x = {} along {}", point[0], ray[0]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
