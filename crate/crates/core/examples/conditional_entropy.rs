// Refutes `S(A|B) >= 0` on three parties and checks a candidate vector
// against the counterexample hints.

use qep::parser::Query;
use qep::prover::{prove, Verdict};
use qep::refute::{check_vector, hints, shortest_hints};
use qep::{LinearForm, Rational, SystemContext};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let parties = ["A", "B", "C"].map(String::from);
    let query = Query::parse_with::<&str>("S(A|B) >= 0", &[], Some(&parties), 8)?;
    let Verdict::NotProvable(ray) = prove(&query)? else {
        return Err("S(A|B) >= 0 should not be provable".into());
    };
    println!("not provable; violating direction {:?}", ray.s_star());

    let report = hints(&query)?;
    println!("bounded optimum {}", report.optimal_value);
    for eq in report.tight_equalities() {
        println!("  {eq}");
    }
    let short = shortest_hints(&query, &report.lambda_star)?;
    println!("shortest hint system has {} equalities", short.tight.len());

    // A maximally entangled pair on A,B with C in a pure product state.
    // Coordinates: A, B, AB, C, AC, BC, ABC.
    let ctx = SystemContext::new(parties)?;
    let bell = LinearForm::from_integers(&ctx, &[1, 1, 0, 0, 1, 1, 0])?;
    let check = check_vector(&query, &bell, Some(&report))?;
    println!("b's = {}, confirmed: {}", check.value, check.confirmed);
    if !check.confirmed || check.value != Rational::from_integer((-1).into()) {
        return Err("the entangled vector should confirm with value -1".into());
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
