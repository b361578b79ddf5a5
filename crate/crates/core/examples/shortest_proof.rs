// Finds an l1-minimal proof of an identity with many equivalent proofs.

use qep::parser::{render_expr, Query};
use qep::prover::render_proof;
use qep::shortest::shortest_proof;
use qep::Rational;

pub const IDENTITY: &str = "S(A,B,C) - S(A|B,C) - S(B|A,C) - S(C|A,B) >= 0";

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let query = Query::parse::<&str>(IDENTITY, &[])?;
    println!("b = {}", render_expr(&query.b));
    let result = shortest_proof(&query)?;
    println!(
        "weight {}, {} terms:\n{}",
        result.l1_weight,
        result.term_count,
        render_proof(&result.certificate)
    );
    println!("lower-bound witness u = {:?}", result.minimality_witness);
    if result.l1_weight != Rational::from_integer(3.into()) || result.term_count != 3 {
        return Err("expected three unit terms".into());
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
