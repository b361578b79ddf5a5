// A constrained four-party inequality that no combination of SSA and WM
// instances proves, with or without its constraints.

use qep::parser::Query;
use qep::prover::{prove, Verdict};

pub const INEQUALITY: &str = "I(C;D) >= I(A,B;C)";
pub const CONSTRAINTS: [&str; 3] = ["I(A;C|B) = 0", "I(B;C|A) = 0", "I(A;B|D) = 0"];

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for constraints in [&CONSTRAINTS[..], &[]] {
        let query = Query::parse(INEQUALITY, constraints)?;
        match prove(&query)? {
            Verdict::NotProvable(ray) => println!(
                "{} constraints: not provable, b's* = {} at {:?}",
                constraints.len(),
                ray.value(),
                ray.s_star()
            ),
            Verdict::Provable(_) => return Err("unexpected proof".into()),
        }
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
