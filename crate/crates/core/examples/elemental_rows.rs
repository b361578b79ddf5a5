// Lists the elemental inequalities and their counts.

use qep::elemental::{elemental_count, generate_elemental};
use qep::SystemContext;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let ctx = SystemContext::lettered(3)?;
    let system = generate_elemental(&ctx)?;
    for (i, row) in system.rows().iter().enumerate() {
        println!("{i:3}  {}", row.describe());
    }
    for n in 2..=6 {
        let rows = generate_elemental(&SystemContext::lettered(n)?)?.len();
        println!("n = {n}: {rows} rows");
        if rows != elemental_count(n) {
            return Err("row count disagrees with the closed form".into());
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
