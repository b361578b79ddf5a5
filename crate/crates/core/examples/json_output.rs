// Drives the command line in-process and reads back its JSON document.

use qep::cli::{run, EXIT_OK};
use qep::document::{OutputDocument, Status};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let out = run(["qep", "prove", "--json", "I(A;B|C) + I(A;C) >= 0"], None);
    if out.code != EXIT_OK {
        return Err(out.stderr.into());
    }
    print!("{}", out.stdout);
    let doc = OutputDocument::from_json(&out.stdout)?;
    if doc.status != Some(Status::Provable) {
        return Err("expected a provable verdict".into());
    }
    let cert = doc.certificate.ok_or("missing certificate")?;
    for term in &cert.y {
        println!("{} x [{}]", term.coeff, term.row);
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
