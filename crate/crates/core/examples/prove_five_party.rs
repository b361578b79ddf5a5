// Proves a five-party inequality and checks a hand-written certificate for it.

use qep::elemental::{generate_elemental, RowKind};
use qep::parser::Query;
use qep::prover::{prove, render_proof, verify_certificate, ProofCertificate, Verdict};
use qep::Rational;

pub const FIVE_PARTY: &str = "I(C;D|A) + I(C;D|B) + I(C;D|E) + I(A;B) + I(C;E|D) + I(D;E|C) \
                         + 3 I(A,B;E|C,D) >= I(C;D)";

/// `(i, j, conditioning parties)` for each `I(i;j|K)` in the hand proof.
pub const HAND_PROOF: [(usize, usize, &[usize]); 11] = [
    (0, 1, &[4]),
    (0, 4, &[2]),
    (0, 4, &[3]),
    (0, 4, &[1, 2, 3]),
    (1, 4, &[2]),
    (1, 4, &[3]),
    (1, 4, &[0, 2, 3]),
    (2, 3, &[0, 4]),
    (2, 3, &[1, 4]),
    (2, 4, &[0, 1, 3]),
    (3, 4, &[0, 1]),
];

/// Unit multipliers on the rows of [`HAND_PROOF`].
pub fn hand_certificate(query: &Query) -> Result<ProofCertificate, Box<dyn std::error::Error>> {
    let system = generate_elemental(&query.context)?;
    let mut y = vec![Rational::from_integer(0.into()); system.len()];
    for (i, j, cond) in HAND_PROOF {
        let cond = cond.iter().fold(0u32, |m, p| m | 1 << p);
        let row = system
            .position(&RowKind::Ssa { i, j, cond })
            .ok_or("hand proof uses a non-elemental row")?;
        y[row] = Rational::from_integer(1.into());
    }
    Ok(ProofCertificate::new(
        &system,
        &query.constraints,
        y,
        Vec::new(),
    ))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let query = Query::parse::<&str>(FIVE_PARTY, &[])?;
    let Verdict::Provable(cert) = prove(&query)? else {
        return Err("expected a proof".into());
    };
    if !verify_certificate(&query, &cert) {
        return Err("solver certificate failed verification".into());
    }
    println!(
        "Solver proof ({} terms):\n{}",
        cert.term_count(),
        render_proof(&cert)
    );

    let hand = hand_certificate(&query)?;
    if !verify_certificate(&query, &hand) {
        return Err("hand certificate failed verification".into());
    }
    println!(
        "Hand proof ({} terms):\n{}",
        hand.term_count(),
        render_proof(&hand)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
