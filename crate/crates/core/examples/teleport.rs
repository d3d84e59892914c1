//! Teleport one qubit with the two-particle method and print the run.
//!
//! Usage: cargo run -p qsdc-core --example teleport [seed]

use qsdc_core::{random_unknown_qubit, teleport_cnot, SimRng};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(42);
    let mut rng = SimRng::from_seed(seed);

    let payload = random_unknown_qubit(&mut rng);
    println!(
        "payload: α = {:.6}{:+.6}i, β = {:.6}{:+.6}i",
        payload.alpha().re,
        payload.alpha().im,
        payload.beta().re,
        payload.beta().im
    );

    let run = teleport_cnot(&payload, &mut rng).expect("valid payload");
    println!("alice measured: {}", run.alice_outcomes[0]);
    println!("bob ends with:  {}", run.bob_state);
    println!("fidelity:       {:.12}", run.fidelity_vs_input);

    let counts = run.transcript.resource_counts();
    println!(
        "resources: {} qubit sent, {} classical bit(s), {} particles, {} receipt ack(s)",
        counts.qubits_sent, counts.classical_bits_sent, counts.particles_total, counts.receipt_acks
    );
    println!("\ntranscript:");
    print!("{}", run.transcript.to_text());
}
