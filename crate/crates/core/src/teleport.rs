//! Teleportation of an unknown qubit, two ways.
//!
//! [`teleport_cnot`] is the two-particle method: entangle the payload with a
//! fresh ancilla via CNOT, send the ancilla, measure the payload in the ±
//! basis, and send Bob the one-bit outcome so he can undo the conditional
//! sign flip. [`teleport_standard`] is the three-particle Bell-measurement
//! baseline it is compared against. Both log every transmission so the
//! resource accounting (qubits sent, classical bits sent, particles
//! involved) can be read straight off the transcript.

use crate::error::Result;
use crate::gate::Gate;
use crate::measure::{MeasBasis, Outcome};
use crate::rng::SimRng;
use crate::state::{PureState, QubitLabel, UnknownQubit};
use crate::transcript::{Party, Transcript, TranscriptEvent};

/// Payload particle held by Alice.
pub const PARTICLE_1: QubitLabel = QubitLabel('1');
/// Ancilla particle (the one that travels) in the CNOT method; Alice's EPR
/// half in the standard baseline.
pub const PARTICLE_2: QubitLabel = QubitLabel('2');
/// Bob's EPR half in the standard baseline.
pub const PARTICLE_3: QubitLabel = QubitLabel('3');
/// EPR pair labels used by the messaging protocol.
pub const PAIR_A: QubitLabel = QubitLabel('A');
pub const PAIR_B: QubitLabel = QubitLabel('B');

/// Bob's one-bit correction table: a `+` outcome needs nothing, a `−`
/// outcome needs a sign flip. Both gates are their own inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CorrectionRule;

impl CorrectionRule {
    /// Total over both ± outcomes (computational outcomes map through their
    /// bit encoding): bit 0 → identity, bit 1 → Pauli-Z.
    pub fn gate_for(outcome: Outcome) -> Gate {
        if outcome.bit() == 0 {
            Gate::Identity
        } else {
            Gate::PauliZ
        }
    }
}

/// Correction for the standard baseline under the CNOT-then-Hadamard Bell
/// measurement, outcomes ordered (payload qubit, EPR-half qubit). Gates are
/// applied left to right: 00 → none, 01 → X, 10 → Z, 11 → X then Z.
pub fn standard_correction(m1: Outcome, m2: Outcome) -> Vec<Gate> {
    let mut gates = Vec::new();
    if m2.bit() == 1 {
        gates.push(Gate::PauliX);
    }
    if m1.bit() == 1 {
        gates.push(Gate::PauliZ);
    }
    gates
}

/// Outcome of one teleportation run.
#[derive(Debug, Clone)]
pub struct TeleportResult {
    /// Bob's final one-qubit state.
    pub bob_state: PureState,
    /// Alice's measurement record: one ± outcome for the CNOT method, two
    /// computational outcomes for the standard baseline.
    pub alice_outcomes: Vec<Outcome>,
    pub transcript: Transcript,
    /// `|⟨input|bob⟩|²`; 1 when the protocol worked.
    pub fidelity_vs_input: f64,
}

/// The shared entangled resource `(|00⟩ + |11⟩)/√2` over labels (A, B),
/// prepared by a Hadamard on A followed by CNOT(A→B) from `|00⟩`.
pub fn prepare_bell_phi_plus() -> PureState {
    PureState::basis(PAIR_A, 0)
        .tensor(&PureState::basis(PAIR_B, 0))
        .expect("fresh labels")
        .apply(&Gate::Hadamard, &[PAIR_A])
        .expect("label exists")
        .apply(&Gate::Cnot, &[PAIR_A, PAIR_B])
        .expect("labels exist")
}

/// Two-particle teleportation: CNOT onto a fresh `|0⟩` ancilla, ship the
/// ancilla, measure the payload in ±, send the one-bit outcome, correct.
///
/// The transcript shows exactly one `qubit_sent` and exactly one
/// message-bearing `classical_bit_sent`; Bob's delivery confirmation is
/// logged as `receipt_ack` and tallied separately.
pub fn teleport_cnot(input: &UnknownQubit, rng: &mut SimRng) -> Result<TeleportResult> {
    let mut transcript = Transcript::new();
    let input_state = input.to_state(PARTICLE_1);

    let joint = input_state
        .tensor(&PureState::basis(PARTICLE_2, 0))?
        .apply(&Gate::Cnot, &[PARTICLE_1, PARTICLE_2])?;
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: Gate::Cnot.name(),
        labels: vec![PARTICLE_1, PARTICLE_2],
    });

    transcript.push(TranscriptEvent::QubitSent {
        from: Party::Alice,
        to: Party::Bob,
        label: PARTICLE_2,
    });
    transcript.push(TranscriptEvent::ReceiptAcknowledged { party: Party::Bob });

    let (branch, bob_state) = joint.measure(PARTICLE_1, MeasBasis::PlusMinus, rng)?;
    transcript.push(TranscriptEvent::Measured {
        party: Party::Alice,
        label: PARTICLE_1,
        basis: MeasBasis::PlusMinus,
        outcome: branch.outcome,
    });
    transcript.push(TranscriptEvent::ClassicalBitSent {
        from: Party::Alice,
        to: Party::Bob,
        bit: branch.outcome.bit(),
    });

    let correction = CorrectionRule::gate_for(branch.outcome);
    let bob_state = if correction == Gate::Identity {
        bob_state
    } else {
        transcript.push(TranscriptEvent::GateApplied {
            party: Party::Bob,
            gate: correction.name(),
            labels: vec![PARTICLE_2],
        });
        bob_state.apply(&correction, &[PARTICLE_2])?
    };

    let fidelity_vs_input = input.to_state(PARTICLE_2).fidelity(&bob_state)?;
    Ok(TeleportResult {
        bob_state,
        alice_outcomes: vec![branch.outcome],
        transcript,
        fidelity_vs_input,
    })
}

/// Three-particle baseline: distribute an EPR half, Bell-measure the
/// payload against Alice's half (CNOT then Hadamard then two computational
/// measurements), send two classical bits, correct with
/// [`standard_correction`].
pub fn teleport_standard(input: &UnknownQubit, rng: &mut SimRng) -> Result<TeleportResult> {
    let mut transcript = Transcript::new();

    // EPR pair on particles 2 (Alice) and 3 (Bob), then ship 3.
    let pair = PureState::basis(PARTICLE_2, 0)
        .tensor(&PureState::basis(PARTICLE_3, 0))?
        .apply(&Gate::Hadamard, &[PARTICLE_2])?
        .apply(&Gate::Cnot, &[PARTICLE_2, PARTICLE_3])?;
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: Gate::Hadamard.name(),
        labels: vec![PARTICLE_2],
    });
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: Gate::Cnot.name(),
        labels: vec![PARTICLE_2, PARTICLE_3],
    });
    transcript.push(TranscriptEvent::QubitSent {
        from: Party::Alice,
        to: Party::Bob,
        label: PARTICLE_3,
    });

    let joint = input
        .to_state(PARTICLE_1)
        .tensor(&pair)?
        .apply(&Gate::Cnot, &[PARTICLE_1, PARTICLE_2])?
        .apply(&Gate::Hadamard, &[PARTICLE_1])?;
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: Gate::Cnot.name(),
        labels: vec![PARTICLE_1, PARTICLE_2],
    });
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: Gate::Hadamard.name(),
        labels: vec![PARTICLE_1],
    });

    let (b1, rest) = joint.measure(PARTICLE_1, MeasBasis::Computational, rng)?;
    transcript.push(TranscriptEvent::Measured {
        party: Party::Alice,
        label: PARTICLE_1,
        basis: MeasBasis::Computational,
        outcome: b1.outcome,
    });
    let (b2, mut bob_state) = rest.measure(PARTICLE_2, MeasBasis::Computational, rng)?;
    transcript.push(TranscriptEvent::Measured {
        party: Party::Alice,
        label: PARTICLE_2,
        basis: MeasBasis::Computational,
        outcome: b2.outcome,
    });
    for outcome in [b1.outcome, b2.outcome] {
        transcript.push(TranscriptEvent::ClassicalBitSent {
            from: Party::Alice,
            to: Party::Bob,
            bit: outcome.bit(),
        });
    }

    for gate in standard_correction(b1.outcome, b2.outcome) {
        transcript.push(TranscriptEvent::GateApplied {
            party: Party::Bob,
            gate: gate.name(),
            labels: vec![PARTICLE_3],
        });
        bob_state = bob_state.apply(&gate, &[PARTICLE_3])?;
    }

    let fidelity_vs_input = input.to_state(PARTICLE_3).fidelity(&bob_state)?;
    Ok(TeleportResult {
        bob_state,
        alice_outcomes: vec![b1.outcome, b2.outcome],
        transcript,
        fidelity_vs_input,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::random_unknown_qubit;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn bell_pair_has_expected_amplitudes() {
        let pair = prepare_bell_phi_plus();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = pair.amplitudes();
        assert!((amps[0].re - h).abs() < 1e-12);
        assert!(amps[1].norm() < 1e-12);
        assert!(amps[2].norm() < 1e-12);
        assert!((amps[3].re - h).abs() < 1e-12);
        assert!((pair.fidelity(&prepare_bell_phi_plus()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_pair_marginal_is_uniform() {
        let branches = prepare_bell_phi_plus()
            .branch_decomposition(PAIR_A, MeasBasis::Computational)
            .unwrap();
        assert_eq!(branches.len(), 2);
        for b in &branches {
            assert!((b.probability - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn zero_payload_arrives_as_zero_on_both_branches() {
        for seed in 0..20 {
            let mut rng = SimRng::from_seed(seed);
            let input = UnknownQubit::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
            let result = teleport_cnot(&input, &mut rng).unwrap();
            assert!((result.fidelity_vs_input - 1.0).abs() < 1e-10);
            let zero = PureState::basis(PARTICLE_2, 0);
            assert!((result.bob_state.fidelity(&zero).unwrap() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cnot_method_counts_one_qubit_one_bit_two_particles() {
        let mut rng = SimRng::from_seed(3);
        let input = UnknownQubit::new(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let result = teleport_cnot(&input, &mut rng).unwrap();
        let counts = result.transcript.resource_counts();
        assert_eq!(counts.qubits_sent, 1);
        assert_eq!(counts.classical_bits_sent, 1);
        assert_eq!(counts.particles_total, 2);
        assert_eq!(counts.receipt_acks, 1);
    }

    #[test]
    fn standard_counts_one_qubit_two_bits_three_particles() {
        let mut rng = SimRng::from_seed(4);
        let input = UnknownQubit::new(c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let result = teleport_standard(&input, &mut rng).unwrap();
        let counts = result.transcript.resource_counts();
        assert_eq!(counts.qubits_sent, 1);
        assert_eq!(counts.classical_bits_sent, 2);
        assert_eq!(counts.particles_total, 3);
        assert_eq!(counts.receipt_acks, 0);
    }

    #[test]
    fn both_protocols_teleport_random_payloads() {
        let mut rng = SimRng::from_seed(100);
        for trial in 0..200 {
            let input = random_unknown_qubit(&mut rng);
            let mut run_rng = SimRng::for_run(7, trial);
            let a = teleport_cnot(&input, &mut run_rng).unwrap();
            assert!(
                (a.fidelity_vs_input - 1.0).abs() < 1e-10,
                "cnot trial {trial}: fidelity {}",
                a.fidelity_vs_input
            );
            let b = teleport_standard(&input, &mut run_rng).unwrap();
            assert!(
                (b.fidelity_vs_input - 1.0).abs() < 1e-10,
                "standard trial {trial}: fidelity {}",
                b.fidelity_vs_input
            );
        }
    }

    #[test]
    fn same_seed_gives_identical_transcripts() {
        let input = UnknownQubit::new(c(0.28, 0.96), c(0.0, 0.0)).unwrap();
        let run = |seed| {
            let mut rng = SimRng::from_seed(seed);
            teleport_cnot(&input, &mut rng)
                .unwrap()
                .transcript
                .to_text()
        };
        assert_eq!(run(9), run(9));
        // Different seeds may land on different branches; find a pair that
        // differs to show the transcript actually depends on the outcome.
        let texts: Vec<String> = (0..32).map(run).collect();
        assert!(texts.iter().any(|t| t != &texts[0]));
    }

    #[test]
    fn correction_rule_is_total() {
        assert_eq!(CorrectionRule::gate_for(Outcome::Plus), Gate::Identity);
        assert_eq!(CorrectionRule::gate_for(Outcome::Minus), Gate::PauliZ);
        assert_eq!(CorrectionRule::gate_for(Outcome::Zero), Gate::Identity);
        assert_eq!(CorrectionRule::gate_for(Outcome::One), Gate::PauliZ);
    }
}
