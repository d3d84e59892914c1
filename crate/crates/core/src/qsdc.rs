//! Direct secret messaging over pre-shared EPR pairs.
//!
//! Each message bit is written into one verified pair by applying identity
//! (bit 0) or Pauli-Z (bit 1) to Alice's half, turning `|Φ⁺⟩` into `|Φ⁻⟩`
//! for bit 1. Alice then measures her half in ±, sends the one-bit outcome,
//! Bob conditionally sign-flips his half and measures it in ±. Decoding is
//! deterministic: the message qubit never travels, and one classical bit
//! moves per message bit.

use std::fmt;
use std::str::FromStr;

use crate::error::{QsimError, Result};
use crate::gate::Gate;
use crate::measure::{MeasBasis, Outcome};
use crate::rng::SimRng;
use crate::state::PureState;
use crate::teleport::{CorrectionRule, PAIR_A, PAIR_B};
use crate::transcript::{Party, Transcript, TranscriptEvent};

/// A bit string message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Message(Vec<u8>);

impl Message {
    /// Builds from raw bits; every element must be 0 or 1.
    pub fn from_bits(bits: Vec<u8>) -> Result<Message> {
        if let Some(&bad) = bits.iter().find(|&&b| b > 1) {
            return Err(QsimError::InvalidBit { value: bad });
        }
        Ok(Message(bits))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Uniformly random message of `len` bits (one draw per bit).
    pub fn random(len: usize, rng: &mut SimRng) -> Message {
        Message((0..len).map(|_| u8::from(rng.next_bool())).collect())
    }
}

impl FromStr for Message {
    type Err = QsimError;

    fn from_str(s: &str) -> Result<Message> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(0),
                '1' => bits.push(1),
                _ => return Err(QsimError::InvalidBit { value: ch as u8 }),
            }
        }
        Ok(Message(bits))
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

/// A distributed EPR pair together with its verification status. Message
/// operations refuse pairs that have not passed channel verification.
#[derive(Debug, Clone, PartialEq)]
pub struct EprPair {
    state: PureState,
    verified: bool,
}

impl EprPair {
    /// Freshly distributed, not yet verified.
    pub fn unverified(state: PureState) -> EprPair {
        EprPair {
            state,
            verified: false,
        }
    }

    /// Marks a pair trusted without running verification. Meant for tests
    /// and for callers that have verified the channel out of band.
    pub fn assume_verified(state: PureState) -> EprPair {
        EprPair {
            state,
            verified: true,
        }
    }

    pub(crate) fn mark_verified(&mut self) {
        self.verified = true;
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }
}

/// Result of sending one message.
#[derive(Debug, Clone)]
pub struct QsdcResult {
    pub decoded: Message,
    /// (Alice's ± outcome, Bob's ± outcome) per message bit.
    pub per_bit_outcomes: Vec<(Outcome, Outcome)>,
    pub transcript: Transcript,
}

/// Writes one message bit into a pair labeled (A, B): bit 0 leaves it
/// unchanged, bit 1 applies Pauli-Z to qubit A.
pub fn qsdc_encode_bit(pair: &PureState, bit: u8) -> Result<PureState> {
    if bit > 1 {
        return Err(QsimError::InvalidBit { value: bit });
    }
    if pair.labels() != [PAIR_A, PAIR_B] {
        return Err(QsimError::LabelMismatch);
    }
    if bit == 0 {
        Ok(pair.clone())
    } else {
        pair.apply(&Gate::PauliZ, &[PAIR_A])
    }
}

/// Transfers one bit through one verified pair, appending the round's
/// events to `transcript`. Returns the bit Bob decodes (always equal to
/// `bit` for an ideal pair).
pub fn qsdc_round(
    pair: EprPair,
    bit: u8,
    rng: &mut SimRng,
    transcript: &mut Transcript,
) -> Result<u8> {
    let (decoded, _outcomes) = qsdc_round_inner(pair, bit, rng, transcript)?;
    Ok(decoded)
}

fn qsdc_round_inner(
    pair: EprPair,
    bit: u8,
    rng: &mut SimRng,
    transcript: &mut Transcript,
) -> Result<(u8, (Outcome, Outcome))> {
    if !pair.is_verified() {
        return Err(QsimError::ChannelNotVerified);
    }
    let encoded = qsdc_encode_bit(pair.state(), bit)?;
    transcript.push(TranscriptEvent::GateApplied {
        party: Party::Alice,
        gate: if bit == 0 {
            Gate::Identity.name()
        } else {
            Gate::PauliZ.name()
        },
        labels: vec![PAIR_A],
    });

    let (alice_branch, bob_half) = encoded.measure(PAIR_A, MeasBasis::PlusMinus, rng)?;
    transcript.push(TranscriptEvent::Measured {
        party: Party::Alice,
        label: PAIR_A,
        basis: MeasBasis::PlusMinus,
        outcome: alice_branch.outcome,
    });
    transcript.push(TranscriptEvent::ClassicalBitSent {
        from: Party::Alice,
        to: Party::Bob,
        bit: alice_branch.outcome.bit(),
    });

    let correction = CorrectionRule::gate_for(alice_branch.outcome);
    let bob_half = if correction == Gate::Identity {
        bob_half
    } else {
        transcript.push(TranscriptEvent::GateApplied {
            party: Party::Bob,
            gate: correction.name(),
            labels: vec![PAIR_B],
        });
        bob_half.apply(&correction, &[PAIR_B])?
    };

    let (bob_branch, _) = bob_half.measure(PAIR_B, MeasBasis::PlusMinus, rng)?;
    transcript.push(TranscriptEvent::Measured {
        party: Party::Bob,
        label: PAIR_B,
        basis: MeasBasis::PlusMinus,
        outcome: bob_branch.outcome,
    });

    Ok((
        bob_branch.outcome.bit(),
        (alice_branch.outcome, bob_branch.outcome),
    ))
}

/// Sends `msg` over the given pairs, one bit per pair, consuming pairs in
/// distribution order (the two sides index their pairs identically).
/// `transcript` may already hold distribution and verification events; the
/// message phase appends exactly `msg.len()` classical-bit events.
pub fn qsdc_send_message(
    msg: &Message,
    pairs: Vec<EprPair>,
    rng: &mut SimRng,
    mut transcript: Transcript,
) -> Result<QsdcResult> {
    if msg.is_empty() {
        return Err(QsimError::EmptyInput);
    }
    if pairs.len() < msg.len() {
        return Err(QsimError::InsufficientPairs {
            have: pairs.len(),
            need: msg.len(),
        });
    }
    let mut decoded = Vec::with_capacity(msg.len());
    let mut per_bit_outcomes = Vec::with_capacity(msg.len());
    for (pair, &bit) in pairs.into_iter().zip(msg.bits()) {
        let (d, outcomes) = qsdc_round_inner(pair, bit, rng, &mut transcript)?;
        decoded.push(d);
        per_bit_outcomes.push(outcomes);
    }
    Ok(QsdcResult {
        decoded: Message(decoded),
        per_bit_outcomes,
        transcript,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gate::GateName;
    use crate::teleport::prepare_bell_phi_plus;
    use crate::transcript::TranscriptEvent;

    fn ideal_pairs(n: usize) -> Vec<EprPair> {
        (0..n)
            .map(|_| EprPair::assume_verified(prepare_bell_phi_plus()))
            .collect()
    }

    #[test]
    fn encoding_zero_keeps_phi_plus() {
        let pair = prepare_bell_phi_plus();
        let out = qsdc_encode_bit(&pair, 0).unwrap();
        assert!((out.fidelity(&pair).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encoding_one_gives_phi_minus() {
        let out = qsdc_encode_bit(&prepare_bell_phi_plus(), 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = out.amplitudes();
        assert!((amps[0].re - h).abs() < 1e-12);
        assert!((amps[3].re + h).abs() < 1e-12);
        assert!(amps[1].norm() < 1e-12 && amps[2].norm() < 1e-12);
    }

    #[test]
    fn encoding_rejects_foreign_labels() {
        let wrong = PureState::basis(crate::state::QubitLabel('x'), 0)
            .tensor(&PureState::basis(PAIR_B, 0))
            .unwrap();
        assert_eq!(qsdc_encode_bit(&wrong, 0), Err(QsimError::LabelMismatch));
        assert_eq!(
            qsdc_encode_bit(&prepare_bell_phi_plus(), 2),
            Err(QsimError::InvalidBit { value: 2 })
        );
    }

    #[test]
    fn worked_example_encodes_expected_gate_sequence() {
        // 00101011 → I I Z I Z I Z Z on eight pairs.
        let msg: Message = "00101011".parse().unwrap();
        let mut rng = SimRng::from_seed(1);
        let result = qsdc_send_message(&msg, ideal_pairs(8), &mut rng, Transcript::new()).unwrap();
        let encoding_gates: Vec<GateName> = result
            .transcript
            .events()
            .iter()
            .filter_map(|e| match e {
                TranscriptEvent::GateApplied {
                    party: Party::Alice,
                    gate,
                    labels,
                } if labels == &[PAIR_A] => Some(*gate),
                _ => None,
            })
            .collect();
        use GateName::{I, Z};
        assert_eq!(encoding_gates, vec![I, I, Z, I, Z, I, Z, Z]);
        assert_eq!(result.decoded, msg);
    }

    #[test]
    fn single_bit_costs_one_classical_bit() {
        let msg: Message = "0".parse().unwrap();
        let mut rng = SimRng::from_seed(2);
        let result = qsdc_send_message(&msg, ideal_pairs(1), &mut rng, Transcript::new()).unwrap();
        assert_eq!(result.decoded, msg);
        assert_eq!(result.transcript.resource_counts().classical_bits_sent, 1);
    }

    #[test]
    fn single_round_decodes_both_bit_values() {
        for bit in 0..2u8 {
            for seed in 0..16 {
                let mut rng = SimRng::from_seed(seed);
                let mut t = Transcript::new();
                let pair = EprPair::assume_verified(prepare_bell_phi_plus());
                let decoded = qsdc_round(pair, bit, &mut rng, &mut t).unwrap();
                assert_eq!(decoded, bit, "bit {bit}, seed {seed}");
                assert_eq!(t.resource_counts().classical_bits_sent, 1);
            }
        }
    }

    #[test]
    fn unverified_pair_is_refused() {
        let pair = EprPair::unverified(prepare_bell_phi_plus());
        let mut rng = SimRng::from_seed(3);
        let mut t = Transcript::new();
        assert_eq!(
            qsdc_round(pair, 0, &mut rng, &mut t),
            Err(QsimError::ChannelNotVerified)
        );
        // Nothing was logged before the refusal.
        assert!(t.is_empty());
    }

    #[test]
    fn too_few_pairs_is_refused() {
        let msg: Message = "0101".parse().unwrap();
        let mut rng = SimRng::from_seed(4);
        let err = qsdc_send_message(&msg, ideal_pairs(3), &mut rng, Transcript::new());
        assert_eq!(
            err.map(|_| ()),
            Err(QsimError::InsufficientPairs { have: 3, need: 4 })
        );
    }

    #[test]
    fn empty_message_is_refused() {
        let msg = Message::from_bits(vec![]).unwrap();
        let mut rng = SimRng::from_seed(5);
        let err = qsdc_send_message(&msg, ideal_pairs(1), &mut rng, Transcript::new());
        assert_eq!(err.map(|_| ()), Err(QsimError::EmptyInput));
    }

    #[test]
    fn message_parsing_rejects_non_bits() {
        assert!(matches!(
            "01a1".parse::<Message>(),
            Err(QsimError::InvalidBit { .. })
        ));
        assert_eq!("0101".parse::<Message>().unwrap().to_string(), "0101");
    }

    #[test]
    fn long_random_message_decodes_exactly() {
        let mut msg_rng = SimRng::from_seed(6);
        let msg = Message::random(500, &mut msg_rng);
        let mut rng = SimRng::from_seed(7);
        let result =
            qsdc_send_message(&msg, ideal_pairs(500), &mut rng, Transcript::new()).unwrap();
        assert_eq!(result.decoded, msg);
        assert_eq!(result.per_bit_outcomes.len(), 500);
    }
}
