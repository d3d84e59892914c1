//! EPR distribution, eavesdropper models, and channel verification.
//!
//! Distribution sends one half of each fresh `|Φ⁺⟩` pair to Bob; an
//! intercept-resend eavesdropper may measure the traveling half and forward
//! the collapsed qubit. Verification sacrifices a random sample of pairs
//! and measures both halves in a per-pair random shared basis (Z⊗Z or X⊗X);
//! `|Φ⁺⟩` is perfectly correlated in both, so any anti-correlated outcome
//! pair proves tampering. The attack models and the verification procedure
//! are concrete instantiations of the standard EPR correlation test.

use std::fmt;

use crate::error::{QsimError, Result};
use crate::measure::MeasBasis;
use crate::qsdc::EprPair;
use crate::rng::SimRng;
use crate::state::PureState;
use crate::teleport::{prepare_bell_phi_plus, PAIR_A, PAIR_B};
use crate::transcript::{Party, Transcript, TranscriptEvent};

/// Eavesdropper behavior during pair distribution, fixed for one session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EveModel {
    /// No interference.
    #[default]
    None,
    /// Measure every traveling qubit in the computational basis and resend
    /// the observed eigenstate.
    InterceptResendComputational,
    /// Per pair, pick the computational or ± basis uniformly, measure, and
    /// resend the observed eigenstate.
    InterceptResendRandomBasis,
}

impl fmt::Display for EveModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EveModel::None => write!(f, "none"),
            EveModel::InterceptResendComputational => write!(f, "intercept-z"),
            EveModel::InterceptResendRandomBasis => write!(f, "intercept-rand"),
        }
    }
}

impl EveModel {
    pub fn parse(token: &str) -> Option<EveModel> {
        match token {
            "none" => Some(EveModel::None),
            "intercept-z" => Some(EveModel::InterceptResendComputational),
            "intercept-rand" => Some(EveModel::InterceptResendRandomBasis),
            _ => None,
        }
    }
}

/// How the verifiers choose the shared measurement basis for each sampled
/// pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisPolicy {
    /// Uniform coin between Z⊗Z and X⊗X per sampled pair (one draw).
    #[default]
    Uniform,
    /// Always Z⊗Z. Blind to a computational-basis intercept-resend.
    FixedComputational,
    /// Always X⊗X.
    FixedPlusMinus,
}

impl BasisPolicy {
    /// The possible shared bases with their selection probabilities.
    fn choices(self) -> Vec<(MeasBasis, f64)> {
        match self {
            BasisPolicy::Uniform => {
                vec![(MeasBasis::Computational, 0.5), (MeasBasis::PlusMinus, 0.5)]
            }
            BasisPolicy::FixedComputational => vec![(MeasBasis::Computational, 1.0)],
            BasisPolicy::FixedPlusMinus => vec![(MeasBasis::PlusMinus, 1.0)],
        }
    }

    fn draw(self, rng: &mut SimRng) -> MeasBasis {
        match self {
            BasisPolicy::Uniform => {
                if rng.next_bool() {
                    MeasBasis::Computational
                } else {
                    MeasBasis::PlusMinus
                }
            }
            BasisPolicy::FixedComputational => MeasBasis::Computational,
            BasisPolicy::FixedPlusMinus => MeasBasis::PlusMinus,
        }
    }
}

/// Parameters of one verification pass. Sampled pairs are consumed and
/// never reused for message bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationConfig {
    /// Fraction of pairs to sacrifice, strictly between 0 and 1.
    pub sample_fraction: f64,
    pub basis_policy: BasisPolicy,
    /// Mismatches tolerated before declaring tampering. Zero-noise
    /// simulation means any mismatch already proves interference.
    pub mismatch_threshold: usize,
}

impl Default for VerificationConfig {
    fn default() -> Self {
        VerificationConfig {
            sample_fraction: 0.5,
            basis_policy: BasisPolicy::Uniform,
            mismatch_threshold: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    TamperingDetected,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "pass"),
            Verdict::TamperingDetected => write!(f, "tampering_detected"),
        }
    }
}

impl Verdict {
    pub fn parse(token: &str) -> Option<Verdict> {
        match token {
            "pass" => Some(Verdict::Pass),
            "tampering_detected" => Some(Verdict::TamperingDetected),
            _ => None,
        }
    }
}

/// Result of one verification pass over a sampled subset of pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationReport {
    pub pairs_checked: usize,
    pub mismatches: usize,
    /// `mismatches / pairs_checked`, 0 if nothing was checked.
    pub qber_estimate: f64,
    pub verdict: Verdict,
}

impl VerificationReport {
    /// The report as a transcript event, for folding into the same stream
    /// as protocol events.
    pub fn to_event(&self) -> TranscriptEvent {
        TranscriptEvent::VerificationSummary {
            pairs_checked: self.pairs_checked,
            mismatches: self.mismatches,
            qber: self.qber_estimate,
            verdict: self.verdict,
        }
    }
}

/// Prepares `n` fresh `|Φ⁺⟩` pairs and sends each B half to Bob, logging
/// one `qubit_sent` per pair. With an active eavesdropper the traveling
/// half is measured in Eve's basis and the collapsed product state is
/// forwarded in its place. Eve's actions do not appear in the transcript.
///
/// Per-pair randomness: the random-basis model draws Eve's basis first
/// (one draw), then her measurement (one draw); the computational model
/// draws only the measurement.
pub fn distribute_epr(
    n: usize,
    eve: EveModel,
    rng: &mut SimRng,
    transcript: &mut Transcript,
) -> Vec<EprPair> {
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let mut state = prepare_bell_phi_plus();
        transcript.push(TranscriptEvent::QubitSent {
            from: Party::Alice,
            to: Party::Bob,
            label: PAIR_B,
        });
        if let Some(basis) = eve_basis(eve, rng) {
            state = intercept_resend(&state, basis, rng);
        }
        pairs.push(EprPair::unverified(state));
    }
    pairs
}

fn eve_basis(eve: EveModel, rng: &mut SimRng) -> Option<MeasBasis> {
    match eve {
        EveModel::None => None,
        EveModel::InterceptResendComputational => Some(MeasBasis::Computational),
        EveModel::InterceptResendRandomBasis => Some(if rng.next_bool() {
            MeasBasis::Computational
        } else {
            MeasBasis::PlusMinus
        }),
    }
}

/// Measures the traveling B half in `basis` and rebuilds the joint state
/// with the observed eigenstate in place of the original qubit.
fn intercept_resend(pair: &PureState, basis: MeasBasis, rng: &mut SimRng) -> PureState {
    let (branch, remaining) = pair
        .measure(PAIR_B, basis, rng)
        .expect("distributed pairs are well-formed");
    remaining
        .tensor(&branch.outcome.eigenstate(PAIR_B))
        .expect("labels disjoint after measuring B out")
}

/// Samples `⌈sample_fraction · n⌉` pairs uniformly without replacement,
/// measures both halves of each in a basis drawn per `basis_policy`, and
/// counts anti-correlated outcome pairs as mismatches. Returns the report
/// and the surviving (unsampled) pairs in their original order, marked
/// verified only when the verdict is [`Verdict::Pass`].
///
/// Draw order: first the sample selection (one draw per sampled slot),
/// then per sampled pair in ascending original index: basis (if the policy
/// is uniform), A measurement, B measurement.
pub fn verify_channel(
    pairs: Vec<EprPair>,
    cfg: &VerificationConfig,
    rng: &mut SimRng,
) -> Result<(VerificationReport, Vec<EprPair>)> {
    if pairs.is_empty() {
        return Err(QsimError::EmptyInput);
    }
    if !(cfg.sample_fraction > 0.0 && cfg.sample_fraction < 1.0) {
        return Err(QsimError::InvalidFraction {
            value: cfg.sample_fraction,
        });
    }
    let n = pairs.len();
    let k = ((cfg.sample_fraction * n as f64).ceil() as usize).clamp(1, n);

    // Partial Fisher-Yates over the index set; first k slots become the
    // sample.
    let mut order: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.index_below(n - i);
        order.swap(i, j);
    }
    let mut mismatches = 0usize;
    let mut is_sampled = vec![false; n];
    for &idx in &order[..k] {
        is_sampled[idx] = true;
    }
    for (idx, pair) in pairs.iter().enumerate() {
        if !is_sampled[idx] {
            continue;
        }
        let basis = cfg.basis_policy.draw(rng);
        let (a_branch, rest) = pair.state().measure(PAIR_A, basis, rng)?;
        let (b_branch, _) = rest.measure(PAIR_B, basis, rng)?;
        if a_branch.outcome.bit() != b_branch.outcome.bit() {
            mismatches += 1;
        }
    }

    let verdict = if mismatches > cfg.mismatch_threshold {
        Verdict::TamperingDetected
    } else {
        Verdict::Pass
    };
    let report = VerificationReport {
        pairs_checked: k,
        mismatches,
        qber_estimate: if k == 0 {
            0.0
        } else {
            mismatches as f64 / k as f64
        },
        verdict,
    };

    let mut survivors: Vec<EprPair> = pairs
        .into_iter()
        .enumerate()
        .filter_map(|(idx, p)| (!is_sampled[idx]).then_some(p))
        .collect();
    if verdict == Verdict::Pass {
        for p in &mut survivors {
            p.mark_verified();
        }
    }
    Ok((report, survivors))
}

/// Exact per-checked-pair mismatch probability for an active eavesdropper,
/// by exhaustive enumeration over Eve's basis choice, Eve's outcome, the
/// verifiers' basis choice, and both measurement outcomes: a finite sum of
/// at most 32 terms built from exact branch probabilities. Validates the
/// Monte-Carlo estimates; no sampling involved.
pub fn detection_probability_oracle(eve: EveModel, cfg: &VerificationConfig) -> Result<f64> {
    let eve_bases: Vec<(MeasBasis, f64)> = match eve {
        EveModel::None => return Err(QsimError::UnsupportedModel),
        EveModel::InterceptResendComputational => vec![(MeasBasis::Computational, 1.0)],
        EveModel::InterceptResendRandomBasis => {
            vec![(MeasBasis::Computational, 0.5), (MeasBasis::PlusMinus, 0.5)]
        }
    };
    let mut p_mismatch = 0.0;
    for (eve_basis, p_eb) in eve_bases {
        let pair = prepare_bell_phi_plus();
        for eve_branch in pair.branch_decomposition(PAIR_B, eve_basis)? {
            let resent = eve_branch
                .residual
                .tensor(&eve_branch.outcome.eigenstate(PAIR_B))?;
            for (check_basis, p_cb) in cfg.basis_policy.choices() {
                for a_branch in resent.branch_decomposition(PAIR_A, check_basis)? {
                    for b_branch in a_branch
                        .residual
                        .branch_decomposition(PAIR_B, check_basis)?
                    {
                        if a_branch.outcome.bit() != b_branch.outcome.bit() {
                            p_mismatch += p_eb
                                * eve_branch.probability
                                * p_cb
                                * a_branch.probability
                                * b_branch.probability;
                        }
                    }
                }
            }
        }
    }
    Ok(p_mismatch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::Outcome;

    #[test]
    fn clean_distribution_yields_phi_plus() {
        let mut rng = SimRng::from_seed(1);
        let mut t = Transcript::new();
        let pairs = distribute_epr(1, EveModel::None, &mut rng, &mut t);
        let f = pairs[0].state().fidelity(&prepare_bell_phi_plus()).unwrap();
        assert!((f - 1.0).abs() < 1e-12);
        assert!(!pairs[0].is_verified());
    }

    #[test]
    fn z_intercept_collapses_to_correlated_basis_pair() {
        let zz = PureState::basis(PAIR_A, 0)
            .tensor(&PureState::basis(PAIR_B, 0))
            .unwrap();
        let oo = PureState::basis(PAIR_A, 1)
            .tensor(&PureState::basis(PAIR_B, 1))
            .unwrap();
        let mut zeros = 0;
        let trials = 2000;
        for seed in 0..trials {
            let mut rng = SimRng::from_seed(seed);
            let mut t = Transcript::new();
            let pairs = distribute_epr(1, EveModel::InterceptResendComputational, &mut rng, &mut t);
            let f_zz = pairs[0].state().fidelity(&zz).unwrap();
            let f_oo = pairs[0].state().fidelity(&oo).unwrap();
            assert!(
                (f_zz - 1.0).abs() < 1e-10 || (f_oo - 1.0).abs() < 1e-10,
                "intercepted pair is neither |00⟩ nor |11⟩"
            );
            if (f_zz - 1.0).abs() < 1e-10 {
                zeros += 1;
            }
        }
        // Both collapse results occur with probability ½ (4σ band).
        let freq = zeros as f64 / trials as f64;
        assert!((freq - 0.5).abs() < 4.0 * (0.25f64 / trials as f64).sqrt());
    }

    #[test]
    fn distribution_logs_one_send_per_pair() {
        let mut rng = SimRng::from_seed(2);
        let mut t = Transcript::new();
        distribute_epr(8, EveModel::None, &mut rng, &mut t);
        assert_eq!(t.resource_counts().qubits_sent, 8);
        assert_eq!(t.len(), 8);
    }

    #[test]
    fn ideal_pairs_always_pass() {
        let mut rng = SimRng::from_seed(3);
        let mut t = Transcript::new();
        let pairs = distribute_epr(100, EveModel::None, &mut rng, &mut t);
        let cfg = VerificationConfig::default();
        let (report, survivors) = verify_channel(pairs, &cfg, &mut rng).unwrap();
        assert_eq!(report.mismatches, 0);
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.pairs_checked, 50);
        assert_eq!(survivors.len(), 50);
        assert!(survivors.iter().all(|p| p.is_verified()));
    }

    #[test]
    fn sampled_plus_surviving_partition_the_input() {
        for seed in 0..20 {
            let mut rng = SimRng::from_seed(seed);
            let mut t = Transcript::new();
            let n = 37;
            let pairs = distribute_epr(n, EveModel::None, &mut rng, &mut t);
            let cfg = VerificationConfig {
                sample_fraction: 0.3,
                ..Default::default()
            };
            let (report, survivors) = verify_channel(pairs, &cfg, &mut rng).unwrap();
            assert_eq!(report.pairs_checked + survivors.len(), n);
            assert_eq!(report.pairs_checked, (0.3f64 * n as f64).ceil() as usize);
        }
    }

    #[test]
    fn verification_input_validation() {
        let mut rng = SimRng::from_seed(4);
        let cfg = VerificationConfig::default();
        assert_eq!(
            verify_channel(vec![], &cfg, &mut rng).map(|_| ()),
            Err(QsimError::EmptyInput)
        );
        let pairs = vec![EprPair::unverified(prepare_bell_phi_plus())];
        let bad = VerificationConfig {
            sample_fraction: 1.0,
            ..Default::default()
        };
        assert!(matches!(
            verify_channel(pairs, &bad, &mut rng),
            Err(QsimError::InvalidFraction { .. })
        ));
    }

    #[test]
    fn oracle_values_for_the_three_scenarios() {
        let uniform = VerificationConfig::default();
        let p =
            detection_probability_oracle(EveModel::InterceptResendComputational, &uniform).unwrap();
        assert!((p - 0.25).abs() < 1e-12, "got {p}");

        let p =
            detection_probability_oracle(EveModel::InterceptResendRandomBasis, &uniform).unwrap();
        assert!((p - 0.25).abs() < 1e-12, "got {p}");

        let zz_only = VerificationConfig {
            basis_policy: BasisPolicy::FixedComputational,
            ..Default::default()
        };
        let p =
            detection_probability_oracle(EveModel::InterceptResendComputational, &zz_only).unwrap();
        assert!(p.abs() < 1e-12, "got {p}");

        assert_eq!(
            detection_probability_oracle(EveModel::None, &uniform),
            Err(QsimError::UnsupportedModel)
        );
    }

    #[test]
    fn x_basis_check_catches_z_intercept_half_the_time() {
        // Density-matrix oracle: after a Z-basis intercept-resend the pair
        // is the even mixture of |00⟩ and |11⟩. In the X⊗X check each
        // component gives independent uniform outcomes, so the
        // anti-correlation probability is ½. Compare the pure-state branch
        // enumeration against that closed form.
        let cfg = VerificationConfig {
            basis_policy: BasisPolicy::FixedPlusMinus,
            ..Default::default()
        };
        let p = detection_probability_oracle(EveModel::InterceptResendComputational, &cfg).unwrap();

        // ρ = ½(|00⟩⟨00| + |11⟩⟨11|); P(a,b in X basis) = Σ_s ½·|⟨ab|s⟩|²
        // with ⟨ab|00⟩ = ¼-weight projections.
        let mut p_anti = 0.0;
        for component in [[1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, 1.0]] {
            for (a, b) in [
                (Outcome::Plus, Outcome::Minus),
                (Outcome::Minus, Outcome::Plus),
            ] {
                let proj = x_basis_projection(&component, a, b);
                p_anti += 0.5 * proj;
            }
        }
        assert!((p_anti - 0.5).abs() < 1e-12);
        assert!((p - p_anti).abs() < 1e-12, "oracle {p} vs density {p_anti}");
    }

    fn x_basis_projection(amps: &[f64; 4], a: Outcome, b: Outcome) -> f64 {
        // ⟨ab|ψ⟩ for a,b ∈ {+,−} with |±⟩ = (|0⟩ ± |1⟩)/√2.
        let sign = |o: Outcome, bit: usize| -> f64 {
            match (o, bit) {
                (Outcome::Plus, _) => 1.0,
                (Outcome::Minus, 0) => 1.0,
                (Outcome::Minus, _) => -1.0,
                _ => unreachable!("computational outcomes not used here"),
            }
        };
        let mut inner = 0.0;
        for (idx, amp) in amps.iter().enumerate() {
            let (ab, bb) = (idx >> 1 & 1, idx & 1);
            inner += 0.5 * sign(a, ab) * sign(b, bb) * amp;
        }
        inner * inner
    }

    #[test]
    fn tampering_flips_the_verdict_and_blocks_survivors() {
        // With a Z-basis Eve and enough checked pairs the X⊗X rounds are
        // overwhelmingly likely to show a mismatch.
        let mut rng = SimRng::from_seed(8);
        let mut t = Transcript::new();
        let pairs = distribute_epr(60, EveModel::InterceptResendComputational, &mut rng, &mut t);
        let (report, survivors) =
            verify_channel(pairs, &VerificationConfig::default(), &mut rng).unwrap();
        assert_eq!(report.verdict, Verdict::TamperingDetected);
        assert!(report.mismatches > 0);
        assert!(survivors.iter().all(|p| !p.is_verified()));
    }

    #[test]
    fn report_event_round_trips_through_transcript() {
        let report = VerificationReport {
            pairs_checked: 50,
            mismatches: 3,
            qber_estimate: 0.06,
            verdict: Verdict::TamperingDetected,
        };
        let mut t = Transcript::new();
        t.push(report.to_event());
        let parsed = Transcript::parse(&t.to_text()).unwrap();
        assert_eq!(parsed, t);
    }
}
