//! Browser bindings for the simulator. Each exported function runs one
//! self-contained, seeded operation and returns a JSON report the page
//! renders; on bad input the JSON carries an `error` field instead. The
//! functions are plain Rust underneath and are exercised by host-side tests
//! as well.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use qsdc_core::{
    detection_probability_oracle, distribute_epr, prepare_bell_phi_plus, qsdc_send_message,
    teleport_cnot, verify_channel, Amplitude, EveModel, Gate, MeasBasis, Message, PureState,
    SimRng, Transcript, UnknownQubit, Verdict, VerificationConfig, PARTICLE_1, PARTICLE_2,
};

fn amp_json(a: Amplitude) -> Value {
    json!({ "re": a.re, "im": a.im })
}

fn state_json(s: &PureState) -> Value {
    let n = s.num_qubits();
    let kets: Vec<Value> = s
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(idx, a)| {
            let bits: String = (0..n)
                .map(|pos| {
                    if (idx >> (n - 1 - pos)) & 1 == 1 {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            json!({ "ket": bits, "re": a.re, "im": a.im, "prob": a.norm_sqr() })
        })
        .collect();
    let labels: Vec<String> = s.labels().iter().map(|l| l.to_string()).collect();
    json!({ "labels": labels, "amplitudes": kets })
}

fn transcript_lines(t: &Transcript) -> Vec<String> {
    t.to_text().lines().map(str::to_string).collect()
}

fn error_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
}

/// Teleports the Bloch-sphere qubit (θ, φ in degrees) with the two-particle
/// method. The report carries the payload, the entangled state, both exact
/// measurement branches, the sampled run, and the transcript.
#[wasm_bindgen]
pub fn teleport_demo(theta_deg: f64, phi_deg: f64, seed: u64) -> String {
    if !(0.0..=180.0).contains(&theta_deg) || !phi_deg.is_finite() {
        return error_json("theta must lie in [0, 180] and both angles must be finite");
    }
    let theta = theta_deg.to_radians();
    let phi = phi_deg.to_radians();
    let alpha = Amplitude::new((theta / 2.0).cos(), 0.0);
    let beta = Amplitude::from_polar((theta / 2.0).sin(), phi);
    let input = match UnknownQubit::new(alpha, beta) {
        Ok(q) => q,
        Err(e) => return error_json(e),
    };

    let entangled = input
        .to_state(PARTICLE_1)
        .tensor(&PureState::basis(PARTICLE_2, 0))
        .and_then(|s| s.apply(&Gate::Cnot, &[PARTICLE_1, PARTICLE_2]));
    let entangled = match entangled {
        Ok(s) => s,
        Err(e) => return error_json(e),
    };
    let branches = match entangled.branch_decomposition(PARTICLE_1, MeasBasis::PlusMinus) {
        Ok(b) => b,
        Err(e) => return error_json(e),
    };
    let branch_json: Vec<Value> = branches
        .iter()
        .map(|b| {
            json!({
                "outcome": b.outcome.to_string(),
                "probability": b.probability,
                "residual": state_json(&b.residual),
            })
        })
        .collect();

    let mut rng = SimRng::from_seed(seed);
    let run = match teleport_cnot(&input, &mut rng) {
        Ok(r) => r,
        Err(e) => return error_json(e),
    };
    let counts = run.transcript.resource_counts();
    json!({
        "input": { "alpha": amp_json(alpha), "beta": amp_json(beta) },
        "entangled": state_json(&entangled),
        "branches": branch_json,
        "sampled_outcome": run.alice_outcomes[0].to_string(),
        "bob_state": state_json(&run.bob_state),
        "fidelity": run.fidelity_vs_input,
        "transcript": transcript_lines(&run.transcript),
        "resources": {
            "qubits_sent": counts.qubits_sent,
            "classical_bits_sent": counts.classical_bits_sent,
            "particles": counts.particles_total,
            "receipt_acks": counts.receipt_acks,
        },
    })
    .to_string()
}

fn parse_eve(token: &str) -> Result<EveModel, String> {
    EveModel::parse(token).ok_or_else(|| {
        format!("unknown eavesdropper '{token}' (none | intercept-z | intercept-rand)")
    })
}

/// Full messaging session: distribute pairs (optionally through an
/// eavesdropper), verify the channel, and send the message if the check
/// passes. Mirrors the CLI `qsdc` command.
#[wasm_bindgen]
pub fn qsdc_demo(message: &str, eve: &str, seed: u64, sample_fraction: f64) -> String {
    let message: Message = match message.parse() {
        Ok(m) => m,
        Err(e) => return error_json(e),
    };
    if message.is_empty() {
        return error_json("message must be a nonempty string of 0s and 1s");
    }
    if message.len() > 64 {
        return error_json("demo messages are capped at 64 bits");
    }
    if !(sample_fraction > 0.0 && sample_fraction < 1.0) {
        return error_json("sample fraction must lie strictly between 0 and 1");
    }
    let eve = match parse_eve(eve) {
        Ok(m) => m,
        Err(e) => return error_json(e),
    };
    let cfg = VerificationConfig {
        sample_fraction,
        ..Default::default()
    };

    let checked = |n: usize| ((sample_fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut n = message.len() + 1;
    while n - checked(n) < message.len() {
        n += 1;
    }

    let mut rng = SimRng::from_seed(seed);
    let mut transcript = Transcript::new();
    let pairs = distribute_epr(n, eve, &mut rng, &mut transcript);
    let (report, survivors) = match verify_channel(pairs, &cfg, &mut rng) {
        Ok(x) => x,
        Err(e) => return error_json(e),
    };
    transcript.push(report.to_event());

    let verification = json!({
        "pairs_distributed": n,
        "pairs_checked": report.pairs_checked,
        "mismatches": report.mismatches,
        "qber": report.qber_estimate,
        "verdict": report.verdict.to_string(),
    });
    if report.verdict == Verdict::TamperingDetected {
        return json!({
            "verification": verification,
            "sent": false,
            "transcript": transcript_lines(&transcript),
        })
        .to_string();
    }

    let result = match qsdc_send_message(&message, survivors, &mut rng, transcript) {
        Ok(r) => r,
        Err(e) => return error_json(e),
    };
    let bit_errors = result
        .decoded
        .bits()
        .iter()
        .zip(message.bits())
        .filter(|(a, b)| a != b)
        .count();
    let per_bit: Vec<Value> = result
        .per_bit_outcomes
        .iter()
        .zip(message.bits())
        .zip(result.decoded.bits())
        .map(|(((alice, bob), &sent), &decoded)| {
            json!({
                "sent": sent,
                "alice": alice.to_string(),
                "bob": bob.to_string(),
                "decoded": decoded,
            })
        })
        .collect();
    json!({
        "verification": verification,
        "sent": true,
        "decoded": result.decoded.to_string(),
        "bit_errors": bit_errors,
        "per_bit": per_bit,
        "transcript": transcript_lines(&result.transcript),
    })
    .to_string()
}

/// Detection statistics for an active eavesdropper: the exact per-checked-
/// pair mismatch probability, a seeded Monte-Carlo estimate, and the escape
/// curve (probability that k checked pairs all pass) for plotting.
#[wasm_bindgen]
pub fn detection_demo(eve: &str, trials: u32, seed: u64) -> String {
    let eve = match parse_eve(eve) {
        Ok(EveModel::None) => {
            return error_json("pick an active eavesdropper to see detection statistics")
        }
        Ok(m) => m,
        Err(e) => return error_json(e),
    };
    if !(1..=200_000).contains(&trials) {
        return error_json("trials must lie in 1..=200000");
    }
    let cfg = VerificationConfig::default();
    let oracle = match detection_probability_oracle(eve, &cfg) {
        Ok(p) => p,
        Err(e) => return error_json(e),
    };

    let mut mismatches = 0u32;
    for trial in 0..trials {
        let mut rng = SimRng::for_run(seed, u64::from(trial));
        let mut t = Transcript::new();
        let pairs = distribute_epr(1, eve, &mut rng, &mut t);
        match verify_channel(pairs, &cfg, &mut rng) {
            Ok((report, _)) => mismatches += report.mismatches as u32,
            Err(e) => return error_json(e),
        }
    }
    let empirical = f64::from(mismatches) / f64::from(trials);
    let band = 4.0 * (oracle * (1.0 - oracle) / f64::from(trials)).sqrt();
    let escape_curve: Vec<f64> = (0..=32).map(|k| (1.0 - oracle).powi(k)).collect();
    json!({
        "eve": eve.to_string(),
        "oracle": oracle,
        "empirical": empirical,
        "trials": trials,
        "mismatches": mismatches,
        "band": band,
        "within_band": (empirical - oracle).abs() <= band,
        "escape_curve": escape_curve,
    })
    .to_string()
}

/// The shared entangled state the protocols start from, for the page header.
#[wasm_bindgen]
pub fn bell_pair_preview() -> String {
    state_json(&prepare_bell_phi_plus()).to_string()
}
