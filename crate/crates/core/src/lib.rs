//! Small-register simulator for entanglement-based quantum communication.
//!
//! The crate has three layers:
//!
//! * an exact dense state-vector engine for up to four labeled qubits
//!   ([`PureState`], [`Gate`], measurement with full branch analysis);
//! * executable protocols on top of it: two-particle CNOT-ancilla
//!   teleportation, the three-particle standard baseline, and direct secret
//!   messaging over EPR pairs ([`teleport_cnot`], [`teleport_standard`],
//!   [`qsdc_send_message`]), all emitting replayable [`Transcript`]s whose
//!   resource counters (qubits sent, classical bits, particles) are
//!   recomputable from the event log;
//! * channel security: EPR distribution with pluggable intercept-resend
//!   eavesdroppers, a correlation-test verification pass, and an analytic
//!   detection-probability oracle to pin Monte-Carlo results against.
//!
//! All sampling flows through an explicitly threaded [`SimRng`]; a run is
//! reproducible from its seed alone.
//!
//! ```
//! use qsdc_core::{random_unknown_qubit, teleport_cnot, SimRng};
//!
//! let mut rng = SimRng::from_seed(42);
//! let payload = random_unknown_qubit(&mut rng);
//! let run = teleport_cnot(&payload, &mut rng).unwrap();
//! assert!((run.fidelity_vs_input - 1.0).abs() < 1e-10);
//!
//! let counts = run.transcript.resource_counts();
//! assert_eq!(counts.qubits_sent, 1);
//! assert_eq!(counts.classical_bits_sent, 1);
//! assert_eq!(counts.particles_total, 2);
//! ```

mod channel;
mod error;
mod gate;
mod measure;
mod qsdc;
mod rng;
mod state;
mod teleport;
mod transcript;

pub use channel::{
    detection_probability_oracle, distribute_epr, verify_channel, BasisPolicy, EveModel, Verdict,
    VerificationConfig, VerificationReport,
};
pub use error::{QsimError, Result};
pub use gate::{Gate, GateName};
pub use measure::{MeasBasis, MeasurementBranch, Outcome};
pub use qsdc::{qsdc_encode_bit, qsdc_round, qsdc_send_message, EprPair, Message, QsdcResult};
pub use rng::SimRng;
pub use state::{
    random_unknown_qubit, Amplitude, PureState, QubitLabel, UnknownQubit, ALGEBRA_TOL, BRANCH_EPS,
    MAX_QUBITS,
};
pub use teleport::{
    prepare_bell_phi_plus, standard_correction, teleport_cnot, teleport_standard, CorrectionRule,
    TeleportResult, PAIR_A, PAIR_B, PARTICLE_1, PARTICLE_2, PARTICLE_3,
};
pub use transcript::{Party, ResourceCounts, Transcript, TranscriptEvent};
