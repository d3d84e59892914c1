//! Dense state vectors over small labeled qubit registers.
//!
//! Amplitude ordering is most-significant-bit first: the *first* label in a
//! state owns the most significant bit of the basis index. For a state over
//! labels `[p, q]`, index `0b10` is the basis ket `|10⟩` with `p = 1` and
//! `q = 0`. Ket notation leaves this convention implicit; everything in this
//! crate fixes it as stated here.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QsimError, Result};
use crate::rng::SimRng;

/// Complex amplitude. Constructors reject non-finite components.
pub type Amplitude = Complex64;

/// Tolerance for algebraic identities (normalization checks, unitarity,
/// branch probabilities, fidelity assertions).
pub const ALGEBRA_TOL: f64 = 1e-10;

/// Branches below this probability mass are treated as absent: their
/// residual would be 0/0.
pub const BRANCH_EPS: f64 = 1e-12;

/// Largest register the engine supports.
pub const MAX_QUBITS: usize = 4;

/// Single-character name identifying one particle within a protocol run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitLabel(pub char);

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<char> for QubitLabel {
    fn from(c: char) -> Self {
        QubitLabel(c)
    }
}

/// Normalized pure state of `n` labeled qubits, `n ≤ 4`, stored as a dense
/// vector of `2^n` amplitudes in MSB-first label order.
///
/// Values are immutable after construction; gates and measurements return
/// new states. Any two states equal up to a global phase are physically the
/// same; protocol code compares with [`PureState::fidelity`], never
/// elementwise.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    labels: Vec<QubitLabel>,
    amps: Vec<Amplitude>,
}

impl PureState {
    /// Computational basis state `|bit⟩` of a single qubit.
    pub fn basis(label: QubitLabel, bit: u8) -> PureState {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let amps = if bit == 0 {
            vec![one, zero]
        } else {
            vec![zero, one]
        };
        PureState {
            labels: vec![label],
            amps,
        }
    }

    /// `|+⟩ = (|0⟩ + |1⟩)/√2`.
    pub fn plus(label: QubitLabel) -> PureState {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        PureState {
            labels: vec![label],
            amps: vec![h, h],
        }
    }

    /// `|−⟩ = (|0⟩ − |1⟩)/√2`.
    pub fn minus(label: QubitLabel) -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        PureState {
            labels: vec![label],
            amps: vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }

    /// Single qubit `α|0⟩ + β|1⟩`. Rejects non-finite or unnormalized
    /// inputs (tolerance [`ALGEBRA_TOL`]), then renormalizes exactly.
    pub fn single(label: QubitLabel, alpha: Amplitude, beta: Amplitude) -> Result<PureState> {
        PureState::from_amplitudes(vec![label], vec![alpha, beta])
    }

    /// General constructor from a dense amplitude vector.
    ///
    /// Requires 1..=4 unique labels, exactly `2^n` finite amplitudes, and a
    /// Euclidean norm within [`ALGEBRA_TOL`] of 1. The stored vector is
    /// renormalized so downstream algebra starts from norm 1.
    pub fn from_amplitudes(labels: Vec<QubitLabel>, amps: Vec<Amplitude>) -> Result<PureState> {
        if labels.is_empty() || labels.len() > MAX_QUBITS {
            return Err(QsimError::CapacityExceeded {
                requested: labels.len(),
            });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(QsimError::LabelCollision(*l));
            }
        }
        if amps.len() != 1 << labels.len() {
            return Err(QsimError::DimensionMismatch {
                left: amps.len(),
                right: 1 << labels.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(QsimError::NonFiniteAmplitude);
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > ALGEBRA_TOL {
            return Err(QsimError::NormalizationError { norm_sqr });
        }
        let scale = 1.0 / norm_sqr.sqrt();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Ok(PureState { labels, amps })
    }

    /// The 0-qubit residual left after measuring out the last qubit: a bare
    /// unit amplitude. Tensoring with it is the identity.
    pub(crate) fn scalar_unit() -> PureState {
        PureState {
            labels: Vec::new(),
            amps: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// Internal constructor for vectors already known to be valid.
    pub(crate) fn from_parts_unchecked(labels: Vec<QubitLabel>, amps: Vec<Amplitude>) -> PureState {
        debug_assert_eq!(amps.len(), 1 << labels.len());
        PureState { labels, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    /// Position of `label` in the register, if present.
    pub fn position(&self, label: QubitLabel) -> Option<usize> {
        self.labels.iter().position(|&l| l == label)
    }

    /// Bit mask selecting `label`'s bit in a basis index (MSB-first).
    pub(crate) fn mask_of(&self, pos: usize) -> usize {
        1 << (self.labels.len() - 1 - pos)
    }

    pub(crate) fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Tensor product `self ⊗ other`; labels concatenate self-then-other,
    /// so `other`'s bits become the least significant ones.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        let n = self.labels.len() + other.labels.len();
        if n > MAX_QUBITS {
            return Err(QsimError::CapacityExceeded { requested: n });
        }
        if let Some(&dup) = self.labels.iter().find(|l| other.labels.contains(l)) {
            return Err(QsimError::LabelCollision(dup));
        }
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(PureState { labels, amps })
    }

    /// `|⟨self|other⟩|²`: overlap squared, invariant under global phase of
    /// either argument. States are compared in their stored label order.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.num_qubits() != other.num_qubits() {
            return Err(QsimError::DimensionMismatch {
                left: self.num_qubits(),
                right: other.num_qubits(),
            });
        }
        let inner: Complex64 = self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(inner.norm_sqr())
    }

    /// Fixed-width textual rendering used for test goldens: every basis ket
    /// in label order, signed decimal amplitudes with 12 significant digits.
    pub fn render(&self) -> String {
        let n = self.labels.len();
        let mut out = String::new();
        let label_list: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        out.push_str(&format!("state [{}]\n", label_list.join(",")));
        for (idx, a) in self.amps.iter().enumerate() {
            let mut bits = String::with_capacity(n);
            for pos in 0..n {
                let bit = (idx >> (n - 1 - pos)) & 1;
                bits.push(if bit == 1 { '1' } else { '0' });
            }
            out.push_str(&format!("|{}> {:+.11e} {:+.11e}\n", bits, a.re, a.im));
        }
        out
    }
}

impl fmt::Display for PureState {
    /// Compact ket expansion of the nonzero terms, e.g.
    /// `0.707107|00> + 0.707107|11>`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.labels.len();
        let mut first = true;
        for (idx, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() < BRANCH_EPS * BRANCH_EPS {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mut bits = String::with_capacity(n);
            for pos in 0..n {
                bits.push(if (idx >> (n - 1 - pos)) & 1 == 1 {
                    '1'
                } else {
                    '0'
                });
            }
            if a.im.abs() < 1e-12 {
                write!(f, "{:.6}|{}>", a.re, bits)?;
            } else {
                write!(f, "({:.6}{:+.6}i)|{}>", a.re, a.im, bits)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// The payload of a teleportation run: an arbitrary normalized single-qubit
/// state `α|0⟩ + β|1⟩`, held apart from any register until tensored in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnknownQubit {
    alpha: Amplitude,
    beta: Amplitude,
}

impl UnknownQubit {
    /// Validates `|α|² + |β|² = 1` within [`ALGEBRA_TOL`] and finiteness.
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<UnknownQubit> {
        if !(alpha.re.is_finite()
            && alpha.im.is_finite()
            && beta.re.is_finite()
            && beta.im.is_finite())
        {
            return Err(QsimError::NonFiniteAmplitude);
        }
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > ALGEBRA_TOL {
            return Err(QsimError::NormalizationError { norm_sqr });
        }
        Ok(UnknownQubit { alpha, beta })
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    /// Registers the qubit into a one-qubit state under `label`.
    pub fn to_state(&self, label: QubitLabel) -> PureState {
        PureState::single(label, self.alpha, self.beta)
            .expect("UnknownQubit is normalized by construction")
    }
}

/// Haar-uniform random qubit: with `cos θ` uniform on `[−1, 1]` and `φ`
/// uniform on `[0, 2π)`, returns `α = cos(θ/2)`, `β = e^{iφ} sin(θ/2)`.
/// Consumes exactly two draws (`cos θ` first, then `φ`).
pub fn random_unknown_qubit(rng: &mut SimRng) -> UnknownQubit {
    let cos_theta = 2.0 * rng.next_f64() - 1.0;
    let phi = 2.0 * std::f64::consts::PI * rng.next_f64();
    let half_theta = cos_theta.acos() / 2.0;
    let alpha = Complex64::new(half_theta.cos(), 0.0);
    let beta = Complex64::from_polar(half_theta.sin(), phi);
    UnknownQubit { alpha, beta }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn basis_product_is_joint_basis_state() {
        let s = PureState::basis(QubitLabel('a'), 0)
            .tensor(&PureState::basis(QubitLabel('b'), 0))
            .unwrap();
        assert_eq!(
            s.amplitudes(),
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]
        );
    }

    #[test]
    fn tensor_distributes_over_superposition() {
        let q = PureState::single(QubitLabel('a'), c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let s = q.tensor(&PureState::basis(QubitLabel('b'), 0)).unwrap();
        // α|00⟩ + β|10⟩
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-12);
        assert!(s.amplitudes()[1].norm() < 1e-12);
        assert!((s.amplitudes()[2].re - 0.8).abs() < 1e-12);
        assert!(s.amplitudes()[3].norm() < 1e-12);
    }

    #[test]
    fn plus_tensor_plus_is_uniform() {
        let s = PureState::plus(QubitLabel('a'))
            .tensor(&PureState::plus(QubitLabel('b')))
            .unwrap();
        for a in s.amplitudes() {
            assert!((a.re - 0.5).abs() < 1e-12);
            assert!(a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_rejects_label_collision() {
        let a = PureState::basis(QubitLabel('x'), 0);
        let b = PureState::basis(QubitLabel('x'), 1);
        assert_eq!(
            a.tensor(&b),
            Err(QsimError::LabelCollision(QubitLabel('x')))
        );
    }

    #[test]
    fn tensor_rejects_overflow() {
        let mk = |ch| PureState::basis(QubitLabel(ch), 0);
        let four = mk('a')
            .tensor(&mk('b'))
            .unwrap()
            .tensor(&mk('c'))
            .unwrap()
            .tensor(&mk('d'))
            .unwrap();
        assert_eq!(
            four.tensor(&mk('e')),
            Err(QsimError::CapacityExceeded { requested: 5 })
        );
    }

    #[test]
    fn constructor_rejects_bad_norm() {
        let err = PureState::single(QubitLabel('q'), c(1.0, 0.0), c(0.5, 0.0));
        assert!(matches!(err, Err(QsimError::NormalizationError { .. })));
    }

    #[test]
    fn constructor_rejects_non_finite() {
        let err = PureState::single(QubitLabel('q'), c(f64::NAN, 0.0), c(0.0, 0.0));
        assert_eq!(err, Err(QsimError::NonFiniteAmplitude));
    }

    #[test]
    fn constructor_rejects_wrong_length() {
        let err = PureState::from_amplitudes(vec![QubitLabel('q')], vec![c(1.0, 0.0)]);
        assert!(matches!(err, Err(QsimError::DimensionMismatch { .. })));
    }

    #[test]
    fn constructor_rejects_bad_label_sets() {
        let q = QubitLabel('q');
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let err = PureState::from_amplitudes(vec![q, q], vec![h, c(0.0, 0.0), c(0.0, 0.0), h]);
        assert_eq!(err, Err(QsimError::LabelCollision(q)));
        let err = PureState::from_amplitudes(vec![], vec![c(1.0, 0.0)]);
        assert!(matches!(err, Err(QsimError::CapacityExceeded { .. })));
    }

    #[test]
    fn fidelity_basics() {
        let zero = PureState::basis(QubitLabel('q'), 0);
        let one = PureState::basis(QubitLabel('q'), 1);
        let plus = PureState::plus(QubitLabel('q'));
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero.fidelity(&one).unwrap() < 1e-12);
        assert!((zero.fidelity(&plus).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fidelity_ignores_global_phase() {
        let a = PureState::single(QubitLabel('q'), c(0.6, 0.0), c(0.8, 0.0)).unwrap();
        let phase = Complex64::from_polar(1.0, 1.234);
        let b = PureState::from_amplitudes(
            vec![QubitLabel('q')],
            a.amplitudes().iter().map(|x| x * phase).collect(),
        )
        .unwrap();
        assert!((a.fidelity(&b).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_requires_equal_size() {
        let a = PureState::basis(QubitLabel('q'), 0);
        let b = a.tensor(&PureState::basis(QubitLabel('r'), 0)).unwrap();
        assert!(matches!(
            a.fidelity(&b),
            Err(QsimError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn render_golden_for_plus() {
        let s = PureState::plus(QubitLabel('q'));
        let expected = "state [q]\n\
                        |0> +7.07106781187e-1 +0.00000000000e0\n\
                        |1> +7.07106781187e-1 +0.00000000000e0\n";
        assert_eq!(s.render(), expected);
    }

    #[test]
    fn unknown_qubit_validates() {
        assert!(UnknownQubit::new(c(1.0, 0.0), c(0.0, 0.0)).is_ok());
        assert!(matches!(
            UnknownQubit::new(c(1.0, 0.0), c(1.0, 0.0)),
            Err(QsimError::NormalizationError { .. })
        ));
    }

    #[test]
    fn random_qubit_is_normalized_and_deterministic() {
        let mut rng = SimRng::from_seed(42);
        let q = random_unknown_qubit(&mut rng);
        let norm = q.alpha().norm_sqr() + q.beta().norm_sqr();
        assert!((norm - 1.0).abs() < 1e-12);

        let mut rng2 = SimRng::from_seed(42);
        let q2 = random_unknown_qubit(&mut rng2);
        assert_eq!(q, q2);
    }

    #[test]
    fn random_qubit_mean_weight_is_half() {
        let mut rng = SimRng::from_seed(9);
        let n = 100_000;
        let mean: f64 = (0..n)
            .map(|_| random_unknown_qubit(&mut rng).alpha().norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.5).abs() < 0.01, "mean |α|² = {mean}");
    }
}
