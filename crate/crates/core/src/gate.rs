//! Unitary gates and their application to labeled states.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QsimError, Result};
use crate::state::{Amplitude, PureState, QubitLabel, ALGEBRA_TOL};

type Matrix2 = [[Amplitude; 2]; 2];

/// The gate set needed by the protocols, plus an escape hatch for arbitrary
/// single-qubit unitaries.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    Identity,
    PauliX,
    PauliZ,
    Hadamard,
    /// Two-qubit controlled-NOT; targets are ordered (control, target).
    Cnot,
    Custom(Matrix2),
}

/// Serializable gate identity for transcript events.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateName {
    I,
    X,
    Z,
    H,
    Cnot,
    Custom,
}

impl fmt::Display for GateName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GateName::I => "I",
            GateName::X => "X",
            GateName::Z => "Z",
            GateName::H => "H",
            GateName::Cnot => "CNOT",
            GateName::Custom => "CUSTOM",
        };
        write!(f, "{s}")
    }
}

impl GateName {
    pub fn parse(token: &str) -> Option<GateName> {
        match token {
            "I" => Some(GateName::I),
            "X" => Some(GateName::X),
            "Z" => Some(GateName::Z),
            "H" => Some(GateName::H),
            "CNOT" => Some(GateName::Cnot),
            "CUSTOM" => Some(GateName::Custom),
            _ => None,
        }
    }
}

impl Gate {
    /// Arbitrary single-qubit unitary. Rejects non-finite entries and
    /// matrices whose `U†U` departs from the identity by more than
    /// [`ALGEBRA_TOL`] in any entry.
    pub fn custom(m: Matrix2) -> Result<Gate> {
        for row in &m {
            for a in row {
                if !a.re.is_finite() || !a.im.is_finite() {
                    return Err(QsimError::NonFiniteAmplitude);
                }
            }
        }
        let mut deviation: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                // (U†U)_ij = Σ_k conj(U_ki) U_kj
                let mut e = Complex64::new(0.0, 0.0);
                for row in &m {
                    e += row[i].conj() * row[j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                deviation = deviation.max((e - target).norm());
            }
        }
        if deviation > ALGEBRA_TOL {
            return Err(QsimError::NonUnitary { deviation });
        }
        Ok(Gate::Custom(m))
    }

    pub fn name(&self) -> GateName {
        match self {
            Gate::Identity => GateName::I,
            Gate::PauliX => GateName::X,
            Gate::PauliZ => GateName::Z,
            Gate::Hadamard => GateName::H,
            Gate::Cnot => GateName::Cnot,
            Gate::Custom(_) => GateName::Custom,
        }
    }

    /// Number of target qubits the gate acts on.
    pub fn arity(&self) -> usize {
        match self {
            Gate::Cnot => 2,
            _ => 1,
        }
    }

    fn matrix(&self) -> Option<Matrix2> {
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        match self {
            Gate::Identity => Some([[o, z], [z, o]]),
            Gate::PauliX => Some([[z, o], [o, z]]),
            Gate::PauliZ => Some([[o, z], [z, -o]]),
            Gate::Hadamard => Some([[h, h], [h, -h]]),
            Gate::Custom(m) => Some(*m),
            Gate::Cnot => None,
        }
    }
}

impl PureState {
    /// Applies `gate` to the listed target qubits, identity elsewhere, and
    /// returns the new state. For [`Gate::Cnot`] the targets are ordered
    /// (control, target) and must be distinct.
    pub fn apply(&self, gate: &Gate, targets: &[QubitLabel]) -> Result<PureState> {
        let expected = gate.arity();
        if targets.len() != expected {
            return Err(QsimError::ArityMismatch {
                gate: match gate.name() {
                    GateName::I => "I",
                    GateName::X => "X",
                    GateName::Z => "Z",
                    GateName::H => "H",
                    GateName::Cnot => "CNOT",
                    GateName::Custom => "CUSTOM",
                },
                expected,
                got: targets.len(),
            });
        }
        let mut positions = Vec::with_capacity(targets.len());
        for &t in targets {
            match self.position(t) {
                Some(p) => positions.push(p),
                None => return Err(QsimError::UnknownLabel(t)),
            }
        }

        let out = match gate {
            Gate::Cnot => {
                if positions[0] == positions[1] {
                    return Err(QsimError::ArityMismatch {
                        gate: "CNOT",
                        expected: 2,
                        got: 1,
                    });
                }
                self.apply_cnot_at(positions[0], positions[1])
            }
            _ => {
                let m = gate.matrix().expect("single-qubit gates have a matrix");
                self.apply_single_at(positions[0], &m)
            }
        };
        debug_assert!((out.norm_sqr() - 1.0).abs() < ALGEBRA_TOL);
        Ok(out)
    }

    fn apply_single_at(&self, pos: usize, m: &Matrix2) -> PureState {
        let mask = self.mask_of(pos);
        let mut amps = self.amplitudes().to_vec();
        for i in 0..amps.len() {
            if i & mask == 0 {
                let j = i | mask;
                let a0 = amps[i];
                let a1 = amps[j];
                amps[i] = m[0][0] * a0 + m[0][1] * a1;
                amps[j] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        PureState::from_parts_unchecked(self.labels().to_vec(), amps)
    }

    fn apply_cnot_at(&self, control: usize, target: usize) -> PureState {
        let cmask = self.mask_of(control);
        let tmask = self.mask_of(target);
        let mut amps = self.amplitudes().to_vec();
        for i in 0..amps.len() {
            if i & cmask != 0 && i & tmask == 0 {
                amps.swap(i, i | tmask);
            }
        }
        PureState::from_parts_unchecked(self.labels().to_vec(), amps)
    }
}
