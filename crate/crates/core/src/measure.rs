//! Single-qubit measurements with exact branch analysis.
//!
//! Measuring removes the measured qubit: the residual state has one fewer
//! qubit, mirroring how a measured particle factors out of the joint ket.
//! A ± measurement is implemented as Hadamard conjugation of a
//! computational one, which fixes the branch ordering Plus↔Zero,
//! Minus↔One.

use std::fmt;

use crate::error::{QsimError, Result};
use crate::gate::Gate;
use crate::rng::SimRng;
use crate::state::{PureState, QubitLabel, BRANCH_EPS};

/// Measurement basis: computational `{|0⟩, |1⟩}` or `{|+⟩, |−⟩}` with
/// `|±⟩ = (|0⟩ ± |1⟩)/√2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasBasis {
    Computational,
    PlusMinus,
}

impl fmt::Display for MeasBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasBasis::Computational => write!(f, "comp"),
            MeasBasis::PlusMinus => write!(f, "pm"),
        }
    }
}

impl MeasBasis {
    pub fn parse(token: &str) -> Option<MeasBasis> {
        match token {
            "comp" => Some(MeasBasis::Computational),
            "pm" => Some(MeasBasis::PlusMinus),
            _ => None,
        }
    }

    fn outcome_for_bit(self, bit: u8) -> Outcome {
        match (self, bit) {
            (MeasBasis::Computational, 0) => Outcome::Zero,
            (MeasBasis::Computational, _) => Outcome::One,
            (MeasBasis::PlusMinus, 0) => Outcome::Plus,
            (MeasBasis::PlusMinus, _) => Outcome::Minus,
        }
    }
}

/// One of the four single-qubit eigenstate labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Zero,
    One,
    Plus,
    Minus,
}

impl Outcome {
    /// Classical bit encoding: Zero/Plus → 0, One/Minus → 1.
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Zero | Outcome::Plus => 0,
            Outcome::One | Outcome::Minus => 1,
        }
    }

    /// The eigenstate this outcome projects onto, as a fresh single-qubit
    /// state under `label`.
    pub fn eigenstate(self, label: QubitLabel) -> PureState {
        match self {
            Outcome::Zero => PureState::basis(label, 0),
            Outcome::One => PureState::basis(label, 1),
            Outcome::Plus => PureState::plus(label),
            Outcome::Minus => PureState::minus(label),
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Outcome::Zero => "0",
            Outcome::One => "1",
            Outcome::Plus => "+",
            Outcome::Minus => "-",
        };
        write!(f, "{s}")
    }
}

impl Outcome {
    pub fn parse(token: &str) -> Option<Outcome> {
        match token {
            "0" => Some(Outcome::Zero),
            "1" => Some(Outcome::One),
            "+" => Some(Outcome::Plus),
            "-" => Some(Outcome::Minus),
            _ => None,
        }
    }
}

/// One branch of a measurement: the outcome, its exact probability, and the
/// renormalized residual over the remaining qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBranch {
    pub outcome: Outcome,
    pub probability: f64,
    pub residual: PureState,
}

impl PureState {
    /// Exhaustive, deterministic branch analysis of measuring `q` in
    /// `basis`, with no sampling. Branch probabilities sum to 1; branches with
    /// probability below [`BRANCH_EPS`] are omitted (their residual is
    /// undefined). Reconstructing `Σ √pᵢ |outcomeᵢ⟩ ⊗ residualᵢ` reproduces
    /// the state up to global phase.
    pub fn branch_decomposition(
        &self,
        q: QubitLabel,
        basis: MeasBasis,
    ) -> Result<Vec<MeasurementBranch>> {
        let pos = self.position(q).ok_or(QsimError::UnknownLabel(q))?;
        let work = match basis {
            MeasBasis::Computational => self.clone(),
            MeasBasis::PlusMinus => self.apply(&Gate::Hadamard, &[q])?,
        };
        let mask = work.mask_of(pos);
        let n = work.num_qubits();
        let mut branches = Vec::with_capacity(2);
        for bit in 0..2u8 {
            let mut prob = 0.0;
            for (i, a) in work.amplitudes().iter().enumerate() {
                if ((i & mask != 0) as u8) == bit {
                    prob += a.norm_sqr();
                }
            }
            if prob < BRANCH_EPS {
                continue;
            }
            let scale = 1.0 / prob.sqrt();
            let mut residual_amps = Vec::with_capacity(work.amplitudes().len() / 2);
            for (i, a) in work.amplitudes().iter().enumerate() {
                if ((i & mask != 0) as u8) == bit {
                    residual_amps.push(a * scale);
                }
            }
            let residual_labels: Vec<QubitLabel> =
                work.labels().iter().copied().filter(|&l| l != q).collect();
            let residual = if n == 1 {
                PureState::scalar_unit()
            } else {
                PureState::from_parts_unchecked(residual_labels, residual_amps)
            };
            branches.push(MeasurementBranch {
                outcome: basis.outcome_for_bit(bit),
                probability: prob,
                residual,
            });
        }
        Ok(branches)
    }

    /// Samples one measurement of `q` in `basis`, consuming exactly one
    /// uniform draw from `rng`. Returns the chosen branch (with its exact
    /// probability, not the sampled frequency) and the collapsed state with
    /// `q` removed.
    pub fn measure(
        &self,
        q: QubitLabel,
        basis: MeasBasis,
        rng: &mut SimRng,
    ) -> Result<(MeasurementBranch, PureState)> {
        let branches = self.branch_decomposition(q, basis)?;
        if branches.is_empty() {
            return Err(QsimError::DegenerateState);
        }
        let u = rng.next_f64();
        let mut acc = 0.0;
        let mut chosen = branches.len() - 1;
        for (k, br) in branches.iter().enumerate() {
            acc += br.probability;
            if u < acc {
                chosen = k;
                break;
            }
        }
        let branch = branches.into_iter().nth(chosen).expect("index in range");
        let collapsed = branch.residual.clone();
        Ok((branch, collapsed))
    }
}
