//! Dense statevector simulator for the circuit IR.
//!
//! This is the crate's independent oracle: every synthesized circuit is
//! validated by running it from |0…0⟩ and comparing against the symbolic
//! state. Basis index convention follows the circuit module's qubit
//! ordering — qubit 0 is the most significant index bit, so an encoded
//! image sits at index `color·2^(b+n+m) + λ·2^(n+m) + y·2^m + x`.
//!
//! Desk scale only: a dense array of `2^num_qubits` complex amplitudes,
//! capped at 24 qubits by default.

use std::ops::Range;

use num_complex::Complex;
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::state::QrmwState;

/// Largest statevector allocated by default (~16M complex amplitudes).
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Default cap for [`check_permutation_unitary`], which enumerates every
/// basis state and is therefore quadratic in the state dimension.
pub const DEFAULT_PERMUTATION_CAP: usize = 12;

/// Dense complex amplitude vector over `2^num_qubits` basis states.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    num_qubits: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Float> StateVector<T> {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    /// The computational basis state `|index⟩`.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidParameter(
                "state needs at least one qubit".into(),
            ));
        }
        if num_qubits > DEFAULT_QUBIT_CAP {
            return Err(Error::QubitCapExceeded {
                qubits: num_qubits,
                cap: DEFAULT_QUBIT_CAP,
            });
        }
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); dim];
        amps[index] = Complex::new(T::one(), T::zero());
        Ok(StateVector { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    /// Σ |amplitude|².
    pub fn norm_sqr(&self) -> T {
        self.amps
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// Index-bit weight of a qubit: qubit 0 is the most significant bit.
    fn bit(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    /// Applies one gate in place. H and X act by their usual unitaries;
    /// MCX swaps the target pair only where every control bit matches its
    /// polarity.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if gate.target() >= self.num_qubits
            || gate.controls().iter().any(|c| c.qubit >= self.num_qubits)
        {
            return Err(Error::InvalidGate(format!(
                "gate touches qubits outside the {}-qubit state",
                self.num_qubits
            )));
        }
        let t = self.bit(gate.target());
        match gate {
            Gate::H { .. } => {
                let s = T::from(0.5).expect("0.5 is representable").sqrt();
                for i in 0..self.amps.len() {
                    if i & t == 0 {
                        let a = self.amps[i];
                        let b = self.amps[i | t];
                        self.amps[i] = (a + b).scale(s);
                        self.amps[i | t] = (a - b).scale(s);
                    }
                }
            }
            Gate::X { .. } => {
                for i in 0..self.amps.len() {
                    if i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            Gate::Mcx { controls, .. } => {
                let mut ctrl_mask = 0usize;
                let mut ctrl_val = 0usize;
                for c in controls {
                    let bit = self.bit(c.qubit);
                    ctrl_mask |= bit;
                    if c.polarity {
                        ctrl_val |= bit;
                    }
                }
                for i in 0..self.amps.len() {
                    if i & t == 0 && i & ctrl_mask == ctrl_val {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies every gate of `circuit` in order.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.total_qubits() != self.num_qubits {
            return Err(Error::GeometryMismatch);
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Largest elementwise amplitude difference |aᵢ − bᵢ|.
    pub fn max_deviation(&self, other: &Self) -> Result<T> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::GeometryMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(T::zero(), |acc, (a, b)| acc.max((a - b).norm())))
    }
}

/// Simulates `circuit` from |0…0⟩ under the default qubit cap.
pub fn run_statevector<T: Float>(circuit: &Circuit) -> Result<StateVector<T>> {
    run_statevector_capped(circuit, DEFAULT_QUBIT_CAP)
}

/// Simulates `circuit` from |0…0⟩, refusing circuits wider than `cap`.
pub fn run_statevector_capped<T: Float>(circuit: &Circuit, cap: usize) -> Result<StateVector<T>> {
    let qubits = circuit.total_qubits();
    if qubits > cap.min(DEFAULT_QUBIT_CAP) {
        return Err(Error::QubitCapExceeded {
            qubits,
            cap: cap.min(DEFAULT_QUBIT_CAP),
        });
    }
    let mut sv = StateVector::zero_state(qubits)?;
    sv.apply_circuit(circuit)?;
    Ok(sv)
}

/// Expands a symbolic encoded state into a dense statevector: the shared
/// amplitude at index `(f, λ, y, x)` for every channel slot, zero
/// elsewhere.
pub fn statevector_from_symbolic<T: Float>(state: &QrmwState<T>) -> Result<StateVector<T>> {
    let g = state.geometry();
    let qubits = g.total_qubits() as usize;
    if qubits > DEFAULT_QUBIT_CAP {
        return Err(Error::QubitCapExceeded {
            qubits,
            cap: DEFAULT_QUBIT_CAP,
        });
    }
    let width = g.address_bits();
    let mut sv = StateVector::zero_state(qubits)?;
    sv.amps[0] = Complex::new(T::zero(), T::zero());
    let amp = Complex::new(state.amplitude(), T::zero());
    for (slot, &color) in state.table().iter().enumerate() {
        sv.amps[(color as usize) << width | slot] = amp;
    }
    Ok(sv)
}

/// True iff the circuit maps every computational basis state to a single
/// basis state of unit-modulus amplitude.
///
/// Circuits free of H gates are checked by exact integer enumeration (X
/// and MCX permute basis states with amplitude exactly 1, so tracking the
/// image index suffices); anything containing an H falls back to dense
/// per-basis simulation, so an H pair that cancels is still recognized as
/// a permutation.
pub fn check_permutation_unitary(circuit: &Circuit) -> Result<bool> {
    check_permutation_unitary_capped(circuit, DEFAULT_PERMUTATION_CAP)
}

/// [`check_permutation_unitary`] with an explicit qubit cap.
pub fn check_permutation_unitary_capped(circuit: &Circuit, cap: usize) -> Result<bool> {
    let qubits = circuit.total_qubits();
    if qubits > cap.min(DEFAULT_QUBIT_CAP) {
        return Err(Error::QubitCapExceeded {
            qubits,
            cap: cap.min(DEFAULT_QUBIT_CAP),
        });
    }
    let dim = 1usize << qubits;
    if circuit.gates().iter().all(|g| !matches!(g, Gate::H { .. })) {
        let mut seen = vec![false; dim];
        for start in 0..dim {
            let mut idx = start;
            for gate in circuit.gates() {
                let t = 1 << (qubits - 1 - gate.target());
                let fires = gate.controls().iter().all(|c| {
                    let bit = 1 << (qubits - 1 - c.qubit);
                    (idx & bit != 0) == c.polarity
                });
                if fires {
                    idx ^= t;
                }
            }
            if seen[idx] {
                return Ok(false);
            }
            seen[idx] = true;
        }
        return Ok(true);
    }
    let tol = 1e-10;
    for start in 0..dim {
        let mut sv = StateVector::<f64>::basis_state(qubits, start)?;
        sv.apply_circuit(circuit)?;
        let peak = sv.amps.iter().fold(0.0f64, |acc, a| acc.max(a.norm()));
        if (peak - 1.0).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Born-rule marginal over a contiguous qubit range, MSB-first: entry `o`
/// is the probability of reading `o` on those qubits.
pub fn marginal_probabilities<T: Float>(
    sv: &StateVector<T>,
    register: Range<usize>,
) -> Result<Vec<T>> {
    if register.is_empty() {
        return Err(Error::EmptyRegister);
    }
    if register.end > sv.num_qubits() {
        return Err(Error::InvalidParameter(format!(
            "register {}..{} exceeds {} qubits",
            register.start,
            register.end,
            sv.num_qubits()
        )));
    }
    let len = register.len();
    let shift = sv.num_qubits() - register.end;
    let mask = (1usize << len) - 1;
    let mut probs = vec![T::zero(); 1 << len];
    for (i, a) in sv.amplitudes().iter().enumerate() {
        probs[i >> shift & mask] = probs[i >> shift & mask] + a.norm_sqr();
    }
    Ok(probs)
}

/// Samples one outcome of measuring `register`; deterministic in `seed`.
pub fn sample_measurement<T: Float>(
    sv: &StateVector<T>,
    register: Range<usize>,
    seed: u64,
) -> Result<u64> {
    Ok(sample_measurements(sv, register, seed, 1)?[0])
}

/// Samples `count` independent outcomes of measuring `register` (the state
/// is not collapsed between draws); deterministic in `seed`.
pub fn sample_measurements<T: Float>(
    sv: &StateVector<T>,
    register: Range<usize>,
    seed: u64,
    count: usize,
) -> Result<Vec<u64>> {
    let probs = marginal_probabilities(sv, register)?;
    let cumulative: Vec<f64> = probs
        .iter()
        .scan(0.0f64, |acc, p| {
            *acc += p.to_f64().expect("probability fits in f64");
            Some(*acc)
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let outcomes = (0..count)
        .map(|_| {
            let r: f64 = rng.gen();
            cumulative.partition_point(|&c| c <= r).min(probs.len() - 1) as u64
        })
        .collect();
    Ok(outcomes)
}
