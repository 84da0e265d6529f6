//! Stochastic error channels, unravelled as quantum trajectories.

use std::ops::AddAssign;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::Serialize;

use super::state::{Pauli, StateVector, C64};
use crate::profile::HardwareProfile;

/// Depolarizing probability whose uniform non-identity Pauli channel has
/// average gate fidelity `f` on `n_targets` qubits:
/// `p = (1 − F)(d + 1)/d`, `d = 2^n_targets`.
///
/// Values above 1 are clamped with a warning.
pub fn fidelity_to_depolarizing(f: f64, n_targets: usize) -> f64 {
    let d = (1u64 << n_targets) as f64;
    let p = (1.0 - f) * (d + 1.0) / d;
    if p > 1.0 {
        log::warn!("fidelity {f} on {n_targets} qubit(s) gives p = {p}; clamped to 1");
        1.0
    } else {
        p.max(0.0)
    }
}

/// Which channels are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NoiseFlags {
    pub gate: bool,
    pub amplitude_damping: bool,
    pub dephasing: bool,
    pub inhomogeneous: bool,
    pub loss: bool,
    pub readout: bool,
}

impl NoiseFlags {
    pub const fn off() -> Self {
        Self {
            gate: false,
            amplitude_damping: false,
            dephasing: false,
            inhomogeneous: false,
            loss: false,
            readout: false,
        }
    }

    /// Gate errors only.
    pub const fn gates() -> Self {
        Self {
            gate: true,
            ..Self::off()
        }
    }

    pub const fn readout_only() -> Self {
        Self {
            readout: true,
            ..Self::off()
        }
    }

    pub const fn full() -> Self {
        Self {
            gate: true,
            amplitude_damping: true,
            dephasing: true,
            inhomogeneous: true,
            loss: true,
            readout: true,
        }
    }

    /// True when no channel acts on the quantum state during the circuit.
    pub fn coherent(&self) -> bool {
        !(self.gate || self.amplitude_damping || self.dephasing || self.inhomogeneous || self.loss)
    }
}

impl std::str::FromStr for NoiseFlags {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(Self::off()),
            "gates" => Ok(Self::gates()),
            "readout" => Ok(Self::readout_only()),
            "full" => Ok(Self::full()),
            other => Err(format!(
                "unknown noise preset `{other}` (off|gates|readout|full)"
            )),
        }
    }
}

/// Channel parameters. Times are in seconds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseModel {
    pub f_1q: f64,
    pub f_2q: f64,
    pub t1: f64,
    pub t2: f64,
    pub t2_star: f64,
    pub trap_lifetime: f64,
    pub f_readout: f64,
    pub flags: NoiseFlags,
}

impl NoiseModel {
    pub fn from_profile(p: &HardwareProfile, flags: NoiseFlags) -> Self {
        Self {
            f_1q: p.f_1q,
            f_2q: p.f_2q,
            t1: p.t1,
            t2: p.t2,
            t2_star: p.t2_star,
            trap_lifetime: p.trap_lifetime,
            f_readout: p.f_readout,
            flags,
        }
    }

    /// Depolarizing probability after a gate on `arity` qubits. Gates on
    /// three or more qubits use the two-qubit fidelity.
    pub fn gate_error(&self, arity: usize) -> f64 {
        if !self.flags.gate {
            return 0.0;
        }
        let f = if arity <= 1 { self.f_1q } else { self.f_2q };
        fidelity_to_depolarizing(f, arity.max(1))
    }

    /// Pure-dephasing rate `1/T_φ = 1/T2 − 1/(2·T1)`.
    pub fn dephasing_rate(&self) -> f64 {
        (1.0 / self.t2 - 0.5 / self.t1).max(0.0)
    }

    pub fn readout_flip(&self) -> f64 {
        if self.flags.readout {
            1.0 - self.f_readout
        } else {
            0.0
        }
    }
}

/// Tally of stochastic events in one or more trajectories.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct NoiseCounts {
    pub pauli_errors: u64,
    pub amplitude_jumps: u64,
    pub phase_flips: u64,
    pub atoms_lost: u64,
    pub loss_shadowed_gates: u64,
    pub readout_flips: u64,
}

impl AddAssign for NoiseCounts {
    fn add_assign(&mut self, o: Self) {
        self.pauli_errors += o.pauli_errors;
        self.amplitude_jumps += o.amplitude_jumps;
        self.phase_flips += o.phase_flips;
        self.atoms_lost += o.atoms_lost;
        self.loss_shadowed_gates += o.loss_shadowed_gates;
        self.readout_flips += o.readout_flips;
    }
}

/// With probability `p`, a uniformly random non-identity Pauli string on
/// `support`; `None` otherwise.
pub fn sample_pauli_error(
    support: &[usize],
    p: f64,
    rng: &mut impl Rng,
) -> Option<Vec<(usize, Pauli)>> {
    if p <= 0.0 || rng.random::<f64>() >= p {
        return None;
    }
    let n = support.len();
    let code = rng.random_range(1..1u64 << (2 * n));
    let paulis = support
        .iter()
        .enumerate()
        .filter_map(|(k, &q)| match code >> (2 * k) & 3 {
            1 => Some((q, Pauli::X)),
            2 => Some((q, Pauli::Y)),
            3 => Some((q, Pauli::Z)),
            _ => None,
        })
        .collect();
    Some(paulis)
}

/// Depolarizing channel with probability `p` on `support`. Returns whether
/// an error was applied.
pub fn depolarize(state: &mut StateVector, support: &[usize], p: f64, rng: &mut impl Rng) -> bool {
    match sample_pauli_error(support, p, rng) {
        Some(paulis) => {
            for (q, pauli) in paulis {
                state.apply_pauli(q, pauli);
            }
            true
        }
        None => false,
    }
}

/// Per-shot static detunings (rad/s), one per qubit, from a zero-mean
/// Gaussian with `σ = √2 / T2*`. Zeros when the channel is off.
pub fn sample_detunings(model: &NoiseModel, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    if !model.flags.inhomogeneous || !model.t2_star.is_finite() {
        return vec![0.0; n];
    }
    let sigma = std::f64::consts::SQRT_2 / model.t2_star;
    let normal = Normal::new(0.0, sigma).expect("finite sigma");
    (0..n).map(|_| normal.sample(rng)).collect()
}

/// Idle evolution of `qubit` for `duration` seconds: amplitude-damping
/// jump or no-jump damping, a dephasing flip, then the static detuning
/// phase `e^{−iδt}` on `|1⟩`.
pub fn idle_decoherence(
    state: &mut StateVector,
    qubit: usize,
    duration: f64,
    model: &NoiseModel,
    detuning: f64,
    rng: &mut impl Rng,
    counts: &mut NoiseCounts,
) {
    if duration <= 0.0 || state.is_lost(qubit) {
        return;
    }
    if model.flags.amplitude_damping && model.t1.is_finite() {
        let decay = (-duration / model.t1).exp();
        let p1 = state.prob_one(qubit);
        if rng.random::<f64>() < (1.0 - decay) * p1 {
            state.project(qubit, true);
            state.apply_pauli(qubit, Pauli::X);
            counts.amplitude_jumps += 1;
        } else {
            state.scale_one(qubit, C64::new(decay.sqrt(), 0.0));
            state.renormalize();
        }
    }
    if model.flags.dephasing {
        let p_flip = (1.0 - (-duration * model.dephasing_rate()).exp()) / 2.0;
        if rng.random::<f64>() < p_flip {
            state.apply_pauli(qubit, Pauli::Z);
            counts.phase_flips += 1;
        }
    }
    if detuning != 0.0 {
        state.scale_one(qubit, C64::from_polar(1.0, -detuning * duration));
    }
}

/// Marks each remaining qubit lost with probability `1 − e^{−t/τ}`.
pub fn atom_loss(
    state: &mut StateVector,
    elapsed: f64,
    trap_lifetime: f64,
    rng: &mut impl Rng,
    counts: &mut NoiseCounts,
) {
    if elapsed <= 0.0 || !trap_lifetime.is_finite() {
        return;
    }
    let p = 1.0 - (-elapsed / trap_lifetime).exp();
    for q in 0..state.n_qubits() {
        if !state.is_lost(q) && rng.random::<f64>() < p {
            state.mark_lost(q, rng);
            counts.atoms_lost += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn depolarizing_mapping() {
        assert_eq!(fidelity_to_depolarizing(1.0, 1), 0.0);
        assert!((fidelity_to_depolarizing(0.999, 1) - 0.0015).abs() < 1e-15);
        assert!((fidelity_to_depolarizing(0.975, 2) - 0.03125).abs() < 1e-15);
        assert_eq!(fidelity_to_depolarizing(0.1, 1), 1.0);
    }

    #[test]
    fn pauli_strings_are_non_identity_and_uniform() {
        let mut rng = from_seed(3);
        let mut seen = std::collections::HashMap::new();
        for _ in 0..15_000 {
            let e = sample_pauli_error(&[0, 1], 1.0, &mut rng).unwrap();
            assert!(!e.is_empty());
            *seen.entry(format!("{e:?}")).or_insert(0u32) += 1;
        }
        assert_eq!(seen.len(), 15);
        assert!(seen.values().all(|&c| (800..1200).contains(&c)));
    }

    #[test]
    fn zero_duration_is_identity() {
        let model = NoiseModel::from_profile(&HardwareProfile::rb87_2023(), NoiseFlags::full());
        let mut s = StateVector::zero(1);
        s.apply_unitary(&crate::Gate::h(0));
        let before = s.clone();
        let mut counts = NoiseCounts::default();
        idle_decoherence(&mut s, 0, 0.0, &model, 1e3, &mut from_seed(1), &mut counts);
        assert_eq!(s, before);
    }

    #[test]
    fn loss_probability_is_tiny_at_default_scale() {
        let p: f64 = 1.0 - (-22e-6f64 / 10.0).exp();
        assert!((p - 2.2e-6).abs() < 1e-11);
        let mut s = StateVector::zero(3);
        let mut counts = NoiseCounts::default();
        atom_loss(&mut s, 1.0, f64::INFINITY, &mut from_seed(2), &mut counts);
        assert_eq!(counts.atoms_lost, 0);
    }

    #[test]
    fn amplitude_damping_empties_one() {
        let mut model = NoiseModel::from_profile(&HardwareProfile::rb87_2023(), NoiseFlags::off());
        model.flags.amplitude_damping = true;
        let mut rng = from_seed(5);
        let mut decayed = 0;
        for _ in 0..4000 {
            let mut s = StateVector::zero(1);
            s.apply_pauli(0, Pauli::X);
            let mut counts = NoiseCounts::default();
            idle_decoherence(&mut s, 0, model.t1, &model, 0.0, &mut rng, &mut counts);
            decayed += counts.amplitude_jumps;
        }
        let rate = decayed as f64 / 4000.0;
        let expected = 1.0 - (-1.0f64).exp();
        assert!((rate - expected).abs() < 0.03, "{rate}");
    }
}
