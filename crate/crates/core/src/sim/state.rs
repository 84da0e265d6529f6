//! State vectors with per-qubit loss flags.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::Rng;

use crate::circuit::{Circuit, Gate, GateKind};

pub type C64 = Complex64;

/// Largest register simulated as a dense state vector.
pub const MAX_QUBITS: usize = 20;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// 2×2 matrix, row-major.
pub type Mat2 = [[C64; 2]; 2];

pub fn rx(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(0.0, -s)],
        [C64::new(0.0, -s), C64::new(c, 0.0)],
    ]
}

pub fn ry(theta: f64) -> Mat2 {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        [C64::new(c, 0.0), C64::new(-s, 0.0)],
        [C64::new(s, 0.0), C64::new(c, 0.0)],
    ]
}

pub fn rz(theta: f64) -> Mat2 {
    [
        [C64::from_polar(1.0, -theta / 2.0), ZERO],
        [ZERO, C64::from_polar(1.0, theta / 2.0)],
    ]
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

/// Whether a gate ran or was skipped because an operand had been lost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateOutcome {
    Applied,
    LossShadow,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    lost: Vec<bool>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "{n} qubits exceed the state-vector cap");
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Self {
            amps,
            lost: vec![false; n],
        }
    }

    /// Normalises `amps`, whose length must be a power of two.
    pub fn from_amplitudes(amps: Vec<C64>) -> Self {
        assert!(amps.len().is_power_of_two(), "length must be 2^n");
        let n = amps.len().trailing_zeros() as usize;
        let mut s = Self {
            amps,
            lost: vec![false; n],
        };
        s.renormalize();
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.lost.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn is_lost(&self, q: usize) -> bool {
        self.lost[q]
    }

    pub fn lost(&self) -> &[bool] {
        &self.lost
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Rescales to unit norm and returns the norm before rescaling.
    pub fn renormalize(&mut self) -> f64 {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            let inv = 1.0 / norm;
            self.amps.iter_mut().for_each(|a| *a *= inv);
        }
        norm
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that qubit `q` is found in `|1⟩`.
    pub fn prob_one(&self, q: usize) -> f64 {
        let bit = 1 << q;
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[i | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Multiplies the `|1⟩` component of `q` by `factor`.
    pub fn scale_one(&mut self, q: usize, factor: C64) {
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & bit != 0 {
                *a *= factor;
            }
        }
    }

    /// Phase `phase` on basis states where every qubit of `qubits` is `1`.
    pub fn controlled_phase(&mut self, qubits: &[usize], phase: C64) {
        let mask = qubits.iter().fold(0usize, |m, &q| m | 1 << q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & mask == mask {
                *a *= phase;
            }
        }
    }

    pub fn swap(&mut self, a: usize, b: usize) {
        let (ba, bb) = (1 << a, 1 << b);
        for i in 0..self.amps.len() {
            if i & ba != 0 && i & bb == 0 {
                self.amps.swap(i, i ^ ba ^ bb);
            }
        }
    }

    pub fn apply_pauli(&mut self, q: usize, p: Pauli) {
        let m = match p {
            Pauli::X => [[ZERO, ONE], [ONE, ZERO]],
            Pauli::Y => [[ZERO, C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), ZERO]],
            Pauli::Z => [[ONE, ZERO], [ZERO, -ONE]],
        };
        self.apply_1q(q, &m);
    }

    /// Exact unitary of `gate`, ignoring loss flags. `measure all` is a
    /// no-op here.
    pub fn apply_unitary(&mut self, gate: &Gate) {
        let q = &gate.qubits;
        match gate.kind {
            GateKind::Rx(t) => self.apply_1q(q[0], &rx(t)),
            GateKind::Ry(t) => self.apply_1q(q[0], &ry(t)),
            GateKind::Rz(t) => self.apply_1q(q[0], &rz(t)),
            GateKind::H => self.apply_1q(q[0], &hadamard()),
            GateKind::X => self.apply_pauli(q[0], Pauli::X),
            GateKind::Y => self.apply_pauli(q[0], Pauli::Y),
            GateKind::Z => self.apply_pauli(q[0], Pauli::Z),
            GateKind::Cz | GateKind::Ccz | GateKind::Ckz => self.controlled_phase(q, -ONE),
            GateKind::Cphase(t) => self.controlled_phase(q, C64::from_polar(1.0, t)),
            GateKind::Cnot => {
                self.apply_1q(q[1], &hadamard());
                self.controlled_phase(q, -ONE);
                self.apply_1q(q[1], &hadamard());
            }
            GateKind::Swap => self.swap(q[0], q[1]),
            GateKind::MeasureAll => {}
        }
    }

    /// Applies `gate` unless one of its operands has been lost, in which
    /// case the gate is skipped.
    pub fn apply_gate(&mut self, gate: &Gate) -> GateOutcome {
        if gate.qubits.iter().any(|&q| self.lost[q]) {
            return GateOutcome::LossShadow;
        }
        self.apply_unitary(gate);
        GateOutcome::Applied
    }

    /// Runs every gate of `c` from `|0…0⟩`.
    pub fn simulate(c: &Circuit) -> Self {
        let mut s = Self::zero(c.n_qubits());
        for g in c.gates() {
            s.apply_unitary(g);
        }
        s
    }

    /// Projects `q` onto `|outcome⟩` and renormalises.
    pub fn project(&mut self, q: usize, outcome: bool) {
        let bit = 1 << q;
        for (i, a) in self.amps.iter_mut().enumerate() {
            if (i & bit != 0) != outcome {
                *a = ZERO;
            }
        }
        self.renormalize();
    }

    /// Born-rule measurement of `q` that collapses the state.
    pub fn measure_qubit(&mut self, q: usize, rng: &mut impl Rng) -> bool {
        let p1 = self.prob_one(q);
        let outcome = rng.random::<f64>() < p1;
        self.project(q, outcome);
        outcome
    }

    /// Collapses `q` and marks it lost; later gates on it are skipped.
    pub fn mark_lost(&mut self, q: usize, rng: &mut impl Rng) {
        if !self.lost[q] {
            self.measure_qubit(q, rng);
            self.lost[q] = true;
        }
    }

    /// Samples a basis index from the output distribution.
    pub fn sample(&self, rng: &mut impl Rng) -> usize {
        sample_index(self.amps.iter().map(|a| a.norm_sqr()), rng)
    }
}

/// Inverse-CDF sampling over unnormalised weights.
pub fn sample_index(weights: impl Iterator<Item = f64> + Clone, rng: &mut impl Rng) -> usize {
    let total: f64 = weights.clone().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    last
}

/// Prints bit `q` of `index` at position `q`.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n)
        .map(|q| if index >> q & 1 == 1 { '1' } else { '0' })
        .collect()
}
