//! Independent dense-matrix oracles and instance generators shared by the
//! integration tests.
#![allow(dead_code)]

use nalgebra::{Complex, DMatrix, DVector};
use naq_core::analog::AtomLayout;
use naq_core::rng::{stream, SimRng, Stream};
use naq_core::transpile::{RoutedOp, Schedule};
use naq_core::{Circuit, Gate, GateKind};
use rand::Rng;

pub type C = Complex<f64>;
pub type M = DMatrix<C>;

pub fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

/// Embeds a 2×2 matrix on qubit `q` of `n`; qubit `q` is bit `q` of the
/// basis index, so higher qubits sit further left in the Kronecker product.
pub fn embed_1q(u: &M, q: usize, n: usize) -> M {
    let left = M::identity(1 << (n - 1 - q), 1 << (n - 1 - q));
    let right = M::identity(1 << q, 1 << q);
    left.kronecker(u).kronecker(&right)
}

/// Matrix of the basis map `|x⟩ → |f(x)⟩`.
pub fn basis_map(n: usize, f: impl Fn(usize) -> usize) -> M {
    let dim = 1 << n;
    let mut m = M::zeros(dim, dim);
    for x in 0..dim {
        m[(f(x), x)] = c(1.0, 0.0);
    }
    m
}

pub fn diagonal(n: usize, f: impl Fn(usize) -> C) -> M {
    let dim = 1 << n;
    M::from_diagonal(&DVector::from_iterator(dim, (0..dim).map(f)))
}

fn bit(x: usize, q: usize) -> bool {
    x >> q & 1 == 1
}

pub fn gate_unitary(g: &Gate, n: usize) -> M {
    let q = &g.qubits;
    let one_q = |m: [[C; 2]; 2]| {
        let u = M::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]]);
        embed_1q(&u, q[0], n)
    };
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match g.kind {
        GateKind::Rx(t) => {
            let (a, b) = ((t / 2.0).cos(), (t / 2.0).sin());
            one_q([[c(a, 0.0), c(0.0, -b)], [c(0.0, -b), c(a, 0.0)]])
        }
        GateKind::Ry(t) => {
            let (a, b) = ((t / 2.0).cos(), (t / 2.0).sin());
            one_q([[c(a, 0.0), c(-b, 0.0)], [c(b, 0.0), c(a, 0.0)]])
        }
        GateKind::Rz(t) => one_q([
            [Complex::from_polar(1.0, -t / 2.0), c(0.0, 0.0)],
            [c(0.0, 0.0), Complex::from_polar(1.0, t / 2.0)],
        ]),
        GateKind::H => one_q([[c(s, 0.0), c(s, 0.0)], [c(s, 0.0), c(-s, 0.0)]]),
        GateKind::X => basis_map(n, |x| x ^ 1 << q[0]),
        GateKind::Y => one_q([[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]]),
        GateKind::Z => diagonal(n, |x| c(if bit(x, q[0]) { -1.0 } else { 1.0 }, 0.0)),
        GateKind::Cz | GateKind::Ccz | GateKind::Ckz => diagonal(n, |x| {
            c(
                if q.iter().all(|&k| bit(x, k)) {
                    -1.0
                } else {
                    1.0
                },
                0.0,
            )
        }),
        GateKind::Cphase(t) => diagonal(n, |x| {
            if q.iter().all(|&k| bit(x, k)) {
                Complex::from_polar(1.0, t)
            } else {
                c(1.0, 0.0)
            }
        }),
        GateKind::Cnot => basis_map(n, |x| if bit(x, q[0]) { x ^ 1 << q[1] } else { x }),
        GateKind::Swap => basis_map(n, |x| {
            let (a, b) = (bit(x, q[0]), bit(x, q[1]));
            let mut y = x & !(1 << q[0]) & !(1 << q[1]);
            if a {
                y |= 1 << q[1];
            }
            if b {
                y |= 1 << q[0];
            }
            y
        }),
        GateKind::MeasureAll => M::identity(1 << n, 1 << n),
    }
}

pub fn circuit_unitary(circuit: &Circuit) -> M {
    let n = circuit.n_qubits();
    circuit
        .gates()
        .iter()
        .fold(M::identity(1 << n, 1 << n), |u, g| gate_unitary(g, n) * u)
}

/// Unitary of every gate in a schedule, in layer order, on atoms.
pub fn schedule_unitary(s: &Schedule) -> M {
    let n = s.n_atoms;
    let mut u = M::identity(1 << n, 1 << n);
    for layer in &s.layers {
        for op in &layer.ops {
            if let RoutedOp::Gate { gate, .. } = &op.op {
                u = gate_unitary(gate, n) * u;
            }
        }
    }
    u
}

/// Logical basis state `x` to the atom basis, logical qubit `q` living on
/// atom `perm[q]`.
pub fn permutation(perm: &[usize], n: usize) -> M {
    basis_map(n, |x| {
        perm.iter()
            .enumerate()
            .fold(0, |acc, (q, &atom)| acc | usize::from(bit(x, q)) << atom)
    })
}

/// `min_φ max |a − e^{iφ} b|` using the phase of the largest entry.
pub fn phase_distance(a: &M, b: &M) -> f64 {
    let (mut k, mut best) = ((0, 0), 0.0);
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if a[(i, j)].norm() > best {
                best = a[(i, j)].norm();
                k = (i, j);
            }
        }
    }
    if b[k].norm() == 0.0 {
        return f64::INFINITY;
    }
    let phase = a[k] / b[k];
    let phase = phase / phase.norm();
    (a - b * phase).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Output distribution of `U|0…0⟩`.
pub fn distribution(u: &M) -> Vec<f64> {
    (0..u.nrows()).map(|i| u[(i, 0)].norm_sqr()).collect()
}

/// Random circuit of `len` gates drawn from `kinds` on `n` qubits.
pub fn random_circuit(rng: &mut SimRng, n: usize, len: usize, kinds: &[&str]) -> Circuit {
    let mut gates = Vec::new();
    while gates.len() < len {
        let kind = kinds[rng.random_range(0..kinds.len())];
        let angle = rng.random_range(-3.2..3.2);
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.random_range(0..=i));
        }
        let (k, arity) = match kind {
            "rx" => (GateKind::Rx(angle), 1),
            "ry" => (GateKind::Ry(angle), 1),
            "rz" => (GateKind::Rz(angle), 1),
            "h" => (GateKind::H, 1),
            "x" => (GateKind::X, 1),
            "y" => (GateKind::Y, 1),
            "z" => (GateKind::Z, 1),
            "cz" => (GateKind::Cz, 2),
            "cnot" => (GateKind::Cnot, 2),
            "swap" => (GateKind::Swap, 2),
            "cphase" => (GateKind::Cphase(angle), 2),
            "ccz" => (GateKind::Ccz, 3),
            "ckz" => (GateKind::Ckz, rng.random_range(2..=n.max(2))),
            other => panic!("unknown kind {other}"),
        };
        if arity > n {
            continue;
        }
        qubits.truncate(arity);
        gates.push(Gate::new(k, qubits));
    }
    if rng.random_bool(0.5) {
        gates.push(Gate::measure_all());
    }
    Circuit::from_gates(n, gates).expect("valid random circuit")
}

pub const ALL_KINDS: [&str; 13] = [
    "rx", "ry", "rz", "h", "x", "y", "z", "cz", "cnot", "swap", "cphase", "ccz", "ckz",
];
pub const PAIR_KINDS: [&str; 11] = [
    "rx", "ry", "rz", "h", "x", "y", "z", "cz", "cnot", "swap", "cphase",
];

/// Random unit-disk layout of `n` atoms: pairwise distances at least
/// `0.7·R_b` and none in `(0.85, 1.15)·R_b`, so every edge is strongly
/// blockaded and every non-edge weakly interacting.
pub fn random_unit_disk(n: usize, seed: u64, rb: f64, omega: f64) -> AtomLayout {
    let mut rng = stream(seed, Stream::Instance, n as u64);
    let side = (n as f64).sqrt() * 0.8 * rb;
    let mut pts: Vec<[f64; 2]> = Vec::new();
    let mut tries = 0;
    while pts.len() < n {
        tries += 1;
        if tries > 10_000 {
            pts.clear();
            tries = 0;
        }
        let p = [rng.random::<f64>() * side, rng.random::<f64>() * side];
        let ok = pts.iter().all(|q| {
            let d = (p[0] - q[0]).hypot(p[1] - q[1]) / rb;
            d >= 0.7 && !(d > 0.85 && d < 1.15)
        });
        if ok {
            pts.push(p);
        }
    }
    AtomLayout::new(pts, rb, omega).expect("valid layout")
}

/// Haar-random pure state on `n` qubits.
pub fn haar_state(n: usize, rng: &mut SimRng) -> Vec<C> {
    use rand_distr::{Distribution, StandardNormal};
    let v: Vec<C> = (0..1 << n)
        .map(|_| c(StandardNormal.sample(rng), StandardNormal.sample(rng)))
        .collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Exhaustive maximum independent set size over all `2^n` subsets.
pub fn exhaustive_mis(n: usize, edges: &[(usize, usize)]) -> usize {
    (0u32..1 << n)
        .filter(|&s| {
            edges
                .iter()
                .all(|&(a, b)| !(s >> a & 1 == 1 && s >> b & 1 == 1))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Mean and standard error of `xs`.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
