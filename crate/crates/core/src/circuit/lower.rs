//! Lowering to the native gate set `{rx, ry, rz, cz, ccz, ckz, swap,
//! measure}`. Every rewrite is exact up to a global phase.

use std::f64::consts::{FRAC_PI_2, PI};

use super::gate::{Circuit, Gate, GateKind};

fn hadamard(q: usize, out: &mut Vec<Gate>) {
    out.push(Gate::rz(q, FRAC_PI_2));
    out.push(Gate::rx(q, FRAC_PI_2));
    out.push(Gate::rz(q, FRAC_PI_2));
}

fn cnot(control: usize, target: usize, out: &mut Vec<Gate>) {
    hadamard(target, out);
    out.push(Gate::cz(control, target));
    hadamard(target, out);
}

fn lower_gate(g: &Gate, out: &mut Vec<Gate>) {
    let q = &g.qubits;
    match g.kind {
        GateKind::H => hadamard(q[0], out),
        GateKind::X => out.push(Gate::rx(q[0], PI)),
        GateKind::Y => out.push(Gate::ry(q[0], PI)),
        GateKind::Z => out.push(Gate::rz(q[0], PI)),
        GateKind::Cnot => cnot(q[0], q[1], out),
        GateKind::Cphase(theta) => {
            let (a, b) = (q[0], q[1]);
            out.push(Gate::rz(a, theta / 2.0));
            cnot(a, b, out);
            out.push(Gate::rz(b, -theta / 2.0));
            cnot(a, b, out);
            out.push(Gate::rz(b, theta / 2.0));
        }
        _ => {
            debug_assert!(g.kind.is_native());
            out.push(g.clone());
        }
    }
}

/// Rewrites every non-native gate in terms of native ones.
pub fn lower_to_native(c: &Circuit) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    for g in c.gates() {
        lower_gate(g, &mut gates);
    }
    Circuit::from_gates(c.n_qubits(), gates).expect("lowering preserves operand validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cnot_expansion() {
        let c = Circuit::from_gates(2, [Gate::cnot(0, 1)]).unwrap();
        let l = lower_to_native(&c);
        let h = [
            Gate::rz(1, FRAC_PI_2),
            Gate::rx(1, FRAC_PI_2),
            Gate::rz(1, FRAC_PI_2),
        ];
        let mut expected = h.to_vec();
        expected.push(Gate::cz(0, 1));
        expected.extend(h);
        assert_eq!(l.gates(), expected.as_slice());
    }

    #[test]
    fn native_circuit_unchanged() {
        let c = Circuit::from_gates(
            3,
            [
                Gate::rx(0, 0.3),
                Gate::cz(0, 1),
                Gate::new(GateKind::Ccz, [0, 1, 2]),
                Gate::swap(1, 2),
                Gate::measure_all(),
            ],
        )
        .unwrap();
        assert_eq!(lower_to_native(&c), c);
    }

    #[test]
    fn paulis_become_pi_rotations() {
        let c = Circuit::from_gates(
            1,
            [
                Gate::new(GateKind::X, [0]),
                Gate::new(GateKind::Y, [0]),
                Gate::new(GateKind::Z, [0]),
            ],
        )
        .unwrap();
        assert_eq!(
            lower_to_native(&c).gates(),
            &[Gate::rx(0, PI), Gate::ry(0, PI), Gate::rz(0, PI)]
        );
    }
}
