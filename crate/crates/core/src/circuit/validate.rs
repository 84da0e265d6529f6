//! Structural checks of a circuit against a machine profile.

use std::fmt;

use serde::Serialize;

use super::gate::{Circuit, GateKind};
use crate::profile::HardwareProfile;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Diagnostic {
    CapacityExceeded {
        n_qubits: usize,
        capacity: usize,
    },
    MidCircuitMeasurement {
        gate_index: usize,
    },
    /// A multi-qubit phase gate with more operands than any set of sites
    /// that lie pairwise within one blockade radius.
    GateNotPlaceable {
        gate_index: usize,
        operands: usize,
        max_clique: usize,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::CapacityExceeded { n_qubits, capacity } => {
                write!(f, "circuit uses {n_qubits} qubits, capacity is {capacity}")
            }
            Diagnostic::MidCircuitMeasurement { gate_index } => write!(
                f,
                "gate {gate_index}: terminal measurement only (measure all must be last)"
            ),
            Diagnostic::GateNotPlaceable {
                gate_index,
                operands,
                max_clique,
            } => write!(
                f,
                "gate {gate_index}: {operands} operands cannot be mutually within one blockade radius (at most {max_clique})"
            ),
        }
    }
}

/// Largest set of square-lattice sites that are pairwise within
/// `radius_sites` lattice spacings.
pub fn max_blockade_clique(radius_sites: f64) -> usize {
    let r = radius_sites.floor() as i64;
    let r2 = radius_sites * radius_sites * (1.0 + 1e-9);
    let close = |a: (i64, i64), b: (i64, i64)| {
        let (dx, dy) = ((a.0 - b.0) as f64, (a.1 - b.1) as f64);
        dx * dx + dy * dy <= r2
    };
    // Translate so the clique contains the origin; the rest lie in its disc.
    let disc: Vec<(i64, i64)> = (-r..=r)
        .flat_map(|x| (-r..=r).map(move |y| (x, y)))
        .filter(|&p| p != (0, 0) && close(p, (0, 0)))
        .collect();

    fn grow(
        disc: &[(i64, i64)],
        from: usize,
        chosen: &mut Vec<(i64, i64)>,
        best: &mut usize,
        close: &dyn Fn((i64, i64), (i64, i64)) -> bool,
    ) {
        *best = (*best).max(chosen.len() + 1);
        if chosen.len() + 1 + (disc.len() - from) <= *best {
            return;
        }
        for i in from..disc.len() {
            if chosen.iter().all(|&c| close(c, disc[i])) {
                chosen.push(disc[i]);
                grow(disc, i + 1, chosen, best, close);
                chosen.pop();
            }
        }
    }

    let mut best = 1;
    grow(&disc, 0, &mut Vec::new(), &mut best, &close);
    best
}

/// Reports problems that would stop the circuit from running on `profile`.
/// Only structural facts are checked here; geometry against an actual
/// placement is enforced by the router.
pub fn validate(c: &Circuit, profile: &HardwareProfile) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if c.n_qubits() > profile.qubit_capacity {
        out.push(Diagnostic::CapacityExceeded {
            n_qubits: c.n_qubits(),
            capacity: profile.qubit_capacity,
        });
    }
    let last = c.len().saturating_sub(1);
    let mut max_clique = None;
    for (i, g) in c.gates().iter().enumerate() {
        if g.kind == GateKind::MeasureAll && i != last {
            out.push(Diagnostic::MidCircuitMeasurement { gate_index: i });
        }
        if g.kind.is_entangling() && g.qubits.len() > 2 {
            let limit = *max_clique
                .get_or_insert_with(|| max_blockade_clique(profile.blockade_radius_sites));
            if g.qubits.len() > limit {
                out.push(Diagnostic::GateNotPlaceable {
                    gate_index: i,
                    operands: g.qubits.len(),
                    max_clique: limit,
                });
            }
        }
    }
    out
}
