//! As-soon-as-possible layering under the platform's parallelism rules.
//!
//! * A single-qubit layer applies one rotation (same axis, same angle) to a
//!   set of atoms.
//! * CZ and SWAP layers hold disjoint pairs. Each pair is within one
//!   blockade radius and atoms of different pairs are further apart than
//!   one radius, so the pairs do not blockade each other.
//! * Multi-controlled gates, shuttle moves and the final measurement each
//!   take a layer of their own.

use std::time::Duration;

use serde::Serialize;

use super::route::{RoutedCircuit, RoutedOp};
use crate::circuit::GateKind;
use crate::lattice::{within_radius, ConnectivityGraph, Site};
use crate::profile::HardwareProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LayerKind {
    /// Carries the shared rotation, including its angle.
    SingleQubit(GateKind),
    Cz,
    Swap,
    Ckz,
    Shuttle,
    Measure,
}

impl LayerKind {
    pub fn label(&self) -> &'static str {
        match self {
            LayerKind::SingleQubit(_) => "sq",
            LayerKind::Cz => "cz",
            LayerKind::Swap => "swap",
            LayerKind::Ckz => "ckz",
            LayerKind::Shuttle => "shuttle",
            LayerKind::Measure => "measure",
        }
    }
}

/// One operation inside a layer, with the geometry it ran at.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerOp {
    pub atoms: Vec<usize>,
    pub positions: Vec<[f64; 2]>,
    pub sites: Vec<Site>,
    /// The routed operation this entry came from.
    pub op: RoutedOp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub kind: LayerKind,
    pub ops: Vec<LayerOp>,
    pub duration: Duration,
}

impl Layer {
    pub fn atoms(&self) -> impl Iterator<Item = usize> + '_ {
        self.ops.iter().flat_map(|o| o.atoms.iter().copied())
    }
}

/// How long a SWAP takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwapCost {
    /// One native operation lasting `t_2q`.
    #[default]
    Native,
    /// Three CZ-equivalent durations.
    ThreeCz,
}

#[derive(Debug, Clone)]
pub struct Schedule {
    pub n_atoms: usize,
    pub layers: Vec<Layer>,
    pub output_permutation: Vec<usize>,
    pub radius_um: f64,
}

impl Schedule {
    /// Layers that run on the quantum register, i.e. everything but readout.
    pub fn circuit_layers(&self) -> impl Iterator<Item = &Layer> {
        self.layers.iter().filter(|l| l.kind != LayerKind::Measure)
    }

    /// Sum of all non-readout layer durations.
    pub fn circuit_duration(&self) -> Duration {
        self.circuit_layers().map(|l| l.duration).sum()
    }

    pub fn depth(&self) -> usize {
        self.circuit_layers().count()
    }

    pub fn to_document(&self) -> ScheduleDocument {
        ScheduleDocument {
            layers: self
                .layers
                .iter()
                .map(|l| LayerDocument {
                    kind: l.kind.label(),
                    gate: match l.kind {
                        LayerKind::SingleQubit(k) => Some(k.name()),
                        _ => None,
                    },
                    angle: match l.kind {
                        LayerKind::SingleQubit(k) => k.angle(),
                        _ => None,
                    },
                    operands: l
                        .ops
                        .iter()
                        .map(|o| o.sites.iter().map(|s| [s.row, s.col]).collect())
                        .collect(),
                    duration_us: l.duration.as_nanos() as f64 / 1e3,
                })
                .collect(),
            output_permutation: self.output_permutation.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ScheduleDocument {
    pub layers: Vec<LayerDocument>,
    pub output_permutation: Vec<usize>,
}

/// Operands are `[row, col]` site coordinates; shuttle entries list the
/// source then the destination site.
#[derive(Debug, Serialize)]
pub struct LayerDocument {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gate: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    pub operands: Vec<Vec<[usize; 2]>>,
    pub duration_us: f64,
}

fn layer_kind(op: &RoutedOp) -> LayerKind {
    match op {
        RoutedOp::Shuttle { .. } => LayerKind::Shuttle,
        RoutedOp::Gate { gate, .. } => match gate.kind {
            k @ (GateKind::Rx(_) | GateKind::Ry(_) | GateKind::Rz(_)) => LayerKind::SingleQubit(k),
            GateKind::Cz => LayerKind::Cz,
            GateKind::Swap => LayerKind::Swap,
            GateKind::Ccz | GateKind::Ckz => LayerKind::Ckz,
            GateKind::MeasureAll => LayerKind::Measure,
            other => unreachable!("non-native `{}` reached the scheduler", other.name()),
        },
    }
}

fn layer_duration(
    kind: LayerKind,
    op: &RoutedOp,
    profile: &HardwareProfile,
    swap: SwapCost,
) -> Duration {
    match kind {
        LayerKind::SingleQubit(_) => profile.single_qubit_gate_time(),
        LayerKind::Cz | LayerKind::Ckz => profile.two_qubit_gate_time(),
        LayerKind::Swap => match swap {
            SwapCost::Native => profile.two_qubit_gate_time(),
            SwapCost::ThreeCz => 3 * profile.two_qubit_gate_time(),
        },
        LayerKind::Shuttle => match op {
            RoutedOp::Shuttle { distance_um, .. } => profile.shuttle_time(*distance_um),
            _ => unreachable!(),
        },
        LayerKind::Measure => profile.readout_time(),
    }
}

/// Whether `op` may join `layer`.
fn fits(layer: &Layer, kind: LayerKind, op: &LayerOp, radius_um: f64) -> bool {
    if layer.kind != kind || layer.atoms().any(|a| op.atoms.contains(&a)) {
        return false;
    }
    match kind {
        LayerKind::SingleQubit(_) => true,
        LayerKind::Cz | LayerKind::Swap => layer.ops.iter().all(|other| {
            other.positions.iter().all(|&p| {
                op.positions
                    .iter()
                    .all(|&q| !within_radius(p, q, radius_um))
            })
        }),
        LayerKind::Ckz | LayerKind::Shuttle | LayerKind::Measure => false,
    }
}

fn layer_op(op: &RoutedOp, graph: &ConnectivityGraph) -> LayerOp {
    let nodes: Vec<usize> = match op {
        RoutedOp::Gate { nodes, .. } => nodes.clone(),
        RoutedOp::Shuttle { from, to, .. } => vec![*from, *to],
    };
    let atoms = match op {
        RoutedOp::Gate { gate, .. } => gate.qubits.clone(),
        RoutedOp::Shuttle { atom, .. } => vec![*atom],
    };
    let positions = match op {
        RoutedOp::Gate { .. } => nodes.iter().map(|&v| graph.position(v)).collect(),
        // A moving atom has no fixed position; none is used by the rules.
        RoutedOp::Shuttle { .. } => Vec::new(),
    };
    LayerOp {
        atoms,
        positions,
        sites: nodes.iter().map(|&v| graph.site(v)).collect(),
        op: op.clone(),
    }
}

/// Greedy ASAP layering without lookahead. Each operation goes into the
/// earliest compatible layer after the last layer touching any of its
/// atoms, or opens a new layer at the end.
pub fn schedule(
    routed: &RoutedCircuit,
    graph: &ConnectivityGraph,
    profile: &HardwareProfile,
    swap_cost: SwapCost,
) -> Schedule {
    let radius_um = graph.radius_um();
    let n = routed.n_qubits;
    let mut ready = vec![0usize; n];
    let mut layers: Vec<Layer> = Vec::new();

    for op in &routed.ops {
        let kind = layer_kind(op);
        let entry = layer_op(op, graph);
        let atoms = if kind == LayerKind::Measure {
            (0..n).collect()
        } else {
            entry.atoms.clone()
        };
        let earliest = if kind == LayerKind::Measure {
            layers.len()
        } else {
            atoms.iter().map(|&a| ready[a]).max().unwrap_or(0)
        };
        let slot = (earliest..layers.len()).find(|&l| fits(&layers[l], kind, &entry, radius_um));
        let index = match slot {
            Some(l) => {
                layers[l].ops.push(entry);
                l
            }
            None => {
                layers.push(Layer {
                    kind,
                    duration: layer_duration(kind, op, profile, swap_cost),
                    ops: vec![entry],
                });
                layers.len() - 1
            }
        };
        for a in atoms {
            ready[a] = index + 1;
        }
    }

    Schedule {
        n_atoms: n,
        layers,
        output_permutation: routed.output_permutation.clone(),
        radius_um,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayerViolation {
    pub layer: usize,
    pub reason: String,
}

/// Re-checks every layer rule on an emitted schedule by direct geometry.
pub fn audit_schedule(s: &Schedule) -> Result<(), LayerViolation> {
    let fail = |layer, reason: &str| {
        Err(LayerViolation {
            layer,
            reason: reason.to_string(),
        })
    };
    let r = s.radius_um;
    for (i, layer) in s.layers.iter().enumerate() {
        let atoms: Vec<usize> = layer.atoms().collect();
        let mut dedup = atoms.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != atoms.len() {
            return fail(i, "atom appears twice in a layer");
        }
        if layer.ops.is_empty() {
            return fail(i, "empty layer");
        }
        match layer.kind {
            LayerKind::SingleQubit(k) => {
                for o in &layer.ops {
                    match &o.op {
                        RoutedOp::Gate { gate, .. } if gate.kind == k && o.atoms.len() == 1 => {}
                        _ => return fail(i, "single-qubit layer mixes gate kinds or angles"),
                    }
                }
            }
            LayerKind::Cz | LayerKind::Swap => {
                for (a, o) in layer.ops.iter().enumerate() {
                    if o.positions.len() != 2 || !within_radius(o.positions[0], o.positions[1], r) {
                        return fail(i, "pair not within the blockade radius");
                    }
                    for other in &layer.ops[a + 1..] {
                        for &p in &o.positions {
                            for &q in &other.positions {
                                if within_radius(p, q, r) {
                                    return fail(i, "pairs blockade each other");
                                }
                            }
                        }
                    }
                }
            }
            LayerKind::Ckz => {
                if layer.ops.len() != 1 {
                    return fail(i, "more than one multi-qubit tuple");
                }
                let p = &layer.ops[0].positions;
                for a in 0..p.len() {
                    for b in a + 1..p.len() {
                        if !within_radius(p[a], p[b], r) {
                            return fail(i, "tuple not pairwise within the blockade radius");
                        }
                    }
                }
            }
            LayerKind::Shuttle => {
                if layer.ops.len() != 1 {
                    return fail(i, "more than one shuttle move");
                }
            }
            LayerKind::Measure => {
                if i + 1 != s.layers.len() {
                    return fail(i, "measurement is not the last layer");
                }
            }
        }
    }
    Ok(())
}
