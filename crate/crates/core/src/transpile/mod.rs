//! Mapping logical circuits onto the prepared register.
//!
//! [`transpile`] chains the stages: structural validation, lowering,
//! placement on the target block, routing, scheduling.

mod place;
mod route;
mod schedule;
mod timing;

use std::time::{Duration, Instant};

use thiserror::Error;

pub use place::{place, place_on, Placement};
pub use route::{route, RoutedCircuit, RoutedOp, RoutingMode};
pub use schedule::{
    audit_schedule, schedule, Layer, LayerKind, LayerOp, LayerViolation, Schedule,
    ScheduleDocument, SwapCost,
};
pub use timing::{estimate_wall_clock, timing_from_parts, TimingReport};

use crate::circuit::{lower_to_native, validate, Circuit, Diagnostic};
use crate::lattice::{build_connectivity, ConnectivityError, ConnectivityGraph, Site};
use crate::prep::target_region;
use crate::profile::HardwareProfile;

#[derive(Debug, Error)]
pub enum TranspileError {
    #[error("register too small: {qubits} qubits on {sites} sites")]
    RegisterTooSmall { qubits: usize, sites: usize },
    #[error("no path between nodes {from} and {to} in the connectivity graph")]
    Disconnected { from: usize, to: usize },
    #[error("no free trap next to node {near} to shuttle into")]
    NoFreeSite { near: usize },
    #[error("no {size} sites are pairwise within the blockade radius")]
    NoClique { size: usize },
    #[error("gate `{0}` is not native; lower the circuit first")]
    NotNative(&'static str),
    #[error("placement covers {placement} qubits, circuit has {qubits}")]
    PlacementSize { placement: usize, qubits: usize },
    #[error("circuit rejected: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Diagnostic>),
    #[error(transparent)]
    Connectivity(#[from] ConnectivityError),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TranspileOptions {
    pub mode: RoutingMode,
    pub swap_cost: SwapCost,
}

/// Result of the full pipeline.
#[derive(Debug, Clone)]
pub struct Transpiled {
    pub native: Circuit,
    /// Target block filled by register preparation.
    pub targets: Vec<Site>,
    pub graph: ConnectivityGraph,
    pub placement: Placement,
    pub routed: RoutedCircuit,
    pub schedule: Schedule,
    pub t_compile: Duration,
}

impl Transpiled {
    pub fn timing(&self, profile: &HardwareProfile, n_shots: u64) -> TimingReport {
        estimate_wall_clock(&self.schedule, profile, n_shots).with_compile_time(self.t_compile)
    }
}

/// Validates, lowers, places, routes and schedules `c` for `profile`.
///
/// Swap routing works on the blockade graph of the target block. Shuttle
/// routing sees the whole lattice so atoms have free traps to move into,
/// with the initial placement still confined to the target block.
pub fn transpile(
    c: &Circuit,
    profile: &HardwareProfile,
    options: TranspileOptions,
) -> Result<Transpiled, TranspileError> {
    let start = Instant::now();
    let diagnostics = validate(c, profile);
    if !diagnostics.is_empty() {
        return Err(TranspileError::Invalid(diagnostics));
    }
    let native = lower_to_native(c);
    let targets = target_region(&profile.lattice, c.n_qubits());
    let (graph, placement) = match options.mode {
        RoutingMode::Swap => {
            let graph = build_connectivity(profile, &targets)?;
            let placement = place(&native, &graph)?;
            (graph, placement)
        }
        RoutingMode::Shuttle => {
            let graph = build_connectivity(profile, &profile.lattice.sites())?;
            let allowed: Vec<usize> = targets
                .iter()
                .map(|&s| graph.node_of(s).expect("target on lattice"))
                .collect();
            let placement = place_on(&native, &graph, &allowed)?;
            (graph, placement)
        }
    };
    let routed = route(&native, &placement, &graph, options.mode)?;
    let schedule = schedule(&routed, &graph, profile, options.swap_cost);
    Ok(Transpiled {
        native,
        targets,
        graph,
        placement,
        routed,
        schedule,
        t_compile: start.elapsed(),
    })
}
