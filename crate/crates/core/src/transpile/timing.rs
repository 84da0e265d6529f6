//! Wall-clock model of one job: every shot re-prepares the register, runs
//! the circuit and images the array.

use std::time::Duration;

use serde::Serialize;

use super::schedule::Schedule;
use crate::profile::HardwareProfile;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "TimingDocument")]
pub struct TimingReport {
    /// Host time spent transpiling (measured, not modelled).
    pub t_compile: Duration,
    pub t_prep: Duration,
    pub t_circuit: Duration,
    pub t_readout: Duration,
    /// `t_prep + t_circuit + t_readout`.
    pub t_shot: Duration,
    pub n_shots: u64,
    /// `n_shots · t_shot`.
    pub t_total: Duration,
    /// Circuit layers, readout excluded.
    pub layers: usize,
    /// `layers / t_shot`.
    pub layers_per_second: f64,
}

impl TimingReport {
    pub fn t_compile_ms(&self) -> f64 {
        self.t_compile.as_nanos() as f64 / 1e6
    }

    pub fn t_circuit_us(&self) -> f64 {
        self.t_circuit.as_nanos() as f64 / 1e3
    }

    pub fn t_shot_ms(&self) -> f64 {
        self.t_shot.as_nanos() as f64 / 1e6
    }

    pub fn t_total_s(&self) -> f64 {
        self.t_total.as_nanos() as f64 / 1e9
    }

    /// Total including compilation.
    pub fn t_total_with_compile(&self) -> Duration {
        self.t_total + self.t_compile
    }

    pub fn with_compile_time(mut self, t: Duration) -> Self {
        self.t_compile = t;
        self
    }
}

#[derive(Debug, Serialize)]
struct TimingDocument {
    t_compile_ms: f64,
    t_prep_ms: f64,
    t_circuit_us: f64,
    t_readout_ms: f64,
    t_shot_ms: f64,
    n_shots: u64,
    t_total_s: f64,
    layers: usize,
    layers_per_second: f64,
}

impl From<TimingReport> for TimingDocument {
    fn from(r: TimingReport) -> Self {
        Self {
            t_compile_ms: r.t_compile_ms(),
            t_prep_ms: r.t_prep.as_nanos() as f64 / 1e6,
            t_circuit_us: r.t_circuit_us(),
            t_readout_ms: r.t_readout.as_nanos() as f64 / 1e6,
            t_shot_ms: r.t_shot_ms(),
            n_shots: r.n_shots,
            t_total_s: r.t_total_s(),
            layers: r.layers,
            layers_per_second: r.layers_per_second,
        }
    }
}

/// Timing from per-layer durations and the profile's preparation and
/// readout times.
pub fn timing_from_parts(
    t_circuit: Duration,
    layers: usize,
    profile: &HardwareProfile,
    n_shots: u64,
) -> TimingReport {
    let t_prep = profile.prep_time();
    let t_readout = profile.readout_time();
    let t_shot = t_prep + t_circuit + t_readout;
    let t_total = Duration::from_nanos(
        u64::try_from(t_shot.as_nanos() * n_shots as u128).expect("total time fits in u64 ns"),
    );
    TimingReport {
        t_compile: Duration::ZERO,
        t_prep,
        t_circuit,
        t_readout,
        t_shot,
        n_shots,
        t_total,
        layers,
        layers_per_second: layers as f64 / t_shot.as_secs_f64(),
    }
}

pub fn estimate_wall_clock(s: &Schedule, profile: &HardwareProfile, n_shots: u64) -> TimingReport {
    timing_from_parts(s.circuit_duration(), s.depth(), profile, n_shots)
}
