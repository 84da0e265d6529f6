use std::collections::BTreeMap;
use std::time::Duration;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::noise::{
    atom_loss, depolarize, idle_decoherence, sample_detunings, NoiseCounts, NoiseFlags, NoiseModel,
};
use super::state::{bitstring, sample_index, GateOutcome, StateVector, MAX_QUBITS};
use super::SimError;
use crate::circuit::Circuit;
use crate::prep::prepare_register;
use crate::profile::HardwareProfile;
use crate::rng::{stream, SimRng, Stream};
use crate::transpile::{
    transpile, RoutedOp, RoutingMode, Schedule, SwapCost, TimingReport, TranspileOptions,
    Transpiled,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub shots: u64,
    pub seed: u64,
    pub flags: NoiseFlags,
    /// Worker threads; 0 uses every available core.
    pub workers: usize,
    pub mode: RoutingMode,
    pub swap_cost: SwapCost,
    /// Preparation repeats allowed after the first attempt of each shot.
    pub max_retries: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            shots: 1000,
            seed: 0,
            flags: NoiseFlags::full(),
            workers: 0,
            mode: RoutingMode::Swap,
            swap_cost: SwapCost::Native,
            max_retries: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShotResult {
    /// Logical outcome, qubit `q` in bit `q`.
    pub outcome: usize,
    /// Preparation (all attempts) plus circuit and readout.
    pub elapsed: Duration,
    pub prep_attempts: usize,
    pub atoms_lost: usize,
    pub counts: NoiseCounts,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct PrepStats {
    pub attempts: u64,
    pub atoms_lost_in_transfer: u64,
    /// Mean simulated time per shot including every preparation attempt.
    pub mean_shot_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub n_qubits: usize,
    pub shots: u64,
    pub seed: u64,
    pub profile: String,
    pub profile_fingerprint: String,
    pub noise: NoiseFlags,
    pub histogram: BTreeMap<String, u64>,
    pub timing: TimingReport,
    pub noise_events: NoiseCounts,
    pub preparation: PrepStats,
    pub swaps_inserted: usize,
    pub shuttles_inserted: usize,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    pub fn count(&self, bits: &str) -> u64 {
        self.histogram.get(bits).copied().unwrap_or(0)
    }

    pub fn probability(&self, bits: &str) -> f64 {
        if self.shots == 0 {
            0.0
        } else {
            self.count(bits) as f64 / self.shots as f64
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Maps an atom-basis index to the logical basis: logical qubit `q` is
/// read from atom `perm[q]`.
pub fn to_logical(atom_index: usize, perm: &[usize]) -> usize {
    perm.iter()
        .enumerate()
        .fold(0, |acc, (q, &atom)| acc | (atom_index >> atom & 1) << q)
}

/// Runs every layer of `schedule` on `state` with the given noise.
pub fn execute_schedule(
    schedule: &Schedule,
    model: &NoiseModel,
    detunings: &[f64],
    state: &mut StateVector,
    rng: &mut SimRng,
    counts: &mut NoiseCounts,
) {
    let n = state.n_qubits();
    let mut busy = vec![false; n];
    for layer in schedule.circuit_layers() {
        let dt = layer.duration.as_secs_f64();
        busy.iter_mut().for_each(|b| *b = false);
        for op in &layer.ops {
            let RoutedOp::Gate { gate, .. } = &op.op else {
                continue;
            };
            gate.qubits.iter().for_each(|&q| busy[q] = true);
            match state.apply_gate(gate) {
                GateOutcome::LossShadow => counts.loss_shadowed_gates += 1,
                GateOutcome::Applied => {
                    let p = model.gate_error(gate.qubits.len());
                    if depolarize(state, &gate.qubits, p, rng) {
                        counts.pauli_errors += 1;
                    }
                }
            }
        }
        for q in (0..n).filter(|&q| !busy[q]) {
            idle_decoherence(state, q, dt, model, detunings[q], rng, counts);
        }
        if model.flags.loss {
            atom_loss(state, dt, model.trap_lifetime, rng, counts);
        }
    }
}

/// Readout of every atom: lost atoms are dark and read `1`; the others
/// flip with probability `1 − f_readout`. Returns the atom-basis index.
pub fn read_out(
    state: &StateVector,
    model: &NoiseModel,
    rng: &mut SimRng,
    counts: &mut NoiseCounts,
) -> usize {
    let mut index = state.sample(rng);
    let flip = model.readout_flip();
    for q in 0..state.n_qubits() {
        if state.is_lost(q) {
            index |= 1 << q;
        } else if flip > 0.0 && rng.random::<f64>() < flip {
            index ^= 1 << q;
            counts.readout_flips += 1;
        }
    }
    index
}

/// Noiseless logical output distribution of a scheduled circuit.
pub fn ideal_distribution(schedule: &Schedule) -> Vec<f64> {
    let n = schedule.n_atoms;
    let mut state = StateVector::zero(n);
    for layer in schedule.circuit_layers() {
        for op in &layer.ops {
            if let RoutedOp::Gate { gate, .. } = &op.op {
                state.apply_unitary(gate);
            }
        }
    }
    let mut out = vec![0.0; 1 << n];
    for (i, p) in state.probabilities().into_iter().enumerate() {
        out[to_logical(i, &schedule.output_permutation)] += p;
    }
    out
}

struct ShotContext<'a> {
    profile: &'a HardwareProfile,
    transpiled: &'a Transpiled,
    model: NoiseModel,
    config: &'a RunConfig,
    /// Ideal atom-basis distribution, used when no channel disturbs the
    /// state during the circuit.
    coherent: Option<Vec<f64>>,
}

impl ShotContext<'_> {
    fn shot(&self, index: u64) -> Result<ShotResult, SimError> {
        let n = self.transpiled.native.n_qubits();
        let mut prep_rng = stream(self.config.seed, Stream::Prep, index);
        let prep = prepare_register(self.profile, n, self.config.max_retries, &mut prep_rng)?;

        let mut rng = stream(self.config.seed, Stream::Circuit, index);
        let mut counts = NoiseCounts::default();
        let schedule = &self.transpiled.schedule;
        let atom_index = match &self.coherent {
            Some(probs) => {
                let mut idx = sample_index(probs.iter().copied(), &mut rng);
                let flip = self.model.readout_flip();
                for q in 0..n {
                    if flip > 0.0 && rng.random::<f64>() < flip {
                        idx ^= 1 << q;
                        counts.readout_flips += 1;
                    }
                }
                idx
            }
            None => {
                let detunings = sample_detunings(&self.model, n, &mut rng);
                let mut state = StateVector::zero(n);
                execute_schedule(
                    schedule,
                    &self.model,
                    &detunings,
                    &mut state,
                    &mut rng,
                    &mut counts,
                );
                read_out(&state, &self.model, &mut rng, &mut counts)
            }
        };
        let elapsed = prep.elapsed + schedule.circuit_duration() + self.profile.readout_time();
        Ok(ShotResult {
            outcome: to_logical(atom_index, &schedule.output_permutation),
            elapsed,
            prep_attempts: prep.attempts,
            atoms_lost: prep.atoms_lost_in_transfer,
            counts,
        })
    }
}

/// Simulates `n_shots` shots of an already transpiled circuit.
pub fn run_transpiled(
    transpiled: &Transpiled,
    profile: &HardwareProfile,
    config: &RunConfig,
) -> Result<RunReport, SimError> {
    let n = transpiled.native.n_qubits();
    if n > MAX_QUBITS {
        return Err(SimError::TooManyQubits { n, max: MAX_QUBITS });
    }
    let model = NoiseModel::from_profile(profile, config.flags);
    let coherent = config.flags.coherent().then(|| {
        let mut state = StateVector::zero(n);
        let mut counts = NoiseCounts::default();
        let mut unused = stream(config.seed, Stream::Circuit, u64::MAX);
        execute_schedule(
            &transpiled.schedule,
            &model,
            &vec![0.0; n],
            &mut state,
            &mut unused,
            &mut counts,
        );
        state.probabilities()
    });
    let ctx = ShotContext {
        profile,
        transpiled,
        model,
        config,
        coherent,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| SimError::ThreadPool(e.to_string()))?;
    let shots: Vec<ShotResult> = pool.install(|| {
        (0..config.shots)
            .into_par_iter()
            .map(|i| ctx.shot(i))
            .collect::<Result<_, _>>()
    })?;

    let mut histogram = BTreeMap::new();
    let mut noise_events = NoiseCounts::default();
    let mut prep = PrepStats::default();
    let mut total = Duration::ZERO;
    for s in &shots {
        *histogram.entry(bitstring(s.outcome, n)).or_insert(0) += 1;
        noise_events += s.counts;
        prep.attempts += s.prep_attempts as u64;
        prep.atoms_lost_in_transfer += s.atoms_lost as u64;
        total += s.elapsed;
    }
    if config.shots > 0 {
        prep.mean_shot_ms = total.as_nanos() as f64 / 1e6 / config.shots as f64;
    }

    let mut diagnostics = Vec::new();
    if !transpiled.native.measured() {
        diagnostics
            .push("no terminal `measure all`; every qubit is read out after the last gate".into());
    }
    if noise_events.atoms_lost > 0 {
        diagnostics.push(format!(
            "{} atom(s) lost during circuits read out as 1",
            noise_events.atoms_lost
        ));
    }

    Ok(RunReport {
        n_qubits: n,
        shots: config.shots,
        seed: config.seed,
        profile: profile.name.clone(),
        profile_fingerprint: profile.fingerprint(),
        noise: config.flags,
        histogram,
        timing: transpiled.timing(profile, config.shots),
        noise_events,
        preparation: prep,
        swaps_inserted: transpiled.routed.swaps_inserted,
        shuttles_inserted: transpiled.routed.shuttles_inserted,
        diagnostics,
    })
}

/// Full pipeline: transpile once, then per shot prepare the register,
/// execute the schedule as a noisy trajectory and read out.
pub fn run(
    c: &Circuit,
    profile: &HardwareProfile,
    config: &RunConfig,
) -> Result<RunReport, SimError> {
    if c.n_qubits() > MAX_QUBITS {
        return Err(SimError::TooManyQubits {
            n: c.n_qubits(),
            max: MAX_QUBITS,
        });
    }
    let transpiled = transpile(
        c,
        profile,
        TranspileOptions {
            mode: config.mode,
            swap_cost: config.swap_cost,
        },
    )?;
    run_transpiled(&transpiled, profile, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    fn bell() -> Circuit {
        parse_circuit("qubits 2\nh 0\ncnot 0 1\nmeasure all").unwrap()
    }

    #[test]
    fn to_logical_permutes_bits() {
        // logical 0 on atom 1, logical 1 on atom 0
        assert_eq!(to_logical(0b01, &[1, 0]), 0b10);
        assert_eq!(to_logical(0b11, &[1, 0]), 0b11);
    }

    #[test]
    fn noiseless_bell() {
        let p = HardwareProfile::rb87_2023();
        let cfg = RunConfig {
            shots: 2000,
            seed: 7,
            flags: NoiseFlags::off(),
            ..RunConfig::default()
        };
        let r = run(&bell(), &p, &cfg).unwrap();
        assert_eq!(r.histogram.values().sum::<u64>(), 2000);
        assert_eq!(r.count("01") + r.count("10"), 0);
        assert!((r.probability("00") - 0.5).abs() < 0.05);
    }

    #[test]
    fn forced_loss_reads_one() {
        let p = HardwareProfile::rb87_2023();
        let tr = transpile(&bell(), &p, TranspileOptions::default()).unwrap();
        let model = NoiseModel::from_profile(&p, NoiseFlags::off());
        let mut rng = crate::rng::from_seed(11);
        for _ in 0..200 {
            let mut s = StateVector::zero(2);
            let mut counts = NoiseCounts::default();
            execute_schedule(
                &tr.schedule,
                &model,
                &[0.0; 2],
                &mut s,
                &mut rng,
                &mut counts,
            );
            let atom0 = tr.schedule.output_permutation[0];
            s.mark_lost(atom0, &mut rng);
            let idx = to_logical(
                read_out(&s, &model, &mut rng, &mut counts),
                &tr.schedule.output_permutation,
            );
            assert_eq!(idx & 1, 1);
        }
    }

    #[test]
    fn too_many_qubits() {
        let p = HardwareProfile::rb87_2023();
        let c = Circuit::new(21);
        assert!(matches!(
            run(&c, &p, &RunConfig::default()),
            Err(SimError::TooManyQubits { .. })
        ));
    }
}
