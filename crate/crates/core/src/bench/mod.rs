//! Benchmark suites over the simulated backend.
//!
//! Every instance gets its own seed, derived from the master seed and the
//! instance index, so a single record can be reproduced from
//! `(suite, width, depth, seed, profile)` alone.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::profile::HardwareProfile;
use crate::rng::{split, stream, Stream};
use crate::sim::{bitstring, run, NoiseFlags, RunConfig, SimError, StateVector, MAX_QUBITS};
use crate::transpile::{transpile, TranspileError, TranspileOptions};

/// Heavy-output probability a backend must exceed.
pub const HEAVY_OUTPUT_THRESHOLD: f64 = 2.0 / 3.0;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("heavy-output circuits must be square, got width {width} and depth {depth}")]
    NotSquare { width: usize, depth: usize },
    #[error("width {width} outside 1..={max}")]
    BadWidth { width: usize, max: usize },
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Transpile(#[from] TranspileError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub suite: String,
    pub index: usize,
    pub width: usize,
    pub depth: usize,
    pub metric: f64,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub suite: String,
    pub profile: String,
    pub profile_fingerprint: String,
    pub master_seed: u64,
    pub records: usize,
    /// Modelled machine time of every shot in the suite, seconds.
    pub model_time_s: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_metric: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub passed: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchReport {
    pub summary: BenchSummary,
    pub records: Vec<BenchRecord>,
}

impl BenchReport {
    fn new(
        suite: &str,
        profile: &HardwareProfile,
        master_seed: u64,
        records: Vec<BenchRecord>,
        model_time: Duration,
    ) -> Self {
        Self {
            summary: BenchSummary {
                suite: suite.to_string(),
                profile: profile.name.clone(),
                profile_fingerprint: profile.fingerprint(),
                master_seed,
                records: records.len(),
                model_time_s: model_time.as_secs_f64(),
                mean_metric: None,
                passed: None,
            },
            records,
        }
    }

    /// One JSON object per record followed by the summary object.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serializes"));
            out.push('\n');
        }
        out.push_str(&serde_json::to_string(&self.summary).expect("summary serializes"));
        out.push('\n');
        out
    }

    /// Plot data: `width,depth,metric` per record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("width,depth,metric\n");
        for r in &self.records {
            writeln!(out, "{},{},{}", r.width, r.depth, r.metric).expect("string write");
        }
        out
    }
}

/// Seed of instance `index` under `master`.
pub fn instance_seed(master: u64, index: usize) -> u64 {
    split(master, Stream::Instance, index as u64)
}

fn check_width(width: usize) -> Result<(), BenchError> {
    if width == 0 || width > MAX_QUBITS {
        Err(BenchError::BadWidth {
            width,
            max: MAX_QUBITS,
        })
    } else {
        Ok(())
    }
}

/// `h 0; cnot 0 1; …; cnot n−2 n−1; measure all`.
pub fn ghz_circuit(n: usize) -> Circuit {
    let mut gates = vec![Gate::h(0)];
    gates.extend((1..n).map(|q| Gate::cnot(q - 1, q)));
    gates.push(Gate::measure_all());
    Circuit::from_gates(n, gates).expect("valid GHZ circuit")
}

/// `P(0ⁿ) + P(1ⁿ)` of one GHZ instance.
pub fn ghz_instance(
    profile: &HardwareProfile,
    width: usize,
    shots: u64,
    seed: u64,
    flags: NoiseFlags,
) -> Result<(f64, Duration), BenchError> {
    check_width(width)?;
    let config = RunConfig {
        shots,
        seed,
        flags,
        workers: 1,
        ..RunConfig::default()
    };
    let report = run(&ghz_circuit(width), profile, &config)?;
    let metric = report.probability(&"0".repeat(width)) + report.probability(&"1".repeat(width));
    Ok((metric, report.timing.t_total))
}

/// GHZ fidelity proxy for each width.
pub fn ghz_sweep(
    profile: &HardwareProfile,
    widths: &[usize],
    shots: u64,
    seed: u64,
    flags: NoiseFlags,
) -> Result<BenchReport, BenchError> {
    let results: Vec<(BenchRecord, Duration)> = widths
        .par_iter()
        .enumerate()
        .map(|(index, &width)| {
            let s = instance_seed(seed, index);
            let (metric, t) = ghz_instance(profile, width, shots, s, flags)?;
            Ok((
                BenchRecord {
                    suite: "ghz".into(),
                    index,
                    width,
                    depth: width,
                    metric,
                    shots,
                    seed: s,
                },
                t,
            ))
        })
        .collect::<Result<_, BenchError>>()?;
    let model: Duration = results.iter().map(|(_, t)| *t).sum();
    let records = results.into_iter().map(|(r, _)| r).collect();
    Ok(BenchReport::new("ghz", profile, seed, records, model))
}

/// Random native circuit: `depth` rounds of a random rotation on every
/// qubit followed by CZs on a random disjoint pairing, then `measure all`.
pub fn random_native_circuit(width: usize, depth: usize, seed: u64) -> Circuit {
    let mut rng = stream(seed, Stream::Instance, 0);
    let mut gates = Vec::new();
    let mut order: Vec<usize> = (0..width).collect();
    for _ in 0..depth {
        for q in 0..width {
            let angle = rng.random::<f64>() * TAU;
            gates.push(match rng.random_range(0..3) {
                0 => Gate::rx(q, angle),
                1 => Gate::ry(q, angle),
                _ => Gate::rz(q, angle),
            });
        }
        order.shuffle(&mut rng);
        for pair in order.chunks_exact(2) {
            gates.push(Gate::cz(pair[0], pair[1]));
        }
    }
    gates.push(Gate::measure_all());
    Circuit::from_gates(width, gates).expect("valid random circuit")
}

/// Outcomes whose ideal probability exceeds the median, as a mask over
/// basis indices.
pub fn heavy_set(c: &Circuit) -> Vec<bool> {
    let probs = StateVector::simulate(c).probabilities();
    let mut sorted = probs.clone();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    let median = if m.is_multiple_of(2) {
        (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
    } else {
        sorted[m / 2]
    };
    probs.iter().map(|&p| p > median).collect()
}

/// Source of output samples for the heavy-output suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    Simulator(NoiseFlags),
    /// Uniformly random bitstrings, i.e. a fully depolarized backend.
    Uniform,
}

/// Fraction of `shots` samples that land in the heavy set of circuit
/// `seed`.
pub fn heavy_output_instance(
    profile: &HardwareProfile,
    width: usize,
    depth: usize,
    shots: u64,
    seed: u64,
    sampler: Sampler,
) -> Result<(f64, Duration), BenchError> {
    check_width(width)?;
    let c = random_native_circuit(width, depth, seed);
    let heavy = heavy_set(&c);
    let index_of = |bits: &str| {
        bits.chars()
            .enumerate()
            .fold(0usize, |acc, (q, ch)| acc | usize::from(ch == '1') << q)
    };
    match sampler {
        Sampler::Simulator(flags) => {
            let config = RunConfig {
                shots,
                seed,
                flags,
                workers: 1,
                ..RunConfig::default()
            };
            let report = run(&c, profile, &config)?;
            let hits: u64 = report
                .histogram
                .iter()
                .filter(|(bits, _)| heavy[index_of(bits)])
                .map(|(_, &n)| n)
                .sum();
            Ok((hits as f64 / shots.max(1) as f64, report.timing.t_total))
        }
        Sampler::Uniform => {
            let mut rng = stream(seed, Stream::Circuit, 0);
            let hits = (0..shots)
                .filter(|_| {
                    let bits = bitstring(rng.random_range(0..1usize << width), width);
                    heavy[index_of(&bits)]
                })
                .count();
            Ok((hits as f64 / shots.max(1) as f64, Duration::ZERO))
        }
    }
}

/// Heavy-output suite on `n_circuits` square random circuits.
///
/// Passes when the mean heavy-output fraction `h` exceeds 2/3 with
/// `h − 2σ > 2/3`, `σ = √(h(1 − h)/n_circuits)`.
pub fn qv_heavy_output(
    profile: &HardwareProfile,
    width: usize,
    depth: usize,
    n_circuits: usize,
    shots: u64,
    seed: u64,
    sampler: Sampler,
) -> Result<BenchReport, BenchError> {
    if width != depth {
        return Err(BenchError::NotSquare { width, depth });
    }
    check_width(width)?;
    let results: Vec<(BenchRecord, Duration)> = (0..n_circuits)
        .into_par_iter()
        .map(|index| {
            let s = instance_seed(seed, index);
            let (metric, t) = heavy_output_instance(profile, width, depth, shots, s, sampler)?;
            Ok((
                BenchRecord {
                    suite: "qv".into(),
                    index,
                    width,
                    depth,
                    metric,
                    shots,
                    seed: s,
                },
                t,
            ))
        })
        .collect::<Result<_, BenchError>>()?;
    let model: Duration = results.iter().map(|(_, t)| *t).sum();
    let records: Vec<BenchRecord> = results.into_iter().map(|(r, _)| r).collect();
    let mut report = BenchReport::new("qv", profile, seed, records, model);
    if n_circuits > 0 {
        let h = report.records.iter().map(|r| r.metric).sum::<f64>() / n_circuits as f64;
        let sigma = (h * (1.0 - h) / n_circuits as f64).sqrt();
        report.summary.mean_metric = Some(h);
        report.summary.passed = Some(h - 2.0 * sigma > HEAVY_OUTPUT_THRESHOLD);
    }
    Ok(report)
}

/// Template circuit: `layers` rounds of one shared `rx` on every qubit and
/// CZs on alternating neighbour pairs.
pub fn clops_template(width: usize, layers: usize) -> Circuit {
    let mut gates = Vec::new();
    for l in 0..layers {
        let theta = 0.1 + l as f64 * 0.01;
        gates.extend((0..width).map(|q| Gate::new(GateKind::Rx(theta), [q])));
        gates.extend(
            (l % 2..width.saturating_sub(1))
                .step_by(2)
                .map(|q| Gate::cz(q, q + 1)),
        );
    }
    gates.push(Gate::measure_all());
    Circuit::from_gates(width, gates).expect("valid template")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClopsMetric {
    /// `template_layers · n_shots / t_total` from the timing model.
    pub layers_per_second: f64,
    pub template_layers: usize,
    pub n_shots: u64,
    pub t_total_s: f64,
    /// Host time spent transpiling the template, not part of the metric.
    pub host_seconds: f64,
}

/// Model throughput in template layers per second.
pub fn clops_metric(
    profile: &HardwareProfile,
    template_width: usize,
    template_layers: usize,
    n_shots: u64,
) -> Result<ClopsMetric, BenchError> {
    check_width(template_width)?;
    let start = Instant::now();
    let tr = transpile(
        &clops_template(template_width, template_layers),
        profile,
        TranspileOptions::default(),
    )?;
    let host_seconds = start.elapsed().as_secs_f64();
    let timing = tr.timing(profile, n_shots);
    let t_total = timing.t_total.as_secs_f64();
    Ok(ClopsMetric {
        layers_per_second: (template_layers as f64 * n_shots as f64) / t_total,
        template_layers,
        n_shots,
        t_total_s: t_total,
        host_seconds,
    })
}

/// Report with one record holding the CLOPS value.
pub fn clops_report(
    profile: &HardwareProfile,
    template_width: usize,
    template_layers: usize,
    n_shots: u64,
) -> Result<BenchReport, BenchError> {
    let m = clops_metric(profile, template_width, template_layers, n_shots)?;
    let record = BenchRecord {
        suite: "clops".into(),
        index: 0,
        width: template_width,
        depth: template_layers,
        metric: m.layers_per_second,
        shots: n_shots,
        seed: 0,
    };
    let mut report = BenchReport::new(
        "clops",
        profile,
        0,
        vec![record],
        Duration::from_secs_f64(m.t_total_s),
    );
    report.summary.mean_metric = Some(m.layers_per_second);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_noiseless_is_perfect() {
        let p = HardwareProfile::rb87_2023();
        let r = ghz_sweep(&p, &[2, 3, 4], 500, 1, NoiseFlags::off()).unwrap();
        assert_eq!(r.records.len(), 3);
        assert!(r.records.iter().all(|rec| rec.metric == 1.0));
    }

    #[test]
    fn ghz_record_is_reproducible() {
        let p = HardwareProfile::rb87_2023();
        let r = ghz_sweep(&p, &[2, 3], 300, 9, NoiseFlags::full()).unwrap();
        let rec = &r.records[1];
        let (m, _) = ghz_instance(&p, rec.width, rec.shots, rec.seed, NoiseFlags::full()).unwrap();
        assert_eq!(m, rec.metric);
    }

    #[test]
    fn heavy_set_is_half() {
        let c = random_native_circuit(3, 3, 4);
        assert_eq!(heavy_set(&c).iter().filter(|&&h| h).count(), 4);
    }

    #[test]
    fn square_required() {
        let p = HardwareProfile::rb87_2023();
        assert!(matches!(
            qv_heavy_output(&p, 2, 3, 1, 10, 0, Sampler::Uniform),
            Err(BenchError::NotSquare { .. })
        ));
    }

    #[test]
    fn clops_prep_dominated() {
        let p = HardwareProfile::rb87_2023();
        let one = clops_metric(&p, 4, 100, 1).unwrap();
        assert!((one.layers_per_second - 100.0 / 0.410).abs() / (100.0 / 0.410) < 0.01);
        let two = clops_metric(&p, 4, 100, 2).unwrap();
        assert!((one.layers_per_second - two.layers_per_second).abs() < 1e-9);
    }

    #[test]
    fn csv_mirrors_records() {
        let p = HardwareProfile::rb87_2023();
        let r = ghz_sweep(&p, &[2, 3], 10, 0, NoiseFlags::off()).unwrap();
        assert_eq!(r.to_csv(), "width,depth,metric\n2,2,1\n3,3,1\n");
        assert_eq!(r.to_jsonl().lines().count(), 3);
    }
}
