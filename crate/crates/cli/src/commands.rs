use std::fmt::Write as _;
use std::path::Path;

use naq_core::analog::{
    brute_force_mis, max_stable_dt, sample_mis, AtomLayout, SweepSchedule, MAX_BRUTE_FORCE,
};
use naq_core::bench::{clops_report, ghz_sweep, qv_heavy_output, BenchReport, Sampler};
use naq_core::circuit::{lower_to_native, parse_circuit, validate};
use naq_core::prep::prepare_register;
use naq_core::rng::{stream, Stream};
use naq_core::sim::{run, RunConfig};
use naq_core::transpile::{transpile, SwapCost, TranspileOptions};
use naq_core::Circuit;
use serde_json::json;

use crate::output::{emit, load_profile, read, to_pretty, write_atomic};
use crate::{
    BenchArgs, Cli, CliError, Command, MisArgs, ParseArgs, PrepareArgs, ProfileCommand, RunArgs,
    Suite, TranspileArgs, DEFAULT_PROFILE,
};

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Profile(cmd) => profile(cli.json, cmd),
        Command::Parse(args) => parse(cli.json, args),
        Command::Prepare(args) => prepare(cli.json, args),
        Command::Transpile(args) => transpile_cmd(cli.json, args),
        Command::Run(args) => run_cmd(cli.json, args),
        Command::Mis(args) => mis(cli.json, args),
        Command::Bench(args) => bench(cli.json, args),
    }
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    let text = read(path)?;
    parse_circuit(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

fn profile(json: bool, cmd: &ProfileCommand) -> Result<(), CliError> {
    let (spec, show) = match cmd {
        ProfileCommand::Validate { profile } => (profile, false),
        ProfileCommand::Show { profile } => (profile, true),
    };
    let spec = spec
        .clone()
        .or_else(|| std::env::var("NAQ_PROFILE").ok())
        .unwrap_or_else(|| DEFAULT_PROFILE.to_string());
    let p = load_profile(&spec)?;
    let document = if show {
        to_pretty(&p)
    } else {
        to_pretty(&json!({
            "valid": true,
            "name": p.name,
            "fingerprint": p.fingerprint(),
        }))
    };
    let human = if show {
        document.clone()
    } else {
        format!("{}: valid (fingerprint {})\n", p.name, p.fingerprint())
    };
    emit(json, None, &document, &human)
}

fn parse(json: bool, args: &ParseArgs) -> Result<(), CliError> {
    let c = load_circuit(&args.circuit)?;
    let p = load_profile(&args.profile.profile)?;
    let diagnostics: Vec<String> = validate(&c, &p).iter().map(ToString::to_string).collect();
    let lowered = lower_to_native(&c);
    let document = to_pretty(&json!({
        "qubits": c.n_qubits(),
        "gates": c.len(),
        "native": c.is_native(),
        "measured": c.measured(),
        "native_gates": lowered.len(),
        "diagnostics": diagnostics,
        "lowered": args.lower.then(|| lowered.to_text()),
    }));
    let mut human = format!(
        "{}: {} qubits, {} gates ({} after lowering)\n",
        args.circuit.display(),
        c.n_qubits(),
        c.len(),
        lowered.len()
    );
    for d in &diagnostics {
        writeln!(human, "warning: {d}").expect("string write");
    }
    if args.lower {
        human.push_str(&lowered.to_text());
    }
    emit(json, args.out.as_deref(), &document, &human)
}

fn prepare(json: bool, args: &PrepareArgs) -> Result<(), CliError> {
    let p = load_profile(&args.profile.profile)?;
    let mut rng = stream(args.seed, Stream::Prep, 0);
    let out = prepare_register(&p, args.qubits, args.max_retries, &mut rng)?;
    let lattice = &p.lattice;
    let grid: Vec<String> = (0..lattice.rows)
        .map(|r| {
            (0..lattice.cols)
                .map(|c| {
                    let s = naq_core::Site::new(r, c);
                    match (out.targets.contains(&s), out.occupancy.is_occupied(s)) {
                        (true, true) => 'Q',
                        (true, false) => 'x',
                        (false, true) => 'o',
                        (false, false) => '.',
                    }
                })
                .collect()
        })
        .collect();
    let document = to_pretty(&json!({
        "profile": p.name,
        "profile_fingerprint": p.fingerprint(),
        "seed": args.seed,
        "qubits": args.qubits,
        "defect_free": out.defect_free,
        "attempts": out.attempts,
        "elapsed_ms": out.elapsed_ms(),
        "moves_executed": out.moves_executed,
        "atoms_lost_in_transfer": out.atoms_lost_in_transfer,
        "targets": out.targets,
        "grid": grid,
    }));
    let human = format!(
        "{} qubits: defect free after {} attempt(s), {:.3} ms, {} moves\n{}\n",
        args.qubits,
        out.attempts,
        out.elapsed_ms(),
        out.moves_executed,
        grid.join("\n")
    );
    emit(json, args.out.as_deref(), &document, &human)
}

fn transpile_cmd(json: bool, args: &TranspileArgs) -> Result<(), CliError> {
    let c = load_circuit(&args.circuit)?;
    let p = load_profile(&args.profile.profile)?;
    let options = TranspileOptions {
        mode: args.mode,
        swap_cost: if args.swap_as_three_cz {
            SwapCost::ThreeCz
        } else {
            SwapCost::Native
        },
    };
    let tr = transpile(&c, &p, options)?;
    let shots = args.shots.unwrap_or(1);
    let timing = tr.timing(&p, shots);
    if let Some(path) = &args.emit_schedule {
        write_atomic(path, &to_pretty(&tr.schedule.to_document()))?;
    }
    let placement: Vec<naq_core::Site> = tr
        .placement
        .nodes
        .iter()
        .map(|&v| tr.graph.site(v))
        .collect();
    let document = to_pretty(&json!({
        "profile": p.name,
        "profile_fingerprint": p.fingerprint(),
        "mode": args.mode,
        "qubits": c.n_qubits(),
        "native_gates": tr.native.len(),
        "placement": placement,
        "swaps_inserted": tr.routed.swaps_inserted,
        "shuttles_inserted": tr.routed.shuttles_inserted,
        "depth": tr.schedule.depth(),
        "output_permutation": tr.schedule.output_permutation,
        "timing": timing,
    }));
    if let Some(path) = &args.report {
        write_atomic(path, &document)?;
    }
    let human = format!(
        "{} qubits, {} native gates -> {} layers ({} SWAPs, {} shuttles)\n\
         t_circuit {:.3} µs, t_shot {:.6} ms, {} shot(s) {:.6} s, compile {:.3} ms\n",
        c.n_qubits(),
        tr.native.len(),
        tr.schedule.depth(),
        tr.routed.swaps_inserted,
        tr.routed.shuttles_inserted,
        timing.t_circuit_us(),
        timing.t_shot_ms(),
        shots,
        timing.t_total_s(),
        timing.t_compile_ms(),
    );
    emit(json, None, &document, &human)
}

fn run_cmd(json: bool, args: &RunArgs) -> Result<(), CliError> {
    let c = load_circuit(&args.circuit)?;
    let p = load_profile(&args.profile.profile)?;
    let config = RunConfig {
        shots: args.shots,
        seed: args.seed,
        flags: args.noise,
        workers: args.workers,
        mode: args.mode,
        max_retries: args.max_retries,
        ..RunConfig::default()
    };
    let report = run(&c, &p, &config)?;
    let mut document = report.to_json();
    document.push('\n');
    let mut human = String::new();
    let mut rows: Vec<(&String, &u64)> = report.histogram.iter().collect();
    rows.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
    for (bits, count) in rows.iter().take(16) {
        writeln!(
            human,
            "{bits}  {count:>8}  {:.4}",
            **count as f64 / report.shots.max(1) as f64
        )
        .expect("string write");
    }
    if rows.len() > 16 {
        writeln!(human, "... {} more outcomes", rows.len() - 16).expect("string write");
    }
    writeln!(
        human,
        "{} shots, t_shot {:.6} ms, total {:.3} s (model), {} SWAPs, {} shuttles",
        report.shots,
        report.timing.t_shot_ms(),
        report.timing.t_total_s(),
        report.swaps_inserted,
        report.shuttles_inserted
    )
    .expect("string write");
    for d in &report.diagnostics {
        writeln!(human, "warning: {d}").expect("string write");
    }
    emit(json, args.out.as_deref(), &document, &human)
}

fn mis(json: bool, args: &MisArgs) -> Result<(), CliError> {
    let text = read(&args.positions)?;
    let positions: Vec<[f64; 2]> =
        serde_json::from_str(&text).map_err(|source| CliError::Document {
            path: args.positions.clone(),
            source,
        })?;
    let layout = AtomLayout::with_exponent(positions, args.rb, args.omega, args.exponent)?;
    let sweep = SweepSchedule::default_mis(args.sweep_time, args.omega)?;
    let dt = args.dt.unwrap_or_else(|| max_stable_dt(&layout, &sweep));
    let graph = layout.unit_disk_graph();
    let mut rng = stream(args.seed, Stream::Analog, 0);
    let sample = sample_mis(&layout, &sweep, dt, args.shots, &mut rng)?;
    let oracle = if layout.len() <= MAX_BRUTE_FORCE {
        Some(brute_force_mis(&graph)?.0)
    } else {
        None
    };
    let document = to_pretty(&json!({
        "n_atoms": layout.len(),
        "blockade_radius": args.rb,
        "omega": args.omega,
        "sweep_time": args.sweep_time,
        "dt": dt,
        "seed": args.seed,
        "edges": graph.edges(),
        "sets": sample.sets,
        "repaired_shots": sample.repaired_shots,
        "best": sample.best,
        "best_size": sample.best_size,
        "mean_size": sample.mean_size,
        "oracle_size": oracle,
        "max_norm_drift": sample.max_norm_drift,
    }));
    let oracle_text = oracle.map_or("n/a".to_string(), |s| s.to_string());
    let human = format!(
        "{} atoms, {} edges: best set {:?} (size {}, optimum {}), mean size {:.3}, {} of {} shots repaired\n",
        layout.len(),
        graph.edges().len(),
        sample.best,
        sample.best_size,
        oracle_text,
        sample.mean_size,
        sample.repaired_shots,
        args.shots,
    );
    emit(json, args.out.as_deref(), &document, &human)
}

fn bench(json: bool, args: &BenchArgs) -> Result<(), CliError> {
    let p = load_profile(&args.profile.profile)?;
    let widths = &args.widths.0;
    let reports: Vec<BenchReport> = match args.suite {
        Suite::Ghz => vec![ghz_sweep(&p, widths, args.shots, args.seed, args.noise)?],
        Suite::Qv => widths
            .iter()
            .map(|&w| {
                qv_heavy_output(
                    &p,
                    w,
                    w,
                    args.circuits,
                    args.shots,
                    args.seed,
                    Sampler::Simulator(args.noise),
                )
            })
            .collect::<Result<_, _>>()?,
        Suite::Clops => widths
            .iter()
            .map(|&w| clops_report(&p, w, args.layers, args.shots))
            .collect::<Result<_, _>>()?,
    };
    let document: String = reports.iter().map(BenchReport::to_jsonl).collect();
    if let Some(path) = &args.csv {
        let mut csv = String::from("width,depth,metric\n");
        for r in &reports {
            csv.extend(r.to_csv().lines().skip(1).map(|l| format!("{l}\n")));
        }
        write_atomic(path, &csv)?;
    }
    let mut human = String::from("width  depth  metric\n");
    for r in &reports {
        for rec in &r.records {
            writeln!(
                human,
                "{:>5}  {:>5}  {:.6}",
                rec.width, rec.depth, rec.metric
            )
            .expect("string write");
        }
        if let Some(passed) = r.summary.passed {
            writeln!(
                human,
                "{} mean {:.4}: {}",
                r.summary.suite,
                r.summary.mean_metric.unwrap_or(f64::NAN),
                if passed { "pass" } else { "fail" }
            )
            .expect("string write");
        }
    }
    emit(json, args.out.as_deref(), &document, &human)
}
