//! Command execution. Validation happens before anything is written to
//! standard output, so a failing invocation never leaves a partial
//! transcript behind. Trials fan out over worker threads, each trial on its
//! own RNG stream derived from (seed, trial index), and results are emitted
//! in trial order, so the output bytes do not depend on the thread count.

use std::io::{self, Write};

use qsdc_core::{
    detection_probability_oracle, distribute_epr, qsdc_send_message, random_unknown_qubit,
    teleport_cnot, teleport_standard, verify_channel, EveModel, Message, ResourceCounts, SimRng,
    TeleportResult, Transcript, Verdict, VerificationConfig,
};

use crate::args::{Cli, Command, CommonArgs, Format, QsdcArgs, TrialArgs, VerifyStatsArgs};

/// Runs a parsed invocation, writing the report to `out`. Returns the
/// process exit code: 0 on success/Pass, 1 on usage errors (reported to
/// standard error), 2 when verification detects tampering.
pub fn execute(cli: Cli, out: &mut dyn Write) -> io::Result<i32> {
    match cli.command {
        Command::Teleport(args) => run_teleport(false, args, out),
        Command::TeleportStd(args) => run_teleport(true, args, out),
        Command::Qsdc(args) => run_qsdc(args, out),
        Command::VerifyStats(args) => run_verify_stats(args, out),
    }
}

fn usage_error(msg: &str) -> io::Result<i32> {
    eprintln!("error: {msg}");
    Ok(1)
}

fn resolve_seed(common: &CommonArgs) -> u64 {
    if common.entropy {
        let nanos = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_nanos() as u64)
            .unwrap_or(0);
        nanos ^ (u64::from(std::process::id()) << 32)
    } else {
        common.seed
    }
}

/// Splits `0..trials` into contiguous chunks, one worker thread per chunk,
/// and feeds results to `emit` in trial order while later chunks are still
/// computing.
fn fan_out<T: Send>(
    trials: u32,
    threads: usize,
    job: impl Fn(u32) -> T + Sync,
    mut emit: impl FnMut(u32, T) -> io::Result<()>,
) -> io::Result<()> {
    let threads = threads.clamp(1, trials.max(1) as usize);
    let chunk = (trials as usize).div_ceil(threads);
    std::thread::scope(|scope| {
        let job = &job;
        let mut handles = Vec::new();
        for w in 0..threads {
            let start = (w * chunk) as u32;
            let end = (((w + 1) * chunk).min(trials as usize)) as u32;
            if start >= end {
                break;
            }
            handles.push((
                start,
                scope.spawn(move || (start..end).map(job).collect::<Vec<T>>()),
            ));
        }
        for (start, handle) in handles {
            let items = handle.join().expect("worker thread panicked");
            for (offset, item) in items.into_iter().enumerate() {
                emit(start + offset as u32, item)?;
            }
        }
        Ok(())
    })
}

fn run_teleport(standard: bool, args: TrialArgs, out: &mut dyn Write) -> io::Result<i32> {
    if args.trials < 1 {
        return usage_error("--trials must be at least 1");
    }
    if args.threads < 1 {
        return usage_error("--threads must be at least 1");
    }
    let seed = resolve_seed(&args.common);
    let structured = args.common.format == Format::Structured;
    let command = if standard { "teleport-std" } else { "teleport" };

    let mut min_fidelity = f64::INFINITY;
    let mut fidelity_sum = 0.0;
    let mut counts: Option<ResourceCounts> = None;
    fan_out(
        args.trials,
        args.threads,
        |trial| -> TeleportResult {
            let mut rng = SimRng::for_run(seed, u64::from(trial));
            let input = random_unknown_qubit(&mut rng);
            let run = if standard {
                teleport_standard(&input, &mut rng)
            } else {
                teleport_cnot(&input, &mut rng)
            };
            run.expect("teleportation of a valid payload cannot fail")
        },
        |trial, result| {
            min_fidelity = min_fidelity.min(result.fidelity_vs_input);
            fidelity_sum += result.fidelity_vs_input;
            if counts.is_none() {
                counts = Some(result.transcript.resource_counts());
            }
            if structured {
                writeln!(out, "run {trial}")?;
                out.write_all(result.transcript.to_text().as_bytes())?;
            }
            Ok(())
        },
    )?;
    let counts = counts.expect("at least one trial ran");
    let mean_fidelity = fidelity_sum / f64::from(args.trials);

    // The two-particle method's counters, for the side-by-side comparison.
    let cnot_counts = if standard {
        let mut rng = SimRng::for_run(seed, u64::from(args.trials));
        let input = random_unknown_qubit(&mut rng);
        Some(
            teleport_cnot(&input, &mut rng)
                .expect("teleportation of a valid payload cannot fail")
                .transcript
                .resource_counts(),
        )
    } else {
        None
    };

    if structured {
        write!(
            out,
            "summary command={command} seed={seed} trials={} min_fidelity={} mean_fidelity={} \
             qubits_sent={} classical_bits_sent={} particles={} receipt_acks={}",
            args.trials,
            min_fidelity,
            mean_fidelity,
            counts.qubits_sent,
            counts.classical_bits_sent,
            counts.particles_total,
            counts.receipt_acks,
        )?;
        if let Some(c) = cnot_counts {
            write!(
                out,
                " cnot_qubits_sent={} cnot_classical_bits_sent={} cnot_particles={}",
                c.qubits_sent, c.classical_bits_sent, c.particles_total
            )?;
        }
        writeln!(out)?;
    } else {
        writeln!(out, "command: {command}")?;
        writeln!(out, "seed: {seed}")?;
        writeln!(out, "trials: {}", args.trials)?;
        writeln!(out, "min fidelity: {min_fidelity:.12}")?;
        writeln!(out, "mean fidelity: {mean_fidelity:.12}")?;
        writeln!(out, "qubits sent per run: {}", counts.qubits_sent)?;
        writeln!(
            out,
            "classical bits per run: {}",
            counts.classical_bits_sent
        )?;
        writeln!(out, "particles per run: {}", counts.particles_total)?;
        writeln!(out, "receipt acks per run: {}", counts.receipt_acks)?;
        if let Some(c) = cnot_counts {
            writeln!(out, "resource comparison (per run):")?;
            writeln!(out, "  metric           cnot  standard")?;
            writeln!(
                out,
                "  qubits sent      {:>4}  {:>8}",
                c.qubits_sent, counts.qubits_sent
            )?;
            writeln!(
                out,
                "  classical bits   {:>4}  {:>8}",
                c.classical_bits_sent, counts.classical_bits_sent
            )?;
            writeln!(
                out,
                "  particles        {:>4}  {:>8}",
                c.particles_total, counts.particles_total
            )?;
        }
    }
    Ok(0)
}

/// Smallest `n` whose post-verification survivor count covers the message.
fn pairs_needed(message_len: usize, fraction: f64) -> usize {
    let checked = |n: usize| ((fraction * n as f64).ceil() as usize).clamp(1, n);
    let mut n = message_len + 1;
    while n - checked(n) < message_len {
        n += 1;
    }
    n
}

fn run_qsdc(args: QsdcArgs, out: &mut dyn Write) -> io::Result<i32> {
    let message: Message = match args.message.parse() {
        Ok(m) => m,
        Err(_) => return usage_error("--message must be a nonempty string of 0s and 1s"),
    };
    if message.is_empty() {
        return usage_error("--message must be a nonempty string of 0s and 1s");
    }
    if !(args.sample_fraction > 0.0 && args.sample_fraction < 1.0) {
        return usage_error("--sample-fraction must lie strictly between 0 and 1");
    }
    let seed = resolve_seed(&args.common);
    let structured = args.common.format == Format::Structured;
    let eve: EveModel = args.eve.to_model();
    let cfg = VerificationConfig {
        sample_fraction: args.sample_fraction,
        ..Default::default()
    };

    let mut rng = SimRng::for_run(seed, 0);
    let mut transcript = Transcript::new();
    let n = pairs_needed(message.len(), args.sample_fraction);
    let pairs = distribute_epr(n, eve, &mut rng, &mut transcript);
    let (report, survivors) =
        verify_channel(pairs, &cfg, &mut rng).expect("verification inputs were validated");
    transcript.push(report.to_event());

    if report.verdict == Verdict::TamperingDetected {
        if structured {
            writeln!(out, "run 0")?;
            out.write_all(transcript.to_text().as_bytes())?;
            writeln!(
                out,
                "summary command=qsdc seed={seed} eve={eve} message={message} pairs={n} \
                 checked={} mismatches={} qber={} verdict={}",
                report.pairs_checked, report.mismatches, report.qber_estimate, report.verdict
            )?;
        } else {
            writeln!(out, "command: qsdc")?;
            writeln!(out, "seed: {seed}")?;
            writeln!(out, "eve: {eve}")?;
            writeln!(out, "message: {message}")?;
            writeln!(out, "pairs distributed: {n}")?;
            writeln!(out, "pairs checked: {}", report.pairs_checked)?;
            writeln!(out, "mismatches: {}", report.mismatches)?;
            writeln!(out, "qber: {:.6}", report.qber_estimate)?;
            writeln!(out, "verdict: {}", report.verdict)?;
            writeln!(out, "pairs discarded; nothing sent")?;
        }
        return Ok(2);
    }

    let result = qsdc_send_message(&message, survivors, &mut rng, transcript)
        .expect("verified survivors cover the message");
    let bit_errors = result
        .decoded
        .bits()
        .iter()
        .zip(message.bits())
        .filter(|(a, b)| a != b)
        .count();

    if structured {
        writeln!(out, "run 0")?;
        out.write_all(result.transcript.to_text().as_bytes())?;
        writeln!(
            out,
            "summary command=qsdc seed={seed} eve={eve} message={message} pairs={n} checked={} \
             mismatches={} qber={} verdict={} decoded={} bit_errors={bit_errors}",
            report.pairs_checked,
            report.mismatches,
            report.qber_estimate,
            report.verdict,
            result.decoded,
        )?;
    } else {
        writeln!(out, "command: qsdc")?;
        writeln!(out, "seed: {seed}")?;
        writeln!(out, "eve: {eve}")?;
        writeln!(out, "message: {message}")?;
        writeln!(out, "pairs distributed: {n}")?;
        writeln!(out, "pairs checked: {}", report.pairs_checked)?;
        writeln!(out, "mismatches: {}", report.mismatches)?;
        writeln!(out, "qber: {:.6}", report.qber_estimate)?;
        writeln!(out, "verdict: {}", report.verdict)?;
        writeln!(out, "decoded: {}", result.decoded)?;
        writeln!(out, "bit errors: {bit_errors}")?;
        writeln!(
            out,
            "message classical bits: {}",
            result.transcript.resource_counts().classical_bits_sent
        )?;
    }
    Ok(0)
}

fn run_verify_stats(args: VerifyStatsArgs, out: &mut dyn Write) -> io::Result<i32> {
    if args.trials < 1 {
        return usage_error("--trials must be at least 1");
    }
    if args.threads < 1 {
        return usage_error("--threads must be at least 1");
    }
    if !(args.sample_fraction > 0.0 && args.sample_fraction < 1.0) {
        return usage_error("--sample-fraction must lie strictly between 0 and 1");
    }
    let eve = args.eve.to_model();
    if eve == EveModel::None {
        return usage_error(
            "verify-stats needs an active eavesdropper model (--eve intercept-z or intercept-rand)",
        );
    }
    let seed = resolve_seed(&args.common);
    let cfg = VerificationConfig {
        sample_fraction: args.sample_fraction,
        ..Default::default()
    };
    let oracle = detection_probability_oracle(eve, &cfg).expect("active model has an oracle value");

    let mut mismatches: u64 = 0;
    fan_out(
        args.trials,
        args.threads,
        |trial| -> u64 {
            let mut rng = SimRng::for_run(seed, u64::from(trial));
            let mut t = Transcript::new();
            let pairs = distribute_epr(1, eve, &mut rng, &mut t);
            let (report, _) =
                verify_channel(pairs, &cfg, &mut rng).expect("one fresh pair is valid input");
            report.mismatches as u64
        },
        |_, m| {
            mismatches += m;
            Ok(())
        },
    )?;

    let empirical = mismatches as f64 / f64::from(args.trials);
    let band = 4.0 * (oracle * (1.0 - oracle) / f64::from(args.trials)).sqrt();
    let within = (empirical - oracle).abs() <= band;

    if args.common.format == Format::Structured {
        writeln!(
            out,
            "summary command=verify-stats seed={seed} eve={eve} trials={} mismatches={mismatches} \
             empirical={empirical} oracle={oracle} band={band} within_band={within}",
            args.trials
        )?;
    } else {
        writeln!(out, "command: verify-stats")?;
        writeln!(out, "seed: {seed}")?;
        writeln!(out, "eve: {eve}")?;
        writeln!(out, "trials: {}", args.trials)?;
        writeln!(out, "empirical detection probability: {empirical:.6}")?;
        writeln!(out, "oracle detection probability: {oracle:.6}")?;
        writeln!(
            out,
            "absolute difference: {:.6}",
            (empirical - oracle).abs()
        )?;
        writeln!(out, "4-sigma bound: {band:.6}")?;
        writeln!(out, "within bound: {}", if within { "yes" } else { "no" })?;
    }
    Ok(0)
}
