//! Command-line front end: every library operation behind a subcommand
//! with reproducible seeds and CSV/JSON output on stdout. Exit codes:
//! 0 success, 1 usage error, 2 verification failure.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use shellsort_lab::output::{write_records, Format, OutputRecord, Value};
use shellsort_lab::simulation::{
    cross_inversion_experiment, geometric_sweep, random_permutation, stochastic_counter_model,
    sweep_default_trials, third_pass_experiment, trial_rng, SimulationReport, TrialConfig,
};
use shellsort_lab::{pass_analysis, psi};
use std::process::ExitCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "shellsort-lab",
    version,
    about = "Inversion statistics and Monte Carlo experiments for three-increment shellsort"
)]
struct Cli {
    /// Output encoding for records on stdout.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Print the fully resolved configuration before the results.
    #[arg(long, global = true)]
    manifest: bool,

    /// Seed for randomized commands; falls back to SHELLSORT_LAB_SEED,
    /// then to 0.
    #[arg(long, global = true, env = "SHELLSORT_LAB_SEED")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate the inversion constant psi(h, g).
    Psi {
        h: u64,
        g: u64,
        /// Also print the leading asymptotic term.
        #[arg(long)]
        asymptotic: bool,
        /// Also print the per-d contributions.
        #[arg(long = "per-d")]
        per_d: bool,
    },
    /// Monte Carlo inversion experiment: remaining third-pass inversions
    /// for c = 1, cross-inversions between residue classes for c >= 2.
    Simulate {
        h: u64,
        g: u64,
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        c: u64,
    },
    /// Check the list-difference identity and its corollary on random
    /// arrays; exits with code 2 if any violation is found.
    Verify {
        n: usize,
        h: u64,
        g: u64,
        #[arg(long, default_value_t = 100)]
        arrays: u64,
    },
    /// Reproduce a reference table: "section7" (exact psi values) or
    /// "section10" (simulated sweep with h = g^2+1, n = g^4+g^2).
    Table {
        #[arg(long)]
        suite: String,
        /// Multiplier on the full-scale trial counts of the section10
        /// sweep; the default keeps the whole sweep fast.
        #[arg(long, default_value_t = 0.01)]
        scale: f64,
    },
    /// Run the two-level stochastic counter model for n steps.
    Counters { h: u64, g: u64, f: u64, n: u64 },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let seed = cli.seed.unwrap_or(0);
    let format: Format = cli.format.into();
    match run(&cli.command, seed, format, cli.manifest) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn emit(format: Format, records: &[OutputRecord]) {
    let mut stdout = std::io::stdout().lock();
    write_records(&mut stdout, format, records).expect("stdout write");
}

fn emit_manifest(format: Format, entries: &[(String, String)]) {
    match format {
        Format::Csv => {
            // comment lines keep the CSV stream parseable
            let body = entries
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            println!("# manifest {body}");
        }
        Format::Json => {
            let mut record = OutputRecord::new("manifest");
            for (k, v) in entries {
                record = record.param(k, Value::Str(v.clone()));
            }
            println!("{}", record.json_line());
        }
    }
}

fn report_results(record: OutputRecord, report: &SimulationReport) -> OutputRecord {
    record
        .result("mean", Value::Float(report.mean))
        .result("sample_std", Value::Float(report.sample_std))
        .result("std_err", Value::Float(report.std_err))
        .result("target", Value::Float(report.target))
        .result("z_score", Value::Float(report.z_score))
}

fn run(
    command: &Command,
    seed: u64,
    format: Format,
    manifest: bool,
) -> shellsort_lab::Result<ExitCode> {
    match command {
        Command::Psi {
            h,
            g,
            asymptotic,
            per_d,
        } => {
            if manifest {
                emit_manifest(
                    format,
                    &[
                        ("command".into(), "psi".into()),
                        ("h".into(), h.to_string()),
                        ("g".into(), g.to_string()),
                    ],
                );
            }
            let value = psi::psi_exact(*h, *g)?;
            let mut record = OutputRecord::new("psi")
                .param("h", Value::UInt(*h))
                .param("g", Value::UInt(*g))
                .result("exact", Value::Float(value.exact));
            if *asymptotic {
                record = record.result("asymptotic", Value::Float(value.asymptotic));
            }
            if *per_d {
                let terms = value
                    .terms
                    .iter()
                    .map(f64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ");
                record = record.result("per_d", Value::Str(terms));
            }
            emit(format, &[record]);
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate { h, g, n, trials, c } => {
            let cfg = TrialConfig {
                h: *h,
                g: *g,
                c: *c,
                n: *n,
                trials: *trials,
                seed,
            };
            cfg.validate()?;
            if manifest {
                emit_manifest(
                    format,
                    &[
                        ("command".into(), "simulate".into()),
                        ("h".into(), h.to_string()),
                        ("g".into(), g.to_string()),
                        ("c".into(), c.to_string()),
                        ("n".into(), n.to_string()),
                        ("trials".into(), trials.to_string()),
                        ("seed".into(), seed.to_string()),
                    ],
                );
            }
            let report = if cfg.c == 1 {
                third_pass_experiment(&cfg)?
            } else {
                cross_inversion_experiment(&cfg)?
            };
            let record = OutputRecord::new("simulate")
                .param("h", Value::UInt(*h))
                .param("g", Value::UInt(*g))
                .param("c", Value::UInt(*c))
                .param("n", Value::UInt(*n as u64))
                .param("trials", Value::UInt(*trials));
            let record = report_results(record, &report).seed(seed);
            emit(format, &[record]);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { n, h, g, arrays } => {
            if manifest {
                emit_manifest(
                    format,
                    &[
                        ("command".into(), "verify".into()),
                        ("n".into(), n.to_string()),
                        ("h".into(), h.to_string()),
                        ("g".into(), g.to_string()),
                        ("arrays".into(), arrays.to_string()),
                        ("seed".into(), seed.to_string()),
                    ],
                );
            }
            let mut violations = 0u64;
            let mut corollary_mismatches = 0u64;
            let mut entries = 0u64;
            for i in 0..*arrays {
                let mut rng = trial_rng(seed, i);
                let a = random_permutation(*n, &mut rng);
                let report = pass_analysis::verify_lemma1(&a, *h, *g)?;
                violations += report.violation_count;
                corollary_mismatches += report.corollary_mismatches;
                entries += report.entries_checked;
            }
            let record = OutputRecord::new("verify")
                .param("n", Value::UInt(*n as u64))
                .param("h", Value::UInt(*h))
                .param("g", Value::UInt(*g))
                .param("arrays", Value::UInt(*arrays))
                .result("entries_checked", Value::UInt(entries))
                .result("violations", Value::UInt(violations))
                .result("corollary_mismatches", Value::UInt(corollary_mismatches))
                .seed(seed);
            emit(format, &[record]);
            if violations > 0 || corollary_mismatches > 0 {
                Ok(ExitCode::from(2))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
        Command::Table { suite, scale } => run_table(suite, *scale, seed, format, manifest),
        Command::Counters { h, g, f, n } => {
            if manifest {
                emit_manifest(
                    format,
                    &[
                        ("command".into(), "counters".into()),
                        ("h".into(), h.to_string()),
                        ("g".into(), g.to_string()),
                        ("f".into(), f.to_string()),
                        ("n".into(), n.to_string()),
                        ("seed".into(), seed.to_string()),
                    ],
                );
            }
            let trace = stochastic_counter_model(*h, *g, *f, *n, seed)?;
            let mut occupancy = vec![0u64; (*g * *f) as usize];
            for &(_, j, i) in &trace.steps {
                occupancy[(j * *f + i) as usize] += 1;
            }
            let histogram = (0..*g)
                .flat_map(|j| (0..*f).map(move |i| (j, i)))
                .map(|(j, i)| format!("{j}:{i}={}", occupancy[(j * *f + i) as usize]))
                .collect::<Vec<_>>()
                .join(" ");
            let join = |v: &[u64]| {
                v.iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" ")
            };
            let record = OutputRecord::new("counters")
                .param("h", Value::UInt(*h))
                .param("g", Value::UInt(*g))
                .param("f", Value::UInt(*f))
                .param("n", Value::UInt(*n))
                .result("i_counters", Value::Str(join(&trace.i_counters)))
                .result("j_counters", Value::Str(join(&trace.j_counters)))
                .result("occupancy", Value::Str(histogram))
                .seed(seed);
            emit(format, &[record]);
            Ok(ExitCode::SUCCESS)
        }
    }
}

/// Published exact-psi reference rows: (h, g, psi, leading term,
/// difference / sqrt(g)).
const PSI_REFERENCE_ROWS: [(u64, u64, f64, f64, f64); 3] = [
    (901, 30, 140.018, 141.076, 0.1933),
    (1601, 40, 249.539, 250.741, 0.1900),
    (2501, 50, 390.412, 391.739, 0.1877),
];

fn run_table(
    suite: &str,
    scale: f64,
    seed: u64,
    format: Format,
    manifest: bool,
) -> shellsort_lab::Result<ExitCode> {
    match suite {
        "section7" => {
            if manifest {
                emit_manifest(
                    format,
                    &[
                        ("command".into(), "table".into()),
                        ("suite".into(), "section7".into()),
                    ],
                );
            }
            let mut records = Vec::new();
            for (h, g, psi_ref, asym_ref, diff_ref) in PSI_REFERENCE_ROWS {
                let value = psi::psi_exact(h, g)?;
                let diff = (value.asymptotic - value.exact) / (g as f64).sqrt();
                records.push(
                    OutputRecord::new("table")
                        .param("suite", Value::Str("section7".into()))
                        .param("h", Value::UInt(h))
                        .param("g", Value::UInt(g))
                        .result("psi", Value::Float(value.exact))
                        .result("psi_reference", Value::Float(psi_ref))
                        .result("asymptotic", Value::Float(value.asymptotic))
                        .result("asymptotic_reference", Value::Float(asym_ref))
                        .result("diff_over_sqrt_g", Value::Float(diff))
                        .result("diff_reference", Value::Float(diff_ref))
                        .result("deviation", Value::Float(value.exact - psi_ref)),
                );
            }
            emit(format, &records);
            Ok(ExitCode::SUCCESS)
        }
        "section10" => {
            let g_list: Vec<u64> = (1..=32).collect();
            let trials_for =
                |g: u64| ((sweep_default_trials(g) as f64 * scale).round() as u64).max(1);
            if manifest {
                let mut entries = vec![
                    ("command".to_string(), "table".to_string()),
                    ("suite".to_string(), "section10".to_string()),
                    ("scale".to_string(), scale.to_string()),
                    ("seed".to_string(), seed.to_string()),
                ];
                for &g in &g_list {
                    entries.push((
                        format!("g{g}"),
                        format!(
                            "h={} n={} trials={}",
                            g * g + 1,
                            g * g * g * g + g * g,
                            trials_for(g)
                        ),
                    ));
                }
                emit_manifest(format, &entries);
            }
            let rows = geometric_sweep(&g_list, trials_for, seed)?;
            let records: Vec<OutputRecord> = rows
                .iter()
                .map(|row| {
                    OutputRecord::new("table")
                        .param("suite", Value::Str("section10".into()))
                        .param("g", Value::UInt(row.g))
                        .param("h", Value::UInt(row.h))
                        .param("n", Value::UInt(row.n as u64))
                        .param("trials", Value::UInt(row.report.config.trials))
                        .result("mean", Value::Float(row.report.mean))
                        .result("sample_std", Value::Float(row.report.sample_std))
                        .result("std_err", Value::Float(row.report.std_err))
                        .result("target", Value::Float(row.report.target))
                        .result("deviation", Value::Float(row.report.mean - row.report.target))
                        .result("mean_below_target", Value::Bool(row.mean_below_target))
                        .result("sigma_over_mu", Value::Float(row.sigma_over_mu))
                        .seed(seed)
                })
                .collect();
            emit(format, &records);
            Ok(ExitCode::SUCCESS)
        }
        other => Err(shellsort_lab::Error::InvalidArgument(format!(
            "unknown suite '{other}' (expected 'section7' or 'section10')"
        ))),
    }
}
