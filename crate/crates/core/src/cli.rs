//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 on usage errors, 2 when a verification check
//! fails.

use std::ffi::OsString;
use std::io::{self, Write};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use num_bigint::BigInt;
use serde::Serialize;

use crate::bundle::MilnorBundle;
use crate::quotient::{classify_quotient, QuotientError};
use crate::verify::{brute_force_theorem, check_case, crt_residues, enumerate_residues, CaseLabel, IntRange};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;

/// Environment variable read for the worker count of `cases` and `verify`.
pub const PARALLEL_ENV: &str = "EKMU_PARALLEL";

#[derive(Parser, Debug)]
#[command(
    name = "ekmu",
    version,
    about = "Exact Eells-Kuiper invariants of Milnor spheres and their antipodal quotients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Characteristic data, mu(M_h), and the Theta(7) class of M_h.
    Invariants {
        #[arg(long, allow_hyphen_values = true)]
        h: BigInt,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Fixed-point contributions, mu(M_h/tau_h), and the quotient's diffeomorphism type.
    Quotient {
        #[arg(long, allow_hyphen_values = true)]
        h: BigInt,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Residues r in [0, modulus) with 56 | r(r-1), by scan and by CRT.
    Enumerate {
        #[arg(long)]
        modulus: u64,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Check the four residue cases h = 56k + {0, 1, 8, 49} over a k-range.
    Cases {
        /// a..b (half-open) or a..=b (inclusive)
        #[arg(long, allow_hyphen_values = true)]
        k_range: IntRange,
        /// Restrict to one case (i, ii, iii, iv)
        #[arg(long = "case")]
        case: Option<CaseLabel>,
        #[arg(long, env = PARALLEL_ENV, default_value_t = 1)]
        parallel: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Brute-force mu(M_h/tau_h) = ±1/32 for every valid h in a range.
    Verify {
        /// a..b (half-open) or a..=b (inclusive)
        #[arg(long, allow_hyphen_values = true)]
        h_range: IntRange,
        #[arg(long, env = PARALLEL_ENV, default_value_t = 1)]
        parallel: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: &Command, out: &mut dyn Write) -> io::Result<i32> {
    let started = Instant::now();
    let code = match command {
        Command::Invariants { h, format } => invariants(h, *format, out)?,
        Command::Quotient { h, format } => quotient(h, *format, out)?,
        Command::Enumerate { modulus, format } => enumerate(*modulus, *format, out)?,
        Command::Cases { k_range, case, parallel, format } => cases(k_range, *case, *parallel, *format, out)?,
        Command::Verify { h_range, parallel, format } => verify(h_range, *parallel, *format, out)?,
    };
    info!("finished in {:.3}s with exit code {code}", started.elapsed().as_secs_f64());
    Ok(code)
}

fn write_json(out: &mut dyn Write, value: &impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)
}

fn write_csv(out: &mut dyn Write, header: &[&str], rows: &[Vec<String>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()
}

fn write_table(out: &mut dyn Write, rows: &[(&str, String)]) -> io::Result<()> {
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<width$}  {v}")?;
    }
    Ok(())
}

fn set_cell(values: &[impl ToString]) -> String {
    let parts: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

fn invariants(h: &BigInt, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    let rec = MilnorBundle::from_h(h.clone()).invariants_record();
    match format {
        Format::Json => write_json(out, &rec)?,
        Format::Csv => write_csv(
            out,
            &["h", "euler", "p1_magnitude", "signature", "p1_squared", "mu", "diffeo_s7", "theta7"],
            &[vec![
                rec.h.to_string(),
                rec.euler.to_string(),
                rec.p1_magnitude.to_string(),
                rec.signature.to_string(),
                rec.p1_squared.to_string(),
                rec.mu.rep().to_string(),
                rec.diffeo_s7.to_string(),
                rec.theta7.to_string(),
            ]],
        )?,
        Format::Table => write_table(
            out,
            &[
                ("h", rec.h.to_string()),
                ("euler", rec.euler.to_string()),
                ("p1", format!("±{}", rec.p1_magnitude)),
                ("signature", rec.signature.to_string()),
                ("p1_squared", rec.p1_squared.to_string()),
                ("mu", rec.mu.to_string()),
                ("diffeo_s7", rec.diffeo_s7.to_string()),
                ("theta7", format!("{} mod 28", rec.theta7)),
            ],
        )?,
    }
    Ok(EXIT_OK)
}

fn quotient(h: &BigInt, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    let report = match classify_quotient(&MilnorBundle::from_h(h.clone())) {
        Ok(r) => r,
        Err(e @ QuotientError::DichotomyViolation { .. }) => {
            writeln!(out, "check failed: {e}")?;
            return Ok(EXIT_CHECK_FAILED);
        }
        Err(e) => unreachable!("classify_quotient only fails on dichotomy violations: {e}"),
    };
    let rec = report.record();
    let mu = rec.mu_quotient.as_ref().map(|m| set_cell(&m.values().iter().map(|v| v.rep()).collect::<Vec<_>>()));
    match format {
        Format::Json => write_json(out, &rec)?,
        Format::Csv => write_csv(
            out,
            &["h", "a1", "a2", "equivariant_signature", "mu_quotient", "verdict"],
            &[vec![
                rec.h.to_string(),
                set_cell(&rec.a1),
                rec.a2.to_string(),
                rec.equivariant_signature.to_string(),
                mu.unwrap_or_default(),
                rec.verdict.to_string(),
            ]],
        )?,
        Format::Table => write_table(
            out,
            &[
                ("h", rec.h.to_string()),
                ("a1", report.contributions.a1.to_string()),
                ("a2", rec.a2.to_string()),
                ("equivariant_signature", rec.equivariant_signature.to_string()),
                (
                    "mu_quotient",
                    report.mu_quotient.as_ref().map_or("-".to_string(), ToString::to_string),
                ),
                ("verdict", rec.verdict.to_string()),
            ],
        )?,
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct EnumerateOutput {
    modulus: u64,
    residues: Vec<u64>,
    crt_agrees: bool,
}

fn enumerate(modulus: u64, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    let scan = match enumerate_residues(modulus) {
        Ok(s) => s,
        Err(e) => return Err(io::Error::new(io::ErrorKind::InvalidInput, e)),
    };
    let crt_agrees = crt_residues(modulus).map(|c| c == scan).unwrap_or(false);
    let res = EnumerateOutput { modulus, residues: scan.residues, crt_agrees };
    match format {
        Format::Json => write_json(out, &res)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = res.residues.iter().map(|r| vec![r.to_string()]).collect();
            write_csv(out, &["residue"], &rows)?
        }
        Format::Table => write_table(
            out,
            &[
                ("modulus", res.modulus.to_string()),
                ("count", res.residues.len().to_string()),
                (
                    "residues",
                    res.residues.iter().map(u64::to_string).collect::<Vec<_>>().join(", "),
                ),
                ("crt_agrees", res.crt_agrees.to_string()),
            ],
        )?,
    }
    Ok(if res.crt_agrees { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn cases(
    k_range: &IntRange,
    only: Option<CaseLabel>,
    parallel: usize,
    format: Format,
    out: &mut dyn Write,
) -> io::Result<i32> {
    let labels: Vec<CaseLabel> = only.map_or(CaseLabel::ALL.to_vec(), |c| vec![c]);
    let reports: Vec<_> = labels.iter().map(|&l| check_case(l, k_range, parallel)).collect();
    match format {
        Format::Json => write_json(out, &reports)?,
        Format::Csv | Format::Table => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.case.to_string(),
                        format!("56k+{}", r.offset),
                        r.half_term_constant.rep().to_string(),
                        r.sign_term_constant.rep().to_string(),
                        r.k_range.to_string(),
                        r.checked.to_string(),
                        r.matches.to_string(),
                    ]
                })
                .collect();
            let header = ["case", "h", "half_term_constant", "sign_term_constant", "k_range", "checked", "matches"];
            if format == Format::Csv {
                write_csv(out, &header, &rows)?;
            } else {
                writeln!(out, "{}", header.join("\t"))?;
                for row in rows {
                    writeln!(out, "{}", row.join("\t"))?;
                }
            }
        }
    }
    let ok = reports.iter().all(|r| r.matches);
    Ok(if ok { EXIT_OK } else { EXIT_CHECK_FAILED })
}

fn verify(h_range: &IntRange, parallel: usize, format: Format, out: &mut dyn Write) -> io::Result<i32> {
    info!("verifying h in {h_range} with {parallel} worker(s)");
    let summary = brute_force_theorem(h_range, parallel);
    match format {
        Format::Json => write_json(out, &summary)?,
        Format::Csv => {
            let rows: Vec<Vec<String>> = summary
                .rows
                .iter()
                .map(|r| {
                    vec![
                        r.h.to_string(),
                        r.residue_class.to_string(),
                        set_cell(&r.mu_quotient.values().iter().map(|v| v.rep()).collect::<Vec<_>>()),
                        r.verdict_str().to_string(),
                        r.pass.to_string(),
                    ]
                })
                .collect();
            write_csv(out, &["h", "residue_class", "mu_quotient_set", "verdict", "pass"], &rows)?
        }
        Format::Table => {
            let failures: Vec<String> = summary.failures.iter().map(ToString::to_string).collect();
            write_table(
                out,
                &[
                    ("h_range", h_range.to_string()),
                    ("checked", summary.checked.to_string()),
                    ("passed", summary.passed.to_string()),
                    ("failed", summary.failed.to_string()),
                    ("failures", if failures.is_empty() { "-".into() } else { failures.join(", ") }),
                ],
            )?
        }
    }
    Ok(if summary.all_passed() { EXIT_OK } else { EXIT_CHECK_FAILED })
}
