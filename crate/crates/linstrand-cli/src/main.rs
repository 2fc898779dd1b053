//! Command-line front end: ingest point files, run strand and classification
//! analyses, emit JSON or human reports, and drive generator/oracle/selftest
//! sweeps.
//!
//! Exit codes: 0 success; 2 split dimension out of range (or the requested
//! decomposition is otherwise inapplicable); 3 unsplit over the base field;
//! 4 a fallback provenance was used; 64 malformed input; 70 internal
//! assertion failure.

use clap::{Parser, Subcommand};
use linstrand::classify::{classify_with, ClassifyOptions, VerdictTag};
use linstrand::harness::{self, generate, Family, GenSpec};
use linstrand::io;
use linstrand::koszul;
use linstrand::projective::DEFAULT_SUBSET_CAP;
use linstrand::selftest::{run_criterion, Scale};
use linstrand::split::{self, SplitError};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_DIM_OUT_OF_RANGE: u8 = 2;
const EXIT_UNSPLIT: u8 = 3;
const EXIT_FALLBACK: u8 = 4;
const EXIT_BAD_INPUT: u8 = 64;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser)]
#[command(
    name = "linstrand",
    version,
    about = "Linear strands of point configurations: strand numbers, split certificates, and curve/union classification"
)]
struct Cli {
    /// Emit JSON only on stdout.
    #[arg(long, global = true)]
    json: bool,
    /// Disable every fallback search; constructive branches must succeed.
    #[arg(long, global = true)]
    no_fallback: bool,
    /// Cap on the number of subsets a position scan may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBSET_CAP)]
    cap_subsets: usize,
    /// Field for generated configurations: "fp:32003" or "rational".
    #[arg(long, global = true, default_value = "fp:32003")]
    field: String,
    /// Seed for generators.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Strand numbers a_1..a_n, dim I_2, and Hilbert function values.
    Strand { input: PathBuf },
    /// Full classification with a machine-checkable witness.
    Classify { input: PathBuf },
    /// Split certificate for a pivot and participating variables (the input
    /// configuration must contain the coordinate points).
    Decompose {
        input: PathBuf,
        /// Pivot variable index.
        #[arg(long)]
        pivot: usize,
        /// Comma-separated participating variable indices.
        #[arg(long, value_delimiter = ',')]
        idxs: Vec<usize>,
    },
    /// Generate a configuration family member plus its ground-truth sidecar.
    Gen {
        /// Family: rnc | union | general | special.
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        s: usize,
        /// Union subspace dimension k (family = union).
        #[arg(long)]
        k: Option<usize>,
        /// Points on the first subspace (family = union).
        #[arg(long)]
        s_a: Option<usize>,
        /// Degeneracy index (family = special).
        #[arg(long)]
        i: Option<usize>,
        /// Output path for the configuration JSON.
        #[arg(long)]
        out: PathBuf,
        /// Output path for the ground-truth sidecar (default: <out>.truth.json).
        #[arg(long)]
        truth: Option<PathBuf>,
    },
    /// Brute-force oracles: bipartition search and the independent strand
    /// computation.
    Oracle { input: PathBuf },
    /// Run the verification suite at reduced scale (use --full for the
    /// complete acceptance runs).
    Selftest {
        #[arg(long)]
        full: bool,
        /// Comma-separated criterion indices (default: all).
        #[arg(long, value_delimiter = ',')]
        criteria: Vec<usize>,
    },
}

fn read_config(path: &PathBuf) -> Result<linstrand::PointConfig, (u8, String)> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| (EXIT_BAD_INPUT, format!("cannot read {}: {e}", path.display())))?;
    io::config_from_str(&text).map_err(|e| (EXIT_BAD_INPUT, e.to_string()))
}

fn emit(json_mode: bool, value: serde_json::Value, plain: String) {
    use std::io::Write;
    let out = if json_mode {
        serde_json::to_string_pretty(&value).unwrap()
    } else {
        plain
    };
    // tolerate a closed pipe on the reading side
    let _ = writeln!(std::io::stdout(), "{out}");
}

fn run(cli: Cli) -> Result<u8, (u8, String)> {
    match &cli.command {
        Command::Strand { input } => {
            let cfg = read_config(input)?;
            let strand = koszul::strand_betti(&cfg);
            let i2 = linstrand::ideal::ideal_degree_part(&cfg, 2)
                .map_err(|e| (EXIT_INTERNAL, e.to_string()))?
                .basis
                .len();
            let hf: Vec<usize> = (1..=4u32)
                .map(|d| linstrand::ideal::hilbert_function(&cfg, d).unwrap())
                .collect();
            let value = serde_json::json!({
                "n": cfg.n(),
                "s": cfg.s(),
                "a": strand.a,
                "dim_i2": i2,
                "hilbert_function": {"1": hf[0], "2": hf[1], "3": hf[2], "4": hf[3]},
            });
            let plain = format!(
                "strand a = {:?}\ndim I_2 = {i2}\nHilbert function (d = 1..4): {:?}",
                strand.a, hf
            );
            emit(cli.json, value, plain);
            Ok(EXIT_OK)
        }
        Command::Classify { input } => {
            let cfg = read_config(input)?;
            let opts = ClassifyOptions {
                allow_fallback: !cli.no_fallback,
                subset_cap: cli.cap_subsets,
            };
            let verdict = classify_with(&cfg, &opts).map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            let value = verdict.to_json();
            let plain = format!(
                "verdict: {}\nstrand a = {:?}\nprovenance: {:?}\nassertions checked: {}",
                verdict.tag_name(),
                verdict.strand.a,
                verdict.provenance,
                verdict.assertions_checked
            );
            emit(cli.json, value, plain);
            if matches!(verdict.tag, VerdictTag::UnsplitOverBaseField(_)) {
                return Ok(EXIT_UNSPLIT);
            }
            if verdict.used_fallback() {
                return Ok(EXIT_FALLBACK);
            }
            Ok(EXIT_OK)
        }
        Command::Decompose { input, pivot, idxs } => {
            let cfg = read_config(input)?;
            let (dim, basis) = koszul::a_top_via_intersection(&cfg);
            if dim == 0 {
                return Err((
                    EXIT_DIM_OUT_OF_RANGE,
                    "the configuration has no top strand to decompose".into(),
                ));
            }
            let ke = koszul::extract_special_quadrics(&cfg, &basis[0]).map_err(|e| {
                (
                    EXIT_BAD_INPUT,
                    format!(
                        "cannot extract special quadrics (is the configuration normalized \
                         with the coordinate points on it?): {e}"
                    ),
                )
            })?;
            let inp = split::split_input_from_element(&cfg, &ke, *pivot, idxs).map_err(|e| {
                match e {
                    SplitError::PivotInterleaved(_) | SplitError::NotDivisible(_) => {
                        (EXIT_DIM_OUT_OF_RANGE, e.to_string())
                    }
                    other => (EXIT_BAD_INPUT, other.to_string()),
                }
            })?;
            let cert = split::derive_certificate(&inp, !cli.no_fallback).map_err(|e| match e {
                SplitError::DimOutOfRange { .. } => (EXIT_DIM_OUT_OF_RANGE, e.to_string()),
                SplitError::NoCertificate => (EXIT_UNSPLIT, e.to_string()),
                other => (EXIT_INTERNAL, other.to_string()),
            })?;
            if !split::check_certificate(&inp.cfg, &cert, &inp.spanning_forms()) {
                return Err((EXIT_INTERNAL, "certificate failed its independent check".into()));
            }
            let value = cert.to_json();
            let plain = format!(
                "certificate: t = {}, {} h-forms, provenance {}",
                cert.t,
                cert.hs.len(),
                cert.provenance.as_str()
            );
            emit(cli.json, value, plain);
            if cert.provenance == split::Provenance::FallbackSearch {
                return Ok(EXIT_FALLBACK);
            }
            Ok(EXIT_OK)
        }
        Command::Gen { family, n, s, k, s_a, i, out, truth } => {
            let field = io::field_from_flag(&cli.field).map_err(|e| (EXIT_BAD_INPUT, e.to_string()))?;
            let fam = match family.as_str() {
                "rnc" => Family::Rnc,
                "general" => Family::GeneralRandom,
                "union" => {
                    let k = k.ok_or((EXIT_BAD_INPUT, "--k required for union".to_string()))?;
                    if k == 0 || k >= *n {
                        return Err((EXIT_BAD_INPUT, "need 0 < k < n".into()));
                    }
                    let r = n - k;
                    let s_a = s_a.unwrap_or(k + 2);
                    if s_a >= *s {
                        return Err((
                            EXIT_BAD_INPUT,
                            "--s-a must leave points for the second side".into(),
                        ));
                    }
                    Family::UnionOfSubspaces { k, r, s_a, s_b: s - s_a }
                }
                "special" => Family::SpecialRandom {
                    i: i.ok_or((EXIT_BAD_INPUT, "--i required for special".to_string()))?,
                },
                other => return Err((EXIT_BAD_INPUT, format!("unknown family {other:?}"))),
            };
            let spec = GenSpec { family: fam, n: *n, s: *s, field, seed: cli.seed };
            let (cfg, gt) = generate(&spec).map_err(|e| (EXIT_BAD_INPUT, e.to_string()))?;
            let cfg_json = io::config_to_json(&cfg);
            std::fs::write(out, serde_json::to_string_pretty(&cfg_json).unwrap())
                .map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            let truth_path = truth.clone().unwrap_or_else(|| {
                let mut p = out.clone();
                p.set_extension("truth.json");
                p
            });
            let sidecar = serde_json::json!({
                "spec": io::genspec_to_json(&spec),
                "truth": io::ground_truth_to_json(&gt),
            });
            std::fs::write(&truth_path, serde_json::to_string_pretty(&sidecar).unwrap())
                .map_err(|e| (EXIT_INTERNAL, e.to_string()))?;
            emit(
                cli.json,
                serde_json::json!({
                    "config": out.display().to_string(),
                    "truth": truth_path.display().to_string(),
                    "s": cfg.s(),
                }),
                format!("wrote {} and {}", out.display(), truth_path.display()),
            );
            Ok(EXIT_OK)
        }
        Command::Oracle { input } => {
            let cfg = read_config(input)?;
            let strand = harness::strand_oracle(&cfg);
            let bipartition = if cfg.s() <= 16 {
                match harness::bipartition_oracle(&cfg)
                    .map_err(|e| (EXIT_INTERNAL, e.to_string()))?
                {
                    Some(w) => w.to_json(),
                    None => serde_json::Value::Null,
                }
            } else {
                serde_json::json!("skipped: more than 16 points")
            };
            let value = serde_json::json!({
                "strand_oracle": strand.a,
                "bipartition": bipartition,
            });
            let plain = format!(
                "oracle strand a = {:?}\nbipartition: {}",
                strand.a, value["bipartition"]
            );
            emit(cli.json, value, plain);
            Ok(EXIT_OK)
        }
        Command::Selftest { full, criteria } => {
            let scale = if *full { Scale::Full } else { Scale::Reduced };
            let which: Vec<usize> = if criteria.is_empty() {
                (1..=9).collect()
            } else {
                criteria.clone()
            };
            let mut all_pass = true;
            let mut lines = Vec::new();
            for &idx in &which {
                if !(1..=9).contains(&idx) {
                    return Err((EXIT_BAD_INPUT, format!("criterion index {idx} out of range")));
                }
                let r = run_criterion(idx, scale);
                all_pass &= r.pass;
                if cli.json {
                    lines.push(serde_json::json!({
                        "criterion": r.index,
                        "name": r.name,
                        "pass": r.pass,
                        "seconds": r.elapsed.as_secs_f64(),
                        "details": r.details,
                    }));
                } else {
                    println!("{}", r.line());
                }
            }
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&serde_json::json!(lines)).unwrap());
            }
            if all_pass {
                Ok(EXIT_OK)
            } else {
                Err((1, "selftest failures".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err((code, msg)) => {
            if json {
                eprintln!("{}", serde_json::json!({ "error": msg }));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(code)
        }
    }
}
