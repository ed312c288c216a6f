use std::fs;
use std::path::{Path, PathBuf};

use gcs_core::construct::{build_gcs, dedupe, GcsParams, GcsSet};
use gcs_core::correlation::{aacf_sum, default_tolerance, format_fixed, is_gcs, GcsVerdict};
use gcs_core::export::{
    matrix_csv, read_sequences_csv, read_sequences_json, set_to_json, SequenceFile,
};
use gcs_core::pmepr::pmepr_report_labeled;
use gcs_core::sweep::{run_sweep, sweep_csv, DrawOutcome, SweepConfig};
use gcs_core::{Ebf, GcsError};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::{Format, GenerateArgs, InputArgs, PmeprArgs, ReproduceArgs, SweepArgs, Target};

pub const VERIFICATION_FAILED: u8 = 2;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<GcsError> for Failure {
    fn from(e: GcsError) -> Self {
        let code = match e {
            GcsError::BoundExceeded(_) => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    p: Option<u64>,
    q: Option<u64>,
    #[serde(rename = "L")]
    length: Option<usize>,
    pi: Option<Vec<usize>>,
    g: Option<String>,
    c: Option<Vec<u64>>,
    c_prime: Option<u64>,
    seed: Option<u64>,
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))
}

/// Where an output went. Summaries go to stderr when the payload took stdout.
enum Sink {
    File(PathBuf),
    Stdout,
}

impl Sink {
    fn note(&self, line: &str) {
        match self {
            Sink::File(_) => println!("{line}"),
            Sink::Stdout => eprintln!("{line}"),
        }
    }
}

fn emit(
    content: &str,
    output: Option<&Path>,
    out_dir: Option<&Path>,
    default_name: &str,
) -> Result<Sink, Failure> {
    let path = match (output, out_dir) {
        (Some(path), _) => path.to_path_buf(),
        (None, Some(dir)) => {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::usage(format!("cannot create {}: {e}", dir.display())))?;
            dir.join(default_name)
        }
        (None, None) => {
            print!("{content}");
            return Ok(Sink::Stdout);
        }
    };
    fs::write(&path, content)
        .map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))?;
    Ok(Sink::File(path))
}

fn check_tol(tol: Option<f64>) -> Result<(), Failure> {
    match tol {
        Some(t) if !(t >= 0.0 && t.is_finite()) => Err(Failure::usage(format!(
            "tolerance {t} must be a nonnegative number"
        ))),
        _ => Ok(()),
    }
}

fn resolve_params(args: &GenerateArgs) -> Result<GcsParams, Failure> {
    let cfg: ConfigFile = match &args.config {
        Some(path) => serde_json::from_str(&read_text(path)?).map_err(|e| GcsError::Parse {
            line: Some(e.line()),
            field: None,
            message: format!("{}: {e}", path.display()),
        })?,
        None => ConfigFile::default(),
    };
    let p = args
        .p
        .or(cfg.p)
        .ok_or_else(|| Failure::usage("missing --p"))?;
    let q = args
        .q
        .or(cfg.q)
        .ok_or_else(|| Failure::usage("missing --q"))?;
    let length = args
        .length
        .or(cfg.length)
        .ok_or_else(|| Failure::usage("missing --L"))?;
    let base = match args.seed.or(cfg.seed) {
        Some(seed) => GcsParams::random(p, q, length, &mut ChaCha8Rng::seed_from_u64(seed))?,
        None => GcsParams::with_defaults(p, q, length)?,
    };
    let g = match args.g.clone().or(cfg.g) {
        Some(text) => Ebf::parse_anf(&text, p, base.m() - 1, q)?,
        None => base.g().clone(),
    };
    Ok(GcsParams::new(
        p,
        q,
        length,
        args.pi
            .clone()
            .or(cfg.pi)
            .unwrap_or_else(|| base.pi().to_vec()),
        g,
        args.c
            .clone()
            .or(cfg.c)
            .unwrap_or_else(|| base.c().to_vec()),
        args.c_prime.or(cfg.c_prime).unwrap_or(base.c_prime()),
    )?)
}

fn describe(verdict: &GcsVerdict) -> String {
    match verdict.worst_tau {
        Some(tau) => format!("{} at tau={tau}", format_fixed(verdict.worst_magnitude)),
        None => "none (L = 1)".into(),
    }
}

pub fn generate(args: &GenerateArgs, out_dir: Option<&Path>) -> CmdResult {
    check_tol(args.tol)?;
    let params = resolve_params(args)?;
    let raw = build_gcs(&params)?;
    let raw_count = raw.flock_size();
    let unique = dedupe(raw.clone());
    let unique_count = unique.flock_size();
    let set: GcsSet = if args.dedupe { unique } else { raw };
    let tol = args
        .tol
        .unwrap_or_else(|| default_tolerance(set.flock_size(), set.length()));
    let verdict = is_gcs(set.complex_sequences(), tol)?;

    let (content, ext) = match args.format {
        Format::Json => {
            let mut json = set_to_json(&set);
            json.push('\n');
            (json, "json")
        }
        Format::Csv => (matrix_csv(set.zq_sequences()), "csv"),
    };
    let name = format!(
        "gcs_p{}_q{}_L{}.{ext}",
        params.p(),
        params.q(),
        params.length()
    );
    let sink = emit(&content, args.output.as_deref(), out_dir, &name)?;
    sink.note(&format!(
        "(q, p^k -> M, L) = ({}, {raw_count} -> {unique_count}, {}); GCS {}; max off-peak |sum| {}",
        params.q(),
        params.length(),
        if verdict.passed { "pass" } else { "fail" },
        describe(&verdict)
    ));
    Ok(if verdict.passed {
        0
    } else {
        VERIFICATION_FAILED
    })
}

fn read_input(path: &Path, q: Option<u64>) -> Result<SequenceFile, Failure> {
    let text = read_text(path)?;
    let is_csv = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    Ok(if is_csv {
        let q = q.ok_or_else(|| Failure::usage("CSV input needs --q"))?;
        read_sequences_csv(&text, q)?
    } else {
        let file = read_sequences_json(&text)?;
        if let Some(q) = q.filter(|&q| q != file.q) {
            return Err(Failure::usage(format!(
                "--q {q} disagrees with q = {} in {}",
                file.q,
                path.display()
            )));
        }
        file
    })
}

pub fn verify(args: &InputArgs) -> CmdResult {
    check_tol(args.tol)?;
    let file = read_input(&args.input, args.q)?;
    let complex: Vec<_> = file.sequences.iter().map(|s| s.to_complex()).collect();
    let len = complex[0].len();
    let tol = args
        .tol
        .unwrap_or_else(|| default_tolerance(complex.len(), len));
    let verdict = is_gcs(&complex, tol)?;
    println!("members {}, length {len}, q {}", complex.len(), file.q);
    println!("peak {} at tau=0", format_fixed(verdict.peak.re));
    println!(
        "max off-peak |sum| {} (tolerance {tol:e})",
        describe(&verdict)
    );
    println!("{}", if verdict.passed { "pass" } else { "fail" });
    Ok(if verdict.passed {
        0
    } else {
        VERIFICATION_FAILED
    })
}

pub fn pmepr(args: &PmeprArgs, out_dir: Option<&Path>) -> CmdResult {
    let file = read_input(&args.input, args.q)?;
    let labeled = file
        .gammas
        .iter()
        .cloned()
        .zip(file.sequences.iter())
        .collect();
    let report = pmepr_report_labeled(labeled, args.oversampling)?;
    let sink = emit(
        &report.to_csv(),
        args.output.as_deref(),
        out_dir,
        "pmepr.csv",
    )?;
    let ok = report.within_bound();
    sink.note(&format!(
        "max PMEPR {} {} bound {} (member count)",
        format_fixed(report.max),
        if ok { "<=" } else { ">" },
        report.bound
    ));
    Ok(if ok { 0 } else { VERIFICATION_FAILED })
}

pub fn sweep(args: &SweepArgs, out_dir: Option<&Path>) -> CmdResult {
    if !(args.tol_factor >= 0.0 && args.tol_factor.is_finite()) {
        return Err(Failure::usage("--tol-factor must be a nonnegative number"));
    }
    let config = SweepConfig {
        ps: args.p.clone(),
        q_multipliers: args.q_mult.clone(),
        length_min: args.length_min,
        length_max: args.length_max,
        count: args.count,
        seed: args.seed,
        oversampling: args.oversampling,
        tol_factor: args.tol_factor,
    };
    let rows = run_sweep(&config)?;
    let sink = emit(
        &sweep_csv(&rows),
        args.output.as_deref(),
        out_dir,
        "sweep.csv",
    )?;
    let skipped = rows
        .iter()
        .filter(|r| matches!(r.outcome, DrawOutcome::Skipped(_)))
        .count();
    let failed: Vec<String> = rows
        .iter()
        .filter(|r| r.failed())
        .map(|r| r.index.to_string())
        .collect();
    sink.note(&format!(
        "{} draws, {} checked, {skipped} skipped, {} failed",
        rows.len(),
        rows.len() - skipped,
        failed.len()
    ));
    if failed.is_empty() {
        sink.note("failures: none");
        Ok(0)
    } else {
        sink.note(&format!("failures: draws {}", failed.join(", ")));
        Ok(VERIFICATION_FAILED)
    }
}

pub fn reproduce(args: &ReproduceArgs, out_dir: Option<&Path>) -> CmdResult {
    let set = build_gcs(&GcsParams::quaternary_length_19(0))?;
    let (content, name) = match args.target {
        Target::Table1 => (matrix_csv(set.zq_sequences()), "table1.csv"),
        Target::Fig1 => (aacf_sum(set.complex_sequences())?.to_csv(), "fig1.csv"),
    };
    if let Sink::File(path) = emit(&content, args.output.as_deref(), out_dir, name)? {
        println!("wrote {}", path.display());
    }
    Ok(0)
}
