//! Run manifests: recording a run beside its primary output and replaying
//! it.

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::commands::{self, json_bytes, read_text, Outcome};
use crate::error::{CliError, CliResult, EXIT_OK, EXIT_VIOLATED};
use crate::{Cli, Command, ReplayArgs};

pub const MANIFEST_SCHEMA: &str = "incidence-manifest/1";
pub const REPLAY_SCHEMA: &str = "incidence-replay/1";
pub const VERSION: &str = concat!("incidence-cli ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
    pub bytes: u64,
}

impl FileDigest {
    fn of(path: &Path, bytes: &[u8]) -> Self {
        FileDigest {
            path: path.to_path_buf(),
            sha256: sha256_hex(bytes),
            bytes: bytes.len() as u64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema: String,
    pub command: String,
    /// Full parsed invocation with absolute paths.
    pub invocation: Cli,
    pub seed: u64,
    pub threads: Option<usize>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub exit_code: i32,
    pub version: String,
    pub started_unix_ms: u64,
    pub wall_clock_ms: u64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

fn write_file(path: &Path, bytes: &[u8]) -> CliResult<()> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

/// Runs `cli` on a pool of `threads` workers (all cores when `None`).
pub fn run_with_threads(cli: &Cli, threads: Option<usize>) -> CliResult<Outcome> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    pool.install(|| commands::run(cli))
}

/// Runs a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli) -> i32 {
    match try_execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn try_execute(cli: &Cli) -> CliResult<i32> {
    if let Command::Replay(a) = &cli.command {
        return replay(cli, a);
    }
    let cli = cli.absolutized()?;
    let started = SystemTime::now();
    let clock = Instant::now();
    let outcome = run_with_threads(&cli, cli.global.threads)?;
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    for (path, bytes) in &outcome.outputs {
        write_file(path, bytes)?;
    }
    let inputs = outcome
        .inputs
        .iter()
        .map(|p| Ok(FileDigest::of(p, &std::fs::read(p).map_err(|e| CliError::io(p, e))?)))
        .collect::<CliResult<Vec<_>>>()?;
    let manifest = Manifest {
        schema: MANIFEST_SCHEMA.into(),
        command: cli.command.name().into(),
        seed: cli.global.seed,
        threads: cli.global.threads,
        inputs,
        outputs: outcome.outputs.iter().map(|(p, b)| FileDigest::of(p, b)).collect(),
        exit_code: outcome.exit_code,
        version: VERSION.into(),
        started_unix_ms: started.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64),
        wall_clock_ms: clock.elapsed().as_millis() as u64,
        invocation: cli,
    };
    let primary = &outcome.outputs[0].0;
    write_file(&manifest_path(primary), &json_bytes(&manifest))?;
    Ok(outcome.exit_code)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputCheck {
    pub path: PathBuf,
    pub expected: String,
    pub actual: String,
    pub identical: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayReport {
    pub schema: String,
    pub manifest: PathBuf,
    pub command: String,
    pub threads: Option<usize>,
    pub expected_exit_code: i32,
    pub exit_code: i32,
    pub outputs: Vec<OutputCheck>,
    pub identical: bool,
}

/// Reruns the manifest's invocation and compares output digests; the
/// recorded files are not touched.
pub fn replay_manifest(path: &Path, threads: Option<usize>) -> CliResult<ReplayReport> {
    let manifest: Manifest = serde_json::from_str(&read_text(path)?).map_err(|e| CliError::json(path, e))?;
    if manifest.schema != MANIFEST_SCHEMA {
        return Err(CliError::Input(format!(
            "{}: unsupported manifest schema {:?}",
            path.display(),
            manifest.schema
        )));
    }
    for d in &manifest.inputs {
        let bytes = std::fs::read(&d.path).map_err(|e| CliError::io(&d.path, e))?;
        if sha256_hex(&bytes) != d.sha256 {
            return Err(CliError::Input(format!("input {} changed since the recorded run", d.path.display())));
        }
    }
    let threads = threads.or(manifest.threads);
    let outcome = run_with_threads(&manifest.invocation, threads)?;
    let mut outputs: Vec<OutputCheck> = manifest
        .outputs
        .iter()
        .map(|d| {
            let actual = outcome
                .outputs
                .iter()
                .find(|(p, _)| *p == d.path)
                .map(|(_, b)| sha256_hex(b))
                .unwrap_or_default();
            OutputCheck {
                path: d.path.clone(),
                identical: actual == d.sha256,
                expected: d.sha256.clone(),
                actual,
            }
        })
        .collect();
    for (p, b) in &outcome.outputs {
        if !manifest.outputs.iter().any(|d| d.path == *p) {
            outputs.push(OutputCheck {
                path: p.clone(),
                expected: String::new(),
                actual: sha256_hex(b),
                identical: false,
            });
        }
    }
    let identical = outputs.iter().all(|o| o.identical) && outcome.exit_code == manifest.exit_code;
    Ok(ReplayReport {
        schema: REPLAY_SCHEMA.into(),
        manifest: path.to_path_buf(),
        command: manifest.command,
        threads,
        expected_exit_code: manifest.exit_code,
        exit_code: outcome.exit_code,
        outputs,
        identical,
    })
}

fn replay(cli: &Cli, a: &ReplayArgs) -> CliResult<i32> {
    let report = replay_manifest(&a.manifest, cli.global.threads)?;
    let bytes = json_bytes(&report);
    match &a.out {
        Some(path) => write_file(path, &bytes)?,
        None => print!("{}", String::from_utf8_lossy(&bytes)),
    }
    if !report.identical {
        eprintln!("replay differs from the recorded run");
    }
    Ok(if report.identical { EXIT_OK } else { EXIT_VIOLATED })
}
