//! Command-line driver: analyze a cluster of prime-squared size, search
//! for a fully periodic tiling, or verify a tiling file, with a fixed
//! exit-code contract (0 success, 1 verification failure, 2 parse error,
//! 3 search exhausted, 4 precondition violation). Standard output carries
//! only the structured payload; diagnostics go to standard error.

use latile_cli::formats;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use latile_core::tiler::{dilation_check, search_fully_periodic, tile_1d, verify_tiling};
use latile_core::trichotomy::classify;
use latile_core::{Cluster, IntVec, PeriodicTiling, Sublattice};

const EXIT_OK: u8 = 0;
const EXIT_VERIFY_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;
const EXIT_PRECONDITION: u8 = 4;

#[derive(Parser)]
#[command(name = "latile", about = "Exact analysis of integer-lattice clusters and their periodic tilings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a cluster of size p^2 and report witnesses.
    Analyze {
        /// Cluster file: one point per line, '#' comments allowed.
        cluster: PathBuf,
        /// The prime p with |cluster| = p^2.
        #[arg(long)]
        prime: u64,
        /// Largest period-lattice index tried by tiling searches.
        #[arg(long, default_value_t = 64)]
        search_cap: u64,
        /// Report destination; a found tiling is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a fully periodic tiling of the cluster.
    Tile {
        cluster: PathBuf,
        /// Largest period-lattice index tried before giving up.
        #[arg(long, default_value_t = 64)]
        max_index: u64,
        /// Tiling destination (stdout always carries the payload).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a tiling file against a cluster, optionally after dilation.
    Verify {
        cluster: PathBuf,
        tiling: PathBuf,
        /// Dilation factor; must be coprime to the cluster size.
        #[arg(long)]
        alpha: Option<u64>,
    },
}

fn main() -> ExitCode {
    if let Err(msg) = check_thread_cap() {
        eprintln!("latile: {msg}");
        return ExitCode::from(EXIT_PRECONDITION);
    }
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze {
            cluster,
            prime,
            search_cap,
            out,
        } => cmd_analyze(&cluster, prime, search_cap, &out),
        Command::Tile {
            cluster,
            max_index,
            out,
        } => cmd_tile(&cluster, max_index, out.as_deref()),
        Command::Verify {
            cluster,
            tiling,
            alpha,
        } => cmd_verify(&cluster, &tiling, alpha),
    };
    ExitCode::from(code)
}

/// Optional cap on internal parallelism. All computations currently run on
/// one thread, which satisfies any positive cap; the value is still
/// validated so misconfiguration is caught.
fn check_thread_cap() -> Result<(), String> {
    match std::env::var("LATILE_THREADS") {
        Err(_) => Ok(()),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(()),
            _ => Err(format!("LATILE_THREADS must be a positive integer, got {raw:?}")),
        },
    }
}

fn read_cluster(path: &Path) -> Result<Cluster, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("latile: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    formats::parse_cluster(&text).map_err(|e| {
        eprintln!("latile: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn read_tiling(path: &Path) -> Result<PeriodicTiling, u8> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        eprintln!("latile: cannot read {}: {e}", path.display());
        EXIT_PARSE
    })?;
    let file: formats::TilingFile = serde_json::from_str(&text).map_err(|e| {
        eprintln!("latile: {}: {e}", path.display());
        EXIT_PARSE
    })?;
    formats::tiling_from_file(&file).map_err(|e| {
        eprintln!("latile: {}: {e}", path.display());
        EXIT_PARSE
    })
}

fn write_output(path: &Path, contents: &str) -> Result<(), u8> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("latile: cannot write {}: {e}", path.display());
        EXIT_PRECONDITION
    })
}

fn cmd_analyze(cluster_path: &Path, prime: u64, search_cap: u64, out: &Path) -> u8 {
    let cluster = match read_cluster(cluster_path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let classification = match classify(&cluster, prime, search_cap) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("latile: {e}");
            return EXIT_PRECONDITION;
        }
    };

    let tiling_file = match classification.case.tiling() {
        Some(tiling) => {
            let name = tiling_file_name(out);
            let file = match formats::tiling_to_file(tiling) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("latile: {e}");
                    return EXIT_PRECONDITION;
                }
            };
            let path = out.with_file_name(&name);
            if let Err(code) = write_output(&path, &formats::to_json_bytes(&file)) {
                return code;
            }
            Some(name)
        }
        None => None,
    };

    let report = match formats::build_report(&classification, tiling_file) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("latile: {e}");
            return EXIT_PRECONDITION;
        }
    };
    let payload = formats::to_json_bytes(&report);
    if let Err(code) = write_output(out, &payload) {
        return code;
    }
    print!("{payload}");
    EXIT_OK
}

fn tiling_file_name(report_path: &Path) -> String {
    let stem = report_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "report".into());
    format!("{stem}.tiling.json")
}

fn cmd_tile(cluster_path: &Path, max_index: u64, out: Option<&Path>) -> u8 {
    let cluster = match read_cluster(cluster_path) {
        Ok(c) => c,
        Err(code) => return code,
    };

    let tiling = if cluster.dim() == 1 {
        match tile_1d(&cluster) {
            Ok(report) => {
                if !report.exact {
                    eprintln!("latile: cluster is not exact; the transfer graph has no cycles");
                    return EXIT_UNKNOWN;
                }
                eprintln!(
                    "latile: uniform period {}; {} tiling(s) up to translation",
                    report.uniform_period,
                    report.tilings.len()
                );
                match one_dim_tiling(&report.tilings[0], report.uniform_period) {
                    Ok(t) => t,
                    Err(e) => {
                        eprintln!("latile: {e}");
                        return EXIT_PRECONDITION;
                    }
                }
            }
            Err(e) => {
                eprintln!("latile: {e}");
                return EXIT_PRECONDITION;
            }
        }
    } else {
        match search_fully_periodic(&cluster, max_index) {
            Ok(Some(t)) => t,
            Ok(None) => {
                eprintln!("latile: no tiling found up to index {max_index}; existence unknown");
                return EXIT_UNKNOWN;
            }
            Err(e) => {
                eprintln!("latile: {e}");
                return EXIT_PRECONDITION;
            }
        }
    };

    let file = match formats::tiling_to_file(&tiling) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("latile: {e}");
            return EXIT_PRECONDITION;
        }
    };
    let payload = formats::to_json_bytes(&file);
    if let Some(path) = out {
        if let Err(code) = write_output(path, &payload) {
            return code;
        }
    }
    print!("{payload}");
    EXIT_OK
}

fn one_dim_tiling(word: &str, period: u64) -> Result<PeriodicTiling, String> {
    let lattice =
        Sublattice::from_generators(1, &[IntVec::from_i64(&[period as i64])]).map_err(|e| e.to_string())?;
    let reps: Vec<IntVec> = word
        .bytes()
        .enumerate()
        .filter(|&(_, b)| b == b'1')
        .map(|(i, _)| IntVec::from_i64(&[i as i64]))
        .collect();
    PeriodicTiling::new(lattice, reps).map_err(|e| e.to_string())
}

fn cmd_verify(cluster_path: &Path, tiling_path: &Path, alpha: Option<u64>) -> u8 {
    let cluster = match read_cluster(cluster_path) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let tiling = match read_tiling(tiling_path) {
        Ok(t) => t,
        Err(code) => return code,
    };

    let base = match verify_tiling(&cluster, &tiling) {
        Ok(ok) => ok,
        Err(e) => {
            eprintln!("latile: {e}");
            return EXIT_PRECONDITION;
        }
    };
    if !base {
        eprintln!("latile: tiling does not verify");
        return EXIT_VERIFY_FAIL;
    }

    if let Some(alpha) = alpha {
        match dilation_check(&cluster, &tiling, alpha) {
            Ok(true) => {}
            Ok(false) => {
                eprintln!("latile: dilated cluster does not verify");
                return EXIT_VERIFY_FAIL;
            }
            Err(e) => {
                eprintln!("latile: {e}");
                return EXIT_PRECONDITION;
            }
        }
    }
    EXIT_OK
}
