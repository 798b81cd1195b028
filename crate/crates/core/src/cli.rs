//! Command-line front end.
//!
//! Exit codes: `0` positive answer (YES, SOLVABLE, nonempty, identities
//! hold, bench completed), `1` negative answer, `2` invalid input or usage,
//! `3` instance beyond the oracle's enumeration bound.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::{asymptotic_ratio_report, measure_average_cost, verify_moment_identities, Identity};
use crate::bench::{run_primorial_scaling, verify_primorial_parallel, BenchError};
use crate::congruence::{solve_system, CongruenceError, CongruenceSystem, CostCounter};
use crate::crt_solver;
use crate::oracle::{brute_force_orbit, OracleError, DEFAULT_ORDER_BOUND};
use crate::orbit::{decide_orbit, reduce, Reduction};
use crate::permutation::{Configuration, Permutation};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {message}")]
    Instance { line: usize, message: String },
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Bench(#[from] BenchError),
    #[error(transparent)]
    Analysis(#[from] crate::analysis::AnalysisError),
    #[error("{0}")]
    Usage(String),
}

/// An orbit query as read from disk:
///
/// ```text
/// n 9
/// alphabet 01
/// perm (6,5,7,3,2,1)(4,8)
/// v 010001111
/// w 101110001
/// ```
///
/// Keys may appear in any order, each exactly once. Blank lines and lines
/// starting with `#` are ignored. An empty `perm` is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub n: usize,
    pub alphabet: Vec<char>,
    pub perm: Permutation,
    pub v: Configuration,
    pub w: Configuration,
}

impl FromStr for InstanceFile {
    type Err = CliError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        const KEYS: [&str; 5] = ["n", "alphabet", "perm", "v", "w"];
        let mut values: [Option<(usize, String)>; 5] = Default::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
            let Some(slot) = KEYS.iter().position(|k| *k == key) else {
                return Err(CliError::Instance { line, message: format!("unknown key `{key}`") });
            };
            if values[slot].is_some() {
                return Err(CliError::Instance { line, message: format!("duplicate key `{key}`") });
            }
            values[slot] = Some((line, rest.trim().to_string()));
        }
        let last_line = text.lines().count().max(1);
        let mut take = |slot: usize| {
            values[slot]
                .take()
                .ok_or_else(|| CliError::Instance { line: last_line, message: format!("missing key `{}`", KEYS[slot]) })
        };
        let (n_line, n_text) = take(0)?;
        let (a_line, a_text) = take(1)?;
        let (p_line, p_text) = take(2)?;
        let (v_line, v_text) = take(3)?;
        let (w_line, w_text) = take(4)?;

        let n: usize = n_text
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Instance { line: n_line, message: format!("bad degree `{n_text}`") })?;
        let alphabet: Vec<char> = a_text.chars().collect();
        if alphabet.is_empty() {
            return Err(CliError::Instance { line: a_line, message: "empty alphabet".into() });
        }
        for (i, c) in alphabet.iter().enumerate() {
            if alphabet[..i].contains(c) {
                return Err(CliError::Instance { line: a_line, message: format!("alphabet repeats `{c}`") });
            }
        }
        let perm = Permutation::parse(&p_text, n)
            .map_err(|e| CliError::Instance { line: p_line, message: format!("perm: {e}") })?;
        let config = |line: usize, name: &str, text: &str| -> Result<Configuration, CliError> {
            let symbols: Vec<char> = text.chars().collect();
            if symbols.len() != n {
                return Err(CliError::Instance {
                    line,
                    message: format!("{name} has length {}, expected {n}", symbols.len()),
                });
            }
            if let Some(pos) = symbols.iter().position(|c| !alphabet.contains(c)) {
                return Err(CliError::Instance {
                    line,
                    message: format!("{name}: symbol `{}` at position {} not in alphabet", symbols[pos], pos + 1),
                });
            }
            Ok(Configuration::new(symbols))
        };
        let v = config(v_line, "v", &v_text)?;
        let w = config(w_line, "w", &w_text)?;
        Ok(InstanceFile { n, alphabet, perm, v, w })
    }
}

impl std::fmt::Display for InstanceFile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n {}", self.n)?;
        writeln!(f, "alphabet {}", self.alphabet.iter().collect::<String>())?;
        writeln!(f, "perm {}", self.perm)?;
        writeln!(f, "v {}", self.v)?;
        writeln!(f, "w {}", self.w)
    }
}

#[derive(Debug, Parser)]
#[command(name = "cyclic-orbit", version, about = "Orbit problem over cyclic permutation groups")]
pub struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write per-row data to this CSV file (bench).
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Print intermediate results (per-cycle equations, timings, ratios).
    #[arg(long, short, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide an instance file with the linear-time reduction.
    Solve { path: PathBuf },
    /// Decide an instance file by enumerating the group.
    Oracle {
        path: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORDER_BOUND)]
        bound: u64,
    },
    /// Solve a congruence system (`a mod b` per line).
    Congruence { path: PathBuf },
    /// Decide solvability of a congruence system via prime-power splitting.
    CrtCheck { path: PathBuf },
    /// Check the Stirling/harmonic moment identities exactly.
    Stirling {
        #[arg(long, default_value_t = 200)]
        max_n: usize,
    },
    /// Scaling and average-cost measurements.
    Bench {
        #[arg(long, value_enum)]
        mode: BenchMode,
        /// Largest primorial index (primorial mode, at most 25).
        #[arg(long, default_value_t = 20)]
        max_i: usize,
        /// Permutation degree (average mode).
        #[arg(long, default_value_t = 1000)]
        n: usize,
        /// Number of sampled permutations (average mode).
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Correctness-only sweep with sizes processed in parallel.
        #[arg(long)]
        parallel: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BenchMode {
    Primorial,
    Average,
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome { code, stdout, stderr: String::new() }
    }

    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Outcome { code, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_instance(path: &Path) -> Result<InstanceFile, CliError> {
    read(path)?.parse()
}

fn load_system(path: &Path) -> Result<CongruenceSystem, CliError> {
    Ok(read(path)?.parse()?)
}

pub fn cmd_solve(path: &Path, verbose: bool) -> Result<Outcome, CliError> {
    let inst = load_instance(path)?;
    let answer = decide_orbit(&inst.perm, &inst.v, &inst.w).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = format!("{}\n", answer.summary_line());
    if verbose {
        match reduce(&inst.perm, &inst.v, &inst.w).map_err(|e| CliError::Usage(e.to_string()))? {
            Reduction::NotInOrbit => out.push_str("# reduction: some cycle or fixed point cannot match\n"),
            Reduction::System(sys) => {
                for (c, eq) in inst.perm.cycles().iter().zip(&sys.equations) {
                    writeln!(out, "# cycle {c}: x = {eq}").unwrap();
                }
            }
        }
    }
    Ok(Outcome::ok(if answer.is_in_orbit() { EXIT_YES } else { EXIT_NO }, out))
}

pub fn cmd_oracle(path: &Path, bound: u64) -> Result<Outcome, CliError> {
    let inst = load_instance(path)?;
    match brute_force_orbit(&inst.perm, &inst.v, &inst.w, bound) {
        Ok(answer) => {
            let code = if answer.is_in_orbit() { EXIT_YES } else { EXIT_NO };
            Ok(Outcome::ok(code, format!("{}\n", answer.summary_line())))
        }
        Err(e @ OracleError::OrderTooLarge { .. }) => Ok(Outcome::error(EXIT_BOUND, e)),
        Err(e) => Err(CliError::Usage(e.to_string())),
    }
}

pub fn cmd_congruence(path: &Path, verbose: bool) -> Result<Outcome, CliError> {
    let sys = load_system(path)?;
    let mut cost = CostCounter::new();
    let solutions = solve_system(&sys, &mut cost);
    let mut out = format!("{solutions}\n");
    if verbose {
        writeln!(out, "# word_ops {} max_bits {}", cost.word_ops(), cost.max_bits()).unwrap();
    }
    Ok(Outcome::ok(if solutions.is_empty() { EXIT_NO } else { EXIT_YES }, out))
}

pub fn cmd_crt_check(path: &Path) -> Result<Outcome, CliError> {
    let sys = load_system(path)?;
    let report = crt_solver::check(&sys);
    let mut out = String::new();
    writeln!(out, "{}", if report.solvable { "SOLVABLE" } else { "UNSOLVABLE" }).unwrap();
    writeln!(out, "p_max {}", report.p_max).unwrap();
    writeln!(out, "e_max {}", report.e_max).unwrap();
    writeln!(out, "equations {}", report.equations.len()).unwrap();
    writeln!(out, "bit_ops {}", report.total_ops()).unwrap();
    Ok(Outcome::ok(if report.solvable { EXIT_YES } else { EXIT_NO }, out))
}

pub fn cmd_stirling(max_n: usize, verbose: bool) -> Result<Outcome, CliError> {
    let report = verify_moment_identities(max_n)?;
    let mut out = String::new();
    for id in Identity::ALL {
        let failed: Vec<usize> = report.failures.iter().filter(|(_, f)| *f == id).map(|(n, _)| *n).collect();
        if failed.is_empty() {
            writeln!(out, "ok    {id}  [1 <= n <= {max_n}]").unwrap();
        } else {
            writeln!(out, "FAIL  {id}  at n = {failed:?}").unwrap();
        }
    }
    if verbose && max_n >= 10 {
        for (n, ratio) in asymptotic_ratio_report(max_n)? {
            writeln!(out, "# g({n})/ln^3({n}) = {ratio:.6}").unwrap();
        }
    }
    let code = if report.all_hold() { EXIT_YES } else { EXIT_NO };
    Ok(Outcome::ok(code, out))
}

fn cmd_bench_primorial(
    max_i: usize,
    seed: u64,
    parallel: bool,
    csv: Option<&Path>,
    verbose: bool,
) -> Result<Outcome, CliError> {
    let report = if parallel { verify_primorial_parallel(max_i, seed)? } else { run_primorial_scaling(max_i, seed)? };
    let mut out = String::new();
    writeln!(out, "# primorial scaling, seed {seed}").unwrap();
    writeln!(out, "i\tdegree\tinput_bits\tword_ops\tops_per_bit\tnaive_steps").unwrap();
    for r in &report.rows {
        write!(
            out,
            "{}\t{}\t{}\t{}\t{:.4}\t{}",
            r.label,
            r.degree,
            r.input_size_bits,
            r.word_ops,
            r.ops_per_bit(),
            r.naive_steps
        )
        .unwrap();
        if verbose && !parallel {
            write!(out, "\t{:?}", r.wall_time).unwrap();
        }
        out.push('\n');
    }
    if let Some(path) = csv {
        report.write_csv(path)?;
    }
    Ok(Outcome::ok(EXIT_YES, out))
}

fn cmd_bench_average(n: usize, trials: u64, seed: u64, csv: Option<&Path>) -> Result<Outcome, CliError> {
    if n == 0 || n > 1_000_000 || trials == 0 {
        return Err(CliError::Usage("bench average needs 1 <= n <= 1000000 and trials >= 1".into()));
    }
    let stats = measure_average_cost(n, trials, seed);
    let harmonic: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
    let mut out = String::new();
    writeln!(out, "n {n}").unwrap();
    writeln!(out, "trials {trials}").unwrap();
    writeln!(out, "seed {seed}").unwrap();
    writeln!(out, "mean_cycles {:.6} (stderr {:.6}, H_n {:.6})", stats.mean_cycles, stats.cycles_stderr, harmonic)
        .unwrap();
    writeln!(out, "mean_word_ops {:.3}", stats.mean_word_ops).unwrap();
    writeln!(out, "word_ops_p50 {}", stats.word_ops_p50).unwrap();
    writeln!(out, "word_ops_p90 {}", stats.word_ops_p90).unwrap();
    writeln!(out, "word_ops_p99 {}", stats.word_ops_p99).unwrap();
    writeln!(out, "mean_max_bits {:.3}", stats.mean_max_bits).unwrap();
    writeln!(out, "mean_reduce_ops {:.3}", stats.mean_reduce_ops).unwrap();
    if let Some(path) = csv {
        let mut w = csv::Writer::from_path(path).map_err(BenchError::from)?;
        w.write_record(["n", "trial", "k_cycles", "word_ops", "max_bits"]).map_err(BenchError::from)?;
        for s in &stats.samples {
            w.write_record([
                n.to_string(),
                s.trial.to_string(),
                s.k_cycles.to_string(),
                s.word_ops.to_string(),
                s.max_bits.to_string(),
            ])
            .map_err(BenchError::from)?;
        }
        w.flush().map_err(BenchError::from)?;
    }
    Ok(Outcome::ok(EXIT_YES, out))
}

fn dispatch(cli: Cli) -> Result<Outcome, CliError> {
    let csv = cli.csv.as_deref();
    match cli.command {
        Command::Solve { path } => cmd_solve(&path, cli.verbose),
        Command::Oracle { path, bound } => cmd_oracle(&path, bound),
        Command::Congruence { path } => cmd_congruence(&path, cli.verbose),
        Command::CrtCheck { path } => cmd_crt_check(&path),
        Command::Stirling { max_n } => cmd_stirling(max_n, cli.verbose),
        Command::Bench { mode: BenchMode::Primorial, max_i, parallel, .. } => {
            cmd_bench_primorial(max_i, cli.seed, parallel, csv, cli.verbose)
        }
        Command::Bench { mode: BenchMode::Average, n, trials, .. } => cmd_bench_average(n, trials, cli.seed, csv),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_YES };
            let text = e.to_string();
            return if e.use_stderr() {
                Outcome { code, stdout: String::new(), stderr: text }
            } else {
                Outcome::ok(code, text)
            };
        }
    };
    dispatch(cli).unwrap_or_else(|e| Outcome::error(EXIT_INPUT, e))
}

/// Runs with the process arguments, writes the captured streams and returns
/// the exit code.
pub fn main_with_args() -> i32 {
    let outcome = run(std::env::args_os());
    let _ = std::io::stdout().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().write_all(outcome.stderr.as_bytes());
    outcome.code
}

#[cfg(test)]
mod tests {
    use super::*;

    const PAPER: &str = "n 9\nalphabet 01\nperm (6,5,7,3,2,1)(4,8)\nv 010001111\nw 101110001\n";

    #[test]
    fn parses_instance() {
        let inst: InstanceFile = PAPER.parse().unwrap();
        assert_eq!(inst.n, 9);
        assert_eq!(inst.perm.to_string(), "(6,5,7,3,2,1)(4,8)");
        assert_eq!(inst.to_string().parse::<InstanceFile>().unwrap(), inst);
    }

    #[test]
    fn identity_instance() {
        let inst: InstanceFile = "# comment\nw abc\nv abc\nperm\nalphabet abc\nn 3\n".parse().unwrap();
        assert!(inst.perm.is_identity());
    }

    #[test]
    fn instance_errors_name_the_line() {
        let cases = [
            ("n 9\nalphabet 01\nperm (1,1)\nv 010001111\nw 101110001\n", 3),
            ("n 9\nalphabet 01\nperm (1,2)\nv 01000111\nw 101110001\n", 4),
            ("n 9\nalphabet 01\nperm (1,2)\nv 010001111\nw 10111000x\n", 5),
            ("n 9\nalphabet 011\nperm (1,2)\nv 010001111\nw 101110001\n", 2),
            ("n zero\nalphabet 01\nperm\nv 0\nw 0\n", 1),
            ("n 1\nn 1\n", 2),
            ("n 1\nfoo 1\n", 2),
        ];
        for (text, want) in cases {
            match text.parse::<InstanceFile>() {
                Err(CliError::Instance { line, .. }) => assert_eq!(line, want, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
        assert!("n 1\nalphabet 0\nperm\nv 0\n".parse::<InstanceFile>().is_err());
    }
}
