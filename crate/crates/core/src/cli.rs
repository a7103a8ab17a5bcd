//! Command-line front end.
//!
//! Configuration is merged from defaults, an optional flat `key = value`
//! file and command-line flags, in increasing precedence. Exit codes:
//! `0` all checks pass, `1` a check failed, `2` configuration or I/O
//! error, `3` the `(q, shells)` pair would overflow `f64`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::axioms::{self, CheckReport, ScanRow, Verifier, DEFAULT_TOLERANCE};
use crate::hilbert::{Truncation, DEFAULT_MARGIN};
use crate::operators::{DiracParams, SpectralTriple, TripleConfig, C64, OPERATOR_NAMES};
use crate::qnum::{HalfInt, QContext};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_OVERFLOW: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "podles", version, about = "Spectral triple on the standard Podles sphere: build, verify, scan")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run the full named-check suite and write a JSON report.
    Verify(PointArgs),
    /// Tabulate the Dirac spectrum against its closed form.
    Spectrum(PointArgs),
    /// Commutator norms ‖[D, π(x)]‖ for a list of truncations.
    BoundScan(BoundScanArgs),
    /// Spectral and residual deviation from q = 1 for a list of q.
    LimitScan(LimitScanArgs),
    /// Write one operator as `row col re im` triplets.
    Export(ExportArgs),
}

#[derive(Args, Debug, Default)]
pub struct CommonArgs {
    #[arg(long = "z-re", allow_hyphen_values = true)]
    pub z_re: Option<String>,
    #[arg(long = "z-im", allow_hyphen_values = true)]
    pub z_im: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub margin: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub format: Option<Format>,
    /// Flat `key = value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct PointArgs {
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub shells: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct BoundScanArgs {
    #[arg(long)]
    pub q: Option<String>,
    /// Comma-separated ascending shell counts.
    #[arg(long)]
    pub shells: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct LimitScanArgs {
    /// Comma-separated q values.
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub shells: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// One of A, B, Bstar, e, f, k, kinv, gamma, J, D.
    #[arg(long)]
    pub op: String,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub shells: Option<String>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Overflow(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => EXIT_CONFIG,
            CliError::Overflow(_) => EXIT_OVERFLOW,
        }
    }

    /// Single diagnostic line.
    pub fn line(&self) -> String {
        let (kind, msg) = match self {
            CliError::Config(m) => ("config", m),
            CliError::Overflow(m) => ("overflow", m),
            CliError::Io(m) => ("io", m),
        };
        format!("podles: error[{kind}]: {}", msg.replace('\n', " "))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_overflow() {
            CliError::Overflow(e.to_string())
        } else {
            CliError::Config(e.to_string())
        }
    }
}

const KEYS: [&str; 9] = ["q", "shells", "z_re", "z_im", "p", "margin", "tol", "out", "format"];

/// Raw settings keyed by name, before typing.
#[derive(Clone, Debug, Default)]
struct Layered(BTreeMap<String, String>);

impl Layered {
    fn set(&mut self, key: &str, value: Option<String>) {
        if let Some(v) = value {
            self.0.insert(key.to_string(), v);
        }
    }

    fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| CliError::Config(format!("invalid value for {key}: {raw:?}"))),
        }
    }

    fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Option<Vec<T>>, CliError> {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|s| s.trim().parse())
                .collect::<Result<Vec<T>, _>>()
                .map(Some)
                .map_err(|_| CliError::Config(format!("invalid list for {key}: {raw:?}"))),
        }
    }
}

/// Parses a flat `key = value` configuration file.
pub fn parse_config_file(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key = value", n + 1)))?;
        let key = key.trim().replace('-', "_");
        if !KEYS.contains(&key.as_str()) {
            return Err(CliError::Config(format!("config line {}: unknown key {key:?}", n + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}

fn layer(q: Option<String>, shells: Option<String>, common: &CommonArgs) -> Result<Layered, CliError> {
    let mut l = Layered::default();
    if let Some(path) = &common.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        l.0.extend(parse_config_file(&text)?);
    }
    l.set("q", q);
    l.set("shells", shells);
    l.set("z_re", common.z_re.clone());
    l.set("z_im", common.z_im.clone());
    l.set("p", common.p.clone());
    l.set("margin", common.margin.clone());
    l.set("tol", common.tol.clone());
    l.set("out", common.out.as_ref().map(|p| p.display().to_string()));
    l.set("format", common.format.map(|f| format!("{f:?}").to_lowercase()));
    Ok(l)
}

/// Effective configuration, echoed into every report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub q: f64,
    pub shells: u32,
    pub z: [f64; 2],
    pub p: f64,
    pub margin: u32,
    pub tolerance: f64,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    fn from_layers(l: &Layered, default_format: Format) -> Result<Self, CliError> {
        let q = l.parse("q")?.unwrap_or(0.5);
        let shells = l.parse("shells")?.unwrap_or(12);
        let format = match l.get("format") {
            None => default_format,
            Some(f) => Format::from_str(f, true).map_err(|_| CliError::Config(format!("unknown format {f:?}")))?,
        };
        let cfg = Self {
            q,
            shells,
            z: [l.parse("z_re")?.unwrap_or(1.0), l.parse("z_im")?.unwrap_or(0.0)],
            p: l.parse("p")?.unwrap_or(q),
            margin: l.parse("margin")?.unwrap_or(DEFAULT_MARGIN),
            tolerance: l.parse("tol")?.unwrap_or(DEFAULT_TOLERANCE),
            out: l.get("out").map(PathBuf::from),
            format,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.ctx()?;
        self.dirac()?;
        if !(self.p.is_finite() && self.p > 0.0) {
            return Err(CliError::Config(format!("p = {} must be positive", self.p)));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(CliError::Config(format!("tol = {} must be positive", self.tolerance)));
        }
        if self.shells == 0 {
            return Err(CliError::Config("shells must be at least 1".into()));
        }
        Ok(())
    }

    pub fn ctx(&self) -> Result<QContext, CliError> {
        QContext::new(self.q).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn dirac(&self) -> Result<DiracParams, CliError> {
        DiracParams::new(C64::new(self.z[0], self.z[1])).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Rejects `(q, shells)` before anything is allocated.
    pub fn preflight(&self, q: f64, shells: u32) -> Result<(), CliError> {
        let ctx = QContext::new(q).map_err(|e| CliError::Config(e.to_string()))?;
        ctx.preflight(shells)
            .map_err(|_| CliError::Overflow(format!("q^-(2*shells+3) overflows f64 at q={q}, shells={shells}")))
    }

    pub fn triple_config(&self) -> Result<TripleConfig, CliError> {
        let trunc = Truncation::new(self.shells, self.margin).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(TripleConfig::new(self.ctx()?, trunc).with_p(self.p).with_z(self.dirac()?))
    }
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    passed: usize,
    failed: usize,
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    config: &'a RunConfig,
    summary: Summary,
    checks: &'a [CheckReport],
}

/// Output of one command: bytes for the target and the exit code.
pub struct Outcome {
    pub body: String,
    pub exit_code: i32,
}

pub fn cmd_verify(cfg: &RunConfig) -> Result<Outcome, CliError> {
    cfg.preflight(cfg.q, cfg.shells)?;
    let verifier = Verifier::new(cfg.triple_config()?, cfg.tolerance)?;
    let checks = verifier.run_all()?;
    let passed = checks.iter().filter(|r| r.passed).count();
    let summary = Summary { total: checks.len(), passed, failed: checks.len() - passed };
    let exit_code = if summary.failed == 0 { EXIT_OK } else { EXIT_CHECK_FAILED };
    let body = match cfg.format {
        Format::Json => {
            let report = VerifyReport { config: cfg, summary, checks: &checks };
            serde_json::to_string_pretty(&report).expect("report serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("check,residual,tolerance,passed\n");
            for r in &checks {
                let _ = writeln!(s, "{},{:e},{:e},{}", r.check, r.residual, r.tolerance, r.passed);
            }
            s
        }
    };
    Ok(Outcome { body, exit_code })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumRow {
    pub l: String,
    pub sign: i8,
    pub analytic: f64,
    pub multiplicity: u32,
    pub numeric: f64,
    pub deviation: f64,
}

/// Groups the computed spectrum of `D` by shell and sign.
pub fn spectrum_rows(cfg: &RunConfig) -> Result<Vec<SpectrumRow>, CliError> {
    cfg.preflight(cfg.q, cfg.shells)?;
    let triple = SpectralTriple::build(cfg.triple_config()?)?;
    let ctx = cfg.ctx()?;
    let z = cfg.dirac()?.z().norm();
    let mut labelled = Vec::new();
    for k in 0..cfg.shells as i32 {
        let l = HalfInt::from_twice(2 * k + 1);
        let v = z * ctx.q_number(l.value() + 0.5).map_err(Error::from)?;
        for sign in [-1i8, 1] {
            for _ in 0..(2 * k + 2) {
                labelled.push((f64::from(sign) * v, k as usize, sign));
            }
        }
    }
    labelled.sort_by(|a, b| a.0.total_cmp(&b.0));
    let numeric = triple.d.eigenvalues().map_err(Error::from)?;
    let mut rows: Vec<SpectrumRow> = Vec::new();
    for k in 0..cfg.shells as usize {
        for sign in [1i8, -1] {
            let mut worst = (0.0f64, f64::NAN);
            let mut analytic = 0.0;
            let mut count = 0;
            for ((a, kk, s), n) in labelled.iter().zip(&numeric) {
                if *kk == k && *s == sign {
                    analytic = *a;
                    count += 1;
                    let dev = (n - a).abs();
                    if worst.1.is_nan() || dev > worst.0 {
                        worst = (dev, *n);
                    }
                }
            }
            rows.push(SpectrumRow {
                l: HalfInt::from_twice(2 * k as i32 + 1).to_string(),
                sign,
                analytic,
                multiplicity: count,
                numeric: worst.1,
                deviation: worst.0,
            });
        }
    }
    Ok(rows)
}

pub fn cmd_spectrum(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let rows = spectrum_rows(cfg)?;
    let body = match cfg.format {
        Format::Json => serde_json::to_string_pretty(&rows).expect("rows serialize") + "\n",
        Format::Csv => {
            let mut s = String::from("l,sign,analytic,multiplicity,numeric,deviation\n");
            for r in &rows {
                let _ = writeln!(s, "{},{},{},{},{},{:e}", r.l, r.sign, r.analytic, r.multiplicity, r.numeric, r.deviation);
            }
            s
        }
    };
    Ok(Outcome { body, exit_code: EXIT_OK })
}

fn scan_body(rows: &[ScanRow], key: &str, value: &str, format: Format, integer_key: bool) -> String {
    match format {
        Format::Json => {
            let items: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    let k = if integer_key { serde_json::json!(r.key as u64) } else { serde_json::json!(r.key) };
                    serde_json::json!({ key: k, "alpha": r.alpha, value: r.value })
                })
                .collect();
            serde_json::to_string_pretty(&items).expect("rows serialize") + "\n"
        }
        Format::Csv => {
            let mut s = format!("{key},alpha,{value}\n");
            for r in rows {
                if integer_key {
                    let _ = writeln!(s, "{},{},{}", r.key as u64, r.alpha, r.value);
                } else {
                    let _ = writeln!(s, "{},{},{}", r.key, r.alpha, r.value);
                }
            }
            s
        }
    }
}

pub fn cmd_bound_scan(cfg: &RunConfig, shells_list: &[u32]) -> Result<Outcome, CliError> {
    for &n in shells_list {
        cfg.preflight(cfg.q, n)?;
    }
    let rows = axioms::bound_scan(&cfg.ctx()?, &cfg.dirac()?, cfg.margin, shells_list)?;
    Ok(Outcome { body: scan_body(&rows, "shells", "norm", cfg.format, true), exit_code: EXIT_OK })
}

pub fn cmd_limit_scan(cfg: &RunConfig, q_list: &[f64]) -> Result<Outcome, CliError> {
    for &q in q_list {
        cfg.preflight(q, cfg.shells)?;
    }
    let trunc = Truncation::new(cfg.shells, cfg.margin).map_err(|e| CliError::Config(e.to_string()))?;
    let rows = axioms::classical_limit_scan(q_list, &trunc, &cfg.dirac()?)?;
    Ok(Outcome { body: scan_body(&rows, "q", "deviation", cfg.format, false), exit_code: EXIT_OK })
}

pub fn cmd_export(cfg: &RunConfig, op: &str) -> Result<Outcome, CliError> {
    if !OPERATOR_NAMES.contains(&op) && op != "B*" {
        return Err(CliError::Config(format!("unknown operator {op:?}; expected one of {}", OPERATOR_NAMES.join(", "))));
    }
    cfg.preflight(cfg.q, cfg.shells)?;
    let triple = SpectralTriple::build(cfg.triple_config()?)?;
    let mut buf = Vec::new();
    triple
        .named(op)
        .expect("name checked above")
        .write_triplets(&mut buf)
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(Outcome { body: String::from_utf8(buf).expect("ascii"), exit_code: EXIT_OK })
}

fn dispatch(cli: Cli) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let (outcome, cfg) = match cli.command {
        Command::Verify(a) => {
            let cfg = RunConfig::from_layers(&layer(a.q, a.shells, &a.common)?, Format::Json)?;
            (cmd_verify(&cfg)?, cfg)
        }
        Command::Spectrum(a) => {
            let cfg = RunConfig::from_layers(&layer(a.q, a.shells, &a.common)?, Format::Csv)?;
            (cmd_spectrum(&cfg)?, cfg)
        }
        Command::BoundScan(a) => {
            let l = layer(a.q, None, &a.common)?;
            let mut l_list = l.clone();
            l_list.set("shells", a.shells.or_else(|| l.get("shells").map(str::to_string)));
            let shells = l_list.list::<u32>("shells")?.unwrap_or_else(|| vec![8, 12, 16, 20, 24]);
            let mut single = l.clone();
            single.0.remove("shells");
            let cfg = RunConfig::from_layers(&single, Format::Csv)?;
            (cmd_bound_scan(&cfg, &shells)?, cfg)
        }
        Command::LimitScan(a) => {
            let l = layer(None, a.shells, &a.common)?;
            let mut l_list = l.clone();
            l_list.set("q", a.q.or_else(|| l.get("q").map(str::to_string)));
            let qs = l_list.list::<f64>("q")?.unwrap_or_else(|| vec![0.9, 0.99, 0.999]);
            let mut single = l.clone();
            single.0.remove("q");
            // p only matters for the checks, which use the equivariant J at each q
            single.0.remove("p");
            let cfg = RunConfig::from_layers(&single, Format::Csv)?;
            (cmd_limit_scan(&cfg, &qs)?, cfg)
        }
        Command::Export(a) => {
            let cfg = RunConfig::from_layers(&layer(a.q, a.shells, &a.common)?, Format::Csv)?;
            (cmd_export(&cfg, &a.op)?, cfg)
        }
    };
    Ok((outcome, cfg.out))
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").to_string();
            let _ = writeln!(stderr, "{}", CliError::Config(first.trim_start_matches("error: ").into()).line());
            return EXIT_CONFIG;
        }
    };
    match dispatch(cli) {
        Ok((outcome, out)) => {
            let written = match &out {
                Some(path) => fs::write(path, &outcome.body).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
                None => stdout.write_all(outcome.body.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            };
            match written {
                Ok(()) => outcome.exit_code,
                Err(e) => {
                    let _ = writeln!(stderr, "{}", e.line());
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.line());
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("podles").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn config_file_parsing() {
        let m = parse_config_file("# comment\nq = 0.3\n\nz-im=2\n").unwrap();
        assert_eq!(m["q"], "0.3");
        assert_eq!(m["z_im"], "2");
        assert!(parse_config_file("bogus = 1").is_err());
        assert!(parse_config_file("q 0.3").is_err());
    }

    #[test]
    fn empty_interior_is_config_error() {
        let (code, out, err) = run_args(&["verify", "--q", "0.5", "--shells", "2"]);
        assert_eq!(code, EXIT_CONFIG);
        assert!(out.is_empty());
        assert_eq!(err.lines().count(), 1);
        assert!(err.starts_with("podles: error[config]"));
    }

    #[test]
    fn bad_values_are_config_errors() {
        for args in [
            vec!["verify", "--q", "1.5"],
            vec!["verify", "--q", "abc"],
            vec!["verify", "--z-re", "0"],
            vec!["verify", "--p", "-1"],
            vec!["export", "--op", "X", "--shells", "1"],
            vec!["verify", "--nonsense"],
        ] {
            let (code, _, err) = run_args(&args);
            assert_eq!(code, EXIT_CONFIG, "{args:?}");
            assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        }
    }

    #[test]
    fn overflow_guard_exit_code() {
        let (code, _, err) = run_args(&["spectrum", "--q", "0.01", "--shells", "100"]);
        assert_eq!(code, EXIT_OVERFLOW);
        assert!(err.contains("q=0.01") && err.contains("shells=100"), "{err}");
    }

    #[test]
    fn spectrum_classical_rows() {
        let (code, out, _) = run_args(&["spectrum", "--q", "1", "--shells", "3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "l,sign,analytic,multiplicity,numeric,deviation");
        assert!(lines[1].starts_with("1/2,1,1,2,"));
        assert!(lines[2].starts_with("1/2,-1,-1,2,"));
        assert!(lines[3].starts_with("3/2,1,2,4,"));
        assert!(lines[5].starts_with("5/2,1,3,6,"));
    }

    #[test]
    fn export_classical_dirac() {
        let (code, out, _) = run_args(&["export", "--op", "D", "--q", "1", "--shells", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 4);
    }
}
