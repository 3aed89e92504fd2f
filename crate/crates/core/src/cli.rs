//! Command-line front end. `run` parses arguments, dispatches and returns
//! the exit code: 0 when everything holds, 1 on a violation, 2 on usage or
//! I/O errors.
//!
//! Vertex indices are 1-based on the command line and in text output;
//! JSON output mirrors the library types, which are 0-based.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::asymptotics::{self, LimitTrace, TraceCheck, DEFAULT_K_MAX};
use crate::calculus::{check_spectral_map_dist, check_spectral_map_max, PowerSeries};
use crate::error::{Error, Result};
use crate::inequalities::{self, Arity, Fixture, Inputs, SuiteConfig};
use crate::io::load_matrix;
use crate::matrix::{NonnegMatrix, NonnegVector};
use crate::oracles::{generate_with, oracle_local_r, oracle_mcgm_enumerate, GeneratorSpec};
use crate::report::{CheckReport, Verdict};
use crate::spectrum::{self, SpectralProfile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Which {
    /// `ρ_{e_i}(A^(t))^{1/t}` over Hadamard powers.
    Schur,
    /// `ρ_{e_i}(A^k_⊗)^{1/k}` over max powers.
    Maxpow,
    /// `r_{e_i}(A^k)^{1/k}` over classical powers.
    Classpow,
    /// `r_⊗(A^k)^{1/k}` for the whole matrix.
    Bapat,
}

#[derive(Debug, Parser)]
#[command(
    name = "maxspec",
    version,
    about = "Max-algebra and distinguished spectra of nonnegative matrices"
)]
struct Cli {
    /// Matrix file (CSV or JSON). Repeat for several matrices.
    #[arg(long, global = true)]
    input: Vec<PathBuf>,
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Local radii, both spectra and witness classes.
    Spectrum {
        /// Also construct and verify an eigenvector per spectral value.
        #[arg(long)]
        eigenvectors: bool,
    },
    /// Limit traces connecting the two spectra.
    Asymptotics {
        #[arg(value_enum)]
        which: Which,
        /// 1-based index; all indices when omitted.
        #[arg(long)]
        index: Option<usize>,
        /// Hadamard exponents run over 2^0 .. 2^t_max.
        #[arg(long, default_value_t = 10)]
        t_max: u32,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: u32,
    },
    /// Spectral mapping checks for a power series.
    Calculus {
        /// `exp`, `cosh`, `sinh`, `geom:<lambda>` or `coeffs:a0,a1,...`.
        #[arg(long)]
        series: PowerSeries,
    },
    /// Pinned fixtures, the randomized inequality suite and oracle
    /// cross-checks. With `--input`, also every proved row whose arity
    /// matches the given matrices.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        /// JSON array of fixtures replacing the built-in set.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Write violation reproducers here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

/// Settings shared by every command.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub format: Format,
    pub seed: u64,
    pub trials: usize,
    pub t_max: u32,
    pub k_max: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            format: Format::Text,
            seed: 0,
            trials: 500,
            t_max: 10,
            k_max: DEFAULT_K_MAX,
        }
    }
}

impl RunConfig {
    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidGrid("--trials must be at least 1".into()));
        }
        if self.t_max > 30 {
            return Err(Error::InvalidGrid(
                "--t-max is an exponent; at most 30".into(),
            ));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidGrid("--k-max must be at least 1".into()));
        }
        Ok(())
    }

    fn json(&self) -> bool {
        self.format == Format::Json
    }

    fn load_all(&self) -> Result<Vec<(String, NonnegMatrix)>> {
        if self.inputs.is_empty() {
            return Err(Error::Io("no --input given".into()));
        }
        self.inputs
            .iter()
            .map(|p| Ok((p.display().to_string(), load_matrix(p)?)))
            .collect()
    }
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
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let mut config = RunConfig {
        inputs: cli.input,
        format: if cli.json { Format::Json } else { cli.format },
        ..RunConfig::default()
    };
    let result = match cli.command {
        Command::Spectrum { eigenvectors } => cmd_spectrum(&config, eigenvectors, out),
        Command::Asymptotics {
            which,
            index,
            t_max,
            k_max,
        } => {
            config.t_max = t_max;
            config.k_max = k_max;
            cmd_asymptotics(&config, which, index, out)
        }
        Command::Calculus { series } => cmd_calculus(&config, &series, out),
        Command::Verify {
            seed,
            trials,
            fixtures,
            dump,
        } => {
            config.seed = seed;
            config.trials = trials;
            cmd_verify(&config, fixtures, dump, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "maxspec: {e}");
            EXIT_USAGE
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

/// Six significant digits, trailing zeros dropped.
pub fn fmt_num(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return format!("{v}");
    }
    let mag = v.abs().log10().floor() as i32;
    if (-4..6).contains(&mag) {
        let decimals = (5 - mag).max(0) as usize;
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.5e}");
        let (mant, exp) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{exp}")
    }
}

fn fmt_set(vals: &[f64]) -> String {
    let parts: Vec<String> = vals.iter().map(|&v| fmt_num(v)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn fmt_class(c: &[usize]) -> String {
    let parts: Vec<String> = c.iter().map(|v| (v + 1).to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

// ---- spectrum --------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct EigenRecord {
    /// `max` or `dist`.
    pub semiring: String,
    pub lambda: f64,
    /// 0-based index whose local radius is `lambda`.
    pub witness: usize,
    pub vector: Option<NonnegVector>,
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct SpectrumOutput {
    pub input: String,
    pub profile: SpectralProfile,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eigenvectors: Vec<EigenRecord>,
}

/// An eigenvector per element of `σ_⊗` and `σ_D`, with residuals.
pub fn eigen_records(a: &NonnegMatrix, profile: &SpectralProfile) -> Vec<EigenRecord> {
    let mut out = Vec::new();
    for &lambda in &profile.sigma_max {
        let witness = profile
            .max_witness_index(lambda)
            .expect("spectral value has a witness");
        let v = spectrum::max_eigenvector(a, lambda, witness);
        out.push(record("max", lambda, witness, v, |v| {
            spectrum::max_residual(a, lambda, v)
        }));
    }
    for &lambda in &profile.sigma_dist {
        let witness = profile
            .dist_witness_index(lambda)
            .expect("spectral value has a witness");
        let v = spectrum::dist_eigenvector(a, lambda, witness);
        out.push(record("dist", lambda, witness, v, |v| {
            spectrum::dist_residual(a, lambda, v)
        }));
    }
    out
}

fn record(
    semiring: &str,
    lambda: f64,
    witness: usize,
    v: Result<NonnegVector>,
    residual: impl Fn(&NonnegVector) -> Result<f64>,
) -> EigenRecord {
    let (vector, residual, error) = match v.and_then(|v| residual(&v).map(|r| (v, r))) {
        Ok((v, r)) => (Some(v), Some(r), None),
        Err(e) => (None, None, Some(e.to_string())),
    };
    EigenRecord {
        semiring: semiring.into(),
        lambda,
        witness,
        vector,
        residual,
        error,
    }
}

fn cmd_spectrum(config: &RunConfig, eigenvectors: bool, out: &mut dyn Write) -> Result<i32> {
    let mut code = EXIT_OK;
    for (name, a) in config.load_all()? {
        let profile = spectrum::spectrum(&a)?;
        let eig = if eigenvectors {
            eigen_records(&a, &profile)
        } else {
            Vec::new()
        };
        if eig.iter().any(|e| e.error.is_some()) {
            code = EXIT_VIOLATION;
        }
        let output = SpectrumOutput {
            input: name,
            profile,
            eigenvectors: eig,
        };
        if config.json() {
            writeln!(
                out,
                "{}",
                serde_json::to_string(&output).expect("serializable")
            )
            .map_err(io_err)?;
        } else {
            write_spectrum_text(&output, out).map_err(io_err)?;
        }
    }
    Ok(code)
}

fn write_spectrum_text(o: &SpectrumOutput, out: &mut dyn Write) -> std::io::Result<()> {
    let p = &o.profile;
    writeln!(out, "{} (n = {})", o.input, p.n)?;
    let classes: Vec<String> = p.classes.iter().map(|c| fmt_class(c)).collect();
    writeln!(out, "classes: {}", classes.join(" "))?;
    writeln!(
        out,
        "{:>4}  {:>12}  {:>12}  {:>10}  {:>10}",
        "i", "r_i", "rho_i", "r class", "rho class"
    )?;
    for i in 0..p.n {
        writeln!(
            out,
            "{:>4}  {:>12}  {:>12}  {:>10}  {:>10}",
            i + 1,
            fmt_num(p.r[i]),
            fmt_num(p.rho[i]),
            fmt_class(&p.classes[p.r_witness[i]]),
            fmt_class(&p.classes[p.rho_witness[i]]),
        )?;
    }
    writeln!(out, "sigma_max  = {}", fmt_set(&p.sigma_max))?;
    writeln!(out, "sigma_dist = {}", fmt_set(&p.sigma_dist))?;
    for e in &o.eigenvectors {
        match (&e.vector, e.residual) {
            (Some(v), Some(res)) => {
                let entries: Vec<String> = v.entries().iter().map(|&x| fmt_num(x)).collect();
                writeln!(
                    out,
                    "{} eigenvector, lambda = {}: [{}]  residual {}",
                    e.semiring,
                    fmt_num(e.lambda),
                    entries.join(", "),
                    fmt_num(res)
                )?;
            }
            _ => writeln!(
                out,
                "{} eigenvector, lambda = {}: FAILED ({})",
                e.semiring,
                fmt_num(e.lambda),
                e.error.as_deref().unwrap_or("unknown")
            )?,
        }
    }
    writeln!(out)
}

// ---- asymptotics -----------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct TraceOutput {
    pub input: String,
    pub trace: LimitTrace,
    pub check: TraceCheck,
}

fn traces(
    a: &NonnegMatrix,
    which: Which,
    index: Option<usize>,
    config: &RunConfig,
) -> Result<Vec<LimitTrace>> {
    let grid: Vec<f64> = (0..=config.t_max).map(|e| 2f64.powi(e as i32)).collect();
    let k = config.k_max;
    let index = match index {
        Some(0) => return Err(Error::IndexOutOfRange { index: 0, n: a.n() }),
        Some(i) if i > a.n() => return Err(Error::IndexOutOfRange { index: i, n: a.n() }),
        Some(i) => Some(i - 1),
        None => None,
    };
    match (which, index) {
        (Which::Schur, Some(i)) => Ok(vec![asymptotics::schur_trace(a, i, &grid)?]),
        (Which::Schur, None) => asymptotics::schur_traces(a, &grid),
        (Which::Maxpow, Some(i)) => Ok(vec![asymptotics::max_power_trace(a, i, k)?]),
        (Which::Maxpow, None) => asymptotics::max_power_traces(a, k),
        (Which::Classpow, Some(i)) => Ok(vec![asymptotics::classical_power_trace(a, i, k)?]),
        (Which::Classpow, None) => asymptotics::classical_power_traces(a, k),
        (Which::Bapat, _) => Ok(vec![asymptotics::bapat_trace(a, k)?]),
    }
}

fn cmd_asymptotics(
    config: &RunConfig,
    which: Which,
    index: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32> {
    config.validate()?;
    let mut code = EXIT_OK;
    for (name, a) in config.load_all()? {
        for trace in traces(&a, which, index, config)? {
            let check = trace.check();
            if !check.passed() {
                code = EXIT_VIOLATION;
            }
            let o = TraceOutput {
                input: name.clone(),
                trace,
                check,
            };
            if config.json() {
                writeln!(out, "{}", serde_json::to_string(&o).expect("serializable"))
                    .map_err(io_err)?;
            } else {
                write_trace_text(&o, out).map_err(io_err)?;
            }
        }
    }
    Ok(code)
}

fn write_trace_text(o: &TraceOutput, out: &mut dyn Write) -> std::io::Result<()> {
    let t = &o.trace;
    let c = &o.check;
    let index = t
        .index
        .map(|i| format!(", i = {}", i + 1))
        .unwrap_or_default();
    let param = if t.kind == asymptotics::TraceKind::Schur {
        "t"
    } else {
        "k"
    };
    writeln!(
        out,
        "{} {:?}{index}: limit {}",
        o.input,
        t.kind,
        fmt_num(t.limit)
    )?;
    writeln!(
        out,
        "{:>8}  {:>12}  {:>12}  {:>6}",
        param, "value", "scaled", "bound"
    )?;
    for j in 0..t.grid.len() {
        let ok = !c.bound_violations.contains(&j) && !c.scaled_violations.contains(&j);
        writeln!(
            out,
            "{:>8}  {:>12}  {:>12}  {:>6}",
            fmt_num(t.grid[j]),
            fmt_num(t.values[j]),
            fmt_num(t.scaled[j]),
            if ok { "ok" } else { "FAIL" }
        )?;
    }
    let monotone = match c.monotone {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "n/a",
    };
    writeln!(
        out,
        "monotone: {monotone}  terminal gap: {}  {}\n",
        fmt_num(c.terminal_gap),
        if c.passed() { "PASS" } else { "FAIL" }
    )
}

// ---- calculus --------------------------------------------------------------

fn cmd_calculus(config: &RunConfig, f: &PowerSeries, out: &mut dyn Write) -> Result<i32> {
    let mut reports = Vec::new();
    for (name, a) in config.load_all()? {
        for (key, r) in [
            ("spectral_map_max", check_spectral_map_max(f, &a)),
            ("spectral_map_dist", check_spectral_map_dist(f, &a)),
        ] {
            let r = match r {
                Ok(r) => r,
                Err(
                    e @ (Error::OutsideRadius { .. }
                    | Error::SignedSeries
                    | Error::NegativeResult { .. }),
                ) => CheckReport::not_applicable(key, "", e.to_string()),
                Err(e) => return Err(e),
            };
            reports.push((name.clone(), r));
        }
    }
    let mut code = EXIT_OK;
    for (name, r) in &reports {
        if r.is_failure() {
            code = EXIT_VIOLATION;
        }
        if config.json() {
            writeln!(out, "{}", r.to_json_line()).map_err(io_err)?;
        } else {
            writeln!(out, "{name}: {} {}", r.key, verdict_text(r)).map_err(io_err)?;
        }
    }
    Ok(code)
}

fn verdict_text(r: &CheckReport) -> String {
    match &r.verdict {
        Verdict::Holds => "holds".into(),
        Verdict::NearTight => "holds (near tight)".into(),
        Verdict::Violated if r.proved => {
            format!("VIOLATED (lhs {}, rhs {})", fmt_num(r.lhs), fmt_num(r.rhs))
        }
        Verdict::Violated => format!("violated (lhs {}, rhs {})", fmt_num(r.lhs), fmt_num(r.rhs)),
        Verdict::NotApplicable(why) => format!("not applicable: {why}"),
    }
}

// ---- verify ----------------------------------------------------------------

/// Wraps a fixture run: holds iff the verdict matched the expectation.
fn fixture_report(f: &Fixture) -> Result<CheckReport> {
    let (inner, ok) = f.run()?;
    let stmt = if f.expect_violation {
        "expected to be violated"
    } else {
        "expected to hold"
    };
    let mut r = CheckReport::bundle(&format!("fixture:{}", f.key), stmt, vec![inner]);
    r.verdict = if ok {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(r)
}

/// Karp and per-index radii against enumeration on random matrices.
fn oracle_reports(seed: u64, count: usize) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6f72_6163);
    let spec = GeneratorSpec::general(2, 7, 0.5);
    let mut out = Vec::new();
    for _ in 0..count {
        let n = rand::Rng::gen_range(&mut rng, spec.n_min..=spec.n_max);
        let a = generate_with(&spec, n, &mut rng);
        let mut parts = vec![CheckReport::equality(
            "r_max",
            "",
            spectrum::max_cycle_mean(&a),
            oracle_mcgm_enumerate(&a)?,
            1e-12,
        )];
        let profile = spectrum::spectrum(&a)?;
        for i in 0..n {
            parts.push(CheckReport::equality(
                &format!("r[{i}]"),
                "",
                profile.r[i],
                oracle_local_r(&a, i)?,
                1e-12,
            ));
        }
        out.push(
            CheckReport::bundle(
                "oracle_local_r",
                "Karp radii equal cycle enumeration",
                parts,
            )
            .with_digest(&a),
        );
    }
    Ok(out)
}

fn calculus_reports(seed: u64, count: usize) -> Result<Vec<CheckReport>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6361_6c63);
    let spec = GeneratorSpec::general(2, 5, 0.6);
    let series = [PowerSeries::exp(), PowerSeries::cosh(), PowerSeries::sinh()];
    let mut out = Vec::new();
    for j in 0..count {
        let n = rand::Rng::gen_range(&mut rng, spec.n_min..=spec.n_max);
        let a = generate_with(&spec, n, &mut rng);
        // Keep the classical series well conditioned.
        let a = a.scale(1.0 / a.norm().max(1.0))?;
        let f = &series[j % series.len()];
        out.push(check_spectral_map_max(f, &a)?);
        out.push(check_spectral_map_dist(f, &a)?);
    }
    Ok(out)
}

/// Every proved row whose arity fits the given matrices.
fn input_reports(mats: &[NonnegMatrix]) -> Result<Vec<CheckReport>> {
    let m = mats.len();
    let mut out = Vec::new();
    for row in inequalities::registry().iter().filter(|r| r.proved) {
        let fits = match row.arity {
            Arity::Single => m == 1,
            Arity::Pair => m == 2,
            Arity::Many => true,
            Arity::Even => m.is_multiple_of(2),
            Arity::Odd => m % 2 == 1,
            Arity::Grid => false,
        };
        if fits {
            let inputs = Inputs::of(mats.to_vec())
                .with_alpha(vec![1.0 / m as f64; m])
                .with_t(2.0);
            out.push(row.run(&inputs)?);
        }
    }
    Ok(out)
}

#[derive(Default)]
struct Tally {
    by_key: BTreeMap<String, [usize; 4]>,
    failures: Vec<CheckReport>,
}

impl Tally {
    fn add(&mut self, r: &CheckReport) {
        let failed = r.is_failure();
        let slot = match (&r.verdict, failed) {
            (_, true) => 3,
            (Verdict::NotApplicable(_), _) => 2,
            (Verdict::NearTight, _) => 1,
            _ => 0,
        };
        let key = r.key.split(':').next().unwrap_or(&r.key).to_string();
        self.by_key.entry(key).or_default()[slot] += 1;
        if failed {
            self.failures.push(r.clone());
        }
    }
}

fn cmd_verify(
    config: &RunConfig,
    fixtures: Option<PathBuf>,
    dump: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    config.validate()?;
    let fixtures = match fixtures {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<Vec<Fixture>>(&text).map_err(|e| Error::Parse(e.to_string()))?
        }
        None => inequalities::pinned_fixtures(),
    };
    let json = config.json();
    let mut tally = Tally::default();
    let mut emit = |r: &CheckReport, out: &mut dyn Write| -> Result<()> {
        tally.add(r);
        if json {
            writeln!(out, "{}", r.to_json_line()).map_err(io_err)?;
        }
        Ok(())
    };

    for f in &fixtures {
        let r = fixture_report(f)?;
        emit(&r, out)?;
        if !json {
            writeln!(
                out,
                "fixture {}: {} ... {}",
                f.key,
                r.statement,
                if r.is_failure() { "MISMATCH" } else { "ok" }
            )
            .map_err(io_err)?;
        }
    }
    if !config.inputs.is_empty() {
        let mats: Vec<NonnegMatrix> = config.load_all()?.into_iter().map(|(_, m)| m).collect();
        for r in input_reports(&mats)? {
            emit(&r, out)?;
        }
    }
    let suite = SuiteConfig {
        trials: config.trials,
        seed: config.seed,
        dump,
        ..SuiteConfig::default()
    };
    let mut suite_reports = Vec::new();
    inequalities::run_suite(&suite, |r| suite_reports.push(r.clone()))?;
    for r in &suite_reports {
        emit(r, out)?;
    }
    let extra = (config.trials / 5).max(1);
    for r in oracle_reports(config.seed, extra)?
        .iter()
        .chain(&calculus_reports(config.seed, extra)?)
    {
        emit(r, out)?;
    }

    let code = if tally.failures.is_empty() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    };
    if !json {
        writeln!(
            out,
            "{:<22} {:>6} {:>6} {:>6} {:>6}",
            "key", "holds", "tight", "n/a", "fail"
        )
        .map_err(io_err)?;
        for (key, [h, t, na, v]) in &tally.by_key {
            writeln!(out, "{key:<22} {h:>6} {t:>6} {na:>6} {v:>6}").map_err(io_err)?;
        }
        for r in &tally.failures {
            writeln!(out, "FAIL {}: {}", r.key, verdict_text(r)).map_err(io_err)?;
        }
        writeln!(out, "{}", if code == EXIT_OK { "PASS" } else { "FAIL" }).map_err(io_err)?;
    }
    Ok(code)
}
