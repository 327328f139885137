//! The Möbius-disjointness harness: Sarnak sums, KBSZ cross-correlations,
//! block sweeps and their CSV/JSON reports.
//!
//! Orbit indices start at `n = 1`; index `n` evaluates the observable on the
//! window starting at position `n` of the one-sided sequence.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::arith::{build_weight_table, ArithmeticWeight, WeightKind};
use crate::error::{invalid, Error, Result};
use crate::reduce::{tree_sum_terms, TermSource};
use crate::spectral::{make_block_indicator, Observable};
use crate::stream::{prefix, SymbolSource};

/// Powers of two up to `n`, and `n` itself.
pub fn pow2_checkpoints(n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut m = 1;
    while m <= n {
        out.push(m);
        m = match m.checked_mul(2) {
            Some(v) => v,
            None => break,
        };
    }
    if out.last() != Some(&n) && n > 0 {
        out.push(n);
    }
    out
}

fn validate_checkpoints(checkpoints: &[usize]) -> Result<()> {
    if checkpoints.is_empty() {
        return invalid("no checkpoints");
    }
    if checkpoints[0] == 0 {
        return invalid("checkpoints start at 1");
    }
    if checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("checkpoints must be strictly increasing");
    }
    Ok(())
}

struct SarnakTerms<'a> {
    source: &'a dyn SymbolSource,
    obs: &'a Observable,
    weight: Option<&'a dyn ArithmeticWeight>,
    reach: usize,
}

impl TermSource for SarnakTerms<'_> {
    fn fill(&self, start: usize, out: &mut [Complex64]) {
        let mut cursor = self.source.open();
        cursor.seek(start);
        let word = cursor.take_vec(out.len() + self.reach.saturating_sub(1));
        for (i, slot) in out.iter_mut().enumerate() {
            let w = self.weight.map_or(1, |t| t.weight(start + i));
            *slot = if w == 0 { Complex64::new(0.0, 0.0) } else { self.obs.eval_at(&word, i) * w as f64 };
        }
    }
}

struct KbszTerms<'a> {
    source: &'a dyn SymbolSource,
    obs: &'a Observable,
    r: usize,
    s: usize,
    reach: usize,
}

impl KbszTerms<'_> {
    fn strided(&self, start: usize, len: usize, stride: usize) -> Vec<usize> {
        let mut cursor = self.source.open();
        cursor.seek(start * stride);
        cursor.take_vec((len - 1) * stride + self.reach.max(1))
    }
}

impl TermSource for KbszTerms<'_> {
    fn fill(&self, start: usize, out: &mut [Complex64]) {
        if out.is_empty() {
            return;
        }
        let a = self.strided(start, out.len(), self.r);
        let b = self.strided(start, out.len(), self.s);
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.obs.eval_at(&a, i * self.r) * self.obs.eval_at(&b, i * self.s).conj();
        }
    }
}

/// `S_M = (1/M) Σ_{n≤M} f(S^n y) w(n)` at every checkpoint; `w ≡ 1` without weights.
pub fn sarnak_series(
    source: &dyn SymbolSource,
    obs: &Observable,
    weight: Option<&dyn ArithmeticWeight>,
    checkpoints: &[usize],
) -> Result<ConvergenceReport> {
    validate_checkpoints(checkpoints)?;
    obs.check_alphabet(source.alphabet_size())?;
    let last = *checkpoints.last().unwrap();
    if let Some(w) = weight {
        if w.limit() < last {
            return invalid(format!("weight table ends at {} but checkpoints reach {last}", w.limit()));
        }
    }
    let terms = SarnakTerms { source, obs, weight, reach: obs.reach() };
    Ok(ConvergenceReport::from_sums(checkpoints, |m| tree_sum_terms(&terms, 1..m + 1)))
}

/// `C_M = (1/M) Σ_{n≤M} f(S^{nr} y) conj f(S^{ns} y)`.
pub fn kbsz_series(
    source: &dyn SymbolSource,
    obs: &Observable,
    r: usize,
    s: usize,
    checkpoints: &[usize],
) -> Result<ConvergenceReport> {
    if r < 1 || s < 1 {
        return invalid("KBSZ multipliers must be positive");
    }
    validate_checkpoints(checkpoints)?;
    obs.check_alphabet(source.alphabet_size())?;
    let terms = KbszTerms { source, obs, r, s, reach: obs.reach() };
    let mut report = ConvergenceReport::from_sums(checkpoints, |m| tree_sum_terms(&terms, 1..m + 1));
    report.metadata.r = Some(r);
    report.metadata.s = Some(s);
    Ok(report)
}

/// One Sarnak report per `k`-block occurring among the words read by the
/// sums (positions `1 ..= N + k - 1`).
pub fn block_sweep(
    source: &dyn SymbolSource,
    k: usize,
    weight: Option<&dyn ArithmeticWeight>,
    checkpoints: &[usize],
) -> Result<Vec<(Vec<usize>, ConvergenceReport)>> {
    if k == 0 {
        return invalid("block length must be at least 1");
    }
    validate_checkpoints(checkpoints)?;
    let last = *checkpoints.last().unwrap();
    let word = prefix(source, last + k);
    let blocks: BTreeSet<&[usize]> = word[1..].windows(k).collect();
    blocks
        .into_iter()
        .map(|b| {
            let obs = make_block_indicator(b, 0)?;
            Ok((b.to_vec(), sarnak_series(source, &obs, weight, checkpoints)?))
        })
        .collect()
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReportMetadata {
    pub system: String,
    pub observable: String,
    pub weight: String,
    pub r: Option<usize>,
    pub s: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub metadata: ReportMetadata,
    pub checkpoints: Vec<usize>,
    pub values: Vec<Complex64>,
}

#[derive(Serialize)]
struct JsonRow {
    #[serde(rename = "N")]
    n: usize,
    real: f64,
    imag: f64,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    metadata: &'a ReportMetadata,
    rows: Vec<JsonRow>,
}

impl ConvergenceReport {
    fn from_sums(checkpoints: &[usize], mut sum_to: impl FnMut(usize) -> Complex64) -> Self {
        let values = checkpoints.iter().map(|&m| sum_to(m) / m as f64).collect();
        Self { metadata: ReportMetadata::default(), checkpoints: checkpoints.to_vec(), values }
    }

    pub fn final_value(&self) -> Complex64 {
        *self.values.last().expect("reports have at least one checkpoint")
    }

    pub fn sample_size(&self) -> usize {
        *self.checkpoints.last().expect("reports have at least one checkpoint")
    }

    /// Header `N,real,imag`, twelve significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,real,imag\n");
        for (m, v) in self.checkpoints.iter().zip(&self.values) {
            let _ = writeln!(out, "{m},{},{}", format_g12(v.re), format_g12(v.im));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows = self
            .checkpoints
            .iter()
            .zip(&self.values)
            .map(|(&n, v)| JsonRow { n, real: v.re, imag: v.im })
            .collect();
        let mut s = serde_json::to_string_pretty(&JsonReport { metadata: &self.metadata, rows })
            .expect("reports serialise");
        s.push('\n');
        s
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Csv => self.to_csv(),
            ReportFormat::Json => self.to_json(),
        }
    }

    pub fn write(&self, path: &Path, format: ReportFormat) -> Result<()> {
        std::fs::write(path, self.render(format)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

/// C `printf("%.12g")`, with negative zero printed as `0`.
pub fn format_g12(x: f64) -> String {
    const P: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", (P - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let s = if !(-4..P).contains(&exp) {
        let m = strip_zeros(mantissa);
        format!("{m}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        strip_zeros(&format!("{:.*}", (P - 1 - exp) as usize, x)).to_string()
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Weighted by an arithmetic function, or unweighted (`None`).
    Sarnak(Option<WeightKind>),
    Kbsz { r: usize, s: usize },
}

/// A fully resolved experiment.
#[derive(Clone)]
pub struct ExperimentConfig {
    pub name: String,
    pub system_name: String,
    pub observable_name: String,
    pub source: Arc<dyn SymbolSource>,
    pub observable: Observable,
    pub mode: Mode,
    pub sample_size: usize,
    /// Defaults to [`pow2_checkpoints`].
    pub checkpoints: Option<Vec<usize>>,
}

impl std::fmt::Debug for ExperimentConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExperimentConfig")
            .field("name", &self.name)
            .field("system", &self.system_name)
            .field("observable", &self.observable_name)
            .field("mode", &self.mode)
            .field("sample_size", &self.sample_size)
            .finish()
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl ExperimentConfig {
    pub fn checkpoints(&self) -> Vec<usize> {
        self.checkpoints.clone().unwrap_or_else(|| pow2_checkpoints(self.sample_size))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sample_size == 0 {
            return invalid("sample size must be positive");
        }
        let cps = self.checkpoints();
        validate_checkpoints(&cps)?;
        if cps.last() > Some(&self.sample_size) {
            return invalid("checkpoints exceed the sample size");
        }
        if let Mode::Kbsz { r, s } = self.mode {
            if r == s || !is_prime(r) || !is_prime(s) {
                return invalid(format!("KBSZ needs two different primes, got ({r}, {s})"));
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<ConvergenceReport> {
        self.validate()?;
        let cps = self.checkpoints();
        let mut report = match self.mode {
            Mode::Sarnak(None) => sarnak_series(self.source.as_ref(), &self.observable, None, &cps)?,
            Mode::Sarnak(Some(kind)) => {
                let table = build_weight_table(kind, *cps.last().unwrap())?;
                sarnak_series(self.source.as_ref(), &self.observable, Some(&table), &cps)?
            }
            Mode::Kbsz { r, s } => kbsz_series(self.source.as_ref(), &self.observable, r, s, &cps)?,
        };
        report.metadata.system = self.system_name.clone();
        report.metadata.observable = self.observable_name.clone();
        report.metadata.weight = match self.mode {
            Mode::Sarnak(Some(kind)) => kind.to_string(),
            _ => "none".into(),
        };
        Ok(report)
    }

    /// Run inside a dedicated pool; `None` uses the global pool.
    pub fn run_with_threads(&self, threads: Option<usize>) -> Result<ConvergenceReport> {
        match threads {
            None => self.run(),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?
                .install(|| self.run()),
        }
    }
}
