//! Observables on symbol sequences and empirical spectral estimates:
//! autocorrelations, Fejér periodograms, atom masses and Wiener averages.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::stream::{prefix, SymbolSource};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObservableKind {
    Walsh,
    BlockIndicator,
    SymbolTable,
    LinearCombination,
}

#[derive(Debug, Clone, PartialEq)]
enum Rule {
    Walsh(Vec<usize>),
    Block { block: Vec<usize>, offset: usize },
    Table(Vec<Complex64>),
    Sum(Vec<(Complex64, Observable)>),
}

/// A function of the symbols in a forward window `n + offsets`.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    rule: Rule,
}

const ZERO_MEAN_EPS: f64 = 1e-12;

/// `f_C(y) = (-1)^{Σ_{i∈C} y[i]}` on 0-1 sequences.
pub fn make_walsh(offsets: &[usize]) -> Observable {
    let set: BTreeSet<usize> = offsets.iter().copied().collect();
    Observable { rule: Rule::Walsh(set.into_iter().collect()) }
}

/// `1` where `y[offset..offset + |B|] = B`, else `0`.
pub fn make_block_indicator(block: &[usize], offset: usize) -> Result<Observable> {
    if block.is_empty() {
        return invalid("indicator of an empty block");
    }
    Ok(Observable { rule: Rule::Block { block: block.to_vec(), offset } })
}

/// `f(y) = values[y[0]]`; every symbol `< alphabet_size` needs a value.
pub fn make_symbol_table(values: &[Option<Complex64>], alphabet_size: usize) -> Result<Observable> {
    if values.len() < alphabet_size {
        return invalid(format!("table has {} entries for {alphabet_size} symbols", values.len()));
    }
    let table = values[..alphabet_size]
        .iter()
        .enumerate()
        .map(|(s, v)| v.ok_or(s))
        .collect::<std::result::Result<Vec<_>, _>>();
    match table {
        Ok(t) => Ok(Observable { rule: Rule::Table(t) }),
        Err(s) => invalid(format!("table has no value for symbol {s}")),
    }
}

/// `Σ c_i f_i`.
pub fn linear_combination(terms: Vec<(Complex64, Observable)>) -> Result<Observable> {
    if terms.is_empty() {
        return invalid("empty linear combination");
    }
    Ok(Observable { rule: Rule::Sum(terms) })
}

impl Observable {
    pub fn constant_one() -> Self {
        make_walsh(&[])
    }

    pub fn kind(&self) -> ObservableKind {
        match self.rule {
            Rule::Walsh(_) => ObservableKind::Walsh,
            Rule::Block { .. } => ObservableKind::BlockIndicator,
            Rule::Table(_) => ObservableKind::SymbolTable,
            Rule::Sum(_) => ObservableKind::LinearCombination,
        }
    }

    /// Sorted offsets read by the observable.
    pub fn window(&self) -> Vec<usize> {
        let mut w: BTreeSet<usize> = BTreeSet::new();
        self.collect_window(&mut w);
        w.into_iter().collect()
    }

    fn collect_window(&self, w: &mut BTreeSet<usize>) {
        match &self.rule {
            Rule::Walsh(c) => w.extend(c.iter().copied()),
            Rule::Block { block, offset } => w.extend(*offset..offset + block.len()),
            Rule::Table(_) => {
                w.insert(0);
            }
            Rule::Sum(terms) => terms.iter().for_each(|(_, f)| f.collect_window(w)),
        }
    }

    /// Symbols past `n` that must exist to evaluate at `n`.
    pub fn reach(&self) -> usize {
        self.window().last().map_or(0, |&m| m + 1)
    }

    /// For symbol tables: `Σ_g f(g) = 0`.
    pub fn zero_mean(&self) -> Option<bool> {
        match &self.rule {
            Rule::Table(t) => Some(t.iter().sum::<Complex64>().norm() < ZERO_MEAN_EPS),
            _ => None,
        }
    }

    /// Whether the observable is defined on every word over an alphabet of this size.
    pub fn check_alphabet(&self, alphabet_size: usize) -> Result<()> {
        match &self.rule {
            Rule::Walsh(c) if !c.is_empty() && alphabet_size > 2 => {
                invalid(format!("Walsh observables need a binary alphabet, got {alphabet_size} symbols"))
            }
            Rule::Table(t) if t.len() < alphabet_size => {
                invalid(format!("table covers {} of {alphabet_size} symbols", t.len()))
            }
            Rule::Sum(terms) => terms.iter().try_for_each(|(_, f)| f.check_alphabet(alphabet_size)),
            _ => Ok(()),
        }
    }

    /// Value at position `n`, reading `word[n + offset]`.
    pub fn eval_at(&self, word: &[usize], n: usize) -> Complex64 {
        match &self.rule {
            Rule::Walsh(c) => {
                let parity = c.iter().fold(0, |acc, &i| acc ^ (word[n + i] & 1));
                Complex64::new(if parity == 0 { 1.0 } else { -1.0 }, 0.0)
            }
            Rule::Block { block, offset } => {
                let start = n + offset;
                let hit = word[start..start + block.len()] == block[..];
                Complex64::new(if hit { 1.0 } else { 0.0 }, 0.0)
            }
            Rule::Table(t) => t[word[n]],
            Rule::Sum(terms) => terms.iter().map(|(c, f)| c * f.eval_at(word, n)).sum(),
        }
    }

    /// `f(S^n y)` for `n < count`, from the first `count + reach - 1` symbols.
    pub fn values(&self, source: &dyn SymbolSource, count: usize) -> Result<Vec<Complex64>> {
        self.check_alphabet(source.alphabet_size())?;
        let word = prefix(source, count + self.reach().saturating_sub(1));
        Ok((0..count).map(|n| self.eval_at(&word, n)).collect())
    }
}

/// `γ̂(n) = (1/N) Σ_{k < N-n} f(k+n) conj f(k)` for `n ≤ L`. The truncated
/// sum keeps the sequence positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrelationEstimate {
    pub max_lag: usize,
    pub sample_size: usize,
    pub values: Vec<Complex64>,
}

const DIRECT_WORK_LIMIT: usize = 1 << 24;

pub fn autocorrelation(
    source: &dyn SymbolSource,
    obs: &Observable,
    sample_size: usize,
    max_lag: usize,
) -> Result<AutocorrelationEstimate> {
    if sample_size == 0 || sample_size < 4 * max_lag {
        return invalid(format!("sample size {sample_size} must be at least 4 × max lag {max_lag} and positive"));
    }
    let f = obs.values(source, sample_size)?;
    Ok(autocorrelation_of(&f, max_lag))
}

/// Same estimator on explicit values.
pub fn autocorrelation_of(f: &[Complex64], max_lag: usize) -> AutocorrelationEstimate {
    let n = f.len();
    let values = if n.saturating_mul(max_lag + 1) <= DIRECT_WORK_LIMIT {
        direct_autocorrelation(f, max_lag)
    } else {
        fft_autocorrelation(f, max_lag)
    };
    AutocorrelationEstimate { max_lag, sample_size: n, values }
}

fn direct_autocorrelation(f: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let n = f.len();
    (0..=max_lag)
        .map(|lag| {
            let s: Complex64 = (0..n.saturating_sub(lag)).map(|k| f[k + lag] * f[k].conj()).sum();
            s / n as f64
        })
        .collect()
}

fn fft_autocorrelation(f: &[Complex64], max_lag: usize) -> Vec<Complex64> {
    let n = f.len();
    let size = (n + max_lag + 1).next_power_of_two();
    let mut buf = vec![Complex64::new(0.0, 0.0); size];
    buf[..n].copy_from_slice(f);
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for z in buf.iter_mut() {
        *z = Complex64::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    let scale = 1.0 / (size as f64 * n as f64);
    let mut out: Vec<Complex64> = buf[..=max_lag].iter().map(|z| z * scale).collect();
    // lag 0 exactly, as a real number
    out[0] = Complex64::new(f.iter().map(|z| z.norm_sqr()).sum::<f64>() / n as f64, 0.0);
    out
}

impl AutocorrelationEstimate {
    /// `γ̂(n)` for any integer lag with `|n| ≤ L`, using `γ̂(-n) = conj γ̂(n)`.
    pub fn at(&self, lag: i64) -> Complex64 {
        let v = self.values[lag.unsigned_abs() as usize];
        if lag < 0 {
            v.conj()
        } else {
            v
        }
    }
}

/// Fejér-weighted density estimate on the grid `j/M`, `j < M`.
pub fn periodogram(est: &AutocorrelationEstimate, grid_size: usize) -> Result<Vec<f64>> {
    if grid_size < 2 {
        return invalid("grid size must be at least 2");
    }
    let l = est.max_lag as i64;
    Ok((0..grid_size)
        .map(|j| {
            let mut s = 0.0;
            for n in -l..=l {
                let w = 1.0 - n.unsigned_abs() as f64 / (l + 1) as f64;
                let phase = -TAU * ((n.rem_euclid(grid_size as i64) as usize * j) % grid_size) as f64
                    / grid_size as f64;
                s += w * (est.at(n) * Complex64::from_polar(1.0, phase)).re;
            }
            s.max(0.0)
        })
        .collect())
}

/// `|(1/N) Σ_{n<N} f(n) e^{-2πi n p/q}|²`.
pub fn atom_mass(
    source: &dyn SymbolSource,
    obs: &Observable,
    p: u64,
    q: u64,
    sample_size: usize,
) -> Result<f64> {
    if q == 0 {
        return invalid("frequency denominator must be positive");
    }
    if (sample_size as u64) < q {
        return invalid(format!("sample size {sample_size} below the frequency denominator {q}"));
    }
    let f = obs.values(source, sample_size)?;
    let roots: Vec<Complex64> = (0..q).map(|k| Complex64::from_polar(1.0, -TAU * k as f64 / q as f64)).collect();
    let s: Complex64 = f
        .iter()
        .enumerate()
        .map(|(n, v)| v * roots[((n as u64 % q) * (p % q) % q) as usize])
        .sum();
    Ok((s / sample_size as f64).norm_sqr())
}

/// `(1/(L+1)) Σ_{n≤L} |γ̂(n)|²`.
pub fn wiener_average(est: &AutocorrelationEstimate) -> f64 {
    est.values.iter().map(|z| z.norm_sqr()).sum::<f64>() / (est.max_lag + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse::{HatSource, MorseSpec};
    use crate::permgrp::FiniteGroup;
    use crate::stream::{IndexedSource, PeriodicWord};

    fn tm() -> IndexedSource<impl Fn(usize) -> usize + Send + Sync> {
        IndexedSource::new(2, |n: usize| (n.count_ones() & 1) as usize)
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    /// γ(0) = 1, γ(2n) = γ(n), γ(2n+1) = -(γ(n) + γ(n+1))/2.
    fn tm_gamma(max: usize) -> Vec<f64> {
        let mut g = vec![0.0; max + 2];
        g[0] = 1.0;
        g[1] = -1.0 / 3.0;
        for n in 2..=max + 1 {
            g[n] = if n % 2 == 0 { g[n / 2] } else { -(g[n / 2] + g[n / 2 + 1]) / 2.0 };
        }
        g.truncate(max + 1);
        g
    }

    #[test]
    fn walsh() {
        let src = tm();
        let one = make_walsh(&[]);
        assert!(one.values(&src, 20).unwrap().iter().all(|&v| v == c(1.0)));
        let w0 = make_walsh(&[0]);
        let v = w0.values(&src, 4).unwrap();
        assert_eq!(v, vec![c(1.0), c(-1.0), c(-1.0), c(1.0)]);

        let hat = HatSource::new(MorseSpec::repeating(FiniteGroup::cyclic(2).unwrap(), vec![0, 1]).unwrap(), FiniteGroup::cyclic(2).unwrap()).unwrap();
        let pair = make_walsh(&[0, 1]).values(&src, 1000).unwrap();
        let via_hat = w0.values(&hat, 1000).unwrap();
        assert_eq!(pair, via_hat);

        let three = PeriodicWord::new(vec![0, 1, 2], 3).unwrap();
        assert!(w0.values(&three, 4).is_err());
    }

    #[test]
    fn indicators() {
        let src = tm();
        let n = 1 << 16;
        let parts: Vec<Vec<Complex64>> = (0..2)
            .map(|a| make_block_indicator(&[a], 0).unwrap().values(&src, n).unwrap())
            .collect();
        assert!((0..n).all(|i| parts[0][i] + parts[1][i] == c(1.0)));
        let freq = |b: &[usize]| {
            make_block_indicator(b, 0).unwrap().values(&src, n).unwrap().iter().sum::<Complex64>().re / n as f64
        };
        assert!((freq(&[0, 1]) - 1.0 / 3.0).abs() < 1e-3);
        assert_eq!(freq(&[0, 0, 0]), 0.0);
        assert!(make_block_indicator(&[], 0).is_err());
        assert_eq!(make_block_indicator(&[1, 1], 2).unwrap().window(), vec![2, 3]);
    }

    #[test]
    fn tables() {
        let ones = make_symbol_table(&[Some(c(1.0)), Some(c(1.0))], 2).unwrap();
        assert_eq!(ones.zero_mean(), Some(false));
        let sign = make_symbol_table(&[Some(c(1.0)), Some(c(-1.0))], 2).unwrap();
        assert_eq!(sign.zero_mean(), Some(true));
        assert_eq!(sign.values(&tm(), 64).unwrap(), make_walsh(&[0]).values(&tm(), 64).unwrap());
        assert!(make_symbol_table(&[Some(c(1.0)), None], 2).is_err());

        // sign character of S_3 via the permutation parity of each element
        let (s3, emb) = FiniteGroup::symmetric(3).unwrap();
        let sgn: Vec<Option<Complex64>> = emb
            .images()
            .iter()
            .map(|p| {
                let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p.apply(i) > p.apply(j)).count();
                Some(c(if inversions % 2 == 0 { 1.0 } else { -1.0 }))
            })
            .collect();
        assert_eq!(make_symbol_table(&sgn, s3.order()).unwrap().zero_mean(), Some(true));
    }

    #[test]
    fn autocorrelations_follow_recursion() {
        let est = autocorrelation(&tm(), &make_walsh(&[0]), 1 << 20, 64).unwrap();
        assert_eq!(est.values[0], c(1.0));
        assert!((est.values[1].re + 1.0 / 3.0).abs() < 1e-2);
        assert!((est.values[3].re - 1.0 / 3.0).abs() < 1e-2);
        for (n, g) in tm_gamma(64).iter().enumerate() {
            assert!((est.values[n].re - g).abs() < 5e-3, "lag {n}");
        }
        assert!(autocorrelation(&tm(), &make_walsh(&[0]), 100, 26).is_err());
    }

    #[test]
    fn fft_matches_direct() {
        let f: Vec<Complex64> = (0..3000)
            .map(|n: usize| Complex64::new(((n * 7919) % 13) as f64 - 6.0, ((n * 31) % 5) as f64))
            .collect();
        let a = direct_autocorrelation(&f, 40);
        let b = fft_autocorrelation(&f, 40);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9);
        }
    }

    #[test]
    fn autocorrelation_bounded_by_zero_lag() {
        let src = PeriodicWord::new(vec![0, 0, 1, 0, 1, 1, 1], 2).unwrap();
        let est = autocorrelation(&src, &make_walsh(&[0]), 4096, 200).unwrap();
        let eps = 4.0 * 200.0 / 4096.0;
        assert!(est.values.iter().all(|v| v.norm() <= est.values[0].re + eps));
    }

    #[test]
    fn periodograms() {
        let one = PeriodicWord::new(vec![0], 2).unwrap();
        let est = autocorrelation(&one, &make_walsh(&[0]), 1024, 32).unwrap();
        let p = periodogram(&est, 64).unwrap();
        let peak = p.iter().cloned().fold(0.0, f64::max);
        assert_eq!(p[0], peak);
        assert!(p[0] > 30.0 && p[32] < 0.05);
        let mean = p.iter().sum::<f64>() / 64.0;
        assert!((mean - est.values[0].re).abs() < 1e-9);
        assert!(periodogram(&est, 1).is_err());

        let est = autocorrelation(&tm(), &make_walsh(&[0]), 1 << 16, 128).unwrap();
        assert!(periodogram(&est, 256).unwrap().iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn period_doubling_peaks_are_dyadic() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let pd = HatSource::new(MorseSpec::repeating(z2.clone(), vec![0, 1]).unwrap(), z2).unwrap();
        let w = make_walsh(&[0]);
        let est = autocorrelation(&pd, &w, 1 << 16, 256).unwrap();
        let grid = 64;
        let p = periodogram(&est, grid).unwrap();
        let mut order: Vec<usize> = (0..grid).collect();
        order.sort_by(|&a, &b| p[b].total_cmp(&p[a]));
        let mut masses = Vec::new();
        for &j in &order[..4] {
            // top peaks sit at frequencies k/2^t with a visible atom
            let g = gcd(j, grid);
            let (num, den) = ((j / g) as u64, (grid / g) as u64);
            assert!(den.is_power_of_two());
            masses.push(atom_mass(&pd, &w, num, den, 1 << 14).unwrap());
        }
        assert!(masses.iter().all(|&m| m > 1e-3), "{masses:?}");
    }

    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    #[test]
    fn atoms() {
        let one = PeriodicWord::new(vec![0], 2).unwrap();
        assert_eq!(atom_mass(&one, &Observable::constant_one(), 0, 1, 100).unwrap(), 1.0);
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let pd = HatSource::new(MorseSpec::repeating(z2.clone(), vec![0, 1]).unwrap(), z2).unwrap();
        let m = atom_mass(&pd, &make_walsh(&[0]), 0, 1, 1 << 18).unwrap();
        assert!((m - 1.0 / 9.0).abs() < 1e-2);
        assert!(atom_mass(&tm(), &make_walsh(&[0]), 0, 1, 1 << 18).unwrap() < 1e-2);
        let alt = PeriodicWord::new(vec![0, 1], 2).unwrap();
        assert!((atom_mass(&alt, &make_walsh(&[0]), 1, 2, 1000).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wiener() {
        let one = PeriodicWord::new(vec![0], 2).unwrap();
        let est = autocorrelation(&one, &make_walsh(&[0]), 4096, 64).unwrap();
        assert!((wiener_average(&est) - 1.0).abs() < 0.02);
    }

    #[test]
    fn combinations() {
        let f = make_walsh(&[0]);
        let g = make_block_indicator(&[1, 0], 1).unwrap();
        let h = linear_combination(vec![(c(2.0), f.clone()), (Complex64::new(0.0, 1.0), g.clone())]).unwrap();
        assert_eq!(h.window(), vec![0, 1, 2]);
        let word = tm().open().take_vec(40);
        for n in 0..30 {
            assert_eq!(h.eval_at(&word, n), c(2.0) * f.eval_at(&word, n) + Complex64::new(0.0, 1.0) * g.eval_at(&word, n));
        }
    }
}
