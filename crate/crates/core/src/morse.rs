//! Generalized Morse sequences `x = b^0 × b^1 × ...` over a finite group,
//! their difference sequences `x̂[n] = x[n+1] x[n]^{-1}` and the Toeplitz
//! structure of `x̂`.
//!
//! With `B × C = (B∘c[0]) (B∘c[1]) ...`, the symbol at `n` with mixed-radix
//! digits `d_0, d_1, ...` (least significant first, radices `λ_t`) is
//! `b^0[d_0] · b^1[d_1] · ...`.

use std::collections::BTreeSet;
use std::ops::Range;

use crate::error::{invalid, Error, Result};
use crate::permgrp::FiniteGroup;
use crate::seq::EventuallyPeriodic;
use crate::stream::{DigitCursor, DigitHierarchy, SymbolSource, SymbolStream};

/// Largest word this module will materialise.
pub const MAX_WORD_LEN: usize = 1 << 28;

pub const DEFAULT_TOEPLITZ_REPEATS: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorseSpec {
    group: FiniteGroup,
    blocks: EventuallyPeriodic<Vec<usize>>,
}

impl MorseSpec {
    /// Every block needs length at least 2, identity first, symbols in the group.
    pub fn new(group: FiniteGroup, blocks: EventuallyPeriodic<Vec<usize>>) -> Result<Self> {
        for (t, b) in blocks.representatives().enumerate() {
            if b.len() < 2 {
                return invalid(format!("block {t} has length {} (need at least 2)", b.len()));
            }
            if b[0] != group.identity() {
                return invalid(format!("block {t} does not start with the identity"));
            }
            if let Some(&g) = b.iter().find(|&&g| g >= group.order()) {
                return invalid(format!("block {t} uses element {g} outside a group of order {}", group.order()));
            }
        }
        Ok(Self { group, blocks })
    }

    /// The same block at every level.
    pub fn repeating(group: FiniteGroup, block: Vec<usize>) -> Result<Self> {
        Self::new(group, EventuallyPeriodic::constant(block))
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn blocks(&self) -> &EventuallyPeriodic<Vec<usize>> {
        &self.blocks
    }

    pub fn block(&self, t: usize) -> &[usize] {
        self.blocks.get(t)
    }

    pub fn lambda(&self, t: usize) -> usize {
        self.blocks.get(t).len()
    }

    /// `n_t = λ_0 ⋯ λ_{t-1}`, with `n_0 = 1`.
    pub fn n(&self, t: usize) -> Result<usize> {
        (0..t).try_fold(1usize, |acc, i| {
            acc.checked_mul(self.lambda(i))
                .ok_or_else(|| Error::Capacity(format!("n_{t} overflows")))
        })
    }

    /// `c_t = b^0 × ... × b^{t-1}`; `c_0 = (e)`.
    pub fn stage_word(&self, t: usize) -> Result<Vec<usize>> {
        let n = self.n(t)?;
        if n > MAX_WORD_LEN {
            return Err(Error::Capacity(format!("c_{t} has {n} symbols")));
        }
        let mut c = vec![self.group.identity()];
        for i in 0..t {
            c = block_product(&c, self.block(i), &self.group);
        }
        Ok(c)
    }

    /// Constant specs give a periodic (constant) sequence.
    pub fn is_degenerate(&self) -> bool {
        self.blocks.representatives().all(|b| b.iter().all(|&g| g == self.group.identity()))
    }

    /// Primes dividing some `λ_t`. Always finite here, since blocks are
    /// eventually periodic.
    pub fn lambda_prime_support(&self) -> BTreeSet<usize> {
        let mut primes = BTreeSet::new();
        for b in self.blocks.representatives() {
            let mut m = b.len();
            let mut p = 2;
            while p * p <= m {
                while m % p == 0 {
                    primes.insert(p);
                    m /= p;
                }
                p += 1;
            }
            if m > 1 {
                primes.insert(m);
            }
        }
        primes
    }

    /// Symbol at position `n`, by direct digit expansion.
    pub fn symbol(&self, n: usize) -> usize {
        MorseLevels(self).evaluate(n)
    }

    pub fn toeplitz_stage(&self, t: usize) -> Result<ToeplitzStage> {
        if t == 0 {
            return invalid("Toeplitz stages start at t = 1");
        }
        let c = self.stage_word(t)?;
        Ok(ToeplitzStage { t, n_t: c.len(), filled: hat(&c, &self.group)? })
    }

    /// Values of the Morse cocycle on the tower levels `D^t_0 .. D^t_{n_t-2}`.
    pub fn cocycle_values(&self, t: usize) -> Result<Vec<usize>> {
        Ok(self.toeplitz_stage(t)?.filled)
    }
}

/// `B × C`: position `i + |B| j` holds `B[i] · C[j]`.
pub fn block_product(b: &[usize], c: &[usize], group: &FiniteGroup) -> Vec<usize> {
    let mut out = Vec::with_capacity(b.len() * c.len());
    for &cj in c {
        out.extend(b.iter().map(|&bi| group.mul(bi, cj)));
    }
    out
}

/// `ŷ[n] = y[n+1] · y[n]^{-1}`; one symbol shorter than the input.
pub fn hat(word: &[usize], group: &FiniteGroup) -> Result<Vec<usize>> {
    if word.is_empty() {
        return invalid("hat of an empty word");
    }
    Ok(word.windows(2).map(|w| group.mul(w[1], group.inv(w[0]))).collect())
}

struct MorseLevels<'a>(&'a MorseSpec);

impl DigitHierarchy for MorseLevels<'_> {
    fn radix(&self, level: usize) -> usize {
        self.0.lambda(level)
    }

    fn top(&self) -> usize {
        self.0.group.identity()
    }

    fn step(&self, level: usize, digit: usize, above: usize) -> usize {
        self.0.group.mul(self.0.block(level)[digit], above)
    }
}

impl SymbolSource for MorseSpec {
    fn alphabet_size(&self) -> usize {
        self.group.order()
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(DigitCursor::new(MorseLevels(self)))
    }
}

/// The difference sequence of another group-valued source.
pub struct HatSource<S> {
    inner: S,
    group: FiniteGroup,
}

impl<S: SymbolSource> HatSource<S> {
    pub fn new(inner: S, group: FiniteGroup) -> Result<Self> {
        if inner.alphabet_size() > group.order() {
            return invalid("source alphabet is larger than the group");
        }
        Ok(Self { inner, group })
    }
}

struct HatCursor<'a> {
    inner: Box<dyn SymbolStream + 'a>,
    group: &'a FiniteGroup,
    previous: usize,
}

impl SymbolStream for HatCursor<'_> {
    fn position(&self) -> usize {
        self.inner.position() - 1
    }

    fn next_symbol(&mut self) -> usize {
        let current = self.inner.next_symbol();
        let out = self.group.mul(current, self.group.inv(self.previous));
        self.previous = current;
        out
    }

    fn seek(&mut self, pos: usize) {
        self.inner.seek(pos);
        self.previous = self.inner.next_symbol();
    }
}

impl<S: SymbolSource> SymbolSource for HatSource<S> {
    fn alphabet_size(&self) -> usize {
        self.group.order()
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        let mut inner = self.inner.open();
        let previous = inner.next_symbol();
        Box::new(HatCursor { inner, group: &self.group, previous })
    }
}

/// `x̂` at level `t`: `filled = ĉ_t` of length `n_t - 1`, holes at
/// positions `≡ n_t - 1 (mod n_t)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzStage {
    pub t: usize,
    pub n_t: usize,
    pub filled: Vec<usize>,
}

impl ToeplitzStage {
    pub fn hole_residue(&self) -> usize {
        self.n_t - 1
    }

    /// Value at position `n`, or `None` on a hole.
    pub fn value_at(&self, n: usize) -> Option<usize> {
        self.filled.get(n % self.n_t).copied()
    }
}

/// Recover blocks `b^0 .. b^{k-1}` from the stages `ĉ_1 .. ĉ_k`.
///
/// `b^t[0] = e` and `b^t[j] = ĉ_{t+1}[j n_t - 1] · c_t[n_t - 1] · b^t[j-1]`,
/// with `n_0 = 1` and `c_0 = (e)`. The result is re-checked by recomputing
/// `hat(c_k)`.
pub fn blocks_from_cocycle(
    stages: &[Vec<usize>],
    lambdas: &[usize],
    group: &FiniteGroup,
) -> Result<Vec<Vec<usize>>> {
    let k = stages.len();
    if lambdas.len() < k {
        return invalid(format!("{k} stages need {k} scales, got {}", lambdas.len()));
    }
    if let Some(l) = lambdas[..k].iter().find(|&&l| l < 2) {
        return invalid(format!("scale {l} is below 2"));
    }
    let mut n = vec![1usize];
    for &l in &lambdas[..k] {
        let next = n.last().unwrap().checked_mul(l).filter(|&v| v <= MAX_WORD_LEN);
        n.push(next.ok_or_else(|| Error::Capacity("stage length overflow".into()))?);
    }
    for (i, stage) in stages.iter().enumerate() {
        let t = i + 1;
        if stage.len() != n[t] - 1 {
            return invalid(format!("stage {t} has length {}, expected {}", stage.len(), n[t] - 1));
        }
        if let Some(&g) = stage.iter().find(|&&g| g >= group.order()) {
            return invalid(format!("stage {t} uses element {g} outside the group"));
        }
    }
    for i in 1..k {
        let (prev, cur, nt) = (&stages[i - 1], &stages[i], n[i]);
        for (pos, &v) in cur.iter().enumerate() {
            if pos % nt != nt - 1 && v != prev[pos % nt] {
                return invalid(format!(
                    "stage {} disagrees with stage {} at position {pos}",
                    i + 1,
                    i
                ));
            }
        }
    }

    let e = group.identity();
    let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(k);
    // last symbol of c_t
    let mut c_last = e;
    for t in 0..k {
        let stage = &stages[t];
        let mut b = vec![e; lambdas[t]];
        for j in 1..lambdas[t] {
            let step = group.mul(stage[j * n[t] - 1], c_last);
            b[j] = group.mul(step, b[j - 1]);
        }
        c_last = group.mul(c_last, b[lambdas[t] - 1]);
        blocks.push(b);
    }

    if k > 0 {
        let mut c = vec![e];
        for b in &blocks {
            c = block_product(&c, b, group);
        }
        let recomputed = hat(&c, group)?;
        if let Some(pos) = recomputed.iter().zip(&stages[k - 1]).position(|(a, b)| a != b) {
            return invalid(format!("stages are not a Morse cocycle: mismatch at position {pos} of stage {k}"));
        }
    }
    Ok(blocks)
}

/// Kakutani sequences over `Z/2`: block `01` where the choice is set, `00` otherwise.
pub fn kakutani_spec(choices: &EventuallyPeriodic<bool>) -> MorseSpec {
    let blocks = choices.map(|&c| if c { vec![0, 1] } else { vec![0, 0] });
    MorseSpec::new(FiniteGroup::cyclic(2).expect("Z/2"), blocks).expect("Kakutani blocks are valid")
}

/// For each position `n` in `positions`, the least level `t` (and its
/// period) such that `word` is constant on `n, n + p_t, ..., n + (K-1) p_t`,
/// where `periods = [p_1, p_2, ...]`.
pub fn toeplitz_check(
    word: &[usize],
    positions: Range<usize>,
    periods: &[usize],
    repeats: usize,
) -> Result<Vec<Option<(usize, usize)>>> {
    if repeats < 2 {
        return invalid("at least two repeats are needed to see a period");
    }
    let Some(&largest) = periods.iter().max() else {
        return Ok(positions.map(|_| None).collect());
    };
    if positions.is_empty() {
        return Ok(Vec::new());
    }
    let need = (positions.end - 1) + (repeats - 1) * largest + 1;
    if word.len() < need {
        return invalid(format!("prefix of length {} too short, need {need}", word.len()));
    }
    Ok(positions
        .map(|n| {
            periods.iter().enumerate().find_map(|(i, &p)| {
                let v = word[n];
                (1..repeats).all(|j| word[n + j * p] == v).then_some((i + 1, p))
            })
        })
        .collect())
}
