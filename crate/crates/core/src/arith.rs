//! Moebius and Liouville tables from a linear smallest-prime-factor sieve,
//! prime lists, and binary digit-pattern parities.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::stream::{SymbolSource, SymbolStream};

/// Largest table the crate will build (2^26 entries).
pub const MAX_TABLE_LIMIT: usize = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightKind {
    Moebius,
    Liouville,
}

impl fmt::Display for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WeightKind::Moebius => "moebius",
            WeightKind::Liouville => "liouville",
        })
    }
}

/// An arithmetic weight `n -> w(n)` defined for `1 <= n <= limit()`.
pub trait ArithmeticWeight: Sync {
    fn limit(&self) -> usize;

    fn weight(&self, n: usize) -> i8;
}

#[derive(Debug, Clone)]
pub struct MultiplicativeWeightTable {
    kind: WeightKind,
    // index 0 is unused
    values: Vec<i8>,
}

/// Smallest prime factor for every `2 <= n <= limit` plus the primes, from
/// the linear (Euler) sieve. Each composite is crossed out exactly once.
fn linear_sieve(limit: usize) -> (Vec<u32>, Vec<u32>) {
    let mut spf = vec![0u32; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if spf[n] == 0 {
            spf[n] = n as u32;
            primes.push(n as u32);
        }
        let p_max = spf[n];
        for &p in &primes {
            let m = n * p as usize;
            if p > p_max || m > limit {
                break;
            }
            spf[m] = p;
        }
    }
    (spf, primes)
}

pub fn build_weight_table(kind: WeightKind, limit: usize) -> Result<MultiplicativeWeightTable> {
    if limit == 0 {
        return invalid("weight table limit must be at least 1");
    }
    if limit > MAX_TABLE_LIMIT {
        return Err(Error::Capacity(format!(
            "weight table limit {limit} exceeds the supported maximum {MAX_TABLE_LIMIT}"
        )));
    }
    let (spf, _) = linear_sieve(limit);
    let mut values = vec![0i8; limit + 1];
    values[1] = 1;
    for n in 2..=limit {
        let p = spf[n] as usize;
        let m = n / p;
        values[n] = match kind {
            WeightKind::Liouville => -values[m],
            WeightKind::Moebius => {
                if m.is_multiple_of(p) {
                    0
                } else {
                    -values[m]
                }
            }
        };
    }
    Ok(MultiplicativeWeightTable { kind, values })
}

impl MultiplicativeWeightTable {
    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// `values()[i]` is the weight of `i + 1`.
    pub fn values(&self) -> &[i8] {
        &self.values[1..]
    }

    pub fn get(&self, n: usize) -> Option<i8> {
        (n >= 1 && n < self.values.len()).then(|| self.values[n])
    }
}

impl ArithmeticWeight for MultiplicativeWeightTable {
    fn limit(&self) -> usize {
        self.values.len() - 1
    }

    fn weight(&self, n: usize) -> i8 {
        self.values[n]
    }
}

pub fn primes_up_to(limit: usize) -> Vec<usize> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for n in 2..=limit {
        if composite[n] {
            continue;
        }
        primes.push(n);
        let mut m = n.saturating_mul(n);
        while m <= limit {
            composite[m] = true;
            m += n;
        }
    }
    primes
}

/// A binary block with wildcards, e.g. `1**1` or `1*0`. Read most
/// significant symbol first, like the binary expansion it is matched against.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitPattern {
    // Some(bit) for a literal, None for a wildcard
    symbols: Vec<Option<bool>>,
    care_mask: u64,
    value: u64,
}

impl DigitPattern {
    pub fn new(symbols: Vec<Option<bool>>) -> Result<Self> {
        if symbols.len() < 2 {
            return invalid("digit pattern needs at least two symbols");
        }
        if symbols.len() > 63 {
            return invalid("digit pattern longer than 63 symbols");
        }
        if symbols[0] != Some(true) {
            return invalid("digit pattern must start with a literal 1");
        }
        if symbols[symbols.len() - 1].is_none() {
            return invalid("digit pattern must end with a literal bit");
        }
        let mut care_mask = 0u64;
        let mut value = 0u64;
        for s in &symbols {
            care_mask <<= 1;
            value <<= 1;
            if let Some(bit) = s {
                care_mask |= 1;
                value |= *bit as u64;
            }
        }
        Ok(Self { symbols, care_mask, value })
    }

    /// `1`, followed by `gaps` wildcards, followed by `terminal_bit`.
    pub fn gapped(gaps: usize, terminal_bit: bool) -> Result<Self> {
        let mut symbols = vec![Some(true)];
        symbols.extend(std::iter::repeat_n(None, gaps));
        symbols.push(Some(terminal_bit));
        Self::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn terminal_bit(&self) -> bool {
        self.symbols[self.symbols.len() - 1] == Some(true)
    }

    pub fn symbols(&self) -> &[Option<bool>] {
        &self.symbols
    }
}

impl FromStr for DigitPattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| match c {
                '1' => Ok(Some(true)),
                '0' => Ok(Some(false)),
                '*' | '∗' => Ok(None),
                other => invalid(format!("unexpected character {other:?} in digit pattern")),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols)
    }
}

impl fmt::Display for DigitPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            f.write_str(match s {
                Some(true) => "1",
                Some(false) => "0",
                None => "*",
            })?;
        }
        Ok(())
    }
}

/// Parity of the number of (overlapping) occurrences of `pattern` in the
/// binary expansion of `n` (no leading zeros; `0` has the empty expansion).
pub fn pattern_parity(n: u64, pattern: &DigitPattern) -> u8 {
    let bits = 64 - n.leading_zeros() as usize;
    let len = pattern.len();
    if bits < len {
        return 0;
    }
    let mut count = 0u32;
    for shift in 0..=(bits - len) {
        if (n >> shift) & pattern.care_mask == pattern.value {
            count += 1;
        }
    }
    (count & 1) as u8
}

/// `n ↦ pattern_parity(n)` as a 0-1 source (Rudin-Shapiro type sequences).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternParitySource {
    pattern: DigitPattern,
}

impl PatternParitySource {
    pub fn new(pattern: DigitPattern) -> Self {
        Self { pattern }
    }

    pub fn pattern(&self) -> &DigitPattern {
        &self.pattern
    }
}

struct PatternCursor<'a> {
    pattern: &'a DigitPattern,
    position: usize,
}

impl SymbolStream for PatternCursor<'_> {
    fn position(&self) -> usize {
        self.position
    }

    fn next_symbol(&mut self) -> usize {
        let v = pattern_parity(self.position as u64, self.pattern);
        self.position += 1;
        v as usize
    }

    fn seek(&mut self, pos: usize) {
        self.position = pos;
    }
}

impl SymbolSource for PatternParitySource {
    fn alphabet_size(&self) -> usize {
        2
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(PatternCursor { pattern: &self.pattern, position: 0 })
    }
}
