//! Symbol streams: lazily generated one-sided sequences with positioned reads.
//!
//! Every generator in the crate (substitution fixed points, Morse sequences,
//! Veech sequences, pattern-parity sequences) is exposed twice: as a
//! [`SymbolStream`] cursor that walks forward in amortised constant time, and
//! as a [`SymbolSource`] that can open any number of independent cursors. The
//! second form is what the parallel harness uses: each index range gets its
//! own cursor, seeks to the range start and reads a block.

use rayon::prelude::*;

/// A single-consumer cursor over an infinite word.
pub trait SymbolStream: Send {
    /// Index of the symbol the next call to [`next_symbol`](Self::next_symbol) returns.
    fn position(&self) -> usize;

    fn next_symbol(&mut self) -> usize;

    /// Reposition the cursor so that the next symbol read is `pos`.
    fn seek(&mut self, pos: usize);

    fn fill(&mut self, buf: &mut [usize]) {
        for slot in buf {
            *slot = self.next_symbol();
        }
    }

    fn take_vec(&mut self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        self.fill(&mut out);
        out
    }
}

/// Something that can hand out fresh cursors over the same word.
pub trait SymbolSource: Send + Sync {
    /// Symbols produced are always `< alphabet_size()`.
    fn alphabet_size(&self) -> usize;

    fn open(&self) -> Box<dyn SymbolStream + '_>;
}

const PREFIX_CHUNK: usize = 1 << 15;

/// Materialise the first `len` symbols of a source. Chunks are generated in
/// parallel by independent cursors; the result does not depend on the
/// number of worker threads.
pub fn prefix(source: &dyn SymbolSource, len: usize) -> Vec<usize> {
    let mut out = vec![0usize; len];
    out.par_chunks_mut(PREFIX_CHUNK)
        .enumerate()
        .for_each(|(i, chunk)| {
            let mut cursor = source.open();
            cursor.seek(i * PREFIX_CHUNK);
            cursor.fill(chunk);
        });
    out
}

/// A level-by-level description of a sequence whose `n`-th symbol is found by
/// expanding `n` in a mixed radix and folding the digits from the most
/// significant one down.
///
/// `step(level, 0, top())` must equal `top()`, so leading zero digits are
/// harmless.
pub trait DigitHierarchy: Send + Sync {
    fn radix(&self, level: usize) -> usize;

    fn top(&self) -> usize;

    /// State at `level` given the digit there and the state one level up.
    fn step(&self, level: usize, digit: usize, above: usize) -> usize;

    fn evaluate(&self, mut n: usize) -> usize {
        let mut digits = Vec::new();
        let mut level = 0;
        while n > 0 {
            let r = self.radix(level);
            digits.push(n % r);
            n /= r;
            level += 1;
        }
        digits
            .iter()
            .enumerate()
            .rev()
            .fold(self.top(), |state, (level, &d)| self.step(level, d, state))
    }
}

/// Odometer-style cursor over a [`DigitHierarchy`]: incrementing the position
/// only recomputes the levels touched by the carry.
pub struct DigitCursor<H> {
    hierarchy: H,
    position: usize,
    digits: Vec<usize>,
    // states[j] = state after folding digits j.. ; output is states[0]
    states: Vec<usize>,
}

impl<H: DigitHierarchy> DigitCursor<H> {
    pub fn new(hierarchy: H) -> Self {
        Self { hierarchy, position: 0, digits: Vec::new(), states: Vec::new() }
    }

    fn current(&self) -> usize {
        self.states.first().copied().unwrap_or_else(|| self.hierarchy.top())
    }

    fn recompute_from(&mut self, level: usize) {
        let len = self.digits.len();
        self.states.resize(len, 0);
        if len == 0 {
            return;
        }
        for j in (0..=level.min(len.saturating_sub(1))).rev() {
            let above = if j + 1 < len { self.states[j + 1] } else { self.hierarchy.top() };
            self.states[j] = self.hierarchy.step(j, self.digits[j], above);
        }
    }

    fn increment(&mut self) {
        let mut level = 0;
        loop {
            if level == self.digits.len() {
                self.digits.push(1);
                break;
            }
            if self.digits[level] + 1 < self.hierarchy.radix(level) {
                self.digits[level] += 1;
                break;
            }
            self.digits[level] = 0;
            level += 1;
        }
        self.recompute_from(level);
        self.position += 1;
    }
}

impl<H: DigitHierarchy> SymbolStream for DigitCursor<H> {
    fn position(&self) -> usize {
        self.position
    }

    fn next_symbol(&mut self) -> usize {
        let out = self.current();
        self.increment();
        out
    }

    fn seek(&mut self, pos: usize) {
        self.digits.clear();
        let mut n = pos;
        let mut level = 0;
        while n > 0 {
            let r = self.hierarchy.radix(level);
            self.digits.push(n % r);
            n /= r;
            level += 1;
        }
        self.position = pos;
        let top = self.digits.len();
        self.recompute_from(top);
    }
}

/// `word word word ...`
#[derive(Debug, Clone)]
pub struct PeriodicWord {
    word: Vec<usize>,
    alphabet_size: usize,
}

impl PeriodicWord {
    pub fn new(word: Vec<usize>, alphabet_size: usize) -> crate::Result<Self> {
        if word.is_empty() {
            return crate::error::invalid("periodic word must be non-empty");
        }
        if let Some(&s) = word.iter().find(|&&s| s >= alphabet_size) {
            return crate::error::invalid(format!("symbol {s} outside alphabet of size {alphabet_size}"));
        }
        Ok(Self { word, alphabet_size })
    }
}

struct PeriodicCursor<'a> {
    word: &'a [usize],
    position: usize,
}

impl SymbolStream for PeriodicCursor<'_> {
    fn position(&self) -> usize {
        self.position
    }

    fn next_symbol(&mut self) -> usize {
        let s = self.word[self.position % self.word.len()];
        self.position += 1;
        s
    }

    fn seek(&mut self, pos: usize) {
        self.position = pos;
    }
}

impl SymbolSource for PeriodicWord {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(PeriodicCursor { word: &self.word, position: 0 })
    }
}

/// A sequence given by a closed formula in the position.
pub struct IndexedSource<F> {
    alphabet_size: usize,
    f: F,
}

impl<F: Fn(usize) -> usize + Send + Sync> IndexedSource<F> {
    pub fn new(alphabet_size: usize, f: F) -> Self {
        Self { alphabet_size, f }
    }
}

struct IndexedCursor<'a, F> {
    f: &'a F,
    position: usize,
}

impl<F: Fn(usize) -> usize + Send + Sync> SymbolStream for IndexedCursor<'_, F> {
    fn position(&self) -> usize {
        self.position
    }

    fn next_symbol(&mut self) -> usize {
        let s = (self.f)(self.position);
        self.position += 1;
        s
    }

    fn seek(&mut self, pos: usize) {
        self.position = pos;
    }
}

impl<F: Fn(usize) -> usize + Send + Sync> SymbolSource for IndexedSource<F> {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(IndexedCursor { f: &self.f, position: 0 })
    }
}

/// Letter-to-letter recoding of another source (e.g. a four-letter fixed
/// point sent to a 0-1 sequence).
pub struct CodedSource<S> {
    inner: S,
    code: Vec<usize>,
    alphabet_size: usize,
}

impl<S: SymbolSource> CodedSource<S> {
    pub fn new(inner: S, code: Vec<usize>) -> crate::Result<Self> {
        if code.len() != inner.alphabet_size() {
            return crate::error::invalid(format!(
                "code has {} entries but the source alphabet has {} letters",
                code.len(),
                inner.alphabet_size()
            ));
        }
        let alphabet_size = code.iter().max().map_or(1, |m| m + 1);
        Ok(Self { inner, code, alphabet_size })
    }
}

struct CodedCursor<'a> {
    inner: Box<dyn SymbolStream + 'a>,
    code: &'a [usize],
}

impl SymbolStream for CodedCursor<'_> {
    fn position(&self) -> usize {
        self.inner.position()
    }

    fn next_symbol(&mut self) -> usize {
        self.code[self.inner.next_symbol()]
    }

    fn seek(&mut self, pos: usize) {
        self.inner.seek(pos)
    }
}

impl<S: SymbolSource> SymbolSource for CodedSource<S> {
    fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(CodedCursor { inner: self.inner.open(), code: &self.code })
    }
}

impl<S: SymbolSource + ?Sized> SymbolSource for &S {
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        (**self).open()
    }
}

impl<S: SymbolSource + ?Sized> SymbolSource for Box<S> {
    fn alphabet_size(&self) -> usize {
        (**self).alphabet_size()
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        (**self).open()
    }
}
