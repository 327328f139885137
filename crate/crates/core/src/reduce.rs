//! Fixed-shape pairwise summation.
//!
//! A range is split at `len / 2` until at most [`LEAF_SIZE`] terms remain;
//! leaves are summed left to right. The tree depends only on the range, so
//! the parallel and sequential sums are bit-identical.

use std::ops::Range;

use num_complex::Complex64;

pub const LEAF_SIZE: usize = 32;

/// Ranges at most this long are materialised in one buffer.
pub const CHUNK_SIZE: usize = 1 << 14;

/// Produces the summands for a range of indices.
pub trait TermSource: Sync {
    /// `out[i]` receives the term for index `start + i`.
    fn fill(&self, start: usize, out: &mut [Complex64]);
}

impl<F: Fn(usize) -> Complex64 + Sync> TermSource for F {
    fn fill(&self, start: usize, out: &mut [Complex64]) {
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self(start + i);
        }
    }
}

pub fn tree_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= LEAF_SIZE {
        let mut s = Complex64::new(0.0, 0.0);
        for v in values {
            s += v;
        }
        return s;
    }
    let mid = values.len() / 2;
    tree_sum(&values[..mid]) + tree_sum(&values[mid..])
}

/// Pairwise sum of the terms over `range`, subtrees evaluated with `rayon::join`.
pub fn tree_sum_terms<T: TermSource + ?Sized>(terms: &T, range: Range<usize>) -> Complex64 {
    let len = range.len();
    if len <= CHUNK_SIZE {
        let mut buf = vec![Complex64::new(0.0, 0.0); len];
        terms.fill(range.start, &mut buf);
        return tree_sum(&buf);
    }
    let mid = range.start + len / 2;
    let (a, b) = rayon::join(
        || tree_sum_terms(terms, range.start..mid),
        || tree_sum_terms(terms, mid..range.end),
    );
    a + b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn term(n: usize) -> Complex64 {
        Complex64::new(1.0 / (n as f64 + 1.0), ((n * 2654435761) % 1000) as f64 * 1e-7)
    }

    #[test]
    fn chunked_equals_flat_tree() {
        for len in [0, 1, 31, 32, 33, 1000, CHUNK_SIZE, CHUNK_SIZE + 1, 3 * CHUNK_SIZE + 17, 200_001] {
            let flat: Vec<Complex64> = (5..5 + len).map(term).collect();
            let a = tree_sum(&flat);
            let b = tree_sum_terms(&term, 5..5 + len);
            assert_eq!(a.re.to_bits(), b.re.to_bits(), "len {len}");
            assert_eq!(a.im.to_bits(), b.im.to_bits(), "len {len}");
        }
    }

    #[test]
    fn thread_count_does_not_matter() {
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| tree_sum_terms(&term, 1..1_000_001))
        };
        let one = run(1);
        let four = run(4);
        assert_eq!(one.re.to_bits(), four.re.to_bits());
        assert_eq!(one.im.to_bits(), four.im.to_bits());
    }
}
