//! Constant-length substitutions: fixed points, column maps, group covers,
//! factor maps, languages and centralizer actions.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::morse::MorseSpec;
use crate::permgrp::{self, FiniteGroup, GroupEmbedding, Perm};
use crate::stream::{prefix, DigitCursor, DigitHierarchy, SymbolSource, SymbolStream};

/// Largest prefix [`language`] and [`Substitution::power`] will build.
pub const MAX_LANGUAGE_HORIZON: usize = 1 << 26;

/// `θ(a) = rows[a]`, all rows of one length `λ ≥ 2`. Letters are indices
/// into `letters`, which holds their display characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    letters: Vec<char>,
    rows: Vec<Vec<usize>>,
    seed: usize,
}

impl Substitution {
    pub fn new(letters: Vec<char>, rows: Vec<Vec<usize>>, seed: usize) -> Result<Self> {
        let r = letters.len();
        if r < 2 {
            return invalid("a substitution needs at least two letters");
        }
        if letters.iter().collect::<BTreeSet<_>>().len() != r {
            return invalid("letters must be distinct");
        }
        if rows.len() != r {
            return invalid(format!("{} rows for {r} letters", rows.len()));
        }
        let len = rows[0].len();
        if len < 2 {
            return invalid("substitution length must be at least 2");
        }
        for (a, row) in rows.iter().enumerate() {
            if row.len() != len {
                return invalid(format!(
                    "row for '{}' has length {}, expected {len}",
                    letters[a],
                    row.len()
                ));
            }
            if row.iter().any(|&b| b >= r) {
                return invalid(format!("row for '{}' uses an unknown letter", letters[a]));
            }
        }
        if seed >= r {
            return invalid("seed is not a letter");
        }
        Ok(Self { letters, rows, seed })
    }

    /// Rows written as strings over `letters`; the seed is the first letter.
    pub fn from_rules(letters: &str, rows: &[&str]) -> Result<Self> {
        let letters: Vec<char> = letters.chars().collect();
        let rows = rows
            .iter()
            .map(|row| {
                row.chars()
                    .map(|c| {
                        letters
                            .iter()
                            .position(|&l| l == c)
                            .ok_or_else(|| Error::InvalidArgument(format!("'{c}' is not a letter")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(letters, rows, 0)
    }

    pub fn thue_morse() -> Self {
        Self::from_rules("01", &["01", "10"]).expect("valid")
    }

    pub fn herning() -> Self {
        Self::from_rules("abc", &["aabaa", "bcabb", "cbccc"]).expect("valid")
    }

    pub fn rudin_shapiro() -> Self {
        Self::from_rules("abcd", &["ab", "ac", "db", "dc"]).expect("valid")
    }

    pub fn alphabet_size(&self) -> usize {
        self.letters.len()
    }

    pub fn length(&self) -> usize {
        self.rows[0].len()
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn seed(&self) -> usize {
        self.seed
    }

    pub fn with_seed(&self, seed: usize) -> Result<Self> {
        Self::new(self.letters.clone(), self.rows.clone(), seed)
    }

    pub fn letter_index(&self, c: char) -> Option<usize> {
        self.letters.iter().position(|&l| l == c)
    }

    pub fn render(&self, word: &[usize]) -> String {
        word.iter().map(|&a| self.letters[a]).collect()
    }

    /// Image of a word under `θ`.
    pub fn apply(&self, word: &[usize]) -> Vec<usize> {
        word.iter().flat_map(|&a| self.rows[a].iter().copied()).collect()
    }

    /// `θ^k`, same letters and seed.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return invalid("power must be at least 1");
        }
        let len = self
            .length()
            .checked_pow(k as u32)
            .filter(|&l| l <= MAX_LANGUAGE_HORIZON / self.alphabet_size())
            .ok_or_else(|| Error::Capacity(format!("θ^{k} is too long")))?;
        let rows = (0..self.alphabet_size())
            .map(|a| {
                let mut w = vec![a];
                for _ in 0..k {
                    w = self.apply(&w);
                }
                debug_assert_eq!(w.len(), len);
                w
            })
            .collect();
        Self::new(self.letters.clone(), rows, self.seed)
    }

    pub fn is_self_starting(&self) -> bool {
        self.rows[self.seed][0] == self.seed
    }

    /// The one-sided fixed point obtained by iterating at the seed.
    pub fn fixed_point_source(&self) -> Result<FixedPoint> {
        if !self.is_self_starting() {
            return invalid(format!(
                "θ('{0}') does not start with '{0}'; use a power of θ",
                self.letters[self.seed]
            ));
        }
        Ok(FixedPoint { sub: self.clone() })
    }

    pub fn fixed_point(&self, count: usize) -> Result<Vec<usize>> {
        if count == 0 {
            return invalid("count must be at least 1");
        }
        Ok(self.fixed_point_source()?.open().take_vec(count))
    }

    pub fn column_maps(&self) -> ColumnMaps {
        let maps: Vec<Vec<usize>> = (0..self.length())
            .map(|i| self.rows.iter().map(|row| row[i]).collect())
            .collect();
        let bijective = maps.iter().all(|m| Perm::new(m.clone()).is_ok());
        ColumnMaps { maps, bijective }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, row) in self.rows.iter().enumerate() {
            if a > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{} -> {}", self.letters[a], self.render(row))?;
        }
        Ok(())
    }
}

/// `maps[i](a) = θ(a)[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMaps {
    pub maps: Vec<Vec<usize>>,
    pub bijective: bool,
}

impl ColumnMaps {
    pub fn perms(&self) -> Option<Vec<Perm>> {
        self.maps.iter().map(|m| Perm::new(m.clone()).ok()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub primitive: bool,
    /// Least `n` with every letter in every `θ^n(a)`.
    pub primitivity_exponent: Option<usize>,
    /// Least `n ≤ r` with `θ^n(seed)` starting with the seed.
    pub power_for_seed: Option<usize>,
    pub bijective: bool,
    /// Order of `σ_0` when the columns are bijective.
    pub power_for_identity_column: Option<usize>,
}

pub fn analyze(sub: &Substitution) -> Analysis {
    let r = sub.alphabet_size();
    let mut reach: Vec<Vec<bool>> = sub
        .rows
        .iter()
        .map(|row| (0..r).map(|b| row.contains(&b)).collect())
        .collect();
    let step = reach.clone();
    let mut primitivity_exponent = None;
    for n in 1..=r * r {
        if reach.iter().all(|row| row.iter().all(|&x| x)) {
            primitivity_exponent = Some(n);
            break;
        }
        reach = (0..r)
            .map(|a| (0..r).map(|c| (0..r).any(|b| reach[a][b] && step[b][c])).collect())
            .collect();
    }

    let mut first = sub.seed;
    let mut power_for_seed = None;
    for n in 1..=r {
        first = sub.rows[first][0];
        if first == sub.seed {
            power_for_seed = Some(n);
            break;
        }
    }

    let columns = sub.column_maps();
    let power_for_identity_column = columns
        .perms()
        .map(|p| p[0].order());

    Analysis {
        primitive: primitivity_exponent.is_some(),
        primitivity_exponent,
        power_for_seed,
        bijective: columns.bijective,
        power_for_identity_column,
    }
}

struct Levels<'a>(&'a Substitution);

impl DigitHierarchy for Levels<'_> {
    fn radix(&self, _: usize) -> usize {
        self.0.length()
    }

    fn top(&self) -> usize {
        self.0.seed
    }

    fn step(&self, _: usize, digit: usize, above: usize) -> usize {
        self.0.rows[above][digit]
    }
}

/// Stream source for the fixed point of a self-starting substitution.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    sub: Substitution,
}

impl FixedPoint {
    pub fn substitution(&self) -> &Substitution {
        &self.sub
    }

    pub fn symbol(&self, n: usize) -> usize {
        Levels(&self.sub).evaluate(n)
    }
}

impl SymbolSource for FixedPoint {
    fn alphabet_size(&self) -> usize {
        self.sub.alphabet_size()
    }

    fn open(&self) -> Box<dyn SymbolStream + '_> {
        Box::new(DigitCursor::new(Levels(&self.sub)))
    }
}

/// The group generated by the column permutations, the cover block
/// `(σ_0, ..., σ_{λ-1})` and the substitution it covers.
#[derive(Debug, Clone)]
pub struct GroupCover {
    pub group: FiniteGroup,
    pub embedding: GroupEmbedding,
    pub block: Vec<usize>,
    pub base: Substitution,
}

pub fn group_cover(sub: &Substitution) -> Result<(GroupCover, MorseSpec)> {
    let columns = sub.column_maps();
    let Some(perms) = columns.perms() else {
        return Err(Error::Precondition("column maps are not bijective".into()));
    };
    if !perms[0].is_identity() {
        return Err(Error::Precondition(format!(
            "σ_0 is not the identity; pass to θ^{}",
            perms[0].order()
        )));
    }
    let (group, embedding) =
        permgrp::closure_with_cap(&perms, Some(sub.letters()), permgrp::DEFAULT_CLOSURE_CAP)?;
    if group.order() == 1 {
        return Err(Error::Precondition(
            "every column is the identity; the cover is not primitive".into(),
        ));
    }
    let block: Vec<usize> = perms
        .iter()
        .map(|p| embedding.element_of(p).expect("generator lies in its closure"))
        .collect();
    let spec = MorseSpec::repeating(group.clone(), block.clone())?;
    Ok((GroupCover { group, embedding, block, base: sub.clone() }, spec))
}

impl GroupCover {
    pub fn cycle_names(&self) -> Vec<&str> {
        self.block.iter().map(|&g| self.group.name(g)).collect()
    }

    /// Letters reachable from the seed under the group.
    pub fn orbit_of_seed(&self) -> BTreeSet<usize> {
        self.embedding.images().iter().map(|p| p.apply(self.base.seed())).collect()
    }
}

/// `F(y)[n] = y[n](seed)`.
pub fn factor_map(cover: &GroupCover, input: &[usize], seed: Option<usize>) -> Vec<usize> {
    let a = seed.unwrap_or(cover.base.seed());
    input.iter().map(|&g| cover.embedding.image(g).apply(a)).collect()
}

/// The `i ≡ -k (mod λ^t)` in `[-λ^t + 1, 0]`.
pub fn skeleton_index(lambda: usize, t: u32, k: u64) -> Result<i64> {
    if t == 0 {
        return invalid("skeleton level must be at least 1");
    }
    let period = (lambda as u64)
        .checked_pow(t)
        .filter(|&p| p <= i64::MAX as u64)
        .ok_or_else(|| Error::Capacity(format!("{lambda}^{t} overflows")))?;
    Ok(-((k % period) as i64))
}

/// A set of `k`-words and the prefix length that was scanned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Language {
    pub words: BTreeSet<Vec<usize>>,
    pub horizon: usize,
}

/// `λ^ceil(log_λ k) + k`: the least horizon accepted by [`language`].
pub fn minimum_horizon(lambda: usize, k: usize) -> usize {
    let mut p = 1usize;
    while p < k {
        p = p.saturating_mul(lambda);
    }
    p.saturating_add(k)
}

/// A prefix length that contains every `k`-word of the subshift: all legal
/// 2-blocks occur within `θ^{n*}(seed)`, and every `k`-word lies inside
/// `θ^m(uv)` for a legal 2-block `uv` once `λ^m ≥ k`.
pub fn sound_horizon(sub: &Substitution, k: usize) -> Result<usize> {
    let r = sub.alphabet_size();
    let mut letters: BTreeSet<usize> = BTreeSet::from([sub.seed]);
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut n_star = 0;
    loop {
        let mut next_letters = BTreeSet::new();
        let mut next_pairs = BTreeSet::new();
        for &a in &letters {
            let row = &sub.rows[a];
            next_letters.extend(row.iter().copied());
            next_pairs.extend(row.windows(2).map(|w| (w[0], w[1])));
        }
        for &(a, b) in &pairs {
            next_pairs.insert((*sub.rows[a].last().unwrap(), sub.rows[b][0]));
        }
        n_star += 1;
        let done = next_pairs == pairs && next_letters == letters;
        letters = next_letters;
        pairs = next_pairs;
        if done || n_star > r * r + 2 {
            break;
        }
    }
    let mut m = 0;
    let mut p = 1usize;
    while p < k.max(1) {
        p = p.saturating_mul(sub.length());
        m += 1;
    }
    (sub.length() as u64)
        .checked_pow((m + n_star) as u32)
        .map(|h| (h as usize).max(minimum_horizon(sub.length(), k)))
        .filter(|&h| h <= MAX_LANGUAGE_HORIZON)
        .ok_or_else(|| Error::Capacity(format!("horizon for {k}-words exceeds {MAX_LANGUAGE_HORIZON}")))
}

/// All `k`-factors of the first `horizon` symbols of the fixed point.
pub fn language(sub: &Substitution, k: usize, horizon: usize) -> Result<Language> {
    if k == 0 {
        return invalid("block length must be at least 1");
    }
    let min = minimum_horizon(sub.length(), k);
    if horizon < min {
        return Err(Error::Precondition(format!("horizon {horizon} below the minimum {min}")));
    }
    if horizon > MAX_LANGUAGE_HORIZON {
        return Err(Error::Capacity(format!("horizon {horizon} exceeds {MAX_LANGUAGE_HORIZON}")));
    }
    let word = prefix(&sub.fixed_point_source()?, horizon);
    Ok(Language { words: word.windows(k).map(<[usize]>::to_vec).collect(), horizon })
}

/// A substitution on a group given by one block: `g ↦ block ∘ g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSubstitution {
    pub group: FiniteGroup,
    pub block: Vec<usize>,
}

impl GroupSubstitution {
    pub fn from_cover(cover: &GroupCover) -> Self {
        Self { group: cover.group.clone(), block: cover.block.clone() }
    }

    pub fn morse_spec(&self) -> Result<MorseSpec> {
        MorseSpec::repeating(self.group.clone(), self.block.clone())
    }
}

/// `B mod H` over `G/H`.
pub fn quotient_substitution(sub: &GroupSubstitution, normal: &[usize]) -> Result<GroupSubstitution> {
    let (group, projection) = permgrp::quotient(&sub.group, normal)?;
    let block = sub.block.iter().map(|&g| projection[g]).collect();
    Ok(GroupSubstitution { group, block })
}

/// Pointwise image of the fixed-point prefix under a letter permutation
/// commuting with all columns, and whether every factor of length up to 8
/// in the image is a word of the language.
pub fn letter_map_image(sub: &Substitution, eta: &Perm, n: usize) -> Result<(Vec<usize>, bool)> {
    if eta.degree() != sub.alphabet_size() {
        return invalid("letter map degree differs from the alphabet size");
    }
    for (i, col) in sub.column_maps().maps.iter().enumerate() {
        let commutes = (0..sub.alphabet_size()).all(|a| eta.apply(col[a]) == col[eta.apply(a)]);
        if !commutes {
            return invalid(format!(
                "{} does not commute with σ_{i}",
                eta.cycle_notation(sub.letters())
            ));
        }
    }
    let image: Vec<usize> = sub.fixed_point(n)?.iter().map(|&a| eta.apply(a)).collect();
    let mut ok = true;
    for k in 1..=8.min(n) {
        let lang = language(sub, k, sound_horizon(sub, k)?)?;
        if !image.windows(k).all(|w| lang.words.contains(w)) {
            ok = false;
            break;
        }
    }
    Ok((image, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analysis() {
        let a = analyze(&Substitution::thue_morse());
        assert!(a.primitive);
        assert_eq!(a.primitivity_exponent, Some(1));
        assert_eq!(a.power_for_seed, Some(1));
        assert_eq!(a.power_for_identity_column, Some(1));

        let h = analyze(&Substitution::herning());
        assert!(h.primitive && h.bijective);

        let np = analyze(&Substitution::from_rules("ab", &["ab", "bb"]).unwrap());
        assert!(!np.primitive);

        let swap_first = Substitution::from_rules("ab", &["ba", "ab"]).unwrap();
        let s = analyze(&swap_first);
        assert_eq!(s.power_for_seed, Some(2));
        assert_eq!(s.power_for_identity_column, Some(2));
    }

    #[test]
    fn fixed_points() {
        let tm = Substitution::thue_morse();
        assert_eq!(tm.render(&tm.fixed_point(16).unwrap()), "0110100110010110");
        let h = Substitution::herning();
        assert_eq!(h.render(&h.fixed_point(5).unwrap()), "aabaa");
        assert_eq!(h.fixed_point(1).unwrap(), vec![0]);
        let swap_first = Substitution::from_rules("ab", &["ba", "ab"]).unwrap();
        assert!(swap_first.fixed_point(4).is_err());
        let sq = swap_first.power(2).unwrap();
        assert_eq!(sq.render(&sq.fixed_point(4).unwrap()), "abba");
    }

    #[test]
    fn fixed_point_matches_iteration() {
        let h = Substitution::herning();
        let mut w = vec![0];
        for _ in 0..5 {
            w = h.apply(&w);
        }
        assert_eq!(prefix(&h.fixed_point_source().unwrap(), w.len()), w);
    }

    #[test]
    fn columns() {
        let tm = Substitution::thue_morse().column_maps();
        assert!(tm.bijective);
        assert_eq!(tm.maps, vec![vec![0, 1], vec![1, 0]]);
        assert!(!Substitution::rudin_shapiro().column_maps().bijective);
        let h = Substitution::herning();
        let names: Vec<String> = h
            .column_maps()
            .perms()
            .unwrap()
            .iter()
            .map(|p| p.cycle_notation(h.letters()))
            .collect();
        assert_eq!(names, ["Id", "(b c)", "(a b)", "Id", "Id"]);
    }

    #[test]
    fn covers() {
        let (c, spec) = group_cover(&Substitution::thue_morse()).unwrap();
        assert_eq!(c.group.order(), 2);
        assert_eq!(c.block, vec![0, 1]);
        assert_eq!(spec.open().take_vec(8), vec![0, 1, 1, 0, 1, 0, 0, 1]);

        let (c, _) = group_cover(&Substitution::herning()).unwrap();
        assert_eq!(c.group.order(), 6);
        assert_eq!(c.cycle_names(), ["Id", "(b c)", "(a b)", "Id", "Id"]);
        assert_eq!(c.orbit_of_seed().len(), 3);
        assert_eq!(c.base.render(&factor_map(&c, &c.block, None)), "aabaa");

        let ids = Substitution::from_rules("ab", &["aa", "bb"]).unwrap();
        assert!(matches!(group_cover(&ids), Err(Error::Precondition(_))));
        assert!(matches!(group_cover(&Substitution::rudin_shapiro()), Err(Error::Precondition(_))));
        let swap_first = Substitution::from_rules("ab", &["ba", "ab"]).unwrap();
        let err = group_cover(&swap_first).unwrap_err();
        assert!(err.to_string().contains("θ^2"), "{err}");
    }

    #[test]
    fn factor_map_reproduces_fixed_point() {
        let h = Substitution::herning();
        let (c, spec) = group_cover(&h).unwrap();
        let cover_word = prefix(&spec, 10_000);
        assert_eq!(factor_map(&c, &cover_word, None), h.fixed_point(10_000).unwrap());
        assert_eq!(factor_map(&c, &[0, 0, 0], None), vec![0, 0, 0]);
    }

    #[test]
    fn skeletons() {
        assert_eq!(skeleton_index(2, 3, 0).unwrap(), 0);
        assert_eq!(skeleton_index(2, 3, 5).unwrap(), -5);
        assert_eq!(skeleton_index(2, 3, 8).unwrap(), 0);
    }

    #[test]
    fn skeleton_windows_are_blocks() {
        let h = Substitution::herning();
        let w = h.fixed_point(2000).unwrap();
        for t in 1..=2u32 {
            let p = 5usize.pow(t);
            let blocks: BTreeSet<Vec<usize>> =
                (0..3).map(|a| h.power(t as usize).unwrap().rows()[a].clone()).collect();
            for k in 0..200u64 {
                let i = skeleton_index(5, t, k).unwrap();
                let start = (i + k as i64) as usize;
                assert_eq!(start % p, 0);
                assert!(blocks.contains(&w[start + p..start + 2 * p]));
            }
        }
    }

    #[test]
    fn languages() {
        let tm = Substitution::thue_morse();
        assert_eq!(language(&tm, 2, 1 << 12).unwrap().words.len(), 4);
        let l3 = language(&tm, 3, 1 << 12).unwrap();
        let words: Vec<String> = l3.words.iter().map(|w| tm.render(w)).collect();
        assert_eq!(words, ["001", "010", "011", "100", "101", "110"]);
        assert_eq!(language(&tm, 1, 4).unwrap().words.len(), 2);
        assert!(matches!(language(&tm, 3, 6), Err(Error::Precondition(_))));
    }

    #[test]
    fn sound_horizon_contains_everything() {
        for sub in [Substitution::thue_morse(), Substitution::herning(), Substitution::rudin_shapiro()] {
            for k in 1..=8 {
                let h = sound_horizon(&sub, k).unwrap();
                let here = language(&sub, k, h).unwrap().words;
                let far = language(&sub, k, (h * 8).min(1 << 16).max(h)).unwrap().words;
                assert_eq!(here, far, "k = {k}");
            }
        }
    }

    #[test]
    fn language_grows_with_horizon() {
        let h = Substitution::herning();
        let mut last = 0;
        for horizon in [9, 16, 64, 256, 1024] {
            let n = language(&h, 4, horizon).unwrap().words.len();
            assert!(n >= last);
            last = n;
        }
    }

    #[test]
    fn quotients() {
        let z4 = GroupSubstitution { group: FiniteGroup::cyclic(4).unwrap(), block: vec![0, 1, 2, 3] };
        let q = quotient_substitution(&z4, &[0, 2]).unwrap();
        assert_eq!(q.group.order(), 2);
        assert_eq!(q.block, vec![0, 1, 0, 1]);
        let all = quotient_substitution(&z4, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all.group.order(), 1);
        assert_eq!(quotient_substitution(&z4, &[0]).unwrap(), z4);
        let (s3, _) = FiniteGroup::symmetric(3).unwrap();
        let sub = GroupSubstitution { group: s3, block: vec![0, 1, 2] };
        assert!(quotient_substitution(&sub, &[0, 1]).is_err());
    }

    #[test]
    fn letter_maps() {
        let tm = Substitution::thue_morse();
        let (img, ok) = letter_map_image(&tm, &Perm::swap(2, 0, 1), 16).unwrap();
        assert_eq!(tm.render(&img), "1001011001101001");
        assert!(ok);
        let (img, ok) = letter_map_image(&tm, &Perm::identity(2), 16).unwrap();
        assert_eq!(img, tm.fixed_point(16).unwrap());
        assert!(ok);

        let h = Substitution::herning();
        let perms = h.column_maps().perms().unwrap();
        let (cent, _) = permgrp::centralizer_in_sym(&perms, 3).unwrap();
        assert_eq!(cent.order(), 1);
        assert!(letter_map_image(&h, &Perm::identity(3), 50).unwrap().1);
        let err = letter_map_image(&h, &Perm::swap(3, 0, 1), 10).unwrap_err();
        assert!(err.to_string().contains("σ_"), "{err}");
    }

    mod props {
        use super::*;
        use crate::morse::block_product;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn quotient_commutes_with_products(
                b in proptest::collection::vec(0usize..6, 1..4),
                c in proptest::collection::vec(0usize..6, 1..4),
                which in 0usize..3,
            ) {
                let (s3, _) = FiniteGroup::symmetric(3).unwrap();
                let normals = permgrp::normal_subgroups(&s3).unwrap();
                let h = &normals[which];
                let (q, p) = permgrp::quotient(&s3, h).unwrap();
                let prod: Vec<usize> = block_product(&b, &c, &s3).iter().map(|&g| p[g]).collect();
                let bq: Vec<usize> = b.iter().map(|&g| p[g]).collect();
                let cq: Vec<usize> = c.iter().map(|&g| p[g]).collect();
                prop_assert_eq!(prod, block_product(&bq, &cq, &q));
            }

            #[test]
            fn skeleton_congruence(lambda in 2usize..6, t in 1u32..5, k in 0u64..100_000) {
                let i = skeleton_index(lambda, t, k).unwrap();
                let p = (lambda as i64).pow(t);
                prop_assert!(i <= 0 && i > -p);
                prop_assert_eq!((i + k as i64).rem_euclid(p), 0);
            }
        }
    }
}
