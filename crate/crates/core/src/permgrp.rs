//! Permutations and finite groups given by multiplication tables.
//!
//! Groups here are small (covers of desk-scale substitutions), so everything
//! is table-driven and invariants are checked exhaustively. Element 0 is
//! always the identity.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::error::{invalid, Error, Result};

pub const DEFAULT_CLOSURE_CAP: usize = 10_000;
pub const NORMAL_SUBGROUP_ORDER_CAP: usize = 1_000;
pub const CENTRALIZER_DEGREE_CAP: usize = 8;

/// A bijection of `{0, .., degree-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return invalid(format!("{images:?} is not a permutation"));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree).collect() }
    }

    /// Transposition of `a` and `b`.
    pub fn swap(degree: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        images.swap(a, b);
        Self { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm { images: other.images.iter().map(|&i| self.images[i]).collect() }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    pub fn order(&self) -> usize {
        let mut p = self.clone();
        let mut k = 1;
        while !p.is_identity() {
            p = p.compose(self);
            k += 1;
        }
        k
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.compose(other) == other.compose(self)
    }

    /// Disjoint-cycle notation using the given point labels; `Id` for the identity.
    pub fn cycle_notation(&self, labels: &[char]) -> String {
        let mut seen = vec![false; self.degree()];
        let mut out = String::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            out.push('(');
            let mut p = start;
            let mut first = true;
            while !seen[p] {
                seen[p] = true;
                if !first {
                    out.push(' ');
                }
                first = false;
                out.push(labels.get(p).copied().unwrap_or('?'));
                p = self.images[p];
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("Id");
        }
        out
    }
}

fn digit_labels(degree: usize) -> Vec<char> {
    (0..degree)
        .map(|i| std::char::from_digit(i as u32, 36).unwrap_or('?'))
        .collect()
}

/// A finite group as a multiplication table. `mul(g, h)` is the product
/// `g·h`; for permutation realizations this is the composition `g ∘ h`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    names: Vec<String>,
    table: Vec<u32>,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Validates identity at index 0, closure, inverses and associativity.
    pub fn from_table(names: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let m = table.len();
        if m == 0 {
            return invalid("a group needs at least one element");
        }
        if names.len() != m {
            return invalid(format!("{} names for {m} elements", names.len()));
        }
        if table.iter().any(|row| row.len() != m || row.iter().any(|&x| x >= m)) {
            return invalid("multiplication table is not square over the element set");
        }
        if (0..m).any(|g| table[0][g] != g || table[g][0] != g) {
            return invalid("element 0 is not a two-sided identity");
        }
        let mut inverse = vec![usize::MAX; m];
        for g in 0..m {
            match (0..m).find(|&h| table[g][h] == 0) {
                Some(h) if table[h][g] == 0 => inverse[g] = h,
                _ => return invalid(format!("element {g} has no two-sided inverse")),
            }
        }
        if m <= 1000 {
            for a in 0..m {
                for b in 0..m {
                    let ab = table[a][b];
                    for c in 0..m {
                        if table[ab][c] != table[a][table[b][c]] {
                            return invalid(format!("multiplication is not associative at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        }
        Ok(Self {
            names,
            table: table.into_iter().flatten().map(|x| x as u32).collect(),
            inverse,
        })
    }

    fn from_parts_unchecked(names: Vec<String>, table: Vec<u32>) -> Self {
        let m = names.len();
        let inverse = (0..m)
            .map(|g| (0..m).find(|&h| table[g * m + h] == 0).expect("group element without inverse"))
            .collect();
        Self { names, table, inverse }
    }

    pub fn trivial() -> Self {
        Self::from_parts_unchecked(vec!["e".into()], vec![0])
    }

    /// `Z/n` written additively with elements named `0..n-1`.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return invalid("cyclic group of order 0");
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        Ok(Self::from_parts_unchecked(names, table))
    }

    /// The full symmetric group on `degree` points, elements in
    /// lexicographic order of their image arrays (identity first).
    pub fn symmetric(degree: usize) -> Result<(Self, GroupEmbedding)> {
        if degree > CENTRALIZER_DEGREE_CAP {
            return Err(Error::Capacity(format!(
                "symmetric group on {degree} points exceeds the enumeration cap {CENTRALIZER_DEGREE_CAP}"
            )));
        }
        let perms = all_permutations(degree);
        Ok(group_from_closed_set(perms, &digit_labels(degree)))
    }

    pub fn order(&self) -> usize {
        self.names.len()
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order() + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn name(&self, g: usize) -> &str {
        &self.names[g]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn element_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn is_abelian(&self) -> bool {
        let m = self.order();
        (0..m).all(|a| (0..m).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Smallest subgroup containing `generators`.
    pub fn subgroup_generated(&self, generators: &[usize]) -> Vec<usize> {
        let mut members = BTreeSet::from([0usize]);
        let mut queue: VecDeque<usize> = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for &s in generators {
                let h = self.mul(g, s);
                if members.insert(h) {
                    queue.push_back(h);
                }
            }
        }
        members.into_iter().collect()
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        set.contains(&0)
            && set.iter().all(|&a| a < self.order())
            && set.iter().all(|&a| set.contains(&self.inv(a)) && set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    pub fn is_normal_subgroup(&self, subset: &[usize]) -> bool {
        if !self.is_subgroup(subset) {
            return false;
        }
        let set: BTreeSet<usize> = subset.iter().copied().collect();
        (0..self.order()).all(|g| set.iter().all(|&h| set.contains(&self.conjugate(g, h))))
    }

    /// `g h g^{-1}`
    pub fn conjugate(&self, g: usize, h: usize) -> usize {
        self.mul(self.mul(g, h), self.inv(g))
    }

    fn normal_closure(&self, seeds: &[usize]) -> Vec<usize> {
        let m = self.order();
        let conjugates: BTreeSet<usize> = seeds
            .iter()
            .flat_map(|&h| (0..m).map(move |g| (g, h)))
            .map(|(g, h)| self.conjugate(g, h))
            .collect();
        let gens: Vec<usize> = conjugates.into_iter().collect();
        self.subgroup_generated(&gens)
    }

    /// Whether `self` and `other` have literally the same table up to the
    /// element bijection `map` (used to test quotients by the trivial group).
    pub fn is_isomorphism(&self, other: &FiniteGroup, map: &[usize]) -> bool {
        let m = self.order();
        m == other.order()
            && map.len() == m
            && map.iter().collect::<BTreeSet<_>>().len() == m
            && (0..m).all(|a| (0..m).all(|b| map[self.mul(a, b)] == other.mul(map[a], map[b])))
    }
}

/// A permutation realization of a group: `images[g]` represents element `g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupEmbedding {
    images: Vec<Perm>,
}

impl GroupEmbedding {
    pub fn images(&self) -> &[Perm] {
        &self.images
    }

    pub fn image(&self, g: usize) -> &Perm {
        &self.images[g]
    }

    pub fn degree(&self) -> usize {
        self.images.first().map_or(0, Perm::degree)
    }

    pub fn element_of(&self, perm: &Perm) -> Option<usize> {
        self.images.iter().position(|p| p == perm)
    }

    /// Homomorphism, identity and injectivity, checked exhaustively.
    pub fn is_faithful_for(&self, group: &FiniteGroup) -> bool {
        let m = group.order();
        self.images.len() == m
            && self.images[0].is_identity()
            && self.images.iter().collect::<BTreeSet<_>>().len() == m
            && (0..m).all(|a| (0..m).all(|b| self.images[group.mul(a, b)] == self.images[a].compose(&self.images[b])))
    }
}

fn group_from_closed_set(elements: Vec<Perm>, labels: &[char]) -> (FiniteGroup, GroupEmbedding) {
    let index: HashMap<&Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let m = elements.len();
    let mut table = Vec::with_capacity(m * m);
    for a in &elements {
        for b in &elements {
            table.push(index[&a.compose(b)] as u32);
        }
    }
    let names = elements.iter().map(|p| p.cycle_notation(labels)).collect();
    let group = FiniteGroup::from_parts_unchecked(names, table);
    (group, GroupEmbedding { images: elements })
}

pub fn closure(generators: &[Perm]) -> Result<(FiniteGroup, GroupEmbedding)> {
    closure_with_cap(generators, None, DEFAULT_CLOSURE_CAP)
}

/// Breadth-first closure under right multiplication by the generators.
/// Element names use `labels` for the permuted points (digits by default).
pub fn closure_with_cap(
    generators: &[Perm],
    labels: Option<&[char]>,
    cap: usize,
) -> Result<(FiniteGroup, GroupEmbedding)> {
    let degree = generators.first().map_or(1, Perm::degree);
    if generators.iter().any(|g| g.degree() != degree) {
        return invalid("generators have mixed degrees");
    }
    let default_labels;
    let labels = match labels {
        Some(l) => l,
        None => {
            default_labels = digit_labels(degree);
            &default_labels
        }
    };
    let id = Perm::identity(degree);
    let mut elements = vec![id.clone()];
    let mut seen: HashMap<Perm, usize> = HashMap::from([(id, 0)]);
    let mut next = 0;
    while next < elements.len() {
        let g = elements[next].clone();
        next += 1;
        for s in generators {
            let h = g.compose(s);
            if !seen.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(Error::Capacity(format!("group closure exceeds {cap} elements")));
                }
                seen.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
    }
    Ok(group_from_closed_set(elements, labels))
}

fn all_permutations(degree: usize) -> Vec<Perm> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Perm>) {
        if prefix.len() == used.len() {
            out.push(Perm { images: prefix.clone() });
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(degree), &mut vec![false; degree], &mut out);
    out
}

/// All `η` in the symmetric group on `degree` points commuting with every
/// permutation of `set`, by full enumeration.
pub fn centralizer_in_sym(set: &[Perm], degree: usize) -> Result<(FiniteGroup, GroupEmbedding)> {
    if degree > CENTRALIZER_DEGREE_CAP {
        return Err(Error::Capacity(format!(
            "centralizer enumeration limited to degree {CENTRALIZER_DEGREE_CAP}, got {degree}"
        )));
    }
    if set.iter().any(|p| p.degree() != degree) {
        return invalid("permutation degree does not match the ambient symmetric group");
    }
    let members: Vec<Perm> = all_permutations(degree)
        .into_iter()
        .filter(|eta| set.iter().all(|s| eta.commutes_with(s)))
        .collect();
    Ok(group_from_closed_set(members, &digit_labels(degree)))
}

/// Every normal subgroup, as sorted element lists, ordered by size then
/// lexicographically. Built as the join-closure of the normal closures of
/// single elements.
pub fn normal_subgroups(group: &FiniteGroup) -> Result<Vec<Vec<usize>>> {
    if group.order() > NORMAL_SUBGROUP_ORDER_CAP {
        return Err(Error::Capacity(format!(
            "normal subgroup search limited to order {NORMAL_SUBGROUP_ORDER_CAP}, got {}",
            group.order()
        )));
    }
    let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
    found.insert(vec![0]);
    for g in 0..group.order() {
        found.insert(group.normal_closure(&[g]));
    }
    loop {
        let current: Vec<Vec<usize>> = found.iter().cloned().collect();
        let mut grew = false;
        for (i, a) in current.iter().enumerate() {
            for b in &current[i + 1..] {
                let gens: Vec<usize> = a.iter().chain(b).copied().collect();
                if found.insert(group.subgroup_generated(&gens)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let mut out: Vec<Vec<usize>> = found.into_iter().collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// The coset group `G/H` and the projection `g -> gH`. Cosets are numbered
/// by their smallest element, so `H` itself is coset 0.
pub fn quotient(group: &FiniteGroup, normal: &[usize]) -> Result<(FiniteGroup, Vec<usize>)> {
    if !group.is_normal_subgroup(normal) {
        return invalid(format!("{normal:?} is not a normal subgroup"));
    }
    let m = group.order();
    let mut projection = vec![usize::MAX; m];
    let mut reps = Vec::new();
    for g in 0..m {
        if projection[g] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(g);
        for &h in normal {
            projection[group.mul(g, h)] = idx;
        }
    }
    let q = reps.len();
    let mut table = Vec::with_capacity(q * q);
    for &a in &reps {
        for &b in &reps {
            table.push(projection[group.mul(a, b)] as u32);
        }
    }
    let names = reps
        .iter()
        .map(|&g| if q == m { group.name(g).to_string() } else { format!("{}H", group.name(g)) })
        .collect();
    Ok((FiniteGroup::from_parts_unchecked(names, table), projection))
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {} {{{}}}", self.order(), self.names.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3_generators() -> Vec<Perm> {
        vec![Perm::swap(3, 0, 1), Perm::swap(3, 1, 2)]
    }

    /// Closure oracle independent of the table machinery: apply generators
    /// until no new permutation appears.
    fn naive_closure(gens: &[Perm], degree: usize) -> BTreeSet<Perm> {
        let mut set = BTreeSet::from([Perm::identity(degree)]);
        loop {
            let new: Vec<Perm> = set
                .iter()
                .flat_map(|a| gens.iter().map(move |g| g.compose(a)))
                .filter(|p| !set.contains(p))
                .collect();
            if new.is_empty() {
                return set;
            }
            set.extend(new);
        }
    }

    #[test]
    fn closure_orders() {
        let (g, emb) = closure(&[Perm::swap(2, 0, 1)]).unwrap();
        assert_eq!(g.order(), 2);
        assert!(emb.is_faithful_for(&g));

        let (g, emb) = closure(&s3_generators()).unwrap();
        assert_eq!(g.order(), naive_closure(&s3_generators(), 3).len());
        assert_eq!(g.order(), 6);
        assert!(emb.is_faithful_for(&g));

        let (g, _) = closure(&[]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn closure_rejects_mixed_degrees_and_caps() {
        assert!(matches!(
            closure(&[Perm::identity(2), Perm::identity(3)]),
            Err(Error::InvalidArgument(_))
        ));
        let s5 = [Perm::new(vec![1, 2, 3, 4, 0]).unwrap(), Perm::swap(5, 0, 1)];
        assert!(matches!(closure_with_cap(&s5, None, 100), Err(Error::Capacity(_))));
        assert_eq!(closure_with_cap(&s5, None, 120).unwrap().0.order(), 120);
    }

    #[test]
    fn closure_table_is_closed_and_associative() {
        let (g, _) = closure(&s3_generators()).unwrap();
        let table: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| g.mul(a, b)).collect()).collect();
        assert!(FiniteGroup::from_table(g.names().to_vec(), table).is_ok());
    }

    #[test]
    fn centralizers() {
        let (c, _) = centralizer_in_sym(&[Perm::swap(2, 0, 1)], 2).unwrap();
        assert_eq!(c.order(), 2);

        let gens = s3_generators();
        let brute = all_permutations(3)
            .into_iter()
            .filter(|e| gens.iter().all(|s| e.compose(s) == s.compose(e)))
            .count();
        let (c, _) = centralizer_in_sym(&gens, 3).unwrap();
        assert_eq!(c.order(), brute);
        assert_eq!(c.order(), 1);

        let (c, _) = centralizer_in_sym(&[], 3).unwrap();
        assert_eq!(c.order(), 6);

        assert!(matches!(centralizer_in_sym(&[], 9), Err(Error::Capacity(_))));
    }

    /// Brute-force oracle: every subset containing the identity that is closed
    /// and conjugation invariant.
    fn normal_subgroups_by_subsets(g: &FiniteGroup) -> usize {
        let m = g.order();
        (0u32..1 << m)
            .filter(|mask| mask & 1 == 1)
            .map(|mask| (0..m).filter(|i| mask >> i & 1 == 1).collect::<Vec<_>>())
            .filter(|s| g.is_normal_subgroup(s))
            .count()
    }

    #[test]
    fn normal_subgroup_counts() {
        let (s3, _) = closure(&s3_generators()).unwrap();
        let ns = normal_subgroups(&s3).unwrap();
        assert_eq!(ns.len(), normal_subgroups_by_subsets(&s3));
        assert_eq!(ns.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 3, 6]);

        let z4 = FiniteGroup::cyclic(4).unwrap();
        let ns = normal_subgroups(&z4).unwrap();
        assert_eq!(ns.iter().map(Vec::len).collect::<Vec<_>>(), vec![1, 2, 4]);
        assert_eq!(ns.len(), normal_subgroups_by_subsets(&z4));

        assert_eq!(normal_subgroups(&FiniteGroup::trivial()).unwrap().len(), 1);

        // D4 and Q8-size checks against the subset oracle
        let (d4, _) = closure(&[Perm::new(vec![1, 2, 3, 0]).unwrap(), Perm::new(vec![3, 2, 1, 0]).unwrap()]).unwrap();
        assert_eq!(d4.order(), 8);
        assert_eq!(normal_subgroups(&d4).unwrap().len(), normal_subgroups_by_subsets(&d4));
    }

    #[test]
    fn quotients() {
        let (s3, _) = closure(&s3_generators()).unwrap();
        let a3 = normal_subgroups(&s3).unwrap()[1].clone();
        let (q, p) = quotient(&s3, &a3).unwrap();
        assert_eq!(q.order(), 2);
        for x in 0..6 {
            for y in 0..6 {
                assert_eq!(p[s3.mul(x, y)], q.mul(p[x], p[y]));
            }
        }

        let all: Vec<usize> = (0..6).collect();
        assert_eq!(quotient(&s3, &all).unwrap().0.order(), 1);

        let (q, p) = quotient(&s3, &[0]).unwrap();
        assert_eq!(p, (0..6).collect::<Vec<_>>());
        assert!(s3.is_isomorphism(&q, &p));

        // a transposition subgroup is not normal in S_3
        let t = s3.element_by_name("(0 1)").unwrap();
        assert!(matches!(quotient(&s3, &[0, t]), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn table_validation() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        assert!(FiniteGroup::from_table(vec!["e".into(), "a".into()], bad).is_err());
        let z2 = vec![vec![0, 1], vec![1, 0]];
        let g = FiniteGroup::from_table(vec!["e".into(), "a".into()], z2).unwrap();
        assert_eq!(g.inv(1), 1);
    }

    #[test]
    fn cycle_notation() {
        let p = Perm::new(vec![1, 0, 2]).unwrap();
        assert_eq!(p.cycle_notation(&['a', 'b', 'c']), "(a b)");
        assert_eq!(Perm::identity(3).cycle_notation(&['a', 'b', 'c']), "Id");
        assert_eq!(Perm::new(vec![1, 2, 0]).unwrap().order(), 3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn perm_strategy(degree: usize) -> impl Strategy<Value = Perm> {
            Just((0..degree).collect::<Vec<_>>())
                .prop_shuffle()
                .prop_map(|v| Perm::new(v).unwrap())
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn closure_is_closed_group(gens in proptest::collection::vec(perm_strategy(4), 0..3)) {
                let (g, emb) = closure(&gens).unwrap();
                prop_assert!(emb.is_faithful_for(&g));
                prop_assert_eq!(g.order(), naive_closure(&gens, 4).len());
                for a in 0..g.order() {
                    prop_assert_eq!(g.mul(a, g.inv(a)), 0);
                }
            }

            #[test]
            fn quotient_projection_is_homomorphism(gens in proptest::collection::vec(perm_strategy(4), 1..3)) {
                let (g, _) = closure(&gens).unwrap();
                for n in normal_subgroups(&g).unwrap() {
                    let (q, p) = quotient(&g, &n).unwrap();
                    prop_assert_eq!(q.order() * n.len(), g.order());
                    for x in 0..g.order() {
                        for y in 0..g.order() {
                            prop_assert_eq!(p[g.mul(x, y)], q.mul(p[x], p[y]));
                        }
                    }
                }
            }

            #[test]
            fn centralizer_commutes(gens in proptest::collection::vec(perm_strategy(4), 0..3)) {
                let (c, emb) = centralizer_in_sym(&gens, 4).unwrap();
                prop_assert!(emb.is_faithful_for(&c));
                for eta in emb.images() {
                    for s in &gens {
                        prop_assert!(eta.commutes_with(s));
                    }
                }
            }
        }
    }
}
