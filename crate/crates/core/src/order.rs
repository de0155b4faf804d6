//! Finite partial orders, element subsets and enumeration of small orders and maps.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};

/// Largest carrier a [`Poset`] may have (subsets are 64-bit masks).
pub const MAX_ELEMENTS: usize = 64;

/// Default bound for [`enumerate_posets`].
pub const DEFAULT_POSET_BOUND: usize = 6;

/// A subset of a carrier, stored as a bitmask over element indices.
///
/// Equality is extensional and the representation is canonical.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(i: usize) -> Self {
        ElemSet(1u64 << i)
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElemSet(it.into_iter().fold(0, |m, i| m | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> Self {
        ElemSet(self.0 | 1u64 << i)
    }

    pub fn remove(self, i: usize) -> Self {
        ElemSet(self.0 & !(1u64 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, o: ElemSet) -> Self {
        ElemSet(self.0 | o.0)
    }

    pub fn intersection(self, o: ElemSet) -> Self {
        ElemSet(self.0 & o.0)
    }

    pub fn minus(self, o: ElemSet) -> Self {
        ElemSet(self.0 & !o.0)
    }

    pub fn is_subset(self, o: ElemSet) -> bool {
        self.0 & !o.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in ascending order.
    pub fn iter(self) -> ElemIter {
        ElemIter(self.0)
    }

    /// All subsets of `self`, in increasing mask order.
    pub fn subsets(self) -> SubsetIter {
        SubsetIter {
            mask: self.0,
            cur: 0,
            done: false,
        }
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Renders the set with the given element names, e.g. `{b,c}`.
    pub fn show(self, labels: &[String]) -> String {
        format!(
            "{{{}}}",
            self.iter()
                .map(|i| labels.get(i).cloned().unwrap_or_else(|| i.to_string()))
                .join(",")
        )
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        ElemSet::from_indices(it)
    }
}

pub struct ElemIter(u64);

impl Iterator for ElemIter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub struct SubsetIter {
    mask: u64,
    cur: u64,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = ElemSet;
    fn next(&mut self) -> Option<ElemSet> {
        if self.done {
            return None;
        }
        let out = self.cur;
        if self.cur == self.mask {
            self.done = true;
        } else {
            self.cur = (self.cur.wrapping_sub(self.mask)) & self.mask;
        }
        Some(ElemSet(out))
    }
}

/// A finite partial order on `0..size`, stored as its full reflexive-transitive relation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    up: Vec<u64>,
    down: Vec<u64>,
    labels: Vec<String>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs = self.strict_pairs();
        write!(f, "Poset({}, {:?})", self.size, pairs)
    }
}

impl Poset {
    /// Builds the reflexive-transitive closure of `pairs` (each `(lo, hi)` means lo ≤ hi).
    pub fn from_relation(size: usize, pairs: &[(usize, usize)]) -> Result<Poset> {
        Self::with_labels(size, pairs, (0..size).map(|i| format!("x{i}")).collect())
    }

    pub fn with_labels(size: usize, pairs: &[(usize, usize)], labels: Vec<String>) -> Result<Poset> {
        if size > MAX_ELEMENTS {
            return Err(Error::BoundExceeded {
                what: "poset size",
                requested: size,
                bound: MAX_ELEMENTS,
            });
        }
        assert_eq!(labels.len(), size, "one label per element");
        let mut up: Vec<u64> = (0..size).map(|i| 1u64 << i).collect();
        for &(lo, hi) in pairs {
            for idx in [lo, hi] {
                if idx >= size {
                    return Err(Error::Index { index: idx, size });
                }
            }
            up[lo] |= 1u64 << hi;
        }
        // Warshall over bitmasks.
        for k in 0..size {
            let uk = up[k];
            for row in up.iter_mut() {
                if *row >> k & 1 == 1 {
                    *row |= uk;
                }
            }
        }
        for i in 0..size {
            for j in i + 1..size {
                if up[i] >> j & 1 == 1 && up[j] >> i & 1 == 1 {
                    return Err(Error::Cycle(i, j));
                }
            }
        }
        let mut down = vec![0u64; size];
        for (i, &ups) in up.iter().enumerate() {
            for j in ElemSet(ups).iter() {
                down[j] |= 1u64 << i;
            }
        }
        Ok(Poset {
            size,
            up,
            down,
            labels,
        })
    }

    /// The antichain on `size` elements.
    pub fn discrete(size: usize) -> Poset {
        Self::from_relation(size, &[]).expect("antichain is a poset")
    }

    /// The chain `0 < 1 < … < size-1`.
    pub fn chain(size: usize) -> Poset {
        let pairs: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        Self::from_relation(size, &pairs).expect("chain is a poset")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn set_labels(&mut self, labels: Vec<String>) {
        assert_eq!(labels.len(), self.size);
        self.labels = labels;
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x] >> y & 1 == 1
    }

    /// `{y | x ≤ y}`
    pub fn up_set(&self, x: usize) -> ElemSet {
        ElemSet(self.up[x])
    }

    /// `{y | y ≤ x}`
    pub fn down_set(&self, x: usize) -> ElemSet {
        ElemSet(self.down[x])
    }

    /// All pairs `x < y` of the stored relation, sorted.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.size {
            for y in ElemSet(self.up[x]).remove(x).iter() {
                out.push((x, y));
            }
        }
        out
    }

    /// Covering pairs only.
    pub fn hasse_pairs(&self) -> Vec<(usize, usize)> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(x, y)| {
                let between = ElemSet(self.up[x]).intersection(ElemSet(self.down[y]));
                between.len() == 2
            })
            .collect()
    }

    pub fn contains_set(&self, a: ElemSet) -> bool {
        a.is_subset(self.carrier())
    }

    pub fn upper_bounds(&self, a: ElemSet) -> ElemSet {
        a.iter()
            .fold(self.carrier(), |acc, x| acc.intersection(ElemSet(self.up[x])))
    }

    /// Least upper bound; for the empty set this is the least element.
    pub fn lub(&self, a: ElemSet) -> Option<usize> {
        let ub = self.upper_bounds(a);
        ub.iter().find(|&u| ub.is_subset(ElemSet(self.up[u])))
    }

    pub fn least(&self) -> Option<usize> {
        self.lub(ElemSet::EMPTY)
    }

    /// The element of `s` above all of `s`, if any.
    pub fn greatest_in(&self, s: ElemSet) -> Option<usize> {
        s.iter().find(|&m| self.set_below(s, m))
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.size).find(|&x| self.down[x] == self.carrier().0)
    }

    /// Nonempty, and every pair has an upper bound inside the set.
    pub fn is_directed(&self, a: ElemSet) -> bool {
        if a.is_empty() {
            return false;
        }
        let members: Vec<usize> = a.iter().collect();
        members.iter().enumerate().all(|(k, &x)| {
            members[k + 1..]
                .iter()
                .all(|&y| self.up[x] & self.up[y] & a.0 != 0)
        })
    }

    /// `{x | ∃a∈A, x ≤ a}`
    pub fn down_closure(&self, a: ElemSet) -> ElemSet {
        ElemSet(a.iter().fold(0, |m, x| m | self.down[x]))
    }

    pub fn up_closure(&self, a: ElemSet) -> ElemSet {
        ElemSet(a.iter().fold(0, |m, x| m | self.up[x]))
    }

    /// `A ⊑ B`: every element of A lies below some element of B.
    pub fn cofinal_leq(&self, a: ElemSet, b: ElemSet) -> bool {
        a.iter().all(|x| self.up[x] & b.0 != 0)
    }

    /// `A ⊑ b`: every element of A lies below b.
    pub fn set_below(&self, a: ElemSet, b: usize) -> bool {
        a.is_subset(ElemSet(self.down[b]))
    }

    pub fn is_down_closed(&self, a: ElemSet) -> bool {
        self.down_closure(a) == a
    }

    /// Subposet on the given members, reindexed in ascending order.
    pub fn restrict(&self, members: ElemSet) -> Poset {
        let idx: Vec<usize> = members.iter().collect();
        let mut pairs = Vec::new();
        for (i, &x) in idx.iter().enumerate() {
            for (j, &y) in idx.iter().enumerate() {
                if i != j && self.leq(x, y) {
                    pairs.push((i, j));
                }
            }
        }
        let labels = idx.iter().map(|&x| self.labels[x].clone()).collect();
        Poset::with_labels(idx.len(), &pairs, labels).expect("suborder of a poset")
    }

    /// Relation code used for canonical forms: bit `i*n+j` is set iff `i < j` strictly.
    fn relation_code(&self, perm: &[usize]) -> u64 {
        let mut code = 0u64;
        let n = self.size;
        for x in 0..n {
            for y in ElemSet(self.up[x]).remove(x).iter() {
                code |= 1u64 << (perm[x] * n + perm[y]);
            }
        }
        code
    }

    /// Same order with elements renamed by `perm` (element x becomes perm[x]).
    pub fn permuted(&self, perm: &[usize]) -> Poset {
        let pairs: Vec<_> = self
            .strict_pairs()
            .into_iter()
            .map(|(x, y)| (perm[x], perm[y]))
            .collect();
        let mut labels = vec![String::new(); self.size];
        for x in 0..self.size {
            labels[perm[x]] = self.labels[x].clone();
        }
        Poset::with_labels(self.size, &pairs, labels).expect("relabelled poset")
    }

    /// Canonical representative of the isomorphism class (minimum relation code).
    pub fn canonical(&self) -> (u64, Poset) {
        let n = self.size;
        let mut best: Option<(u64, Vec<usize>)> = None;
        for perm in (0..n).permutations(n) {
            let c = self.relation_code(&perm);
            if best.as_ref().is_none_or(|(b, _)| c < *b) {
                best = Some((c, perm));
            }
        }
        let (code, perm) = best.unwrap_or((0, Vec::new()));
        let mut p = self.permuted(&perm);
        p.labels = (0..n).map(|i| format!("x{i}")).collect();
        (code, p)
    }

    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        self.size == other.size && self.canonical().0 == other.canonical().0
    }

    /// Cartesian product with the componentwise order; element `(x, y)` is `x * other.size + y`.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.size;
        let n = self.size * m;
        let mut pairs = Vec::new();
        for x in 0..self.size {
            for y in 0..m {
                for x2 in self.up_set(x).iter() {
                    for y2 in other.up_set(y).iter() {
                        if (x2, y2) != (x, y) {
                            pairs.push((x * m + y, x2 * m + y2));
                        }
                    }
                }
            }
        }
        let labels = (0..n)
            .map(|i| format!("({},{})", self.labels[i / m], other.labels[i % m]))
            .collect();
        Poset::with_labels(n, &pairs, labels).expect("product of posets")
    }
}

/// An order-preserving map between two posets, given by its table of images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MonoMap {
    pub source: usize,
    pub target: usize,
    pub table: Vec<usize>,
}

impl MonoMap {
    pub fn new(d: &Poset, e: &Poset, table: Vec<usize>) -> Result<MonoMap> {
        if table.len() != d.size() {
            return Err(Error::Index {
                index: table.len(),
                size: d.size(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= e.size()) {
            return Err(Error::Index {
                index: bad,
                size: e.size(),
            });
        }
        let m = MonoMap {
            source: d.size(),
            target: e.size(),
            table,
        };
        if !m.is_monotone(d, e) {
            return Err(Error::NotMonotone);
        }
        Ok(m)
    }

    pub fn identity(d: &Poset) -> MonoMap {
        MonoMap {
            source: d.size(),
            target: d.size(),
            table: (0..d.size()).collect(),
        }
    }

    pub fn constant(d: &Poset, e: &Poset, v: usize) -> MonoMap {
        MonoMap {
            source: d.size(),
            target: e.size(),
            table: vec![v; d.size()],
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn image(&self, a: ElemSet) -> ElemSet {
        a.iter().map(|x| self.table[x]).collect()
    }

    pub fn is_monotone(&self, d: &Poset, e: &Poset) -> bool {
        d.strict_pairs()
            .into_iter()
            .all(|(x, y)| e.leq(self.table[x], self.table[y]))
    }

    /// `self ∘ g`: first g, then self.
    pub fn after(&self, g: &MonoMap) -> MonoMap {
        MonoMap {
            source: g.source,
            target: self.target,
            table: g.table.iter().map(|&x| self.table[x]).collect(),
        }
    }
}

/// Lexicographic stream of all monotone maps `d → e`.
pub struct MonoMaps<'a> {
    d: &'a Poset,
    e: &'a Poset,
    table: Vec<usize>,
    started: bool,
    done: bool,
}

impl MonoMaps<'_> {
    fn fits(&self, i: usize, v: usize) -> bool {
        (0..i).all(|j| {
            (!self.d.leq(j, i) || self.e.leq(self.table[j], v))
                && (!self.d.leq(i, j) || self.e.leq(v, self.table[j]))
        })
    }

    /// Fill positions from `i` on with the smallest admissible values; false if stuck.
    fn fill_from(&mut self, mut i: usize, mut start: usize) -> bool {
        let n = self.d.size();
        loop {
            if i == n {
                return true;
            }
            let found = (start..self.e.size()).find(|&v| self.fits(i, v));
            match found {
                Some(v) => {
                    self.table[i] = v;
                    i += 1;
                    start = 0;
                }
                None => {
                    if i == 0 {
                        return false;
                    }
                    i -= 1;
                    start = self.table[i] + 1;
                }
            }
        }
    }
}

impl Iterator for MonoMaps<'_> {
    type Item = MonoMap;
    fn next(&mut self) -> Option<MonoMap> {
        if self.done {
            return None;
        }
        let n = self.d.size();
        let ok = if !self.started {
            self.started = true;
            self.fill_from(0, 0)
        } else if n == 0 {
            false
        } else {
            let last = n - 1;
            let start = self.table[last] + 1;
            self.fill_from(last, start)
        };
        if !ok {
            self.done = true;
            return None;
        }
        Some(MonoMap {
            source: n,
            target: self.e.size(),
            table: self.table.clone(),
        })
    }
}

/// All monotone maps `d → e` in lexicographic order of their tables.
pub fn enumerate_monotone_maps<'a>(d: &'a Poset, e: &'a Poset) -> MonoMaps<'a> {
    MonoMaps {
        d,
        e,
        table: vec![0; d.size()],
        started: false,
        done: false,
    }
}

/// Bound on enumeration sizes: [`DEFAULT_POSET_BOUND`], lowered by `LUBKIT_MAX_SIZE` if set.
pub fn enumeration_bound() -> usize {
    std::env::var("LUBKIT_MAX_SIZE")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map_or(DEFAULT_POSET_BOUND, |v| v.min(DEFAULT_POSET_BOUND))
}

/// Posets on `n` elements whose order extends the index order (every class has such a labelling).
fn naturally_labelled(n: usize) -> Vec<Poset> {
    // Each new element sits on top of a down-closed set of the previous ones.
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 0..n {
        let mut next = Vec::new();
        for downs in &level {
            for ideal in ElemSet::full(k).subsets() {
                let closed = ideal.iter().all(|x| ElemSet(downs[x]).is_subset(ideal));
                if closed {
                    let mut d = downs.clone();
                    d.push(ideal.bits() | 1u64 << k);
                    next.push(d);
                }
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|downs| {
            let pairs: Vec<_> = (0..n)
                .flat_map(|y| {
                    let dy = downs[y];
                    ElemSet(dy).remove(y).iter().map(move |x| (x, y)).collect::<Vec<_>>()
                })
                .collect();
            Poset::from_relation(n, &pairs).expect("ideal extension is a poset")
        })
        .collect()
}

/// All posets on `n` elements, either every labelled order or one canonical representative per
/// isomorphism class. Ordered by relation code.
pub fn enumerate_posets(n: usize, up_to_iso: bool) -> Result<Vec<Poset>> {
    let bound = enumeration_bound();
    if n > bound {
        return Err(Error::BoundExceeded {
            what: "poset enumeration size",
            requested: n,
            bound,
        });
    }
    let base = naturally_labelled(n);
    if up_to_iso {
        let mut seen = std::collections::BTreeMap::new();
        for p in base {
            let (code, canon) = p.canonical();
            seen.entry(code).or_insert(canon);
        }
        return Ok(seen.into_values().collect());
    }
    let mut codes = BTreeSet::new();
    let ident: Vec<usize> = (0..n).collect();
    for p in &base {
        for perm in (0..n).permutations(n) {
            codes.insert(p.permuted(&perm).relation_code(&ident));
        }
    }
    Ok(codes.into_iter().map(|c| poset_from_code(n, c)).collect())
}

fn poset_from_code(n: usize, code: u64) -> Poset {
    let pairs: Vec<_> = (0..n * n)
        .filter(|b| code >> b & 1 == 1)
        .map(|b| (b / n, b % n))
        .collect();
    Poset::from_relation(n, &pairs).expect("code of a poset")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p7() -> Poset {
        // a b c d e
        Poset::from_relation(5, &[(3, 1), (4, 1), (4, 2), (1, 0), (2, 0)]).unwrap()
    }

    fn v() -> Poset {
        Poset::from_relation(3, &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn closure_of_hasse_input() {
        let p = p7();
        assert!(p.leq(3, 0) && p.leq(4, 0));
        assert!(!p.leq(3, 2));
        assert_eq!(Poset::from_relation(1, &[]).unwrap().size(), 1);
        assert_eq!(
            Poset::from_relation(2, &[(0, 1), (1, 0)]),
            Err(Error::Cycle(0, 1))
        );
        assert!(matches!(
            Poset::from_relation(2, &[(0, 2)]),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn lubs() {
        let p = p7();
        assert_eq!(p.lub(ElemSet::from_indices([1, 2])), Some(0));
        assert_eq!(p.lub(ElemSet::from_indices([3, 4])), Some(1));
        assert_eq!(p.lub(ElemSet::EMPTY), None);
        assert_eq!(v().lub(ElemSet::from_indices([1, 2])), None);
        assert_eq!(v().lub(ElemSet::EMPTY), Some(0));
    }

    #[test]
    fn directedness() {
        let c3 = Poset::chain(3);
        assert!(c3.is_directed(c3.carrier()));
        assert!(!v().is_directed(ElemSet::from_indices([1, 2])));
        assert!(!p7().is_directed(ElemSet::from_indices([3, 4])));
        assert!(!c3.is_directed(ElemSet::EMPTY));
    }

    #[test]
    fn down_closures_and_cofinality() {
        let p = p7();
        assert_eq!(p.down_closure(ElemSet::singleton(2)), ElemSet::from_indices([2, 4]));
        assert_eq!(p.down_closure(ElemSet::singleton(0)), p.carrier());
        assert_eq!(p.down_closure(ElemSet::EMPTY), ElemSet::EMPTY);
        assert!(p.cofinal_leq(ElemSet::from_indices([2, 3, 4]), ElemSet::from_indices([2, 3])));
        assert!(!p.cofinal_leq(ElemSet::from_indices([1, 2]), ElemSet::from_indices([3, 4])));
        assert!(p.cofinal_leq(ElemSet::EMPTY, ElemSet::EMPTY));
    }

    #[test]
    fn monotone_map_counts() {
        let c2 = Poset::chain(2);
        let maps: Vec<_> = enumerate_monotone_maps(&c2, &c2).collect();
        assert_eq!(maps.len(), 3);
        assert_eq!(maps[0].table, vec![0, 0]);
        assert_eq!(maps[1].table, vec![0, 1]);
        assert_eq!(maps[2].table, vec![1, 1]);
        let one = Poset::discrete(1);
        assert_eq!(enumerate_monotone_maps(&one, &p7()).count(), 5);
        assert_eq!(enumerate_monotone_maps(&p7(), &one).count(), 1);
        let empty = Poset::discrete(0);
        assert_eq!(enumerate_monotone_maps(&empty, &c2).count(), 1);
        assert_eq!(enumerate_monotone_maps(&c2, &empty).count(), 0);
    }

    #[test]
    fn poset_counts() {
        let iso: Vec<usize> = (1..=5)
            .map(|n| enumerate_posets(n, true).unwrap().len())
            .collect();
        assert_eq!(iso, vec![1, 2, 5, 16, 63]);
        let labelled: Vec<usize> = (1..=4)
            .map(|n| enumerate_posets(n, false).unwrap().len())
            .collect();
        assert_eq!(labelled, vec![1, 3, 19, 219]);
        assert!(matches!(
            enumerate_posets(7, true),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn subsets_iterate_all() {
        let s = ElemSet::from_indices([1, 3, 4]);
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(ElemSet::EMPTY.subsets().count(), 1);
    }
}
