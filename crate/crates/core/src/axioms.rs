//! Decision procedures for the natural-lub axioms and the instance-wise equivalence harness.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::closure::Closer;
use crate::error::{Error, Result};
use crate::lubpo::{Lubpo, Mode};
use crate::order::{enumerate_monotone_maps, enumerate_posets, enumeration_bound, ElemSet, Poset};
use crate::rules::{cdlubpo_witness, sazonov_by_under, MAX_COMPLETION_HOST};

/// Default index-poset bound for the family axioms.
pub const DEFAULT_FAMILY_BOUND: usize = 4;

/// Largest carrier the checkers accept.
pub const MAX_CHECK_HOST: usize = 10;

/// Larger carrier accepted by S3, S5 and S9, which only scan subsets of natural or directed sets.
pub const MAX_SCAN_HOST: usize = 16;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize)]
pub enum AxiomId {
    S2,
    S3,
    S4_1Fwd,
    S4_1Bwd,
    S4_2,
    S5,
    S6,
    S7,
    S8,
    S9,
    S10,
}

impl AxiomId {
    pub const ALL: [AxiomId; 11] = [
        AxiomId::S2,
        AxiomId::S3,
        AxiomId::S4_1Fwd,
        AxiomId::S4_1Bwd,
        AxiomId::S4_2,
        AxiomId::S5,
        AxiomId::S6,
        AxiomId::S7,
        AxiomId::S8,
        AxiomId::S9,
        AxiomId::S10,
    ];

    /// Whether the axiom is defined for lubpos of this mode.
    pub fn accepts(self, mode: Mode) -> bool {
        use AxiomId::*;
        match self {
            S3 | S5 | S9 => true,
            S10 => mode == Mode::Directed,
            S2 | S4_1Fwd | S4_1Bwd | S4_2 | S6 | S7 | S8 => mode == Mode::General,
        }
    }

    pub fn is_bounded(self) -> bool {
        matches!(self, AxiomId::S4_2 | AxiomId::S10)
    }
}

impl fmt::Display for AxiomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use AxiomId::*;
        f.write_str(match self {
            S2 => "S2",
            S3 => "S3",
            S4_1Fwd => "S4_1_FWD",
            S4_1Bwd => "S4_1_BWD",
            S4_2 => "S4_2",
            S5 => "S5",
            S6 => "S6",
            S7 => "S7",
            S8 => "S8",
            S9 => "S9",
            S10 => "S10",
        })
    }
}

impl FromStr for AxiomId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        AxiomId::ALL
            .into_iter()
            .find(|a| a.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown axiom `{s}`"))
    }
}

/// A two-parameter family over a directed index poset, stored row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IndexFamily {
    pub index: Poset,
    pub values: Vec<usize>,
}

impl IndexFamily {
    pub fn at(&self, i: usize, j: usize) -> usize {
        self.values[i * self.index.size() + j]
    }

    pub fn all(&self) -> ElemSet {
        self.values.iter().copied().collect()
    }

    pub fn diagonal(&self) -> ElemSet {
        (0..self.index.size()).map(|i| self.at(i, i)).collect()
    }

    pub fn row(&self, i: usize) -> ElemSet {
        (0..self.index.size()).map(|j| self.at(i, j)).collect()
    }

    pub fn column(&self, j: usize) -> ElemSet {
        (0..self.index.size()).map(|i| self.at(i, j)).collect()
    }

    pub fn is_monotone(&self, d: &Poset) -> bool {
        let ip = &self.index;
        let n = ip.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                ip.up_set(i).iter().all(|i2| {
                    ip.up_set(j)
                        .iter()
                        .all(|j2| d.leq(self.at(i, j), self.at(i2, j2)))
                })
            })
        })
    }
}

/// Counterexample to an axiom: the natural premises, and the set that should be natural but is not.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness {
    Sets { premises: Vec<ElemSet>, missing: ElemSet },
    Family { family: IndexFamily, missing: ElemSet },
}

impl Witness {
    pub fn missing(&self) -> ElemSet {
        match self {
            Witness::Sets { missing, .. } | Witness::Family { missing, .. } => *missing,
        }
    }

    pub fn describe(&self, d: &Lubpo) -> String {
        match self {
            Witness::Sets { premises, missing } => {
                let prem: Vec<String> = premises.iter().map(|&s| d.show(s)).collect();
                format!("premises [{}] but {} is not natural", prem.join(", "), d.show(*missing))
            }
            Witness::Family { family, missing } => {
                let n = family.index.size();
                let rows: Vec<String> = (0..n)
                    .map(|i| {
                        (0..n)
                            .map(|j| d.poset().label(family.at(i, j)).to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .collect();
                format!(
                    "index order {:?}, family [{}], but {} is not natural",
                    family.index.strict_pairs(),
                    rows.join(" | "),
                    d.show(*missing)
                )
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CheckReport {
    pub axiom: AxiomId,
    pub holds: bool,
    pub witness: Option<Witness>,
    /// False when only index posets up to a bound were examined.
    pub exact: bool,
}

/// Dense view of a lubpo for fast scans.
struct Table<'a> {
    d: &'a Lubpo,
    p: &'a Poset,
    nat: Vec<bool>,
    lub: Vec<Option<usize>>,
}

impl<'a> Table<'a> {
    fn new(d: &'a Lubpo) -> Self {
        let p = d.poset();
        let total = 1usize << p.size();
        let mut nat = vec![false; total];
        for s in d.natural_sets() {
            nat[s.bits() as usize] = true;
        }
        let lub = (0..total).map(|m| p.lub(ElemSet::from_bits(m as u64))).collect();
        Table { d, p, nat, lub }
    }

    fn nat(&self, s: ElemSet) -> bool {
        self.nat[s.bits() as usize]
    }

    fn lub(&self, s: ElemSet) -> Option<usize> {
        self.lub[s.bits() as usize]
    }

    fn naturals(&self) -> impl Iterator<Item = (ElemSet, usize)> + '_ {
        self.d.naturals()
    }

    fn sets(m: ElemSet, w: Option<Vec<ElemSet>>) -> Witness {
        Witness::Sets {
            premises: w.unwrap_or_default(),
            missing: m,
        }
    }

    fn s2(&self) -> Option<Witness> {
        for (x, top) in self.naturals() {
            let room = self.p.down_set(top).minus(x);
            for z in room.subsets() {
                let y = x.union(z);
                if !self.nat(y) {
                    return Some(Self::sets(y, Some(vec![x])));
                }
            }
        }
        None
    }

    fn s3(&self) -> Option<Witness> {
        (0..self.p.size())
            .map(ElemSet::singleton)
            .find(|&s| !self.nat(s))
            .map(|s| Self::sets(s, None))
    }

    fn s5(&self) -> Option<Witness> {
        let directed = self.d.mode() == Mode::Directed;
        for (y, _) in self.naturals() {
            for x in y.subsets() {
                if directed && !self.p.is_directed(x) {
                    continue;
                }
                if self.p.cofinal_leq(y, x) && !self.nat(x) {
                    return Some(Self::sets(x, Some(vec![y])));
                }
            }
        }
        None
    }

    /// Scans non-singleton premises first, and candidate sets without the lub before those with
    /// it, so witnesses avoid the trivial cases where possible.
    fn s6(&self) -> Option<Witness> {
        let mut nats: Vec<(ElemSet, usize)> = self.naturals().collect();
        nats.sort_by_key(|(x, _)| (x.len() == 1, *x));
        for (x, top) in nats {
            let rest = self.p.down_set(top).remove(top);
            let candidates = rest.subsets().chain(rest.subsets().map(|s| s.insert(top)));
            for y in candidates {
                if self.p.cofinal_leq(x, y) && !self.nat(y) {
                    return Some(Self::sets(y, Some(vec![x])));
                }
            }
        }
        None
    }

    fn s8(&self) -> Option<Witness> {
        let mut by_lub: Vec<Vec<ElemSet>> = vec![Vec::new(); self.p.size()];
        for (a, l) in self.naturals() {
            by_lub[l].push(a);
        }
        for b in self.p.carrier().subsets() {
            if self.nat(b) {
                continue;
            }
            let Some(top) = self.lub(b) else { continue };
            let cover = self.d.under_cover(b);
            if let Some(&a) = by_lub[top].iter().find(|a| a.is_subset(cover)) {
                return Some(Self::sets(b, Some(vec![a])));
            }
        }
        None
    }

    fn s9(&self) -> Option<Witness> {
        if self.d.mode() == Mode::Directed {
            return cdlubpo_witness(self.d).map(|a| Self::sets(a, None));
        }
        let closer = Closer::new(self.d);
        self.p
            .carrier()
            .subsets()
            .find(|&a| !self.nat(a) && self.lub(a).is_some_and(|t| closer.cl(a).contains(t)))
            .map(|a| Self::sets(a, None))
    }

    /// Every (union, lub-set) pair reachable by a nonempty collection of naturals, with a
    /// back-pointer to rebuild one such collection. `allow_empty_sets` admits ∅ as a member.
    fn collections(&self, allow_empty_sets: bool) -> Collections {
        use std::collections::hash_map::Entry;
        let mut reach: HashMap<(u64, u64), (Option<(u64, u64)>, ElemSet)> = HashMap::new();
        let mut order: Vec<(u64, u64)> = Vec::new();
        for (x, l) in self.naturals() {
            if x.is_empty() && !allow_empty_sets {
                continue;
            }
            let snapshot = order.clone();
            if let Entry::Vacant(e) = reach.entry((x.bits(), 1u64 << l)) {
                e.insert((None, x));
                order.push((x.bits(), 1u64 << l));
            }
            for k in snapshot {
                let next = (k.0 | x.bits(), k.1 | 1u64 << l);
                if let Entry::Vacant(e) = reach.entry(next) {
                    e.insert((Some(k), x));
                    order.push(next);
                }
            }
        }
        Collections { reach, order }
    }

    fn s7(&self) -> Option<Witness> {
        let c = self.collections(true);
        for &(u, t) in &c.order {
            let (u, t) = (ElemSet::from_bits(u), ElemSet::from_bits(t));
            if self.nat(t) && !self.nat(u) {
                let mut prem = c.rebuild((u.bits(), t.bits()));
                prem.push(t);
                return Some(Self::sets(u, Some(prem)));
            }
        }
        None
    }

    fn s4_1(&self, forward: bool) -> Option<Witness> {
        let c = self.collections(false);
        for &(u, t) in &c.order {
            let (u, t) = (ElemSet::from_bits(u), ElemSet::from_bits(t));
            let (have, want) = if forward { (t, u) } else { (u, t) };
            if self.nat(have) && !self.nat(want) {
                let mut prem = c.rebuild((u.bits(), t.bits()));
                prem.push(have);
                return Some(Self::sets(want, Some(prem)));
            }
        }
        None
    }

    fn s4_2(&self, bound: usize) -> Result<Option<Witness>> {
        let index_posets = directed_index_posets(bound)?;
        for f_set in self.p.carrier().subsets() {
            let Some(top) = self.p.greatest_in(f_set) else { continue };
            for g_set in f_set.subsets() {
                if !g_set.contains(top) || g_set.len() > bound || self.nat(f_set) == self.nat(g_set) {
                    continue;
                }
                for ip in &index_posets {
                    if let Some(values) = realise_family(ip, self.p, f_set, g_set) {
                        let missing = if self.nat(f_set) { g_set } else { f_set };
                        return Ok(Some(Witness::Family {
                            family: IndexFamily {
                                index: ip.clone(),
                                values,
                            },
                            missing,
                        }));
                    }
                }
            }
        }
        Ok(None)
    }

    fn s10(&self, bound: usize) -> Result<Option<Witness>> {
        for ip in directed_index_posets(bound)? {
            let grid = ip.product(&ip);
            for f in enumerate_monotone_maps(&grid, self.p) {
                let fam = IndexFamily {
                    index: ip.clone(),
                    values: f.table,
                };
                if s10_premises(self, &fam) && !self.nat(fam.diagonal()) {
                    let missing = fam.diagonal();
                    return Ok(Some(Witness::Family {
                        family: fam,
                        missing,
                    }));
                }
            }
        }
        Ok(None)
    }
}

fn s10_premises(t: &Table, fam: &IndexFamily) -> bool {
    let n = fam.index.size();
    let mut xs = ElemSet::EMPTY;
    let mut zs = ElemSet::EMPTY;
    for i in 0..n {
        let (row, col) = (fam.row(i), fam.column(i));
        if !t.nat(row) || !t.nat(col) {
            return false;
        }
        xs = xs.insert(t.lub(row).expect("natural"));
        zs = zs.insert(t.lub(col).expect("natural"));
    }
    t.nat(xs) && t.nat(zs) && t.lub(xs) == t.lub(zs)
}

struct Collections {
    reach: HashMap<(u64, u64), (Option<(u64, u64)>, ElemSet)>,
    order: Vec<(u64, u64)>,
}

impl Collections {
    fn rebuild(&self, mut key: (u64, u64)) -> Vec<ElemSet> {
        let mut out = Vec::new();
        while let Some(&(prev, x)) = self.reach.get(&key) {
            out.push(x);
            match prev {
                Some(k) => key = k,
                None => break,
            }
        }
        out.sort();
        out
    }
}

/// Directed index posets (those with a greatest element) of size 1..=bound, up to isomorphism.
pub fn directed_index_posets(bound: usize) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for k in 1..=bound {
        out.extend(enumerate_posets(k, true)?.into_iter().filter(|p| p.greatest().is_some()));
    }
    Ok(out)
}

/// A family monotone in both parameters over `ip` whose values are exactly `f_set` and whose
/// diagonal is exactly `g_set`, if one exists.
pub fn realise_family(ip: &Poset, d: &Poset, f_set: ElemSet, g_set: ElemSet) -> Option<Vec<usize>> {
    let n = ip.size();
    let grid = ip.product(ip);
    let mut cells: Vec<usize> = (0..n * n).collect();
    cells.sort_by_key(|&c| grid.down_set(c).len());
    let diag: Vec<bool> = (0..n * n).map(|c| c / n == c % n).collect();
    let mut values = vec![usize::MAX; n * n];
    fn go(
        k: usize,
        cells: &[usize],
        diag: &[bool],
        grid: &Poset,
        d: &Poset,
        f_set: ElemSet,
        g_set: ElemSet,
        values: &mut Vec<usize>,
        seen_diag: ElemSet,
        seen_off: ElemSet,
    ) -> bool {
        let rest_diag = cells[k..].iter().filter(|&&c| diag[c]).count();
        let rest_off = cells.len() - k - rest_diag;
        if g_set.minus(seen_diag).len() > rest_diag || f_set.minus(g_set).minus(seen_off).len() > rest_off {
            return false;
        }
        if k == cells.len() {
            return true;
        }
        let c = cells[k];
        let dom = if diag[c] { g_set } else { f_set };
        for v in dom.iter() {
            let fits = cells[..k].iter().all(|&o| {
                (!grid.leq(o, c) || d.leq(values[o], v)) && (!grid.leq(c, o) || d.leq(v, values[o]))
            });
            if !fits {
                continue;
            }
            values[c] = v;
            let (sd, so) = if diag[c] {
                (seen_diag.insert(v), seen_off)
            } else {
                (seen_diag, seen_off.insert(v))
            };
            if go(k + 1, cells, diag, grid, d, f_set, g_set, values, sd, so) {
                return true;
            }
        }
        values[c] = usize::MAX;
        false
    }
    go(0, &cells, &diag, &grid, d, f_set, g_set, &mut values, ElemSet::EMPTY, ElemSet::EMPTY).then_some(values)
}

/// Decides one axiom. The family axioms S4_2 and S10 only examine index posets of at most
/// `bound` elements (default 4) and report `exact = false`.
pub fn check_axiom(d: &Lubpo, a: AxiomId, bound: Option<usize>) -> Result<CheckReport> {
    if !a.accepts(d.mode()) {
        return Err(Error::ModeMismatch {
            axiom: a.to_string(),
            mode: d.mode().to_string(),
        });
    }
    let host_cap = match a {
        AxiomId::S3 | AxiomId::S5 | AxiomId::S9 => MAX_SCAN_HOST,
        _ => MAX_CHECK_HOST,
    };
    if d.size() > host_cap {
        return Err(Error::BoundExceeded {
            what: "axiom check host size",
            requested: d.size(),
            bound: host_cap,
        });
    }
    let bound = bound.unwrap_or(DEFAULT_FAMILY_BOUND);
    if a.is_bounded() && bound > enumeration_bound() {
        return Err(Error::BoundExceeded {
            what: "index poset bound",
            requested: bound,
            bound: enumeration_bound(),
        });
    }
    let t = Table::new(d);
    use AxiomId::*;
    let witness = match a {
        S2 => t.s2(),
        S3 => t.s3(),
        S4_1Fwd => t.s4_1(true),
        S4_1Bwd => t.s4_1(false),
        S4_2 => t.s4_2(bound)?,
        S5 => t.s5(),
        S6 => t.s6(),
        S7 => t.s7(),
        S8 => t.s8(),
        S9 => t.s9(),
        S10 => t.s10(bound)?,
    };
    Ok(CheckReport {
        axiom: a,
        holds: witness.is_none(),
        witness,
        exact: !a.is_bounded(),
    })
}

/// Every axiom defined for the lubpo's mode.
pub fn check_all(d: &Lubpo, bound: Option<usize>) -> Result<Vec<CheckReport>> {
    AxiomId::ALL
        .into_iter()
        .filter(|a| a.accepts(d.mode()))
        .map(|a| check_axiom(d, a, bound))
        .collect()
}

/// Re-checks a witness against the axiom's definition: true iff it shows a violation.
pub fn replay_witness(d: &Lubpo, a: AxiomId, w: &Witness) -> bool {
    let p = d.poset();
    let nat = |s: ElemSet| d.is_natural(s);
    let missing = w.missing();
    if nat(missing) || !p.contains_set(missing) {
        return false;
    }
    use AxiomId::*;
    match (a, w) {
        (S3, Witness::Sets { .. }) => missing.len() == 1,
        (S2, Witness::Sets { premises, .. }) => match premises[..] {
            [x] => nat(x) && x.is_subset(missing) && p.lub(x).is_some_and(|t| p.set_below(missing, t)),
            _ => false,
        },
        (S5, Witness::Sets { premises, .. }) => match premises[..] {
            [y] => {
                nat(y)
                    && missing.is_subset(y)
                    && p.cofinal_leq(y, missing)
                    && (d.mode() == Mode::General || p.is_directed(missing))
            }
            _ => false,
        },
        (S6, Witness::Sets { premises, .. }) => match premises[..] {
            [x] => nat(x) && p.cofinal_leq(x, missing) && p.lub(x).is_some_and(|t| p.set_below(missing, t)),
            _ => false,
        },
        (S8, Witness::Sets { premises, .. }) => match premises[..] {
            [x] => {
                nat(x) && d.under_rel(x, missing) && p.lub(x).is_some_and(|t| p.set_below(missing, t))
            }
            _ => false,
        },
        (S7 | S4_1Fwd | S4_1Bwd, Witness::Sets { premises, .. }) => {
            let Some((&have, coll)) = premises.split_last() else { return false };
            if coll.is_empty() && a != S7 {
                return false;
            }
            if !coll.iter().all(|&x| nat(x) && (a == S7 || !x.is_empty())) || !nat(have) {
                return false;
            }
            let union = coll.iter().fold(ElemSet::EMPTY, |u, &x| u.union(x));
            let lubs: ElemSet = coll.iter().map(|&x| p.lub(x).expect("natural")).collect();
            match a {
                S4_1Bwd => have == union && missing == lubs,
                _ => have == lubs && missing == union,
            }
        }
        (S9, Witness::Sets { .. }) => {
            let (dd, ok_shape) = if d.mode() == Mode::Directed {
                (d.delta_restrict(), p.is_directed(missing))
            } else {
                (d.clone(), true)
            };
            ok_shape && p.lub(missing).is_some_and(|t| Closer::new(&dd).cl(missing).contains(t))
        }
        (S4_2, Witness::Family { family, .. }) => {
            family.index.greatest().is_some()
                && family.is_monotone(p)
                && nat(family.all()) != nat(family.diagonal())
                && (missing == family.all() || missing == family.diagonal())
        }
        (S10, Witness::Family { family, .. }) => {
            let t = Table::new(d);
            family.index.greatest().is_some()
                && family.is_monotone(p)
                && s10_premises(&t, family)
                && missing == family.diagonal()
        }
        _ => false,
    }
}

/// Axiom values on one instance, for the five equivalences.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomValues {
    pub s2: bool,
    pub s3: bool,
    pub s4_1_fwd: bool,
    pub s4_1_bwd: bool,
    pub s4_2: Option<bool>,
    pub s5: bool,
    pub s6: bool,
    pub s7: bool,
    pub s8: bool,
}

/// One failed equivalence on one instance.
#[derive(Clone, Debug, Serialize)]
pub struct Discrepancy {
    pub instance: String,
    pub relation: &'static str,
    pub values: AxiomValues,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct HarnessReport {
    pub instances: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// The relations checked per instance.
pub const EQUIVALENCES: [&str; 5] = [
    "S2 & S4_1_BWD <=> S6",
    "S6 => S4_2",
    "S2 & S5 <=> S6",
    "S6 => (S4_1_FWD <=> S7)",
    "S6 & S7 <=> S8",
];

/// Evaluates the axioms on `d` (general mode) and returns the failed relations.
pub fn equivalence_instance(d: &Lubpo) -> Result<(AxiomValues, Vec<&'static str>)> {
    let t = Table::new(d);
    let mut v = AxiomValues {
        s2: t.s2().is_none(),
        s3: t.s3().is_none(),
        s4_1_fwd: t.s4_1(true).is_none(),
        s4_1_bwd: t.s4_1(false).is_none(),
        s4_2: None,
        s5: t.s5().is_none(),
        s6: t.s6().is_none(),
        s7: t.s7().is_none(),
        s8: t.s8().is_none(),
    };
    if v.s6 {
        v.s4_2 = Some(t.s4_2(DEFAULT_FAMILY_BOUND)?.is_none());
    }
    let mut bad = Vec::new();
    if v.s3 {
        if (v.s2 && v.s4_1_bwd) != v.s6 {
            bad.push(EQUIVALENCES[0]);
        }
        if v.s6 && v.s4_2 != Some(true) {
            bad.push(EQUIVALENCES[1]);
        }
        if (v.s2 && v.s5) != v.s6 {
            bad.push(EQUIVALENCES[2]);
        }
        if v.s6 && v.s4_1_fwd != v.s7 {
            bad.push(EQUIVALENCES[3]);
        }
        if (v.s6 && v.s7) != v.s8 {
            bad.push(EQUIVALENCES[4]);
        }
    }
    Ok((v, bad))
}

fn record(d: &Lubpo, report: &mut HarnessReport) -> Result<()> {
    let (values, bad) = equivalence_instance(d)?;
    report.instances += 1;
    for relation in bad {
        report.discrepancies.push(Discrepancy {
            instance: crate::format::serialize(d),
            relation,
            values,
        });
    }
    Ok(())
}

/// Largest size for exhaustive harness runs.
pub const MAX_EXHAUSTIVE: usize = 4;

/// Every poset (up to isomorphism) with at most `max_size` elements, with every natural family
/// drawn from its lub-having sets.
pub fn exhaustive_equivalences(max_size: usize) -> Result<HarnessReport> {
    if max_size > MAX_EXHAUSTIVE {
        return Err(Error::BoundExceeded {
            what: "exhaustive harness size",
            requested: max_size,
            bound: MAX_EXHAUSTIVE,
        });
    }
    let mut posets = Vec::new();
    for n in 1..=max_size {
        posets.extend(enumerate_posets(n, true)?);
    }
    let parts: Vec<Result<HarnessReport>> = posets
        .par_iter()
        .map(|p| {
            let optional = lub_sets(p);
            let mut rep = HarnessReport::default();
            for pick in 0u64..1 << optional.len() {
                let sets = ElemSet::from_bits(pick).iter().map(|k| optional[k]);
                let d = Lubpo::from_sets(p.clone(), sets, Mode::General)?;
                record(&d, &mut rep)?;
            }
            Ok(rep)
        })
        .collect();
    merge(parts)
}

/// Non-singleton subsets that have a lub.
pub fn lub_sets(p: &Poset) -> Vec<ElemSet> {
    p.carrier()
        .subsets()
        .filter(|s| s.len() != 1 && p.lub(*s).is_some())
        .collect()
}

/// A random poset on `n` elements: random relation above the index order, then relabelled.
pub fn random_poset(rng: &mut impl Rng, n: usize) -> Poset {
    let density: f64 = rng.gen_range(0.1..0.7);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((i, j));
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.gen_range(0..=i));
    }
    let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (perm[a], perm[b])).collect();
    Poset::from_relation(n, &pairs).expect("relation above a linear order is acyclic")
}

/// A random general-mode lubpo on `n` elements; about a third are completed so that the
/// cofinality side of the equivalences is exercised. Hosts above the completion bound are never
/// completed.
pub fn random_lubpo(rng: &mut impl Rng, n: usize) -> Lubpo {
    let p = random_poset(rng, n);
    let optional = lub_sets(&p);
    let q: f64 = rng.gen_range(0.05..0.6);
    let picked: Vec<ElemSet> = optional.into_iter().filter(|_| rng.gen_bool(q)).collect();
    let d = Lubpo::from_sets(p, picked, Mode::General).expect("lub-having sets");
    if n <= MAX_COMPLETION_HOST && rng.gen_ratio(1, 3) {
        let fam = sazonov_by_under(&d).expect("small host");
        d.with_sets(fam, Mode::General).expect("completion keeps lubs")
    } else {
        d
    }
}

/// `samples` random instances on `n` elements.
pub fn sampled_equivalences(n: usize, samples: usize, seed: u64) -> Result<HarnessReport> {
    if n > MAX_CHECK_HOST {
        return Err(Error::BoundExceeded {
            what: "sampled harness size",
            requested: n,
            bound: MAX_CHECK_HOST,
        });
    }
    let parts: Vec<Result<HarnessReport>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let d = random_lubpo(&mut rng, n);
            let mut rep = HarnessReport::default();
            record(&d, &mut rep)?;
            Ok(rep)
        })
        .collect();
    merge(parts)
}

/// Exhaustive when `max_size` is small enough, otherwise `sample_budget` random instances of
/// size `max_size`.
pub fn equivalence_harness(max_size: usize, sample_budget: usize, seed: u64) -> Result<HarnessReport> {
    if max_size <= MAX_EXHAUSTIVE {
        exhaustive_equivalences(max_size)
    } else {
        sampled_equivalences(max_size, sample_budget, seed)
    }
}

fn merge(parts: Vec<Result<HarnessReport>>) -> Result<HarnessReport> {
    let mut out = HarnessReport::default();
    for part in parts {
        let part = part?;
        out.instances += part.instances;
        out.discrepancies.extend(part.discrepancies);
    }
    Ok(out)
}
