//! Lub-rules, their validity, and completion of natural families under rule classes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::closure::{close_rules, deduce, Closer, Deduction, Rule, RuleSystem};
use crate::error::{Error, Result};
use crate::lubpo::{Lubpo, Mode};
use crate::order::{enumerate_monotone_maps, enumerate_posets, enumeration_bound, ElemSet, MonoMap, Poset};

/// Largest carrier accepted by completions (they scan every subset, sometimes pairwise).
pub const MAX_COMPLETION_HOST: usize = 10;

/// Largest carrier accepted by [`validity_oracle`].
pub const MAX_ORACLE_HOST: usize = 8;

/// An inference from the lubs of the `pattern` sets to the lub of `result`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LubRule {
    pub host: Poset,
    pub pattern: Vec<ElemSet>,
    pub result: ElemSet,
}

impl LubRule {
    /// Fails if any pattern member or the result lacks a lub.
    pub fn new(host: Poset, pattern: Vec<ElemSet>, result: ElemSet) -> Result<LubRule> {
        for &s in pattern.iter().chain([&result]) {
            if !host.contains_set(s) {
                return Err(Error::Index {
                    index: 64 - s.bits().leading_zeros() as usize - 1,
                    size: host.size(),
                });
            }
            if host.lub(s).is_none() {
                return Err(Error::LubMismatch {
                    set: s.show(host.labels()),
                    claimed: "?".into(),
                    actual: "none".into(),
                });
            }
        }
        Ok(LubRule {
            host,
            pattern,
            result,
        })
    }

    fn pattern_lubs(&self) -> Vec<(ElemSet, usize)> {
        self.pattern
            .iter()
            .map(|&s| (s, self.host.lub(s).expect("checked at construction")))
            .collect()
    }

    fn result_lub(&self) -> usize {
        self.host.lub(self.result).expect("checked at construction")
    }
}

/// Valid iff the result's lub lies in the closure of the result, where only the pattern sets
/// are natural.
pub fn is_valid_rule(r: &LubRule) -> bool {
    Closer::from_parts(&r.host, &r.pattern_lubs())
        .cl(r.result)
        .contains(r.result_lub())
}

/// Outcome of [`validity_oracle`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OracleVerdict {
    pub valid: bool,
    /// Embedding into the closed-set lattice that breaks the result's lub (present iff invalid).
    pub lattice_witness: Option<(Poset, MonoMap)>,
    /// A monotone map into a small enumerated poset respecting the pattern lubs but not the
    /// result's, if one exists within the size bound.
    pub small_witness: Option<(Poset, MonoMap)>,
}

/// Decides validity without the rule-system closure: closed sets are found by filtering every
/// subset, and the rule is valid iff the principal-ideal embedding respects the result's lub.
/// Also searches small posets for a counterexample map.
pub fn validity_oracle(r: &LubRule, max_target_size: usize) -> Result<OracleVerdict> {
    let p = &r.host;
    if p.size() > MAX_ORACLE_HOST {
        return Err(Error::BoundExceeded {
            what: "validity oracle host size",
            requested: p.size(),
            bound: MAX_ORACLE_HOST,
        });
    }
    if max_target_size > enumeration_bound() {
        return Err(Error::BoundExceeded {
            what: "validity oracle target size",
            requested: max_target_size,
            bound: enumeration_bound(),
        });
    }
    let pat = r.pattern_lubs();
    let closed: Vec<ElemSet> = p
        .carrier()
        .subsets()
        .filter(|&s| p.is_down_closed(s))
        .filter(|&s| pat.iter().all(|&(x, l)| !x.is_subset(s) || s.contains(l)))
        .collect();
    // Join of the principal ideals of the result = meet of closed sets above all of them.
    let ideal_union = p.down_closure(r.result);
    let join = closed
        .iter()
        .filter(|s| ideal_union.is_subset(**s))
        .fold(p.carrier(), |acc, &s| acc.intersection(s));
    let top = r.result_lub();
    let valid = join == p.down_set(top);

    let lattice_witness = (!valid).then(|| {
        let names: Vec<String> = closed.iter().map(|s| s.show(p.labels())).collect();
        let mut pairs = Vec::new();
        for (i, a) in closed.iter().enumerate() {
            for (j, b) in closed.iter().enumerate() {
                if i != j && a.is_subset(*b) {
                    pairs.push((i, j));
                }
            }
        }
        let lat = Poset::with_labels(closed.len(), &pairs, names).expect("inclusion order");
        let table = (0..p.size())
            .map(|x| closed.binary_search(&p.down_set(x)).expect("principal ideals are closed"))
            .collect();
        (lat, MonoMap { source: p.size(), target: closed.len(), table })
    });

    let mut small_witness = None;
    'outer: for n in 1..=max_target_size {
        for e in enumerate_posets(n, true)? {
            for f in enumerate_monotone_maps(p, &e) {
                if breaks_rule(r, &pat, top, &e, &f) {
                    small_witness = Some((e.clone(), f));
                    break 'outer;
                }
            }
        }
    }
    Ok(OracleVerdict {
        valid,
        lattice_witness,
        small_witness,
    })
}

/// Whether monotone `f` respects every pattern lub but not the result's lub.
pub fn breaks_rule(r: &LubRule, pat: &[(ElemSet, usize)], top: usize, e: &Poset, f: &MonoMap) -> bool {
    let respects = |s: ElemSet, l: usize| e.lub(f.image(s)) == Some(f.apply(l));
    pat.iter().all(|&(s, l)| respects(s, l)) && !respects(r.result, top)
}

/// The two rule classes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RuleClassId {
    /// Singleton, cofinality and transitivity rules.
    Sazonov,
    /// Every valid lub-rule.
    Canonical,
}

impl fmt::Display for RuleClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleClassId::Sazonov => "sazonov",
            RuleClassId::Canonical => "canonical",
        })
    }
}

impl std::str::FromStr for RuleClassId {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "sazonov" => Ok(RuleClassId::Sazonov),
            "canonical" => Ok(RuleClassId::Canonical),
            other => Err(format!("unknown rule class `{other}`")),
        }
    }
}

fn check_host(d: &Lubpo) -> Result<()> {
    if d.size() > MAX_COMPLETION_HOST {
        return Err(Error::BoundExceeded {
            what: "completion host size",
            requested: d.size(),
            bound: MAX_COMPLETION_HOST,
        });
    }
    Ok(())
}

/// The cofinality (S6) and transitivity (S7) rules over natural sets of a fixed order, plus
/// singletons (S3). Items are natural sets; lubs are implied.
pub struct SazonovRules<'a> {
    p: &'a Poset,
}

impl<'a> SazonovRules<'a> {
    pub fn new(p: &'a Poset) -> Self {
        SazonovRules { p }
    }

    fn cofinality(&self, closed: &BTreeSet<ElemSet>, out: &mut Vec<Rule<ElemSet>>) {
        for &x in closed {
            let top = self.p.lub(x).expect("natural sets have lubs");
            for y in self.p.down_set(top).subsets() {
                if y != x && self.p.cofinal_leq(x, y) {
                    out.push(Rule {
                        name: "S6".into(),
                        premises: vec![x],
                        conclusion: y,
                    });
                }
            }
        }
    }

    fn transitivity(&self, closed: &BTreeSet<ElemSet>, out: &mut Vec<Rule<ElemSet>>) {
        let mut by_lub: BTreeMap<usize, Vec<ElemSet>> = BTreeMap::new();
        for &x in closed {
            by_lub.entry(self.p.lub(x).expect("natural")).or_default().push(x);
        }
        // For each lub t: every union of a nonempty subcollection, with one such subcollection.
        let unions: BTreeMap<usize, BTreeMap<ElemSet, Vec<ElemSet>>> = by_lub
            .iter()
            .map(|(&t, sets)| {
                let mut u: BTreeMap<ElemSet, Vec<ElemSet>> = BTreeMap::new();
                for &x in sets {
                    let snapshot: Vec<_> = u.iter().map(|(k, v)| (*k, v.clone())).collect();
                    u.entry(x).or_insert_with(|| vec![x]);
                    for (k, mut coll) in snapshot {
                        let key = k.union(x);
                        u.entry(key).or_insert_with(|| {
                            coll.push(x);
                            coll
                        });
                    }
                }
                (t, u)
            })
            .collect();
        for &t_set in closed {
            let mut acc: BTreeMap<ElemSet, Vec<ElemSet>> = BTreeMap::new();
            acc.insert(ElemSet::EMPTY, Vec::new());
            let mut possible = true;
            for t in t_set.iter() {
                let Some(ut) = unions.get(&t) else {
                    possible = false;
                    break;
                };
                let mut next: BTreeMap<ElemSet, Vec<ElemSet>> = BTreeMap::new();
                for (a, ca) in &acc {
                    for (b, cb) in ut {
                        next.entry(a.union(*b)).or_insert_with(|| {
                            let mut c = ca.clone();
                            c.extend(cb.iter().copied());
                            c
                        });
                    }
                }
                acc = next;
            }
            if !possible {
                continue;
            }
            for (u, coll) in acc {
                if u == t_set && coll.len() == t_set.len() && coll.iter().all(|c| c.len() == 1) {
                    continue;
                }
                let mut premises = coll;
                premises.sort();
                premises.push(t_set);
                out.push(Rule {
                    name: "S7".into(),
                    premises,
                    conclusion: u,
                });
            }
        }
    }
}

impl RuleSystem for SazonovRules<'_> {
    type Item = ElemSet;

    fn rules_within(&self, closed: &BTreeSet<ElemSet>) -> Vec<Rule<ElemSet>> {
        let mut out = Vec::new();
        for x in 0..self.p.size() {
            out.push(Rule {
                name: "S3".into(),
                premises: Vec::new(),
                conclusion: ElemSet::singleton(x),
            });
        }
        self.cofinality(closed, &mut out);
        self.transitivity(closed, &mut out);
        out
    }

    fn admits(&self, rule: &Rule<ElemSet>) -> bool {
        let p = self.p;
        let inside = rule
            .premises
            .iter()
            .chain([&rule.conclusion])
            .all(|s| p.contains_set(*s));
        if !inside {
            return false;
        }
        match rule.name.as_str() {
            "S3" => rule.premises.is_empty() && rule.conclusion.len() == 1,
            "S6" => {
                let [x] = rule.premises[..] else { return false };
                let y = rule.conclusion;
                match p.lub(x) {
                    Some(top) => p.cofinal_leq(x, y) && p.set_below(y, top),
                    None => false,
                }
            }
            "S7" => {
                let Some((&t_set, coll)) = rule.premises.split_last() else {
                    return false;
                };
                if p.lub(t_set).is_none() {
                    return false;
                }
                let mut lubs = ElemSet::EMPTY;
                let mut union = ElemSet::EMPTY;
                for &x in coll {
                    match p.lub(x) {
                        Some(l) => lubs = lubs.insert(l),
                        None => return false,
                    }
                    union = union.union(x);
                }
                lubs == t_set && union == rule.conclusion
            }
            _ => false,
        }
    }

    fn show(&self, item: &ElemSet) -> String {
        show_natural(self.p, *item)
    }
}

/// `{x,y}->z`
pub fn show_natural(p: &Poset, s: ElemSet) -> String {
    match p.lub(s) {
        Some(l) => format!("{}->{}", s.show(p.labels()), p.label(l)),
        None => s.show(p.labels()),
    }
}

/// The closure rule (S9) over natural sets: a set with lub `a` becomes natural once `a` lies in
/// its closure under the premises' natural lubs.
pub struct CanonicalRules<'a> {
    p: &'a Poset,
}

impl<'a> CanonicalRules<'a> {
    pub fn new(p: &'a Poset) -> Self {
        CanonicalRules { p }
    }
}

impl RuleSystem for CanonicalRules<'_> {
    type Item = ElemSet;

    fn rules_within(&self, closed: &BTreeSet<ElemSet>) -> Vec<Rule<ElemSet>> {
        let p = self.p;
        let nats: Vec<(ElemSet, usize)> = closed
            .iter()
            .filter(|s| s.len() != 1)
            .map(|&s| (s, p.lub(s).expect("natural")))
            .collect();
        let closer = Closer::from_parts(p, &nats);
        let mut out = Vec::new();
        for a in p.carrier().subsets() {
            let Some(top) = p.lub(a) else { continue };
            let c = closer.cl(a);
            if c.contains(top) {
                let premises = nats
                    .iter()
                    .filter(|(s, _)| s.is_subset(c))
                    .map(|&(s, _)| s)
                    .collect();
                out.push(Rule {
                    name: "S9".into(),
                    premises,
                    conclusion: a,
                });
            }
        }
        out
    }

    fn admits(&self, rule: &Rule<ElemSet>) -> bool {
        if rule.name != "S9" {
            return false;
        }
        match LubRule::new(self.p.clone(), rule.premises.clone(), rule.conclusion) {
            Ok(r) => is_valid_rule(&r),
            Err(_) => false,
        }
    }

    fn show(&self, item: &ElemSet) -> String {
        show_natural(self.p, *item)
    }
}

/// SAZONOV completion by the one-step "under" rule: `A→a, A ⊴ B ⊑ a ⇒ B→a`, to a fixpoint.
/// Returns the general-mode family.
pub fn sazonov_by_under(d: &Lubpo) -> Result<BTreeSet<ElemSet>> {
    check_host(d)?;
    let p = d.poset();
    let mut fam: BTreeSet<ElemSet> = d.natural_sets().clone();
    loop {
        let current = d.with_sets(fam.iter().copied(), Mode::General)?;
        let mut by_lub: BTreeMap<usize, Vec<ElemSet>> = BTreeMap::new();
        for (a, l) in current.naturals() {
            by_lub.entry(l).or_default().push(a);
        }
        let mut fresh = Vec::new();
        for b in p.carrier().subsets() {
            if fam.contains(&b) {
                continue;
            }
            let Some(top) = p.lub(b) else { continue };
            let cover = current.under_cover(b);
            let hit = by_lub
                .get(&top)
                .is_some_and(|sets| sets.iter().any(|a| a.is_subset(cover)));
            if hit {
                fresh.push(b);
            }
        }
        if fresh.is_empty() {
            return Ok(fam);
        }
        fam.extend(fresh);
    }
}

/// SAZONOV completion by closing under the singleton, cofinality and transitivity rules.
pub fn sazonov_by_rules(d: &Lubpo) -> Result<BTreeSet<ElemSet>> {
    check_host(d)?;
    Ok(close_rules(&SazonovRules::new(d.poset()), d.natural_sets()))
}

/// CANONICAL completion: add every set whose lub lies in its closure, repeated to a fixpoint.
/// Rounds are computed against the family at the start of the round.
pub fn canonical_by_closure(d: &Lubpo) -> Result<BTreeSet<ElemSet>> {
    check_host(d)?;
    Ok(close_rules(&CanonicalRules::new(d.poset()), d.natural_sets()))
}

/// Same fixpoint, updating the family in place while sweeping subsets from the largest mask down.
fn canonical_in_place(d: &Lubpo) -> BTreeSet<ElemSet> {
    let p = d.poset();
    let mut fam: BTreeSet<ElemSet> = d.natural_sets().clone();
    let mut subsets: Vec<ElemSet> = p.carrier().subsets().collect();
    subsets.reverse();
    loop {
        let mut changed = false;
        for &a in &subsets {
            if fam.contains(&a) {
                continue;
            }
            let Some(top) = p.lub(a) else { continue };
            let nats: Vec<(ElemSet, usize)> = fam
                .iter()
                .filter(|s| s.len() != 1)
                .map(|&s| (s, p.lub(s).expect("natural")))
                .collect();
            if Closer::from_parts(p, &nats).cl(a).contains(top) {
                fam.insert(a);
                changed = true;
            }
        }
        if !changed {
            return fam;
        }
    }
}

/// Least family containing `d`'s naturals and closed under the class, restricted to `d`'s mode.
///
/// SAZONOV is computed twice (one-step "under" rule, and cofinality plus transitivity) and the
/// two results are asserted equal; CANONICAL is computed in rounds and in place, also asserted
/// equal.
pub fn class_completion(d: &Lubpo, c: RuleClassId) -> Result<Lubpo> {
    let fam = match c {
        RuleClassId::Sazonov => {
            let a = sazonov_by_under(d)?;
            let b = sazonov_by_rules(d)?;
            assert_eq!(a, b, "the two SAZONOV formulations disagree");
            a
        }
        RuleClassId::Canonical => {
            let a = canonical_by_closure(d)?;
            let b = canonical_in_place(d);
            assert_eq!(a, b, "CANONICAL completion depends on iteration order");
            a
        }
    };
    let p = d.poset();
    let kept: Vec<ElemSet> = fam
        .into_iter()
        .filter(|&s| d.mode() == Mode::General || p.is_directed(s))
        .collect();
    d.with_sets(kept, d.mode())
}

/// A directed set with lub in its closure (directed naturals only) that is not natural.
pub fn cdlubpo_witness(d: &Lubpo) -> Option<ElemSet> {
    let dd = d.delta_restrict();
    let p = dd.poset();
    let closer = Closer::new(&dd);
    p.carrier().subsets().find(|&a| {
        p.is_directed(a)
            && !dd.is_natural(a)
            && p.lub(a).is_some_and(|top| closer.cl(a).contains(top))
    })
}

/// Every directed set whose lub lies in its closure is natural.
pub fn is_cdlubpo(d: &Lubpo) -> bool {
    cdlubpo_witness(d).is_none()
}

/// A certificate that `target` is natural in the class completion of `d`, with leaves among
/// `d`'s naturals. `None` if the target is not derivable or its lub does not match.
pub fn derive_in_class(d: &Lubpo, c: RuleClassId, target: (ElemSet, usize)) -> Result<Option<Deduction<ElemSet>>> {
    check_host(d)?;
    let (set, claimed) = target;
    if d.lub(set) != Some(claimed) {
        return Ok(None);
    }
    let start = d.natural_sets();
    Ok(match c {
        RuleClassId::Sazonov => deduce(&SazonovRules::new(d.poset()), start, &set),
        RuleClassId::Canonical => deduce(&CanonicalRules::new(d.poset()), start, &set),
    })
}

/// The lub-rule obtained by flattening a certificate: its leaves as pattern, its root as result.
pub fn flatten_certificate(d: &Lubpo, proof: &Deduction<ElemSet>) -> Result<LubRule> {
    let pattern: BTreeSet<ElemSet> = proof.leaves().copied().collect();
    LubRule::new(d.poset().clone(), pattern.into_iter().collect(), *proof.conclusion())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::verify_deduction;
    use crate::fixtures;

    fn set(xs: &[usize]) -> ElemSet {
        ElemSet::from_indices(xs.iter().copied())
    }

    // a=0 b=1 c=2 d=3 e=4
    #[test]
    fn p7_rule_validity() {
        let p = fixtures::p7_poset();
        let r = LubRule::new(p.clone(), vec![set(&[1, 2]), set(&[3, 4])], set(&[3, 2])).unwrap();
        assert!(is_valid_rule(&r));
        assert!(validity_oracle(&r, 3).unwrap().valid);
        let r = LubRule::new(p.clone(), vec![], set(&[1, 2])).unwrap();
        assert!(!is_valid_rule(&r));
        let v = validity_oracle(&r, 3).unwrap();
        assert!(!v.valid && v.lattice_witness.is_some() && v.small_witness.is_some());
        let r = LubRule::new(p, vec![], set(&[4])).unwrap();
        assert!(is_valid_rule(&r));
        assert!(validity_oracle(&r, 2).unwrap().small_witness.is_none());
    }

    fn p7_expected() -> BTreeSet<ElemSet> {
        let p = fixtures::p7_poset();
        let mut fam: BTreeSet<ElemSet> = p
            .carrier()
            .subsets()
            .filter(|&s| p.lub(s).is_some_and(|l| s.contains(l)))
            .collect();
        for s in [
            set(&[1, 2]),
            set(&[1, 2, 3]),
            set(&[1, 2, 4]),
            set(&[1, 2, 3, 4]),
            set(&[2, 3, 4]),
            set(&[2, 3]),
            set(&[3, 4]),
        ] {
            fam.insert(s);
        }
        fam
    }

    #[test]
    fn p7_completions() {
        let d = fixtures::p7();
        let s = class_completion(&d, RuleClassId::Sazonov).unwrap();
        let c = class_completion(&d, RuleClassId::Canonical).unwrap();
        assert_eq!(s.natural_sets(), &p7_expected());
        assert_eq!(c.natural_sets(), &p7_expected());
        assert_eq!(class_completion(&s, RuleClassId::Sazonov).unwrap(), s);
    }

    #[test]
    fn p7_certificate_uses_transitivity() {
        let d = fixtures::p7();
        let proof = derive_in_class(&d, RuleClassId::Sazonov, (set(&[2, 3, 4]), 0))
            .unwrap()
            .unwrap();
        let steps = proof.steps();
        assert_eq!(steps[0].0, "S7");
        assert_eq!(steps[0].1, vec![set(&[2]), set(&[3, 4]), set(&[1, 2])]);
        assert!(verify_deduction(&SazonovRules::new(d.poset()), d.natural_sets(), &proof));
        let leaf = derive_in_class(&d, RuleClassId::Sazonov, (set(&[3]), 3)).unwrap().unwrap();
        assert_eq!(leaf.nodes.len(), 1);
        let dc = derive_in_class(&d, RuleClassId::Sazonov, (set(&[2, 3]), 0)).unwrap().unwrap();
        assert!(verify_deduction(&SazonovRules::new(d.poset()), d.natural_sets(), &dc));
        assert!(is_valid_rule(&flatten_certificate(&d, &dc).unwrap()));
    }

    #[test]
    fn cdlubpo_detection() {
        let triv = fixtures::singletons(fixtures::d4_poset());
        assert_eq!(cdlubpo_witness(&triv), Some(set(&[0, 1])));
        assert!(is_cdlubpo(&fixtures::all_directed(fixtures::d4_poset())));
        assert!(is_cdlubpo(&fixtures::singletons(fixtures::one_point())));
    }
}
