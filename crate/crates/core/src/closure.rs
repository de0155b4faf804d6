//! Rule systems with deduction trees, the cl closure operator, and the lattice of closed sets.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lubpo::Lubpo;
use crate::order::{ElemSet, Poset};

/// One inference step: from all `premises`, conclude `conclusion`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rule<T> {
    pub name: String,
    pub premises: Vec<T>,
    pub conclusion: T,
}

/// A rule system given intensionally.
///
/// `rules_within` must be deterministic, and every rule it returns for `s` must also be
/// returned for any superset of `s`.
pub trait RuleSystem {
    type Item: Clone + Ord + Debug;

    /// Rules whose premises all lie in `closed`, in a fixed order.
    fn rules_within(&self, closed: &BTreeSet<Self::Item>) -> Vec<Rule<Self::Item>>;

    /// Whether `rule` is an instance of the system.
    fn admits(&self, rule: &Rule<Self::Item>) -> bool;

    fn show(&self, item: &Self::Item) -> String {
        format!("{item:?}")
    }
}

/// Least superset of `start` closed under the rules, computed round by round.
pub fn close_rules<R: RuleSystem>(r: &R, start: &BTreeSet<R::Item>) -> BTreeSet<R::Item> {
    let mut s = start.clone();
    loop {
        let fresh: Vec<R::Item> = r
            .rules_within(&s)
            .into_iter()
            .map(|rule| rule.conclusion)
            .filter(|c| !s.contains(c))
            .collect();
        if fresh.is_empty() {
            return s;
        }
        s.extend(fresh);
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DeductionNode<T> {
    pub id: usize,
    pub label: T,
    /// `None` marks a leaf, whose label must be in the start set.
    pub rule: Option<String>,
    pub premises: Vec<usize>,
}

/// A finite proof tree; node 0 is the root.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Deduction<T> {
    pub nodes: Vec<DeductionNode<T>>,
}

/// Serialisable form of a deduction.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CertNode {
    pub id: usize,
    pub label: String,
    pub rule: String,
    pub premises: Vec<usize>,
}

impl<T: Clone> Deduction<T> {
    pub fn root(&self) -> &DeductionNode<T> {
        &self.nodes[0]
    }

    pub fn conclusion(&self) -> &T {
        &self.root().label
    }

    pub fn leaves(&self) -> impl Iterator<Item = &T> {
        self.nodes.iter().filter(|n| n.rule.is_none()).map(|n| &n.label)
    }

    /// Internal nodes as `(rule name, premise labels, conclusion)`, root first.
    pub fn steps(&self) -> Vec<(String, Vec<T>, T)> {
        self.nodes
            .iter()
            .filter_map(|n| {
                n.rule.as_ref().map(|r| {
                    let prem = n.premises.iter().map(|&p| self.nodes[p].label.clone()).collect();
                    (r.clone(), prem, n.label.clone())
                })
            })
            .collect()
    }

    pub fn certificate(&self, show: impl Fn(&T) -> String) -> Vec<CertNode> {
        self.nodes
            .iter()
            .map(|n| CertNode {
                id: n.id,
                label: show(&n.label),
                rule: n.rule.clone().unwrap_or_else(|| "leaf".into()),
                premises: n.premises.clone(),
            })
            .collect()
    }

    pub fn to_json(&self, show: impl Fn(&T) -> String) -> String {
        serde_json::to_string_pretty(&self.certificate(show)).expect("certificate serialises")
    }
}

/// A deduction of `target` from `start`, or `None` if it is not in the closure.
///
/// Each item is justified by the first rule (in the system's order) that produced it in the
/// earliest round, so the tree is deterministic.
pub fn deduce<R: RuleSystem>(r: &R, start: &BTreeSet<R::Item>, target: &R::Item) -> Option<Deduction<R::Item>> {
    let mut s = start.clone();
    let mut why: BTreeMap<R::Item, Rule<R::Item>> = BTreeMap::new();
    while !s.contains(target) {
        let mut fresh = BTreeMap::new();
        for rule in r.rules_within(&s) {
            if !s.contains(&rule.conclusion) && !fresh.contains_key(&rule.conclusion) {
                fresh.insert(rule.conclusion.clone(), rule);
            }
        }
        if fresh.is_empty() {
            return None;
        }
        for (item, rule) in fresh {
            s.insert(item.clone());
            why.insert(item, rule);
        }
    }
    let mut nodes = Vec::new();
    build_tree(target, &why, &mut nodes);
    Some(Deduction { nodes })
}

fn build_tree<T: Clone + Ord>(item: &T, why: &BTreeMap<T, Rule<T>>, nodes: &mut Vec<DeductionNode<T>>) -> usize {
    let id = nodes.len();
    nodes.push(DeductionNode {
        id,
        label: item.clone(),
        rule: None,
        premises: Vec::new(),
    });
    if let Some(rule) = why.get(item) {
        let kids: Vec<usize> = rule.premises.iter().map(|p| build_tree(p, why, nodes)).collect();
        nodes[id].rule = Some(rule.name.clone());
        nodes[id].premises = kids;
    }
    id
}

/// Checks tree shape, that leaves lie in `start`, and that every internal node is a rule instance.
pub fn verify_deduction<R: RuleSystem>(r: &R, start: &BTreeSet<R::Item>, d: &Deduction<R::Item>) -> bool {
    let n = d.nodes.len();
    if n == 0 {
        return false;
    }
    if d.nodes.iter().enumerate().any(|(i, node)| node.id != i) {
        return false;
    }
    // Every node except the root has exactly one parent, and the root is reachable from nowhere.
    let mut parents = vec![0usize; n];
    for node in &d.nodes {
        for &p in &node.premises {
            if p >= n {
                return false;
            }
            parents[p] += 1;
        }
    }
    if parents[0] != 0 || parents[1..].iter().any(|&c| c != 1) {
        return false;
    }
    // Reachability from the root rules out detached cycles.
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        if std::mem::replace(&mut seen[i], true) {
            return false;
        }
        stack.extend(&d.nodes[i].premises);
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    d.nodes.iter().all(|node| match &node.rule {
        None => node.premises.is_empty() && start.contains(&node.label),
        Some(name) => r.admits(&Rule {
            name: name.clone(),
            premises: node.premises.iter().map(|&p| d.nodes[p].label.clone()).collect(),
            conclusion: node.label.clone(),
        }),
    })
}

/// The cl rule system of a lubpo: `{x} ⇝ y` for `y ≤ x`, and `A ⇝ a` for each natural `(A, a)`.
pub struct ClRules<'a> {
    d: &'a Lubpo,
}

impl<'a> ClRules<'a> {
    pub fn new(d: &'a Lubpo) -> Self {
        ClRules { d }
    }
}

impl RuleSystem for ClRules<'_> {
    type Item = usize;

    fn rules_within(&self, closed: &BTreeSet<usize>) -> Vec<Rule<usize>> {
        let p = self.d.poset();
        let mut out = Vec::new();
        for &x in closed {
            for y in p.down_set(x).remove(x).iter() {
                out.push(Rule {
                    name: "down".into(),
                    premises: vec![x],
                    conclusion: y,
                });
            }
        }
        let s: ElemSet = closed.iter().copied().collect();
        for (a, x) in self.d.naturals() {
            if a.is_subset(s) && a.len() != 1 {
                out.push(Rule {
                    name: "natural".into(),
                    premises: a.to_vec(),
                    conclusion: x,
                });
            }
        }
        out
    }

    fn admits(&self, rule: &Rule<usize>) -> bool {
        let p = self.d.poset();
        if rule.premises.iter().chain([&rule.conclusion]).any(|&x| x >= p.size()) {
            return false;
        }
        match rule.name.as_str() {
            "down" => rule.premises.len() == 1 && p.leq(rule.conclusion, rule.premises[0]),
            "natural" => {
                let a: ElemSet = rule.premises.iter().copied().collect();
                a.len() == rule.premises.len()
                    && self.d.is_natural(a)
                    && self.d.lub(a) == Some(rule.conclusion)
            }
            _ => false,
        }
    }

    fn show(&self, item: &usize) -> String {
        self.d.poset().label(*item).to_string()
    }
}

/// Fast closure under the cl rules of a fixed lubpo.
#[derive(Clone, Debug)]
pub struct Closer {
    down: Vec<u64>,
    nats: Vec<(u64, usize)>,
}

impl Closer {
    pub fn new(d: &Lubpo) -> Self {
        let p = d.poset();
        Closer {
            down: (0..p.size()).map(|x| p.down_set(x).bits()).collect(),
            nats: d
                .nontrivial_naturals()
                .map(|(a, x)| (a.bits(), x))
                .collect(),
        }
    }

    /// Closure where the natural sets are exactly `nats` (no singletons assumed).
    pub fn from_parts(p: &Poset, nats: &[(ElemSet, usize)]) -> Self {
        Closer {
            down: (0..p.size()).map(|x| p.down_set(x).bits()).collect(),
            nats: nats.iter().map(|&(a, x)| (a.bits(), x)).collect(),
        }
    }

    pub fn cl(&self, a: ElemSet) -> ElemSet {
        let mut s = a.bits();
        loop {
            let mut t = ElemSet::from_bits(s).iter().fold(s, |m, x| m | self.down[x]);
            for &(n, x) in &self.nats {
                if n & !t == 0 {
                    t |= self.down[x];
                }
            }
            if t == s {
                return ElemSet::from_bits(s);
            }
            s = t;
        }
    }
}

/// Closure of `a` under the cl rules of `d`.
pub fn cl(d: &Lubpo, a: ElemSet) -> ElemSet {
    Closer::new(d).cl(a)
}

/// Deduction of `target` from `a` in the cl rule system.
pub fn deduce_cl(d: &Lubpo, a: ElemSet, target: usize) -> Option<Deduction<usize>> {
    deduce(&ClRules::new(d), &a.iter().collect(), &target)
}

/// Largest carrier for which closed sets are enumerated.
pub const MAX_LATTICE_HOST: usize = 20;

/// All cl-closed subsets of a lubpo, ordered by inclusion.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ClosedSetLattice {
    closer: ClosedBy,
    family: Vec<ElemSet>,
}

#[derive(Clone, Debug)]
struct ClosedBy(Closer);

impl PartialEq for ClosedBy {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for ClosedBy {}

impl ClosedSetLattice {
    /// Closed sets, sorted by mask.
    pub fn family(&self) -> &[ElemSet] {
        &self.family
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn contains(&self, s: ElemSet) -> bool {
        self.family.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: ElemSet) -> Option<usize> {
        self.family.binary_search(&s).ok()
    }

    pub fn join(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        self.closer.0.cl(a.union(b))
    }

    pub fn meet(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        a.intersection(b)
    }

    /// Join of any collection (the closure of the union).
    pub fn join_all<I: IntoIterator<Item = ElemSet>>(&self, it: I) -> ElemSet {
        self.closer.0.cl(it.into_iter().fold(ElemSet::EMPTY, ElemSet::union))
    }

    /// Meet of any collection; the empty meet is the top.
    pub fn meet_all<I: IntoIterator<Item = ElemSet>>(&self, it: I) -> ElemSet {
        it.into_iter()
            .fold(*self.family.last().expect("lattice has a top"), ElemSet::intersection)
    }

    /// The inclusion order as a poset, elements in family order.
    pub fn to_poset(&self, labels: &[String]) -> Poset {
        let mut pairs = Vec::new();
        for (i, &a) in self.family.iter().enumerate() {
            for (j, &b) in self.family.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    pairs.push((i, j));
                }
            }
        }
        let names = self.family.iter().map(|s| s.show(labels)).collect();
        Poset::with_labels(self.family.len(), &pairs, names).expect("inclusion is a partial order")
    }
}

/// The lub-completion: every cl-closed subset.
pub fn lub_completion(d: &Lubpo) -> Result<ClosedSetLattice> {
    if d.size() > MAX_LATTICE_HOST {
        return Err(Error::BoundExceeded {
            what: "closed-set lattice host size",
            requested: d.size(),
            bound: MAX_LATTICE_HOST,
        });
    }
    let closer = Closer::new(d);
    let family = d
        .poset()
        .carrier()
        .subsets()
        .filter(|&s| closer.cl(s) == s)
        .collect();
    Ok(ClosedSetLattice {
        closer: ClosedBy(closer),
        family,
    })
}

/// `d ↦ cl{d}`, which is the principal down-set of `d`.
pub fn in_embed(d: &Lubpo, x: usize) -> ElemSet {
    cl(d, ElemSet::singleton(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn set(xs: &[usize]) -> ElemSet {
        ElemSet::from_indices(xs.iter().copied())
    }

    #[test]
    fn p7_closure() {
        let d = fixtures::p7();
        assert_eq!(cl(&d, set(&[3, 2])), d.poset().carrier());
        assert_eq!(cl(&d, set(&[3])), set(&[3]));
        assert_eq!(cl(&d, ElemSet::EMPTY), ElemSet::EMPTY);
        let generic = close_rules(&ClRules::new(&d), &[3, 2].into_iter().collect());
        assert_eq!(generic.len(), 5);
    }

    #[test]
    fn p7_deduction_replays_rounds() {
        let d = fixtures::p7();
        let proof = deduce_cl(&d, set(&[3, 2]), 0).unwrap();
        assert!(verify_deduction(&ClRules::new(&d), &[2, 3].into_iter().collect(), &proof));
        let steps = proof.steps();
        assert_eq!(steps[0], ("natural".into(), vec![1, 2], 0));
        assert_eq!(steps[1], ("natural".into(), vec![3, 4], 1));
        assert_eq!(steps[2], ("down".into(), vec![2], 4));
        assert_eq!(steps.len(), 3);
        assert!(deduce_cl(&d, set(&[3]), 0).is_none());
        let leaf = deduce_cl(&d, set(&[3]), 3).unwrap();
        assert_eq!(leaf.nodes.len(), 1);
    }

    #[test]
    fn tampered_deductions_fail() {
        let d = fixtures::p7();
        let start: BTreeSet<usize> = [2, 3].into_iter().collect();
        let rs = ClRules::new(&d);
        let proof = deduce_cl(&d, set(&[3, 2]), 0).unwrap();
        let mut bad_leaf = proof.clone();
        let leaf = bad_leaf.nodes.iter().position(|n| n.rule.is_none()).unwrap();
        bad_leaf.nodes[leaf].label = 0;
        assert!(!verify_deduction(&rs, &start, &bad_leaf));
        let mut bad_rule = proof.clone();
        bad_rule.nodes[0].rule = Some("down".into());
        assert!(!verify_deduction(&rs, &start, &bad_rule));
        let mut bad_shape = proof;
        bad_shape.nodes[0].premises.push(1);
        assert!(!verify_deduction(&rs, &start, &bad_shape));
    }

    #[test]
    fn p7_lattice() {
        let d = fixtures::p7();
        let lat = lub_completion(&d).unwrap();
        let expect = [set(&[]), set(&[3]), set(&[4]), set(&[2, 4]), set(&[1, 3, 4]), set(&[0, 1, 2, 3, 4])];
        let mut e = expect.to_vec();
        e.sort();
        assert_eq!(lat.family(), &e[..]);
        assert_eq!(lat.join(set(&[3]), set(&[4])), set(&[1, 3, 4]));
        assert_eq!(in_embed(&d, 1), set(&[1, 3, 4]));
        assert_eq!(in_embed(&d, 0), d.poset().carrier());
        assert_eq!(in_embed(&d, 4), set(&[4]));
        let one = Lubpo::trivial(fixtures::one_point(), crate::lubpo::Mode::General);
        assert_eq!(lub_completion(&one).unwrap().len(), 2);
    }

    #[test]
    fn empty_rule_system_is_identity() {
        struct Nothing;
        impl RuleSystem for Nothing {
            type Item = u8;
            fn rules_within(&self, _: &BTreeSet<u8>) -> Vec<Rule<u8>> {
                Vec::new()
            }
            fn admits(&self, _: &Rule<u8>) -> bool {
                false
            }
        }
        let a: BTreeSet<u8> = [1, 4].into_iter().collect();
        assert_eq!(close_rules(&Nothing, &a), a);
    }
}
