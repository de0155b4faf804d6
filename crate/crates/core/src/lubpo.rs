//! Partial orders with designated natural subsets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order::{ElemSet, MonoMap, Poset};

/// Which subsets may be natural.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Any subset with a lub.
    General,
    /// Only directed subsets.
    Directed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::General => "general",
            Mode::Directed => "directed",
        })
    }
}

/// A poset together with its natural subsets. Every singleton is natural, and each natural
/// set is paired with its lub in the poset.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Lubpo {
    poset: Poset,
    naturals: BTreeSet<ElemSet>,
    mode: Mode,
}

/// Validates and builds a lubpo; singletons are added automatically.
pub fn make_lubpo(poset: Poset, naturals: &[(ElemSet, usize)], mode: Mode) -> Result<Lubpo> {
    let labels = poset.labels().to_vec();
    let name = |x: usize| labels.get(x).cloned().unwrap_or_else(|| x.to_string());
    let mut sets = BTreeSet::new();
    for &(a, claimed) in naturals {
        if let Some(bad) = a.iter().chain([claimed]).find(|&x| x >= poset.size()) {
            return Err(Error::Index {
                index: bad,
                size: poset.size(),
            });
        }
        let actual = poset.lub(a);
        if a.is_empty() && actual.is_none() {
            return Err(Error::EmptySetWithoutBottom);
        }
        if actual != Some(claimed) {
            return Err(Error::LubMismatch {
                set: a.show(&labels),
                claimed: name(claimed),
                actual: actual.map_or_else(|| "none".to_string(), name),
            });
        }
        if mode == Mode::Directed && !poset.is_directed(a) {
            return Err(Error::NotDirected(a.show(&labels)));
        }
        sets.insert(a);
    }
    for x in 0..poset.size() {
        sets.insert(ElemSet::singleton(x));
    }
    Ok(Lubpo {
        poset,
        naturals: sets,
        mode,
    })
}

impl Lubpo {
    /// Builds from natural sets alone, pairing each with its lub.
    pub fn from_sets<I: IntoIterator<Item = ElemSet>>(poset: Poset, sets: I, mode: Mode) -> Result<Lubpo> {
        let mut pairs = Vec::new();
        for a in sets {
            match poset.lub(a) {
                Some(x) => pairs.push((a, x)),
                None if a.is_empty() => return Err(Error::EmptySetWithoutBottom),
                None => {
                    return Err(Error::LubMismatch {
                        set: a.show(poset.labels()),
                        claimed: "?".into(),
                        actual: "none".into(),
                    })
                }
            }
        }
        make_lubpo(poset, &pairs, mode)
    }

    /// Only the singletons are natural.
    pub fn trivial(poset: Poset, mode: Mode) -> Lubpo {
        make_lubpo(poset, &[], mode).expect("singletons are natural")
    }

    /// Every subset with a lub is natural (every directed one in directed mode).
    pub fn complete(poset: Poset, mode: Mode) -> Lubpo {
        let sets: Vec<ElemSet> = poset
            .carrier()
            .subsets()
            .filter(|&a| poset.lub(a).is_some())
            .filter(|&a| mode == Mode::General || poset.is_directed(a))
            .collect();
        Lubpo::from_sets(poset, sets, mode).expect("lub-having sets")
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn labels(&self) -> &[String] {
        self.poset.labels()
    }

    pub fn is_natural(&self, a: ElemSet) -> bool {
        self.naturals.contains(&a)
    }

    pub fn natural_sets(&self) -> &BTreeSet<ElemSet> {
        &self.naturals
    }

    /// Natural sets paired with their lubs.
    pub fn naturals(&self) -> impl Iterator<Item = (ElemSet, usize)> + '_ {
        self.naturals
            .iter()
            .map(|&a| (a, self.poset.lub(a).expect("natural sets have lubs")))
    }

    /// Naturals that are not singletons.
    pub fn nontrivial_naturals(&self) -> impl Iterator<Item = (ElemSet, usize)> + '_ {
        self.naturals().filter(|(a, _)| a.len() != 1)
    }

    pub fn lub(&self, a: ElemSet) -> Option<usize> {
        self.poset.lub(a)
    }

    pub fn show(&self, a: ElemSet) -> String {
        a.show(self.labels())
    }

    /// Same order, different natural sets (validated).
    pub fn with_sets<I: IntoIterator<Item = ElemSet>>(&self, sets: I, mode: Mode) -> Result<Lubpo> {
        Lubpo::from_sets(self.poset.clone(), sets, mode)
    }

    /// Keeps exactly the directed naturals, in directed mode.
    pub fn delta_restrict(&self) -> Lubpo {
        let sets: BTreeSet<ElemSet> = self
            .naturals
            .iter()
            .copied()
            .filter(|&a| self.poset.is_directed(a))
            .collect();
        Lubpo {
            poset: self.poset.clone(),
            naturals: sets,
            mode: Mode::Directed,
        }
    }

    /// Same naturals viewed in general mode.
    pub fn as_general(&self) -> Lubpo {
        Lubpo {
            mode: Mode::General,
            ..self.clone()
        }
    }

    /// Elements that are the natural lub of some natural subset of `b`, plus everything below `b`.
    pub fn under_cover(&self, b: ElemSet) -> ElemSet {
        self.naturals
            .iter()
            .filter(|a| a.is_subset(b))
            .fold(self.poset.down_closure(b), |acc, &a| {
                acc.insert(self.poset.lub(a).expect("natural"))
            })
    }

    /// `A ⊴ B`: each member of A lies below some member of B or is the natural lub of a subset of B.
    pub fn under_rel(&self, a: ElemSet, b: ElemSet) -> bool {
        a.is_subset(self.under_cover(b))
    }
}

/// Monotone, and sends every directed natural of `d` to a natural of `e` with the image lub.
pub fn is_continuous(f: &MonoMap, d: &Lubpo, e: &Lubpo) -> bool {
    preserves(f, d, e, true)
}

/// Monotone, and sends every natural of `d` (directed or not) to a natural of `e`.
pub fn preserves_all_naturals(f: &MonoMap, d: &Lubpo, e: &Lubpo) -> bool {
    preserves(f, d, e, false)
}

fn preserves(f: &MonoMap, d: &Lubpo, e: &Lubpo, directed_only: bool) -> bool {
    if f.table.len() != d.size() || f.table.iter().any(|&v| v >= e.size()) {
        return false;
    }
    if !f.is_monotone(d.poset(), e.poset()) {
        return false;
    }
    d.naturals()
        .filter(|&(a, _)| !directed_only || d.poset().is_directed(a))
        .all(|(a, x)| {
            let img = f.image(a);
            e.is_natural(img) && e.lub(img) == Some(f.apply(x))
        })
}
