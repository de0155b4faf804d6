//! Restricted posets: a realizer order with a subset of proper elements.

use crate::closure::{in_embed, lub_completion};
use crate::error::{Error, Result};
use crate::lubpo::{is_continuous, Lubpo, Mode};
use crate::order::{ElemSet, MonoMap, Poset};

/// Realizers ordered by a poset, some of them proper; the rest are blind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rpo {
    realizers: Poset,
    proper: ElemSet,
}

pub fn make_rpo(realizers: Poset, proper: ElemSet) -> Result<Rpo> {
    if let Some(bad) = proper.minus(realizers.carrier()).first() {
        return Err(Error::Index {
            index: bad,
            size: realizers.size(),
        });
    }
    Ok(Rpo { realizers, proper })
}

impl Rpo {
    pub fn realizers(&self) -> &Poset {
        &self.realizers
    }

    pub fn proper(&self) -> ElemSet {
        self.proper
    }

    pub fn blind(&self) -> ElemSet {
        self.realizers.carrier().minus(self.proper)
    }
}

/// An rpo whose realizer order is directed-complete.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rdcpo {
    rpo: Rpo,
}

/// Realizer orders up to this size are checked subset by subset.
const EXHAUSTIVE_DCPO_CHECK: usize = 16;

impl Rdcpo {
    /// Checks that every directed set of realizers has a lub.
    pub fn new(rpo: Rpo) -> Result<Rdcpo> {
        let p = &rpo.realizers;
        // Larger finite orders are directed-complete anyway: a finite directed set has a maximum.
        if p.size() <= EXHAUSTIVE_DCPO_CHECK {
            let bad = p
                .carrier()
                .subsets()
                .find(|&a| p.is_directed(a) && p.lub(a).is_none());
            if bad.is_some() {
                return Err(Error::NotDirectedPoset);
            }
        }
        Ok(Rdcpo { rpo })
    }

    pub fn rpo(&self) -> &Rpo {
        &self.rpo
    }
}

/// Whether `phi` is an order isomorphism onto the proper part of `e` under which a directed set
/// of `d` is natural exactly when `phi` sends its lub to the realizer lub of its image.
pub fn realizes(e: &Rpo, d: &Lubpo, phi: &MonoMap) -> bool {
    let (p, r) = (d.poset(), e.realizers());
    if phi.table.len() != p.size() || phi.table.iter().any(|&v| v >= r.size()) {
        return false;
    }
    let image: ElemSet = phi.table.iter().copied().collect();
    if image != e.proper() || image.len() != p.size() {
        return false;
    }
    let iso = (0..p.size()).all(|x| (0..p.size()).all(|y| p.leq(x, y) == r.leq(phi.apply(x), phi.apply(y))));
    if !iso {
        return false;
    }
    p.carrier().subsets().all(|a| {
        if !p.is_directed(a) {
            return true;
        }
        match p.lub(a) {
            Some(top) => d.is_natural(a) == (r.lub(phi.image(a)) == Some(phi.apply(top))),
            None => true,
        }
    })
}

/// A morphism of rdcpos: monotone on the realizers (which preserves directed lubs, as finite
/// directed sets contain them) and sending proper realizers to proper ones.
pub fn is_rdcpo_morphism(f: &MonoMap, src: &Rdcpo, dst: &Rdcpo) -> bool {
    let (a, b) = (src.rpo(), dst.rpo());
    f.table.len() == a.realizers().size()
        && f.table.iter().all(|&v| v < b.realizers().size())
        && f.is_monotone(a.realizers(), b.realizers())
        && f.image(a.proper()).is_subset(b.proper())
}

/// The dlubpo carried by the proper part of `e`: a directed set is natural when its realizer
/// lub is the proper element that is its lub there. Also returns the inclusion map.
pub fn induced_lubpo(e: &Rpo) -> Result<(Lubpo, MonoMap)> {
    let r = e.realizers();
    let table: Vec<usize> = e.proper().iter().collect();
    let p = r.restrict(e.proper());
    let phi = MonoMap {
        source: p.size(),
        target: r.size(),
        table,
    };
    let sets: Vec<ElemSet> = p
        .carrier()
        .subsets()
        .filter(|&a| p.is_directed(a))
        .filter(|&a| p.lub(a).is_some_and(|top| r.lub(phi.image(a)) == Some(phi.apply(top))))
        .collect();
    Ok((Lubpo::from_sets(p, sets, Mode::Directed)?, phi))
}

/// Closed sets under inclusion as realizers, principal ideals as proper elements.
pub fn canonical_realization(d: &Lubpo) -> Result<(Rdcpo, MonoMap)> {
    let lat = lub_completion(d)?;
    let realizers = lat.to_poset(d.labels());
    let table: Vec<usize> = (0..d.size())
        .map(|x| lat.index_of(in_embed(d, x)).expect("principal ideals are closed"))
        .collect();
    let proper: ElemSet = table.iter().copied().collect();
    let phi = MonoMap {
        source: d.size(),
        target: realizers.size(),
        table,
    };
    Ok((Rdcpo::new(make_rpo(realizers, proper)?)?, phi))
}

/// Whether every directed set whose lub is respected by all maps in `k` is natural.
pub fn determined_by(d: &Lubpo, k: &[(MonoMap, Lubpo)]) -> Result<bool> {
    for (i, (f, e)) in k.iter().enumerate() {
        if !is_continuous(f, d, e) {
            return Err(Error::NotContinuous(i));
        }
    }
    let p = d.poset();
    Ok(p.carrier().subsets().all(|a| {
        if !p.is_directed(a) || d.is_natural(a) {
            return true;
        }
        let Some(top) = p.lub(a) else { return true };
        let respected = k
            .iter()
            .all(|(f, e)| e.poset().lub(f.image(a)) == Some(f.apply(top)));
        !respected
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rules::is_cdlubpo;

    #[test]
    fn p7_blind_realizer_is_empty_set() {
        let d = fixtures::p7();
        let (r, phi) = canonical_realization(&d).unwrap();
        assert_eq!(r.rpo().blind().len(), 1);
        let blind = r.rpo().blind().first().unwrap();
        assert_eq!(r.rpo().realizers().label(blind), "{}");
        assert_eq!(phi.table.len(), 5);
    }

    #[test]
    fn proper_extremes() {
        let p = fixtures::c2_poset();
        assert_eq!(make_rpo(p.clone(), p.carrier()).unwrap().blind(), ElemSet::EMPTY);
        assert_eq!(make_rpo(p.clone(), ElemSet::EMPTY).unwrap().blind(), p.carrier());
        assert!(matches!(make_rpo(p, ElemSet::singleton(5)), Err(Error::Index { .. })));
    }

    #[test]
    fn realization_examples() {
        let full = fixtures::all_directed(fixtures::d4_poset());
        let p = full.poset().clone();
        let id = MonoMap::identity(&p);
        let itself = make_rpo(p.clone(), p.carrier()).unwrap();
        assert!(realizes(&itself, &full, &id));
        let triv = fixtures::singletons(p);
        assert!(!realizes(&itself, &triv, &id));
        let (r, phi) = canonical_realization(&full).unwrap();
        assert!(realizes(r.rpo(), &full, &phi));
        let one = fixtures::singletons(fixtures::one_point());
        let (r, _) = canonical_realization(&one).unwrap();
        assert_eq!(r.rpo().realizers().size(), 2);
        assert_eq!(r.rpo().proper().len(), 1);
        let p7 = crate::rules::class_completion(&fixtures::p7(), crate::rules::RuleClassId::Canonical)
            .unwrap()
            .delta_restrict();
        let (r, phi) = canonical_realization(&p7).unwrap();
        assert!(realizes(r.rpo(), &p7, &phi));
    }

    #[test]
    fn induced_dlubpo_is_realized() {
        // chain 0<1<2 with the middle element blind: {0} alone is proper below 2
        let e = make_rpo(fixtures::c3_poset(), ElemSet::from_indices([0, 2])).unwrap();
        let (d, phi) = induced_lubpo(&e).unwrap();
        assert_eq!(d.size(), 2);
        assert!(d.is_natural(ElemSet::full(2)));
        assert!(realizes(&e, &d, &phi));
        // a proper top over a blind join
        let v_top = crate::order::Poset::from_relation(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        let e = make_rpo(v_top, ElemSet::from_indices([0, 1, 3])).unwrap();
        let (d, phi) = induced_lubpo(&e).unwrap();
        assert!(!d.is_natural(ElemSet::from_indices([0, 1])));
        assert!(realizes(&e, &d, &phi));
    }

    #[test]
    fn determined_by_examples() {
        let full = fixtures::all_directed(fixtures::c3_poset());
        let (r, phi) = canonical_realization(&full).unwrap();
        let target = Lubpo::complete(r.rpo().realizers().clone(), Mode::Directed);
        assert!(determined_by(&full, &[(phi, target)]).unwrap());
        let triv = fixtures::singletons(fixtures::c3_poset());
        assert!(!determined_by(&triv, &[]).unwrap());
        assert!(!is_cdlubpo(&triv));
        let id = MonoMap::identity(full.poset());
        assert!(determined_by(&full, &[(id.clone(), full.clone())]).unwrap());
        assert_eq!(determined_by(&full, &[(id, triv)]), Err(Error::NotContinuous(0)));
    }
}
