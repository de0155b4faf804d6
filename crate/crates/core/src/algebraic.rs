//! Finite elements, algebraic and finite-determined dlubpos.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lubpo::Lubpo;
use crate::order::ElemSet;
use crate::rules::is_cdlubpo;

/// Largest carrier for which every subset is tried as a determining set.
pub const MAX_DETERMINING_SEARCH: usize = 5;

/// Directed naturals of `d` with their lubs.
fn directed_naturals(d: &Lubpo) -> Vec<(ElemSet, usize)> {
    d.naturals().filter(|&(a, _)| d.poset().is_directed(a)).collect()
}

/// Elements `x` such that every directed natural with lub above `x` already has a member above `x`.
pub fn finite_elements(d: &Lubpo) -> ElemSet {
    let p = d.poset();
    let nats = directed_naturals(d);
    p.carrier()
        .iter()
        .filter(|&x| {
            nats.iter()
                .all(|&(b, top)| !p.leq(x, top) || b.iter().any(|y| p.leq(x, y)))
        })
        .collect()
}

/// Finite elements below `x`.
pub fn finite_below(d: &Lubpo, x: usize) -> ElemSet {
    finite_elements(d).intersection(d.poset().down_set(x))
}

/// Every element is the natural lub of the directed set of finite elements below it.
pub fn is_algebraic(d: &Lubpo) -> bool {
    let p = d.poset();
    let fin = finite_elements(d);
    (0..d.size()).all(|x| {
        let below = fin.intersection(p.down_set(x));
        p.is_directed(below) && d.is_natural(below) && p.lub(below) == Some(x)
    })
}

/// Whether `f` determines the directed naturals: a directed set is natural exactly when every
/// member of `f` below its lub is below some member of the set.
pub fn determines(d: &Lubpo, f: ElemSet) -> bool {
    let p = d.poset();
    p.carrier().subsets().all(|a| {
        if !p.is_directed(a) {
            return true;
        }
        let Some(top) = p.lub(a) else { return true };
        let covered = f
            .intersection(p.down_set(top))
            .iter()
            .all(|b| a.iter().any(|y| p.leq(b, y)));
        covered == d.is_natural(a)
    })
}

/// Finite-determined check. The finite elements are tried first; otherwise every subset is tried,
/// which needs a carrier of at most [`MAX_DETERMINING_SEARCH`] elements.
pub fn is_finite_determined(d: &Lubpo) -> Result<(bool, Option<ElemSet>)> {
    let fin = finite_elements(d);
    if determines(d, fin) {
        return Ok((true, Some(fin)));
    }
    if d.size() > MAX_DETERMINING_SEARCH {
        return Err(Error::BoundExceeded {
            what: "determining set search",
            requested: d.size(),
            bound: MAX_DETERMINING_SEARCH,
        });
    }
    let subsets: Vec<ElemSet> = d.poset().carrier().subsets().collect();
    let found = subsets.into_par_iter().find_first(|&f| determines(d, f));
    Ok((found.is_some(), found))
}

/// Cofinality restricted to directed sets: if `X` is natural with lub `x`, and `Y` is directed
/// with `X` cofinal in `Y` and `Y` below `x`, then `Y` is natural. Returns a failing `Y`.
pub fn directed_cofinality_witness(d: &Lubpo) -> Option<ElemSet> {
    let p = d.poset();
    for (x, top) in directed_naturals(d) {
        for y in p.down_set(top).subsets() {
            if p.is_directed(y) && p.cofinal_leq(x, y) && !d.is_natural(y) {
                return Some(y);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicityReport {
    pub finite_elements: Vec<String>,
    pub algebraic: bool,
    pub directed_cofinality: bool,
    pub finite_determined: bool,
    /// A determining set, when one was found.
    pub determining_set: Option<Vec<String>>,
    /// Whether the finite elements themselves determine the naturals.
    pub finite_elements_determine: bool,
    /// Algebraic with cofinality, or finite-determined.
    pub cdlubpo_implied: bool,
    pub cdlubpo: bool,
}

pub fn algebraicity_report(d: &Lubpo) -> Result<AlgebraicityReport> {
    let names = |s: ElemSet| s.iter().map(|x| d.poset().label(x).to_string()).collect::<Vec<_>>();
    let fin = finite_elements(d);
    let algebraic = is_algebraic(d);
    let cof = directed_cofinality_witness(d).is_none();
    let (fd, witness) = is_finite_determined(d)?;
    Ok(AlgebraicityReport {
        finite_elements: names(fin),
        algebraic,
        directed_cofinality: cof,
        finite_determined: fd,
        determining_set: witness.map(names),
        finite_elements_determine: determines(d, fin),
        cdlubpo_implied: fd || (algebraic && cof),
        cdlubpo: is_cdlubpo(d),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::Closer;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let full = fixtures::all_directed(fixtures::d4_poset());
        assert_eq!(finite_elements(&full), full.poset().carrier());
        assert!(is_algebraic(&full));
        assert_eq!(is_finite_determined(&full).unwrap(), (true, Some(full.poset().carrier())));

        let triv = fixtures::singletons(fixtures::d4_poset());
        assert_eq!(finite_elements(&triv), triv.poset().carrier());
        assert!(!is_algebraic(&triv));
        assert_eq!(is_finite_determined(&triv).unwrap(), (false, None));

        let one = fixtures::singletons(fixtures::one_point());
        assert_eq!(finite_elements(&one), ElemSet::singleton(0));
        assert!(is_algebraic(&one));
        assert!(is_finite_determined(&one).unwrap().0);
    }

    #[test]
    fn search_is_guarded() {
        let p = crate::order::Poset::discrete(6);
        let d = fixtures::singletons(p);
        // discrete orders only have singleton directed sets, so the finite elements determine them
        assert!(is_finite_determined(&d).unwrap().0);
        let c6 = crate::order::Poset::chain(6);
        let d = fixtures::singletons(c6);
        assert!(matches!(is_finite_determined(&d), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn report_on_chain() {
        let c3 = fixtures::all_directed(fixtures::c3_poset());
        let r = algebraicity_report(&c3).unwrap();
        assert!(r.algebraic && r.finite_determined && r.cdlubpo_implied && r.cdlubpo);
    }

    proptest! {
        #[test]
        fn finite_elements_reach_their_generators(seed in any::<u64>(), n in 1usize..6) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let d = crate::axioms::random_lubpo(&mut rng, n).delta_restrict();
            let a = ElemSet::from_bits(rng.gen_range(0..1u64 << n));
            let closer = Closer::new(&d);
            let p = d.poset();
            for x in finite_elements(&d).intersection(closer.cl(a)).iter() {
                prop_assert!(a.iter().any(|y| p.leq(x, y)));
            }
        }
    }
}
