//! Small named orders used by tests, galleries and benches.

use crate::lubpo::{make_lubpo, Lubpo, Mode};
use crate::order::{ElemSet, Poset};

fn named(size: usize, pairs: &[(usize, usize)], names: &[&str]) -> Poset {
    Poset::with_labels(size, pairs, names.iter().map(|s| s.to_string()).collect())
        .expect("fixture order")
}

/// The five-element order `d<b, e<b, e<c, b<a, c<a` with elements indexed a=0 … e=4.
pub fn p7_poset() -> Poset {
    named(5, &[(3, 1), (4, 1), (4, 2), (1, 0), (2, 0)], &["a", "b", "c", "d", "e"])
}

/// [`p7_poset`] with `{b,c}→a` and `{d,e}→b` natural, general mode.
pub fn p7() -> Lubpo {
    make_lubpo(
        p7_poset(),
        &[
            (ElemSet::from_indices([1, 2]), 0),
            (ElemSet::from_indices([3, 4]), 1),
        ],
        Mode::General,
    )
    .expect("fixture lubpo")
}

pub fn c2_poset() -> Poset {
    named(2, &[(0, 1)], &["0", "1"])
}

pub fn c3_poset() -> Poset {
    named(3, &[(0, 1), (1, 2)], &["0", "1", "2"])
}

/// `⊥ < l`, `⊥ < r`.
pub fn v_poset() -> Poset {
    named(3, &[(0, 1), (0, 2)], &["bot", "l", "r"])
}

/// `⊥ < l, r < ⊤`.
pub fn d4_poset() -> Poset {
    named(4, &[(0, 1), (0, 2), (1, 3), (2, 3)], &["bot", "l", "r", "top"])
}

pub fn one_point() -> Poset {
    named(1, &[], &["p"])
}

/// Directed-mode lubpo where every directed set is natural.
pub fn all_directed(p: Poset) -> Lubpo {
    Lubpo::complete(p, Mode::Directed)
}

/// Directed-mode lubpo with only singletons natural.
pub fn singletons(p: Poset) -> Lubpo {
    Lubpo::trivial(p, Mode::Directed)
}

/// Fixture by name, for the command line.
pub fn by_name(name: &str) -> Option<Lubpo> {
    Some(match name {
        "p7" => p7(),
        "c2" => all_directed(c2_poset()),
        "c3" => all_directed(c3_poset()),
        "v" => all_directed(v_poset()),
        "d4" => all_directed(d4_poset()),
        "d4-singletons" => singletons(d4_poset()),
        _ => return None,
    })
}
