//! Sweeps that compare independent code paths over enumerated and random instances.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebraic::{determines, directed_cofinality_witness, finite_elements, is_algebraic, is_finite_determined};
use crate::axioms::{equivalence_harness, random_lubpo, random_poset, MAX_CHECK_HOST};
use crate::closure::{close_rules, in_embed, lub_completion, ClRules, Closer};
use crate::error::{Error, Result};
use crate::format::serialize;
use crate::lubpo::{make_lubpo, Lubpo, Mode};
use crate::order::{enumerate_posets, ElemSet, MonoMap, Poset};
use crate::realize::{canonical_realization, induced_lubpo, make_rpo, realizes};
use crate::rules::{
    class_completion, derive_in_class, flatten_certificate, is_cdlubpo, is_valid_rule, validity_oracle, LubRule,
    RuleClassId,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HarnessKind {
    Equivalences,
    ValidityAgreement,
    DerivedRules,
    Embedding,
    Realization,
    Algebraicity,
}

impl HarnessKind {
    pub const ALL: [HarnessKind; 6] = [
        HarnessKind::Equivalences,
        HarnessKind::ValidityAgreement,
        HarnessKind::DerivedRules,
        HarnessKind::Embedding,
        HarnessKind::Realization,
        HarnessKind::Algebraicity,
    ];

    /// Largest `max_size` accepted.
    pub fn max_size(self) -> usize {
        match self {
            HarnessKind::Equivalences => MAX_CHECK_HOST,
            HarnessKind::ValidityAgreement => 3,
            HarnessKind::DerivedRules => 5,
            HarnessKind::Embedding | HarnessKind::Realization | HarnessKind::Algebraicity => 4,
        }
    }
}

impl fmt::Display for HarnessKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HarnessKind::Equivalences => "equivalences",
            HarnessKind::ValidityAgreement => "validity-agreement",
            HarnessKind::DerivedRules => "derived-rules",
            HarnessKind::Embedding => "embedding",
            HarnessKind::Realization => "realization",
            HarnessKind::Algebraicity => "algebraicity",
        };
        f.write_str(s)
    }
}

impl FromStr for HarnessKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        HarnessKind::ALL
            .into_iter()
            .find(|k| k.to_string() == s)
            .ok_or_else(|| format!("unknown harness kind `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HarnessParams {
    pub max_size: usize,
    /// Random instances, where the kind uses any.
    pub samples: usize,
    pub seed: u64,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams {
            max_size: 3,
            samples: 1000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    /// Serialized instance, replayable with the file parser.
    pub instance: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunReport {
    pub kind: HarnessKind,
    pub max_size: usize,
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl RunReport {
    pub fn clean(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn run_harness(kind: HarnessKind, params: HarnessParams) -> Result<RunReport> {
    if params.max_size == 0 || params.max_size > kind.max_size() {
        return Err(Error::BoundExceeded {
            what: "harness max size",
            requested: params.max_size,
            bound: kind.max_size(),
        });
    }
    let (instances, failures) = match kind {
        HarnessKind::Equivalences => {
            let rep = equivalence_harness(params.max_size, params.samples, params.seed)?;
            let failures = rep
                .discrepancies
                .into_iter()
                .map(|d| Failure {
                    instance: d.instance,
                    detail: format!("{} fails: {:?}", d.relation, d.values),
                })
                .collect();
            (rep.instances, failures)
        }
        HarnessKind::ValidityAgreement => validity_agreement(params.max_size)?,
        HarnessKind::DerivedRules => derived_rules(params.max_size, params.samples, params.seed)?,
        HarnessKind::Embedding => embedding(params.max_size)?,
        HarnessKind::Realization => {
            let (n1, mut f1) = realization_exhaustive(params.max_size)?;
            let (n2, f2) = realization_random(params.samples, params.seed)?;
            f1.extend(f2);
            (n1 + n2, f1)
        }
        HarnessKind::Algebraicity => {
            let (n1, mut f1) = algebraicity_exhaustive(params.max_size)?;
            let (n2, f2) = finite_element_lemma(params.samples, params.seed)?;
            f1.extend(f2);
            (n1 + n2, f1)
        }
    };
    Ok(RunReport {
        kind,
        max_size: params.max_size,
        instances,
        failures,
    })
}

type Sweep = (usize, Vec<Failure>);

fn gather(parts: Vec<Result<Sweep>>) -> Result<Sweep> {
    let mut n = 0;
    let mut out = Vec::new();
    for part in parts {
        let (k, f) = part?;
        n += k;
        out.extend(f);
    }
    Ok((n, out))
}

fn posets_up_to(max_size: usize, up_to_iso: bool) -> Result<Vec<Poset>> {
    let mut out = Vec::new();
    for n in 1..=max_size {
        out.extend(enumerate_posets(n, up_to_iso)?);
    }
    Ok(out)
}

/// Every dlubpo on at most `max_size` elements, one order per isomorphism class.
pub fn enumerate_dlubpos(max_size: usize) -> Result<Vec<Lubpo>> {
    let mut out = Vec::new();
    for p in posets_up_to(max_size, true)? {
        let optional: Vec<ElemSet> = p
            .carrier()
            .subsets()
            .filter(|&a| a.len() > 1 && p.is_directed(a))
            .collect();
        for pick in ElemSet::full(optional.len()).subsets() {
            out.push(Lubpo::from_sets(p.clone(), pick.iter().map(|i| optional[i]), Mode::Directed)?);
        }
    }
    Ok(out)
}

/// Every general-mode lubpo on at most `max_size` elements, one order per isomorphism class.
pub fn enumerate_lubpos(max_size: usize) -> Result<Vec<Lubpo>> {
    let mut out = Vec::new();
    for p in posets_up_to(max_size, true)? {
        let optional = crate::axioms::lub_sets(&p);
        for pick in ElemSet::full(optional.len()).subsets() {
            out.push(Lubpo::from_sets(p.clone(), pick.iter().map(|i| optional[i]), Mode::General)?);
        }
    }
    Ok(out)
}

/// Subsets that have a lub, the empty set included when there is a bottom.
fn lub_having(p: &Poset) -> Vec<ElemSet> {
    p.carrier().subsets().filter(|&s| p.lub(s).is_some()).collect()
}

/// Validity through the fast closure, through the generic rule-system closure, and through
/// the closed-set filter must agree for every rule over every labelled host.
pub fn validity_agreement(max_size: usize) -> Result<Sweep> {
    let hosts = posets_up_to(max_size, false)?;
    let parts: Vec<Result<Sweep>> = hosts
        .par_iter()
        .map(|p| {
            let sets = lub_having(p);
            let mut n = 0;
            let mut failures = Vec::new();
            for pick in ElemSet::full(sets.len()).subsets() {
                let pattern: Vec<ElemSet> = pick.iter().map(|i| sets[i]).collect();
                let pairs: Vec<(ElemSet, usize)> =
                    pattern.iter().map(|&s| (s, p.lub(s).expect("lub-having"))).collect();
                let as_lubpo = make_lubpo(p.clone(), &pairs, Mode::General)?;
                let rules = ClRules::new(&as_lubpo);
                for &result in &sets {
                    n += 1;
                    let rule = LubRule::new(p.clone(), pattern.clone(), result)?;
                    let fast = is_valid_rule(&rule);
                    let start: BTreeSet<usize> = result.iter().collect();
                    let generic = close_rules(&rules, &start).contains(&p.lub(result).expect("lub-having"));
                    let oracle = validity_oracle(&rule, 0)?;
                    let witness_ok = oracle.valid == oracle.lattice_witness.is_none();
                    if fast != oracle.valid || generic != fast || !witness_ok {
                        failures.push(Failure {
                            instance: serialize(&as_lubpo),
                            detail: format!(
                                "result {}: closure {fast}, rule system {generic}, lattice {}",
                                result.show(p.labels()),
                                oracle.valid
                            ),
                        });
                    }
                }
            }
            Ok((n, failures))
        })
        .collect();
    gather(parts)
}

/// Random certificates from both rule classes on random lubpos must flatten to valid rules.
pub fn derived_rules(max_size: usize, samples: usize, seed: u64) -> Result<Sweep> {
    let parts: Vec<Result<Sweep>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0xA24B_AED4_963E_E407));
            // retry until the completion adds something, so the certificate is not a leaf
            for _ in 0..64 {
                let n = rng.gen_range(2..=max_size.max(2));
                let d = random_lubpo(&mut rng, n);
                let class = if rng.gen_bool(0.5) {
                    RuleClassId::Sazonov
                } else {
                    RuleClassId::Canonical
                };
                let done = class_completion(&d, class)?;
                let fresh: Vec<ElemSet> =
                    done.natural_sets().difference(d.natural_sets()).copied().collect();
                if fresh.is_empty() {
                    continue;
                }
                let target = fresh[rng.gen_range(0..fresh.len())];
                let lub = done.lub(target).expect("natural");
                let Some(proof) = derive_in_class(&d, class, (target, lub))? else {
                    return Ok((
                        1,
                        vec![Failure {
                            instance: serialize(&d),
                            detail: format!("{class}: no certificate for {}", d.show(target)),
                        }],
                    ));
                };
                let rule = flatten_certificate(&d, &proof)?;
                let failures = if is_valid_rule(&rule) {
                    Vec::new()
                } else {
                    vec![Failure {
                        instance: serialize(&d),
                        detail: format!("{class}: flattened rule for {} invalid", d.show(target)),
                    }]
                };
                return Ok((1, failures));
            }
            Ok((0, Vec::new()))
        })
        .collect();
    gather(parts)
}

/// Principal ideals embed the order, send naturals to joins, and the closed sets form a
/// complete lattice.
pub fn embedding(max_size: usize) -> Result<Sweep> {
    let all = enumerate_lubpos(max_size)?;
    let parts: Vec<Result<Sweep>> = all
        .par_iter()
        .map(|d| {
            let lat = lub_completion(d)?;
            let p = d.poset();
            let mut problems = Vec::new();
            let order_ok = (0..d.size())
                .all(|x| (0..d.size()).all(|y| p.leq(x, y) == in_embed(d, x).is_subset(in_embed(d, y))));
            if !order_ok {
                problems.push("not an order embedding".to_string());
            }
            for (a, top) in d.naturals() {
                if lat.join_all(a.iter().map(|x| in_embed(d, x))) != in_embed(d, top) {
                    problems.push(format!("join of {} differs from its lub", d.show(a)));
                }
            }
            let fam = lat.family();
            let closed_under_meets = fam
                .iter()
                .all(|&s| fam.iter().all(|&t| lat.contains(s.intersection(t))));
            let has_ends = lat.contains(p.carrier()) && lat.contains(lat.meet_all(fam.iter().copied()));
            // joins: the least closed superset of any union exists and is the meet of those above
            let joins = fam.iter().all(|&s| {
                fam.iter().all(|&t| {
                    let j = lat.join(s, t);
                    lat.contains(j)
                        && s.is_subset(j)
                        && t.is_subset(j)
                        && fam.iter().all(|&u| !(s.is_subset(u) && t.is_subset(u)) || j.is_subset(u))
                })
            });
            if !(closed_under_meets && has_ends && joins) {
                problems.push("closed sets are not a complete lattice".to_string());
            }
            let failures = problems
                .into_iter()
                .map(|detail| Failure {
                    instance: serialize(d),
                    detail,
                })
                .collect();
            Ok((1, failures))
        })
        .collect();
    gather(parts)
}

/// A dlubpo is a cdlubpo exactly when its canonical realization realizes it.
pub fn realization_exhaustive(max_size: usize) -> Result<Sweep> {
    let all = enumerate_dlubpos(max_size)?;
    let parts: Vec<Result<Sweep>> = all
        .par_iter()
        .map(|d| {
            let (r, phi) = canonical_realization(d)?;
            let realized = realizes(r.rpo(), d, &phi);
            let cd = is_cdlubpo(d);
            let failures = if realized == cd {
                Vec::new()
            } else {
                vec![Failure {
                    instance: serialize(d),
                    detail: format!("cdlubpo {cd}, canonical realization realizes {realized}"),
                }]
            };
            Ok((1, failures))
        })
        .collect();
    gather(parts)
}

/// Random rpos with the dlubpo they induce on their proper part, plus random perturbations
/// of it: whatever is realized must be a cdlubpo.
pub fn realization_random(samples: usize, seed: u64) -> Result<Sweep> {
    let parts: Vec<Result<Sweep>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0xD1B5_4A32_D192_ED03));
            let n = rng.gen_range(1..=6);
            let realizers = random_poset(&mut rng, n);
            let proper = loop {
                let s = ElemSet::from_bits(rng.gen_range(1..1u64 << n));
                if !s.is_empty() {
                    break s;
                }
            };
            let e = make_rpo(realizers, proper)?;
            let (induced, phi) = induced_lubpo(&e)?;
            let mut candidates = vec![induced.clone()];
            // flip one optional directed set to probe the biconditional from the other side
            let p = induced.poset();
            let optional: Vec<ElemSet> = p
                .carrier()
                .subsets()
                .filter(|&a| a.len() > 1 && p.is_directed(a))
                .collect();
            if !optional.is_empty() {
                let flip = optional[rng.gen_range(0..optional.len())];
                let mut sets: BTreeSet<ElemSet> = induced.natural_sets().clone();
                if !sets.remove(&flip) {
                    sets.insert(flip);
                }
                candidates.push(induced.with_sets(sets, Mode::Directed)?);
            }
            let mut failures = Vec::new();
            for (i, d) in candidates.iter().enumerate() {
                let realized = realizes(&e, d, &phi);
                if i == 0 && !realized {
                    failures.push(Failure {
                        instance: serialize(d),
                        detail: "induced dlubpo not realized by its rpo".into(),
                    });
                }
                if realized && !is_cdlubpo(d) {
                    failures.push(Failure {
                        instance: serialize(d),
                        detail: "realized but not a cdlubpo".into(),
                    });
                }
            }
            Ok((candidates.len(), failures))
        })
        .collect();
    gather(parts)
}

/// The implications from algebraicity and finite determination to cdlubpo.
pub fn algebraicity_exhaustive(max_size: usize) -> Result<Sweep> {
    let all = enumerate_dlubpos(max_size)?;
    let parts: Vec<Result<Sweep>> = all
        .par_iter()
        .map(|d| {
            let alg = is_algebraic(d);
            let cof = directed_cofinality_witness(d).is_none();
            let cd = is_cdlubpo(d);
            let (fd, _) = is_finite_determined(d)?;
            let mut problems = Vec::new();
            if alg && cof && !cd {
                problems.push("algebraic with cofinality but not a cdlubpo");
            }
            if fd && !cd {
                problems.push("finite-determined but not a cdlubpo");
            }
            if alg && cof && !determines(d, finite_elements(d)) {
                problems.push("algebraic with cofinality but not determined by its finite elements");
            }
            let failures = problems
                .into_iter()
                .map(|p| Failure {
                    instance: serialize(d),
                    detail: p.into(),
                })
                .collect();
            Ok((1, failures))
        })
        .collect();
    gather(parts)
}

/// A finite element in the closure of `A` lies below some member of `A`.
pub fn finite_element_lemma(samples: usize, seed: u64) -> Result<Sweep> {
    let parts: Vec<Result<Sweep>> = (0..samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9FB2_1C65_1E98_DF25));
            let n = rng.gen_range(1..=6);
            let d = random_lubpo(&mut rng, n).delta_restrict();
            let a = ElemSet::from_bits(rng.gen_range(0..1u64 << n));
            let p = d.poset();
            let closed = Closer::new(&d).cl(a);
            let bad: Vec<usize> = finite_elements(&d)
                .intersection(closed)
                .iter()
                .filter(|&x| !a.iter().any(|y| p.leq(x, y)))
                .collect();
            let failures = bad
                .into_iter()
                .map(|x| Failure {
                    instance: serialize(&d),
                    detail: format!("finite {} in cl{} above no member", p.label(x), d.show(a)),
                })
                .collect();
            Ok((1, failures))
        })
        .collect();
    gather(parts)
}

/// Identity-on-carrier check that a continuous map stays continuous between class completions.
pub fn completion_preserves_continuity(d: &Lubpo, e: &Lubpo, f: &MonoMap, c: RuleClassId) -> Result<bool> {
    let (dc, ec) = (class_completion(d, c)?, class_completion(e, c)?);
    Ok(crate::lubpo::is_continuous(f, &dc, &ec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_runs_are_clean() {
        for kind in HarnessKind::ALL {
            let params = HarnessParams {
                max_size: kind.max_size().min(3),
                samples: 50,
                seed: 7,
            };
            let rep = run_harness(kind, params).unwrap();
            assert!(rep.instances > 0, "{kind}");
            assert!(rep.clean(), "{kind}: {:?}", rep.failures.first());
        }
    }

    #[test]
    fn bounds_are_enforced() {
        let params = HarnessParams {
            max_size: 5,
            ..Default::default()
        };
        assert!(matches!(
            run_harness(HarnessKind::ValidityAgreement, params),
            Err(Error::BoundExceeded { .. })
        ));
        assert_eq!("realization".parse::<HarnessKind>(), Ok(HarnessKind::Realization));
    }

    #[test]
    fn dlubpo_counts() {
        // one point; two points: discrete, chain with and without its pair
        assert_eq!(enumerate_dlubpos(1).unwrap().len(), 1);
        assert_eq!(enumerate_dlubpos(2).unwrap().len(), 4);
    }
}
