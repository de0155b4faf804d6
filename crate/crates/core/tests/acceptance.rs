//! One line per acceptance criterion; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use lubkit::axioms::{check_axiom, exhaustive_equivalences, sampled_equivalences, AxiomId};
use lubkit::category::{ccc_laws, general_exp, pointwise_exp, product};
use lubkit::closure::Closer;
use lubkit::fixtures;
use lubkit::gallery::{run_gallery, GalleryId, GalleryReport};
use lubkit::harness::{
    algebraicity_exhaustive, derived_rules, embedding, finite_element_lemma, realization_exhaustive,
    realization_random, validity_agreement, Failure,
};
use lubkit::rules::{class_completion, RuleClassId};
use lubkit::{ElemSet, Lubpo, Mode};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn sweep(res: lubkit::Result<(usize, Vec<Failure>)>, what: &str) -> (bool, String) {
    match res {
        Ok((n, f)) if f.is_empty() => (true, format!("{what}: {n} instances")),
        Ok((n, f)) => (
            false,
            format!("{what}: {} of {n} failed, first: {} | {}", f.len(), f[0].detail, f[0].instance),
        ),
        Err(e) => (false, format!("{what}: {e}")),
    }
}

fn within(start: Instant, limit: Duration) -> (bool, String) {
    let t = start.elapsed();
    (t <= limit, format!("{:.2}s of {}s", t.as_secs_f64(), limit.as_secs()))
}

fn c1() -> Outcome {
    let start = Instant::now();
    let d = fixtures::p7();
    let p = d.poset();
    let ix = |s: &str| p.index_of(s).unwrap();
    let only_given = Lubpo::from_sets(
        p.clone(),
        [ElemSet::from_indices([ix("b"), ix("c")]), ElemSet::from_indices([ix("d"), ix("e")])],
        Mode::General,
    )
    .unwrap();
    let fact = Closer::new(&only_given).cl(ElemSet::from_indices([ix("d"), ix("c")])).contains(ix("a"));
    let (fast, t) = within(start, Duration::from_secs(1));
    outcome(fact && fast, format!("a in cl{{d,c}} = {fact}, {t}"))
}

fn c2() -> Outcome {
    let start = Instant::now();
    let Ok(GalleryReport::G1(r)) = run_gallery(GalleryId::G1, None) else {
        return outcome(false, "g1 did not run");
    };
    let cert_ok = !r.in_sazonov || r.certificate_verified;
    let (fast, t) = within(start, Duration::from_secs(1));
    let pass = r.sazonov_paths_agree && cert_ok && (r.erratum == r.in_sazonov) && fast;
    outcome(
        pass,
        format!(
            "S8/S6-S7 paths agree = {}, derivable in Sazonov = {}, certificate verified = {}, completions coincide = {}, erratum flagged = {}, {t}",
            r.sazonov_paths_agree, r.in_sazonov, r.certificate_verified, r.completions_coincide, r.erratum
        ),
    )
}

fn c3() -> Outcome {
    let start = Instant::now();
    let ex = exhaustive_equivalences(4);
    let (ex_fast, t1) = within(start, Duration::from_secs(300));
    let start = Instant::now();
    let sa = sampled_equivalences(6, 10_000, 2024);
    let (sa_fast, t2) = within(start, Duration::from_secs(60));
    match (ex, sa) {
        (Ok(ex), Ok(sa)) => outcome(
            ex.discrepancies.is_empty() && sa.discrepancies.is_empty() && ex_fast && sa_fast,
            format!(
                "exhaustive n<=4: {} instances, {} discrepancies ({t1}); random n=6: {} instances, {} discrepancies ({t2})",
                ex.instances,
                ex.discrepancies.len(),
                sa.instances,
                sa.discrepancies.len()
            ),
        ),
        (a, b) => outcome(false, format!("{:?} {:?}", a.err(), b.err())),
    }
}

fn timed_sweep(f: impl FnOnce() -> lubkit::Result<(usize, Vec<Failure>)>, what: &str, limit: Option<u64>) -> Outcome {
    let start = Instant::now();
    let (ok, msg) = sweep(f(), what);
    match limit {
        Some(s) => {
            let (fast, t) = within(start, Duration::from_secs(s));
            outcome(ok && fast, format!("{msg}, {t}"))
        }
        None => outcome(ok, format!("{msg}, {:.2}s", start.elapsed().as_secs_f64())),
    }
}

/// Fixtures with at most three elements, in one mode, completed under the canonical class.
fn small_fixtures(mode: Mode) -> Vec<Lubpo> {
    [fixtures::one_point(), fixtures::c2_poset(), fixtures::c3_poset(), fixtures::v_poset()]
        .into_iter()
        .map(|p| class_completion(&Lubpo::trivial(p, mode), RuleClassId::Canonical).unwrap())
        .collect()
}

fn c7() -> Outcome {
    let start = Instant::now();
    let mut triples = 0;
    let mut maps = 0;
    let mut bad = Vec::new();
    for mode in [Mode::Directed, Mode::General] {
        let fx = small_fixtures(mode);
        for c in &fx {
            for d in &fx {
                for e in &fx {
                    triples += 1;
                    match ccc_laws(c, d, e) {
                        Ok(r) => {
                            maps += r.maps_checked;
                            if !r.all_hold() {
                                bad.push(r.failures[0].clone());
                            }
                        }
                        Err(err) => bad.push(err.to_string()),
                    }
                }
            }
        }
    }
    let (fast, t) = within(start, Duration::from_secs(120));
    let first = bad.first().cloned().unwrap_or_default();
    outcome(
        bad.is_empty() && fast,
        format!("{triples} triples, {maps} maps, {} failing {first}, {t}", bad.len()),
    )
}

fn directed_fixtures() -> Vec<(&'static str, Lubpo)> {
    ["c2", "c3", "v", "d4", "d4-singletons"]
        .into_iter()
        .map(|n| (n, fixtures::by_name(n).unwrap()))
        .chain([
            ("one", fixtures::all_directed(fixtures::one_point())),
            ("p7-delta", fixtures::p7().delta_restrict()),
            ("c3-singletons", fixtures::singletons(fixtures::c3_poset())),
        ])
        .collect()
}

fn c8() -> Outcome {
    let fx = directed_fixtures();
    let mut pairs = 0;
    let mut problems = Vec::new();
    let s5 = |l: &Lubpo| check_axiom(l, AxiomId::S5, None).map(|r| r.holds);
    for (dn, d) in &fx {
        for (en, e) in &fx {
            let (Ok(pw), Ok(ge)) = (pointwise_exp(d, e), general_exp(d, e)) else {
                continue;
            };
            pairs += 1;
            if !ge.to_lubpo().natural_sets().is_subset(pw.to_lubpo().natural_sets()) {
                problems.push(format!("{dn} => {en}: general naturals not pointwise"));
            }
            if s5(d) == Ok(true) && s5(e) == Ok(true) {
                if s5(ge.to_lubpo()) != Ok(true) {
                    problems.push(format!("{dn} =>* {en} loses S5"));
                }
                match product(d, e) {
                    Ok(pr) if s5(&pr.lubpo) == Ok(true) => {}
                    Ok(_) => problems.push(format!("{dn} x {en} loses S5")),
                    Err(_) => {}
                }
            }
        }
    }
    outcome(
        problems.is_empty() && pairs > 0,
        format!("{pairs} fixture pairs, {} problems {}", problems.len(), problems.join("; ")),
    )
}

fn c9() -> Outcome {
    let start = Instant::now();
    let (a, m1) = sweep(algebraicity_exhaustive(4), "exhaustive n<=4");
    let (b, m2) = sweep(finite_element_lemma(1000, 99), "lemma on random instances");
    outcome(a && b, format!("{m1}; {m2}; {:.2}s", start.elapsed().as_secs_f64()))
}

fn c10() -> Outcome {
    let start = Instant::now();
    let (a, m1) = sweep(realization_exhaustive(4), "exhaustive n<=4");
    let (b, m2) = sweep(realization_random(1000, 5), "random rpo instances");
    outcome(a && b, format!("{m1}; {m2}; {:.2}s", start.elapsed().as_secs_f64()))
}

fn c11() -> Outcome {
    let start = Instant::now();
    let Ok(GalleryReport::G2(r)) = run_gallery(GalleryId::G2, Some(64)) else {
        return outcome(false, "g2 did not run");
    };
    let (fast, t) = within(start, Duration::from_secs(10));
    let rep = &r.repaired;
    let pass = rep.monotone_in_domain
        && rep.monotone_in_parameter
        && rep.witness_directed
        && rep.projections_match
        && rep.eval_image_avoids_mid
        && rep.certificate_valid
        && fast;
    let printed = &r.as_printed;
    outcome(
        pass,
        format!(
            "repaired table: monotone = {}, witness directed = {}, eval avoids b'_i = {}, certificate = {}; printed table: monotone = {}, {} undefined entries, first violation {}; {t}",
            rep.monotone_in_domain && rep.monotone_in_parameter,
            rep.witness_directed,
            rep.eval_image_avoids_mid,
            rep.certificate_valid,
            printed.monotone_in_domain && printed.monotone_in_parameter,
            printed.undefined_entries,
            printed.first_violation.as_deref().unwrap_or("none"),
        ),
    )
}

fn c12() -> Outcome {
    let start = Instant::now();
    let g3 = run_gallery(GalleryId::G3, Some(64));
    let g4 = run_gallery(GalleryId::G4, Some(16));
    let (fast, t) = within(start, Duration::from_secs(10));
    match (g3, g4) {
        (Ok(g3 @ GalleryReport::G3(_)), Ok(GalleryReport::G4(r4))) => {
            let g4_ok = r4.reached_all && r4.side_conditions && r4.steps_match_depth && r4.top_reached_at_bound;
            outcome(
                g3.passed() && g4_ok && fast,
                format!(
                    "g3 side conditions = {}, g4 reached every b_n = {}, a in cl at bound = {}, {t}",
                    g3.passed(),
                    r4.reached_all,
                    r4.top_reached_at_bound
                ),
            )
        }
        _ => outcome(false, "gallery did not run"),
    }
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let criteria: Vec<Criterion> = vec![
        ("closure fact on P7", Box::new(c1)),
        ("P7 completion audit", Box::new(c2)),
        ("equivalence harness", Box::new(c3)),
        ("validity dual-path agreement", Box::new(|| timed_sweep(|| validity_agreement(3), "hosts n<=3", Some(120)))),
        ("derived rules are valid", Box::new(|| timed_sweep(|| derived_rules(5, 1000, 11), "random certificates", None))),
        ("embedding properties", Box::new(|| timed_sweep(|| embedding(4), "exhaustive n<=4", None))),
        ("categorical laws", Box::new(c7)),
        ("exponent relations", Box::new(c8)),
        ("algebraicity", Box::new(c9)),
        ("realization biconditional", Box::new(c10)),
        ("g2 curry witness at N=64", Box::new(c11)),
        ("g3 at N=64, g4 at N=16", Box::new(c12)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!("{} {:>2} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
