//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.
//!
//! Run with `cargo test -p gkm-crystal --test acceptance`.

use std::time::{Duration, Instant};

use gkm_crystal::binfinity::{BInfElement, ETrace, Realization};
use gkm_crystal::cartan::{CartanDatum, Weight};
use gkm_crystal::crystal::{check_real_strings, check_strict_morphism, verify_axioms, Crystal};
use gkm_crystal::elementary::{ElementaryCrystal, ElementaryElement};
use gkm_crystal::geometry::{self, linalg::q};
use gkm_crystal::oracle::{graded_dim, weights_up_to_height, DEFAULT_HEIGHT_BOUND};
use gkm_crystal::tensor::{ESide, TensorCrystal};

type Outcome = Result<String, String>;

const CAP: usize = 1_000_000;

fn datum(m: &[&[i64]]) -> CartanDatum {
    CartanDatum::new(m.iter().map(|r| r.to_vec()).collect()).expect("valid matrix")
}

/// The matrices of the oracle cross-check.
fn oracle_matrices() -> Vec<CartanDatum> {
    vec![
        datum(&[&[2]]),
        datum(&[&[0]]),
        datum(&[&[-2]]),
        datum(&[&[2, -1], &[-1, 2]]),
        datum(&[&[0, -1], &[-1, 2]]),
        datum(&[&[0, -1], &[-1, 0]]),
    ]
}

/// Rank-two matrices with `a_ii < 0` next to another index; on these the
/// imaginary gap of the `e_i` rule actually fires.
fn gap_matrices() -> Vec<CartanDatum> {
    vec![datum(&[&[-2, -1], &[-1, 2]]), datum(&[&[-2, -1], &[-1, -2]])]
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f_word(r: &Realization, word: &[usize]) -> BInfElement {
    word.iter().fold(r.highest_weight(), |b, &i| r.f_op(&b, i))
}

fn criterion_1() -> Outcome {
    for t in 1..=3i64 {
        let r = Realization::cyclic(datum(&[&[2 - 2 * t]]));
        let ex = r.explore(10, CAP).map_err(|e| e.to_string())?;
        ensure(ex.elements.len() == 11, || format!("t={t}: {} nodes", ex.elements.len()))?;
        ensure(ex.layer_sizes() == vec![1; 11], || format!("t={t}: layers {:?}", ex.layer_sizes()))?;
        let chain: Vec<_> = (0..10).map(|l| (l, l + 1, 0)).collect();
        ensure(ex.edges == chain, || format!("t={t}: edges {:?}", ex.edges))?;
        for (l, b) in ex.elements.iter().enumerate() {
            ensure(*b == f_word(&r, &vec![0; l]), || format!("t={t}: node {l} is {b}"))?;
            let psi = r.psi_embed(b, 0).map_err(|e| e.to_string())?;
            let expected = (r.highest_weight(), ElementaryElement::new(0, l as u64));
            ensure(psi == expected, || format!("t={t}: Psi(f^{l} 1) = {psi:?}"))?;
        }
    }
    Ok("A = (0), (-2), (-4): 11-node chains, Psi_i(f^l 1) = 1 ⊗ b_i(-l)".into())
}

fn criterion_2() -> Outcome {
    let r = Realization::cyclic(datum(&[&[0, -1], &[-1, 2]]));
    let (i, j) = (0, 1);
    let b = f_word(&r, &[i, i, j]);
    let star_i = r.eps_star(&b, i).map_err(|e| e.to_string())?;
    let star_j = r.eps_star(&b, j).map_err(|e| e.to_string())?;
    ensure((star_i, star_j) == (2, 0), || format!("eps* = ({star_i}, {star_j})"))?;
    let psi_i = r.psi_embed(&b, i).map_err(|e| e.to_string())?;
    ensure(psi_i == (f_word(&r, &[j]), ElementaryElement::new(i, 2)), || format!("Psi_i = {psi_i:?}"))?;
    let psi_j = r.psi_embed(&b, j).map_err(|e| e.to_string())?;
    ensure(psi_j == (b.clone(), ElementaryElement::new(j, 0)), || format!("Psi_j = {psi_j:?}"))?;
    Ok(format!("b = {b}: eps_i* = 2, eps_j* = 0, Psi_i(b) = f_j 1 ⊗ b_i(-2), Psi_j(b) = b ⊗ b_j(0)"))
}

fn criterion_3() -> Outcome {
    let rep = geometry::loop_and_edge_rep(&q(1), &q(3), &q(1), &q(1), &q(1));
    ensure(geometry::moment_map_check(&rep), || "moment map does not vanish".into())?;
    let flag = geometry::flag_exists(&rep, geometry::DEFAULT_FLAG_BOUND).map_err(|e| e.to_string())?;
    let flag = flag.ok_or("no flag found")?;
    ensure(flag.is_valid_for(&rep), || format!("witness {flag} fails the flag conditions"))?;
    ensure(geometry::regular_semisimple_check(&rep), || "loop not regular semisimple".into())?;
    let star = |i| geometry::eps_star_point(&rep, i).map_err(|e| e.to_string());
    let values = (geometry::eps_point(&rep, 0), star(0)?, geometry::eps_point(&rep, 1), star(1)?);
    ensure(values == (0, 2, 1, 0), || format!("(eps_i, eps_i*, eps_j, eps_j*) = {values:?}"))?;
    Ok(format!("flag {flag}; (eps_i, eps_i*, eps_j, eps_j*) = {values:?}"))
}

fn weight_check(d: &CartanDatum, depth: usize) -> Result<usize, String> {
    let r = Realization::cyclic(d.clone());
    let counts = r.enumerate_to_depth(depth, CAP).map_err(|e| e.to_string())?.weight_counts();
    let weights = weights_up_to_height(d.rank(), depth as u64);
    for alpha in &weights {
        let found = counts.get(&-alpha).copied().unwrap_or(0) as u64;
        let expected = graded_dim(d, alpha, DEFAULT_HEIGHT_BOUND).map_err(|e| e.to_string())?;
        ensure(found == expected, || format!("{d}: alpha {alpha}: crystal {found}, oracle {expected}"))?;
    }
    Ok(weights.len())
}

fn criterion_4() -> Outcome {
    let mut total = 0;
    for d in oracle_matrices() {
        total += weight_check(&d, 6)?;
    }
    Ok(format!("{total} weights of height <= 6 over 6 matrices agree"))
}

fn criterion_5() -> Outcome {
    let d = datum(&[&[2, -1], &[-1, 2]]);
    for a in 0..=6i64 {
        for b in 0..=6 - a {
            let dim = graded_dim(&d, &Weight::new(vec![a, b]), DEFAULT_HEIGHT_BOUND).map_err(|e| e.to_string())?;
            ensure(dim as i64 == a.min(b) + 1, || format!("alpha = ({a},{b}): {dim}"))?;
        }
    }
    Ok("graded_dim(a,b) = min(a,b) + 1 for a + b <= 6".into())
}

fn empty_report<T: std::fmt::Display>(what: &str, report: Vec<T>) -> Result<(), String> {
    match report.first() {
        None => Ok(()),
        Some(v) => Err(format!("{what}: {} violations, first: {v}", report.len())),
    }
}

fn criterion_6() -> Outcome {
    // real, imaginary with a_ii = -2, imaginary with a_ii = 0
    let d = datum(&[&[2, -1, 0], &[-1, -2, -1], &[0, -1, 0]]);
    let c = ElementaryCrystal::new(d.clone());
    for i in d.indices() {
        let set = c.truncation(i, 8);
        empty_report(&format!("B_{}", i + 1), verify_axioms(&c, &set).map_err(|e| e.to_string())?)?;
    }
    let t = TensorCrystal::new(c.clone(), c.clone());
    for i in d.indices() {
        for j in d.indices() {
            let set: Vec<_> = c.truncation(i, 6).into_iter().flat_map(|x| c.truncation(j, 6).into_iter().map(move |y| (x, y))).collect();
            empty_report(&format!("B_{} ⊗ B_{}", i + 1, j + 1), verify_axioms(&t, &set).map_err(|e| e.to_string())?)?;
        }
    }
    let mut nodes = 0;
    let mut sets: Vec<(CartanDatum, usize)> = oracle_matrices().into_iter().map(|d| (d, 6)).collect();
    sets.extend((1..=3).map(|t| (datum(&[&[2 - 2 * t]]), 10)));
    sets.extend(gap_matrices().into_iter().map(|d| (d, 4)));
    for (d, depth) in sets {
        let r = Realization::cyclic(d.clone());
        let ex = r.explore(depth, CAP).map_err(|e| e.to_string())?;
        nodes += ex.elements.len();
        empty_report(&format!("{d} depth {depth}"), verify_axioms(&r, &ex.elements).map_err(|e| e.to_string())?)?;
        empty_report(&format!("{d} strings"), check_real_strings(&r, &ex.elements, depth + 1))?;
    }
    Ok(format!("truncated B_i and B_i ⊗ B_j (real/imaginary, a_ii in {{2,0,-2}}); {nodes} enumerated nodes"))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    let mut gap_log = Vec::new();
    for d in oracle_matrices().into_iter().chain(gap_matrices()) {
        let r = Realization::cyclic(d.clone());
        let ex = r.explore(4, CAP).map_err(|e| e.to_string())?;
        let target = r.psi_target();
        for i in d.indices() {
            let psi = |b: &BInfElement| r.psi_embed(b, i).expect("Psi_i is defined on B(infinity)");
            empty_report(&format!("{d} Psi_{}", i + 1), check_strict_morphism(&r, &target, psi, &ex.elements).map_err(|e| e.to_string())?)?;
            checked += ex.elements.len();
            for b in &ex.elements {
                let image = psi(b);
                for k in d.indices() {
                    if d.a(k, k) < 0 && target.e_branch(k, &image) == ESide::Gap {
                        // strictness above already compared e_k on both sides
                        ensure(target.e(k, &image).is_none() && r.e_op(b, k).is_none(), || format!("gap at {b} not null"))?;
                        gap_log.push(format!("{d}: e_{} Psi_{}({b}) = 0 (gap)", k + 1, i + 1));
                    }
                }
            }
        }
        for b in &ex.elements {
            for k in d.indices() {
                if d.a(k, k) < 0 && r.e_traced(b, k) == ETrace::Gap {
                    gap_log.push(format!("{d}: e_{}({b}) = 0 (gap)", k + 1));
                }
            }
        }
    }
    ensure(!gap_log.is_empty(), || "no gap instance with a_ii < 0 was exercised".into())?;
    for line in gap_log.iter().take(3) {
        println!("    gap instance: {line}");
    }
    Ok(format!("{checked} (node, i) pairs strict; {} gap-null instances with a_ii < 0", gap_log.len()))
}

fn criterion_8() -> Outcome {
    let mut nodes = 0;
    for d in oracle_matrices().into_iter().chain(gap_matrices()) {
        let r = Realization::cyclic(d.clone());
        let ex = r.explore(4, CAP).map_err(|e| e.to_string())?;
        for b in &ex.elements {
            for i in d.indices() {
                let down = r.f_op(b, i);
                ensure(r.e_op(&down, i).as_ref() == Some(b), || format!("{d}: e_{0} f_{0} {b} != {b}", i + 1))?;
                if let Some(up) = r.e_op(b, i) {
                    ensure(r.f_op(&up, i) == *b, || format!("{d}: f_{0} e_{0} {b} != {b}", i + 1))?;
                }
            }
        }
        nodes += ex.elements.len();
        for i in d.indices() {
            let findings = gkm_crystal::binfinity::check_realization_independence(&r, &r.i_first(i), 4, CAP).map_err(|e| e.to_string())?;
            empty_report(&format!("{d} cyclic vs {}-first", i + 1), findings)?;
        }
    }
    Ok(format!("{nodes} nodes round-trip; cyclic and i-first graphs isomorphic for every i"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("rank-one chains", criterion_1, Duration::from_secs(1)),
        ("eps* and Psi on f_j f_i^2 1", criterion_2, Duration::from_secs(1)),
        ("loop-and-edge representation", criterion_3, Duration::from_secs(1)),
        ("oracle cross-check", criterion_4, Duration::from_secs(60)),
        ("Kostant partition function for A2", criterion_5, Duration::MAX),
        ("axiom suite", criterion_6, Duration::MAX),
        ("strict embeddings", criterion_7, Duration::MAX),
        ("round trips and iota-independence", criterion_8, Duration::from_secs(10)),
    ];
    let mut failed = 0;
    for (n, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > *limit => Err(format!("{msg}; took {elapsed:.2?}, limit {limit:.0?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {name} ({elapsed:.2?}) {msg}", n + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({elapsed:.2?}) {msg}", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
