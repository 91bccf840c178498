//! One PASS/FAIL line per acceptance criterion, with timings.
//!
//! Runs as a plain binary (`harness = false`) and exits nonzero if any
//! criterion fails.

use std::collections::VecDeque;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use covext::verify::bundled;
use covext::{run_text, verify_paper, Report, RunOptions, Verdict};
use covext_core::braid::{self, HomSearchConstraints};
use covext_core::cpoly::{self, CPoly};
use covext_core::{coset, extend, Alphabet, Complex64, Letter, Permutation, Presentation, Word};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const BRANCH_TOL: f64 = 1e-10;
const WEIERSTRASS_TOL: f64 = 1e-8;
const DISCRIMINANT_REL: f64 = 1e-9;
const NEGATIVE_EIGEN_TOL: f64 = 1e-6;
const LEVI_FD_REL: f64 = 1e-5;

type Outcome = Result<String, String>;

fn check(cond: bool, what: &str) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what.to_string())
    }
}

fn scenario(name: &str) -> Result<Report, String> {
    let text = bundled(name).ok_or_else(|| format!("no bundled scenario {name}"))?;
    run_text(text, RunOptions::default()).map_err(|e| format!("{name}: {e}"))
}

fn fact<'a>(r: &'a Report, key: &str) -> Result<&'a Value, String> {
    r.facts.get(key).ok_or_else(|| format!("missing fact {key}"))
}

fn as_f64(v: &Value) -> Result<f64, String> {
    v.as_f64().ok_or_else(|| format!("not a number: {v}"))
}

fn complex(v: &Value) -> Result<Complex64, String> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([re, im]) => Ok(Complex64::new(as_f64(re)?, as_f64(im)?)),
        _ => Err(format!("not a complex number: {v}")),
    }
}

fn complex_list(v: &Value) -> Result<Vec<Complex64>, String> {
    v.as_array()
        .ok_or_else(|| format!("not a list: {v}"))?
        .iter()
        .map(complex)
        .collect()
}

fn claim_verdict(r: &Report, id: &str) -> Result<Verdict, String> {
    r.claims
        .iter()
        .find(|c| c.id == id)
        .map(|c| c.verdict)
        .ok_or_else(|| format!("missing claim {id}"))
}

fn all_claims_match(r: &Report) -> Result<(), String> {
    match r.claims.iter().find(|c| c.verdict != Verdict::Matches) {
        Some(c) => Err(format!("claim {} is {}", c.id, c.verdict.as_str())),
        None => Ok(()),
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    check(
        elapsed.as_secs_f64() < limit,
        &format!("took {:.3} s, limit {limit} s", elapsed.as_secs_f64()),
    )
}

fn example3() -> Outcome {
    let r = scenario("example3_extension")?;
    check(fact(&r, "b1")? == 1, "b1 != 1")?;
    all_claims_match(&r)?;
    Ok("b1 = 1".into())
}

fn two_sheet() -> Outcome {
    let r = scenario("two_sheet_extension")?;
    check(fact(&r, "b1")? == 2, "b1 != 2")?;
    check(fact(&r, "strong")? == true, "fiber map not injective")?;
    check(fact(&r, "fiber_map")? == &serde_json::json!([1, 2]), "fiber map")?;
    all_claims_match(&r)?;
    Ok("b1 = 2, strong".into())
}

fn cubic_slice() -> Outcome {
    let r = scenario("cubic_slice")?;
    let bp = complex_list(fact(&r, "branch_points")?)?;
    let targets = [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    check(bp.len() == 2, "expected two branch points")?;
    let err = targets
        .iter()
        .map(|t| bp.iter().map(|b| (b - t).norm()).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    check(err <= BRANCH_TOL, &format!("branch point error {err:e}"))?;
    check(fact(&r, "cycle_types")? == &serde_json::json!([[2, 1], [2, 1]]), "not transpositions")?;
    check(fact(&r, "distinct_permutations")? == true, "permutations coincide")?;
    check(fact(&r, "closure_order")? == 6, "closure order != 6")?;
    let product = fact(&r, "lasso_product")?.as_str().unwrap_or_default();
    let p = Permutation::from_cycles(3, &[&[0, 2, 1]]).unwrap();
    let q = Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap();
    check(
        product == p.cycle_notation() || product == q.cycle_notation(),
        "product is not a 3-cycle",
    )?;
    check(fact(&r, "closed.alpha1_at_simple_root")? == true, "simple root sheet moved")?;
    check(fact(&r, "closed.product_at_simple_root")? == false, "product closes")?;
    check(fact(&r, "refinement_stable")? == true, "refinement changed permutations")?;
    Ok(format!("branch point error {err:.1e} <= {BRANCH_TOL:e}, closure order 6"))
}

fn stein() -> Outcome {
    let r = scenario("stein_weierstrass")?;
    let bp = complex_list(fact(&r, "branch_points")?)?;
    check(bp.len() == 1 && bp[0].norm() <= BRANCH_TOL, "branch point not at 0")?;
    check(fact(&r, "permutations")? == &serde_json::json!(["(1 2)"]), "monodromy")?;
    // zeta^2 - z (z - 1)^2, by power of zeta.
    let want: [&[f64]; 3] = [&[0.0, -1.0, 2.0, -1.0], &[], &[1.0]];
    let got = fact(&r, "weierstrass")?
        .as_array()
        .ok_or("weierstrass is not a list")?
        .iter()
        .map(complex_list)
        .collect::<Result<Vec<_>, _>>()?;
    check(got.len() == want.len(), "Weierstrass degree")?;
    let mut err: f64 = 0.0;
    for (g, w) in got.iter().zip(want) {
        for k in 0..g.len().max(w.len()) {
            let a = g.get(k).copied().unwrap_or_default();
            let b = w.get(k).copied().unwrap_or_default();
            err = err.max((a - Complex64::new(b, 0.0)).norm());
        }
    }
    check(err <= WEIERSTRASS_TOL, &format!("coefficient error {err:e}"))?;
    check(fact(&r, "separates.1")? == true, "no separation at z = -1")?;
    check(fact(&r, "separates.2")? == false, "separation at z = 1")?;
    Ok(format!("coefficient error {err:.1e} <= {WEIERSTRASS_TOL:e}"))
}

fn galois() -> Outcome {
    let r = scenario("galois_slice")?;
    check(fact(&r, "cycle_types")? == &serde_json::json!([[3], [3]]), "not 3-cycles")?;
    check(fact(&r, "closure_order")? == 3, "closure order != 3")?;
    check(fact(&r, "is_galois")? == true, "not Galois")?;
    Ok("3-cycles, closure order 3".into())
}

fn discriminant() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut z = || Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (p, q) = (z(), z());
        let poly = CPoly::new(vec![q, p, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        let got = cpoly::discriminant(&poly).map_err(|e| e.to_string())?;
        let want = -4.0 * p * p * p - 27.0 * q * q;
        worst = worst.max((got - want).norm() / want.norm().max(1.0));
    }
    check(worst <= DISCRIMINANT_REL, &format!("relative error {worst:e}"))?;
    Ok(format!("max relative error {worst:.1e} <= {DISCRIMINANT_REL:e}"))
}

fn braid_audit() -> Outcome {
    let start = Instant::now();
    let c = HomSearchConstraints {
        degree: 3,
        pinned: vec![
            Some(Permutation::transposition(3, 0, 1)),
            Some(Permutation::transposition(3, 1, 2)),
        ],
        require_transitive: false,
        require_all_nontrivial: true,
    };
    let found = braid::hom_search(4, &c).map_err(|e| e.to_string())?;
    within(start.elapsed(), 1.0)?;
    // Exhaustive: every admissible third image, checked independently.
    let mut expected = Vec::new();
    for t3 in covext_core::perm::all_permutations(3) {
        let t = vec![c.pinned[0].clone().unwrap(), c.pinned[1].clone().unwrap(), t3];
        if braid::meets_constraints(&t, &c) && braid::satisfies_relators(4, &t).unwrap() {
            expected.push(t);
        }
    }
    check(found == expected, "search output differs from exhaustive check")?;
    for t in &found {
        check(braid::satisfies_relators(4, t).unwrap(), "invalid tuple")?;
    }
    let r = scenario("braid_4_3")?;
    let verdict = claim_verdict(&r, "no-homomorphism")?;
    check(verdict != Verdict::Inconclusive, "claim inconclusive")?;

    let m = scenario("minimal_extension_degree")?;
    check(fact(&m, "witness.injective")?.is_object(), "no witness")?;
    let degree = fact(&m, "minimal_degree.injective")?;
    let four = claim_verdict(&m, "four-sheet")?;
    let least = claim_verdict(&m, "four-is-least")?;
    let five = claim_verdict(&m, "five-sheet")?;
    Ok(format!(
        "{} solution(s), no-homomorphism {}; minimal injective degree {degree}, \
         four-sheet {}, four-is-least {}, five-sheet {}",
        found.len(),
        verdict.as_str(),
        four.as_str(),
        least.as_str(),
        five.as_str()
    ))
}

fn coset_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..100 {
        let k = rng.gen_range(1..=3);
        let d = rng.gen_range(1..=12);
        let perms: Vec<Vec<usize>> = (0..k)
            .map(|_| {
                let mut v: Vec<usize> = (0..d).collect();
                v.shuffle(&mut rng);
                v
            })
            .collect();
        let step = |x: usize, l: Letter| {
            if l.inverse {
                perms[l.generator].iter().position(|&y| y == x).unwrap()
            } else {
                perms[l.generator][x]
            }
        };
        // Schreier graph from point 0, with tree words.
        let mut path: Vec<Option<Vec<Letter>>> = vec![None; d];
        path[0] = Some(Vec::new());
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for g in 0..k {
                for inv in [false, true] {
                    let l = Letter::new(g, inv);
                    let y = step(x, l);
                    if path[y].is_none() {
                        let mut p = path[x].clone().unwrap();
                        p.push(l);
                        path[y] = Some(p);
                        queue.push_back(y);
                    }
                }
            }
        }
        let orbit = path.iter().flatten().count();
        let alphabet = Alphabet::numbered("x", k);
        let mut gens = Vec::new();
        for x in 0..d {
            let Some(px) = &path[x] else { continue };
            for g in 0..k {
                let mut w = px.clone();
                w.push(Letter::new(g, false));
                w.extend(path[perms[g][x]].as_ref().unwrap().iter().rev().map(|l| l.inv()));
                gens.push(Word::reduce(&alphabet, w).unwrap());
            }
        }
        let pres = Presentation::free(alphabet);
        let table = coset::todd_coxeter(&pres, &gens, coset::DEFAULT_COSET_CAP)
            .map_err(|e| format!("trial {trial}: {e}"))?;
        check(
            table.index() == orbit,
            &format!("trial {trial}: index {} vs orbit {orbit}", table.index()),
        )?;
    }
    Ok("100 instances agree".into())
}

fn two_sheet_unique() -> Outcome {
    for k in 1..=8 {
        check(extend::two_sheet_unique(k).map_err(|e| e.to_string())?, &format!("k = {k}"))?;
    }
    Ok("k = 1..8".into())
}

fn hartogs() -> Outcome {
    let r = scenario("hartogs_signature")?;
    check(fact(&r, "signatures_expected")? == true, "unexpected Levi signature")?;
    let neg = as_f64(fact(&r, "max_negative_deviation")?)?;
    let fd = as_f64(fact(&r, "max_fd_relative")?)?;
    check(neg <= NEGATIVE_EIGEN_TOL, &format!("negative eigenvalue deviation {neg:e}"))?;
    check(fd <= LEVI_FD_REL, &format!("finite difference mismatch {fd:e}"))?;
    Ok(format!(
        "deviation {neg:.1e} <= {NEGATIVE_EIGEN_TOL:e}, fd {fd:.1e} <= {LEVI_FD_REL:e}"
    ))
}

fn render(runs: &[covext::ScenarioRun]) -> Result<String, String> {
    let mut out = covext::verify::summary_table(runs);
    for run in runs {
        let report = run.outcome.as_ref().map_err(|e| format!("{}: {e}", run.name))?;
        out.push_str(&report.to_json());
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let first = render(&verify_paper(None))?;
    let second = render(&verify_paper(None))?;
    check(first == second, "reports differ between runs")?;
    Ok(format!("{} bytes identical", first.len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Outcome); 11] = [
        ("example-3 extension", 1.0, example3),
        ("two-sheet extension", 1.0, two_sheet),
        ("cubic slice", 5.0, cubic_slice),
        ("square-root slice", 2.0, stein),
        ("Galois slice", 5.0, galois),
        ("cubic discriminant", 1.0, discriminant),
        ("braid audit", 10.0, braid_audit),
        ("coset oracle", 10.0, coset_oracle),
        ("two-sheet uniqueness", 1.0, two_sheet_unique),
        ("Hartogs signatures", 10.0, hartogs),
        ("determinism", 60.0, determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|msg| within(elapsed, *limit).map(|()| msg));
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {:>2} {name:<22} {secs:>7.3} s  {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name:<22} {secs:>7.3} s  {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
