//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Every criterion is exact. The pinned tolerances below are the number of
//! failing instances allowed in each randomised battery.

// the tolerance is pinned at zero on purpose
#![allow(clippy::absurd_extreme_comparisons)]

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;

use common::{all_words, count, enumerate, random_monoid, random_word, relaxed, rng, strings};
use costfn::algebra::order_closure;
use costfn::catalogue::{counta, letter_count, longest_block, sega, size_recogniser};
use costfn::computation::{achievable_values, construct, semantic_value, validate_tree};
use costfn::costmso::{compile, decide_formula, evaluate, parse_formula, Task, Valuation};
use costfn::green::omega_data;
use costfn::projection::{coideal_powerset, ideal_powerset, inf_project, parse_letter_map, sup_project};
use costfn::recogniser::{decide_boundedness, decide_divergence, decide_domination};
use costfn::{
    pi_eval, validate_axioms, Axiom, Cost, ElemId, ElemSet, Mode, Recogniser, StabilisationMonoid, Variant, Witness,
};
use rand::Rng;

/// Failing instances tolerated in criteria 2 and 10.
const BATTERY_TOLERANCE: usize = 0;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn with_sharp(m: &StabilisationMonoid, e: &str, s: &str) -> StabilisationMonoid {
    let els: Vec<ElemId> = m.elements().collect();
    let mut sharp: Vec<Option<ElemId>> = els.iter().map(|&x| m.sharp(x)).collect();
    sharp[m.elem(e).unwrap().index()] = Some(m.elem(s).unwrap());
    rebuild(
        m,
        els.iter()
            .map(|&a| els.iter().map(|&b| m.leq(a, b)).collect())
            .collect(),
        sharp,
    )
}

fn rebuild(m: &StabilisationMonoid, leq: Vec<Vec<bool>>, sharp: Vec<Option<ElemId>>) -> StabilisationMonoid {
    let els: Vec<ElemId> = m.elements().collect();
    StabilisationMonoid::from_parts(
        m.names().to_vec(),
        m.unit(),
        els.iter()
            .map(|&a| els.iter().map(|&b| m.mul(a, b)).collect())
            .collect(),
        leq,
        sharp,
    )
    .unwrap()
}

fn axiom_gate() -> Outcome {
    for (name, m) in [("counta", counta()), ("sega", sega())] {
        let v = validate_axioms(&m);
        check(v.is_empty(), format!("{name} rejected: {v:?}"))?;
    }
    let m = counta();
    let bad_sharp = validate_axioms(&with_sharp(&m, "a", "b"));
    check(
        bad_sharp
            .iter()
            .any(|v| v.axiom == Axiom::SharpBelow && v.witness == [m.elem("a").unwrap()]),
        format!("sharp(a)=b: {bad_sharp:?}"),
    )?;
    let sharp = m.elements().map(|x| m.sharp(x)).collect();
    let no_order = validate_axioms(&rebuild(&m, order_closure(m.size(), &[]).unwrap(), sharp));
    check(
        no_order.iter().any(|v| v.axiom == Axiom::SharpBelow),
        format!("order without 0≤a: {no_order:?}"),
    )?;
    Ok(format!(
        "counta, sega valid; mutations rejected by {:?} and {:?}",
        bad_sharp[0].axiom, no_order[0].axiom
    ))
}

fn construction_bound() -> Outcome {
    let mut r = rng(2);
    let mut failures = Vec::new();
    let instances = 100;
    for i in 0..instances {
        let m = random_monoid(&mut r, 6);
        let len = r.gen_range(1..=200);
        let w = random_word(&mut r, &m, len);
        for n in [1, 2, 5, 17] {
            let t = construct(&m, &w, n).map_err(|e| e.to_string())?;
            if validate_tree(&m, &t, &w, n, Mode::Exact).is_err() || t.height() > 3 * m.size() {
                failures.push(format!("instance {i} n={n}"));
            }
        }
    }
    check(failures.len() <= BATTERY_TOLERANCE, failures.join(", "))?;
    Ok(format!(
        "{}/{instances} instances at n in {{1,2,5,17}}",
        instances - failures.len()
    ))
}

fn four_function_chain() -> Outcome {
    let ab = strings("ab");
    let mut words = 0;
    for (name, f) in [
        ("counta", letter_count(&ab, &["a"]).unwrap()),
        ("sega", longest_block(&ab, "a").unwrap()),
    ] {
        let p = 3 * f.monoid.size();
        for u in all_words(&ab, 10) {
            let idx: Vec<usize> = u.iter().map(|s| f.symbol(s).unwrap()).collect();
            let v: Vec<Cost> = Variant::ALL
                .iter()
                .map(|&var| semantic_value(&f, &idx, var, p))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            check(
                v.windows(2).all(|x| x[0] <= x[1]),
                format!("{name} {}: {v:?}", u.concat()),
            )?;
            words += 1;
        }
    }
    Ok(format!("{words} words, p = 3m"))
}

fn oracle_spot_values() -> Outcome {
    let f = letter_count(&strings("ab"), &["a"]).unwrap();
    let u = [0usize; 4];
    let minus = semantic_value(&f, &u, Variant::Minus, 9).map_err(|e| e.to_string())?;
    let plus = semantic_value(&f, &u, Variant::Plus, 9).map_err(|e| e.to_string())?;
    check(
        minus == Cost::ZERO && plus == Cost::Finite(4),
        format!("- = {minus}, + = {plus}"),
    )?;
    // the same two values from explicit trees of height ≤ 3
    let m = &f.monoid;
    let w = f.image(&u).unwrap();
    let sets: Vec<ElemSet> = (0..=4).map(|n| enumerate(m, &w, n, 3, Mode::Exact)).collect();
    let ideal = f.ideal.members();
    let e_minus = (0..=4).find(|&n| !sets[n].is_subset(ideal)).map(|n| n as u64);
    let e_plus = (0..4)
        .rev()
        .find(|&n| sets[n].intersects(ideal))
        .map_or(0, |n| n as u64 + 1);
    check(
        !sets[4].intersects(ideal) && e_minus == Some(0) && e_plus == 4,
        format!("enumeration gives - = {e_minus:?}, + = {e_plus}"),
    )?;
    Ok("- = 0, + = 4 (DP and tree enumeration)".into())
}

fn domination_examples() -> Outcome {
    let ab = strings("ab");
    let ca = letter_count(&ab, &["a"]).unwrap();
    let cb = letter_count(&ab, &["b"]).unwrap();
    let size = size_recogniser(&ab).unwrap();
    check(decide_domination(&ca, &size).unwrap().holds, "|u|_a ≼ |u| refuted")?;
    let d = decide_domination(&ca, &cb).unwrap();
    check(!d.holds, "|u|_a ≼ |u|_b accepted")?;
    let Some(Witness::Expr(e)) = d.witness else {
        return Err("no witness expression".into());
    };
    let omega = omega_data(&costfn::recogniser::joint(&ca, &cb).unwrap().monoid).omega as usize;
    let words: Vec<Vec<String>> = (1..=4).map(|n| e.unfold(omega * n).unwrap()).collect();
    check(
        words.iter().all(|u| u.iter().all(|s| s == "a")),
        format!("{e} leaves a^*"),
    )?;
    let fa: Vec<u64> = words.iter().map(|u| count(u, "a")).collect();
    let gb: Vec<u64> = words.iter().map(|u| count(u, "b")).collect();
    check(fa.windows(2).all(|x| x[0] < x[1]), format!("|u|_a along {e}: {fa:?}"))?;
    check(gb.windows(2).all(|x| x[0] == x[1]), format!("|u|_b along {e}: {gb:?}"))?;
    Ok(format!("witness {e}, |u|_a = {fa:?}, |u|_b = {gb:?}"))
}

fn powerset_soundness() -> Outcome {
    let m = counta();
    let down = ideal_powerset(&m).map_err(|e| e.to_string())?;
    let up = coideal_powerset(&m).map_err(|e| e.to_string())?;
    for (name, p) in [("ideal", &down), ("co-ideal", &up)] {
        check(p.monoid.size() == 6, format!("{name}: {} elements", p.monoid.size()))?;
        let v = validate_axioms(&p.monoid);
        check(v.is_empty(), format!("{name}: {v:?}"))?;
    }
    Ok("6 ideals, 6 co-ideals, both valid".into())
}

/// min or max of |u|_a over the preimages of c^k under a,b ↦ c.
fn brute_projection(k: usize, inf: bool) -> u64 {
    let ab = strings("ab");
    let vals = all_words(&ab, k)
        .into_iter()
        .filter(|u| u.len() == k)
        .map(|u| count(&u, "a"));
    if inf {
        vals.min().unwrap()
    } else {
        vals.max().unwrap()
    }
}

fn projection_semantics() -> Outcome {
    let f = letter_count(&strings("ab"), &["a"]).unwrap();
    let z = parse_letter_map("a:c,b:c").unwrap();
    let inf = inf_project(&f, &z).map_err(|e| e.to_string())?;
    let sup = sup_project(&f, &z).map_err(|e| e.to_string())?;
    check(decide_boundedness(&inf).holds, "inf-projection unbounded")?;
    check(decide_divergence(&sup).unwrap().holds, "sup-projection not divergent")?;
    for (is_inf, p) in [(true, &inf), (false, &sup)] {
        let pp = 3 * p.monoid.size();
        for k in 0..=6 {
            let expected = Cost::Finite(brute_projection(k, is_inf));
            let got = semantic_value(p, &vec![0; k], Variant::Plus, pp).map_err(|e| e.to_string())?;
            check(
                got == expected,
                format!("inf={is_inf} on c^{k}: {got} vs brute force {expected}"),
            )?;
        }
    }
    Ok("inf bounded (0 on c^k), sup divergent (k on c^k), |v| ≤ 6".into())
}

fn logic_end_to_end() -> Outcome {
    let size = parse_formula("A X. cardle(X)").unwrap();
    let ab = strings("ab");
    for u in all_words(&ab, 6) {
        let v = evaluate(&size, &u, &Valuation::new()).map_err(|e| e.to_string())?;
        check(v == Cost::Finite(u.len() as u64), format!("{}: {v}", u.concat()))?;
    }
    let phi = parse_formula("A X. (cardle(X) | E Y. (sub(Y,X) & b(Y)))").unwrap();
    let compiled = compile(&phi, &ab).map_err(|e| e.to_string())?;
    let ca = letter_count(&ab, &["a"]).unwrap();
    let both = |f: &Recogniser, g: &Recogniser| decide_domination(f, g).unwrap().holds;
    check(
        both(&compiled, &ca) && both(&ca, &compiled),
        "compiled |u|_a and counta differ",
    )?;
    let bounded = decide_formula(Task::Bounded, &size, None, &strings("a")).map_err(|e| e.to_string())?;
    check(!bounded.holds, "size decided bounded")?;
    Ok(format!(
        "size = |u| on |u| ≤ 6; compiled |u|_a has {} elements",
        compiled.monoid.size()
    ))
}

fn validator_lemmas() -> Outcome {
    let mut values = 0;
    for m in [counta(), sega()] {
        let els: Vec<ElemId> = m.elements().collect();
        let idems: Vec<ElemId> = els.iter().copied().filter(|&e| m.is_idempotent(e)).collect();
        let mut words: Vec<Vec<ElemId>> = vec![vec![]];
        for len in 1..=8 {
            words = words
                .iter()
                .flat_map(|w| els.iter().map(move |&x| [w.clone(), vec![x]].concat()))
                .collect();
            for w in &words {
                for n in [0, 1, 2, 4, len] {
                    let over = achievable_values(&m, w, n, 3 * m.size(), Mode::Over).map_err(|e| e.to_string())?;
                    let pi = pi_eval(&m, w);
                    for v in over.iter() {
                        values += 1;
                        if len <= n {
                            check(m.leq(pi, v), format!("π floor: {w:?} n={n} value {}", m.name(v)))?;
                        }
                        for &e in &idems {
                            if w.iter().all(|&b| m.leq(e, b)) {
                                let s = m.sharp(e).unwrap();
                                check(m.leq(s, v), format!("e♯ floor: {w:?} n={n} e={}", m.name(e)))?;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{values} over-values checked"))
}

fn monotonicity_battery() -> Outcome {
    let mut r = rng(10);
    let total = 200;
    let mut failures = Vec::new();
    for i in 0..total {
        let m = random_monoid(&mut r, 6);
        let len = r.gen_range(1..=12);
        let w = random_word(&mut r, &m, len);
        let n = r.gen_range(0..6);
        let mode = if i % 2 == 0 { Mode::Under } else { Mode::Over };
        let mut t = relaxed(&mut r, &m, &w, n, mode);
        if validate_tree(&m, &t, &w, n, mode).is_err() {
            failures.push(format!("{i}: generator"));
            continue;
        }
        let shifted: Vec<usize> = match mode {
            Mode::Under => vec![n + 1, n + 3, usize::MAX],
            _ => (0..n).collect(),
        };
        let mut ok = shifted.iter().all(|&k| validate_tree(&m, &t, &w, k, mode).is_ok());
        let root = t.value;
        let relabels: Vec<ElemId> = m
            .elements()
            .filter(|&b| {
                if mode == Mode::Under {
                    m.leq(b, root)
                } else {
                    m.leq(root, b)
                }
            })
            .collect();
        for b in relabels {
            t.value = b;
            ok &= validate_tree(&m, &t, &w, n, mode).is_ok();
        }
        if !ok {
            failures.push(format!("{i}: {mode:?} n={n}"));
        }
    }
    check(failures.len() <= BATTERY_TOLERANCE, failures.join(", "))?;
    Ok(format!("{}/{total} re-validated", total - failures.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("axiom gate", axiom_gate),
        ("construction bound", construction_bound),
        ("four-function chain", four_function_chain),
        ("oracle spot values", oracle_spot_values),
        ("domination examples", domination_examples),
        ("powerset soundness", powerset_soundness),
        ("projection semantics", projection_semantics),
        ("logic end to end", logic_end_to_end),
        ("validator lemmas", validator_lemmas),
        ("monotonicity battery", monotonicity_battery),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
