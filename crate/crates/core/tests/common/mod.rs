#![allow(dead_code)]

use std::collections::HashMap;

use costfn::algebra::{generate, PairCarrier};
use costfn::catalogue::{counta, sega};
use costfn::computation::{construct, validate_tree};
use costfn::costmso::{transition_monoid, Dfa, ExtendedAlphabet};
use costfn::projection::{PowersetCarrier, PowersetKind};
use costfn::{CompTree, ElemId, ElemSet, Mode, SharpExpr, StabilisationMonoid};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn strings(s: &str) -> Vec<String> {
    s.chars().map(String::from).collect()
}

/// Z/2 with the trivial order.
pub fn flip() -> StabilisationMonoid {
    StabilisationMonoid::from_names(&["1", "g"], "1", &[&["1", "g"], &["g", "1"]], &[], &[("1", "1")]).unwrap()
}

/// {1, 0} with 0 ≤ 1.
pub fn u1() -> StabilisationMonoid {
    StabilisationMonoid::from_names(
        &["1", "0"],
        "1",
        &[&["1", "0"], &["0", "0"]],
        &[("0", "1")],
        &[("1", "1"), ("0", "0")],
    )
    .unwrap()
}

/// Left-zero band with a unit, trivially ordered.
pub fn band() -> StabilisationMonoid {
    StabilisationMonoid::from_names(
        &["1", "x", "y"],
        "1",
        &[&["1", "x", "y"], &["x", "x", "x"], &["y", "y", "y"]],
        &[],
        &[("1", "1"), ("x", "x"), ("y", "y")],
    )
    .unwrap()
}

pub fn named_monoids() -> Vec<(&'static str, StabilisationMonoid)> {
    vec![
        ("counta", counta()),
        ("sega", sega()),
        ("flip", flip()),
        ("u1", u1()),
        ("band", band()),
    ]
}

fn random_elems(rng: &mut ChaCha8Rng, m: &StabilisationMonoid, k: usize) -> Vec<ElemId> {
    (0..k).map(|_| ElemId::new(rng.gen_range(0..m.size()))).collect()
}

fn random_dfa_monoid(rng: &mut ChaCha8Rng) -> StabilisationMonoid {
    let states = rng.gen_range(1..=3);
    let alphabet = ExtendedAlphabet::new(&strings("ab"), []);
    let delta = (0..states)
        .map(|_| (0..2).map(|_| rng.gen_range(0..states)).collect())
        .collect();
    let d = Dfa {
        alphabet,
        states,
        initial: 0,
        accepting: (0..states).map(|_| rng.gen_bool(0.5)).collect(),
        delta,
    };
    transition_monoid(&d).unwrap().0
}

/// A valid stabilisation monoid with at most `max` elements: a sub-monoid
/// of a product of small monoids, of a powerset monoid, or a transition
/// monoid.
pub fn random_monoid(rng: &mut ChaCha8Rng, max: usize) -> StabilisationMonoid {
    let bases = named_monoids();
    loop {
        let m = match rng.gen_range(0..4) {
            0 => bases.choose(rng).unwrap().1.clone(),
            1 => {
                let l = &bases.choose(rng).unwrap().1;
                let r = &bases.choose(rng).unwrap().1;
                let k = rng.gen_range(1..=3);
                let gens: Vec<_> = random_elems(rng, l, k)
                    .into_iter()
                    .zip(random_elems(rng, r, k))
                    .collect();
                match generate(&PairCarrier { left: l, right: r }, &gens, "random pair monoid") {
                    Ok(g) => g.monoid,
                    Err(_) => continue,
                }
            }
            2 => {
                let base = if rng.gen_bool(0.5) { counta() } else { sega() };
                let kind = if rng.gen_bool(0.5) {
                    PowersetKind::Ideal
                } else {
                    PowersetKind::CoIdeal
                };
                let c = PowersetCarrier { base: &base, kind };
                let gens: Vec<ElemSet> = (0..rng.gen_range(1..=2))
                    .map(|_| c.close(ElemSet::from_bits(rng.gen_range(0..1u64 << base.size()))))
                    .collect();
                match generate(&c, &gens, "random powerset monoid") {
                    Ok(g) => g.monoid,
                    Err(_) => continue,
                }
            }
            _ => random_dfa_monoid(rng),
        };
        if m.size() <= max {
            return m;
        }
    }
}

pub fn random_word(rng: &mut ChaCha8Rng, m: &StabilisationMonoid, len: usize) -> Vec<ElemId> {
    random_elems(rng, m, len)
}

/// Every word over `alphabet` of length at most `max`, shortest first.
pub fn all_words(alphabet: &[String], max: usize) -> Vec<Vec<String>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for a in alphabet {
                let mut v: Vec<String> = w.clone();
                v.push(a.clone());
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

// Direct definitions of the example cost functions.

pub fn count(u: &[String], letter: &str) -> u64 {
    u.iter().filter(|s| *s == letter).count() as u64
}

pub fn longest_run(u: &[String], letter: &str) -> u64 {
    let (mut best, mut cur) = (0, 0);
    for s in u {
        cur = if s == letter { cur + 1 } else { 0 };
        best = best.max(cur);
    }
    best
}

/// ♯-expressions over `alphabet` with at most `depth` nested constructors
/// (concatenations only pair expressions of lower depth).
pub fn sharp_exprs(alphabet: &[String], depth: usize) -> Vec<SharpExpr<String>> {
    let mut all: Vec<SharpExpr<String>> = alphabet.iter().cloned().map(SharpExpr::letter).collect();
    for _ in 0..depth {
        let prev = all.clone();
        for e in &prev {
            all.push(SharpExpr::omega_sharp(e.clone()));
            for f in &prev {
                all.push(SharpExpr::concat(e.clone(), f.clone()));
            }
        }
        all.sort_by_key(|e| e.to_string());
        all.dedup();
    }
    all
}

/// Unfoldings sampled by `grows`. They start past the longest constant
/// block a depth-3 expression can contain.
pub const SAMPLES: std::ops::RangeInclusive<usize> = 9..=12;

/// Some(true) when `f` strictly increases along unf(E, n) for n in SAMPLES,
/// Some(false) when it is constant there, None otherwise.
pub fn grows(f: &dyn Fn(&[String]) -> u64, e: &SharpExpr<String>) -> Option<bool> {
    let words: Vec<Vec<String>> = SAMPLES.map(|n| e.unfold(n).unwrap()).collect();
    grows_on(f, &words)
}

pub fn grows_on(f: &dyn Fn(&[String]) -> u64, words: &[Vec<String>]) -> Option<bool> {
    let v: Vec<u64> = words.iter().map(|w| f(w)).collect();
    if v.windows(2).all(|w| w[0] < w[1]) {
        Some(true)
    } else if v.windows(2).all(|w| w[0] == w[1]) {
        Some(false)
    } else {
        None
    }
}

/// Values of all mode-computations of height ≤ h over w[i..j], by listing
/// every sequence of children explicitly.
struct Enumerator<'a> {
    m: &'a StabilisationMonoid,
    w: &'a [ElemId],
    n: usize,
    mode: Mode,
    memo: HashMap<(usize, usize, usize), ElemSet>,
}

impl Enumerator<'_> {
    fn relax(&self, target: ElemId) -> ElemSet {
        self.m
            .elements()
            .filter(|&v| self.mode.holds(self.m, v, target))
            .collect()
    }

    fn node_targets(&self, kids: &[ElemId]) -> Vec<ElemId> {
        let m = self.m;
        let k = kids.len();
        let mut out = Vec::new();
        if k == 2 {
            out.push(m.mul(kids[0], kids[1]));
        }
        let e = kids[0];
        if kids.iter().all(|&c| c == e) && m.mul(e, e) == e {
            if k >= 2 && k <= self.n {
                out.push(e);
            }
            if k > self.n {
                out.push(m.sharp(e).unwrap());
            }
        }
        out
    }

    fn values(&mut self, i: usize, j: usize, h: usize) -> ElemSet {
        if let Some(&v) = self.memo.get(&(i, j, h)) {
            return v;
        }
        let mut out = if j == i + 1 {
            self.relax(self.w[i])
        } else {
            ElemSet::EMPTY
        };
        if h > 0 {
            // every composition of w[i..j] into consecutive factors
            let len = j - i;
            for cuts in 0..1u32 << (len - 1) {
                let mut bounds = vec![i];
                bounds.extend((1..len).filter(|c| cuts >> (c - 1) & 1 == 1).map(|c| i + c));
                bounds.push(j);
                let sets: Vec<ElemSet> = bounds.windows(2).map(|b| self.values(b[0], b[1], h - 1)).collect();
                let mut tuple = Vec::new();
                self.tuples(&sets, &mut tuple, &mut out);
            }
        }
        self.memo.insert((i, j, h), out);
        out
    }

    fn tuples(&self, sets: &[ElemSet], tuple: &mut Vec<ElemId>, out: &mut ElemSet) {
        if tuple.len() == sets.len() {
            for t in self.node_targets(tuple) {
                *out = out.union(self.relax(t));
            }
            return;
        }
        for v in sets[tuple.len()].iter() {
            tuple.push(v);
            self.tuples(sets, tuple, out);
            tuple.pop();
        }
    }
}

pub fn enumerate(m: &StabilisationMonoid, w: &[ElemId], n: usize, h: usize, mode: Mode) -> ElemSet {
    Enumerator {
        m,
        w,
        n,
        mode,
        memo: HashMap::new(),
    }
    .values(0, w.len(), h)
}

/// Random under- or over-computation: a constructed computation whose
/// labels are relaxed one node at a time, keeping only valid steps.
pub fn relaxed(r: &mut impl Rng, m: &StabilisationMonoid, w: &[ElemId], n: usize, mode: Mode) -> CompTree {
    let mut t = construct(m, w, n).unwrap();
    for _ in 0..20 {
        let mut paths = Vec::new();
        collect_paths(&t, &mut Vec::new(), &mut paths);
        let p = paths[r.gen_range(0..paths.len())].clone();
        let old = node_mut(&mut t, &p).value;
        let v = ElemId::new(r.gen_range(0..m.size()));
        node_mut(&mut t, &p).value = v;
        if validate_tree(m, &t, w, n, mode).is_err() {
            node_mut(&mut t, &p).value = old;
        }
    }
    t
}

pub fn collect_paths(t: &CompTree, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(path.clone());
    for (i, c) in t.children.iter().enumerate() {
        path.push(i);
        collect_paths(c, path, out);
        path.pop();
    }
}

pub fn node_mut<'a>(t: &'a mut CompTree, path: &[usize]) -> &'a mut CompTree {
    path.iter().fold(t, |t, &i| &mut t.children[i])
}
