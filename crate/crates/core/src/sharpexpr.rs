//! ♯-expressions: evaluation, unfolding, canonical computations and
//! ♯-closures with witnesses.

use std::collections::HashMap;
use std::fmt;

use crate::algebra::{ElemId, ElemSet, StabilisationMonoid};
use crate::computation::CompTree;
use crate::error::{Error, Result};
use crate::green::{idempotent_exponent, omega_data};

/// Letters, concatenation and the ω♯-exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SharpExpr<L = ElemId> {
    Letter(L),
    Concat(Box<SharpExpr<L>>, Box<SharpExpr<L>>),
    OmegaSharp(Box<SharpExpr<L>>),
}

impl<L: Clone> SharpExpr<L> {
    pub fn letter(l: L) -> Self {
        SharpExpr::Letter(l)
    }

    pub fn concat(a: SharpExpr<L>, b: SharpExpr<L>) -> Self {
        SharpExpr::Concat(Box::new(a), Box::new(b))
    }

    pub fn omega_sharp(a: SharpExpr<L>) -> Self {
        SharpExpr::OmegaSharp(Box::new(a))
    }

    /// At least one ω♯ node.
    pub fn is_strict(&self) -> bool {
        match self {
            SharpExpr::Letter(_) => false,
            SharpExpr::Concat(a, b) => a.is_strict() || b.is_strict(),
            SharpExpr::OmegaSharp(_) => true,
        }
    }

    pub fn map_letters<K: Clone>(&self, f: &impl Fn(&L) -> K) -> SharpExpr<K> {
        match self {
            SharpExpr::Letter(l) => SharpExpr::Letter(f(l)),
            SharpExpr::Concat(a, b) => SharpExpr::concat(a.map_letters(f), b.map_letters(f)),
            SharpExpr::OmegaSharp(a) => SharpExpr::omega_sharp(a.map_letters(f)),
        }
    }

    /// The n-unfolding: every ω♯ becomes n copies of its body.
    pub fn unfold(&self, n: usize) -> Result<Vec<L>> {
        if n == 0 {
            return Err(Error::InvalidArgument("unfolding needs n ≥ 1".into()));
        }
        let mut out = Vec::new();
        self.unfold_into(n, &mut out);
        Ok(out)
    }

    fn unfold_into(&self, n: usize, out: &mut Vec<L>) {
        match self {
            SharpExpr::Letter(l) => out.push(l.clone()),
            SharpExpr::Concat(a, b) => {
                a.unfold_into(n, out);
                b.unfold_into(n, out);
            }
            SharpExpr::OmegaSharp(a) => {
                let start = out.len();
                a.unfold_into(n, out);
                let body = out[start..].to_vec();
                for _ in 1..n {
                    out.extend_from_slice(&body);
                }
            }
        }
    }

    /// Length of the n-unfolding without building it.
    pub fn unfold_len(&self, n: u128) -> u128 {
        match self {
            SharpExpr::Letter(_) => 1,
            SharpExpr::Concat(a, b) => a.unfold_len(n).saturating_add(b.unfold_len(n)),
            SharpExpr::OmegaSharp(a) => a.unfold_len(n).saturating_mul(n),
        }
    }

    pub fn letters(&self) -> Vec<L> {
        let mut out = Vec::new();
        self.unfold_into(1, &mut out);
        out
    }
}

impl<L> SharpExpr<L> {
    /// Concatenations print by juxtaposition, ω♯ as `(…)#`.
    pub fn render(&self, letter: &impl Fn(&L) -> String) -> String {
        match self {
            SharpExpr::Letter(l) => letter(l),
            SharpExpr::Concat(a, b) => format!("{}{}", a.render(letter), b.render(letter)),
            SharpExpr::OmegaSharp(a) => format!("({})#", a.render(letter)),
        }
    }
}

/// Single-character symbols print bare, longer ones as `[name]`.
pub fn symbol_token(s: &str) -> String {
    if s.chars().count() == 1 && !"()[]#".contains(s) {
        s.to_string()
    } else {
        format!("[{s}]")
    }
}

impl fmt::Display for SharpExpr<String> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&|s: &String| symbol_token(s)))
    }
}

/// Parses the `b(a)#` syntax; each character is a letter unless bracketed.
pub fn parse_expr(src: &str) -> Result<SharpExpr<String>> {
    let chars: Vec<char> = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut pos = 0;
    let e = parse_seq(&chars, &mut pos)?;
    if pos != chars.len() {
        return Err(Error::InvalidArgument(format!(
            "unexpected `{}` in expression",
            chars[pos]
        )));
    }
    e.ok_or_else(|| Error::InvalidArgument("empty expression".into()))
}

fn parse_seq(chars: &[char], pos: &mut usize) -> Result<Option<SharpExpr<String>>> {
    let mut acc: Option<SharpExpr<String>> = None;
    while *pos < chars.len() && chars[*pos] != ')' {
        let item = match chars[*pos] {
            '(' => {
                *pos += 1;
                let inner = parse_seq(chars, pos)?.ok_or_else(|| Error::InvalidArgument("empty parentheses".into()))?;
                if chars.get(*pos) != Some(&')') {
                    return Err(Error::InvalidArgument("unbalanced parentheses".into()));
                }
                *pos += 1;
                if chars.get(*pos) == Some(&'#') {
                    *pos += 1;
                    SharpExpr::omega_sharp(inner)
                } else {
                    inner
                }
            }
            '[' => {
                let end = chars[*pos..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or_else(|| Error::InvalidArgument("unterminated `[`".into()))?;
                let name: String = chars[*pos + 1..*pos + end].iter().collect();
                if name.is_empty() {
                    return Err(Error::InvalidArgument("empty `[]`".into()));
                }
                *pos += end + 1;
                SharpExpr::Letter(name)
            }
            '#' | ']' => {
                return Err(Error::InvalidArgument(format!("unexpected `{}`", chars[*pos])));
            }
            c => {
                *pos += 1;
                SharpExpr::Letter(c.to_string())
            }
        };
        acc = Some(match acc {
            None => item,
            Some(prev) => SharpExpr::concat(prev, item),
        });
    }
    Ok(acc)
}

/// Letter ↦ itself, concatenation ↦ product, ω♯ ↦ (x^Ω)♯.
pub fn value(m: &StabilisationMonoid, e: &SharpExpr) -> ElemId {
    match e {
        SharpExpr::Letter(x) => *x,
        SharpExpr::Concat(a, b) => m.mul(value(m, a), value(m, b)),
        SharpExpr::OmegaSharp(a) => {
            let (_, pow) = idempotent_exponent(m, value(m, a));
            m.sharp(pow).expect("sharp of idempotent")
        }
    }
}

fn omega_usize(m: &StabilisationMonoid) -> Result<usize> {
    usize::try_from(omega_data(m).omega).map_err(|_| Error::InvalidArgument("Ω does not fit in memory".into()))
}

/// The word unf(E, Ω·(n+1)) over which [`canonical_computation`] runs.
pub fn canonical_word(m: &StabilisationMonoid, e: &SharpExpr, n: usize) -> Result<Vec<ElemId>> {
    let k = omega_usize(m)?
        .checked_mul(n + 1)
        .ok_or_else(|| Error::InvalidArgument("unfolding too long".into()))?;
    e.unfold(k)
}

/// An n-computation of value `value(E)` for [`canonical_word`]: ω♯ nodes
/// become stabilisation nodes with n + 1 children, each a left comb of Ω
/// copies of the body.
pub fn canonical_computation(m: &StabilisationMonoid, e: &SharpExpr, n: usize) -> Result<CompTree> {
    if n == 0 {
        return Err(Error::InvalidArgument("canonical computations need n ≥ 1".into()));
    }
    let omega = omega_usize(m)?;
    fn comp(m: &StabilisationMonoid, e: &SharpExpr, n: usize, omega: usize) -> CompTree {
        match e {
            SharpExpr::Letter(x) => CompTree::leaf(*x),
            SharpExpr::Concat(a, b) => {
                let (l, r) = (comp(m, a, n, omega), comp(m, b, n, omega));
                CompTree::node(m.mul(l.value, r.value), vec![l, r])
            }
            SharpExpr::OmegaSharp(a) => {
                let body = comp(m, a, n, omega);
                let mut pow = body.clone();
                for _ in 1..omega {
                    pow = CompTree::node(m.mul(pow.value, body.value), vec![pow, body.clone()]);
                }
                let s = m.sharp(pow.value).expect("x^Ω is idempotent");
                CompTree::node(s, vec![pow; n + 1])
            }
        }
    }
    Ok(comp(m, e, n, omega))
}

/// ⟨A⟩♯ and its strict part ⟨A⟩♯⁺, with one witness per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureResult {
    pub closure: ElemSet,
    pub strict: ElemSet,
    /// Elements of the closure in the order they were first derived.
    pub order: Vec<ElemId>,
    witness: Vec<Option<SharpExpr>>,
}

impl ClosureResult {
    pub fn witness(&self, x: ElemId) -> Option<&SharpExpr> {
        self.witness.get(x.index()).and_then(Option::as_ref)
    }
}

enum Step {
    Letter(ElemId),
    Concat(usize, usize),
    Sharp(usize),
}

/// Least fixpoint of A under product and ♯ of idempotents, over pairs
/// (element, whether a ♯ was used).
///
/// Pairs are processed in discovery order; each new pair is combined with
/// all earlier ones on both sides, then ♯ is applied if it is idempotent.
pub fn sharp_closure(m: &StabilisationMonoid, a: ElemSet) -> ClosureResult {
    let mut pairs: Vec<(ElemId, bool)> = Vec::new();
    let mut steps: Vec<Step> = Vec::new();
    let mut seen: HashMap<(ElemId, bool), usize> = HashMap::new();
    let mut add = |p: (ElemId, bool), s: Step, pairs: &mut Vec<(ElemId, bool)>, steps: &mut Vec<Step>| {
        if let std::collections::hash_map::Entry::Vacant(v) = seen.entry(p) {
            v.insert(pairs.len());
            pairs.push(p);
            steps.push(s);
        }
    };
    for x in a.iter() {
        add((x, false), Step::Letter(x), &mut pairs, &mut steps);
    }
    let mut i = 0;
    while i < pairs.len() {
        for j in 0..=i {
            let ((x, f), (y, g)) = (pairs[i], pairs[j]);
            add((m.mul(x, y), f || g), Step::Concat(i, j), &mut pairs, &mut steps);
            add((m.mul(y, x), f || g), Step::Concat(j, i), &mut pairs, &mut steps);
        }
        let (x, _) = pairs[i];
        if m.is_idempotent(x) {
            let s = m.sharp(x).expect("sharp of idempotent");
            add((s, true), Step::Sharp(i), &mut pairs, &mut steps);
        }
        i += 1;
    }
    fn build(steps: &[Step], i: usize) -> SharpExpr {
        match steps[i] {
            Step::Letter(x) => SharpExpr::Letter(x),
            Step::Concat(a, b) => SharpExpr::concat(build(steps, a), build(steps, b)),
            Step::Sharp(a) => SharpExpr::omega_sharp(build(steps, a)),
        }
    }
    let mut closure = ElemSet::EMPTY;
    let mut strict = ElemSet::EMPTY;
    let mut order = Vec::new();
    let mut witness = vec![None; m.size()];
    for (k, &(x, flag)) in pairs.iter().enumerate() {
        if flag {
            strict.insert(x);
        }
        if closure.insert(x) {
            order.push(x);
            witness[x.index()] = Some(build(&steps, k));
        }
    }
    ClosureResult {
        closure,
        strict,
        order,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::computation::{validate_tree, Mode};

    fn counta() -> StabilisationMonoid {
        StabilisationMonoid::from_names(
            &["b", "a", "0"],
            "b",
            &[&["b", "a", "0"], &["a", "a", "0"], &["0", "0", "0"]],
            &[("0", "a")],
            &[("b", "b"), ("a", "0"), ("0", "0")],
        )
        .unwrap()
    }

    const B: ElemId = ElemId(0);
    const A: ElemId = ElemId(1);
    const Z: ElemId = ElemId(2);

    #[test]
    fn values() {
        let m = counta();
        assert_eq!(value(&m, &SharpExpr::omega_sharp(SharpExpr::Letter(A))), Z);
        assert_eq!(
            value(&m, &SharpExpr::concat(SharpExpr::Letter(B), SharpExpr::Letter(B))),
            B
        );
        assert_eq!(value(&m, &SharpExpr::omega_sharp(SharpExpr::Letter(B))), B);
    }

    #[test]
    fn unfolding() {
        let e = parse_expr("b(a)#").unwrap();
        assert_eq!(e.unfold(2).unwrap().concat(), "baa");
        assert_eq!(parse_expr("(a)#").unwrap().unfold(3).unwrap().concat(), "aaa");
        assert!(e.unfold(0).is_err());
        assert_eq!(e.to_string(), "b(a)#");
    }

    #[test]
    fn bracketed_symbols_roundtrip() {
        let e = parse_expr("[a:10]([b:01]c)#").unwrap();
        assert_eq!(e.to_string(), "[a:10]([b:01]c)#");
        assert_eq!(e.unfold(2).unwrap(), vec!["a:10", "b:01", "c", "b:01", "c"]);
    }

    #[test]
    fn canonical_on_counta() {
        let m = counta();
        let e = SharpExpr::omega_sharp(SharpExpr::Letter(A));
        let t = canonical_computation(&m, &e, 2).unwrap();
        assert_eq!(t, CompTree::node(Z, vec![CompTree::leaf(A); 3]));
        let w = canonical_word(&m, &e, 2).unwrap();
        assert!(validate_tree(&m, &t, &w, 2, Mode::Exact).is_ok());
    }

    #[test]
    fn closure_counta() {
        let m = counta();
        let c = sharp_closure(&m, ElemSet::singleton(A).with(B));
        assert_eq!(c.closure, m.all());
        // a·(b)♯ is strict with value a, and b♯ = b.
        assert_eq!(c.strict, m.all());
        assert_eq!(
            c.witness(Z).unwrap().render(&|x: &ElemId| m.name(*x).to_string()),
            "(a)#"
        );
        let c = sharp_closure(&m, ElemSet::singleton(B));
        assert_eq!(c.closure, ElemSet::singleton(B));
        assert_eq!(c.strict, ElemSet::singleton(B));
        assert!(sharp_closure(&m, ElemSet::EMPTY).closure.is_empty());
    }
}
