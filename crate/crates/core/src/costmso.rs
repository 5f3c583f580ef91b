//! Cost monadic logic: formulas, brute-force semantics, and compilation to
//! recognisers through atom automata and the closure operations.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::algebra::{ElemId, ElemSet, StabilisationMonoid, MAX_ELEMENTS};
use crate::catalogue::counta;
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::projection::{inf_project, sup_project};
use crate::recogniser::{
    decide_boundedness, decide_divergence, decide_domination, max_rec, min_rec, precompose, Decision, Recogniser,
};

/// Longest word `evaluate` accepts by default.
pub const EVAL_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Atom {
    /// `a(X)`: X is a single position carrying letter a.
    Letter(String, String),
    /// `le(X,Y)`: X and Y are single positions, X's not after Y's.
    Le(String, String),
    /// `sub(X,Y)`: X ⊆ Y.
    Subset(String, String),
}

impl Atom {
    pub fn vars(&self) -> Vec<&str> {
        match self {
            Atom::Letter(_, x) => vec![x],
            Atom::Le(x, y) | Atom::Subset(x, y) => vec![x, y],
        }
    }

    fn holds(&self, u: &[String], val: &impl Fn(&str) -> Result<u64>) -> Result<bool> {
        let single = |s: u64| (s.count_ones() == 1).then(|| s.trailing_zeros() as usize);
        Ok(match self {
            Atom::Letter(a, x) => single(val(x)?).is_some_and(|p| u[p] == *a),
            Atom::Le(x, y) => match (single(val(x)?), single(val(y)?)) {
                (Some(p), Some(q)) => p <= q,
                _ => false,
            },
            Atom::Subset(x, y) => val(x)? & !val(y)? == 0,
        })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Letter(a, x) => write!(f, "{a}({x})"),
            Atom::Le(x, y) => write!(f, "le({x},{y})"),
            Atom::Subset(x, y) => write!(f, "sub({x},{y})"),
        }
    }
}

/// Formulas in negation normal form; `|X| ≤ N` only occurs positively.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CostFormula {
    Atom { atom: Atom, negated: bool },
    CardLe(String),
    And(Box<CostFormula>, Box<CostFormula>),
    Or(Box<CostFormula>, Box<CostFormula>),
    Exists(String, Box<CostFormula>),
    Forall(String, Box<CostFormula>),
}

impl CostFormula {
    pub fn atom(atom: Atom) -> Self {
        CostFormula::Atom { atom, negated: false }
    }

    pub fn not(atom: Atom) -> Self {
        CostFormula::Atom { atom, negated: true }
    }

    pub fn and(a: CostFormula, b: CostFormula) -> Self {
        CostFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: CostFormula, b: CostFormula) -> Self {
        CostFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, a: CostFormula) -> Self {
        CostFormula::Exists(x.to_string(), Box::new(a))
    }

    pub fn forall(x: &str, a: CostFormula) -> Self {
        CostFormula::Forall(x.to_string(), Box::new(a))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        match self {
            CostFormula::Atom { atom, .. } => atom.vars().into_iter().map(String::from).collect(),
            CostFormula::CardLe(x) => BTreeSet::from([x.clone()]),
            CostFormula::And(a, b) | CostFormula::Or(a, b) => {
                let mut s = a.free_vars();
                s.extend(b.free_vars());
                s
            }
            CostFormula::Exists(x, a) | CostFormula::Forall(x, a) => {
                let mut s = a.free_vars();
                s.remove(x);
                s
            }
        }
    }

    /// Letters mentioned by `a(X)` atoms.
    pub fn letters(&self) -> BTreeSet<String> {
        match self {
            CostFormula::Atom {
                atom: Atom::Letter(a, _),
                ..
            } => BTreeSet::from([a.clone()]),
            CostFormula::Atom { .. } | CostFormula::CardLe(_) => BTreeSet::new(),
            CostFormula::And(a, b) | CostFormula::Or(a, b) => {
                let mut s = a.letters();
                s.extend(b.letters());
                s
            }
            CostFormula::Exists(_, a) | CostFormula::Forall(_, a) => a.letters(),
        }
    }
}

impl fmt::Display for CostFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn inner(p: &CostFormula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match p {
                CostFormula::Atom { .. } | CostFormula::CardLe(_) => write!(f, "{p}"),
                _ => write!(f, "({p})"),
            }
        }
        match self {
            CostFormula::Atom { atom, negated } => write!(f, "{}{atom}", if *negated { "!" } else { "" }),
            CostFormula::CardLe(x) => write!(f, "cardle({x})"),
            CostFormula::And(a, b) => {
                inner(a, f)?;
                f.write_str(" & ")?;
                inner(b, f)
            }
            CostFormula::Or(a, b) => {
                inner(a, f)?;
                f.write_str(" | ")?;
                inner(b, f)
            }
            CostFormula::Exists(x, a) => write!(f, "E {x}. {a}"),
            CostFormula::Forall(x, a) => write!(f, "A {x}. {a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Bar,
    Dot,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = src.char_indices().peekable();
    while let Some((i, c)) = it.next() {
        let t = match c {
            c if c.is_whitespace() => continue,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '.' => Tok::Dot,
            c if c.is_alphanumeric() || c == '_' => {
                let mut s = c.to_string();
                while let Some(&(_, d)) = it.peek() {
                    if d.is_alphanumeric() || d == '_' {
                        s.push(d);
                        it.next();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => return Err(parse_err(i, format!("unexpected character `{other}`"))),
        };
        out.push((i, t));
    }
    Ok(out)
}

fn parse_err(pos: usize, msg: String) -> Error {
    Error::Parse {
        line: 1,
        msg: format!("column {}: {msg}", pos + 1),
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.pos + 1).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(i, _)| *i)
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(parse_err(self.here(), format!("expected {t:?}")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().cloned() {
            Some(Tok::Ident(s)) => {
                self.pos += 1;
                Ok(s)
            }
            _ => Err(parse_err(self.here(), "expected a name".into())),
        }
    }

    fn formula(&mut self) -> Result<CostFormula> {
        let mut lhs = self.conj()?;
        while self.peek() == Some(&Tok::Bar) {
            self.pos += 1;
            lhs = CostFormula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<CostFormula> {
        let mut lhs = self.primary()?;
        while self.peek() == Some(&Tok::Amp) {
            self.pos += 1;
            lhs = CostFormula::and(lhs, self.primary()?);
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<CostFormula> {
        match (self.peek().cloned(), self.peek2()) {
            (Some(Tok::Ident(q)), Some(Tok::Ident(_))) if q == "E" || q == "A" => {
                self.pos += 1;
                let x = self.ident()?;
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if q == "E" {
                    CostFormula::Exists(x, Box::new(body))
                } else {
                    CostFormula::Forall(x, Box::new(body))
                })
            }
            (Some(Tok::LParen), _) => {
                self.pos += 1;
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            (Some(Tok::Bang), _) => {
                self.pos += 1;
                let at = self.here();
                match self.atom()? {
                    CostFormula::Atom { atom, .. } => Ok(CostFormula::not(atom)),
                    _ => Err(parse_err(
                        at,
                        "negation applies only to a(X), le(X,Y) and sub(X,Y)".into(),
                    )),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<CostFormula> {
        let name = self.ident()?;
        self.expect(Tok::LParen)?;
        let x = self.ident()?;
        let two = |p: &mut Parser| -> Result<String> {
            p.expect(Tok::Comma)?;
            p.ident()
        };
        let f = match name.as_str() {
            "le" => CostFormula::atom(Atom::Le(x, two(self)?)),
            "sub" => CostFormula::atom(Atom::Subset(x, two(self)?)),
            "cardle" => CostFormula::CardLe(x),
            _ => CostFormula::atom(Atom::Letter(name, x)),
        };
        self.expect(Tok::RParen)?;
        Ok(f)
    }
}

/// Parses `a(X)`, `le(X,Y)`, `sub(X,Y)`, `!atom`, `cardle(X)`, `&`, `|`,
/// `E X.`, `A X.` and parentheses. `&` binds tighter than `|`; a quantifier
/// extends as far right as possible.
pub fn parse_formula(src: &str) -> Result<CostFormula> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
        end: src.len(),
    };
    let f = p.formula()?;
    if p.pos != p.toks.len() {
        return Err(parse_err(p.here(), "trailing input".into()));
    }
    Ok(f)
}

/// Free variable valuation: variable name to 0-based positions.
pub type Valuation = BTreeMap<String, BTreeSet<usize>>;

/// Value of φ on u by brute force over all subsets of positions.
pub fn evaluate(phi: &CostFormula, u: &[String], valuation: &Valuation) -> Result<Cost> {
    evaluate_with_limit(phi, u, valuation, EVAL_LIMIT)
}

pub fn evaluate_with_limit(phi: &CostFormula, u: &[String], valuation: &Valuation, limit: usize) -> Result<Cost> {
    if u.len() > limit.min(63) {
        return Err(Error::OracleScope {
            len: u.len(),
            limit: limit.min(63),
        });
    }
    let mut env: HashMap<String, u64> = HashMap::new();
    for (x, ps) in valuation {
        let mut bits = 0u64;
        for &p in ps {
            if p >= u.len() {
                return Err(Error::InvalidArgument(format!(
                    "position {} of {x} outside a word of length {}",
                    p + 1,
                    u.len()
                )));
            }
            bits |= 1 << p;
        }
        env.insert(x.clone(), bits);
    }
    if let Some(x) = phi.free_vars().into_iter().find(|x| !env.contains_key(x)) {
        return Err(Error::UnknownVariable(x));
    }
    eval(phi, u, &mut env)
}

fn eval(phi: &CostFormula, u: &[String], env: &mut HashMap<String, u64>) -> Result<Cost> {
    let zero_or_inf = |b: bool| if b { Cost::ZERO } else { Cost::Infinite };
    Ok(match phi {
        CostFormula::Atom { atom, negated } => {
            let val = |x: &str| env.get(x).copied().ok_or_else(|| Error::UnknownVariable(x.to_string()));
            zero_or_inf(atom.holds(u, &val)? != *negated)
        }
        CostFormula::CardLe(x) => {
            let s = env.get(x).ok_or_else(|| Error::UnknownVariable(x.clone()))?;
            Cost::Finite(s.count_ones() as u64)
        }
        CostFormula::And(a, b) => eval(a, u, env)?.max(eval(b, u, env)?),
        CostFormula::Or(a, b) => eval(a, u, env)?.min(eval(b, u, env)?),
        CostFormula::Exists(x, a) | CostFormula::Forall(x, a) => {
            let inf = matches!(phi, CostFormula::Exists(..));
            let saved = env.get(x).copied();
            let mut acc = if inf { Cost::Infinite } else { Cost::ZERO };
            for s in 0..1u64 << u.len() {
                env.insert(x.clone(), s);
                let v = eval(a, u, env)?;
                acc = if inf { acc.min(v) } else { acc.max(v) };
            }
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            acc
        }
    })
}

/// Σ × {0,1}^F with F in sorted order. Symbols are `a` when F is empty,
/// otherwise `a:` followed by one bit per variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtendedAlphabet {
    base: Vec<String>,
    vars: Vec<String>,
}

impl ExtendedAlphabet {
    pub fn new(base: &[String], vars: impl IntoIterator<Item = String>) -> Self {
        let vars: BTreeSet<String> = vars.into_iter().collect();
        ExtendedAlphabet {
            base: base.to_vec(),
            vars: vars.into_iter().collect(),
        }
    }

    pub fn base(&self) -> &[String] {
        &self.base
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.base.len() << self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty()
    }

    pub fn var_index(&self, x: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == x)
    }

    /// Symbol index → (letter index, mask with bit i for variable i).
    pub fn decode(&self, s: usize) -> (usize, u32) {
        let k = self.vars.len();
        let code = s & ((1 << k) - 1);
        let mask = (0..k)
            .filter(|&i| code >> (k - 1 - i) & 1 == 1)
            .fold(0, |m, i| m | 1 << i);
        (s >> k, mask)
    }

    pub fn encode(&self, letter: usize, mask: u32) -> usize {
        let k = self.vars.len();
        let code = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(0, |c, i| c | 1 << (k - 1 - i));
        letter << k | code
    }

    pub fn symbol_name(&self, s: usize) -> String {
        let (a, mask) = self.decode(s);
        if self.vars.is_empty() {
            return self.base[a].clone();
        }
        let bits: String = (0..self.vars.len())
            .map(|i| if mask >> i & 1 == 1 { '1' } else { '0' })
            .collect();
        format!("{}:{bits}", self.base[a])
    }

    pub fn symbols(&self) -> Vec<String> {
        (0..self.len()).map(|s| self.symbol_name(s)).collect()
    }

    /// Letter map from this alphabet onto `sub`, forgetting the variables
    /// missing from `sub`. Pairs are (symbol here, symbol in `sub`).
    pub fn restriction(&self, sub: &ExtendedAlphabet) -> Result<Vec<(String, String)>> {
        if sub.base != self.base {
            return Err(Error::AlphabetMismatch("different base alphabets".into()));
        }
        let pos = sub
            .vars
            .iter()
            .map(|x| self.var_index(x).ok_or_else(|| Error::UnknownVariable(x.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok((0..self.len())
            .map(|s| {
                let (a, mask) = self.decode(s);
                let sub_mask = pos
                    .iter()
                    .enumerate()
                    .filter(|&(_, &p)| mask >> p & 1 == 1)
                    .fold(0, |m, (i, _)| m | 1 << i);
                (self.symbol_name(s), sub.symbol_name(sub.encode(a, sub_mask)))
            })
            .collect())
    }
}

/// Complete deterministic automaton over an extended alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: ExtendedAlphabet,
    pub states: usize,
    pub initial: usize,
    pub accepting: Vec<bool>,
    /// `delta[q][s]`
    pub delta: Vec<Vec<usize>>,
}

impl Dfa {
    pub fn run(&self, word: &[usize]) -> usize {
        word.iter().fold(self.initial, |q, &s| self.delta[q][s])
    }

    pub fn accepts(&self, word: &[usize]) -> bool {
        self.accepting[self.run(word)]
    }

    pub fn complement(mut self) -> Self {
        for a in &mut self.accepting {
            *a = !*a;
        }
        self
    }
}

/// Automaton for an atom (complemented when negated) over `alphabet`.
pub fn atom_dfa(atom: &Atom, negated: bool, alphabet: &ExtendedAlphabet) -> Result<Dfa> {
    let bit = |x: &str| {
        alphabet
            .var_index(x)
            .ok_or_else(|| Error::UnknownVariable(x.to_string()))
    };
    let n = alphabet.len();
    let table = |states: usize, step: &dyn Fn(usize, usize, u32) -> usize| -> Vec<Vec<usize>> {
        (0..states)
            .map(|q| {
                (0..n)
                    .map(|s| {
                        let (a, mask) = alphabet.decode(s);
                        step(q, a, mask)
                    })
                    .collect()
            })
            .collect()
    };
    let (delta, accepting) = match atom {
        Atom::Letter(a, x) => {
            let want = alphabet
                .base()
                .iter()
                .position(|s| s == a)
                .ok_or_else(|| Error::UnknownSymbol(a.clone()))?;
            let xi = bit(x)?;
            // 0: nothing marked, 1: one marked a, 2: sink
            let d = table(3, &|q, l, m| match (q, m >> xi & 1 == 1) {
                (q, false) => q,
                (0, true) if l == want => 1,
                _ => 2,
            });
            (d, vec![false, true, false])
        }
        Atom::Le(x, y) => {
            let (xi, yi) = (bit(x)?, bit(y)?);
            // 0: none, 1: X seen, 2: X then Y seen, 3: sink
            let d = table(4, &|q, _, m| match (q, m >> xi & 1 == 1, m >> yi & 1 == 1) {
                (q, false, false) => q,
                (0, true, false) => 1,
                (0, true, true) | (1, false, true) => 2,
                _ => 3,
            });
            (d, vec![false, false, true, false])
        }
        Atom::Subset(x, y) => {
            let (xi, yi) = (bit(x)?, bit(y)?);
            let d = table(2, &|q, _, m| if m >> xi & 1 == 1 && m >> yi & 1 == 0 { 1 } else { q });
            (d, vec![true, false])
        }
    };
    let dfa = Dfa {
        alphabet: alphabet.clone(),
        states: delta.len(),
        initial: 0,
        accepting,
        delta,
    };
    Ok(if negated { dfa.complement() } else { dfa })
}

/// Transition monoid of `d` lifted with trivial order and identity ♯, the
/// image of each symbol, and the elements sending the initial state into
/// an accepting one.
pub fn transition_monoid(d: &Dfa) -> Result<(StabilisationMonoid, Vec<ElemId>, ElemSet)> {
    let identity: Vec<usize> = (0..d.states).collect();
    let gens: Vec<Vec<usize>> = (0..d.alphabet.len())
        .map(|s| (0..d.states).map(|q| d.delta[q][s]).collect())
        .collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity.clone(), 0)]);
    let mut elems = vec![identity];
    let mut queue = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let t: Vec<usize> = elems[i].iter().map(|&q| g[q]).collect();
            if !index.contains_key(&t) {
                if elems.len() == MAX_ELEMENTS {
                    return Err(Error::CapExceeded {
                        what: "transition monoid".into(),
                        size: elems.len() + 1,
                        limit: MAX_ELEMENTS,
                    });
                }
                index.insert(t.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(t);
            }
        }
    }
    // x·y reads x first, then y
    let table: Vec<Vec<ElemId>> = elems
        .iter()
        .map(|x| {
            elems
                .iter()
                .map(|y| ElemId::new(index[&x.iter().map(|&q| y[q]).collect::<Vec<_>>()]))
                .collect()
        })
        .collect();
    let names = (0..elems.len()).map(|i| format!("t{i}")).collect();
    let m = StabilisationMonoid::from_plain_monoid(names, ElemId::new(0), table)?;
    let h = gens.iter().map(|g| ElemId::new(index[g])).collect();
    let acc = elems
        .iter()
        .enumerate()
        .filter(|(_, t)| d.accepting[t[d.initial]])
        .map(|(i, _)| ElemId::new(i))
        .collect();
    Ok((m, h, acc))
}

/// χ_L for L = L(d): 0 on L, ∞ elsewhere, so the ideal is everything
/// outside the accepting elements.
pub fn char_recogniser(d: &Dfa) -> Result<Recogniser> {
    let (m, h, acc) = transition_monoid(d)?;
    let ideal = m.all().difference(acc);
    Recogniser::new(m, d.alphabet.symbols(), h, ideal)
}

/// |X| on counta: symbols with X's bit set count.
pub fn size_recogniser(alphabet: &ExtendedAlphabet, x: &str) -> Result<Recogniser> {
    let xi = alphabet
        .var_index(x)
        .ok_or_else(|| Error::UnknownVariable(x.to_string()))?;
    let m = counta();
    let (a, b, z) = (m.elem("a").unwrap(), m.elem("b").unwrap(), m.elem("0").unwrap());
    let h = (0..alphabet.len())
        .map(|s| if alphabet.decode(s).1 >> xi & 1 == 1 { a } else { b })
        .collect();
    Recogniser::new(m, alphabet.symbols(), h, ElemSet::singleton(z))
}

/// Recogniser over Σ × {0,1}^FV(φ) for the function defined by φ.
pub fn compile(phi: &CostFormula, sigma: &[String]) -> Result<Recogniser> {
    compile_node(phi, sigma).map(|(r, _)| r)
}

fn lift(r: &Recogniser, from: &ExtendedAlphabet, to: &ExtendedAlphabet) -> Result<Recogniser> {
    if from == to {
        return Ok(r.clone());
    }
    precompose(r, &to.restriction(from)?)
}

fn compile_node(phi: &CostFormula, sigma: &[String]) -> Result<(Recogniser, ExtendedAlphabet)> {
    let here = ExtendedAlphabet::new(sigma, phi.free_vars());
    let wrap = |e: Error| match e {
        e @ Error::Compile { .. } => e,
        e => Error::Compile {
            formula: phi.to_string(),
            source: Box::new(e),
        },
    };
    let r = match phi {
        CostFormula::Atom { atom, negated } => atom_dfa(atom, *negated, &here).and_then(|d| char_recogniser(&d)),
        CostFormula::CardLe(x) => size_recogniser(&here, x),
        CostFormula::And(a, b) | CostFormula::Or(a, b) => {
            let (ra, ea) = compile_node(a, sigma)?;
            let (rb, eb) = compile_node(b, sigma)?;
            (|| {
                let (ra, rb) = (lift(&ra, &ea, &here)?, lift(&rb, &eb, &here)?);
                if matches!(phi, CostFormula::And(..)) {
                    max_rec(&ra, &rb)
                } else {
                    min_rec(&ra, &rb)
                }
            })()
        }
        CostFormula::Exists(x, a) | CostFormula::Forall(x, a) => {
            let (ra, ea) = compile_node(a, sigma)?;
            if ea.var_index(x).is_none() {
                return Ok((ra, ea));
            }
            (|| {
                let z = ea.restriction(&here)?;
                let p = if matches!(phi, CostFormula::Exists(..)) {
                    inf_project(&ra, &z)?
                } else {
                    sup_project(&ra, &z)?
                };
                // put the symbols back in canonical order
                let order: Vec<(String, String)> = here.symbols().into_iter().map(|s| (s.clone(), s)).collect();
                precompose(&p, &order)
            })()
        }
    };
    r.map(|r| (r, here)).map_err(wrap)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Bounded,
    Diverges,
    Dominates,
}

impl std::str::FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bounded" => Ok(Task::Bounded),
            "diverges" => Ok(Task::Diverges),
            "dominates" => Ok(Task::Dominates),
            _ => Err(Error::InvalidArgument(format!("unknown task `{s}`"))),
        }
    }
}

/// Bounded / diverges on φ, or φ ≼ ψ, for closed formulas over Σ.
pub fn decide_formula(task: Task, phi: &CostFormula, psi: Option<&CostFormula>, sigma: &[String]) -> Result<Decision> {
    let closed = |f: &CostFormula| -> Result<()> {
        let fv = f.free_vars();
        if fv.is_empty() {
            Ok(())
        } else {
            Err(Error::FreeVariables(fv.into_iter().collect()))
        }
    };
    closed(phi)?;
    let f = compile(phi, sigma)?;
    match task {
        Task::Bounded => Ok(decide_boundedness(&f)),
        Task::Diverges => decide_divergence(&f),
        Task::Dominates => {
            let psi = psi.ok_or_else(|| Error::InvalidArgument("dominates needs two formulas".into()))?;
            closed(psi)?;
            decide_domination(&f, &compile(psi, sigma)?)
        }
    }
}
