//! Computation trees: validation, construction within the 3|M| height
//! bound, sm-normalisation, and an exhaustive value oracle.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{pi_eval, ElemId, ElemSet, StabilisationMonoid};
use crate::cost::Cost;
use crate::error::{Error, Result};
use crate::green::{analyze_j, r_classes, JAnalysis};
use crate::recogniser::Recogniser;

/// Threshold standing for n = ∞ (Ramsey factorisations).
pub const INFINITE_THRESHOLD: usize = usize::MAX;

/// Default bound on word length for [`achievable_values`].
pub const ORACLE_LIMIT: usize = 14;

/// Hard bound: counts are kept in one 64-bit mask.
const ORACLE_HARD_LIMIT: usize = 60;

/// An ordered unranked tree labelled by monoid elements.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CompTree {
    pub value: ElemId,
    pub children: Vec<CompTree>,
}

impl CompTree {
    pub fn leaf(value: ElemId) -> Self {
        CompTree {
            value,
            children: Vec::new(),
        }
    }

    pub fn node(value: ElemId, children: Vec<CompTree>) -> Self {
        CompTree { value, children }
    }

    fn binary(m: &StabilisationMonoid, left: CompTree, right: CompTree) -> Self {
        CompTree::node(m.mul(left.value, right.value), vec![left, right])
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    /// Edges on the longest root-to-leaf path; a leaf has height 0.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(CompTree::leaf_count).sum()
        }
    }

    /// Labels of the leaves, left to right.
    pub fn leaf_values(&self) -> Vec<ElemId> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<ElemId>) {
        if self.is_leaf() {
            out.push(self.value);
        }
        for c in &self.children {
            c.collect_leaves(out);
        }
    }

    pub fn max_degree(&self) -> usize {
        self.children
            .iter()
            .map(CompTree::max_degree)
            .max()
            .unwrap_or(0)
            .max(self.children.len())
    }

    pub fn subtree(&self, path: &[usize]) -> Option<&CompTree> {
        path.iter().try_fold(self, |t, &i| t.children.get(i))
    }

    /// `val(child child …)`, leaves as bare names.
    pub fn render(&self, m: &StabilisationMonoid) -> String {
        let mut s = String::new();
        self.render_into(m, &mut s);
        s
    }

    fn render_into(&self, m: &StabilisationMonoid, s: &mut String) {
        s.push_str(m.name(self.value));
        if !self.is_leaf() {
            s.push('(');
            for (i, c) in self.children.iter().enumerate() {
                if i > 0 {
                    s.push(' ');
                }
                c.render_into(m, s);
            }
            s.push(')');
        }
    }
}

/// Relation between a node value and what its children (or letter) demand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// v = target
    Exact,
    /// v ≤ target
    Under,
    /// v ≥ target
    Over,
}

impl Mode {
    pub fn holds(self, m: &StabilisationMonoid, v: ElemId, target: ElemId) -> bool {
        match self {
            Mode::Exact => v == target,
            Mode::Under => m.leq(v, target),
            Mode::Over => m.leq(target, v),
        }
    }

    /// All v with `holds(v, target)`.
    pub fn closure(self, m: &StabilisationMonoid, target: ElemId) -> ElemSet {
        match self {
            Mode::Exact => ElemSet::singleton(target),
            Mode::Under => m.down(target),
            Mode::Over => m.up(target),
        }
    }

    fn closure_set(self, m: &StabilisationMonoid, targets: ElemSet) -> ElemSet {
        targets
            .iter()
            .fold(ElemSet::EMPTY, |acc, t| acc.union(self.closure(m, t)))
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "under" => Ok(Mode::Under),
            "over" => Ok(Mode::Over),
            _ => Err(Error::InvalidArgument(format!("unknown mode `{s}`"))),
        }
    }
}

/// Why a tree is not a computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeViolation {
    LeafCount {
        expected: usize,
        found: usize,
    },
    /// `path` lists child indices from the root.
    Node {
        path: Vec<usize>,
        reason: &'static str,
    },
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeViolation::LeafCount { expected, found } => {
                write!(f, "tree has {found} leaves but the word has length {expected}")
            }
            TreeViolation::Node { path, reason } => write!(f, "node at {path:?}: {reason}"),
        }
    }
}

fn check_node(
    m: &StabilisationMonoid,
    t: &CompTree,
    letter: Option<ElemId>,
    n: usize,
    mode: Mode,
) -> Option<&'static str> {
    let v = t.value;
    let k = t.children.len();
    if k == 0 {
        let a = letter.expect("leaf position");
        return (!mode.holds(m, v, a)).then_some("leaf value does not match its letter");
    }
    if k == 2 && mode.holds(m, v, m.mul(t.children[0].value, t.children[1].value)) {
        return None;
    }
    let e = t.children[0].value;
    let uniform = t.children.iter().all(|c| c.value == e) && m.is_idempotent(e);
    if !uniform {
        return Some(match k {
            1 => "unary node without a stabilisation",
            2 => "binary node value differs from the product",
            _ => "children are not one common idempotent",
        });
    }
    if (2..=n).contains(&k) {
        return (!mode.holds(m, v, e)).then_some("idempotent node value differs from e");
    }
    if k > n {
        let s = m.sharp(e).expect("sharp of idempotent");
        return (!mode.holds(m, v, s)).then_some("stabilisation node value differs from e♯");
    }
    Some("unary node below the threshold")
}

fn validate_rec(
    m: &StabilisationMonoid,
    t: &CompTree,
    w: &[ElemId],
    pos: &mut usize,
    n: usize,
    mode: Mode,
    path: &mut Vec<usize>,
) -> std::result::Result<(), TreeViolation> {
    let letter = t.is_leaf().then(|| w[*pos]);
    if let Some(reason) = check_node(m, t, letter, n, mode) {
        return Err(TreeViolation::Node {
            path: path.clone(),
            reason,
        });
    }
    if t.is_leaf() {
        *pos += 1;
    }
    for (i, c) in t.children.iter().enumerate() {
        path.push(i);
        validate_rec(m, c, w, pos, n, mode, path)?;
        path.pop();
    }
    Ok(())
}

/// Checks that `t` is an n-[under/over-]computation for `w`.
///
/// `n = INFINITE_THRESHOLD` checks a Ramsey factorisation.
pub fn validate_tree(
    m: &StabilisationMonoid,
    t: &CompTree,
    w: &[ElemId],
    n: usize,
    mode: Mode,
) -> std::result::Result<(), TreeViolation> {
    let found = t.leaf_count();
    if found != w.len() {
        return Err(TreeViolation::LeafCount {
            expected: w.len(),
            found,
        });
    }
    validate_rec(m, t, w, &mut 0, n, mode, &mut Vec::new())
}

/// Ramsey factorisations inside one J-class.
///
/// Boundary t (after the t-th letter) carries the state (π(w[..t]), R-class
/// of the next letter). Between two consecutive boundaries with equal states
/// the factor lies in one H-class, and since products of adjacent factors
/// stay in J that H-class is a group in which the factor must be its
/// identity. Cutting at every occurrence of the state of the last boundary
/// therefore yields an idempotent node, and the remaining pieces carry fewer
/// states; with s distinct states the height is at most 3s − 1 ≤ 3|J| − 1.
struct Factoriser<'a> {
    m: &'a StabilisationMonoid,
    rclass: &'a [usize],
}

impl Factoriser<'_> {
    fn factorise(&self, class: ElemSet, w: &[ElemId]) -> CompTree {
        let m = self.m;
        let len = w.len();
        let mut states = vec![(ElemId(0), 0usize); len + 1];
        let mut p = m.unit();
        for t in 1..=len {
            p = m.mul(p, w[t - 1]);
            let r = if t < len {
                self.rclass[w[t].index()]
            } else {
                class
                    .iter()
                    .find(|&b| class.contains(m.mul(p, b)))
                    .map_or(usize::MAX, |b| self.rclass[b.index()])
            };
            states[t] = (p, r);
        }
        self.build(w, &states, 0, len)
    }

    /// Factorisation of w[l..r]; uses boundaries l+1..=r.
    fn build(&self, w: &[ElemId], states: &[(ElemId, usize)], l: usize, r: usize) -> CompTree {
        if r - l == 1 {
            return CompTree::leaf(w[l]);
        }
        let sigma = states[r];
        let cuts: Vec<usize> = (l + 1..=r).filter(|&t| states[t] == sigma).collect();
        let left = self.piece(w, states, l, cuts[0]);
        if cuts.len() == 1 {
            return left;
        }
        let blocks: Vec<CompTree> = cuts.windows(2).map(|c| self.piece(w, states, c[0], c[1])).collect();
        let mid = if blocks.len() == 1 {
            blocks.into_iter().next().expect("one block")
        } else {
            let e = blocks[0].value;
            assert!(
                self.m.is_idempotent(e) && blocks.iter().all(|b| b.value == e),
                "blocks between equal states must share one idempotent value"
            );
            CompTree::node(e, blocks)
        };
        CompTree::binary(self.m, left, mid)
    }

    /// w[a..b] as (factorisation of w[a..b-1]) · last letter.
    fn piece(&self, w: &[ElemId], states: &[(ElemId, usize)], a: usize, b: usize) -> CompTree {
        if b - a == 1 {
            CompTree::leaf(w[a])
        } else {
            let inner = self.build(w, states, a, b - 1);
            CompTree::binary(self.m, inner, CompTree::leaf(w[b - 1]))
        }
    }
}

/// A Ramsey factorisation (threshold ∞) of a J-smooth word, of height at
/// most 3|J| − 1 and value π(w).
pub fn ramsey_factorise_smooth(m: &StabilisationMonoid, class: ElemSet, w: &[ElemId]) -> Result<CompTree> {
    if w.is_empty() {
        return Err(Error::NotSmooth("empty word".into()));
    }
    if !crate::green::is_j_smooth(m, class, w)? {
        return Err(Error::NotSmooth(format!(
            "letters or product leave {}",
            class.display(m)
        )));
    }
    let rclass = r_classes(m);
    Ok(Factoriser { m, rclass: &rclass }.factorise(class, w))
}

/// Outcome of the base lemma on a J-smooth word.
enum Base {
    /// A computation of the whole word with value π(w).
    Whole(CompTree),
    /// A computation of a prefix of the given length, of value below J.
    Prefix(usize, CompTree),
}

struct Builder<'a> {
    m: &'a StabilisationMonoid,
    j: JAnalysis,
    fact: Factoriser<'a>,
    n: usize,
}

/// First node in post-order with degree above `bound`: its path and the
/// leaf interval it spans.
fn find_big(t: &CompTree, bound: usize) -> Option<(Vec<usize>, usize, usize)> {
    fn go(t: &CompTree, bound: usize, offset: &mut usize, path: &mut Vec<usize>) -> Option<(Vec<usize>, usize, usize)> {
        if t.is_leaf() {
            *offset += 1;
            return None;
        }
        let start = *offset;
        for (i, c) in t.children.iter().enumerate() {
            path.push(i);
            if let Some(found) = go(c, bound, offset, path) {
                return Some(found);
            }
            path.pop();
        }
        (t.children.len() > bound).then(|| (path.clone(), start, *offset))
    }
    go(t, bound, &mut 0, &mut Vec::new())
}

impl Builder<'_> {
    fn base(&self, class: ElemSet, w: &[ElemId]) -> Base {
        if w.len() == 1 {
            return Base::Whole(CompTree::leaf(w[0]));
        }
        let c = self.j.class(w[0]);
        if !self.j.is_unstable(c) {
            // Stable class: e♯ = e, so big idempotent nodes are already
            // stabilisation nodes.
            return Base::Whole(self.fact.factorise(class, w));
        }
        // A node of degree 2 is a binary node at any threshold.
        let bound = self.n.max(2);
        let mut cur = w.len();
        let mut pending: Option<(CompTree, usize)> = None;
        loop {
            let f = self.fact.factorise(class, &w[..cur]);
            match find_big(&f, bound) {
                None => {
                    return match pending {
                        None => Base::Whole(f),
                        Some((big, end)) => Base::Prefix(end, CompTree::binary(self.m, f, big)),
                    }
                }
                Some((path, start, end)) => {
                    let mut big = f.subtree(&path).expect("path from find_big").clone();
                    big.value = self.m.sharp(big.value).expect("big node value is idempotent");
                    if start == 0 {
                        return Base::Prefix(end, big);
                    }
                    pending = Some((big, end));
                    cur = start;
                }
            }
        }
    }

    /// One step of the induction on u ∈ Z⁺ + Z*S: a computation for a
    /// prefix, whose value lies in Z ∖ J unless the prefix is all of u.
    fn claim(&self, class: ElemSet, u: &[ElemId]) -> (usize, CompTree) {
        let m = self.m;
        let mut acc = m.unit();
        let mut len = 0;
        while len < u.len() && class.contains(u[len]) && class.contains(m.mul(acc, u[len])) {
            acc = m.mul(acc, u[len]);
            len += 1;
        }
        if len == 0 {
            return (1, CompTree::leaf(u[0]));
        }
        match self.base(class, &u[..len]) {
            Base::Whole(t) if len == u.len() => (len, t),
            Base::Whole(t) => (len + 1, CompTree::binary(m, t, CompTree::leaf(u[len]))),
            Base::Prefix(k, t) => (k, t),
        }
    }
}

fn substitute(t: CompTree, items: &mut impl Iterator<Item = CompTree>) -> CompTree {
    if t.is_leaf() {
        let item = items.next().expect("one item per leaf");
        debug_assert_eq!(item.value, t.value);
        return item;
    }
    CompTree::node(t.value, t.children.into_iter().map(|c| substitute(c, items)).collect())
}

/// An n-computation for `w` of height at most 3|M|.
///
/// Follows the induction on left-right ideals Z: remove a maximal J-class
/// (least element first), cut the word into pieces whose computations have
/// values in the smaller ideal, and recurse on the word of those values.
pub fn construct(m: &StabilisationMonoid, w: &[ElemId], n: usize) -> Result<CompTree> {
    if w.is_empty() {
        return Err(Error::InvalidArgument(
            "cannot construct a computation for the empty word".into(),
        ));
    }
    let rclass = r_classes(m);
    let b = Builder {
        m,
        j: analyze_j(m),
        fact: Factoriser { m, rclass: &rclass },
        n,
    };
    let mut items: Vec<CompTree> = w.iter().map(|&x| CompTree::leaf(x)).collect();
    let mut z = m.all();
    while items.len() > 1 {
        let c = (0..b.j.classes.len())
            .filter(|&c| b.j.classes[c].is_subset(z))
            .find(|&c| {
                let rep = b.j.classes[c].first().expect("classes are non-empty");
                z.iter().all(|x| !b.j.j_less(rep, x))
            })
            .expect("non-empty ideal has a maximal class");
        let class = b.j.classes[c];
        let values: Vec<ElemId> = items.iter().map(|t| t.value).collect();
        let mut pieces = Vec::new();
        let mut pos = 0;
        while pos < values.len() {
            let (k, t) = b.claim(class, &values[pos..]);
            pieces.push((pos, k, t));
            pos += k;
        }
        let mut source = items.into_iter();
        items = pieces
            .into_iter()
            .map(|(_, k, t)| substitute(t, &mut source.by_ref().take(k)))
            .collect();
        z = z.difference(class);
    }
    Ok(items.pop().expect("one tree remains"))
}

/// Removes the leaves at `deleted` (which must carry unit letters of
/// `word`) from an sm-[under/over-]computation.
///
/// Subtrees left without leaves disappear; a node left with one child is
/// replaced by that child relabelled with the node's value. The value and
/// mode are preserved and the height does not grow. When every leaf is
/// deleted the result is a single leaf carrying the root value.
pub fn sm_normalise(m: &StabilisationMonoid, t: &CompTree, word: &[ElemId], deleted: &[usize]) -> Result<CompTree> {
    if t.leaf_count() != word.len() {
        return Err(Error::InvalidArgument(format!(
            "tree has {} leaves, word has length {}",
            t.leaf_count(),
            word.len()
        )));
    }
    let mut gone = vec![false; word.len()];
    for &p in deleted {
        match word.get(p) {
            Some(&x) if x == m.unit() => gone[p] = true,
            Some(_) => return Err(Error::InvalidArgument(format!("position {p} is not a unit letter"))),
            None => return Err(Error::InvalidArgument(format!("position {p} out of range"))),
        }
    }
    fn go(t: &CompTree, gone: &[bool], pos: &mut usize) -> Option<CompTree> {
        if t.is_leaf() {
            let p = *pos;
            *pos += 1;
            return (!gone[p]).then(|| t.clone());
        }
        let mut kids: Vec<CompTree> = t.children.iter().filter_map(|c| go(c, gone, pos)).collect();
        match kids.len() {
            0 => None,
            1 => {
                let mut only = kids.pop().expect("one child");
                only.value = t.value;
                Some(only)
            }
            _ => Some(CompTree::node(t.value, kids)),
        }
    }
    Ok(go(t, &gone, &mut 0).unwrap_or_else(|| CompTree::leaf(t.value)))
}

/// Deletes every unit letter, see [`sm_normalise`].
pub fn sm_normalise_units(m: &StabilisationMonoid, t: &CompTree, word: &[ElemId]) -> Result<CompTree> {
    let deleted: Vec<usize> = (0..word.len()).filter(|&i| word[i] == m.unit()).collect();
    sm_normalise(m, t, word, &deleted)
}

/// Inserts `pads[i] = (p, q)` unit letters before and after the i-th letter
/// of `word`, turning a computation for `word` into one for the padded word
/// with the same value and mode; the height grows by at most 3.
pub fn sm_extend(
    m: &StabilisationMonoid,
    t: &CompTree,
    word: &[ElemId],
    pads: &[(usize, usize)],
) -> Result<(CompTree, Vec<ElemId>)> {
    if t.leaf_count() != word.len() || pads.len() != word.len() {
        return Err(Error::InvalidArgument("tree, word and padding lengths differ".into()));
    }
    let one = m.unit();
    let units = |k: usize| {
        if k == 1 {
            CompTree::leaf(one)
        } else {
            CompTree::node(one, vec![CompTree::leaf(one); k])
        }
    };
    let mut padded = Vec::new();
    let mut pieces = Vec::new();
    for (&a, &(p, q)) in word.iter().zip(pads) {
        padded.extend(std::iter::repeat_n(one, p));
        padded.push(a);
        padded.extend(std::iter::repeat_n(one, q));
        let mut piece = CompTree::leaf(a);
        if p > 0 {
            piece = CompTree::binary(m, units(p), piece);
        }
        if q > 0 {
            piece = CompTree::binary(m, piece, units(q));
        }
        pieces.push(piece);
    }
    fn plug(t: &CompTree, pieces: &mut std::vec::IntoIter<CompTree>) -> CompTree {
        if t.is_leaf() {
            let mut p = pieces.next().expect("one piece per leaf");
            p.value = t.value;
            return p;
        }
        CompTree::node(t.value, t.children.iter().map(|c| plug(c, pieces)).collect())
    }
    Ok((plug(t, &mut pieces.into_iter()), padded))
}

/// Values achievable by mode-computations over every factor of a word, per
/// height, at one threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueSets {
    len: usize,
    /// `levels[h][i * (len + 1) + j]`; heights past the last level are
    /// equal to it.
    levels: Vec<Vec<ElemSet>>,
}

impl ValueSets {
    /// Values of computations of height ≤ h over w[i..j].
    pub fn get(&self, i: usize, j: usize, h: usize) -> ElemSet {
        let level = &self.levels[h.min(self.levels.len() - 1)];
        level[i * (self.len + 1) + j]
    }

    /// Least height from which nothing new appears.
    pub fn saturation_height(&self) -> usize {
        self.levels.len() - 1
    }
}

/// Interval dynamic program over heights 0..=p.
///
/// A node of degree k over w[i..j] with all children of value e is found
/// through the set of k for which w[i..j] splits into k factors each
/// admitting e; k is only needed up to n + 1.
pub fn value_sets(
    m: &StabilisationMonoid,
    w: &[ElemId],
    n: usize,
    p: usize,
    mode: Mode,
    limit: usize,
) -> Result<ValueSets> {
    let len = w.len();
    let limit = limit.min(ORACLE_HARD_LIMIT);
    if len > limit {
        return Err(Error::OracleScope { len, limit });
    }
    if len == 0 {
        return Err(Error::InvalidArgument("value sets of the empty word".into()));
    }
    let width = len + 1;
    let at = |i: usize, j: usize| i * width + j;
    let mut level = vec![ElemSet::EMPTY; width * width];
    for (i, &a) in w.iter().enumerate() {
        level[at(i, i + 1)] = mode.closure(m, a);
    }
    let idem: Vec<ElemId> = m.elements().filter(|&e| m.is_idempotent(e)).collect();
    // Degrees never exceed len, so thresholds beyond len behave like len.
    let n = n.min(len);
    let cap = n + 1;
    let mask = (1u64 << (cap + 1)) - 1;
    let step = |c: u64| {
        let s = c << 1;
        (s | ((s >> (cap + 1)) & 1) << cap) & mask
    };
    let low = if n >= 2 { ((1u64 << (n + 1)) - 1) & !0b11 } else { 0 };
    let high = mask & !((1u64 << (n + 1)) - 1) & !1;
    let mut levels = vec![level.clone()];
    let mut counts = vec![0u64; width];
    for _ in 1..=p {
        let prev = levels.last().expect("level 0");
        let mut next = prev.clone();
        for i in 0..len {
            for j in i + 2..=len {
                let mut prod = ElemSet::EMPTY;
                for k in i + 1..j {
                    prod = prod.union(m.mul_sets(prev[at(i, k)], prev[at(k, j)]));
                }
                next[at(i, j)] = next[at(i, j)].union(mode.closure_set(m, prod));
            }
        }
        for &e in &idem {
            let sharp = m.sharp(e).expect("sharp of idempotent");
            let as_e = mode.closure(m, e);
            let as_sharp = mode.closure(m, sharp);
            for i in 0..len {
                counts[i] = 1;
                for j in i + 1..=len {
                    let mut c = 0u64;
                    for k in i..j {
                        if prev[at(k, j)].contains(e) {
                            c |= step(counts[k]);
                        }
                    }
                    counts[j] = c;
                    if c & low != 0 {
                        next[at(i, j)] = next[at(i, j)].union(as_e);
                    }
                    if c & high != 0 {
                        next[at(i, j)] = next[at(i, j)].union(as_sharp);
                    }
                }
            }
        }
        if &next == prev {
            break;
        }
        levels.push(next);
    }
    Ok(ValueSets { len, levels })
}

/// Values of mode-computations of height ≤ p at threshold n over `w`.
pub fn achievable_values(m: &StabilisationMonoid, w: &[ElemId], n: usize, p: usize, mode: Mode) -> Result<ElemSet> {
    achievable_values_with_limit(m, w, n, p, mode, ORACLE_LIMIT)
}

pub fn achievable_values_with_limit(
    m: &StabilisationMonoid,
    w: &[ElemId],
    n: usize,
    p: usize,
    mode: Mode,
    limit: usize,
) -> Result<ElemSet> {
    Ok(value_sets(m, w, n, p, mode, limit)?.get(0, w.len(), p))
}

/// The four candidate semantics of a recogniser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// `--`: least n with an n-under-computation outside I.
    UnderMinus,
    /// `-`: least n with an n-computation outside I.
    Minus,
    /// `+`: greatest n + 1 with an n-computation in I.
    Plus,
    /// `++`: greatest n + 1 with an n-over-computation in I.
    OverPlus,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::UnderMinus, Variant::Minus, Variant::Plus, Variant::OverPlus];

    pub fn mode(self) -> Mode {
        match self {
            Variant::UnderMinus => Mode::Under,
            Variant::Minus | Variant::Plus => Mode::Exact,
            Variant::OverPlus => Mode::Over,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Variant::UnderMinus => "--",
            Variant::Minus => "-",
            Variant::Plus => "+",
            Variant::OverPlus => "++",
        }
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mm" | "--" => Ok(Variant::UnderMinus),
            "m" | "-" => Ok(Variant::Minus),
            "p" | "+" => Ok(Variant::Plus),
            "pp" | "++" => Ok(Variant::OverPlus),
            _ => Err(Error::InvalidArgument(format!("unknown variant `{s}`"))),
        }
    }
}

/// ⟦M,h,I⟧^variant_p(u), with u given as indices into the alphabet.
///
/// Thresholds are scanned from 0 to |u|. Every node covers at least one
/// letter per child, so degrees are at most |u|: from n = |u| on there are
/// no stabilisation nodes and no degree is excluded from idempotent nodes,
/// hence the set of trees no longer changes and n = |u| decides the value
/// at infinity. The empty word is handled through sm-computations, whose
/// only values are those related to the unit.
pub fn semantic_value(r: &Recogniser, u: &[usize], variant: Variant, p: usize) -> Result<Cost> {
    semantic_value_with_limit(r, u, variant, p, ORACLE_LIMIT)
}

pub fn semantic_value_with_limit(
    r: &Recogniser,
    u: &[usize],
    variant: Variant,
    p: usize,
    limit: usize,
) -> Result<Cost> {
    let m = &r.monoid;
    let word = r.image(u)?;
    let ideal = r.ideal.members();
    let mode = variant.mode();
    let values = |n: usize| -> Result<ElemSet> {
        if word.is_empty() {
            Ok(mode.closure(m, m.unit()))
        } else {
            achievable_values_with_limit(m, &word, n, p, mode, limit)
        }
    };
    let top = word.len();
    Ok(match variant {
        Variant::UnderMinus | Variant::Minus => {
            for n in 0..=top {
                if !values(n)?.is_subset(ideal) {
                    return Ok(Cost::Finite(n as u64));
                }
            }
            Cost::Infinite
        }
        Variant::Plus | Variant::OverPlus => {
            if values(top)?.intersects(ideal) {
                return Ok(Cost::Infinite);
            }
            for n in (0..top).rev() {
                if values(n)?.intersects(ideal) {
                    return Ok(Cost::Finite(n as u64 + 1));
                }
            }
            Cost::Finite(0)
        }
    })
}

/// π of the leaves, convenient for tests of exact computations.
pub fn leaf_product(m: &StabilisationMonoid, t: &CompTree) -> ElemId {
    pi_eval(m, &t.leaf_values())
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn leaves(xs: &[ElemId]) -> Vec<CompTree> {
        xs.iter().map(|&x| CompTree::leaf(x)).collect()
    }

    #[test]
    fn validator_cases() {
        let m = counta();
        let t = CompTree::node(A, leaves(&[A, A]));
        assert!(validate_tree(&m, &t, &[A, A], 3, Mode::Exact).is_ok());
        let t = CompTree::node(Z, leaves(&[A; 4]));
        assert!(validate_tree(&m, &t, &[A; 4], 3, Mode::Exact).is_ok());
        assert!(matches!(
            validate_tree(&m, &t, &[A; 4], 4, Mode::Exact),
            Err(TreeViolation::Node { .. })
        ));
        assert!(matches!(
            validate_tree(&m, &t, &[A; 3], 3, Mode::Exact),
            Err(TreeViolation::LeafCount { expected: 3, found: 4 })
        ));
    }

    #[test]
    fn unary_node_only_at_zero() {
        let m = counta();
        let t = CompTree::node(Z, leaves(&[A]));
        assert!(validate_tree(&m, &t, &[A], 0, Mode::Exact).is_ok());
        assert!(validate_tree(&m, &t, &[A], 1, Mode::Exact).is_err());
    }

    #[test]
    fn ramsey_on_a_run() {
        let m = counta();
        let t = ramsey_factorise_smooth(&m, ElemSet::singleton(A), &[A; 7]).unwrap();
        assert!(validate_tree(&m, &t, &[A; 7], INFINITE_THRESHOLD, Mode::Exact).is_ok());
        assert!(t.height() <= 2);
        assert_eq!(t.value, A);
        assert!(ramsey_factorise_smooth(&m, ElemSet::singleton(A), &[A, B]).is_err());
    }

    #[test]
    fn construct_small() {
        let m = counta();
        let t = construct(&m, &[A; 8], 2).unwrap();
        assert!(validate_tree(&m, &t, &[A; 8], 2, Mode::Exact).is_ok());
        assert!(t.height() <= 9);
        let t = construct(&m, &[A, B], 5).unwrap();
        assert_eq!(t.value, A);
        assert_eq!(construct(&m, &[Z], 3).unwrap(), CompTree::leaf(Z));
    }

    #[test]
    fn oracle_examples() {
        let m = counta();
        let s = achievable_values(&m, &[A; 4], 3, 9, Mode::Exact).unwrap();
        assert_eq!(s, ElemSet::singleton(A).with(Z));
        let s = achievable_values(&m, &[A; 4], 4, 9, Mode::Exact).unwrap();
        assert_eq!(s, ElemSet::singleton(A));
        assert_eq!(achievable_values(&m, &[A], 2, 3, Mode::Under).unwrap(), m.down(A));
        assert_eq!(achievable_values(&m, &[Z], 2, 3, Mode::Over).unwrap(), m.up(Z));
        assert!(matches!(
            achievable_values(&m, &[A; 15], 3, 9, Mode::Exact),
            Err(Error::OracleScope { .. })
        ));
    }

    #[test]
    fn normalise_drops_units() {
        let m = counta();
        let t = CompTree::node(A, leaves(&[B, A]));
        assert_eq!(sm_normalise(&m, &t, &[B, A], &[0]).unwrap(), CompTree::leaf(A));
        let t = CompTree::node(B, leaves(&[B, B]));
        assert_eq!(sm_normalise(&m, &t, &[B, B], &[0, 1]).unwrap(), CompTree::leaf(B));
        assert!(sm_normalise(&m, &t, &[B, A], &[1]).is_err());
    }

    #[test]
    fn extend_then_normalise() {
        let m = counta();
        let w = [A, A, A, A];
        let t = construct(&m, &w, 3).unwrap();
        let (big, padded) = sm_extend(&m, &t, &w, &[(1, 0), (0, 2), (3, 1), (0, 0)]).unwrap();
        assert!(validate_tree(&m, &big, &padded, 3, Mode::Exact).is_ok());
        assert!(big.height() <= t.height() + 3);
        let back = sm_normalise_units(&m, &big, &padded).unwrap();
        assert!(validate_tree(&m, &back, &w, 3, Mode::Exact).is_ok());
        assert_eq!(back.value, t.value);
    }
}
