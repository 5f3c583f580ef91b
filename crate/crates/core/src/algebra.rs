//! Stabilisation monoids, their ideals, morphisms and products.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use crate::error::{Error, Result};

/// Largest carrier supported; sets of elements are single 64-bit words.
pub const MAX_ELEMENTS: usize = 64;

/// Index of an element inside one monoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElemId(pub u8);

impl ElemId {
    pub fn new(index: usize) -> Self {
        debug_assert!(index < MAX_ELEMENTS);
        ElemId(index as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A set of elements of one monoid, as a bit mask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    pub fn from_bits(bits: u64) -> Self {
        ElemSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn full(m: usize) -> Self {
        if m >= 64 {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << m) - 1)
        }
    }

    pub fn singleton(e: ElemId) -> Self {
        ElemSet(1u64 << e.0)
    }

    pub fn contains(self, e: ElemId) -> bool {
        self.0 >> e.0 & 1 == 1
    }

    pub fn insert(&mut self, e: ElemId) -> bool {
        let fresh = !self.contains(e);
        self.0 |= 1u64 << e.0;
        fresh
    }

    pub fn remove(&mut self, e: ElemId) {
        self.0 &= !(1u64 << e.0);
    }

    pub fn with(mut self, e: ElemId) -> Self {
        self.insert(e);
        self
    }

    pub fn union(self, other: ElemSet) -> Self {
        ElemSet(self.0 | other.0)
    }

    pub fn intersection(self, other: ElemSet) -> Self {
        ElemSet(self.0 & other.0)
    }

    pub fn difference(self, other: ElemSet) -> Self {
        ElemSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: ElemSet) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn first(self) -> Option<ElemId> {
        (self.0 != 0).then(|| ElemId(self.0.trailing_zeros() as u8))
    }

    pub fn iter(self) -> impl Iterator<Item = ElemId> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let i = bits.trailing_zeros();
            bits &= bits - 1;
            Some(ElemId(i as u8))
        })
    }

    /// Renders as `{x,y}` using the monoid's names, in element order.
    pub fn display(self, m: &StabilisationMonoid) -> String {
        let names: Vec<&str> = self.iter().map(|e| m.name(e)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl FromIterator<ElemId> for ElemSet {
    fn from_iter<I: IntoIterator<Item = ElemId>>(iter: I) -> Self {
        let mut s = ElemSet::EMPTY;
        for e in iter {
            s.insert(e);
        }
        s
    }
}

/// A finite stabilisation monoid ⟨M, ·, ≤, ♯⟩.
///
/// Construction only checks the shape of the tables; [`validate_axioms`]
/// decides whether the structure really is a stabilisation monoid.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilisationMonoid {
    names: Vec<String>,
    unit: ElemId,
    table: Vec<ElemId>,
    up: Vec<ElemSet>,
    down: Vec<ElemSet>,
    sharp: Vec<Option<ElemId>>,
}

impl StabilisationMonoid {
    /// Builds a candidate from raw tables. `leq[a][b]` means a ≤ b and is
    /// taken as given (no closure).
    pub fn from_parts(
        names: Vec<String>,
        unit: ElemId,
        table: Vec<Vec<ElemId>>,
        leq: Vec<Vec<bool>>,
        sharp: Vec<Option<ElemId>>,
    ) -> Result<Self> {
        let m = names.len();
        if m == 0 {
            return Err(Error::Structure("empty carrier".into()));
        }
        if m > MAX_ELEMENTS {
            return Err(Error::CapExceeded {
                what: "monoid".into(),
                size: m,
                limit: MAX_ELEMENTS,
            });
        }
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(Error::Structure(format!("bad element name `{n}`")));
            }
            if let Some(j) = seen.insert(n.as_str(), i) {
                return Err(Error::Structure(format!(
                    "element `{n}` declared twice (positions {j} and {i})"
                )));
            }
        }
        let in_range = |e: ElemId| e.index() < m;
        if !in_range(unit) {
            return Err(Error::Structure("unit out of range".into()));
        }
        if table.len() != m || table.iter().any(|row| row.len() != m) {
            return Err(Error::Structure(format!("product table is not {m}x{m}")));
        }
        if table.iter().flatten().any(|&e| !in_range(e)) {
            return Err(Error::Structure("product table entry out of range".into()));
        }
        if leq.len() != m || leq.iter().any(|row| row.len() != m) {
            return Err(Error::Structure(format!("order relation is not {m}x{m}")));
        }
        if sharp.len() != m {
            return Err(Error::Structure(format!(
                "sharp map has length {} instead of {m}",
                sharp.len()
            )));
        }
        if sharp.iter().flatten().any(|&e| !in_range(e)) {
            return Err(Error::Structure("sharp entry out of range".into()));
        }
        let mut up = vec![ElemSet::EMPTY; m];
        let mut down = vec![ElemSet::EMPTY; m];
        for a in 0..m {
            for b in 0..m {
                if leq[a][b] {
                    up[a].insert(ElemId::new(b));
                    down[b].insert(ElemId::new(a));
                }
            }
        }
        Ok(StabilisationMonoid {
            names,
            unit,
            table: table.into_iter().flatten().collect(),
            up,
            down,
            sharp,
        })
    }

    /// Like [`from_parts`](Self::from_parts) but the order is given by
    /// generating pairs `(a, b)` meaning a ≤ b. The reflexive-transitive
    /// closure is taken; a cycle between distinct elements is an error.
    pub fn from_order_pairs(
        names: Vec<String>,
        unit: ElemId,
        table: Vec<Vec<ElemId>>,
        order: &[(ElemId, ElemId)],
        sharp: Vec<Option<ElemId>>,
    ) -> Result<Self> {
        let m = names.len();
        if order.iter().any(|&(a, b)| a.index() >= m || b.index() >= m) {
            return Err(Error::Structure("order pair out of range".into()));
        }
        let leq = order_closure(m, order)?;
        Self::from_parts(names, unit, table, leq, sharp)
    }

    /// Shorthand used by tests and examples: names as `&str`, elements
    /// referred to by name everywhere.
    pub fn from_names(
        names: &[&str],
        unit: &str,
        rows: &[&[&str]],
        order: &[(&str, &str)],
        sharp: &[(&str, &str)],
    ) -> Result<Self> {
        let idx = |s: &str| -> Result<ElemId> {
            names
                .iter()
                .position(|n| *n == s)
                .map(ElemId::new)
                .ok_or_else(|| Error::Structure(format!("unknown element `{s}`")))
        };
        let table = rows
            .iter()
            .map(|row| row.iter().map(|s| idx(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let order = order
            .iter()
            .map(|&(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>>>()?;
        let mut sh = vec![None; names.len()];
        for &(a, b) in sharp {
            sh[idx(a)?.index()] = Some(idx(b)?);
        }
        Self::from_order_pairs(
            names.iter().map(|s| s.to_string()).collect(),
            idx(unit)?,
            table,
            &order,
            sh,
        )
    }

    pub fn size(&self) -> usize {
        self.names.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElemId> {
        (0..self.size()).map(ElemId::new)
    }

    pub fn all(&self) -> ElemSet {
        ElemSet::full(self.size())
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: ElemId) -> &str {
        &self.names[e.index()]
    }

    pub fn elem(&self, name: &str) -> Option<ElemId> {
        self.names.iter().position(|n| n == name).map(ElemId::new)
    }

    pub fn unit(&self) -> ElemId {
        self.unit
    }

    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        self.table[a.index() * self.size() + b.index()]
    }

    /// {x·y : x ∈ a, y ∈ b}.
    pub fn mul_sets(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.up[a.index()].contains(b)
    }

    /// {b : a ≤ b}.
    pub fn up(&self, a: ElemId) -> ElemSet {
        self.up[a.index()]
    }

    /// {b : b ≤ a}.
    pub fn down(&self, a: ElemId) -> ElemSet {
        self.down[a.index()]
    }

    pub fn sharp(&self, e: ElemId) -> Option<ElemId> {
        self.sharp[e.index()]
    }

    pub fn is_idempotent(&self, e: ElemId) -> bool {
        self.mul(e, e) == e
    }

    /// The order as a list of strict pairs, for writers.
    pub fn order_pairs(&self) -> Vec<(ElemId, ElemId)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up(a).iter() {
                if a != b {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Whether the order is equality and ♯ is the identity on idempotents,
    /// i.e. the monoid is a plain monoid lifted as in the standard remark.
    pub fn is_trivially_ordered(&self) -> bool {
        self.elements().all(|a| self.up(a) == ElemSet::singleton(a))
            && self
                .elements()
                .filter(|&e| self.is_idempotent(e))
                .all(|e| self.sharp(e) == Some(e))
    }

    /// Lifts a plain monoid: trivial order, identity ♯ on idempotents.
    pub fn from_plain_monoid(names: Vec<String>, unit: ElemId, table: Vec<Vec<ElemId>>) -> Result<Self> {
        let m = names.len();
        let leq = (0..m).map(|a| (0..m).map(|b| a == b).collect()).collect();
        let sharp = (0..m)
            .map(|e| {
                let id = ElemId::new(e);
                table
                    .get(e)
                    .and_then(|row| row.get(e))
                    .filter(|&&x| x == id)
                    .map(|_| id)
            })
            .collect();
        Self::from_parts(names, unit, table, leq, sharp)
    }

    /// Returns `Error::Axioms` when the report of [`validate_axioms`] is
    /// not empty.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate_axioms(self);
        if report.is_empty() {
            Ok(())
        } else {
            let parts: Vec<String> = report.iter().map(|v| v.describe(self)).collect();
            Err(Error::Axioms(parts.join("; ")))
        }
    }
}

/// Reflexive-transitive closure of generating pairs, rejecting cycles.
#[allow(clippy::needless_range_loop)]
pub fn order_closure(m: usize, pairs: &[(ElemId, ElemId)]) -> Result<Vec<Vec<bool>>> {
    let mut leq = vec![vec![false; m]; m];
    for (a, row) in leq.iter_mut().enumerate() {
        row[a] = true;
    }
    for &(a, b) in pairs {
        leq[a.index()][b.index()] = true;
    }
    for k in 0..m {
        for i in 0..m {
            if leq[i][k] {
                for j in 0..m {
                    if leq[k][j] {
                        leq[i][j] = true;
                    }
                }
            }
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            if leq[a][b] && leq[b][a] {
                return Err(Error::Structure(format!(
                    "order is not antisymmetric between elements {a} and {b}"
                )));
            }
        }
    }
    Ok(leq)
}

/// The conditions checked by [`validate_axioms`] and [`check_morphism`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axiom {
    Associativity,
    UnitNeutral,
    Reflexive,
    Antisymmetric,
    Transitive,
    Monotone,
    SharpDomain,
    SharpIdempotent,
    SharpOfSharp,
    SharpBelow,
    SharpMonotone,
    Consistency,
    SharpUnit,
    MorphismUnit,
    MorphismProduct,
    MorphismOrder,
    MorphismSharp,
}

impl Axiom {
    pub fn statement(self) -> &'static str {
        match self {
            Axiom::Associativity => "(x·y)·z = x·(y·z)",
            Axiom::UnitNeutral => "1·x = x = x·1",
            Axiom::Reflexive => "x ≤ x",
            Axiom::Antisymmetric => "x ≤ y ∧ y ≤ x ⇒ x = y",
            Axiom::Transitive => "x ≤ y ∧ y ≤ z ⇒ x ≤ z",
            Axiom::Monotone => "a ≤ a′ ∧ b ≤ b′ ⇒ a·b ≤ a′·b′",
            Axiom::SharpDomain => "sharp defined exactly on idempotents",
            Axiom::SharpIdempotent => "sharp(e) idempotent",
            Axiom::SharpOfSharp => "sharp(sharp(e)) = sharp(e)",
            Axiom::SharpBelow => "sharp(e) ≤ e",
            Axiom::SharpMonotone => "e ≤ f ⇒ sharp(e) ≤ sharp(f)",
            Axiom::Consistency => "(a·b)♯ = a·(b·a)♯·b",
            Axiom::SharpUnit => "sharp(1) = 1",
            Axiom::MorphismUnit => "μ(1) = 1",
            Axiom::MorphismProduct => "μ(x·y) = μ(x)·μ(y)",
            Axiom::MorphismOrder => "x ≤ y ⇒ μ(x) ≤ μ(y)",
            Axiom::MorphismSharp => "μ(sharp(e)) = sharp(μ(e))",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.statement())
    }
}

/// One failed condition with the elements that falsify it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub axiom: Axiom,
    pub witness: Vec<ElemId>,
}

impl Violation {
    /// `axiom [x, y]` with element names from `m`.
    pub fn describe(&self, m: &StabilisationMonoid) -> String {
        let names: Vec<&str> = self.witness.iter().map(|&e| m.name(e)).collect();
        format!("{} [{}]", self.axiom, names.join(", "))
    }
}

/// Checks every stabilisation monoid axiom by exhaustive scan.
///
/// At most one violation is reported per axiom, carrying the first witness
/// in element order.
pub fn validate_axioms(m: &StabilisationMonoid) -> Vec<Violation> {
    let mut out = Vec::new();
    let els: Vec<ElemId> = m.elements().collect();
    let mut report = |axiom: Axiom, witness: Vec<ElemId>| {
        if !out.iter().any(|v: &Violation| v.axiom == axiom) {
            out.push(Violation { axiom, witness });
        }
    };

    'assoc: for &x in &els {
        for &y in &els {
            for &z in &els {
                if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                    report(Axiom::Associativity, vec![x, y, z]);
                    break 'assoc;
                }
            }
        }
    }
    let u = m.unit();
    if let Some(&x) = els.iter().find(|&&x| m.mul(u, x) != x || m.mul(x, u) != x) {
        report(Axiom::UnitNeutral, vec![x]);
    }

    if let Some(&x) = els.iter().find(|&&x| !m.leq(x, x)) {
        report(Axiom::Reflexive, vec![x]);
    }
    'anti: for &x in &els {
        for &y in &els {
            if x != y && m.leq(x, y) && m.leq(y, x) {
                report(Axiom::Antisymmetric, vec![x, y]);
                break 'anti;
            }
        }
    }
    'trans: for &x in &els {
        for y in m.up(x).iter() {
            for z in m.up(y).iter() {
                if !m.leq(x, z) {
                    report(Axiom::Transitive, vec![x, y, z]);
                    break 'trans;
                }
            }
        }
    }
    // One-sided monotonicity in each argument; together with transitivity
    // this is equivalent to the two-sided statement.
    'mono: for &a in &els {
        for a2 in m.up(a).iter() {
            for &b in &els {
                if !m.leq(m.mul(a, b), m.mul(a2, b)) {
                    report(Axiom::Monotone, vec![a, a2, b, b]);
                    break 'mono;
                }
                if !m.leq(m.mul(b, a), m.mul(b, a2)) {
                    report(Axiom::Monotone, vec![b, b, a, a2]);
                    break 'mono;
                }
            }
        }
    }

    for &e in &els {
        if m.is_idempotent(e) != m.sharp(e).is_some() {
            report(Axiom::SharpDomain, vec![e]);
            break;
        }
    }
    let sharp_of = |e: ElemId| if m.is_idempotent(e) { m.sharp(e) } else { None };
    for &e in &els {
        let Some(s) = sharp_of(e) else { continue };
        if !m.is_idempotent(s) {
            report(Axiom::SharpIdempotent, vec![e]);
        } else if m.sharp(s) != Some(s) {
            report(Axiom::SharpOfSharp, vec![e]);
        }
        if !m.leq(s, e) {
            report(Axiom::SharpBelow, vec![e]);
        }
    }
    'smono: for &e in &els {
        let Some(se) = sharp_of(e) else { continue };
        for f in m.up(e).iter() {
            let Some(sf) = sharp_of(f) else { continue };
            if !m.leq(se, sf) {
                report(Axiom::SharpMonotone, vec![e, f]);
                break 'smono;
            }
        }
    }
    'cons: for &a in &els {
        for &b in &els {
            let ab = m.mul(a, b);
            let ba = m.mul(b, a);
            let (Some(sab), Some(sba)) = (sharp_of(ab), sharp_of(ba)) else {
                continue;
            };
            if sab != m.mul(m.mul(a, sba), b) {
                report(Axiom::Consistency, vec![a, b]);
                break 'cons;
            }
        }
    }
    if m.sharp(u) != Some(u) {
        report(Axiom::SharpUnit, vec![u]);
    }
    out
}

/// π: left fold of the product, π(ε) = 1.
pub fn pi_eval(m: &StabilisationMonoid, w: &[ElemId]) -> ElemId {
    w.iter().fold(m.unit(), |acc, &x| m.mul(acc, x))
}

/// E(M) = {e : e·e = e}.
pub fn idempotents(m: &StabilisationMonoid) -> ElemSet {
    m.elements().filter(|&e| m.is_idempotent(e)).collect()
}

/// A downward closed set of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ideal(ElemSet);

impl Ideal {
    pub fn new(m: &StabilisationMonoid, members: ElemSet) -> Result<Self> {
        match members.iter().find(|&x| !m.down(x).is_subset(members)) {
            Some(x) => Err(Error::Structure(format!(
                "{} is not downward closed below {}",
                members.display(m),
                m.name(x)
            ))),
            None => Ok(Ideal(members)),
        }
    }

    pub fn empty() -> Self {
        Ideal(ElemSet::EMPTY)
    }

    pub fn members(self) -> ElemSet {
        self.0
    }

    pub fn contains(self, e: ElemId) -> bool {
        self.0.contains(e)
    }
}

/// An upward closed set of elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CoIdeal(ElemSet);

impl CoIdeal {
    pub fn new(m: &StabilisationMonoid, members: ElemSet) -> Result<Self> {
        match members.iter().find(|&x| !m.up(x).is_subset(members)) {
            Some(x) => Err(Error::Structure(format!(
                "{} is not upward closed above {}",
                members.display(m),
                m.name(x)
            ))),
            None => Ok(CoIdeal(members)),
        }
    }

    pub fn members(self) -> ElemSet {
        self.0
    }

    pub fn contains(self, e: ElemId) -> bool {
        self.0.contains(e)
    }
}

pub(crate) fn down_set(m: &StabilisationMonoid, s: ElemSet) -> ElemSet {
    s.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(m.down(x)))
}

pub(crate) fn up_set(m: &StabilisationMonoid, s: ElemSet) -> ElemSet {
    s.iter().fold(ElemSet::EMPTY, |acc, x| acc.union(m.up(x)))
}

/// The least ideal containing `s`.
pub fn downward_close(m: &StabilisationMonoid, s: ElemSet) -> Ideal {
    Ideal(down_set(m, s))
}

/// The least co-ideal containing `s`.
pub fn upward_close(m: &StabilisationMonoid, s: ElemSet) -> CoIdeal {
    CoIdeal(up_set(m, s))
}

/// Componentwise product M × M′; the pair (x, y) has index x·|M′| + y and
/// name `(x,y)`.
pub fn product_monoid(a: &StabilisationMonoid, b: &StabilisationMonoid) -> Result<StabilisationMonoid> {
    let (ma, mb) = (a.size(), b.size());
    let m = ma * mb;
    if m > MAX_ELEMENTS {
        return Err(Error::CapExceeded {
            what: "product monoid".into(),
            size: m,
            limit: MAX_ELEMENTS,
        });
    }
    let split = |i: usize| (ElemId::new(i / mb), ElemId::new(i % mb));
    let join = |x: ElemId, y: ElemId| ElemId::new(x.index() * mb + y.index());
    let names = (0..m)
        .map(|i| {
            let (x, y) = split(i);
            format!("({},{})", a.name(x), b.name(y))
        })
        .collect();
    let table = (0..m)
        .map(|i| {
            let (x, y) = split(i);
            (0..m)
                .map(|j| {
                    let (x2, y2) = split(j);
                    join(a.mul(x, x2), b.mul(y, y2))
                })
                .collect()
        })
        .collect();
    let leq = (0..m)
        .map(|i| {
            let (x, y) = split(i);
            (0..m)
                .map(|j| {
                    let (x2, y2) = split(j);
                    a.leq(x, x2) && b.leq(y, y2)
                })
                .collect()
        })
        .collect();
    let sharp = (0..m)
        .map(|i| {
            let (x, y) = split(i);
            Some(join(a.sharp(x)?, b.sharp(y)?))
        })
        .collect();
    StabilisationMonoid::from_parts(names, join(a.unit(), b.unit()), table, leq, sharp)
}

/// A map between two monoids, to be checked by [`check_morphism`].
#[derive(Debug, Clone)]
pub struct Morphism<'a> {
    pub source: &'a StabilisationMonoid,
    pub target: &'a StabilisationMonoid,
    pub map: Vec<ElemId>,
}

impl<'a> Morphism<'a> {
    pub fn identity(m: &'a StabilisationMonoid) -> Self {
        Morphism {
            source: m,
            target: m,
            map: m.elements().collect(),
        }
    }

    pub fn apply(&self, x: ElemId) -> ElemId {
        self.map[x.index()]
    }
}

/// Checks preservation of unit, product, order and ♯.
pub fn check_morphism(mu: &Morphism<'_>) -> Result<Vec<Violation>> {
    let (s, t) = (mu.source, mu.target);
    if mu.map.len() != s.size() {
        return Err(Error::Structure(format!(
            "morphism map has {} entries for a source of size {}",
            mu.map.len(),
            s.size()
        )));
    }
    if mu.map.iter().any(|e| e.index() >= t.size()) {
        return Err(Error::Structure("morphism image out of range".into()));
    }
    let mut out = Vec::new();
    if mu.apply(s.unit()) != t.unit() {
        out.push(Violation {
            axiom: Axiom::MorphismUnit,
            witness: vec![s.unit()],
        });
    }
    'prod: for x in s.elements() {
        for y in s.elements() {
            if mu.apply(s.mul(x, y)) != t.mul(mu.apply(x), mu.apply(y)) {
                out.push(Violation {
                    axiom: Axiom::MorphismProduct,
                    witness: vec![x, y],
                });
                break 'prod;
            }
        }
    }
    'ord: for x in s.elements() {
        for y in s.up(x).iter() {
            if !t.leq(mu.apply(x), mu.apply(y)) {
                out.push(Violation {
                    axiom: Axiom::MorphismOrder,
                    witness: vec![x, y],
                });
                break 'ord;
            }
        }
    }
    for e in s.elements().filter(|&e| s.is_idempotent(e)) {
        let lhs = s.sharp(e).map(|se| mu.apply(se));
        let rhs = t.sharp(mu.apply(e));
        if lhs != rhs {
            out.push(Violation {
                axiom: Axiom::MorphismSharp,
                witness: vec![e],
            });
            break;
        }
    }
    Ok(out)
}

/// μ⁻¹(I′).
pub fn pullback_ideal(mu: &Morphism<'_>, target_ideal: Ideal) -> Ideal {
    Ideal(
        mu.source
            .elements()
            .filter(|&x| target_ideal.contains(mu.apply(x)))
            .collect(),
    )
}

/// An ambient structure from which a finite sub-stabilisation monoid can be
/// carved out by [`generate`].
pub trait Carrier {
    type Elem: Clone + Eq + Hash;

    fn unit(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Only called on idempotents.
    fn sharp(&self, e: &Self::Elem) -> Self::Elem;
    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    fn name(&self, a: &Self::Elem) -> String;
}

/// The sub-structure generated by some elements, with the backing values of
/// each generated element (index `i` of `elements` is `ElemId(i)`).
#[derive(Debug, Clone)]
pub struct Generated<T> {
    pub elements: Vec<T>,
    pub monoid: StabilisationMonoid,
}

impl<T: Eq> Generated<T> {
    pub fn index_of(&self, x: &T) -> Option<ElemId> {
        self.elements.iter().position(|y| y == x).map(ElemId::new)
    }
}

/// Least subset containing the unit and `gens`, closed under product and ♯
/// of idempotents, in discovery order (unit first, then generators).
pub fn generate<C: Carrier>(c: &C, gens: &[C::Elem], what: &str) -> Result<Generated<C::Elem>> {
    let mut elements: Vec<C::Elem> = Vec::new();
    let mut index: HashMap<C::Elem, usize> = HashMap::new();
    let mut push = |x: C::Elem, elements: &mut Vec<C::Elem>| -> Result<usize> {
        if let Some(&i) = index.get(&x) {
            return Ok(i);
        }
        if elements.len() == MAX_ELEMENTS {
            return Err(Error::CapExceeded {
                what: what.to_string(),
                size: MAX_ELEMENTS + 1,
                limit: MAX_ELEMENTS,
            });
        }
        index.insert(x.clone(), elements.len());
        elements.push(x);
        Ok(elements.len() - 1)
    };
    push(c.unit(), &mut elements)?;
    for g in gens {
        push(g.clone(), &mut elements)?;
    }
    let mut i = 0;
    while i < elements.len() {
        for j in 0..=i {
            let p = c.mul(&elements[i], &elements[j]);
            push(p, &mut elements)?;
            let q = c.mul(&elements[j], &elements[i]);
            push(q, &mut elements)?;
        }
        let x = elements[i].clone();
        if c.mul(&x, &x) == x {
            push(c.sharp(&x), &mut elements)?;
        }
        i += 1;
    }
    tabulate(c, elements)
}

/// Builds the tables of a finite subset of a carrier that contains the unit
/// and is closed under product and ♯; element i of the list is `ElemId(i)`.
pub fn tabulate<C: Carrier>(c: &C, elements: Vec<C::Elem>) -> Result<Generated<C::Elem>> {
    let m = elements.len();
    if m > MAX_ELEMENTS {
        return Err(Error::CapExceeded {
            what: "tabulated monoid".into(),
            size: m,
            limit: MAX_ELEMENTS,
        });
    }
    let index: HashMap<&C::Elem, usize> = elements.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let lookup = |x: &C::Elem| -> Result<usize> {
        index
            .get(x)
            .copied()
            .ok_or_else(|| Error::Structure(format!("{} is outside the tabulated set", c.name(x))))
    };
    let unit = ElemId::new(lookup(&c.unit())?);
    let mut table = Vec::with_capacity(m);
    for a in &elements {
        table.push(
            elements
                .iter()
                .map(|b| lookup(&c.mul(a, b)).map(ElemId::new))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    let names = elements.iter().map(|x| c.name(x)).collect();
    let leq = elements
        .iter()
        .map(|a| elements.iter().map(|b| c.leq(a, b)).collect())
        .collect();
    let mut sharp = vec![None; m];
    for (e, slot) in sharp.iter_mut().enumerate() {
        if table[e][e].index() == e {
            *slot = Some(ElemId::new(lookup(&c.sharp(&elements[e]))?));
        }
    }
    let monoid = StabilisationMonoid::from_parts(names, unit, table, leq, sharp)?;
    Ok(Generated { elements, monoid })
}

/// Pairs from two monoids, as a [`Carrier`].
pub struct PairCarrier<'a> {
    pub left: &'a StabilisationMonoid,
    pub right: &'a StabilisationMonoid,
}

impl Carrier for PairCarrier<'_> {
    type Elem = (ElemId, ElemId);

    fn unit(&self) -> Self::Elem {
        (self.left.unit(), self.right.unit())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        (self.left.mul(a.0, b.0), self.right.mul(a.1, b.1))
    }

    fn sharp(&self, e: &Self::Elem) -> Self::Elem {
        (
            self.left.sharp(e.0).expect("sharp of idempotent"),
            self.right.sharp(e.1).expect("sharp of idempotent"),
        )
    }

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.left.leq(a.0, b.0) && self.right.leq(a.1, b.1)
    }

    fn name(&self, a: &Self::Elem) -> String {
        format!("({},{})", self.left.name(a.0), self.right.name(a.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn counta() -> StabilisationMonoid {
        StabilisationMonoid::from_names(
            &["b", "a", "0"],
            "b",
            &[&["b", "a", "0"], &["a", "a", "0"], &["0", "0", "0"]],
            &[("0", "a")],
            &[("b", "b"), ("a", "0"), ("0", "0")],
        )
        .unwrap()
    }

    fn e(m: &StabilisationMonoid, s: &str) -> ElemId {
        m.elem(s).unwrap()
    }

    #[test]
    fn elemset_basics() {
        let mut s = ElemSet::EMPTY;
        assert!(s.insert(ElemId(3)));
        assert!(!s.insert(ElemId(3)));
        s.insert(ElemId(63));
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![ElemId(3), ElemId(63)]);
        assert_eq!(s.len(), 2);
        assert_eq!(ElemSet::full(64).len(), 64);
        assert_eq!(s.first(), Some(ElemId(3)));
    }

    #[test]
    fn counta_is_valid() {
        assert_eq!(validate_axioms(&counta()), vec![]);
    }

    #[test]
    fn pi_on_counta() {
        let m = counta();
        assert_eq!(pi_eval(&m, &[e(&m, "a"), e(&m, "b")]), e(&m, "a"));
        assert_eq!(pi_eval(&m, &[]), e(&m, "b"));
    }

    #[test]
    fn closures() {
        let m = counta();
        let a = ElemSet::singleton(e(&m, "a"));
        assert_eq!(downward_close(&m, a).members(), a.with(e(&m, "0")));
        assert!(downward_close(&m, ElemSet::EMPTY).members().is_empty());
        let z = ElemSet::singleton(e(&m, "0"));
        assert_eq!(upward_close(&m, z).members(), z.with(e(&m, "a")));
    }

    #[test]
    fn cyclic_order_rejected() {
        let r = StabilisationMonoid::from_names(
            &["1", "x"],
            "1",
            &[&["1", "x"], &["x", "x"]],
            &[("1", "x"), ("x", "1")],
            &[("1", "1"), ("x", "x")],
        );
        assert!(matches!(r, Err(Error::Structure(_))));
    }

    #[test]
    fn bad_shape_is_structural() {
        let r = StabilisationMonoid::from_parts(
            vec!["1".into(), "x".into()],
            ElemId(0),
            vec![vec![ElemId(0), ElemId(1)]],
            vec![vec![true, false], vec![false, true]],
            vec![Some(ElemId(0)), None],
        );
        assert!(matches!(r, Err(Error::Structure(_))));
    }

    #[test]
    fn product_of_counta() {
        let m = counta();
        let p = product_monoid(&m, &m).unwrap();
        assert_eq!(p.size(), 9);
        assert_eq!(p.name(p.unit()), "(b,b)");
        let ab = p.elem("(a,b)").unwrap();
        let ba = p.elem("(b,a)").unwrap();
        assert_eq!(p.name(p.mul(ab, ba)), "(a,a)");
        assert_eq!(p.name(p.sharp(p.elem("(a,a)").unwrap()).unwrap()), "(0,0)");
        assert!(validate_axioms(&p).is_empty());
    }

    #[test]
    fn generated_pairs_cover_product() {
        let m = counta();
        let c = PairCarrier { left: &m, right: &m };
        let (a, b) = (e(&m, "a"), e(&m, "b"));
        let g = generate(&c, &[(a, b), (b, a)], "joint").unwrap();
        assert_eq!(g.monoid.size(), 9);
        assert!(validate_axioms(&g.monoid).is_empty());
    }

    #[test]
    fn morphism_sharp_violation() {
        let m = counta();
        let mu = Morphism {
            source: &m,
            target: &m,
            map: vec![e(&m, "b"), e(&m, "b"), e(&m, "0")],
        };
        let report = check_morphism(&mu).unwrap();
        assert!(report
            .iter()
            .any(|v| v.axiom == Axiom::MorphismSharp && v.witness == vec![e(&m, "a")]));
        assert!(check_morphism(&Morphism::identity(&m)).unwrap().is_empty());
    }
}
