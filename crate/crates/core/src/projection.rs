//! Ideal and co-ideal powerset monoids, inf- and sup-projections.

use std::collections::{BTreeSet, HashSet};

use crate::algebra::{
    down_set, generate, tabulate, up_set, validate_axioms, Carrier, ElemId, ElemSet, Generated, StabilisationMonoid,
    MAX_ELEMENTS,
};
use crate::error::{Error, Result};
use crate::recogniser::Recogniser;
use crate::sharpexpr::sharp_closure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowersetKind {
    /// Downward closed sets ordered by ⊆.
    Ideal,
    /// Upward closed sets ordered by ⊇.
    CoIdeal,
}

/// Closed subsets of a base monoid with product {a·b} closed, and ♯ the
/// closed strict ♯-closure.
pub struct PowersetCarrier<'a> {
    pub base: &'a StabilisationMonoid,
    pub kind: PowersetKind,
}

impl PowersetCarrier<'_> {
    pub fn close(&self, s: ElemSet) -> ElemSet {
        match self.kind {
            PowersetKind::Ideal => down_set(self.base, s),
            PowersetKind::CoIdeal => up_set(self.base, s),
        }
    }

    fn is_closed(&self, s: ElemSet) -> bool {
        self.close(s) == s
    }
}

impl Carrier for PowersetCarrier<'_> {
    type Elem = ElemSet;

    fn unit(&self) -> ElemSet {
        self.close(ElemSet::singleton(self.base.unit()))
    }

    fn mul(&self, a: &ElemSet, b: &ElemSet) -> ElemSet {
        self.close(self.base.mul_sets(*a, *b))
    }

    fn sharp(&self, e: &ElemSet) -> ElemSet {
        self.close(sharp_closure(self.base, *e).strict)
    }

    fn leq(&self, a: &ElemSet, b: &ElemSet) -> bool {
        match self.kind {
            PowersetKind::Ideal => a.is_subset(*b),
            PowersetKind::CoIdeal => b.is_subset(*a),
        }
    }

    fn name(&self, a: &ElemSet) -> String {
        a.display(self.base)
    }
}

/// A powerset monoid with the subset behind each element.
#[derive(Debug, Clone)]
pub struct PowersetMonoid {
    pub base: StabilisationMonoid,
    pub kind: PowersetKind,
    pub sets: Vec<ElemSet>,
    pub monoid: StabilisationMonoid,
}

impl PowersetMonoid {
    pub fn element_of(&self, s: ElemSet) -> Option<ElemId> {
        self.sets.iter().position(|&x| x == s).map(ElemId::new)
    }
}

/// All closed subsets, in increasing order of their bit masks.
fn enumerate_closed(c: &PowersetCarrier<'_>) -> Result<Vec<ElemSet>> {
    let base = c.base;
    let mut found: BTreeSet<ElemSet> = BTreeSet::new();
    let mut stack = vec![ElemSet::EMPTY];
    found.insert(ElemSet::EMPTY);
    while let Some(s) = stack.pop() {
        for x in base.elements().filter(|&x| !s.contains(x)) {
            let bigger = s.with(x);
            if c.is_closed(bigger) && found.insert(bigger) {
                if found.len() > MAX_ELEMENTS {
                    return Err(Error::CapExceeded {
                        what: format!("{:?} powerset", c.kind).to_lowercase(),
                        size: found.len(),
                        limit: MAX_ELEMENTS,
                    });
                }
                stack.push(bigger);
            }
        }
    }
    Ok(found.into_iter().collect())
}

fn full_powerset(m: &StabilisationMonoid, kind: PowersetKind) -> Result<PowersetMonoid> {
    let c = PowersetCarrier { base: m, kind };
    let sets = enumerate_closed(&c)?;
    let Generated { elements, monoid } = tabulate(&c, sets)?;
    let report = validate_axioms(&monoid);
    if !report.is_empty() {
        let parts: Vec<String> = report.iter().map(|v| v.describe(&monoid)).collect();
        return Err(Error::Axioms(parts.join("; ")));
    }
    Ok(PowersetMonoid {
        base: m.clone(),
        kind,
        sets: elements,
        monoid,
    })
}

/// M↓: every ideal of M, ordered by inclusion.
pub fn ideal_powerset(m: &StabilisationMonoid) -> Result<PowersetMonoid> {
    full_powerset(m, PowersetKind::Ideal)
}

/// M↑: every co-ideal of M, ordered by reverse inclusion.
pub fn coideal_powerset(m: &StabilisationMonoid) -> Result<PowersetMonoid> {
    full_powerset(m, PowersetKind::CoIdeal)
}

/// Β in order of first appearance along Σ, and the preimage of each.
fn split_map(f: &Recogniser, z: &[(String, String)]) -> Result<(Vec<String>, Vec<ElemSet>)> {
    let mut targets: Vec<String> = Vec::new();
    let mut pre: Vec<ElemSet> = Vec::new();
    let mut seen = HashSet::new();
    for (a, _) in z {
        if f.symbol(a).is_none() {
            return Err(Error::UnknownSymbol(a.clone()));
        }
        if !seen.insert(a) {
            return Err(Error::InvalidArgument(format!("symbol `{a}` mapped twice")));
        }
    }
    for (i, a) in f.alphabet.iter().enumerate() {
        let b = &z
            .iter()
            .find(|(x, _)| x == a)
            .ok_or_else(|| Error::InvalidArgument(format!("letter map misses `{a}`")))?
            .1;
        let k = match targets.iter().position(|t| t == b) {
            Some(k) => k,
            None => {
                targets.push(b.clone());
                pre.push(ElemSet::EMPTY);
                targets.len() - 1
            }
        };
        pre[k].insert(f.h[i]);
    }
    Ok((targets, pre))
}

fn project(f: &Recogniser, z: &[(String, String)], kind: PowersetKind, full: bool) -> Result<Recogniser> {
    let (targets, pre) = split_map(f, z)?;
    let c = PowersetCarrier { base: &f.monoid, kind };
    let gens: Vec<ElemSet> = pre.iter().map(|&s| c.close(s)).collect();
    let (sets, monoid) = if full {
        let p = full_powerset(&f.monoid, kind)?;
        (p.sets, p.monoid)
    } else {
        let what = match kind {
            PowersetKind::Ideal => "inf-projection monoid",
            PowersetKind::CoIdeal => "sup-projection monoid",
        };
        let g = generate(&c, &gens, what)?;
        (g.elements, g.monoid)
    };
    let h = gens
        .iter()
        .map(|g| {
            sets.iter()
                .position(|s| s == g)
                .map(ElemId::new)
                .expect("generator present")
        })
        .collect();
    let i = f.ideal.members();
    let k: ElemSet = sets
        .iter()
        .enumerate()
        .filter(|(_, &s)| match kind {
            PowersetKind::Ideal => s.is_subset(i),
            PowersetKind::CoIdeal => s.intersects(i),
        })
        .map(|(x, _)| ElemId::new(x))
        .collect();
    Recogniser::new(monoid, targets, h, k)
}

/// inf over z-preimages, on the sub-monoid of M↓ generated by the images
/// H(b) = h(z⁻¹(b))↓, with K = {J : J ⊆ I}.
pub fn inf_project(f: &Recogniser, z: &[(String, String)]) -> Result<Recogniser> {
    project(f, z, PowersetKind::Ideal, false)
}

/// As [`inf_project`] but over the whole of M↓.
pub fn inf_project_full(f: &Recogniser, z: &[(String, String)]) -> Result<Recogniser> {
    project(f, z, PowersetKind::Ideal, true)
}

/// sup over z-preimages, on the sub-monoid of M↑ generated by
/// H(b) = h(z⁻¹(b))↑, with K = {J : J ∩ I ≠ ∅}.
pub fn sup_project(f: &Recogniser, z: &[(String, String)]) -> Result<Recogniser> {
    project(f, z, PowersetKind::CoIdeal, false)
}

/// As [`sup_project`] but over the whole of M↑.
pub fn sup_project_full(f: &Recogniser, z: &[(String, String)]) -> Result<Recogniser> {
    project(f, z, PowersetKind::CoIdeal, true)
}

/// Parses `a:c,b:c` into letter-map pairs.
pub fn parse_letter_map(src: &str) -> Result<Vec<(String, String)>> {
    src.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|pair| {
            pair.split_once(':')
                .map(|(a, b)| (a.trim().to_string(), b.trim().to_string()))
                .filter(|(a, b)| !a.is_empty() && !b.is_empty())
                .ok_or_else(|| Error::InvalidArgument(format!("bad letter map entry `{pair}`")))
        })
        .collect()
}
