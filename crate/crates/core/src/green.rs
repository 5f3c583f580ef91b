//! Green's J-relation, regularity and stability of J-classes, ω-powers.

use crate::algebra::{pi_eval, ElemId, ElemSet, StabilisationMonoid};
use crate::error::{Error, Result};

/// The J-preorder of a monoid and its classes.
///
/// Classes are numbered by their least element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JAnalysis {
    /// `j_up[a]` = {b : a ≤_J b}.
    pub j_up: Vec<ElemSet>,
    pub classes: Vec<ElemSet>,
    pub class_of: Vec<usize>,
    pub class_regular: Vec<bool>,
    /// `None` for irregular classes.
    pub class_stable: Vec<Option<bool>>,
    /// The class of e♯ for the idempotents e of a regular class.
    pub sharp_class: Vec<Option<usize>>,
}

impl JAnalysis {
    pub fn j_leq(&self, a: ElemId, b: ElemId) -> bool {
        self.j_up[a.index()].contains(b)
    }

    pub fn j_less(&self, a: ElemId, b: ElemId) -> bool {
        self.j_leq(a, b) && !self.j_leq(b, a)
    }

    pub fn class(&self, e: ElemId) -> usize {
        self.class_of[e.index()]
    }

    pub fn class_set(&self, e: ElemId) -> ElemSet {
        self.classes[self.class(e)]
    }

    pub fn is_stable(&self, c: usize) -> bool {
        self.class_stable[c] == Some(true)
    }

    pub fn is_unstable(&self, c: usize) -> bool {
        self.class_stable[c] == Some(false)
    }
}

/// Two-sided ideal S¹·b·S¹ of each element.
fn two_sided_ideals(m: &StabilisationMonoid) -> Vec<ElemSet> {
    m.elements()
        .map(|b| {
            let mut s = ElemSet::EMPTY;
            for x in m.elements() {
                let xb = m.mul(x, b);
                for y in m.elements() {
                    s.insert(m.mul(xb, y));
                }
            }
            s
        })
        .collect()
}

fn classes_of(m: &StabilisationMonoid, key: &[ElemSet]) -> Vec<usize> {
    let mut class_of = vec![usize::MAX; m.size()];
    let mut next = 0;
    for a in 0..m.size() {
        if class_of[a] != usize::MAX {
            continue;
        }
        for b in a..m.size() {
            if key[b] == key[a] {
                class_of[b] = next;
            }
        }
        next += 1;
    }
    class_of
}

pub fn analyze_j(m: &StabilisationMonoid) -> JAnalysis {
    let ideals = two_sided_ideals(m);
    let j_up: Vec<ElemSet> = m
        .elements()
        .map(|a| m.elements().filter(|&b| ideals[b.index()].contains(a)).collect())
        .collect();
    let class_of = classes_of(m, &ideals);
    let count = class_of.iter().max().map_or(0, |c| c + 1);
    let mut classes = vec![ElemSet::EMPTY; count];
    for e in m.elements() {
        classes[class_of[e.index()]].insert(e);
    }
    let mut class_regular = vec![false; count];
    let mut sharp_class = vec![None; count];
    for e in m.elements().filter(|&e| m.is_idempotent(e)) {
        let c = class_of[e.index()];
        class_regular[c] = true;
        if sharp_class[c].is_none() {
            sharp_class[c] = m.sharp(e).map(|s| class_of[s.index()]);
        }
    }
    let class_stable = (0..count)
        .map(|c| class_regular[c].then(|| sharp_class[c] == Some(c)))
        .collect();
    JAnalysis {
        j_up,
        classes,
        class_of,
        class_regular,
        class_stable,
        sharp_class,
    }
}

/// R-class index of each element (a R b iff a·M = b·M).
pub fn r_classes(m: &StabilisationMonoid) -> Vec<usize> {
    let right: Vec<ElemSet> = m
        .elements()
        .map(|a| m.elements().map(|x| m.mul(a, x)).collect())
        .collect();
    classes_of(m, &right)
}

/// Ω and the ω-powers of every element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaData {
    /// Least common multiple of the least k ≥ 1 with a^k idempotent.
    pub omega: u128,
    pub omega_power: Vec<ElemId>,
    /// (a^Ω)♯.
    pub omega_sharp: Vec<ElemId>,
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least k ≥ 1 with a^k idempotent, and that power.
pub fn idempotent_exponent(m: &StabilisationMonoid, a: ElemId) -> (usize, ElemId) {
    let mut p = a;
    let mut k = 1;
    while !m.is_idempotent(p) {
        p = m.mul(p, a);
        k += 1;
    }
    (k, p)
}

pub fn omega_data(m: &StabilisationMonoid) -> OmegaData {
    let mut omega: u128 = 1;
    let mut omega_power = Vec::with_capacity(m.size());
    for a in m.elements() {
        let (k, p) = idempotent_exponent(m, a);
        omega = omega / gcd(omega, k as u128) * k as u128;
        omega_power.push(p);
    }
    let omega_sharp = omega_power.iter().map(|&e| m.sharp(e).unwrap_or(e)).collect();
    OmegaData {
        omega,
        omega_power,
        omega_sharp,
    }
}

/// Whether `w` is J-smooth: all letters in `class` and π(w) ∈ `class`.
pub fn is_j_smooth(m: &StabilisationMonoid, class: ElemSet, w: &[ElemId]) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::InvalidArgument("J-smoothness of the empty word".into()));
    }
    Ok(w.iter().all(|&x| class.contains(x)) && class.contains(pi_eval(m, w)))
}
