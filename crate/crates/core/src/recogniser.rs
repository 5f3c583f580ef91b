//! Recognisers (M, h, I) and the domination, boundedness and divergence
//! decisions, plus min/max and letter substitution.

use std::fmt;

use crate::algebra::{generate, ElemId, ElemSet, Ideal, PairCarrier, StabilisationMonoid};
use crate::catalogue;
use crate::error::{Error, Result};
use crate::sharpexpr::{sharp_closure, SharpExpr};

/// A cost function presented by a monoid, a letter map and an ideal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recogniser {
    pub monoid: StabilisationMonoid,
    pub alphabet: Vec<String>,
    pub h: Vec<ElemId>,
    pub ideal: Ideal,
}

impl Recogniser {
    pub fn new(monoid: StabilisationMonoid, alphabet: Vec<String>, h: Vec<ElemId>, ideal: ElemSet) -> Result<Self> {
        if alphabet.len() != h.len() {
            return Err(Error::Structure(format!(
                "{} symbols but {} letter images",
                alphabet.len(),
                h.len()
            )));
        }
        for (i, s) in alphabet.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) || s.contains(',') {
                return Err(Error::Structure(format!("bad symbol `{s}`")));
            }
            if alphabet[..i].contains(s) {
                return Err(Error::Structure(format!("symbol `{s}` declared twice")));
            }
        }
        if h.iter().any(|x| x.index() >= monoid.size()) || !ideal.is_subset(monoid.all()) {
            return Err(Error::Structure("letter image or ideal member out of range".into()));
        }
        let ideal = Ideal::new(&monoid, ideal)?;
        Ok(Recogniser {
            monoid,
            alphabet,
            h,
            ideal,
        })
    }

    pub fn symbol(&self, s: &str) -> Option<usize> {
        self.alphabet.iter().position(|a| a == s)
    }

    /// Splits on commas or whitespace when present, otherwise reads one
    /// symbol per character.
    pub fn parse_word(&self, src: &str) -> Result<Vec<usize>> {
        split_word(src)
            .into_iter()
            .map(|s| self.symbol(&s).ok_or(Error::UnknownSymbol(s)))
            .collect()
    }

    pub fn image(&self, u: &[usize]) -> Result<Vec<ElemId>> {
        u.iter()
            .map(|&i| {
                self.h
                    .get(i)
                    .copied()
                    .ok_or_else(|| Error::UnknownSymbol(format!("#{i}")))
            })
            .collect()
    }

    pub fn letter_images(&self) -> ElemSet {
        self.h.iter().copied().collect()
    }

    /// Lowest-index symbol mapped to `x`.
    fn preimage(&self, x: ElemId) -> Option<&str> {
        self.h.iter().position(|&y| y == x).map(|i| self.alphabet[i].as_str())
    }
}

/// See [`Recogniser::parse_word`].
pub fn split_word(src: &str) -> Vec<String> {
    let src = src.trim();
    if src.contains(',') || src.contains(char::is_whitespace) {
        src.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        src.chars().map(|c| c.to_string()).collect()
    }
}

/// A counterexample to domination: the empty word, or a ♯-expression whose
/// unfoldings form the separating family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Empty,
    Expr(SharpExpr<String>),
}

impl Witness {
    /// The n-unfolding as a word of symbols (empty for `Empty`).
    pub fn unfold(&self, n: usize) -> Result<Vec<String>> {
        match self {
            Witness::Empty => Ok(Vec::new()),
            Witness::Expr(e) => e.unfold(n),
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Empty => f.write_str("()"),
            Witness::Expr(e) => write!(f, "{e}"),
        }
    }
}

/// Outcome of a decision; a witness is present exactly when it fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Decision {
    fn yes() -> Self {
        Decision {
            holds: true,
            witness: None,
        }
    }
}

/// Two recognisers over one alphabet carried by one monoid.
#[derive(Debug, Clone)]
pub struct Joint {
    pub monoid: StabilisationMonoid,
    pub alphabet: Vec<String>,
    pub h: Vec<ElemId>,
    pub left_ideal: Ideal,
    pub right_ideal: Ideal,
    /// The pair of component elements behind each element.
    pub components: Vec<(ElemId, ElemId)>,
}

impl Joint {
    pub fn left(&self) -> Recogniser {
        self.with_ideal(self.left_ideal)
    }

    pub fn right(&self) -> Recogniser {
        self.with_ideal(self.right_ideal)
    }

    fn with_ideal(&self, ideal: Ideal) -> Recogniser {
        Recogniser {
            monoid: self.monoid.clone(),
            alphabet: self.alphabet.clone(),
            h: self.h.clone(),
            ideal,
        }
    }
}

/// Position in `g`'s alphabet of each symbol of `f`'s alphabet.
fn align(f: &Recogniser, g: &Recogniser) -> Result<Vec<usize>> {
    let mismatch = || Error::AlphabetMismatch(format!("{{{}}} vs {{{}}}", f.alphabet.join(","), g.alphabet.join(",")));
    if f.alphabet.len() != g.alphabet.len() {
        return Err(mismatch());
    }
    f.alphabet.iter().map(|s| g.symbol(s).ok_or_else(mismatch)).collect()
}

/// Both recognisers inside the sub-monoid of M_f × M_g generated by the
/// paired letter images; the ideals are the pulled-back I × M_g and
/// M_f × J. Symbols follow `f`'s order.
pub fn joint(f: &Recogniser, g: &Recogniser) -> Result<Joint> {
    let pos = align(f, g)?;
    let carrier = PairCarrier {
        left: &f.monoid,
        right: &g.monoid,
    };
    let gens: Vec<(ElemId, ElemId)> = f.h.iter().zip(&pos).map(|(&x, &j)| (x, g.h[j])).collect();
    let gen = generate(&carrier, &gens, "joint monoid")?;
    let h = gens
        .iter()
        .map(|p| gen.index_of(p).expect("generators are elements"))
        .collect();
    let mut left = ElemSet::EMPTY;
    let mut right = ElemSet::EMPTY;
    for (i, &(x, y)) in gen.elements.iter().enumerate() {
        if f.ideal.contains(x) {
            left.insert(ElemId::new(i));
        }
        if g.ideal.contains(y) {
            right.insert(ElemId::new(i));
        }
    }
    let m = gen.monoid;
    Ok(Joint {
        left_ideal: Ideal::new(&m, left)?,
        right_ideal: Ideal::new(&m, right)?,
        monoid: m,
        alphabet: f.alphabet.clone(),
        h,
        components: gen.elements,
    })
}

/// Holds iff every element of ⟨h(Σ)⟩♯ ∪ {1} in `bad` also lies in `good`.
/// The unit stands for the empty word.
fn kernel(r: &Recogniser, bad: ElemSet, good: ElemSet) -> Decision {
    let m = &r.monoid;
    if bad.contains(m.unit()) && !good.contains(m.unit()) {
        return Decision {
            holds: false,
            witness: Some(Witness::Empty),
        };
    }
    let cl = sharp_closure(m, r.letter_images());
    match cl.order.iter().find(|&&x| bad.contains(x) && !good.contains(x)) {
        None => Decision::yes(),
        Some(&x) => {
            let e = cl.witness(x).expect("closure elements have witnesses");
            let expr = e.map_letters(&|y: &ElemId| r.preimage(*y).expect("letters come from h").to_string());
            Decision {
                holds: false,
                witness: Some(Witness::Expr(expr)),
            }
        }
    }
}

/// f ≼ g: ⟨h(Σ)⟩♯ ∩ I ⊆ J in the joint monoid.
pub fn decide_domination(f: &Recogniser, g: &Recogniser) -> Result<Decision> {
    let j = joint(f, g)?;
    let r = j.left();
    Ok(kernel(&r, j.left_ideal.members(), j.right_ideal.members()))
}

/// f is bounded iff ⟨h(Σ)⟩♯ ∩ I = ∅.
pub fn decide_boundedness(f: &Recogniser) -> Decision {
    kernel(f, f.ideal.members(), ElemSet::EMPTY)
}

/// f diverges iff size ≼ f.
pub fn decide_divergence(f: &Recogniser) -> Result<Decision> {
    let size = catalogue::size_recogniser(&f.alphabet)?;
    decide_domination(&size, f)
}

/// f is bounded over L iff f ≼ χ_L, where `chi` recognises χ_L with a
/// trivially ordered monoid.
pub fn decide_bounded_over(f: &Recogniser, chi: &Recogniser) -> Result<Decision> {
    if !chi.monoid.is_trivially_ordered() {
        return Err(Error::NotCharacteristic(
            "monoid order is not trivial or ♯ is not the identity".into(),
        ));
    }
    decide_domination(f, chi)
}

/// min(f, g): joint monoid with I ∩ J.
pub fn min_rec(f: &Recogniser, g: &Recogniser) -> Result<Recogniser> {
    let j = joint(f, g)?;
    let ideal = j.left_ideal.members().intersection(j.right_ideal.members());
    Ok(j.with_ideal(Ideal::new(&j.monoid, ideal)?))
}

/// max(f, g): joint monoid with I ∪ J.
pub fn max_rec(f: &Recogniser, g: &Recogniser) -> Result<Recogniser> {
    let j = joint(f, g)?;
    let ideal = j.left_ideal.members().union(j.right_ideal.members());
    Ok(j.with_ideal(Ideal::new(&j.monoid, ideal)?))
}

/// f ∘ z̃ for a letter map z: Β → Σ given as (b, z(b)) pairs; Β is taken
/// in the order given.
pub fn precompose(f: &Recogniser, z: &[(String, String)]) -> Result<Recogniser> {
    let h = z
        .iter()
        .map(|(_, a)| {
            f.symbol(a)
                .map(|i| f.h[i])
                .ok_or_else(|| Error::UnknownSymbol(a.clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    let alphabet = z.iter().map(|(b, _)| b.clone()).collect();
    Recogniser::new(f.monoid.clone(), alphabet, h, f.ideal.members())
}
