//! The small monoids and recognisers used throughout the examples.

use crate::algebra::{ElemSet, StabilisationMonoid};
use crate::error::{Error, Result};
use crate::recogniser::Recogniser;

/// Counting monoid over {b, a, 0} (unit b): b is "no a", a is "a few a's",
/// 0 is "many a's"; a♯ = 0 and 0 ≤ a.
pub fn counta() -> StabilisationMonoid {
    StabilisationMonoid::from_names(
        &["b", "a", "0"],
        "b",
        &[&["b", "a", "0"], &["a", "a", "0"], &["0", "0", "0"]],
        &[("0", "a")],
        &[("b", "b"), ("a", "0"), ("0", "0")],
    )
    .expect("counta tables are well formed")
}

/// Longest block monoid over {1, a, b, 0}: a♯ = 0, b♯ = b, 0 ≤ a, 0 ≤ b.
pub fn sega() -> StabilisationMonoid {
    StabilisationMonoid::from_names(
        &["1", "a", "b", "0"],
        "1",
        &[
            &["1", "a", "b", "0"],
            &["a", "a", "b", "0"],
            &["b", "b", "b", "0"],
            &["0", "0", "0", "0"],
        ],
        &[("0", "a"), ("0", "b")],
        &[("1", "1"), ("a", "0"), ("b", "b"), ("0", "0")],
    )
    .expect("sega tables are well formed")
}

/// Number of occurrences of the `counted` symbols, on counta.
pub fn letter_count(alphabet: &[String], counted: &[&str]) -> Result<Recogniser> {
    let m = counta();
    let (a, b, z) = (m.elem("a").unwrap(), m.elem("b").unwrap(), m.elem("0").unwrap());
    let h = alphabet
        .iter()
        .map(|s| if counted.contains(&s.as_str()) { a } else { b })
        .collect();
    Recogniser::new(m, alphabet.to_vec(), h, ElemSet::singleton(z))
}

/// Word length, on counta with every letter ↦ a.
pub fn size_recogniser(alphabet: &[String]) -> Result<Recogniser> {
    let all: Vec<&str> = alphabet.iter().map(String::as_str).collect();
    letter_count(alphabet, &all)
}

/// Longest block of consecutive `letter`s, on sega.
pub fn longest_block(alphabet: &[String], letter: &str) -> Result<Recogniser> {
    if !alphabet.iter().any(|s| s == letter) {
        return Err(Error::UnknownSymbol(letter.to_string()));
    }
    let m = sega();
    let (a, b, z) = (m.elem("a").unwrap(), m.elem("b").unwrap(), m.elem("0").unwrap());
    let h = alphabet.iter().map(|s| if s == letter { a } else { b }).collect();
    Recogniser::new(m, alphabet.to_vec(), h, ElemSet::singleton(z))
}

/// The constant 0 function: any letter images, empty ideal.
pub fn constant_zero(alphabet: &[String]) -> Result<Recogniser> {
    let m = counta();
    let b = m.unit();
    Recogniser::new(m, alphabet.to_vec(), vec![b; alphabet.len()], ElemSet::EMPTY)
}
