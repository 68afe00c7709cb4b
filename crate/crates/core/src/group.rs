//! The group G = ⟨a, b, b′ | a² = b² = b′² = e, ab = b′a⟩.
//!
//! Eliminating b′ = aba shows G ≅ ℤ/2 * ℤ/2, so elements have a unique
//! alternating normal form over `{a, b}`. Its Cayley graph for the generators
//! `a, b, b′` is the vertical strip `{0, 1} × ℤ`; [`CayleyPoint`] is that view.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("unknown letter {0:?} (expected a, b or b')")]
    UnknownLetter(String),
    #[error("conjugacy class needs first coordinate 0, got ({x}, {y})")]
    NonZeroFirstCoordinate { x: u8, y: i64 },
    #[error("word syntax error: {0}")]
    Syntax(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Letter {
    #[serde(rename = "a")]
    A,
    #[serde(rename = "b")]
    B,
    #[serde(rename = "b'")]
    BPrime,
}

impl Letter {
    pub const ALL: [Letter; 3] = [Letter::A, Letter::B, Letter::BPrime];

    pub fn token(self) -> &'static str {
        match self {
            Letter::A => "a",
            Letter::B => "b",
            Letter::BPrime => "b'",
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Letter {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a" => Ok(Letter::A),
            "b" => Ok(Letter::B),
            "b'" | "b′" => Ok(Letter::BPrime),
            other => Err(GroupError::UnknownLetter(other.to_string())),
        }
    }
}

/// A vertex of the Cayley strip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub struct CayleyPoint {
    pub x: u8,
    pub y: i64,
}

impl CayleyPoint {
    pub const ORIGIN: CayleyPoint = CayleyPoint { x: 0, y: 0 };

    pub fn new(x: u8, y: i64) -> Self {
        assert!(x <= 1, "strip coordinate x must be 0 or 1");
        CayleyPoint { x, y }
    }

    fn sum_is_even(self) -> bool {
        (i64::from(self.x) + self.y).rem_euclid(2) == 0
    }
}

impl fmt::Display for CayleyPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Right multiplication by one generator, as a step on the strip.
///
/// `b′` steps down when `x + y` is even and up when it is odd; this is the
/// reading under which all three generators are involutions.
pub fn step_right(p: CayleyPoint, g: Letter) -> CayleyPoint {
    match g {
        Letter::A => CayleyPoint { x: 1 - p.x, y: p.y },
        Letter::B => CayleyPoint { x: p.x, y: if p.sum_is_even() { p.y + 1 } else { p.y - 1 } },
        Letter::BPrime => CayleyPoint { x: p.x, y: if p.sum_is_even() { p.y - 1 } else { p.y + 1 } },
    }
}

/// Walks a word from the identity.
pub fn eval_word(letters: &[Letter]) -> CayleyPoint {
    letters.iter().fold(CayleyPoint::ORIGIN, |p, &g| step_right(p, g))
}

/// `|y|` for a point on the `x = 0` line: the class `{(0, l), (0, -l)}`.
pub fn conj_class_l(p: CayleyPoint) -> Result<u64, GroupError> {
    if p.x != 0 {
        return Err(GroupError::NonZeroFirstCoordinate { x: p.x, y: p.y });
    }
    Ok(p.y.unsigned_abs())
}

/// Reduced alternating word over `{a, b}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GroupElement {
    word: Vec<Letter>,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn generator(g: Letter) -> Self {
        GroupElement::from_letters(&[g])
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        let mut e = GroupElement::identity();
        for &l in letters {
            match l {
                Letter::BPrime => {
                    e.push(Letter::A);
                    e.push(Letter::B);
                    e.push(Letter::A);
                }
                g => e.push(g),
            }
        }
        e
    }

    fn push(&mut self, g: Letter) {
        debug_assert_ne!(g, Letter::BPrime);
        if self.word.last() == Some(&g) {
            self.word.pop();
        } else {
            self.word.push(g);
        }
    }

    /// The normal form; alternating in `a` and `b`.
    pub fn word(&self) -> &[Letter] {
        &self.word
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    pub fn multiply(&self, other: &GroupElement) -> GroupElement {
        let mut out = self.clone();
        for &g in &other.word {
            out.push(g);
        }
        out
    }

    /// Every generator is an involution, so the inverse is the reversed word.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { word: self.word.iter().rev().copied().collect() }
    }

    pub fn conjugate_by(&self, g: &GroupElement) -> GroupElement {
        g.inverse().multiply(self).multiply(g)
    }

    pub fn coordinates(&self) -> CayleyPoint {
        eval_word(&self.word)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return f.write_str("e");
        }
        let tokens: Vec<&str> = self.word.iter().map(|l| l.token()).collect();
        f.write_str(&tokens.join(" "))
    }
}

/// Formats a letter sequence as space-separated tokens.
pub fn format_word(letters: &[Letter]) -> String {
    letters.iter().map(|l| l.token()).collect::<Vec<_>>().join(" ")
}

/// Parses letter sequences with optional parenthesised repetition groups,
/// for example `(b' a)^7 b' b (a b)^7`.
pub fn parse_word(text: &str) -> Result<Vec<Letter>, GroupError> {
    let tokens = lex(text)?;
    let mut pos = 0;
    let out = parse_seq(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(GroupError::Syntax(format!("unexpected {:?}", tokens[pos])));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Letter(Letter),
    Open,
    Close,
    Pow(usize),
}

fn lex(text: &str) -> Result<Vec<Tok>, GroupError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '(' => {
                out.push(Tok::Open);
                i += 1;
            }
            ')' => {
                out.push(Tok::Close);
                i += 1;
            }
            '^' => {
                let start = i + 1;
                let mut end = start;
                while end < chars.len() && chars[end].is_ascii_digit() {
                    end += 1;
                }
                let digits: String = chars[start..end].iter().collect();
                let n = digits.parse().map_err(|_| GroupError::Syntax("expected exponent after '^'".into()))?;
                out.push(Tok::Pow(n));
                i = end;
            }
            'a' => {
                out.push(Tok::Letter(Letter::A));
                i += 1;
            }
            'b' => {
                if matches!(chars.get(i + 1), Some('\'') | Some('′')) {
                    out.push(Tok::Letter(Letter::BPrime));
                    i += 2;
                } else {
                    out.push(Tok::Letter(Letter::B));
                    i += 1;
                }
            }
            _ => {
                let word: String = chars[i..].iter().take_while(|c| !c.is_whitespace()).collect();
                return Err(GroupError::UnknownLetter(word));
            }
        }
    }
    Ok(out)
}

fn parse_seq(tokens: &[Tok], pos: &mut usize) -> Result<Vec<Letter>, GroupError> {
    let mut out = Vec::new();
    while *pos < tokens.len() {
        let mut item = match &tokens[*pos] {
            Tok::Letter(l) => {
                *pos += 1;
                vec![*l]
            }
            Tok::Open => {
                *pos += 1;
                let inner = parse_seq(tokens, pos)?;
                if tokens.get(*pos) != Some(&Tok::Close) {
                    return Err(GroupError::Syntax("unbalanced '('".into()));
                }
                *pos += 1;
                inner
            }
            Tok::Close => break,
            Tok::Pow(_) => return Err(GroupError::Syntax("'^' must follow a letter or group".into())),
        };
        if let Some(Tok::Pow(n)) = tokens.get(*pos) {
            *pos += 1;
            item = item.repeat(*n);
        }
        out.extend(item);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Vec<Letter> {
        parse_word(s).unwrap()
    }

    #[test]
    fn single_steps() {
        assert_eq!(step_right(CayleyPoint::ORIGIN, Letter::A), CayleyPoint::new(1, 0));
        assert_eq!(step_right(CayleyPoint::ORIGIN, Letter::B), CayleyPoint::new(0, 1));
        // 1 + (-1) = 0 is even, so b steps up.
        assert_eq!(step_right(CayleyPoint::new(1, -1), Letter::B), CayleyPoint::new(1, 0));
    }

    #[test]
    fn every_generator_is_an_involution_on_the_strip() {
        for x in 0..=1 {
            for y in -5..=5 {
                let p = CayleyPoint::new(x, y);
                for g in Letter::ALL {
                    assert_eq!(step_right(step_right(p, g), g), p);
                }
            }
        }
    }

    #[test]
    fn word_examples() {
        assert_eq!(eval_word(&w("a a")), CayleyPoint::ORIGIN);
        assert_eq!(eval_word(&w("a b")), CayleyPoint::new(1, -1));
        assert_eq!(eval_word(&w("b' a")), CayleyPoint::new(1, -1));
        assert_eq!(eval_word(&w("(b' a)^7 b' b (a b)^7")), CayleyPoint::new(0, -16));
        assert_eq!(w("(b' a)^7 b' b (a b)^7").len(), 30);
    }

    #[test]
    fn class_values() {
        assert_eq!(conj_class_l(CayleyPoint::new(0, -16)), Ok(16));
        assert_eq!(conj_class_l(CayleyPoint::ORIGIN), Ok(0));
        assert_eq!(conj_class_l(CayleyPoint::new(1, 3)), Err(GroupError::NonZeroFirstCoordinate { x: 1, y: 3 }));
    }

    #[test]
    fn multiplication_examples() {
        let e = GroupElement::identity();
        assert!(e.multiply(&e).is_identity());
        let b = GroupElement::generator(Letter::B);
        assert!(b.multiply(&b).is_identity());
        let bbp = GroupElement::from_letters(&w("b b'"));
        assert_eq!(bbp.multiply(&bbp).coordinates(), CayleyPoint::new(0, 4));
        assert_eq!(eval_word(&w("(b b')^2")), CayleyPoint::new(0, 4));
    }

    #[test]
    fn normal_form_is_alternating() {
        let g = GroupElement::from_letters(&w("b' b' a b a b' b"));
        assert!(g.word().windows(2).all(|p| p[0] != p[1]));
        assert!(g.word().iter().all(|&l| l != Letter::BPrime));
    }

    #[test]
    fn syntax_errors() {
        assert!(matches!(parse_word("a c"), Err(GroupError::UnknownLetter(_))));
        assert!(matches!(parse_word("(a b"), Err(GroupError::Syntax(_))));
        assert!(matches!(parse_word("^2"), Err(GroupError::Syntax(_))));
        assert_eq!(parse_word("").unwrap(), vec![]);
        assert_eq!(parse_word("b′a").unwrap(), vec![Letter::BPrime, Letter::A]);
    }
}
