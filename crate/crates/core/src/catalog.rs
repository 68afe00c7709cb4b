//! Named example knots, and a local search that realizes a letter word as
//! the γ word of a one-component chord diagram.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diagram::{Basepoint, Chord, FreeLink};
use crate::group::{parse_word, Letter};
use crate::invariant::{gamma_word, invariant_l, InvariantError};
use crate::parity::gaussian_labels;

/// The word whose Cayley point is `(0, -16)`.
pub const K1_WORD: &str = "(b' a)^7 b' b (a b)^7";

/// A 15-chord knot whose γ word from gap 0, read forward, is [`K1_WORD`].
pub const K1_CODE: &str = "1 2 1 3 4 5 4 6 7 8 9 10 9 11 7 12 11 13 2 14 5 13 6 12 10 15 3 14 8 15";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub code: &'static str,
    #[serde(rename = "expectedL")]
    pub expected_l: Option<u64>,
    pub note: &'static str,
}

impl CatalogEntry {
    pub fn link(&self) -> FreeLink {
        self.code.parse().expect("catalog codes parse")
    }

    /// Checks that the code parses and that `L` is the expected value.
    pub fn validate(&self) -> Result<u64, String> {
        let link: FreeLink = self.code.parse().map_err(|e| format!("{}: {e}", self.name))?;
        let l = invariant_l(&link).map_err(|e| format!("{}: {e}", self.name))?.l;
        match self.expected_l {
            Some(want) if want != l => Err(format!("{}: L = {l}, expected {want}", self.name)),
            _ => Ok(l),
        }
    }
}

pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry { name: "unknot", code: "()", expected_l: Some(0), note: "circle without crossings" },
        CatalogEntry { name: "kink", code: "1 1", expected_l: Some(0), note: "one first-move loop" },
        CatalogEntry {
            name: "odd-pair",
            code: "1 2 1 2",
            expected_l: Some(0),
            note: "two linked odd chords; word b b b b",
        },
        CatalogEntry {
            name: "trefoil-shadow",
            code: "1 2 3 1 2 3",
            expected_l: Some(0),
            note: "three mutually linked even chords; trivial as a free knot",
        },
        CatalogEntry {
            name: "carter-underlying",
            code: "1 2 3 1 3 2",
            expected_l: Some(0),
            note: "free knot under a non-slice flat knot; a second move then a first move trivialize it",
        },
        CatalogEntry {
            name: "K1",
            code: K1_CODE,
            expected_l: Some(16),
            note: "realizes (b' a)^7 b' b (a b)^7; L = 16 obstructs sliceness",
        },
    ]
}

pub fn lookup(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// Whether some basepoint and direction of `link` reads `word`.
pub fn realizes(link: &FreeLink, word: &[Letter]) -> Result<bool, InvariantError> {
    for base in link.basepoints() {
        if gamma_word(link, base)? == word {
            return Ok(true);
        }
    }
    Ok(false)
}

fn label_errors(seq: &[Chord], word: &[Letter]) -> usize {
    let link = FreeLink::from_raw(vec![seq.to_vec()]);
    let table = gaussian_labels(&link).expect("one component");
    seq.iter().zip(word).filter(|(c, l)| table.get(**c).map(|t| t.letter()) != Some(**l)).count()
}

/// Searches for a one-component diagram whose γ word from gap 0, read
/// forward, is `word`. Positions are paired within each letter class and
/// pairs are rewired while the number of mislabeled positions does not
/// grow; stuck runs restart. Returns `None` when the letter counts are odd
/// or the budget runs out.
pub fn realize_word(word: &[Letter], seed: u64, restarts: usize, steps: usize) -> Option<FreeLink> {
    let classes: Vec<Vec<usize>> =
        Letter::ALL.iter().map(|l| (0..word.len()).filter(|&i| word[i] == *l).collect()).collect();
    if classes.iter().any(|c| c.len() % 2 != 0) {
        return None;
    }
    if word.is_empty() {
        return Some(FreeLink::unknot());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..restarts {
        // pairs[k] = (i, j): chord k + 1 joins positions i and j.
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let mut class_of = Vec::new();
        for (ci, class) in classes.iter().enumerate() {
            let mut c = class.clone();
            c.shuffle(&mut rng);
            for p in c.chunks(2) {
                pairs.push((p[0], p[1]));
                class_of.push(ci);
            }
        }
        let seq_of = |pairs: &[(usize, usize)]| {
            let mut seq = vec![Chord(0); word.len()];
            for (k, &(i, j)) in pairs.iter().enumerate() {
                seq[i] = Chord(k as u32 + 1);
                seq[j] = Chord(k as u32 + 1);
            }
            seq
        };
        let mut cost = label_errors(&seq_of(&pairs), word);
        for _ in 0..steps {
            if cost == 0 {
                break;
            }
            let a = rng.gen_range(0..pairs.len());
            let b = rng.gen_range(0..pairs.len());
            if a == b || class_of[a] != class_of[b] {
                continue;
            }
            let (old_a, old_b) = (pairs[a], pairs[b]);
            if rng.gen_bool(0.5) {
                pairs[a] = (old_a.0, old_b.0);
                pairs[b] = (old_a.1, old_b.1);
            } else {
                pairs[a] = (old_a.0, old_b.1);
                pairs[b] = (old_a.1, old_b.0);
            }
            let next = label_errors(&seq_of(&pairs), word);
            if next <= cost {
                cost = next;
            } else {
                pairs[a] = old_a;
                pairs[b] = old_b;
            }
        }
        if cost == 0 {
            let link = FreeLink::from_raw(vec![seq_of(&pairs)]);
            debug_assert_eq!(gamma_word(&link, Basepoint::default()).ok().as_deref(), Some(word));
            return Some(link);
        }
    }
    None
}

/// [`realize_word`] on a word in the textual syntax of [`parse_word`].
pub fn realize_word_text(text: &str, seed: u64) -> Option<FreeLink> {
    let word = parse_word(text).ok()?;
    realize_word(&word, seed, 200, 20_000)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::eval_word;
    use crate::moves::simplify;

    #[test]
    fn entries_validate() {
        for e in catalog() {
            assert_eq!(e.validate().map(Some), Ok(e.expected_l), "{}", e.name);
        }
    }

    #[test]
    fn k1_reads_its_word() {
        let k1: FreeLink = K1_CODE.parse().unwrap();
        assert_eq!(k1.num_chords(), 15);
        let word = parse_word(K1_WORD).unwrap();
        assert_eq!(gamma_word(&k1, Basepoint::default()).unwrap(), word);
        assert_eq!(eval_word(&word), crate::CayleyPoint::new(0, -16));
    }

    #[test]
    fn carter_underlying_is_trivial() {
        assert_eq!(simplify(&lookup("carter-underlying").unwrap().link()).to_string(), "()");
    }

    #[test]
    fn search_realizes_small_and_large_words() {
        let w = parse_word("b b b b").unwrap();
        let d = realize_word(&w, 1, 10, 1000).unwrap();
        assert!(realizes(&d, &w).unwrap());
        let k = realize_word_text(K1_WORD, 7).expect("realized");
        assert_eq!(k.num_chords(), 15);
        assert_eq!(invariant_l(&k).unwrap().l, 16);
        assert!(realizes(&k, &parse_word(K1_WORD).unwrap()).unwrap());
        assert_eq!(realize_word(&parse_word("a b").unwrap(), 0, 5, 100), None);
    }
}
