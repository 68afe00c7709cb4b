//! The word of a pointed diagram, the invariants `L` and `l`, and the
//! odd-deleting map.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Basepoint, Chord, DiagramError, FreeLink};
use crate::group::{conj_class_l, eval_word, CayleyPoint, GroupError, Letter};
use crate::parity::{gaussian_labels, gaussian_parity, ParityTable};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantResult {
    pub word: Vec<Letter>,
    pub x: u8,
    pub y: i64,
    #[serde(rename = "L")]
    pub l: u64,
    pub parity: ParityTable,
}

impl InvariantResult {
    pub fn point(&self) -> CayleyPoint {
        CayleyPoint::new(self.x, self.y)
    }
}

/// Letters read along the circle from `base`, one per endpoint.
pub fn gamma_word(link: &FreeLink, base: Basepoint) -> Result<Vec<Letter>, InvariantError> {
    let table = gaussian_labels(link)?;
    word_with_table(link, &table, base)
}

fn word_with_table(link: &FreeLink, table: &ParityTable, base: Basepoint) -> Result<Vec<Letter>, InvariantError> {
    let seq = link.knot_sequence()?;
    let order = link.traversal(base)?;
    Ok(order.into_iter().map(|s| table.get(seq[s]).expect("every chord is labeled").letter()).collect())
}

pub fn invariant_l(link: &FreeLink) -> Result<InvariantResult, InvariantError> {
    invariant_at(link, Basepoint::default())
}

/// The full report computed from a chosen basepoint. `L` is the same for
/// every basepoint; `word` and `y` are not.
pub fn invariant_at(link: &FreeLink, base: Basepoint) -> Result<InvariantResult, InvariantError> {
    let parity = gaussian_labels(link)?;
    let word = word_with_table(link, &parity, base)?;
    let point = eval_word(&word);
    let l = conj_class_l(point)?;
    Ok(InvariantResult { word, x: point.x, y: point.y, l, parity })
}

/// Signed second coordinate for a fixed basepoint.
pub fn long_invariant(link: &FreeLink, base: Basepoint) -> Result<i64, InvariantError> {
    let word = gamma_word(link, base)?;
    Ok(eval_word(&word).y)
}

/// Deletes every odd chord and relabels the result canonically.
pub fn f_map(link: &FreeLink) -> Result<FreeLink, InvariantError> {
    let table = gaussian_parity(link)?;
    let odd: BTreeSet<Chord> = table.iter().filter(|(_, l)| l.is_odd()).map(|(c, _)| c).collect();
    Ok(link.delete_chords(&odd).canonical_link())
}

/// Iterates [`f_map`] until nothing changes.
pub fn f_star(link: &FreeLink) -> Result<FreeLink, InvariantError> {
    f_star_trace(link).map(|t| t.last().cloned().expect("trace is nonempty"))
}

/// Every intermediate diagram of the iteration, starting with the
/// canonical form of the input.
pub fn f_star_trace(link: &FreeLink) -> Result<Vec<FreeLink>, InvariantError> {
    let mut trace = vec![link.canonical_link()];
    loop {
        let cur = trace.last().expect("nonempty");
        let next = f_map(cur)?;
        if next.num_chords() == cur.num_chords() {
            return Ok(trace);
        }
        trace.push(next);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::format_word;

    fn link(s: &str) -> FreeLink {
        s.parse().unwrap()
    }

    #[test]
    fn gamma_word_examples() {
        for base in link("1 1").basepoints() {
            assert_eq!(format_word(&gamma_word(&link("1 1"), base).unwrap()), "a a");
        }
        assert_eq!(format_word(&gamma_word(&link("1 2 1 2"), Basepoint::default()).unwrap()), "b b b b");
        assert_eq!(format_word(&gamma_word(&link("1 2 1 3 2 3"), Basepoint::default()).unwrap()), "b' a b' b' a b'");
        assert!(matches!(
            gamma_word(&link("1 ; 1"), Basepoint::default()),
            Err(InvariantError::Diagram(DiagramError::MultiComponent(2)))
        ));
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(invariant_l(&FreeLink::unknot()).unwrap().l, 0);
        let r = invariant_l(&link("1 2 1 2")).unwrap();
        assert_eq!((r.x, r.y, r.l), (0, 0, 0));
        assert_eq!(r.word.len(), 4);
        assert_eq!(long_invariant(&FreeLink::unknot(), Basepoint::default()).unwrap(), 0);
        for base in link("1 2 1 2").basepoints() {
            assert_eq!(long_invariant(&link("1 2 1 2"), base).unwrap(), 0);
        }
    }

    #[test]
    fn json_field_names() {
        let v = serde_json::to_value(invariant_l(&link("1 1")).unwrap()).unwrap();
        assert_eq!(v["word"], serde_json::json!(["a", "a"]));
        assert_eq!(v["L"], 0);
        assert_eq!(v["x"], 0);
        assert_eq!(v["y"], 0);
        assert_eq!(v["parity"]["1"], "Even");
    }

    #[test]
    fn f_map_examples() {
        assert_eq!(f_map(&link("1 2 1 2")).unwrap().to_string(), "()");
        assert_eq!(f_map(&link("1 2 3 1 2 3")).unwrap().to_string(), "1 2 3 1 2 3");
        assert_eq!(f_map(&link("1 2 1 3 2 3")).unwrap().to_string(), "1 1");
        assert_eq!(f_star(&link("1 2 1 2")).unwrap().to_string(), "()");
        assert_eq!(f_star(&link("1 2 1 3 2 3")).unwrap().to_string(), "1 1");
        assert_eq!(f_star(&FreeLink::unknot()).unwrap().to_string(), "()");
    }
}
