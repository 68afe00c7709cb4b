//! Exhaustive enumeration of small one-component chord diagrams.

use std::collections::BTreeMap;

use crate::diagram::{CanonicalKey, Chord, FreeLink};

/// Every perfect matching of `2n` points on a circle, as Gauss codes with
/// chords numbered by the position of their first endpoint. There are
/// `(2n - 1)!!` of them.
pub fn matchings(n: usize) -> Vec<FreeLink> {
    fn go(seq: &mut Vec<Option<Chord>>, next: u32, out: &mut Vec<FreeLink>) {
        let Some(i) = seq.iter().position(Option::is_none) else {
            out.push(FreeLink::from_raw(vec![seq.iter().map(|c| c.expect("filled")).collect()]));
            return;
        };
        for j in i + 1..seq.len() {
            if seq[j].is_none() {
                seq[i] = Some(Chord(next));
                seq[j] = Some(Chord(next));
                go(seq, next + 1, out);
                seq[i] = None;
                seq[j] = None;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut vec![None; 2 * n], 1, &mut out);
    out
}

/// One-component diagrams with at most `max_chords` chords, up to rotation
/// and reflection of the circle, in canonical form and canonical order.
pub fn census(max_chords: usize) -> Vec<FreeLink> {
    let mut seen: BTreeMap<CanonicalKey, FreeLink> = BTreeMap::new();
    for n in 0..=max_chords {
        for m in matchings(n) {
            let key = m.canonical_key();
            seen.entry(key).or_insert_with_key(|k| k.to_link());
        }
    }
    seen.into_values().collect()
}
