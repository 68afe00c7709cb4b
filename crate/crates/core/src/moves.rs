//! Reidemeister moves on chord diagrams: site detection, application,
//! greedy simplification and bounded orbit search.
//!
//! Sites are addressed by slots and gaps of the source link. An adjacent
//! pair starting at slot `s` is the arc from slot `s` to slot `s + 1`
//! (cyclically). Chords keep their identifiers through every move; added
//! chords get fresh identifiers above the current maximum.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{CanonicalKey, Chord, FreeLink, GapRef, SlotRef};
use crate::invariant::invariant_l;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("site invalid: {0}")]
    SiteInvalid(String),
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError::SiteInvalid(msg.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
}

/// A move together with its site in the source link.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Move {
    /// Insert a loop chord at a gap.
    R1Add { at: GapRef },
    /// Remove the loop chord occupying the pair starting at `at`.
    R1Remove { at: SlotRef },
    /// Insert a bigon: `p q` at `first`, then `q p` (or `p q` when
    /// `crossed`) at `second`.
    R2Add { first: GapRef, second: GapRef, crossed: bool },
    /// Remove the bigon whose two edges are the pairs starting at `first`
    /// and `second`.
    R2Remove { first: SlotRef, second: SlotRef },
    /// Swap the endpoints within each of three pairs forming a triangle.
    R3 { pairs: [SlotRef; 3] },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Add { .. } => MoveKind::R1Add,
            Move::R1Remove { .. } => MoveKind::R1Remove,
            Move::R2Add { .. } => MoveKind::R2Add,
            Move::R2Remove { .. } => MoveKind::R2Remove,
            Move::R3 { .. } => MoveKind::R3,
        }
    }
}

/// What a move did to chords. Surviving chords correspond to themselves;
/// for a third move `triangle` lists the pairs `(x, x′), (y, y′), (z, z′)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub kind: MoveKind,
    pub removed: Vec<Chord>,
    pub added: Vec<Chord>,
    pub triangle: Vec<Chord>,
}

impl Transition {
    /// Correspondence between chords of the source and result away from
    /// any removal or addition.
    pub fn correspondence(&self, before: &FreeLink) -> BTreeMap<Chord, Chord> {
        before.chords().into_iter().filter(|c| !self.removed.contains(c)).map(|c| (c, c)).collect()
    }
}

fn pair_slots(link: &FreeLink, at: SlotRef) -> Result<(SlotRef, SlotRef), MoveError> {
    let Ok(seq) = link.component(at.comp) else {
        return invalid(format!("no component {}", at.comp));
    };
    let m = seq.len();
    if m < 2 || at.slot >= m {
        return invalid(format!("no adjacent pair at component {} slot {}", at.comp, at.slot));
    }
    Ok((at, SlotRef { comp: at.comp, slot: (at.slot + 1) % m }))
}

fn check_gap(link: &FreeLink, at: GapRef) -> Result<(), MoveError> {
    match link.component(at.comp) {
        Ok(seq) if at.gap < seq.len().max(1) => Ok(()),
        _ => invalid(format!("no gap {} on component {}", at.gap, at.comp)),
    }
}

/// Adjacent pairs with two distinct chords, one entry per arc.
fn mixed_pairs(link: &FreeLink) -> Vec<(SlotRef, Chord, Chord)> {
    let mut out = Vec::new();
    for (ci, seq) in link.components().iter().enumerate() {
        let m = seq.len();
        if m < 2 {
            continue;
        }
        for s in 0..m {
            let (u, v) = (seq[s], seq[(s + 1) % m]);
            if u != v {
                out.push((SlotRef { comp: ci, slot: s }, u, v));
            }
        }
    }
    out
}

fn slot_set(link: &FreeLink, at: SlotRef) -> [SlotRef; 2] {
    let m = link.components()[at.comp].len();
    [at, SlotRef { comp: at.comp, slot: (at.slot + 1) % m }]
}

fn disjoint(a: [SlotRef; 2], b: [SlotRef; 2]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// One site per chord whose endpoints are cyclically adjacent.
pub fn find_r1_sites(link: &FreeLink) -> Vec<Move> {
    let mut out = Vec::new();
    for (ci, seq) in link.components().iter().enumerate() {
        let m = seq.len();
        for s in 0..m {
            if m >= 2 && seq[s] == seq[(s + 1) % m] && !(m == 2 && s == 1) {
                out.push(Move::R1Remove { at: SlotRef { comp: ci, slot: s } });
            }
        }
    }
    out
}

/// One site per chord pair `{p, q}` joined by two slot-disjoint arcs, in
/// either pattern `p q … q p` or `p q … p q`.
pub fn find_r2_sites(link: &FreeLink) -> Vec<Move> {
    let mut by_pair: BTreeMap<(Chord, Chord), Vec<SlotRef>> = BTreeMap::new();
    for (at, u, v) in mixed_pairs(link) {
        by_pair.entry((u.min(v), u.max(v))).or_default().push(at);
    }
    let mut out = Vec::new();
    for starts in by_pair.values() {
        'search: for (i, &a) in starts.iter().enumerate() {
            for &b in &starts[i + 1..] {
                if disjoint(slot_set(link, a), slot_set(link, b)) {
                    out.push(Move::R2Remove { first: a, second: b });
                    break 'search;
                }
            }
        }
    }
    out.sort();
    out
}

/// Triangles: three slot-disjoint arcs joining `{p, q}`, `{q, r}`, `{r, p}`.
pub fn find_r3_sites(link: &FreeLink) -> Vec<Move> {
    let pairs = mixed_pairs(link);
    let mut seen: HashSet<[[SlotRef; 2]; 3]> = HashSet::new();
    let mut out = Vec::new();
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            for k in j + 1..pairs.len() {
                let (a, b, c) = (&pairs[i], &pairs[j], &pairs[k]);
                if !is_triangle([(a.1, a.2), (b.1, b.2), (c.1, c.2)]) {
                    continue;
                }
                let (sa, sb, sc) = (slot_set(link, a.0), slot_set(link, b.0), slot_set(link, c.0));
                if !(disjoint(sa, sb) && disjoint(sb, sc) && disjoint(sa, sc)) {
                    continue;
                }
                let mut sig = [sa, sb, sc].map(|mut s| {
                    s.sort();
                    s
                });
                sig.sort();
                if seen.insert(sig) {
                    out.push(Move::R3 { pairs: [a.0, b.0, c.0] });
                }
            }
        }
    }
    out
}

fn is_triangle(edges: [(Chord, Chord); 3]) -> bool {
    let mut chords: Vec<Chord> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    chords.sort();
    chords.dedup();
    if chords.len() != 3 {
        return false;
    }
    let norm = |(u, v): (Chord, Chord)| (u.min(v), u.max(v));
    let mut e: Vec<_> = edges.iter().map(|&x| norm(x)).collect();
    e.sort();
    e.dedup();
    e.len() == 3
}

/// Every decreasing move and every third move.
pub fn find_all_sites(link: &FreeLink) -> Vec<Move> {
    let mut out = find_r1_sites(link);
    out.extend(find_r2_sites(link));
    out.extend(find_r3_sites(link));
    out
}

/// Every increasing move: loops at all gaps and bigons at all unordered gap
/// pairs in both patterns.
pub fn increasing_moves(link: &FreeLink) -> Vec<Move> {
    let gaps: Vec<GapRef> = link
        .components()
        .iter()
        .enumerate()
        .flat_map(|(ci, seq)| (0..seq.len().max(1)).map(move |gap| GapRef { comp: ci, gap }))
        .collect();
    let mut out: Vec<Move> = gaps.iter().map(|&at| Move::R1Add { at }).collect();
    for (i, &first) in gaps.iter().enumerate() {
        for &second in &gaps[i..] {
            for crossed in [false, true] {
                out.push(Move::R2Add { first, second, crossed });
            }
        }
    }
    out
}

pub fn apply_move(link: &FreeLink, mv: &Move) -> Result<(FreeLink, Transition), MoveError> {
    let mut comps = link.components().to_vec();
    let transition = match *mv {
        Move::R1Remove { at } => {
            let (x, y) = pair_slots(link, at)?;
            let c = comps[x.comp][x.slot];
            if comps[y.comp][y.slot] != c {
                return invalid(format!("slots {} and {} do not hold one chord", x.slot, y.slot));
            }
            comps[at.comp].retain(|&d| d != c);
            Transition { kind: MoveKind::R1Remove, removed: vec![c], added: vec![], triangle: vec![] }
        }
        Move::R1Add { at } => {
            check_gap(link, at)?;
            let c = link.fresh_chord();
            comps[at.comp].splice(at.gap..at.gap, [c, c]);
            Transition { kind: MoveKind::R1Add, removed: vec![], added: vec![c], triangle: vec![] }
        }
        Move::R2Remove { first, second } => {
            let (a0, a1) = pair_slots(link, first)?;
            let (b0, b1) = pair_slots(link, second)?;
            if !disjoint([a0, a1], [b0, b1]) {
                return invalid("bigon edges share a slot");
            }
            let at = |s: SlotRef| comps[s.comp][s.slot];
            let (p, q) = (at(a0), at(a1));
            let mut e1 = [p, q];
            let mut e2 = [at(b0), at(b1)];
            e1.sort();
            e2.sort();
            if p == q || e1 != e2 {
                return invalid("arcs do not form a bigon");
            }
            for comp in comps.iter_mut() {
                comp.retain(|&d| d != p && d != q);
            }
            Transition { kind: MoveKind::R2Remove, removed: vec![p, q], added: vec![], triangle: vec![] }
        }
        Move::R2Add { first, second, crossed } => {
            check_gap(link, first)?;
            check_gap(link, second)?;
            let p = link.fresh_chord();
            let q = Chord(p.0 + 1);
            let b1 = [p, q];
            let b2 = if crossed { [p, q] } else { [q, p] };
            if first.comp == second.comp {
                let comp = &mut comps[first.comp];
                if first.gap == second.gap {
                    comp.splice(first.gap..first.gap, b1.into_iter().chain(b2));
                } else if first.gap < second.gap {
                    comp.splice(second.gap..second.gap, b2);
                    comp.splice(first.gap..first.gap, b1);
                } else {
                    comp.splice(first.gap..first.gap, b1);
                    comp.splice(second.gap..second.gap, b2);
                }
            } else {
                comps[first.comp].splice(first.gap..first.gap, b1);
                comps[second.comp].splice(second.gap..second.gap, b2);
            }
            Transition { kind: MoveKind::R2Add, removed: vec![], added: vec![p, q], triangle: vec![] }
        }
        Move::R3 { pairs } => {
            let mut slots = Vec::new();
            let mut edges = Vec::new();
            for at in pairs {
                let (x, y) = pair_slots(link, at)?;
                edges.push((comps[x.comp][x.slot], comps[y.comp][y.slot]));
                slots.push([x, y]);
            }
            if !is_triangle([edges[0], edges[1], edges[2]])
                || !(disjoint(slots[0], slots[1]) && disjoint(slots[1], slots[2]) && disjoint(slots[0], slots[2]))
            {
                return invalid("pairs do not form a triangle");
            }
            for [x, y] in &slots {
                let u = comps[x.comp][x.slot];
                comps[x.comp][x.slot] = comps[y.comp][y.slot];
                comps[y.comp][y.slot] = u;
            }
            let mut triangle: Vec<Chord> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
            triangle.sort();
            triangle.dedup();
            Transition { kind: MoveKind::R3, removed: vec![], added: vec![], triangle }
        }
    };
    Ok((FreeLink::from_raw(comps), transition))
}

/// A move that undoes `mv`, applied to the result `after` of applying `mv` to
/// `before`. The inverse restores `before` up to canonical form.
pub fn inverse_move(before: &FreeLink, mv: &Move, after: &FreeLink, t: &Transition) -> Move {
    match *mv {
        Move::R1Remove { at } => {
            let m = before.components()[at.comp].len();
            let gap = if at.slot + 1 < m { at.slot } else { 0 };
            Move::R1Add { at: GapRef { comp: at.comp, gap } }
        }
        Move::R1Add { at } => Move::R1Remove { at: SlotRef { comp: at.comp, slot: at.gap } },
        Move::R2Add { .. } => {
            let (p, q) = (t.added[0], t.added[1]);
            find_r2_sites(after)
                .into_iter()
                .find(|s| {
                    matches!(s, Move::R2Remove { first, .. } if {
                        let c = after.chord_at(*first);
                        c == Some(p) || c == Some(q)
                    })
                })
                .expect("an added bigon is removable")
        }
        Move::R2Remove { first, second } => {
            let gap_after = |at: SlotRef| {
                let removed = &t.removed;
                let seq = &before.components()[at.comp];
                let kept = seq[..at.slot].iter().filter(|c| !removed.contains(c)).count();
                let len = after.components()[at.comp].len();
                GapRef { comp: at.comp, gap: kept % len.max(1) }
            };
            let (g1, g2) = (gap_after(first), gap_after(second));
            let order = |at: SlotRef| {
                let (x, y) = (
                    before.chord_at(at).unwrap(),
                    before
                        .chord_at(SlotRef { comp: at.comp, slot: (at.slot + 1) % before.components()[at.comp].len() })
                        .unwrap(),
                );
                (x, y)
            };
            let crossed = order(first) == order(second);
            let target = before.canonical_key();
            let candidates =
                [Move::R2Add { first: g1, second: g2, crossed }, Move::R2Add { first: g2, second: g1, crossed }];
            candidates
                .iter()
                .find(|c| apply_move(after, c).map(|(l, _)| l.canonical_key() == target).unwrap_or(false))
                .cloned()
                .unwrap_or_else(|| candidates[0].clone())
        }
        Move::R3 { pairs } => Move::R3 { pairs },
    }
}

/// Greedy decreasing simplification: repeatedly applies the first loop or
/// bigon removal in site order until none applies.
pub fn simplify(link: &FreeLink) -> FreeLink {
    simplify_with_trace(link).0
}

pub fn simplify_with_trace(link: &FreeLink) -> (FreeLink, Vec<Move>) {
    let mut current = link.clone();
    let mut trace = Vec::new();
    loop {
        let next = find_r1_sites(&current).into_iter().next().or_else(|| find_r2_sites(&current).into_iter().next());
        let Some(mv) = next else {
            return (current, trace);
        };
        let (l, _) = apply_move(&current, &mv).expect("detected sites apply");
        current = l;
        trace.push(mv);
    }
}

/// All links one move away, with increasing moves bounded by `max_chords`.
pub fn neighbours(link: &FreeLink, max_chords: usize) -> Vec<FreeLink> {
    let n = link.num_chords();
    let mut moves = find_all_sites(link);
    if n < max_chords {
        moves.extend(increasing_moves(link).into_iter().filter(|m| n + 2 <= max_chords || m.kind() == MoveKind::R1Add));
    }
    moves.iter().filter_map(|m| apply_move(link, m).ok().map(|(l, _)| l)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit {
    pub members: BTreeSet<CanonicalKey>,
    /// True when the node budget stopped the search before closure.
    pub truncated: bool,
}

impl Orbit {
    pub fn contains(&self, link: &FreeLink) -> bool {
        self.members.contains(&link.canonical_key())
    }

    pub fn codes(&self) -> Vec<String> {
        self.members.iter().map(|k| k.to_string()).collect()
    }
}

/// Breadth-first closure under all moves, bounded by chord count and by the
/// number of distinct diagrams visited. Each level is expanded in canonical
/// order, so the result does not depend on input representation.
pub fn orbit(link: &FreeLink, max_chords: usize, max_nodes: usize) -> Orbit {
    let start = link.canonical_key();
    let mut members = BTreeSet::new();
    members.insert(start.clone());
    let mut frontier = vec![start];
    let mut truncated = false;
    while !frontier.is_empty() && !truncated {
        let mut next = BTreeSet::new();
        'level: for key in &frontier {
            for nb in neighbours(&key.to_link(), max_chords) {
                let k = nb.canonical_key();
                if members.contains(&k) {
                    continue;
                }
                if members.len() >= max_nodes {
                    truncated = true;
                    break 'level;
                }
                members.insert(k.clone());
                next.insert(k);
            }
        }
        frontier = next.into_iter().collect();
    }
    Orbit { members, truncated }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result")]
pub enum Equivalence {
    Equivalent,
    /// Separated by an invariant: `L` for knots or the component count.
    Distinct {
        invariant: String,
        left: u64,
        right: u64,
    },
    Unknown,
}

/// Bounded equivalence test. `Distinct` only on an invariant mismatch,
/// `Equivalent` when the bounded orbits meet, `Unknown` otherwise.
pub fn are_equivalent_bounded(a: &FreeLink, b: &FreeLink, max_chords: usize, max_nodes: usize) -> Equivalence {
    if a.canonical_key() == b.canonical_key() {
        return Equivalence::Equivalent;
    }
    if a.num_components() != b.num_components() {
        return Equivalence::Distinct {
            invariant: "components".into(),
            left: a.num_components() as u64,
            right: b.num_components() as u64,
        };
    }
    if a.is_knot() {
        let la = invariant_l(a).expect("knot").l;
        let lb = invariant_l(b).expect("knot").l;
        if la != lb {
            return Equivalence::Distinct { invariant: "L".into(), left: la, right: lb };
        }
    }
    let oa = orbit(a, max_chords, max_nodes);
    if oa.contains(b) {
        return Equivalence::Equivalent;
    }
    let ob = orbit(b, max_chords, max_nodes);
    if !oa.members.is_disjoint(&ob.members) {
        return Equivalence::Equivalent;
    }
    Equivalence::Unknown
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link(s: &str) -> FreeLink {
        s.parse().unwrap()
    }

    fn slot(comp: usize, slot: usize) -> SlotRef {
        SlotRef { comp, slot }
    }

    #[test]
    fn r1_site_examples() {
        assert_eq!(find_r1_sites(&link("1 1")), vec![Move::R1Remove { at: slot(0, 0) }]);
        assert!(find_r1_sites(&link("1 2 1 2")).is_empty());
        assert_eq!(
            find_r1_sites(&link("1 2 2 1")),
            vec![Move::R1Remove { at: slot(0, 1) }, Move::R1Remove { at: slot(0, 3) }]
        );
    }

    #[test]
    fn r2_site_examples() {
        assert_eq!(find_r2_sites(&link("1 2 2 1")), vec![Move::R2Remove { first: slot(0, 0), second: slot(0, 2) }]);
        assert_eq!(find_r2_sites(&link("1 2 1 2")), vec![Move::R2Remove { first: slot(0, 0), second: slot(0, 2) }]);
        assert!(find_r2_sites(&link("1 1")).is_empty());
        // Two arcs through the same pair of slots are opposite at each vertex.
        assert!(find_r2_sites(&link("1 2 ; 1 2")).len() == 1);
        assert_eq!(find_r2_sites(&link("1 2 3 ; 1 2 3")).len(), 3);
    }

    #[test]
    fn r3_site_examples() {
        let l = link("1 2 2 3 3 1");
        let sites = find_r3_sites(&l);
        assert_eq!(sites.len(), 1);
        let (after, t) = apply_move(&l, &sites[0]).unwrap();
        assert_eq!(after.to_string(), "2 1 3 2 1 3");
        assert_eq!(after.canonical_form(), "1 2 3 1 2 3");
        assert_eq!(t.triangle, vec![Chord(1), Chord(2), Chord(3)]);
        assert!(find_r3_sites(&link("1 2 1 2")).is_empty());
    }

    #[test]
    fn apply_examples() {
        let (l, _) = apply_move(&link("1 1"), &Move::R1Remove { at: slot(0, 0) }).unwrap();
        assert_eq!(l.to_string(), "()");
        let (l, _) = apply_move(&link("1 2 2 1"), &find_r2_sites(&link("1 2 2 1"))[0]).unwrap();
        assert_eq!(l.to_string(), "()");
        let (l, t) = apply_move(&FreeLink::unknot(), &Move::R1Add { at: GapRef { comp: 0, gap: 0 } }).unwrap();
        assert_eq!((l.to_string(), t.added), ("1 1".to_string(), vec![Chord(1)]));
        assert!(apply_move(&link("1 2 1 2"), &Move::R1Remove { at: slot(0, 0) }).is_err());
        assert!(apply_move(&link("1 1"), &Move::R1Add { at: GapRef { comp: 0, gap: 2 } }).is_err());
        assert!(apply_move(&link("1 1"), &Move::R1Add { at: GapRef { comp: 1, gap: 0 } }).is_err());
    }

    #[test]
    fn r2_add_patterns_round_trip() {
        let base = link("1 1");
        for first in 0..2 {
            for second in 0..2 {
                for crossed in [false, true] {
                    let mv = Move::R2Add {
                        first: GapRef { comp: 0, gap: first },
                        second: GapRef { comp: 0, gap: second },
                        crossed,
                    };
                    let (after, t) = apply_move(&base, &mv).unwrap();
                    let inv = inverse_move(&base, &mv, &after, &t);
                    let (back, _) = apply_move(&after, &inv).unwrap();
                    assert_eq!(back.canonical_form(), base.canonical_form(), "{mv:?}");
                }
            }
        }
    }

    #[test]
    fn simplify_examples() {
        assert_eq!(simplify(&link("1 2 2 1 3 3")).to_string(), "()");
        assert_eq!(simplify(&link("1 2 1 2")).to_string(), "()");
        assert_eq!(simplify(&FreeLink::unknot()).to_string(), "()");
        // Linked bigon chords reduce as well.
        assert_eq!(simplify(&link("1 2 3 4 5 1 2 3 4 5")).to_string(), "()");
        for code in ["1 2 3 1 4 5 2 6 3 4 6 5", "1 2 3 4 2 5 3 1 5 6 7 6 4 7"] {
            let out = simplify(&link(code));
            assert!(find_r1_sites(&out).is_empty() && find_r2_sites(&out).is_empty());
        }
    }

    #[test]
    fn orbit_contains_r3_image() {
        let o = orbit(&link("1 2 2 3 3 1"), 4, 10_000);
        assert!(o.contains(&link("1 2 3 1 2 3")));
        let o = orbit(&link("1 1"), 1, 100);
        assert_eq!(o.codes(), vec!["1 1".to_string(), "()".to_string()]);
        assert!(!o.truncated);
    }

    #[test]
    fn orbit_budget_is_reported() {
        let o = orbit(&link("1 2 1 2"), 6, 5);
        assert!(o.truncated);
        assert_eq!(o.members.len(), 5);
    }

    #[test]
    fn equivalence_examples() {
        assert_eq!(are_equivalent_bounded(&link("1 1"), &FreeLink::unknot(), 3, 10_000), Equivalence::Equivalent);
        assert!(matches!(
            are_equivalent_bounded(&link("1 1 ; 2 2"), &FreeLink::unknot(), 3, 100),
            Equivalence::Distinct { .. }
        ));
    }
}
