//! Free links as multi-component chord diagrams.
//!
//! A [`FreeLink`] is a list of cyclic sequences of endpoint slots. Every chord
//! identifier occurs in exactly two slots, possibly on different components.
//! The two passages through a slot are the opposite half-edges of the
//! corresponding vertex of the framed 4-graph, so the framing is implicit.
//! A component with no slots is a trivial circle.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Chord identifier. Numeric tokens in Gauss codes keep their value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Chord(pub u32);

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An endpoint slot: position `slot` on component `comp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SlotRef {
    pub comp: usize,
    pub slot: usize,
}

/// A gap on a component: gap `g` sits just before slot `g` (cyclically after
/// slot `g - 1`). A zero-slot component has exactly one gap, gap 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GapRef {
    pub comp: usize,
    pub gap: usize,
}

/// A marked point on a component together with a traversal direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Basepoint {
    pub comp: usize,
    pub gap: usize,
    pub forward: bool,
}

impl Basepoint {
    pub fn new(comp: usize, gap: usize, forward: bool) -> Self {
        Basepoint { comp, gap, forward }
    }
}

impl Default for Basepoint {
    fn default() -> Self {
        Basepoint::new(0, 0, true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("empty input: no components")]
    EmptyInput,
    #[error("component {0} has no tokens (write \"()\" for a trivial circle)")]
    EmptyComponent(usize),
    #[error("\"()\" must be the only token of component {0}")]
    MisplacedTrivial(usize),
    #[error("token {token:?} occurs {count} time(s), expected exactly 2")]
    TokenCount { token: String, count: usize },
    #[error("expected a one-component link, found {0} components")]
    MultiComponent(usize),
    #[error("the two chords must be distinct")]
    SameChord,
    #[error("unknown chord {0}")]
    UnknownChord(Chord),
    #[error("component index {0} out of range")]
    UnknownComponent(usize),
    #[error("invalid basepoint: gap {gap} on component {comp}")]
    InvalidBasepoint { comp: usize, gap: usize },
    #[error("edge set is not a cycle: odd valency at chord {0}")]
    NotACycle(Chord),
    #[error("arc {arc} does not exist on component {comp}")]
    UnknownArc { comp: usize, arc: usize },
}

/// Multi-component chord diagram; the sole representation of framed 4-graphs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FreeLink {
    components: Vec<Vec<Chord>>,
}

impl FreeLink {
    /// Builds a link, checking that every chord occurs exactly twice.
    pub fn new(components: Vec<Vec<Chord>>) -> Result<Self, DiagramError> {
        let mut counts: BTreeMap<Chord, usize> = BTreeMap::new();
        for c in components.iter().flatten() {
            *counts.entry(*c).or_default() += 1;
        }
        if let Some((c, &n)) = counts.iter().find(|(_, &n)| n != 2) {
            return Err(DiagramError::TokenCount { token: c.to_string(), count: n });
        }
        Ok(FreeLink { components })
    }

    /// Builds a link from raw numeric components without validation.
    pub(crate) fn from_raw(components: Vec<Vec<Chord>>) -> Self {
        debug_assert!(FreeLink::new(components.clone()).is_ok());
        FreeLink { components }
    }

    /// The trivial knot G₀: one circle without crossings.
    pub fn unknot() -> Self {
        FreeLink { components: vec![Vec::new()] }
    }

    /// The empty link (no components), the top level of a cobordism movie.
    pub fn empty() -> Self {
        FreeLink { components: Vec::new() }
    }

    pub fn parse(text: &str) -> Result<Self, DiagramError> {
        text.parse()
    }

    pub fn components(&self) -> &[Vec<Chord>] {
        &self.components
    }

    pub fn component(&self, comp: usize) -> Result<&[Chord], DiagramError> {
        self.components.get(comp).map(Vec::as_slice).ok_or(DiagramError::UnknownComponent(comp))
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn num_chords(&self) -> usize {
        self.components.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn num_slots(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn chords(&self) -> BTreeSet<Chord> {
        self.components.iter().flatten().copied().collect()
    }

    pub fn contains(&self, chord: Chord) -> bool {
        self.components.iter().any(|c| c.contains(&chord))
    }

    pub fn chord_at(&self, at: SlotRef) -> Option<Chord> {
        self.components.get(at.comp).and_then(|c| c.get(at.slot)).copied()
    }

    /// Largest chord identifier, or 0 for a link without chords.
    pub fn max_chord(&self) -> u32 {
        self.components.iter().flatten().map(|c| c.0).max().unwrap_or(0)
    }

    /// The identifier used for the next chord created by a move.
    pub fn fresh_chord(&self) -> Chord {
        Chord(self.max_chord() + 1)
    }

    /// Both endpoint slots of every chord, in slot order.
    pub fn endpoints(&self) -> BTreeMap<Chord, [SlotRef; 2]> {
        let mut partial: BTreeMap<Chord, Vec<SlotRef>> = BTreeMap::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for (si, c) in comp.iter().enumerate() {
                partial.entry(*c).or_default().push(SlotRef { comp: ci, slot: si });
            }
        }
        partial.into_iter().map(|(c, v)| (c, [v[0], v[1]])).collect()
    }

    pub fn endpoints_of(&self, chord: Chord) -> Result<[SlotRef; 2], DiagramError> {
        let mut found = Vec::with_capacity(2);
        for (ci, comp) in self.components.iter().enumerate() {
            for (si, c) in comp.iter().enumerate() {
                if *c == chord {
                    found.push(SlotRef { comp: ci, slot: si });
                }
            }
        }
        match found.as_slice() {
            [a, b] => Ok([*a, *b]),
            _ => Err(DiagramError::UnknownChord(chord)),
        }
    }

    /// Returns the single component, or `MultiComponent`.
    pub fn knot_sequence(&self) -> Result<&[Chord], DiagramError> {
        match self.components.as_slice() {
            [only] => Ok(only),
            other => Err(DiagramError::MultiComponent(other.len())),
        }
    }

    pub fn is_knot(&self) -> bool {
        self.components.len() == 1
    }

    pub fn check_basepoint(&self, base: Basepoint) -> Result<(), DiagramError> {
        let comp = self.component(base.comp)?;
        if base.gap < comp.len().max(1) {
            Ok(())
        } else {
            Err(DiagramError::InvalidBasepoint { comp: base.comp, gap: base.gap })
        }
    }

    /// All basepoints: every gap of every component, in both directions.
    pub fn basepoints(&self) -> Vec<Basepoint> {
        let mut out = Vec::new();
        for (ci, comp) in self.components.iter().enumerate() {
            for gap in 0..comp.len().max(1) {
                out.push(Basepoint::new(ci, gap, true));
                out.push(Basepoint::new(ci, gap, false));
            }
        }
        out
    }

    /// Slot indices of component `base.comp` in traversal order from `base`.
    pub fn traversal(&self, base: Basepoint) -> Result<Vec<usize>, DiagramError> {
        self.check_basepoint(base)?;
        let m = self.components[base.comp].len();
        Ok((0..m).map(|k| if base.forward { (base.gap + k) % m } else { (base.gap + m - 1 - k) % m }).collect())
    }

    /// 1 iff the endpoints of `b` lie in different arcs of the complement of
    /// the endpoints of `a` on the core circle.
    pub fn linking_mod2(&self, a: Chord, b: Chord) -> Result<bool, DiagramError> {
        self.knot_sequence()?;
        if a == b {
            return Err(DiagramError::SameChord);
        }
        let [a0, a1] = self.endpoints_of(a)?;
        let [b0, b1] = self.endpoints_of(b)?;
        Ok(interleaved((a0.slot, a1.slot), (b0.slot, b1.slot)))
    }

    /// The linking pairing for a one-component link as an indexed matrix.
    pub fn linking_matrix(&self) -> Result<LinkingMatrix, DiagramError> {
        self.knot_sequence()?;
        Ok(LinkingMatrix::new(self))
    }

    /// The two halves obtained by smoothing at `v`: slot indices traversed by
    /// each closed arc. The halves partition every slot other than `v`'s.
    pub fn smooth_halves(&self, v: Chord) -> Result<[Vec<usize>; 2], DiagramError> {
        let seq = self.knot_sequence()?;
        let [p, q] = self.endpoints_of(v)?;
        let (i, j) = (p.slot, q.slot);
        let m = seq.len();
        let first = (i + 1..j).collect();
        let second = (j + 1..m).chain(0..i).collect();
        Ok([first, second])
    }

    /// The halves from [`FreeLink::smooth_halves`] as edge cycles of the
    /// framed 4-graph. The first half uses arcs `i..j`, the second the rest.
    pub fn half_cycles(&self, v: Chord) -> Result<[EdgeCycle; 2], DiagramError> {
        let seq = self.knot_sequence()?;
        let [p, q] = self.endpoints_of(v)?;
        let (i, j) = (p.slot, q.slot);
        let m = seq.len();
        let first = (i..j).map(|arc| ArcRef { comp: 0, arc }).collect();
        let second = (j..m).chain(0..i).map(|arc| ArcRef { comp: 0, arc }).collect();
        Ok([EdgeCycle { arcs: first }, EdgeCycle { arcs: second }])
    }

    /// Deletes the given chords, keeping the identifiers of the others.
    pub fn delete_chords(&self, doomed: &BTreeSet<Chord>) -> FreeLink {
        FreeLink {
            components: self
                .components
                .iter()
                .map(|c| c.iter().copied().filter(|x| !doomed.contains(x)).collect())
                .collect(),
        }
    }

    pub fn canonical_form(&self) -> String {
        self.canonical_link().to_string()
    }

    /// Canonical representative with chords renumbered `1..=n`.
    pub fn canonical_link(&self) -> FreeLink {
        let key = self.canonical_key();
        key.to_link()
    }

    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_key_colored(self, |_| 0)
    }
}

/// Whether chord endpoints `(i, j)` and `(p, q)` interleave on one circle.
pub(crate) fn interleaved((i, j): (usize, usize), (p, q): (usize, usize)) -> bool {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    let inside = |x: usize| i < x && x < j;
    inside(p) != inside(q)
}

/// Dense linking data for a one-component link.
#[derive(Clone, Debug)]
pub struct LinkingMatrix {
    pub chords: Vec<Chord>,
    linked: Vec<Vec<bool>>,
}

impl LinkingMatrix {
    fn new(link: &FreeLink) -> Self {
        let ends = link.endpoints();
        let chords: Vec<Chord> = ends.keys().copied().collect();
        let spans: Vec<(usize, usize)> = ends.values().map(|[a, b]| (a.slot, b.slot)).collect();
        let n = chords.len();
        let mut linked = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a + 1..n {
                let l = interleaved(spans[a], spans[b]);
                linked[a][b] = l;
                linked[b][a] = l;
            }
        }
        LinkingMatrix { chords, linked }
    }

    pub fn len(&self) -> usize {
        self.chords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chords.is_empty()
    }

    pub fn linked(&self, a: usize, b: usize) -> bool {
        self.linked[a][b]
    }

    pub fn degree(&self, a: usize) -> usize {
        self.linked[a].iter().filter(|&&x| x).count()
    }
}

/// An arc of the core: arc `k` of a component runs from slot `k` to slot
/// `k + 1` (cyclically). A zero-slot component has one cyclic edge, arc 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ArcRef {
    pub comp: usize,
    pub arc: usize,
}

/// A subset of edges of the framed 4-graph, read as a ℤ₂-chain.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeCycle {
    pub arcs: BTreeSet<ArcRef>,
}

impl EdgeCycle {
    pub fn new(arcs: impl IntoIterator<Item = ArcRef>) -> Self {
        EdgeCycle { arcs: arcs.into_iter().collect() }
    }

    /// Every edge of the graph.
    pub fn whole(link: &FreeLink) -> Self {
        let mut arcs = BTreeSet::new();
        for (ci, comp) in link.components().iter().enumerate() {
            for arc in 0..comp.len().max(1) {
                arcs.insert(ArcRef { comp: ci, arc });
            }
        }
        EdgeCycle { arcs }
    }

    /// ℤ₂ sum (symmetric difference).
    pub fn sum(&self, other: &EdgeCycle) -> EdgeCycle {
        EdgeCycle { arcs: self.arcs.symmetric_difference(&other.arcs).copied().collect() }
    }
}

/// Canonical code: per component a length header followed by the relabelled
/// (and optionally coloured) chord tokens. Compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u32>);

const COLOR_BITS: u32 = 3;

impl CanonicalKey {
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    /// Decodes the key into a link with chords `1..=n` (colours dropped).
    pub fn to_link(&self) -> FreeLink {
        let mut comps = Vec::new();
        let mut it = self.0.iter();
        while let Some(&header) = it.next() {
            let len = (u32::MAX - header) as usize;
            let comp: Vec<Chord> = it.by_ref().take(len).map(|t| Chord(t >> COLOR_BITS)).collect();
            comps.push(comp);
        }
        FreeLink::from_raw(comps)
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_link())
    }
}

/// Canonical key of a link whose chords carry a colour (`< 8`) that must be
/// preserved by the isomorphism. Components are ordered longest first.
pub fn canonical_key_colored(link: &FreeLink, color: impl Fn(Chord) -> u32) -> CanonicalKey {
    let comps = link.components();
    let mut best: Option<Vec<u32>> = None;
    let mut state = CanonState {
        comps,
        color: &color,
        used: vec![false; comps.len()],
        prefix: Vec::with_capacity(link.num_slots() + comps.len()),
    };
    state.search(&mut HashMap::new(), 1, &mut best);
    CanonicalKey(best.unwrap_or_default())
}

struct CanonState<'a, F: Fn(Chord) -> u32> {
    comps: &'a [Vec<Chord>],
    color: &'a F,
    used: Vec<bool>,
    prefix: Vec<u32>,
}

impl<F: Fn(Chord) -> u32> CanonState<'_, F> {
    fn search(&mut self, relabel: &mut HashMap<Chord, u32>, next: u32, best: &mut Option<Vec<u32>>) {
        let unused: Vec<usize> = (0..self.comps.len()).filter(|&i| !self.used[i]).collect();
        let Some(longest) = unused.iter().map(|&i| self.comps[i].len()).max() else {
            if best.as_ref().is_none_or(|b| self.prefix < *b) {
                *best = Some(self.prefix.clone());
            }
            return;
        };
        if longest == 0 {
            let before = self.prefix.len();
            self.prefix.extend(std::iter::repeat_n(u32::MAX, unused.len()));
            if best.as_ref().is_none_or(|b| self.prefix < *b) {
                *best = Some(self.prefix.clone());
            }
            self.prefix.truncate(before);
            return;
        }

        // Among all placements of a longest remaining component, only the
        // lexicographically smallest blocks can start the minimal code.
        let mut min_block: Option<Vec<u32>> = None;
        let mut ties: Vec<(usize, HashMap<Chord, u32>, u32)> = Vec::new();
        for &ci in unused.iter().filter(|&&i| self.comps[i].len() == longest) {
            let seq = &self.comps[ci];
            let m = seq.len();
            for start in 0..m {
                for forward in [true, false] {
                    let mut map = relabel.clone();
                    let mut nxt = next;
                    let mut block = Vec::with_capacity(m + 1);
                    block.push(u32::MAX - m as u32);
                    for k in 0..m {
                        let idx = if forward { (start + k) % m } else { (start + m - k) % m };
                        let c = seq[idx];
                        let id = *map.entry(c).or_insert_with(|| {
                            nxt += 1;
                            nxt - 1
                        });
                        block.push((id << COLOR_BITS) | (self.color)(c));
                    }
                    match min_block.as_ref().map(|b| block.cmp(b)) {
                        Some(std::cmp::Ordering::Greater) => {}
                        Some(std::cmp::Ordering::Equal) => ties.push((ci, map, nxt)),
                        _ => {
                            min_block = Some(block);
                            ties.clear();
                            ties.push((ci, map, nxt));
                        }
                    }
                }
            }
        }
        let block = min_block.expect("at least one placement");
        let before = self.prefix.len();
        self.prefix.extend_from_slice(&block);
        if let Some(b) = best.as_ref() {
            if self.prefix.as_slice() > &b[..self.prefix.len()] {
                self.prefix.truncate(before);
                return;
            }
        }
        let mut seen: Vec<(usize, Vec<(Chord, u32)>)> = Vec::new();
        for (ci, mut map, nxt) in ties {
            let mut sig: Vec<(Chord, u32)> = map.iter().map(|(k, v)| (*k, *v)).collect();
            sig.sort_unstable();
            if seen.iter().any(|(c, s)| *c == ci && *s == sig) {
                continue;
            }
            seen.push((ci, sig));
            self.used[ci] = true;
            self.search(&mut map, nxt, best);
            self.used[ci] = false;
        }
        self.prefix.truncate(before);
    }
}

impl fmt::Display for FreeLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, comp) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" ; ")?;
            }
            if comp.is_empty() {
                f.write_str("()")?;
            } else {
                for (k, c) in comp.iter().enumerate() {
                    if k > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{c}")?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for FreeLink {
    type Err = DiagramError;

    /// Gauss-code text: whitespace-separated tokens, components separated by
    /// `;`, and `()` for a trivial circle. Tokens that are plain decimal
    /// numbers keep their value; other tokens are numbered after the largest
    /// numeric token in order of first occurrence.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        if text.trim().is_empty() {
            return Err(DiagramError::EmptyInput);
        }
        let groups: Vec<Vec<&str>> = text.split(';').map(|g| g.split_ascii_whitespace().collect()).collect();
        let mut order: Vec<&str> = Vec::new();
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for (gi, group) in groups.iter().enumerate() {
            match group.as_slice() {
                [] => return Err(DiagramError::EmptyComponent(gi)),
                ["()"] => {}
                tokens => {
                    for &t in tokens {
                        if t == "()" {
                            return Err(DiagramError::MisplacedTrivial(gi));
                        }
                        let n = counts.entry(t).or_insert(0);
                        if *n == 0 {
                            order.push(t);
                        }
                        *n += 1;
                    }
                }
            }
        }
        if let Some(t) = order.iter().find(|t| counts[*t] != 2) {
            return Err(DiagramError::TokenCount { token: t.to_string(), count: counts[t] });
        }

        let numeric = |t: &str| t.parse::<u32>().ok().filter(|n| n.to_string() == t);
        let mut next = order.iter().filter_map(|t| numeric(t)).max().unwrap_or(0);
        let mut ids: HashMap<&str, Chord> = HashMap::new();
        for &t in &order {
            let id = match numeric(t) {
                Some(n) => n,
                None => {
                    next += 1;
                    next
                }
            };
            ids.insert(t, Chord(id));
        }
        let components = groups
            .iter()
            .map(|g| match g.as_slice() {
                ["()"] => Vec::new(),
                tokens => tokens.iter().map(|t| ids[t]).collect(),
            })
            .collect();
        Ok(FreeLink { components })
    }
}
