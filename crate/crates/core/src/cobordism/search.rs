//! Bounded search for a genus-0 movie from a knot to the empty link.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::{apply_event, component_words, verify, Change, Event, Level, LifetimeId, LifetimeLabel, Movie};
use crate::diagram::{canonical_key_colored, CanonicalKey, FreeLink};
use crate::moves::{find_all_sites, increasing_moves, MoveKind};
use crate::parity::{check_parity_axioms, ParityLabel};

/// States explored before giving up, independent of the event bound.
const NODE_BUDGET: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result")]
pub enum SearchOutcome {
    Found { movie: Movie },
    NotFoundWithinBounds,
}

struct Search {
    max_chords: usize,
    events: Vec<Event>,
    labels: BTreeMap<LifetimeId, LifetimeLabel>,
    seen: HashMap<(CanonicalKey, i64), usize>,
    nodes: usize,
}

fn color(label: ParityLabel) -> u32 {
    match label {
        ParityLabel::Even => 0,
        ParityLabel::OddB => 1,
        ParityLabel::OddBPrime => 2,
    }
}

/// Fewest events that could still empty the level: every removal deletes at
/// most two chords and every component needs a death or a saddle.
fn lower_bound(link: &FreeLink) -> usize {
    link.num_chords().div_ceil(2) + link.num_components()
}

fn candidates(level: &Level, max_chords: usize, index: usize) -> Vec<(Event, Option<(LifetimeId, LifetimeLabel)>)> {
    let link = &level.link;
    let mut out: Vec<(Event, Option<(LifetimeId, LifetimeLabel)>)> = Vec::new();
    for (i, seq) in link.components().iter().enumerate() {
        if seq.is_empty() {
            out.push((Event::Death { comp: i }, None));
        }
    }
    for mv in find_all_sites(link) {
        out.push((Event::from_move(&mv, None), None));
    }
    let gaps = |comp: usize| 0..link.components()[comp].len().max(1);
    let n = link.num_components();
    for a in 0..n {
        for b in a + 1..n {
            for ga in gaps(a) {
                for gb in gaps(b) {
                    for flip in [false, true] {
                        out.push((Event::Saddle { comp_a: a, gap_a: ga, comp_b: b, gap_b: gb, flip }, None));
                    }
                }
            }
        }
        for ga in gaps(a) {
            for gb in gaps(a) {
                out.push((Event::Saddle { comp_a: a, gap_a: ga, comp_b: a, gap_b: gb, flip: false }, None));
            }
        }
    }
    if link.num_chords() < max_chords {
        let id = format!("s{index}");
        for mv in increasing_moves(link) {
            match mv.kind() {
                MoveKind::R1Add => out.push((Event::from_move(&mv, Some(id.clone())), None)),
                MoveKind::R2Add if link.num_chords() + 2 <= max_chords => {
                    for label in [ParityLabel::Even, ParityLabel::OddB, ParityLabel::OddBPrime] {
                        let e = Event::from_move(&mv, Some(id.clone()));
                        out.push((e, Some((id.clone(), LifetimeLabel::from_label(label)))));
                    }
                }
                _ => {}
            }
        }
    }
    out.push((Event::Birth, None));
    out
}

impl Search {
    /// Depth-first search with `budget` events left; `twice_genus` is
    /// `saddles + 1 - births - deaths` so far.
    fn dfs(&mut self, level: &Level, budget: usize, twice_genus: i64) -> bool {
        if level.link.is_empty() {
            return twice_genus == 0;
        }
        if lower_bound(&level.link) > budget || self.nodes >= NODE_BUDGET {
            return false;
        }
        self.nodes += 1;
        let key = (canonical_key_colored(&level.link, |c| color(level.label(c))), twice_genus);
        match self.seen.get(&key) {
            Some(&b) if b >= budget => return false,
            _ => {
                self.seen.insert(key, budget);
            }
        }
        for (event, label) in candidates(level, self.max_chords, self.events.len()) {
            if let Some((id, l)) = &label {
                self.labels.insert(id.clone(), *l);
            }
            if self.try_event(level, event, budget, twice_genus) {
                return true;
            }
            if let Some((id, _)) = &label {
                self.labels.remove(id);
            }
        }
        false
    }

    fn try_event(&mut self, level: &Level, event: Event, budget: usize, twice_genus: i64) -> bool {
        let Ok((next, change)) = apply_event(level, &event, self.events.len(), &self.labels) else {
            return false;
        };
        let consistent = match &change {
            Change::Move(t) => {
                check_parity_axioms(&level.link, &next.link, t, &level.table(), &next.table()).is_empty()
            }
            _ => true,
        } && component_words(&next).is_ok();
        if !consistent {
            return false;
        }
        let dg = match change {
            Change::Birth | Change::Death { .. } => -1,
            Change::Merge { .. } | Change::Split { .. } => 1,
            Change::Move(_) => 0,
        };
        self.events.push(event);
        if self.dfs(&next, budget - 1, twice_genus + dg) {
            return true;
        }
        self.events.pop();
        false
    }
}

/// Iterative deepening over labeled levels. A result is a verified genus-0
/// movie starting at `knot`; not finding one proves nothing about sliceness.
pub fn search_slice_movie(knot: &FreeLink, max_events: usize, max_chords: usize) -> SearchOutcome {
    if !knot.is_knot() {
        return SearchOutcome::NotFoundWithinBounds;
    }
    let start = Level::initial(knot, &BTreeMap::new());
    for depth in 0..=max_events {
        let mut s = Search { max_chords, events: Vec::new(), labels: BTreeMap::new(), seen: HashMap::new(), nodes: 0 };
        if s.dfs(&start, depth, 1) {
            let mut movie = Movie::new(knot.clone(), s.events);
            movie.labels = s.labels;
            let report = verify(&movie, false);
            if report.ok && report.genus_value() == Some(0) {
                return SearchOutcome::Found { movie };
            }
        }
    }
    SearchOutcome::NotFoundWithinBounds
}
