//! Combinatorial cobordism movies: a free knot, a sequence of Morse and
//! Reidemeister events ending at the empty link, and labels on the double
//! lines (crossings tracked through time).

mod labels;
mod project;
mod random;
mod search;
mod verify;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::diagram::{Chord, FreeLink, GapRef, SlotRef};
use crate::group::{eval_word, Letter};
use crate::moves::{apply_move, Move, MoveError, MoveKind, Transition};
use crate::parity::{gaussian_labels, ParityLabel, ParityTable};

pub use labels::solve_labels;
pub use project::f_project_movie;
pub use random::{random_valid_movie, RandomBounds};
pub use search::{search_slice_movie, SearchOutcome};
pub use verify::{
    genus, main_theorem_check, verify, ComponentReport, LevelReport, TheoremCheck, VerifierReport, Violation,
};

/// Identifier of a double line.
pub type LifetimeId = String;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CobordismError {
    #[error("site invalid: {0}")]
    SiteInvalid(String),
    #[error("death on component {0}, which is not a trivial circle")]
    DeathOnNonTrivialCircle(usize),
    #[error("component {0} does not exist")]
    UnknownComponent(usize),
    #[error("no label for double line {0:?}")]
    MissingLabel(LifetimeId),
    #[error("final level is not empty")]
    FinalLevelNonEmpty,
    #[error("initial level has {0} components, expected 1")]
    InitialNotKnot(usize),
    #[error("genus is not an integer")]
    NonIntegralGenus,
    #[error("genus is negative")]
    NegativeGenus,
    #[error("component {0} has a word with nonzero first coordinate")]
    NonzeroFirstCoordinate(usize),
    #[error("component {0} has a word with odd second coordinate")]
    OddSecondCoordinate(usize),
    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),
    #[error("no label assignment satisfies the parity constraints")]
    Infeasible,
}

impl From<MoveError> for CobordismError {
    fn from(e: MoveError) -> Self {
        match e {
            MoveError::SiteInvalid(s) => CobordismError::SiteInvalid(s),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OddType {
    B,
    BPrime,
}

/// Label of a double line as it is born. Odd lines without a type are of
/// the first type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LifetimeLabel {
    pub parity: Parity,
    #[serde(rename = "type", default, skip_serializing_if = "Option::is_none")]
    pub odd_type: Option<OddType>,
}

impl LifetimeLabel {
    pub const EVEN: LifetimeLabel = LifetimeLabel { parity: Parity::Even, odd_type: None };

    pub fn to_label(self) -> ParityLabel {
        match (self.parity, self.odd_type) {
            (Parity::Even, _) => ParityLabel::Even,
            (Parity::Odd, Some(OddType::BPrime)) => ParityLabel::OddBPrime,
            (Parity::Odd, _) => ParityLabel::OddB,
        }
    }

    pub fn from_label(label: ParityLabel) -> Self {
        match label {
            ParityLabel::Even => Self::EVEN,
            ParityLabel::OddB => LifetimeLabel { parity: Parity::Odd, odd_type: Some(OddType::B) },
            ParityLabel::OddBPrime => LifetimeLabel { parity: Parity::Odd, odd_type: Some(OddType::BPrime) },
        }
    }
}

/// One step of a movie. Reidemeister events address sites like
/// [`Move`]; a saddle with `compA == compB` splits that component at the two
/// gaps, otherwise it merges the two components.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Event {
    R1Add {
        comp: usize,
        gap: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lifetime: Option<LifetimeId>,
    },
    R1Remove {
        comp: usize,
        slot: usize,
    },
    R2Add {
        first: GapRef,
        second: GapRef,
        #[serde(default)]
        crossed: bool,
        lifetime: LifetimeId,
    },
    R2Remove {
        first: SlotRef,
        second: SlotRef,
    },
    R3 {
        pairs: [SlotRef; 3],
    },
    Birth,
    Death {
        comp: usize,
    },
    Saddle {
        #[serde(rename = "compA")]
        comp_a: usize,
        #[serde(rename = "gapA")]
        gap_a: usize,
        #[serde(rename = "compB")]
        comp_b: usize,
        #[serde(rename = "gapB")]
        gap_b: usize,
        #[serde(default)]
        flip: bool,
    },
}

impl Event {
    /// The Reidemeister move of an R-event.
    pub fn as_move(&self) -> Option<Move> {
        Some(match self {
            Event::R1Add { comp, gap, .. } => Move::R1Add { at: GapRef { comp: *comp, gap: *gap } },
            Event::R1Remove { comp, slot } => Move::R1Remove { at: SlotRef { comp: *comp, slot: *slot } },
            Event::R2Add { first, second, crossed, .. } => {
                Move::R2Add { first: *first, second: *second, crossed: *crossed }
            }
            Event::R2Remove { first, second } => Move::R2Remove { first: *first, second: *second },
            Event::R3 { pairs } => Move::R3 { pairs: *pairs },
            _ => return None,
        })
    }

    /// Inverse of [`Event::as_move`]; added lines get `lifetime`.
    pub fn from_move(mv: &Move, lifetime: Option<LifetimeId>) -> Event {
        match *mv {
            Move::R1Add { at } => Event::R1Add { comp: at.comp, gap: at.gap, lifetime },
            Move::R1Remove { at } => Event::R1Remove { comp: at.comp, slot: at.slot },
            Move::R2Add { first, second, crossed } => {
                Event::R2Add { first, second, crossed, lifetime: lifetime.unwrap_or_default() }
            }
            Move::R2Remove { first, second } => Event::R2Remove { first, second },
            Move::R3 { pairs } => Event::R3 { pairs },
        }
    }

    pub fn is_morse(&self) -> bool {
        matches!(self, Event::Birth | Event::Death { .. } | Event::Saddle { .. })
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Saddle { comp_a, gap_a, comp_b, gap_b, flip } => {
                write!(f, "Saddle({comp_a}:{gap_a}, {comp_b}:{gap_b}{})", if *flip { ", flip" } else { "" })
            }
            Event::Death { comp } => write!(f, "Death({comp})"),
            Event::Birth => f.write_str("Birth"),
            other => write!(f, "{:?}", other.as_move().expect("R-event")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Movie {
    #[serde(serialize_with = "ser_link", deserialize_with = "de_link")]
    pub initial: FreeLink,
    #[serde(default)]
    pub labels: BTreeMap<LifetimeId, LifetimeLabel>,
    pub events: Vec<Event>,
}

fn ser_link<S: Serializer>(link: &FreeLink, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&link.to_string())
}

fn de_link<'de, D: Deserializer<'de>>(d: D) -> Result<FreeLink, D::Error> {
    let s = String::deserialize(d)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl Movie {
    pub fn new(initial: FreeLink, events: Vec<Event>) -> Self {
        Movie { initial, labels: BTreeMap::new(), events }
    }

    pub fn from_json(text: &str) -> Result<Movie, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("movies serialize")
    }

    /// Numbers of births, deaths and saddles.
    pub fn morse_counts(&self) -> (usize, usize, usize) {
        let mut c = (0, 0, 0);
        for e in &self.events {
            match e {
                Event::Birth => c.0 += 1,
                Event::Death { .. } => c.1 += 1,
                Event::Saddle { .. } => c.2 += 1,
                _ => {}
            }
        }
        c
    }

    /// Levels of the movie; stops at the first event that does not apply.
    pub fn levels(&self) -> Result<Vec<Level>, CobordismError> {
        let mut out = vec![Level::initial(&self.initial, &self.labels)];
        for (i, e) in self.events.iter().enumerate() {
            let (next, _) = apply_event(out.last().expect("nonempty"), e, i, &self.labels)?;
            out.push(next);
        }
        Ok(out)
    }
}

/// A double line present at a level, with its current label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub lifetime: LifetimeId,
    pub label: ParityLabel,
}

/// A cross-section of a movie.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub link: FreeLink,
    pub lines: BTreeMap<Chord, Line>,
}

impl Level {
    /// Level zero: each chord is its own line named after it. A one-component
    /// link gets its Gaussian labels; otherwise labels come from `labels`,
    /// defaulting to even.
    pub fn initial(link: &FreeLink, labels: &BTreeMap<LifetimeId, LifetimeLabel>) -> Level {
        let gaussian = if link.is_knot() { gaussian_labels(link).ok() } else { None };
        let lines = link
            .chords()
            .into_iter()
            .map(|c| {
                let lifetime = c.to_string();
                let label = match &gaussian {
                    Some(t) => t.get(c).expect("labeled"),
                    None => labels.get(&lifetime).map(|l| l.to_label()).unwrap_or(ParityLabel::Even),
                };
                (c, Line { lifetime, label })
            })
            .collect();
        Level { link: link.clone(), lines }
    }

    pub fn table(&self) -> ParityTable {
        ParityTable(self.lines.iter().map(|(&c, l)| (c, l.label)).collect())
    }

    pub fn label(&self, c: Chord) -> ParityLabel {
        self.lines[&c].label
    }
}

/// What an event did to the set of components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Change {
    Move(Transition),
    Birth,
    Death {
        comp: usize,
    },
    /// Components `a < b` merged into one placed at `a`.
    Merge {
        a: usize,
        b: usize,
    },
    /// Component `comp` split; the second piece was appended.
    Split {
        comp: usize,
    },
}

fn rotated(seq: &[Chord], gap: usize) -> Vec<Chord> {
    if seq.is_empty() {
        return Vec::new();
    }
    seq[gap..].iter().chain(&seq[..gap]).copied().collect()
}

fn check_gap(link: &FreeLink, comp: usize, gap: usize) -> Result<(), CobordismError> {
    let seq = link.component(comp).map_err(|_| CobordismError::UnknownComponent(comp))?;
    if gap < seq.len().max(1) {
        Ok(())
    } else {
        Err(CobordismError::SiteInvalid(format!("no gap {gap} on component {comp}")))
    }
}

/// Applies an event to the link alone.
pub fn apply_structure(link: &FreeLink, event: &Event) -> Result<(FreeLink, Change), CobordismError> {
    if let Some(mv) = event.as_move() {
        let (next, t) = apply_move(link, &mv)?;
        return Ok((next, Change::Move(t)));
    }
    let mut comps = link.components().to_vec();
    let change = match *event {
        Event::Birth => {
            comps.push(Vec::new());
            Change::Birth
        }
        Event::Death { comp } => {
            match comps.get(comp) {
                None => return Err(CobordismError::UnknownComponent(comp)),
                Some(c) if !c.is_empty() => return Err(CobordismError::DeathOnNonTrivialCircle(comp)),
                Some(_) => {}
            }
            comps.remove(comp);
            Change::Death { comp }
        }
        Event::Saddle { comp_a, gap_a, comp_b, gap_b, flip } => {
            check_gap(link, comp_a, gap_a)?;
            check_gap(link, comp_b, gap_b)?;
            if comp_a == comp_b {
                let seq = &comps[comp_a];
                let m = seq.len();
                let len_a = if m == 0 { 0 } else { (gap_b + m - gap_a) % m };
                let r = rotated(seq, gap_a);
                let (a, b) = (r[..len_a].to_vec(), r[len_a..].to_vec());
                comps[comp_a] = a;
                comps.push(b);
                Change::Split { comp: comp_a }
            } else {
                let a = rotated(&comps[comp_a], gap_a);
                let mut b = rotated(&comps[comp_b], gap_b);
                if flip {
                    b.reverse();
                }
                let (lo, hi) = (comp_a.min(comp_b), comp_a.max(comp_b));
                comps[lo] = a.into_iter().chain(b).collect();
                comps.remove(hi);
                Change::Merge { a: lo, b: hi }
            }
        }
        _ => unreachable!("R-events handled above"),
    };
    Ok((FreeLink::from_raw(comps), change))
}

/// Applies an event to a level, threading lines through the move
/// correspondence. Event `index` names a loop line born without an id.
pub fn apply_event(
    level: &Level,
    event: &Event,
    index: usize,
    labels: &BTreeMap<LifetimeId, LifetimeLabel>,
) -> Result<(Level, Change), CobordismError> {
    let (link, change) = apply_structure(&level.link, event)?;
    let mut lines = level.lines.clone();
    if let Change::Move(t) = &change {
        for c in &t.removed {
            lines.remove(c);
        }
        match event {
            Event::R1Add { lifetime, .. } => {
                let id = lifetime.clone().unwrap_or_else(|| format!("#{index}"));
                let label = labels.get(&id).map(|l| l.to_label()).unwrap_or(ParityLabel::Even);
                lines.insert(t.added[0], Line { lifetime: id, label });
            }
            Event::R2Add { lifetime, .. } => {
                let label = labels.get(lifetime).ok_or_else(|| CobordismError::MissingLabel(lifetime.clone()))?;
                for &c in &t.added {
                    lines.insert(c, Line { lifetime: lifetime.clone(), label: label.to_label() });
                }
            }
            _ => {}
        }
        if t.kind == MoveKind::R3 {
            let odd = t.triangle.iter().filter(|c| lines[c].label.is_odd()).count();
            if odd == 2 {
                for c in &t.triangle {
                    let line = lines.get_mut(c).expect("triangle chords survive");
                    line.label = line.label.flipped();
                }
            }
        }
    }
    Ok((Level { link, lines }, change))
}

/// Word, Cayley point and class of one component of a labeled level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentWord {
    pub word: Vec<Letter>,
    pub x: u8,
    pub y: i64,
}

/// Reads each component from gap 0 forward with the line letters.
pub fn component_points(level: &Level) -> Vec<ComponentWord> {
    level
        .link
        .components()
        .iter()
        .map(|seq| {
            let word: Vec<Letter> = seq.iter().map(|c| level.label(*c).letter()).collect();
            let p = eval_word(&word);
            ComponentWord { word, x: p.x, y: p.y }
        })
        .collect()
}

/// Per-component `L`. Fails on the first component whose word is not an even
/// translation.
pub fn component_words(level: &Level) -> Result<Vec<(ComponentWord, u64)>, CobordismError> {
    component_points(level)
        .into_iter()
        .enumerate()
        .map(|(i, w)| {
            if w.x != 0 {
                Err(CobordismError::NonzeroFirstCoordinate(i))
            } else if w.y % 2 != 0 {
                Err(CobordismError::OddSecondCoordinate(i))
            } else {
                let l = w.y.unsigned_abs();
                Ok((w, l))
            }
        })
        .collect()
}
