use std::collections::BTreeSet;

use serde::Serialize;

use super::{apply_event, component_words, Change, CobordismError, Event, Level, LifetimeId, Movie};
use crate::diagram::Chord;
use crate::invariant::invariant_l;
use crate::parity::{check_parity_axioms, gaussian_labels, AxiomViolation, ParityLabel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "violation")]
pub enum Violation {
    InitialNotKnot { components: usize },
    LevelZeroLabelMismatch { lifetime: LifetimeId, expected: ParityLabel },
    EventInvalid { event: usize, reason: String },
    DuplicateLifetime { event: usize, lifetime: LifetimeId },
    Axiom { event: usize, detail: AxiomViolation },
    NonzeroFirstCoordinate { level: usize, comp: usize },
    OddSecondCoordinate { level: usize, comp: usize },
    StrictLabelMismatch { level: usize, chord: Chord },
    LabelMultiset { event: usize, before: Vec<u64>, after: Vec<u64> },
    FinalLevelNonEmpty { components: usize },
    NonIntegralGenus { twice_genus: i64 },
    NegativeGenus { twice_genus: i64 },
    DisconnectedSurface,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentReport {
    pub x: u8,
    pub y: i64,
    #[serde(rename = "L")]
    pub l: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelReport {
    pub code: String,
    pub components: usize,
    pub words: Vec<ComponentReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifierReport {
    pub ok: bool,
    /// `(saddles + 1 - births - deaths) / 2`; absent when an event failed.
    pub genus: Option<f64>,
    pub euler_characteristic: i64,
    pub violations: Vec<Violation>,
    pub levels: Vec<LevelReport>,
    #[serde(rename = "labelMultisets")]
    pub label_multisets: Vec<Vec<u64>>,
    #[serde(rename = "reebIsTree")]
    pub reeb_is_tree: bool,
}

impl VerifierReport {
    pub fn genus_value(&self) -> Option<u64> {
        match self.genus {
            Some(g) if g >= 0.0 && g.fract() == 0.0 => Some(g as u64),
            _ => None,
        }
    }
}

fn level_report(index: usize, level: &Level, violations: &mut Vec<Violation>) -> (LevelReport, Option<Vec<u64>>) {
    let points = super::component_points(level);
    let words = component_words(level);
    if let Err(e) = &words {
        violations.push(match *e {
            CobordismError::NonzeroFirstCoordinate(comp) => Violation::NonzeroFirstCoordinate { level: index, comp },
            CobordismError::OddSecondCoordinate(comp) => Violation::OddSecondCoordinate { level: index, comp },
            _ => unreachable!("component words fail only on coordinates"),
        });
    }
    let ls = words.ok().map(|w| w.into_iter().map(|(_, l)| l).collect::<Vec<_>>());
    let report = LevelReport {
        code: level.link.to_string(),
        components: level.link.num_components(),
        words: points
            .iter()
            .enumerate()
            .map(|(i, p)| ComponentReport { x: p.x, y: p.y, l: ls.as_ref().map(|v| v[i]) })
            .collect(),
    };
    (report, ls)
}

fn sorted(mut v: Vec<u64>) -> Vec<u64> {
    v.sort_unstable();
    v
}

/// Checks one multiset transition: Birth adds 0, Death removes 0, a fusion
/// replaces `m, n` by `m + n` or `|m - n|`, a fission is the reverse, and
/// nothing else changes.
fn klm_ok(change: &Change, before: &[u64], after: &[u64]) -> bool {
    let rest = |v: &[u64], drop: &[usize]| {
        sorted(v.iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, &l)| l).collect())
    };
    let fuses = |m: u64, n: u64, k: u64| k == m + n || k == m.abs_diff(n);
    match *change {
        Change::Move(_) => sorted(before.to_vec()) == sorted(after.to_vec()),
        Change::Birth => after.last() == Some(&0) && rest(after, &[after.len() - 1]) == sorted(before.to_vec()),
        Change::Death { comp } => before[comp] == 0 && rest(before, &[comp]) == sorted(after.to_vec()),
        Change::Merge { a, b } => fuses(before[a], before[b], after[a]) && rest(before, &[a, b]) == rest(after, &[a]),
        Change::Split { comp } => {
            let last = after.len() - 1;
            fuses(after[comp], after[last], before[comp]) && rest(before, &[comp]) == rest(after, &[comp, last])
        }
    }
}

struct Reeb {
    parent: Vec<usize>,
    edges: usize,
    live: Vec<usize>,
}

impl Reeb {
    fn new(components: usize) -> Self {
        Reeb { parent: (0..components).collect(), edges: 0, live: (0..components).collect() }
    }

    fn node(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges += 1;
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    fn record(&mut self, change: &Change) {
        match *change {
            Change::Move(_) => {}
            Change::Birth => {
                let n = self.node();
                self.live.push(n);
            }
            Change::Death { comp } => {
                self.live.remove(comp);
            }
            Change::Merge { a, b } => {
                let n = self.node();
                let (na, nb) = (self.live[a], self.live[b]);
                self.edge(na, n);
                self.edge(nb, n);
                self.live[a] = n;
                self.live.remove(b);
            }
            Change::Split { comp } => {
                let (n1, n2) = (self.node(), self.node());
                let old = self.live[comp];
                self.edge(old, n1);
                self.edge(old, n2);
                self.live[comp] = n1;
                self.live.push(n2);
            }
        }
    }

    fn connected(&mut self) -> bool {
        let n = self.parent.len();
        let roots: BTreeSet<usize> = (0..n).map(|i| self.find(i)).collect();
        roots.len() <= 1
    }

    fn is_tree(&mut self) -> bool {
        let n = self.parent.len();
        self.connected() && self.edges + 1 == n
    }
}

/// Replays a movie and checks level-zero labels, the parity axioms at every
/// Reidemeister event, per-component words, the final level, the genus, the
/// Reeb graph and the label-multiset transitions. With `strict`, every
/// one-component level must carry its own Gaussian labels.
pub fn verify(movie: &Movie, strict: bool) -> VerifierReport {
    let mut violations = Vec::new();
    let initial = &movie.initial;
    if !initial.is_knot() {
        violations.push(Violation::InitialNotKnot { components: initial.num_components() });
    }
    let mut level = Level::initial(initial, &movie.labels);
    let mut used: BTreeSet<LifetimeId> = level.lines.values().map(|l| l.lifetime.clone()).collect();
    if initial.is_knot() {
        for line in level.lines.values() {
            if let Some(given) = movie.labels.get(&line.lifetime) {
                if given.to_label() != line.label {
                    violations.push(Violation::LevelZeroLabelMismatch {
                        lifetime: line.lifetime.clone(),
                        expected: line.label,
                    });
                }
            }
        }
    }

    let (rep, mut multiset) = level_report(0, &level, &mut violations);
    let mut levels = vec![rep];
    let mut label_multisets = vec![sorted(multiset.clone().unwrap_or_default())];
    let mut reeb = Reeb::new(initial.num_components());
    let mut failed = false;

    for (i, event) in movie.events.iter().enumerate() {
        let (next, change) = match apply_event(&level, event, i, &movie.labels) {
            Ok(r) => r,
            Err(e) => {
                violations.push(Violation::EventInvalid { event: i, reason: e.to_string() });
                failed = true;
                break;
            }
        };
        if let Event::R2Add { lifetime, .. } | Event::R1Add { lifetime: Some(lifetime), .. } = event {
            if !used.insert(lifetime.clone()) {
                violations.push(Violation::DuplicateLifetime { event: i, lifetime: lifetime.clone() });
            }
        }
        if let Change::Move(t) = &change {
            for detail in check_parity_axioms(&level.link, &next.link, t, &level.table(), &next.table()) {
                violations.push(Violation::Axiom { event: i, detail });
            }
        }
        if strict && next.link.is_knot() {
            let gaussian = gaussian_labels(&next.link).expect("one component");
            if let Some((c, _)) = next.table().iter().find(|&(c, l)| gaussian.get(c) != Some(l)) {
                violations.push(Violation::StrictLabelMismatch { level: i + 1, chord: c });
            }
        }
        let (rep, next_multiset) = level_report(i + 1, &next, &mut violations);
        if let (Some(b), Some(a)) = (&multiset, &next_multiset) {
            if !klm_ok(&change, b, a) {
                violations.push(Violation::LabelMultiset {
                    event: i,
                    before: sorted(b.clone()),
                    after: sorted(a.clone()),
                });
            }
        }
        reeb.record(&change);
        levels.push(rep);
        label_multisets.push(sorted(next_multiset.clone().unwrap_or_default()));
        multiset = next_multiset;
        level = next;
    }
    let (births, deaths, saddles) = movie.morse_counts();
    let euler = births as i64 + deaths as i64 - saddles as i64;
    let twice_genus = 1 - euler;
    let mut genus = None;
    let mut reeb_is_tree = false;
    if !failed {
        if !level.link.is_empty() {
            violations.push(Violation::FinalLevelNonEmpty { components: level.link.num_components() });
        }
        if twice_genus % 2 != 0 {
            violations.push(Violation::NonIntegralGenus { twice_genus });
        } else if twice_genus < 0 {
            violations.push(Violation::NegativeGenus { twice_genus });
        }
        genus = Some(twice_genus as f64 / 2.0);
        if !reeb.connected() {
            violations.push(Violation::DisconnectedSurface);
        }
        reeb_is_tree = reeb.is_tree();
    }
    VerifierReport {
        ok: violations.is_empty(),
        genus,
        euler_characteristic: euler,
        violations,
        levels,
        label_multisets,
        reeb_is_tree,
    }
}

/// Genus from the Morse counts, after checking the movie ends empty.
pub fn genus(movie: &Movie) -> Result<u64, CobordismError> {
    if !movie.initial.is_knot() {
        return Err(CobordismError::InitialNotKnot(movie.initial.num_components()));
    }
    let mut link = movie.initial.clone();
    for e in &movie.events {
        link = super::apply_structure(&link, e)?.0;
    }
    if !link.is_empty() {
        return Err(CobordismError::FinalLevelNonEmpty);
    }
    let (b, d, s) = movie.morse_counts();
    let twice = s as i64 + 1 - b as i64 - d as i64;
    if twice % 2 != 0 {
        Err(CobordismError::NonIntegralGenus)
    } else if twice < 0 {
        Err(CobordismError::NegativeGenus)
    } else {
        Ok((twice / 2) as u64)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result")]
pub enum TheoremCheck {
    Consistent {
        #[serde(rename = "L")]
        l: u64,
    },
    CounterexampleFlag {
        #[serde(rename = "L")]
        l: u64,
    },
}

/// For a verified genus-0 movie, `L` of the initial knot must vanish.
pub fn main_theorem_check(movie: &Movie) -> Result<TheoremCheck, CobordismError> {
    let report = verify(movie, false);
    if !report.ok {
        return Err(CobordismError::PreconditionNotMet(format!("{} violation(s)", report.violations.len())));
    }
    if report.genus_value() != Some(0) {
        return Err(CobordismError::PreconditionNotMet("genus is not 0".into()));
    }
    let l = invariant_l(&movie.initial).expect("verified initial level is a knot").l;
    Ok(if l == 0 { TheoremCheck::Consistent { l } } else { TheoremCheck::CounterexampleFlag { l } })
}
