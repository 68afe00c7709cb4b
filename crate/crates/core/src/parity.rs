//! Gaussian parity, justified parity, the parity axioms as a checker, and
//! the parity cocycle evaluated on ℤ₂-cycles of the framed 4-graph.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Chord, DiagramError, EdgeCycle, FreeLink};
use crate::group::Letter;
use crate::moves::{MoveKind, Transition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ParityLabel {
    Even,
    /// Odd chord of the first type.
    OddB,
    /// Odd chord of the second type.
    OddBPrime,
}

impl ParityLabel {
    pub fn letter(self) -> Letter {
        match self {
            ParityLabel::Even => Letter::A,
            ParityLabel::OddB => Letter::B,
            ParityLabel::OddBPrime => Letter::BPrime,
        }
    }

    pub fn is_odd(self) -> bool {
        self != ParityLabel::Even
    }

    /// Parity as an element of ℤ₂.
    pub fn bit(self) -> bool {
        self.is_odd()
    }

    /// The other odd type; `Even` is fixed.
    pub fn flipped(self) -> Self {
        match self {
            ParityLabel::Even => ParityLabel::Even,
            ParityLabel::OddB => ParityLabel::OddBPrime,
            ParityLabel::OddBPrime => ParityLabel::OddB,
        }
    }
}

impl fmt::Display for ParityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ParityLabel::Even => "Even",
            ParityLabel::OddB => "OddB",
            ParityLabel::OddBPrime => "OddBPrime",
        };
        f.write_str(s)
    }
}

/// Chord labels. Serialises as `{"<chord>": "Even" | "OddB" | "OddBPrime"}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParityTable(pub BTreeMap<Chord, ParityLabel>);

impl ParityTable {
    pub fn get(&self, c: Chord) -> Option<ParityLabel> {
        self.0.get(&c).copied()
    }

    pub fn insert(&mut self, c: Chord, label: ParityLabel) {
        self.0.insert(c, label);
    }

    pub fn iter(&self) -> impl Iterator<Item = (Chord, ParityLabel)> + '_ {
        self.0.iter().map(|(c, l)| (*c, *l))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn odd_count(&self) -> usize {
        self.0.values().filter(|l| l.is_odd()).count()
    }

    pub fn all_even(&self) -> bool {
        self.odd_count() == 0
    }
}

/// A chord is even iff it is linked with an even number of chords. Odd
/// chords carry the `OddB` placeholder until [`justified_type`] resolves them.
pub fn gaussian_parity(link: &FreeLink) -> Result<ParityTable, DiagramError> {
    let m = link.linking_matrix()?;
    Ok(ParityTable(
        (0..m.len())
            .map(|a| {
                let label = if m.degree(a) % 2 == 0 { ParityLabel::Even } else { ParityLabel::OddB };
                (m.chords[a], label)
            })
            .collect(),
    ))
}

/// Resolves odd chords: first type iff linked with an even number of chords
/// that are even in `table`.
pub fn justified_type(link: &FreeLink, table: &ParityTable) -> Result<ParityTable, DiagramError> {
    let m = link.linking_matrix()?;
    let even: Vec<bool> = m
        .chords
        .iter()
        .map(|c| table.get(*c).map(|l| !l.is_odd()).ok_or(DiagramError::UnknownChord(*c)))
        .collect::<Result<_, _>>()?;
    let mut out = ParityTable::default();
    for a in 0..m.len() {
        let label = if even[a] {
            ParityLabel::Even
        } else {
            let linked_even = (0..m.len()).filter(|&b| b != a && even[b] && m.linked(a, b)).count();
            if linked_even % 2 == 0 {
                ParityLabel::OddB
            } else {
                ParityLabel::OddBPrime
            }
        };
        out.insert(m.chords[a], label);
    }
    Ok(out)
}

/// Gaussian parity with justified types in one call.
pub fn gaussian_labels(link: &FreeLink) -> Result<ParityTable, DiagramError> {
    let parity = gaussian_parity(link)?;
    justified_type(link, &parity)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation")]
pub enum AxiomViolation {
    /// The loop chord of a first move is odd.
    R1OddViolation { chord: Chord },
    /// The two bigon chords of a second move differ in parity or type.
    R2LabelMismatch { first: Chord, second: Chord },
    /// A triangle chord changed parity across a third move.
    R3ParityChanged { chord: Chord },
    /// A triangle with one or three odd chords.
    R3OddCount { count: usize },
    /// An odd triangle chord kept its type across a two-odd third move.
    R3TypeNotFlipped { chord: Chord },
    /// An even triangle chord, or an odd one in an all-odd triangle, changed label.
    R3LabelChanged { chord: Chord },
    /// A chord away from the move changed its label.
    UntouchedChanged { chord: Chord },
    /// No label supplied for a chord that the check needs.
    MissingLabel { chord: Chord },
}

/// Checks the parity and justified-parity axioms for one move, given labels
/// before and after. Chords keep their identifiers across moves, so the
/// correspondence of untouched and triangle chords is the identity.
pub fn check_parity_axioms(
    before: &FreeLink,
    after: &FreeLink,
    transition: &Transition,
    p_before: &ParityTable,
    p_after: &ParityTable,
) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let label = |table: &ParityTable, c: Chord, out: &mut Vec<AxiomViolation>| {
        let l = table.get(c);
        if l.is_none() {
            out.push(AxiomViolation::MissingLabel { chord: c });
        }
        l
    };

    match transition.kind {
        MoveKind::R1Remove | MoveKind::R1Add => {
            let (table, c) = if transition.kind == MoveKind::R1Remove {
                (p_before, transition.removed[0])
            } else {
                (p_after, transition.added[0])
            };
            if let Some(l) = label(table, c, &mut out) {
                if l.is_odd() {
                    out.push(AxiomViolation::R1OddViolation { chord: c });
                }
            }
        }
        MoveKind::R2Remove | MoveKind::R2Add => {
            let (table, pair) = if transition.kind == MoveKind::R2Remove {
                (p_before, &transition.removed)
            } else {
                (p_after, &transition.added)
            };
            let (p, q) = (pair[0], pair[1]);
            if let (Some(lp), Some(lq)) = (label(table, p, &mut out), label(table, q, &mut out)) {
                if lp != lq {
                    out.push(AxiomViolation::R2LabelMismatch { first: p, second: q });
                }
            }
        }
        MoveKind::R3 => {
            let mut labels = Vec::new();
            for &c in &transition.triangle {
                if let (Some(b), Some(a)) = (label(p_before, c, &mut out), label(p_after, c, &mut out)) {
                    labels.push((c, b, a));
                }
            }
            for &(c, b, a) in &labels {
                if b.is_odd() != a.is_odd() {
                    out.push(AxiomViolation::R3ParityChanged { chord: c });
                }
            }
            if labels.len() == 3 {
                let odd = labels.iter().filter(|(_, b, _)| b.is_odd()).count();
                if odd % 2 == 1 {
                    out.push(AxiomViolation::R3OddCount { count: odd });
                } else {
                    for &(c, b, a) in &labels {
                        if b.is_odd() && a.is_odd() && odd == 2 && a != b.flipped() {
                            out.push(AxiomViolation::R3TypeNotFlipped { chord: c });
                        } else if (!b.is_odd() || odd != 2) && a != b && b.is_odd() == a.is_odd() {
                            out.push(AxiomViolation::R3LabelChanged { chord: c });
                        }
                    }
                }
            }
        }
    }

    let touched =
        |c: &Chord| transition.removed.contains(c) || transition.added.contains(c) || transition.triangle.contains(c);
    for c in before.chords().into_iter().filter(|c| !touched(c)) {
        if !after.contains(c) {
            continue;
        }
        match (p_before.get(c), p_after.get(c)) {
            (Some(b), Some(a)) if a != b => out.push(AxiomViolation::UntouchedChanged { chord: c }),
            (Some(_), Some(_)) => {}
            _ => out.push(AxiomViolation::MissingLabel { chord: c }),
        }
    }
    out
}

/// Value of the parity cocycle on a ℤ₂-cycle: the sum of parity bits over
/// the vertices where the cycle uses exactly two non-opposite half-edges.
pub fn cocycle_value(link: &FreeLink, table: &ParityTable, cycle: &EdgeCycle) -> Result<bool, DiagramError> {
    let seq = link.knot_sequence()?;
    let m = seq.len();
    for a in &cycle.arcs {
        if a.comp != 0 || a.arc >= m.max(1) {
            return Err(DiagramError::UnknownArc { comp: a.comp, arc: a.arc });
        }
    }
    let uses = |arc: usize| cycle.arcs.contains(&crate::diagram::ArcRef { comp: 0, arc });
    let mut value = false;
    for (chord, [p, q]) in link.endpoints() {
        // At slot s the incoming arc s-1 and outgoing arc s are opposite.
        let at = |s: usize| (uses((s + m - 1) % m) as usize, uses(s) as usize);
        let (pi, po) = at(p.slot);
        let (qi, qo) = at(q.slot);
        let total = pi + po + qi + qo;
        if total % 2 == 1 {
            return Err(DiagramError::NotACycle(chord));
        }
        let same_passage = (pi + po == 2) || (qi + qo == 2);
        if total == 2 && !same_passage {
            let l = table.get(chord).ok_or(DiagramError::UnknownChord(chord))?;
            value ^= l.bit();
        }
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::ArcRef;
    use crate::moves::{apply_move, find_r3_sites};

    fn link(s: &str) -> FreeLink {
        s.parse().unwrap()
    }

    fn labels(s: &str) -> Vec<(u32, ParityLabel)> {
        gaussian_labels(&link(s)).unwrap().iter().map(|(c, l)| (c.0, l)).collect()
    }

    use ParityLabel::*;

    #[test]
    fn gaussian_examples() {
        assert_eq!(labels("1 1"), vec![(1, Even)]);
        assert_eq!(labels("1 2 1 2"), vec![(1, OddB), (2, OddB)]);
        assert_eq!(labels("1 2 3 1 2 3"), vec![(1, Even), (2, Even), (3, Even)]);
        assert_eq!(labels("1 2 1 3 2 3"), vec![(1, OddBPrime), (2, Even), (3, OddBPrime)]);
        assert_eq!(gaussian_parity(&link("1 1 ; 2 2")), Err(DiagramError::MultiComponent(2)));
    }

    #[test]
    fn r1_axiom() {
        let before = link("1 1");
        let after = FreeLink::unknot();
        let t = Transition { kind: MoveKind::R1Remove, removed: vec![Chord(1)], added: vec![], triangle: vec![] };
        let even = ParityTable([(Chord(1), Even)].into_iter().collect());
        assert!(check_parity_axioms(&before, &after, &t, &even, &ParityTable::default()).is_empty());
        let odd = ParityTable([(Chord(1), OddB)].into_iter().collect());
        assert_eq!(
            check_parity_axioms(&before, &after, &t, &odd, &ParityTable::default()),
            vec![AxiomViolation::R1OddViolation { chord: Chord(1) }]
        );
    }

    #[test]
    fn r3_axiom_on_even_triangle() {
        let before = link("1 2 2 3 3 1");
        let site = find_r3_sites(&before)[0].clone();
        let (after, t) = apply_move(&before, &site).unwrap();
        assert_eq!(after.to_string(), "2 1 3 2 1 3");
        let pb = gaussian_labels(&before).unwrap();
        let pa = gaussian_labels(&after).unwrap();
        assert!(pb.all_even() && pa.all_even());
        assert!(check_parity_axioms(&before, &after, &t, &pb, &pa).is_empty());
    }

    #[test]
    fn r3_type_flip_detected() {
        let t = Transition {
            kind: MoveKind::R3,
            removed: vec![],
            added: vec![],
            triangle: vec![Chord(1), Chord(2), Chord(3)],
        };
        let l = link("1 2 3 1 2 3");
        let pb = ParityTable([(Chord(1), OddB), (Chord(2), OddB), (Chord(3), Even)].into_iter().collect());
        let kept = pb.clone();
        let flipped =
            ParityTable([(Chord(1), OddBPrime), (Chord(2), OddBPrime), (Chord(3), Even)].into_iter().collect());
        assert!(check_parity_axioms(&l, &l, &t, &pb, &flipped).is_empty());
        assert_eq!(
            check_parity_axioms(&l, &l, &t, &pb, &kept),
            vec![
                AxiomViolation::R3TypeNotFlipped { chord: Chord(1) },
                AxiomViolation::R3TypeNotFlipped { chord: Chord(2) }
            ]
        );
        let one_odd = ParityTable([(Chord(1), OddB), (Chord(2), Even), (Chord(3), Even)].into_iter().collect());
        assert_eq!(check_parity_axioms(&l, &l, &t, &one_odd, &one_odd), vec![AxiomViolation::R3OddCount { count: 1 }]);
    }

    #[test]
    fn cocycle_examples() {
        for code in ["1 1", "1 2 1 2", "1 2 1 3 2 3", "1 2 3 1 2 3"] {
            let l = link(code);
            let p = gaussian_labels(&l).unwrap();
            assert!(!cocycle_value(&l, &p, &EdgeCycle::whole(&l)).unwrap());
        }
        let l = link("1 2 1 2");
        let p = gaussian_labels(&l).unwrap();
        let [h1, _] = l.half_cycles(Chord(1)).unwrap();
        assert_eq!(h1.arcs.iter().map(|a| a.arc).collect::<Vec<_>>(), vec![0, 1]);
        assert!(cocycle_value(&l, &p, &h1).unwrap());

        let l = link("1 1");
        let p = gaussian_labels(&l).unwrap();
        let [h1, h2] = l.half_cycles(Chord(1)).unwrap();
        assert!(!cocycle_value(&l, &p, &h1).unwrap());
        assert!(!cocycle_value(&l, &p, &h2).unwrap());
    }

    #[test]
    fn cocycle_rejects_non_cycles() {
        let l = link("1 2 1 2");
        let p = gaussian_labels(&l).unwrap();
        let path = EdgeCycle::new([ArcRef { comp: 0, arc: 0 }]);
        assert!(matches!(cocycle_value(&l, &p, &path), Err(DiagramError::NotACycle(_))));
        let bad = EdgeCycle::new([ArcRef { comp: 0, arc: 9 }]);
        assert!(matches!(cocycle_value(&l, &p, &bad), Err(DiagramError::UnknownArc { .. })));
    }
}
