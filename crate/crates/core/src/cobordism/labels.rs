//! Label assignment for double lines born mid-movie, as two linear systems
//! over ℤ₂: parities first, then the types of odd lines.

use std::collections::BTreeMap;

use super::{apply_structure, Change, CobordismError, Event, LifetimeId, LifetimeLabel, Movie, OddType, Parity};
use crate::diagram::{Chord, FreeLink};
use crate::moves::MoveKind;
use crate::parity::{gaussian_labels, ParityLabel};

/// Linear equations over ℤ₂ with bit-packed rows.
struct Gf2 {
    vars: usize,
    rows: Vec<(Vec<u64>, bool)>,
}

impl Gf2 {
    fn new(vars: usize) -> Self {
        Gf2 { vars, rows: Vec::new() }
    }

    fn add(&mut self, vars: impl IntoIterator<Item = usize>, rhs: bool) {
        let mut row = vec![0u64; self.vars.div_ceil(64)];
        for v in vars {
            row[v / 64] ^= 1 << (v % 64);
        }
        self.rows.push((row, rhs));
    }

    fn bit(row: &[u64], v: usize) -> bool {
        row[v / 64] >> (v % 64) & 1 == 1
    }

    /// Reduced row echelon elimination; free variables take `free(var)`.
    fn solve(mut self, mut free: impl FnMut(usize) -> bool) -> Option<Vec<bool>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for v in 0..self.vars {
            let Some(p) = (r..self.rows.len()).find(|&i| Self::bit(&self.rows[i].0, v)) else {
                continue;
            };
            self.rows.swap(r, p);
            let (pivot_row, pivot_rhs) = self.rows[r].clone();
            for (i, (row, rhs)) in self.rows.iter_mut().enumerate() {
                if i != r && Self::bit(row, v) {
                    for (a, b) in row.iter_mut().zip(&pivot_row) {
                        *a ^= b;
                    }
                    *rhs ^= pivot_rhs;
                }
            }
            pivots.push(v);
            r += 1;
        }
        if self.rows[r..].iter().any(|(_, rhs)| *rhs) {
            return None;
        }
        let mut value = vec![false; self.vars];
        let is_pivot: Vec<bool> = (0..self.vars).map(|v| pivots.contains(&v)).collect();
        for v in 0..self.vars {
            if !is_pivot[v] {
                value[v] = free(v);
            }
        }
        for (i, &v) in pivots.iter().enumerate() {
            let (row, rhs) = &self.rows[i];
            let mut x = *rhs;
            for (u, &val) in value.iter().enumerate() {
                if u != v && val && Self::bit(row, u) {
                    x ^= true;
                }
            }
            value[v] = x;
        }
        Some(value)
    }
}

enum Origin {
    Initial(ParityLabel),
    Loop,
    Bigon(LifetimeId),
}

/// One replay of the movie's structure with chords mapped to line indices.
struct Skeleton {
    origins: Vec<Origin>,
    steps: Vec<(FreeLink, BTreeMap<Chord, usize>)>,
}

fn skeleton(movie: &Movie) -> Result<Skeleton, CobordismError> {
    let initial = &movie.initial;
    if !initial.is_knot() {
        return Err(CobordismError::InitialNotKnot(initial.num_components()));
    }
    let gaussian = gaussian_labels(initial).expect("one component");
    let mut origins = Vec::new();
    let mut map = BTreeMap::new();
    for (c, l) in gaussian.iter() {
        map.insert(c, origins.len());
        origins.push(Origin::Initial(l));
    }
    let mut steps = vec![(initial.clone(), map.clone())];
    for e in &movie.events {
        let (link, change) = apply_structure(&steps.last().expect("nonempty").0, e)?;
        if let Change::Move(t) = &change {
            for c in &t.removed {
                map.remove(c);
            }
            match e {
                Event::R1Add { .. } => {
                    map.insert(t.added[0], origins.len());
                    origins.push(Origin::Loop);
                }
                Event::R2Add { lifetime, .. } => {
                    for &c in &t.added {
                        map.insert(c, origins.len());
                    }
                    origins.push(Origin::Bigon(lifetime.clone()));
                }
                _ => {}
            }
        }
        steps.push((link, map.clone()));
    }
    Ok(Skeleton { origins, steps })
}

/// Parities and types for the lines born by second moves so that the movie
/// satisfies the axioms and every level has even-translation component
/// words. Level-zero labels are the Gaussian ones and loops are even. Free
/// choices are taken from `free`, called once per free variable.
pub fn solve_labels(
    movie: &Movie,
    mut free: impl FnMut() -> bool,
) -> Result<BTreeMap<LifetimeId, LifetimeLabel>, CobordismError> {
    let sk = skeleton(movie)?;
    let n = sk.origins.len();

    let mut parity = Gf2::new(n);
    for (v, o) in sk.origins.iter().enumerate() {
        match o {
            Origin::Initial(l) => parity.add([v], l.is_odd()),
            Origin::Loop => parity.add([v], false),
            Origin::Bigon(_) => {}
        }
    }
    for (link, map) in &sk.steps {
        for seq in link.components() {
            if seq.len() % 2 != 0 {
                return Err(CobordismError::Infeasible);
            }
            parity.add(seq.iter().map(|c| map[c]), false);
        }
    }
    for (i, e) in movie.events.iter().enumerate() {
        let map = &sk.steps[i].1;
        let before = &sk.steps[i].0;
        if let Some(mv) = e.as_move() {
            let (_, t) = crate::moves::apply_move(before, &mv)?;
            match t.kind {
                MoveKind::R1Remove => parity.add([map[&t.removed[0]]], false),
                MoveKind::R2Remove => parity.add(t.removed.iter().map(|c| map[c]), false),
                MoveKind::R3 => parity.add(t.triangle.iter().map(|c| map[c]), false),
                MoveKind::R1Add | MoveKind::R2Add => {}
            }
        }
    }
    let odd = parity.solve(|_| free()).ok_or(CobordismError::Infeasible)?;

    // Types: a chord of line v has type t_v plus the number of flips that
    // chord went through; chords of one line can drift apart.
    let mut types = Gf2::new(n);
    for (v, o) in sk.origins.iter().enumerate() {
        if let Origin::Initial(l) = o {
            types.add([v], *l == ParityLabel::OddBPrime);
        }
    }
    let mut flips: BTreeMap<Chord, bool> = BTreeMap::new();
    for (i, e) in movie.events.iter().enumerate() {
        let map = &sk.steps[i].1;
        let Some(mv) = e.as_move() else { continue };
        let (_, t) = crate::moves::apply_move(&sk.steps[i].0, &mv)?;
        let flipped = |c: &Chord, flips: &BTreeMap<Chord, bool>| flips.get(c).copied().unwrap_or(false);
        match t.kind {
            MoveKind::R2Remove => {
                let (a, b) = (t.removed[0], t.removed[1]);
                if odd[map[&a]] && odd[map[&b]] {
                    types.add([map[&a], map[&b]], flipped(&a, &flips) ^ flipped(&b, &flips));
                }
            }
            MoveKind::R3 => {
                let odd_chords: Vec<Chord> = t.triangle.iter().copied().filter(|c| odd[map[c]]).collect();
                if odd_chords.len() == 2 {
                    for c in odd_chords {
                        let f = flipped(&c, &flips);
                        flips.insert(c, !f);
                    }
                }
            }
            _ => {}
        }
        for c in t.removed.iter().chain(&t.added) {
            flips.remove(c);
        }
    }
    let prime = types.solve(|_| free()).ok_or(CobordismError::Infeasible)?;

    let mut out = BTreeMap::new();
    for (v, o) in sk.origins.iter().enumerate() {
        if let Origin::Bigon(id) = o {
            let label = if odd[v] {
                LifetimeLabel {
                    parity: Parity::Odd,
                    odd_type: Some(if prime[v] { OddType::BPrime } else { OddType::B }),
                }
            } else {
                LifetimeLabel::EVEN
            };
            out.insert(id.clone(), label);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::verify;
    use crate::diagram::{GapRef, SlotRef};

    #[test]
    fn gf2_solves_and_detects_conflicts() {
        let mut s = Gf2::new(3);
        s.add([0, 1], true);
        s.add([1, 2], false);
        let v = s.solve(|_| true).unwrap();
        assert_eq!(v, vec![false, true, true]);
        let mut s = Gf2::new(2);
        s.add([0, 1], true);
        s.add([0], false);
        s.add([1], false);
        assert!(s.solve(|_| false).is_none());
        let mut s = Gf2::new(130);
        s.add([0, 129], true);
        s.add([129], true);
        assert_eq!(s.solve(|_| false).unwrap()[..1], [false]);
    }

    #[test]
    fn bigon_across_components_is_solved() {
        // Split the unknot, join the circles by a bigon, remove a loop chord
        // between them, and undo everything.
        let g = |comp, gap| GapRef { comp, gap };
        let s = |comp, slot| SlotRef { comp, slot };
        let events = vec![
            Event::Saddle { comp_a: 0, gap_a: 0, comp_b: 0, gap_b: 0, flip: false },
            Event::R2Add { first: g(0, 0), second: g(1, 0), crossed: false, lifetime: "t".into() },
            Event::R2Remove { first: s(0, 0), second: s(1, 0) },
            Event::Saddle { comp_a: 0, gap_a: 0, comp_b: 1, gap_b: 0, flip: false },
            Event::Death { comp: 0 },
        ];
        let mut movie = Movie::new(FreeLink::unknot(), events);
        movie.labels = solve_labels(&movie, || true).unwrap();
        assert_eq!(movie.labels["t"].parity, Parity::Odd);
        let r = verify(&movie, false);
        assert!(r.ok, "{:?}", r.violations);
    }

    #[test]
    fn forced_conflict_is_infeasible() {
        let movie = Movie::new(
            "1 2 1 2".parse().unwrap(),
            vec![Event::R2Remove { first: SlotRef { comp: 0, slot: 0 }, second: SlotRef { comp: 0, slot: 2 } }],
        );
        assert!(solve_labels(&movie, || false).is_ok());
        let movie = Movie::new("1 ; 1".parse().unwrap(), vec![]);
        assert_eq!(solve_labels(&movie, || false), Err(CobordismError::InitialNotKnot(2)));
    }
}
