//! Projection of a verified movie onto its even double lines.

use std::collections::BTreeMap;

use super::{apply_structure, solve_labels, CobordismError, Event, Level, Movie};
use crate::diagram::{Chord, FreeLink, GapRef, SlotRef};

/// How the projected link sits inside the original one: chord
/// correspondence, and for each original component the projected component
/// and the rotation `r` with `P[j][k] = D[(k + r) mod n]`, where `D` is the
/// even part of the original component.
#[derive(Clone, Debug)]
struct Alignment {
    map: BTreeMap<Chord, Chord>,
    comps: Vec<(usize, usize)>,
}

fn even_part(level: &Level, comp: usize) -> Vec<Chord> {
    level.link.components()[comp].iter().copied().filter(|c| !level.label(*c).is_odd()).collect()
}

fn rotation_matches(
    d: &[Chord],
    p: &[Chord],
    r: usize,
    map: &mut BTreeMap<Chord, Chord>,
    back: &mut BTreeMap<Chord, Chord>,
) -> bool {
    let n = d.len();
    for (k, &q) in p.iter().enumerate() {
        let c = d[(k + r) % n];
        match (map.get(&c), back.get(&q)) {
            (Some(&m), _) if m != q => return false,
            (None, Some(_)) => return false,
            (None, None) => {
                map.insert(c, q);
                back.insert(q, c);
            }
            _ => {}
        }
    }
    true
}

fn assign(
    parts: &[Vec<Chord>],
    p: &FreeLink,
    c: usize,
    used: &mut Vec<bool>,
    map: &BTreeMap<Chord, Chord>,
    comps: &mut Vec<(usize, usize)>,
) -> Option<BTreeMap<Chord, Chord>> {
    if c == parts.len() {
        return Some(map.clone());
    }
    let d = &parts[c];
    for (j, seq) in p.components().iter().enumerate() {
        if used[j] || seq.len() != d.len() {
            continue;
        }
        for r in 0..d.len().max(1) {
            let mut m = map.clone();
            let mut back: BTreeMap<Chord, Chord> = m.iter().map(|(&a, &b)| (b, a)).collect();
            if !rotation_matches(d, seq, r, &mut m, &mut back) {
                continue;
            }
            used[j] = true;
            comps.push((j, r));
            if let Some(done) = assign(parts, p, c + 1, used, &m, comps) {
                return Some(done);
            }
            comps.pop();
            used[j] = false;
        }
    }
    None
}

/// Matches the even part of `level` with `p`, extending `known` to chords
/// that were just born.
fn align(level: &Level, p: &FreeLink, known: &BTreeMap<Chord, Chord>) -> Result<Alignment, CobordismError> {
    let parts: Vec<Vec<Chord>> = (0..level.link.num_components()).map(|c| even_part(level, c)).collect();
    let lost = || CobordismError::PreconditionNotMet("projection lost track of the even lines".into());
    if parts.len() != p.num_components() {
        return Err(lost());
    }
    let known: BTreeMap<Chord, Chord> =
        known.iter().filter(|(c, _)| level.lines.contains_key(c)).map(|(&a, &b)| (a, b)).collect();
    let mut comps = Vec::new();
    let map = assign(&parts, p, 0, &mut vec![false; parts.len()], &known, &mut comps).ok_or_else(lost)?;
    Ok(Alignment { map, comps })
}

fn odd(level: &Level, c: Chord) -> bool {
    level.label(c).is_odd()
}

fn even_before(level: &Level, comp: usize, idx: usize) -> usize {
    level.link.components()[comp][..idx].iter().filter(|c| !odd(level, **c)).count()
}

fn slot(level: &Level, a: &Alignment, s: SlotRef) -> SlotRef {
    let (pc, r) = a.comps[s.comp];
    let n = even_part(level, s.comp).len();
    let i = even_before(level, s.comp, s.slot);
    SlotRef { comp: pc, slot: (i + n - r) % n }
}

fn gap(level: &Level, a: &Alignment, g: GapRef) -> GapRef {
    let (pc, r) = a.comps[g.comp];
    let n = even_part(level, g.comp).len();
    if n == 0 {
        return GapRef { comp: pc, gap: 0 };
    }
    let i = even_before(level, g.comp, g.gap);
    GapRef { comp: pc, gap: (i + n - r) % n }
}

fn translate(e: &Event, o: &Level, a: &Alignment) -> Option<Event> {
    let at = |s: SlotRef| o.link.chord_at(s).expect("verified site");
    Some(match e {
        Event::R1Remove { comp, slot: s } => {
            let p = slot(o, a, SlotRef { comp: *comp, slot: *s });
            Event::R1Remove { comp: p.comp, slot: p.slot }
        }
        Event::R1Add { comp, gap: g, lifetime } => {
            let p = gap(o, a, GapRef { comp: *comp, gap: *g });
            Event::R1Add { comp: p.comp, gap: p.gap, lifetime: lifetime.clone() }
        }
        Event::R2Remove { first, second } => {
            if odd(o, at(*first)) {
                return None;
            }
            Event::R2Remove { first: slot(o, a, *first), second: slot(o, a, *second) }
        }
        Event::R2Add { first, second, crossed, lifetime } => Event::R2Add {
            first: gap(o, a, *first),
            second: gap(o, a, *second),
            crossed: *crossed,
            lifetime: lifetime.clone(),
        },
        Event::R3 { pairs } => {
            let odd_count = pairs
                .iter()
                .flat_map(|&s| {
                    let m = o.link.components()[s.comp].len();
                    [at(s), at(SlotRef { comp: s.comp, slot: (s.slot + 1) % m })]
                })
                .collect::<std::collections::BTreeSet<_>>()
                .into_iter()
                .filter(|&c| odd(o, c))
                .count();
            if odd_count > 0 {
                return None;
            }
            Event::R3 { pairs: pairs.map(|s| slot(o, a, s)) }
        }
        Event::Birth => Event::Birth,
        Event::Death { comp } => Event::Death { comp: a.comps[*comp].0 },
        Event::Saddle { comp_a, gap_a, comp_b, gap_b, flip } => {
            let ga = gap(o, a, GapRef { comp: *comp_a, gap: *gap_a });
            let gb = gap(o, a, GapRef { comp: *comp_b, gap: *gap_b });
            Event::Saddle { comp_a: ga.comp, gap_a: ga.gap, comp_b: gb.comp, gap_b: gb.gap, flip: *flip }
        }
    })
}

/// Deletes every odd double line from a verified movie. The initial knot
/// becomes its odd-deleted image; events on odd lines and triangles with two
/// odd lines disappear; Morse events are kept. Labels of the projected
/// movie are recomputed, since deleting odd chords changes which of the
/// remaining chords are odd at level zero.
pub fn f_project_movie(movie: &Movie) -> Result<Movie, CobordismError> {
    let report = super::verify(movie, false);
    if !report.ok {
        return Err(CobordismError::PreconditionNotMet(format!("{} violation(s)", report.violations.len())));
    }
    let levels = movie.levels()?;
    if levels.iter().all(|l| l.lines.values().all(|line| !line.label.is_odd())) {
        return Ok(movie.clone());
    }
    let odd_initial = levels[0].lines.iter().filter(|(_, l)| l.label.is_odd()).map(|(&c, _)| c).collect();
    let initial = movie.initial.delete_chords(&odd_initial);
    let mut a = align(&levels[0], &initial, &BTreeMap::new())?;
    let mut p = initial.clone();
    let mut events = Vec::new();
    for (i, e) in movie.events.iter().enumerate() {
        let skip = match e {
            Event::R2Add { lifetime, .. } => movie.labels.get(lifetime).is_some_and(|l| l.to_label().is_odd()),
            _ => false,
        };
        if !skip {
            if let Some(pe) = translate(e, &levels[i], &a) {
                p = apply_structure(&p, &pe)?.0;
                events.push(pe);
            }
        }
        a = align(&levels[i + 1], &p, &a.map)?;
    }
    let mut out = Movie::new(initial, events);
    out.labels = solve_labels(&out, || false)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cobordism::verify;

    fn s(comp: usize, slot: usize) -> SlotRef {
        SlotRef { comp, slot }
    }

    #[test]
    fn all_odd_movie_projects_to_morse_events() {
        let m = Movie::new(
            "1 2 1 2".parse().unwrap(),
            vec![
                Event::Saddle { comp_a: 0, gap_a: 1, comp_b: 0, gap_b: 3, flip: false },
                Event::Saddle { comp_a: 0, gap_a: 0, comp_b: 1, gap_b: 0, flip: true },
                Event::R2Remove { first: s(0, 0), second: s(0, 2) },
                Event::Death { comp: 0 },
            ],
        );
        let p = f_project_movie(&m).unwrap();
        assert_eq!(p.initial.to_string(), "()");
        assert!(p.events.iter().all(Event::is_morse));
        assert_eq!(p.events.len(), 3);
        let r = verify(&p, false);
        assert!(r.ok, "{:?}", r.violations);
        assert_eq!(r.genus, verify(&m, false).genus);
    }

    #[test]
    fn even_movie_is_unchanged() {
        let m = Movie::new(
            "1 2 2 1".parse().unwrap(),
            vec![Event::R2Remove { first: s(0, 0), second: s(0, 2) }, Event::Death { comp: 0 }],
        );
        assert_eq!(f_project_movie(&m).unwrap(), m);
    }

    #[test]
    fn unverified_movie_is_rejected() {
        let m = Movie::new("1 1".parse().unwrap(), vec![]);
        assert!(matches!(f_project_movie(&m), Err(CobordismError::PreconditionNotMet(_))));
    }
}
