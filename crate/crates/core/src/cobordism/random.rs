//! Seeded generator of valid movies, built backwards from the empty link.
//!
//! Each backward step proposes an earlier level together with the forward
//! event that leads from it to the current one, and keeps the proposal only
//! if replaying the event reproduces the current level up to chord names.
//! Labels are solved at the end; a structure with no consistent labels is
//! discarded and generation restarts from the same random stream.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply_structure, solve_labels, Event, Movie};
use crate::diagram::{Chord, FreeLink, GapRef, SlotRef};
use crate::moves::{apply_move, find_r3_sites, Move};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomBounds {
    /// Random backward steps before the closing merges.
    pub max_events: usize,
    pub max_chords: usize,
    pub max_components: usize,
    /// Only produce discs: every split joins separate pieces of the
    /// surface built so far, and every born circle is merged back.
    pub genus_zero: bool,
}

impl Default for RandomBounds {
    fn default() -> Self {
        RandomBounds { max_events: 12, max_chords: 6, max_components: 3, genus_zero: true }
    }
}

/// Equality of links up to a bijection of chord names.
fn same_up_to_renaming(a: &FreeLink, b: &FreeLink) -> bool {
    if a.num_components() != b.num_components() {
        return false;
    }
    let mut fwd: BTreeMap<Chord, Chord> = BTreeMap::new();
    let mut back: BTreeMap<Chord, Chord> = BTreeMap::new();
    for (x, y) in a.components().iter().zip(b.components()) {
        if x.len() != y.len() {
            return false;
        }
        for (&c, &d) in x.iter().zip(y) {
            if *fwd.entry(c).or_insert(d) != d || *back.entry(d).or_insert(c) != c {
                return false;
            }
        }
    }
    true
}

fn reproduces(earlier: &FreeLink, event: &Event, target: &FreeLink) -> bool {
    apply_structure(earlier, event).is_ok_and(|(l, _)| same_up_to_renaming(&l, target))
}

fn rotate_right(seq: &[Chord], g: usize) -> Vec<Chord> {
    if seq.is_empty() {
        return Vec::new();
    }
    let n = seq.len();
    seq[n - g..].iter().chain(&seq[..n - g]).copied().collect()
}

/// Loop and bigon removals, with every slot-disjoint pair of arcs.
fn all_removals(link: &FreeLink) -> Vec<Move> {
    let mut out = Vec::new();
    let mut arcs = Vec::new();
    for (ci, seq) in link.components().iter().enumerate() {
        let m = seq.len();
        if m < 2 {
            continue;
        }
        for s in 0..m {
            let (u, v) = (seq[s], seq[(s + 1) % m]);
            if u == v {
                if !(m == 2 && s == 1) {
                    out.push(Move::R1Remove { at: SlotRef { comp: ci, slot: s } });
                }
            } else {
                arcs.push((SlotRef { comp: ci, slot: s }, u.min(v), u.max(v), m));
            }
        }
    }
    for (i, a) in arcs.iter().enumerate() {
        for b in &arcs[i + 1..] {
            let disjoint = a.0.comp != b.0.comp
                || (a.0.slot != b.0.slot && (a.0.slot + 1) % a.3 != b.0.slot && (b.0.slot + 1) % b.3 != a.0.slot);
            if (a.1, a.2) == (b.1, b.2) && disjoint {
                out.push(Move::R2Remove { first: a.0, second: b.0 });
            }
        }
    }
    out
}

/// The increasing event that undoes `removal` exactly.
fn forward_add(link: &FreeLink, removal: &Move) -> Option<(FreeLink, Event)> {
    let (earlier, t) = apply_move(link, removal).ok()?;
    let kept_before =
        |s: SlotRef| link.components()[s.comp][..s.slot].iter().filter(|c| !t.removed.contains(c)).count();
    let candidates: Vec<Move> = match *removal {
        Move::R1Remove { at } => vec![Move::R1Add { at: GapRef { comp: at.comp, gap: at.slot } }],
        Move::R2Remove { first, second } => {
            let g1 = GapRef { comp: first.comp, gap: kept_before(first) };
            let g2 = GapRef { comp: second.comp, gap: kept_before(second) };
            let mut v = Vec::new();
            for crossed in [false, true] {
                v.push(Move::R2Add { first: g1, second: g2, crossed });
                v.push(Move::R2Add { first: g2, second: g1, crossed });
            }
            v
        }
        _ => return None,
    };
    candidates
        .into_iter()
        .map(|m| Event::from_move(&m, None))
        .find(|e| reproduces(&earlier, e, link))
        .map(|e| (earlier, e))
}

struct Builder<'a> {
    rng: &'a mut ChaCha8Rng,
    bounds: RandomBounds,
    link: FreeLink,
    /// Forward events, last event first.
    events: Vec<Event>,
}

impl Builder<'_> {
    fn push(&mut self, earlier: FreeLink, event: Event) -> bool {
        if !reproduces(&earlier, &event, &self.link) {
            return false;
        }
        self.link = earlier;
        self.events.push(event);
        true
    }

    fn comps(&self) -> Vec<Vec<Chord>> {
        self.link.components().to_vec()
    }

    fn random_gap(&mut self) -> GapRef {
        let comp = self.rng.gen_range(0..self.link.num_components());
        let gap = self.rng.gen_range(0..self.link.components()[comp].len().max(1));
        GapRef { comp, gap }
    }

    fn un_death(&mut self) -> bool {
        if self.link.num_components() >= self.bounds.max_components {
            return false;
        }
        let mut comps = self.comps();
        let i = self.rng.gen_range(0..=comps.len());
        comps.insert(i, Vec::new());
        self.push(FreeLink::from_raw(comps), Event::Death { comp: i })
    }

    fn un_loop_removal(&mut self) -> bool {
        if self.link.num_chords() + 1 > self.bounds.max_chords {
            return false;
        }
        let g = self.random_gap();
        let x = self.link.fresh_chord();
        let mut comps = self.comps();
        comps[g.comp].splice(g.gap..g.gap, [x, x]);
        self.push(FreeLink::from_raw(comps), Event::R1Remove { comp: g.comp, slot: g.gap })
    }

    fn un_bigon_removal(&mut self) -> bool {
        if self.link.num_chords() + 2 > self.bounds.max_chords {
            return false;
        }
        let (first, second) = (self.random_gap(), self.random_gap());
        let crossed = self.rng.gen_bool(0.5);
        let Ok((earlier, t)) = apply_move(&self.link, &Move::R2Add { first, second, crossed }) else {
            return false;
        };
        let sites: Vec<Move> = all_removals(&earlier)
            .into_iter()
            .filter(|m| {
                matches!(m, Move::R2Remove { first, .. } if earlier.chord_at(*first).is_some_and(|c| t.added.contains(&c)))
            })
            .collect();
        let Some(site) = sites.choose(self.rng).cloned() else {
            return false;
        };
        self.push(earlier, Event::from_move(&site, None))
    }

    fn triangle(&mut self) -> bool {
        let sites = find_r3_sites(&self.link);
        let Some(site) = sites.choose(self.rng).cloned() else {
            return false;
        };
        let Ok((earlier, _)) = apply_move(&self.link, &site) else {
            return false;
        };
        self.push(earlier, Event::from_move(&site, None))
    }

    fn un_add(&mut self, on_comp: Option<usize>) -> bool {
        let mut sites = all_removals(&self.link);
        if let Some(c) = on_comp {
            sites.retain(|m| match m {
                Move::R1Remove { at } => at.comp == c,
                Move::R2Remove { first, second } => first.comp == c && second.comp == c,
                _ => false,
            });
        }
        sites.shuffle(self.rng);
        for site in sites {
            if let Some((earlier, e)) = forward_add(&self.link, &site) {
                return self.push(earlier, e);
            }
        }
        false
    }

    /// Joins the last component into an earlier one; forward, a split.
    fn un_split(&mut self, c: usize) -> bool {
        let mut comps = self.comps();
        let last = comps.len() - 1;
        if c >= last || (comps[last].is_empty() && !comps[c].is_empty()) {
            return false;
        }
        let b = comps.pop().expect("two components");
        let a = comps[c].clone();
        let joined: Vec<Chord> = a.iter().chain(&b).copied().collect();
        let n = joined.len();
        let r = if n == 0 { 0 } else { self.rng.gen_range(0..n) };
        comps[c] = rotate_right(&joined, r);
        let (gap_a, gap_b) = if n == 0 { (0, 0) } else { (r % n, (r + a.len()) % n) };
        self.push(FreeLink::from_raw(comps), Event::Saddle { comp_a: c, gap_a, comp_b: c, gap_b, flip: false })
    }

    /// Splits component `c` at `k` into a kept prefix and an appended part;
    /// forward, a merge. With `prefix_moves`, the appended part is the prefix.
    fn un_merge(&mut self, c: usize, k: usize, prefix_moves: bool) -> bool {
        if self.link.num_components() >= self.bounds.max_components {
            return false;
        }
        let mut comps = self.comps();
        let w = comps[c].clone();
        let (x, y) = w.split_at(k);
        let (stay, moved) = if prefix_moves { (y, x) } else { (x, y) };
        let flip = self.rng.gen_bool(0.5);
        let g_stay = self.rng.gen_range(0..stay.len().max(1));
        let g_moved = self.rng.gen_range(0..moved.len().max(1));
        let stay_seq = rotate_right(stay, if stay.is_empty() { 0 } else { g_stay });
        let moved_src: Vec<Chord> =
            if flip && !prefix_moves { moved.iter().rev().copied().collect() } else { moved.to_vec() };
        let moved_seq = rotate_right(&moved_src, if moved.is_empty() { 0 } else { g_moved });
        comps[c] = stay_seq;
        comps.push(moved_seq);
        let last = comps.len() - 1;
        let event = if prefix_moves {
            Event::Saddle { comp_a: last, gap_a: g_moved, comp_b: c, gap_b: g_stay, flip: false }
        } else {
            Event::Saddle { comp_a: c, gap_a: g_stay, comp_b: last, gap_b: g_moved, flip }
        };
        self.push(FreeLink::from_raw(comps), event)
    }

    /// Forward: a circle is born, grows by loops and bigons, and merges into
    /// component `c` as a closed segment at its start or end.
    fn bud(&mut self) -> bool {
        if self.link.num_components() >= self.bounds.max_components {
            return false;
        }
        let c = self.rng.gen_range(0..self.link.num_components());
        let w = self.link.components()[c].to_vec();
        let closed = |seg: &[Chord]| seg.iter().all(|x| seg.iter().filter(|&&y| y == *x).count() == 2);
        let mut options: Vec<(usize, bool)> = vec![(w.len(), false)];
        for k in 0..w.len() {
            if closed(&w[k..]) {
                options.push((k, false));
            }
            if k > 0 && closed(&w[..k]) {
                options.push((k, true));
            }
        }
        let &(k, prefix) = options.choose(self.rng).expect("nonempty");
        let saved = (self.link.clone(), self.events.len());
        if !self.un_merge(c, k, prefix) {
            return false;
        }
        let last = self.link.num_components() - 1;
        while !self.link.components()[last].is_empty() {
            if !self.un_add(Some(last)) {
                self.link = saved.0;
                self.events.truncate(saved.1);
                return false;
            }
        }
        let mut comps = self.comps();
        comps.pop();
        self.push(FreeLink::from_raw(comps), Event::Birth)
    }

    fn step(&mut self) -> bool {
        let n = self.link.num_components();
        let choice = self.rng.gen_range(0..if self.bounds.genus_zero { 15 } else { 17 });
        match choice {
            0..=2 => self.un_loop_removal(),
            3..=6 => self.un_bigon_removal(),
            7..=8 => self.triangle(),
            9 => self.un_add(None),
            10 => self.un_death(),
            11 => {
                if n < 2 {
                    return false;
                }
                let c = self.rng.gen_range(0..n - 1);
                self.un_split(c)
            }
            12..=14 => self.bud(),
            _ if n >= 1 => {
                let c = self.rng.gen_range(0..n);
                let len = self.link.components()[c].len();
                let k = 2 * self.rng.gen_range(0..=len / 2);
                self.un_merge(c, k, false)
            }
            _ => false,
        }
    }

    fn finish(&mut self) {
        while self.link.num_components() > 1 {
            let last = self.link.num_components() - 1;
            if self.link.components()[last].is_empty() {
                let x = self.link.fresh_chord();
                let mut comps = self.comps();
                comps[last] = vec![x, x];
                let ok = self.push(FreeLink::from_raw(comps), Event::R1Remove { comp: last, slot: 0 });
                debug_assert!(ok);
            }
            let c = self.rng.gen_range(0..last);
            let ok = self.un_split(c);
            debug_assert!(ok);
        }
    }
}

/// A movie from a one-component link to the empty link whose labels satisfy
/// the parity constraints. Deterministic in `seed`.
pub fn random_valid_movie(seed: u64, bounds: &RandomBounds) -> Movie {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut b = Builder { rng: &mut rng, bounds: *bounds, link: FreeLink::empty(), events: Vec::new() };
        b.link = FreeLink::from_raw(vec![Vec::new()]);
        b.events.push(Event::Death { comp: 0 });
        let steps = b.rng.gen_range(0..=bounds.max_events);
        let mut done = 0;
        let mut tries = 0;
        while done < steps && tries < 20 * (steps + 1) {
            tries += 1;
            if b.step() {
                done += 1;
            }
        }
        b.finish();
        let initial = b.link.clone();
        let mut events: Vec<Event> = b.events.drain(..).rev().collect();
        for (i, e) in events.iter_mut().enumerate() {
            match e {
                Event::R1Add { lifetime, .. } => *lifetime = Some(format!("L{i}")),
                Event::R2Add { lifetime, .. } => *lifetime = format!("L{i}"),
                _ => {}
            }
        }
        let mut movie = Movie::new(initial, events);
        if let Ok(labels) = solve_labels(&movie, || rng.gen_bool(0.5)) {
            movie.labels = labels;
            return movie;
        }
    }
}
