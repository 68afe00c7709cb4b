//! Exhaustive checks over all one-component diagrams with at most six chords.

use std::collections::BTreeMap;

use freeknot::census::{census, matchings};
use freeknot::invariant::{f_star, invariant_at};
use freeknot::moves::{find_all_sites, increasing_moves};
use freeknot::{
    apply_move, are_equivalent_bounded, check_parity_axioms, f_map, gaussian_labels, invariant_l, simplify,
    Equivalence, FreeLink,
};

/// Independent evaluation: linking by index comparison, letters as affine
/// maps of ℤ (a: n -> -n, b: n -> 1 - n, b' = aba: n -> -1 - n), and L as
/// the absolute translation of the composite.
fn oracle_l(seq: &[u32]) -> u64 {
    let mut pos: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, c) in seq.iter().enumerate() {
        pos.entry(*c).or_default().push(i);
    }
    let linked = |a: u32, b: u32| {
        let (p, q) = (&pos[&a], &pos[&b]);
        let inside = |x: usize| p[0] < x && x < p[1];
        inside(q[0]) != inside(q[1])
    };
    let degree = |a: u32, even_only: Option<&BTreeMap<u32, bool>>| {
        pos.keys().filter(|&&b| b != a && linked(a, b) && even_only.is_none_or(|e| e[&b])).count()
    };
    let even: BTreeMap<u32, bool> = pos.keys().map(|&c| (c, degree(c, None) % 2 == 0)).collect();
    // (sign, shift): n -> sign * n + shift, composed left to right.
    let (mut sign, mut shift) = (1i64, 0i64);
    for c in seq {
        let s = if even[c] {
            0
        } else if degree(*c, Some(&even)) % 2 == 0 {
            1
        } else {
            -1
        };
        // n -> -n + s applied after the current map.
        sign = -sign;
        shift = -shift + s;
    }
    assert_eq!(sign, 1, "even-length words are translations");
    shift.unsigned_abs()
}

fn seq(link: &FreeLink) -> Vec<u32> {
    link.components()[0].iter().map(|c| c.0).collect()
}

#[test]
fn oracle_agrees_on_the_reference_word() {
    let k1: FreeLink = freeknot::catalog::K1_CODE.parse().unwrap();
    assert_eq!(oracle_l(&seq(&k1)), 16);
    assert_eq!(oracle_l(&[1, 2, 1, 2]), 0);
}

#[test]
fn census_sizes() {
    let all = census(6);
    let mut per_n = [0usize; 7];
    for d in &all {
        per_n[d.num_chords()] += 1;
    }
    assert_eq!(per_n, [1, 1, 2, 5, 17, 79, 554]);
    assert_eq!(matchings(6).len(), 10395);
}

#[test]
fn l_matches_oracle_and_ignores_basepoint() {
    for n in 0..=6 {
        for d in matchings(n) {
            let l = oracle_l(&seq(&d));
            for base in d.basepoints() {
                assert_eq!(invariant_at(&d, base).unwrap().l, l, "{d} from {base:?}");
            }
        }
    }
}

#[test]
fn l_is_invariant_under_every_move() {
    let mut checked = 0usize;
    for d in census(6) {
        let before = invariant_l(&d).unwrap().l;
        let labels = gaussian_labels(&d).unwrap();
        for mv in find_all_sites(&d).into_iter().chain(increasing_moves(&d)) {
            let (after, t) = apply_move(&d, &mv).unwrap();
            assert_eq!(invariant_l(&after).unwrap().l, before, "{d} by {mv:?}");
            let next = gaussian_labels(&after).unwrap();
            let v = check_parity_axioms(&d, &after, &t, &labels, &next);
            assert!(v.is_empty(), "{d} by {mv:?}: {v:?}");
            checked += 1;
        }
    }
    assert!(checked > 100_000, "{checked}");
}

#[test]
fn parity_laws() {
    let mut mod8 = BTreeMap::<bool, usize>::new();
    for d in census(6) {
        let table = gaussian_labels(&d).unwrap();
        assert_eq!(table.odd_count() % 2, 0, "{d}");
        let l = invariant_l(&d).unwrap().l;
        assert_eq!(l % 4, 0, "{d}");
        *mod8.entry(l.is_multiple_of(8)).or_default() += 1;
    }
    println!("L mod 8 == 0: {:?}", mod8);
}

#[test]
fn f_map_deletes_odd_chords() {
    for d in census(6) {
        let all_even = gaussian_labels(&d).unwrap().all_even();
        let f = f_map(&d).unwrap();
        if all_even {
            assert_eq!(f.canonical_key(), d.canonical_key(), "{d}");
        } else {
            assert!(f.num_chords() < d.num_chords(), "{d}");
        }
        let star = f_star(&d).unwrap();
        assert!(gaussian_labels(&star).unwrap().all_even(), "{d}");
    }
}

/// Links on both sides of a move map to move-equivalent links. Greedy
/// simplification is itself a move sequence, so equal simplified forms
/// count; the rest go to the bounded orbit search.
#[test]
fn f_star_descends_to_free_knots() {
    let mut searched = 0;
    for d in census(5) {
        let fd = f_star(&d).unwrap();
        let sd = simplify(&fd).canonical_key();
        for mv in find_all_sites(&d).into_iter().chain(increasing_moves(&d)) {
            let (after, _) = apply_move(&d, &mv).unwrap();
            let fa = f_star(&after).unwrap();
            if fa.canonical_key() == fd.canonical_key() || simplify(&fa).canonical_key() == sd {
                continue;
            }
            let bound = fa.num_chords().max(fd.num_chords());
            let r = are_equivalent_bounded(&fd, &fa, bound, 10_000);
            assert_eq!(r, Equivalence::Equivalent, "{d} by {mv:?}: {fd} vs {fa}");
            searched += 1;
        }
    }
    assert!(searched > 0);
}
