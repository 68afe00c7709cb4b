use freeknot::cobordism::{
    f_project_movie, main_theorem_check, random_valid_movie, verify, Event, RandomBounds, TheoremCheck,
};
use freeknot::invariant_l;

fn disc_bounds() -> RandomBounds {
    RandomBounds::default()
}

fn surface_bounds() -> RandomBounds {
    RandomBounds { genus_zero: false, max_events: 16, ..RandomBounds::default() }
}

#[test]
fn generated_discs_satisfy_the_obstruction() {
    for seed in 0..300 {
        let m = random_valid_movie(seed, &disc_bounds());
        let r = verify(&m, false);
        assert!(r.ok, "seed {seed}: {:?}", r.violations);
        assert_eq!(r.genus, Some(0.0));
        assert!(r.reeb_is_tree);
        assert_eq!(invariant_l(&m.initial).unwrap().l, 0);
        assert_eq!(main_theorem_check(&m), Ok(TheoremCheck::Consistent { l: 0 }));
    }
}

#[test]
fn genus_zero_iff_reeb_tree() {
    let mut positive = 0;
    for seed in 0..300 {
        let m = random_valid_movie(seed, &surface_bounds());
        let r = verify(&m, false);
        assert!(r.ok, "seed {seed}: {:?}", r.violations);
        assert_eq!(r.genus == Some(0.0), r.reeb_is_tree, "seed {seed}");
        positive += usize::from(r.genus > Some(0.0));
    }
    assert!(positive > 0);
}

#[test]
fn projection_preserves_verification_and_genus() {
    for (seed, bounds) in (0..60).map(|s| (s, surface_bounds())).chain((0..60).map(|s| (s, disc_bounds()))) {
        let m = random_valid_movie(seed, &bounds);
        let p = f_project_movie(&m).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{}", m.to_json()));
        let (rm, rp) = (verify(&m, false), verify(&p, false));
        assert!(rp.ok, "seed {seed}: {:?}\n{}\n{}", rp.violations, m.to_json(), p.to_json());
        assert_eq!(rm.genus, rp.genus);
        assert!(p.events.iter().filter(|e| e.is_morse()).count() == m.events.iter().filter(|e| e.is_morse()).count());
        assert!(matches!(p.events.last(), Some(Event::Death { .. }) | None) || p.events.iter().any(Event::is_morse));
    }
}
