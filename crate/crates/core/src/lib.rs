//! Free knots and links as chord diagrams: parity, the group-valued
//! invariant `L`, Reidemeister moves and combinatorial cobordism movies.

pub mod catalog;
pub mod census;
pub mod cobordism;
pub mod diagram;
pub mod group;
pub mod invariant;
pub mod moves;
pub mod parity;

pub use catalog::{catalog, CatalogEntry};
pub use census::census;
pub use cobordism::{
    f_project_movie, random_valid_movie, search_slice_movie, verify, Event, Movie, RandomBounds, SearchOutcome,
    VerifierReport, Violation,
};
pub use diagram::{Basepoint, CanonicalKey, Chord, DiagramError, FreeLink, GapRef, SlotRef};
pub use group::{eval_word, parse_word, CayleyPoint, GroupElement, GroupError, Letter};
pub use invariant::{f_map, f_star, gamma_word, invariant_l, long_invariant, InvariantError, InvariantResult};
pub use moves::{
    apply_move, are_equivalent_bounded, orbit, simplify, Equivalence, Move, MoveError, MoveKind, Transition,
};
pub use parity::{check_parity_axioms, gaussian_labels, gaussian_parity, AxiomViolation, ParityLabel, ParityTable};
