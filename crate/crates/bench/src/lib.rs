//! Shared inputs for the benchmarks.

use freeknot::catalog::lookup;
use freeknot::FreeLink;

pub fn k1() -> FreeLink {
    lookup("K1").expect("K1 is in the catalog").link()
}

/// A diagram with `n` chords, each linked with every other one.
pub fn complete(n: u32) -> FreeLink {
    let half: Vec<u32> = (1..=n).collect();
    let code: Vec<String> = half.iter().chain(&half).map(u32::to_string).collect();
    code.join(" ").parse().expect("valid code")
}
