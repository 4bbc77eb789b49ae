//! Search for binary codes with a minimum pairwise Hamming distance.
//!
//! The generator asks "is there a set of at least `min_size` words of
//! `bits` bits, every two of which differ in at least `distance`
//! positions?" as a ground program: one choice-style rule per word whose
//! body excludes all words too close to it, plus a cardinality floor.
//!
//! ```sh
//! cargo run -p answerset --example hamming_codes
//! ```

use answerset::generate::{self, HammingSpec};
use answerset::search::{Solver, SolverOptions};

fn solve(spec: &HammingSpec) -> Option<Vec<u64>> {
    let (program, assumptions) = generate::hamming(spec).expect("valid spec");
    let mut solver = Solver::with_options(program, SolverOptions::default());
    let model = solver.decide(&assumptions)?;
    Some(generate::decode_code(solver.program(), &model))
}

fn main() {
    // With 3-bit words and distance 2 the even-weight words form a
    // perfect packing: 4 words is achievable, 5 is not.
    let mut spec = HammingSpec {
        bits: 3,
        distance: 2,
        min_size: 4,
    };
    let code = solve(&spec).expect("a (3,2) code of size 4 exists");
    println!("bits=3 distance=2 size=4: {code:?}");
    assert!(generate::verify_code(&code, spec.bits, spec.distance));

    spec.min_size = 5;
    assert!(solve(&spec).is_none());
    println!("bits=3 distance=2 size=5: unsatisfiable");

    // A larger alphabet: 5-bit words at distance 3 pack four words...
    let code = solve(&HammingSpec {
        bits: 5,
        distance: 3,
        min_size: 4,
    })
    .expect("a (5,3) code of size 4 exists");
    println!("bits=5 distance=3 size=4: {code:?}");
    assert!(generate::verify_code(&code, 5, 3));

    // ...and the decoded words can be checked independently of the
    // solver, bit by bit.
    assert!(!generate::verify_code(&[0b00000, 0b00011], 5, 3));
    println!("verify_code rejects 0 and 3 at distance 3, as expected");
}
