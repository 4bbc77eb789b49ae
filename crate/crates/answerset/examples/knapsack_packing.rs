//! Pack items to hit a value floor while keeping the total weight
//! strictly under a cap, using weight rules for both sides.
//!
//! A choice rule proposes any subset of the items; one weight rule
//! derives the forbidden atom as soon as the chosen weights reach the
//! cap, another derives the required atom when the chosen values reach
//! the floor.
//!
//! ```sh
//! cargo run -p answerset --example knapsack_packing
//! ```

use answerset::generate::{self, KnapsackSpec};
use answerset::search::Solver;

fn main() {
    // Four items as (weight, value) pairs; weight must stay below 8,
    // value must reach 9.
    let spec = KnapsackSpec {
        items: vec![(3, 4), (4, 5), (2, 3), (5, 8)],
        max_weight: 8,
        min_value: 9,
    };
    let (program, assumptions) = generate::knapsack(&spec).expect("consistent spec");
    let mut solver = Solver::new(program);
    let models = solver.enumerate(&assumptions, None);

    println!(
        "packings with weight < {} and value >= {}:",
        spec.max_weight, spec.min_value
    );
    assert!(!models.is_empty());
    for m in &models {
        let picked = generate::decode_items(solver.program(), m);
        let weight: u64 = picked.iter().map(|&i| spec.items[i - 1].0).sum();
        let value: u64 = picked.iter().map(|&i| spec.items[i - 1].1).sum();
        println!("  items {picked:?}: weight {weight}, value {value}");
        assert!(weight < spec.max_weight && value >= spec.min_value);
    }

    // Tightening the floor past what the cap allows leaves nothing.
    let impossible = KnapsackSpec {
        min_value: 14,
        ..spec
    };
    let (program, assumptions) = generate::knapsack(&impossible).expect("consistent spec");
    let mut solver = Solver::new(program);
    assert!(solver.decide(&assumptions).is_none());
    println!("value >= 14 under the same cap: unsatisfiable");
}
