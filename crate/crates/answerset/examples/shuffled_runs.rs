//! Rule order and probe order must not change what is satisfiable —
//! only how long the search takes. This example reruns one instance
//! under shuffles and seeds and checks the answers line up.
//!
//! ```sh
//! cargo run -p answerset --example shuffled_runs
//! ```

use answerset::cli;
use answerset::generate::{self, HammingSpec};
use answerset::oracle;
use answerset::search::{Solver, SolverOptions};

fn main() {
    let spec = HammingSpec {
        bits: 4,
        distance: 2,
        min_size: 7,
    };

    // Different probe-order seeds may branch differently but must reach
    // the same model set.
    let (program, assumptions) = generate::hamming(&spec).expect("valid spec");
    let mut baseline = None;
    for seed in 0..5u64 {
        let mut solver = Solver::with_options(
            program.clone(),
            SolverOptions {
                lookahead: true,
                seed: Some(seed),
            },
        );
        let mut models = solver.enumerate(&assumptions, None);
        oracle::sort_models(&mut models);
        let stats = solver.stats();
        println!(
            "seed {seed}: {} models, {} choice points, {} probes",
            models.len(),
            stats.choice_points,
            stats.lookahead_probes
        );
        match &baseline {
            None => baseline = Some(models),
            Some(expected) => assert_eq!(&models, expected, "seed changed the model set"),
        }
    }
    println!("model set identical across seeds");

    // The benchmark helper does the same for rule order: it reshuffles
    // the program text per run, re-parses, solves, and insists on one
    // verdict. Timings are the point; the verdict is the safety check.
    let report = cli::bench_hamming(&spec, 5, 0).expect("valid spec");
    println!("{report}");
    let unsat = cli::bench_hamming(
        &HammingSpec {
            bits: 4,
            distance: 2,
            min_size: 9,
        },
        5,
        0,
    )
    .expect("valid spec");
    println!("{unsat}");
}
