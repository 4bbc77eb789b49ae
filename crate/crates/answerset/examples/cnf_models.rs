//! Decide propositional CNF satisfiability by translation.
//!
//! Each variable becomes a free choice; each clause becomes a rule that
//! derives the forbidden atom `false` from the clause's complement. The
//! stable models under the assumption `not false` are exactly the
//! satisfying assignments.
//!
//! ```sh
//! cargo run -p answerset --example cnf_models
//! ```

use answerset::generate::{self, CnfFormula};
use answerset::oracle;
use answerset::search::Solver;
use std::collections::BTreeSet;

fn main() {
    // (x or y) and (not x or not y) and (x or not z): an XOR with a
    // side condition.
    let formula = CnfFormula {
        variables: ["x", "y", "z"].map(String::from).to_vec(),
        clauses: vec![
            vec![(0, true), (1, true)],
            vec![(0, false), (1, false)],
            vec![(0, true), (2, false)],
        ],
    };

    let (program, assumptions) = generate::sat(&formula).expect("well-formed formula");
    let mut solver = Solver::new(program);
    let models = solver.enumerate(&assumptions, None);
    println!("satisfying assignments ({}):", models.len());
    for m in &models {
        println!("  {{{}}}", solver.program().format_model(m));
    }

    // The truth table agrees: read each stable model back as the set of
    // true variable indices and compare against direct evaluation.
    let program = solver.program();
    let from_solver: BTreeSet<BTreeSet<usize>> = models
        .iter()
        .map(|m| {
            formula
                .variables
                .iter()
                .enumerate()
                .filter(|(_, name)| m.contains(&program.atom(name).unwrap()))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let from_table: BTreeSet<BTreeSet<usize>> =
        oracle::cnf_satisfying_assignments(formula.variables.len(), &formula.clauses)
            .into_iter()
            .collect();
    assert_eq!(from_solver, from_table);
    println!("matches the {}-row truth table", 1 << formula.variables.len());

    // An empty clause makes any formula unsatisfiable, and the
    // translator rejects it up front.
    let broken = CnfFormula {
        variables: vec!["x".into()],
        clauses: vec![vec![]],
    };
    println!("empty clause: {}", generate::sat(&broken).unwrap_err());
}
