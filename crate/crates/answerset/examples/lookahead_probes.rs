//! Watch the branching heuristic work: probe both polarities of each
//! unassigned atom, score them by how much the assignment grows, and
//! branch where the guaranteed progress is largest.
//!
//! A probe that immediately contradicts itself is even better than a
//! good score — asserting its negation is free progress, so the solver
//! branches on it on the spot.
//!
//! ```sh
//! cargo run -p answerset --example lookahead_probes
//! ```

use answerset::parse;
use answerset::search::{Solver, SolverOptions};

fn main() {
    // Two independent exclusive pairs. Every probe settles its own pair
    // (the literal plus its complement's refutation), so all four atoms
    // score (2, 2) and the tie falls to the smallest atom, positively.
    let text = "\
#atoms a, b, c, d.
a :- not b.
b :- not a.
c :- not d.
d :- not c.
";
    let program = parse::parse_program(text).expect("program parses");
    let mut solver = Solver::new(program);
    let choice = solver.probe_choice(&[]).expect("branch needed");
    println!("candidate scores (atom, smaller growth, larger growth):");
    for &(atom, lo, hi) in &choice.scores {
        println!("  {}: ({lo}, {hi})", solver.program().atom_name(atom));
    }
    println!(
        "branch literal: {} (conflicting probe: {})",
        solver.program().literal_name(choice.literal),
        choice.conflicting_probe
    );

    // Here probing `a` hits a conflict at once: a true forces a false.
    // The heuristic stops scoring and hands back `a` for an immediate
    // failed-branch flip; the flip fails too, so the program has no
    // stable model.
    let text = "\
#atoms a, b, c.
a :- not a.
b :- not c.
c :- not b.
";
    let program = parse::parse_program(text).expect("program parses");
    let mut solver = Solver::new(program);
    let choice = solver.probe_choice(&[]).expect("branch needed");
    println!(
        "self-refuting program: probe {} conflicts -> branch there",
        solver.program().literal_name(choice.literal)
    );
    assert!(choice.conflicting_probe);
    assert!(solver.decide(&[]).is_none());
    println!(
        "unsatisfiable after {} conflicts",
        solver.stats().conflicts
    );

    // Lookahead costs probes but can save choice points; both settings
    // must agree on satisfiability.
    let text = "\
#atoms p1, p2, p3, p4, q.
{ p1, p2, p3, p4 }.
q :- 2 { p1, p2, p3, p4 }.
p1 :- q.
";
    let program = parse::parse_program(text).expect("program parses");
    for lookahead in [true, false] {
        let mut solver = Solver::with_options(
            program.clone(),
            SolverOptions {
                lookahead,
                seed: None,
            },
        );
        let models = solver.enumerate(&[], None);
        let stats = solver.stats();
        println!(
            "lookahead {}: {} models, {} choice points, {} probes",
            if lookahead { "on " } else { "off" },
            models.len(),
            stats.choice_points,
            stats.lookahead_probes
        );
    }
}
