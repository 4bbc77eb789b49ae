//! Parse a program from text and find one stable model.
//!
//! ```sh
//! cargo run -p answerset --example parse_and_solve
//! ```

use answerset::parse;
use answerset::search::Solver;

fn main() {
    // Two exclusive options and a consequence of picking the first.
    let text = "\
#atoms coffee, tea, awake.
coffee :- not tea.
tea :- not coffee.
awake :- coffee.
";
    let program = parse::parse_program(text).expect("program parses");
    println!("program:\n{}", parse::serialize_program(&program));

    let mut solver = Solver::new(program);
    match solver.decide(&[]) {
        Some(model) => println!("one stable model: {}", solver.program().format_model(&model)),
        None => println!("no stable model"),
    }

    // A rule that denies its own head has no stable model at all.
    let contradictory = parse::parse_program("#atoms p.\np :- not p.\n").unwrap();
    let mut solver = Solver::new(contradictory);
    assert!(solver.decide(&[]).is_none());
    println!("`p :- not p.` alone is unsatisfiable, as expected");
}
