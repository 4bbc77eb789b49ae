//! Enumerate every stable model of a program, then narrow the search
//! with assumption literals.
//!
//! ```sh
//! cargo run -p answerset --example enumerate_all
//! ```

use answerset::parse;
use answerset::program::Literal;
use answerset::search::Solver;

fn main() {
    // A free choice over three toppings, except that olives and pineapple
    // refuse to share a pizza.
    let text = "\
#atoms olives, pineapple, mushrooms, clash.
{ olives, pineapple, mushrooms }.
clash :- olives, pineapple, not clash.
";
    let program = parse::parse_program(text).expect("program parses");

    let mut solver = Solver::new(program);
    let models = solver.enumerate(&[], None);
    println!("all stable models ({}):", models.len());
    for m in &models {
        println!("  {{{}}}", solver.program().format_model(m));
    }
    let stats = solver.stats();
    println!(
        "search: {} choice points, {} conflicts, {} probes",
        stats.choice_points, stats.conflicts, stats.lookahead_probes
    );

    // Assumptions constrain enumeration without touching the program:
    // require mushrooms, forbid olives.
    let mushrooms = solver.program().atom("mushrooms").unwrap();
    let olives = solver.program().atom("olives").unwrap();
    let assumptions = [Literal::positive(mushrooms), Literal::negative(olives)];
    let narrowed = solver.enumerate(&assumptions, None);
    println!("with mushrooms and no olives ({}):", narrowed.len());
    for m in &narrowed {
        println!("  {{{}}}", solver.program().format_model(m));
    }

    // A limit stops the search early once enough models are in hand.
    let first_two = solver.enumerate(&[], Some(2));
    assert_eq!(first_two.len(), 2);
    println!("limit 2 returned {} models and stopped", first_two.len());
}
