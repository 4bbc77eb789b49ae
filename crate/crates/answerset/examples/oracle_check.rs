//! Cross-check the solver against brute force over all atom subsets.
//!
//! The oracle enumerates stable models straight from the definition —
//! compute each candidate's minimal closure and keep the fixpoints — so
//! it is slow but independent of every solver data structure.
//!
//! ```sh
//! cargo run -p answerset --example oracle_check
//! ```

use answerset::oracle;
use answerset::parse;
use answerset::search::Solver;

fn main() {
    let text = "\
#atoms a, b, c.
{ a, b }.
c :- 1 { a, not b }.
b :- c, not a.
";
    let program = parse::parse_program(text).expect("program parses");

    // The definition: S is stable iff the least set closed under the
    // rules (judging `not` against S itself) is S again.
    let by_definition = oracle::enumerate_stable_brute(&program).expect("few atoms");
    println!("brute force found {} stable models:", by_definition.len());
    for m in &by_definition {
        println!("  {{{}}}", program.format_model(m));
    }
    for m in &by_definition {
        assert!(oracle::is_stable(&program, m));
    }

    // The search procedure must land on exactly the same set.
    let mut solver = Solver::new(program);
    let mut searched = solver.enumerate(&[], None);
    oracle::sort_models(&mut searched);
    assert_eq!(searched, by_definition);
    println!("solver agrees on all {} models", searched.len());

    // Subsets that are not stable fail the check: the closure either
    // derives atoms the candidate lacks or never reaches the candidate.
    let program = solver.program();
    let a = program.atom("a").unwrap();
    let c = program.atom("c").unwrap();
    let candidate = [a].into_iter().collect();
    assert!(!oracle::is_stable(program, &candidate));
    println!(
        "{{a}} is not stable: its closure is {{{}}}",
        program.format_model(&oracle::minimal_closure(program, &candidate))
    );
    let candidate = [a, c].into_iter().collect();
    assert!(oracle::is_stable(program, &candidate));
    println!("{{a c}} is stable");
}
