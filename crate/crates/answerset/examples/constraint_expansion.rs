//! Compile a cardinality rule away into plain basic rules and confirm
//! the stable models survive the translation.
//!
//! `h :- k { l1, ..., ln }` means "h holds once any k of the body
//! literals hold", which unfolds into one basic rule per k-element
//! subset of the body. The expansion is exponential — that is exactly
//! why the solver treats bounds natively with counters — but on small
//! rules it makes a crisp semantic cross-check.
//!
//! ```sh
//! cargo run -p answerset --example constraint_expansion
//! ```

use answerset::oracle;
use answerset::parse;
use answerset::program::{expand_constraint_rule, ProgramBuilder, Rule};
use answerset::search::Solver;

fn main() {
    let text = "\
#atoms a, b, c, alarm.
{ a, b, c }.
alarm :- 2 { a, b, not c }.
";
    let program = parse::parse_program(text).expect("program parses");

    // Rebuild the program, unfolding every cardinality rule into its
    // subset expansion and copying the rest through untouched.
    let mut bld = ProgramBuilder::new();
    for atom in program.atoms() {
        bld.intern(program.atom_name(atom));
    }
    let mut expanded_count = 0;
    for rule in program.rules() {
        match rule {
            Rule::Constraint { .. } => {
                for flat in expand_constraint_rule(rule).expect("small body") {
                    let Rule::Basic { head, body } = flat else {
                        unreachable!("expansion yields basic rules");
                    };
                    bld.add_basic(head, body);
                    expanded_count += 1;
                }
            }
            Rule::Basic { head, body } => bld.add_basic(*head, body.clone()),
            Rule::Choice { heads, body } => {
                bld.add_choice(heads.clone(), body.clone()).expect("valid rule")
            }
            Rule::Weight { head, body, bound } => bld
                .add_weight(*head, body.clone(), *bound)
                .expect("valid rule"),
        }
    }
    let flattened = bld.finish();
    println!(
        "cardinality rule became {expanded_count} basic rules:\n{}",
        parse::serialize_program(&flattened)
    );

    // Same stable models, by search on both forms and by brute force.
    let mut original = Solver::new(program);
    let mut models_original = original.enumerate(&[], None);
    oracle::sort_models(&mut models_original);
    let mut models_flat = Solver::new(flattened.clone()).enumerate(&[], None);
    oracle::sort_models(&mut models_flat);
    assert_eq!(models_original, models_flat);
    assert_eq!(
        models_original,
        oracle::enumerate_stable_brute(original.program()).expect("few atoms")
    );
    println!("both forms have the same {} stable models:", models_flat.len());
    for m in &models_flat {
        println!("  {{{}}}", flattened.format_model(m));
    }
}
