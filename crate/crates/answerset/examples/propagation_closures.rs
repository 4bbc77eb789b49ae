//! The three deduction operators, both as declarative closures and as
//! the incremental engine the search actually runs.
//!
//! - `atleast` grows a partial assignment with everything it entails:
//!   fired heads, unsupported atoms, backward-forced body literals.
//! - `atmost` bounds what any stable model could still contain; atoms
//!   outside it lack well-founded support and must be false.
//! - `expand` alternates the two until nothing new appears.
//!
//! ```sh
//! cargo run -p answerset --example propagation_closures
//! ```

use answerset::engine::PropagationState;
use answerset::program::{Literal, LiteralSet, Program, ProgramBuilder};
use answerset::propagate;

fn show(label: &str, set: &LiteralSet, program: &Program) {
    let rendered: Vec<String> = set.iter().map(|l| program.literal_name(l)).collect();
    println!("  {label}: [{}]", rendered.join(", "));
}

fn main() {
    // a and b support each other in a cycle that `a :- not c` and
    // `a :- not d` can break into.
    let mut bld = ProgramBuilder::new();
    let a = bld.intern("a");
    let b = bld.intern("b");
    let c = bld.intern("c");
    let d = bld.intern("d");
    bld.add_basic(a, vec![Literal::positive(b)]);
    bld.add_basic(a, vec![Literal::negative(c)]);
    bld.add_basic(b, vec![Literal::positive(a)]);
    bld.add_basic(a, vec![Literal::negative(d)]);
    let program = bld.finish();

    println!("atleast:");
    // c and d head no rule, so they are forced false outright; that
    // satisfies `a :- not c`, which fires, and b follows.
    let derived = propagate::atleast(&program, &program.empty_assignment());
    show("from nothing", &derived, &program);
    // Committing to `not a` cannot survive: c stays forced false, so
    // `a :- not c` still fires and derives a against the assumption.
    let start = LiteralSet::from_literals(4, [Literal::negative(a)]);
    let refuted = propagate::atleast(&program, &start);
    show("from not a", &refuted, &program);
    assert!(refuted.is_conflicting());
    println!("  (conflicting: `not a` cannot be part of any stable model)");

    println!("atmost:");
    // The mutual cycle still counts as support here: atmost is an upper
    // bound, so it keeps {a, b} even from the empty assignment...
    let upper = propagate::atmost(&program, &program.empty_assignment());
    println!("  from nothing: {{{}}}", program.format_model(&upper));
    // ...and making d true only removes one of a's three supports.
    let with_d = LiteralSet::from_literals(4, [Literal::positive(d)]);
    let upper = propagate::atmost(&program, &with_d);
    println!("  with d true: {{{}}}", program.format_model(&upper));

    println!("expand (declarative fixpoint of both):");
    let closed = propagate::expand(&program, &program.empty_assignment());
    show("from nothing", &closed, &program);

    // The engine computes the same closures incrementally: counters per
    // rule instead of recomputation, and a source rule recorded per
    // supported atom so only genuinely touched support is revisited.
    println!("incremental engine, source pointers:");
    let mut state = PropagationState::new(&program);
    state.sync_atmost();
    println!(
        "  scratch upper bound {{{}}}; a kept by rule {:?}, b by rule {:?}",
        program.format_model(&state.atmost_set()),
        state.source_of(a),
        state.source_of(b)
    );

    // Making c true refutes a's recorded source `a :- not c`. Exactly
    // the two atoms whose support passes through it are revisited, and
    // both re-seat on rules that still fire (`a :- not d`, `b :- a`).
    state.push_level();
    let conflict = state.assume(Literal::positive(c));
    assert!(!conflict);
    let report = state.sync_atmost();
    println!(
        "  assume c: revisited {}, re-derived {}; a now kept by rule {:?}",
        report.visited,
        report.restored,
        state.source_of(a)
    );
    assert_eq!(state.atmost_set(), propagate::atmost(&program, state.assignment()));

    // Undo restores counters, membership, and the source pointers.
    state.pop_level();
    println!("  backtracked: a kept by rule {:?} again", state.source_of(a));
    state.check_counters();

    // With the tie-breaker under a free choice nothing is forced up
    // front, and falsifying it strands the cycle: expand sees both
    // cycle atoms lose well-founded support and derives their negations.
    let mut bld = ProgramBuilder::new();
    let a = bld.intern("a");
    let b = bld.intern("b");
    let d = bld.intern("d");
    bld.add_choice(vec![d], Vec::new()).expect("one head");
    bld.add_basic(a, vec![Literal::positive(b)]);
    bld.add_basic(b, vec![Literal::positive(a)]);
    bld.add_basic(a, vec![Literal::negative(d)]);
    let program = bld.finish();

    println!("incremental engine, full expand:");
    let mut state = PropagationState::new(&program);
    let outcome = state.expand();
    assert!(!outcome.conflict);
    show("level 0 (nothing forced)", state.assignment(), &program);
    println!(
        "  upper bound {{{}}}",
        program.format_model(&state.atmost_set())
    );

    state.push_level();
    assert!(!state.assume(Literal::positive(d)));
    let outcome = state.expand();
    assert!(!outcome.conflict);
    show("after assuming d", state.assignment(), &program);
    println!(
        "  expand took {} round(s), revisited {} atom(s), upper bound {{{}}}",
        outcome.rounds,
        outcome.atmost_visited,
        program.format_model(&state.atmost_set())
    );

    // Backtracking rewinds to the exact pre-assumption state.
    state.pop_level();
    show("after backtracking", state.assignment(), &program);
    assert_eq!(state.atmost_set(), propagate::atmost(&program, state.assignment()));
    state.check_counters();
    println!("  counters audit clean after undo");
}
