//! Shared machinery for the integration suites: a seeded random program
//! generator spanning all four rule types, random assignments over a
//! program's atoms, and the small fixture programs the suites revisit.

use answerset::program::{AtomId, Literal, LiteralSet, Program, ProgramBuilder};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// A random ground program with `1..=max_atoms` atoms and up to
/// `max_rules` rules drawn uniformly from all four rule types. Bodies
/// may repeat atoms, mix polarities, and carry zero weights; bounds
/// range from trivially satisfied to unsatisfiable.
pub fn random_program(rng: &mut ChaCha8Rng, max_atoms: usize, max_rules: usize) -> Program {
    let atom_count = rng.gen_range(1..=max_atoms);
    let mut b = ProgramBuilder::new();
    let atoms: Vec<AtomId> = (0..atom_count)
        .map(|i| b.intern(&format!("x{i}")))
        .collect();
    let rule_count = rng.gen_range(0..=max_rules);
    for _ in 0..rule_count {
        match rng.gen_range(0..4) {
            0 => {
                let head = atoms[rng.gen_range(0..atom_count)];
                b.add_basic(head, random_body(rng, &atoms, 3));
            }
            1 => {
                let head = atoms[rng.gen_range(0..atom_count)];
                let body = random_body(rng, &atoms, 4);
                let bound = rng.gen_range(0..=body.len() as u64 + 1);
                b.add_constraint(head, body, bound);
            }
            2 => {
                let heads: Vec<AtomId> = (0..rng.gen_range(1..=2))
                    .map(|_| atoms[rng.gen_range(0..atom_count)])
                    .collect();
                let body = random_body(rng, &atoms, 3);
                b.add_choice(heads, body).expect("nonempty heads");
            }
            _ => {
                let head = atoms[rng.gen_range(0..atom_count)];
                let body: Vec<(Literal, u64)> = random_body(rng, &atoms, 4)
                    .into_iter()
                    .map(|l| (l, rng.gen_range(0..=3)))
                    .collect();
                let bound = rng.gen_range(0..=7);
                b.add_weight(head, body, bound).expect("small weights");
            }
        }
    }
    b.finish()
}

fn random_body(rng: &mut ChaCha8Rng, atoms: &[AtomId], max_len: usize) -> Vec<Literal> {
    (0..rng.gen_range(0..=max_len))
        .map(|_| {
            let atom = atoms[rng.gen_range(0..atoms.len())];
            if rng.gen_bool(0.5) {
                Literal::positive(atom)
            } else {
                Literal::negative(atom)
            }
        })
        .collect()
}

/// A consistent partial assignment: each atom independently positive,
/// negative, or left out.
pub fn random_assignment(rng: &mut ChaCha8Rng, program: &Program) -> LiteralSet {
    LiteralSet::from_literals(program.atom_count(), random_literals(rng, program))
}

/// The literals of a consistent partial assignment, at most one per atom.
pub fn random_literals(rng: &mut ChaCha8Rng, program: &Program) -> Vec<Literal> {
    program
        .atoms()
        .filter_map(|atom| match rng.gen_range(0..4) {
            0 => Some(Literal::positive(atom)),
            1 => Some(Literal::negative(atom)),
            _ => None,
        })
        .collect()
}

/// The four-rule support-chain program the propagation suites study:
///
/// ```text
/// a :- b.  a :- not d.  b :- a.  a :- not c.
/// ```
///
/// a and b hold each other up in a cycle with two independent ways in.
pub fn support_chain_program() -> Program {
    let mut b = ProgramBuilder::new();
    let a = b.intern("a");
    let bb = b.intern("b");
    let c = b.intern("c");
    let d = b.intern("d");
    b.add_basic(a, vec![Literal::positive(bb)]);
    b.add_basic(a, vec![Literal::negative(d)]);
    b.add_basic(bb, vec![Literal::positive(a)]);
    b.add_basic(a, vec![Literal::negative(c)]);
    b.finish()
}

/// The three-clause formula `(a|b|~c) & (~a|b|~d) & (~b|c|d)` as a
/// choice-plus-denials program; satisfying assignments are the stable
/// models avoiding `false`.
pub fn three_clause_program() -> (Program, Vec<Literal>) {
    let formula = answerset::generate::CnfFormula {
        variables: ["a", "b", "c", "d"].map(String::from).to_vec(),
        clauses: vec![
            vec![(0, true), (1, true), (2, false)],
            vec![(0, false), (1, true), (3, false)],
            vec![(1, false), (2, true), (3, true)],
        ],
    };
    answerset::generate::sat(&formula).expect("well-formed formula")
}
