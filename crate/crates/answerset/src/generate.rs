//! Benchmark and example program builders: fixed-distance binary codes,
//! CNF satisfiability, and knapsack packing.
//!
//! Each builder returns the program together with the assumption literals
//! that select the intended models (the `true`/`false` marker atoms are
//! ordinary atoms; assuming `true` and `not false` is what enforces the
//! encoded bounds).

use crate::program::{Literal, Model, Program, ProgramBuilder};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("word length {0} out of range 1..=16")]
    WordLength(u32),
    #[error("distance {distance} out of range 1..={bits}")]
    Distance { distance: u32, bits: u32 },
    #[error("required code size must be at least 1")]
    CodeSize,
    #[error("clause {0} is empty")]
    EmptyClause(usize),
    #[error("clause {index} references undeclared variable {variable}")]
    UnknownVariable { index: usize, variable: usize },
    #[error("variable name {0:?} is reserved")]
    ReservedName(String),
    #[error("weight sum overflows")]
    Overflow,
}

/// A fixed-distance binary code search instance: how many `bits`-wide
/// words with pairwise Hamming distance ≥ `distance` can be packed, asked
/// as "is there a code of at least `min_size` words?".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HammingSpec {
    pub bits: u32,
    pub distance: u32,
    pub min_size: u64,
}

/// Build the code-search program: one atom `w<i>` per word, a rule
/// excluding each word's too-close neighbours
/// (`w_i :- not w_j` for all j with `0 < dist(i,j) < distance`),
/// a cardinality rule deriving `true` from any `min_size` chosen words,
/// and `false :- not w0` pinning the zero word into the code. Returns the
/// assumptions `[true, not false]`.
pub fn hamming(spec: &HammingSpec) -> Result<(Program, Vec<Literal>), GenError> {
    if spec.bits < 1 || spec.bits > 16 {
        return Err(GenError::WordLength(spec.bits));
    }
    if spec.distance < 1 || spec.distance > spec.bits {
        return Err(GenError::Distance {
            distance: spec.distance,
            bits: spec.bits,
        });
    }
    if spec.min_size < 1 {
        return Err(GenError::CodeSize);
    }
    let words = 1usize << spec.bits;
    let mut b = ProgramBuilder::new();
    let w: Vec<_> = (0..words).map(|i| b.intern(&format!("w{i}"))).collect();
    let t = b.intern("true");
    let f = b.intern("false");
    for i in 0..words {
        let body: Vec<Literal> = (0..words)
            .filter(|&j| {
                let dist = (i ^ j).count_ones();
                dist > 0 && dist < spec.distance
            })
            .map(|j| Literal::negative(w[j]))
            .collect();
        b.add_basic(w[i], body);
    }
    b.add_constraint(t, w.iter().map(|&a| Literal::positive(a)).collect::<Vec<_>>(), spec.min_size);
    b.add_basic(f, vec![Literal::negative(w[0])]);
    Ok((
        b.finish(),
        vec![Literal::positive(t), Literal::negative(f)],
    ))
}

/// Words selected by a model of a [`hamming`] program, in increasing
/// order.
pub fn decode_code(program: &Program, model: &Model) -> Vec<u64> {
    let mut words: Vec<u64> = model
        .iter()
        .filter_map(|&a| program.atom_name(a).strip_prefix('w'))
        .filter_map(|digits| digits.parse().ok())
        .collect();
    words.sort_unstable();
    words
}

/// Independent checker: do the words fit in `bits` bits and keep pairwise
/// Hamming distance ≥ `distance`?
pub fn verify_code(words: &[u64], bits: u32, distance: u32) -> bool {
    if bits >= 64 {
        return false;
    }
    if words.iter().any(|&w| w >= 1 << bits) {
        return false;
    }
    words.iter().enumerate().all(|(i, &x)| {
        words[i + 1..]
            .iter()
            .all(|&y| (x ^ y).count_ones() >= distance)
    })
}

/// A propositional formula in conjunctive normal form. Clause literals
/// are `(variable index, positive?)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    pub variables: Vec<String>,
    pub clauses: Vec<Vec<(usize, bool)>>,
}

/// Build the program whose stable models under `[not false]` are exactly
/// the formula's satisfying assignments: a free choice over all
/// variables, plus one rule per clause deriving `false` from the
/// complement of every clause literal.
pub fn sat(formula: &CnfFormula) -> Result<(Program, Vec<Literal>), GenError> {
    for name in &formula.variables {
        if name == "false" {
            return Err(GenError::ReservedName(name.clone()));
        }
    }
    let mut b = ProgramBuilder::new();
    let vars: Vec<_> = formula.variables.iter().map(|v| b.intern(v)).collect();
    let f = b.intern("false");
    if !vars.is_empty() {
        b.add_choice(vars.clone(), Vec::new())
            .expect("nonempty choice");
    }
    for (index, clause) in formula.clauses.iter().enumerate() {
        if clause.is_empty() {
            return Err(GenError::EmptyClause(index));
        }
        let mut body = Vec::with_capacity(clause.len());
        for &(var, positive) in clause {
            let &atom = vars.get(var).ok_or(GenError::UnknownVariable {
                index,
                variable: var,
            })?;
            body.push(if positive {
                Literal::negative(atom)
            } else {
                Literal::positive(atom)
            });
        }
        b.add_basic(f, body);
    }
    Ok((b.finish(), vec![Literal::negative(f)]))
}

/// Item numbers (1-based, as in the atom names `a1..aN`) selected by a
/// model of a [`knapsack`] program.
pub fn decode_items(program: &Program, model: &Model) -> Vec<usize> {
    let mut items: Vec<usize> = model
        .iter()
        .filter_map(|&a| program.atom_name(a).strip_prefix('a'))
        .filter_map(|digits| digits.parse().ok())
        .collect();
    items.sort_unstable();
    items
}

/// A subset-selection instance: pack items (weight, value) so the total
/// weight stays **under** `max_weight` while the total value reaches at
/// least `min_value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnapsackSpec {
    pub items: Vec<(u64, u64)>,
    pub max_weight: u64,
    pub min_value: u64,
}

/// Build the packing program: a free choice over item atoms `a1..aN`,
/// `false` derived when the chosen weights reach `max_weight`, `true`
/// derived when the chosen values reach `min_value`. Returns the
/// assumptions `[true, not false]`.
pub fn knapsack(spec: &KnapsackSpec) -> Result<(Program, Vec<Literal>), GenError> {
    let mut b = ProgramBuilder::new();
    let items: Vec<_> = (1..=spec.items.len())
        .map(|i| b.intern(&format!("a{i}")))
        .collect();
    let t = b.intern("true");
    let f = b.intern("false");
    if !items.is_empty() {
        b.add_choice(items.clone(), Vec::new())
            .expect("nonempty choice");
    }
    let weights: Vec<(Literal, u64)> = items
        .iter()
        .zip(&spec.items)
        .map(|(&a, &(w, _))| (Literal::positive(a), w))
        .collect();
    let values: Vec<(Literal, u64)> = items
        .iter()
        .zip(&spec.items)
        .map(|(&a, &(_, v))| (Literal::positive(a), v))
        .collect();
    b.add_weight(f, weights, spec.max_weight)
        .map_err(|_| GenError::Overflow)?;
    b.add_weight(t, values, spec.min_value)
        .map_err(|_| GenError::Overflow)?;
    Ok((
        b.finish(),
        vec![Literal::positive(t), Literal::negative(f)],
    ))
}
