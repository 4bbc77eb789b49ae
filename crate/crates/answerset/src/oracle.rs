//! Brute-force reference semantics.
//!
//! Everything here evaluates the defining equations of the stable-model
//! semantics as literally as possible — no counters, no incrementality —
//! so the fast deduction and search code paths have an independent oracle
//! to be checked against. Per-rule consequences follow the four rule-type
//! definitions verbatim; stability is "the candidate equals the least
//! closure computed against it"; enumeration walks every subset of the
//! atom table.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fixpoint::lfp;
use crate::program::{AtomId, Literal, LiteralSet, Model, Program, Rule};

/// Atoms the rule lets into the next closure iterate: the consequence
/// function of one rule, evaluated against candidate model `s` and the
/// partially accumulated closure `c`.
///
/// Rule by rule:
/// - basic: `{h}` when the positive body is in `c` and no negative body
///   atom is in `s`;
/// - constraint: `{h}` when the satisfied-literal count (positive against
///   `c`, negative against `s`) reaches the bound;
/// - choice: `heads ∩ s` when the body holds — membership in the candidate
///   model is what licenses each head;
/// - weight: `{h}` when the satisfied weight reaches the bound.
pub fn rule_consequences(rule: &Rule, s: &Model, c: &Model) -> Model {
    match rule {
        Rule::Basic { head, body } => {
            if body_holds(body, s, c) {
                std::iter::once(*head).collect()
            } else {
                Model::new()
            }
        }
        Rule::Constraint { head, body, bound } => {
            let satisfied = body
                .iter()
                .filter(|l| literal_holds(**l, s, c))
                .count() as u64;
            if satisfied >= *bound {
                std::iter::once(*head).collect()
            } else {
                Model::new()
            }
        }
        Rule::Choice { heads, body } => {
            if body_holds(body, s, c) {
                heads.iter().copied().filter(|h| s.contains(h)).collect()
            } else {
                Model::new()
            }
        }
        Rule::Weight { head, body, bound } => {
            let satisfied: u64 = body
                .iter()
                .filter(|(l, _)| literal_holds(*l, s, c))
                .map(|&(_, w)| w)
                .sum();
            if satisfied >= *bound {
                std::iter::once(*head).collect()
            } else {
                Model::new()
            }
        }
    }
}

/// Positive literals are judged against the closure `c`, negative ones
/// against the candidate model `s`.
fn literal_holds(lit: Literal, s: &Model, c: &Model) -> bool {
    if lit.is_positive() {
        c.contains(&lit.atom())
    } else {
        !s.contains(&lit.atom())
    }
}

fn body_holds(body: &[Literal], s: &Model, c: &Model) -> bool {
    body.iter().all(|&l| literal_holds(l, s, c))
}

/// The least set closed under all rule consequences against candidate `s`:
/// the deductive closure the stability test compares `s` with.
pub fn minimal_closure(program: &Program, s: &Model) -> Model {
    lfp(program.atom_count(), |c: &Model| {
        let mut next = c.clone();
        for rule in program.rules() {
            next.extend(rule_consequences(rule, s, c));
        }
        next
    })
}

/// Is `s` a stable model: does the closure computed against `s` reproduce
/// exactly `s`?
pub fn is_stable(program: &Program, s: &Model) -> bool {
    minimal_closure(program, s) == *s
}

/// Reduct-based stability check, defined for programs of basic rules only
/// (returns `None` otherwise).
///
/// Deletes every rule whose negative body intersects `s`, strips the
/// remaining rules to their positive bodies, and compares `s` with the
/// deductive closure of that negation-free program. Kept as an
/// independent cross-check of [`is_stable`].
pub fn is_stable_via_reduct(program: &Program, s: &Model) -> Option<bool> {
    let mut reduct: Vec<(AtomId, Vec<AtomId>)> = Vec::new();
    for rule in program.rules() {
        let Rule::Basic { head, body } = rule else {
            return None;
        };
        if body
            .iter()
            .any(|l| !l.is_positive() && s.contains(&l.atom()))
        {
            continue;
        }
        let positive: Vec<AtomId> = body
            .iter()
            .filter(|l| l.is_positive())
            .map(|l| l.atom())
            .collect();
        reduct.push((*head, positive));
    }
    let closure = lfp(program.atom_count(), |c: &Model| {
        let mut next = c.clone();
        for (head, body) in &reduct {
            if body.iter().all(|a| c.contains(a)) {
                next.insert(*head);
            }
        }
        next
    });
    Some(closure == *s)
}

/// Largest atom table [`enumerate_stable_brute`] will enumerate over.
pub const BRUTE_ATOM_LIMIT: usize = 24;

/// Error from the brute-force enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("program has {atoms} atoms; brute-force enumeration is limited to {limit}")]
    TooManyAtoms { atoms: usize, limit: usize },
}

/// Every stable model of the program, found by testing all `2^n` subsets
/// of the atom table. Output order is ascending characteristic bitmask
/// (atom 0 is the lowest bit): ∅ first, then {atom0}, {atom1},
/// {atom0, atom1}, ...
pub fn enumerate_stable_brute(program: &Program) -> Result<Vec<Model>, OracleError> {
    let n = program.atom_count();
    if n > BRUTE_ATOM_LIMIT {
        return Err(OracleError::TooManyAtoms {
            atoms: n,
            limit: BRUTE_ATOM_LIMIT,
        });
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        let s: Model = (0..n as u32)
            .filter(|i| mask >> i & 1 == 1)
            .map(AtomId)
            .collect();
        if is_stable(program, &s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Sort models into the order [`enumerate_stable_brute`] emits (ascending
/// characteristic bitmask, atom 0 lowest). Useful for comparing a search
/// result against the oracle.
pub fn sort_models(models: &mut [Model]) {
    models.sort_by(|s1, s2| {
        // compare as little-endian bit vectors: highest differing atom wins
        let hi1 = s1.iter().next_back();
        let hi2 = s2.iter().next_back();
        match (hi1, hi2) {
            (None, None) => std::cmp::Ordering::Equal,
            _ => {
                let mut all: Vec<AtomId> = s1.symmetric_difference(s2).copied().collect();
                all.sort_unstable();
                match all.last() {
                    None => std::cmp::Ordering::Equal,
                    Some(top) => {
                        if s1.contains(top) {
                            std::cmp::Ordering::Greater
                        } else {
                            std::cmp::Ordering::Less
                        }
                    }
                }
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Quantifier-literal definitions of the deduction primitives.
//
// The fast deduction code uses closed-form threshold arithmetic; the
// functions below spell out the defining quantifications (all closures
// compatible with an assignment, all single-literal extensions) so tests
// can compare the two on small rules.
// ---------------------------------------------------------------------------

/// All atoms the rule derives in *every* closure compatible with `a`:
/// the intersection of `f_r(C, C)` over all `C` with `a⁺ ⊆ C` and
/// `a⁻ ∩ C = ∅`, `C` ranging over subsets of `universe`.
///
/// `a` must be conflict-free and `universe` must contain the rule's atoms.
pub fn min_consequences_enumerated(rule: &Rule, a: &LiteralSet, universe: &[AtomId]) -> Model {
    assert!(!a.is_conflicting(), "enumeration needs a consistent assignment");
    let mut result: Option<Model> = None;
    for c in compatible_closures(a, universe) {
        let fr = rule_consequences(rule, &c, &c);
        result = Some(match result {
            None => fr,
            Some(acc) => acc.intersection(&fr).copied().collect(),
        });
        if result.as_ref().is_some_and(|m| m.is_empty()) {
            break;
        }
    }
    result.unwrap_or_default()
}

/// All atoms the rule derives in *some* closure compatible with `a`: the
/// union of `f_r(C, C)` over the same range as
/// [`min_consequences_enumerated`].
pub fn max_consequences_enumerated(rule: &Rule, a: &LiteralSet, universe: &[AtomId]) -> Model {
    assert!(!a.is_conflicting(), "enumeration needs a consistent assignment");
    let mut result = Model::new();
    for c in compatible_closures(a, universe) {
        result.extend(rule_consequences(rule, &c, &c));
    }
    result
}

/// Literals forced when `rule` is the only remaining support of `head`
/// (which must be positive in `a`): `{ not x | head ∉ max_r(a ∪ {x}) }`
/// for every unassigned literal `x` over `universe`.
pub fn sole_support_forced_enumerated(
    rule: &Rule,
    head: AtomId,
    a: &LiteralSet,
    universe: &[AtomId],
) -> BTreeSet<Literal> {
    assert!(a.has_positive(head), "sole-support deduction needs a positive head");
    forced_by_probe(a, universe, |extended| {
        !max_consequences_enumerated(rule, extended, universe).contains(&head)
    })
}

/// Literals forced when `head` is false in `a` but `rule` could derive it:
/// `{ not x | head ∈ min_r(a ∪ {x}) }` for every unassigned literal `x`
/// over `universe`.
pub fn false_head_forced_enumerated(
    rule: &Rule,
    head: AtomId,
    a: &LiteralSet,
    universe: &[AtomId],
) -> BTreeSet<Literal> {
    assert!(a.has_negative(head), "false-head deduction needs a negative head");
    forced_by_probe(a, universe, |extended| {
        min_consequences_enumerated(rule, extended, universe).contains(&head)
    })
}

fn forced_by_probe(
    a: &LiteralSet,
    universe: &[AtomId],
    mut probe: impl FnMut(&LiteralSet) -> bool,
) -> BTreeSet<Literal> {
    let mut forced = BTreeSet::new();
    for &atom in universe {
        if !a.is_unassigned(atom) {
            continue;
        }
        for x in [Literal::positive(atom), Literal::negative(atom)] {
            let mut extended = a.clone();
            extended.insert(x);
            if probe(&extended) {
                forced.insert(x.negate());
            }
        }
    }
    forced
}

/// All closures over `universe` compatible with assignment `a`: the
/// assigned atoms keep their polarity, the rest range over both values.
fn compatible_closures(a: &LiteralSet, universe: &[AtomId]) -> Vec<Model> {
    let free: Vec<AtomId> = universe
        .iter()
        .copied()
        .filter(|&atom| a.is_unassigned(atom))
        .collect();
    let fixed: Model = universe
        .iter()
        .copied()
        .filter(|&atom| a.has_positive(atom))
        .collect();
    let mut out = Vec::with_capacity(1 << free.len());
    for mask in 0u64..(1u64 << free.len()) {
        let mut c = fixed.clone();
        for (i, &atom) in free.iter().enumerate() {
            if mask >> i & 1 == 1 {
                c.insert(atom);
            }
        }
        out.push(c);
    }
    out
}

// ---------------------------------------------------------------------------
// Independent CNF model counting, used to check the SAT translation.
// ---------------------------------------------------------------------------

/// Truth-table enumeration of a CNF formula. Clauses are lists of
/// `(variable index, positive?)` literals. Returns the satisfying
/// assignments as sets of true variables, in ascending bitmask order.
pub fn cnf_satisfying_assignments(vars: usize, clauses: &[Vec<(usize, bool)>]) -> Vec<BTreeSet<usize>> {
    assert!(vars <= 24, "truth-table enumeration is for small formulas");
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << vars) {
        let truth = |v: usize| mask >> v & 1 == 1;
        if clauses
            .iter()
            .all(|cl| cl.iter().any(|&(v, pos)| truth(v) == pos))
        {
            out.push((0..vars).filter(|&v| truth(v)).collect());
        }
    }
    out
}
