//! Declarative deduction operators.
//!
//! These are the propagation primitives stated as directly as possible:
//! closed-form per-rule consequence bounds, the four forward/backward
//! deduction cases over partial assignments (`atleast`), the
//! unfounded-support closure (`atmost`), and their alternation (`expand`).
//! The incremental engine in [`crate::engine`] must compute exactly the
//! same sets; tests compare the two.
//!
//! Every rule body is viewed through a *diagonal reduction*: when the
//! candidate-model slot and the closure slot of a rule's consequence
//! function coincide, a complementary pair `a, not a` in a weighted body
//! contributes exactly `min(w_a, w_not_a)` no matter how `a` is valued.
//! Folding each pair into a constant offset (keeping the heavier side at
//! the weight difference) makes the simple lower/upper weight bounds
//! *exact*, so the deduction cases below never miss a forced literal on
//! bodies like `h ← 2 {a, not a}`.

use crate::program::{Literal, LiteralSet, Model, Program, Rule};

/// A rule body normalized for diagonal (self-supporting closure)
/// evaluation: at most one weighted literal per atom, all weights
/// positive, plus the satisfied weight still needed to fire.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalBody {
    /// Residual weighted literals, in canonical body order.
    pub items: Vec<(Literal, u64)>,
    /// Weight the assignment must supply for the body to hold.
    pub bound: u64,
}

impl DiagonalBody {
    /// Fold a rule body into diagonal form. Complementary pairs become a
    /// constant offset subtracted from the bound; zero-weight residues
    /// are dropped.
    pub fn of(rule: &Rule) -> DiagonalBody {
        let (weighted, raw_bound): (Vec<(Literal, u64)>, u64) = match rule {
            Rule::Basic { body, .. } | Rule::Choice { body, .. } => (
                body.iter().map(|&l| (l, 1)).collect(),
                body.len() as u64,
            ),
            Rule::Constraint { body, bound, .. } => {
                (body.iter().map(|&l| (l, 1)).collect(), *bound)
            }
            Rule::Weight { body, bound, .. } => (body.clone(), *bound),
        };
        let mut items = Vec::with_capacity(weighted.len());
        let mut offset: u64 = 0;
        let mut i = 0;
        while i < weighted.len() {
            let (lit, w) = weighted[i];
            // bodies are sorted by literal code, so a complementary pair
            // sits adjacent with the positive literal first
            if i + 1 < weighted.len() && weighted[i + 1].0 == lit.negate() {
                let (nlit, nw) = weighted[i + 1];
                offset += w.min(nw);
                if w > nw {
                    items.push((lit, w - nw));
                } else if nw > w {
                    items.push((nlit, nw - w));
                }
                i += 2;
            } else {
                if w > 0 {
                    items.push((lit, w));
                }
                i += 1;
            }
        }
        DiagonalBody {
            items,
            bound: raw_bound.saturating_sub(offset),
        }
    }

    /// Weight already guaranteed by `a`: the sum over literals `a` makes
    /// true.
    pub fn lower(&self, a: &LiteralSet) -> u64 {
        self.items
            .iter()
            .filter(|&&(l, _)| a.contains(l))
            .map(|&(_, w)| w)
            .sum()
    }

    /// Weight still attainable under `a`: the sum over literals `a` has
    /// not made false.
    pub fn upper(&self, a: &LiteralSet) -> u64 {
        self.items
            .iter()
            .filter(|&&(l, _)| !a.contains(l.negate()))
            .map(|&(_, w)| w)
            .sum()
    }
}

/// Atoms the rule derives in every total extension of `a` in which the
/// derived closure reproduces the assignment: `{h}` (or the already-true
/// choice heads) when the body is inevitably satisfied.
pub fn min_consequences(rule: &Rule, a: &LiteralSet) -> Model {
    debug_assert!(!a.is_conflicting());
    let body = DiagonalBody::of(rule);
    if body.lower(a) < body.bound {
        return Model::new();
    }
    match rule {
        Rule::Choice { heads, .. } => heads
            .iter()
            .copied()
            .filter(|&h| a.has_positive(h))
            .collect(),
        _ => rule.heads().iter().copied().collect(),
    }
}

/// Atoms the rule can still derive in some total extension of `a`: `{h}`
/// (or the not-yet-false choice heads) while the body remains satisfiable.
///
/// A choice head is only derived in extensions that contain it, so its
/// own negation in the body — if still unfalsified — can never count
/// toward the bound for *that* head and is discounted per head.
pub fn max_consequences(rule: &Rule, a: &LiteralSet) -> Model {
    debug_assert!(!a.is_conflicting());
    let body = DiagonalBody::of(rule);
    let upper = body.upper(a);
    match rule {
        Rule::Choice { heads, .. } => heads
            .iter()
            .copied()
            .filter(|&h| {
                if a.has_negative(h) {
                    return false;
                }
                let self_negation = if a.has_positive(h) {
                    0
                } else {
                    body.items
                        .iter()
                        .find(|&&(l, _)| l == Literal::negative(h))
                        .map_or(0, |&(_, w)| w)
                };
                upper - self_negation >= body.bound
            })
            .collect(),
        _ if upper >= body.bound => rule.heads().iter().copied().collect(),
        _ => Model::new(),
    }
}

/// Body literals forced true when `rule` is the last remaining support of
/// an atom in `a`⁺: every unassigned body literal whose loss would drop
/// the attainable weight below the bound.
pub fn sole_support_forcings(rule: &Rule, a: &LiteralSet) -> Vec<Literal> {
    debug_assert!(!a.is_conflicting());
    let body = DiagonalBody::of(rule);
    let upper = body.upper(a);
    body.items
        .iter()
        .filter(|&&(l, w)| a.is_unassigned(l.atom()) && upper - w < body.bound)
        .map(|&(l, _)| l)
        .collect()
}

/// Literals forced false when the head of non-choice `rule` is in `a`⁻:
/// every unassigned body literal whose addition would make the body
/// inevitably hold gets negated.
pub fn false_head_forcings(rule: &Rule, a: &LiteralSet) -> Vec<Literal> {
    debug_assert!(!a.is_conflicting());
    debug_assert!(!rule.is_choice(), "choice heads are never forced by falsity");
    let body = DiagonalBody::of(rule);
    let lower = body.lower(a);
    if lower >= body.bound {
        // the head fires outright; the forward case reports the conflict
        return Vec::new();
    }
    body.items
        .iter()
        .filter(|&&(l, w)| a.is_unassigned(l.atom()) && lower + w >= body.bound)
        .map(|&(l, _)| l.negate())
        .collect()
}

/// Deductive closure of `a` under the four propagation cases:
///
/// 1. forward: insert the heads of inevitably satisfied rules;
/// 2. unsupported: insert `not x` when no rule can still derive `x`;
/// 3. sole support: when exactly one rule can still derive an atom of
///    `a`⁺, force the body literals that support hinges on;
/// 4. false head: when a non-choice head is in `a`⁻, falsify any body
///    literal that would complete the body.
///
/// Stops at the first complementary pair and returns the conflict-marked
/// set (callers compare such results with [`LiteralSet::equivalent`]).
pub fn atleast(program: &Program, a: &LiteralSet) -> LiteralSet {
    let mut a = a.clone();
    if a.is_conflicting() {
        return a;
    }
    loop {
        let before = a.len();

        // case 1: fire inevitably satisfied rules
        for rule in program.rules() {
            for h in min_consequences(rule, &a) {
                a.insert(Literal::positive(h));
                if a.is_conflicting() {
                    return a;
                }
            }
        }

        // support census for cases 2 and 3
        let mut supporters: Vec<Vec<usize>> = vec![Vec::new(); program.atom_count()];
        for (ri, rule) in program.rules().iter().enumerate() {
            for h in max_consequences(rule, &a) {
                supporters[h.index()].push(ri);
            }
        }

        // case 2: unsupported atoms are false
        for x in program.atoms() {
            if supporters[x.index()].is_empty() {
                a.insert(Literal::negative(x));
                if a.is_conflicting() {
                    return a;
                }
            }
        }

        // case 3: a true atom with a single remaining support pins that
        // rule's critical body literals
        for x in program.atoms() {
            if a.has_positive(x) && supporters[x.index()].len() == 1 {
                let rule = &program.rules()[supporters[x.index()][0]];
                for l in sole_support_forcings(rule, &a) {
                    a.insert(l);
                    if a.is_conflicting() {
                        return a;
                    }
                }
            }
        }

        // case 4: a false head blocks completion of any non-choice body
        for rule in program.rules() {
            if rule.is_choice() {
                continue;
            }
            let h = rule.heads()[0];
            if a.has_negative(h) {
                for l in false_head_forcings(rule, &a) {
                    a.insert(l);
                    if a.is_conflicting() {
                        return a;
                    }
                }
            }
        }

        if a.len() == before {
            return a;
        }
    }
}

/// Per-rule step of the unfounded-support closure: the two-slot
/// consequence function with the candidate slot fixed to `a`⁺ and choice
/// rules yielding *all* their heads (membership in the candidate is not
/// required when over-approximating what could be derived).
fn atmost_rule_step(rule: &Rule, a: &LiteralSet, c: &Model) -> Model {
    let holds = |l: Literal| {
        if l.is_positive() {
            c.contains(&l.atom())
        } else {
            !a.has_positive(l.atom())
        }
    };
    let fires = match rule {
        Rule::Basic { body, .. } | Rule::Choice { body, .. } => body.iter().all(|&l| holds(l)),
        Rule::Constraint { body, bound, .. } => {
            (body.iter().filter(|&&l| holds(l)).count() as u64) >= *bound
        }
        Rule::Weight { body, bound, .. } => {
            body.iter()
                .filter(|&&(l, _)| holds(l))
                .map(|&(_, w)| w)
                .sum::<u64>()
                >= *bound
        }
    };
    if fires {
        rule.heads().iter().copied().collect()
    } else {
        Model::new()
    }
}

/// Largest set of atoms with non-circular support compatible with `a`:
/// the least fixpoint of the union of [`atmost_rule_step`]s, with `a`⁻
/// removed at every step. Atoms outside the result can never enter any
/// stable model extending `a`.
pub fn atmost(program: &Program, a: &LiteralSet) -> Model {
    crate::fixpoint::lfp(program.atom_count(), |b: &Model| {
        let c: Model = b
            .iter()
            .copied()
            .filter(|&x| !a.has_negative(x))
            .collect();
        let mut next = Model::new();
        for rule in program.rules() {
            next.extend(atmost_rule_step(rule, a, &c));
        }
        next.retain(|&x| !a.has_negative(x));
        next
    })
}

/// Alternate [`atleast`] with the complement of [`atmost`] until nothing
/// new is deduced (or a conflict is marked): the full propagation closure
/// used at every node of the search.
pub fn expand(program: &Program, a: &LiteralSet) -> LiteralSet {
    let mut a = a.clone();
    loop {
        a = atleast(program, &a);
        if a.is_conflicting() {
            return a;
        }
        let reachable = atmost(program, &a);
        let before = a.len();
        for x in program.atoms() {
            if !reachable.contains(&x) {
                a.insert(Literal::negative(x));
                if a.is_conflicting() {
                    return a;
                }
            }
        }
        if a.len() == before {
            return a;
        }
    }
}

/// Does the fully expanded assignment assert some atom both ways?
/// Precondition: `a` is already a fixpoint of [`expand`].
pub fn conflict(program: &Program, a: &LiteralSet) -> bool {
    debug_assert!(a.equivalent(&expand(program, a)));
    let _ = program;
    a.is_conflicting()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::program::{AtomId, ProgramBuilder};
    use proptest::prelude::*;

    fn lits(set: &LiteralSet) -> Vec<Literal> {
        set.iter().collect()
    }

    /// `a :- b, not c.` plus enough atoms to probe.
    fn basic_rule() -> (Program, Rule) {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        let bb = b.intern("b");
        let c = b.intern("c");
        b.add_basic(a, vec![Literal::positive(bb), Literal::negative(c)]);
        let p = b.finish();
        let r = p.rules()[0].clone();
        (p, r)
    }

    #[test]
    fn min_needs_the_whole_body() {
        let (p, r) = basic_rule();
        let bb = p.atom("b").unwrap();
        let c = p.atom("c").unwrap();
        let partial = LiteralSet::from_literals(3, [Literal::positive(bb)]);
        assert_eq!(min_consequences(&r, &partial), Model::new());
        let full = LiteralSet::from_literals(
            3,
            [Literal::positive(bb), Literal::negative(c)],
        );
        assert_eq!(
            min_consequences(&r, &full),
            [p.atom("a").unwrap()].into_iter().collect::<Model>()
        );
    }

    #[test]
    fn weight_lower_bound_counts_unrefuted_negatives() {
        let mut b = ProgramBuilder::new();
        let h = b.intern("h");
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_weight(h, vec![(Literal::positive(a), 2), (Literal::negative(x), 3)], 3)
            .unwrap();
        let p = b.finish();
        let set = LiteralSet::from_literals(3, [Literal::negative(x)]);
        assert_eq!(
            min_consequences(&p.rules()[0], &set),
            [h].into_iter().collect::<Model>()
        );
    }

    #[test]
    fn choice_heads_are_never_inevitable_unless_chosen() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_choice(vec![a], Vec::new()).unwrap();
        let p = b.finish();
        let empty = p.empty_assignment();
        assert_eq!(min_consequences(&p.rules()[0], &empty), Model::new());
        let chosen = LiteralSet::from_literals(1, [Literal::positive(a)]);
        assert_eq!(
            min_consequences(&p.rules()[0], &chosen),
            [a].into_iter().collect::<Model>()
        );
    }

    #[test]
    fn max_dies_with_the_body() {
        let (p, r) = basic_rule();
        let a = p.atom("a").unwrap();
        let bb = p.atom("b").unwrap();
        assert_eq!(
            max_consequences(&r, &p.empty_assignment()),
            [a].into_iter().collect::<Model>()
        );
        let blocked = LiteralSet::from_literals(3, [Literal::negative(bb)]);
        assert_eq!(max_consequences(&r, &blocked), Model::new());
    }

    #[test]
    fn count_upper_bound_respects_falsified_literals() {
        let mut b = ProgramBuilder::new();
        let h = b.intern("h");
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_constraint(h, vec![Literal::positive(a), Literal::positive(x)], 2);
        let p = b.finish();
        let blocked = LiteralSet::from_literals(3, [Literal::negative(a)]);
        assert_eq!(max_consequences(&p.rules()[0], &blocked), Model::new());
    }

    #[test]
    fn complementary_pair_contributes_its_minimum_exactly() {
        // h :- 2 { a, not a }: satisfied count is always exactly 1
        let mut b = ProgramBuilder::new();
        let h = b.intern("h");
        let a = b.intern("a");
        b.add_constraint(h, vec![Literal::positive(a), Literal::negative(a)], 2);
        let p = b.finish();
        let r = &p.rules()[0];
        assert_eq!(max_consequences(r, &p.empty_assignment()), Model::new());
        // and with bound 1 the rule is inevitable with no assignment at all
        let mut b = ProgramBuilder::new();
        let h = b.intern("h");
        let a = b.intern("a");
        b.add_constraint(h, vec![Literal::positive(a), Literal::negative(a)], 1);
        let p = b.finish();
        assert_eq!(
            min_consequences(&p.rules()[0], &p.empty_assignment()),
            [h].into_iter().collect::<Model>()
        );
    }

    #[test]
    fn diagonal_body_folds_pairs() {
        let mut b = ProgramBuilder::new();
        let h = b.intern("h");
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_weight(
            h,
            vec![
                (Literal::positive(a), 5),
                (Literal::negative(a), 2),
                (Literal::positive(x), 1),
            ],
            6,
        )
        .unwrap();
        let p = b.finish();
        let body = DiagonalBody::of(&p.rules()[0]);
        assert_eq!(body.bound, 4); // 6 - min(5,2)
        assert_eq!(
            body.items,
            vec![(Literal::positive(a), 3), (Literal::positive(x), 1)]
        );
    }

    #[test]
    fn sole_support_pins_critical_literals() {
        let (p, r) = basic_rule();
        let a = p.atom("a").unwrap();
        let set = LiteralSet::from_literals(3, [Literal::positive(a)]);
        let mut forced = sole_support_forcings(&r, &set);
        forced.sort();
        assert_eq!(
            forced,
            vec![
                Literal::positive(p.atom("b").unwrap()),
                Literal::negative(p.atom("c").unwrap())
            ]
        );
    }

    #[test]
    fn false_head_blocks_the_last_missing_literal() {
        let (p, r) = basic_rule();
        let a = p.atom("a").unwrap();
        let bb = p.atom("b").unwrap();
        let c = p.atom("c").unwrap();
        let set = LiteralSet::from_literals(
            3,
            [Literal::negative(a), Literal::positive(bb)],
        );
        assert_eq!(false_head_forcings(&r, &set), vec![Literal::positive(c)]);
        // with both body literals open, a 2-of-2 body forces nothing yet
        let set = LiteralSet::from_literals(3, [Literal::negative(a)]);
        assert_eq!(false_head_forcings(&r, &set), Vec::<Literal>::new());
    }

    // ---- atleast --------------------------------------------------------

    #[test]
    fn atleast_derives_facts() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_basic(a, Vec::new());
        let p = b.finish();
        let out = atleast(&p, &p.empty_assignment());
        assert_eq!(lits(&out), vec![Literal::positive(a)]);
    }

    #[test]
    fn atleast_on_mutex_choice_point() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_basic(a, vec![Literal::negative(x)]);
        b.add_basic(x, vec![Literal::negative(a)]);
        let p = b.finish();
        let start = LiteralSet::from_literals(2, [Literal::positive(a)]);
        let out = atleast(&p, &start);
        assert_eq!(
            lits(&out),
            vec![Literal::positive(a), Literal::negative(x)]
        );
    }

    #[test]
    fn atleast_marks_self_refuting_atom() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_basic(a, vec![Literal::negative(a)]);
        let p = b.finish();
        let start = LiteralSet::from_literals(1, [Literal::positive(a)]);
        let out = atleast(&p, &start);
        assert!(out.is_conflicting());
    }

    // ---- atmost ---------------------------------------------------------

    /// The four-rule program whose unfounded-support closure is worked
    /// through in the incremental-maintenance tests: a :- b. a :- not c.
    /// b :- a. a :- not d.
    fn chained_support_program() -> Program {
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        let c = bld.intern("c");
        let d = bld.intern("d");
        bld.add_basic(a, vec![Literal::positive(b)]);
        bld.add_basic(a, vec![Literal::negative(c)]);
        bld.add_basic(b, vec![Literal::positive(a)]);
        bld.add_basic(a, vec![Literal::negative(d)]);
        p_with(bld)
    }

    fn p_with(b: ProgramBuilder) -> Program {
        b.finish()
    }

    #[test]
    fn supported_pair_survives_the_closure() {
        let p = chained_support_program();
        let a = p.atom("a").unwrap();
        let b = p.atom("b").unwrap();
        let expected: Model = [a, b].into_iter().collect();
        assert_eq!(atmost(&p, &p.empty_assignment()), expected);
        let with_d = LiteralSet::from_literals(4, [Literal::positive(p.atom("d").unwrap())]);
        assert_eq!(atmost(&p, &with_d), expected);
    }

    #[test]
    fn circular_support_is_unfounded() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_basic(a, vec![Literal::positive(a)]);
        let p = b.finish();
        assert_eq!(atmost(&p, &p.empty_assignment()), Model::new());
    }

    #[test]
    fn choice_rules_overapproximate_all_heads() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_choice(vec![a, x], Vec::new()).unwrap();
        let p = b.finish();
        let expected: Model = [a, x].into_iter().collect();
        assert_eq!(atmost(&p, &p.empty_assignment()), expected);
    }

    // ---- expand / conflict -----------------------------------------------

    #[test]
    fn expand_alternates_both_closures() {
        // a :- a.  b :- not a.  — the unfounded a falls, then b fires
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        bld.add_basic(a, vec![Literal::positive(a)]);
        bld.add_basic(b, vec![Literal::negative(a)]);
        let p = bld.finish();
        let out = expand(&p, &p.empty_assignment());
        assert_eq!(
            lits(&out),
            vec![Literal::negative(a), Literal::positive(b)]
        );
        assert!(!conflict(&p, &out));
    }

    #[test]
    fn expand_of_mutex_branch_is_one_round() {
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        bld.add_basic(a, vec![Literal::negative(b)]);
        bld.add_basic(b, vec![Literal::negative(a)]);
        let p = bld.finish();
        let start = LiteralSet::from_literals(2, [Literal::positive(a)]);
        let out = expand(&p, &start);
        assert_eq!(
            lits(&out),
            vec![Literal::positive(a), Literal::negative(b)]
        );
        assert!(!conflict(&p, &out));
        assert!(oracle::is_stable(&p, &out.model()));
    }

    #[test]
    fn expand_conflict_is_reported() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_basic(a, vec![Literal::negative(a)]);
        let p = b.finish();
        let start = LiteralSet::from_literals(1, [Literal::positive(a)]);
        let out = expand(&p, &start);
        assert!(conflict(&p, &out));
    }

    // ---- equivalence with the enumerated definitions ---------------------

    #[derive(Debug, Clone)]
    struct SmallRule(Rule, Program);

    fn arb_small_rule() -> impl Strategy<Value = SmallRule> {
        // four atoms; bodies may contain complementary pairs and zero
        // weights, the corners the closed forms must get right
        let lit = (0u32..4, any::<bool>());
        let body = prop::collection::vec(lit.clone(), 0..5);
        let weighted = prop::collection::vec((lit, 0u64..5), 0..5);
        prop_oneof![
            (0u32..4, body.clone()).prop_map(|(h, b)| build_rule(RuleSpec::Basic(h, b))),
            (0u32..4, body.clone(), 0u64..6)
                .prop_map(|(h, b, k)| build_rule(RuleSpec::Constraint(h, b, k))),
            (prop::collection::vec(0u32..4, 1..3), body)
                .prop_map(|(hs, b)| build_rule(RuleSpec::Choice(hs, b))),
            (0u32..4, weighted, 0u64..12)
                .prop_map(|(h, b, w)| build_rule(RuleSpec::Weight(h, b, w))),
        ]
    }

    enum RuleSpec {
        Basic(u32, Vec<(u32, bool)>),
        Constraint(u32, Vec<(u32, bool)>, u64),
        Choice(Vec<u32>, Vec<(u32, bool)>),
        Weight(u32, Vec<((u32, bool), u64)>, u64),
    }

    fn build_rule(spec: RuleSpec) -> SmallRule {
        let mut b = ProgramBuilder::new();
        let ids: Vec<AtomId> = (0..4).map(|i| b.intern(&format!("x{i}"))).collect();
        let lit = |(a, pos): (u32, bool)| {
            if pos {
                Literal::positive(ids[a as usize])
            } else {
                Literal::negative(ids[a as usize])
            }
        };
        match spec {
            RuleSpec::Basic(h, body) => {
                b.add_basic(ids[h as usize], body.into_iter().map(lit).collect::<Vec<_>>());
            }
            RuleSpec::Constraint(h, body, k) => {
                b.add_constraint(ids[h as usize], body.into_iter().map(lit).collect::<Vec<_>>(), k);
            }
            RuleSpec::Choice(hs, body) => {
                b.add_choice(
                    hs.into_iter().map(|h| ids[h as usize]).collect::<Vec<_>>(),
                    body.into_iter().map(lit).collect::<Vec<_>>(),
                )
                .unwrap();
            }
            RuleSpec::Weight(h, body, w) => {
                b.add_weight(
                    ids[h as usize],
                    body.into_iter().map(|(l, wt)| (lit(l), wt)).collect::<Vec<_>>(),
                    w,
                )
                .unwrap();
            }
        }
        let p = b.finish();
        let r = p.rules()[0].clone();
        SmallRule(r, p)
    }

    fn assignment_from_mask(atoms: usize, pos: u32, neg: u32) -> Option<LiteralSet> {
        if pos & neg != 0 {
            return None;
        }
        let mut lits = Vec::new();
        for i in 0..atoms as u32 {
            if pos >> i & 1 == 1 {
                lits.push(Literal::positive(AtomId(i)));
            } else if neg >> i & 1 == 1 {
                lits.push(Literal::negative(AtomId(i)));
            }
        }
        Some(LiteralSet::from_literals(atoms, lits))
    }

    proptest! {
        #[test]
        fn closed_form_bounds_match_enumeration(
            rule in arb_small_rule(),
            pos in 0u32..16,
            neg in 0u32..16,
        ) {
            let SmallRule(r, p) = rule;
            let Some(a) = assignment_from_mask(4, pos, neg) else {
                return Ok(());
            };
            let universe: Vec<AtomId> = p.atoms().collect();
            prop_assert_eq!(
                min_consequences(&r, &a),
                oracle::min_consequences_enumerated(&r, &a, &universe)
            );
            prop_assert_eq!(
                max_consequences(&r, &a),
                oracle::max_consequences_enumerated(&r, &a, &universe)
            );
        }

        #[test]
        fn backward_forcings_match_probing(
            rule in arb_small_rule(),
            pos in 0u32..16,
            neg in 0u32..16,
        ) {
            let SmallRule(r, p) = rule;
            let Some(a) = assignment_from_mask(4, pos, neg) else {
                return Ok(());
            };
            let universe: Vec<AtomId> = p.atoms().collect();

            // sole-support direction, for each head positive in `a` that
            // this rule still supports
            for &h in r.heads() {
                if a.has_positive(h) && max_consequences(&r, &a).contains(&h) {
                    let closed: std::collections::BTreeSet<Literal> =
                        sole_support_forcings(&r, &a).into_iter().collect();
                    let probed = oracle::sole_support_forced_enumerated(&r, h, &a, &universe);
                    prop_assert_eq!(&closed, &probed,
                        "sole-support mismatch for head {:?}", h);
                }
            }

            // false-head direction for non-choice rules
            if !r.is_choice() {
                let h = r.heads()[0];
                if a.has_negative(h) && min_consequences(&r, &a).is_empty() {
                    let closed: std::collections::BTreeSet<Literal> =
                        false_head_forcings(&r, &a).into_iter().collect();
                    let probed = oracle::false_head_forced_enumerated(&r, h, &a, &universe);
                    prop_assert_eq!(&closed, &probed,
                        "false-head mismatch for head {:?}", h);
                }
            }
        }
    }
}
