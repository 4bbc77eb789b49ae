//! Ground program representation: atoms, literals, rules and partial
//! assignments.
//!
//! A [`Program`] owns a dense atom table (index ↔ name) and a list of
//! [`Rule`]s in four shapes: basic, cardinality-constraint, choice and
//! weight rules. Construction goes through [`ProgramBuilder`], which
//! normalizes every rule: bodies are sorted by literal code and
//! de-duplicated, duplicate weighted literals are merged by summing their
//! weights, and weight sums are overflow-checked.
//!
//! A [`LiteralSet`] is a partial truth assignment: a set of literals that
//! may mention an atom positively, negatively, or both (in which case the
//! set is conflict-marked). Insertion order is kept so that deduction
//! engines can use the set as a trail.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

/// Index of an atom in a program's atom table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomId(pub u32);

impl AtomId {
    /// The table index as a usize.
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A polarity-tagged atom, packed as `atom * 2 + sign`.
///
/// Positive literals have even codes, negative ones odd codes, so the
/// derived `Ord` sorts by atom index with the positive literal first —
/// exactly the canonical body order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    /// The literal `a`.
    #[inline]
    pub fn positive(atom: AtomId) -> Literal {
        Literal(atom.0 << 1)
    }

    /// The literal `not a`.
    #[inline]
    pub fn negative(atom: AtomId) -> Literal {
        Literal(atom.0 << 1 | 1)
    }

    /// The atom this literal talks about.
    #[inline]
    pub fn atom(self) -> AtomId {
        AtomId(self.0 >> 1)
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// `not a` for `a`, and `a` for `not a`. An involution.
    #[inline]
    pub fn negate(self) -> Literal {
        Literal(self.0 ^ 1)
    }

    /// Dense code usable as an array index (`atom * 2 + sign`).
    #[inline]
    pub fn code(self) -> usize {
        self.0 as usize
    }
}

/// A set of atoms; the shape models and closures come in.
pub type Model = BTreeSet<AtomId>;

/// One ground rule.
///
/// Every body is stored in canonical order (sorted by literal code, no
/// duplicate literals). A body may contain both `a` and `not a`; those are
/// distinct literals, not duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// `h :- a1, ..., not b1, ...` — fires when the whole body holds.
    Basic { head: AtomId, body: Vec<Literal> },
    /// `h :- k { l1, ..., ln }` — fires when at least `bound` body
    /// literals hold.
    Constraint {
        head: AtomId,
        body: Vec<Literal>,
        bound: u64,
    },
    /// `{ h1, ..., hk } :- body` — when the body holds, any subset of the
    /// heads may be taken.
    Choice { heads: Vec<AtomId>, body: Vec<Literal> },
    /// `h :- [ l1 = w1, ... ] >= bound` — fires when the weights of the
    /// holding body literals sum to at least `bound`.
    Weight {
        head: AtomId,
        body: Vec<(Literal, u64)>,
        bound: u64,
    },
}

impl Rule {
    /// The atoms a firing of this rule can derive.
    pub fn heads(&self) -> &[AtomId] {
        match self {
            Rule::Basic { head, .. } | Rule::Constraint { head, .. } | Rule::Weight { head, .. } => {
                std::slice::from_ref(head)
            }
            Rule::Choice { heads, .. } => heads,
        }
    }

    /// Body literals in canonical order, without weights.
    pub fn body_literals(&self) -> Vec<Literal> {
        match self {
            Rule::Basic { body, .. } | Rule::Constraint { body, .. } | Rule::Choice { body, .. } => {
                body.clone()
            }
            Rule::Weight { body, .. } => body.iter().map(|&(l, _)| l).collect(),
        }
    }

    /// Body literals paired with their weights (1 for unweighted rules).
    pub fn weighted_body(&self) -> Vec<(Literal, u64)> {
        match self {
            Rule::Basic { body, .. } | Rule::Constraint { body, .. } | Rule::Choice { body, .. } => {
                body.iter().map(|&l| (l, 1)).collect()
            }
            Rule::Weight { body, .. } => body.clone(),
        }
    }

    pub fn is_choice(&self) -> bool {
        matches!(self, Rule::Choice { .. })
    }

    /// Every atom mentioned by the rule, heads and body alike.
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        let body = match self {
            Rule::Basic { body, .. } | Rule::Constraint { body, .. } | Rule::Choice { body, .. } => {
                itertools::Either::Left(body.iter().map(|l| l.atom()))
            }
            Rule::Weight { body, .. } => {
                itertools::Either::Right(body.iter().map(|(l, _)| l.atom()))
            }
        };
        self.heads().iter().copied().chain(body)
    }
}

/// Error raised while assembling rules.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("choice rule needs at least one head")]
    EmptyChoice,
    #[error("sum of body weights overflows u64")]
    WeightOverflow,
}

/// A ground program: an atom table plus a rule list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    names: Vec<String>,
    index: HashMap<String, AtomId>,
    rules: Vec<Rule>,
}

impl Program {
    /// Number of atoms in the table (declared or used in rules).
    pub fn atom_count(&self) -> usize {
        self.names.len()
    }

    /// All atom ids in table order.
    pub fn atoms(&self) -> impl Iterator<Item = AtomId> {
        (0..self.names.len() as u32).map(AtomId)
    }

    /// Name of an atom.
    pub fn atom_name(&self, atom: AtomId) -> &str {
        &self.names[atom.index()]
    }

    /// Look an atom up by name.
    pub fn atom(&self, name: &str) -> Option<AtomId> {
        self.index.get(name).copied()
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    /// Render a literal as `name` or `not name`.
    pub fn literal_name(&self, lit: Literal) -> String {
        if lit.is_positive() {
            self.atom_name(lit.atom()).to_string()
        } else {
            format!("not {}", self.atom_name(lit.atom()))
        }
    }

    /// Render a model as its atom names sorted lexicographically,
    /// space-separated. An empty model renders as the empty string.
    pub fn format_model(&self, model: &Model) -> String {
        let mut names: Vec<&str> = model.iter().map(|&a| self.atom_name(a)).collect();
        names.sort_unstable();
        names.join(" ")
    }

    /// Fresh empty assignment sized for this program.
    pub fn empty_assignment(&self) -> LiteralSet {
        LiteralSet::new(self.atom_count())
    }
}

/// Incremental [`Program`] constructor; normalizes rules as they are added.
#[derive(Debug, Clone, Default)]
pub struct ProgramBuilder {
    program: Program,
}

impl ProgramBuilder {
    pub fn new() -> ProgramBuilder {
        ProgramBuilder::default()
    }

    /// Intern `name`, returning its id; repeated calls return the same id.
    ///
    /// Names must be identifiers (`[A-Za-z_][A-Za-z0-9_]*`); anything else
    /// is a programming error.
    pub fn intern(&mut self, name: &str) -> AtomId {
        assert!(is_identifier(name), "invalid atom name {name:?}");
        if let Some(&id) = self.program.index.get(name) {
            return id;
        }
        let id = AtomId(self.program.names.len() as u32);
        self.program.names.push(name.to_string());
        self.program.index.insert(name.to_string(), id);
        id
    }

    fn check_atoms(&self, atoms: impl IntoIterator<Item = AtomId>) {
        for a in atoms {
            assert!(a.index() < self.program.names.len(), "atom id out of range");
        }
    }

    /// Add `head :- body.` (a fact when the body is empty).
    pub fn add_basic(&mut self, head: AtomId, body: impl Into<Vec<Literal>>) {
        let body = normalize_body(body.into());
        self.check_atoms(
            body.iter()
                .map(|l| l.atom())
                .chain(std::iter::once(head)),
        );
        self.program.rules.push(Rule::Basic { head, body });
    }

    /// Add `head :- bound { body }.`
    pub fn add_constraint(&mut self, head: AtomId, body: impl Into<Vec<Literal>>, bound: u64) {
        let body = normalize_body(body.into());
        self.check_atoms(
            body.iter()
                .map(|l| l.atom())
                .chain(std::iter::once(head)),
        );
        self.program.rules.push(Rule::Constraint { head, body, bound });
    }

    /// Add `{ heads } :- body.`
    pub fn add_choice(
        &mut self,
        heads: impl Into<Vec<AtomId>>,
        body: impl Into<Vec<Literal>>,
    ) -> Result<(), BuildError> {
        let mut heads = heads.into();
        heads.sort_unstable();
        heads.dedup();
        if heads.is_empty() {
            return Err(BuildError::EmptyChoice);
        }
        let body = normalize_body(body.into());
        self.check_atoms(body.iter().map(|l| l.atom()).chain(heads.iter().copied()));
        self.program.rules.push(Rule::Choice { heads, body });
        Ok(())
    }

    /// Add `head :- [ weighted body ] >= bound.`
    ///
    /// Duplicate literals are merged by summing their weights; the total
    /// body weight must fit in a u64.
    pub fn add_weight(
        &mut self,
        head: AtomId,
        body: impl Into<Vec<(Literal, u64)>>,
        bound: u64,
    ) -> Result<(), BuildError> {
        let mut body = body.into();
        body.sort_unstable_by_key(|&(l, _)| l);
        let mut merged: Vec<(Literal, u64)> = Vec::with_capacity(body.len());
        for (lit, w) in body {
            match merged.last_mut() {
                Some((prev, pw)) if *prev == lit => {
                    *pw = pw.checked_add(w).ok_or(BuildError::WeightOverflow)?;
                }
                _ => merged.push((lit, w)),
            }
        }
        let mut total: u64 = 0;
        for &(_, w) in &merged {
            total = total.checked_add(w).ok_or(BuildError::WeightOverflow)?;
        }
        self.check_atoms(
            merged
                .iter()
                .map(|(l, _)| l.atom())
                .chain(std::iter::once(head)),
        );
        self.program.rules.push(Rule::Weight {
            head,
            body: merged,
            bound,
        });
        Ok(())
    }

    pub fn finish(self) -> Program {
        self.program
    }
}

fn normalize_body(mut body: Vec<Literal>) -> Vec<Literal> {
    body.sort_unstable();
    body.dedup();
    body
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// How a [`LiteralSet::insert`] went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inserted {
    /// The literal was not present before.
    New,
    /// The literal was already in the set.
    Present,
}

/// A partial assignment: a set of literals over a fixed atom table.
///
/// The set remembers insertion order (usable as a trail) and is
/// conflict-marked exactly while it contains some atom both positively and
/// negatively.
#[derive(Debug, Clone)]
pub struct LiteralSet {
    pos: Vec<bool>,
    neg: Vec<bool>,
    lits: Vec<Literal>,
    assigned: usize,
    conflict_at: Option<usize>,
}

impl LiteralSet {
    /// Empty assignment over `atoms` atoms.
    pub fn new(atoms: usize) -> LiteralSet {
        LiteralSet {
            pos: vec![false; atoms],
            neg: vec![false; atoms],
            lits: Vec::new(),
            assigned: 0,
            conflict_at: None,
        }
    }

    /// Build from a literal list (conflicts between entries are recorded,
    /// not rejected).
    pub fn from_literals(atoms: usize, lits: impl IntoIterator<Item = Literal>) -> LiteralSet {
        let mut set = LiteralSet::new(atoms);
        for l in lits {
            set.insert(l);
        }
        set
    }

    /// Number of atoms the set can talk about.
    pub fn capacity(&self) -> usize {
        self.pos.len()
    }

    /// Number of literals in the set.
    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    /// Add a literal. Inserting the complement of a present literal keeps
    /// both and conflict-marks the set.
    pub fn insert(&mut self, lit: Literal) -> Inserted {
        let a = lit.atom().index();
        let (mine, other) = if lit.is_positive() {
            (&mut self.pos, &self.neg)
        } else {
            (&mut self.neg, &self.pos)
        };
        if mine[a] {
            return Inserted::Present;
        }
        let opposite = other[a];
        mine[a] = true;
        if !opposite {
            self.assigned += 1;
        } else if self.conflict_at.is_none() {
            self.conflict_at = Some(self.lits.len());
        }
        self.lits.push(lit);
        Inserted::New
    }

    /// Remove the most recently inserted literal.
    pub(crate) fn pop(&mut self) -> Option<Literal> {
        let lit = self.lits.pop()?;
        let a = lit.atom().index();
        let (mine, other) = if lit.is_positive() {
            (&mut self.pos, &self.neg)
        } else {
            (&mut self.neg, &self.pos)
        };
        mine[a] = false;
        if !other[a] {
            self.assigned -= 1;
        }
        if self.conflict_at == Some(self.lits.len()) {
            self.conflict_at = None;
        }
        Some(lit)
    }

    #[inline]
    pub fn contains(&self, lit: Literal) -> bool {
        let a = lit.atom().index();
        if lit.is_positive() {
            self.pos[a]
        } else {
            self.neg[a]
        }
    }

    /// Is `atom` in the set positively?
    #[inline]
    pub fn has_positive(&self, atom: AtomId) -> bool {
        self.pos[atom.index()]
    }

    /// Is `atom` in the set negatively?
    #[inline]
    pub fn has_negative(&self, atom: AtomId) -> bool {
        self.neg[atom.index()]
    }

    /// Neither polarity of `lit`'s atom is assigned.
    #[inline]
    pub fn is_unassigned(&self, atom: AtomId) -> bool {
        let a = atom.index();
        !self.pos[a] && !self.neg[a]
    }

    /// True while some atom is in the set with both polarities.
    #[inline]
    pub fn is_conflicting(&self) -> bool {
        self.conflict_at.is_some()
    }

    /// Every one of `atoms` is assigned some polarity.
    pub fn covers(&self, atoms: impl IntoIterator<Item = AtomId>) -> bool {
        atoms
            .into_iter()
            .all(|a| self.pos[a.index()] || self.neg[a.index()])
    }

    /// Every atom of the table is assigned.
    pub fn is_total(&self) -> bool {
        self.assigned == self.pos.len()
    }

    /// Literals in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = Literal> + '_ {
        self.lits.iter().copied()
    }

    /// Atoms assigned positively, in index order.
    pub fn positive_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.pos
            .iter()
            .enumerate()
            .filter(|&(_, &p)| p)
            .map(|(i, _)| AtomId(i as u32))
    }

    /// Atoms assigned negatively, in index order.
    pub fn negative_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.neg
            .iter()
            .enumerate()
            .filter(|&(_, &n)| n)
            .map(|(i, _)| AtomId(i as u32))
    }

    /// The positive atoms as a model.
    pub fn model(&self) -> Model {
        self.positive_atoms().collect()
    }

    /// Exact same assignment: same literals and same conflict status
    /// (insertion order is irrelevant).
    pub fn same_assignment(&self, other: &LiteralSet) -> bool {
        self.pos == other.pos && self.neg == other.neg && self.is_conflicting() == other.is_conflicting()
    }

    /// Equality where any two conflict-marked sets compare equal: a
    /// conflicted deduction already denotes "no model", whatever literals
    /// happened to be recorded when deduction stopped.
    pub fn equivalent(&self, other: &LiteralSet) -> bool {
        if self.is_conflicting() && other.is_conflicting() {
            return true;
        }
        self.same_assignment(other)
    }
}

/// Does the model agree with the assignment: every positive literal of `a`
/// is in `model`, and no atom of `model` is negative in `a`.
pub fn agrees(model: &Model, a: &LiteralSet) -> bool {
    a.positive_atoms().all(|atom| model.contains(&atom))
        && model.iter().all(|&atom| !a.has_negative(atom))
}

/// Error from [`expand_constraint_rule`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandRuleError {
    #[error("only constraint rules can be expanded")]
    NotConstraint,
    #[error("constraint body has {len} literals, expansion is limited to {max}")]
    BodyTooLarge { len: usize, max: usize },
}

/// Largest constraint body [`expand_constraint_rule`] accepts.
pub const EXPAND_BODY_LIMIT: usize = 20;

/// Rewrite `h :- k { body }` into the equivalent set of basic rules
/// `h :- S.` for every k-element subset `S` of the body — C(|body|, k)
/// rules. A bound larger than the body yields no rules (the constraint can
/// never fire); a zero bound yields the single fact `h.`
pub fn expand_constraint_rule(rule: &Rule) -> Result<Vec<Rule>, ExpandRuleError> {
    use itertools::Itertools;

    let Rule::Constraint { head, body, bound } = rule else {
        return Err(ExpandRuleError::NotConstraint);
    };
    if body.len() > EXPAND_BODY_LIMIT {
        return Err(ExpandRuleError::BodyTooLarge {
            len: body.len(),
            max: EXPAND_BODY_LIMIT,
        });
    }
    if *bound > body.len() as u64 {
        return Ok(Vec::new());
    }
    let k = *bound as usize;
    Ok(body
        .iter()
        .copied()
        .combinations(k)
        .map(|subset| Rule::Basic {
            head: *head,
            body: subset, // combinations of a sorted body stay sorted
        })
        .collect())
}
