//! Incremental propagation engine.
//!
//! Computes the same closures as [`crate::propagate`] — `atleast`,
//! `atmost`, and their alternation `expand` — but in time proportional to
//! what changed rather than to the program:
//!
//! - each rule carries two counters over its diagonal body (satisfied
//!   weight and still-attainable weight), updated per assigned literal
//!   through occurrence lists; crossing the rule's bound triggers the
//!   forward, unsupported, sole-support, and false-head deductions;
//! - each atom counts the rules that can still derive it, so losing the
//!   last one immediately falsifies the atom and dropping to one triggers
//!   the sole-support analysis;
//! - the unfounded-support closure is kept materialized with a *source
//!   rule* per member atom and a two-slot weight counter per rule. When an
//!   assignment weakens a rule, only atoms whose source is that rule are
//!   unseated (transitively), then re-derivation runs over just the
//!   unseated atoms. Unseating happens on *any* contribution loss of the
//!   source, not only when the rule stops firing: a rule can keep firing
//!   on weight that has become circular through its own heads, which only
//!   the remove-then-rederive dance detects;
//! - every state change is logged on a trail; two watermark cursors
//!   remember how far each subsystem has consumed it, so undoing a level
//!   reverses exactly the updates that were applied.
//!
//! All mutating entry points leave the counters exactly reversible; a
//! conflict marks the assignment and propagation stops until the level is
//! popped.

use crate::program::{AtomId, Inserted, Literal, LiteralSet, Model, Program, Rule};
use crate::propagate::DiagonalBody;

/// Index of a rule in program order.
pub type RuleId = usize;

struct CompiledRule {
    choice: bool,
    heads: Vec<AtomId>,
    /// Diagonal body: at most one weighted literal per atom.
    al_items: Vec<(Literal, u64)>,
    /// Satisfied weight needed to fire on the diagonal.
    al_bound: u64,
    /// Raw two-slot body for the unfounded-support closure.
    am_items: Vec<(Literal, u64)>,
    /// Satisfied weight needed to fire in the two-slot reading.
    am_bound: u64,
}

/// Internal index of a compiled clause. Choice rules are compiled into
/// one single-head clause per head so that support can be counted
/// per head exactly; `program_rule` maps back to program order.
type ClauseId = usize;

struct CompiledProgram {
    atom_count: usize,
    rules: Vec<CompiledRule>,
    /// clause → index of the originating rule in program order.
    program_rule: Vec<RuleId>,
    /// literal code → clauses whose diagonal body contains that literal.
    al_occ: Vec<Vec<(ClauseId, u64)>>,
    /// atom → clauses whose two-slot body contains the atom positively.
    am_pos: Vec<Vec<(ClauseId, u64)>>,
    /// atom → clauses whose two-slot body contains the atom negatively.
    am_neg: Vec<Vec<(ClauseId, u64)>>,
    /// atom → clauses with the atom among their heads.
    heads_of: Vec<Vec<ClauseId>>,
}

impl CompiledProgram {
    fn new(program: &Program) -> CompiledProgram {
        let mut cp = CompiledProgram {
            atom_count: program.atom_count(),
            rules: Vec::with_capacity(program.rules().len()),
            program_rule: Vec::with_capacity(program.rules().len()),
            al_occ: vec![Vec::new(); 2 * program.atom_count()],
            am_pos: vec![Vec::new(); program.atom_count()],
            am_neg: vec![Vec::new(); program.atom_count()],
            heads_of: vec![Vec::new(); program.atom_count()],
        };
        for (ri, rule) in program.rules().iter().enumerate() {
            let diagonal = DiagonalBody::of(rule);
            let am_bound = match rule {
                Rule::Basic { body, .. } | Rule::Choice { body, .. } => body.len() as u64,
                Rule::Constraint { bound, .. } | Rule::Weight { bound, .. } => *bound,
            };
            let am_items: Vec<(Literal, u64)> = rule
                .weighted_body()
                .into_iter()
                .filter(|&(_, w)| w > 0)
                .collect();
            if rule.is_choice() {
                // A choice head is only ever derived in extensions that
                // contain it, so its own negation in the body can never
                // help satisfy the bound for that head: give each head
                // its own clause with that literal dropped.
                for &h in rule.heads() {
                    let al_items: Vec<(Literal, u64)> = diagonal
                        .items
                        .iter()
                        .copied()
                        .filter(|&(l, _)| l != Literal::negative(h))
                        .collect();
                    cp.push_clause(
                        CompiledRule {
                            choice: true,
                            heads: vec![h],
                            al_items,
                            al_bound: diagonal.bound,
                            am_items: am_items.clone(),
                            am_bound,
                        },
                        ri,
                    );
                }
            } else {
                cp.push_clause(
                    CompiledRule {
                        choice: false,
                        heads: rule.heads().to_vec(),
                        al_bound: diagonal.bound,
                        al_items: diagonal.items,
                        am_items,
                        am_bound,
                    },
                    ri,
                );
            }
        }
        cp
    }

    fn push_clause(&mut self, rule: CompiledRule, origin: RuleId) {
        let id = self.rules.len();
        for &(l, w) in &rule.al_items {
            self.al_occ[l.code()].push((id, w));
        }
        for &(l, w) in &rule.am_items {
            if l.is_positive() {
                self.am_pos[l.atom().index()].push((id, w));
            } else {
                self.am_neg[l.atom().index()].push((id, w));
            }
        }
        for &h in &rule.heads {
            self.heads_of[h.index()].push(id);
        }
        self.rules.push(rule);
        self.program_rule.push(origin);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TrailEntry {
    /// A literal entered the assignment.
    Assign(Literal),
    /// An atom left the unfounded-support closure (source kept in place).
    AtmostRemove { atom: AtomId },
    /// An atom re-entered the closure under a new source rule.
    AtmostRestore {
        atom: AtomId,
        prior_source: Option<RuleId>,
    },
}

/// What one incremental maintenance pass of the support closure did.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SyncReport {
    /// Atoms unseated by the source-guided removal phase.
    pub visited: usize,
    /// Atoms put back by re-derivation.
    pub restored: usize,
    /// Atoms that ended up outside the closure — their negations are the
    /// new deductions this pass produced.
    pub removed_still_out: Vec<AtomId>,
}

/// Aggregate outcome of one [`PropagationState::expand`] call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExpandOutcome {
    /// The assignment asserts some atom both ways; propagation stopped.
    pub conflict: bool,
    /// Alternation rounds run.
    pub rounds: usize,
    /// Atoms unseated across all support-closure passes.
    pub atmost_visited: usize,
    /// Atoms re-derived across all support-closure passes.
    pub atmost_restored: usize,
}

/// Incremental deduction state over a fixed program.
///
/// Drive it with [`assume`](Self::assume) /
/// [`expand`](Self::expand) between
/// [`push_level`](Self::push_level) / [`pop_level`](Self::pop_level)
/// pairs. The first `expand` (or support-closure pass) establishes the
/// baseline; levels pushed afterwards can be popped freely and restore
/// the state exactly.
pub struct PropagationState {
    cp: CompiledProgram,
    a: LiteralSet,
    trail: Vec<TrailEntry>,
    levels: Vec<usize>,
    /// Per rule: satisfied weight of the diagonal body.
    al_lower: Vec<u64>,
    /// Per rule: still-attainable weight of the diagonal body.
    al_upper: Vec<u64>,
    /// Per atom: rules that can still derive it (diagonal view).
    head_count: Vec<u32>,
    /// Per rule: satisfied weight in the two-slot reading.
    am_weight: Vec<u64>,
    /// Per atom: membership in the unfounded-support closure.
    in_atmost: Vec<bool>,
    /// Per atom: rule that currently justifies closure membership.
    source: Vec<Option<RuleId>>,
    /// Trail cursor: entries below are reflected in the atleast counters.
    al_processed: usize,
    /// Trail cursor: entries below are reflected in the support closure.
    am_synced: usize,
    al_inited: bool,
    am_inited: bool,
    complement_seeded: bool,
}

impl PropagationState {
    pub fn new(program: &Program) -> PropagationState {
        let cp = CompiledProgram::new(program);
        let n = cp.atom_count;
        let rule_count = cp.rules.len();
        let al_upper: Vec<u64> = cp
            .rules
            .iter()
            .map(|r| r.al_items.iter().map(|&(_, w)| w).sum())
            .collect();
        let mut head_count = vec![0u32; n];
        for (ri, rule) in cp.rules.iter().enumerate() {
            if al_upper[ri] >= rule.al_bound {
                for &h in &rule.heads {
                    head_count[h.index()] += 1;
                }
            }
        }
        PropagationState {
            a: LiteralSet::new(n),
            trail: Vec::new(),
            levels: Vec::new(),
            al_lower: vec![0; rule_count],
            al_upper,
            head_count,
            am_weight: vec![0; rule_count],
            in_atmost: vec![false; n],
            source: vec![None; n],
            al_processed: 0,
            am_synced: 0,
            al_inited: false,
            am_inited: false,
            complement_seeded: false,
            cp,
        }
    }

    pub fn atom_count(&self) -> usize {
        self.cp.atom_count
    }

    /// The current partial assignment.
    pub fn assignment(&self) -> &LiteralSet {
        &self.a
    }

    pub fn is_conflicting(&self) -> bool {
        self.a.is_conflicting()
    }

    /// Current unfounded-support closure (meaningful once the trail is
    /// fully synced, i.e. right after `expand` or `sync_atmost`).
    pub fn atmost_set(&self) -> Model {
        (0..self.cp.atom_count as u32)
            .map(AtomId)
            .filter(|a| self.in_atmost[a.index()])
            .collect()
    }

    /// Rule (by program index) currently justifying the atom's closure
    /// membership.
    pub fn source_of(&self, atom: AtomId) -> Option<RuleId> {
        if self.in_atmost[atom.index()] {
            self.source[atom.index()].map(|c| self.cp.program_rule[c])
        } else {
            None
        }
    }

    /// Number of open decision levels.
    pub fn decision_level(&self) -> usize {
        self.levels.len()
    }

    /// Literals assigned since the last open level (the whole trail when
    /// none is open).
    pub fn level_literals(&self) -> Vec<Literal> {
        let mark = self.levels.last().copied().unwrap_or(0);
        self.trail[mark..]
            .iter()
            .filter_map(|e| match e {
                TrailEntry::Assign(l) => Some(*l),
                _ => None,
            })
            .collect()
    }

    /// Add a literal to the assignment at the current level. Returns
    /// `true` when the assignment is now conflicting.
    pub fn assume(&mut self, lit: Literal) -> bool {
        self.enqueue(lit);
        self.a.is_conflicting()
    }

    fn enqueue(&mut self, lit: Literal) -> bool {
        if self.a.insert(lit) == Inserted::New {
            self.trail.push(TrailEntry::Assign(lit));
            true
        } else {
            false
        }
    }

    pub fn push_level(&mut self) {
        self.levels.push(self.trail.len());
    }

    /// Undo everything since the matching [`push_level`](Self::push_level):
    /// assignment, counters, and closure membership all return to their
    /// exact prior state.
    pub fn pop_level(&mut self) {
        let mark = self.levels.pop().expect("pop_level without a pushed level");
        while self.trail.len() > mark {
            let idx = self.trail.len() - 1;
            match self.trail.pop().unwrap() {
                TrailEntry::Assign(lit) => {
                    if idx < self.al_processed {
                        self.reverse_al(lit);
                    }
                    if idx < self.am_synced {
                        self.reverse_am(lit);
                    }
                    let popped = self.a.pop();
                    debug_assert_eq!(popped, Some(lit));
                }
                TrailEntry::AtmostRemove { atom } => {
                    debug_assert!(idx < self.am_synced);
                    self.in_atmost[atom.index()] = true;
                    if !self.a.has_negative(atom) {
                        let weights = &self.cp.am_pos[atom.index()];
                        for &(r, w) in weights {
                            self.am_weight[r] += w;
                        }
                    }
                }
                TrailEntry::AtmostRestore { atom, prior_source } => {
                    debug_assert!(idx < self.am_synced);
                    self.in_atmost[atom.index()] = false;
                    self.source[atom.index()] = prior_source;
                    if !self.a.has_negative(atom) {
                        let weights = &self.cp.am_pos[atom.index()];
                        for &(r, w) in weights {
                            self.am_weight[r] -= w;
                        }
                    }
                }
            }
        }
        self.al_processed = self.al_processed.min(mark);
        self.am_synced = self.am_synced.min(mark);
    }

    // -- atleast ----------------------------------------------------------

    /// Run the counter-based deduction cases over the unprocessed trail
    /// until quiet. Returns `true` on conflict.
    pub fn run_atleast(&mut self) -> bool {
        if self.a.is_conflicting() {
            return true;
        }
        if !self.al_inited {
            self.al_inited = true;
            for ri in 0..self.cp.rules.len() {
                if !self.cp.rules[ri].choice && self.cp.rules[ri].al_bound == 0 {
                    let head = self.cp.rules[ri].heads[0];
                    self.enqueue(Literal::positive(head));
                }
            }
            for i in 0..self.cp.atom_count {
                if self.head_count[i] == 0 {
                    self.enqueue(Literal::negative(AtomId(i as u32)));
                }
            }
            if self.a.is_conflicting() {
                return true;
            }
        }
        while self.al_processed < self.trail.len() {
            let entry = self.trail[self.al_processed];
            self.al_processed += 1;
            if let TrailEntry::Assign(lit) = entry {
                self.apply_al(lit);
                if self.a.is_conflicting() {
                    return true;
                }
            }
        }
        false
    }

    /// Propagate one assigned literal through the diagonal counters,
    /// enqueueing every deduction the four cases yield. Runs to
    /// completion even if an enqueue marks a conflict, so the update is
    /// exactly reversible.
    fn apply_al(&mut self, lit: Literal) {
        // rules whose satisfied weight grows
        for i in 0..self.cp.al_occ[lit.code()].len() {
            let (r, w) = self.cp.al_occ[lit.code()][i];
            let bound = self.cp.rules[r].al_bound;
            let was = self.al_lower[r];
            self.al_lower[r] = was + w;
            if self.cp.rules[r].choice {
                continue;
            }
            let head = self.cp.rules[r].heads[0];
            if was < bound && was + w >= bound {
                // forward: the body now inevitably holds
                self.enqueue(Literal::positive(head));
            } else if was + w < bound && self.a.has_negative(head) {
                // false head: new literals may have become completion-critical
                self.case4_scan(r);
            }
        }
        // rules whose attainable weight shrinks
        let contra = lit.negate().code();
        for i in 0..self.cp.al_occ[contra].len() {
            let (r, w) = self.cp.al_occ[contra][i];
            let bound = self.cp.rules[r].al_bound;
            let was = self.al_upper[r];
            self.al_upper[r] = was - w;
            if was >= bound && was - w < bound {
                // the rule can no longer fire: every head loses a support
                for hi in 0..self.cp.rules[r].heads.len() {
                    let h = self.cp.rules[r].heads[hi];
                    self.head_count[h.index()] -= 1;
                    let hc = self.head_count[h.index()];
                    if hc == 0 {
                        self.enqueue(Literal::negative(h));
                    } else if hc == 1 && self.a.has_positive(h) {
                        if let Some(sole) = self.sole_supporter(h) {
                            self.case3_apply(sole);
                        }
                    }
                }
            } else if was - w >= bound {
                // still active but narrower: if some true head leans on
                // this rule alone, more body literals may be pinned
                for hi in 0..self.cp.rules[r].heads.len() {
                    let h = self.cp.rules[r].heads[hi];
                    if self.a.has_positive(h) && self.head_count[h.index()] == 1 {
                        self.case3_apply(r);
                    }
                }
            }
        }
        // the assigned atom in head position
        let atom = lit.atom();
        if lit.is_positive() {
            if self.head_count[atom.index()] == 1 {
                if let Some(sole) = self.sole_supporter(atom) {
                    self.case3_apply(sole);
                }
            }
        } else {
            for i in 0..self.cp.heads_of[atom.index()].len() {
                let r = self.cp.heads_of[atom.index()][i];
                if self.cp.rules[r].choice {
                    continue;
                }
                if self.al_lower[r] >= self.cp.rules[r].al_bound {
                    // fires against a false head: surface the conflict
                    self.enqueue(Literal::positive(atom));
                } else {
                    self.case4_scan(r);
                }
            }
        }
    }

    fn reverse_al(&mut self, lit: Literal) {
        let occ = &self.cp.al_occ[lit.code()];
        for &(r, w) in occ {
            self.al_lower[r] -= w;
        }
        let contra = lit.negate().code();
        for i in 0..self.cp.al_occ[contra].len() {
            let (r, w) = self.cp.al_occ[contra][i];
            let bound = self.cp.rules[r].al_bound;
            let was = self.al_upper[r];
            self.al_upper[r] = was + w;
            if was < bound && was + w >= bound {
                let heads = &self.cp.rules[r].heads;
                for h in heads {
                    self.head_count[h.index()] += 1;
                }
            }
        }
    }

    /// The unique still-active rule that can derive `h`, when the head
    /// count says there is exactly one.
    fn sole_supporter(&self, h: AtomId) -> Option<RuleId> {
        self.cp.heads_of[h.index()]
            .iter()
            .copied()
            .find(|&r| self.al_upper[r] >= self.cp.rules[r].al_bound)
    }

    /// Sole support: body literals the rule cannot afford to lose become
    /// true.
    fn case3_apply(&mut self, r: RuleId) {
        let bound = self.cp.rules[r].al_bound;
        let upper = self.al_upper[r];
        for i in 0..self.cp.rules[r].al_items.len() {
            let (y, w) = self.cp.rules[r].al_items[i];
            if self.a.is_unassigned(y.atom()) && upper - w < bound {
                self.enqueue(y);
            }
        }
    }

    /// False head: body literals that would complete the body become
    /// false.
    fn case4_scan(&mut self, r: RuleId) {
        let bound = self.cp.rules[r].al_bound;
        let lower = self.al_lower[r];
        if lower >= bound {
            return;
        }
        for i in 0..self.cp.rules[r].al_items.len() {
            let (y, w) = self.cp.rules[r].al_items[i];
            if self.a.is_unassigned(y.atom()) && lower + w >= bound {
                self.enqueue(y.negate());
            }
        }
    }

    // -- atmost -----------------------------------------------------------

    /// Bring the support closure in line with the assignment. The first
    /// call computes it from scratch (recording one source rule per
    /// member, the first rule to derive it in program order); later calls
    /// repair incrementally: weaken counters for the newly assigned
    /// literals, unseat atoms whose source rule lost weight, re-derive
    /// over the unseated set.
    pub fn sync_atmost(&mut self) -> SyncReport {
        if !self.am_inited {
            self.am_inited = true;
            self.scratch_atmost();
            return SyncReport::default();
        }
        let mut dirty: Vec<RuleId> = Vec::new();

        // consume new assignments; closure entries pushed below land past
        // `end` and are applied at push time, never re-consumed
        let end = self.trail.len();
        for idx in self.am_synced..end {
            let TrailEntry::Assign(lit) = self.trail[idx] else {
                debug_assert!(false, "closure entries are never left unsynced");
                continue;
            };
            let atom = lit.atom();
            if lit.is_positive() {
                for i in 0..self.cp.am_neg[atom.index()].len() {
                    let (r, w) = self.cp.am_neg[atom.index()][i];
                    self.am_weight[r] -= w;
                    dirty.push(r);
                }
            } else if self.in_atmost[atom.index()] {
                // the atom is excluded from the closure outright
                for i in 0..self.cp.am_pos[atom.index()].len() {
                    let (r, w) = self.cp.am_pos[atom.index()][i];
                    self.am_weight[r] -= w;
                    dirty.push(r);
                }
                self.trail.push(TrailEntry::AtmostRemove { atom });
                self.in_atmost[atom.index()] = false;
            }
        }

        // removal: unseat atoms whose source rule lost any weight
        let mut report = SyncReport::default();
        let mut removed: Vec<AtomId> = Vec::new();
        let mut di = 0;
        while di < dirty.len() {
            let r = dirty[di];
            di += 1;
            for hi in 0..self.cp.rules[r].heads.len() {
                let h = self.cp.rules[r].heads[hi];
                if self.in_atmost[h.index()] && self.source[h.index()] == Some(r) {
                    report.visited += 1;
                    removed.push(h);
                    self.trail.push(TrailEntry::AtmostRemove { atom: h });
                    self.in_atmost[h.index()] = false;
                    if !self.a.has_negative(h) {
                        for i in 0..self.cp.am_pos[h.index()].len() {
                            let (r2, w) = self.cp.am_pos[h.index()][i];
                            self.am_weight[r2] -= w;
                            dirty.push(r2);
                        }
                    }
                }
            }
        }

        // re-derivation over the unseated atoms only
        loop {
            let mut progress = false;
            for ri in 0..removed.len() {
                let h = removed[ri];
                if self.in_atmost[h.index()] || self.a.has_negative(h) {
                    continue;
                }
                let firing = self.cp.heads_of[h.index()]
                    .iter()
                    .copied()
                    .find(|&r| self.am_weight[r] >= self.cp.rules[r].am_bound);
                if let Some(r) = firing {
                    self.trail.push(TrailEntry::AtmostRestore {
                        atom: h,
                        prior_source: self.source[h.index()],
                    });
                    self.source[h.index()] = Some(r);
                    self.in_atmost[h.index()] = true;
                    for i in 0..self.cp.am_pos[h.index()].len() {
                        let (r2, w) = self.cp.am_pos[h.index()][i];
                        self.am_weight[r2] += w;
                    }
                    report.restored += 1;
                    progress = true;
                }
            }
            if !progress {
                break;
            }
        }

        self.am_synced = self.trail.len();
        report.removed_still_out = removed
            .into_iter()
            .filter(|h| !self.in_atmost[h.index()])
            .collect();
        report
    }

    /// Full closure computation used once to establish the baseline.
    fn scratch_atmost(&mut self) {
        loop {
            let mut changed = false;
            for ri in 0..self.cp.rules.len() {
                if self.am_fires_from_flags(ri) {
                    for hi in 0..self.cp.rules[ri].heads.len() {
                        let h = self.cp.rules[ri].heads[hi];
                        if !self.in_atmost[h.index()] && !self.a.has_negative(h) {
                            self.in_atmost[h.index()] = true;
                            self.source[h.index()] = Some(ri);
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for ri in 0..self.cp.rules.len() {
            self.am_weight[ri] = self.am_weight_from_flags(ri);
        }
        self.am_synced = self.trail.len();
    }

    fn am_weight_from_flags(&self, r: RuleId) -> u64 {
        self.cp.rules[r]
            .am_items
            .iter()
            .filter(|&&(l, _)| {
                if l.is_positive() {
                    self.in_atmost[l.atom().index()] && !self.a.has_negative(l.atom())
                } else {
                    !self.a.has_positive(l.atom())
                }
            })
            .map(|&(_, w)| w)
            .sum()
    }

    fn am_fires_from_flags(&self, r: RuleId) -> bool {
        self.am_weight_from_flags(r) >= self.cp.rules[r].am_bound
    }

    fn reverse_am(&mut self, lit: Literal) {
        let atom = lit.atom();
        if lit.is_positive() {
            let occ = &self.cp.am_neg[atom.index()];
            for &(r, w) in occ {
                self.am_weight[r] += w;
            }
        } else if self.in_atmost[atom.index()] {
            let occ = &self.cp.am_pos[atom.index()];
            for &(r, w) in occ {
                self.am_weight[r] += w;
            }
        }
    }

    // -- expand -----------------------------------------------------------

    /// Alternate the deduction cases with support-closure maintenance
    /// until nothing new is assigned (or a conflict is marked): the
    /// incremental counterpart of [`crate::propagate::expand`].
    pub fn expand(&mut self) -> ExpandOutcome {
        let mut out = ExpandOutcome::default();
        loop {
            out.rounds += 1;
            if self.run_atleast() {
                out.conflict = true;
                return out;
            }
            let report = self.sync_atmost();
            out.atmost_visited += report.visited;
            out.atmost_restored += report.restored;
            let mut grew = false;
            if !self.complement_seeded {
                self.complement_seeded = true;
                for i in 0..self.cp.atom_count {
                    if !self.in_atmost[i] {
                        grew |= self.enqueue(Literal::negative(AtomId(i as u32)));
                        if self.a.is_conflicting() {
                            out.conflict = true;
                            return out;
                        }
                    }
                }
            } else {
                for h in report.removed_still_out {
                    grew |= self.enqueue(Literal::negative(h));
                    if self.a.is_conflicting() {
                        out.conflict = true;
                        return out;
                    }
                }
            }
            if !grew {
                return out;
            }
        }
    }

    // -- verification aids --------------------------------------------------

    /// Recompute every counter from the assignment and closure flags and
    /// panic on any mismatch with the incrementally maintained values.
    /// Call only when the trail is fully processed (after `expand`, or
    /// after explicit `run_atleast` + `sync_atmost`).
    pub fn check_counters(&self) {
        let unprocessed = |cursor: usize| {
            self.trail[cursor..]
                .iter()
                .any(|e| matches!(e, TrailEntry::Assign(_)))
        };
        assert!(!unprocessed(self.al_processed), "atleast cursor lagging");
        assert!(!unprocessed(self.am_synced), "closure cursor lagging");
        for (ri, rule) in self.cp.rules.iter().enumerate() {
            let lower: u64 = rule
                .al_items
                .iter()
                .filter(|&&(l, _)| self.a.contains(l))
                .map(|&(_, w)| w)
                .sum();
            let upper: u64 = rule
                .al_items
                .iter()
                .filter(|&&(l, _)| !self.a.contains(l.negate()))
                .map(|&(_, w)| w)
                .sum();
            assert_eq!(self.al_lower[ri], lower, "satisfied weight, rule {ri}");
            assert_eq!(self.al_upper[ri], upper, "attainable weight, rule {ri}");
            assert_eq!(
                self.am_weight[ri],
                self.am_weight_from_flags(ri),
                "two-slot weight, rule {ri}"
            );
        }
        for i in 0..self.cp.atom_count {
            let count = self.cp.heads_of[i]
                .iter()
                .filter(|&&r| self.al_upper[r] >= self.cp.rules[r].al_bound)
                .count() as u32;
            assert_eq!(self.head_count[i], count, "support count, atom {i}");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::ProgramBuilder;
    use crate::propagate;
    use proptest::prelude::*;

    fn mutex() -> Program {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        let x = b.intern("b");
        b.add_basic(a, vec![Literal::negative(x)]);
        b.add_basic(x, vec![Literal::negative(a)]);
        b.finish()
    }

    /// a :- b.  a :- not d.  b :- a.  a :- not c.
    ///
    /// With this rule order the scratch closure records `a :- not d` as
    /// a's source and `b :- a` as b's, so assigning `d` exercises the
    /// full unseat-and-rederive cascade.
    fn chained_sources() -> Program {
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        let c = bld.intern("c");
        let d = bld.intern("d");
        let _ = c;
        bld.add_basic(a, vec![Literal::positive(b)]);
        bld.add_basic(a, vec![Literal::negative(d)]);
        bld.add_basic(b, vec![Literal::positive(a)]);
        bld.add_basic(a, vec![Literal::negative(c)]);
        bld.finish()
    }

    /// Same program with the `not c` rule first, so a's source never
    /// mentions d.
    fn chained_sources_swapped() -> Program {
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        let c = bld.intern("c");
        let d = bld.intern("d");
        let _ = c;
        bld.add_basic(a, vec![Literal::positive(b)]);
        bld.add_basic(a, vec![Literal::negative(c)]);
        bld.add_basic(b, vec![Literal::positive(a)]);
        bld.add_basic(a, vec![Literal::negative(d)]);
        bld.finish()
    }

    #[test]
    fn counters_fire_facts_and_unsupported_atoms() {
        let mut b = ProgramBuilder::new();
        let f = b.intern("f");
        let g = b.intern("g");
        b.add_basic(f, Vec::new());
        let p = b.finish();
        let mut st = PropagationState::new(&p);
        assert!(!st.run_atleast());
        assert!(st.assignment().has_positive(f));
        assert!(st.assignment().has_negative(g));
    }

    #[test]
    fn branch_propagates_like_the_reference() {
        let p = mutex();
        let a = p.atom("a").unwrap();
        let mut st = PropagationState::new(&p);
        assert!(!st.expand().conflict);
        st.push_level();
        st.assume(Literal::positive(a));
        assert!(!st.expand().conflict);
        let reference = propagate::expand(
            &p,
            &LiteralSet::from_literals(2, [Literal::positive(a)]),
        );
        assert!(st.assignment().same_assignment(&reference));
        st.check_counters();
    }

    #[test]
    fn self_refutation_conflicts() {
        let mut b = ProgramBuilder::new();
        let a = b.intern("a");
        b.add_basic(a, vec![Literal::negative(a)]);
        let p = b.finish();
        let mut st = PropagationState::new(&p);
        st.assume(Literal::positive(a));
        assert!(st.expand().conflict);
    }

    #[test]
    fn scratch_closure_records_first_firing_sources() {
        let p = chained_sources();
        let mut st = PropagationState::new(&p);
        st.sync_atmost();
        let a = p.atom("a").unwrap();
        let b = p.atom("b").unwrap();
        let expected: Model = [a, b].into_iter().collect();
        assert_eq!(st.atmost_set(), expected);
        assert_eq!(st.source_of(a), Some(1)); // a :- not d
        assert_eq!(st.source_of(b), Some(2)); // b :- a
    }

    #[test]
    fn source_hit_unseats_and_rederives() {
        let p = chained_sources();
        let d = p.atom("d").unwrap();
        let mut st = PropagationState::new(&p);
        st.sync_atmost();
        st.push_level();
        st.assume(Literal::positive(d));
        let report = st.sync_atmost();
        // a's source rule lost `not d`, so a falls, dragging b; both come
        // back through `a :- not c` and `b :- a`
        assert_eq!(report.visited, 2);
        assert_eq!(report.restored, 2);
        assert!(report.removed_still_out.is_empty());
        let a = p.atom("a").unwrap();
        let b = p.atom("b").unwrap();
        let expected: Model = [a, b].into_iter().collect();
        assert_eq!(st.atmost_set(), expected);
        assert_eq!(st.source_of(a), Some(3)); // re-derived via a :- not c
        // undo restores the original sources
        st.pop_level();
        assert_eq!(st.source_of(a), Some(1));
        assert_eq!(st.source_of(b), Some(2));
        st.run_atleast();
        st.sync_atmost();
        st.check_counters();
    }

    #[test]
    fn untouched_sources_mean_zero_visits() {
        let p = chained_sources_swapped();
        let d = p.atom("d").unwrap();
        let mut st = PropagationState::new(&p);
        st.sync_atmost();
        let a = p.atom("a").unwrap();
        assert_eq!(st.source_of(a), Some(1)); // a :- not c this time
        st.push_level();
        st.assume(Literal::positive(d));
        let report = st.sync_atmost();
        assert_eq!(report.visited, 0);
        assert_eq!(report.restored, 0);
        let b = p.atom("b").unwrap();
        let expected: Model = [a, b].into_iter().collect();
        assert_eq!(st.atmost_set(), expected);
    }

    #[test]
    fn circular_weight_slack_does_not_hide_unfoundedness() {
        // x.  s1 :- 1 { x, s2 }.  s2 :- s1.
        // After `not x`, the first rule still clears its bound through
        // s2 — but that weight is circular, so both s must fall.
        let mut bld = ProgramBuilder::new();
        let x = bld.intern("x");
        let s1 = bld.intern("s1");
        let s2 = bld.intern("s2");
        bld.add_basic(x, Vec::new());
        bld.add_constraint(s1, vec![Literal::positive(x), Literal::positive(s2)], 1);
        bld.add_basic(s2, vec![Literal::positive(s1)]);
        let p = bld.finish();

        let mut st = PropagationState::new(&p);
        st.sync_atmost();
        let all: Model = [x, s1, s2].into_iter().collect();
        assert_eq!(st.atmost_set(), all);

        st.push_level();
        st.assume(Literal::negative(x));
        let report = st.sync_atmost();
        assert_eq!(st.atmost_set(), Model::new());
        assert_eq!(report.removed_still_out, vec![s1, s2]);
        // and it matches the from-scratch reference on the same assignment
        let reference = propagate::atmost(
            &p,
            &LiteralSet::from_literals(3, [Literal::negative(x)]),
        );
        assert_eq!(st.atmost_set(), reference);
    }

    #[test]
    fn expand_matches_reference_on_alternating_program() {
        // a :- a.  b :- not a.
        let mut bld = ProgramBuilder::new();
        let a = bld.intern("a");
        let b = bld.intern("b");
        bld.add_basic(a, vec![Literal::positive(a)]);
        bld.add_basic(b, vec![Literal::negative(a)]);
        let p = bld.finish();
        let mut st = PropagationState::new(&p);
        assert!(!st.expand().conflict);
        let reference = propagate::expand(&p, &p.empty_assignment());
        assert!(st.assignment().same_assignment(&reference));
        st.check_counters();
    }

    // ---- randomized equivalence ------------------------------------------

    #[derive(Debug, Clone)]
    enum Shape {
        Basic(u8, Vec<(u8, bool)>),
        Constraint(u8, Vec<(u8, bool)>, u8),
        Choice(Vec<u8>, Vec<(u8, bool)>),
        Weight(u8, Vec<((u8, bool), u8)>, u8),
    }

    fn arb_program(atoms: u8, max_rules: usize) -> impl Strategy<Value = Program> {
        let lit = (0..atoms, any::<bool>());
        let body = prop::collection::vec(lit.clone(), 0..4);
        let rule = prop_oneof![
            (0..atoms, body.clone()).prop_map(|(h, b)| Shape::Basic(h, b)),
            (0..atoms, body.clone(), 0..5u8).prop_map(|(h, b, k)| Shape::Constraint(h, b, k)),
            (prop::collection::vec(0..atoms, 1..3), body.clone())
                .prop_map(|(hs, b)| Shape::Choice(hs, b)),
            (0..atoms, prop::collection::vec((lit, 0..4u8), 0..4), 0..8u8)
                .prop_map(|(h, b, w)| Shape::Weight(h, b, w)),
        ];
        prop::collection::vec(rule, 0..max_rules).prop_map(move |shapes| {
            let mut b = ProgramBuilder::new();
            let ids: Vec<AtomId> = (0..atoms).map(|i| b.intern(&format!("x{i}"))).collect();
            let lit = |(a, pos): (u8, bool)| {
                if pos {
                    Literal::positive(ids[a as usize])
                } else {
                    Literal::negative(ids[a as usize])
                }
            };
            for s in shapes {
                match s {
                    Shape::Basic(h, body) => {
                        b.add_basic(ids[h as usize], body.into_iter().map(lit).collect::<Vec<_>>());
                    }
                    Shape::Constraint(h, body, k) => b.add_constraint(
                        ids[h as usize],
                        body.into_iter().map(lit).collect::<Vec<_>>(),
                        k as u64,
                    ),
                    Shape::Choice(hs, body) => {
                        b.add_choice(
                            hs.into_iter().map(|h| ids[h as usize]).collect::<Vec<_>>(),
                            body.into_iter().map(lit).collect::<Vec<_>>(),
                        )
                        .unwrap();
                    }
                    Shape::Weight(h, body, w) => {
                        b.add_weight(
                            ids[h as usize],
                            body.into_iter()
                                .map(|(l, wt)| (lit(l), wt as u64))
                                .collect::<Vec<_>>(),
                            w as u64,
                        )
                        .unwrap();
                    }
                }
            }
            b.finish()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(192))]

        #[test]
        fn incremental_expand_equals_reference(
            p in arb_program(5, 8),
            seq in prop::collection::vec((0u8..5, any::<bool>()), 0..5),
        ) {
            let mut st = PropagationState::new(&p);
            let root = st.expand();
            let reference = propagate::expand(&p, &p.empty_assignment());
            prop_assert!(st.assignment().equivalent(&reference));
            if root.conflict {
                return Ok(());
            }
            st.check_counters();
            prop_assert_eq!(st.atmost_set(), propagate::atmost(&p, st.assignment()));

            // grow the assignment literal by literal, comparing against
            // the from-scratch reference at every step
            let mut base = st.assignment().clone();
            for (atom, pos) in seq {
                let lit = if pos {
                    Literal::positive(AtomId(atom as u32))
                } else {
                    Literal::negative(AtomId(atom as u32))
                };
                st.push_level();
                st.assume(lit);
                let out = st.expand();
                base.insert(lit);
                let reference = propagate::expand(&p, &base);
                prop_assert!(st.assignment().equivalent(&reference));
                prop_assert_eq!(out.conflict, reference.is_conflicting());
                if out.conflict {
                    break;
                }
                st.check_counters();
                prop_assert_eq!(st.atmost_set(), propagate::atmost(&p, st.assignment()));
                base = st.assignment().clone();
            }
        }

        #[test]
        fn pop_level_restores_exactly(
            p in arb_program(5, 8),
            seq in prop::collection::vec((0u8..5, any::<bool>()), 1..5),
        ) {
            let mut st = PropagationState::new(&p);
            if st.expand().conflict {
                return Ok(());
            }
            let snapshot = st.assignment().clone();
            let closure = st.atmost_set();

            for (atom, pos) in &seq {
                let lit = if *pos {
                    Literal::positive(AtomId(*atom as u32))
                } else {
                    Literal::negative(AtomId(*atom as u32))
                };
                st.push_level();
                st.assume(lit);
                st.expand();
            }
            for _ in &seq {
                st.pop_level();
            }
            prop_assert!(st.assignment().same_assignment(&snapshot));
            prop_assert_eq!(st.atmost_set(), closure);
            st.run_atleast();
            st.sync_atmost();
            st.check_counters();
            prop_assert!(st.assignment().same_assignment(&snapshot));
        }
    }
}
