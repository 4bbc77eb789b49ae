//! Model search: chronological backtracking over expanded assignments.
//!
//! The solver keeps an explicit stack of branch frames instead of
//! recursing. At each node it expands the assignment; a conflict or a
//! recorded model flips the most recent unflipped frame (try `x`, then
//! `not x`), so the tree is walked exhaustively and enumeration needs no
//! blocking constraints.
//!
//! Branch selection works in two probe passes sharing one cache:
//! a *lookahead* pass speculatively assumes uncovered literals one at a
//! time, returning the first whose expansion conflicts (branching on it
//! lets the normal flip mechanism assert the negation) and skipping
//! literals already entailed by an earlier probe; if nothing conflicts, a
//! *scoring* pass fills in the skipped probes so every uncovered atom has
//! the sizes of both its expansions, and the branch literal is the atom
//! maximizing `(min, max)` of those sizes — growing both subtrees'
//! forced assignments shrinks the remaining search space fastest. Probes
//! are undone exactly, so the caller's state never drifts.

use crate::engine::PropagationState;
use crate::program::{AtomId, Literal, Model, Program};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

/// Knobs for [`Solver`].
#[derive(Debug, Clone)]
pub struct SolverOptions {
    /// Probe uncovered literals before branching (conflict detection +
    /// scored branch selection). Off = branch on the first uncovered
    /// atom, positively.
    pub lookahead: bool,
    /// Permute the probe order (model sets are unaffected; statistics
    /// and enumeration order may vary). `None` keeps ascending atom
    /// order.
    pub seed: Option<u64>,
}

impl Default for SolverOptions {
    fn default() -> SolverOptions {
        SolverOptions {
            lookahead: true,
            seed: None,
        }
    }
}

/// Counters from the most recent search run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub choice_points: u64,
    pub conflicts: u64,
    pub lookahead_probes: u64,
    pub models_found: u64,
    pub duration: Duration,
}

/// How a branch literal was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchChoice {
    /// The literal to assume next.
    pub literal: Literal,
    /// The literal's probe conflicted, so assuming it will fail
    /// immediately and the search will assert its negation.
    pub conflicting_probe: bool,
    /// Fully scored candidates: atom, size of the positive expansion,
    /// size of the negative expansion. Empty when a conflicting probe
    /// cut the pass short or lookahead is off.
    pub scores: Vec<(AtomId, usize, usize)>,
}

struct Frame {
    lit: Literal,
    flipped: bool,
}

/// Decision procedure and model enumerator for a fixed program.
pub struct Solver {
    program: Program,
    options: SolverOptions,
    probe_order: Vec<u32>,
    stats: SearchStats,
}

impl Solver {
    pub fn new(program: Program) -> Solver {
        Solver::with_options(program, SolverOptions::default())
    }

    pub fn with_options(program: Program, options: SolverOptions) -> Solver {
        let mut probe_order: Vec<u32> = (0..program.atom_count() as u32).collect();
        if let Some(seed) = options.seed {
            probe_order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        }
        Solver {
            program,
            options,
            probe_order,
            stats: SearchStats::default(),
        }
    }

    pub fn program(&self) -> &Program {
        &self.program
    }

    /// Counters from the most recent `decide`/`enumerate` call.
    pub fn stats(&self) -> SearchStats {
        self.stats
    }

    /// Find one stable model agreeing with the assumptions.
    pub fn decide(&mut self, assumptions: &[Literal]) -> Option<Model> {
        let mut found = None;
        self.run(assumptions, |m| {
            found = Some(m);
            false
        });
        found
    }

    /// All stable models agreeing with the assumptions (up to `limit`),
    /// in search order.
    pub fn enumerate(&mut self, assumptions: &[Literal], limit: Option<usize>) -> Vec<Model> {
        let mut models = Vec::new();
        if limit == Some(0) {
            self.stats = SearchStats::default();
            return models;
        }
        self.run(assumptions, |m| {
            models.push(m);
            limit.is_none_or(|k| models.len() < k)
        });
        models
    }

    /// Run branch selection once at the root given the assumptions:
    /// expand, then probe exactly as the search would. `None` when the
    /// expanded assignment is conflicting or already total.
    pub fn probe_choice(&mut self, assumptions: &[Literal]) -> Option<BranchChoice> {
        let mut stats = SearchStats::default();
        let mut state = PropagationState::new(&self.program);
        for &l in assumptions {
            state.assume(l);
        }
        if state.expand().conflict || state.assignment().is_total() {
            return None;
        }
        let choice = self.select_branch(&mut state, &mut stats);
        self.stats = stats;
        Some(choice)
    }

    fn run(&mut self, assumptions: &[Literal], mut on_model: impl FnMut(Model) -> bool) {
        let started = Instant::now();
        let mut stats = SearchStats::default();
        let mut state = PropagationState::new(&self.program);
        for &l in assumptions {
            state.assume(l);
        }
        let mut frames: Vec<Frame> = Vec::new();
        let mut conflict = state.expand().conflict;

        'search: loop {
            if conflict {
                stats.conflicts += 1;
            } else if state.assignment().is_total() {
                stats.models_found += 1;
                if !on_model(state.assignment().model()) {
                    break 'search;
                }
                // continue as if this leaf failed
            } else {
                let choice = self.select_branch(&mut state, &mut stats);
                stats.choice_points += 1;
                frames.push(Frame {
                    lit: choice.literal,
                    flipped: false,
                });
                state.push_level();
                state.assume(choice.literal);
                conflict = state.expand().conflict;
                continue 'search;
            }

            // backtrack: flip the deepest unflipped frame
            loop {
                let Some(frame) = frames.pop() else {
                    break 'search;
                };
                state.pop_level();
                if frame.flipped {
                    continue;
                }
                let negated = frame.lit.negate();
                frames.push(Frame {
                    lit: negated,
                    flipped: true,
                });
                state.push_level();
                state.assume(negated);
                conflict = state.expand().conflict;
                if conflict {
                    stats.conflicts += 1;
                    continue;
                }
                continue 'search;
            }
        }

        stats.duration = started.elapsed();
        self.stats = stats;
    }

    /// Pick the next branch literal at an expanded, non-total,
    /// conflict-free node. Leaves `state` exactly as found.
    fn select_branch(&self, state: &mut PropagationState, stats: &mut SearchStats) -> BranchChoice {
        if !self.options.lookahead {
            let atom = self
                .first_uncovered(state)
                .expect("branching on a covered assignment");
            return BranchChoice {
                literal: Literal::positive(atom),
                conflicting_probe: false,
                scores: Vec::new(),
            };
        }

        let n = state.atom_count();
        let mut size: Vec<Option<usize>> = vec![None; 2 * n];
        let mut entailed = vec![false; 2 * n];

        // conflict hunt: skip literals entailed by an earlier probe
        for &i in &self.probe_order {
            let atom = AtomId(i);
            if !state.assignment().is_unassigned(atom) {
                continue;
            }
            for lit in [Literal::positive(atom), Literal::negative(atom)] {
                if entailed[lit.code()] {
                    continue;
                }
                match self.probe(state, lit, stats) {
                    None => {
                        return BranchChoice {
                            literal: lit,
                            conflicting_probe: true,
                            scores: Vec::new(),
                        }
                    }
                    Some((sz, new_lits)) => {
                        size[lit.code()] = Some(sz);
                        for l in new_lits {
                            entailed[l.code()] = true;
                        }
                    }
                }
            }
        }

        // scoring: every uncovered atom needs both expansion sizes
        let mut scores: Vec<(AtomId, usize, usize)> = Vec::new();
        for i in 0..n as u32 {
            let atom = AtomId(i);
            if !state.assignment().is_unassigned(atom) {
                continue;
            }
            let mut both = [0usize; 2];
            for (slot, lit) in [Literal::positive(atom), Literal::negative(atom)]
                .into_iter()
                .enumerate()
            {
                both[slot] = match size[lit.code()] {
                    Some(sz) => sz,
                    None => match self.probe(state, lit, stats) {
                        None => {
                            return BranchChoice {
                                literal: lit,
                                conflicting_probe: true,
                                scores,
                            }
                        }
                        Some((sz, _)) => sz,
                    },
                };
            }
            scores.push((atom, both[0], both[1]));
        }

        let &(atom, p, q) = scores
            .iter()
            .max_by(|a, b| {
                let ka = (a.1.min(a.2), a.1.max(a.2));
                let kb = (b.1.min(b.2), b.1.max(b.2));
                ka.cmp(&kb).then(b.0.cmp(&a.0)) // ties: smallest atom wins
            })
            .expect("no uncovered atom at a branch node");
        let _ = (p, q);
        BranchChoice {
            literal: Literal::positive(atom),
            conflicting_probe: false,
            scores,
        }
    }

    /// Speculatively assume `lit` and expand. `None` on conflict;
    /// otherwise the expanded assignment's size and its new literals.
    /// The state is restored either way.
    fn probe(
        &self,
        state: &mut PropagationState,
        lit: Literal,
        stats: &mut SearchStats,
    ) -> Option<(usize, Vec<Literal>)> {
        stats.lookahead_probes += 1;
        state.push_level();
        state.assume(lit);
        let conflict = state.expand().conflict;
        let result = if conflict {
            None
        } else {
            Some((state.assignment().len(), state.level_literals()))
        };
        state.pop_level();
        result
    }

    fn first_uncovered(&self, state: &PropagationState) -> Option<AtomId> {
        (0..state.atom_count() as u32)
            .map(AtomId)
            .find(|&a| state.assignment().is_unassigned(a))
    }
}
