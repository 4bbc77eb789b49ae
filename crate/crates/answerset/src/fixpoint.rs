//! Least-fixpoint iteration for monotone set operators.
//!
//! Both the reference semantics and the deduction closures are defined as
//! least fixpoints of monotone operators on subsets of a finite universe,
//! so the iteration loop lives here once.

use std::collections::BTreeSet;

/// Least fixpoint of `f` starting from the empty set.
///
/// `f` must be monotone and inflationary on subsets of a universe with
/// `universe_size` elements; each iterate then grows strictly until the
/// fixpoint, so convergence takes at most `universe_size` steps. Debug
/// builds assert the iterates actually grow; a failure to converge within
/// the bound panics, since it means the operator was not monotone.
pub fn lfp<T, F>(universe_size: usize, f: F) -> BTreeSet<T>
where
    T: Ord + Clone,
    F: Fn(&BTreeSet<T>) -> BTreeSet<T>,
{
    let mut current = BTreeSet::new();
    for _ in 0..=universe_size {
        let next = f(&current);
        debug_assert!(
            next.is_superset(&current),
            "fixpoint operator shrank its argument"
        );
        if next == current {
            return current;
        }
        current = next;
    }
    panic!("fixpoint iteration did not converge within the universe bound");
}

/// Least fixpoint of the union of several generators: one step applies
/// every generator to the current iterate and unions the results with it.
///
/// Equivalent to [`lfp`] of `|c| c ∪ g_1(c) ∪ ... ∪ g_k(c)`; provided so
/// callers with per-rule generators don't have to build that closure.
pub fn lfp_nest<T, F>(universe_size: usize, generators: &[F]) -> BTreeSet<T>
where
    T: Ord + Clone,
    F: Fn(&BTreeSet<T>) -> BTreeSet<T>,
{
    lfp(universe_size, |current| {
        let mut next = current.clone();
        for g in generators {
            next.extend(g(current));
        }
        next
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constant_operator_reaches_its_constant() {
        let target: BTreeSet<u32> = [1, 2, 3].into_iter().collect();
        let result = lfp(4, |c: &BTreeSet<u32>| c.union(&target).copied().collect());
        assert_eq!(result, target);
    }

    #[test]
    fn identity_stops_at_empty() {
        let result = lfp(8, |c: &BTreeSet<u32>| c.clone());
        assert_eq!(result, BTreeSet::new());
    }

    #[test]
    fn chain_of_implications_closes_step_by_step() {
        // 0 unconditionally; i+1 whenever i — needs the full iteration count
        let n = 6u32;
        let result = lfp(n as usize, |c: &BTreeSet<u32>| {
            let mut next = c.clone();
            next.insert(0);
            for &x in c {
                if x + 1 < n {
                    next.insert(x + 1);
                }
            }
            next
        });
        assert_eq!(result, (0..n).collect::<BTreeSet<u32>>());
    }

    proptest! {
        #[test]
        fn nested_generators_agree_with_single_operator(
            implications in prop::collection::vec((0u32..8, 0u32..8), 0..16),
            facts in prop::collection::btree_set(0u32..8, 0..4),
        ) {
            let generators: Vec<Box<dyn Fn(&BTreeSet<u32>) -> BTreeSet<u32>>> = implications
                .iter()
                .map(|&(pre, post)| {
                    Box::new(move |c: &BTreeSet<u32>| {
                        if c.contains(&pre) {
                            [post].into_iter().collect()
                        } else {
                            BTreeSet::new()
                        }
                    }) as Box<dyn Fn(&BTreeSet<u32>) -> BTreeSet<u32>>
                })
                .chain(std::iter::once({
                    let facts = facts.clone();
                    Box::new(move |_: &BTreeSet<u32>| facts.clone())
                        as Box<dyn Fn(&BTreeSet<u32>) -> BTreeSet<u32>>
                }))
                .collect();

            let nested = lfp_nest(8, &generators);
            let single = lfp(8, |c: &BTreeSet<u32>| {
                let mut next = c.clone();
                for g in &generators {
                    next.extend(g(c));
                }
                next
            });
            prop_assert_eq!(nested, single);
        }
    }
}
