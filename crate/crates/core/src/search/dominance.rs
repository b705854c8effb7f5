//! Per-state closed lists of truncated g-vectors and the quick dominance check.

use crate::cost::{lex_leq, weakly_dominates, Cost, TruncatedVector, INFINITY};

/// Lexicographically sorted, mutually non-dominated truncated vectors of the
/// expansions of one state, stored flat with a fixed stride.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClosedList {
    dim: usize,
    data: Vec<Cost>,
}

impl ClosedList {
    pub fn new(dim: usize) -> Self {
        ClosedList { dim, data: Vec::new() }
    }

    /// Builds a list from vectors that are already lex-sorted and mutually
    /// non-dominated.
    pub fn from_sorted(dim: usize, vectors: &[TruncatedVector]) -> Self {
        let mut list = ClosedList::new(dim);
        for v in vectors {
            assert_eq!(v.arity(), dim);
            list.data.extend_from_slice(v);
        }
        debug_assert!(list.is_well_formed());
        list
    }

    pub fn len(&self) -> usize {
        self.data.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    #[inline]
    fn at(&self, i: usize) -> &[Cost] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[Cost]> {
        self.data.chunks_exact(self.dim.max(1))
    }

    pub fn to_vectors(&self) -> Vec<TruncatedVector> {
        self.iter().map(TruncatedVector::from_slice).collect()
    }

    /// True iff some stored vector weakly dominates `v`. The scan stops at the
    /// first stored vector that is not lexicographically `<= v`, since no later
    /// one can dominate it either.
    pub fn is_dominated(&self, v: &[Cost]) -> bool {
        for stored in self.iter() {
            if !lex_leq(stored, v) {
                return false;
            }
            if weakly_dominates(stored, v) {
                return true;
            }
        }
        false
    }

    /// Inserts a non-dominated `v`, removing every stored vector it weakly
    /// dominates. Walks backward and stops at the first stored vector that
    /// `v` is not lexicographically `<=`; `v` goes right after it.
    pub fn consolidate(&mut self, v: &[Cost]) {
        debug_assert_eq!(v.len(), self.dim);
        debug_assert!(!self.is_dominated(v));
        let mut i = self.len();
        while i >= 1 {
            let stored = self.at(i - 1);
            if !lex_leq(v, stored) {
                break;
            }
            if weakly_dominates(v, stored) {
                self.data.drain((i - 1) * self.dim..i * self.dim);
            }
            i -= 1;
        }
        let at = i * self.dim;
        self.data.splice(at..at, v.iter().copied());
    }

    /// Strictly lex-increasing and mutually non-dominated.
    pub fn is_well_formed(&self) -> bool {
        let items: Vec<&[Cost]> = self.iter().collect();
        let sorted = items.windows(2).all(|w| w[0] < w[1]);
        sorted
            && items
                .iter()
                .enumerate()
                .all(|(i, a)| items.iter().enumerate().all(|(j, b)| i == j || !weakly_dominates(a, b)))
    }
}

/// `last ⪯ v`: the most recent expansion of the state weakly dominates `v`.
#[inline]
pub fn quick_dominance(v: &[Cost], last: &[Cost]) -> bool {
    weakly_dominates(last, v)
}

/// Closed lists plus the most recent expansion, for every state.
#[derive(Clone, Debug)]
pub struct DominanceStore {
    dim: usize,
    closed: Vec<ClosedList>,
    last: Vec<Cost>,
}

impl DominanceStore {
    pub fn new(state_count: usize, dim: usize) -> Self {
        DominanceStore {
            dim,
            closed: vec![ClosedList::new(dim); state_count],
            last: vec![INFINITY; state_count * dim],
        }
    }

    #[inline]
    pub fn last(&self, state: usize) -> &[Cost] {
        &self.last[state * self.dim..(state + 1) * self.dim]
    }

    pub fn set_last(&mut self, state: usize, v: &[Cost]) {
        self.last[state * self.dim..(state + 1) * self.dim].copy_from_slice(v);
    }

    pub fn closed(&self, state: usize) -> &ClosedList {
        &self.closed[state]
    }

    pub fn closed_mut(&mut self, state: usize) -> &mut ClosedList {
        &mut self.closed[state]
    }
}
