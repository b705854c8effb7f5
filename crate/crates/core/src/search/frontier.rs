//! Bucket queue keyed by `f_1`, LIFO among equal keys.

use crate::cost::Cost;

use super::NodeId;

/// Buckets are indexed by `f_1 - base`, where `base` is the smallest key the
/// queue will ever see (the start node's `f_1` under a consistent heuristic).
#[derive(Clone, Debug)]
pub struct Frontier {
    base: Cost,
    buckets: Vec<Vec<NodeId>>,
    cursor: usize,
    len: usize,
}

impl Frontier {
    pub fn new(base: Cost) -> Self {
        Frontier {
            base,
            buckets: Vec::new(),
            cursor: 0,
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, f1: Cost, node: NodeId) {
        assert!(f1 >= self.base, "key {f1} below frontier base {}", self.base);
        let index = usize::try_from(f1 - self.base).expect("frontier key range exceeds usize");
        if index >= self.buckets.len() {
            let grown = (self.buckets.len() * 2).max(index + 1).max(16);
            self.buckets.resize_with(grown, Vec::new);
        }
        debug_assert!(
            index >= self.cursor || self.len == 0,
            "insertion below the cursor: heuristic is not consistent"
        );
        self.cursor = self.cursor.min(index);
        self.buckets[index].push(node);
        self.len += 1;
    }

    /// Removes a node with minimal `f_1`, the most recently inserted among ties.
    pub fn pop(&mut self) -> Option<(Cost, NodeId)> {
        if self.len == 0 {
            return None;
        }
        while self.buckets[self.cursor].is_empty() {
            self.cursor += 1;
        }
        let node = self.buckets[self.cursor].pop().expect("non-empty bucket");
        self.len -= 1;
        Some((self.base + self.cursor as Cost, node))
    }

    /// Smallest stored key.
    pub fn min_key(&self) -> Option<Cost> {
        self.buckets[self.cursor.min(self.buckets.len())..]
            .iter()
            .position(|b| !b.is_empty())
            .map(|i| self.base + (self.cursor + i) as Cost)
    }

    /// Stored nodes in the order they would be extracted.
    pub fn snapshot(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.len);
        for bucket in self.buckets.iter().skip(self.cursor) {
            out.extend(bucket.iter().rev().copied());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifo_among_ties_and_min_first() {
        let mut q = Frontier::new(-1);
        q.push(2, NodeId(1));
        q.push(-1, NodeId(0));
        q.push(2, NodeId(2));
        q.push(5, NodeId(3));
        assert_eq!(q.snapshot(), vec![NodeId(0), NodeId(2), NodeId(1), NodeId(3)]);
        assert_eq!(q.min_key(), Some(-1));
        assert_eq!(q.pop(), Some((-1, NodeId(0))));
        assert_eq!(q.pop(), Some((2, NodeId(2))));
        q.push(2, NodeId(4));
        assert_eq!(q.pop(), Some((2, NodeId(4))));
        assert_eq!(q.pop(), Some((2, NodeId(1))));
        assert_eq!(q.pop(), Some((5, NodeId(3))));
        assert_eq!(q.pop(), None);
        assert!(q.is_empty());
    }

    #[test]
    fn grows_for_distant_keys() {
        let mut q = Frontier::new(0);
        q.push(10_000, NodeId(7));
        q.push(3, NodeId(8));
        assert_eq!(q.len(), 2);
        assert_eq!(q.pop(), Some((3, NodeId(8))));
        assert_eq!(q.pop(), Some((10_000, NodeId(7))));
    }

    #[test]
    #[should_panic(expected = "below frontier base")]
    fn rejects_keys_below_base() {
        let mut q = Frontier::new(5);
        q.push(4, NodeId(0));
    }
}
