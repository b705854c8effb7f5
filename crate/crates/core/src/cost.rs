//! Cost-vector algebra and the dominance / ordering predicates shared by the
//! heuristic phase, the search and the oracle.

use std::fmt;
use std::ops::{Add, Deref};

use smallvec::SmallVec;

/// Scalar cost of one dimension.
pub type Cost = i64;

/// Sentinel for "unbounded above". It is far below `i64::MAX` so that a sum of
/// the sentinel and any realistic path cost still fits; use [`sat_add`] when
/// one side may be the sentinel.
pub const INFINITY: Cost = i64::MAX / 4;

/// Sentinel for "unbounded below" (negative cycle).
pub const NEG_INFINITY: Cost = -INFINITY;

/// Addition that keeps [`INFINITY`] absorbing.
#[inline]
pub fn sat_add(a: Cost, b: Cost) -> Cost {
    if a >= INFINITY || b >= INFINITY {
        INFINITY
    } else {
        a + b
    }
}

type Values = SmallVec<[Cost; 4]>;

/// A cost vector `(cost_1, cost_2, ..., cost_{d+1})`: the primary cost followed
/// by `d` resource usages.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CostVector(Values);

/// A cost vector with its primary component removed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruncatedVector(Values);

impl CostVector {
    pub fn new(values: impl Into<Vec<Cost>>) -> Self {
        CostVector(Values::from_vec(values.into()))
    }

    pub fn from_slice(values: &[Cost]) -> Self {
        CostVector(Values::from_slice(values))
    }

    pub fn zeros(arity: usize) -> Self {
        CostVector(smallvec::smallvec![0; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Cost] {
        &self.0
    }

    /// The primary cost.
    pub fn primary(&self) -> Cost {
        self.0[0]
    }

    /// Drops the primary cost. Requires arity >= 2.
    pub fn truncate(&self) -> TruncatedVector {
        assert!(self.0.len() >= 2, "cannot truncate a vector of arity {}", self.0.len());
        TruncatedVector(Values::from_slice(&self.0[1..]))
    }

    pub fn weakly_dominates(&self, other: &CostVector) -> bool {
        weakly_dominates(self, other)
    }

    pub fn lex_leq(&self, other: &CostVector) -> bool {
        lex_leq(self, other)
    }
}

impl TruncatedVector {
    pub fn new(values: impl Into<Vec<Cost>>) -> Self {
        TruncatedVector(Values::from_vec(values.into()))
    }

    pub fn from_slice(values: &[Cost]) -> Self {
        TruncatedVector(Values::from_slice(values))
    }

    /// The "never expanded" marker: every component at [`INFINITY`].
    pub fn infinite(arity: usize) -> Self {
        TruncatedVector(smallvec::smallvec![INFINITY; arity])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Cost] {
        &self.0
    }

    pub fn weakly_dominates(&self, other: &TruncatedVector) -> bool {
        weakly_dominates(self, other)
    }

    pub fn lex_leq(&self, other: &TruncatedVector) -> bool {
        lex_leq(self, other)
    }
}

impl Deref for CostVector {
    type Target = [Cost];
    fn deref(&self) -> &[Cost] {
        &self.0
    }
}

impl Deref for TruncatedVector {
    type Target = [Cost];
    fn deref(&self) -> &[Cost] {
        &self.0
    }
}

impl Add for &CostVector {
    type Output = CostVector;

    fn add(self, rhs: &CostVector) -> CostVector {
        assert_eq!(self.arity(), rhs.arity(), "cost vector arity mismatch");
        CostVector(self.0.iter().zip(rhs.0.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Add for CostVector {
    type Output = CostVector;

    fn add(self, rhs: CostVector) -> CostVector {
        &self + &rhs
    }
}

impl<const N: usize> From<[Cost; N]> for CostVector {
    fn from(values: [Cost; N]) -> Self {
        CostVector::from_slice(&values)
    }
}

impl<const N: usize> From<[Cost; N]> for TruncatedVector {
    fn from(values: [Cost; N]) -> Self {
        TruncatedVector::from_slice(&values)
    }
}

fn write_tuple(f: &mut fmt::Formatter<'_>, values: &[Cost]) -> fmt::Result {
    f.write_str("(")?;
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        if *v >= INFINITY {
            f.write_str("inf")?;
        } else if *v <= NEG_INFINITY {
            f.write_str("-inf")?;
        } else {
            write!(f, "{v}")?;
        }
    }
    f.write_str(")")
}

impl fmt::Display for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Debug for CostVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Display for TruncatedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

impl fmt::Debug for TruncatedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.0)
    }
}

/// `a ⪯ b`: every component of `a` is at most the matching component of `b`.
#[inline]
pub fn weakly_dominates(a: &[Cost], b: &[Cost]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `a ≤_lex b`.
#[inline]
pub fn lex_leq(a: &[Cost], b: &[Cost]) -> bool {
    debug_assert_eq!(a.len(), b.len());
    a <= b
}
