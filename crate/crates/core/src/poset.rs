//! Finite strict partial orders and the lift of an order to subsets.
//!
//! Elements of a carrier are plain indices `0..size`. Subsets are dense
//! bit-vectors of the same width, so symmetric differences and minima scans
//! are word-parallel and there is no cap on the carrier size.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("relation is not irreflexive: {0} is related to itself")]
    NotIrreflexive(usize),
    #[error("relation is not transitive: {0} < {1} and {1} < {2} but not {0} < {2}")]
    NotTransitive(usize, usize, usize),
    #[error("relation has a cycle: {0:?}")]
    CyclicRelation(Vec<usize>),
    #[error("element {index} out of range for a carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("expected a nonempty set")]
    EmptyInput,
    #[error("element {0} is not in the set")]
    ElementNotInSet(usize),
    #[error("carrier size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },
}

/// A subset of a finite carrier `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subset {
    universe: usize,
    words: Vec<u64>,
}

impl Subset {
    pub fn empty(universe: usize) -> Self {
        Subset {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Subset::empty(universe);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim();
        s
    }

    pub fn singleton(universe: usize, x: usize) -> Self {
        let mut s = Subset::empty(universe);
        s.insert(x);
        s
    }

    /// Panics if an index is outside the carrier.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut s = Subset::empty(universe);
        for x in items {
            s.insert(x);
        }
        s
    }

    /// The subset whose characteristic vector is the integer `bits`.
    /// Only meaningful for carriers of at most 64 elements.
    pub fn from_bits(universe: usize, bits: u64) -> Self {
        assert!(
            universe <= WORD,
            "from_bits needs a carrier of at most 64 elements"
        );
        let mut s = Subset::empty(universe);
        if let Some(w) = s.words.first_mut() {
            *w = bits;
        }
        s.trim();
        s
    }

    /// Characteristic vector as an integer, if the carrier fits in 64 bits.
    pub fn to_bits(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, x: usize) -> bool {
        x < self.universe && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    pub fn insert(&mut self, x: usize) {
        assert!(
            x < self.universe,
            "element {x} outside carrier of size {}",
            self.universe
        );
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    pub fn remove(&mut self, x: usize) {
        if x < self.universe {
            self.words[x / WORD] &= !(1 << (x % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i * WORD + bit)
            })
        })
    }

    fn zip_with(&self, other: &Subset, f: impl Fn(u64, u64) -> u64) -> Subset {
        assert_eq!(
            self.universe, other.universe,
            "subsets over different carriers"
        );
        let mut out = Subset {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        };
        out.trim();
        out
    }

    pub fn union(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn union_with(&mut self, other: &Subset) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn symmetric_difference(&self, other: &Subset) -> Subset {
        self.zip_with(other, |a, b| a ^ b)
    }

    pub fn complement(&self) -> Subset {
        let mut out = Subset {
            universe: self.universe,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.trim();
        out
    }

    pub fn intersects(&self, other: &Subset) -> bool {
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    /// Compares characteristic vectors as unsigned integers (element 0 is
    /// the least significant bit).
    pub fn cmp_value(&self, other: &Subset) -> Ordering {
        self.words.iter().rev().cmp(other.words.iter().rev())
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

/// Finite multiset over a carrier, as a multiplicity per element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Multiset {
    counts: Vec<u64>,
}

impl Multiset {
    pub fn new(counts: Vec<u64>) -> Self {
        Multiset { counts }
    }

    pub fn zero(universe: usize) -> Self {
        Multiset {
            counts: vec![0; universe],
        }
    }

    pub fn indicator(set: &Subset) -> Self {
        Multiset {
            counts: (0..set.universe())
                .map(|x| set.contains(x) as u64)
                .collect(),
        }
    }

    pub fn universe(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, x: usize) -> u64 {
        self.counts.get(x).copied().unwrap_or(0)
    }

    pub fn set(&mut self, x: usize, n: u64) {
        self.counts[x] = n;
    }
}

/// Anything that can answer "is `x` strictly below `y`".
pub trait Preference {
    fn size(&self) -> usize;
    fn less(&self, x: usize, y: usize) -> bool;
}

/// An arbitrary binary relation on `0..size`, with no laws imposed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRelation {
    size: usize,
    rel: Vec<bool>,
}

impl BinaryRelation {
    pub fn new(size: usize) -> Self {
        BinaryRelation {
            size,
            rel: vec![false; size * size],
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, usize)>>(
        size: usize,
        pairs: I,
    ) -> Result<Self, OrderError> {
        let mut r = BinaryRelation::new(size);
        for (x, y) in pairs {
            r.add(x, y)?;
        }
        Ok(r)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn add(&mut self, x: usize, y: usize) -> Result<(), OrderError> {
        for i in [x, y] {
            if i >= self.size {
                return Err(OrderError::IndexOutOfRange {
                    index: i,
                    size: self.size,
                });
            }
        }
        self.rel[x * self.size + y] = true;
        Ok(())
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        x < self.size && y < self.size && self.rel[x * self.size + y]
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.size;
        (0..n * n)
            .filter(move |&i| self.rel[i])
            .map(move |i| (i / n, i % n))
    }

    fn successors(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size).filter(move |&y| self.rel[x * self.size + y])
    }

    /// A directed cycle, if one exists.
    pub fn find_cycle(&self) -> Option<Vec<usize>> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.size];
        let mut parent = vec![usize::MAX; self.size];
        for root in 0..self.size {
            if mark[root] != Mark::New {
                continue;
            }
            // iterative DFS; each frame is (vertex, next successor to try)
            let mut stack = vec![(root, 0usize)];
            mark[root] = Mark::Active;
            while let Some(top) = stack.last_mut() {
                let (v, from) = *top;
                if let Some(w) = (from..self.size).find(|&w| self.rel[v * self.size + w]) {
                    top.1 = w + 1;
                    match mark[w] {
                        Mark::New => {
                            mark[w] = Mark::Active;
                            parent[w] = v;
                            stack.push((w, 0));
                        }
                        Mark::Active => {
                            let mut cycle = vec![w];
                            let mut cur = v;
                            while cur != w {
                                cycle.push(cur);
                                cur = parent[cur];
                            }
                            cycle[1..].reverse();
                            return Some(cycle);
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[v] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

impl Preference for BinaryRelation {
    fn size(&self) -> usize {
        self.size
    }

    fn less(&self, x: usize, y: usize) -> bool {
        self.contains(x, y)
    }
}

pub fn is_acyclic(r: &BinaryRelation) -> bool {
    r.find_cycle().is_none()
}

/// A strict (irreflexive, transitive) partial order on `0..size`.
///
/// Stores both the strict upper set `u(x)` and the strict lower set of every
/// element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    up: Vec<Subset>,
    down: Vec<Subset>,
}

/// Accepts `r` as an order iff it is irreflexive and transitive. Violations
/// are reported for the first offending element (or triple, in
/// lexicographic order).
pub fn validate_order(r: &BinaryRelation) -> Result<Poset, OrderError> {
    let n = r.size();
    if let Some(x) = (0..n).find(|&x| r.contains(x, x)) {
        return Err(OrderError::NotIrreflexive(x));
    }
    for x in 0..n {
        for y in r.successors(x) {
            if let Some(z) = r.successors(y).find(|&z| !r.contains(x, z)) {
                return Err(OrderError::NotTransitive(x, y, z));
            }
        }
    }
    Ok(Poset::from_relation_unchecked(r))
}

/// Closes an acyclic relation into the strict order it generates.
pub fn transitive_closure(r: &BinaryRelation) -> Result<Poset, OrderError> {
    if let Some(cycle) = r.find_cycle() {
        return Err(OrderError::CyclicRelation(cycle));
    }
    let n = r.size();
    let mut closed = BinaryRelation::new(n);
    for x in 0..n {
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = r.successors(x).collect();
        while let Some(y) = stack.pop() {
            if std::mem::replace(&mut seen[y], true) {
                continue;
            }
            closed.rel[x * n + y] = true;
            stack.extend(r.successors(y).filter(|&z| !seen[z]));
        }
    }
    Ok(Poset::from_relation_unchecked(&closed))
}

impl Poset {
    fn from_relation_unchecked(r: &BinaryRelation) -> Self {
        let n = r.size();
        let up = (0..n)
            .map(|x| Subset::from_indices(n, r.successors(x)))
            .collect();
        let down = (0..n)
            .map(|y| Subset::from_indices(n, (0..n).filter(|&x| r.contains(x, y))))
            .collect();
        Poset {
            labels: (0..n).map(|i| i.to_string()).collect(),
            up,
            down,
        }
    }

    /// The empty order: every pair of distinct elements is incomparable.
    pub fn antichain(size: usize) -> Self {
        Poset::from_relation_unchecked(&BinaryRelation::new(size))
    }

    /// The usual `<` on `0..size`.
    pub fn chain(size: usize) -> Self {
        let mut r = BinaryRelation::new(size);
        for x in 0..size {
            for y in x + 1..size {
                r.rel[x * size + y] = true;
            }
        }
        Poset::from_relation_unchecked(&r)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, OrderError> {
        if labels.len() != self.size() {
            return Err(OrderError::SizeMismatch {
                expected: self.size(),
                found: labels.len(),
            });
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn less(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    pub fn relation(&self) -> BinaryRelation {
        let n = self.size();
        let mut r = BinaryRelation::new(n);
        for x in 0..n {
            for y in self.up[x].iter() {
                r.rel[x * n + y] = true;
            }
        }
        r
    }

    /// The reverse order (`x < y` iff `y < x` here).
    pub fn inverse(&self) -> Poset {
        Poset {
            labels: self.labels.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// Whether every two distinct elements are comparable.
    pub fn is_total(&self) -> bool {
        let n = self.size();
        (0..n).all(|x| (0..n).all(|y| x == y || self.less(x, y) || self.less(y, x)))
    }

    fn check(&self, x: usize) -> Result<(), OrderError> {
        if x < self.size() {
            Ok(())
        } else {
            Err(OrderError::IndexOutOfRange {
                index: x,
                size: self.size(),
            })
        }
    }

    /// `u(x)`: everything strictly above `x`.
    pub fn upper_set(&self, x: usize) -> Result<&Subset, OrderError> {
        self.check(x)?;
        Ok(&self.up[x])
    }

    /// Everything strictly below `x`.
    pub fn lower_set(&self, x: usize) -> Result<&Subset, OrderError> {
        self.check(x)?;
        Ok(&self.down[x])
    }

    /// `u(Y)`: union of the strict upper sets of the members of `ys`.
    pub fn upper_set_of(&self, ys: &Subset) -> Subset {
        let mut out = Subset::empty(self.size());
        for y in ys.iter() {
            out.union_with(&self.up[y]);
        }
        out
    }

    /// The lift by its definition: search every nonempty `A' ⊆ A \ B` for one
    /// with `A \ (A' ∪ u(A')) = B \ (A' ∪ u(A'))`.
    ///
    /// Exponential in `|A \ B|`; panics above 63 candidates. Intended as the
    /// reference for [`Poset::lift_less`].
    pub fn lift_less_witness(&self, a: &Subset, b: &Subset) -> bool {
        let only_a: Vec<usize> = a.difference(b).iter().collect();
        assert!(
            only_a.len() < WORD,
            "witness search over {} elements is infeasible",
            only_a.len()
        );
        // A and B agree outside the cover iff their difference lies inside it
        let diff = a.symmetric_difference(b);
        (1u64..1 << only_a.len()).any(|mask| {
            let mut cover = Subset::empty(self.size());
            for (i, &x) in only_a.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    cover.insert(x);
                    cover.union_with(&self.up[x]);
                }
            }
            diff.is_subset_of(&cover)
        })
    }

    /// The minima of `set` with respect to this order.
    pub fn minimal_elements(&self, set: &Subset) -> Subset {
        Subset::from_indices(
            self.size(),
            set.iter().filter(|&x| !self.down[x].intersects(set)),
        )
    }

    /// `A ≺^P B`: `A ≠ B` and every minimal element of `A Δ B` lies in `A \ B`.
    pub fn lift_less(&self, a: &Subset, b: &Subset) -> bool {
        let diff = a.symmetric_difference(b);
        !diff.is_empty() && self.minimal_elements(&diff).is_subset_of(&a.difference(b))
    }

    /// `A ≺^P B` decided as: `A ≠ B` and each element of `B \ A` has a
    /// strictly smaller element in `A \ B`.
    pub fn lift_less_poly(&self, a: &Subset, b: &Subset) -> bool {
        if a == b {
            return false;
        }
        let only_a = a.difference(b);
        b.difference(a)
            .iter()
            .all(|x| self.down[x].intersects(&only_a))
    }

    /// Elements of `set` with nothing in `set` strictly above them.
    pub fn maximal_elements(&self, set: &Subset) -> Result<Subset, OrderError> {
        if set.is_empty() {
            return Err(OrderError::EmptyInput);
        }
        Ok(Subset::from_indices(
            self.size(),
            set.iter().filter(|&x| !self.up[x].intersects(set)),
        ))
    }

    /// A topological listing of the carrier. Among the currently available
    /// elements the smallest index is emitted first.
    pub fn linear_extension(&self) -> Vec<usize> {
        let n = self.size();
        let mut pending: Vec<usize> = self.down.iter().map(Subset::len).collect();
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&x| pending[x] == 0).map(Reverse).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(Reverse(x)) = ready.pop() {
            out.push(x);
            for y in self.up[x].iter() {
                pending[y] -= 1;
                if pending[y] == 0 {
                    ready.push(Reverse(y));
                }
            }
        }
        debug_assert_eq!(out.len(), n, "a strict order is acyclic");
        out
    }

    /// `(A \ {m}) ∪ u(m)`.
    pub fn replace_with_preferred(&self, m: usize, a: &Subset) -> Result<Subset, OrderError> {
        self.check(m)?;
        if !a.contains(m) {
            return Err(OrderError::ElementNotInSet(m));
        }
        let mut out = a.union(&self.up[m]);
        out.remove(m);
        Ok(out)
    }

    /// Lift to multisets: `f ≺ g` iff `{x | g(x) < f(x)} ≺^P {x | f(x) < g(x)}`.
    pub fn multiset_lift_less(&self, f: &Multiset, g: &Multiset) -> bool {
        let n = self.size();
        let more_in_f = Subset::from_indices(n, (0..n).filter(|&x| g.count(x) < f.count(x)));
        let more_in_g = Subset::from_indices(n, (0..n).filter(|&x| f.count(x) < g.count(x)));
        self.lift_less(&more_in_f, &more_in_g)
    }
}

impl Preference for Poset {
    fn size(&self) -> usize {
        self.up.len()
    }

    fn less(&self, x: usize, y: usize) -> bool {
        Poset::less(self, x, y)
    }
}

/// Serializable form of a relation: element labels plus `(lower, upper)` label pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSpec {
    pub elements: Vec<String>,
    #[serde(default)]
    pub pairs: Vec<[String; 2]>,
}
