//! Increasing k-tuples over `[n]` and finite sets of them.
//!
//! A `KTuple` is a strictly increasing sequence of 1-based vertex labels; a
//! `KTupleSet` is a set of such tuples over a fixed ambient `[n]`. Two tuples
//! are shift-adjacent when one is the other's left shift: the tail of one
//! equals the head of the other, aligned coordinate by coordinate.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;

/// A strictly increasing tuple of 1-based vertex labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KTuple(Vec<u32>);

impl KTuple {
    pub fn new(entries: Vec<u32>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("tuple must be nonempty"));
        }
        if entries[0] == 0 {
            return Err(Error::invalid("vertex labels are 1-based"));
        }
        if !entries.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::invalid(format!(
                "tuple {entries:?} is not strictly increasing"
            )));
        }
        Ok(KTuple(entries))
    }

    pub fn pair(i: u32, j: u32) -> Result<Self> {
        KTuple::new(vec![i, j])
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn max_entry(&self) -> u32 {
        *self.0.last().expect("tuples are nonempty")
    }
}

impl fmt::Display for KTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// True iff `x` and `y` are adjacent in the shift graph: the last k-1 entries
/// of one equal the first k-1 entries of the other. A tuple is never adjacent
/// to itself.
pub fn shift_adjacent(x: &KTuple, y: &KTuple) -> Result<bool> {
    if x.arity() != y.arity() {
        return Err(Error::invalid(format!(
            "arity mismatch: {} vs {}",
            x.arity(),
            y.arity()
        )));
    }
    let k = x.arity();
    if k < 2 {
        return Err(Error::invalid("shift adjacency needs arity >= 2"));
    }
    if x == y {
        return Ok(false);
    }
    let follows = |a: &KTuple, b: &KTuple| a.entries()[1..] == b.entries()[..k - 1];
    Ok(follows(x, y) || follows(y, x))
}

/// A set of increasing k-tuples over the ambient vertex set `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KTupleSet {
    n: u32,
    k: usize,
    members: BTreeSet<KTuple>,
}

impl KTupleSet {
    pub fn empty(n: u32, k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid("tuple arity must be at least 2"));
        }
        Ok(KTupleSet {
            n,
            k,
            members: BTreeSet::new(),
        })
    }

    pub fn from_tuples(n: u32, k: usize, tuples: impl IntoIterator<Item = KTuple>) -> Result<Self> {
        let mut set = KTupleSet::empty(n, k)?;
        for t in tuples {
            set.insert(t)?;
        }
        Ok(set)
    }

    /// All of `V(Sh_n^k)`: every increasing k-tuple over `[n]`.
    pub fn full_vertex_set(n: u32, k: usize) -> Result<Self> {
        if (k as u32) > n {
            return Err(Error::invalid(format!("k={k} exceeds n={n}")));
        }
        let mut set = KTupleSet::empty(n, k)?;
        let mut current: Vec<u32> = (1..=k as u32).collect();
        loop {
            set.members.insert(KTuple(current.clone()));
            // next combination in lexicographic order
            let mut i = k;
            while i > 0 {
                i -= 1;
                if current[i] < n - (k - 1 - i) as u32 {
                    current[i] += 1;
                    for j in i + 1..k {
                        current[j] = current[j - 1] + 1;
                    }
                    break;
                }
                if i == 0 {
                    return Ok(set);
                }
            }
        }
    }

    pub fn insert(&mut self, t: KTuple) -> Result<bool> {
        if t.arity() != self.k {
            return Err(Error::invalid(format!(
                "tuple arity {} does not match set arity {}",
                t.arity(),
                self.k
            )));
        }
        if t.max_entry() > self.n {
            return Err(Error::invalid(format!(
                "tuple {t} exceeds ambient n={}",
                self.n
            )));
        }
        Ok(self.members.insert(t))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, t: &KTuple) -> bool {
        self.members.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &KTuple> {
        self.members.iter()
    }

    pub fn is_subset_of(&self, other: &KTupleSet) -> bool {
        self.k == other.k && self.members.is_subset(&other.members)
    }

    /// Lossless view of a k=2 set as an ordered graph over the same `[n]`.
    pub fn to_ordered_graph(&self) -> Result<OrderedGraph> {
        if self.k != 2 {
            return Err(Error::invalid(format!(
                "only k=2 sets convert to ordered graphs, got k={}",
                self.k
            )));
        }
        let mut g = OrderedGraph::empty(self.n);
        for t in self.members.iter() {
            g.insert_edge(t.entries()[0], t.entries()[1])?;
        }
        Ok(g)
    }

    pub fn from_ordered_graph(g: &OrderedGraph) -> KTupleSet {
        let mut members = BTreeSet::new();
        for (i, j) in g.edges() {
            members.insert(KTuple(vec![i, j]));
        }
        KTupleSet {
            n: g.n(),
            k: 2,
            members,
        }
    }
}

/// All shift-adjacent pairs `{x, y}` inside `set`, returned with `x < y`
/// lexicographically.
///
/// For k=2 these are exactly the increasing paths of length two: pairs
/// `(i,j), (j,l)` sharing the middle vertex.
pub fn induced_conflicts(set: &KTupleSet) -> Vec<(KTuple, KTuple)> {
    use std::collections::BTreeMap;

    // join on (k-1)-overlaps: head(y) == tail(x)
    let mut by_head: BTreeMap<&[u32], Vec<&KTuple>> = BTreeMap::new();
    for t in set.iter() {
        by_head
            .entry(&t.entries()[..t.arity() - 1])
            .or_default()
            .push(t);
    }
    let mut out = Vec::new();
    for x in set.iter() {
        if let Some(successors) = by_head.get(&x.entries()[1..]) {
            for &y in successors {
                if x != y {
                    let pair = if x < y {
                        (x.clone(), y.clone())
                    } else {
                        (y.clone(), x.clone())
                    };
                    out.push(pair);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// True iff `candidate` is an independent set inside `ambient`: it must be a
/// subset, and contain no shift-adjacent pair.
pub fn is_independent(ambient: &KTupleSet, candidate: &KTupleSet) -> Result<bool> {
    if !candidate.is_subset_of(ambient) {
        return Err(Error::invalid(
            "candidate independent set is not a subset of the ambient set",
        ));
    }
    Ok(induced_conflicts(candidate).is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(entries: &[u32]) -> KTuple {
        KTuple::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn tuple_validation() {
        assert!(KTuple::new(vec![1, 2, 3]).is_ok());
        assert!(KTuple::new(vec![1, 1]).is_err());
        assert!(KTuple::new(vec![2, 1]).is_err());
        assert!(KTuple::new(vec![0, 1]).is_err());
        assert!(KTuple::new(vec![]).is_err());
    }

    #[test]
    fn shift_adjacency_examples() {
        assert!(shift_adjacent(&t(&[1, 2]), &t(&[2, 3])).unwrap());
        assert!(!shift_adjacent(&t(&[1, 2]), &t(&[1, 2])).unwrap());
        assert!(shift_adjacent(&t(&[1, 2, 3, 4]), &t(&[2, 3, 4, 7])).unwrap());
        assert!(!shift_adjacent(&t(&[1, 3]), &t(&[2, 4])).unwrap());
        assert!(shift_adjacent(&t(&[2, 3]), &t(&[1, 2])).unwrap());
        assert!(matches!(
            shift_adjacent(&t(&[1, 2]), &t(&[1, 2, 3])),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn adjacency_is_symmetric_at_desk_scale() {
        for (n, k) in [(6u32, 2usize), (8, 2), (6, 3), (8, 3)] {
            let all = KTupleSet::full_vertex_set(n, k).unwrap();
            let vertices: Vec<&KTuple> = all.iter().collect();
            for x in &vertices {
                for y in &vertices {
                    assert_eq!(
                        shift_adjacent(x, y).unwrap(),
                        shift_adjacent(y, x).unwrap(),
                        "asymmetry at {x}, {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn conflicts_on_a_path() {
        let g = KTupleSet::from_tuples(4, 2, [t(&[1, 2]), t(&[2, 3]), t(&[3, 4])]).unwrap();
        let conflicts = induced_conflicts(&g);
        assert_eq!(
            conflicts,
            vec![
                (t(&[1, 2]), t(&[2, 3])),
                (t(&[2, 3]), t(&[3, 4])),
            ]
        );
    }

    #[test]
    fn disjoint_pairs_have_no_conflicts() {
        let g = KTupleSet::from_tuples(4, 2, [t(&[1, 3]), t(&[2, 4])]).unwrap();
        assert!(induced_conflicts(&g).is_empty());
    }

    #[test]
    fn complete_bipartite_base_is_conflict_free() {
        // every pair shares no aligned middle vertex: exhaustive pair check
        let m41 =
            KTupleSet::from_tuples(4, 2, [t(&[1, 3]), t(&[1, 4]), t(&[2, 3]), t(&[2, 4])]).unwrap();
        assert!(induced_conflicts(&m41).is_empty());
        let tuples: Vec<&KTuple> = m41.iter().collect();
        for x in &tuples {
            for y in &tuples {
                if x < y {
                    assert!(!shift_adjacent(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn independence_checks() {
        let g = KTupleSet::from_tuples(3, 2, [t(&[1, 2]), t(&[2, 3])]).unwrap();
        let empty = KTupleSet::empty(3, 2).unwrap();
        assert!(is_independent(&g, &empty).unwrap());
        assert!(!is_independent(&g, &g).unwrap());

        let outside = KTupleSet::from_tuples(3, 2, [t(&[1, 3])]).unwrap();
        assert!(is_independent(&g, &outside).is_err());
    }

    #[test]
    fn odd_even_set_is_independent_in_full_shift_graph() {
        let full = KTupleSet::full_vertex_set(6, 2).unwrap();
        let mut odd_even = KTupleSet::empty(6, 2).unwrap();
        for i in 1..=6u32 {
            for j in i + 1..=6 {
                if i % 2 == 1 && j % 2 == 0 {
                    odd_even.insert(t(&[i, j])).unwrap();
                }
            }
        }
        assert!(is_independent(&full, &odd_even).unwrap());
        assert_eq!(odd_even.len(), 6);
    }

    #[test]
    fn full_vertex_set_counts() {
        assert_eq!(KTupleSet::full_vertex_set(4, 2).unwrap().len(), 6);
        assert_eq!(KTupleSet::full_vertex_set(5, 2).unwrap().len(), 10);
        assert_eq!(KTupleSet::full_vertex_set(7, 3).unwrap().len(), 35);
        assert_eq!(KTupleSet::full_vertex_set(9, 4).unwrap().len(), 126);
    }
}
