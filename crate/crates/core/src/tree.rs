//! Leveled, interval-ordered rooted trees with doubly-exponential growth.
//!
//! Vertices are labeled level by level, left to right, so labels increase
//! along every root-to-leaf path and each vertex's children occupy a
//! contiguous label interval following the order of their parents. Every
//! internal non-root vertex at level `j` receives
//! `max(1, 2^j * sum of child counts over all label-smaller vertices) + slack`
//! children, which realizes the growth inequality the window-density argument
//! needs with equality when `slack = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;

/// Hard cap on the number of tree vertices; growth is doubly exponential so
/// anything past desk scale explodes immediately.
pub const TREE_VERTEX_GUARD: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeParams {
    /// number of levels below the root (leaves live at this level)
    pub levels: u32,
    pub root_children: u64,
    pub slack: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthEntry {
    pub vertex: u32,
    pub level: u32,
    /// minimum child count demanded by the growth rule
    pub required: u64,
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct ChildInterval {
    vertex: u32,
    first: u32,
    last: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct TreeRepr {
    params: TreeParams,
    level_sizes: Vec<u64>,
    children: Vec<ChildInterval>,
    growth_log: Vec<GrowthEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TreeRepr", into = "TreeRepr")]
pub struct LabeledTree {
    params: TreeParams,
    level_sizes: Vec<u64>,
    /// child label interval per vertex index (1-based; None for leaves)
    children: Vec<Option<(u32, u32)>>,
    /// parent label per vertex index (None for the root)
    parents: Vec<Option<u32>>,
    /// cumulative child counts: cum[v] = sum of |N+(u)| over u <= v
    cum_children: Vec<u64>,
    growth_log: Vec<GrowthEntry>,
}

impl LabeledTree {
    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn vertex_count(&self) -> u32 {
        (self.children.len() - 1) as u32
    }

    pub fn edge_count(&self) -> u64 {
        u64::from(self.vertex_count()) - 1
    }

    pub fn level_sizes(&self) -> &[u64] {
        &self.level_sizes
    }

    pub fn growth_log(&self) -> &[GrowthEntry] {
        &self.growth_log
    }

    pub fn level_of(&self, v: u32) -> Result<u32> {
        self.check_vertex(v)?;
        let mut label = u64::from(v);
        for (j, &size) in self.level_sizes.iter().enumerate() {
            if label <= size {
                return Ok(j as u32);
            }
            label -= size;
        }
        unreachable!("vertex bounds already checked")
    }

    pub fn parent_of(&self, v: u32) -> Result<Option<u32>> {
        self.check_vertex(v)?;
        Ok(self.parents[v as usize])
    }

    /// Child label interval, or None for leaves.
    pub fn children_of(&self, v: u32) -> Result<Option<(u32, u32)>> {
        self.check_vertex(v)?;
        Ok(self.children[v as usize])
    }

    pub fn child_count(&self, v: u32) -> Result<u64> {
        Ok(match self.children_of(v)? {
            Some((first, last)) => u64::from(last - first) + 1,
            None => 0,
        })
    }

    /// Sum of child counts over all vertices with label strictly below `v`.
    pub fn prefix_child_sum(&self, v: u32) -> Result<u64> {
        self.check_vertex(v)?;
        Ok(self.cum_children[v as usize - 1])
    }

    pub fn is_internal(&self, v: u32) -> Result<bool> {
        Ok(self.children_of(v)?.is_some())
    }

    /// Tree edges (parent, child) whose child sits at `level` and is internal.
    pub fn internal_edges_at_level(&self, level: u32) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for v in 2..=self.vertex_count() {
            if self.children[v as usize].is_some()
                && self.level_of(v).expect("valid vertex") == level
            {
                let parent = self.parents[v as usize].expect("non-root has a parent");
                out.push((parent, v));
            }
        }
        out
    }

    /// The tree as an ordered graph: edges (parent, child), parent < child.
    pub fn to_ordered_graph(&self) -> OrderedGraph {
        let n = self.vertex_count();
        let mut g = OrderedGraph::empty(n);
        for v in 2..=n {
            let p = self.parents[v as usize].expect("non-root has a parent");
            g.insert_edge(p, v).expect("parent labels precede children");
        }
        g
    }

    fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.vertex_count() {
            return Err(Error::invalid(format!(
                "vertex {v} outside 1..={}",
                self.vertex_count()
            )));
        }
        Ok(())
    }
}

/// Builds the tree truncated at `levels`, with the root's child count as an
/// explicit override and every other internal vertex following the growth
/// rule exactly (plus `slack`).
pub fn build_tree(levels: u32, root_children: u64, slack: u64) -> Result<LabeledTree> {
    if levels < 1 {
        return Err(Error::invalid("tree needs at least one level"));
    }
    if root_children < 1 {
        return Err(Error::invalid("root must have at least one child"));
    }
    if levels > 40 {
        return Err(Error::limit("level count exceeds the growth guard"));
    }

    let mut children: Vec<Option<(u32, u32)>> = vec![None, None]; // index 0 unused, root = 1
    let mut parents: Vec<Option<u32>> = vec![None, None];
    let mut level_sizes: Vec<u64> = vec![1];
    let mut growth_log: Vec<GrowthEntry> = Vec::new();

    let mut next_label: u64 = 2;
    let mut prefix_sum: u64 = 0;
    let mut level_first: u64 = 1; // first label of the level being expanded

    for j in 0..levels {
        let level_size = level_sizes[j as usize];
        let level_last = level_first + level_size - 1;
        let mut assigned_this_level: u64 = 0;
        for v in level_first..=level_last {
            let required = if v == 1 {
                0
            } else {
                (1u64 << j)
                    .checked_mul(prefix_sum)
                    .ok_or_else(|| Error::limit("growth rule overflowed"))?
            };
            let count = if v == 1 {
                root_children
            } else {
                required.max(1) + slack
            };
            let first = next_label;
            let last = next_label + count - 1;
            if last > TREE_VERTEX_GUARD {
                return Err(Error::limit(format!(
                    "tree exceeds {TREE_VERTEX_GUARD} vertices at level {}",
                    j + 1
                )));
            }
            debug_assert!(count >= required, "growth rule violated during build");
            growth_log.push(GrowthEntry {
                vertex: v as u32,
                level: j,
                required,
                actual: count,
            });
            children[v as usize] = Some((first as u32, last as u32));
            for c in first..=last {
                debug_assert_eq!(c as usize, children.len());
                children.push(None);
                parents.push(Some(v as u32));
            }
            prefix_sum += count;
            next_label = last + 1;
            assigned_this_level += count;
        }
        level_sizes.push(assigned_this_level);
        level_first = level_last + 1;
    }

    let mut cum_children = vec![0u64; children.len()];
    for v in 1..children.len() {
        let count = match children[v] {
            Some((f, l)) => u64::from(l - f) + 1,
            None => 0,
        };
        cum_children[v] = cum_children[v - 1] + count;
    }

    Ok(LabeledTree {
        params: TreeParams {
            levels,
            root_children,
            slack,
        },
        level_sizes,
        children,
        parents,
        cum_children,
        growth_log,
    })
}

/// The window anchored at a tree edge (parent, child) with `child` internal:
/// `W = {1..w}` for `w` the largest child of `child`, together with the tree
/// edges induced on `W`.
#[derive(Clone, Debug)]
pub struct TreeWindow {
    pub w: u32,
    pub window_graph: OrderedGraph,
    pub child: u32,
    pub child_level: u32,
    pub child_degree: u64,
    /// sum of child counts over vertices strictly below `child`
    pub prefix_below_child: u64,
}

pub fn tree_window(tree: &LabeledTree, parent: u32, child: u32) -> Result<TreeWindow> {
    match tree.parent_of(child)? {
        Some(p) if p == parent => {}
        _ => {
            return Err(Error::invalid(format!(
                "({parent},{child}) is not a parent-child tree edge"
            )))
        }
    }
    let (_, last) = tree
        .children_of(child)?
        .ok_or_else(|| Error::invalid(format!("child {child} is a leaf, window undefined")))?;
    let w = last;
    let window_graph = tree.to_ordered_graph().induced_prefix(w);
    Ok(TreeWindow {
        w,
        window_graph,
        child,
        child_level: tree.level_of(child)?,
        child_degree: tree.child_count(child)?,
        prefix_below_child: tree.prefix_child_sum(child)?,
    })
}

impl From<LabeledTree> for TreeRepr {
    fn from(tree: LabeledTree) -> Self {
        let children = (1..=tree.vertex_count())
            .filter_map(|v| {
                tree.children[v as usize].map(|(first, last)| ChildInterval {
                    vertex: v,
                    first,
                    last,
                })
            })
            .collect();
        TreeRepr {
            params: tree.params,
            level_sizes: tree.level_sizes,
            children,
            growth_log: tree.growth_log,
        }
    }
}

impl TryFrom<TreeRepr> for LabeledTree {
    type Error = Error;

    fn try_from(repr: TreeRepr) -> Result<Self> {
        let total: u64 = repr.level_sizes.iter().sum();
        if total == 0 || total > TREE_VERTEX_GUARD {
            return Err(Error::invalid("bad vertex count in tree file"));
        }
        let total = total as usize;
        let mut children: Vec<Option<(u32, u32)>> = vec![None; total + 1];
        let mut parents: Vec<Option<u32>> = vec![None; total + 1];
        for iv in &repr.children {
            let (v, first, last) = (iv.vertex as usize, iv.first, iv.last);
            let well_formed =
                v >= 1 && v <= total && first <= last && (last as usize) <= total && first > iv.vertex;
            if !well_formed {
                return Err(Error::invalid(format!(
                    "bad child interval for vertex {}",
                    iv.vertex
                )));
            }
            children[v] = Some((first, last));
            for c in first..=last {
                if parents[c as usize].is_some() {
                    return Err(Error::invalid(format!("vertex {c} has two parents")));
                }
                parents[c as usize] = Some(iv.vertex);
            }
        }
        for v in 2..=total {
            if parents[v].is_none() {
                return Err(Error::invalid(format!("vertex {v} is disconnected")));
            }
        }
        let mut cum_children = vec![0u64; total + 1];
        for v in 1..=total {
            let count = match children[v] {
                Some((f, l)) => u64::from(l - f) + 1,
                None => 0,
            };
            cum_children[v] = cum_children[v - 1] + count;
        }
        Ok(LabeledTree {
            params: repr.params,
            level_sizes: repr.level_sizes,
            children,
            parents,
            cum_children,
            growth_log: repr.growth_log,
        })
    }
}
