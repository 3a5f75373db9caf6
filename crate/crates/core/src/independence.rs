//! Independent sets in induced shift subgraphs.
//!
//! The k=2 theory runs on colorings: for a 2-coloring of `[n]` the filter
//! keeping edges with a blue left endpoint and a red right endpoint is always
//! independent, every maximal independent set arises this way, and a random
//! coloring keeps a quarter of any edge set in expectation. This module
//! implements that machinery exactly: the filter, exact maximization over
//! colorings (enumeration + branch and bound), the conditional-expectation
//! derandomization of the quarter bound, the k=4 pattern scheme, the
//! 3-coloring filter free of increasing three-edge paths, and the window
//! density ratio on growth trees.

use num::bigint::BigInt;
use num::rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::rng::SeedStream;
use crate::tree::{tree_window, LabeledTree};
use crate::tuple::{KTuple, KTupleSet};

pub const BLUE: u8 = 0;
pub const RED: u8 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Palette {
    /// {blue, red} encoded 0/1
    TwoBr,
    /// {0, 1}
    TwoBit,
    /// {0, 1, 2}
    Three,
}

impl Palette {
    pub fn size(self) -> u8 {
        match self {
            Palette::TwoBr | Palette::TwoBit => 2,
            Palette::Three => 3,
        }
    }
}

/// A total coloring of `[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    palette: Palette,
    colors: Vec<u8>,
}

impl Coloring {
    pub fn new(palette: Palette, colors: Vec<u8>) -> Result<Self> {
        if colors.iter().any(|&c| c >= palette.size()) {
            return Err(Error::invalid("color out of palette range"));
        }
        Ok(Coloring { palette, colors })
    }

    /// 2-coloring with the given vertices blue and the rest red.
    pub fn from_blues(n: u32, blues: &[u32]) -> Result<Self> {
        let mut colors = vec![RED; n as usize];
        for &v in blues {
            if v == 0 || v > n {
                return Err(Error::invalid(format!("vertex {v} outside [1,{n}]")));
            }
            colors[v as usize - 1] = BLUE;
        }
        Coloring::new(Palette::TwoBr, colors)
    }

    pub fn random(palette: Palette, n: u32, stream: &mut SeedStream) -> Self {
        let size = u64::from(palette.size());
        let colors = (0..n).map(|_| stream.uniform_below(size) as u8).collect();
        Coloring { palette, colors }
    }

    pub fn palette(&self) -> Palette {
        self.palette
    }

    pub fn n(&self) -> u32 {
        self.colors.len() as u32
    }

    /// Color of a 1-based vertex.
    pub fn color(&self, v: u32) -> u8 {
        self.colors[v as usize - 1]
    }

    pub fn blue_count(&self) -> u64 {
        self.colors.iter().filter(|&&c| c == BLUE).count() as u64
    }

    fn check_covers(&self, n: u32) -> Result<()> {
        if self.n() != n {
            return Err(Error::invalid(format!(
                "coloring covers [{}], graph needs [{}]",
                self.n(),
                n
            )));
        }
        Ok(())
    }
}

/// Keeps the edges with blue left endpoint and red right endpoint. The result
/// is independent in the shift graph: a shared middle vertex would need both
/// colors at once.
pub fn color_filter(g: &OrderedGraph, c: &Coloring) -> Result<OrderedGraph> {
    if c.palette() != Palette::TwoBr {
        return Err(Error::invalid("color_filter needs the {blue, red} palette"));
    }
    c.check_covers(g.n())?;
    let mut out = OrderedGraph::empty(g.n());
    for (i, j) in g.edges() {
        if c.color(i) == BLUE && c.color(j) == RED {
            out.insert_edge(i, j)?;
        }
    }
    Ok(out)
}

/// True iff `i` contains no increasing path of length two (and is a subgraph
/// of `g`): the k=2 independence test without tuple-set overhead.
pub fn is_independent_subgraph(g: &OrderedGraph, i: &OrderedGraph) -> Result<bool> {
    if i.n() != g.n() || !i.is_subgraph_of(g) {
        return Err(Error::invalid(
            "candidate is not a subgraph of the ambient graph",
        ));
    }
    let lefts: std::collections::BTreeSet<u32> = i.edges().map(|(a, _)| a).collect();
    Ok(!i.edges().any(|(_, b)| lefts.contains(&b)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlphaMethod {
    ColoringEnum,
    BranchBound,
    BruteSubsets,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaResult {
    pub value: u64,
    pub witness: KTupleSet,
    pub method: AlphaMethod,
    /// false when a search budget expired; `value` is then a lower bound
    pub optimal: bool,
    pub nodes: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub max_nodes: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_nodes: 20_000_000,
        }
    }
}

/// Components enumerated outright rather than branched.
const ENUM_COMPONENT_LIMIT: usize = 16;

/// Exact independence number of the shift subgraph induced by a k=2 edge set,
/// computed as the maximum of |filter(c)| over 2-colorings. Decomposes over
/// connected components; small components are enumerated, larger ones solved
/// by branch and bound with an undecided-edge bound.
pub fn exact_alpha_k2(g: &OrderedGraph, budget: SearchBudget) -> Result<AlphaResult> {
    exact_alpha_k2_forced(g, &[], budget)
}

/// As [`exact_alpha_k2`] but with some vertices pinned to a color. The result
/// is the maximum of |filter(c)| over colorings extending the pins, which is
/// also the largest independent subset containing all edges the pins force.
pub fn exact_alpha_k2_forced(
    g: &OrderedGraph,
    forced: &[(u32, u8)],
    budget: SearchBudget,
) -> Result<AlphaResult> {
    for &(v, col) in forced {
        if v == 0 || v > g.n() {
            return Err(Error::invalid(format!(
                "forced vertex {v} outside [1,{}]",
                g.n()
            )));
        }
        if col != BLUE && col != RED {
            return Err(Error::invalid("forced color must be blue or red"));
        }
    }

    let components = connected_components(g);
    let mut total_value = 0u64;
    let mut total_nodes = 0u64;
    let mut optimal = true;
    let mut used_branching = false;
    let mut witness_edges: Vec<(u32, u32)> = Vec::new();

    for comp in &components {
        let forced_here: Vec<(u32, u8)> = forced
            .iter()
            .copied()
            .filter(|(v, _)| comp.vertices.binary_search(v).is_ok())
            .collect();
        let sub = if comp.vertices.len() <= ENUM_COMPONENT_LIMIT {
            enumerate_component(comp, &forced_here)
        } else {
            used_branching = true;
            branch_component(
                comp,
                &forced_here,
                budget.max_nodes.saturating_sub(total_nodes),
            )
        };
        total_value += sub.value;
        total_nodes += sub.nodes;
        optimal &= sub.optimal;
        for (pos_i, pos_j) in &comp.edges {
            let (i, j) = (comp.vertices[*pos_i], comp.vertices[*pos_j]);
            if sub.colors[*pos_i] == BLUE && sub.colors[*pos_j] == RED {
                witness_edges.push((i, j));
            }
        }
    }

    let witness = KTupleSet::from_tuples(
        g.n(),
        2,
        witness_edges
            .into_iter()
            .map(|(i, j)| KTuple::pair(i, j).expect("edges are increasing")),
    )?;
    debug_assert_eq!(witness.len() as u64, total_value);
    Ok(AlphaResult {
        value: total_value,
        witness,
        method: if used_branching {
            AlphaMethod::BranchBound
        } else {
            AlphaMethod::ColoringEnum
        },
        optimal,
        nodes: total_nodes,
    })
}

struct Component {
    /// ascending vertex labels
    vertices: Vec<u32>,
    /// edges as (position of left endpoint, position of right endpoint)
    edges: Vec<(usize, usize)>,
}

fn connected_components(g: &OrderedGraph) -> Vec<Component> {
    use std::collections::BTreeMap;
    let active = g.active_vertices();
    let mut index: BTreeMap<u32, usize> = BTreeMap::new();
    for (i, &v) in active.iter().enumerate() {
        index.insert(v, i);
    }
    let mut parent: Vec<usize> = (0..active.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut c = x;
        while parent[c] != r {
            let next = parent[c];
            parent[c] = r;
            c = next;
        }
        r
    }
    for (i, j) in g.edges() {
        let (a, b) = (index[&i], index[&j]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent[ra] = rb;
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..active.len() {
        let r = find(&mut parent, i);
        by_root.entry(r).or_default().push(i);
    }
    let mut comps = Vec::new();
    for (_, members) in by_root {
        let vertices: Vec<u32> = members.iter().map(|&i| active[i]).collect();
        let pos: BTreeMap<u32, usize> = vertices
            .iter()
            .enumerate()
            .map(|(p, &v)| (v, p))
            .collect();
        let edges: Vec<(usize, usize)> = g
            .edges()
            .filter_map(|(i, j)| match (pos.get(&i), pos.get(&j)) {
                (Some(&a), Some(&b)) => Some((a, b)),
                _ => None,
            })
            .collect();
        comps.push(Component { vertices, edges });
    }
    comps
}

struct CompSolution {
    value: u64,
    colors: Vec<u8>,
    nodes: u64,
    optimal: bool,
}

fn kept_count(comp: &Component, blue_mask: u64) -> u64 {
    comp.edges
        .iter()
        .filter(|&&(a, b)| blue_mask >> a & 1 == 1 && blue_mask >> b & 1 == 0)
        .count() as u64
}

fn enumerate_component(comp: &Component, forced: &[(u32, u8)]) -> CompSolution {
    let m = comp.vertices.len();
    let mut forced_blue = 0u64;
    let mut forced_red = 0u64;
    for &(v, col) in forced {
        let pos = comp
            .vertices
            .binary_search(&v)
            .expect("forced vertex in component");
        if col == BLUE {
            forced_blue |= 1 << pos;
        } else {
            forced_red |= 1 << pos;
        }
    }
    let mut best = 0u64;
    let mut best_mask = forced_blue;
    let mut first = true;
    for mask in 0u64..1 << m {
        if mask & forced_blue != forced_blue || mask & forced_red != 0 {
            continue;
        }
        let kept = kept_count(comp, mask);
        if first || kept > best {
            best = kept;
            best_mask = mask;
            first = false;
        }
    }
    let colors = (0..m)
        .map(|p| if best_mask >> p & 1 == 1 { BLUE } else { RED })
        .collect();
    CompSolution {
        value: best,
        colors,
        nodes: 1 << m,
        optimal: true,
    }
}

/// Branch and bound over colorings in ascending vertex order. An edge is
/// "alive" until its left endpoint turns red or its right endpoint gets
/// colored; kept + alive bounds every completion of the partial coloring.
fn branch_component(comp: &Component, forced: &[(u32, u8)], max_nodes: u64) -> CompSolution {
    let m = comp.vertices.len();
    let mut forced_color = vec![u8::MAX; m];
    for &(v, col) in forced {
        let pos = comp
            .vertices
            .binary_search(&v)
            .expect("forced vertex in component");
        forced_color[pos] = col;
    }
    let mut backward: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut forward_count = vec![0u64; m];
    for &(a, b) in &comp.edges {
        backward[b].push(a);
        forward_count[a] += 1;
    }

    struct Search<'a> {
        backward: &'a [Vec<usize>],
        forward_count: &'a [u64],
        forced_color: &'a [u8],
        colors: Vec<u8>,
        best: Option<(u64, Vec<u8>)>,
        nodes: u64,
        max_nodes: u64,
        truncated: bool,
    }

    impl Search<'_> {
        fn step(&self, pos: usize, col: u8, kept: u64, alive: u64) -> (u64, u64) {
            let mut kept = kept;
            let mut alive = alive;
            for &u in &self.backward[pos] {
                if self.colors[u] == BLUE {
                    alive -= 1;
                    if col == RED {
                        kept += 1;
                    }
                }
            }
            if col == RED {
                alive -= self.forward_count[pos];
            }
            (kept, alive)
        }

        fn dfs(&mut self, pos: usize, kept: u64, alive: u64) {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.truncated = true;
                return;
            }
            if pos == self.colors.len() {
                match &self.best {
                    Some((b, _)) if *b >= kept => {}
                    _ => self.best = Some((kept, self.colors.clone())),
                }
                return;
            }
            let choices: &[u8] = match self.forced_color[pos] {
                u8::MAX => &[BLUE, RED],
                ref c => std::slice::from_ref(c),
            };
            // explore the higher-bound branch first, blue on ties
            let mut scored: Vec<(u64, u64, u8)> = choices
                .iter()
                .map(|&col| {
                    let (k2, a2) = self.step(pos, col, kept, alive);
                    (k2 + a2, k2, col)
                })
                .collect();
            scored.sort_by(|x, y| y.0.cmp(&x.0).then(x.2.cmp(&y.2)));
            for (bound, _, col) in scored {
                if let Some((b, _)) = &self.best {
                    if bound <= *b {
                        continue;
                    }
                }
                if self.truncated {
                    return;
                }
                let (k2, a2) = self.step(pos, col, kept, alive);
                self.colors[pos] = col;
                self.dfs(pos + 1, k2, a2);
                self.colors[pos] = u8::MAX;
            }
        }
    }

    let mut search = Search {
        backward: &backward,
        forward_count: &forward_count,
        forced_color: &forced_color,
        colors: vec![u8::MAX; m],
        best: None,
        nodes: 0,
        max_nodes,
        truncated: false,
    };
    search.dfs(0, 0, comp.edges.len() as u64);
    let (value, colors) = search.best.unwrap_or((0, vec![RED; m]));
    let colors = colors
        .into_iter()
        .map(|c| if c == u8::MAX { RED } else { c })
        .collect();
    CompSolution {
        value,
        colors,
        nodes: search.nodes,
        optimal: !search.truncated,
    }
}

/// Exact maximum independent set by exhaustive subset scan over the conflict
/// graph; the independent reference route for the coloring-based solver.
pub fn subset_alpha(g: &KTupleSet, limit: usize) -> Result<AlphaResult> {
    let m = g.len();
    if m > limit || m > 25 {
        return Err(Error::limit(format!(
            "subset scan over {m} tuples exceeds the limit of {}",
            limit.min(25)
        )));
    }
    let tuples: Vec<&KTuple> = g.iter().collect();
    let mut conflict = vec![0u64; m];
    for a in 0..m {
        for b in a + 1..m {
            if crate::tuple::shift_adjacent(tuples[a], tuples[b])? {
                conflict[a] |= 1 << b;
                conflict[b] |= 1 << a;
            }
        }
    }
    let mut best_mask = 0u64;
    let mut best = 0u32;
    let mut independent = vec![false; 1usize << m];
    independent[0] = true;
    for mask in 1u64..1 << m {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let ok = independent[rest as usize] && conflict[low] & rest == 0;
        independent[mask as usize] = ok;
        if ok && mask.count_ones() > best {
            best = mask.count_ones();
            best_mask = mask;
        }
    }
    let witness = KTupleSet::from_tuples(
        g.n(),
        g.k(),
        (0..m)
            .filter(|p| best_mask >> p & 1 == 1)
            .map(|p| tuples[p].clone()),
    )?;
    Ok(AlphaResult {
        value: u64::from(best),
        witness,
        method: AlphaMethod::BruteSubsets,
        optimal: true,
        nodes: 1 << m,
    })
}

/// Exact (or budget-limited) maximum independent set in the conflict graph of
/// an arbitrary k-tuple set: branch and bound on include/exclude of the
/// highest-degree remaining tuple.
pub fn exact_alpha_general(g: &KTupleSet, budget: SearchBudget) -> Result<AlphaResult> {
    let m = g.len();
    if m == 0 {
        return Ok(AlphaResult {
            value: 0,
            witness: KTupleSet::empty(g.n(), g.k())?,
            method: AlphaMethod::BranchBound,
            optimal: true,
            nodes: 0,
        });
    }
    if m > 4096 {
        return Err(Error::limit(
            "conflict graph beyond desk scale (4096 tuples)",
        ));
    }
    let tuples: Vec<&KTuple> = g.iter().collect();
    let words = m.div_ceil(64);
    let mut conflict = vec![vec![0u64; words]; m];
    for a in 0..m {
        for b in a + 1..m {
            if crate::tuple::shift_adjacent(tuples[a], tuples[b])? {
                conflict[a][b / 64] |= 1 << (b % 64);
                conflict[b][a / 64] |= 1 << (a % 64);
            }
        }
    }

    struct Mis<'a> {
        conflict: &'a [Vec<u64>],
        chosen: Vec<usize>,
        best: Vec<usize>,
        nodes: u64,
        max_nodes: u64,
        truncated: bool,
    }

    impl Mis<'_> {
        fn dfs(&mut self, candidates: &mut Vec<u64>) {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.truncated = true;
                return;
            }
            let remaining: u64 = candidates.iter().map(|w| u64::from(w.count_ones())).sum();
            if self.chosen.len() + remaining as usize <= self.best.len() {
                return;
            }
            if remaining == 0 {
                if self.chosen.len() > self.best.len() {
                    self.best = self.chosen.clone();
                }
                return;
            }
            // pivot: highest conflict degree within candidates, smallest index on ties
            let mut pivot = usize::MAX;
            let mut pivot_deg = 0u64;
            for (w, &word) in candidates.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let v = w * 64 + b;
                    let deg: u64 = self.conflict[v]
                        .iter()
                        .zip(candidates.iter())
                        .map(|(c, cand)| u64::from((c & cand).count_ones()))
                        .sum();
                    if pivot == usize::MAX || deg > pivot_deg {
                        pivot = v;
                        pivot_deg = deg;
                    }
                }
            }
            // include pivot
            let mut included: Vec<u64> = candidates
                .iter()
                .zip(self.conflict[pivot].iter())
                .map(|(cand, conf)| cand & !conf)
                .collect();
            included[pivot / 64] &= !(1 << (pivot % 64));
            self.chosen.push(pivot);
            self.dfs(&mut included);
            self.chosen.pop();
            if self.truncated {
                return;
            }
            // exclude pivot
            candidates[pivot / 64] &= !(1 << (pivot % 64));
            self.dfs(candidates);
        }
    }

    let mut candidates = vec![u64::MAX; words];
    let tail = m % 64;
    if tail != 0 {
        candidates[words - 1] = (1u64 << tail) - 1;
    }
    let mut mis = Mis {
        conflict: &conflict,
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        max_nodes: budget.max_nodes,
        truncated: false,
    };
    mis.dfs(&mut candidates);

    let mut picked: Vec<usize> = mis.best.clone();
    picked.sort_unstable();
    let witness = KTupleSet::from_tuples(g.n(), g.k(), picked.iter().map(|&p| tuples[p].clone()))?;
    Ok(AlphaResult {
        value: mis.best.len() as u64,
        witness,
        method: AlphaMethod::BranchBound,
        optimal: !mis.truncated,
        nodes: mis.nodes,
    })
}

/// Derandomizes the random-coloring quarter bound by the method of
/// conditional expectations: vertices are fixed in increasing order, each
/// time keeping the color that maximizes the expected number of kept edges
/// (exact arithmetic in quarter-units), ties resolved toward blue. The result
/// is an independent subset of size at least ceil(|G|/4).
pub fn derandomized_quarter(g: &OrderedGraph) -> Result<OrderedGraph> {
    if g.is_empty() {
        return Err(Error::invalid("derandomization needs a nonempty edge set"));
    }
    let n = g.n() as usize;
    let edges: Vec<(u32, u32)> = g.edges().collect();
    // colors: u8::MAX = undecided
    let mut colors = vec![u8::MAX; n + 1];

    // expectation of |filter| scaled by 4: an edge contributes 4 if kept for
    // sure, 2 if one endpoint is fixed compatibly, 1 if both free, 0 if dead
    let expectation4 = |colors: &[u8]| -> u64 {
        let mut total = 0u64;
        for &(i, j) in &edges {
            let ci = colors[i as usize];
            let cj = colors[j as usize];
            total += match (ci, cj) {
                (u8::MAX, u8::MAX) => 1,
                (BLUE, u8::MAX) => 2,
                (u8::MAX, RED) => 2,
                (BLUE, RED) => 4,
                _ => 0,
            };
        }
        total
    };

    for v in 1..=n {
        colors[v] = BLUE;
        let with_blue = expectation4(&colors);
        colors[v] = RED;
        let with_red = expectation4(&colors);
        colors[v] = if with_blue >= with_red { BLUE } else { RED };
    }

    let coloring = Coloring::new(Palette::TwoBr, colors[1..].to_vec())?;
    let filtered = color_filter(g, &coloring)?;
    debug_assert!(filtered.edge_count() as u64 * 4 >= g.edge_count() as u64);
    Ok(filtered)
}

/// Color patterns (read left to right over a 4-tuple) kept by the k=4 scheme:
/// 1000, 1110 and x01y for x, y in {0,1}. No pattern's tail extends to
/// another's head, so kept tuples are pairwise non-adjacent; 6 of the 16
/// patterns survive, a 3/8 density.
pub const K4_KEPT_PATTERNS: [u8; 6] = [0b1000, 0b1110, 0b0010, 0b0011, 0b1010, 0b1011];

pub fn k4_pattern_of(t: &KTuple, c: &Coloring) -> u8 {
    let e = t.entries();
    c.color(e[0]) << 3 | c.color(e[1]) << 2 | c.color(e[2]) << 1 | c.color(e[3])
}

/// Keeps the 4-tuples whose color pattern lies in [`K4_KEPT_PATTERNS`];
/// independent in the k=4 shift graph for every coloring.
pub fn k4_pattern_filter(g: &KTupleSet, c: &Coloring) -> Result<KTupleSet> {
    if g.k() != 4 {
        return Err(Error::invalid(format!(
            "pattern filter needs k=4, got k={}",
            g.k()
        )));
    }
    if c.palette() != Palette::TwoBit {
        return Err(Error::invalid("pattern filter needs the {0,1} palette"));
    }
    c.check_covers(g.n())?;
    let kept = g
        .iter()
        .filter(|t| K4_KEPT_PATTERNS.contains(&k4_pattern_of(t, c)))
        .cloned();
    KTupleSet::from_tuples(g.n(), 4, kept)
}

/// Keeps edges whose colors strictly increase. With three colors a kept chain
/// has at most two edges, so the output has no increasing path of length
/// three; a uniform coloring keeps each edge with probability 1/3.
pub fn p3_free_filter(g: &OrderedGraph, c: &Coloring) -> Result<OrderedGraph> {
    if c.palette() != Palette::Three {
        return Err(Error::invalid("p3 filter needs the {0,1,2} palette"));
    }
    c.check_covers(g.n())?;
    let mut out = OrderedGraph::empty(g.n());
    for (i, j) in g.edges() {
        if c.color(i) < c.color(j) {
            out.insert_edge(i, j)?;
        }
    }
    Ok(out)
}

/// True iff `g` contains an increasing path of length three (three edges
/// chained through increasing vertices).
pub fn has_increasing_p3(g: &OrderedGraph) -> bool {
    use std::collections::BTreeSet;
    let lefts: BTreeSet<u32> = g.edges().map(|(a, _)| a).collect();
    let rights: BTreeSet<u32> = g.edges().map(|(_, b)| b).collect();
    // an edge (j,k) is the middle of a P3 iff j closes some edge and k opens one
    g.edges().any(|(j, k)| rights.contains(&j) && lefts.contains(&k))
}

/// The density ratio |I[W]| / |G[W]| for the window anchored at a tree edge
/// of an independent set, together with the two bounds the growth rule
/// guarantees: |I[W]| <= 2^-j |N+(child)| and |G[W]| >= |N+(child)|.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WindowRatio {
    pub edge: (u32, u32),
    pub level: u32,
    pub w: u32,
    pub i_window: u64,
    pub g_window: u64,
    pub child_degree: u64,
    #[serde(with = "crate::ratio::serde_ratio")]
    pub ratio: BigRational,
    pub i_bound_ok: bool,
    pub g_bound_ok: bool,
}

impl WindowRatio {
    pub fn bounds_hold(&self) -> bool {
        self.i_bound_ok && self.g_bound_ok
    }
}

pub fn window_ratio(
    tree: &LabeledTree,
    independent: &OrderedGraph,
    edge: (u32, u32),
) -> Result<WindowRatio> {
    let tree_graph = tree.to_ordered_graph();
    if !is_independent_subgraph(&tree_graph, independent)? {
        return Err(Error::invalid(
            "candidate set is not independent in the tree",
        ));
    }
    if !independent.contains_edge(edge.0, edge.1) {
        return Err(Error::invalid(format!(
            "edge ({},{}) is not in the independent set",
            edge.0, edge.1
        )));
    }
    let window = tree_window(tree, edge.0, edge.1)?;
    let i_window = independent
        .edges()
        .filter(|&(_, j)| j <= window.w)
        .count() as u64;
    let g_window = window.window_graph.edge_count() as u64;
    let level = window.child_level;
    // i_window <= 2^-level * child_degree, compared in integers
    let i_bound_ok = i_window << level <= window.child_degree;
    let g_bound_ok = g_window >= window.child_degree;
    Ok(WindowRatio {
        edge,
        level,
        w: window.w,
        i_window,
        g_window,
        child_degree: window.child_degree,
        ratio: BigRational::new(BigInt::from(i_window), BigInt::from(g_window)),
        i_bound_ok,
        g_bound_ok,
    })
}
