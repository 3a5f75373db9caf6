//! Deterministic construction of the extremal graph families.
//!
//! The recursive family on `[n]` at depth `d` is the union of two label-shifted
//! copies of the depth `d-1` family on the halves plus a pseudorandom bipartite
//! block across the halves. Blocks are sampled without replacement from the
//! complete bipartite edge list, certified against the discrepancy budget
//! `eps * n^2 / 2^(d+2)`, and resampled (up to a limit) when certification
//! fails; the worst certified deviation is recorded as the measured epsilon-hat
//! that downstream bound checks substitute for the target epsilon.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::ratio::serde_ratio;
use crate::rng::{derive_seed, SeedDomain, SeedStream};

/// Largest block ambient `n` for which exhaustive certification (all
/// `(2^(n/2)-1)^2` nonempty subset pairs) is allowed.
pub const EXHAUSTIVE_GUARD_N: u32 = 24;
/// Largest block ambient `n` for interval-mode certification.
pub const INTERVALS_GUARD_N: u32 = 256;
/// Subset pairs drawn by sampled-mode certification inside `build_mnd`.
pub const DEFAULT_SAMPLED_PAIRS: u64 = 2000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockParams {
    pub n: u32,
    pub d: u32,
    #[serde(with = "serde_ratio")]
    pub epsilon: BigRational,
    pub seed: u64,
}

impl BlockParams {
    pub fn new(n: u32, d: u32, epsilon: BigRational, seed: u64) -> Result<Self> {
        let p = BlockParams {
            n,
            d,
            epsilon,
            seed,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::invalid("depth d must be at least 1"));
        }
        if self.n == 0 || self.n % 2 != 0 {
            return Err(Error::invalid(format!("n={} must be even", self.n)));
        }
        if self.d >= 32 || self.n % (1u32 << self.d) != 0 {
            return Err(Error::invalid(format!(
                "2^d must divide n (n={}, d={})",
                self.n, self.d
            )));
        }
        if self.epsilon <= BigRational::zero() || self.epsilon >= BigRational::one() {
            return Err(Error::invalid("epsilon must lie in (0,1)"));
        }
        // edge budget n^2/2^(d+1) must be a positive integer within n^2/4
        let n2 = u64::from(self.n) * u64::from(self.n);
        if n2 % (1u64 << (self.d + 1)) != 0 {
            return Err(Error::invalid("edge budget n^2/2^(d+1) is not an integer"));
        }
        Ok(())
    }

    pub fn edge_budget(&self) -> u64 {
        let n2 = u64::from(self.n) * u64::from(self.n);
        n2 >> (self.d + 1)
    }
}

/// The complete balanced bipartite graph: edges `(i, j)` with
/// `1 <= i <= n/2 < j <= n`.
pub fn build_m1(n: u32) -> Result<OrderedGraph> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::invalid(format!("n={n} must be even and positive")));
    }
    let half = n / 2;
    let mut g = OrderedGraph::empty(n);
    for i in 1..=half {
        for j in half + 1..=n {
            g.insert_edge(i, j)?;
        }
    }
    Ok(g)
}

/// Samples the bipartite block: exactly `n^2/2^(d+1)` edges chosen without
/// replacement from the complete bipartite graph between the halves, by
/// rank-based selection over the lexicographically ordered edge list.
pub fn sample_block(params: &BlockParams) -> Result<OrderedGraph> {
    params.validate()?;
    let half = u64::from(params.n / 2);
    let population = half * half;
    let budget = params.edge_budget();
    let mut stream = SeedStream::new(params.seed);
    let ranks = stream.sample_without_replacement(population, budget);
    let mut g = OrderedGraph::empty(params.n);
    for rank in ranks {
        let i = (rank / half) as u32 + 1;
        let j = (rank % half) as u32 + params.n / 2 + 1;
        g.insert_edge(i, j)?;
    }
    Ok(g)
}

/// Family of `(X, Y)` pairs a certificate covers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertifyMode {
    /// All nonempty `X x Y`; exact truth of the discrepancy property.
    Exhaustive,
    /// All pairs of nonempty label intervals.
    Intervals,
    /// `count` uniformly random nonempty subset pairs from a seeded stream.
    Sampled { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscrepancyCertificate {
    pub mode: CertifyMode,
    /// max over checked (X,Y) of |e(X,Y) - |X||Y|/2^(d-1)|
    #[serde(with = "serde_ratio")]
    pub worst_deviation: BigRational,
    /// eps * n^2 / 2^(d+2)
    #[serde(with = "serde_ratio")]
    pub budget: BigRational,
    pub pairs_checked: u64,
    pub passed: bool,
}

struct BipartiteBlock {
    n: u32,
    half: u32,
    /// neighbor mask over S for each right vertex (index j - n/2 - 1)
    cols: Vec<u64>,
    edges: Vec<(u32, u32)>,
}

impl BipartiteBlock {
    fn from_graph(block: &OrderedGraph) -> Result<Self> {
        let n = block.n();
        if n == 0 || n % 2 != 0 {
            return Err(Error::invalid("block ambient n must be even"));
        }
        let half = n / 2;
        let mut cols = vec![0u64; half as usize];
        let mut edges = Vec::with_capacity(block.edge_count());
        for (i, j) in block.edges() {
            if !(i <= half && half < j) {
                return Err(Error::invalid(format!(
                    "edge ({i},{j}) does not cross the bipartition at n/2 = {half}"
                )));
            }
            if half <= 64 {
                cols[(j - half - 1) as usize] |= 1u64 << (i - 1);
            }
            edges.push((i, j));
        }
        Ok(BipartiteBlock {
            n,
            half,
            cols,
            edges,
        })
    }
}

fn deviation_budget(n: u32, d: u32, epsilon: &BigRational) -> BigRational {
    let n2 = BigInt::from(u64::from(n) * u64::from(n));
    epsilon * BigRational::new(n2, BigInt::from(1u64 << (d + 2)))
}

/// Certifies the discrepancy property of a bipartite block for a given depth
/// and budget `eps`: checks `|e(X,Y) - |X||Y|/2^(d-1)| <= eps n^2/2^(d+2)`
/// over the family selected by `mode`, reporting the worst deviation seen.
pub fn certify_discrepancy(
    block: &OrderedGraph,
    d: u32,
    epsilon: &BigRational,
    mode: &CertifyMode,
) -> Result<DiscrepancyCertificate> {
    if d == 0 {
        return Err(Error::invalid("depth d must be at least 1"));
    }
    if epsilon.is_negative() {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    let bip = BipartiteBlock::from_graph(block)?;
    let scale: u64 = 1 << (d - 1);

    let (max_scaled, pairs_checked) = match mode {
        CertifyMode::Exhaustive => {
            if bip.n > EXHAUSTIVE_GUARD_N {
                return Err(Error::limit(format!(
                    "exhaustive certification guarded to n <= {EXHAUSTIVE_GUARD_N}, got n = {}",
                    bip.n
                )));
            }
            exhaustive_worst(&bip, scale)
        }
        CertifyMode::Intervals => {
            if bip.n > INTERVALS_GUARD_N {
                return Err(Error::limit(format!(
                    "interval certification guarded to n <= {INTERVALS_GUARD_N}, got n = {}",
                    bip.n
                )));
            }
            intervals_worst(&bip, scale)
        }
        CertifyMode::Sampled { count, seed } => sampled_worst(&bip, scale, *count, *seed),
    };

    let worst_deviation = BigRational::new(BigInt::from(max_scaled), BigInt::from(scale));
    let budget = deviation_budget(bip.n, d, epsilon);
    let passed = worst_deviation <= budget;
    Ok(DiscrepancyCertificate {
        mode: mode.clone(),
        worst_deviation,
        budget,
        pairs_checked,
        passed,
    })
}

/// Worst deviation scaled by `2^(d-1)`, over all nonempty subset pairs.
/// For each X the counts e(X, Y) are filled by subset DP over Y.
fn exhaustive_worst(bip: &BipartiteBlock, scale: u64) -> (u64, u64) {
    let s = bip.half as usize;
    let size = 1usize << s;
    let mut popcount = vec![0u8; size];
    for m in 1..size {
        popcount[m] = popcount[m & (m - 1)] + 1;
    }
    let mut deg = vec![0u64; s];
    let mut e = vec![0u64; size];
    let mut max_scaled = 0u64;
    for x in 1..size as u64 {
        let px = u64::from(popcount[x as usize]);
        for (idx, col) in bip.cols.iter().enumerate() {
            deg[idx] = (col & x).count_ones() as u64;
        }
        for y in 1..size {
            let low = y.trailing_zeros() as usize;
            e[y] = e[y & (y - 1)] + deg[low];
            let expected = px * u64::from(popcount[y]);
            let scaled = e[y] * scale;
            let dev = scaled.abs_diff(expected);
            if dev > max_scaled {
                max_scaled = dev;
            }
        }
    }
    let nonempty = (size as u64) - 1;
    (max_scaled, nonempty * nonempty)
}

fn intervals_worst(bip: &BipartiteBlock, scale: u64) -> (u64, u64) {
    let s = bip.half as usize;
    // prefix[i][j] = #edges (a,b) with a <= i, b-half <= j
    let mut prefix = vec![vec![0u64; s + 1]; s + 1];
    for &(i, j) in &bip.edges {
        prefix[i as usize][(j - bip.half) as usize] += 1;
    }
    for i in 1..=s {
        for j in 1..=s {
            prefix[i][j] += prefix[i - 1][j] + prefix[i][j - 1] - prefix[i - 1][j - 1];
        }
    }
    let rect = |a: usize, b: usize, c: usize, e: usize| {
        prefix[b][e] + prefix[a - 1][c - 1] - prefix[a - 1][e] - prefix[b][c - 1]
    };
    let mut max_scaled = 0u64;
    let mut pairs = 0u64;
    for a in 1..=s {
        for b in a..=s {
            let px = (b - a + 1) as u64;
            for c in 1..=s {
                for e in c..=s {
                    let py = (e - c + 1) as u64;
                    let count = rect(a, b, c, e);
                    let dev = (count * scale).abs_diff(px * py);
                    if dev > max_scaled {
                        max_scaled = dev;
                    }
                    pairs += 1;
                }
            }
        }
    }
    (max_scaled, pairs)
}

fn sampled_worst(bip: &BipartiteBlock, scale: u64, count: u64, seed: u64) -> (u64, u64) {
    let s = bip.half as usize;
    let words = s.div_ceil(64);
    let mut stream = SeedStream::new(seed);
    let draw_mask = |stream: &mut SeedStream| loop {
        let mut mask = vec![0u64; words];
        let mut nonzero = false;
        for (w, slot) in mask.iter_mut().enumerate() {
            let mut bits = stream.next_u64();
            let remaining = s - w * 64;
            if remaining < 64 {
                bits &= (1u64 << remaining) - 1;
            }
            nonzero |= bits != 0;
            *slot = bits;
        }
        if nonzero {
            return mask;
        }
    };
    let member = |mask: &[u64], v: u32| mask[(v as usize - 1) / 64] >> ((v as usize - 1) % 64) & 1 == 1;
    let mut max_scaled = 0u64;
    for _ in 0..count {
        let x = draw_mask(&mut stream);
        let y = draw_mask(&mut stream);
        let px: u64 = x.iter().map(|w| u64::from(w.count_ones())).sum();
        let py: u64 = y.iter().map(|w| u64::from(w.count_ones())).sum();
        let mut e = 0u64;
        for &(i, j) in &bip.edges {
            if member(&x, i) && member(&y, j - bip.half) {
                e += 1;
            }
        }
        let dev = (e * scale).abs_diff(px * py);
        if dev > max_scaled {
            max_scaled = dev;
        }
    }
    (max_scaled, count)
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

/// Lexicographic unranking of a k-combination of {1..n}.
fn unrank_combination(n: u64, k: u64, mut rank: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    let mut next = 1u64;
    let mut remaining = k;
    while remaining > 0 {
        // count combinations starting with `next`
        let with_next = binomial_u64(n - next, remaining - 1).expect("guarded size");
        if rank < with_next {
            out.push(next as u32);
            remaining -= 1;
        } else {
            rank -= with_next;
        }
        next += 1;
    }
    out
}

/// A uniformly random `count`-subset of `V(Sh_n^k)`, deterministic in the
/// seed: ranks are sampled without replacement and unranked lexicographically.
pub fn random_ktuple_set(n: u32, k: usize, count: u64, seed: u64) -> Result<crate::tuple::KTupleSet> {
    if k < 2 || (k as u64) > u64::from(n) {
        return Err(Error::invalid(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    if n > 64 {
        return Err(Error::limit("random tuple sets guarded to n <= 64"));
    }
    let population = binomial_u64(u64::from(n), k as u64)
        .ok_or_else(|| Error::limit("tuple universe overflows"))?;
    if count > population {
        return Err(Error::invalid(format!(
            "count={count} exceeds C({n},{k}) = {population}"
        )));
    }
    let mut stream = SeedStream::new(derive_seed(seed, SeedDomain::RandomFamily, k as u64));
    let ranks = stream.sample_without_replacement(population, count);
    let tuples = ranks
        .into_iter()
        .map(|r| crate::tuple::KTuple::new(unrank_combination(u64::from(n), k as u64, r)))
        .collect::<Result<Vec<_>>>()?;
    crate::tuple::KTupleSet::from_tuples(n, k, tuples)
}

/// A uniformly random ordered graph with exactly `count` edges.
pub fn random_ordered_graph(n: u32, count: u64, seed: u64) -> Result<OrderedGraph> {
    random_ktuple_set(n, 2, count, seed)?.to_ordered_graph()
}

/// One certified block occurrence inside a recursive instance. Mirrored
/// recursion nodes share a block up to label shift, so their certificates are
/// identical; each node is still listed with its own label offset.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockRecord {
    pub level: u32,
    /// label offset of the recursion node owning this block
    pub offset: u32,
    pub block_n: u32,
    pub seed: u64,
    /// sampling attempts consumed (1 = first sample certified)
    pub attempts: u32,
    pub certificate: DiscrepancyCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelEpsilon {
    pub level: u32,
    /// worst certified deviation normalized by n_level^2 / 2^(level+2)
    #[serde(with = "serde_ratio")]
    pub epsilon_hat: BigRational,
    /// true when every node at this level was certified exhaustively
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MndParams {
    pub n: u32,
    pub d: u32,
    #[serde(with = "serde_ratio")]
    pub epsilon: BigRational,
    pub seed: u64,
    pub resample_limit: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MndInstance {
    pub params: MndParams,
    pub graph: OrderedGraph,
    pub blocks: Vec<BlockRecord>,
    pub measured_epsilons: Vec<LevelEpsilon>,
}

impl MndInstance {
    /// d * n^2 / 2^(d+1), the exact edge count of a valid instance.
    pub fn expected_edge_count(n: u32, d: u32) -> u64 {
        u64::from(d) * u64::from(n) * u64::from(n) >> (d + 1)
    }

    /// Measured epsilon-hat at a level (0 when the level is exact-bipartite).
    pub fn epsilon_hat_at(&self, level: u32) -> Option<&BigRational> {
        self.measured_epsilons
            .iter()
            .find(|e| e.level == level)
            .map(|e| &e.epsilon_hat)
    }

    /// Worst measured epsilon-hat across all levels.
    pub fn epsilon_hat_max(&self) -> BigRational {
        self.measured_epsilons
            .iter()
            .map(|e| e.epsilon_hat.clone())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn all_levels_exact(&self) -> bool {
        self.measured_epsilons.iter().all(|e| e.exact)
    }

    /// The induced subgraph on the first half, which equals the depth d-1
    /// instance on n/2 vertices by construction.
    pub fn half_graph(&self) -> OrderedGraph {
        self.graph.induced_prefix(self.params.n / 2)
    }

    /// Rebuilds the half instance (same root seed, so identical to both
    /// halves of this instance up to the label shift).
    pub fn half_instance(&self) -> Result<MndInstance> {
        if self.params.d < 2 {
            return Err(Error::invalid("depth-1 instances have no half instance"));
        }
        let params = BlockParams {
            n: self.params.n / 2,
            d: self.params.d - 1,
            epsilon: self.params.epsilon.clone(),
            seed: self.params.seed,
        };
        build_mnd(&params, self.params.resample_limit)
    }
}

/// Builds the recursive instance: depth-1 levels are complete bipartite,
/// deeper levels add one certified block per recursion node. Both halves are
/// built from the same root seed, which forces them to be label-shift
/// identical (the strongest reading of the isomorphic-halves property).
pub fn build_mnd(params: &BlockParams, resample_limit: u32) -> Result<MndInstance> {
    params.validate()?;
    let (graph, blocks, eps_by_level) = build_rec(
        params.n,
        params.d,
        params.seed,
        &params.epsilon,
        resample_limit,
    )?;
    debug_assert_eq!(
        graph.edge_count() as u64,
        MndInstance::expected_edge_count(params.n, params.d)
    );
    let mut measured: Vec<LevelEpsilon> = Vec::new();
    // level 1 is complete bipartite: the discrepancy property holds exactly
    measured.push(LevelEpsilon {
        level: 1,
        epsilon_hat: BigRational::zero(),
        exact: true,
    });
    for (level, (eps_hat, exact)) in eps_by_level {
        measured.push(LevelEpsilon {
            level,
            epsilon_hat: eps_hat,
            exact,
        });
    }
    Ok(MndInstance {
        params: MndParams {
            n: params.n,
            d: params.d,
            epsilon: params.epsilon.clone(),
            seed: params.seed,
            resample_limit,
        },
        graph,
        blocks,
        measured_epsilons: measured,
    })
}

type LevelEps = BTreeMap<u32, (BigRational, bool)>;

fn build_rec(
    n: u32,
    d: u32,
    root_seed: u64,
    epsilon: &BigRational,
    resample_limit: u32,
) -> Result<(OrderedGraph, Vec<BlockRecord>, LevelEps)> {
    if d == 1 {
        return Ok((build_m1(n)?, Vec::new(), BTreeMap::new()));
    }
    let half = n / 2;
    let (half_graph, half_blocks, mut eps_by_level) =
        build_rec(half, d - 1, root_seed, epsilon, resample_limit)?;

    let (block, record) = certified_block(n, d, root_seed, epsilon, resample_limit)?;
    let eps_hat = &record.certificate.worst_deviation
        / deviation_budget(n, d, &BigRational::one());
    let exact = matches!(record.certificate.mode, CertifyMode::Exhaustive);
    eps_by_level.insert(d, (eps_hat, exact));

    // assemble over ambient n: lower half, shifted upper half, crossing block
    let mut assembled = OrderedGraph::empty(n);
    for (i, j) in half_graph.edges() {
        assembled.insert_edge(i, j)?;
    }
    for (i, j) in half_graph.shifted(half).edges() {
        assembled.insert_edge(i, j)?;
    }
    let assembled = assembled.union(&block)?;

    // per-node records: this node first, then the lower half's, then the
    // upper half's with shifted offsets
    let mut blocks = Vec::with_capacity(1 + 2 * half_blocks.len());
    blocks.push(record);
    for r in &half_blocks {
        blocks.push(r.clone());
    }
    for r in &half_blocks {
        let mut shifted = r.clone();
        shifted.offset += half;
        blocks.push(shifted);
    }
    Ok((assembled, blocks, eps_by_level))
}

fn certified_block(
    n: u32,
    d: u32,
    root_seed: u64,
    epsilon: &BigRational,
    resample_limit: u32,
) -> Result<(OrderedGraph, BlockRecord)> {
    let mut best: Option<(OrderedGraph, BlockRecord)> = None;
    for attempt in 0..=resample_limit {
        let seed = if attempt == 0 {
            derive_seed(root_seed, SeedDomain::Block, u64::from(d))
        } else {
            derive_seed(
                root_seed,
                SeedDomain::Resample,
                u64::from(d) << 32 | u64::from(attempt),
            )
        };
        let block_params = BlockParams {
            n,
            d,
            epsilon: epsilon.clone(),
            seed,
        };
        let block = sample_block(&block_params)?;
        let mode = if n <= EXHAUSTIVE_GUARD_N {
            CertifyMode::Exhaustive
        } else {
            CertifyMode::Sampled {
                count: DEFAULT_SAMPLED_PAIRS,
                seed: derive_seed(
                    root_seed,
                    SeedDomain::CertifySample,
                    u64::from(d) << 32 | u64::from(attempt),
                ),
            }
        };
        let certificate = certify_discrepancy(&block, d, epsilon, &mode)?;
        let record = BlockRecord {
            level: d,
            offset: 0,
            block_n: n,
            seed,
            attempts: attempt + 1,
            certificate,
        };
        let passed = record.certificate.passed;
        let better = match &best {
            None => true,
            Some((_, incumbent)) => {
                record.certificate.worst_deviation < incumbent.certificate.worst_deviation
            }
        };
        if better {
            best = Some((block, record));
        }
        if passed {
            break;
        }
    }
    Ok(best.expect("at least one sampling attempt"))
}
