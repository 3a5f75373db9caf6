//! Instance-level verification of the density bounds.
//!
//! `f_exact` is the exact blue-count-constrained maximum filter density,
//! scaled by the depth; the closed form pins it at depth 1, the recurrence
//! relates an instance to its halves through the certified block, and the
//! endpoint bound caps it by a quadratic plus a harmonic (or logarithmic)
//! term. Everything is exact rational arithmetic except `ln` and `exp`,
//! which are evaluated in floats and bracketed by a documented 1e-12 margin
//! so that no verdict can flip on float noise.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::MndInstance;
use crate::error::{Error, Result};
use crate::graph::OrderedGraph;
use crate::independence::{Coloring, SearchBudget, BLUE, RED};
use crate::ratio::{from_int, serde_ratio};
use crate::rng::SeedStream;

/// Bracket applied to float-evaluated transcendentals (`ln d`).
pub const LOG_TOLERANCE: f64 = 1e-12;

/// Ambient size up to which blue-count-constrained maxima are enumerated.
const F_ENUM_N_LIMIT: u32 = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FValue {
    pub n: u32,
    pub d: u32,
    /// number of blue vertices the maximization is constrained to
    pub beta: u64,
    /// d * max_c |filter(c)| / |G| over colorings with exactly beta blues
    #[serde(with = "serde_ratio")]
    pub value: BigRational,
    pub max_kept: u64,
    pub argmax_coloring: Coloring,
    pub optimal: bool,
    pub nodes: u64,
}

/// Exact `f` value of an instance at a given blue count.
pub fn f_exact(instance: &MndInstance, beta: u64, budget: SearchBudget) -> Result<FValue> {
    f_exact_graph(&instance.graph, instance.params.d, beta, budget)
}

/// Exact `f` value of an arbitrary edge set playing the role of a depth-d
/// instance (used for the halves inside the recurrence).
pub fn f_exact_graph(g: &OrderedGraph, d: u32, beta: u64, budget: SearchBudget) -> Result<FValue> {
    let n = g.n();
    if beta > u64::from(n) {
        return Err(Error::invalid(format!("beta={beta} exceeds n={n}")));
    }
    if g.is_empty() {
        return Err(Error::invalid("f value needs a nonempty edge set"));
    }
    let (max_kept, blues, nodes, optimal) = max_kept_with_blue_count(g, beta, budget)?;
    let value =
        from_int(d) * BigRational::new(BigInt::from(max_kept), BigInt::from(g.edge_count()));
    Ok(FValue {
        n,
        d,
        beta,
        value,
        max_kept,
        argmax_coloring: Coloring::from_blues(n, &blues)?,
        optimal,
        nodes,
    })
}

/// Maximum number of kept edges over colorings with exactly `beta` blue
/// vertices. Enumerates all blue subsets for small `n` (Gosper's hack over
/// bitmasks, first maximum in ascending mask order), branch and bound beyond.
fn max_kept_with_blue_count(
    g: &OrderedGraph,
    beta: u64,
    budget: SearchBudget,
) -> Result<(u64, Vec<u32>, u64, bool)> {
    let n = g.n();
    if n <= F_ENUM_N_LIMIT {
        let (kept, mask, nodes) = enumerate_blue_subsets(g, beta);
        let blues: Vec<u32> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect();
        return Ok((kept, blues, nodes, true));
    }
    branch_blue_count(g, beta, budget)
}

fn right_adjacency_masks(g: &OrderedGraph) -> Vec<u64> {
    let n = g.n() as usize;
    let mut right = vec![0u64; n + 1];
    for (i, j) in g.edges() {
        right[i as usize] |= 1u64 << (j - 1);
    }
    right
}

fn kept_for_mask(right: &[u64], blue_mask: u64) -> u64 {
    let red_mask = !blue_mask;
    let mut kept = 0u64;
    let mut bits = blue_mask;
    while bits != 0 {
        let v = bits.trailing_zeros() as usize + 1;
        bits &= bits - 1;
        kept += u64::from((right[v] & red_mask).count_ones());
    }
    kept
}

fn enumerate_blue_subsets(g: &OrderedGraph, beta: u64) -> (u64, u64, u64) {
    let n = g.n();
    let right = right_adjacency_masks(g);
    if beta == 0 {
        return (0, 0, 1);
    }
    // Gosper's hack: all n-bit masks with exactly beta bits, ascending
    let mut mask: u64 = (1u64 << beta) - 1;
    let limit: u64 = 1u64 << n;
    let mut best = 0u64;
    let mut best_mask = mask;
    let mut nodes = 0u64;
    while mask < limit {
        nodes += 1;
        let kept = kept_for_mask(&right, mask);
        if kept > best {
            best = kept;
            best_mask = mask;
        }
        let c = mask & mask.wrapping_neg();
        let r = match mask.checked_add(c) {
            Some(r) => r,
            None => break,
        };
        mask = r | (((mask ^ r) / c) >> 2);
    }
    (best, best_mask, nodes)
}

const UNDECIDED: u8 = 2;

/// Branch and bound over vertices in ascending order with a blue quota;
/// bound = kept + undecided edges, with quota feasibility pruning.
fn branch_blue_count(
    g: &OrderedGraph,
    beta: u64,
    budget: SearchBudget,
) -> Result<(u64, Vec<u32>, u64, bool)> {
    let n = g.n() as usize;
    let edges: Vec<(u32, u32)> = g.edges().collect();
    let mut backward: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    let mut forward_count = vec![0u64; n + 1];
    for &(i, j) in &edges {
        backward[j as usize].push(i);
        forward_count[i as usize] += 1;
    }

    struct Search<'a> {
        n: usize,
        beta: u64,
        backward: &'a [Vec<u32>],
        forward_count: &'a [u64],
        colors: Vec<u8>,
        best: Option<(u64, Vec<u8>)>,
        nodes: u64,
        max_nodes: u64,
        truncated: bool,
    }

    impl Search<'_> {
        fn dfs(&mut self, v: usize, blues: u64, kept: u64, alive: u64) {
            self.nodes += 1;
            if self.nodes > self.max_nodes {
                self.truncated = true;
                return;
            }
            if v > self.n {
                if blues == self.beta {
                    match &self.best {
                        Some((b, _)) if *b >= kept => {}
                        _ => self.best = Some((kept, self.colors.clone())),
                    }
                }
                return;
            }
            let remaining = (self.n - v + 1) as u64;
            if blues > self.beta || blues + remaining < self.beta {
                return;
            }
            if let Some((b, _)) = &self.best {
                if kept + alive <= *b {
                    return;
                }
            }
            for col in [BLUE, RED] {
                if col == BLUE && blues == self.beta {
                    continue;
                }
                let mut kept2 = kept;
                let mut alive2 = alive;
                for &u in &self.backward[v] {
                    if self.colors[u as usize] == BLUE {
                        alive2 -= 1;
                        if col == RED {
                            kept2 += 1;
                        }
                    }
                }
                if col == RED {
                    alive2 -= self.forward_count[v];
                }
                self.colors[v] = col;
                self.dfs(v + 1, blues + u64::from(col == BLUE), kept2, alive2);
                self.colors[v] = UNDECIDED;
                if self.truncated {
                    return;
                }
            }
        }
    }

    let mut search = Search {
        n,
        beta,
        backward: &backward,
        forward_count: &forward_count,
        colors: vec![UNDECIDED; n + 1],
        best: None,
        nodes: 0,
        max_nodes: budget.max_nodes,
        truncated: false,
    };
    search.dfs(1, 0, 0, edges.len() as u64);
    let (value, colors) = search
        .best
        .ok_or_else(|| Error::limit("budget too small to reach any feasible coloring"))?;
    let blues: Vec<u32> = (1..=n as u32)
        .filter(|&v| colors[v as usize] == BLUE)
        .collect();
    Ok((value, blues, search.nodes, !search.truncated))
}

/// The depth-1 closed form: 2a for a in [0, 1/2], else 2 - 2a.
pub fn f1_closed_form(alpha: &BigRational) -> Result<BigRational> {
    if alpha < &BigRational::zero() || alpha > &BigRational::one() {
        return Err(Error::invalid(format!("alpha={alpha} outside [0,1]")));
    }
    let two = from_int(2);
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    Ok(if alpha <= &half {
        &two * alpha
    } else {
        &two - &two * alpha
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundVariant {
    /// (d+3)(a-a^2) + ln(d)/4 + d*eps/2
    LogTerm,
    /// (d+3)(a-a^2) + (1/4) sum_{i=3}^{d+1} 1/i + d*eps/2; at most the log
    /// variant for every d >= 1
    Harmonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogRounding {
    Down,
    Up,
}

/// The endpoint bound on `f` values. The harmonic variant is exact; the log
/// variant brackets `ln d` by [`LOG_TOLERANCE`] in the requested direction
/// (d = 1 is exact since ln 1 = 0).
pub fn claim_bound(
    d: u32,
    alpha: &BigRational,
    epsilon: &BigRational,
    variant: BoundVariant,
    rounding: LogRounding,
) -> Result<BigRational> {
    if d == 0 {
        return Err(Error::invalid("depth d must be at least 1"));
    }
    if alpha < &BigRational::zero() || alpha > &BigRational::one() {
        return Err(Error::invalid(format!("alpha={alpha} outside [0,1]")));
    }
    if epsilon.is_negative() {
        return Err(Error::invalid("epsilon must be nonnegative"));
    }
    let quad = from_int(d + 3) * (alpha - alpha * alpha);
    let eps_term = from_int(d) * epsilon / from_int(2);
    let middle = match variant {
        BoundVariant::Harmonic => {
            let mut sum = BigRational::zero();
            for i in 3..=u64::from(d) + 1 {
                sum += BigRational::new(BigInt::one(), BigInt::from(i));
            }
            sum / from_int(4)
        }
        BoundVariant::LogTerm => {
            if d == 1 {
                BigRational::zero()
            } else {
                let ln = f64::from(d).ln();
                let bracketed = match rounding {
                    LogRounding::Down => ln - LOG_TOLERANCE,
                    LogRounding::Up => ln + LOG_TOLERANCE,
                };
                BigRational::from_float(bracketed)
                    .ok_or_else(|| Error::invalid("ln(d) not finite"))?
                    / from_int(4)
            }
        }
    };
    Ok(quad + middle + eps_term)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceRow {
    /// blue count assigned to the lower half
    pub beta_lower: u64,
    #[serde(with = "serde_ratio")]
    pub x: BigRational,
    #[serde(with = "serde_ratio")]
    pub f_lower: BigRational,
    #[serde(with = "serde_ratio")]
    pub f_upper: BigRational,
    #[serde(with = "serde_ratio")]
    pub term: BigRational,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub n: u32,
    pub d: u32,
    pub beta: u64,
    #[serde(with = "serde_ratio")]
    pub lhs: BigRational,
    #[serde(with = "serde_ratio")]
    pub rhs: BigRational,
    #[serde(with = "serde_ratio")]
    pub slack: BigRational,
    pub holds: bool,
    /// measured top-level deviation ratio substituted for epsilon
    #[serde(with = "serde_ratio")]
    pub epsilon_hat: BigRational,
    /// true when every certificate feeding epsilon-hat was exhaustive
    pub epsilon_exact: bool,
    pub all_optimal: bool,
    pub rows: Vec<RecurrenceRow>,
}

/// Verifies the half/half/block recurrence on a concrete instance with its
/// measured epsilon-hat: f_d(beta) must not exceed the maximum over feasible
/// lower-half blue counts of the averaged half values plus the crossing term.
pub fn check_recurrence(
    instance: &MndInstance,
    beta: u64,
    budget: SearchBudget,
) -> Result<RecurrenceReport> {
    let n = instance.params.n;
    let d = instance.params.d;
    if d < 2 {
        return Err(Error::invalid("recurrence needs depth d >= 2"));
    }
    if beta > u64::from(n) {
        return Err(Error::invalid(format!("beta={beta} exceeds n={n}")));
    }
    let half = u64::from(n / 2);
    let alpha = BigRational::new(BigInt::from(beta), BigInt::from(n));

    let lhs_value = f_exact(instance, beta, budget)?;
    let half_graph = instance.half_graph();
    let epsilon_hat = instance
        .epsilon_hat_at(d)
        .cloned()
        .unwrap_or_else(BigRational::zero);

    let lo = beta.saturating_sub(half);
    let hi = half.min(beta);
    let mut rows = Vec::new();
    let mut rhs: Option<BigRational> = None;
    let mut all_optimal = lhs_value.optimal;
    let mut cache: std::collections::BTreeMap<u64, FValue> = std::collections::BTreeMap::new();
    for beta_lower in lo..=hi {
        let beta_upper = beta - beta_lower;
        for b in [beta_lower, beta_upper] {
            if !cache.contains_key(&b) {
                let fv = f_exact_graph(&half_graph, d - 1, b, budget)?;
                all_optimal &= fv.optimal;
                cache.insert(b, fv);
            }
        }
        let f_lower = cache[&beta_lower].value.clone();
        let f_upper = cache[&beta_upper].value.clone();
        let x = BigRational::new(BigInt::from(2 * beta_lower), BigInt::from(n));
        // x (1 - 2 alpha + x) + eps/2
        let crossing =
            &x * (BigRational::one() - from_int(2) * &alpha + &x) + &epsilon_hat / from_int(2);
        let term = (&f_lower + &f_upper) / from_int(2) + crossing;
        if rhs.as_ref().map_or(true, |r| term > *r) {
            rhs = Some(term.clone());
        }
        rows.push(RecurrenceRow {
            beta_lower,
            x,
            f_lower,
            f_upper,
            term,
        });
    }
    let rhs = rhs.ok_or_else(|| Error::invalid("empty feasible range for the recurrence"))?;
    let slack = &rhs - &lhs_value.value;
    Ok(RecurrenceReport {
        n,
        d,
        beta,
        lhs: lhs_value.value,
        holds: !slack.is_negative(),
        slack,
        rhs,
        epsilon_hat,
        epsilon_exact: instance.all_levels_exact(),
        all_optimal,
        rows,
    })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClaimBoundCheck {
    pub beta: u64,
    #[serde(with = "serde_ratio")]
    pub alpha: BigRational,
    #[serde(with = "serde_ratio")]
    pub f_value: BigRational,
    /// exact harmonic-variant bound with the instance's worst epsilon-hat
    #[serde(with = "serde_ratio")]
    pub harmonic_bound: BigRational,
    /// log-variant bound with ln d rounded down
    #[serde(with = "serde_ratio")]
    pub log_bound_lower: BigRational,
    pub f_le_harmonic: bool,
    pub harmonic_le_log: bool,
    #[serde(with = "serde_ratio")]
    pub epsilon_used: BigRational,
    pub epsilon_exact: bool,
    pub optimal: bool,
}

impl ClaimBoundCheck {
    pub fn holds(&self) -> bool {
        self.f_le_harmonic && self.harmonic_le_log
    }
}

/// The endpoint chain on a concrete instance: exact f value at `beta`, capped
/// by the harmonic bound (with the worst measured epsilon-hat across levels),
/// itself capped by the log-variant bound.
pub fn check_claim_bound(
    instance: &MndInstance,
    beta: u64,
    budget: SearchBudget,
) -> Result<ClaimBoundCheck> {
    let n = instance.params.n;
    let d = instance.params.d;
    let alpha = BigRational::new(BigInt::from(beta), BigInt::from(n));
    let eps = instance.epsilon_hat_max();
    let fv = f_exact(instance, beta, budget)?;
    let harmonic = claim_bound(d, &alpha, &eps, BoundVariant::Harmonic, LogRounding::Down)?;
    let log_lower = claim_bound(d, &alpha, &eps, BoundVariant::LogTerm, LogRounding::Down)?;
    Ok(ClaimBoundCheck {
        beta,
        alpha,
        f_le_harmonic: fv.value <= harmonic,
        harmonic_le_log: harmonic <= log_lower,
        f_value: fv.value,
        harmonic_bound: harmonic,
        log_bound_lower: log_lower,
        epsilon_used: eps,
        epsilon_exact: instance.all_levels_exact(),
        optimal: fv.optimal,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBoundInput {
    /// population size N
    pub population: u64,
    /// size m of the random subset drawn without replacement
    pub draws: u64,
    /// number k of marked items; Z counts marked items drawn, mu = mk/N
    pub marked: u64,
    #[serde(with = "serde_ratio")]
    pub t: BigRational,
}

impl TailBoundInput {
    pub fn new(population: u64, draws: u64, marked: u64, t: BigRational) -> Result<Self> {
        if population == 0 || draws > population || marked > population {
            return Err(Error::invalid(format!(
                "need draws, marked <= population, got ({draws}, {marked}, {population})"
            )));
        }
        if t.is_negative() {
            return Err(Error::invalid("t must be nonnegative"));
        }
        Ok(TailBoundInput {
            population,
            draws,
            marked,
            t,
        })
    }

    pub fn mu(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.draws * self.marked),
            BigInt::from(self.population),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailBound {
    /// 2 exp(-t^2 / (2 (mu + t/3)))
    pub raw: f64,
    /// raw capped at 1 for reporting
    pub reported: f64,
    /// mu = t = 0: the bound degenerates to the trivial constant 2
    pub degenerate: bool,
}

/// The concentration bound for the deviation of a hypergeometric variable
/// from its mean.
pub fn hypergeometric_tail_bound(input: &TailBoundInput) -> Result<TailBound> {
    let mu = input.mu();
    let t = &input.t;
    if mu.is_zero() && t.is_zero() {
        return Ok(TailBound {
            raw: 2.0,
            reported: 1.0,
            degenerate: true,
        });
    }
    let t_f = crate::ratio::to_f64(t);
    let mu_f = crate::ratio::to_f64(&mu);
    let raw = 2.0 * (-(t_f * t_f) / (2.0 * (mu_f + t_f / 3.0))).exp();
    Ok(TailBound {
        raw,
        reported: raw.min(1.0),
        degenerate: false,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub trials: u64,
    pub exceed_count: u64,
    /// fraction of trials with |Z - mu| > t
    pub exceed_probability: f64,
    pub mean: f64,
    pub seed: u64,
}

/// Monte-Carlo estimate of P(|Z - mu| > t) for Z hypergeometric, by seeded
/// simulation of sampling without replacement. The exceedance test is exact:
/// the acceptable integer window for Z is derived from the rational mu and t.
pub fn monte_carlo_tail(input: &TailBoundInput, trials: u64, seed: u64) -> Result<TailEstimate> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if input.population > 10_000_000 {
        return Err(Error::limit("population beyond desk scale"));
    }
    let mu = input.mu();
    // |Z - mu| > t  <=>  Z outside [mu - t, mu + t]
    let lower = &mu - &input.t;
    let upper = &mu + &input.t;
    let z_ok = |z: u64| {
        let z = from_int(z);
        z >= lower && z <= upper
    };

    // simulate the smaller side as the draw count; H(N, m, k) = H(N, k, m)
    let (draws, marked) = if input.draws <= input.marked {
        (input.draws, input.marked)
    } else {
        (input.marked, input.draws)
    };
    let n = input.population;
    let mut perm: Vec<u64> = (0..n).collect();
    let mut stream = SeedStream::new(seed);
    let mut exceed = 0u64;
    let mut total_z = 0u64;
    for _ in 0..trials {
        let mut z = 0u64;
        for t_idx in 0..draws {
            let pick = t_idx + stream.uniform_below(n - t_idx);
            perm.swap(t_idx as usize, pick as usize);
            if perm[t_idx as usize] < marked {
                z += 1;
            }
        }
        total_z += z;
        if !z_ok(z) {
            exceed += 1;
        }
        for (i, slot) in perm.iter_mut().enumerate() {
            *slot = i as u64;
        }
    }
    Ok(TailEstimate {
        trials,
        exceed_count: exceed,
        exceed_probability: exceed as f64 / trials as f64,
        mean: total_z as f64 / trials as f64,
        seed,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReferenceBounds {
    pub k: usize,
    /// 1/2 - 1/k for even k, 1/2 - 1/(2k) for odd k
    #[serde(with = "serde_ratio")]
    pub hereditary_lower_bound: BigRational,
    /// the sharper constant known for k = 2 (1/4) and k = 4 (3/8)
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub improved_lower_bound: Option<String>,
}

/// Reference lower-bound constants attached to reports for context; these are
/// quoted values, not computed claims.
pub fn report_reference_bounds(k: usize) -> Result<ReferenceBounds> {
    if k < 2 {
        return Err(Error::invalid("reference bounds start at k = 2"));
    }
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let bound = if k % 2 == 0 {
        &half - BigRational::new(BigInt::one(), BigInt::from(k as u64))
    } else {
        &half - BigRational::new(BigInt::one(), BigInt::from(2 * k as u64))
    };
    let improved = match k {
        2 => Some(crate::ratio::format_ratio(&crate::ratio::ratio(1, 4))),
        4 => Some(crate::ratio::format_ratio(&crate::ratio::ratio(3, 8))),
        _ => None,
    };
    Ok(ReferenceBounds {
        k,
        hereditary_lower_bound: bound,
        improved_lower_bound: improved,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{build_mnd, BlockParams};
    use crate::ratio::ratio;

    fn mnd(n: u32, d: u32, seed: u64) -> MndInstance {
        build_mnd(&BlockParams::new(n, d, ratio(1, 2), seed).unwrap(), 4).unwrap()
    }

    fn m1_instance(n: u32) -> MndInstance {
        mnd(n, 1, 0)
    }

    #[test]
    fn f_on_complete_bipartite_hits_the_closed_form_peak() {
        for n in [4u32, 8, 16] {
            let inst = m1_instance(n);
            let fv = f_exact(&inst, u64::from(n / 2), SearchBudget::default()).unwrap();
            assert_eq!(fv.value, ratio(1, 1), "peak at n={n}");
            let fv = f_exact(&inst, 0, SearchBudget::default()).unwrap();
            assert_eq!(fv.value, ratio(0, 1));
        }
    }

    #[test]
    fn f_matches_closed_form_for_all_beta() {
        for n in [4u32, 8, 16] {
            let inst = m1_instance(n);
            for beta in 0..=u64::from(n) {
                let fv = f_exact(&inst, beta, SearchBudget::default()).unwrap();
                let alpha = BigRational::new(BigInt::from(beta), BigInt::from(n));
                assert_eq!(
                    fv.value,
                    f1_closed_form(&alpha).unwrap(),
                    "n={n} beta={beta}"
                );
            }
        }
    }

    /// Naive per-coloring recount over explicit blue subsets.
    fn f_oracle(g: &OrderedGraph, beta: u64) -> u64 {
        fn rec(
            start: u32,
            n: u32,
            k: u64,
            cur: &mut Vec<u32>,
            g: &OrderedGraph,
            best: &mut u64,
        ) {
            if cur.len() as u64 == k {
                let kept = g
                    .edges()
                    .filter(|&(i, j)| cur.contains(&i) && !cur.contains(&j))
                    .count() as u64;
                *best = (*best).max(kept);
                return;
            }
            for v in start..=n {
                cur.push(v);
                rec(v + 1, n, k, cur, g, best);
                cur.pop();
            }
        }
        let mut best = 0u64;
        rec(1, g.n(), beta, &mut Vec::new(), g, &mut best);
        best
    }

    #[test]
    fn f_matches_direct_enumeration_oracle_on_m82() {
        let inst = mnd(8, 2, 7);
        for beta in 0..=8u64 {
            let fv = f_exact(&inst, beta, SearchBudget::default()).unwrap();
            assert_eq!(fv.max_kept, f_oracle(&inst.graph, beta), "beta={beta}");
            // the recorded coloring reproduces the value
            assert_eq!(fv.argmax_coloring.blue_count(), beta);
            let refilter =
                crate::independence::color_filter(&inst.graph, &fv.argmax_coloring).unwrap();
            assert_eq!(refilter.edge_count() as u64, fv.max_kept);
        }
    }

    #[test]
    fn branch_path_agrees_with_enumeration() {
        let inst = mnd(8, 2, 3);
        for beta in [0u64, 3, 4, 8] {
            let (kept_enum, _, _, _) =
                max_kept_with_blue_count(&inst.graph, beta, SearchBudget::default()).unwrap();
            let (kept_bb, blues, _, optimal) =
                branch_blue_count(&inst.graph, beta, SearchBudget::default()).unwrap();
            assert!(optimal);
            assert_eq!(kept_enum, kept_bb, "beta={beta}");
            assert_eq!(blues.len() as u64, beta);
        }
    }

    #[test]
    fn closed_form_values() {
        assert_eq!(f1_closed_form(&ratio(1, 2)).unwrap(), ratio(1, 1));
        assert_eq!(f1_closed_form(&ratio(0, 1)).unwrap(), ratio(0, 1));
        assert_eq!(f1_closed_form(&ratio(1, 1)).unwrap(), ratio(0, 1));
        assert_eq!(f1_closed_form(&ratio(1, 4)).unwrap(), ratio(1, 2));
        assert!(f1_closed_form(&ratio(3, 2)).is_err());
        assert!(f1_closed_form(&ratio(-1, 4)).is_err());
    }

    #[test]
    fn closed_form_below_parabola() {
        // f1(a) <= 4(a - a^2) across a fine grid
        for i in 0..=1000u64 {
            let a = BigRational::new(BigInt::from(i), BigInt::from(1000u64));
            let f = f1_closed_form(&a).unwrap();
            let parabola = from_int(4) * (&a - &a * &a);
            assert!(f <= parabola, "violated at a = {i}/1000");
        }
    }

    #[test]
    fn claim_bound_examples() {
        // d=1, a=1/2, eps=0: bound is exactly 1 in both variants
        let one = ratio(1, 1);
        let b = claim_bound(
            1,
            &ratio(1, 2),
            &ratio(0, 1),
            BoundVariant::LogTerm,
            LogRounding::Down,
        )
        .unwrap();
        assert_eq!(b, one);
        let b = claim_bound(
            1,
            &ratio(1, 2),
            &ratio(0, 1),
            BoundVariant::Harmonic,
            LogRounding::Down,
        )
        .unwrap();
        assert_eq!(b, one);
        // d=2 harmonic: 5/4 + (1/4)(1/3) = 4/3
        let b = claim_bound(
            2,
            &ratio(1, 2),
            &ratio(0, 1),
            BoundVariant::Harmonic,
            LogRounding::Down,
        )
        .unwrap();
        assert_eq!(b, ratio(4, 3));
    }

    #[test]
    fn harmonic_variant_never_exceeds_log_variant() {
        let alpha = ratio(1, 3);
        let eps = ratio(1, 10);
        let mut harmonic_sum = BigRational::zero();
        for d in 1..=1000u32 {
            if d >= 2 {
                harmonic_sum += BigRational::new(BigInt::one(), BigInt::from(u64::from(d) + 1));
            }
            let harmonic =
                claim_bound(d, &alpha, &eps, BoundVariant::Harmonic, LogRounding::Down).unwrap();
            let log_down =
                claim_bound(d, &alpha, &eps, BoundVariant::LogTerm, LogRounding::Down).unwrap();
            assert!(harmonic <= log_down, "harmonic exceeds log variant at d={d}");
            // cross-check the harmonic sum claim_bound used
            let rebuilt = from_int(d + 3) * (&alpha - &alpha * &alpha)
                + &harmonic_sum / from_int(4)
                + from_int(d) * &eps / from_int(2);
            assert_eq!(harmonic, rebuilt, "harmonic sum drift at d={d}");
        }
    }

    #[test]
    fn recurrence_holds_on_certified_instances() {
        for (n, d, seed) in [(8u32, 2u32, 7u64), (16, 2, 7), (16, 3, 7)] {
            let inst = mnd(n, d, seed);
            for beta in [0u64, u64::from(n) / 2, u64::from(n) * 3 / 4] {
                let report = check_recurrence(&inst, beta, SearchBudget::default()).unwrap();
                assert!(
                    report.holds,
                    "recurrence fails at n={n} d={d} beta={beta}: slack={}",
                    report.slack
                );
                assert!(report.all_optimal);
                assert!(!report.rows.is_empty());
            }
        }
    }

    #[test]
    fn recurrence_rejects_depth_one() {
        let inst = m1_instance(8);
        assert!(check_recurrence(&inst, 4, SearchBudget::default()).is_err());
    }

    #[test]
    fn claim_chain_holds_on_certified_instances() {
        for (n, d, seed) in [(8u32, 2u32, 7u64), (16, 2, 7), (16, 3, 7)] {
            let inst = mnd(n, d, seed);
            assert!(inst.all_levels_exact());
            for beta in 0..=u64::from(n) {
                let check = check_claim_bound(&inst, beta, SearchBudget::default()).unwrap();
                assert!(
                    check.holds(),
                    "claim chain fails at n={n} d={d} beta={beta}: f={} harmonic={}",
                    check.f_value,
                    check.harmonic_bound
                );
            }
        }
    }

    #[test]
    fn tail_bound_examples() {
        // t = 0: raw bound is the trivial 2
        let input = TailBoundInput::new(100, 50, 10, ratio(0, 1)).unwrap();
        let b = hypergeometric_tail_bound(&input).unwrap();
        assert_eq!(b.raw, 2.0);
        assert!(!b.degenerate);

        // N=100, m=50, k=10, t=5: mu=5, raw = 2 exp(-25/(2*(5+5/3)))
        let input = TailBoundInput::new(100, 50, 10, ratio(5, 1)).unwrap();
        let b = hypergeometric_tail_bound(&input).unwrap();
        assert!((b.raw - 0.30671).abs() < 1e-4, "raw = {}", b.raw);

        // degenerate mu = t = 0
        let input = TailBoundInput::new(100, 0, 10, ratio(0, 1)).unwrap();
        let b = hypergeometric_tail_bound(&input).unwrap();
        assert!(b.degenerate);
        assert_eq!(b.raw, 2.0);
    }

    #[test]
    fn tail_bound_monotone_in_t() {
        let mut prev = f64::INFINITY;
        for t in 0..20i64 {
            let input = TailBoundInput::new(100, 50, 10, ratio(t, 2)).unwrap();
            let b = hypergeometric_tail_bound(&input).unwrap();
            assert!(b.raw <= prev);
            prev = b.raw;
        }
    }

    #[test]
    fn monte_carlo_impossible_deviation() {
        let input = TailBoundInput::new(100, 50, 10, ratio(11, 1)).unwrap();
        let est = monte_carlo_tail(&input, 2000, 1).unwrap();
        assert_eq!(est.exceed_count, 0);
    }

    #[test]
    fn monte_carlo_respects_the_bound_and_the_mean() {
        let input = TailBoundInput::new(100, 50, 10, ratio(5, 1)).unwrap();
        let est = monte_carlo_tail(&input, 20_000, 42).unwrap();
        let bound = hypergeometric_tail_bound(&input).unwrap();
        let p = est.exceed_probability;
        let sigma = (p * (1.0 - p) / est.trials as f64).sqrt();
        assert!(p <= bound.raw + 3.0 * sigma, "p = {p}, bound = {}", bound.raw);
        let mu = crate::ratio::to_f64(&input.mu());
        assert!(
            (est.mean - mu).abs() <= mu * 0.01 + 0.05,
            "mean drift: {}",
            est.mean
        );
    }

    #[test]
    fn monte_carlo_is_deterministic() {
        let input = TailBoundInput::new(64, 16, 20, ratio(4, 1)).unwrap();
        let a = monte_carlo_tail(&input, 5000, 9).unwrap();
        let b = monte_carlo_tail(&input, 5000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn reference_bound_values() {
        let r = report_reference_bounds(3).unwrap();
        assert_eq!(r.hereditary_lower_bound, ratio(1, 3));
        assert!(r.improved_lower_bound.is_none());

        let r = report_reference_bounds(2).unwrap();
        assert_eq!(r.hereditary_lower_bound, ratio(0, 1));
        assert_eq!(r.improved_lower_bound.as_deref(), Some("1/4"));

        let r = report_reference_bounds(4).unwrap();
        assert_eq!(r.hereditary_lower_bound, ratio(1, 4));
        assert_eq!(r.improved_lower_bound.as_deref(), Some("3/8"));

        assert!(report_reference_bounds(1).is_err());
    }

    #[test]
    fn tail_input_validation() {
        assert!(TailBoundInput::new(10, 20, 5, ratio(1, 1)).is_err());
        assert!(TailBoundInput::new(10, 5, 20, ratio(1, 1)).is_err());
        assert!(TailBoundInput::new(10, 5, 5, ratio(-1, 1)).is_err());
        assert!(TailBoundInput::new(0, 0, 0, ratio(0, 1)).is_err());
    }
}
