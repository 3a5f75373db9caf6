use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::Serialize;

use shiftlab_core::construct::{build_mnd, BlockParams};
use shiftlab_core::io;
use shiftlab_core::tree::build_tree;
use shiftlab_core::tuple::KTupleSet;
use shiftlab_core::{Error, Result};

use crate::files::{artifact_paths, InstanceFile, InstancePayload};
use crate::params::{defaults, require, resolve, ParamOverlay};
use crate::report::{emit_json, ReportMeta};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    M1,
    Mnd,
    Tree,
    Random,
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// Graph family to build
    #[arg(long, value_enum)]
    pub family: Family,
    /// Ambient vertex count [required for m1/mnd/random]
    #[arg(long)]
    pub n: Option<u32>,
    /// Recursion depth [default: 1]
    #[arg(long)]
    pub d: Option<u32>,
    /// Tuple arity for the random family [default: 2]
    #[arg(long)]
    pub k: Option<usize>,
    /// Discrepancy budget, rational or decimal [default: 1/2]
    #[arg(long)]
    pub epsilon: Option<String>,
    /// Root seed [env: SHIFTLAB_SEED, default: 0]
    #[arg(long, env = "SHIFTLAB_SEED")]
    pub seed: Option<u64>,
    /// Edge/tuple count for the random family [default: half the universe]
    #[arg(long)]
    pub count: Option<u64>,
    /// Tree levels [default: 3]
    #[arg(long)]
    pub levels: Option<u32>,
    /// Children of the tree root [default: 1]
    #[arg(long)]
    pub root_children: Option<u64>,
    /// Extra children added beyond the growth requirement [default: 0]
    #[arg(long)]
    pub slack: Option<u64>,
    /// Sampling attempts per block after a failed certification [default: 8]
    #[arg(long)]
    pub resample_limit: Option<u32>,
    /// Output base path (writes <base>.json and <base>.edges)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConstructReport {
    meta: ReportMeta,
    family: Family,
    config: serde_json::Value,
    json_path: String,
    edges_path: String,
    n: u32,
    k: usize,
    edge_count: u64,
}

pub fn run(args: &ConstructArgs, overlay: &ParamOverlay) -> Result<()> {
    let seed = resolve(args.seed, overlay.seed, defaults::SEED);
    let (payload, tuple_set, default_base, config) = match args.family {
        Family::M1 => {
            let n = require(args.n, overlay.n, "n")?;
            let epsilon = shiftlab_core::ratio::parse_ratio(&resolve(
                args.epsilon.clone(),
                overlay.epsilon.clone(),
                defaults::EPSILON.to_string(),
            ))?;
            let params = BlockParams::new(n, 1, epsilon, seed)?;
            let inst = build_mnd(&params, 0)?;
            let set = KTupleSet::from_ordered_graph(&inst.graph);
            let config = serde_json::json!({ "n": n, "seed": seed });
            (
                InstancePayload::Mnd(inst),
                set,
                format!("m1_n{n}"),
                config,
            )
        }
        Family::Mnd => {
            let n = require(args.n, overlay.n, "n")?;
            let d = resolve(args.d, overlay.d, 1);
            let epsilon_str = resolve(
                args.epsilon.clone(),
                overlay.epsilon.clone(),
                defaults::EPSILON.to_string(),
            );
            let epsilon = shiftlab_core::ratio::parse_ratio(&epsilon_str)?;
            let resample_limit =
                resolve(args.resample_limit, overlay.resample_limit, defaults::RESAMPLE_LIMIT);
            let params = BlockParams::new(n, d, epsilon, seed)?;
            let inst = build_mnd(&params, resample_limit)?;
            let set = KTupleSet::from_ordered_graph(&inst.graph);
            let config = serde_json::json!({
                "n": n, "d": d, "epsilon": epsilon_str, "seed": seed,
                "resample_limit": resample_limit,
            });
            (
                InstancePayload::Mnd(inst),
                set,
                format!("mnd_n{n}_d{d}_s{seed}"),
                config,
            )
        }
        Family::Tree => {
            let levels = resolve(args.levels, overlay.levels, defaults::LEVELS);
            let root_children =
                resolve(args.root_children, overlay.root_children, defaults::ROOT_CHILDREN);
            let slack = resolve(args.slack, overlay.slack, defaults::SLACK);
            let tree = build_tree(levels, root_children, slack)?;
            let set = KTupleSet::from_ordered_graph(&tree.to_ordered_graph());
            let config = serde_json::json!({
                "levels": levels, "root_children": root_children, "slack": slack,
            });
            (
                InstancePayload::Tree { tree },
                set,
                format!("tree_j{levels}_rc{root_children}_sl{slack}"),
                config,
            )
        }
        Family::Random => {
            let n = require(args.n, overlay.n, "n")?;
            let k = resolve(args.k, overlay.k, defaults::K);
            let universe = binomial(u64::from(n), k as u64)
                .ok_or_else(|| Error::limit("tuple universe overflows"))?;
            let count = resolve(args.count, overlay.count, universe / 2);
            let tuples = shiftlab_core::construct::random_ktuple_set(n, k, count, seed)?;
            let config = serde_json::json!({
                "n": n, "k": k, "count": count, "seed": seed,
            });
            (
                InstancePayload::RandomSet {
                    seed,
                    tuples: tuples.clone(),
                },
                tuples,
                format!("random_n{n}_k{k}_c{count}_s{seed}"),
                config,
            )
        }
    };

    let base = args
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(default_base));
    let (json_path, edges_path) = artifact_paths(&base);
    let file = InstanceFile::new(payload);
    file.write(&json_path)?;
    io::write_tuple_set(&edges_path, &tuple_set)?;

    let report = ConstructReport {
        meta: ReportMeta::now(),
        family: args.family,
        config,
        json_path: json_path.display().to_string(),
        edges_path: edges_path.display().to_string(),
        n: tuple_set.n(),
        k: tuple_set.k(),
        edge_count: tuple_set.len() as u64,
    };
    emit_json(&report, None)?;
    Ok(())
}

fn binomial(n: u64, k: u64) -> Option<u64> {
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
