use std::path::PathBuf;

use clap::Args;
use num::bigint::BigInt;
use num::rational::BigRational;
use serde::Serialize;

use shiftlab_core::bounds::report_reference_bounds;
use shiftlab_core::independence::{
    derandomized_quarter, exact_alpha_general, exact_alpha_k2, AlphaResult, SearchBudget,
};
use shiftlab_core::ratio::{format_ratio, to_f64};
use shiftlab_core::tuple::KTupleSet;
use shiftlab_core::Result;

use crate::files::InstanceFile;
use crate::params::{defaults, resolve, ParamOverlay};
use crate::report::{emit_json, ReportMeta};

#[derive(Args, Debug)]
pub struct AlphaArgs {
    /// Graph input: an .edges text file or an instance .json
    #[arg(long)]
    pub input: PathBuf,
    /// Node budget for the exact search [default: 20000000]
    #[arg(long)]
    pub budget: Option<u64>,
    /// Report output path (stdout when omitted)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Serialize)]
struct AlphaReport {
    meta: ReportMeta,
    input: String,
    config: serde_json::Value,
    n: u32,
    k: usize,
    edge_count: u64,
    alpha: AlphaResult,
    /// alpha / |G| as exact string and float
    ratio: String,
    ratio_float: f64,
    /// the guaranteed floor ceil(|G|/4) for k=2
    #[serde(skip_serializing_if = "Option::is_none")]
    quarter_floor: Option<u64>,
    /// size of the derandomized independent set (k=2)
    #[serde(skip_serializing_if = "Option::is_none")]
    derandomized_size: Option<u64>,
    reference_bounds: shiftlab_core::bounds::ReferenceBounds,
}

pub fn load_tuple_set(path: &PathBuf) -> Result<KTupleSet> {
    if path.extension().is_some_and(|e| e == "json") {
        Ok(InstanceFile::read(path)?.tuple_set())
    } else {
        shiftlab_core::io::read_tuple_set(path)
    }
}

pub fn run(args: &AlphaArgs, overlay: &ParamOverlay) -> Result<()> {
    let budget = SearchBudget {
        max_nodes: resolve(args.budget, overlay.budget, defaults::BUDGET),
    };
    let set = load_tuple_set(&args.input)?;
    let edge_count = set.len() as u64;

    let (alpha, quarter_floor, derandomized_size) = if set.k() == 2 {
        let graph = set.to_ordered_graph()?;
        let result = exact_alpha_k2(&graph, budget)?;
        let (floor, derand) = if graph.is_empty() {
            (Some(0), None)
        } else {
            let derand = derandomized_quarter(&graph)?;
            (Some(edge_count.div_ceil(4)), Some(derand.edge_count() as u64))
        };
        (result, floor, derand)
    } else {
        (exact_alpha_general(&set, budget)?, None, None)
    };

    let ratio = if edge_count == 0 {
        BigRational::from_integer(BigInt::from(0))
    } else {
        BigRational::new(BigInt::from(alpha.value), BigInt::from(edge_count))
    };
    let report = AlphaReport {
        meta: ReportMeta::now(),
        input: args.input.display().to_string(),
        config: serde_json::json!({ "budget": budget.max_nodes }),
        n: set.n(),
        k: set.k(),
        edge_count,
        ratio: format_ratio(&ratio),
        ratio_float: to_f64(&ratio),
        quarter_floor,
        derandomized_size,
        reference_bounds: report_reference_bounds(set.k())?,
        alpha,
    };
    emit_json(&report, args.output.as_deref())?;
    Ok(())
}
