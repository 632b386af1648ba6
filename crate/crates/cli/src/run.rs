//! The subcommands as library functions returning serializable reports.

use std::sync::Arc;

use log::warn;
use serde::Serialize;
use weightlab::arith::numtheory::{is_prime, prime_divisors};
use weightlab::chains::{
    awc_sum, chain_orbits, describe_subgroup, AwcReport, RepChoice, DEFAULT_BUDGET,
};
use weightlab::context::{Ambient, TableStore};
use weightlab::ddelta::{enumerate_ddelta_pairs, pair_aut_data, pair_summary, PairSummary};
use weightlab::error::{Error, Result};
use weightlab::k0::{functorial_report, FawcReport, FunctorialOptions};
use weightlab::perm::dsl::parse_group_spec_with_cap;
use weightlab::perm::group::DEFAULT_CAP;
use weightlab::perm::PermGroup;

/// Exit codes shared by every subcommand.
pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone)]
pub struct RunConfig {
    pub cap: usize,
    pub budget: u64,
    pub max_l: usize,
    pub store: Option<Arc<dyn TableStore>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cap: DEFAULT_CAP,
            budget: DEFAULT_BUDGET,
            max_l: 16,
            store: None,
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Syntax(_) | Error::CapExceeded { .. } | Error::InvalidArgument(_) => EXIT_INPUT,
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_FAIL,
    }
}

pub fn parse_group(spec: &str, cfg: &RunConfig) -> Result<PermGroup> {
    parse_group_spec_with_cap(spec, cfg.cap)
}

pub fn ambient(group: Arc<PermGroup>, p: u64, cfg: &RunConfig) -> Result<Ambient> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let a = Ambient::new(group, p);
    Ok(match &cfg.store {
        Some(s) => a.with_store(s.clone()),
        None => a,
    })
}

fn report_rejections(a: &Ambient) {
    let r = a.stats.rejected.load(std::sync::atomic::Ordering::Relaxed);
    if r > 0 {
        warn!("{r} cached entries failed verification and were recomputed");
    }
}

pub fn verify_awc_group(
    spec: &str,
    group: Arc<PermGroup>,
    p: u64,
    cfg: &RunConfig,
) -> Result<Vec<AwcReport>> {
    let a = ambient(group, p, cfg)?;
    let whole = a.whole()?;
    let orbits = chain_orbits(&a, cfg.budget, RepChoice::Canonical)?;
    let out = (0..whole.blocks.blocks.len())
        .map(|k| awc_sum(&a, spec, k, &orbits))
        .collect();
    report_rejections(&a);
    out
}

pub fn verify_awc(spec: &str, p: u64, cfg: &RunConfig) -> Result<Vec<AwcReport>> {
    verify_awc_group(spec, Arc::new(parse_group(spec, cfg)?), p, cfg)
}

pub fn functorial_group(
    spec: &str,
    group: Arc<PermGroup>,
    p: u64,
    cfg: &RunConfig,
) -> Result<Vec<FawcReport>> {
    let a = ambient(group, p, cfg)?;
    let n = a.whole()?.blocks.blocks.len();
    let opts = FunctorialOptions {
        max_l: cfg.max_l,
        budget: cfg.budget,
        choice: RepChoice::Canonical,
    };
    let out = (0..n)
        .map(|k| functorial_report(&a, spec, k, opts))
        .collect();
    report_rejections(&a);
    out
}

pub fn functorial(spec: &str, p: u64, cfg: &RunConfig) -> Result<Vec<FawcReport>> {
    functorial_group(spec, Arc::new(parse_group(spec, cfg)?), p, cfg)
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockSummary {
    pub index: usize,
    pub irr_indices: Vec<usize>,
    pub defect: u32,
    pub l: usize,
    /// Classes on which the idempotent is nonzero.
    pub idempotent_support: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlocksReport {
    pub group: String,
    pub order: usize,
    pub p: u64,
    pub residue_field_degree: usize,
    pub p_regular_classes: usize,
    pub blocks: Vec<BlockSummary>,
}

pub fn blocks(spec: &str, p: u64, cfg: &RunConfig) -> Result<BlocksReport> {
    let a = ambient(Arc::new(parse_group(spec, cfg)?), p, cfg)?;
    let w = a.whole()?;
    let regular = weightlab::blocks::p_regular_classes(&w.table, p)
        .into_iter()
        .filter(|&x| x)
        .count();
    Ok(BlocksReport {
        group: spec.to_string(),
        order: a.group().order(),
        p,
        residue_field_degree: a.redmap.m(),
        p_regular_classes: regular,
        blocks: w
            .blocks
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| BlockSummary {
                index: i,
                irr_indices: b.irr_indices.clone(),
                defect: b.defect,
                l: b.num_simples,
                idempotent_support: b.idempotent.support(),
            })
            .collect(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChartableReport {
    pub group: String,
    pub order: usize,
    pub degrees: Vec<u64>,
    pub table: weightlab::chartable::CharTableRepr,
}

pub fn chartable(spec: &str, cfg: &RunConfig) -> Result<ChartableReport> {
    let g = Arc::new(parse_group(spec, cfg)?);
    // any prime works; the table itself does not depend on it
    let p = prime_divisors(g.order() as u64)
        .first()
        .copied()
        .unwrap_or(2);
    let a = ambient(g, p, cfg)?;
    let w = a.whole()?;
    w.table.verify()?;
    Ok(ChartableReport {
        group: spec.to_string(),
        order: a.group().order(),
        degrees: w.table.degrees.clone(),
        table: w.table.to_repr(a.group()),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainSummary {
    pub chain: Vec<String>,
    pub length: usize,
    pub stabilizer_order: usize,
    pub orbit_size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainsReport {
    pub group: String,
    pub p: u64,
    pub p_subgroups: usize,
    pub orbits: Vec<ChainSummary>,
    /// `Σ_σ orbit size`, the number of chains.
    pub total_chains: usize,
}

pub fn chains(spec: &str, p: u64, cfg: &RunConfig) -> Result<ChainsReport> {
    let a = ambient(Arc::new(parse_group(spec, cfg)?), p, cfg)?;
    let orbits = chain_orbits(&a, cfg.budget, RepChoice::Canonical)?;
    let g = a.group();
    let poset = a.poset();
    Ok(ChainsReport {
        group: spec.to_string(),
        p,
        p_subgroups: poset.len(),
        total_chains: orbits.iter().map(|o| o.orbit_size).sum(),
        orbits: orbits
            .iter()
            .map(|o| ChainSummary {
                chain: o
                    .chain
                    .iter()
                    .map(|&id| describe_subgroup(g, poset.get(id)))
                    .collect(),
                length: o.len(),
                stabilizer_order: o.stabilizer.order(),
                orbit_size: o.orbit_size,
            })
            .collect(),
    })
}

pub fn dpairs(p: u64, max_l: usize) -> Result<Vec<PairSummary>> {
    enumerate_ddelta_pairs(p, max_l)?
        .iter()
        .map(|pair| Ok(pair_summary(pair, &pair_aut_data(pair)?)))
        .collect()
}
