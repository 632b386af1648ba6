//! Plain-text rendering of the reports.

use std::fmt::Write;

use weightlab::chains::AwcReport;
use weightlab::ddelta::PairSummary;
use weightlab::k0::FawcReport;

use crate::corpus::CorpusResult;
use crate::run::{BlocksReport, ChainsReport, ChartableReport};

pub fn awc(reports: &[AwcReport]) -> String {
    let mut s = String::new();
    for r in reports {
        writeln!(
            s,
            "{}  p={}  block {}  defect {}  sum {}  {}",
            r.group, r.p, r.block, r.defect, r.sum, r.verdict
        )
        .unwrap();
        writeln!(
            s,
            "  {:>3} {:>6} {:>6} {:>3}  chain",
            "len", "|G_σ|", "orbit", "l"
        )
        .unwrap();
        for e in &r.ledger {
            writeln!(
                s,
                "  {:>3} {:>6} {:>6} {:>3}  {}",
                e.length,
                e.stabilizer_order,
                e.orbit_size,
                e.l,
                e.chain.join(" < ")
            )
            .unwrap();
        }
    }
    s
}

pub fn fawc(reports: &[FawcReport]) -> String {
    let mut s = String::new();
    for r in reports {
        writeln!(
            s,
            "{}  p={}  block {}  defect {}  {}",
            r.group, r.p, r.block, r.defect, r.verdict
        )
        .unwrap();
        for (lab, c) in r.labels.iter().zip(&r.coordinates) {
            writeln!(
                s,
                "  S[L={}, u#{} (order {}), V{}] = {}",
                lab.l_key, lab.u_class, lab.u_order, lab.v_index, c
            )
            .unwrap();
        }
        let nonzero = r.w_checks.iter().filter(|w| w.value != 0).count();
        writeln!(
            s,
            "  fixed-point checks: {} ({} nonzero)",
            r.w_checks.len(),
            nonzero
        )
        .unwrap();
        for u in &r.unsupported {
            writeln!(
                s,
                "  unsupported {} (|L| = {}, {} labels): {}",
                u.pair, u.l_order, u.labels, u.reason
            )
            .unwrap();
        }
    }
    s
}

pub fn blocks(r: &BlocksReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{} (order {})  p={}  residue field F_{}^{}  {} p-regular classes",
        r.group, r.order, r.p, r.p, r.residue_field_degree, r.p_regular_classes
    )
    .unwrap();
    for b in &r.blocks {
        writeln!(
            s,
            "  block {}: defect {}  l {}  irr {:?}",
            b.index, b.defect, b.l, b.irr_indices
        )
        .unwrap();
    }
    s
}

pub fn chartable(r: &ChartableReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{} (order {}), {} classes",
        r.group,
        r.order,
        r.table.classes.len()
    )
    .unwrap();
    let cells: Vec<Vec<String>> = r
        .table
        .irr
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    let heads: Vec<String> = r
        .table
        .classes
        .iter()
        .map(|c| format!("{}[{}]", c.rep_cycles, c.size))
        .collect();
    let width: Vec<usize> = (0..heads.len())
        .map(|j| {
            cells
                .iter()
                .map(|r| r[j].chars().count())
                .chain([heads[j].chars().count()])
                .max()
                .unwrap()
        })
        .collect();
    let line = |items: &[String]| {
        items
            .iter()
            .zip(&width)
            .map(|(x, w)| format!("{x:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    writeln!(s, "      {}", line(&heads)).unwrap();
    for (i, row) in cells.iter().enumerate() {
        writeln!(s, "  χ{:<3} {}", i, line(row)).unwrap();
    }
    s
}

pub fn chains(r: &ChainsReport) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "{}  p={}  {} p-subgroups, {} chains in {} orbits",
        r.group,
        r.p,
        r.p_subgroups,
        r.total_chains,
        r.orbits.len()
    )
    .unwrap();
    for o in &r.orbits {
        writeln!(
            s,
            "  {:>3} {:>6} {:>6}  {}",
            o.length,
            o.stabilizer_order,
            o.orbit_size,
            o.chain.join(" < ")
        )
        .unwrap();
    }
    s
}

pub fn dpairs(pairs: &[PairSummary]) -> String {
    let mut s = String::new();
    writeln!(
        s,
        "  {:>4} {:>8} {:>4} {:>4} {:>6}",
        "|L|", "L", "|u|", "u#", "|Out|"
    )
    .unwrap();
    for p in pairs {
        writeln!(
            s,
            "  {:>4} {:>8} {:>4} {:>4} {:>6}",
            p.l_order, p.l_id_key, p.u_order, p.u_class, p.out_order
        )
        .unwrap();
    }
    s
}

pub fn corpus(r: &CorpusResult) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let p = e.p.map_or("-".into(), |p| p.to_string());
        let sums: Vec<String> = e
            .awc
            .iter()
            .map(|a| format!("{}:{}", a.defect, a.sum))
            .collect();
        writeln!(
            s,
            "  {:<24} p={:<3} {:<13} {:>7}ms  d:sum {}",
            e.spec,
            p,
            format!("{:?}", e.status),
            e.millis,
            sums.join(" ")
        )
        .unwrap();
    }
    let counts: Vec<String> = r
        .summary
        .iter()
        .map(|(k, v)| format!("{k:?} {v}"))
        .collect();
    writeln!(
        s,
        "{} entries in {}ms: {}",
        r.entries.len(),
        r.millis,
        counts.join(", ")
    )
    .unwrap();
    for f in &r.failures {
        writeln!(s, "  ! {f}").unwrap();
    }
    s
}
