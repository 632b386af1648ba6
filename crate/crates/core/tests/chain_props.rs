use std::collections::HashMap;
use std::sync::Arc;

use weightlab::chains::{
    all_chains, awc_sum, chain_block, chain_orbits, involution_check, stabilizer, RepChoice,
    DEFAULT_BUDGET,
};
use weightlab::context::Ambient;
use weightlab::k0::{functorial_report, FunctorialOptions};
use weightlab::perm::dsl::parse_group_spec;

fn amb(spec: &str, p: u64) -> Ambient {
    Ambient::new(Arc::new(parse_group_spec(spec).unwrap()), p)
}

const SMALL: &[(&str, u64)] = &[
    ("S(3)", 2),
    ("S(3)", 3),
    ("S(4)", 2),
    ("S(4)", 3),
    ("A(4)", 2),
    ("D(8)", 2),
    ("Q(8)", 2),
    ("D(12)", 2),
    ("D(12)", 3),
    ("C(3) x S(3)", 3),
    ("D(10)", 5),
];

#[test]
fn chain_blocks_depend_only_on_the_stabilizer() {
    for &(spec, p) in SMALL {
        let a = amb(spec, p);
        let g = a.group();
        let whole = a.whole().unwrap();
        let chains = all_chains(&a, DEFAULT_BUDGET).unwrap();
        for blk in &whole.blocks.blocks {
            let mut by_stab: HashMap<Vec<u32>, _> = HashMap::new();
            for c in &chains {
                let h = stabilizer(g, a.poset(), c);
                // decomposition failure surfaces as an error here
                let cb = chain_block(&a, &blk.idempotent, c, &h).unwrap();
                let e = by_stab
                    .entry(h.elements().to_vec())
                    .or_insert_with(|| cb.b_sigma.clone());
                assert_eq!(*e, cb.b_sigma, "{spec}, p = {p}, chain {c:?}");
            }
        }
    }
}

#[test]
fn pairing_holds_for_every_chain_and_subgroup() {
    for &(spec, p) in SMALL {
        let a = amb(spec, p);
        let g = a.group();
        let poset = a.poset();
        for c in all_chains(&a, DEFAULT_BUDGET).unwrap() {
            let h = stabilizer(g, poset, &c);
            for pid in 1..poset.len() {
                if poset.get(pid).is_subgroup_of(&h) {
                    involution_check(&a, &c, pid)
                        .unwrap_or_else(|e| panic!("{spec}, p = {p}: {e}"));
                }
            }
        }
    }
}

#[test]
fn results_do_not_depend_on_choices() {
    for &(spec, p) in SMALL
        .iter()
        .chain(&[("C(5) x S(3)", 5), ("S(3) x S(3)", 2)])
    {
        let a = amb(spec, p);
        let b = Ambient::with_factor(a.group_arc().clone(), p, 1);
        let (wa, wb) = (a.whole().unwrap(), b.whole().unwrap());
        let shape = |w: &weightlab::context::LocalData| {
            w.blocks
                .blocks
                .iter()
                .map(|x| (x.irr_indices.clone(), x.defect, x.num_simples))
                .collect::<Vec<_>>()
        };
        assert_eq!(shape(&wa), shape(&wb), "{spec}, p = {p}");
        let o1 = chain_orbits(&a, DEFAULT_BUDGET, RepChoice::Canonical).unwrap();
        let o2 = chain_orbits(&b, DEFAULT_BUDGET, RepChoice::Shuffled(17)).unwrap();
        assert_eq!(o1.len(), o2.len());
        for k in 0..wa.blocks.blocks.len() {
            let s1 = awc_sum(&a, spec, k, &o1).unwrap().sum;
            let s2 = awc_sum(&b, spec, k, &o2).unwrap().sum;
            assert_eq!(s1, s2, "{spec}, p = {p}, block {k}");
        }
        if a.group().order() <= 24 {
            for k in 0..wa.blocks.blocks.len() {
                let f1 = functorial_report(&a, spec, k, FunctorialOptions::default()).unwrap();
                let opts = FunctorialOptions {
                    choice: RepChoice::Shuffled(5),
                    ..Default::default()
                };
                let f2 = functorial_report(&b, spec, k, opts).unwrap();
                assert_eq!(f1.labels, f2.labels);
                assert_eq!(f1.coordinates, f2.coordinates, "{spec}, p = {p}, block {k}");
            }
        }
    }
}
