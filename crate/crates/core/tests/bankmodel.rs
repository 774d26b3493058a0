use std::collections::BTreeSet;

use nttkit::bankmodel::*;
use nttkit::Variant;
use proptest::prelude::*;

const TRACED: [Variant; 5] = [Variant::Dit, Variant::Dif, Variant::Flat, Variant::Pease, Variant::PeaseNc];

#[test]
fn pease_stages_identical_up_to_l16() {
    for log_n in 1..=16 {
        let t = gen_trace(Variant::Pease, log_n).unwrap();
        assert!(t.stages.iter().all(|s| *s == t.stages[0]), "L={log_n}");
    }
}

#[test]
fn dit_l3_separation_of_address_zero() {
    let t = gen_trace(Variant::Dit, 3).unwrap();
    let g = conflict_graph(&t, &ScheduleShape::new(2, 4).unwrap()).unwrap();
    let sep = g.separation_set(ArrayId::InPlace, 0);
    // every other address shares a window with 0 at four butterflies per cycle
    assert_eq!(sep, (1..8).collect::<BTreeSet<u32>>());
    assert!(BTreeSet::from([1, 2, 3, 6]).is_subset(&sep));
    // butterfly partners alone give only {1, 2, 4}
    let g = conflict_graph(&t, &ScheduleShape::new(2, 1).unwrap().with_rw_overlap(false)).unwrap();
    assert_eq!(g.co_cycle(ArrayId::InPlace, 0), BTreeSet::from([1, 2, 4]));
}

#[test]
fn pease_l3_two_block_split() {
    let t = gen_trace(Variant::Pease, 3).unwrap();
    let shape = ScheduleShape::new(2, 2).unwrap();
    let split = Mapping::Explicit(vec![1, 0, 0, 1, 1, 0, 0, 1]);
    let g = conflict_graph(&t, &shape).unwrap();
    assert!(g.satisfied_by(ArrayId::Input, &split));
    assert!(g.satisfied_by(ArrayId::Output, &split));
    let cfg = BankConfig::with_shape(split, shape).unwrap();
    assert_eq!(schedule(&t, &cfg, 1).unwrap().achieved_ii, 1);
    let one = BankConfig::with_shape(Mapping::Interleave(1), shape).unwrap();
    assert_eq!(schedule(&t, &one, 1).unwrap().achieved_ii, 2);
}

#[test]
fn conflict_graph_rejects_large_traces() {
    let t = gen_trace(Variant::Dit, CONFLICT_GRAPH_MAX_LOG + 1).unwrap();
    assert!(conflict_graph(&t, &ScheduleShape::default()).is_err());
}

#[test]
fn pease_interleave4_feasible_t3_to_6() {
    for t in 3..=6 {
        let trace = gen_trace(Variant::Pease, t).unwrap();
        let cfg = BankConfig::new(Mapping::Interleave(4), 2, 4).unwrap();
        let r = schedule(&trace, &cfg, 1).unwrap();
        assert_eq!(r.achieved_ii, 1, "t={t}");
        assert!(feasible_partition(&trace, 4, 2, 4).unwrap().is_feasible());
    }
}

#[test]
fn dit_dif_minimum_banks() {
    // t=3: all eight addresses co-cycle; t=4: capacity bound 16/2 is tight
    for algo in [Variant::Dit, Variant::Dif] {
        for (t, min) in [(3u32, 8u32), (4, 8)] {
            let trace = gen_trace(algo, t).unwrap();
            assert!(!feasible_partition(&trace, min - 1, 2, 4).unwrap().is_feasible(), "{algo} t={t}");
            let out = feasible_partition(&trace, min, 2, 4).unwrap();
            let PartitionOutcome::Feasible(p) = out else { panic!("{algo} t={t}") };
            let cfg = p.to_config(ScheduleShape::new(2, 4).unwrap()).unwrap();
            let r = schedule(&trace, &cfg, 1).unwrap();
            assert!(r.conflicts.is_empty());
        }
    }
}

#[test]
fn pease_nc_units() {
    for units in [1, 4, 16] {
        let c = pease_nc_partition_check(12, units).unwrap();
        assert!(c.swap_safe, "units={units}");
        assert_eq!(c.report.achieved_ii, 1);
    }
    // one unit matches plain pease on one dual-port bank per array
    let pease = gen_trace(Variant::Pease, 12).unwrap();
    let cfg = BankConfig::new(Mapping::Interleave(1), 2, 1).unwrap();
    assert_eq!(schedule(&pease, &cfg, 1).unwrap().achieved_ii, 1);
}

fn refine(m: &Mapping) -> Mapping {
    match m {
        Mapping::Interleave(k) => Mapping::Interleave(k * 2),
        Mapping::Blocksize(b) => Mapping::Blocksize((b / 2).max(1)),
        Mapping::Explicit(t) => Mapping::Explicit(t.clone()),
    }
}

fn mapping_strategy() -> impl Strategy<Value = Mapping> {
    prop_oneof![
        (0u32..5).prop_map(|e| Mapping::Interleave(1 << e)),
        (0u32..5).prop_map(|e| Mapping::Blocksize(1 << e)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn resources_never_hurt(
        algo in prop::sample::select(TRACED.to_vec()),
        log_n in 2u32..=7,
        m in mapping_strategy(),
        ports in 1u32..=3,
        unroll in prop::sample::select(vec![1u32, 2, 4]),
        overlap in any::<bool>(),
    ) {
        let t = gen_trace(algo, log_n).unwrap();
        let shape = ScheduleShape::new(ports, unroll).unwrap().with_rw_overlap(overlap);
        let base = schedule(&t, &BankConfig::with_shape(m.clone(), shape).unwrap(), 1).unwrap();
        let finer = schedule(&t, &BankConfig::with_shape(refine(&m), shape).unwrap(), 1).unwrap();
        prop_assert!(finer.achieved_ii <= base.achieved_ii);
        let more_ports = ScheduleShape::new(ports + 1, unroll).unwrap().with_rw_overlap(overlap);
        let wider = schedule(&t, &BankConfig::with_shape(m, more_ports).unwrap(), 1).unwrap();
        prop_assert!(wider.achieved_ii <= base.achieved_ii);
        prop_assert!(base.achieved_ii >= 1);
        prop_assert_eq!(base.conflicts.is_empty(), base.achieved_ii == 1);
    }

    #[test]
    fn one_bank_per_address(algo in prop::sample::select(TRACED.to_vec()), log_n in 1u32..=10, unroll in 1u32..=8) {
        let t = gen_trace(algo, log_n).unwrap();
        let cfg = BankConfig::new(Mapping::Interleave(1 << log_n), 2, unroll).unwrap();
        prop_assert_eq!(schedule(&t, &cfg, 1).unwrap().achieved_ii, 1);
    }

    #[test]
    fn partitions_replay_clean(algo in prop::sample::select(TRACED.to_vec()), log_n in 1u32..=6, n_banks in 1u32..=8, unroll in 1u32..=4) {
        let t = gen_trace(algo, log_n).unwrap();
        if let PartitionOutcome::Feasible(p) = feasible_partition(&t, n_banks, 2, unroll).unwrap() {
            let cfg = p.to_config(ScheduleShape::new(2, unroll).unwrap()).unwrap();
            let r = schedule(&t, &cfg, 1).unwrap();
            prop_assert!(r.conflicts.is_empty());
            for m in p.mappings.values() {
                prop_assert!(m.n_banks(t.n()) <= n_banks);
            }
        }
    }
}
