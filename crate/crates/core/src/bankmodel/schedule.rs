//! Steady-state issue model.
//!
//! Within a stage the butterflies are cut into groups of `unroll`; group `c`
//! issues its reads in window `c`. With `rw_overlap`, the write-back of group
//! `(c - depth) mod G` lands in the same window, i.e. the stage is treated as
//! a stream that keeps the pipeline full. Stages do not overlap each other.
//! A bank serves `ports * II` accesses per window.

use std::collections::{BTreeMap, BTreeSet};

use super::config::{bank_of, BankConfig, Mapping, ScheduleShape};
use super::trace::{AccessTrace, ArrayId};
use crate::algorithms::Variant;
use crate::error::{Error, Result};

pub(crate) struct Window {
    pub stage: usize,
    pub cycle: usize,
    pub accesses: Vec<(ArrayId, u32)>,
}

pub(crate) fn windows(trace: &AccessTrace, shape: &ScheduleShape) -> Vec<Window> {
    let unroll = shape.unroll as usize;
    let mut out = Vec::new();
    for (stage, iters) in trace.stages.iter().enumerate() {
        let groups: Vec<_> = iters.chunks(unroll).collect();
        let g = groups.len();
        let depth = shape.depth as usize;
        for c in 0..g {
            let mut reads: Vec<(ArrayId, u32)> = groups[c]
                .iter()
                .flat_map(|it| it.reads.iter().map(move |&a| (it.read_array, a)))
                .collect();
            let writer = groups[(c + g - depth % g) % g];
            let writes = writer
                .iter()
                .flat_map(|it| it.writes.iter().map(move |&a| (it.write_array, a)));
            if shape.rw_overlap {
                reads.extend(writes);
                out.push(Window {
                    stage,
                    cycle: c,
                    accesses: reads,
                });
            } else {
                out.push(Window {
                    stage,
                    cycle: c,
                    accesses: reads,
                });
                out.push(Window {
                    stage,
                    cycle: c + depth,
                    accesses: writes.collect(),
                });
            }
        }
    }
    out
}

/// A bank asked for more accesses than it can serve in one window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conflict {
    pub stage: usize,
    pub cycle: usize,
    pub array: ArrayId,
    pub bank: u32,
    pub accesses: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictReport {
    pub algo: Variant,
    pub log_n: u32,
    pub target_ii: u32,
    /// Smallest II >= target with no over-capacity bank in any window.
    pub achieved_ii: u32,
    /// Over-capacity windows at the target II.
    pub conflicts: Vec<Conflict>,
    pub feasible: bool,
}

fn check_coverage(trace: &AccessTrace, cfg: &BankConfig) -> Result<()> {
    for array in trace.arrays() {
        if !cfg.mapping_for(array).covers(trace.n()) {
            return Err(Error::InvalidConfig(format!(
                "explicit bank table for {array} covers fewer than {} addresses",
                trace.n()
            )));
        }
    }
    Ok(())
}

/// Per-(array, bank) access counts of one window, sorted.
fn bank_loads(w: &Window, cfg: &BankConfig) -> Vec<((ArrayId, u32), u32)> {
    let mut keys: Vec<(ArrayId, u32)> = w.accesses.iter().map(|&(arr, a)| (arr, cfg.bank_of(arr, a))).collect();
    keys.sort_unstable();
    let mut out: Vec<((ArrayId, u32), u32)> = Vec::new();
    for k in keys {
        match out.last_mut() {
            Some((last, c)) if *last == k => *c += 1,
            _ => out.push((k, 1)),
        }
    }
    out
}

/// Issues `trace` against `cfg` and searches the initiation interval upward from `target_ii`.
pub fn schedule(trace: &AccessTrace, cfg: &BankConfig, target_ii: u32) -> Result<ConflictReport> {
    if target_ii == 0 {
        return Err(Error::InvalidConfig("target II must be >= 1".into()));
    }
    check_coverage(trace, cfg)?;
    let ports = cfg.ports();
    let mut needed = 1u32;
    let mut conflicts = Vec::new();
    for w in windows(trace, cfg.shape()) {
        for ((array, bank), count) in bank_loads(&w, cfg) {
            needed = needed.max(count.div_ceil(ports));
            if count > ports * target_ii {
                conflicts.push(Conflict {
                    stage: w.stage,
                    cycle: w.cycle,
                    array,
                    bank,
                    accesses: count,
                });
            }
        }
    }
    let achieved_ii = needed.max(target_ii);
    Ok(ConflictReport {
        algo: trace.algo,
        log_n: trace.log_n,
        target_ii,
        achieved_ii,
        feasible: conflicts.is_empty(),
        conflicts,
    })
}

/// Addresses of one array touched in one window, with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoCycleGroup {
    pub stage: usize,
    pub cycle: usize,
    pub array: ArrayId,
    pub accesses: BTreeMap<u32, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConflictGraph {
    pub ports: u32,
    pub groups: Vec<CoCycleGroup>,
}

impl ConflictGraph {
    /// Every address sharing at least one window with `addr`.
    pub fn co_cycle(&self, array: ArrayId, addr: u32) -> BTreeSet<u32> {
        self.groups
            .iter()
            .filter(|g| g.array == array && g.accesses.contains_key(&addr))
            .flat_map(|g| g.accesses.keys().copied())
            .filter(|&b| b != addr)
            .collect()
    }

    /// Addresses that cannot share a bank with `addr`: together they exceed
    /// `ports` in some window.
    pub fn separation_set(&self, array: ArrayId, addr: u32) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        for g in self.groups.iter().filter(|g| g.array == array) {
            if let Some(&ca) = g.accesses.get(&addr) {
                for (&b, &cb) in &g.accesses {
                    if b != addr && ca + cb > self.ports {
                        out.insert(b);
                    }
                }
            }
        }
        out
    }

    /// True if `mapping` keeps every group of `array` within `ports` per bank.
    pub fn satisfied_by(&self, array: ArrayId, mapping: &Mapping) -> bool {
        self.groups.iter().filter(|g| g.array == array).all(|g| {
            let mut per_bank: BTreeMap<u32, u32> = BTreeMap::new();
            for (&a, &c) in &g.accesses {
                *per_bank.entry(bank_of(a, mapping)).or_default() += c;
            }
            per_bank.values().all(|&c| c <= self.ports)
        })
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

/// Largest trace size accepted by [`conflict_graph`].
pub const CONFLICT_GRAPH_MAX_LOG: u32 = 8;

/// Co-cycle address groups across all stages, split per array.
pub fn conflict_graph(trace: &AccessTrace, shape: &ScheduleShape) -> Result<ConflictGraph> {
    shape.validate()?;
    if trace.log_n > CONFLICT_GRAPH_MAX_LOG {
        return Err(Error::InvalidConfig(format!(
            "conflict graph limited to 2^{CONFLICT_GRAPH_MAX_LOG} addresses"
        )));
    }
    let mut groups = Vec::new();
    for w in windows(trace, shape) {
        let mut per_array: BTreeMap<ArrayId, BTreeMap<u32, u32>> = BTreeMap::new();
        for (array, a) in w.accesses {
            *per_array.entry(array).or_default().entry(a).or_default() += 1;
        }
        groups.extend(per_array.into_iter().map(|(array, accesses)| CoCycleGroup {
            stage: w.stage,
            cycle: w.cycle,
            array,
            accesses,
        }));
    }
    Ok(ConflictGraph {
        ports: shape.ports,
        groups,
    })
}
