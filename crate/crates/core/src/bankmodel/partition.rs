//! Search for a bank partition that reaches II=1.
//!
//! Arrays are independent (each has its own banks), so every array is
//! searched on its own. Up to [`EXHAUSTIVE_MAX_ADDRS`] addresses the search is
//! a backtracking over all assignments with bank-symmetry breaking; above
//! that only interleave and blocksize mappings with power-of-two parameters
//! are tried.

use std::collections::BTreeMap;

use super::config::{bank_of, BankConfig, Mapping, ScheduleShape};
use super::schedule::{schedule, windows, ConflictReport};
use super::trace::{gen_trace, AccessTrace, ArrayId};
use crate::algorithms::Variant;
use crate::error::{Error, Result};

pub const EXHAUSTIVE_MAX_ADDRS: usize = 16;
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    Exhaustive,
    Structured,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub n_banks: u32,
    pub method: SearchMethod,
    pub mappings: BTreeMap<ArrayId, Mapping>,
}

impl Partition {
    /// Config that replays this partition under `shape`.
    pub fn to_config(&self, shape: ScheduleShape) -> Result<BankConfig> {
        let pick = |ids: &[ArrayId]| ids.iter().find_map(|id| self.mappings.get(id)).cloned();
        let primary = pick(&[ArrayId::InPlace, ArrayId::Input, ArrayId::Buffer(0)]).unwrap_or(Mapping::Interleave(1));
        let cfg = BankConfig::with_shape(primary, shape)?;
        match pick(&[ArrayId::Output, ArrayId::Buffer(1)]) {
            Some(out) => cfg.with_output_mapping(out),
            None => Ok(cfg),
        }
    }
}

/// Why no partition was found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub array: ArrayId,
    pub n_banks: u32,
    pub method: SearchMethod,
    /// Backtracking nodes visited; 0 when a capacity bound settled it.
    pub nodes: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionOutcome {
    Feasible(Partition),
    Infeasible(Certificate),
}

impl PartitionOutcome {
    pub fn is_feasible(&self) -> bool {
        matches!(self, PartitionOutcome::Feasible(_))
    }
}

/// Co-cycle windows restricted to one array, as `(addr, count)` lists.
fn array_windows(trace: &AccessTrace, shape: &ScheduleShape, array: ArrayId) -> Vec<Vec<(u32, u32)>> {
    windows(trace, shape)
        .into_iter()
        .filter_map(|w| {
            let mut acc: BTreeMap<u32, u32> = BTreeMap::new();
            for (arr, a) in w.accesses {
                if arr == array {
                    *acc.entry(a).or_default() += 1;
                }
            }
            (!acc.is_empty()).then(|| acc.into_iter().collect())
        })
        .collect()
}

fn mapping_fits(wins: &[Vec<(u32, u32)>], mapping: &Mapping, ports: u32) -> bool {
    wins.iter().all(|w| {
        let mut per_bank: BTreeMap<u32, u32> = BTreeMap::new();
        w.iter().all(|&(a, c)| {
            let e = per_bank.entry(bank_of(a, mapping)).or_default();
            *e += c;
            *e <= ports
        })
    })
}

struct Backtrack<'a> {
    /// For each address, the windows it appears in with its multiplicity.
    touches: Vec<Vec<(usize, u32)>>,
    load: Vec<Vec<u32>>,
    assign: Vec<u32>,
    n_banks: u32,
    ports: u32,
    nodes: u64,
    budget: u64,
    _wins: &'a [Vec<(u32, u32)>],
}

impl<'a> Backtrack<'a> {
    fn new(n: usize, wins: &'a [Vec<(u32, u32)>], n_banks: u32, ports: u32, budget: u64) -> Self {
        let mut touches = vec![Vec::new(); n];
        for (wi, w) in wins.iter().enumerate() {
            for &(a, c) in w {
                touches[a as usize].push((wi, c));
            }
        }
        Self {
            touches,
            load: vec![vec![0; n_banks as usize]; wins.len()],
            assign: vec![0; n],
            n_banks,
            ports,
            nodes: 0,
            budget,
            _wins: wins,
        }
    }

    fn run(&mut self, addr: usize, used: u32) -> Result<bool> {
        if addr == self.assign.len() {
            return Ok(true);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SearchBudgetExceeded(self.budget));
        }
        // banks above `used` are interchangeable; try only the first of them
        let limit = (used + 1).min(self.n_banks);
        for b in 0..limit {
            let bi = b as usize;
            let fits = self.touches[addr]
                .iter()
                .all(|&(wi, c)| self.load[wi][bi] + c <= self.ports);
            if !fits {
                continue;
            }
            for &(wi, c) in &self.touches[addr] {
                self.load[wi][bi] += c;
            }
            self.assign[addr] = b;
            if self.run(addr + 1, used.max(b + 1))? {
                return Ok(true);
            }
            for &(wi, c) in &self.touches[addr] {
                self.load[wi][bi] -= c;
            }
        }
        Ok(false)
    }
}

fn structured_candidates(n: usize, n_banks: u32) -> Vec<Mapping> {
    let mut out = Vec::new();
    let mut banks = 1u32;
    while banks <= n_banks && banks as usize <= n {
        out.push(Mapping::Interleave(banks));
        out.push(Mapping::Blocksize((n as u32 / banks).max(1)));
        banks *= 2;
    }
    out
}

fn search_array(
    trace: &AccessTrace,
    array: ArrayId,
    n_banks: u32,
    shape: &ScheduleShape,
    budget: u64,
) -> Result<std::result::Result<(Mapping, SearchMethod), Certificate>> {
    let n = trace.n();
    let wins = array_windows(trace, shape, array);
    let capacity = n_banks * shape.ports;
    if let Some(w) = wins.iter().find(|w| w.iter().map(|&(_, c)| c).sum::<u32>() > capacity) {
        let total: u32 = w.iter().map(|&(_, c)| c).sum();
        return Ok(Err(Certificate {
            array,
            n_banks,
            method: SearchMethod::Exhaustive,
            nodes: 0,
            reason: format!("a window issues {total} accesses but {n_banks} banks x {} ports serve {capacity}", shape.ports),
        }));
    }
    if n <= EXHAUSTIVE_MAX_ADDRS {
        let mut bt = Backtrack::new(n, &wins, n_banks, shape.ports, budget);
        return Ok(if bt.run(0, 0)? {
            Ok((Mapping::Explicit(bt.assign), SearchMethod::Exhaustive))
        } else {
            Err(Certificate {
                array,
                n_banks,
                method: SearchMethod::Exhaustive,
                nodes: bt.nodes,
                reason: "every assignment overloads some bank".into(),
            })
        });
    }
    Ok(structured_candidates(n, n_banks)
        .into_iter()
        .find(|m| mapping_fits(&wins, m, shape.ports))
        .map(|m| (m, SearchMethod::Structured))
        .ok_or_else(|| Certificate {
            array,
            n_banks,
            method: SearchMethod::Structured,
            nodes: 0,
            reason: "no interleave or blocksize mapping fits".into(),
        }))
}

/// Partition of at most `n_banks` banks per array that reaches II=1, with the
/// default overlap model.
pub fn feasible_partition(trace: &AccessTrace, n_banks: u32, ports: u32, unroll: u32) -> Result<PartitionOutcome> {
    feasible_partition_with(trace, n_banks, &ScheduleShape::new(ports, unroll)?, DEFAULT_BUDGET)
}

pub fn feasible_partition_with(
    trace: &AccessTrace,
    n_banks: u32,
    shape: &ScheduleShape,
    budget: u64,
) -> Result<PartitionOutcome> {
    shape.validate()?;
    if n_banks == 0 {
        return Err(Error::InvalidConfig("n_banks must be >= 1".into()));
    }
    let mut mappings = BTreeMap::new();
    let mut method = SearchMethod::Exhaustive;
    for array in trace.arrays() {
        match search_array(trace, array, n_banks, shape, budget)? {
            Ok((m, how)) => {
                if how == SearchMethod::Structured {
                    method = how;
                }
                mappings.insert(array, m);
            }
            Err(cert) => return Ok(PartitionOutcome::Infeasible(cert)),
        }
    }
    Ok(PartitionOutcome::Feasible(Partition {
        n_banks,
        method,
        mappings,
    }))
}

/// Outcome of the role-swap check for Pease without copies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapCheck {
    pub report: ConflictReport,
    /// Achieved II of each stage scheduled on its own.
    pub stage_ii: Vec<u32>,
    pub identical_partitions: bool,
    pub swap_safe: bool,
}

/// `interleave = n_units` on both buffers, `n_units` butterflies per cycle,
/// dual-port banks.
pub fn pease_nc_partition_check(log_n: u32, n_units: u32) -> Result<SwapCheck> {
    if log_n == 0 || !n_units.is_power_of_two() || n_units as u64 > 1u64 << (log_n - 1) {
        return Err(Error::InvalidConfig(format!(
            "n_units={n_units} must be a power of two no larger than 2^{}",
            log_n.saturating_sub(1)
        )));
    }
    let cfg = BankConfig::new(Mapping::Interleave(n_units), 2, n_units)?;
    pease_nc_check_with(log_n, &cfg)
}

pub fn pease_nc_check_with(log_n: u32, cfg: &BankConfig) -> Result<SwapCheck> {
    let trace = gen_trace(Variant::PeaseNc, log_n)?;
    let report = schedule(&trace, cfg, 1)?;
    let stage_ii = trace
        .stages
        .iter()
        .map(|st| {
            let one = AccessTrace {
                algo: trace.algo,
                log_n,
                stages: vec![st.clone()],
            };
            schedule(&one, cfg, 1).map(|r| r.achieved_ii)
        })
        .collect::<Result<Vec<_>>>()?;
    let identical_partitions = cfg.mapping_for(ArrayId::Buffer(0)) == cfg.mapping_for(ArrayId::Buffer(1));
    let swap_safe = identical_partitions && stage_ii.iter().all(|&ii| ii == 1);
    Ok(SwapCheck {
        report,
        stage_ii,
        identical_partitions,
        swap_safe,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn replay_clean(trace: &AccessTrace, outcome: &PartitionOutcome, shape: ScheduleShape) {
        let PartitionOutcome::Feasible(p) = outcome else {
            panic!("expected a partition, got {outcome:?}");
        };
        let cfg = p.to_config(shape).unwrap();
        let r = schedule(trace, &cfg, 1).unwrap();
        assert_eq!(r.achieved_ii, 1);
        assert!(r.conflicts.is_empty());
        for (array, m) in &p.mappings {
            assert!(m.n_banks(trace.n()) <= p.n_banks, "{array} uses too many banks");
        }
    }

    #[test]
    fn dit_l3_needs_eight_banks() {
        let t = gen_trace(Variant::Dit, 3).unwrap();
        for nb in 1..8 {
            let out = feasible_partition(&t, nb, 2, 4).unwrap();
            assert!(!out.is_feasible(), "n_banks={nb}");
        }
        let out = feasible_partition(&t, 8, 2, 4).unwrap();
        replay_clean(&t, &out, ScheduleShape::new(2, 4).unwrap());
    }

    #[test]
    fn pease_small_exhaustive_and_replayed() {
        for log_n in 3..=4 {
            let t = gen_trace(Variant::Pease, log_n).unwrap();
            let out = feasible_partition(&t, 4, 2, 4).unwrap();
            replay_clean(&t, &out, ScheduleShape::new(2, 4).unwrap());
        }
    }

    #[test]
    fn pease_large_structured() {
        let t = gen_trace(Variant::Pease, 8).unwrap();
        let out = feasible_partition(&t, 4, 2, 4).unwrap();
        let PartitionOutcome::Feasible(p) = &out else { panic!() };
        assert_eq!(p.method, SearchMethod::Structured);
        assert_eq!(p.mappings[&ArrayId::Input], Mapping::Interleave(4));
        replay_clean(&t, &out, ScheduleShape::new(2, 4).unwrap());
    }

    #[test]
    fn one_address_per_bank_always_feasible() {
        for algo in [Variant::Dit, Variant::Dif, Variant::Pease, Variant::PeaseNc] {
            for log_n in 1..=6 {
                let t = gen_trace(algo, log_n).unwrap();
                let out = feasible_partition(&t, 1 << log_n, 2, 4).unwrap();
                assert!(out.is_feasible(), "{algo} L={log_n}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        // 16 addresses cannot be placed in 10 nodes
        let t = gen_trace(Variant::Dit, 4).unwrap();
        let shape = ScheduleShape::new(2, 1).unwrap();
        assert_eq!(
            feasible_partition_with(&t, 2, &shape, 10),
            Err(Error::SearchBudgetExceeded(10))
        );
    }

    #[test]
    fn swap_check_configurations() {
        let c = pease_nc_partition_check(12, 16).unwrap();
        assert!(c.swap_safe && c.identical_partitions);
        assert_eq!(c.report.achieved_ii, 1);
        assert_eq!(c.stage_ii, vec![1; 12]);
        assert!(pease_nc_partition_check(12, 4).unwrap().swap_safe);
        assert!(pease_nc_partition_check(12, 1).unwrap().swap_safe);
        assert!(pease_nc_partition_check(3, 8).is_err());
        assert!(pease_nc_partition_check(4, 3).is_err());
    }

    #[test]
    fn different_buffer_partitions_are_not_swap_safe() {
        let cfg = BankConfig::new(Mapping::Interleave(4), 2, 4)
            .unwrap()
            .with_output_mapping(Mapping::Interleave(8))
            .unwrap();
        let c = pease_nc_check_with(6, &cfg).unwrap();
        assert!(!c.identical_partitions);
        assert!(!c.swap_safe);
        // a partition that breaks II=1 on reads
        let cfg = BankConfig::new(Mapping::Blocksize(8), 2, 4).unwrap();
        let c = pease_nc_check_with(6, &cfg).unwrap();
        assert!(c.identical_partitions);
        assert!(!c.swap_safe);
    }
}
