use std::collections::BTreeSet;
use std::fmt;

use crate::algorithms::Variant;
use crate::error::{Error, Result};

pub const MAX_TRACE_LOG: u32 = 16;

/// Which physical array an access targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArrayId {
    /// The single array of an in-place kernel.
    InPlace,
    /// Stage input of the copying Pease kernel.
    Input,
    /// Stage output of the copying Pease kernel.
    Output,
    /// One of the two role-swapping buffers of Pease without copies.
    Buffer(u8),
}

impl fmt::Display for ArrayId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrayId::InPlace => f.write_str("inplace"),
            ArrayId::Input => f.write_str("input"),
            ArrayId::Output => f.write_str("output"),
            ArrayId::Buffer(i) => write!(f, "buf{i}"),
        }
    }
}

/// One butterfly: two reads and two writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Iteration {
    pub reads: [u32; 2],
    pub writes: [u32; 2],
    pub read_array: ArrayId,
    pub write_array: ArrayId,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessTrace {
    pub algo: Variant,
    pub log_n: u32,
    /// Stages in execution order, each listing its butterflies in issue order.
    pub stages: Vec<Vec<Iteration>>,
}

impl AccessTrace {
    pub fn n(&self) -> usize {
        1 << self.log_n
    }

    pub fn arrays(&self) -> BTreeSet<ArrayId> {
        self.stages
            .iter()
            .flatten()
            .flat_map(|it| [it.read_array, it.write_array])
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.iter().all(Vec::is_empty)
    }
}

fn radix2_stage(n: usize, s: u32) -> Vec<Iteration> {
    let m = 1usize << s;
    let half = m >> 1;
    let mut it = Vec::with_capacity(n / 2);
    for j in (0..n).step_by(m) {
        for k in 0..half {
            let pair = [(j + k) as u32, (j + k + half) as u32];
            it.push(Iteration {
                reads: pair,
                writes: pair,
                read_array: ArrayId::InPlace,
                write_array: ArrayId::InPlace,
            });
        }
    }
    it
}

fn flat_stage(n: usize, s: u32) -> Vec<Iteration> {
    let shift = s - 1;
    let half = 1usize << shift;
    (0..n / 2)
        .map(|t| {
            let lo = ((t >> shift) << s) + (t & (half - 1));
            let pair = [lo as u32, (lo + half) as u32];
            Iteration {
                reads: pair,
                writes: pair,
                read_array: ArrayId::InPlace,
                write_array: ArrayId::InPlace,
            }
        })
        .collect()
}

fn constant_geometry_stage(n: usize, read_array: ArrayId, write_array: ArrayId) -> Vec<Iteration> {
    let half = n / 2;
    (0..half)
        .map(|r| Iteration {
            reads: [2 * r as u32, 2 * r as u32 + 1],
            writes: [r as u32, (r + half) as u32],
            read_array,
            write_array,
        })
        .collect()
}

/// Per-stage butterfly addresses of `algo` at size `2^log_n`.
pub fn gen_trace(algo: Variant, log_n: u32) -> Result<AccessTrace> {
    if log_n > MAX_TRACE_LOG {
        return Err(Error::InvalidConfig(format!(
            "trace size 2^{log_n} exceeds 2^{MAX_TRACE_LOG}"
        )));
    }
    let n = 1usize << log_n;
    let stages = match algo {
        Variant::Dit => (1..=log_n).map(|s| radix2_stage(n, s)).collect(),
        Variant::Dif => (1..=log_n).rev().map(|s| radix2_stage(n, s)).collect(),
        Variant::Flat => (1..=log_n).map(|s| flat_stage(n, s)).collect(),
        Variant::Pease => (1..=log_n)
            .map(|_| constant_geometry_stage(n, ArrayId::Input, ArrayId::Output))
            .collect(),
        Variant::PeaseNc => (0..log_n)
            .map(|s| {
                let src = (s % 2) as u8;
                constant_geometry_stage(n, ArrayId::Buffer(src), ArrayId::Buffer(1 - src))
            })
            .collect(),
        other => return Err(Error::UnsupportedVariant(other.to_string())),
    };
    Ok(AccessTrace { algo, log_n, stages })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read_pairs(stage: &[Iteration]) -> Vec<[u32; 2]> {
        stage.iter().map(|it| it.reads).collect()
    }

    #[test]
    fn dit_l3_pairs() {
        let t = gen_trace(Variant::Dit, 3).unwrap();
        assert_eq!(t.stages.len(), 3);
        assert_eq!(read_pairs(&t.stages[0]), vec![[0, 1], [2, 3], [4, 5], [6, 7]]);
        assert_eq!(read_pairs(&t.stages[1]), vec![[0, 2], [1, 3], [4, 6], [5, 7]]);
        assert_eq!(read_pairs(&t.stages[2]), vec![[0, 4], [1, 5], [2, 6], [3, 7]]);
    }

    #[test]
    fn dif_runs_stages_in_reverse() {
        let dit = gen_trace(Variant::Dit, 4).unwrap();
        let dif = gen_trace(Variant::Dif, 4).unwrap();
        let mut rev = dit.stages.clone();
        rev.reverse();
        assert_eq!(dif.stages, rev);
    }

    #[test]
    fn flat_matches_dit_addresses() {
        for log_n in 1..=10 {
            assert_eq!(
                gen_trace(Variant::Flat, log_n).unwrap().stages,
                gen_trace(Variant::Dit, log_n).unwrap().stages
            );
        }
    }

    #[test]
    fn pease_constant_geometry_all_sizes() {
        for log_n in 1..=MAX_TRACE_LOG {
            let t = gen_trace(Variant::Pease, log_n).unwrap();
            let n = t.n() as u32;
            for stage in &t.stages {
                assert_eq!(stage, &t.stages[0]);
            }
            for (r, it) in t.stages[0].iter().enumerate() {
                let r = r as u32;
                assert_eq!(it.reads, [2 * r, 2 * r + 1]);
                assert_eq!(it.writes, [r, r + n / 2]);
                assert_eq!((it.read_array, it.write_array), (ArrayId::Input, ArrayId::Output));
            }
        }
    }

    #[test]
    fn pease_nc_alternates_buffers() {
        let t = gen_trace(Variant::PeaseNc, 5).unwrap();
        for (s, stage) in t.stages.iter().enumerate() {
            let src = ArrayId::Buffer((s % 2) as u8);
            let dst = ArrayId::Buffer(((s + 1) % 2) as u8);
            assert!(stage.iter().all(|it| it.read_array == src && it.write_array == dst));
        }
        assert_eq!(t.arrays().len(), 2);
    }

    #[test]
    fn in_place_variants_share_array_and_stay_in_range() {
        for algo in [Variant::Dit, Variant::Dif, Variant::Flat, Variant::Pease, Variant::PeaseNc] {
            let t = gen_trace(algo, 7).unwrap();
            let n = t.n() as u32;
            for it in t.stages.iter().flatten() {
                assert!(it.reads.iter().chain(&it.writes).all(|&a| a < n));
                if matches!(algo, Variant::Dit | Variant::Dif | Variant::Flat) {
                    assert_eq!(it.read_array, it.write_array);
                } else {
                    assert_ne!(it.read_array, it.write_array);
                }
            }
        }
    }

    #[test]
    fn unsupported_and_oversized() {
        assert!(matches!(gen_trace(Variant::Stockham, 3), Err(Error::UnsupportedVariant(_))));
        assert!(matches!(gen_trace(Variant::SixStep, 3), Err(Error::UnsupportedVariant(_))));
        assert!(matches!(gen_trace(Variant::Dit, 17), Err(Error::InvalidConfig(_))));
        assert!(gen_trace(Variant::Dit, 0).unwrap().is_empty());
    }
}
