use std::fmt;

use super::trace::ArrayId;
use crate::error::{Error, Result};

/// Address-to-bank mapping of one array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Mapping {
    /// `addr mod m`: adjacent addresses land in different banks.
    Interleave(u32),
    /// `addr div b`: contiguous runs of `b` words per bank.
    Blocksize(u32),
    /// `table[addr]`.
    Explicit(Vec<u32>),
}

impl Mapping {
    fn validate(&self) -> Result<()> {
        match self {
            Mapping::Interleave(0) => Err(Error::InvalidConfig("interleave must be >= 1".into())),
            Mapping::Blocksize(0) => Err(Error::InvalidConfig("blocksize must be >= 1".into())),
            Mapping::Explicit(t) if t.is_empty() => Err(Error::InvalidConfig("empty bank table".into())),
            _ => Ok(()),
        }
    }

    /// Number of banks needed to cover `n_addrs` addresses.
    pub fn n_banks(&self, n_addrs: usize) -> u32 {
        match self {
            Mapping::Interleave(m) => *m,
            Mapping::Blocksize(b) => (n_addrs as u32).div_ceil(*b).max(1),
            Mapping::Explicit(t) => t.iter().max().map_or(1, |&b| b + 1),
        }
    }

    /// Addresses an explicit table can resolve; unbounded for the others.
    pub(crate) fn covers(&self, n_addrs: usize) -> bool {
        match self {
            Mapping::Explicit(t) => t.len() >= n_addrs,
            _ => true,
        }
    }
}

impl fmt::Display for Mapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mapping::Interleave(m) => write!(f, "interleave={m}"),
            Mapping::Blocksize(b) => write!(f, "blocksize={b}"),
            Mapping::Explicit(t) => {
                f.write_str("explicit=")?;
                for (i, b) in t.iter().enumerate() {
                    if i > 0 {
                        f.write_str(":")?;
                    }
                    write!(f, "{b}")?;
                }
                Ok(())
            }
        }
    }
}

/// Bank that holds `addr` under `mapping`.
#[inline]
pub fn bank_of(addr: u32, mapping: &Mapping) -> u32 {
    match mapping {
        Mapping::Interleave(m) => addr % m,
        Mapping::Blocksize(b) => addr / b,
        Mapping::Explicit(t) => t[addr as usize],
    }
}

/// Issue model independent of the partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ScheduleShape {
    /// Accesses per bank per cycle, any read/write mix.
    pub ports: u32,
    /// Butterflies issued per cycle.
    pub unroll: u32,
    /// Whether write-back of an earlier group shares the cycle of the current reads.
    pub rw_overlap: bool,
    /// Groups between a group's reads and its write-back.
    pub depth: u32,
}

impl ScheduleShape {
    pub fn new(ports: u32, unroll: u32) -> Result<Self> {
        let shape = Self {
            ports,
            unroll,
            rw_overlap: true,
            depth: 1,
        };
        shape.validate()?;
        Ok(shape)
    }

    pub fn with_rw_overlap(mut self, on: bool) -> Self {
        self.rw_overlap = on;
        self
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.depth = depth;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.ports == 0 {
            return Err(Error::InvalidConfig("ports must be >= 1".into()));
        }
        if self.unroll == 0 {
            return Err(Error::InvalidConfig("unroll must be >= 1".into()));
        }
        Ok(())
    }
}

impl Default for ScheduleShape {
    fn default() -> Self {
        Self {
            ports: 2,
            unroll: 1,
            rw_overlap: true,
            depth: 1,
        }
    }
}

/// Partition of every array plus the issue model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BankConfig {
    mapping: Mapping,
    output_mapping: Option<Mapping>,
    shape: ScheduleShape,
}

impl BankConfig {
    /// `mapping` applies to every array unless an output mapping is set.
    pub fn new(mapping: Mapping, ports: u32, unroll: u32) -> Result<Self> {
        Self::with_shape(mapping, ScheduleShape::new(ports, unroll)?)
    }

    pub fn with_shape(mapping: Mapping, shape: ScheduleShape) -> Result<Self> {
        mapping.validate()?;
        shape.validate()?;
        Ok(Self {
            mapping,
            output_mapping: None,
            shape,
        })
    }

    /// Separate mapping for [`ArrayId::Output`] and [`ArrayId::Buffer`]`(1)`.
    pub fn with_output_mapping(mut self, mapping: Mapping) -> Result<Self> {
        mapping.validate()?;
        self.output_mapping = Some(mapping);
        Ok(self)
    }

    pub fn with_rw_overlap(mut self, on: bool) -> Self {
        self.shape.rw_overlap = on;
        self
    }

    pub fn with_depth(mut self, depth: u32) -> Self {
        self.shape.depth = depth;
        self
    }

    pub fn shape(&self) -> &ScheduleShape {
        &self.shape
    }

    pub fn ports(&self) -> u32 {
        self.shape.ports
    }

    pub fn unroll(&self) -> u32 {
        self.shape.unroll
    }

    pub fn mapping_for(&self, array: ArrayId) -> &Mapping {
        match array {
            ArrayId::Output | ArrayId::Buffer(1) => self.output_mapping.as_ref().unwrap_or(&self.mapping),
            _ => &self.mapping,
        }
    }

    pub fn bank_of(&self, array: ArrayId, addr: u32) -> u32 {
        bank_of(addr, self.mapping_for(array))
    }

    /// Banks per array for an address space of `n_addrs`.
    pub fn n_banks(&self, array: ArrayId, n_addrs: usize) -> u32 {
        self.mapping_for(array).n_banks(n_addrs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleave_and_blocksize() {
        let il = Mapping::Interleave(4);
        assert_eq!(bank_of(0, &il), 0);
        assert_eq!(bank_of(4, &il), 0);
        assert_eq!(bank_of(5, &il), 1);
        assert_eq!(bank_of(6, &il), 2);
        assert_eq!(bank_of(7, &il), 3);
        let bs = Mapping::Blocksize(2);
        assert_eq!(bank_of(0, &bs), bank_of(1, &bs));
        assert_ne!(bank_of(1, &bs), bank_of(2, &bs));
        assert_eq!(bs.n_banks(8), 4);
        assert_eq!(bank_of(3, &Mapping::Explicit(vec![1, 0, 0, 1])), 1);
    }

    #[test]
    fn rejects_zero_resources() {
        assert!(BankConfig::new(Mapping::Interleave(0), 2, 1).is_err());
        assert!(BankConfig::new(Mapping::Blocksize(0), 2, 1).is_err());
        assert!(BankConfig::new(Mapping::Interleave(1), 0, 1).is_err());
        assert!(BankConfig::new(Mapping::Interleave(1), 2, 0).is_err());
        assert!(BankConfig::new(Mapping::Explicit(vec![]), 2, 1).is_err());
    }

    #[test]
    fn output_mapping_override() {
        let cfg = BankConfig::new(Mapping::Blocksize(2), 2, 4)
            .unwrap()
            .with_output_mapping(Mapping::Interleave(4))
            .unwrap();
        assert_eq!(cfg.mapping_for(ArrayId::Input), &Mapping::Blocksize(2));
        assert_eq!(cfg.mapping_for(ArrayId::Output), &Mapping::Interleave(4));
        assert_eq!(cfg.mapping_for(ArrayId::Buffer(1)), &Mapping::Interleave(4));
        assert_eq!(cfg.mapping_for(ArrayId::InPlace), &Mapping::Blocksize(2));
    }

    #[test]
    fn display_forms() {
        assert_eq!(Mapping::Interleave(16).to_string(), "interleave=16");
        assert_eq!(Mapping::Explicit(vec![0, 1, 1]).to_string(), "explicit=0:1:1");
    }
}
