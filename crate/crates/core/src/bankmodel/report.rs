use std::fmt;

use serde::Serialize;

use super::config::BankConfig;
use super::schedule::ConflictReport;
use super::trace::ArrayId;

/// One CSV row summarizing a schedule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BankSummaryRow {
    pub algo: String,
    pub log_n: u32,
    pub input_mapping: String,
    pub output_mapping: String,
    pub ports: u32,
    pub unroll: u32,
    pub rw_overlap: bool,
    pub target_ii: u32,
    pub achieved_ii: u32,
    pub conflicts: usize,
    pub feasible: bool,
    /// Search or swap-check outcome, `-` when none was run.
    pub detail: String,
}

impl BankSummaryRow {
    pub fn new(report: &ConflictReport, cfg: &BankConfig) -> Self {
        Self {
            algo: report.algo.to_string(),
            log_n: report.log_n,
            input_mapping: cfg.mapping_for(ArrayId::Input).to_string(),
            output_mapping: cfg.mapping_for(ArrayId::Output).to_string(),
            ports: cfg.ports(),
            unroll: cfg.unroll(),
            rw_overlap: cfg.shape().rw_overlap,
            target_ii: report.target_ii,
            achieved_ii: report.achieved_ii,
            conflicts: report.conflicts.len(),
            feasible: report.feasible,
            detail: "-".into(),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = detail.into();
        self
    }
}

impl fmt::Display for ConflictReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "algo        {}", self.algo)?;
        writeln!(f, "size        2^{} = {}", self.log_n, 1u64 << self.log_n)?;
        writeln!(f, "target II   {}", self.target_ii)?;
        writeln!(f, "achieved II {}", self.achieved_ii)?;
        writeln!(f, "conflicts   {}", self.conflicts.len())?;
        for c in self.conflicts.iter().take(8) {
            writeln!(
                f,
                "  stage {:>2} cycle {:>5} {:<7} bank {:>3}: {} accesses",
                c.stage, c.cycle, c.array, c.bank, c.accesses
            )?;
        }
        if self.conflicts.len() > 8 {
            writeln!(f, "  ... {} more", self.conflicts.len() - 8)?;
        }
        Ok(())
    }
}
