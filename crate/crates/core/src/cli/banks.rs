use std::path::PathBuf;

use clap::Args;

use super::{parse_variant, write_csv, CliError};
use crate::algorithms::Variant;
use crate::bankmodel::{
    feasible_partition_with, gen_trace, pease_nc_check_with, schedule, BankConfig, BankSummaryRow, Mapping,
    PartitionOutcome, ScheduleShape, DEFAULT_BUDGET,
};

#[derive(Debug, Clone, Args)]
pub struct BanksArgs {
    #[arg(long, value_parser = parse_variant)]
    pub algo: Variant,

    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub log_n: u32,

    /// Bank = addr mod M.
    #[arg(long, group = "map")]
    pub interleave: Option<u32>,

    /// Bank = addr div B.
    #[arg(long, group = "map")]
    pub blocksize: Option<u32>,

    /// Number of banks: interleaved, or the search limit with --search.
    #[arg(long, group = "map")]
    pub banks: Option<u32>,

    #[arg(long, default_value_t = 2)]
    pub ports: u32,

    /// Butterflies issued per cycle.
    #[arg(long, default_value_t = 1)]
    pub unroll: u32,

    /// Pipeline depth, in groups, between a read and its write.
    #[arg(long, default_value_t = 1)]
    pub depth: u32,

    /// Check reads and writes in separate windows.
    #[arg(long)]
    pub no_overlap: bool,

    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub target_ii: u32,

    /// Butterfly units for the pease_nc swap check; sets interleave and unroll.
    #[arg(long, conflicts_with_all = ["map", "search"])]
    pub units: Option<u32>,

    /// Search for a partition that reaches II=1.
    #[arg(long)]
    pub search: bool,

    #[arg(long)]
    pub csv: Option<PathBuf>,
}

impl BanksArgs {
    fn mapping(&self) -> Mapping {
        match (self.interleave, self.blocksize, self.banks) {
            (Some(m), _, _) => Mapping::Interleave(m),
            (_, Some(b), _) => Mapping::Blocksize(b),
            (_, _, Some(n)) => Mapping::Interleave(n),
            _ => Mapping::Interleave(1),
        }
    }
}

pub fn cmd_banks(args: &BanksArgs) -> Result<(), CliError> {
    let trace = gen_trace(args.algo, args.log_n)?;
    let n = trace.n();
    let (mapping, unroll) = match args.units {
        Some(u) => {
            if args.algo != Variant::PeaseNc {
                return Err(CliError::Usage("--units applies to pease_nc only".into()));
            }
            if !u.is_power_of_two() || u as usize > n / 2 {
                return Err(CliError::Usage(format!(
                    "--units {u} must be a power of two no larger than {}",
                    n / 2
                )));
            }
            (Mapping::Interleave(u), u)
        }
        None => (args.mapping(), args.unroll),
    };
    let shape = ScheduleShape::new(args.ports, unroll)?
        .with_rw_overlap(!args.no_overlap)
        .with_depth(args.depth);
    let cfg = BankConfig::with_shape(mapping, shape)?;
    let report = schedule(&trace, &cfg, args.target_ii)?;
    println!("mapping     {} (ports={}, unroll={})", cfg.mapping_for(trace.arrays().into_iter().next().unwrap()), args.ports, unroll);
    print!("{report}");
    let mut row = BankSummaryRow::new(&report, &cfg);

    if args.units.is_some() {
        let check = pease_nc_check_with(args.log_n, &cfg)?;
        let per_stage: Vec<String> = check.stage_ii.iter().map(u32::to_string).collect();
        println!("stage II    {}", per_stage.join(" "));
        println!("identical   {}", check.identical_partitions);
        println!("swap-safe   {}", check.swap_safe);
        row = row.with_detail(format!("swap_safe={}", check.swap_safe));
    }

    if args.search {
        let limit = args.banks.unwrap_or_else(|| mapping_banks(&cfg, n));
        match feasible_partition_with(&trace, limit, &shape, DEFAULT_BUDGET)? {
            PartitionOutcome::Feasible(p) => {
                println!("search      feasible for II=1 with <= {limit} banks per array ({:?})", p.method);
                for (array, m) in &p.mappings {
                    println!("  {array:<7} {m}");
                }
                row = row.with_detail(format!("feasible<={limit}"));
            }
            PartitionOutcome::Infeasible(c) => {
                println!(
                    "search      infeasible for II=1 with {limit} banks: {} ({}, {:?}, {} nodes)",
                    c.array, c.reason, c.method, c.nodes
                );
                row = row.with_detail(format!("infeasible<={limit}"));
            }
        }
    }

    if let Some(path) = &args.csv {
        write_csv(path, &[row])?;
    }
    Ok(())
}

fn mapping_banks(cfg: &BankConfig, n: usize) -> u32 {
    cfg.mapping_for(crate::bankmodel::ArrayId::Input).n_banks(n)
}
