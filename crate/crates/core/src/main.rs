//! Command-line front end: generate instances, build initial partitions,
//! refine them, and evaluate partition quality.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use edgepart::instances::{
    gen_bipartite_worstcase, gen_clique_worstcase, gen_random_powerlaw, initial_hash,
    initial_random, WorstCaseInstance,
};
use edgepart::lsg::{AssertLevel, CapacityRule};
use edgepart::partfile;
use edgepart::report::EvalReport;
use edgepart::{Alpha, Error, Graph, Partition, Result};

#[derive(Parser)]
#[command(name = "edgepart", version, about = "Balanced k-edge partition toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate synthetic graphs and reference partitions.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Build an initial partition for a graph.
    Partition(PartitionArgs),
    /// Refine a partition in place and report the improvement.
    Refine(RefineArgs),
    /// Evaluate a partition: replication factor, balance, block counts.
    Eval(EvalArgs),
    /// Normalize an edge list and write it back out.
    Dump {
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Subcommand)]
enum GenFamily {
    /// Disjoint cliques whose adversarial partition has RF = average degree.
    CliqueWorstcase {
        #[arg(long)]
        p: usize,
        /// Output prefix; writes <out>.el, <out>.optimal.part, <out>.adversarial.part.
        #[arg(long)]
        out: PathBuf,
    },
    /// Disjoint complete bipartite graphs, adversarial RF = (k^2+1)/(k+1).
    BipartiteWorstcase {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Random simple graph with a power-law degree skew.
    Powerlaw {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 2.5)]
        exponent: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct PartitionArgs {
    graph: PathBuf,
    #[arg(long, default_value_t = 64)]
    k: usize,
    #[arg(long, default_value = "1.1")]
    alpha: Alpha,
    #[arg(long, value_enum, default_value_t = Method::Random)]
    method: Method,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Random,
    Hash,
}

#[derive(Args)]
struct RefineArgs {
    graph: PathBuf,
    partition: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::LsgLsf)]
    algo: Algo,
    #[arg(long, default_value = "1.1")]
    alpha: Alpha,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Round limit for the flow refiner; defaults to 200 * k.
    #[arg(long)]
    max_rounds: Option<usize>,
    #[arg(long, default_value_t = 50)]
    stagnation_rounds: usize,
    /// Wall-clock budget for the flow refiner, in seconds.
    #[arg(long, default_value_t = 60)]
    time_budget: u64,
    #[arg(long, value_enum, default_value_t = CapacityArg::Edges)]
    capacity_rule: CapacityArg,
    /// Full mode re-verifies bookkeeping after every committed adjustment.
    #[arg(long, value_enum, default_value_t = AssertArg::Off)]
    assert_level: AssertArg,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
    /// Report destination; falls back to $EDGEPART_REPORT_DIR, then stdout.
    #[arg(long)]
    report_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Lsg,
    Lsf,
    #[value(name = "lsg+lsf")]
    LsgLsf,
}

#[derive(Clone, Copy, ValueEnum)]
enum CapacityArg {
    Edges,
    Vertices,
}

#[derive(Clone, Copy, ValueEnum)]
enum AssertArg {
    Off,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct EvalArgs {
    graph: PathBuf,
    partition: PathBuf,
    #[arg(long, default_value = "1.1")]
    alpha: Alpha,
    /// Part count; required when the partition file has no k= header.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
    report: ReportFormat,
    #[arg(long)]
    report_out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { family } => gen(family),
        Command::Partition(args) => partition(args),
        Command::Refine(args) => refine(args),
        Command::Eval(args) => eval(args),
        Command::Dump { graph, out } => {
            let (g, log) = Graph::load_edge_list_path(&graph)?;
            g.write_edge_list_path(&out)?;
            println!(
                "normalized {}: n={} m={} (dropped {} loops, {} duplicates)",
                graph.display(),
                g.vertex_count(),
                g.edge_count(),
                log.loops_dropped,
                log.duplicates_dropped
            );
            Ok(())
        }
    }
}

fn write_instance(inst: &WorstCaseInstance, prefix: &Path) -> Result<()> {
    let stem = prefix.to_string_lossy();
    let graph_path = PathBuf::from(format!("{stem}.el"));
    let optimal_path = PathBuf::from(format!("{stem}.optimal.part"));
    let adversarial_path = PathBuf::from(format!("{stem}.adversarial.part"));
    inst.graph.write_edge_list_path(&graph_path)?;
    partfile::write_partition_path(&optimal_path, inst.k, &inst.optimal)?;
    partfile::write_partition_path(&adversarial_path, inst.k, &inst.adversarial)?;
    println!(
        "wrote {} (n={} m={}), {}, {}",
        graph_path.display(),
        inst.graph.vertex_count(),
        inst.graph.edge_count(),
        optimal_path.display(),
        adversarial_path.display()
    );
    Ok(())
}

fn gen(family: GenFamily) -> Result<()> {
    match family {
        GenFamily::CliqueWorstcase { p, out } => write_instance(&gen_clique_worstcase(p)?, &out),
        GenFamily::BipartiteWorstcase { k, out } => {
            write_instance(&gen_bipartite_worstcase(k)?, &out)
        }
        GenFamily::Powerlaw { n, m, exponent, seed, out } => {
            let g = gen_random_powerlaw(n, m, exponent, seed)?;
            g.write_edge_list_path(&out)?;
            println!("wrote {} (n={} m={})", out.display(), g.vertex_count(), g.edge_count());
            Ok(())
        }
    }
}

fn partition(args: PartitionArgs) -> Result<()> {
    if args.k == 0 {
        return Err(Error::InvalidParam("k must be at least 1".into()));
    }
    let (g, _) = Graph::load_edge_list_path(&args.graph)?;
    let assign = match args.method {
        Method::Random => initial_random(&g, args.k, args.seed),
        Method::Hash => initial_hash(&g, args.k),
    };
    // Sanity: both constructions are balanced for any alpha >= 1.
    let p = Partition::new(Arc::new(g), args.k, args.alpha, assign)?;
    assert_balanced(&p)?;
    partfile::write_partition_path(&args.out, args.k, p.assignment())?;
    println!(
        "wrote {} (k={}, rf={:.4})",
        args.out.display(),
        args.k,
        p.replication_factor()
    );
    Ok(())
}

fn assert_balanced(p: &Partition) -> Result<()> {
    if let Some((part, &size)) = p.part_sizes().iter().enumerate().find(|&(_, &s)| s > p.capacity())
    {
        return Err(Error::Unbalanced { part, size, cap: p.capacity() });
    }
    Ok(())
}

fn load_partitioned(
    graph: &Path,
    partition: &Path,
    alpha: Alpha,
    k_flag: Option<usize>,
) -> Result<Partition> {
    let (g, _) = Graph::load_edge_list_path(graph)?;
    let (assign, header_k) = partfile::read_partition_path(partition, &g)?;
    let k = match (header_k, k_flag) {
        (Some(h), Some(f)) if h != f => {
            return Err(Error::PartitionFile(format!(
                "--k {f} conflicts with the file header k={h}"
            )))
        }
        (Some(h), _) => h,
        (None, Some(f)) => f,
        (None, None) => assign.iter().max().map_or(1, |&p| p + 1),
    };
    Partition::new(Arc::new(g), k, alpha, assign)
}

fn refine(args: RefineArgs) -> Result<()> {
    let mut p = load_partitioned(&args.graph, &args.partition, args.alpha, None)?;
    assert_balanced(&p)?;

    let assert_level = match args.assert_level {
        AssertArg::Off => AssertLevel::Off,
        AssertArg::Full => AssertLevel::Full,
    };
    let lsg_cfg = edgepart::lsg::LsgConfig {
        seed: args.seed,
        assert_level,
        capacity_rule: match args.capacity_rule {
            CapacityArg::Edges => CapacityRule::EdgeCount,
            CapacityArg::Vertices => CapacityRule::VertexCount,
        },
    };
    let lsf_cfg = edgepart::lsf::LsfConfig {
        seed: args.seed,
        max_rounds: args.max_rounds,
        stagnation_rounds: args.stagnation_rounds,
        time_budget: Some(Duration::from_secs(args.time_budget)),
        assert_level,
    };

    let report = match args.algo {
        Algo::Lsg => edgepart::lsg::refine(&mut p, &lsg_cfg),
        Algo::Lsf => edgepart::lsf::refine(&mut p, &lsf_cfg),
        Algo::LsgLsf => {
            let mut report = edgepart::lsg::refine(&mut p, &lsg_cfg);
            let followup = edgepart::lsf::refine(&mut p, &lsf_cfg);
            report.merge_followup(&followup);
            report
        }
    };

    partfile::write_partition_path(&args.out, p.k(), p.assignment())?;
    let body = match args.report {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
    };
    emit_report(&body, args.report_out.as_deref(), &args.out, args.report)?;
    println!(
        "refined {} with {}: rf {:.6} -> {:.6} (improvement {:.2}%)",
        args.partition.display(),
        report.algo,
        report.rf_before,
        report.rf_after,
        report.improvement_pct
    );
    Ok(())
}

fn eval(args: EvalArgs) -> Result<()> {
    let p = load_partitioned(&args.graph, &args.partition, args.alpha, args.k)?;
    let report = EvalReport::from_partition(&p);
    let body = match args.report {
        ReportFormat::Json => report.to_json(),
        ReportFormat::Csv => report.to_csv(),
    };
    emit_report(&body, args.report_out.as_deref(), &args.partition, args.report)?;
    Ok(())
}

/// Precedence: explicit --report-out, then $EDGEPART_REPORT_DIR with a
/// name derived from the subject path, then stdout.
fn emit_report(
    body: &str,
    report_out: Option<&Path>,
    subject: &Path,
    format: ReportFormat,
) -> Result<()> {
    let target: Option<PathBuf> = match report_out {
        Some(path) => Some(path.to_path_buf()),
        None => std::env::var_os("EDGEPART_REPORT_DIR").map(|dir| {
            let stem = subject.file_stem().unwrap_or_default().to_string_lossy().to_string();
            let ext = match format {
                ReportFormat::Json => "json",
                ReportFormat::Csv => "csv",
            };
            PathBuf::from(dir).join(format!("{stem}.report.{ext}"))
        }),
    };
    match target {
        Some(path) => {
            std::fs::write(&path, body)?;
            println!("report written to {}", path.display());
        }
        None => print!("{body}"),
    }
    Ok(())
}
