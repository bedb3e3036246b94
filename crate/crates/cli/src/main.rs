use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;
use walkdir::WalkDir;

use snark_designs::catalog::{catalog_integrity, SnarkId};
use snark_designs::design::{verify_design, DesignRecord, PiecewiseModularMap};
use snark_designs::formats::{
    emit_design, emit_report_machine, parse_design, parse_host_spec, parse_map_spec, MachineReport,
};
use snark_designs::host::LayoutId;
use snark_designs::search::{search, Candidate, Schedule, SearchOutcome, SearchSpec};
use snark_designs::spectrum::{admissible_residues, theorem_check, DesignParams, Ingredient, SlotStatus};

/// Verify and search for decompositions of complete and multipartite graphs
/// into 24-vertex snarks.
#[derive(Parser)]
#[command(name = "snarkdes", version)]
struct Cli {
    /// Report rendering.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on the built-in snark catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Verify one design file.
    Verify { file: PathBuf },
    /// Verify every `.design` file below a directory.
    VerifyAll {
        dir: PathBuf,
        /// Worker threads (default: available cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Residues mod the period admitted by the divisibility conditions.
    Spectrum {
        /// Vertices of the block graph.
        #[arg(long)]
        v: u64,
        /// Edges of the block graph.
        #[arg(long)]
        e: u64,
        /// Common vertex degree.
        #[arg(long)]
        d: u64,
    },
    /// Anneal base blocks for a snark on a host.
    Search(SearchArgs),
    /// Ingredient ledger for all 38 snarks from the designs below a directory.
    Report {
        dir: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    /// Certify all 38 graphs and check pairwise non-isomorphism.
    Check,
}

#[derive(clap::Args)]
struct SearchArgs {
    /// Snark id, e.g. G7. Taken from --init when omitted.
    #[arg(long)]
    snark: Option<SnarkId>,
    /// Layout id (k12x3, ...) or `complete N [inf]`. Taken from --init when omitted.
    #[arg(long)]
    host: Option<String>,
    /// One map per base block, e.g. `(0,135,3) fix inf`. Repeat per block.
    #[arg(long)]
    plan: Vec<String>,
    /// Start from the blocks (and, by default, the snark, host and plan) of this design.
    #[arg(long)]
    init: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Move evaluations across all workers.
    #[arg(long)]
    budget: u64,
    /// Write the found design, or the best candidate on exhaustion.
    #[arg(long)]
    emit: Option<PathBuf>,
    /// Record id for --emit.
    #[arg(long)]
    id: Option<String>,
    /// Parallel restarts (default: available cores). Use 1 for reproducible runs.
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long, default_value_t = Schedule::default().initial_temperature)]
    temperature: f64,
    /// Temperature factor per batch of accepted moves.
    #[arg(long, default_value_t = Schedule::default().cooling)]
    cooling: f64,
    #[arg(long, default_value_t = Schedule::default().batch)]
    batch: u64,
    /// Restart after this many moves without a new best.
    #[arg(long, default_value_t = Schedule::default().restart_after)]
    restart_after: u64,
}

/// Failure to run at all: bad input, unreadable files.
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Run = Result<bool, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    let outcome = match cli.command {
        Command::Catalog { action: CatalogAction::Check } => catalog_check(format),
        Command::Verify { file } => verify(&file, format),
        Command::VerifyAll { dir, jobs } => with_jobs(jobs, || verify_all(&dir, format)),
        Command::Spectrum { v, e, d } => spectrum(v, e, d, format),
        Command::Search(args) => run_search(args, format),
        Command::Report { dir, jobs } => with_jobs(jobs, || report(&dir, format)),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn with_jobs(jobs: Option<usize>, f: impl FnOnce() -> Run + Send) -> Run {
    match jobs {
        Some(0) => Err(UsageError("--jobs must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build()?.install(f),
        None => f(),
    }
}

fn read_design(path: &Path) -> Result<DesignRecord, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_design(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn design_files(dir: &Path) -> Result<Vec<PathBuf>, UsageError> {
    if !dir.is_dir() {
        return Err(UsageError(format!("{}: not a directory", dir.display())));
    }
    let mut paths = Vec::new();
    for entry in WalkDir::new(dir) {
        let entry = entry?;
        if entry.file_type().is_file() && entry.path().extension().is_some_and(|e| e == "design") {
            paths.push(entry.into_path());
        }
    }
    paths.sort();
    Ok(paths)
}

fn catalog_check(format: Format) -> Run {
    let report = catalog_integrity();
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&report)?),
        Format::Human => {
            for (k, r) in report.reports.iter().enumerate() {
                let girth = r.girth.map_or("-".into(), |g| g.to_string());
                let index = r.chromatic_index.map_or("-".into(), |c| c.to_string());
                let verdict = match r.defect() {
                    None => "non-trivial snark".to_string(),
                    Some(defect) => defect.to_string(),
                };
                println!("G{:<3} girth {girth}  chromatic index {index}  {verdict}", k + 1);
            }
            match &report.failure {
                None => println!(
                    "catalog PASS: {} graphs, {} pairs non-isomorphic",
                    report.graphs_checked, report.pairs_checked
                ),
                Some(failure) => println!("catalog FAIL: {failure}"),
            }
        }
    }
    Ok(report.pass())
}

fn verify(file: &Path, format: Format) -> Run {
    let report = verify_design(&read_design(file)?);
    match format {
        Format::Machine => println!("{}", emit_report_machine(&report)),
        Format::Human => print!("{report}"),
    }
    Ok(report.pass)
}

fn verify_all(dir: &Path, format: Format) -> Run {
    let paths = design_files(dir)?;
    let results: Vec<(PathBuf, Result<_, UsageError>)> = paths
        .into_par_iter()
        .map(|p| {
            let report = read_design(&p).map(|r| verify_design(&r));
            (p, report)
        })
        .collect();
    let mut unreadable = Vec::new();
    let mut reports = Vec::new();
    for (path, result) in results {
        match result {
            Ok(report) => reports.push((path, report)),
            Err(UsageError(message)) => unreadable.push(message),
        }
    }
    let verified = reports.iter().filter(|(_, r)| r.pass).count();
    let failed = reports.len() - verified;
    match format {
        Format::Machine => {
            let items: Vec<MachineReport> = reports.iter().map(|(_, r)| MachineReport::from(r)).collect();
            let summary = json!({
                "verified": verified,
                "failed": failed,
                "unreadable": unreadable,
                "reports": items,
            });
            println!("{summary}");
        }
        Format::Human => {
            for (path, report) in reports.iter().filter(|(_, r)| !r.pass) {
                println!("{}", path.display());
                print!("{report}");
            }
            for message in &unreadable {
                println!("unreadable: {message}");
            }
            if failed == 0 {
                println!("{verified} records verified");
            } else {
                println!("{verified} records verified, {failed} failed");
            }
        }
    }
    if !unreadable.is_empty() {
        return Err(UsageError(format!("{} file(s) could not be read or parsed", unreadable.len())));
    }
    Ok(failed == 0 && verified > 0)
}

fn spectrum(v: u64, e: u64, d: u64, format: Format) -> Run {
    let spectrum = admissible_residues(&DesignParams::new(v, e, d)?);
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&spectrum)?),
        Format::Human => println!("{spectrum}"),
    }
    Ok(true)
}

fn report(dir: &Path, format: Format) -> Run {
    let records = design_files(dir)?.iter().map(|p| read_design(p)).collect::<Result<Vec<_>, _>>()?;
    let report = theorem_check(&records);
    match format {
        Format::Machine => println!("{}", serde_json::to_string(&report)?),
        Format::Human => {
            let mut table = format!("{:<6}", "snark");
            for ingredient in Ingredient::ALL {
                let _ = write!(table, "{:>11}", ingredient.host_id());
            }
            table.push('\n');
            for row in &report.rows {
                let _ = write!(table, "{:<6}", row.snark);
                for status in row.slots.values() {
                    let cell = match status {
                        SlotStatus::Verified { .. } => "ok",
                        SlotStatus::Missing => "missing",
                        SlotStatus::Failed { .. } => "FAIL",
                    };
                    let _ = write!(table, "{cell:>11}");
                }
                table.push('\n');
            }
            print!("{table}");
            for problem in &report.problems {
                println!("problem: {problem}");
            }
            println!("spectrum (24, 36, 3): {}", report.spectrum);
            println!("{}", report.statement);
        }
    }
    Ok(report.pass)
}

fn parse_host_arg(text: &str) -> Result<snark_designs::HostGraph, UsageError> {
    let spec = if text.parse::<LayoutId>().is_ok() { format!("multipartite {text}") } else { text.to_string() };
    Ok(parse_host_spec(&spec)?)
}

fn missing(what: &str) -> ! {
    Cli::command().error(ErrorKind::MissingRequiredArgument, format!("{what} is required without --init")).exit()
}

fn run_search(args: SearchArgs, format: Format) -> Run {
    let initial = args.init.as_deref().map(read_design).transpose()?;
    let snark = args.snark.or(initial.as_ref().map(|r| r.snark)).unwrap_or_else(|| missing("--snark"));
    let host = match (&args.host, &initial) {
        (Some(text), _) => parse_host_arg(text)?,
        (None, Some(record)) => record.host.clone(),
        (None, None) => missing("--host"),
    };
    let plan: Vec<PiecewiseModularMap> = match (&args.plan[..], &initial) {
        ([], Some(record)) => record.blocks.iter().map(|b| record.maps[b.map].map.clone()).collect(),
        ([], None) => missing("--plan"),
        (specs, _) => specs.iter().map(|s| parse_map_spec(s, &host)).collect::<Result<_, _>>()?,
    };
    let schedule = Schedule {
        initial_temperature: args.temperature,
        cooling: args.cooling,
        batch: args.batch,
        restart_after: args.restart_after,
    };
    let workers = args.jobs.unwrap_or_else(rayon::current_num_threads).max(1);
    let mut spec =
        SearchSpec::new(snark, host, plan, args.budget, args.seed)?.with_schedule(schedule).with_workers(workers);
    if let Some(record) = &initial {
        spec = spec.with_initial(Candidate { tuples: record.blocks.iter().map(|b| b.tuple.clone()).collect() })?;
    }

    let outcome = search(&spec);
    let id = args.id.unwrap_or_else(|| format!("search-{snark}-seed{}", args.seed));
    let (found, design, summary) = match &outcome {
        SearchOutcome::Found { record, report, evaluations, .. } => {
            let mut record = record.clone();
            record.id = id;
            let summary = match format {
                Format::Machine => json!({
                    "found": true,
                    "evaluations": evaluations,
                    "report": MachineReport::from(report),
                })
                .to_string(),
                Format::Human => format!("found after {evaluations} evaluations\n{}", report.to_string().trim_end()),
            };
            (true, emit_design(&record), summary)
        }
        SearchOutcome::Exhausted { best_cost, best, evaluations } => {
            let record = spec.to_record(best, &id);
            let summary = match format {
                Format::Machine => {
                    json!({ "found": false, "evaluations": evaluations, "best_cost": best_cost }).to_string()
                }
                Format::Human => format!("exhausted after {evaluations} evaluations, best cost {best_cost}"),
            };
            let design = format!("# best candidate, cost {best_cost}\n{}", emit_design(&record));
            (false, design, summary)
        }
    };
    println!("{summary}");
    if let Some(path) = &args.emit {
        fs::write(path, design).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    }
    Ok(found)
}
