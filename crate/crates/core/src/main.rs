use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use percop::constructions::{self, ConstructionSpecimen};
use percop::corners::find_k_temporal_corners;
use percop::io::{self, InstanceFile};
use percop::search::{self, named, SearchSpec, SearchStatus};
use percop::solver::{
    cop_number_cap, is_k_copwin, policy::verify_policy, trace, triple, SolverConfig,
};
use percop::table::{self, RowStatus, TableOptions};
use percop::treewidth::{bag_strategy, exact_treewidth, smooth};
use percop::{Error, PeriodicGraph};

#[derive(Parser)]
#[command(name = "percop", version, about = "Cops and Robber on periodic temporal graphs")]
struct Cli {
    /// Print a readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cop number with an optimal placement.
    Solve {
        file: PathBuf,
        /// Stop after this many cops.
        #[arg(long)]
        max_cops: Option<usize>,
        /// Write an optimal capture transcript here.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Footprint, maximum snapshot and periodic cop numbers.
    Triple { file: PathBuf },
    /// k-temporal corners.
    Corners {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Emit a built-in construction as an instance file.
    Generate {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Step order for circulant_123, comma separated.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<usize>>,
        /// Append this many extra step pairs (odd-period circulant extension).
        #[arg(long)]
        extend: Option<usize>,
        /// Pad to this many vertices.
        #[arg(long)]
        pad: Option<usize>,
    },
    /// Search for an instance matching a spec.
    Search {
        /// Built-in spec name or path to a spec file.
        #[arg(long)]
        spec: String,
        #[arg(long)]
        seed: Option<u64>,
        /// Wall-clock budget in seconds.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the witness to this file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the witness to DIR/<spec name>.json.
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
    /// Exact treewidth of the footprint with a smooth decomposition.
    Treewidth { file: PathBuf },
    /// Checks cop number ≤ treewidth + 1 and runs the bag strategy.
    TwBound { file: PathBuf },
    /// Exhaustive scan for small 3-copwin instances.
    Scan {
        #[arg(long, default_value_t = 4)]
        max_n: usize,
        #[arg(long, default_value_t = 3)]
        max_period: usize,
    },
    /// Checks every table row against its generator or witness.
    VerifyTable {
        #[arg(long)]
        skip_search_rows: bool,
        #[arg(long)]
        witness_dir: Option<PathBuf>,
    },
}

/// Output plus exit status.
struct Report {
    value: Value,
    status: u8,
    human: Option<String>,
}

impl Report {
    fn ok(value: Value) -> Self {
        Report { value, status: 0, human: None }
    }
}

fn load(path: &Path) -> percop::Result<InstanceFile> {
    io::read_file(path)
}

fn write(path: &Path, text: &str) -> percop::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn solve(file: &Path, max_cops: Option<usize>, trace_out: Option<&Path>) -> percop::Result<Report> {
    let pg = load(file)?.instance;
    let config = SolverConfig::from_env();
    let cap = cop_number_cap(&pg);
    let limit = max_cops.map_or(cap, |m| m.min(cap));
    let mut checked = Vec::new();
    for k in 1..=limit {
        let result = is_k_copwin(&pg, k, &config)?;
        checked.push(json!({"k": k, "copwin": result.copwin, "states": result.state_count()}));
        if !result.copwin {
            continue;
        }
        let placement = result.initial_placement.clone().expect("copwin has a placement");
        let mut value = json!({
            "copnum": k,
            "placement": placement,
            "capture_bound": result.placement_value(&placement),
            "winning_placements": result.winning_placement_count(),
            "checked": checked,
        });
        if let Some(out) = trace_out {
            let tr = trace::extract_trace(&result, None, &trace::RobberPlay::Optimal)?;
            let tv = serde_json::to_value(&tr).expect("traces serialize");
            write(out, &(pretty(&tv) + "\n"))?;
            value["trace"] = json!(out.display().to_string());
        }
        return Ok(Report::ok(value));
    }
    Ok(Report::ok(json!({
        "copnum": null,
        "exceeds": limit,
        "checked": checked,
    })))
}

fn triple_cmd(file: &Path) -> percop::Result<Report> {
    let f = load(file)?;
    let tr = triple(&f.instance, &SolverConfig::from_env())?;
    let mut value = serde_json::to_value(&tr).expect("triples serialize");
    let mut status = 0;
    if let Some(e) = f.expected {
        let ok = e.matches(tr.as_tuple());
        value["expected_match"] = json!(ok);
        if !ok {
            status = 2;
        }
    }
    Ok(Report { value, status, human: None })
}

fn corners(file: &Path, k: usize) -> percop::Result<Report> {
    let pg = load(file)?.instance;
    let found = find_k_temporal_corners(&pg, k)?;
    Ok(Report::ok(json!({"k": k, "count": found.len(), "corners": found})))
}

fn generate(
    name: &str,
    out: Option<&Path>,
    steps: Option<&[usize]>,
    extend: Option<usize>,
    pad: Option<usize>,
) -> percop::Result<Report> {
    let mut specimen: ConstructionSpecimen = match steps {
        Some(s) if name == "circulant_123" => constructions::circulant_123(s)?,
        Some(_) => return Err(Error::Construction("--steps applies to circulant_123 only".into())),
        None => constructions::by_name(name)?,
    };
    if let Some(extra) = extend {
        specimen = constructions::extend_odd(&specimen, extra)?;
    }
    if let Some(target) = pad {
        specimen.instance = specimen.instance.pad(target, 0)?;
    }
    let file = InstanceFile::with_expected(specimen.instance, specimen.expected);
    let text = io::to_canonical_string(&file);
    let mut value = json!({"name": name});
    match out {
        Some(path) => {
            write(path, &text)?;
            value["out"] = json!(path.display().to_string());
        }
        None => value["instance"] = io::to_value(&file),
    }
    Ok(Report::ok(value))
}

fn search_cmd(
    spec: &str,
    seed: Option<u64>,
    budget: Option<u64>,
    out: Option<&Path>,
    witness_dir: Option<&Path>,
) -> percop::Result<Report> {
    let mut spec: SearchSpec = if named::NAMES.contains(&spec) {
        named::named(spec)?
    } else {
        SearchSpec::from_json(&std::fs::read_to_string(spec)?)?
    };
    if let Some(s) = seed {
        spec.seed = s;
    }
    if let Some(b) = budget {
        spec.budget_secs = b;
    }
    let outcome = search::search(&spec)?;
    let value = outcome.to_json();
    if let Some(w) = &outcome.witness {
        let text = pretty(&w.to_json()) + "\n";
        let dir_path = witness_dir.map(|d| table::witness_path(d, &spec.name));
        for path in out.into_iter().map(Path::to_path_buf).chain(dir_path) {
            write(&path, &text)?;
        }
    }
    let status = match outcome.status {
        SearchStatus::Found => 0,
        SearchStatus::Exhausted => 2,
        SearchStatus::Budget => 3,
    };
    Ok(Report { value, status, human: None })
}

fn treewidth_cmd(file: &Path) -> percop::Result<Report> {
    let fp = load(file)?.instance.footprint();
    let (width, td) = exact_treewidth(&fp)?;
    let smoothed = smooth(&td, &fp)?;
    Ok(Report::ok(json!({
        "treewidth": width,
        "decomposition": td,
        "smooth_decomposition": smoothed,
    })))
}

fn tw_bound(file: &Path) -> percop::Result<Report> {
    let pg: PeriodicGraph = load(file)?.instance;
    let fp = pg.footprint();
    let (width, td) = exact_treewidth(&fp)?;
    let copnum = percop::solver::cop_number(&pg, &SolverConfig::from_env())?;
    let holds = copnum <= width + 1;
    let strategy = if pg.is_temporally_connected() {
        let s = bag_strategy(&pg, &smooth(&td, &fp)?)?;
        let v = verify_policy(&pg, &s)?;
        json!({"wins": v.wins, "max_capture_time": v.max_capture_time, "states": v.states_explored})
    } else {
        Value::Null
    };
    let wins = strategy.get("wins").and_then(Value::as_bool).unwrap_or(true);
    Ok(Report {
        value: json!({
            "treewidth": width,
            "bound": width + 1,
            "copnum": copnum,
            "holds": holds,
            "bag_strategy": strategy,
        }),
        status: if holds && wins { 0 } else { 2 },
        human: None,
    })
}

fn scan_cmd(max_n: usize, max_period: usize) -> percop::Result<Report> {
    let report = search::smallest_3copwin_scan(max_n, max_period)?;
    Ok(Report::ok(serde_json::to_value(&report).expect("reports serialize")))
}

fn verify_table(skip: bool, witness_dir: Option<PathBuf>) -> percop::Result<Report> {
    let options = TableOptions {
        skip_search_rows: skip,
        witness_dir: witness_dir.unwrap_or_else(table::default_witness_dir),
    };
    let report = table::verify_table(&options)?;
    let mut lines = vec![format!("{:<8} {:<13} {:<10} {:<16} {}", "row", "status", "source", "name", "computed")];
    for r in &report.rows {
        let status = serde_json::to_value(r.status).expect("statuses serialize");
        let source = serde_json::to_value(r.source).expect("sources serialize");
        let [a, b, c] = r.triple;
        let computed = r.computed.map_or("-".to_string(), |[x, y, z]| format!("({x},{y},{z})"));
        let mut line = format!(
            "({a},{b},{c})  {:<13} {:<10} {:<16} {computed}",
            status.as_str().unwrap_or_default(),
            source.as_str().unwrap_or_default(),
            r.name.as_deref().unwrap_or("-"),
        );
        if matches!(r.status, RowStatus::Fail | RowStatus::Missing) {
            if let Some(note) = &r.note {
                line.push_str(&format!("  {note}"));
            }
        }
        lines.push(line);
    }
    let c = &report.counts;
    lines.push(format!(
        "pass {} fail {} missing {} skipped {} external {} undetermined {}",
        c.pass, c.fail, c.missing, c.skipped, c.external, c.undetermined
    ));
    Ok(Report {
        status: if report.ok() { 0 } else { 2 },
        value: serde_json::to_value(&report).expect("reports serialize"),
        human: Some(lines.join("\n")),
    })
}

fn human(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{k}: {s}"),
                other => format!("{k}: {other}"),
            })
            .collect::<Vec<_>>()
            .join("\n"),
        other => other.to_string(),
    }
}

fn run(cli: Cli) -> percop::Result<Report> {
    match cli.command {
        Command::Solve { file, max_cops, trace } => solve(&file, max_cops, trace.as_deref()),
        Command::Triple { file } => triple_cmd(&file),
        Command::Corners { file, k } => corners(&file, k),
        Command::Generate { name, out, steps, extend, pad } => {
            generate(&name, out.as_deref(), steps.as_deref(), extend, pad)
        }
        Command::Search { spec, seed, budget, out, witness_dir } => {
            search_cmd(&spec, seed, budget, out.as_deref(), witness_dir.as_deref())
        }
        Command::Treewidth { file } => treewidth_cmd(&file),
        Command::TwBound { file } => tw_bound(&file),
        Command::Scan { max_n, max_period } => scan_cmd(max_n, max_period),
        Command::VerifyTable { skip_search_rows, witness_dir } => {
            verify_table(skip_search_rows, witness_dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let as_human = cli.human;
    match run(cli) {
        Ok(report) => {
            if as_human {
                println!("{}", report.human.unwrap_or_else(|| human(&report.value)));
            } else {
                println!("{}", report.value);
            }
            ExitCode::from(report.status)
        }
        Err(e) => {
            let code = match e {
                Error::StateBudget { .. }
                | Error::CornerBudget { .. }
                | Error::DominationLimit { .. }
                | Error::Limit(_) => 3,
                _ => 1,
            };
            if as_human {
                eprintln!("error: {e}");
            } else {
                eprintln!("{}", json!({"error": e.to_string()}));
            }
            ExitCode::from(code)
        }
    }
}
