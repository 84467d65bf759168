mod manifest;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use hybridsizer::model::{LoadSpec, ResourceSpec, SeriesSource};
use hybridsizer::optimize::{assess, sensitivity_sweep, sweep_winners, SweepSpec};
use hybridsizer::report::{
    format_money, render_timeseries, OptimizationSummary, SimulationSummary, CHANNELS,
};
use hybridsizer::{
    evaluate_all, load_bundle, render_table, validate_scenario, DispatchResult, Evaluation,
    RankedDesign, ScenarioConfig, SearchSpace, TableId,
};

use manifest::RunManifest;

const PRECEDENCE: &str = "\
Settings are resolved as: command-line flag, then environment variable
(HYBRIDSIZER_JOBS, HYBRIDSIZER_OUT), then the value in the input file, then
the built-in default.

Exit status: 0 success, 1 I/O failure, 2 invalid configuration or failed
validation.";

#[derive(Parser)]
#[command(name = "hybridsizer", version, about = "Hybrid microgrid sizing and dispatch", after_help = PRECEDENCE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct OutArgs {
    /// Run directory for tables, traces, summaries and the manifest.
    #[arg(long, env = "HYBRIDSIZER_OUT", default_value = "out")]
    out: PathBuf,
}

#[derive(Args)]
struct SearchArgs {
    /// Search-space file.
    space: PathBuf,
    /// Directory the resource and load CSVs are read from [default: the
    /// directory of the input file].
    #[arg(long)]
    resources: Option<PathBuf>,
    /// Worker threads; 0 uses every core. Never changes the output.
    #[arg(long, env = "HYBRIDSIZER_JOBS", default_value_t = 0)]
    jobs: usize,
    /// Reliability cap (largest unmet fraction), overriding the file.
    #[arg(long)]
    cap: Option<f64>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario for a year and cost it.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        resources: Option<PathBuf>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Evaluate every candidate of a search space and rank the feasible ones.
    Optimize(SearchArgs),
    /// Re-run the search for each value of a parameter.
    Sweep {
        #[command(flatten)]
        search: SearchArgs,
        /// Parameter path, e.g. dg.fuel_price_usd_per_l; without it the
        /// sweeps listed in the space file are run.
        #[arg(long, requires = "values")]
        parameter: Option<String>,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', requires = "parameter")]
        values: Option<Vec<f64>>,
    },
    /// Check a scenario or search-space file without simulating.
    Validate {
        file: PathBuf,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Re-render a table or a trace channel of an earlier run to stdout.
    Render {
        /// Run directory written by simulate or optimize.
        run: PathBuf,
        #[arg(long, conflicts_with = "channel", required_unless_present = "channel")]
        table: Option<String>,
        #[arg(long)]
        channel: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate { .. } => "simulate",
            Command::Optimize(_) => "optimize",
            Command::Sweep { .. } => "sweep",
            Command::Validate { .. } => "validate",
            Command::Render { .. } => "render",
        }
    }

    fn out_dir(&self) -> &Path {
        match self {
            Command::Simulate { out, .. }
            | Command::Validate { out, .. }
            | Command::Render { out, .. } => &out.out,
            Command::Optimize(s) | Command::Sweep { search: s, .. } => &s.out.out,
        }
    }
}

/// A scenario or space that parsed but broke an invariant.
#[derive(Debug)]
struct ValidationFailed;

impl fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("validation failed")
    }
}

impl std::error::Error for ValidationFailed {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ValidationFailed>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<hybridsizer::Error>() {
            return if e.is_config_error() { 2 } else { 1 };
        }
        if cause.is::<std::io::Error>() {
            return 1;
        }
        if cause.is::<serde_json::Error>() {
            return 2;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut manifest = RunManifest::new(cli.command.name());
    let outcome = run(&cli.command, &mut manifest);
    let mut code = match &outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e:#}");
            manifest.error = Some(format!("{e:#}"));
            exit_code(e)
        }
    };
    manifest.exit_code = code as i32;
    if let Err(e) = manifest.write(cli.command.out_dir()) {
        eprintln!("error: cannot write manifest: {e}");
        if code == 0 {
            code = 1;
        }
    }
    ExitCode::from(code)
}

fn run(cmd: &Command, m: &mut RunManifest) -> anyhow::Result<()> {
    match cmd {
        Command::Simulate {
            scenario,
            resources,
            out,
        } => cmd_simulate(scenario, resources.as_deref(), &out.out, m),
        Command::Optimize(args) => cmd_optimize(args, m),
        Command::Sweep {
            search,
            parameter,
            values,
        } => {
            let cli_sweep = parameter.as_ref().map(|p| SweepSpec {
                parameter: p.clone(),
                values: values.clone().unwrap_or_default(),
            });
            cmd_sweep(search, cli_sweep, m)
        }
        Command::Validate { file, .. } => cmd_validate(file, m),
        Command::Render {
            run,
            table,
            channel,
            ..
        } => cmd_render(run, table.as_deref(), channel.as_deref(), m),
    }
}

fn resources_dir(explicit: Option<&Path>, input: &Path) -> PathBuf {
    match explicit {
        Some(d) => d.to_path_buf(),
        None => input
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    }
}

fn record_series_inputs(m: &mut RunManifest, dir: &Path, load: &LoadSpec, res: &ResourceSpec) {
    let sources = [
        Some(&load.shape),
        res.ghi.as_ref(),
        res.wind.as_ref(),
        res.biomass.as_ref(),
        res.temperature.as_ref(),
    ];
    for src in sources.into_iter().flatten() {
        if let SeriesSource::File(name) = src {
            m.add_input(&dir.join(name));
        }
    }
    m.seed = res.wind_seed;
}

fn write_text(path: &Path, text: &str, m: &mut RunManifest) -> anyhow::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    m.add_output(path);
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T, m: &mut RunManifest) -> anyhow::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    write_text(path, &(text + "\n"), m)
}

fn write_tables(dir: &Path, designs: &[RankedDesign], m: &mut RunManifest) -> anyhow::Result<()> {
    for id in TableId::ALL {
        let path = dir.join("tables").join(format!("{}.csv", id.short()));
        write_text(&path, &render_table(id, designs), m)?;
    }
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> anyhow::Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| hybridsizer::Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(
        serde_json::from_str(&text).map_err(|source| hybridsizer::Error::Json {
            path: path.to_path_buf(),
            source,
        })?,
    )
}

fn cmd_simulate(
    scenario: &Path,
    resources: Option<&Path>,
    out: &Path,
    m: &mut RunManifest,
) -> anyhow::Result<()> {
    m.add_input(scenario);
    let cfg = ScenarioConfig::from_path(scenario)?;
    let dir = resources_dir(resources, scenario);
    record_series_inputs(m, &dir, &cfg.load, &cfg.resources);

    let report = validate_scenario(&cfg);
    for v in &report.violations {
        eprintln!("{v}");
    }
    if !report.is_ok() {
        return Err(ValidationFailed.into());
    }

    let bundle = load_bundle(&cfg.load, &cfg.resources, &dir)?;
    let a = assess(&cfg, &bundle)?;
    let d = &a.design;
    let cost = d.cost.clone().expect("assess always costs");

    write_tables(out, std::slice::from_ref(d), m)?;
    for channel in CHANNELS {
        let path = out.join("trace").join(format!("{channel}.csv"));
        write_text(&path, &render_timeseries(&a.result, channel)?, m)?;
    }
    write_json(&out.join("result.json"), &a.result, m)?;
    write_json(&out.join("designs.json"), &[d], m)?;
    let summary = SimulationSummary {
        engine_version: hybridsizer::ENGINE_VERSION.to_string(),
        label: d.label.clone(),
        warnings: report.warnings().map(|w| w.to_string()).collect(),
        dispatch: a.result.summary(),
        cost: cost.clone(),
        emissions: d.emissions,
        comparison: d.comparison.clone(),
    };
    write_json(&out.join("summary.json"), &summary, m)?;

    let r = &a.result;
    println!("{}", d.label);
    println!(
        "  served {:.0} kWh, unmet {:.0} kWh, excess {:.0} kWh",
        r.load_served_kwh, r.unmet_kwh, r.excess_kwh
    );
    println!("  renewable fraction {:.2}%", r.renewable_fraction * 100.0);
    println!(
        "  NPC ${}, COE ${:.4}/kWh",
        format_money(cost.npc),
        cost.coe
    );
    for v in &d.violations {
        println!("  infeasible: {v}");
    }
    Ok(())
}

fn load_space(
    args: &SearchArgs,
    m: &mut RunManifest,
) -> anyhow::Result<(SearchSpace, hybridsizer::SeriesBundle)> {
    m.add_input(&args.space);
    let mut space = SearchSpace::from_path(&args.space)?;
    let dir = resources_dir(args.resources.as_deref(), &args.space);
    record_series_inputs(m, &dir, &space.load, &space.resources);
    if let Some(cap) = args.cap {
        space.reliability_cap = cap;
    }
    space.check()?;
    let bundle = load_bundle(&space.load, &space.resources, &dir)?;
    Ok((space, bundle))
}

fn write_evaluation(dir: &Path, eval: &Evaluation, m: &mut RunManifest) -> anyhow::Result<()> {
    write_tables(dir, eval.ranked(), m)?;
    write_json(&dir.join("designs.json"), &eval.ranked(), m)?;
    write_json(
        &dir.join("summary.json"),
        &OptimizationSummary::new(eval),
        m,
    )
}

fn cmd_optimize(args: &SearchArgs, m: &mut RunManifest) -> anyhow::Result<()> {
    let (space, bundle) = load_space(args, m)?;
    let eval = evaluate_all(&space, &bundle, args.jobs)?;
    write_evaluation(&args.out.out, &eval, m)?;
    println!("{} candidates, {} feasible", eval.candidates, eval.feasible);
    if let Some(w) = eval.winner() {
        println!(
            "best: {} ({}), NPC ${}, COE ${:.4}/kWh",
            w.label,
            w.digest,
            format_money(w.npc()),
            w.coe()
        );
    }
    Ok(())
}

fn cmd_sweep(
    args: &SearchArgs,
    cli_sweep: Option<SweepSpec>,
    m: &mut RunManifest,
) -> anyhow::Result<()> {
    let (space, bundle) = load_space(args, m)?;
    let sweeps = match cli_sweep {
        Some(s) => vec![s],
        None => space.sweeps.clone(),
    };
    if sweeps.is_empty() {
        return Err(hybridsizer::Error::InvalidInput(
            "no sweep given on the command line or in the space file".into(),
        )
        .into());
    }

    let mut winners = csv::Writer::from_writer(Vec::new());
    winners.write_record([
        "parameter",
        "value",
        "feasible",
        "winner",
        "design",
        "npc_usd",
        "coe_usd_per_kwh",
    ])?;
    let mut rows = Vec::new();
    for s in &sweeps {
        let outcomes = sensitivity_sweep(&space, &bundle, &s.parameter, &s.values, args.jobs)?;
        for (k, o) in outcomes.iter().enumerate() {
            let dir = args
                .out
                .out
                .join("sweeps")
                .join(&s.parameter)
                .join(format!("{k:02}_{}", o.value));
            write_evaluation(&dir, &o.evaluation, m)?;
        }
        for row in sweep_winners(&outcomes) {
            winners.write_record([
                s.parameter.clone(),
                row.value.to_string(),
                row.feasible.to_string(),
                row.winner.clone().unwrap_or_else(|| "-".into()),
                row.label.clone().unwrap_or_else(|| "-".into()),
                row.npc.map_or_else(|| "n/a".into(), format_money),
                row.coe.map_or_else(|| "n/a".into(), |c| format!("{c:.4}")),
            ])?;
            println!(
                "{} = {}: {}",
                s.parameter,
                row.value,
                row.label.as_deref().unwrap_or("no feasible design")
            );
            rows.push((s.parameter.clone(), row));
        }
    }
    let text = String::from_utf8(winners.into_inner()?)?;
    write_text(&args.out.out.join("winners.csv"), &text, m)?;

    #[derive(Serialize)]
    struct SweepSummary<'a> {
        engine_version: &'a str,
        rows: Vec<serde_json::Value>,
    }
    let rows = rows
        .into_iter()
        .map(|(parameter, row)| {
            let mut v = serde_json::to_value(row).expect("row serializes");
            v["parameter"] = parameter.into();
            v
        })
        .collect();
    write_json(
        &args.out.out.join("summary.json"),
        &SweepSummary {
            engine_version: hybridsizer::ENGINE_VERSION,
            rows,
        },
        m,
    )
}

fn cmd_validate(file: &Path, m: &mut RunManifest) -> anyhow::Result<()> {
    m.add_input(file);
    let text = std::fs::read_to_string(file).map_err(|source| hybridsizer::Error::Io {
        path: file.to_path_buf(),
        source,
    })?;
    match ScenarioConfig::from_json_str(&text) {
        Ok(cfg) => {
            let report = validate_scenario(&cfg);
            for v in &report.violations {
                println!("{v}");
            }
            if !report.is_ok() {
                return Err(ValidationFailed.into());
            }
            println!("ok: scenario {}", cfg.label());
            Ok(())
        }
        Err(scenario_err) => match SearchSpace::from_json_str(&text) {
            Ok(space) => {
                space.check()?;
                println!("ok: search space with {} candidates", space.count());
                Ok(())
            }
            Err(_) => Err(hybridsizer::Error::Json {
                path: file.to_path_buf(),
                source: scenario_err,
            }
            .into()),
        },
    }
}

fn cmd_render(
    run: &Path,
    table: Option<&str>,
    channel: Option<&str>,
    m: &mut RunManifest,
) -> anyhow::Result<()> {
    let text = match (table, channel) {
        (Some(t), _) => {
            let id: TableId = t.parse()?;
            let path = run.join("designs.json");
            m.add_input(&path);
            let designs: Vec<RankedDesign> = read_json(&path)?;
            render_table(id, &designs)
        }
        (None, Some(c)) => {
            let path = run.join("result.json");
            m.add_input(&path);
            let result: DispatchResult = read_json(&path)?;
            render_timeseries(&result, c)?
        }
        (None, None) => bail!("one of --table or --channel is required"),
    };
    print!("{text}");
    Ok(())
}
