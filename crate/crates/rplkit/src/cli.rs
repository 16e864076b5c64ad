//! Command implementations behind the `rplkit` binary.

use std::fs::{self, File};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rplkit_core::assign::best_server;
use rplkit_core::evaluate::{sweep, SweepReport};
use rplkit_core::rpl::{build_rpl, sites_from_sectors, RplParams, Sector};

use crate::error::ToolError;
use crate::geojson;
use crate::ingest;
use crate::manifest::RunManifest;
use crate::report;
use crate::synth::{generate_network, generate_observations, ScenarioConfig};

#[derive(Debug, Parser)]
#[command(
    name = "rplkit",
    version,
    about = "Estimate and evaluate regions of plausible locations for cellular sectors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build one sector's RPL and write it as GeoJSON.
    Rpl(RplArgs),
    /// Best-server association and per-sector RPL evaluation.
    Evaluate(EvaluateArgs),
    /// Per-sector (n, M) parameter sweep with optimal-combination search.
    Sweep(SweepArgs),
    /// Generate a synthetic network and drive test from a config file.
    Synth(SynthArgs),
    /// Render a previously written evaluation table as a readable summary.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// Path loss exponent for the RPL shape.
    #[arg(long, default_value_t = 4.0)]
    pub n: f64,
    /// Number of neighbor sites averaged for the RPL size (M).
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    /// RPL scaling coefficient.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Azimuth samples on the RPL boundary.
    #[arg(long, default_value_t = 720)]
    pub grid_size: usize,
}

impl ParamArgs {
    fn to_params(&self) -> RplParams {
        RplParams { n: self.n, m_neighbors: self.m, c: self.c, grid_size: self.grid_size }
    }
}

#[derive(Debug, Args)]
pub struct RplArgs {
    /// Infrastructure CSV.
    #[arg(long)]
    pub infra: PathBuf,
    /// Sector to build, as network_id:sector_id.
    #[arg(long)]
    pub sector: String,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Output GeoJSON path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub infra: PathBuf,
    /// Measurement CSV.
    #[arg(long)]
    pub measurements: PathBuf,
    #[command(flatten)]
    pub params: ParamArgs,
    /// Restrict evaluation to these sectors (network_id:sector_id, repeatable).
    #[arg(long)]
    pub sector: Vec<String>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a per-sector GeoJSON bundle (RPL + classified points).
    #[arg(long)]
    pub geojson: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub infra: PathBuf,
    #[arg(long)]
    pub measurements: PathBuf,
    /// Exponent grid, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [2.0, 3.0, 4.0])]
    pub n_grid: Vec<f64>,
    /// Neighbor-count grid, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    pub m_grid: Vec<usize>,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub sector: Vec<String>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Scenario configuration (key = value lines).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory for infrastructure.csv and measurements.csv.
    #[arg(long)]
    pub out: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// evaluation.csv produced by the evaluate or sweep subcommand.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), ToolError> {
    match cli.command {
        Command::Rpl(args) => cmd_rpl(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Synth(args) => cmd_synth(args),
        Command::Report(args) => cmd_report(args),
    }
}

fn load_sectors(path: &Path) -> Result<Vec<Sector>, ToolError> {
    let file = File::open(path)?;
    let (sectors, diagnostics) = ingest::parse_infrastructure(file)?;
    for d in &diagnostics {
        eprintln!("{}: {d}", path.display());
    }
    if sectors.is_empty() {
        return Err(ToolError::Domain(format!("{}: no valid sectors", path.display())));
    }
    Ok(sectors)
}

fn sector_key(spec: &str) -> Result<(&str, &str), ToolError> {
    spec.split_once(':')
        .ok_or_else(|| ToolError::Domain(format!("sector spec {spec:?} is not network_id:sector_id")))
}

fn cmd_rpl(args: RplArgs) -> Result<(), ToolError> {
    let sectors = load_sectors(&args.infra)?;
    let (net, sec) = sector_key(&args.sector)?;
    let sector = sectors
        .iter()
        .find(|s| s.network_id == net && s.sector_id == sec)
        .ok_or_else(|| ToolError::Domain(format!("unknown sector {}", args.sector)))?;
    let sites = sites_from_sectors(&sectors);
    let rpl = build_rpl(sector, &sites, &args.params.to_params())?;
    let feature = geojson::rpl_feature(&rpl)?;
    write_json(&args.out, &feature)?;

    let mut manifest = RunManifest::new("rpl");
    manifest.record_input(&args.infra)?;
    record_params(&mut manifest, &args.params);
    manifest.set_param("sector", &args.sector);
    manifest.record_output(&args.out);
    manifest.write(&manifest_path(&args.out))?;
    Ok(())
}

struct LoadedRun {
    sectors: Vec<Sector>,
    assignments: Vec<rplkit_core::assign::Assignment>,
}

fn load_run(
    infra: &Path,
    measurements: &Path,
    sector_filter: &[String],
) -> Result<LoadedRun, ToolError> {
    let mut sectors = load_sectors(infra)?;
    let file = File::open(measurements)?;
    let (observations, diagnostics) = ingest::parse_measurements(file)?;
    for d in &diagnostics {
        eprintln!("{}: {d}", measurements.display());
    }
    for d in ingest::flag_unknown_sectors(&observations, &sectors) {
        eprintln!("{}: {d}", measurements.display());
    }
    let assignments = best_server(&observations);
    // the join must be nonempty before any filter is applied
    let overlaps = sectors.iter().any(|s| {
        assignments
            .iter()
            .any(|a| a.network_id == s.network_id && a.best_sector_id == s.sector_id)
    });
    if !overlaps {
        return Err(ToolError::Domain(
            "no best-server assignment matches any sector in the infrastructure file".into(),
        ));
    }
    if !sector_filter.is_empty() {
        let keys: Vec<(&str, &str)> = sector_filter
            .iter()
            .map(|s| sector_key(s))
            .collect::<Result<_, _>>()?;
        for key in &keys {
            if !sectors.iter().any(|s| (s.network_id.as_str(), s.sector_id.as_str()) == *key) {
                return Err(ToolError::Domain(format!("unknown sector {}:{}", key.0, key.1)));
            }
        }
        sectors.retain(|s| keys.contains(&(s.network_id.as_str(), s.sector_id.as_str())));
    }
    Ok(LoadedRun { sectors, assignments })
}

fn write_report_files(
    out: &Path,
    run: &LoadedRun,
    report: &SweepReport,
    with_sweep_table: bool,
    with_geojson: bool,
    manifest: &mut RunManifest,
) -> Result<(), ToolError> {
    fs::create_dir_all(out)?;
    let evaluation = out.join("evaluation.csv");
    report::write_evaluations(File::create(&evaluation)?, report)?;
    manifest.record_output(&evaluation);

    let ratio_error = out.join("ratio_error.csv");
    report::write_ratio_error(File::create(&ratio_error)?, report)?;
    manifest.record_output(&ratio_error);

    if with_sweep_table {
        let sweep_path = out.join("sweep.csv");
        report::write_sweep_rows(File::create(&sweep_path)?, report)?;
        manifest.record_output(&sweep_path);
    }

    let summary = out.join("summary.txt");
    report::write_summary(File::create(&summary)?, report)?;
    manifest.record_output(&summary);

    if with_geojson {
        let sites = sites_from_sectors(&run.sectors);
        for eval in &report.evaluations {
            let sector = run
                .sectors
                .iter()
                .find(|s| s.network_id == eval.network_id && s.sector_id == eval.sector_id)
                .expect("evaluated sector is loaded");
            let rpl = build_rpl(sector, &sites, &report.fixed_params)?;
            let bundle = geojson::sector_bundle(&rpl, &run.assignments)?;
            let path = out.join(format!("{}_{}.geojson", eval.network_id, eval.sector_id));
            write_json(&path, &bundle)?;
            manifest.record_output(&path);
        }
    }
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), ToolError> {
    let run = load_run(&args.infra, &args.measurements, &args.sector)?;
    let sites = sites_from_sectors(&run.sectors);
    let params = args.params.to_params();
    let report = sweep(
        &run.sectors,
        &sites,
        &run.assignments,
        &params,
        &rplkit_core::evaluate::DEFAULT_N_GRID,
        &rplkit_core::evaluate::DEFAULT_M_GRID,
    )?;

    let mut manifest = RunManifest::new("evaluate");
    manifest.record_input(&args.infra)?;
    manifest.record_input(&args.measurements)?;
    record_params(&mut manifest, &args.params);
    if !args.sector.is_empty() {
        manifest.set_param("sector_filter", args.sector.join(","));
    }
    write_report_files(&args.out, &run, &report, false, args.geojson, &mut manifest)?;
    manifest.write(&args.out.join("manifest.json"))?;
    report::write_summary(std::io::stdout().lock(), &report)?;
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<(), ToolError> {
    let run = load_run(&args.infra, &args.measurements, &args.sector)?;
    let sites = sites_from_sectors(&run.sectors);
    let params = args.params.to_params();
    let report = sweep(&run.sectors, &sites, &run.assignments, &params, &args.n_grid, &args.m_grid)?;

    let mut manifest = RunManifest::new("sweep");
    manifest.record_input(&args.infra)?;
    manifest.record_input(&args.measurements)?;
    record_params(&mut manifest, &args.params);
    manifest.set_param(
        "n_grid",
        args.n_grid.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
    );
    manifest.set_param(
        "m_grid",
        args.m_grid.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    );
    write_report_files(&args.out, &run, &report, true, false, &mut manifest)?;
    manifest.write(&args.out.join("manifest.json"))?;
    report::write_summary(std::io::stdout().lock(), &report)?;
    Ok(())
}

fn cmd_synth(args: SynthArgs) -> Result<(), ToolError> {
    let text = fs::read_to_string(&args.config)?;
    let mut config = ScenarioConfig::from_str(&text)?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    let sectors = generate_network(&config)?;
    let observations = generate_observations(&sectors, &config)?;

    fs::create_dir_all(&args.out)?;
    let infra = args.out.join("infrastructure.csv");
    ingest::write_infrastructure(File::create(&infra)?, &sectors)?;
    let measurements = args.out.join("measurements.csv");
    ingest::write_measurements(File::create(&measurements)?, &observations)?;

    let mut manifest = RunManifest::new("synth");
    manifest.record_input(&args.config)?;
    manifest.set_param("seed", config.seed);
    manifest.record_output(&infra);
    manifest.record_output(&measurements);
    manifest.write(&args.out.join("manifest.json"))?;
    Ok(())
}

fn cmd_report(args: ReportArgs) -> Result<(), ToolError> {
    let file = File::open(&args.input)?;
    report::summarize_evaluation_csv(file, std::io::stdout().lock())?;
    Ok(())
}

fn record_params(manifest: &mut RunManifest, params: &ParamArgs) {
    manifest.set_param("n", params.n);
    manifest.set_param("m", params.m);
    manifest.set_param("c", params.c);
    manifest.set_param("grid_size", params.grid_size);
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), ToolError> {
    let mut file = File::create(path)?;
    serde_json::to_writer_pretty(&mut file, value)?;
    file.write_all(b"\n")?;
    Ok(())
}
