//! `hyperperc` command-line tool.

mod render;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use hyperperc::clusters::{label_bond_clusters, label_site_clusters, BondConfig, SiteConfig};
use hyperperc::contours::{derive, eta_structure_check, proxy_triple};
use hyperperc::experiments::{self, ExperimentConfig, ExperimentError};
use hyperperc::oracle::{self, ExactMeasure};
use hyperperc::planar_map::{
    self, build_ball, from_text, small, to_text, BallSpec, LatticeMaps, TilingSpec,
};
use hyperperc::samplers::{
    fk_heatbath_sweep, glauber_sweep, random_start, sample_bernoulli, swendsen_wang_sweep,
    thresholds, CouplingParams, Graph, RngSpec,
};
use hyperperc::xor::{xor_of, z_contour_expansion, z_double_ising};

#[derive(Parser)]
#[command(
    name = "hyperperc",
    version,
    about = "Percolation and Ising models on balls of planar tilings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the ball of radius R in the {p,q} tiling and write it as text.
    TilingBuild(BuildArgs),
    /// Classify a vertex type as spherical, Euclidean or hyperbolic.
    TilingClassify(ClassifyArgs),
    /// Run one chain on a map and print the final state with its reports.
    Sample(SampleArgs),
    /// Run an experiment sweep from a TOML config.
    Sweep(SweepArgs),
    /// Exact checks on tiny graphs.
    Oracle(OracleArgs),
    /// Draw a site configuration and its bond configurations as SVG.
    Render(RenderArgs),
    /// Threshold arithmetic for a site percolation threshold and degree.
    Thresholds(ThresholdArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long)]
    p: usize,
    #[arg(long)]
    q: usize,
    #[arg(long)]
    radius: u32,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Face degrees around a vertex in cyclic order, e.g. 3,3,3,3,3,3,3.
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Bernoulli,
    Ising,
    Fk,
    Xor,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundaryArg {
    Free,
    Plus,
    Minus,
    Wired,
}

impl From<BoundaryArg> for experiments::Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Free => experiments::Boundary::Free,
            BoundaryArg::Plus => experiments::Boundary::Plus,
            BoundaryArg::Minus => experiments::Boundary::Minus,
            BoundaryArg::Wired => experiments::Boundary::Wired,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DynamicsArg {
    Glauber,
    SwendsenWang,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long, value_enum)]
    model: ModelArg,
    /// Coupling for ising and xor.
    #[arg(long = "J")]
    j: Option<f64>,
    /// Site density for bernoulli, edge weight for fk.
    #[arg(long)]
    p: Option<f64>,
    /// Cluster weight for fk.
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, value_enum, default_value = "free")]
    boundary: BoundaryArg,
    #[arg(long, value_enum, default_value = "swendsen-wang")]
    dynamics: DynamicsArg,
    /// Map file written by tiling-build.
    #[arg(long)]
    map: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    sweeps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// JSONL output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    /// Edwards–Sokal composition against the Ising measure.
    Coupling,
    /// Exact Ising table.
    Ising,
    /// Exact random-cluster table.
    Fk,
    /// Holley checks at the edges of the Ising window.
    Window,
    /// Double-Ising partition function against its contour expansion.
    Xor,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    check: Check,
    /// k2, triangle, square, diamond, cycleN, starN or gridRxC.
    #[arg(long)]
    graph: String,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long = "J")]
    j: Option<f64>,
    #[arg(long, default_value_t = 2.0)]
    q: f64,
    #[arg(long, value_enum, default_value = "free")]
    boundary: BoundaryArg,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    map: PathBuf,
    /// A SiteConfig as JSON, or the output of `sample`.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ThresholdArgs {
    #[arg(long)]
    pc: f64,
    #[arg(long)]
    d: usize,
    /// Coupling at which the windows are evaluated.
    #[arg(long = "J", default_value_t = 0.0)]
    j: f64,
}

enum Failure {
    Usage(String),
    Runtime(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
            Failure::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Runtime(m) | Failure::Budget(m) => m,
        }
    }
}

fn usage(m: impl std::fmt::Display) -> Failure {
    Failure::Usage(m.to_string())
}

fn runtime(m: impl std::fmt::Display) -> Failure {
    Failure::Runtime(m.to_string())
}

type Outcome = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| runtime(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(runtime)
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| runtime(format!("{}: {e}", path.display())))
}

fn load_maps(path: &Path) -> Result<LatticeMaps, Failure> {
    let map = from_text(&read(path)?).map_err(runtime)?;
    LatticeMaps::new(map).map_err(runtime)
}

fn require(x: Option<f64>, flag: &str) -> Result<f64, Failure> {
    x.ok_or_else(|| usage(format!("--{flag} is required here")))
}

fn tiling_build(a: BuildArgs) -> Outcome {
    let tiling = TilingSpec::regular(a.p, a.q).map_err(usage)?;
    let map = build_ball(&BallSpec::new(tiling, a.radius)).map_err(runtime)?;
    emit(a.out.as_deref(), &to_text(&map))
}

fn tiling_classify(a: ClassifyArgs) -> Outcome {
    let tiling = TilingSpec::new(a.degrees).map_err(usage)?;
    let class = planar_map::classify(&tiling);
    emit(
        None,
        &format!(
            "{}\ncurvature_gap = {}\n",
            class.geometry, class.curvature_gap
        ),
    )
}

fn json_line(key: &str, value: impl serde::Serialize) -> Result<String, Failure> {
    let v = serde_json::to_value(value).map_err(runtime)?;
    Ok(format!("{}\n", json!({ key: v })))
}

fn site_lines(omega: &SiteConfig, maps: &LatticeMaps) -> Result<String, Failure> {
    let mut report = label_site_clusters(&maps.primal, omega).map_err(runtime)?;
    report.proxy_triple = Some(proxy_triple(omega, maps).map_err(runtime)?);
    let cfgs = derive(omega, maps).map_err(runtime)?;
    let contours = eta_structure_check(maps, &cfgs).map_err(runtime)?;
    Ok(json_line("site_config", omega)?
        + &json_line("cluster_report", report)?
        + &json_line("contour_report", contours)?)
}

fn sample(a: SampleArgs) -> Outcome {
    let boundary = experiments::Boundary::from(a.boundary);
    let site_boundary = || boundary.site().map_err(usage);
    match a.model {
        ModelArg::Bernoulli | ModelArg::Fk => {
            let p = require(a.p, "p")?;
            if !(0.0..=1.0).contains(&p) {
                return Err(usage(format!("p = {p} is not in [0, 1]")));
            }
        }
        ModelArg::Ising | ModelArg::Xor => {
            let j = require(a.j, "J")?;
            if !(j >= 0.0 && j.is_finite()) {
                return Err(usage(format!("J = {j} must be finite and nonnegative")));
            }
            site_boundary()?;
        }
    }
    if matches!(a.model, ModelArg::Fk) {
        boundary.bond().map_err(usage)?;
    } else if matches!(a.model, ModelArg::Bernoulli) && !matches!(a.boundary, BoundaryArg::Free) {
        return Err(usage("bernoulli takes free boundary"));
    }
    let maps = load_maps(&a.map)?;
    let g = Graph::new(&maps.primal);
    let mut rng = RngSpec::new(a.seed, 0).rng();
    let sweep = |c: &mut SiteConfig, r: &mut rand_chacha::ChaCha8Rng, j: f64| match a.dynamics {
        DynamicsArg::Glauber => glauber_sweep(&g, c, j, r),
        DynamicsArg::SwendsenWang => swendsen_wang_sweep(&g, c, j, r),
    };
    let text = match a.model {
        ModelArg::Bernoulli => {
            let omega = sample_bernoulli(&g, a.p.unwrap_or_default(), &mut rng).map_err(runtime)?;
            site_lines(&omega, &maps)?
        }
        ModelArg::Ising => {
            let j = a.j.unwrap_or_default();
            let mut omega = random_start(&g, site_boundary()?, &mut rng);
            for _ in 0..a.sweeps {
                sweep(&mut omega, &mut rng, j).map_err(runtime)?;
            }
            site_lines(&omega, &maps)?
        }
        ModelArg::Xor => {
            let j = a.j.unwrap_or_default();
            let mut rng2 = RngSpec::new(a.seed, 1).rng();
            let mut s1 = random_start(&g, site_boundary()?, &mut rng);
            let mut s2 = random_start(&g, site_boundary()?, &mut rng2);
            for _ in 0..a.sweeps {
                sweep(&mut s1, &mut rng, j).map_err(runtime)?;
                sweep(&mut s2, &mut rng2, j).map_err(runtime)?;
            }
            let x = xor_of(&s1, &s2).map_err(runtime)?;
            site_lines(&x.sigma_xor, &maps)?
        }
        ModelArg::Fk => {
            let p = a.p.unwrap_or_default();
            let mut bonds = BondConfig::constant(&maps.primal, 0, boundary.bond().map_err(usage)?);
            for _ in 0..a.sweeps {
                fk_heatbath_sweep(&g, &mut bonds, p, a.q, &mut rng).map_err(runtime)?;
            }
            let report = label_bond_clusters(&maps.primal, &bonds).map_err(runtime)?;
            json_line("bond_config", &bonds)? + &json_line("cluster_report", report)?
        }
    };
    emit(a.out.as_deref(), &text)
}

fn sweep(a: SweepArgs) -> Outcome {
    let text = read(&a.config)?;
    let cfg = ExperimentConfig::from_toml(&text).map_err(usage)?;
    let budget = experiments::budget_from_env().map_err(usage)?;
    let records = experiments::run_sweep(&cfg, budget).map_err(|e| match e {
        ExperimentError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
        ExperimentError::Config(_) => usage(e),
        _ => runtime(e),
    })?;
    let mut buf = Vec::new();
    experiments::write_jsonl(&records, &mut buf).map_err(runtime)?;
    emit(a.out.as_deref(), &String::from_utf8(buf).map_err(runtime)?)
}

fn measure_lines(mu: &ExactMeasure) -> Result<String, Failure> {
    let total = mu.total();
    let mut text = String::new();
    for i in 0..mu.len() {
        let line = json!({ "config": mu.config(i), "probability": mu.weights[i] / total });
        text.push_str(&line.to_string());
        text.push('\n');
    }
    Ok(text)
}

fn oracle_cmd(a: OracleArgs) -> Outcome {
    let g = oracle::tiny_graph(&a.graph)
        .ok_or_else(|| usage(format!("unknown graph {:?}", a.graph)))?;
    let boundary = experiments::Boundary::from(a.boundary);
    let text = match a.check {
        Check::Coupling => {
            let p = require(a.p, "p")?;
            let report =
                oracle::coupling_check(&g, p, boundary.bond().map_err(usage)?).map_err(runtime)?;
            serde_json::to_string(&report).map_err(runtime)? + "\n"
        }
        Check::Ising => {
            let j = require(a.j, "J")?;
            let mu =
                oracle::enumerate_ising(&g, j, boundary.site().map_err(usage)?).map_err(runtime)?;
            measure_lines(&mu)?
        }
        Check::Fk => {
            let p = require(a.p, "p")?;
            let mu = oracle::enumerate_fk(&g, p, a.q, boundary.bond().map_err(usage)?)
                .map_err(runtime)?;
            measure_lines(&mu)?
        }
        Check::Window => {
            let j = require(a.j, "J")?;
            let site = boundary.site().map_err(usage)?;
            let ising = oracle::enumerate_ising(&g, j, site).map_err(runtime)?;
            let (lo, hi) = hyperperc::samplers::ising_window(j, g.max_degree());
            let below = ExactMeasure::product_like(&ising, lo);
            let above = ExactMeasure::product_like(&ising, hi);
            let lower = oracle::holley_check(&below, &ising).map_err(runtime)?;
            let upper = oracle::holley_check(&ising, &above).map_err(runtime)?;
            let line = json!({ "window": [lo, hi], "lower": lower, "upper": upper });
            line.to_string() + "\n"
        }
        Check::Xor => {
            let j = require(a.j, "J")?;
            let map = small::by_name(&a.graph)
                .ok_or_else(|| usage(format!("unknown graph {:?}", a.graph)))?;
            let z2 = z_double_ising(&map, j).map_err(runtime)?;
            let zc = z_contour_expansion(&map, j).map_err(runtime)?;
            let line = json!({ "z_double_ising": z2, "z_contour_expansion": zc, "relative_difference": (z2 - zc).abs() / z2 });
            line.to_string() + "\n"
        }
    };
    emit(None, &text)
}

fn site_config_from(text: &str) -> Result<SiteConfig, Failure> {
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let v: serde_json::Value =
            serde_json::from_str(line).map_err(|e| usage(format!("config: {e}")))?;
        let inner = v.get("site_config").cloned().unwrap_or(v);
        if inner.get("states").is_some() {
            return serde_json::from_value(inner).map_err(|e| usage(format!("config: {e}")));
        }
    }
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| usage(format!("config: {e}")))?;
    serde_json::from_value(v).map_err(|e| usage(format!("config: {e}")))
}

fn render_cmd(a: RenderArgs) -> Outcome {
    let maps = load_maps(&a.map)?;
    let omega = site_config_from(&read(&a.config)?)?;
    let cfgs = derive(&omega, &maps).map_err(runtime)?;
    emit(a.out.as_deref(), &render::render_svg(&maps, &omega, &cfgs))
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "undefined".to_string(), |v| format!("{v:.6}"))
}

fn thresholds_cmd(a: ThresholdArgs) -> Outcome {
    let params = CouplingParams::from_coupling(a.j, a.d).map_err(usage)?;
    let r = thresholds(&params, a.pc).map_err(usage)?;
    let text = format!(
        "p_c = {:.6}\nd = {}\nJ = {:.6}\nh_ising = {}\nJ_max = {}\nh_xor = {}\nJ_max_xor = {}\n\
         pcwl_bound = {}\nj_bound_jj3 = {}\nising_window = ({:.6}, {:.6})\nxor_window = ({:.6}, {:.6})\n",
        r.p_c_site,
        r.d,
        r.j,
        fmt_opt(r.h_ising),
        fmt_opt(r.j_max_ising),
        fmt_opt(r.h_xor),
        fmt_opt(r.j_max_xor),
        fmt_opt(r.pcwl_bound),
        fmt_opt(r.j_bound_jj3),
        r.ising_window.0,
        r.ising_window.1,
        r.xor_window.0,
        r.xor_window.1,
    );
    emit(None, &text)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::TilingBuild(a) => tiling_build(a),
        Command::TilingClassify(a) => tiling_classify(a),
        Command::Sample(a) => sample(a),
        Command::Sweep(a) => sweep(a),
        Command::Oracle(a) => oracle_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Thresholds(a) => thresholds_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
