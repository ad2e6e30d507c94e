//! Batch command line: `feasibility`, `solve` and `diagnose`, each driven by
//! a JSON configuration and writing reports into an output directory.
//!
//! Exit codes: `0` success, `1` error, `2` a valid negative verdict (an
//! infeasible polygon, a refused solve, or a failed check).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::diagnostics::{conformal_modulus, flux, geometric_budgets, run_exhaustion, ExhaustionConfig, FluxCurve, Region};
use crate::io::{write_field_csv, write_json, write_table_csv, Header, MeshDescriptor};
use crate::mesh::{annulus_domain, generate, BoundaryTag, MeshOptions, Side, Sizing};
use crate::polygon::{js_feasible_with_family, HorocycleFamily, IdealPolygon, SideLabel};
use crate::solver::{
    solve_dirichlet_at_infinity, solve_ideal_scherk, solve_ideal_scherk_forced, solve_mixed_boundary, solve_scherk_sequence, Conformal,
    ScalarField, Solution, SolverConfig,
};
use crate::{Complex64, Error, IdealPoint, Metric, Result};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "SCHERK_THREADS";

#[derive(Parser, Debug)]
#[command(name = "scherk", version, about = "Minimal graphs over ideal polygons in a negatively curved disk")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide the Jenkins–Serrin conditions for the configured polygon.
    Feasibility(Common),
    /// Solve the configured boundary-value problem.
    Solve(Common),
    /// Flux, modulus and exhaustion diagnostics.
    Diagnose(Common),
}

#[derive(Args, Debug)]
pub struct Common {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Solve even when the polygon fails the feasibility check.
    #[arg(long)]
    pub force: bool,
    /// Reserved; every algorithm is deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Polygon given by vertex angles and either the first side label (then
/// labels alternate) or the full label list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonInput {
    pub angles: Vec<f64>,
    #[serde(default)]
    pub first: Option<SideLabel>,
    #[serde(default)]
    pub labels: Option<Vec<SideLabel>>,
}

impl PolygonInput {
    pub fn build(&self) -> Result<IdealPolygon> {
        match (&self.labels, self.first) {
            (Some(l), None) => IdealPolygon::with_labels(&self.angles, l.clone()),
            (None, first) => IdealPolygon::new(&self.angles, first.unwrap_or(SideLabel::Plus)),
            (Some(_), Some(_)) => Err(Error::Config("give either `first` or `labels`, not both".into())),
        }
    }
}

/// Boundary function on the ideal circle:
/// `a0 + Σ cos[k]·cos((k+1)θ) + sin[k]·sin((k+1)θ)`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fourier {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl Fourier {
    pub fn eval(&self, theta: f64) -> f64 {
        let c: f64 = self.cos.iter().enumerate().map(|(k, a)| a * ((k + 1) as f64 * theta).cos()).sum();
        let s: f64 = self.sin.iter().enumerate().map(|(k, b)| b * ((k + 1) as f64 * theta).sin()).sum();
        self.a0 + c + s
    }
}

/// Which problem `solve` runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SolveMode {
    /// `±T` data on the polygon sides.
    IdealScherk { truncation: f64 },
    /// `±T` on infinite sides, a constant per finite side (keyed by side index).
    Mixed { truncation: f64, finite: BTreeMap<usize, f64> },
    /// Plateau truncations of the half-plane problem over the geodesic with
    /// the given ideal end angles.
    Halfplane {
        radii: Vec<f64>,
        #[serde(default = "default_side")]
        side: Side,
        #[serde(default = "default_ends")]
        ends: [f64; 2],
    },
    /// Dirichlet data at infinity on growing geodesic disks.
    Infinity { radii: Vec<f64>, phi: Fourier },
}

fn default_side() -> Side {
    Side::Left
}

fn default_ends() -> [f64; 2] {
    [-FRAC_PI_2, FRAC_PI_2]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FluxRequest {
    pub truncation: f64,
    /// Chart radii of circular loops about the origin.
    #[serde(default)]
    pub loops: Vec<f64>,
    /// Also report the flux along every side.
    #[serde(default = "yes")]
    pub sides: bool,
}

fn yes() -> bool {
    true
}

/// Flat round annulus `r_in < |z| < r_out` meshed with relative size `h`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusRequest {
    pub r_in: f64,
    pub r_out: f64,
    #[serde(default = "default_modulus_h")]
    pub h: f64,
}

fn default_modulus_h() -> f64 {
    0.05
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionRequest {
    pub steps: usize,
    /// First budget; later ones halve.
    pub epsilon1: f64,
    #[serde(default)]
    pub settings: ExhaustionConfig,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnoseRequest {
    pub flux: Option<FluxRequest>,
    pub modulus: Option<ModulusRequest>,
    pub exhaustion: Option<ExhaustionRequest>,
}

/// The JSON configuration of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_kappa")]
    pub kappa: f64,
    #[serde(default)]
    pub polygon: Option<PolygonInput>,
    /// Horocycle levels, one per vertex; defaults to the polygon's default family.
    #[serde(default)]
    pub horocycles: Option<Vec<f64>>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub solve: Option<SolveMode>,
    #[serde(default)]
    pub diagnose: Option<DiagnoseRequest>,
}

fn default_kappa() -> f64 {
    -1.0
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        self.metric()?;
        self.solver.validate()?;
        if let Some(p) = &self.polygon {
            let poly = p.build()?;
            if let Some(levels) = &self.horocycles {
                if levels.len() != poly.len() {
                    return Err(Error::Config(format!("{} horocycle levels for {} vertices", levels.len(), poly.len())));
                }
            }
        }
        Ok(())
    }

    pub fn metric(&self) -> Result<Metric> {
        Metric::new(self.kappa)
    }

    fn polygon(&self) -> Result<(IdealPolygon, HorocycleFamily)> {
        let input = self.polygon.as_ref().ok_or_else(|| Error::Config("a polygon is required".into()))?;
        let poly = input.build()?;
        let family = match &self.horocycles {
            Some(l) => HorocycleFamily::new(l.clone()),
            None => poly.default_family(self.metric()?),
        };
        family.validate(self.metric()?, &poly)?;
        Ok((poly, family))
    }
}

/// Outcome of a command before it is mapped to an exit code.
#[derive(Debug, PartialEq, Eq)]
pub enum Verdict {
    Positive,
    Negative,
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    cap_threads();
    match execute(&cli) {
        Ok(Verdict::Positive) => 0,
        Ok(Verdict::Negative) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn cap_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // Fails only if a pool already exists, in which case it stays as is.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<Verdict> {
    let (Command::Feasibility(c) | Command::Solve(c) | Command::Diagnose(c)) = &cli.command;
    let text = std::fs::read_to_string(&c.config).map_err(|e| Error::Config(format!("{}: {e}", c.config.display())))?;
    let cfg = RunConfig::from_json(&text)?;
    let header = Header::for_config(&cfg)?;
    std::fs::create_dir_all(&c.out)?;
    match &cli.command {
        Command::Feasibility(_) => cmd_feasibility(&cfg, &header, &c.out),
        Command::Solve(_) => cmd_solve(&cfg, &header, &c.out, c.force),
        Command::Diagnose(_) => cmd_diagnose(&cfg, &header, &c.out),
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Positive
    } else {
        Verdict::Negative
    }
}

fn pass(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

/// Writes `feasibility.json`; positive iff the polygon is feasible.
pub fn cmd_feasibility(cfg: &RunConfig, header: &Header, out: &Path) -> Result<Verdict> {
    let metric = cfg.metric()?;
    let (poly, family) = cfg.polygon()?;
    let report = js_feasible_with_family(metric, &poly, &family)?;
    #[derive(Serialize)]
    struct Body<'a> {
        feasible: bool,
        failed_conditions: Vec<u8>,
        report: &'a crate::polygon::FeasibilityReport,
    }
    write_json(&out.join("feasibility.json"), header, &Body { feasible: report.feasible, failed_conditions: report.failed_conditions(), report: &report })?;
    Ok(verdict(report.feasible))
}

#[derive(Serialize)]
struct SolveSummary {
    mode: &'static str,
    levels: Vec<LevelSummary>,
    checks: BTreeMap<&'static str, &'static str>,
}

#[derive(Serialize)]
struct LevelSummary {
    label: String,
    nodes: usize,
    newton_steps: usize,
    picard_steps: usize,
    residual_history: Vec<f64>,
}

impl LevelSummary {
    fn new(label: String, nodes: usize, s: &Solution) -> Self {
        Self { label, nodes, newton_steps: s.newton_steps, picard_steps: s.picard_steps, residual_history: s.residual_history.clone() }
    }
}

fn write_level(out: &Path, header: &Header, stem: &str, mesh: &crate::mesh::TriMesh, u: &ScalarField) -> Result<()> {
    write_field_csv(&out.join(format!("{stem}.csv")), header, mesh, u)?;
    write_json(&out.join(format!("{stem}_mesh.json")), header, &MeshDescriptor::new(mesh))
}

/// Writes the field, mesh and convergence summary of the configured problem.
/// Solver failures leave `residual_history.json` behind.
pub fn cmd_solve(cfg: &RunConfig, header: &Header, out: &Path, force: bool) -> Result<Verdict> {
    match solve_inner(cfg, header, out, force) {
        Err(Error::NotConverged { iterations, last, history }) => {
            #[derive(Serialize)]
            struct Failure<'a> {
                iterations: usize,
                last: f64,
                residual_history: &'a [f64],
            }
            write_json(&out.join("residual_history.json"), header, &Failure { iterations, last, residual_history: &history })?;
            Err(Error::NotConverged { iterations, last, history })
        }
        Err(Error::Refused { reason, report }) => {
            if let Some(r) = report {
                write_json(&out.join("feasibility.json"), header, &*r)?;
            }
            eprintln!("refused: {reason} (use --force to solve anyway)");
            Ok(Verdict::Negative)
        }
        other => other,
    }
}

fn solve_inner(cfg: &RunConfig, header: &Header, out: &Path, force: bool) -> Result<Verdict> {
    let metric = cfg.metric()?;
    let mode = cfg.solve.as_ref().ok_or_else(|| Error::Config("the `solve` section is missing".into()))?;
    let mut checks = BTreeMap::new();
    let (mode, levels) = match mode {
        SolveMode::IdealScherk { truncation } => {
            let (poly, family) = cfg.polygon()?;
            let s = if force {
                solve_ideal_scherk_forced(metric, &poly, &family, *truncation, &cfg.solver)?
            } else {
                solve_ideal_scherk(metric, &poly, &family, *truncation, &cfg.solver)?
            };
            write_level(out, header, "field", &s.mesh, &s.solution.u)?;
            checks.insert("feasible", pass(s.feasibility.feasible));
            ("ideal-scherk", vec![LevelSummary::new(format!("T={truncation}"), s.mesh.nodes().len(), &s.solution)])
        }
        SolveMode::Mixed { truncation, finite } => {
            let (poly, family) = cfg.polygon()?;
            let value = |i: usize, _: Complex64| finite.get(&i).copied().unwrap_or(0.0);
            let s = solve_mixed_boundary(metric, &poly, &value, &family, *truncation, &cfg.solver)?;
            write_level(out, header, "field", &s.mesh, &s.solution.u)?;
            ("mixed", vec![LevelSummary::new(format!("T={truncation}"), s.mesh.nodes().len(), &s.solution)])
        }
        SolveMode::Halfplane { radii, side, ends } => {
            let gamma = metric.geodesic_between(IdealPoint::new(ends[0]).into(), IdealPoint::new(ends[1]).into())?;
            let seq = solve_scherk_sequence(&gamma, *side, radii, &cfg.solver)?;
            let mut levels = Vec::new();
            for (k, l) in seq.levels.iter().enumerate() {
                write_level(out, header, &format!("field_{k}"), &l.mesh, &l.solution.u)?;
                levels.push(LevelSummary::new(format!("n={}", l.n), l.mesh.nodes().len(), &l.solution));
            }
            checks.insert("nonnegative", pass(seq.nonnegative()));
            checks.insert("barrier", pass(seq.barrier_bounded()));
            checks.insert("monotonicity", pass(seq.monotone()));
            ("halfplane", levels)
        }
        SolveMode::Infinity { radii, phi } => {
            let runs = solve_dirichlet_at_infinity(metric, &|t| phi.eval(t), radii, &cfg.solver)?;
            let mut levels = Vec::new();
            for (k, l) in runs.iter().enumerate() {
                write_level(out, header, &format!("field_{k}"), &l.mesh, &l.solution.u)?;
                levels.push(LevelSummary::new(format!("n={}", l.n), l.mesh.nodes().len(), &l.solution));
            }
            ("infinity", levels)
        }
    };
    let ok = checks.values().all(|&v| v == "pass");
    write_json(&out.join("summary.json"), header, &SolveSummary { mode, levels, checks })?;
    Ok(verdict(ok))
}

/// Writes `flux.csv`, `modulus.csv` and `exhaustion.json` as configured.
pub fn cmd_diagnose(cfg: &RunConfig, header: &Header, out: &Path) -> Result<Verdict> {
    let req = cfg.diagnose.as_ref().ok_or_else(|| Error::Config("the `diagnose` section is missing".into()))?;
    if req.flux.is_none() && req.modulus.is_none() && req.exhaustion.is_none() {
        return Err(Error::Config("the `diagnose` section requests nothing".into()));
    }
    let metric = cfg.metric()?;
    let mut ok = true;
    if let Some(f) = &req.flux {
        let (poly, family) = cfg.polygon()?;
        let s = solve_ideal_scherk(metric, &poly, &family, f.truncation, &cfg.solver)?;
        let mut rows = Vec::new();
        for &r in &f.loops {
            let ring: Vec<Complex64> = (0..64).map(|k| Complex64::from_polar(r, k as f64 * std::f64::consts::TAU / 64.0)).collect();
            let res = flux(&s.mesh, &s.solution.u, &FluxCurve::Loop { points: ring }, metric)?;
            ok &= res.value.abs() <= 1e-6 * res.length;
            rows.push(vec![format!("loop r={r}"), res.value.to_string(), res.length.to_string(), res.per_length().to_string()]);
        }
        if f.sides {
            for i in 0..poly.len() {
                let res = flux(&s.mesh, &s.solution.u, &FluxCurve::Boundary { tag: BoundaryTag::Side(i), window: None }, metric)?;
                rows.push(vec![format!("side {i} {:?}", poly.label(i)), res.value.to_string(), res.length.to_string(), res.per_length().to_string()]);
            }
        }
        write_table_csv(&out.join("flux.csv"), header, &["curve", "value", "length", "ratio"], &rows)?;
    }
    if let Some(m) = &req.modulus {
        let mesh = generate(&annulus_domain(m.r_in, m.r_out)?, &MeshOptions::new(Sizing::LogPolar { h: m.h, min: 1e-6 }))?;
        let o = Complex64::new(0.0, 0.0);
        let u = ScalarField::constant(mesh.nodes().len(), 0.0);
        let res = conformal_modulus(
            &mesh,
            &u,
            &Region::ChartDisk { center: o, radius: m.r_in },
            &Region::ChartDisk { center: o, radius: m.r_out },
            Conformal::Flat,
        )?;
        let exact = (m.r_out / m.r_in).ln() / std::f64::consts::TAU;
        ok &= (res.modulus - exact).abs() <= 1e-3;
        write_table_csv(
            &out.join("modulus.csv"),
            header,
            &["r_in", "r_out", "modulus", "closed_form", "nodes"],
            &[vec![m.r_in.to_string(), m.r_out.to_string(), res.modulus.to_string(), exact.to_string(), mesh.nodes().len().to_string()]],
        )?;
    }
    if let Some(e) = &req.exhaustion {
        let (poly, _) = cfg.polygon()?;
        let run = run_exhaustion(metric, &poly, e.steps, &geometric_budgets(e.epsilon1, e.steps), &e.settings)?;
        ok &= run.aborted.is_none() && run.history.iter().all(|r| r.feasible && r.c2_met && r.angle_ok);
        #[derive(Serialize)]
        struct Body<'a> {
            steps: &'a [crate::diagnostics::StepReport],
            aborted: &'a Option<String>,
        }
        write_json(&out.join("exhaustion.json"), header, &Body { steps: &run.history, aborted: &run.aborted })?;
    }
    Ok(verdict(ok))
}
