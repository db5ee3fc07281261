//! Command line front end.
//!
//! Each subcommand reads its inputs, runs one pipeline through the library
//! and writes a single CSV or JSON document, to `--out` or stdout. All
//! randomness comes from `--seed`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::density::{make_grid, Density, Grid};
use crate::error::Error;
use crate::hedged::{cubic_decomposition_about, realized_vols, GammaEngine, HedgedPnlSpec, Kernel, DEFAULT_PANELS};
use crate::index::{
    index_statistics, kelly_scan, path_returns, run_index, DynamicsSpec, Measure, PathSample,
};
use crate::io::{self, CurveMeta, FormatError, FormatResult};
use crate::market::{implied_density, PricingTerms, VolCurve, WingExtrapolation};
use crate::model_risk::model_risk_report;
use crate::payoff::{expected_rate_of_return, growth_optimal_payoff, Payoff};
use crate::views::{believed_curve, ViewSpec};

const EXIT_CODES: &str = "\
Exit codes:
  0   success
  2   usage error (bad flags)
  3   io: a file could not be read or written
  4   parse: malformed CSV or JSON input
  5   argument: invalid parameter values
  6   domain: input outside the mathematical domain
  7   non_equivalence: believed mass where the reference has none
  8   arbitrage: implied density has more than 1% negative mass
  9   infeasible_view: a view drives some vol non-positive
  10  coverage: mass or kernel support falls outside the grid
  11  unsupported_view: dynamics differ in more than the drift
  12  rank_deficient: replication basis is collinear
  13  wipeout: too many first-order index paths wiped out

Errors are reported on stderr as one line:
  error: category=<category> message=<text>

File formats:
  vol curve      CSV `strike,vol` with a JSON sidecar
                 {\"forward\":..,\"maturity\":..,\"discount_factor\":..}
  density        CSV `x,mass`
  views          JSON object {\"kind\":\"skew_scale\",\"s\":0.5,
                 \"localization\":{\"center\":100.0,\"width\":10.0}} or a list
  terms          JSON {\"discount_factor\":..,\"commission_rate\":..,\"budget\":..}
  dynamics       JSON {\"drift\":0.05,\"vol\":0.2,\"dt\":0.003968,\"steps\":252}
  profile        CSV `x,value`
  hedged spec    JSON {\"fixings\":[..],\"vols\":[..],\"hedge_vol\":..,\"maturity\":..}
  buckets        JSON {\"edges\":[..]}
Outputs: payoff CSV `x,m,b,f`, index CSV `step,exact,first_order`,
Kelly CSV `leverage,mean_log_growth,std_error,wipeouts`, JSON reports.
Numbers in CSV output carry 17 significant digits.";

#[derive(Debug, Clone, Parser)]
#[command(name = "growth-optimal", version, about = "Growth-optimal derivative payoffs", after_long_help = EXIT_CODES, after_help = EXIT_CODES)]
pub struct RunConfig {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Output file; stdout when absent.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Market (or, with --view, believed) density from a vol curve.
    ImpliedDensity {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        grid: GridArgs,
        /// View file(s), applied in order.
        #[arg(long = "view")]
        views: Vec<PathBuf>,
    },
    /// Growth-optimal payoff table `x,m,b,f`.
    Payoff(PayoffArgs),
    /// Exact and first-order index along one simulated path, or MC statistics with --paths.
    IndexSimulate {
        #[arg(long)]
        market: PathBuf,
        #[arg(long)]
        believed: PathBuf,
        /// Number of paths for aggregate statistics (JSON output).
        #[arg(long)]
        paths: Option<usize>,
        #[arg(long, value_enum, default_value_t = MeasureArg::Market)]
        measure: MeasureArg,
        /// Path to emit when --paths is absent.
        #[arg(long, default_value_t = 0)]
        path_index: u64,
    },
    /// Mean log growth of leveraged excess returns under the believed dynamics.
    KellyScan {
        #[arg(long)]
        market: PathBuf,
        #[arg(long)]
        believed: PathBuf,
        /// Comma separated leverages; default 0, 0.5, 1, 1.5, 2 times the first step's Kelly leverage.
        #[arg(long, value_delimiter = ',')]
        leverages: Vec<f64>,
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
    },
    /// Delta-hedged P&L of a profile, or with --dynamics a histogram of simulated P&L.
    HedgedPnl(HedgedArgs),
    /// Gamma-swap and variance-swap weights of the best cubic fit to a profile.
    CubicDecompose {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        center: f64,
    },
    /// Coarse-grained model risk report.
    ModelRisk {
        /// Believed (or first implementation's) density CSV.
        #[arg(long)]
        b: PathBuf,
        /// Reference density CSV.
        #[arg(long)]
        m: PathBuf,
        #[arg(long)]
        buckets: PathBuf,
        #[arg(long)]
        terms: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    /// Vol curve CSV `strike,vol`.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Curve sidecar JSON; defaults to the curve path with a .json extension.
    #[arg(long)]
    pub meta: Option<PathBuf>,
    #[arg(long)]
    pub forward: Option<f64>,
    #[arg(long)]
    pub maturity: Option<f64>,
    #[arg(long)]
    pub discount_factor: Option<f64>,
    #[arg(long, value_enum, default_value_t = WingArg::Flat)]
    pub wings: WingArg,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    /// Lower grid bound; default 0.3 times the forward.
    #[arg(long)]
    pub grid_lo: Option<f64>,
    /// Upper grid bound; default 3 times the forward.
    #[arg(long)]
    pub grid_hi: Option<f64>,
    #[arg(long, default_value_t = 801)]
    pub grid_count: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PayoffArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[arg(long = "view")]
    pub views: Vec<PathBuf>,
    /// Pricing terms; defaults to the curve's discount factor, no commission, unit budget.
    #[arg(long)]
    pub terms: Option<PathBuf>,
    /// Market density CSV instead of a curve.
    #[arg(long)]
    pub m_density: Option<PathBuf>,
    /// Believed density CSV instead of views.
    #[arg(long)]
    pub b_density: Option<PathBuf>,
    /// Also write the expected return decomposition as JSON.
    #[arg(long)]
    pub summary: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct HedgedArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Hedged P&L spec JSON.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = KernelArg::Lognormal)]
    pub kernel: KernelArg,
    /// Simulate paths from these dynamics and emit the P&L histogram as a density.
    #[arg(long)]
    pub dynamics: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub paths: usize,
    #[arg(long, default_value_t = 50)]
    pub bins: usize,
    #[arg(long, default_value_t = 100.0)]
    pub s0: f64,
    /// Hedge vol for the simulated paths.
    #[arg(long)]
    pub hedge_vol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WingArg {
    Flat,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureArg {
    Market,
    Believed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelArg {
    Lognormal,
    Bachelier,
}

impl From<WingArg> for WingExtrapolation {
    fn from(w: WingArg) -> Self {
        match w {
            WingArg::Flat => WingExtrapolation::Flat,
            WingArg::Linear => WingExtrapolation::Linear,
        }
    }
}

impl From<MeasureArg> for Measure {
    fn from(m: MeasureArg) -> Self {
        match m {
            MeasureArg::Market => Measure::Market,
            MeasureArg::Believed => Measure::Believed,
        }
    }
}

impl From<KernelArg> for Kernel {
    fn from(k: KernelArg) -> Self {
        match k {
            KernelArg::Lognormal => Kernel::Lognormal,
            KernelArg::Bachelier => Kernel::Bachelier,
        }
    }
}

/// Rows of the payoff plot: grid point, market mass, believed mass, payout.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTable {
    pub x: Vec<f64>,
    pub m: Vec<f64>,
    pub b: Vec<f64>,
    pub f: Vec<f64>,
}

impl PayoffTable {
    pub fn new(m: &Density<f64>, b: &Density<f64>, payoff: &Payoff<f64>) -> Self {
        PayoffTable {
            x: m.grid().points().to_vec(),
            m: m.mass().to_vec(),
            b: b.mass().to_vec(),
            f: payoff.values().to_vec(),
        }
    }
}

/// CSV `x,m,b,f` in increasing `x`.
pub fn emit_plot_data(table: &PayoffTable) -> String {
    let mut order: Vec<usize> = (0..table.x.len()).collect();
    order.sort_by(|&i, &j| table.x[i].total_cmp(&table.x[j]));
    let mut out = String::from("x,m,b,f\n");
    for i in order {
        out.push_str(&format!(
            "{},{},{},{}\n",
            io::fmt_num(table.x[i]),
            io::fmt_num(table.m[i]),
            io::fmt_num(table.b[i]),
            io::fmt_num(table.f[i])
        ));
    }
    out
}

/// Runs the configured command and writes its output.
pub fn run(config: &RunConfig) -> FormatResult<()> {
    let text = execute(config)?;
    io::emit(config.out.as_deref(), &text)
}

/// `error: category=<c> message=<m>` on one line.
pub fn error_line(e: &FormatError) -> String {
    let msg = e.to_string().replace(['\n', '\r'], " ");
    format!("error: category={} message={}", e.category(), msg)
}

/// Runs the configured command and returns its main output.
pub fn execute(config: &RunConfig) -> FormatResult<String> {
    match &config.command {
        Command::ImpliedDensity { curve, grid, views } => {
            let (market, _) = load_curve(curve)?;
            let grid = build_grid(grid, market.forward())?;
            let views = load_views(views)?;
            let c = believed_curve(&market, &views)?;
            Ok(io::density_to_csv(&implied_density(&c, &grid)?))
        }
        Command::Payoff(args) => payoff_command(args),
        Command::IndexSimulate {
            market,
            believed,
            paths,
            measure,
            path_index,
        } => {
            let market: DynamicsSpec<f64> = io::dynamics_from_json(&io::read_to_string(market)?)?;
            let believed: DynamicsSpec<f64> = io::dynamics_from_json(&io::read_to_string(believed)?)?;
            match paths {
                Some(n) => {
                    let stats = index_statistics(&market, &believed, (*measure).into(), *n, config.seed)?;
                    Ok(io::to_json_line(&stats))
                }
                None => {
                    let driver = match measure {
                        MeasureArg::Market => &market,
                        MeasureArg::Believed => &believed,
                    };
                    let path = PathSample::from_returns(1.0, path_returns(driver, config.seed, *path_index))?;
                    Ok(io::index_series_to_csv(&run_index(&path, &market, &believed)?))
                }
            }
        }
        Command::KellyScan {
            market,
            believed,
            leverages,
            paths,
        } => {
            let market: DynamicsSpec<f64> = io::dynamics_from_json(&io::read_to_string(market)?)?;
            let believed: DynamicsSpec<f64> = io::dynamics_from_json(&io::read_to_string(believed)?)?;
            let leverages = if leverages.is_empty() {
                let kelly = (believed.drift()[0] - market.drift()[0]) / (market.vol()[0] * market.vol()[0]);
                [0.0, 0.5, 1.0, 1.5, 2.0].iter().map(|m| m * kelly).collect()
            } else {
                leverages.clone()
            };
            let rows = kelly_scan(&market, &believed, &leverages, *paths, config.seed)?;
            Ok(io::kelly_to_csv(&rows))
        }
        Command::HedgedPnl(args) => hedged_command(args, config.seed),
        Command::CubicDecompose { profile, center } => {
            let p = io::profile_from_csv::<f64, _>(io::read_to_string(profile)?.as_bytes())?;
            Ok(io::to_json_line(&cubic_decomposition_about(&p, *center)?))
        }
        Command::ModelRisk { b, m, buckets, terms } => {
            let b = io::load_density::<f64>(b)?;
            let m = io::load_density::<f64>(m)?;
            let buckets = io::buckets_from_json::<f64>(&io::read_to_string(buckets)?)?;
            let terms = io::terms_from_json::<f64>(&io::read_to_string(terms)?)?;
            Ok(io::to_json_line(&model_risk_report(&b, &m, &buckets, &terms)?))
        }
    }
}

fn arg_error(msg: impl Into<String>) -> FormatError {
    FormatError::Lib(Error::Argument(msg.into()))
}

/// Curve and its discount factor from the CSV, sidecar and flag overrides.
fn load_curve(args: &CurveArgs) -> FormatResult<(VolCurve<f64>, f64)> {
    let path = args.curve.as_deref().ok_or_else(|| arg_error("--curve is required"))?;
    // report a missing curve before any complaint about missing metadata
    std::fs::metadata(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })?;
    let sidecar = args.meta.clone().unwrap_or_else(|| io::sidecar_path(path));
    let file_meta: Option<CurveMeta> = if args.meta.is_some() || sidecar.exists() {
        Some(io::load_json(&sidecar)?)
    } else {
        None
    };
    let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
        flag.or(from_file)
            .ok_or_else(|| arg_error(format!("{name} missing: pass --{name} or a sidecar file")))
    };
    let meta = CurveMeta {
        forward: pick(args.forward, file_meta.map(|m| m.forward), "forward")?,
        maturity: pick(args.maturity, file_meta.map(|m| m.maturity), "maturity")?,
        discount_factor: args
            .discount_factor
            .or(file_meta.map(|m| m.discount_factor))
            .unwrap_or(1.0),
    };
    let curve = io::load_curve(path, &meta, args.wings.into())?;
    Ok((curve, meta.discount_factor))
}

fn build_grid(args: &GridArgs, forward: f64) -> FormatResult<Grid<f64>> {
    let lo = args.grid_lo.unwrap_or(0.3 * forward);
    let hi = args.grid_hi.unwrap_or(3.0 * forward);
    if !(lo < hi) {
        return Err(arg_error(format!("grid bounds must satisfy lo < hi, got {lo} and {hi}")));
    }
    Ok(make_grid(lo, hi, args.grid_count)?)
}

fn load_views(paths: &[PathBuf]) -> FormatResult<Vec<ViewSpec<f64>>> {
    let mut views = Vec::new();
    for p in paths {
        views.extend(io::views_from_json::<f64>(&io::read_to_string(p)?)?);
    }
    Ok(views)
}

/// Market and believed densities plus terms for the payoff command.
pub fn payoff_inputs(args: &PayoffArgs) -> FormatResult<(Density<f64>, Density<f64>, PricingTerms<f64>)> {
    let curve = match args.curve.curve {
        Some(_) => Some(load_curve(&args.curve)?),
        None => None,
    };
    let m = match (&args.m_density, &curve) {
        (Some(p), _) => io::load_density::<f64>(p)?,
        (None, Some((c, _))) => implied_density(c, &build_grid(&args.grid, c.forward())?)?,
        (None, None) => return Err(arg_error("pass --curve or --m-density")),
    };
    let views = load_views(&args.views)?;
    let b = match (&args.b_density, &curve) {
        (Some(p), _) => {
            if !views.is_empty() {
                return Err(arg_error("--b-density and --view are exclusive"));
            }
            io::load_density::<f64>(p)?
        }
        (None, Some((c, _))) => {
            implied_density(&believed_curve(c, &views)?, &build_grid(&args.grid, c.forward())?)?
        }
        (None, None) if views.is_empty() => m.clone(),
        (None, None) => return Err(arg_error("views need --curve")),
    };
    let terms = match &args.terms {
        Some(p) => io::terms_from_json::<f64>(&io::read_to_string(p)?)?,
        None => PricingTerms::new(curve.map(|(_, df)| df).unwrap_or(1.0), 0.0, 1.0)?,
    };
    Ok((m, b, terms))
}

fn payoff_command(args: &PayoffArgs) -> FormatResult<String> {
    let (m, b, terms) = payoff_inputs(args)?;
    let payoff = growth_optimal_payoff(&m, &b, &terms)?;
    if let Some(path) = &args.summary {
        io::write_file(path, &io::to_json_line(&expected_rate_of_return(&payoff, &b)?))?;
    }
    Ok(emit_plot_data(&PayoffTable::new(&m, &b, &payoff)))
}

#[derive(Serialize)]
struct HedgedReport {
    pnl: f64,
    kernel: Kernel,
    steps: usize,
}

fn hedged_command(args: &HedgedArgs, seed: u64) -> FormatResult<String> {
    let profile = io::profile_from_csv::<f64, _>(io::read_to_string(&args.profile)?.as_bytes())?;
    let engine = GammaEngine::new(args.kernel.into(), DEFAULT_PANELS);
    match (&args.spec, &args.dynamics) {
        (Some(spec), None) => {
            let spec = HedgedPnlSpec::<f64>::from_json(&io::read_to_string(spec)?)?;
            let pnl = engine.hedged_pnl(&profile, &spec)?;
            Ok(io::to_json_line(&HedgedReport {
                pnl,
                kernel: engine.kernel(),
                steps: spec.realized_vols.len(),
            }))
        }
        (None, Some(dynamics)) => {
            let dynamics: DynamicsSpec<f64> = io::dynamics_from_json(&io::read_to_string(dynamics)?)?;
            let hedge_vol = args
                .hedge_vol
                .ok_or_else(|| arg_error("--hedge-vol is required with --dynamics"))?;
            let hist = pnl_histogram(&engine, &profile, &dynamics, args.s0, hedge_vol, args.paths, args.bins, seed)?;
            Ok(io::density_to_csv(&hist))
        }
        (Some(_), Some(_)) => Err(arg_error("--spec and --dynamics are exclusive")),
        (None, None) => Err(arg_error("pass --spec or --dynamics")),
    }
}

/// Histogram of hedged P&L over simulated paths, realized vols estimated
/// from each path's log returns. Bins span the sample range.
#[allow(clippy::too_many_arguments)]
pub fn pnl_histogram(
    engine: &GammaEngine<f64>,
    profile: &crate::hedged::ProfileFn<f64>,
    dynamics: &DynamicsSpec<f64>,
    s0: f64,
    hedge_vol: f64,
    n_paths: usize,
    bins: usize,
    seed: u64,
) -> FormatResult<Density<f64>> {
    if n_paths == 0 || bins == 0 {
        return Err(arg_error("--paths and --bins must be >= 1"));
    }
    let maturity = dynamics.horizon();
    let pnls = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let path = PathSample::from_returns(s0, path_returns(dynamics, seed, i))?;
            let vols = realized_vols(&path, dynamics.dt());
            let spec = HedgedPnlSpec::new(hedge_vol, maturity, path, vols, dynamics.dt().to_vec())?;
            engine.hedged_pnl(profile, &spec)
        })
        .collect::<crate::error::Result<Vec<f64>>>()?;
    let lo = pnls.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = pnls.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let (centers, widths, counts) = if hi > lo {
        let w = (hi - lo) / bins as f64;
        let mut counts = vec![0.0; bins];
        for &p in &pnls {
            counts[(((p - lo) / w) as usize).min(bins - 1)] += 1.0;
        }
        let centers = (0..bins).map(|j| lo + (j as f64 + 0.5) * w).collect();
        (centers, vec![w; bins], counts)
    } else {
        (vec![lo], vec![1.0], vec![n_paths as f64])
    };
    Ok(Density::from_weights(Grid::with_widths(centers, widths)?, counts)?)
}
