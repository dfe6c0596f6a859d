//! The computational subcommands.

use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use rayon::prelude::*;
use serde_json::json;

use bqec_core::capacity::{capacity_row, CapacityRow, ChannelParams};
use bqec_core::lattice::{
    failure_bound, square_failure_probability, GkpLatticeCode, LogicalResidual,
};
use bqec_core::noise::{normal, sigma_gkp_from_squeezing_db, NoiseParams, ShiftVector};
use bqec_core::osc::tms::gain_to_squeezing_db;
use bqec_core::osc::{
    distillation_output_variance, tms_optimize_gain, tms_optimize_gain_finite_gkp,
    TriorthogonalMatrix,
};
use bqec_core::rng::{derive_seed, trial_rng};
use bqec_core::surface::{
    monte_carlo, threshold_scan, MonteCarloResult, SurfaceGkpConfig, ThresholdCase, ThresholdReport,
};
use bqec_core::Pauli;

use crate::config::{parse_axis, parse_distances, ConfigFile};
use crate::format::{full, short};
use crate::output::RunContext;

/// A flag value if given, else the config-file value, else the default.
fn resolve<T>(flag: Option<T>, file: &ConfigFile, key: &str, default: T) -> anyhow::Result<T>
where
    T: std::str::FromStr,
    T::Err: std::fmt::Display,
{
    Ok(match flag {
        Some(v) => v,
        None => file.get(key)?.unwrap_or(default),
    })
}

/// Like [`resolve`] for list-valued settings kept as text.
fn resolve_text(flag: Option<String>, file: &ConfigFile, key: &str, default: &str) -> String {
    flag.or_else(|| file.raw(key).map(str::to_string))
        .unwrap_or_else(|| default.to_string())
}

fn bool_cell(b: bool) -> String {
    if b { "true" } else { "false" }.into()
}

// ---------------------------------------------------------------- surface-sim

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    /// Code distances, comma separated (odd, at least 3).
    #[arg(long = "d")]
    pub distances: Option<String>,
    /// Circuit noise σ: a list `a,b,…` or a grid `start:stop:step`.
    #[arg(long)]
    pub sigma: Option<String>,
    /// GKP state noise σ_gkp: a list or a grid.
    #[arg(long)]
    pub sigma_gkp: Option<String>,
    /// Weight matching edges with the analog readout information.
    #[arg(long)]
    pub analog: Option<bool>,
    /// Trials per row.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed; every row derives its own stream from it.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Append a wall-clock `seconds` column (makes the CSV run-dependent).
    #[arg(long)]
    pub timings: bool,
}

const RATE_COLUMNS: [&str; 6] = ["p_x", "p_x_err", "p_z", "p_z_err", "p_y", "p_y_err"];

fn rate_cells(r: &MonteCarloResult) -> [String; 6] {
    [
        full(r.p_x.p),
        full(r.p_x.std_err),
        full(r.p_z.p),
        full(r.p_z.std_err),
        full(r.p_y.p),
        full(r.p_y.std_err),
    ]
}

pub fn surface_sim(ctx: &RunContext, file: &ConfigFile, args: SurfaceArgs) -> anyhow::Result<()> {
    let distances = parse_distances(&resolve_text(args.distances, file, "distance", "3"))?;
    let sigmas = parse_axis(&resolve_text(args.sigma, file, "sigma", "0"))?;
    let sigma_gkps = parse_axis(&resolve_text(args.sigma_gkp, file, "sigma_gkp", "0"))?;
    let analog = resolve(args.analog, file, "use_analog_info", true)?;
    let trials = resolve(args.trials, file, "trials", 10_000)?;
    let seed = resolve(args.seed, file, "seed", 0)?;

    let mut header: Vec<&str> = vec!["d", "sigma", "sigma_gkp", "analog", "trials"];
    header.extend(RATE_COLUMNS);
    if args.timings {
        header.push("seconds");
    }
    let mut rows = Vec::new();
    println!("d  sigma    sigma_gkp  P_X         P_Z         P_Y");
    for &d in &distances {
        let mut j = 0u64;
        for &sigma in &sigmas {
            for &sigma_gkp in &sigma_gkps {
                let row_seed = derive_seed(seed, &[d as u64, j]);
                j += 1;
                let noise = NoiseParams::new(sigma, sigma_gkp)?;
                let started = std::time::Instant::now();
                let r = monte_carlo(SurfaceGkpConfig::new(d, noise, analog, row_seed), trials)?;
                let seconds = started.elapsed().as_secs_f64();
                println!(
                    "{d:<2} {:<8} {:<10} {:<11} {:<11} {}",
                    short(sigma),
                    short(sigma_gkp),
                    short(r.p_x.p),
                    short(r.p_z.p),
                    short(r.p_y.p)
                );
                let mut row = vec![
                    d.to_string(),
                    full(sigma),
                    full(sigma_gkp),
                    bool_cell(analog),
                    trials.to_string(),
                ];
                row.extend(rate_cells(&r));
                if args.timings {
                    row.push(full(seconds));
                }
                rows.push(row);
            }
        }
    }
    let csv = ctx.write_csv("surface-sim", &header, &rows)?;
    let config = json!({
        "distance": distances,
        "sigma": sigmas,
        "sigma_gkp": sigma_gkps,
        "use_analog_info": analog,
        "trials": trials,
        "seed": seed,
        "row_seeds": "derive_seed(seed, [d, row index within d])",
    });
    ctx.write_manifest("surface-sim", "surface-sim", config, Some(seed), &[csv])?;
    Ok(())
}

// ------------------------------------------------------------------ threshold

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Noise family: I (σ = 0), II (σ_gkp = 0) or III (σ = σ_gkp).
    #[arg(long)]
    pub case: Option<String>,
    /// Code distances, comma separated.
    #[arg(long = "d")]
    pub distances: Option<String>,
    /// Noise grid `start:stop:step` or a list; defaults depend on the case.
    #[arg(long)]
    pub grid: Option<String>,
    /// Trials per grid point.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Weight matching edges with the analog readout information.
    #[arg(long)]
    pub analog: Option<bool>,
}

/// Grid bracketing the crossing of each noise family.
pub fn default_grid(case: ThresholdCase) -> &'static str {
    match case {
        ThresholdCase::I => "0.16:0.22:0.005",
        ThresholdCase::II => "0.06:0.12:0.005",
        ThresholdCase::III => "0.053:0.113:0.005",
    }
}

pub fn case_name(case: ThresholdCase) -> &'static str {
    match case {
        ThresholdCase::I => "I",
        ThresholdCase::II => "II",
        ThresholdCase::III => "III",
    }
}

pub const THRESHOLD_COLUMNS: [&str; 14] = [
    "case",
    "analog",
    "d",
    "x",
    "sigma",
    "sigma_gkp",
    "trials",
    "p_x",
    "p_x_err",
    "p_z",
    "p_z_err",
    "p_y",
    "p_y_err",
    "rate",
];

/// One CSV row per (distance, grid point) of a scan.
pub fn threshold_rows(report: &ThresholdReport, analog: bool) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (i, &d) in report.distances.iter().enumerate() {
        for (j, &x) in report.grid.iter().enumerate() {
            let r = &report.points[i][j];
            let mut row = vec![
                case_name(report.case).to_string(),
                bool_cell(analog),
                d.to_string(),
                full(x),
                full(r.config.noise.sigma),
                full(r.config.noise.sigma_gkp),
                r.trials.to_string(),
            ];
            row.extend(rate_cells(r));
            row.push(full(bqec_core::surface::threshold::scan_rate(r)));
            rows.push(row);
        }
    }
    rows
}

pub fn crossing_rows(report: &ThresholdReport, analog: bool) -> Vec<Vec<String>> {
    report
        .crossings
        .iter()
        .map(|c| {
            vec![
                case_name(report.case).to_string(),
                bool_cell(analog),
                c.d_small.to_string(),
                c.d_large.to_string(),
                c.crossing.map(full).unwrap_or_default(),
            ]
        })
        .collect()
}

pub const CROSSING_COLUMNS: [&str; 5] = ["case", "analog", "d_small", "d_large", "crossing"];

pub fn print_crossings(report: &ThresholdReport) {
    for c in &report.crossings {
        match c.crossing {
            Some(x) => println!("crossing d={}/{}: {}", c.d_small, c.d_large, short(x)),
            None => println!(
                "crossing d={}/{}: none inside the grid",
                c.d_small, c.d_large
            ),
        }
    }
    match report.estimate() {
        Some(x) => println!(
            "threshold estimate (case {}): {} (spread {})",
            case_name(report.case),
            short(x),
            short(report.spread().unwrap_or(0.0))
        ),
        None => println!(
            "threshold estimate (case {}): not bracketed",
            case_name(report.case)
        ),
    }
}

pub fn threshold(ctx: &RunContext, file: &ConfigFile, args: ThresholdArgs) -> anyhow::Result<()> {
    let case_text = args
        .case
        .or_else(|| file.raw("case").map(str::to_string))
        .context("missing --case (I, II or III)")?;
    let case = ThresholdCase::parse(&case_text)?;
    let distances = parse_distances(&resolve_text(args.distances, file, "distance", "3,5,7"))?;
    let grid = parse_axis(&args.grid.unwrap_or_else(|| default_grid(case).to_string()))?;
    let trials = resolve(args.trials, file, "trials", 2_000)?;
    let seed = resolve(args.seed, file, "seed", 0)?;
    let analog = resolve(args.analog, file, "use_analog_info", true)?;

    let report = threshold_scan(case, &distances, &grid, trials, seed, analog)?;
    print_crossings(&report);
    let rates = ctx.write_csv(
        "threshold",
        &THRESHOLD_COLUMNS,
        &threshold_rows(&report, analog),
    )?;
    let crossings = ctx.write_csv(
        "threshold-crossings",
        &CROSSING_COLUMNS,
        &crossing_rows(&report, analog),
    )?;
    let config = json!({
        "case": case_name(case),
        "distance": distances,
        "grid": grid,
        "trials": trials,
        "seed": seed,
        "use_analog_info": analog,
    });
    ctx.write_manifest(
        "threshold",
        "threshold",
        config,
        Some(seed),
        &[rates, crossings],
    )?;
    Ok(())
}

// ----------------------------------------------------------------- gkp-single

#[derive(Debug, Args)]
pub struct GkpSingleArgs {
    /// `square`, `hexagonal`, or a file with the rows of the generator matrix.
    #[arg(long, default_value = "square")]
    pub lattice: String,
    /// Shift noise σ per quadrature: a list or a grid.
    #[arg(long)]
    pub sigma: String,
    /// Monte Carlo trials of closest-vector decoding per σ (0 = analytic only).
    #[arg(long, default_value_t = 0)]
    pub trials: u64,
    /// Master seed for the Monte Carlo.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn load_lattice(spec: &str) -> anyhow::Result<GkpLatticeCode> {
    Ok(match spec {
        "square" => GkpLatticeCode::square(2)?,
        "hexagonal" => GkpLatticeCode::hexagonal(2)?,
        path => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read lattice file {path}"))?;
            GkpLatticeCode::from_text(&text).with_context(|| format!("in lattice file {path}"))?
        }
    })
}

fn is_identity(r: &LogicalResidual) -> bool {
    matches!(
        r,
        LogicalResidual::Qubit(Pauli::I) | LogicalResidual::Qudit(0, 0)
    )
}

/// Fraction of trials in which closest-vector decoding leaves a logical
/// error, with its binomial standard error.
fn decoding_failure_rate(
    code: &GkpLatticeCode,
    sigma: f64,
    trials: u64,
    seed: u64,
) -> anyhow::Result<(f64, f64)> {
    let modes = code.mode_count();
    let failures = (0..trials)
        .into_par_iter()
        .map(|t| -> anyhow::Result<u64> {
            let mut rng = trial_rng(seed, t);
            let q = (0..modes).map(|_| normal(&mut rng, sigma)).collect();
            let p = (0..modes).map(|_| normal(&mut rng, sigma)).collect();
            let shift = ShiftVector::new(q, p)?;
            let outcome = code.closest_vector_decode(&code.syndrome(&shift)?)?;
            Ok(u64::from(!outcome.residual_logical.iter().all(is_identity)))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    let p = failures as f64 / trials as f64;
    Ok((p, (p * (1.0 - p) / trials as f64).sqrt()))
}

pub fn gkp_single(ctx: &RunContext, args: GkpSingleArgs) -> anyhow::Result<()> {
    let code = load_lattice(&args.lattice)?;
    let sigmas = parse_axis(&args.sigma)?;
    let square = args.lattice == "square";
    let header = [
        "lattice",
        "sigma",
        "p_fail_exact",
        "p_fail_asymptotic",
        "p_fail_bound",
        "p_fail_mc",
        "p_fail_mc_err",
    ];
    let mut rows = Vec::new();
    println!("sigma    exact       asymptotic  bound       monte-carlo");
    for (j, &sigma) in sigmas.iter().enumerate() {
        let (exact, asy) = if square {
            (
                Some(square_failure_probability(sigma, true)?),
                Some(square_failure_probability(sigma, false)?),
            )
        } else {
            (None, None)
        };
        let bound = failure_bound(&code, sigma)?;
        let mc = if args.trials > 0 {
            Some(decoding_failure_rate(
                &code,
                sigma,
                args.trials,
                derive_seed(args.seed, &[j as u64]),
            )?)
        } else {
            None
        };
        let opt = |x: Option<f64>, f: fn(f64) -> String| x.map(f).unwrap_or_default();
        println!(
            "{:<8} {:<11} {:<11} {:<11} {}",
            short(sigma),
            opt(exact, short),
            opt(asy, short),
            short(bound),
            opt(mc.map(|m| m.0), short)
        );
        rows.push(vec![
            args.lattice.clone(),
            full(sigma),
            opt(exact, full),
            opt(asy, full),
            full(bound),
            opt(mc.map(|m| m.0), full),
            opt(mc.map(|m| m.1), full),
        ]);
    }
    let csv = ctx.write_csv("gkp-single", &header, &rows)?;
    let config = json!({
        "lattice": args.lattice,
        "logical_dims": code.logical_dims(),
        "sigma": sigmas,
        "trials": args.trials,
        "seed": args.seed,
    });
    ctx.write_manifest("gkp-single", "gkp-single", config, Some(args.seed), &[csv])?;
    Ok(())
}

// ------------------------------------------------------------------- capacity

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Transmissivity η: a list or a grid.
    #[arg(long)]
    pub eta: String,
    /// Thermal photon number of the environment.
    #[arg(long, default_value_t = 0.0)]
    pub n_th: f64,
    /// Input energy constraint n̄ (`inf` or omitted = unconstrained).
    #[arg(long)]
    pub n_bar: Option<f64>,
}

pub const CAPACITY_COLUMNS: [&str; 11] = [
    "eta",
    "gamma",
    "n_th",
    "n_bar",
    "q_dp",
    "q_idp",
    "q_odp",
    "lb_thermal",
    "lb_correlated",
    "x_star",
    "gkp_rate",
];

pub fn capacity_cells(r: &CapacityRow) -> Vec<String> {
    vec![
        full(r.eta),
        full(r.gamma),
        full(r.n_th),
        full(r.n_bar.unwrap_or(f64::INFINITY)),
        full(r.q_dp),
        full(r.q_idp),
        full(r.q_odp),
        full(r.lb_thermal),
        full(r.lb_correlated),
        full(r.x_star),
        full(r.gkp_rate),
    ]
}

pub fn capacity(ctx: &RunContext, args: CapacityArgs) -> anyhow::Result<()> {
    let etas = parse_axis(&args.eta)?;
    let results = etas
        .iter()
        .map(|&eta| {
            Ok(capacity_row(&ChannelParams::new(
                eta, args.n_th, args.n_bar,
            )?))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    println!("eta      q_dp      q_idp     q_odp     lb_therm  lb_corr   x_star    gkp_rate");
    for r in &results {
        println!(
            "{:<8} {:<9} {:<9} {:<9} {:<9} {:<9} {:<9} {}",
            short(r.eta),
            short(r.q_dp),
            short(r.q_idp),
            short(r.q_odp),
            short(r.lb_thermal),
            short(r.lb_correlated),
            short(r.x_star),
            short(r.gkp_rate)
        );
        rows.push(capacity_cells(r));
    }
    let csv = ctx.write_csv("capacity", &CAPACITY_COLUMNS, &rows)?;
    let config = json!({
        "eta": etas,
        "n_th": args.n_th,
        "n_bar": args.n_bar.filter(|n| n.is_finite()),
    });
    ctx.write_manifest("capacity", "capacity", config, None, &[csv])?;
    Ok(())
}

// ------------------------------------------------------------------------ tms

#[derive(Debug, Args)]
pub struct TmsArgs {
    /// Input noise σ: a list or a grid.
    #[arg(long)]
    pub sigma: String,
    /// GKP ancilla squeezing in dB, comma separated (`inf` = ideal ancilla).
    #[arg(long, default_value = "inf")]
    pub sigma_gkp_db: String,
}

pub const TMS_COLUMNS: [&str; 6] = [
    "sigma",
    "sigma_gkp_db",
    "g_star",
    "squeezing_db",
    "sigma_l_star",
    "qec_gain",
];

/// Optimal-gain row for input noise σ and ancilla squeezing `db`.
pub fn tms_cells(sigma: f64, db: f64) -> anyhow::Result<Vec<String>> {
    let (g, sl) = if db.is_infinite() {
        tms_optimize_gain(sigma)?
    } else {
        tms_optimize_gain_finite_gkp(sigma, sigma_gkp_from_squeezing_db(db))?
    };
    Ok(vec![
        full(sigma),
        full(db),
        full(g),
        full(gain_to_squeezing_db(g)),
        full(sl),
        full(sigma * sigma / (sl * sl)),
    ])
}

pub fn tms(ctx: &RunContext, args: TmsArgs) -> anyhow::Result<()> {
    let sigmas = parse_axis(&args.sigma)?;
    let dbs = parse_axis(&args.sigma_gkp_db)?;
    if dbs.iter().any(|db| db.is_nan() || *db == f64::NEG_INFINITY) {
        bail!("GKP squeezing must be a number of dB or inf");
    }
    let mut rows = Vec::new();
    println!("sigma    s_gkp[dB]  G*        squeeze[dB]  sigma_L*   gain");
    for &db in &dbs {
        for &sigma in &sigmas {
            let row = tms_cells(sigma, db)?;
            let val = |i: usize| short(row[i].parse::<f64>().unwrap_or(f64::NAN));
            println!(
                "{:<8} {:<10} {:<9} {:<12} {:<10} {}",
                val(0),
                val(1),
                val(2),
                val(3),
                val(4),
                val(5)
            );
            rows.push(row);
        }
    }
    let csv = ctx.write_csv("tms", &TMS_COLUMNS, &rows)?;
    let config = json!({
        "sigma": sigmas,
        "sigma_gkp_db": dbs.iter().map(|d| full(*d)).collect::<Vec<_>>(),
    });
    ctx.write_manifest("tms", "tms", config, None, &[csv])?;
    Ok(())
}

// -------------------------------------------------------------------- distill

#[derive(Debug, Args)]
pub struct DistillArgs {
    /// Matrix file: one row per line, entries separated by spaces or commas,
    /// optional `k = <int>` line.
    #[arg(long)]
    pub matrix: PathBuf,
}

pub fn distill(ctx: &RunContext, args: DistillArgs) -> anyhow::Result<()> {
    let text = std::fs::read_to_string(&args.matrix)
        .with_context(|| format!("cannot read matrix file {}", args.matrix.display()))?;
    let header = ["n", "m", "k", "triorthogonal", "sigma_sq_ratio", "reason"];
    let row = match TriorthogonalMatrix::from_text(&text) {
        Ok(code) => {
            let (n, m) = code.shape();
            let k = code.k();
            let ratio = if k == 1 {
                Some(distillation_output_variance(&code, 1.0)?.sigma_sq)
            } else {
                None
            };
            match ratio {
                Some(r) => println!(
                    "triorthogonal ({n},{m},{k}); Sigma^2/sigma^2 = {}",
                    short(r)
                ),
                None => println!("triorthogonal ({n},{m},{k}); Sigma^2/sigma^2 needs k = 1"),
            }
            vec![
                n.to_string(),
                m.to_string(),
                k.to_string(),
                bool_cell(true),
                ratio.map(full).unwrap_or_default(),
                String::new(),
            ]
        }
        Err(bqec_core::Error::Invalid(reason)) => {
            println!("not triorthogonal: {reason}");
            vec![
                String::new(),
                String::new(),
                String::new(),
                bool_cell(false),
                String::new(),
                reason,
            ]
        }
        Err(e) => {
            return Err(e).with_context(|| format!("in matrix file {}", args.matrix.display()))
        }
    };
    let csv = ctx.write_csv("distill", &header, &[row])?;
    let config = json!({ "matrix": args.matrix.display().to_string(), "contents": text });
    ctx.write_manifest("distill", "distill", config, None, &[csv])?;
    Ok(())
}
