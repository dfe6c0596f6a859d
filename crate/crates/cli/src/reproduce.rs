//! Data series behind the standard plots, one CSV per plot.

use anyhow::bail;
use clap::Args;
use serde_json::json;

use bqec_core::capacity::{capacity_row, ChannelParams};
use bqec_core::lattice::square_failure_probability;
use bqec_core::noise::{p_err, p_err_asymptotic};
use bqec_core::osc::tms::{asymptotic_optimum, gain_to_squeezing_db};
use bqec_core::osc::tms_optimize_gain;
use bqec_core::surface::threshold::grid_range;
use bqec_core::surface::{threshold_scan, ThresholdCase};

use crate::commands::{
    capacity_cells, crossing_rows, print_crossings, threshold_rows, tms_cells, CAPACITY_COLUMNS,
    CROSSING_COLUMNS, THRESHOLD_COLUMNS, TMS_COLUMNS,
};
use crate::format::full;
use crate::output::RunContext;

/// Supported plot ids and what each dataset contains.
pub const FIGURES: [(&str, &str); 8] = [
    ("2.8", "square GKP failure probability, exact and asymptotic, vs sigma"),
    ("4.6", "surface-GKP logical error rates vs noise for cases I-III, with and without analog information"),
    ("4.7", "p_err and its small-sigma asymptote vs sigma"),
    ("5.1", "DP, IDP, ODP bounds and thermal-input rate vs eta at n_th = 1, n_bar = 1 and 10"),
    ("5.2", "single-mode and correlated thermal-input rates vs gamma at n_th = 1, n_bar = 1"),
    ("5.3", "single-mode and correlated thermal-input rates vs n_bar at eta = 0.81, n_th = 1"),
    ("7.2", "optimal gain and logical noise of the two-mode-squeezing code vs sigma, with asymptotes"),
    ("7.5", "optimal QEC gain vs sigma for several GKP ancilla squeezings"),
];

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Plot id (one of 2.8, 4.6, 4.7, 5.1, 5.2, 5.3, 7.2, 7.5).
    pub figure: String,
    /// Trials per point for the Monte Carlo plots.
    #[arg(long, default_value_t = 500)]
    pub trials: u64,
    /// Master seed for the Monte Carlo plots.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn reproduce(ctx: &RunContext, args: ReproduceArgs) -> anyhow::Result<()> {
    let Some((id, description)) = FIGURES.iter().find(|(id, _)| *id == args.figure) else {
        let ids: Vec<&str> = FIGURES.iter().map(|(id, _)| *id).collect();
        bail!(
            "unsupported figure {:?} (supported: {})",
            args.figure,
            ids.join(", ")
        );
    };
    let name = format!("figure-{id}");
    let mut outputs = Vec::new();
    let mut seed = None;
    match *id {
        "2.8" => {
            let rows = grid_range(0.05, 1.0, 0.01)?
                .into_iter()
                .map(|s| -> anyhow::Result<Vec<String>> {
                    Ok(vec![
                        full(s),
                        full(square_failure_probability(s, true)?),
                        full(square_failure_probability(s, false)?),
                    ])
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let header = ["sigma", "p_fail_exact", "p_fail_asymptotic"];
            outputs.push(ctx.write_csv(&name, &header, &rows)?);
        }
        "4.6" => {
            seed = Some(args.seed);
            let cases = [
                (ThresholdCase::I, "0.12:0.26:0.01"),
                (ThresholdCase::II, "0.04:0.14:0.01"),
                (ThresholdCase::III, "0.04:0.13:0.01"),
            ];
            let (mut rows, mut crossings) = (Vec::new(), Vec::new());
            for (c, (case, grid)) in cases.into_iter().enumerate() {
                let grid = crate::config::parse_axis(grid)?;
                for analog in [true, false] {
                    let case_seed =
                        bqec_core::rng::derive_seed(args.seed, &[c as u64, u64::from(analog)]);
                    let report =
                        threshold_scan(case, &[3, 5, 7], &grid, args.trials, case_seed, analog)?;
                    println!("analog information: {analog}");
                    print_crossings(&report);
                    rows.extend(threshold_rows(&report, analog));
                    crossings.extend(crossing_rows(&report, analog));
                }
            }
            outputs.push(ctx.write_csv(&name, &THRESHOLD_COLUMNS, &rows)?);
            outputs.push(ctx.write_csv(
                &format!("{name}-crossings"),
                &CROSSING_COLUMNS,
                &crossings,
            )?);
        }
        "4.7" => {
            let rows = grid_range(0.05, 1.0, 0.01)?
                .into_iter()
                .map(|s| -> anyhow::Result<Vec<String>> {
                    Ok(vec![full(s), full(p_err(s)?), full(p_err_asymptotic(s))])
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            outputs.push(ctx.write_csv(&name, &["sigma", "p_err", "p_asy"], &rows)?);
        }
        "5.1" => {
            let mut rows = Vec::new();
            for n_bar in [1.0, 10.0] {
                for eta in grid_range(0.5, 1.0, 0.0025)? {
                    rows.push(capacity_cells(&capacity_row(&ChannelParams::new(
                        eta.min(1.0),
                        1.0,
                        Some(n_bar),
                    )?)));
                }
            }
            outputs.push(ctx.write_csv(&name, &CAPACITY_COLUMNS, &rows)?);
        }
        "5.2" => {
            let rows = grid_range(0.001, 0.3, 0.001)?
                .into_iter()
                .map(|gamma| -> anyhow::Result<Vec<String>> {
                    let p = ChannelParams::new(1.0 - gamma, 1.0, Some(1.0))?;
                    Ok(capacity_cells(&capacity_row(&p)))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            outputs.push(ctx.write_csv(&name, &CAPACITY_COLUMNS, &rows)?);
        }
        "5.3" => {
            let rows = grid_range(0.05, 10.0, 0.05)?
                .into_iter()
                .map(|n_bar| -> anyhow::Result<Vec<String>> {
                    let p = ChannelParams::new(0.81, 1.0, Some(n_bar))?;
                    Ok(capacity_cells(&capacity_row(&p)))
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            outputs.push(ctx.write_csv(&name, &CAPACITY_COLUMNS, &rows)?);
        }
        "7.2" => {
            let rows = grid_range(0.01, 0.6, 0.005)?
                .into_iter()
                .map(|s| -> anyhow::Result<Vec<String>> {
                    let (g, sl) = tms_optimize_gain(s)?;
                    let (ga, sla) = asymptotic_optimum(s);
                    Ok(vec![
                        full(s),
                        full(g),
                        full(gain_to_squeezing_db(g)),
                        full(sl),
                        full(ga),
                        full(gain_to_squeezing_db(ga.max(1.0))),
                        full(sla),
                    ])
                })
                .collect::<anyhow::Result<Vec<_>>>()?;
            let header = [
                "sigma",
                "g_star",
                "squeezing_db",
                "sigma_l_star",
                "g_star_asymptotic",
                "squeezing_db_asymptotic",
                "sigma_l_star_asymptotic",
            ];
            outputs.push(ctx.write_csv(&name, &header, &rows)?);
        }
        "7.5" => {
            let mut rows = Vec::new();
            for db in [12.8, 14.0, 16.0, 18.0, 20.0, 25.0, 30.0, f64::INFINITY] {
                for s in grid_range(0.01, 0.6, 0.005)? {
                    rows.push(tms_cells(s, db)?);
                }
            }
            outputs.push(ctx.write_csv(&name, &TMS_COLUMNS, &rows)?);
        }
        _ => unreachable!("every listed figure has a recipe"),
    }
    println!("{id}: {description}");
    for p in &outputs {
        println!("wrote {}", p.display());
    }
    let config = json!({ "figure": id, "trials": args.trials, "seed": args.seed });
    ctx.write_manifest(&name, "reproduce", config, seed, &outputs)?;
    Ok(())
}
