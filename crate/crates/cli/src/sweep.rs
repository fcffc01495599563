//! Parameter sweeps: a grid of (n, model parameters) points, each run for a
//! number of trials. Emits one CSV row per (point, trial) and an aggregated
//! file with recovery frequency, mean agreement, and the
//! statistical-condition report per point.
//!
//! Grid file format (`;` separates grid values, `,` separates list items):
//!
//! ```text
//! [sweep]
//! kind = counts
//! n = 8, 12
//! trials = 20
//! seed = 1
//! T = 1
//! alpha = 0.9,0.1,0 ; 0.8,0.2,0
//! zeta = 0.05
//! outer = 100
//! inner = 40
//! descent = 20
//! gamma = 0.05
//! starts = 1
//! ```
//!
//! Bisection grids use `q = 0.1 ; 0.3` and an explicit `m`; cut grids use
//! `alpha`; motif grids use `motif_edges`, `alpha4`, and `m`.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hpm_core::model::config::{parse_sections, ModelKind};
use hpm_core::model::{
    expected_cut, hpm_of_bisection, hpm_of_counts, motif_probability, p_from_alpha,
    sample_bisection, sample_counts, sample_cuts, sample_motif, recovery_conditions, Assignment,
    BisectionParams, CountsParams, CutsParams, ExpectationWeights, HpmSpec, Motif, MotifParams,
    RecoveryConditions,
};
use hpm_core::solver::{solve, SolverConfig};
use hpm_core::spectra::AscentConfig;
use hpm_core::{Error, SymTensor64};

use crate::{read_to_string, write_string, CliResult};

#[derive(Clone, Debug)]
pub enum PointParams {
    Counts(CountsParams<f64>),
    Bisection(BisectionParams<f64>),
    Cuts(Vec<f64>),
    Motif(MotifParams<f64>),
}

impl PointParams {
    fn label(&self) -> String {
        match self {
            PointParams::Counts(p) => format!(
                "alpha={} T={}",
                join_pipe(&p.alpha_compact),
                p.trials
            ),
            PointParams::Bisection(p) => format!("q={}", p.q),
            PointParams::Cuts(alpha) => format!("alpha={}", join_pipe(alpha)),
            PointParams::Motif(p) => format!("alpha4={}", join_pipe(&p.alpha4)),
        }
    }
}

fn join_pipe(vals: &[f64]) -> String {
    vals.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("|")
}

#[derive(Clone, Debug)]
pub struct SweepPoint {
    pub index: usize,
    pub kind: ModelKind,
    pub n: usize,
    pub m: usize,
    pub params: PointParams,
}

#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub points: Vec<SweepPoint>,
    pub trials: usize,
    pub seed: u64,
    pub solver: SolverConfig,
}

fn bad_key(key: &str, message: impl Into<String>) -> Error {
    Error::InvalidParam {
        key: key.to_string(),
        message: message.into(),
    }
}

pub fn parse_sweep_config(text: &str) -> CliResult<SweepConfig> {
    let sections = parse_sections(text)?;
    let sweep = sections
        .iter()
        .find(|(name, _)| name == "sweep")
        .map(|(_, kv)| kv)
        .ok_or_else(|| bad_key("sweep", "missing [sweep] section"))?;

    let mut kind: Option<ModelKind> = None;
    let mut n_list: Vec<usize> = Vec::new();
    let mut trials = 10usize;
    let mut seed = 0u64;
    let mut m: Option<usize> = None;
    let mut t_count = 1u32;
    let mut zero_repeats = false;
    let mut alphas: Vec<Vec<f64>> = Vec::new();
    let mut qs: Vec<f64> = Vec::new();
    let mut alpha4s: Vec<[f64; 4]> = Vec::new();
    let mut motif_edges: Vec<(usize, usize)> = Vec::new();
    let mut solver = SolverConfig::default();

    for (key, value) in sweep {
        match key.as_str() {
            "kind" => {
                kind = Some(match value.as_str() {
                    "counts" => ModelKind::Counts,
                    "bisection" => ModelKind::Bisection,
                    "cuts" => ModelKind::Cuts,
                    "motif" => ModelKind::Motif,
                    other => {
                        return Err(bad_key("kind", format!("unknown model kind `{other}`")).into())
                    }
                })
            }
            "n" => {
                n_list = value
                    .split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| bad_key("n", format!("bad count `{}`", v.trim())))
                    })
                    .collect::<Result<_, _>>()?
            }
            "trials" => {
                trials = value
                    .parse()
                    .map_err(|_| bad_key("trials", format!("bad count `{value}`")))?
            }
            "seed" => {
                seed = value
                    .parse()
                    .map_err(|_| bad_key("seed", format!("bad seed `{value}`")))?
            }
            "m" => {
                m = Some(
                    value
                        .parse()
                        .map_err(|_| bad_key("m", format!("bad order `{value}`")))?,
                )
            }
            "T" => {
                t_count = value
                    .parse()
                    .map_err(|_| bad_key("T", format!("bad count `{value}`")))?
            }
            "repeats_mode" => {
                zero_repeats = match value.as_str() {
                    "sample" => false,
                    "zero" => true,
                    other => {
                        return Err(bad_key(
                            "repeats_mode",
                            format!("expected `sample` or `zero`, got `{other}`"),
                        )
                        .into())
                    }
                }
            }
            "alpha" => {
                alphas = value
                    .split(';')
                    .map(|group| parse_float_list("alpha", group))
                    .collect::<Result<_, _>>()?
            }
            "q" => {
                qs = value
                    .split(';')
                    .map(|v| {
                        v.trim()
                            .parse::<f64>()
                            .map_err(|_| bad_key("q", format!("bad number `{}`", v.trim())))
                    })
                    .collect::<Result<_, _>>()?
            }
            "alpha4" => {
                alpha4s = value
                    .split(';')
                    .map(|group| {
                        let vals = parse_float_list("alpha4", group)?;
                        if vals.len() != 4 {
                            return Err(bad_key("alpha4", "need exactly 4 probabilities"));
                        }
                        Ok([vals[0], vals[1], vals[2], vals[3]])
                    })
                    .collect::<Result<_, _>>()?
            }
            "motif_edges" => {
                motif_edges = value
                    .split(',')
                    .map(|e| {
                        let e = e.trim();
                        let (a, b) = e.split_once("->").ok_or_else(|| {
                            bad_key("motif_edges", format!("edge `{e}` is not `i->j`"))
                        })?;
                        let a = a.trim().parse::<usize>().map_err(|_| {
                            bad_key("motif_edges", format!("bad vertex `{}`", a.trim()))
                        })?;
                        let b = b.trim().parse::<usize>().map_err(|_| {
                            bad_key("motif_edges", format!("bad vertex `{}`", b.trim()))
                        })?;
                        Ok::<(usize, usize), Error>((a, b))
                    })
                    .collect::<Result<_, _>>()?
            }
            "zeta" => solver.zeta = parse_float("zeta", value)?,
            "gamma" => solver.ascent.step_gamma = parse_float("gamma", value)?,
            "outer" => solver.outer_iters = parse_count("outer", value)?,
            "inner" => solver.inner_iters = parse_count("inner", value)?,
            "descent" => {
                solver.descent_iters = parse_count("descent", value)?;
                solver.ascent.max_iters = solver.descent_iters;
            }
            "starts" => solver.ascent.num_starts = parse_count("starts", value)?,
            other => return Err(bad_key(other, "unknown key in [sweep]").into()),
        }
    }

    let kind = kind.ok_or_else(|| bad_key("kind", "missing model kind"))?;
    if n_list.is_empty() {
        return Err(bad_key("n", "empty grid: need at least one n").into());
    }

    let mut points = Vec::new();
    for &n in &n_list {
        match kind {
            ModelKind::Counts => {
                for alpha in &alphas {
                    if alpha.len() < 2 {
                        return Err(bad_key("alpha", "need at least 2 compact weights").into());
                    }
                    points.push((
                        n,
                        2 * (alpha.len() - 1),
                        PointParams::Counts(CountsParams {
                            alpha_compact: alpha.clone(),
                            trials: t_count,
                            zero_repeats,
                        }),
                    ));
                }
            }
            ModelKind::Bisection => {
                let m = m.ok_or_else(|| bad_key("m", "bisection sweep needs an order"))?;
                for &q in &qs {
                    points.push((
                        n,
                        Ok::<usize, Error>(m)?,
                        PointParams::Bisection(BisectionParams { q, zero_repeats }),
                    ));
                }
            }
            ModelKind::Cuts => {
                for alpha in &alphas {
                    points.push((n, 4, PointParams::Cuts(alpha.clone())));
                }
            }
            ModelKind::Motif => {
                let m = m.ok_or_else(|| bad_key("m", "motif sweep needs an order"))?;
                let motif = Motif::from_edges(m, &motif_edges)?;
                for alpha4 in &alpha4s {
                    points.push((
                        n,
                        m,
                        PointParams::Motif(MotifParams {
                            motif: motif.clone(),
                            alpha4: *alpha4,
                        }),
                    ));
                }
            }
        }
    }
    if points.is_empty() {
        return Err(bad_key("sweep", "empty grid: no parameter values supplied").into());
    }
    let points = points
        .into_iter()
        .enumerate()
        .map(|(index, (n, m, params))| SweepPoint {
            index,
            kind,
            n,
            m,
            params,
        })
        .collect();
    Ok(SweepConfig {
        points,
        trials,
        seed,
        solver,
    })
}

fn parse_float(key: &str, value: &str) -> Result<f64, Error> {
    value
        .parse()
        .map_err(|_| bad_key(key, format!("bad number `{value}`")))
}

fn parse_count(key: &str, value: &str) -> Result<usize, Error> {
    value
        .parse()
        .map_err(|_| bad_key(key, format!("bad count `{value}`")))
}

fn parse_float_list(key: &str, group: &str) -> Result<Vec<f64>, Error> {
    group
        .split(',')
        .map(|v| {
            v.trim()
                .parse::<f64>()
                .map_err(|_| bad_key(key, format!("bad number `{}`", v.trim())))
        })
        .collect()
}

/// Reparametrize a grid point as a model-instance record for the condition
/// check. Cut and motif points use their derived expectation weights with
/// conservative variance bounds.
pub fn point_hpm_spec(point: &SweepPoint) -> hpm_core::Result<HpmSpec<f64>> {
    match &point.params {
        PointParams::Counts(p) => hpm_of_counts(p, point.n),
        PointParams::Bisection(p) => hpm_of_bisection(p, point.m, point.n),
        PointParams::Cuts(alpha_compact) => {
            let labels_for = |l: usize| -> Vec<i8> {
                (0..4).map(|j| if j < l { 1 } else { -1 }).collect()
            };
            let alpha: Vec<f64> = (0..=4)
                .map(|l| {
                    expected_cut(alpha_compact, &labels_for(l), point.n / 2, point.n / 2)
                })
                .collect::<hpm_core::Result<_>>()?;
            let weights = ExpectationWeights::from_full(alpha)?;
            let p = p_from_alpha(&weights)?;
            // Cut sizes are bounded by the total number of possible edges.
            let bound = binomial_f64(point.n, 4);
            let sigma2 = (point.n as f64).powi(4) * bound * bound / 4.0;
            HpmSpec::new(point.n, 4, p, sigma2, bound)
        }
        PointParams::Motif(p) => {
            let m = point.m;
            let labels_for =
                |l: usize| -> Vec<i8> { (0..m).map(|j| if j < l { 1 } else { -1 }).collect() };
            let alpha: Vec<f64> = (0..=m)
                .map(|l| motif_probability(&p.motif, &labels_for(l), &p.alpha4))
                .collect::<hpm_core::Result<_>>()?;
            let max_var = alpha
                .iter()
                .map(|b| b * (1.0 - b))
                .fold(0.0f64, f64::max);
            let weights = ExpectationWeights::from_full(alpha)?;
            let coeffs = p_from_alpha(&weights)?;
            let sigma2 = (point.n as f64).powi(m as i32) * max_var;
            HpmSpec::new(point.n, m, coeffs, sigma2, 1.0)
        }
    }
}

fn binomial_f64(a: usize, b: usize) -> f64 {
    let mut acc = 1.0f64;
    for i in 0..b {
        acc = acc * (a - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[derive(Clone, Debug)]
pub struct SweepRow {
    pub point: usize,
    pub n: usize,
    pub params: String,
    pub trial: usize,
    pub seed: u64,
    pub h: f64,
    pub objective: f64,
    pub recovered: bool,
    pub psd_corrections: usize,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct SweepAggregate {
    pub point: usize,
    pub kind: ModelKind,
    pub n: usize,
    pub params: String,
    pub trials: usize,
    pub recovery_rate: f64,
    pub mean_h: f64,
    pub report: RecoveryConditions<f64>,
}

fn run_point_trial(point: &SweepPoint, trial: usize, seed: u64, solver: &SolverConfig) -> hpm_core::Result<SweepRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y_star = Assignment::random_balanced(point.n, &mut rng)?;
    let w: SymTensor64 = match &point.params {
        PointParams::Counts(p) => sample_counts(p, &y_star, &mut rng)?,
        PointParams::Bisection(p) => sample_bisection(p, &y_star, &mut rng, point.m)?,
        PointParams::Cuts(alpha) => sample_cuts(
            &CutsParams {
                alpha_compact: alpha.clone(),
                n: point.n,
            },
            &y_star,
            &mut rng,
        )?,
        PointParams::Motif(p) => sample_motif(p, &y_star, &mut rng)?,
    };
    let cfg = SolverConfig {
        seed,
        ascent: AscentConfig {
            seed: 0,
            ..solver.ascent
        },
        ..*solver
    };
    let started = Instant::now();
    let result = solve(&w, &cfg, Some(&y_star))?;
    Ok(SweepRow {
        point: point.index,
        n: point.n,
        params: point.params.label(),
        trial,
        seed,
        h: result.h.expect("truth supplied"),
        objective: result.objective,
        recovered: result.y_hat.matches_up_to_sign(&y_star),
        psd_corrections: result.trace.iter().map(|t| t.psd_corrections).sum(),
        wall_ms: started.elapsed().as_millis(),
    })
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub aggregates: Vec<SweepAggregate>,
}

pub fn run_sweep(cfg: &SweepConfig) -> hpm_core::Result<SweepOutcome> {
    let jobs: Vec<(usize, usize, u64)> = cfg
        .points
        .iter()
        .flat_map(|p| {
            (0..cfg.trials).map(move |t| {
                (
                    p.index,
                    t,
                    cfg.seed
                        .wrapping_add(p.index as u64 * 100_003)
                        .wrapping_add(t as u64),
                )
            })
        })
        .collect();
    let rows: Vec<SweepRow> = jobs
        .par_iter()
        .map(|(pi, t, seed)| run_point_trial(&cfg.points[*pi], *t, *seed, &cfg.solver))
        .collect::<hpm_core::Result<_>>()?;

    let mut aggregates = Vec::new();
    for point in &cfg.points {
        let point_rows: Vec<&SweepRow> = rows.iter().filter(|r| r.point == point.index).collect();
        let trials = point_rows.len();
        let recovered = point_rows.iter().filter(|r| r.recovered).count();
        let mean_h = point_rows.iter().map(|r| r.h).sum::<f64>() / trials as f64;
        let spec = point_hpm_spec(point)?;
        let report = recovery_conditions(&spec, 1.0, 1.0)?;
        aggregates.push(SweepAggregate {
            point: point.index,
            kind: point.kind,
            n: point.n,
            params: point.params.label(),
            trials,
            recovery_rate: recovered as f64 / trials as f64,
            mean_h,
            report,
        });
    }
    Ok(SweepOutcome { rows, aggregates })
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "point,n,params,trial,seed,h,objective,recovered,psd_corrections,wall_ms\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.point,
            r.n,
            r.params,
            r.trial,
            r.seed,
            r.h,
            r.objective,
            r.recovered,
            r.psd_corrections,
            r.wall_ms
        );
    }
    out
}

pub fn aggregates_to_csv(aggs: &[SweepAggregate]) -> String {
    let mut out = String::from(
        "point,kind,n,params,trials,recovery_rate,mean_h,f_value,f_positive,lhs_b,rhs_b,lhs_sigma,rhs_sigma,satisfied\n",
    );
    for a in aggs {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            a.point,
            a.kind.as_str(),
            a.n,
            a.params,
            a.trials,
            a.recovery_rate,
            a.mean_h,
            a.report.f_value,
            a.report.f_positive,
            a.report.lhs_b,
            a.report.rhs_b,
            a.report.lhs_sigma,
            a.report.rhs_sigma,
            a.report.satisfied
        );
    }
    out
}

pub fn cmd_sweep(config: &Path, out_csv: &Path, out_aggregate: &Path) -> CliResult<()> {
    let cfg = parse_sweep_config(&read_to_string(config)?)?;
    let outcome = run_sweep(&cfg)?;
    write_string(out_csv, &rows_to_csv(&outcome.rows))?;
    write_string(out_aggregate, &aggregates_to_csv(&outcome.aggregates))?;
    for a in &outcome.aggregates {
        println!(
            "point {} (n={}, {}): recovery {:.2}, mean h {:.4}, F={}, satisfied={}",
            a.point, a.n, a.params, a.recovery_rate, a.mean_h, a.report.f_value, a.report.satisfied
        );
    }
    println!(
        "rows -> {}, aggregate -> {}",
        out_csv.display(),
        out_aggregate.display()
    );
    Ok(())
}
