//! The two-setting reference experiment: n = 20, m = 4 counting models with
//! strong (0.9, 0.1, 0) and weak (0.6, 0.4, 0) weights, solved with the
//! default step sizes and iteration counts, 10 trials each. Reported h
//! means land near 0.298 (strong) and below noise (weak); reference values
//! from the original experiment are printed alongside.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hpm_core::model::{sample_counts, Assignment, CountsParams};
use hpm_core::solver::{solve, SolverConfig};
use hpm_core::SymTensor64;

use crate::{write_string, CliResult};

pub const STRONG_ALPHA: [f64; 3] = [0.9, 0.1, 0.0];
pub const WEAK_ALPHA: [f64; 3] = [0.6, 0.4, 0.0];
pub const REFERENCE_STRONG_H: f64 = 0.298;
pub const REFERENCE_WEAK_H: f64 = -0.249;
const N: usize = 20;

#[derive(Clone, Debug)]
pub struct ExperimentRecord {
    pub setting: &'static str,
    pub trial: usize,
    pub seed: u64,
    pub h: f64,
    pub objective: f64,
    pub recovered: bool,
    pub psd_corrections: usize,
    pub wall_ms: u128,
}

#[derive(Clone, Debug)]
pub struct ExperimentSummary {
    pub records: Vec<ExperimentRecord>,
    pub strong_mean_h: f64,
    pub weak_mean_h: f64,
}

pub fn run_trial(
    setting: &'static str,
    alpha_compact: &[f64; 3],
    trial: usize,
    seed: u64,
    solver: &SolverConfig,
) -> hpm_core::Result<ExperimentRecord> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y_star = Assignment::random_balanced(N, &mut rng)?;
    let params = CountsParams {
        alpha_compact: alpha_compact.to_vec(),
        trials: 1,
        zero_repeats: false,
    };
    let w: SymTensor64 = sample_counts(&params, &y_star, &mut rng)?;
    let cfg = SolverConfig { seed, ..*solver };
    let started = Instant::now();
    let result = solve(&w, &cfg, Some(&y_star))?;
    let wall_ms = started.elapsed().as_millis();
    Ok(ExperimentRecord {
        setting,
        trial,
        seed,
        h: result.h.expect("truth supplied"),
        objective: result.objective,
        recovered: result.y_hat.matches_up_to_sign(&y_star),
        psd_corrections: result.trace.iter().map(|t| t.psd_corrections).sum(),
        wall_ms,
    })
}

/// Run both settings. Trials execute in parallel with per-trial seeds
/// `base_seed + trial` (strong) and `base_seed + trials + trial` (weak);
/// record order in the output is fixed regardless of scheduling.
pub fn run(trials: usize, base_seed: u64, solver: &SolverConfig) -> hpm_core::Result<ExperimentSummary> {
    let jobs: Vec<(&'static str, &[f64; 3], usize, u64)> = (0..trials)
        .map(|t| ("strong", &STRONG_ALPHA, t, base_seed.wrapping_add(t as u64)))
        .chain((0..trials).map(|t| {
            (
                "weak",
                &WEAK_ALPHA,
                t,
                base_seed.wrapping_add((trials + t) as u64),
            )
        }))
        .collect();
    let records: Vec<ExperimentRecord> = jobs
        .par_iter()
        .map(|(setting, alpha, trial, seed)| run_trial(setting, alpha, *trial, *seed, solver))
        .collect::<hpm_core::Result<_>>()?;
    let mean = |name: &str| {
        let hs: Vec<f64> = records
            .iter()
            .filter(|r| r.setting == name)
            .map(|r| r.h)
            .collect();
        hs.iter().sum::<f64>() / hs.len() as f64
    };
    Ok(ExperimentSummary {
        strong_mean_h: mean("strong"),
        weak_mean_h: mean("weak"),
        records,
    })
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from("setting,trial,seed,h,objective,recovered,psd_corrections,wall_ms\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.setting, r.trial, r.seed, r.h, r.objective, r.recovered, r.psd_corrections, r.wall_ms
        );
    }
    out
}

pub fn cmd_experiment(trials: usize, seed: u64, out_csv: &Path) -> CliResult<()> {
    let summary = run(trials, seed, &SolverConfig::default())?;
    write_string(out_csv, &records_to_csv(&summary.records))?;
    println!(
        "strong: mean h = {:.4} over {trials} trials (reference {REFERENCE_STRONG_H})",
        summary.strong_mean_h
    );
    println!(
        "weak:   mean h = {:.4} over {trials} trials (reference {REFERENCE_WEAK_H})",
        summary.weak_mean_h
    );
    println!("per-trial records -> {}", out_csv.display());
    Ok(())
}
