use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use hpm_core::model::config::parse_model_config;
use hpm_core::model::Assignment;
use hpm_core::solver::{brute_force, certify, solve, SolverConfig, CERTIFICATE_THRESHOLD};
use hpm_core::spectra::AscentConfig;
use hpm_core::tensor::text::{
    parse_densetensor, parse_symtensor, write_densetensor, write_symtensor, DENSETENSOR_HEADER,
};

use crate::args::ConvertTarget;
use crate::{parse_labels, read_to_string, write_string, CliError, CliResult};

pub fn cmd_generate(config: &Path, out_tensor: &Path, out_truth: &Path) -> CliResult<()> {
    let cfg = parse_model_config(&read_to_string(config)?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let y_star = Assignment::random_balanced(cfg.n, &mut rng)?;
    let w = cfg.sample(&y_star, &mut rng)?;
    write_string(out_tensor, &write_symtensor(&w))?;
    write_string(out_truth, &format!("{y_star}\n"))?;
    println!(
        "generated {} model: n={}, m={}, {} nonzero entries -> {}, truth -> {}",
        cfg.kind.as_str(),
        cfg.n,
        cfg.m,
        w.num_entries(),
        out_tensor.display(),
        out_truth.display()
    );
    Ok(())
}

pub struct SolveFlags {
    pub zeta: f64,
    pub outer: usize,
    pub inner: usize,
    pub descent: usize,
    pub gamma: f64,
    pub starts: usize,
    pub seed: u64,
}

impl SolveFlags {
    pub fn to_config(&self) -> SolverConfig {
        SolverConfig {
            zeta: self.zeta,
            outer_iters: self.outer,
            inner_iters: self.inner,
            descent_iters: self.descent,
            ascent: AscentConfig {
                step_gamma: self.gamma,
                max_iters: self.descent,
                num_starts: self.starts,
                seed: 0,
                stall_tol: 1e-12,
            },
            enforce_full_sigma2: false,
            project_every_inner: false,
            seed: self.seed,
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_solve(
    tensor_path: &Path,
    truth_path: Option<&Path>,
    flags: &SolveFlags,
    out: Option<&Path>,
    csv: Option<&Path>,
) -> CliResult<()> {
    let w = parse_symtensor(&read_to_string(tensor_path)?)?;
    let truth = truth_path
        .map(|p| parse_labels(&read_to_string(p)?))
        .transpose()?;
    let cfg = flags.to_config();
    let started = Instant::now();
    let result = solve(&w, &cfg, truth.as_ref())?;
    let wall_ms = started.elapsed().as_millis();

    let corrections: usize = result.trace.iter().map(|t| t.psd_corrections).sum();
    let mut report = String::new();
    let _ = writeln!(report, "HPM-SOLVE v1");
    let _ = writeln!(report, "n = {}", w.n());
    let _ = writeln!(report, "m = {}", w.m());
    let _ = writeln!(report, "seed = {}", flags.seed);
    let _ = writeln!(report, "zeta = {}", flags.zeta);
    let _ = writeln!(report, "outer = {}", flags.outer);
    let _ = writeln!(report, "inner = {}", flags.inner);
    let _ = writeln!(report, "descent = {}", flags.descent);
    let _ = writeln!(report, "gamma = {}", flags.gamma);
    let _ = writeln!(report, "starts = {}", flags.starts);
    let _ = writeln!(report, "objective = {}", result.objective);
    let _ = writeln!(report, "psd_corrections = {corrections}");
    let _ = writeln!(report, "y_hat = {}", result.y_hat);
    if let Some(h) = result.h {
        let _ = writeln!(report, "h = {h}");
    }
    match out {
        Some(path) => write_string(path, &report)?,
        None => print!("{report}"),
    }

    if let Some(csv_path) = csv {
        let recovered = truth
            .as_ref()
            .map(|t| result.y_hat.matches_up_to_sign(t))
            .map(|b| b.to_string())
            .unwrap_or_default();
        let h = result.h.map(|h| h.to_string()).unwrap_or_default();
        let header = "setting,trial,seed,h,objective,recovered,psd_corrections,wall_ms\n";
        let row = format!(
            "solve,0,{},{},{},{},{},{}\n",
            flags.seed, h, result.objective, recovered, corrections, wall_ms
        );
        append_csv(csv_path, header, &row)?;
    }
    Ok(())
}

fn append_csv(path: &Path, header: &str, row: &str) -> CliResult<()> {
    let existing = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => String::new(),
        Err(e) => return Err(CliError::Io(path.to_path_buf(), e)),
    };
    let mut contents = existing;
    if contents.is_empty() {
        contents.push_str(header);
    }
    contents.push_str(row);
    write_string(path, &contents)
}

pub fn cmd_oracle(tensor_path: &Path) -> CliResult<()> {
    let w = parse_symtensor(&read_to_string(tensor_path)?)?;
    let result = brute_force(&w)?;
    println!("value = {}", result.value);
    println!("tie = {}", result.tie);
    println!("y_opt = {}", result.y_opt);
    Ok(())
}

pub fn cmd_certify(
    tensor_path: &Path,
    labels_path: &Path,
    gamma: f64,
    starts: usize,
    iters: usize,
    seed: u64,
) -> CliResult<()> {
    let w = parse_symtensor(&read_to_string(tensor_path)?)?;
    let y = parse_labels(&read_to_string(labels_path)?)?;
    let cfg = AscentConfig {
        step_gamma: gamma,
        max_iters: iters,
        num_starts: starts,
        seed,
        stall_tol: 1e-12,
    };
    let certificate = certify(&w, &y, &cfg, CERTIFICATE_THRESHOLD)?;
    println!("lambda1_estimate = {}", certificate.lambda1_estimate);
    println!("verdict = {}", certificate.verdict);
    println!("heuristic = {}", certificate.heuristic);
    let witness: Vec<String> = certificate.witness.iter().map(|v| v.to_string()).collect();
    println!("witness = {}", witness.join(" "));
    Ok(())
}

pub fn cmd_tensor_convert(input: &Path, output: &Path, to: ConvertTarget) -> CliResult<()> {
    let text = read_to_string(input)?;
    let tensor = if text.starts_with(DENSETENSOR_HEADER) {
        parse_densetensor(&text)?
    } else {
        parse_symtensor(&text)?
    };
    let out_text = match to {
        ConvertTarget::Dense => write_densetensor(&tensor)?,
        ConvertTarget::Canonical => write_symtensor(&tensor),
    };
    write_string(output, &out_text)?;
    Ok(())
}
