use clap::Parser;

use hpm_cli::args::{Cli, Command};
use hpm_cli::commands::{
    cmd_certify, cmd_generate, cmd_oracle, cmd_solve, cmd_tensor_convert, SolveFlags,
};
use hpm_cli::experiment::cmd_experiment;
use hpm_cli::sweep::cmd_sweep;
use hpm_cli::CliResult;

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Generate {
            config,
            out_tensor,
            out_truth,
        } => cmd_generate(&config, &out_tensor, &out_truth),
        Command::Solve {
            tensor,
            truth,
            zeta,
            outer,
            inner,
            descent,
            gamma,
            starts,
            seed,
            out,
            csv,
        } => {
            let flags = SolveFlags {
                zeta,
                outer,
                inner,
                descent,
                gamma,
                starts,
                seed,
            };
            cmd_solve(
                &tensor,
                truth.as_deref(),
                &flags,
                out.as_deref(),
                csv.as_deref(),
            )
        }
        Command::Oracle { tensor } => cmd_oracle(&tensor),
        Command::Certify {
            tensor,
            labels,
            gamma,
            starts,
            iters,
            seed,
        } => cmd_certify(&tensor, &labels, gamma, starts, iters, seed),
        Command::ExperimentAppendixD {
            trials,
            seed,
            out_csv,
        } => cmd_experiment(trials, seed, &out_csv),
        Command::Sweep {
            config,
            out_csv,
            out_aggregate,
        } => cmd_sweep(&config, &out_csv, &out_aggregate),
        Command::TensorConvert { input, output, to } => cmd_tensor_convert(&input, &output, to),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
