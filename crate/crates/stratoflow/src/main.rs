use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use stratoflow::manifest::{parse_manifest, Kind};
use stratoflow::output::{RunError, Status};
use stratoflow::run::{run, RunOptions};
use stratoflow::summarize::summarize;

#[derive(Parser)]
#[command(name = "stratoflow", about = "Stratified Boussinesq spectral lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct RunArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads; bit-exact output is guaranteed only with 1.
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Subcommand)]
enum Command {
    Simulate(RunArgs),
    Limit(RunArgs),
    Converge(RunArgs),
    ResonanceScan(RunArgs),
    Certify(RunArgs),
    Propcheck(RunArgs),
    /// Print tables and fits for a finished run directory.
    Summarize {
        dir: PathBuf,
    },
    /// Dump the wave frame at one frequency as JSON.
    Frame {
        #[arg(long)]
        manifest: PathBuf,
        /// Frequency as `n1,n2,n3`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<i64>,
    },
}

fn report(e: &RunError) -> ExitCode {
    let body = serde_json::json!({ "status": e.status, "exit_code": e.status.exit_code(), "error": e.message });
    eprintln!("{}", body);
    ExitCode::from(e.status.exit_code() as u8)
}

fn execute(kind: Kind, args: RunArgs) -> ExitCode {
    let m = match parse_manifest(&args.manifest) {
        Ok(m) => m,
        Err(e) => return report(&e.into()),
    };
    if m.kind != kind {
        return report(&RunError::validation(format!(
            "manifest kind `{}` does not match the command `{}`",
            m.kind.name(),
            kind.name()
        )));
    }
    if args.workers == 0 {
        return report(&RunError::validation("--workers must be at least 1"));
    }
    match run(
        &m,
        &RunOptions {
            out: args.out,
            workers: args.workers,
        },
    ) {
        Ok(o) => {
            if o.summary.status != Status::Ok {
                eprintln!("{}", o.summary.error.as_deref().unwrap_or("run failed"));
            }
            println!("{}", o.dir.display());
            ExitCode::from(o.exit_code() as u8)
        }
        Err(e) => report(&e),
    }
}

fn frame(manifest: PathBuf, at: Vec<i64>) -> ExitCode {
    let m = match parse_manifest(&manifest) {
        Ok(m) => m,
        Err(e) => return report(&e.into()),
    };
    let Ok(n) = <[i64; 3]>::try_from(at.as_slice()) else {
        return report(&RunError::validation(
            "--at expects three comma-separated integers",
        ));
    };
    let e = stratocore::wave_basis::build_frame(&m.torus, n);
    let vecs: Vec<Vec<[f64; 2]>> = e
        .basis
        .iter()
        .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    let body = serde_json::json!({
        "n": e.n,
        "degenerate": e.degenerate,
        "omega": e.omega,
        "basis": { "e0": vecs[0], "e_plus": vecs[1], "e_minus": vecs[2], "g": vecs[3] },
    });
    println!(
        "{}",
        serde_json::to_string_pretty(&body).unwrap_or_default()
    );
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Simulate(a) => execute(Kind::Simulate, a),
        Command::Limit(a) => execute(Kind::Limit, a),
        Command::Converge(a) => execute(Kind::Converge, a),
        Command::ResonanceScan(a) => execute(Kind::ResonanceScan, a),
        Command::Certify(a) => execute(Kind::Certify, a),
        Command::Propcheck(a) => execute(Kind::Propcheck, a),
        Command::Summarize { dir } => match summarize(&dir) {
            Ok(s) => {
                print!("{}", s);
                ExitCode::SUCCESS
            }
            Err(e) => report(&RunError::validation(e)),
        },
        Command::Frame { manifest, at } => frame(manifest, at),
    }
}
