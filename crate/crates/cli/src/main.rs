use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ruled_core::commands::{cmd_classify, cmd_eval, cmd_mesh, cmd_verify, Check, MeshTarget};
use ruled_core::scene::{builtin_names, SceneConfig};

const PASS: u8 = 0;
const FAIL: u8 = 1;
const USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "ruled", version, about = "Laplace normal fields of skew ruled surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scene JSON file, or the name of a builtin scene
    #[arg(long, global = true, default_value = "helicoid")]
    config: String,

    /// Write output here instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// CSV of surface, normalizations and Laplace normal at each point
    Eval,
    /// Classify the Laplace normal image over the scene grid
    Classify,
    /// Run the property, oracle and example checks
    Verify {
        /// Comma-separated subset of prop1..prop6, oracle, examples, or `all`
        #[arg(long, default_value = "all")]
        check: String,
    },
    /// Export a mesh or polyline
    Mesh {
        /// surface, image-surface, gamma, or gamma-csv
        #[arg(long, default_value = "surface")]
        target: String,
    },
    /// List the builtin scenes
    Scenes,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), u8> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            FAIL
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|_| FAIL)
        }
    }
}

fn run(cli: Cli) -> Result<u8, u8> {
    if let Command::Scenes = cli.command {
        let list: String = builtin_names().map(|n| format!("{n}\n")).collect();
        emit(&cli.out, &list)?;
        return Ok(PASS);
    }
    let usage = |e: ruled_core::Error| {
        eprintln!("error: {e}");
        USAGE
    };
    let fail = |e: ruled_core::Error| {
        eprintln!("error: {e}");
        FAIL
    };
    let scene = SceneConfig::load(&cli.config).map_err(usage)?.build().map_err(usage)?;
    match cli.command {
        Command::Eval => {
            emit(&cli.out, &cmd_eval(&scene).map_err(fail)?)?;
            Ok(PASS)
        }
        Command::Classify => {
            let o = cmd_classify(&scene).map_err(fail)?;
            emit(&cli.out, &o.text)?;
            Ok(if o.passed { PASS } else { FAIL })
        }
        Command::Verify { check } => {
            let which = Check::parse_set(&check).map_err(usage)?;
            let report = cmd_verify(&scene, &which);
            emit(&cli.out, &report.render())?;
            Ok(if report.passed() { PASS } else { FAIL })
        }
        Command::Mesh { target } => {
            let target = MeshTarget::parse(&target).map_err(usage)?;
            emit(&cli.out, &cmd_mesh(&scene, target).map_err(fail)?)?;
            Ok(PASS)
        }
        Command::Scenes => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) | Err(code) => ExitCode::from(code),
    }
}
