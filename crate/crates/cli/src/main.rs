//! `convex-rounder`: bodies, duality, rounding and certificates from the shell.
//!
//! Every command prints one JSON document on stdout and a one-line summary on
//! stderr. Exit codes: 0 success, 1 runtime failure, 2 bad input, 3 rounding
//! budget not met, 4 certificate or budget check failed.

mod commands;
mod output;
mod svg;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use commands::{CertArgs, DistArgs, DualArgs, ExportArgs, Global, MakeArgs, RoundArgs};
use output::{envelope, Failure, EXIT_INPUT};

#[derive(Parser, Debug)]
#[command(name = "convex-rounder", version, about = "Convex bodies through gauges and support functions")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build bodies.
    Body {
        #[command(subcommand)]
        action: BodyAction,
    },
    /// Strictify, smoothify or Asplund-average a body and certify the result.
    Round(RoundArgs),
    /// Strict convexity or smoothness certificate.
    Cert(CertArgs),
    /// Polar body or conjugate energy.
    Dual(DualArgs),
    /// Hausdorff distance between two bodies.
    Dist(DistArgs),
    /// SVG of planar boundaries.
    Export(ExportArgs),
}

#[derive(Subcommand, Debug)]
enum BodyAction {
    /// Normalized, recentered body from a preset or a JSON file.
    Make(MakeArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            let f = Failure::input(e.kind().to_string());
            println!("{}", envelope("", &Err(f)));
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    let g = &cli.global;
    let (name, result) = match &cli.command {
        Command::Body { action: BodyAction::Make(a) } => ("body make", commands::body_make(g, a)),
        Command::Round(a) => ("round", commands::round(g, a)),
        Command::Cert(a) => ("cert", commands::cert(g, a)),
        Command::Dual(a) => ("dual", commands::dual(g, a)),
        Command::Dist(a) => ("dist", commands::dist(g, a)),
        Command::Export(a) => ("export", commands::export(g, a)),
    };
    println!("{}", envelope(name, &result));
    let code = match &result {
        Ok(out) => {
            eprintln!("{}", out.summary);
            out.code
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}
