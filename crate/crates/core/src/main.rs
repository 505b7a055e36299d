use clap::{Parser, Subcommand, ValueEnum};
use quartetnet::commands::{self, Emit, GenOptions, Io, Mode, ReconstructOptions, RepairOptions};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "quartetnet", version, about = "Reconstruct level-1 networks from quartets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Auto,
    General,
    Fast,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitArg {
    All,
    Anchored,
}

#[derive(Subcommand)]
enum Command {
    /// Build a network from a quartet file.
    Reconstruct {
        #[arg(short, long)]
        input: PathBuf,
        /// Network file (or the certificate when the quartets are inconsistent); stdout if omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Taxon used to anchor coordinates; defaults to the first taxon seen.
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, value_enum, default_value = "auto")]
        mode: ModeArg,
        /// Comma-separated complete taxon list; quartets may only use these names.
        #[arg(long, value_delimiter = ',')]
        taxa: Option<Vec<String>>,
        /// Skip checking that the result displays the input.
        #[arg(long)]
        no_verify: bool,
        /// Also write the network in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Generate a random network.
    Gen {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p_split: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the quartets the network displays.
        #[arg(long, value_enum)]
        emit_quartets: Option<EmitArg>,
        /// Where to write emitted quartets; defaults to `<output>.quartets`.
        #[arg(long)]
        quartets_output: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// List the quartets displayed by a network.
    Quartets {
        #[arg(short, long)]
        input: PathBuf,
        /// Only quartets containing this taxon.
        #[arg(long)]
        anchor: Option<String>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check that a network displays every quartet in a file.
    Verify {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        quartets: PathBuf,
    },
    /// Ask for missing quartets on stdin until a network is determined.
    Repair {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        anchor: Option<String>,
        #[arg(long, value_delimiter = ',')]
        taxa: Option<Vec<String>>,
        #[arg(long)]
        no_verify: bool,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
}

fn cap_missing() -> usize {
    std::env::var("QUARTETNET_CAP_MISSING")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(commands::DEFAULT_CAP_MISSING)
}

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = stdout.lock();
    let mut err = stderr.lock();
    let mut io = Io {
        out: &mut out,
        err: &mut err,
    };
    let code = match cli.command {
        Command::Reconstruct {
            input,
            output,
            anchor,
            mode,
            taxa,
            no_verify,
            dot,
        } => {
            let opts = ReconstructOptions {
                input,
                output,
                anchor,
                mode: match mode {
                    ModeArg::Auto => Mode::Auto,
                    ModeArg::General => Mode::General,
                    ModeArg::Fast => Mode::Fast,
                },
                taxa,
                verify: !no_verify,
                dot,
                cap_missing: cap_missing(),
            };
            commands::reconstruct_command(&opts, &mut io)
        }
        Command::Gen {
            n,
            p_split,
            seed,
            output,
            emit_quartets,
            quartets_output,
            anchor,
            dot,
        } => {
            let opts = GenOptions {
                n,
                p_split,
                seed,
                output,
                emit_quartets: emit_quartets.map(|e| match e {
                    EmitArg::All => Emit::All,
                    EmitArg::Anchored => Emit::Anchored,
                }),
                quartets_output,
                anchor,
                dot,
            };
            commands::gen(&opts, &mut io)
        }
        Command::Quartets { input, anchor, output } => {
            commands::quartets(&input, anchor.as_deref(), output.as_deref(), &mut io)
        }
        Command::Verify { network, quartets } => commands::verify(&network, &quartets, &mut io),
        Command::Repair {
            input,
            output,
            anchor,
            taxa,
            no_verify,
            dot,
        } => {
            let opts = RepairOptions {
                input,
                output,
                anchor,
                taxa,
                verify: !no_verify,
                dot,
            };
            let stdin = std::io::stdin();
            commands::repair(&opts, &mut stdin.lock(), &mut io)
        }
    };
    drop(io);
    drop(out);
    drop(err);
    std::process::exit(code);
}
