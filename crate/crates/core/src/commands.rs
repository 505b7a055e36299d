//! Command implementations behind the `quartetnet` binary.
//!
//! Each command writes its results to the given streams and returns the
//! process exit status: 0 success, 1 usage or I/O error, 2 inconsistent
//! quartets, 3 insufficient quartets (a witness 4-set), 4 anchored input that
//! the fast path rejects.

use crate::fast::{fast_reconstruct, FastError, NotLevel1Like};
use crate::general::{reconstruct, Certificate, InconsistencyReason, NetworkResult, Reconstruction, ReconstructError, Session};
use crate::network::{parse_network, quartets_of, random_network, write_dot, write_network, Level1Network, QuartetOracle};
use crate::quartet::{is_dense, parse_quartet_line, parse_quartets, parse_quartets_with, write_quartets, write_quartets_by_name, Quartet, QuartetSet};
use crate::taxa::{Taxon, TaxonSet};
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;
pub const EXIT_WITNESS: i32 = 3;
pub const EXIT_NOT_LEVEL1_LIKE: i32 = 4;

/// Default number of missing 4-sets listed when the input is not dense.
pub const DEFAULT_CAP_MISSING: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Auto,
    General,
    Fast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Emit {
    All,
    Anchored,
}

/// Streams for one command invocation.
pub struct Io<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

struct Failure(i32);

type Step<T> = Result<T, Failure>;

fn usage(io: &mut Io, msg: impl std::fmt::Display) -> Failure {
    let _ = writeln!(io.err, "error: {msg}");
    Failure(EXIT_USAGE)
}

fn read(io: &mut Io, path: &Path) -> Step<String> {
    fs::read_to_string(path).map_err(|e| usage(io, format!("cannot read {}: {e}", path.display())))
}

fn write_to(io: &mut Io, path: Option<&Path>, text: &str) -> Step<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(io, format!("cannot write {}: {e}", p.display()))),
        None => io.out.write_all(text.as_bytes()).map_err(|e| usage(io, e)),
    }
}

fn finish(r: Step<i32>) -> i32 {
    match r {
        Ok(code) | Err(Failure(code)) => code,
    }
}

fn resolve_anchor(io: &mut Io, taxa: &TaxonSet, anchor: Option<&str>) -> Step<Taxon> {
    match anchor {
        Some(name) => taxa.require(name).map_err(|e| usage(io, e)),
        None if taxa.is_empty() => Err(usage(io, "no taxa")),
        None => Ok(Taxon(0)),
    }
}

/// Reads a quartet file, against a fixed taxon list when one is given.
fn load_quartets(io: &mut Io, path: &Path, taxa: Option<&[String]>) -> Step<(QuartetSet, TaxonSet)> {
    let text = read(io, path)?;
    let (quartets, taxa) = match taxa {
        Some(names) => {
            let mut set = TaxonSet::from_names(names).map_err(|e| usage(io, e))?;
            let qs = parse_quartets_with(&text, &mut set, false)
                .map_err(|e| usage(io, format!("{}: {e}", path.display())))?;
            (qs, set)
        }
        None => {
            let f = parse_quartets(&text).map_err(|e| usage(io, format!("{}: {e}", path.display())))?;
            (f.quartets, f.taxa)
        }
    };
    if quartets.duplicates() > 0 {
        let _ = writeln!(io.err, "note: dropped {} duplicate quartets", quartets.duplicates());
    }
    Ok((quartets, taxa))
}

/// Outcome of [`solve`].
#[derive(Debug, Clone)]
pub enum Solved {
    Network(Box<NetworkResult>),
    Inconsistent(Certificate),
    Witness([Taxon; 4]),
    /// Explicit fast mode turned the input down.
    Rejected(NotLevel1Like),
}

impl From<Reconstruction> for Solved {
    fn from(r: Reconstruction) -> Self {
        match r {
            Reconstruction::Network(n) => Solved::Network(n),
            Reconstruction::Inconsistent(c) => Solved::Inconsistent(c),
            Reconstruction::Witness(z) => Solved::Witness(z),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Solution {
    pub outcome: Solved,
    /// Why the fast path was abandoned in auto mode, if it was.
    pub fallback: Option<NotLevel1Like>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolveError {
    #[error("fast mode needs at least 4 taxa and every quartet to contain the anchor")]
    NotAnchored,
    #[error(transparent)]
    Fast(#[from] FastError),
    #[error(transparent)]
    Reconstruct(#[from] ReconstructError),
}

/// Runs the algorithm chosen by `mode`. Auto uses the fast path when the
/// input is non-empty and anchored, falling back to the general algorithm on
/// anything but a parity conflict.
pub fn solve(
    quartets: &QuartetSet,
    taxa: &TaxonSet,
    anchor: Taxon,
    mode: Mode,
    verify: bool,
) -> Result<Solution, SolveError> {
    let anchored = quartets.is_anchored_at(anchor) && taxa.len() >= 4;
    let use_fast = match mode {
        Mode::Fast if !anchored => return Err(SolveError::NotAnchored),
        Mode::Fast => true,
        Mode::General => false,
        Mode::Auto => anchored && !quartets.is_empty(),
    };
    let mut fallback = None;
    if use_fast {
        match fast_reconstruct(quartets, taxa, anchor, verify)? {
            Ok(result) => {
                return Ok(Solution {
                    outcome: Solved::Network(Box::new(result)),
                    fallback,
                })
            }
            Err(NotLevel1Like::ParityConflict(qs)) => {
                let cert = Certificate {
                    positions: qs.iter().map(|q| position_of(quartets, q)).collect(),
                    quartets: qs,
                    reason: InconsistencyReason::Infeasible,
                };
                return Ok(Solution {
                    outcome: Solved::Inconsistent(cert),
                    fallback,
                });
            }
            Err(report) if mode == Mode::Fast => {
                return Ok(Solution {
                    outcome: Solved::Rejected(report),
                    fallback,
                })
            }
            Err(report) => fallback = Some(report),
        }
    }
    let outcome = reconstruct(quartets, taxa, anchor, verify)?.into();
    Ok(Solution { outcome, fallback })
}

#[derive(Debug, Clone, Default)]
pub struct ReconstructOptions {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub anchor: Option<String>,
    pub mode: Mode,
    pub taxa: Option<Vec<String>>,
    pub verify: bool,
    pub dot: Option<PathBuf>,
    pub cap_missing: usize,
}

pub fn reconstruct_command(opts: &ReconstructOptions, io: &mut Io) -> i32 {
    finish(run_reconstruct(opts, io))
}

fn run_reconstruct(opts: &ReconstructOptions, io: &mut Io) -> Step<i32> {
    let (quartets, taxa) = load_quartets(io, &opts.input, opts.taxa.as_deref())?;
    let anchor = resolve_anchor(io, &taxa, opts.anchor.as_deref())?;
    let solution = solve(&quartets, &taxa, anchor, opts.mode, opts.verify).map_err(|e| usage(io, e))?;
    if let Some(report) = &solution.fallback {
        let _ = writeln!(
            io.err,
            "note: fast path declined ({}); using the general algorithm",
            report.describe(&taxa)
        );
    }
    let out = Outputs {
        output: opts.output.as_deref(),
        dot: opts.dot.as_deref(),
        cap_missing: opts.cap_missing,
    };
    emit_outcome(io, solution.outcome, &quartets, &taxa, &out)
}

fn position_of(quartets: &QuartetSet, q: &Quartet) -> usize {
    quartets.iter().position(|x| x == q).expect("certificate quartets come from the input")
}

struct Outputs<'a> {
    output: Option<&'a Path>,
    dot: Option<&'a Path>,
    cap_missing: usize,
}

fn emit_outcome(io: &mut Io, outcome: Solved, quartets: &QuartetSet, taxa: &TaxonSet, out: &Outputs) -> Step<i32> {
    match outcome {
        Solved::Network(result) => emit_network(io, &result, out.output, out.dot),
        Solved::Inconsistent(cert) => emit_certificate(io, &cert, taxa, out.output),
        Solved::Rejected(report) => {
            let _ = writeln!(io.err, "not level-1 like: {}", report.describe(taxa));
            Ok(EXIT_NOT_LEVEL1_LIKE)
        }
        Solved::Witness(z) => {
            let names: Vec<&str> = z.iter().map(|&t| taxa.name(t)).collect();
            let _ = writeln!(io.out, "{}", names.join(" "));
            let _ = writeln!(io.err, "insufficient quartets: supply a quartet on {}", names.join(" "));
            let report = is_dense(quartets, taxa.len(), out.cap_missing);
            if !report.dense {
                let _ = writeln!(io.err, "input is not dense: {} 4-sets carry no quartet", report.missing_count);
                for m in &report.missing {
                    let names: Vec<&str> = m.iter().map(|&t| taxa.name(t)).collect();
                    let _ = writeln!(io.err, "  missing {}", names.join(" "));
                }
            }
            Ok(EXIT_WITNESS)
        }
    }
}

fn emit_network(io: &mut Io, result: &NetworkResult, output: Option<&Path>, dot: Option<&Path>) -> Step<i32> {
    let g = &result.network;
    write_to(io, output, &write_network(g))?;
    if let Some(path) = dot {
        write_to(io, Some(path), &write_dot(g))?;
    }
    let _ = writeln!(
        io.err,
        "network: {} taxa, {} splits, {} cycles; solution dimension {}, split dimension {}",
        g.num_taxa(),
        result.splits.len(),
        g.structure().cycles.len(),
        result.dim,
        result.dim_split_space
    );
    if result.dim_split_space < result.dim {
        let _ = writeln!(
            io.err,
            "note: the quartets leave {} dimensions beyond the splits undetermined",
            result.dim - result.dim_split_space
        );
    }
    if !result.augmented.is_empty() {
        let _ = writeln!(io.err, "note: {} quartets were inferred during the sweep", result.augmented.len());
    }
    Ok(EXIT_OK)
}

fn emit_certificate(io: &mut Io, cert: &Certificate, taxa: &TaxonSet, output: Option<&Path>) -> Step<i32> {
    let set: QuartetSet = cert.quartets.iter().copied().collect();
    write_to(io, output, &write_quartets(&set, taxa))?;
    let why = match cert.reason {
        InconsistencyReason::Infeasible => "these quartets have no common solution",
        InconsistencyReason::NoCyclicSolution => "no cyclic ordering satisfies these quartets",
    };
    let _ = writeln!(io.err, "inconsistent: {why} ({} quartets)", cert.quartets.len());
    Ok(EXIT_INCONSISTENT)
}

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub n: usize,
    pub p_split: f64,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub emit_quartets: Option<Emit>,
    pub quartets_output: Option<PathBuf>,
    pub anchor: Option<String>,
    pub dot: Option<PathBuf>,
}

pub fn gen(opts: &GenOptions, io: &mut Io) -> i32 {
    finish(run_gen(opts, io))
}

fn run_gen(opts: &GenOptions, io: &mut Io) -> Step<i32> {
    let g = random_network(opts.n, opts.p_split, opts.seed).map_err(|e| usage(io, e))?;
    let quartets_path = match (&opts.emit_quartets, &opts.quartets_output, &opts.output) {
        (None, _, _) => None,
        (Some(_), Some(p), _) => Some(p.clone()),
        (Some(_), None, Some(out)) => {
            let mut name = out.clone().into_os_string();
            name.push(".quartets");
            Some(PathBuf::from(name))
        }
        (Some(_), None, None) => return Err(usage(io, "--emit-quartets with stdout output needs --quartets-output")),
    };
    write_to(io, opts.output.as_deref(), &write_network(&g))?;
    if let Some(path) = &opts.dot {
        write_to(io, Some(path), &write_dot(&g))?;
    }
    if let (Some(emit), Some(path)) = (opts.emit_quartets, quartets_path) {
        let anchor = match emit {
            Emit::All => None,
            Emit::Anchored => Some(resolve_anchor(io, g.taxa(), opts.anchor.as_deref())?),
        };
        write_to(io, Some(&path), &write_quartets(&quartets_of(&g, anchor), g.taxa()))?;
    }
    Ok(EXIT_OK)
}

fn load_network(io: &mut Io, path: &Path) -> Step<Level1Network> {
    let text = read(io, path)?;
    parse_network(&text).map_err(|e| usage(io, format!("{}: {e}", path.display())))
}

pub fn quartets(input: &Path, anchor: Option<&str>, output: Option<&Path>, io: &mut Io) -> i32 {
    finish((|| {
        let g = load_network(io, input)?;
        let anchor = match anchor {
            Some(name) => Some(resolve_anchor(io, g.taxa(), Some(name))?),
            None => None,
        };
        let qs = quartets_of(&g, anchor);
        write_to(io, output, &write_quartets_by_name(&qs, g.taxa()))?;
        Ok(EXIT_OK)
    })())
}

/// Exit 0 iff the network displays every quartet; otherwise lists the
/// quartets it does not display and exits 2.
pub fn verify(network: &Path, quartet_file: &Path, io: &mut Io) -> i32 {
    finish((|| {
        let g = load_network(io, network)?;
        let text = read(io, quartet_file)?;
        let mut taxa = g.taxa().clone();
        let qs = parse_quartets_with(&text, &mut taxa, false)
            .map_err(|e| usage(io, format!("{}: {e}", quartet_file.display())))?;
        if g.num_taxa() < 4 {
            return Ok(EXIT_OK);
        }
        let oracle = QuartetOracle::new(&g);
        let missing: Vec<&Quartet> = qs.iter().filter(|q| !oracle.displays(q)).collect();
        for q in &missing {
            let _ = writeln!(io.out, "not displayed: {}", q.format(g.taxa()));
        }
        let _ = writeln!(io.err, "{} of {} quartets displayed", qs.len() - missing.len(), qs.len());
        Ok(if missing.is_empty() { EXIT_OK } else { EXIT_INCONSISTENT })
    })())
}

#[derive(Debug, Clone, Default)]
pub struct RepairOptions {
    pub input: PathBuf,
    pub output: Option<PathBuf>,
    pub anchor: Option<String>,
    pub taxa: Option<Vec<String>>,
    pub verify: bool,
    pub dot: Option<PathBuf>,
}

/// Sidecar file receiving quartets typed during a repair session.
pub fn sidecar_path(input: &Path) -> PathBuf {
    let mut name = input.as_os_str().to_owned();
    name.push(".added");
    PathBuf::from(name)
}

/// Interactive loop: while the data leave a 4-set open, ask for a quartet on
/// it and add it to the live solver.
pub fn repair(opts: &RepairOptions, input: &mut dyn BufRead, io: &mut Io) -> i32 {
    finish(run_repair(opts, input, io))
}

fn run_repair(opts: &RepairOptions, input: &mut dyn BufRead, io: &mut Io) -> Step<i32> {
    let (quartets, taxa) = load_quartets(io, &opts.input, opts.taxa.as_deref())?;
    let anchor = resolve_anchor(io, &taxa, opts.anchor.as_deref())?;
    let mut session = Session::with_quartets(taxa.clone(), anchor, &quartets).map_err(|e| usage(io, e))?;
    let sidecar = sidecar_path(&opts.input);
    loop {
        let outcome = session.solve(opts.verify).map_err(|e| usage(io, e))?;
        let Reconstruction::Witness(z) = outcome else {
            let out = Outputs {
                output: opts.output.as_deref(),
                dot: opts.dot.as_deref(),
                cap_missing: 0,
            };
            return emit_outcome(io, outcome.into(), session.quartets(), &taxa, &out);
        };
        let names: Vec<&str> = z.iter().map(|&t| taxa.name(t)).collect();
        let q = loop {
            let _ = write!(io.out, "quartet on {} (A B | C D): ", names.join(" "));
            let _ = io.out.flush();
            let mut line = String::new();
            if input.read_line(&mut line).map_err(|e| usage(io, e))? == 0 {
                let _ = writeln!(io.out);
                let _ = writeln!(io.err, "input ended with {} still undecided", names.join(" "));
                return Ok(EXIT_WITNESS);
            }
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fixed = taxa.clone();
            match parse_quartet_line(content, &mut fixed, false) {
                Ok(q) if q.four_set() == z => break q,
                Ok(_) => {
                    let _ = writeln!(io.out, "the quartet must use exactly {}", names.join(" "));
                }
                Err(e) => {
                    let _ = writeln!(io.out, "{e}");
                }
            }
        };
        let mut file = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&sidecar)
            .map_err(|e| usage(io, format!("cannot write {}: {e}", sidecar.display())))?;
        writeln!(file, "{}", q.format(&taxa)).map_err(|e| usage(io, e))?;
        if session.add(q).map_err(|e| usage(io, e))? == crate::gf2::Outcome::Empty {
            let cert = session.certificate().expect("empty space has a certificate");
            return emit_certificate(io, &cert, &taxa, opts.output.as_deref());
        }
    }
}
