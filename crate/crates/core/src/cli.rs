//! The `monotile` command line.

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::analysis;
use crate::construct;
use crate::format;
use crate::patch::Patch;
use crate::search::{self, Region, SearchConfig, Verdict};
use crate::svg::{render_svg, SvgOptions};
use crate::tile::RuleSet;

#[derive(Parser, Debug)]
#[command(name = "monotile", version, about = "Generate, check and search tilings by a charged hexagonal monotile")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a generated patch.
    Generate {
        #[command(subcommand)]
        family: Family,
    },
    /// Check a patch file against both matching rules.
    Validate { file: PathBuf },
    /// Report lines, triangles, the edge graph and structural checks.
    Analyze { file: PathBuf },
    /// Fill a region by search.
    Complete {
        /// `disc:R`, `triangle:S` or `rect:WxH`.
        #[arg(long)]
        region: String,
        /// Patch whose entries are pinned; skeleton entries pin rotation only.
        #[arg(long)]
        pins: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget_nodes: u64,
        /// Wall-clock limit in seconds.
        #[arg(long)]
        time_limit: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search every torus up to an index for a periodic tiling.
    Sweep {
        #[arg(long, default_value_t = 12)]
        max_index: usize,
        #[arg(long, value_enum, default_value_t = Mode::Full)]
        mode: Mode,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long, default_value_t = 1_000_000_000)]
        budget_nodes: u64,
        /// Restrict the origin's rotation on rotation-invariant tori.
        #[arg(long)]
        symmetry: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Draw a patch as SVG.
    Render {
        file: PathBuf,
        /// Omit the charge glyphs.
        #[arg(long)]
        no_charges: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Family {
    /// The standard patch on a triangle of size 2^N.
    Standard {
        n: u32,
        /// Leave chiralities unassigned.
        #[arg(long)]
        skeleton: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A window across an infinite line with the lower half slid along it.
    FaultLine {
        #[arg(long, default_value_t = 24)]
        width: u32,
        #[arg(long, default_value_t = 12)]
        height: u32,
        #[arg(long, default_value_t = 0)]
        shift: i32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// A disc around three infinite turning lines spaced 2^N apart.
    NCycle {
        n: u32,
        #[arg(long, default_value_t = 8)]
        radius: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    R1,
    Full,
}

impl From<Mode> for RuleSet {
    fn from(m: Mode) -> RuleSet {
        match m {
            Mode::R1 => RuleSet::R1Only,
            Mode::Full => RuleSet::Full,
        }
    }
}

/// A failure already reported, carrying its exit code.
struct Exit(i32);

fn fail(code: i32, msg: impl std::fmt::Display) -> Exit {
    eprintln!("monotile: {msg}");
    Exit(code)
}

fn emit(output: Option<&PathBuf>, text: &str) -> Result<(), Exit> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| fail(1, format!("{}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| fail(1, e))
        }
    }
}

fn load(path: &PathBuf) -> Result<Patch, Exit> {
    let text = fs::read_to_string(path).map_err(|e| fail(1, format!("{}: {e}", path.display())))?;
    format::parse(&text).map_err(|e| fail(1, format!("{}: {e}", path.display())))
}

fn parse_region(spec: &str) -> Result<Region, Exit> {
    let usage = || fail(2, format!("bad region `{spec}`: expected disc:R, triangle:S or rect:WxH"));
    let (kind, arg) = spec.split_once(':').ok_or_else(usage)?;
    let num = |s: &str| s.parse::<u32>().map_err(|_| usage());
    match kind {
        "disc" => Ok(Region::disc(crate::lattice::Cell::ORIGIN, num(arg)?)),
        "triangle" => Ok(Region::triangle(crate::lattice::Cell::ORIGIN, num(arg)?)),
        "rect" => {
            let (w, h) = arg.split_once('x').ok_or_else(usage)?;
            Ok(Region::rectangle(num(w)?, num(h)?))
        }
        _ => Err(usage()),
    }
}

/// Runs the command line given in `argv` (program name first) and returns
/// the process exit code.
pub fn run<S: AsRef<str>>(argv: &[S]) -> i32 {
    let cli = match Cli::try_parse_from(argv.iter().map(|s| s.as_ref())) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(Exit(code)) => code,
    }
}

fn dispatch(cmd: Command) -> Result<i32, Exit> {
    match cmd {
        Command::Generate { family } => generate(family),
        Command::Validate { file } => {
            let p = load(&file)?;
            let v = p.validate();
            let mut text = format!("{} violations\n", v.len());
            for x in &v {
                text.push_str(&format!("{x}\n"));
            }
            emit(None, &text)?;
            Ok(if v.is_empty() { 0 } else { 1 })
        }
        Command::Analyze { file } => {
            let p = load(&file)?;
            let rep = analysis::report(&p).map_err(|e| fail(1, e))?;
            emit(None, &rep.to_string())?;
            Ok(if rep.passed() { 0 } else { 1 })
        }
        Command::Complete { region, pins, mode, budget_nodes, time_limit, seed, output } => {
            let mut region = parse_region(&region)?;
            if let Some(path) = pins {
                let pinned = load(&path)?;
                region.pin_patch(&pinned).map_err(|e| fail(2, e))?;
            }
            let config = SearchConfig {
                rules: mode.into(),
                budget_nodes,
                time_limit: time_limit.map(Duration::from_secs_f64),
                seed,
                ..SearchConfig::default()
            };
            let res = search::complete_region(&region, &config);
            eprintln!("{} nodes={}", res.verdict.label(), res.stats.nodes);
            match res.verdict {
                Verdict::Sat(p) => {
                    emit(output.as_ref(), &format::serialize(&p))?;
                    Ok(0)
                }
                Verdict::Unsat { conflict } => {
                    if let Some(e) = conflict {
                        eprintln!("conflict at {e}");
                    }
                    Ok(1)
                }
                Verdict::Timeout => Ok(1),
            }
        }
        Command::Sweep { max_index, mode, parallel, budget_nodes, symmetry, output } => {
            let config = SearchConfig {
                rules: mode.into(),
                budget_nodes,
                symmetry_reduction: symmetry,
                ..SearchConfig::default()
            };
            let rep = search::aperiodicity_sweep(max_index, &config, parallel.max(1));
            emit(output.as_ref(), &rep.to_string())?;
            Ok(if rep.overall() == "FAIL" { 1 } else { 0 })
        }
        Command::Render { file, no_charges, output } => {
            let p = load(&file)?;
            let opts = SvgOptions { show_charges: !no_charges, ..SvgOptions::default() };
            emit(output.as_ref(), &render_svg(&p, &opts))?;
            Ok(0)
        }
    }
}

fn generate(family: Family) -> Result<i32, Exit> {
    let (patch, output) = match family {
        Family::Standard { n, skeleton, output } => {
            if n > construct::MAX_LEVEL {
                return Err(fail(2, format!("level {n} exceeds the maximum {}", construct::MAX_LEVEL)));
            }
            let p = if skeleton { construct::standard_skeleton(n) } else { construct::standard_patch(n) };
            (p.map_err(|e| fail(1, e))?, output)
        }
        Family::FaultLine { width, height, shift, output } => {
            (construct::fault_line_window(width, height, shift).map_err(|e| fail(1, e))?, output)
        }
        Family::NCycle { n, radius, output } => (construct::n_cycle_window(n, radius).map_err(|e| fail(1, e))?, output),
    };
    emit(output.as_ref(), &format::serialize(&patch))?;
    Ok(0)
}
