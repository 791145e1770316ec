//! `polyfront` command-line front end: check, solve and verify problem files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use polyfront::io::{format_piece, parse_rat, CrosscheckDoc, ProblemFile, ReportDoc};
use polyfront::oracle::grid_crosscheck;
use polyfront::pwl::{
    is_k_function, validate_consistency, validate_cover, ConsistencyCheck, CoverCheck, KCheck,
};
use polyfront::solver::{self, Method, SolveOptions};
use polyfront::{Error, GridSpec, Problem, Rat, Region, SolveReport};

const EXIT_PARSE: u8 = 1;
const EXIT_STRUCTURAL: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Parser)]
#[command(
    name = "polyfront",
    version,
    about = "Efficient and weakly efficient solution sets of piecewise linear vector problems"
)]
struct Cli {
    /// Print only errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Include solver statistics in the output.
    #[arg(long, global = true)]
    stats: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a problem file and report the K-function verdict.
    Check { path: PathBuf },
    /// Solve a problem and write the solution sets.
    Solve {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "paper")]
        method: MethodArg,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the decompositions with a pointwise oracle on a grid.
    Verify {
        path: PathBuf,
        /// Box as "lo,hi;lo,hi;..."; defaults to the file's grid.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Points per axis as "n,m,...".
        #[arg(long)]
        steps: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Drop the first piece of Sol before checking (negative control).
        #[arg(long, hide = true)]
        corrupt: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Paper,
    Generic,
    Both,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) => EXIT_PARSE,
            Error::MethodDisagreement => EXIT_DISAGREEMENT,
            _ => EXIT_STRUCTURAL,
        };
        Failure::new(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

struct Out {
    quiet: bool,
}

impl Out {
    fn print(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_PARSE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = Out { quiet: cli.quiet };
    let result = match &cli.command {
        Command::Check { path } => cmd_check(path, &out),
        Command::Solve {
            path,
            method,
            format,
            out: dest,
        } => cmd_solve(path, *method, *format, dest.as_deref(), cli.stats, &out),
        Command::Verify {
            path,
            grid,
            steps,
            format,
            corrupt,
        } => cmd_verify(
            path,
            grid.as_deref(),
            steps.as_deref(),
            *format,
            *corrupt,
            &out,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn read_file(path: &Path) -> Result<ProblemFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    ProblemFile::parse(&text)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn point(x: &[Rat]) -> String {
    let parts: Vec<String> = x.iter().map(|c| c.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// Cover and consistency; the text lines are returned even on failure.
fn structural(problem: &Problem) -> (String, Outcome) {
    let mut text = String::new();
    match validate_cover(&problem.f) {
        CoverCheck::Ok => text.push_str("cover: ok\n"),
        CoverCheck::Gap(w) => {
            let _ = writeln!(text, "cover: gap at t = {}", point(&w));
            return (
                text,
                Err(Failure::new(
                    EXIT_STRUCTURAL,
                    format!("pieces leave t = {} uncovered", point(&w)),
                )),
            );
        }
    }
    match validate_consistency(&problem.f) {
        ConsistencyCheck::Ok => text.push_str("consistency: ok\n"),
        ConsistencyCheck::Mismatch { k, l, witness } => {
            let _ = writeln!(
                text,
                "consistency: pieces {k} and {l} differ at t = {}",
                point(&witness)
            );
            return (text, Err(Error::Inconsistent(k, l).into()));
        }
    }
    (text, Ok(()))
}

fn load(path: &Path) -> Result<(ProblemFile, Problem), Failure> {
    let file = read_file(path)?;
    let problem = file.to_problem()?;
    Ok((file, problem))
}

fn cmd_check(path: &Path, out: &Out) -> Outcome {
    let (_, problem) = load(path)?;
    let mut text = format!(
        "source dim {}, image dim {}, {} pieces\n",
        problem.f.source_dim,
        problem.f.image_dim,
        problem.f.pieces.len()
    );
    let cone = &problem.cone;
    let _ = writeln!(
        text,
        "cone: {} rows, lineality dim {}, interior {}",
        cone.rows().len(),
        cone.y0().dim(),
        if cone.has_nonempty_interior() {
            "nonempty"
        } else {
            "empty"
        }
    );
    let (lines, verdict) = structural(&problem);
    text.push_str(&lines);
    if let Err(f) = verdict {
        out.print(&text);
        return Err(f);
    }
    match is_k_function(&problem) {
        Ok(KCheck::Yes) => text.push_str("K-function: yes\n"),
        Ok(KCheck::No {
            row,
            k,
            l,
            point: p,
            anchor,
        }) => {
            let _ = writeln!(
                text,
                "K-function: no (cone row {row}: piece {l} lies below the function at t = {} in piece {k}; piece {l} contains t = {})",
                point(&p),
                point(&anchor)
            );
        }
        Err(Error::EmptyFeasible) => {
            text.push_str("K-function: undecided (feasible set is empty)\n")
        }
        Err(e) => return Err(e.into()),
    }
    out.print(&text);
    Ok(())
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Paper => Method::Paper,
        MethodArg::Generic => Method::Generic,
        MethodArg::Both => Method::Both,
    }
}

fn region_text(name: &str, r: &Region, provenance: &[Vec<(usize, usize)>], text: &mut String) {
    let _ = writeln!(text, "{name}: {} piece(s)", r.len());
    for (i, p) in r.pieces.iter().enumerate() {
        let from: Vec<String> = provenance
            .get(i)
            .map(|cells| cells.iter().map(|(k, j)| format!("{k}/{j}")).collect())
            .unwrap_or_default();
        let _ = writeln!(
            text,
            "  [{i}] {}  (cells {})",
            format_piece(p, "t"),
            from.join(" ")
        );
    }
}

fn connectivity_text(c: &polyfront::solver::Connectivity) -> String {
    let kind = if c.connected {
        "connected"
    } else {
        "disconnected"
    };
    let cert = if c.certified {
        "certified"
    } else {
        "closure-based"
    };
    format!("{kind}, {} component(s), {cert}", c.components.len())
}

fn report_text(r: &SolveReport, stats: bool) -> String {
    let mut text = String::new();
    region_text("Sol", &r.sol, &r.sol_provenance, &mut text);
    let _ = writeln!(
        text,
        "  {}, {}",
        if r.sol_closed { "closed" } else { "non-closed" },
        connectivity_text(&r.sol_connectivity)
    );
    if let Some(w) = &r.wsol {
        region_text("Sol^w", w, &r.wsol_provenance, &mut text);
        let closed = r.wsol_closed.unwrap_or(true);
        let conn = r
            .wsol_connectivity
            .as_ref()
            .map(connectivity_text)
            .unwrap_or_default();
        let _ = writeln!(
            text,
            "  {}, {conn}",
            if closed { "closed" } else { "non-closed" }
        );
    }
    let _ = writeln!(
        text,
        "f(D) + K convex: {}",
        if r.convex { "yes" } else { "no" }
    );
    for n in &r.notes {
        let _ = writeln!(text, "note: {n}");
    }
    if stats {
        let s = &r.stats;
        let _ = writeln!(
            text,
            "stats: image pieces {}, Q pieces {}, frontier pieces {}, weak frontier pieces {}, LPs {}",
            s.image_pieces, s.q_pieces, s.frontier_pieces, s.weak_frontier_pieces, s.lp_count
        );
    }
    text
}

fn solve_checked(problem: &Problem, m: Method) -> Result<SolveReport, Failure> {
    structural(problem).1?;
    Ok(solver::solve(problem, &SolveOptions { method: m })?)
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn cmd_solve(
    path: &Path,
    m: MethodArg,
    format: Format,
    dest: Option<&Path>,
    stats: bool,
    out: &Out,
) -> Outcome {
    let (_, problem) = load(path)?;
    let report = solve_checked(&problem, method(m))?;
    let body = match format {
        Format::Json => with_newline(
            serde_json::to_string_pretty(&ReportDoc::from_report(&report, stats))
                .expect("report serializes"),
        ),
        Format::Text => report_text(&report, stats),
    };
    match dest {
        Some(p) => fs::write(p, body)
            .map_err(|e| Failure::new(EXIT_STRUCTURAL, format!("{}: {e}", p.display()))),
        None => {
            out.print(&body);
            Ok(())
        }
    }
}

fn parse_list(s: &str, what: &str) -> Result<Vec<String>, Failure> {
    let items: Vec<String> = s.split(',').map(|x| x.trim().to_string()).collect();
    if items.iter().any(|x| x.is_empty()) {
        return Err(Failure::new(EXIT_PARSE, format!("malformed {what} {s:?}")));
    }
    Ok(items)
}

fn grid_from_flags(grid: &str, steps: &str) -> Result<GridSpec, Failure> {
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for axis in grid.split(';') {
        let ends = parse_list(axis, "grid axis")?;
        if ends.len() != 2 {
            return Err(Failure::new(
                EXIT_PARSE,
                format!("grid axis {axis:?} needs lo,hi"),
            ));
        }
        lower.push(parse_rat(&ends[0])?);
        upper.push(parse_rat(&ends[1])?);
    }
    let steps = parse_list(steps, "steps")?
        .iter()
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| Failure::new(EXIT_PARSE, format!("invalid step count {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(GridSpec::new(lower, upper, steps)?)
}

fn cmd_verify(
    path: &Path,
    grid: Option<&str>,
    steps: Option<&str>,
    format: Format,
    corrupt: bool,
    out: &Out,
) -> Outcome {
    let (file, problem) = load(path)?;
    let spec = match (grid, steps, &file.grid) {
        (Some(g), Some(s), _) => grid_from_flags(g, s)?,
        (None, None, Some(doc)) => doc.to_spec()?,
        (None, None, None) => {
            return Err(Failure::new(EXIT_PARSE, "no grid: pass --grid and --steps"))
        }
        _ => return Err(Failure::new(EXIT_PARSE, "--grid and --steps go together")),
    };
    let mut report = solve_checked(&problem, Method::Paper)?;
    if corrupt {
        if report.sol.pieces.is_empty() {
            report.sol = Region::whole(problem.f.source_dim);
        } else {
            report.sol.pieces.remove(0);
            report.sol_provenance.remove(0);
        }
    }
    let cc = grid_crosscheck(&problem, &report, &spec)?;
    let body = match format {
        Format::Json => with_newline(
            serde_json::to_string_pretty(&CrosscheckDoc::from(&cc)).expect("crosscheck serializes"),
        ),
        Format::Text => {
            let mut text = format!(
                "checked {} point(s), skipped {} outside D, {} mismatch(es)\n",
                cc.checked,
                cc.skipped,
                cc.mismatches.len()
            );
            for m in &cc.mismatches {
                let pieces: Vec<String> = report
                    .sol
                    .pieces
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.contains(&m.point))
                    .map(|(i, _)| {
                        let cells: Vec<String> = report.sol_provenance[i]
                            .iter()
                            .map(|(k, j)| format!("{k}/{j}"))
                            .collect();
                        format!("[{i}] cells {}", cells.join(" "))
                    })
                    .collect();
                let _ = writeln!(
                    text,
                    "mismatch at t = {}: oracle sol {}, decomposition sol {}, oracle wsol {}, decomposition wsol {}; in Sol pieces: {}",
                    point(&m.point),
                    m.oracle_sol,
                    m.decomp_sol,
                    opt(m.oracle_wsol),
                    opt(m.decomp_wsol),
                    if pieces.is_empty() { "none".to_string() } else { pieces.join(", ") }
                );
            }
            text
        }
    };
    if cc.mismatches.is_empty() {
        out.print(&body);
        Ok(())
    } else {
        print!("{body}");
        Err(Failure::new(
            EXIT_MISMATCH,
            format!("{} mismatch(es)", cc.mismatches.len()),
        ))
    }
}

fn opt(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_else(|| "n/a".into())
}
