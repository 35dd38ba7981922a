//! Subcommand definitions and their implementations.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use contact_lcp::cascade::solve_cascade;
use contact_lcp::contact::force_products;
use contact_lcp::lcp::validate;
use contact_lcp::oracle::{support_indices, DEFAULT_CAP};
use contact_lcp::{
    enumerate_solutions, lemke_solve, ContactSolution, LcpProblem, LemkeOptions, PgsOptions,
    SolverTag, ValidationReport, Verdict,
};

use crate::bench;
use crate::error::CliError;
use crate::format::{ContactReport, Problem, ProblemFile, Residuals, SolutionFile, SolveReport};
use crate::gen::{generate, GenKind};

/// Process exit status. Each outcome class has exactly one code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Solved, verified, or certified unique.
    Success,
    /// Usage, I/O or schema error.
    Usage,
    /// The point fails validation, or the solver broke down.
    Invalid,
    /// No solution exists, or Lemke ended on a ray.
    NoSolution,
    /// The solution is not unique.
    Multiple,
}

impl Outcome {
    pub fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Usage => 1,
            Outcome::Invalid => 2,
            Outcome::NoSolution => 3,
            Outcome::Multiple => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "contact-lcp",
    version,
    about = "Solve and certify two-sided contact LCPs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file and write a JSON report.
    Solve(SolveArgs),
    /// Check a candidate solution against a problem file.
    Verify(VerifyArgs),
    /// Enumerate every complementary support of a small problem.
    Enumerate(EnumerateArgs),
    /// Write a seeded random problem file.
    Gen(GenArgs),
    /// Time the solvers on generated problems and print CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SolverChoice {
    Lemke,
    Pgs,
    Cascade,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Report path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Defaults to pgs for contact and beam, cascade for cascades, lemke otherwise.
    #[arg(long, value_enum)]
    pub solver: Option<SolverChoice>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Add a uniqueness verdict from support enumeration.
    #[arg(long)]
    pub certify: bool,
    /// Largest dimension the enumeration accepts.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// JSON file with a `z` array, such as a solve report.
    #[arg(long)]
    pub solution: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: GenKind,
    /// Contacts per block.
    #[arg(long)]
    pub n: usize,
    /// Number of cascade blocks.
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Problem path; standard output when absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,50")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Runs a parsed command. Diagnostics go to `err`; results go to `out`
/// unless an output path was given.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let result = match &cli.command {
        Command::Solve(a) => solve(a, out, err),
        Command::Verify(a) => verify(a, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Gen(a) => gen(a, out),
        Command::Bench(a) => bench::run(&a.sizes, a.reps, a.seed)
            .and_then(|rows| bench::write_csv(&rows, out))
            .map(|()| Outcome::Success),
    };
    result.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        Outcome::Usage
    })
}

fn load(path: &Path) -> Result<Problem, CliError> {
    ProblemFile::read(path)?
        .to_problem()
        .map_err(|e| e.in_file(path))
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "--tol must be positive and finite, got {tol}"
        )))
    }
}

fn emit(text: &str, path: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_support(mask: u64, n: usize) -> String {
    let parts: Vec<String> = support_indices(mask, n)
        .iter()
        .map(|i| i.to_string())
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// A point produced by one of the solvers.
struct Produced {
    tag: SolverTag,
    z: Vec<f64>,
    w: Vec<f64>,
    iterations: usize,
    contact: Option<Vec<ContactReport>>,
}

fn contact_report(s: &ContactSolution) -> ContactReport {
    ContactReport {
        f_lower: s.f_lower.to_vec(),
        f_upper: s.f_upper.to_vec(),
        gap_lower: s.gap_lower.to_vec(),
        gap_upper: s.gap_upper.to_vec(),
    }
}

/// Block sizes of the `(F_l, F_u)` pairs stacked in `z`.
fn contact_blocks(problem: &Problem) -> Option<Vec<usize>> {
    match problem {
        Problem::General(_) => None,
        Problem::Contact(c) | Problem::Beam(_, c) => Some(vec![c.dim()]),
        Problem::Cascade(c) => Some(c.blocks().iter().map(|b| b.dim()).collect()),
    }
}

/// Splits stacked `z` and `w` into per-block forces and gaps.
fn split_blocks(sizes: &[usize], z: &[f64], w: &[f64]) -> Vec<ContactReport> {
    let mut at = 0;
    sizes
        .iter()
        .map(|&n| {
            let r = ContactReport {
                f_lower: z[at..at + n].to_vec(),
                f_upper: z[at + n..at + 2 * n].to_vec(),
                gap_lower: w[at..at + n].to_vec(),
                gap_upper: w[at + n..at + 2 * n].to_vec(),
            };
            at += 2 * n;
            r
        })
        .collect()
}

fn from_contact(tag: SolverTag, blocks: &[ContactSolution]) -> Produced {
    let mut z = Vec::new();
    let mut w = Vec::new();
    for b in blocks {
        z.extend_from_slice(&b.z());
        w.extend_from_slice(&b.w());
    }
    Produced {
        tag,
        z,
        w,
        iterations: blocks.iter().map(|b| b.iterations).sum(),
        contact: Some(blocks.iter().map(contact_report).collect()),
    }
}

fn run_solver(
    choice: SolverChoice,
    problem: &Problem,
    lcp: &LcpProblem,
) -> Result<Result<Produced, contact_lcp::Error>, CliError> {
    let opts = PgsOptions::default();
    Ok(match (choice, problem) {
        (SolverChoice::Lemke, _) => lemke_solve(lcp, &LemkeOptions::default()).map(|s| Produced {
            tag: s.solver,
            contact: contact_blocks(problem).map(|sizes| split_blocks(&sizes, &s.z, &s.w)),
            z: s.z.into_vec(),
            w: s.w.into_vec(),
            iterations: s.iterations,
        }),
        (SolverChoice::Pgs, Problem::Contact(c) | Problem::Beam(_, c)) => c
            .solve_structured(&opts)
            .map(|s| from_contact(SolverTag::Structured, &[s])),
        (SolverChoice::Cascade, Problem::Cascade(c)) => {
            solve_cascade(c, &opts).map(|s| from_contact(SolverTag::Cascade, &s.blocks))
        }
        (choice, problem) => {
            return Err(CliError::Usage(format!(
                "solver {choice:?} does not accept {} problems",
                problem.kind()
            )))
        }
    })
}

fn solve(args: &SolveArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<Outcome, CliError> {
    check_tol(args.tol)?;
    let problem = load(&args.input)?;
    let lcp = problem.lcp();
    if args.certify && lcp.dim() > args.cap {
        return Err(CliError::Solver(contact_lcp::Error::DimensionTooLarge {
            dim: lcp.dim(),
            cap: args.cap,
        }));
    }
    let choice = args.solver.unwrap_or(match problem {
        Problem::General(_) => SolverChoice::Lemke,
        Problem::Contact(_) | Problem::Beam(..) => SolverChoice::Pgs,
        Problem::Cascade(_) => SolverChoice::Cascade,
    });

    let start = Instant::now();
    let attempt = run_solver(choice, &problem, &lcp)?;
    let wall_time = start.elapsed().as_secs_f64();

    let produced = match attempt {
        Ok(p) => p,
        Err(e @ contact_lcp::Error::RayTermination { .. }) => {
            writeln!(err, "no solution found: {e}").ok();
            return Ok(Outcome::NoSolution);
        }
        Err(contact_lcp::Error::MaxIterationsExceeded {
            sweeps,
            residual,
            last,
        }) => {
            writeln!(err, "warning: no convergence in {sweeps} sweeps (residual {residual:e}); reporting last iterate").ok();
            from_contact(SolverTag::Structured, &[*last])
        }
        Err(e) => {
            writeln!(err, "solver failed: {e}").ok();
            return Ok(Outcome::Invalid);
        }
    };

    let check = validate(&lcp, &produced.z, args.tol)?;
    let uniqueness = if args.certify {
        Some(
            match enumerate_solutions(&lcp, args.tol, args.cap)?.verdict() {
                Verdict::Unique(_) => "unique",
                Verdict::Multiple => "multiple",
                Verdict::None => "none",
            }
            .to_string(),
        )
    } else {
        None
    };
    let report = SolveReport {
        solver: produced.tag.as_str().to_string(),
        z: produced.z,
        w: produced.w,
        residuals: Residuals {
            min_z: check.min_z,
            min_w: check.min_w,
            comp_gap: check.comp_gap,
        },
        iterations: produced.iterations,
        wall_time,
        contact: produced.contact,
        uniqueness,
    };
    emit(&report.to_json(), args.output.as_deref(), out)?;
    if check.solved {
        Ok(Outcome::Success)
    } else {
        write_violations(&check, err);
        Ok(Outcome::Invalid)
    }
}

fn write_violations(report: &ValidationReport, out: &mut dyn Write) {
    for v in &report.violations {
        writeln!(
            out,
            "violation: index {} {:?} (magnitude {})",
            v.index, v.kind, v.magnitude
        )
        .ok();
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    check_tol(args.tol)?;
    let problem = load(&args.input)?;
    let lcp = problem.lcp();
    let z = SolutionFile::read(&args.solution)?.z;
    if z.len() != lcp.dim() {
        return Err(CliError::Schema {
            field: "z".into(),
            message: format!("has length {}, expected {}", z.len(), lcp.dim()),
        }
        .in_file(&args.solution));
    }
    if let Some(i) = z.iter().position(|v| !v.is_finite()) {
        return Err(CliError::Schema {
            field: format!("z[{i}]"),
            message: "must be finite".into(),
        });
    }
    let report = validate(&lcp, &z, args.tol)?;
    let w = lcp.assemble_w(&z)?;

    let mut text = String::new();
    let mut line = |s: String| {
        text.push_str(&s);
        text.push('\n');
    };
    line(format!("kind: {}", problem.kind()));
    line(format!("solved: {}", report.solved));
    line(format!("feasible: {}", report.feasible));
    line(format!("min_z: {}", report.min_z));
    line(format!("min_w: {}", report.min_w));
    line(format!("comp_gap: {}", report.comp_gap));
    if report.violations.is_empty() {
        line("violations: none".into());
    }
    for v in &report.violations {
        line(format!(
            "violation: index {} {:?} (magnitude {})",
            v.index, v.kind, v.magnitude
        ));
    }
    let degenerate: Vec<String> = report.degenerate.iter().map(|i| i.to_string()).collect();
    line(format!("degenerate: [{}]", degenerate.join(", ")));

    if let Some(sizes) = contact_blocks(&problem) {
        let sums: Vec<Vec<f64>> = match &problem {
            Problem::Cascade(c) => c.blocks().iter().map(|b| b.gap_sum().into_vec()).collect(),
            _ => {
                let c = problem
                    .contact()
                    .expect("contact kinds carry a contact problem");
                vec![c.y_star().iter().map(|y| 2.0 * y).collect()]
            }
        };
        let mut forces = 0.0f64;
        let mut identity = 0.0f64;
        for (block, sum) in split_blocks(&sizes, &z, &w).iter().zip(&sums) {
            forces = forces.max(force_products(&block.f_lower, &block.f_upper));
            for ((gl, gu), s) in block.gap_lower.iter().zip(&block.gap_upper).zip(sum) {
                identity = identity.max((gl + gu - s).abs());
            }
        }
        line(format!("force_complementarity: {forces}"));
        line(format!("gap_identity_residual: {identity}"));
    }
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(if report.solved {
        Outcome::Success
    } else {
        Outcome::Invalid
    })
}

fn enumerate(args: &EnumerateArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    check_tol(args.tol)?;
    let problem = load(&args.input)?;
    let lcp = problem.lcp();
    let n = lcp.dim();
    let result = enumerate_solutions(&lcp, args.tol, args.cap)?;

    let mut text = String::new();
    let mut line = |s: String| {
        text.push_str(&s);
        text.push('\n');
    };
    line(format!("dimension: {n}"));
    line(format!("supports: {}", 1u64 << n));
    line(format!("solutions: {}", result.solutions.len()));
    for s in &result.solutions {
        line(format!(
            "  z = {} support {} multiplicity {}",
            fmt_vec(&s.solution.z),
            fmt_support(s.support, n),
            s.multiplicity
        ));
    }
    line(format!(
        "singular supports: {}",
        result.singular_supports.len()
    ));
    for s in &result.singular_supports {
        let detail = match (&s.family, s.consistent) {
            (_, false) => "inconsistent".to_string(),
            (None, true) => "consistent, no admissible point".to_string(),
            (Some(f), true) => {
                let ray = f.ray.as_ref().map_or("none".to_string(), |r| fmt_vec(r));
                format!("consistent, vertices: {}, ray: {}", f.vertices.len(), ray)
            }
        };
        line(format!("  {} {}", fmt_support(s.support, n), detail));
    }
    let (verdict, outcome) = match result.verdict() {
        Verdict::Unique(_) => ("unique", Outcome::Success),
        Verdict::Multiple => ("multiple", Outcome::Multiple),
        Verdict::None => ("none", Outcome::NoSolution),
    };
    line(format!("verdict: {verdict}"));
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))?;
    Ok(outcome)
}

fn gen(args: &GenArgs, out: &mut dyn Write) -> Result<Outcome, CliError> {
    let file = generate(args.kind, args.n, args.t, args.seed)?;
    file.to_problem()?;
    emit(&file.to_json(), args.output.as_deref(), out)?;
    Ok(Outcome::Success)
}
