//! Timing harness. Reports medians only; correctness is covered elsewhere.

use std::io::Write;
use std::time::Instant;

use contact_lcp::cascade::solve_cascade;
use contact_lcp::{lemke_solve, LemkeOptions, PgsOptions};
use serde::Serialize;

use crate::error::CliError;
use crate::format::Problem;
use crate::gen::{generate, GenKind};

const STDOUT: &str = "<stdout>";

pub const CSV_HEADER: &str = "kind,n,solver,median_wall_time_s,iterations";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub kind: &'static str,
    pub n: usize,
    pub solver: &'static str,
    pub median_wall_time_s: f64,
    pub iterations: usize,
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(f64::total_cmp);
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

fn time<F>(reps: usize, mut run: F) -> Result<(f64, usize), CliError>
where
    F: FnMut() -> Result<usize, contact_lcp::Error>,
{
    let mut times = Vec::with_capacity(reps);
    let mut iterations = 0;
    for _ in 0..reps {
        let start = Instant::now();
        iterations = run()?;
        times.push(start.elapsed().as_secs_f64());
    }
    Ok((median(times), iterations))
}

/// Times Lemke against the structured solvers on generated contact
/// instances and two-block cascades of each size.
pub fn run(sizes: &[usize], reps: usize, seed: u64) -> Result<Vec<BenchRow>, CliError> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for &n in sizes {
        let contact = match generate(GenKind::Contact, n, 1, seed)?.to_problem()? {
            Problem::Contact(c) => c,
            _ => unreachable!("generator returns the requested kind"),
        };
        let lcp = contact.assemble();
        let (t, it) = time(reps, || {
            Ok(lemke_solve(&lcp, &LemkeOptions::default())?.iterations)
        })?;
        rows.push(BenchRow {
            kind: "contact",
            n,
            solver: "lemke",
            median_wall_time_s: t,
            iterations: it,
        });
        let (t, it) = time(reps, || {
            Ok(contact.solve_structured(&PgsOptions::default())?.iterations)
        })?;
        rows.push(BenchRow {
            kind: "contact",
            n,
            solver: "pgs",
            median_wall_time_s: t,
            iterations: it,
        });

        let cascade = match generate(GenKind::Cascade, n, 2, seed)?.to_problem()? {
            Problem::Cascade(c) => c,
            _ => unreachable!("generator returns the requested kind"),
        };
        let lcp = cascade.assemble_full();
        let (t, it) = time(reps, || {
            Ok(lemke_solve(&lcp, &LemkeOptions::default())?.iterations)
        })?;
        rows.push(BenchRow {
            kind: "cascade",
            n,
            solver: "lemke",
            median_wall_time_s: t,
            iterations: it,
        });
        let (t, it) = time(reps, || {
            Ok(solve_cascade(&cascade, &PgsOptions::default())?.iterations())
        })?;
        rows.push(BenchRow {
            kind: "cascade",
            n,
            solver: "cascade",
            median_wall_time_s: t,
            iterations: it,
        });
    }
    Ok(rows)
}

pub fn write_csv(rows: &[BenchRow], out: &mut dyn Write) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)
            .map_err(|e| CliError::io(STDOUT.as_ref(), e.into()))?;
    }
    if rows.is_empty() {
        w.write_record(CSV_HEADER.split(','))
            .map_err(|e| CliError::io(STDOUT.as_ref(), e.into()))?;
    }
    w.flush().map_err(|e| CliError::io(STDOUT.as_ref(), e))
}
