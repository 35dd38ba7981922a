//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero on any FAIL.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use contact_lcp::beam::influence;
use contact_lcp::cascade::solve_cascade;
use contact_lcp::contact::force_products;
use contact_lcp::lcp::validate;
use contact_lcp::{
    certify_unique, enumerate_solutions, lemke_solve, BeamConfig, ContactLcp, DenseMatrix,
    DenseVector, LcpProblem, LemkeOptions, PgsOptions, Verdict,
};
use contact_lcp_cli::format::{Problem, ProblemFile};
use contact_lcp_cli::gen::{generate, random_gaps, random_load, random_spd, GenKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Collects failed checks for one criterion.
#[derive(Default)]
struct Check {
    failures: Vec<String>,
    count: usize,
}

impl Check {
    fn ensure(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.count += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

/// Force pairs of every solution seen, for the force-complementarity criterion.
#[derive(Default)]
struct Produced {
    /// `(F_l, F_u, |z|_inf)` of raw solver output.
    forces: Vec<(Vec<f64>, Vec<f64>, f64)>,
    /// `|(2y* - γ_l) - γ_u|` as assembled.
    identity: Vec<f64>,
}

impl Produced {
    fn record(&mut self, contact: &ContactLcp, z: &[f64]) {
        let n = contact.dim();
        let norm = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.forces.push((z[..n].to_vec(), z[n..].to_vec(), norm));
        let s = contact.solution_from_z(z, 0).expect("dimensions match");
        self.identity
            .push(s.gap_identity_residual(contact.y_star()));
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn random_contact(rng: &mut ChaCha8Rng, n: usize) -> ContactLcp {
    let k = DenseMatrix::from_rows(&random_spd(rng, n)).unwrap();
    let q = DenseVector::new(random_load(rng, n)).unwrap();
    let y = DenseVector::new(random_gaps(rng, n)).unwrap();
    ContactLcp::new(k, q, y).unwrap()
}

fn lcp(rows: &[&[f64]], q: &[f64]) -> LcpProblem {
    LcpProblem::new(
        DenseMatrix::from_rows(rows).unwrap(),
        DenseVector::new(q.to_vec()).unwrap(),
    )
    .unwrap()
}

fn contact(k: &[&[f64]], q_tilde: &[f64], y: &[f64]) -> ContactLcp {
    ContactLcp::new(
        DenseMatrix::from_rows(k).unwrap(),
        DenseVector::new(q_tilde.to_vec()).unwrap(),
        DenseVector::new(y.to_vec()).unwrap(),
    )
    .unwrap()
}

fn psd_null_space(c: &mut Check) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for trial in 0..1000 {
        let n = 1 + trial % 8;
        let p = random_contact(&mut rng, n);
        let m = p.assemble().m().clone();
        let x: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let norm2: f64 = x.iter().map(|v| v * v).sum();
        let form = m.quad_form(&x).unwrap();
        c.ensure(form >= -1e-9 * norm2, || {
            format!("trial {trial}: x'Mx = {form:e}")
        });

        let uu: Vec<f64> = x[..n].iter().chain(&x[..n]).copied().collect();
        let norm2: f64 = uu.iter().map(|v| v * v).sum();
        let form = m.quad_form(&uu).unwrap();
        c.ensure(form.abs() <= 1e-9 * norm2, || {
            format!("trial {trial}: (u,u)'M(u,u) = {form:e}")
        });
        let image = p.apply_m(&uu).unwrap();
        c.ensure(image.iter().all(|&v| v == 0.0), || {
            format!("trial {trial}: M(u,u) = {image:?}")
        });
    }
}

fn feasibility(c: &mut Check, seen: &mut Produced) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for trial in 0..1000 {
        let n = 1 + trial % 6;
        let p = random_contact(&mut rng, n);
        let fp = p.feasible_point().unwrap();
        c.ensure(fp.z.iter().all(|&v| v >= 0.0), || {
            format!("trial {trial}: z has a negative entry")
        });
        let target: Vec<f64> = (0..n)
            .map(|_| 0.0)
            .chain(p.y_star().iter().map(|y| 2.0 * y))
            .collect();
        let d = dist(&fp.w, &target);
        c.ensure(d <= 1e-9, || {
            format!("trial {trial}: |w - (0, 2y*)| = {d:e}")
        });
        match lemke_solve(&p.assemble(), &LemkeOptions::default()) {
            Ok(s) => {
                let ok = validate(&p.assemble(), &s.z, 1e-9).unwrap().solved;
                c.ensure(ok, || {
                    format!("trial {trial}: Lemke point fails validation")
                });
                seen.record(&p, &s.z);
            }
            Err(e) => c.ensure(false, || format!("trial {trial}: Lemke failed: {e}")),
        }
    }
}

fn uniqueness(c: &mut Check, seen: &mut Produced) {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for trial in 0..500 {
        let n = 1 + trial % 3;
        let p = random_contact(&mut rng, n);
        let full = p.assemble();
        let Verdict::Unique(z) = certify_unique(&full, 1e-9).unwrap() else {
            c.ensure(false, || format!("trial {trial}: not certified unique"));
            continue;
        };
        let lemke = lemke_solve(&full, &LemkeOptions::default()).unwrap();
        let pgs = p.solve_structured(&PgsOptions::default()).unwrap();
        let (dl, dp) = (dist(&z, &lemke.z), dist(&z, &pgs.z()));
        c.ensure(dl <= 1e-7 && dp <= 1e-7, || {
            format!("trial {trial}: lemke {dl:e}, pgs {dp:e}")
        });
        seen.record(&p, &lemke.z);
        seen.record(&p, &pgs.z());
        seen.identity.push(pgs.gap_identity_residual(p.y_star()));
    }

    // the y* = 0 boundary: M singular and q on the edge of the feasible cone
    let boundary = lcp(&[&[1.0, -1.0], &[-1.0, 1.0]], &[-1.0, 1.0]);
    let result = enumerate_solutions(&boundary, 1e-9, 14).unwrap();
    c.ensure(result.verdict() == Verdict::Multiple, || {
        "boundary fixture not Multiple".into()
    });
    let mut points: Vec<Vec<f64>> = result
        .solutions
        .iter()
        .map(|s| s.solution.z.to_vec())
        .collect();
    for s in &result.singular_supports {
        if let Some(f) = &s.family {
            for v in &f.vertices {
                points.push(v.to_vec());
                if let Some(r) = &f.ray {
                    points.push(v.iter().zip(r.iter()).map(|(a, b)| a + 2.5 * b).collect());
                }
            }
        }
    }
    c.ensure(points.len() >= 2, || {
        "fewer than two boundary solutions".into()
    });
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            let d = dist(
                &boundary.m().mul_vec(a).unwrap(),
                &boundary.m().mul_vec(b).unwrap(),
            );
            c.ensure(d <= 1e-8, || {
                format!("|Mz1 - Mz2| = {d:e} for {a:?}, {b:?}")
            });
            let mid: Vec<f64> = a.iter().zip(b).map(|(x, y)| 0.5 * (x + y)).collect();
            let ok = validate(&boundary, &mid, 1e-9).unwrap().solved;
            c.ensure(ok, || format!("midpoint {mid:?} not solved"));
        }
    }
}

fn cascades(c: &mut Check, seen: &mut Produced) {
    for seed in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=3);
        let file = generate(GenKind::Cascade, n, t, 5000 + seed).unwrap();
        let Problem::Cascade(p) = file.to_problem().unwrap() else {
            unreachable!()
        };
        let s = solve_cascade(&p, &PgsOptions::default()).unwrap();
        let full = p.assemble_full();
        match lemke_solve(&full, &LemkeOptions::default()) {
            Ok(l) => {
                let d = dist(&s.z(), &l.z);
                c.ensure(d <= 1e-7, || format!("seed {seed}: cascade vs lemke {d:e}"));
            }
            Err(e) => c.ensure(false, || format!("seed {seed}: Lemke failed: {e}")),
        }
        c.ensure(s.shifted.iter().all(|o| o.sum_preserved()), || {
            format!("seed {seed}: gap sum changed")
        });
        c.ensure(validate(&full, &s.z(), 1e-9).unwrap().solved, || {
            format!("seed {seed}: not solved")
        });
        for b in &s.blocks {
            let norm = b.z().norm_inf();
            seen.forces
                .push((b.f_lower.to_vec(), b.f_upper.to_vec(), norm));
        }
    }

    let d = ProblemFile::parse(&std::fs::read_to_string(fixture("fix_d.json")).unwrap())
        .unwrap()
        .to_problem()
        .unwrap();
    let Problem::Cascade(d) = d else {
        unreachable!()
    };
    let s = solve_cascade(&d, &PgsOptions::default()).unwrap();
    c.ensure(dist(&s.z(), &[1.0, 0.0, 1.0, 0.0]) <= 1e-12, || {
        format!("FIX-D z = {:?}", s.z())
    });
    c.ensure(
        d.assemble_full().q().as_slice() == [-1.0, 3.0, -2.0, 3.0],
        || "FIX-D q differs".into(),
    );
}

fn beams(c: &mut Check) {
    for &(l, ei) in &[(10.0, 1.0), (7.5, 3.2), (1.0, 1e-3), (250.0, 4.1e6)] {
        let mid = influence(l, ei, 0.5 * l, 0.5 * l).unwrap();
        let exact = l * l * l / (48.0 * ei);
        c.ensure(((mid - exact) / exact).abs() <= 1e-12, || {
            format!("L={l}, EI={ei}: {mid} vs {exact}")
        });
    }
    let cfg = BeamConfig::new(
        10.0,
        1.0,
        vec![
            contact_lcp::Stabilizer {
                position: 3.0,
                gap: 1.0,
            },
            contact_lcp::Stabilizer {
                position: 7.0,
                gap: 1.0,
            },
        ],
        vec![],
    )
    .unwrap();
    let k = cfg.flexibility_matrix().unwrap();
    let expect = [[14.7, 12.3], [12.3, 14.7]];
    for (i, row) in expect.iter().enumerate() {
        for (j, &e) in row.iter().enumerate() {
            c.ensure(((k[(i, j)] - e) / e).abs() <= 1e-12, || {
                format!("K[{i}][{j}] = {}", k[(i, j)])
            });
        }
    }
    for seed in 0..300u64 {
        let n = 1 + (seed % 4) as usize;
        let file = generate(GenKind::Beam, n, 1, seed).unwrap();
        let Problem::Beam(_, p) = file.to_problem().unwrap() else {
            unreachable!()
        };
        let verdict = certify_unique(&p.assemble(), 1e-9).unwrap();
        c.ensure(matches!(verdict, Verdict::Unique(_)), || {
            format!("beam seed {seed}: {verdict:?}")
        });
    }
}

fn fixtures(c: &mut Check, seen: &mut Produced) {
    let cases: [(&str, ContactLcp, [f64; 4], usize); 3] = [
        (
            "FIX-A",
            contact(&[&[1.0]], &[-2.0], &[1.0]),
            [1.0, 0.0, 0.0, 0.0],
            2,
        ),
        ("FIX-B", contact(&[&[1.0]], &[0.0], &[1.0]), [0.0; 4], 2),
        (
            "FIX-C",
            contact(&[&[2.0, 1.0], &[1.0, 2.0]], &[-3.0, 0.5], &[1.0, 1.0]),
            [7.0 / 6.0, 0.0, 0.0, 1.0 / 3.0],
            4,
        ),
    ];
    for (name, p, expect, dim) in cases {
        let expect = &expect[..dim];
        let full = p.assemble();
        let lemke = lemke_solve(&full, &LemkeOptions::default()).unwrap();
        let pgs = p.solve_structured(&PgsOptions::default()).unwrap();
        c.ensure(dist(&lemke.z, expect) <= 1e-9, || {
            format!("{name}: lemke {:?}", lemke.z)
        });
        c.ensure(dist(&pgs.z(), expect) <= 1e-9, || {
            format!("{name}: pgs {:?}", pgs.z())
        });
        match enumerate_solutions(&full, 1e-9, 14).unwrap().verdict() {
            Verdict::Unique(z) => {
                c.ensure(dist(&z, expect) <= 1e-9, || format!("{name}: oracle {z:?}"))
            }
            other => c.ensure(false, || format!("{name}: oracle {other:?}")),
        }
        seen.record(&p, &lemke.z);
        seen.record(&p, &pgs.z());
    }
}

fn force_complementarity(c: &mut Check, seen: &Produced) {
    c.ensure(!seen.forces.is_empty(), || "no solutions collected".into());
    for (i, (fl, fu, norm)) in seen.forces.iter().enumerate() {
        let worst = force_products(fl, fu);
        let bound = 1e-10 * (1.0 + norm) * (1.0 + norm);
        c.ensure(worst <= bound, || {
            format!("solution {i}: max F_l F_u = {worst:e}")
        });
    }
    for (i, r) in seen.identity.iter().enumerate() {
        c.ensure(*r == 0.0, || {
            format!("solution {i}: gap identity residual {r:e}")
        });
    }
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn exit_code(args: &[&str]) -> Option<i32> {
    Command::new(env!("CARGO_BIN_EXE_contact-lcp"))
        .args(args)
        .output()
        .ok()?
        .status
        .code()
}

fn cli(c: &mut Check) {
    for seed in 0..100u64 {
        for kind in [
            GenKind::General,
            GenKind::Contact,
            GenKind::Cascade,
            GenKind::Beam,
        ] {
            let file =
                generate(kind, 1 + (seed % 5) as usize, 1 + (seed % 3) as usize, seed).unwrap();
            let text = file.to_json();
            let back = ProblemFile::parse(&text).unwrap();
            let same = back == file && back.to_json() == text;
            c.ensure(same, || format!("{kind:?} seed {seed}: round trip differs"));
        }
    }

    let table: &[(&[&str], i32)] = &[
        (&["solve", "--input", "fix_a.json", "--solver", "lemke"], 0),
        (&["solve", "--input", "fix_a.json", "--solver", "pgs"], 0),
        (&["solve", "--input", "fix_d.json"], 0),
        (&["solve", "--input", "malformed.json"], 1),
        (&["solve", "--input", "infeasible.json"], 3),
        (
            &[
                "verify",
                "--input",
                "fix_a.json",
                "--solution",
                "z_fix_a.json",
            ],
            0,
        ),
        (
            &[
                "verify",
                "--input",
                "fix_a.json",
                "--solution",
                "z_zero.json",
            ],
            2,
        ),
        (
            &[
                "verify",
                "--input",
                "fix_b.json",
                "--solution",
                "z_fix_b_feasible.json",
            ],
            2,
        ),
        (&["enumerate", "--input", "fix_c.json"], 0),
        (&["enumerate", "--input", "boundary.json"], 4),
        (&["enumerate", "--input", "infeasible.json"], 3),
        (&["enumerate", "--input", "fix_c.json", "--cap", "2"], 1),
    ];
    for (args, expect) in table {
        let args: Vec<String> = args
            .iter()
            .map(|a| {
                if a.ends_with(".json") {
                    fixture(a)
                } else {
                    a.to_string()
                }
            })
            .collect();
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = exit_code(&argv);
        c.ensure(got == Some(*expect), || {
            format!("{:?}: exit {got:?}, expected {expect}", &argv[..3])
        });
    }

    let dir = std::env::temp_dir().join(format!("contact-lcp-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for kind in ["general", "contact", "cascade", "beam"] {
        let paths = [
            dir.join(format!("{kind}-1.json")),
            dir.join(format!("{kind}-2.json")),
        ];
        for p in &paths {
            let code = exit_code(&[
                "gen",
                "--kind",
                kind,
                "--n",
                "3",
                "--t",
                "2",
                "--seed",
                "42",
                "--output",
                p.to_str().unwrap(),
            ]);
            c.ensure(code == Some(0), || format!("gen {kind} exit {code:?}"));
        }
        let same = std::fs::read(&paths[0]).ok() == std::fs::read(&paths[1]).ok();
        c.ensure(same, || format!("gen {kind}: files differ"));
    }
    std::fs::remove_dir_all(&dir).ok();
}

fn performance(c: &mut Check) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let p = random_contact(&mut rng, 50);
    let mut times: Vec<Duration> = (0..21)
        .map(|_| {
            let start = Instant::now();
            let s = p.solve_structured(&PgsOptions::default());
            let t = start.elapsed();
            c.ensure(s.is_ok(), || "n = 50 solve failed".into());
            t
        })
        .collect();
    times.sort();
    let median = times[times.len() / 2];
    c.ensure(median < Duration::from_millis(100), || {
        format!("median {median:?}")
    });
    format!("median {median:?}")
}

fn report(
    id: u32,
    title: &str,
    limit: Option<Duration>,
    run: impl FnOnce(&mut Check) -> String,
) -> bool {
    let mut check = Check::default();
    let start = Instant::now();
    let note = run(&mut check);
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        check.ensure(elapsed < limit, || {
            format!("took {elapsed:?}, limit {limit:?}")
        });
    }
    let ok = check.failures.is_empty();
    let note = if note.is_empty() {
        String::new()
    } else {
        format!(", {note}")
    };
    println!(
        "{} {id}. {title} ({} checks, {:.2?}{note})",
        if ok { "PASS" } else { "FAIL" },
        check.count,
        elapsed
    );
    for f in check.failures.iter().take(5) {
        println!("       {f}");
    }
    if check.failures.len() > 5 {
        println!("       ... {} more", check.failures.len() - 5);
    }
    ok
}

fn main() {
    let secs = Duration::from_secs;
    let mut seen = Produced::default();
    let mut all = true;
    all &= report(
        1,
        "PSD contact matrix with diagonal null space",
        Some(secs(10)),
        |c| {
            psd_null_space(c);
            String::new()
        },
    );
    all &= report(
        2,
        "feasible point and Lemke termination",
        Some(secs(30)),
        |c| {
            feasibility(c, &mut seen);
            String::new()
        },
    );
    all &= report(
        4,
        "uniqueness and boundary non-uniqueness",
        Some(secs(120)),
        |c| {
            uniqueness(c, &mut seen);
            String::new()
        },
    );
    all &= report(5, "cascade block solve", Some(secs(30)), |c| {
        cascades(c, &mut seen);
        String::new()
    });
    all &= report(6, "beam influence and certified beams", None, |c| {
        beams(c);
        String::new()
    });
    all &= report(7, "fixtures across solvers and oracle", None, |c| {
        fixtures(c, &mut seen);
        String::new()
    });
    all &= report(
        3,
        "force complementarity and gap identity on all solutions",
        None,
        |c| {
            force_complementarity(c, &seen);
            format!("{} solutions", seen.forces.len())
        },
    );
    all &= report(
        8,
        "CLI round trip, exit codes, generator determinism",
        None,
        |c| {
            cli(c);
            String::new()
        },
    );
    all &= report(9, "structured solve at n = 50", None, performance);
    if !all {
        std::process::exit(1);
    }
}
