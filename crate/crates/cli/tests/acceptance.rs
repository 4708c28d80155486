//! Acceptance criteria, one test each. Every test prints a single
//! `PASS`/`FAIL` line; run with `--nocapture` to see them.

use std::f64::consts::FRAC_PI_4;
use std::process::Command;
use std::time::Instant;

use chmean::geometry::{
    circle_through, invert_circline, invert_point, invert_region, Circline, Region,
};
use chmean::montecarlo::{lognormal_experiment, ComplexNormalParams};
use chmean::rv::{harmonic_mean, FiniteDistribution};
use chmean::suites::{case_rng, random_disk_case, run_suite, Suite, SuiteSummary};
use chmean_cli::sweep::{parse_csv, sweep, to_csv};
use num_complex::Complex64;

const SEED: u64 = 20_240_601;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn verdict(n: u32, title: &str, started: Instant, failures: &[String]) {
    let secs = started.elapsed().as_secs_f64();
    if failures.is_empty() {
        println!("criterion {n} PASS  {title} ({secs:.2} s)");
    } else {
        println!(
            "criterion {n} FAIL  {title} ({secs:.2} s): {}",
            failures.join("; ")
        );
        panic!("criterion {n} failed: {failures:?}");
    }
}

fn check(failures: &mut Vec<String>, ok: bool, what: impl Into<String>) {
    if !ok {
        failures.push(what.into());
    }
}

fn passed(s: &SuiteSummary, check: &str) -> usize {
    s.by_check.get(check).map_or(0, |c| c.passed)
}

fn suite_clean(failures: &mut Vec<String>, s: &SuiteSummary) {
    check(
        failures,
        s.failed == 0,
        format!(
            "{}: {} failed, first {:?}",
            s.suite,
            s.failed,
            s.failures.first()
        ),
    );
    check(
        failures,
        s.refused == 0,
        format!("{}: {} refused", s.suite, s.refused),
    );
}

#[test]
fn criterion_1_first_example() {
    let t = Instant::now();
    let mut f = Vec::new();
    let h = harmonic_mean(&FiniteDistribution::two_point(c(1.0, 1.0), c(1.0, -1.0), 0.5).unwrap())
        .unwrap();
    check(
        &mut f,
        (h - c(2.0, 0.0)).norm() <= 1e-14,
        format!("H = {h}"),
    );
    let s = sweep(c(1.0, 1.0), c(1.0, -1.0), 11).unwrap();
    check(&mut f, s.rows.len() == 11, "row count");
    for row in &s.rows {
        let h = row.h.unwrap();
        let off = ((h - c(1.0, 0.0)).norm() - 1.0).abs();
        check(
            &mut f,
            off <= 1e-12,
            format!("theta {} off the circle by {off:e}", row.theta),
        );
    }
    verdict(
        1,
        "{1+i, 1-i}: H = 2 at theta = 1/2, sweep on |z - 1| = 1",
        t,
        &f,
    );
}

#[test]
fn criterion_2_second_example() {
    let t = Instant::now();
    let mut f = Vec::new();
    let (c1, c2) = (c(8.0, 0.0), c(1.0, 1.0));
    let h = harmonic_mean(&FiniteDistribution::two_point(c1, c2, 0.2).unwrap()).unwrap();
    check(
        &mut f,
        (h - c(4.0, 2.0)).norm() <= 1e-13,
        format!("H = {h}"),
    );
    for row in &sweep(c1, c2, 11).unwrap().rows {
        let off = ((row.h.unwrap() - c(4.0, -3.0)).norm() - 5.0).abs();
        check(
            &mut f,
            off <= 1e-12,
            format!("theta {} off the circle by {off:e}", row.theta),
        );
    }
    let grid = sweep(c1, c2, 10_001).unwrap();
    let best = grid
        .rows
        .iter()
        .max_by(|a, b| a.h.unwrap().im.total_cmp(&b.h.unwrap().im))
        .unwrap();
    check(
        &mut f,
        (best.theta - 0.2).abs() <= 1e-4,
        format!("argmax Im h at theta = {}", best.theta),
    );
    verdict(
        2,
        "{8, 1+i}: H = 4+2i at theta = 1/5, sweep on |z - (4-3i)| = 5, max Im h at 0.2",
        t,
        &f,
    );
}

#[test]
fn criterion_3_modulus_suite() {
    let t = Instant::now();
    let mut f = Vec::new();
    let s = run_suite(Suite::Modulus, 10_000, SEED, 1e-10).unwrap();
    suite_clean(&mut f, &s);
    check(
        &mut f,
        passed(&s, "modulus") == 10_000,
        format!("{:?}", s.by_check),
    );
    check(
        &mut f,
        passed(&s, "modulus_equality") == 10_000,
        format!("{:?}", s.by_check),
    );
    verdict(
        3,
        "|H[Z]| >= H[|Z|] on 10^4 laws, equality for Z = vX",
        t,
        &f,
    );
}

#[test]
fn criterion_4_inner_product_suite() {
    let t = Instant::now();
    let mut f = Vec::new();
    let s = run_suite(Suite::Inner, 10_000, SEED, 1e-10).unwrap();
    suite_clean(&mut f, &s);
    check(
        &mut f,
        passed(&s, "inner_product") == 10_000,
        format!("{:?}", s.by_check),
    );
    let random_c = passed(&s, "inner_product_random_c");
    check(
        &mut f,
        random_c >= 1_000,
        format!("only {random_c} certified random directions"),
    );
    let p = run_suite(Suite::ProofI, 10_000, SEED, 1e-10).unwrap();
    suite_clean(&mut f, &p);
    // forms agreeing within 1e-12 is a cross-check inside every passed report
    check(
        &mut f,
        passed(&p, "proof_I") == 10_000,
        format!("{:?}", p.by_check),
    );
    verdict(
        4,
        "c.H[Z] >= H[c.Z] for c = 1 and certified random c; I >= 0 with both forms agreeing",
        t,
        &f,
    );
}

#[test]
fn criterion_5_disk_suite() {
    let t = Instant::now();
    let mut f = Vec::new();
    let s = run_suite(Suite::Disk, 10_000, SEED, 1e-10).unwrap();
    suite_clean(&mut f, &s);
    check(
        &mut f,
        passed(&s, "disk_bound") == 10_000,
        format!("{:?}", s.by_check),
    );
    check(
        &mut f,
        passed(&s, "disk_bound_half_plane") == 1_000,
        format!("{:?}", s.by_check),
    );
    verdict(
        5,
        "H[Z] and E[1/Z] in D and its image on 10^4 disks and 10^3 touching disks",
        t,
        &f,
    );
}

/// Least-squares circle through points (algebraic fit, solved by
/// elimination on the 3x3 normal equations).
#[allow(clippy::needless_range_loop)]
fn fit_circle(points: &[Complex64]) -> (Complex64, f64) {
    let mean = points.iter().sum::<Complex64>() / points.len() as f64;
    let mut m = [[0.0f64; 4]; 3];
    for p in points {
        let q = p - mean;
        let row = [q.re, q.im, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += row[i] * row[j];
            }
            m[i][3] -= row[i] * q.norm_sqr();
        }
    }
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        m.swap(col, piv);
        for r in 0..3 {
            if r != col {
                let k = m[r][col] / m[col][col];
                for j in col..4 {
                    m[r][j] -= k * m[col][j];
                }
            }
        }
    }
    let o = c(-m[0][3] / m[0][0] / 2.0, -m[1][3] / m[1][1] / 2.0);
    (o + mean, (o.norm_sqr() - m[2][3] / m[2][2]).sqrt())
}

#[test]
fn criterion_6_geometry_oracle() {
    let t = Instant::now();
    let mut f = Vec::new();
    let mut worst: f64 = 0.0;
    for case in 0..1_000 {
        let (disk, _) = random_disk_case(&mut case_rng(SEED, case), false);
        let Region::Disk { center, radius } = disk else {
            unreachable!()
        };
        let boundary: Vec<Complex64> = (0..64)
            .map(|k| {
                invert_point(
                    center + Complex64::from_polar(radius, k as f64 * std::f64::consts::TAU / 64.0),
                )
                .unwrap()
            })
            .collect();
        let (oc, or) = fit_circle(&boundary);
        let Region::Disk {
            center: ic,
            radius: ir,
        } = invert_region(&disk).unwrap()
        else {
            f.push(format!("case {case}: image is not a disk"));
            continue;
        };
        let gap = (ic - oc).norm().max((ir - or).abs());
        worst = worst.max(gap);
        check(
            &mut f,
            gap <= 1e-9,
            format!("case {case}: closed form vs oracle gap {gap:e}"),
        );
        let g = Circline::circle(center, radius).unwrap();
        let back = invert_circline(&invert_circline(&g).unwrap()).unwrap();
        check(
            &mut f,
            back == g,
            format!("case {case}: round trip {back:?} != {g:?}"),
        );
    }
    let first = circle_through(c(1.0, 1.0), c(1.0, -1.0), c(0.0, 0.0)).unwrap();
    let (o, r) = (first.center().unwrap(), first.radius().unwrap());
    check(
        &mut f,
        (o - c(1.0, 0.0)).norm() <= 1e-12 && (r - 1.0).abs() <= 1e-12,
        format!("first circle {o} {r}"),
    );
    let second = circle_through(c(8.0, 0.0), c(1.0, 1.0), c(0.0, 0.0)).unwrap();
    let (o, r) = (second.center().unwrap(), second.radius().unwrap());
    check(
        &mut f,
        (o - c(4.0, -3.0)).norm() <= 1e-12 && (r - 5.0).abs() <= 1e-12,
        format!("second circle {o} {r}"),
    );
    verdict(6, &format!("inverted disks match the fitted oracle (worst {worst:.1e}), exact round trips, circumcircles"), t, &f);
}

#[test]
fn criterion_7_lognormal_identity() {
    let t = Instant::now();
    let mut f = Vec::new();
    for (mu, sigma, seed) in [(c(0.0, 0.0), 0.5, 7), (c(1.0, FRAC_PI_4), 0.25, 11)] {
        let p = ComplexNormalParams::new(mu, sigma).unwrap();
        let r = lognormal_experiment(&p, 1_000_000, seed).unwrap();
        let bound = 10.0 * r.se_estimate;
        check(
            &mut f,
            (r.target - mu.exp()).norm() <= 1e-15 * r.target.norm().max(1.0),
            "target",
        );
        check(
            &mut f,
            r.err_arith <= bound,
            format!("mu {mu}: |E - e^mu| = {:e} > {bound:e}", r.err_arith),
        );
        check(
            &mut f,
            r.err_harm <= bound,
            format!("mu {mu}: |H - e^mu| = {:e} > {bound:e}", r.err_harm),
        );
        let gap = (r.arith - r.harm).norm();
        check(
            &mut f,
            gap <= bound,
            format!("mu {mu}: |E - H| = {gap:e} > {bound:e}"),
        );
    }
    verdict(
        7,
        "E[exp Z] and H[exp Z] both within 10 se of e^mu at n = 10^6",
        t,
        &f,
    );
}

#[test]
fn criterion_8_classical_suite() {
    let t = Instant::now();
    let mut f = Vec::new();
    let s = run_suite(Suite::Classical, 10_000, SEED, 1e-12).unwrap();
    suite_clean(&mut f, &s);
    check(
        &mut f,
        passed(&s, "range_bound") == 10_000,
        format!("{:?}", s.by_check),
    );
    // each jensen report carries an equality-iff-constant cross-check
    check(
        &mut f,
        passed(&s, "jensen") == 10_000,
        format!("{:?}", s.by_check),
    );
    verdict(
        8,
        "inf <= H[X] <= sup and H[X] <= E[X], equality iff constant",
        t,
        &f,
    );
}

#[test]
fn criterion_9_cli_contract() {
    let t = Instant::now();
    let mut f = Vec::new();
    let bin = env!("CARGO_BIN_EXE_chmean");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let file = |name: &str, body: &str| {
        let p = dir.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_owned()
    };

    let good = file(
        "good.json",
        r#"{"atoms":[{"re":1,"im":1,"w":0.5},{"re":1,"im":-1,"w":0.5}]}"#,
    );
    let zero = file("zero.json", r#"{"atoms":[{"re":0,"im":0,"w":1}]}"#);
    // weight 1/3 on -1 and 2/3 on 2 puts E[1/Z] at 0
    let degenerate = file(
        "deg.json",
        r#"{"atoms":[{"re":-1,"im":0,"w":0.3333333333333333},{"re":2,"im":0,"w":0.6666666666666667}]}"#,
    );
    let golden: [(&[&str], i32); 6] = [
        (&["hmean", &good], 0),
        (&["sweep2", "1+i", "1-i"], 0),
        (&["hmean", &zero], 1),
        (&["lognormal", "--mu", "0", "--sigma", "5", "--n", "10"], 1),
        (&["hmean", &degenerate], 2),
        (
            &[
                "lognormal",
                "--mu",
                "0",
                "--sigma",
                "4",
                "--n",
                "1",
                "--seed",
                "1108",
            ],
            3,
        ),
    ];
    for (args, want) in golden {
        let o = run(args);
        let got = o.status.code().unwrap();
        check(
            &mut f,
            got == want,
            format!("{args:?} exited {got}, expected {want}"),
        );
        if want == 2 {
            check(
                &mut f,
                o.stdout.is_empty(),
                "degenerate mean printed a result",
            );
        }
    }

    let out = run(&["sweep2", "-1", "2", "--steps", "4"]);
    let rows = parse_csv(&String::from_utf8(out.stdout).unwrap()).unwrap();
    check(
        &mut f,
        rows[2].h.is_none(),
        format!("weight 2/3 on 2 not flagged: {:?}", rows[2]),
    );

    for (a, b) in [
        (c(1.0, 1.0), c(1.0, -1.0)),
        (c(8.0, 0.0), c(1.0, 1.0)),
        (c(-0.3, 2.0), c(5.0, -0.01)),
    ] {
        let s = sweep(a, b, 101).unwrap();
        let parsed = parse_csv(&to_csv(&s.rows)).unwrap();
        for (x, y) in s.rows.iter().zip(&parsed) {
            let dh = (x.h.unwrap() - y.h.unwrap()).norm();
            let dd = (s.locus.distance(y.h.unwrap()) - y.on_locus_distance.unwrap()).abs();
            check(
                &mut f,
                x.theta == y.theta && dh <= 1e-12 && dd <= 1e-12,
                format!("round trip {x:?} vs {y:?}"),
            );
        }
    }
    verdict(
        9,
        "exit codes 0/1/2/3, CSV round trip, degenerate two-point law exits 2",
        t,
        &f,
    );
}
