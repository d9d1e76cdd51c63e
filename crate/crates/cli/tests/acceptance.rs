//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! and enforcing its wall-clock budget. `criterion_9_full_suite` replays
//! everything serially and enforces the total budget.

mod common;

use common::{run_had, shipped_schema, tmp_path, validate};
use had_core::binomial::{binomial_containment, verify_witness, BinomialOutcome};
use had_core::hadamard::{
    hadamard_inverse, hadamard_param_product, hadamard_point, stacked_frame, HadamardError,
    Verdict,
};
use had_core::oracle::count_window;
use had_core::runner::{run_multi_dim, run_oracle, run_power, run_twist, RunOptions};
use had_core::variety::{SamplePoint, SpecKind};
use had_core::{
    catalogue, random_prime, Fp, MultiPoly, ProjectivePoint, SeedStream, TwistMode, Variety,
};
use std::time::{Duration, Instant};

fn opts(seed: u64, trials: usize) -> RunOptions {
    RunOptions { seed, trials, ..Default::default() }
}

fn pass(criterion: u32, took: Duration, budget_s: f64, what: &str) {
    assert!(
        took.as_secs_f64() < budget_s,
        "criterion {criterion} exceeded its {budget_s}s budget: {took:?}"
    );
    println!("[PASS] criterion {criterion} ({took:?} < {budget_s}s): {what}");
}

/// Hadamard algebra on random points: commutative, associative where
/// defined, identity, and exact inverses off the coordinate hyperplanes.
fn run_criterion_1() -> Duration {
    let start = Instant::now();
    let root = SeedStream::root(0xC1);
    let fp = Fp::new(random_prime(62, &mut root.child(0)));
    let mut s = root.child(1);
    let rand_pt = |s: &mut SeedStream| loop {
        let coords: Vec<u64> = (0..4).map(|_| fp.random_elem(s)).collect();
        if let Ok(p) = ProjectivePoint::new(coords, &fp) {
            return p;
        }
    };
    let ones = ProjectivePoint::all_ones(3);
    for _ in 0..1000 {
        let (a, b, c) = (rand_pt(&mut s), rand_pt(&mut s), rand_pt(&mut s));
        assert_eq!(hadamard_point(&a, &b, &fp), hadamard_point(&b, &a, &fp));
        if let (Ok(ab), Ok(bc)) = (hadamard_point(&a, &b, &fp), hadamard_point(&b, &c, &fp)) {
            if let (Ok(l), Ok(r)) = (hadamard_point(&ab, &c, &fp), hadamard_point(&a, &bc, &fp)) {
                assert_eq!(l, r);
            }
        }
        assert_eq!(hadamard_point(&a, &ones, &fp).unwrap(), a);
    }
    for _ in 0..1000 {
        let p = loop {
            let coords: Vec<u64> = (0..4).map(|_| fp.random_nonzero(&mut s)).collect();
            break ProjectivePoint::new(coords, &fp).unwrap();
        };
        let inv = hadamard_inverse(&p, &fp).unwrap();
        assert_eq!(hadamard_point(&p, &inv, &fp).unwrap(), ones);
    }
    start.elapsed()
}

#[test]
fn criterion_1_hadamard_algebra() {
    let took = run_criterion_1();
    pass(1, took, 1.0, "point algebra on 1000 random points, exact");
}

/// Skew coordinate lines: empty product as given, full expected dimension
/// once both factors are generically twisted.
fn run_criterion_2() -> Duration {
    let start = Instant::now();
    let a = catalogue::spec("skew_line_01").unwrap();
    let b = catalogue::spec("skew_line_23").unwrap();

    let run = run_multi_dim(&[&a, &b], &opts(0xC2, 8)).unwrap();
    assert_eq!(run.report.verdict, Verdict::Empty);
    assert_eq!(run.report.observed, None);

    let (_, summary) = run_twist(&[&a, &b], TwistMode::TwistAll, &opts(0xC2 + 1, 20)).unwrap();
    assert_eq!(summary.expected, 2);
    assert_eq!(summary.successes, 20);
    assert!(summary
        .reports
        .iter()
        .all(|r| r.observed == Some(2)));
    start.elapsed()
}

#[test]
fn criterion_2_degenerate_pair_and_twist_all() {
    let took = run_criterion_2();
    pass(2, took, 1.0, "skew lines EMPTY; twist-all 20/20 at dimension 2");
}

/// Twisting all but the last factor restores the expected dimension for the
/// twisted cubic pair, while the untwisted square stays at dimension 1 —
/// corroborated by the point-count oracle.
fn run_criterion_3() -> Duration {
    let start = Instant::now();
    let tc = catalogue::spec("twisted_cubic").unwrap();

    let (_, summary) = run_twist(&[&tc, &tc], TwistMode::FixLast, &opts(0xC3, 20)).unwrap();
    assert_eq!(summary.expected, 2, "min(3, 1+1)");
    assert_eq!(summary.successes, 20);

    let untwisted = run_multi_dim(&[&tc, &tc], &opts(0xC3 + 1, 8)).unwrap();
    assert_eq!(untwisted.report.observed, Some(1));
    assert_eq!(untwisted.report.verdict, Verdict::Defect(1));

    let oracle = run_oracle(&[&tc, &tc], 1, 101, 0xC3).unwrap();
    assert_eq!(oracle.count, 102);
    assert_eq!(oracle.dim_estimate, Some(1));
    assert_eq!(oracle.dim_estimate, untwisted.report.observed.map(|o| o as u32));
    start.elapsed()
}

#[test]
fn criterion_3_twisted_cubic_harness() {
    let took = run_criterion_3();
    pass(3, took, 5.0, "fix-last 20/20 at 2; untwisted DEFECT(1); oracle count 102");
}

/// The shipped quartic curve is binomial-free to degree 3 and its powers
/// fill the expected dimensions, with point counts inside the factor-8
/// windows.
fn run_criterion_4() -> Duration {
    let start = Instant::now();
    let spec = catalogue::spec("generic_quartic_curve").unwrap();

    let (_, scan) = had_core::runner::run_binomial(&spec, 3, Some(64), &opts(0xC4, 8)).unwrap();
    assert_eq!(scan.outcome, BinomialOutcome::NotFoundUpTo { max_degree: 3 });

    for (k, want) in [(2usize, 2usize), (3, 3)] {
        let run = run_power(&spec, k, &opts(0xC4 + k as u64, 8)).unwrap();
        assert_eq!(run.report.expected, 3usize.min(k), "expected min(3, k)");
        assert_eq!(run.report.observed, Some(want), "k={k}");
        assert_eq!(run.report.verdict, Verdict::Match);
    }

    for k in 1..=3u32 {
        let oracle = run_oracle(&[&spec], k as usize, 101, 0xC4).unwrap();
        let (lo, hi) = count_window(101, k);
        assert!(
            (lo..=hi).contains(&oracle.count),
            "k={k}: count {} outside [{lo}, {hi}]",
            oracle.count
        );
        assert_eq!(oracle.dim_estimate, Some(k));
    }
    start.elapsed()
}

#[test]
fn criterion_4_quartic_powers() {
    let took = run_criterion_4();
    pass(4, took, 60.0, "binomial-free quartic: powers hit min(3,k), counts in window");
}

/// Exact parameter counts for product surfaces of every degree in reach.
fn run_criterion_5() -> Duration {
    let start = Instant::now();
    let r4 = had_core::counts::i4_parameter_counts(4).unwrap();
    assert_eq!((r4.dim_family, r4.dim_ambient), (28, 34), "3+3+14+8 < 35-1");
    assert!(r4.holds);
    for d in 4..=64 {
        assert!(had_core::counts::i4_parameter_counts(d).unwrap().holds, "d={d}");
    }
    start.elapsed()
}

#[test]
fn criterion_5_parameter_counts() {
    let took = run_criterion_5();
    pass(5, took, 1.0, "(28, 34) at d=4; holds for all 4 <= d <= 64");
}

/// Binomial scanner on the three reference inputs.
fn run_criterion_6() -> Duration {
    let start = Instant::now();
    let root = SeedStream::root(0xC6);
    let fp = Fp::new(random_prime(62, &mut root.child(0)));

    let conic = catalogue::load("conic", &fp).unwrap();
    let scan = binomial_containment(&conic, 2, None, &fp, &root.child(1)).unwrap();
    let BinomialOutcome::Found { witness } = &scan.outcome else {
        panic!("conic must produce a witness");
    };
    assert!(verify_witness(&conic, witness, &fp, &root.child(2)).unwrap());

    let fermat = catalogue::load("fermat_cubic", &fp).unwrap();
    let scan = binomial_containment(&fermat, 4, None, &fp, &root.child(3)).unwrap();
    assert_eq!(scan.outcome, BinomialOutcome::NotFoundUpTo { max_degree: 4 });

    let vars = ["s", "t"];
    let comps: Vec<MultiPoly> = ["s", "t", "s + t"]
        .iter()
        .map(|t| MultiPoly::parse(t, &vars, &fp).unwrap())
        .collect();
    let line = Variety::param("affine_line", 2, vec!["s".into(), "t".into()], comps).unwrap();
    let scan = binomial_containment(&line, 3, None, &fp, &root.child(4)).unwrap();
    assert_eq!(scan.outcome, BinomialOutcome::NotFoundUpTo { max_degree: 3 });
    start.elapsed()
}

#[test]
fn criterion_6_binomial_module() {
    let took = run_criterion_6();
    pass(6, took, 10.0, "conic Found+verified; fermat and line binomial-free");
}

/// Two routes, one number: the rank of the stacked factor frames equals the
/// rank of the product parametrization's own Jacobian at matching samples,
/// on every parametrized catalogue pair of matching ambient.
fn run_criterion_7() -> Duration {
    let start = Instant::now();
    let root = SeedStream::root(0xC7);
    let fp = Fp::new(random_prime(62, &mut root.child(0)));

    let param_names: Vec<&str> = catalogue::NAMES
        .iter()
        .copied()
        .filter(|n| {
            matches!(catalogue::spec(n).unwrap().kind, SpecKind::Param { .. })
        })
        .collect();

    let mut pairs_checked = 0;
    for (i, xn) in param_names.iter().enumerate() {
        for yn in &param_names[i..] {
            let x = catalogue::load(xn, &fp).unwrap();
            let y = catalogue::load(yn, &fp).unwrap();
            if x.ambient() != y.ambient() {
                continue;
            }
            let mut probe = root.child(1).child(pairs_checked);
            let prod = match hadamard_param_product(&x, &y, &fp, &mut probe) {
                Ok(p) => p,
                Err(HadamardError::EmptyProduct(_)) => {
                    // the skew pair: structurally empty, nothing to compare
                    assert!(
                        (xn.starts_with("skew_line") && yn.starts_with("skew_line")) && xn != yn,
                        "unexpected empty product {xn} * {yn}"
                    );
                    continue;
                }
                Err(e) => panic!("{xn} * {yn}: {e}"),
            };
            for seed in 0..8u64 {
                let ts = root.child(2).child(pairs_checked).child(seed);
                let p = x.sample_point(&fp, &mut ts.child(0)).unwrap();
                let q = y.sample_point(&fp, &mut ts.child(1)).unwrap();
                let stacked = stacked_frame(&[(&x, &p), (&y, &q)], &fp).unwrap();
                let mut params = p.params.clone().unwrap();
                params.extend(q.params.clone().unwrap());
                let image: Vec<u64> = prod
                    .param_map()
                    .unwrap()
                    .components
                    .iter()
                    .map(|c| c.evaluate(&params, &fp).unwrap())
                    .collect();
                match stacked {
                    None => assert!(image.iter().all(|&c| c == 0)),
                    Some(m) => {
                        let at = SamplePoint {
                            point: ProjectivePoint::new(image, &fp).unwrap(),
                            params: Some(params),
                        };
                        let frame = prod.tangent_frame(&at, &fp).unwrap();
                        assert_eq!(
                            frame.frame.rank(&fp),
                            m.rank(&fp),
                            "{xn} * {yn} seed {seed}"
                        );
                    }
                }
            }
            pairs_checked += 1;
        }
    }
    assert!(pairs_checked >= 10, "only {pairs_checked} pairs compared");
    start.elapsed()
}

#[test]
fn criterion_7_cross_route_ranks() {
    let took = run_criterion_7();
    pass(7, took, 30.0, "stacked-frame rank == product-Jacobian rank, 8 seeds per pair");
}

/// Byte-identical JSON reports for identical seed and argv.
fn run_criterion_8() -> Duration {
    let start = Instant::now();
    let schema = shipped_schema();
    let commands: Vec<(&str, Vec<&str>)> = vec![
        ("dim", vec!["dim", "catalogue:twisted_cubic", "catalogue:twisted_cubic", "--seed", "1"]),
        (
            "twist",
            vec![
                "twist",
                "catalogue:skew_line_01",
                "catalogue:skew_line_23",
                "--mode",
                "twist-all",
                "--trials",
                "20",
                "--seed",
                "2",
            ],
        ),
        ("power", vec!["power", "catalogue:generic_quartic_curve", "--k", "2", "--seed", "3"]),
        ("binomial", vec!["binomial", "catalogue:conic", "--max-degree", "2", "--seed", "4"]),
        ("counts", vec!["counts", "--d", "4", "--to", "64"]),
        ("oracle", vec!["oracle", "catalogue:twisted_cubic", "catalogue:twisted_cubic", "--seed", "5"]),
        ("sample", vec!["sample", "catalogue:fermat_cubic", "--seed", "6"]),
    ];
    for (tag, args) in commands {
        let mut bytes = Vec::new();
        for round in 0..2 {
            let path = tmp_path(&format!("det-{tag}-{round}"));
            let path_str = path.to_str().unwrap().to_string();
            let mut full = args.clone();
            full.push("--json");
            full.push(&path_str);
            let out = run_had(&full);
            assert!(
                out.status.code().is_some_and(|c| c < 2),
                "{tag}: unexpected exit {:?}",
                out.status.code()
            );
            bytes.push(std::fs::read(&path).expect("report written"));
            std::fs::remove_file(&path).ok();
        }
        assert_eq!(bytes[0], bytes[1], "{tag}: reports differ between runs");
        let doc: serde_json::Value = serde_json::from_slice(&bytes[0]).unwrap();
        let errors = validate(&schema, &doc);
        assert!(errors.is_empty(), "{tag}: {errors:?}");
    }
    start.elapsed()
}

#[test]
fn criterion_8_deterministic_reports() {
    let took = run_criterion_8();
    pass(8, took, 60.0, "byte-identical schema-valid reports on re-run");
}

#[test]
fn criterion_9_full_suite() {
    let start = Instant::now();
    let mut total = Duration::ZERO;
    for (n, f) in [
        (1u32, run_criterion_1 as fn() -> Duration),
        (2, run_criterion_2),
        (3, run_criterion_3),
        (4, run_criterion_4),
        (5, run_criterion_5),
        (6, run_criterion_6),
        (7, run_criterion_7),
        (8, run_criterion_8),
    ] {
        let took = f();
        println!("  criterion {n}: {took:?}");
        total += took;
    }
    let wall = start.elapsed();
    assert!(
        wall.as_secs_f64() < 120.0,
        "full suite took {wall:?}, budget 120s"
    );
    println!("[PASS] criterion 9 ({wall:?} < 120s): full suite, single-threaded");
    let _ = total;
}
