//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use sorted_delaunay::geometry::{in_circle_opposite, orient_value};
use sorted_delaunay::hull::{hull_of_sorted, CollinearPolicy};
use sorted_delaunay::io::generate_uniform;
use sorted_delaunay::verify::{
    audit_counts, brute_force_delaunay, check_empty_circumcircle, check_hull_baseline,
    incircle_det_oracle_tol, OracleSign,
};
use sorted_delaunay::{convex_hull, sort_points, EdgeKey, Point2, PointSet, Triangulator};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(name: &'static str, passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            name,
            passed,
            detail: detail.into(),
        }
    }
}

fn grid_points(rng: &mut ChaCha8Rng, n: usize, side: i32) -> Vec<Point2> {
    (0..n)
        .map(|_| {
            Point2::new(
                rng.random_range(0..side) as f64,
                rng.random_range(0..side) as f64,
            )
        })
        .collect()
}

/// Uniform sets, n in 4..=64, triangulated one insertion at a time.
/// Checks the empty-circumcircle property on the result, plus the Euler
/// counts and new-edge locality after every insertion.
fn delaunay_sweep() -> Vec<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xD1);
    let (mut empty_fail, mut euler_fail, mut locality_fail) = (Vec::new(), 0usize, 0usize);
    let (mut insertions, mut triangles) = (0usize, 0usize);

    for set in 0..500u64 {
        let n = rng.random_range(4..=64);
        let ps = sort_points(&generate_uniform(n, set)).expect("finite input");
        let mut t = Triangulator::new(ps)
            .expect("uniform points")
            .check_opposite_sides(true);
        let euler_ok = |t: &Triangulator| {
            let (m, l) = (t.inserted(), t.hull().len());
            t.map().triangle_count() + l + 2 == 2 * m && t.map().len() + l + 3 == 3 * m
        };
        if !euler_ok(&t) {
            euler_fail += 1;
        }
        loop {
            let before: FxHashSet<EdgeKey> = t.map().iter().map(|(k, _)| k).collect();
            let Some(ins) = t.insert_next().expect("insertion") else {
                break;
            };
            insertions += 1;
            if !euler_ok(&t) {
                euler_fail += 1;
            }
            if t.map()
                .iter()
                .any(|(k, _)| !before.contains(&k) && !k.contains(ins.point))
            {
                locality_fail += 1;
            }
        }
        let done = t.run().expect("finished");
        let tris = done.map.triangles();
        triangles += tris.len();
        let report = check_empty_circumcircle(&done.points, &tris, 1e-9);
        if !report.passed || done.counters.opposite_side_violations != 0 {
            empty_fail.push(format!("seed={set} {report}"));
        }
    }
    let elapsed = start.elapsed();
    vec![
        Outcome::new(
            "delaunay_property_sweep",
            empty_fail.is_empty() && elapsed < Duration::from_secs(60),
            format!(
                "sets=500 triangles={triangles} failures={} elapsed={:.2}s limit=60s {}",
                empty_fail.len(),
                elapsed.as_secs_f64(),
                empty_fail.first().map_or("", String::as_str)
            ),
        ),
        Outcome::new(
            "structural_identities",
            euler_fail == 0,
            format!("insertions={insertions} violations={euler_fail}"),
        ),
        Outcome::new(
            "new_edge_locality",
            locality_fail == 0,
            format!("insertions={insertions} violations={locality_fail}"),
        ),
    ]
}

/// Small sets against the brute-force Delaunay oracle. Every fourth set is
/// drawn from a small integer grid so cocircular quadruples occur.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0x0E);
    let (mut checked, mut degenerate, mut failures) = (0, 0, Vec::new());
    for set in 0..200u64 {
        let n = rng.random_range(3..=20);
        let raw = if set % 4 == 3 {
            grid_points(&mut rng, n, 5)
        } else {
            generate_uniform(n, 1000 + set)
        };
        let ps = sort_points(&raw).expect("finite input");
        let t = match Triangulator::new(ps).and_then(|t| t.run()) {
            Ok(t) => t,
            Err(e) if e.is_degenerate_input() => {
                degenerate += 1;
                continue;
            }
            Err(e) => {
                failures.push(format!("set={set} {e}"));
                continue;
            }
        };
        checked += 1;
        match brute_force_delaunay(&t.points) {
            Ok(oracle) if oracle.matches(&t.points, &t.map.triangles()) => {}
            Ok(_) => failures.push(format!("set={set} triangle sets differ")),
            Err(e) => failures.push(format!("set={set} {e}")),
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        "oracle_equivalence",
        failures.is_empty() && elapsed < Duration::from_secs(120),
        format!(
            "sets=200 checked={checked} collinear_skipped={degenerate} failures={} elapsed={:.2}s limit=120s {}",
            failures.len(),
            elapsed.as_secs_f64(),
            failures.first().map_or("", String::as_str)
        ),
    )
}

/// Hull runs, n in [3, 500]. Every third set comes from a coarse grid so the
/// first points are often collinear.
fn count_identity() -> Vec<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0);
    let (mut identity_fail, mut bound_fail, mut runs, mut max_ratio) =
        (Vec::new(), Vec::new(), 0, 0.0f64);
    let mut k1_above_3 = 0;
    for set in 0..1000u64 {
        let n = rng.random_range(3..=500);
        let raw = if set % 3 == 2 {
            grid_points(&mut rng, n, 4 + (set % 40) as i32)
        } else {
            generate_uniform(n, 2000 + set)
        };
        let ps = sort_points(&raw).expect("finite input");
        let (_, counters) = match hull_of_sorted(&ps, CollinearPolicy::Drop) {
            Ok(run) => run,
            Err(e) if e.is_degenerate_input() => continue,
            Err(e) => {
                identity_fail.push(format!("set={set} {e}"));
                continue;
            }
        };
        runs += 1;
        if counters.k1 > 3 {
            k1_above_3 += 1;
        }
        let n = ps.len();
        let report = audit_counts(&counters, n);
        if !report.passed {
            identity_fail.push(format!("set={set} n={n} {report}"));
        }
        if counters.to_left_calls >= 4 * n as u64 {
            bound_fail.push(format!("set={set} n={n} calls={}", counters.to_left_calls));
        }
        max_ratio = max_ratio.max(counters.to_left_calls as f64 / n as f64);
    }
    vec![
        Outcome::new(
            "to_left_count_identity",
            identity_fail.is_empty() && runs > 0,
            format!(
                "runs={runs} k1>3_runs={k1_above_3} mismatches={} {}",
                identity_fail.len(),
                identity_fail.first().map_or("", String::as_str)
            ),
        ),
        Outcome::new(
            "to_left_linear_bound",
            bound_fail.is_empty() && runs > 0,
            format!(
                "runs={runs} violations={} max_calls_per_point={max_ratio:.3} bound=4 {}",
                bound_fail.len(),
                bound_fail.first().map_or("", String::as_str)
            ),
        ),
    ]
}

fn build_time(ps: &PointSet) -> Duration {
    let input = ps.clone();
    let start = Instant::now();
    let t = Triangulator::new(input)
        .and_then(|t| t.check_opposite_sides(false).run())
        .expect("uniform points");
    let elapsed = start.elapsed();
    drop(t);
    elapsed
}

fn median(mut samples: Vec<Duration>) -> f64 {
    samples.sort_unstable();
    samples[samples.len() / 2].as_secs_f64()
}

/// Median post-sort build time at 200k over 100k, repetitions interleaved.
fn linearity() -> Outcome {
    const REPS: usize = 15;
    let start = Instant::now();
    let small = sort_points(&generate_uniform(100_000, 7)).expect("finite input");
    let large = sort_points(&generate_uniform(200_000, 7)).expect("finite input");
    build_time(&small);
    let (mut ts, mut tl) = (Vec::new(), Vec::new());
    for _ in 0..REPS {
        ts.push(build_time(&small));
        tl.push(build_time(&large));
    }
    let (ms, ml) = (median(ts), median(tl));
    let ratio = ml / ms;
    let elapsed = start.elapsed();
    Outcome::new(
        "empirical_linearity",
        (1.6..=2.8).contains(&ratio) && elapsed < Duration::from_secs(300),
        format!(
            "reps={REPS} median_100k={:.1}ms median_200k={:.1}ms ratio={ratio:.3} band=[1.6,2.8] elapsed={:.1}s limit=300s",
            ms * 1e3,
            ml * 1e3,
            elapsed.as_secs_f64()
        ),
    )
}

/// Hull against the monotone-chain baseline, n in [3, 200].
fn hull_baseline() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0);
    let (mut checked, mut failures) = (0, Vec::new());
    for set in 0..1000u64 {
        let n = rng.random_range(3..=200);
        let raw = if set % 5 == 4 {
            grid_points(&mut rng, n, 6)
        } else {
            generate_uniform(n, 3000 + set)
        };
        let hull = convex_hull(&raw).expect("finite input");
        if hull.chain.is_degenerate() {
            continue;
        }
        checked += 1;
        let report = check_hull_baseline(&hull.points, &hull.chain);
        if !report.passed {
            failures.push(format!("set={set} {report}"));
        }
    }
    Outcome::new(
        "hull_baseline_agreement",
        failures.is_empty() && checked > 0,
        format!(
            "sets=1000 checked={checked} failures={} {}",
            failures.len(),
            failures.first().map_or("", String::as_str)
        ),
    )
}

/// In-circle predicate against the determinant oracle on configurations
/// with `a` and `d` strictly on opposite sides of `bc`.
fn predicate_agreement() -> Outcome {
    const TRIALS: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0xA9);
    let point = |rng: &mut ChaCha8Rng| {
        Point2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    };
    let (mut compared, mut banded, mut disagree) = (0, 0, Vec::new());
    let mut generated = 0;
    while generated < TRIALS {
        let (a, b, c, d) = (
            point(&mut rng),
            point(&mut rng),
            point(&mut rng),
            point(&mut rng),
        );
        let (sa, sd) = (orient_value(a, b, c), orient_value(d, b, c));
        if sa == 0.0 || sd == 0.0 || (sa > 0.0) == (sd > 0.0) {
            continue;
        }
        generated += 1;
        let oracle = incircle_det_oracle_tol(a, b, c, d, 1e-12).expect("non-degenerate triangle");
        let expected = match oracle.sign {
            OracleSign::Cocircular => {
                banded += 1;
                continue;
            }
            sign => sign == OracleSign::Inside,
        };
        compared += 1;
        if in_circle_opposite(a, b, c, d).expect("distinct edge endpoints") != expected {
            disagree.push(format!("a={a} b={b} c={c} d={d}"));
        }
    }
    Outcome::new(
        "predicate_agreement",
        disagree.is_empty(),
        format!(
            "configs={TRIALS} compared={compared} in_band={banded} disagreements={} {}",
            disagree.len(),
            disagree.first().map_or("", String::as_str)
        ),
    )
}

fn main() -> ExitCode {
    let mut outcomes = delaunay_sweep();
    outcomes.push(oracle_equivalence());
    outcomes.extend(count_identity());
    outcomes.push(hull_baseline());
    outcomes.push(predicate_agreement());
    outcomes.push(linearity());

    for o in &outcomes {
        println!(
            "ACCEPT {} {} {}",
            o.name,
            if o.passed { "PASS" } else { "FAIL" },
            o.detail.trim_end()
        );
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        outcomes.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
