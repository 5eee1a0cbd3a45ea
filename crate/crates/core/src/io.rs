//! Text ingestion, seeded point generation, output emitters and the
//! benchmark harness.

use std::fmt::Write as _;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::delaunay::{Triangulation, TriangulationMap, Triangulator};
use crate::geometry::{orient_value, Point2};
use crate::hull::{hull_of_sorted, sort_points, CollinearPolicy, Hull, HullChain, PointSet};
use crate::verify::monotone_chain_hull;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: non-finite coordinate")]
    NonFiniteCoordinate { line: usize },
    #[error("{0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Parses one point per line as `x,y` or `x y`. Text after `#` is ignored.
pub fn parse_points(text: &str) -> Result<Vec<Point2>, InputError> {
    let mut points = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        let fields: Vec<(usize, &str)> = if content.contains(',') {
            let mut offset = 0;
            content
                .split(',')
                .map(|f| {
                    let start = offset + (f.len() - f.trim_start().len());
                    offset += f.len() + 1;
                    (start, f.trim())
                })
                .collect()
        } else {
            content
                .split_whitespace()
                .map(|f| (f.as_ptr() as usize - content.as_ptr() as usize, f))
                .collect()
        };
        if fields.len() != 2 {
            return Err(InputError::Parse {
                line,
                column: 1,
                message: format!("expected 2 coordinates, found {}", fields.len()),
            });
        }
        let mut coords = [0.0; 2];
        for (slot, (start, field)) in coords.iter_mut().zip(&fields) {
            *slot = field.parse::<f64>().map_err(|e| InputError::Parse {
                line,
                column: start + 1,
                message: format!("{field:?}: {e}"),
            })?;
            if !slot.is_finite() {
                return Err(InputError::NonFiniteCoordinate { line });
            }
        }
        points.push(Point2::new(coords[0], coords[1]));
    }
    Ok(points)
}

pub fn ingest(path: impl AsRef<Path>) -> Result<Vec<Point2>, InputError> {
    parse_points(&std::fs::read_to_string(path)?)
}

/// `n` points uniform in the unit square.
pub fn generate_uniform(n: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| Point2::new(rng.random::<f64>(), rng.random::<f64>()))
        .collect()
}

/// One `x,y` line per point in shortest round-trip decimal form.
pub fn format_points(points: &[Point2]) -> String {
    let mut out = String::with_capacity(points.len() * 40);
    for p in points {
        let _ = writeln!(out, "{},{}", p.x, p.y);
    }
    out
}

/// Triangles as `i j k` lines in original indexing, `i < j < k`, sorted.
pub fn emit_triangles(ps: &PointSet, map: &TriangulationMap) -> String {
    let mut tris: Vec<[usize; 3]> = map
        .triangles()
        .into_iter()
        .map(|t| {
            let mut o = t.map(|i| ps.original_index(i));
            o.sort_unstable();
            o
        })
        .collect();
    tris.sort_unstable();
    let mut out = String::new();
    for [i, j, k] in tris {
        let _ = writeln!(out, "{i} {j} {k}");
    }
    out
}

/// Edges as `i j` lines in original indexing, `i < j`, sorted.
pub fn emit_edges(ps: &PointSet, map: &TriangulationMap) -> String {
    let mut out = String::new();
    for [i, j] in original_edges(ps, map) {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

fn original_edges(ps: &PointSet, map: &TriangulationMap) -> Vec<[usize; 2]> {
    let mut edges: Vec<[usize; 2]> = map
        .iter()
        .map(|(k, _)| {
            let (a, b) = (ps.original_index(k.lo()), ps.original_index(k.hi()));
            [a.min(b), a.max(b)]
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Hull vertices in original indexing, one per line, counterclockwise from
/// the lexicographically smallest point.
pub fn emit_hull(hull: &Hull) -> String {
    let mut out = String::new();
    for i in hull.original_cycle() {
        let _ = writeln!(out, "{i}");
    }
    out
}

/// OFF mesh with `z = 0`. Vertices are the distinct input points in input
/// order; faces are counterclockwise.
pub fn emit_off(t: &Triangulation) -> String {
    let ps = &t.points;
    let mut by_input: Vec<usize> = (0..ps.len()).collect();
    by_input.sort_unstable_by_key(|&i| ps.original_index(i));
    let mut rank = vec![0; ps.len()];
    for (r, &i) in by_input.iter().enumerate() {
        rank[i] = r;
    }

    let mut faces: Vec<[usize; 3]> = t
        .map
        .triangles()
        .into_iter()
        .map(|[a, b, c]| {
            let ccw = if orient_value(ps.point(c), ps.point(a), ps.point(b)) > 0.0 {
                [a, b, c]
            } else {
                [a, c, b]
            };
            let mut face = ccw.map(|i| rank[i]);
            let start = (0..3).min_by_key(|&k| face[k]).unwrap_or(0);
            face.rotate_left(start);
            face
        })
        .collect();
    faces.sort_unstable();

    let mut out = String::new();
    let _ = writeln!(out, "OFF");
    let _ = writeln!(out, "{} {} 0", ps.len(), faces.len());
    for &i in &by_input {
        let p = ps.point(i);
        let _ = writeln!(out, "{} {} 0", p.x, p.y);
    }
    for [a, b, c] in faces {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

/// SVG drawing of the triangulation edges, hull outline and points.
/// The y axis points up.
pub fn emit_svg(ps: &PointSet, map: &TriangulationMap, hull: &HullChain) -> String {
    let pts = ps.points();
    let (mut min_x, mut max_x, mut min_y, mut max_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in pts {
        min_x = min_x.min(p.x);
        max_x = max_x.max(p.x);
        min_y = min_y.min(p.y);
        max_y = max_y.max(p.y);
    }
    let (w, h) = (max_x - min_x, max_y - min_y);
    let span = w.max(h).max(f64::MIN_POSITIVE);
    let mx = if w > 0.0 { 0.05 * w } else { 0.05 * span };
    let my = if h > 0.0 { 0.05 * h } else { 0.05 * span };
    let stroke = span / 500.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}">"#,
        min_x - mx,
        -max_y - my,
        w + 2.0 * mx,
        h + 2.0 * my
    );
    let _ = writeln!(out, r##"<g stroke="#555555" stroke-width="{stroke}">"##);
    let mut edges = map.sorted_edges();
    edges.sort_unstable_by_key(|k| {
        let (a, b) = (ps.original_index(k.lo()), ps.original_index(k.hi()));
        (a.min(b), a.max(b))
    });
    for k in edges {
        let (a, b) = (ps.point(k.lo()), ps.point(k.hi()));
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            a.x, -a.y, b.x, -b.y
        );
    }
    let _ = writeln!(out, "</g>");
    let outline: Vec<String> = hull
        .canonical()
        .iter()
        .map(|&i| format!("{},{}", ps.point(i).x, -ps.point(i).y))
        .collect();
    let _ = writeln!(
        out,
        r##"<polygon points="{}" fill="none" stroke="#c0392b" stroke-width="{}"/>"##,
        outline.join(" "),
        2.0 * stroke
    );
    let _ = writeln!(out, r##"<g fill="#1f4e79">"##);
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.sort_unstable_by_key(|&i| ps.original_index(i));
    for i in order {
        let p = ps.point(i);
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}"/>"#,
            p.x,
            -p.y,
            3.0 * stroke
        );
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, "</svg>");
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    /// Run different sizes on separate threads.
    pub parallel: bool,
}

/// Median timings for one size of the triangulation benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub sort_ns: u128,
    pub build_ns: u128,
    pub to_left_calls: u64,
    pub in_circle_calls: u64,
}

/// Median timings for one size of the hull benchmark.
#[derive(Debug, Clone, PartialEq)]
pub struct HullBenchRow {
    pub n: usize,
    pub hull_ns: u128,
    pub monotone_ns: u128,
    pub to_left_calls: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub seed: u64,
    pub rows: Vec<BenchRow>,
    pub hull_rows: Vec<HullBenchRow>,
}

impl BenchReport {
    /// Ratio of median build times between consecutive sizes.
    pub fn build_ratios(&self) -> Vec<(usize, usize, f64)> {
        self.rows
            .windows(2)
            .map(|w| {
                (
                    w[0].n,
                    w[1].n,
                    w[1].build_ns as f64 / w[0].build_ns.max(1) as f64,
                )
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed={}", self.seed);
        let _ = writeln!(out, "n,sort_ns,build_ns,to_left_calls,in_circle_calls");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.n, r.sort_ns, r.build_ns, r.to_left_calls, r.in_circle_calls
            );
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "n,hull_ns,monotone_ns,hull_to_left_calls");
        for r in &self.hull_rows {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.n, r.hull_ns, r.monotone_ns, r.to_left_calls
            );
        }
        for (a, b, ratio) in self.build_ratios() {
            let _ = writeln!(out, "# build_ns ratio {b}/{a} = {ratio:.3}");
        }
        out
    }
}

fn median(mut samples: Vec<Duration>) -> u128 {
    samples.sort_unstable();
    let mid = samples.len() / 2;
    if samples.len() % 2 == 1 {
        samples[mid].as_nanos()
    } else {
        (samples[mid - 1].as_nanos() + samples[mid].as_nanos()) / 2
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn bench_size(n: usize, reps: usize, seed: u64) -> Result<(BenchRow, HullBenchRow), InputError> {
    let raw = generate_uniform(n, seed);
    let invalid = |e: crate::Error| InputError::InvalidConfig(format!("n={n}: {e}"));
    let mut sort_times = Vec::with_capacity(reps);
    let mut build_times = Vec::with_capacity(reps);
    let mut hull_times = Vec::with_capacity(reps);
    let mut monotone_times = Vec::with_capacity(reps);
    let mut counters = None;
    let mut hull_calls = 0;

    for _ in 0..reps {
        let (ps, dt) = timed(|| sort_points(&raw));
        let ps = ps.map_err(invalid)?;
        sort_times.push(dt);

        let input = ps.clone();
        let (tri, dt) =
            timed(|| Triangulator::new(input).and_then(|t| t.check_opposite_sides(false).run()));
        build_times.push(dt);
        counters = Some(tri.map_err(invalid)?.counters);

        let (hull, dt) = timed(|| hull_of_sorted(&ps, CollinearPolicy::Drop));
        hull_times.push(dt);
        hull_calls = hull.map_err(invalid)?.1.to_left_calls;

        let (mono, dt) = timed(|| monotone_chain_hull(&ps));
        monotone_times.push(dt);
        mono.map_err(invalid)?;
    }
    let counters = counters.unwrap_or_default();
    Ok((
        BenchRow {
            n,
            sort_ns: median(sort_times),
            build_ns: median(build_times),
            to_left_calls: counters.to_left_calls,
            in_circle_calls: counters.in_circle_calls,
        },
        HullBenchRow {
            n,
            hull_ns: median(hull_times),
            monotone_ns: median(monotone_times),
            to_left_calls: hull_calls,
        },
    ))
}

/// Times sorting and construction separately on uniform points, plus the
/// hull against the monotone-chain baseline.
pub fn bench(config: &BenchConfig) -> Result<BenchReport, InputError> {
    if config.sizes.is_empty() || config.sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(InputError::InvalidConfig(
            "sizes must be non-empty and ascending".into(),
        ));
    }
    if config.sizes[0] < 3 {
        return Err(InputError::InvalidConfig("sizes must be at least 3".into()));
    }
    if config.reps < 3 {
        return Err(InputError::InvalidConfig(
            "need at least 3 repetitions".into(),
        ));
    }
    let results: Vec<Result<(BenchRow, HullBenchRow), InputError>> = if config.parallel {
        std::thread::scope(|s| {
            let handles: Vec<_> = config
                .sizes
                .iter()
                .map(|&n| s.spawn(move || bench_size(n, config.reps, config.seed)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("benchmark thread panicked"))
                .collect()
        })
    } else {
        config
            .sizes
            .iter()
            .map(|&n| bench_size(n, config.reps, config.seed))
            .collect()
    };
    let mut report = BenchReport {
        seed: config.seed,
        rows: Vec::new(),
        hull_rows: Vec::new(),
    };
    for r in results {
        let (row, hull_row) = r?;
        report.rows.push(row);
        report.hull_rows.push(hull_row);
    }
    Ok(report)
}
