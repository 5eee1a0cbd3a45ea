//! Independent oracles and property checks.
//!
//! Nothing here shares code paths with the construction routines beyond the
//! point types: the in-circle oracle is the lifted 3x3 determinant, the
//! Delaunay oracle enumerates all triples, and the hull oracle is Andrew's
//! monotone chain.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::delaunay::{Triangulation, TriangulationMap};
use crate::error::{Error, Result};
use crate::geometry::{orient_value, OpCounters, Point2};
use crate::hull::{HullChain, PointSet};

/// Relative determinant magnitude below which four points count as cocircular.
pub const COCIRCULAR_TOLERANCE: f64 = 1e-12;

/// Largest point count accepted by [`brute_force_delaunay`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleSign {
    Inside,
    Cocircular,
    Outside,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleVerdict {
    pub sign: OracleSign,
    /// Determinant, normalized so that positive means inside.
    pub determinant: f64,
    /// `|determinant|` over the sum of absolute values of its terms.
    pub relative: f64,
}

/// Lifted in-circle determinant: is `a` inside the circumcircle of `bcd`?
pub fn incircle_det_oracle(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<OracleVerdict> {
    incircle_det_oracle_tol(a, b, c, d, COCIRCULAR_TOLERANCE)
}

/// [`incircle_det_oracle`] with an explicit cocircular band.
pub fn incircle_det_oracle_tol(
    a: Point2,
    b: Point2,
    c: Point2,
    d: Point2,
    tolerance: f64,
) -> Result<OracleVerdict> {
    let orientation = orient_value(d, b, c);
    if orientation == 0.0 {
        return Err(Error::CollinearTriangle);
    }
    let (bx, by) = (b.x - a.x, b.y - a.y);
    let (cx, cy) = (c.x - a.x, c.y - a.y);
    let (dx, dy) = (d.x - a.x, d.y - a.y);
    let bl = bx * bx + by * by;
    let cl = cx * cx + cy * cy;
    let dl = dx * dx + dy * dy;

    let det = bx * (cy * dl - dy * cl) - by * (cx * dl - dx * cl) + bl * (cx * dy - dx * cy);
    let permanent = (bx * cy * dl).abs()
        + (bx * dy * cl).abs()
        + (by * cx * dl).abs()
        + (by * dx * cl).abs()
        + (bl * cx * dy).abs()
        + (bl * dx * cy).abs();

    let determinant = if orientation > 0.0 { det } else { -det };
    let relative = if permanent > 0.0 {
        det.abs() / permanent
    } else {
        0.0
    };
    let sign = if relative <= tolerance {
        OracleSign::Cocircular
    } else if determinant > 0.0 {
        OracleSign::Inside
    } else {
        OracleSign::Outside
    };
    Ok(OracleVerdict {
        sign,
        determinant,
        relative,
    })
}

/// Strict hull by Andrew's monotone chain over sorted points,
/// counterclockwise from index 0. Collinear boundary points are dropped.
pub fn monotone_chain_hull(ps: &PointSet) -> Result<Vec<usize>> {
    let n = ps.len();
    let p = |i: usize| ps.point(i);
    let mut hull: Vec<usize> = Vec::with_capacity(n + 1);
    for i in 0..n {
        while hull.len() >= 2
            && orient_value(p(i), p(hull[hull.len() - 2]), p(hull[hull.len() - 1])) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for i in (0..n.saturating_sub(1)).rev() {
        while hull.len() >= lower_len
            && orient_value(p(i), p(hull[hull.len() - 2]), p(hull[hull.len() - 1])) <= 0.0
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();
    if hull.len() < 3 {
        return Err(Error::AllCollinear(n));
    }
    Ok(hull)
}

/// Drops vertices lying on the segment between their neighbours and rotates
/// the cycle to start at its smallest index.
pub fn canonical_hull(ps: &PointSet, cycle: &[usize]) -> Vec<usize> {
    let mut verts = cycle.to_vec();
    loop {
        let m = verts.len();
        if m < 3 {
            break;
        }
        let collinear = (0..m).find(|&i| {
            let (prev, cur, next) = (verts[(i + m - 1) % m], verts[i], verts[(i + 1) % m]);
            orient_value(ps.point(cur), ps.point(prev), ps.point(next)) == 0.0
        });
        match collinear {
            Some(i) => {
                verts.remove(i);
            }
            None => break,
        }
    }
    if let Some(start) = verts
        .iter()
        .enumerate()
        .min_by_key(|(_, &v)| v)
        .map(|(i, _)| i)
    {
        verts.rotate_left(start);
    }
    verts
}

/// Every point lies left of or on every directed edge of the cycle.
pub fn hull_contains_all(ps: &PointSet, cycle: &[usize]) -> bool {
    let m = cycle.len();
    (0..m).all(|k| {
        let (u, v) = (ps.point(cycle[k]), ps.point(cycle[(k + 1) % m]));
        ps.points().iter().all(|&q| orient_value(q, u, v) >= 0.0)
    })
}

/// Number of points on the hull boundary, counting points in the interior
/// of hull edges.
pub fn boundary_point_count(ps: &PointSet, strict_hull: &[usize]) -> usize {
    let m = strict_hull.len();
    (0..ps.len())
        .filter(|&i| {
            let q = ps.point(i);
            (0..m).any(|k| {
                let (u, v) = (ps.point(strict_hull[k]), ps.point(strict_hull[(k + 1) % m]));
                orient_value(q, u, v) == 0.0
                    && q.x >= u.x.min(v.x)
                    && q.x <= u.x.max(v.x)
                    && q.y >= u.y.min(v.y)
                    && q.y <= u.y.max(v.y)
            })
        })
        .count()
}

fn polygon_area(ps: &PointSet, cycle: &[usize]) -> f64 {
    let m = cycle.len();
    0.5 * (0..m)
        .map(|k| ps.point(cycle[k]).cross(ps.point(cycle[(k + 1) % m])))
        .sum::<f64>()
}

fn triangle_area(ps: &PointSet, t: &[usize; 3]) -> f64 {
    0.5 * orient_value(ps.point(t[2]), ps.point(t[0]), ps.point(t[1])).abs()
}

/// Every edge borders at most two triangles, lying on opposite sides of it.
fn edges_well_formed(ps: &PointSet, tris: &BTreeSet<[usize; 3]>) -> bool {
    let mut opposite: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for &[a, b, c] in tris {
        for (u, v, w) in [(a, b, c), (b, c, a), (a, c, b)] {
            opposite.entry((u.min(v), u.max(v))).or_default().push(w);
        }
    }
    opposite.iter().all(|(&(u, v), ws)| match ws.as_slice() {
        [_] => true,
        [w1, w2] => {
            let s1 = orient_value(ps.point(*w1), ps.point(u), ps.point(v));
            let s2 = orient_value(ps.point(*w2), ps.point(u), ps.point(v));
            s1 * s2 < 0.0
        }
        _ => false,
    })
}

/// All empty-circumcircle triangles of a small point set.
#[derive(Debug, Clone, PartialEq)]
pub struct DelaunayOracle {
    /// Triples (ascending sorted-point indices) whose circumcircle has no
    /// point strictly inside.
    pub candidates: BTreeSet<[usize; 3]>,
    /// Triangle count of any triangulation of the set.
    pub expected_triangles: usize,
    /// False when cocircular points make several Delaunay triangulations
    /// valid; the candidates then describe the whole equivalence class.
    pub unique: bool,
    hull_area: f64,
}

impl DelaunayOracle {
    /// Whether `tris` is one of the Delaunay triangulations of the set.
    pub fn matches(&self, ps: &PointSet, tris: &[[usize; 3]]) -> bool {
        let set: BTreeSet<[usize; 3]> = tris
            .iter()
            .map(|t| {
                let mut s = *t;
                s.sort_unstable();
                s
            })
            .collect();
        if self.unique {
            return set == self.candidates;
        }
        if set.len() != tris.len() || set.len() != self.expected_triangles {
            return false;
        }
        if !set.is_subset(&self.candidates) {
            return false;
        }
        if !edges_well_formed(ps, &set) {
            return false;
        }
        let area: f64 = set.iter().map(|t| triangle_area(ps, t)).sum();
        (area - self.hull_area).abs() <= 1e-9 * self.hull_area
    }
}

/// Enumerates every triple and keeps those with an empty circumcircle.
pub fn brute_force_delaunay(ps: &PointSet) -> Result<DelaunayOracle> {
    let n = ps.len();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let hull = monotone_chain_hull(ps)?;
    let l = boundary_point_count(ps, &hull);
    let mut candidates = BTreeSet::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (a, b, c) = (ps.point(i), ps.point(j), ps.point(k));
                if orient_value(c, a, b) == 0.0 {
                    continue;
                }
                let empty = (0..n).filter(|&q| q != i && q != j && q != k).all(|q| {
                    incircle_det_oracle(ps.point(q), a, b, c)
                        .map(|v| v.sign != OracleSign::Inside)
                        .unwrap_or(false)
                });
                if empty {
                    candidates.insert([i, j, k]);
                }
            }
        }
    }
    let expected_triangles = 2 * n - l - 2;
    Ok(DelaunayOracle {
        unique: candidates.len() == expected_triangles,
        candidates,
        expected_triangles,
        hull_area: polygon_area(ps, &hull),
    })
}

/// Four points and their indices demonstrating a failed property.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub points: Vec<Point2>,
    pub indices: Vec<usize>,
}

/// Outcome of one property check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub property: String,
    pub passed: bool,
    pub seed: u64,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
    pub measured: Option<i64>,
    pub expected: Option<i64>,
}

impl VerificationReport {
    pub fn pass(property: impl Into<String>) -> Self {
        VerificationReport {
            property: property.into(),
            passed: true,
            seed: 0,
            detail: String::new(),
            counterexample: None,
            measured: None,
            expected: None,
        }
    }

    pub fn fail(property: impl Into<String>, detail: impl Into<String>) -> Self {
        VerificationReport {
            passed: false,
            detail: detail.into(),
            ..Self::pass(property)
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_counterexample(mut self, points: Vec<Point2>, indices: Vec<usize>) -> Self {
        self.counterexample = Some(Counterexample { points, indices });
        self
    }

    pub fn with_counts(mut self, measured: i64, expected: i64) -> Self {
        self.measured = Some(measured);
        self.expected = Some(expected);
        self
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "PROP {} {} seed={}", self.property, status, self.seed)?;
        if let (Some(m), Some(e)) = (self.measured, self.expected) {
            write!(f, " measured={m} expected={e}")?;
        }
        if !self.detail.is_empty() {
            write!(f, " {}", self.detail)?;
        }
        if let Some(cx) = &self.counterexample {
            let idx: Vec<String> = cx.indices.iter().map(|i| i.to_string()).collect();
            let pts: Vec<String> = cx
                .points
                .iter()
                .map(|p| format!("{},{}", p.x, p.y))
                .collect();
            write!(f, " indices={} points={}", idx.join(","), pts.join(";"))?;
        }
        Ok(())
    }
}

/// Expected orientation-test count of a hull run whose initial hull was a
/// triangle: `3n - 2*k1 - l + h + 1`.
pub fn expected_to_left_calls(counters: &OpCounters, n: usize) -> i64 {
    3 * n as i64 - 2 * counters.k1 as i64 - counters.l as i64 + counters.h as i64 + 1
}

/// Expected orientation-test count when collinear boundary points are kept,
/// so the initial chain holds all `k1` points: `3n - k1 - l + h - 2`.
pub fn expected_retained_to_left_calls(counters: &OpCounters, n: usize) -> i64 {
    3 * n as i64 - counters.k1 as i64 - counters.l as i64 + counters.h as i64 - 2
}

/// Count identity for a triangulation run, whose hull keeps collinear points.
pub fn audit_retained_counts(run: &OpCounters, n: usize) -> VerificationReport {
    let measured = run.to_left_calls as i64;
    let expected = expected_retained_to_left_calls(run, n);
    let name = "retained_to_left_count_identity";
    if measured == expected {
        VerificationReport::pass(name).with_counts(measured, expected)
    } else {
        VerificationReport::fail(name, format!("k1={} l={} h={}", run.k1, run.l, run.h))
            .with_counts(measured, expected)
    }
}

/// Checks the exact orientation-test identity for a hull run over `n`
/// distinct points, and the shorter form when the first three points
/// already formed a triangle.
pub fn audit_counts(run: &OpCounters, n: usize) -> VerificationReport {
    let measured = run.to_left_calls as i64;
    let expected = expected_to_left_calls(run, n);
    let name = "to_left_count_identity";
    if measured != expected {
        return VerificationReport::fail(name, format!("k1={} l={} h={}", run.k1, run.l, run.h))
            .with_counts(measured, expected);
    }
    if run.k1 == 3 {
        let short = 3 * n as i64 - run.l as i64 + run.h as i64 - 5;
        if measured != short {
            return VerificationReport::fail(name, "short form mismatch")
                .with_counts(measured, short);
        }
    }
    if run.h > n.saturating_sub(run.k1) {
        return VerificationReport::fail(name, format!("h={} exceeds n-k1", run.h))
            .with_counts(measured, expected);
    }
    VerificationReport::pass(name).with_counts(measured, expected)
}

/// Global empty-circumcircle check, `O(triangles * n)`.
pub fn check_empty_circumcircle(
    ps: &PointSet,
    tris: &[[usize; 3]],
    tolerance: f64,
) -> VerificationReport {
    let name = "empty_circumcircle";
    for t in tris {
        let (a, b, c) = (ps.point(t[0]), ps.point(t[1]), ps.point(t[2]));
        for q in 0..ps.len() {
            if t.contains(&q) {
                continue;
            }
            match incircle_det_oracle_tol(ps.point(q), a, b, c, tolerance) {
                Ok(v) if v.sign == OracleSign::Inside => {
                    return VerificationReport::fail(name, format!("relative={:e}", v.relative))
                        .with_counterexample(
                            vec![a, b, c, ps.point(q)],
                            vec![t[0], t[1], t[2], q],
                        );
                }
                Ok(_) => {}
                Err(_) => {
                    return VerificationReport::fail(name, "degenerate triangle")
                        .with_counterexample(vec![a, b, c], t.to_vec());
                }
            }
        }
    }
    VerificationReport::pass(name).with_counts(tris.len() as i64, tris.len() as i64)
}

/// Local check: across every interior edge, the opposite vertex is not inside
/// the neighbouring circumcircle. Equivalent to the global check for a valid
/// triangulation, in `O(edges)`.
pub fn check_locally_delaunay(
    ps: &PointSet,
    map: &TriangulationMap,
    tolerance: f64,
) -> VerificationReport {
    let name = "locally_delaunay";
    for (key, opp) in map.iter() {
        if let [u, w] = opp {
            let (a, b, c) = (ps.point(key.lo()), ps.point(key.hi()), ps.point(*u));
            match incircle_det_oracle_tol(ps.point(*w), a, b, c, tolerance) {
                Ok(v) if v.sign != OracleSign::Inside => {}
                _ => {
                    return VerificationReport::fail(name, format!("edge {key}"))
                        .with_counterexample(
                            vec![a, b, c, ps.point(*w)],
                            vec![key.lo(), key.hi(), *u, *w],
                        );
                }
            }
        }
    }
    VerificationReport::pass(name)
}

/// Triangle and edge counts match `2n - l - 2` and `3n - l - 3`.
pub fn check_euler_counts(
    map: &TriangulationMap,
    n: usize,
    hull: &HullChain,
) -> VerificationReport {
    let l = hull.len();
    let t = map.triangle_count() as i64;
    let e = map.len() as i64;
    let (te, ee) = (2 * n as i64 - l as i64 - 2, 3 * n as i64 - l as i64 - 3);
    if t != te {
        return VerificationReport::fail("euler_counts", format!("triangles with l={l}"))
            .with_counts(t, te);
    }
    if e != ee {
        return VerificationReport::fail("euler_counts", format!("edges with l={l}"))
            .with_counts(e, ee);
    }
    VerificationReport::pass("euler_counts").with_counts(t, te)
}

/// Canonical hull of the construction equals the monotone-chain hull.
pub fn check_hull_baseline(ps: &PointSet, hull: &HullChain) -> VerificationReport {
    let name = "hull_baseline";
    let baseline = match monotone_chain_hull(ps) {
        Ok(h) => h,
        Err(e) => return VerificationReport::fail(name, e.to_string()),
    };
    let ours = canonical_hull(ps, &hull.canonical());
    if ours != canonical_hull(ps, &baseline) {
        return VerificationReport::fail(name, format!("got {ours:?} want {baseline:?}"));
    }
    if !hull_contains_all(ps, &hull.canonical()) {
        return VerificationReport::fail(name, "point outside hull");
    }
    VerificationReport::pass(name)
}

/// Runs every applicable check on a finished triangulation.
pub fn verify_triangulation(t: &Triangulation, seed: u64) -> Vec<VerificationReport> {
    let ps = &t.points;
    let mut reports = Vec::new();
    reports.push(
        match t
            .map
            .check_consistency(ps)
            .and_then(|_| t.map.check_boundary(&t.hull))
        {
            Ok(()) => VerificationReport::pass("map_consistency"),
            Err(e) => VerificationReport::fail("map_consistency", e.to_string()),
        },
    );
    reports.push(check_euler_counts(&t.map, ps.len(), &t.hull));
    reports.push(if ps.len() <= 2000 {
        check_empty_circumcircle(ps, &t.map.triangles(), 1e-9)
    } else {
        check_locally_delaunay(ps, &t.map, 1e-9)
    });
    reports.push(check_hull_baseline(ps, &t.hull));
    reports.push(audit_retained_counts(&t.counters, ps.len()));
    if ps.len() <= BRUTE_FORCE_LIMIT {
        reports.push(match brute_force_delaunay(ps) {
            Ok(oracle) if oracle.matches(ps, &t.map.triangles()) => {
                VerificationReport::pass("brute_force_delaunay")
            }
            Ok(_) => VerificationReport::fail("brute_force_delaunay", "triangle sets differ"),
            Err(e) => VerificationReport::fail("brute_force_delaunay", e.to_string()),
        });
    }
    reports.push(if t.counters.opposite_side_violations == 0 {
        VerificationReport::pass("opposite_side")
    } else {
        VerificationReport::fail("opposite_side", "in-circle query on the wrong side")
            .with_counts(t.counters.opposite_side_violations as i64, 0)
    });
    for r in &mut reports {
        r.seed = seed;
        if !r.passed && r.counterexample.is_none() {
            r.counterexample = Some(Counterexample {
                points: ps.points().to_vec(),
                indices: Vec::new(),
            });
        }
    }
    reports
}
