//! Convex hull by sorted incremental insertion.
//!
//! Points are inserted in lexicographic order, so every new point lies
//! outside the current hull and to the right of the previously inserted
//! (rightmost) vertex. The tangent points are found by walking from that
//! vertex: clockwise for the lower tangent, counterclockwise for the upper.
//!
//! The hull ring is kept rotated so that the rightmost vertex is always the
//! last element. The lower walk then only touches the back of the ring and
//! the upper walk only the front, which makes insertion amortized O(1).

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::geometry::{OpCounters, Orientation, Point2};

/// Lexicographically sorted, duplicate-free points with a map back to the
/// caller's original indexing.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point2>,
    original_index: Vec<usize>,
}

impl PointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point2 {
        self.points[i]
    }

    /// Input position of the point stored at sorted position `i`.
    pub fn original_index(&self, i: usize) -> usize {
        self.original_index[i]
    }

    pub fn original_indices(&self) -> &[usize] {
        &self.original_index
    }
}

/// Sorts points lexicographically and collapses exact duplicates, keeping the
/// first occurrence's original index.
pub fn sort_points(raw: &[Point2]) -> Result<PointSet> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(index) = raw.iter().position(|p| !p.is_finite()) {
        return Err(Error::NonFiniteCoordinate { index });
    }
    let normalized: Vec<Point2> = raw.iter().map(|p| p.normalized()).collect();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    // stable, so equal points keep ascending original index
    order.sort_by(|&a, &b| normalized[a].lex_cmp(&normalized[b]));
    order.dedup_by(|later, earlier| normalized[*later] == normalized[*earlier]);

    Ok(PointSet {
        points: order.iter().map(|&i| normalized[i]).collect(),
        original_index: order,
    })
}

/// How collinear boundary vertices are treated during tangent search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CollinearPolicy {
    /// An edge collinear with the new point counts as visible, so the farther
    /// collinear point becomes the tangent point and the nearer one is
    /// removed. The initial hull is a plain triangle. Hull vertices are
    /// always strict corners.
    Drop,
    /// An edge collinear with the new point is not visible. Points lying on a
    /// hull edge stay in the chain, as a triangulation needs them.
    Retain,
}

impl CollinearPolicy {
    #[inline]
    fn visible(self, side: Orientation) -> bool {
        match self {
            CollinearPolicy::Drop => side != Orientation::Left,
            CollinearPolicy::Retain => side == Orientation::Right,
        }
    }
}

/// Counterclockwise cycle of [`PointSet`] indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullChain {
    /// Rotated so that the most recently inserted point is last.
    ring: VecDeque<usize>,
    degenerate: bool,
}

impl HullChain {
    pub fn len(&self) -> usize {
        self.ring.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ring.is_empty()
    }

    /// Set when the input was all collinear and the chain holds only the
    /// extreme points.
    pub fn is_degenerate(&self) -> bool {
        self.degenerate
    }

    /// Position of the rightmost (most recently inserted) vertex.
    pub fn xmax_position(&self) -> usize {
        self.ring.len() - 1
    }

    /// Point index of the rightmost vertex.
    pub fn xmax(&self) -> usize {
        *self.ring.back().expect("hull chain is never empty")
    }

    /// Point index at ring position `pos`, taken cyclically.
    pub fn vertex(&self, pos: usize) -> usize {
        self.ring[pos % self.ring.len()]
    }

    /// Vertices in ring order (counterclockwise, ending at the rightmost one).
    pub fn indices(&self) -> Vec<usize> {
        self.ring.iter().copied().collect()
    }

    /// Vertices counterclockwise starting from the smallest point index.
    pub fn canonical(&self) -> Vec<usize> {
        let start = self
            .ring
            .iter()
            .enumerate()
            .min_by_key(|(_, &v)| v)
            .map(|(pos, _)| pos)
            .unwrap_or(0);
        (0..self.ring.len())
            .map(|k| self.vertex(start + k))
            .collect()
    }

    pub(crate) fn degenerate_from(extremes: Vec<usize>) -> Self {
        HullChain {
            ring: extremes.into(),
            degenerate: true,
        }
    }
}

/// Result of a tangent search, in ring positions.
///
/// The visible chain runs counterclockwise from `lower` through the rightmost
/// vertex to `upper`. `upper` is an unwrapped position: values at or past
/// the ring length refer to the front of the ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TangentPair {
    pub lower: usize,
    pub upper: usize,
    /// Whether the edge from the new point to the rightmost vertex was not the
    /// lower tangent (the indicator tallied into `h`).
    pub xmax_not_lower: bool,
}

impl TangentPair {
    /// Number of hull vertices strictly between the tangent points.
    pub fn removed(&self) -> usize {
        self.upper - self.lower - 1
    }
}

/// Finds the first triangle among the sorted points.
///
/// Tests `P[i]` against the line `P[0] -> P[i-1]` for i = 2, 3, ... until a
/// point leaves the line, using exactly `k1 - 2` orientation tests. Returns
/// the initial hull and `k1`, the number of points consumed.
pub fn build_initial_triangle(
    ps: &PointSet,
    policy: CollinearPolicy,
    counters: &mut OpCounters,
) -> Result<(HullChain, usize)> {
    let n = ps.len();
    if n < 3 {
        return Err(Error::TooFewPoints(n));
    }
    let first = ps.point(0);
    let (side, k1) = (2..n)
        .find_map(
            |i| match counters.to_left(ps.point(i), first, ps.point(i - 1)) {
                Orientation::Collinear => None,
                side => Some((side, i + 1)),
            },
        )
        .ok_or(Error::AllCollinear(n))?;

    let apex = k1 - 1;
    let ring: VecDeque<usize> = match (policy, side) {
        (CollinearPolicy::Drop, Orientation::Left) => [0, k1 - 2, apex].into(),
        (CollinearPolicy::Drop, _) => [k1 - 2, 0, apex].into(),
        (CollinearPolicy::Retain, Orientation::Left) => (0..=apex).collect(),
        (CollinearPolicy::Retain, _) => (0..apex).rev().chain([apex]).collect(),
    };
    counters.k1 = k1;
    Ok((
        HullChain {
            ring,
            degenerate: false,
        },
        k1,
    ))
}

/// Walks the hull from its rightmost vertex to the two tangent points of `p`.
///
/// `p` must be lexicographically greater than every hull vertex. One
/// orientation test decides whether the rightmost vertex is already the
/// lower tangent; if not, the walk proceeds clockwise until the lower
/// tangent, and in either case counterclockwise until the upper tangent.
/// Each vertex skipped costs exactly one test.
pub fn find_tangents(
    ps: &PointSet,
    hull: &HullChain,
    p: Point2,
    policy: CollinearPolicy,
    counters: &mut OpCounters,
) -> Result<TangentPair> {
    let m = hull.len();
    let at = |pos: usize| ps.point(hull.ring[pos % m]);
    let xmax = m - 1;
    // `pos + m - 1` is pos - 1 taken cyclically
    let lower_edge_visible = |counters: &mut OpCounters, pos: usize| {
        policy.visible(counters.to_left(p, at(pos + m - 1), at(pos)))
    };

    let mut lower = xmax;
    let xmax_not_lower = lower_edge_visible(counters, lower);
    let mut upper = if xmax_not_lower {
        loop {
            if lower == 0 {
                return Err(Error::TangentSearch(hull.xmax()));
            }
            lower -= 1;
            if !lower_edge_visible(counters, lower) {
                break;
            }
        }
        xmax
    } else {
        xmax + 1
    };
    while policy.visible(counters.to_left(p, at(upper), at(upper + 1))) {
        upper += 1;
        if upper >= lower + m {
            return Err(Error::TangentSearch(hull.xmax()));
        }
    }
    Ok(TangentPair {
        lower,
        upper,
        xmax_not_lower,
    })
}

/// Point indices of the visible chain from the upper tangent clockwise to
/// the lower tangent, both included.
pub(crate) fn visible_chain(hull: &HullChain, tangents: &TangentPair) -> Vec<usize> {
    (tangents.lower..=tangents.upper)
        .rev()
        .map(|pos| hull.vertex(pos))
        .collect()
}

/// Replaces the vertices strictly between the tangents with `p_index`, which
/// becomes the new rightmost vertex. Returns the removed point indices.
pub fn add_point_to_hull(
    hull: &mut HullChain,
    p_index: usize,
    tangents: &TangentPair,
) -> Vec<usize> {
    let m = hull.len();
    let xmax = m - 1;
    let mut removed = Vec::with_capacity(tangents.removed());
    if tangents.upper == xmax {
        // rightmost vertex is the upper tangent and survives
        let keep = hull.ring.pop_back().expect("non-empty ring");
        for _ in tangents.lower + 1..xmax {
            removed.push(hull.ring.pop_back().expect("within ring"));
        }
        hull.ring.push_front(keep);
    } else {
        for _ in tangents.lower + 1..m {
            removed.push(hull.ring.pop_back().expect("within ring"));
        }
        for _ in m..tangents.upper {
            removed.push(hull.ring.pop_front().expect("within ring"));
        }
    }
    hull.ring.push_back(p_index);
    removed
}

/// A finished hull together with its operation counts.
#[derive(Debug, Clone)]
pub struct Hull {
    pub points: PointSet,
    pub chain: HullChain,
    pub counters: OpCounters,
}

impl Hull {
    /// Hull vertices in the caller's original indexing, counterclockwise from
    /// the lexicographically smallest point.
    pub fn original_cycle(&self) -> Vec<usize> {
        self.chain
            .canonical()
            .into_iter()
            .map(|i| self.points.original_index(i))
            .collect()
    }
}

/// Runs the sorted incremental hull over already sorted points.
pub fn hull_of_sorted(ps: &PointSet, policy: CollinearPolicy) -> Result<(HullChain, OpCounters)> {
    let mut counters = OpCounters::new();
    let (mut chain, k1) = build_initial_triangle(ps, policy, &mut counters)?;
    let initial_len = chain.len();
    for i in k1..ps.len() {
        let tangents = find_tangents(ps, &chain, ps.point(i), policy, &mut counters)?;
        if tangents.xmax_not_lower {
            counters.h += 1;
        }
        add_point_to_hull(&mut chain, i, &tangents);
    }
    counters.l = chain.len();
    counters.delta_l = chain.len() as i64 - initial_len as i64;
    Ok((chain, counters))
}

/// Convex hull of arbitrary input points, with strictly convex vertices.
///
/// Collinear input yields a degenerate chain holding the two extreme points
/// (one point if all inputs coincide).
pub fn convex_hull(raw: &[Point2]) -> Result<Hull> {
    let points = sort_points(raw)?;
    match hull_of_sorted(&points, CollinearPolicy::Drop) {
        Ok((chain, counters)) => Ok(Hull {
            points,
            chain,
            counters,
        }),
        Err(Error::AllCollinear(_)) | Err(Error::TooFewPoints(_)) => {
            let n = points.len();
            let extremes = if n == 1 { vec![0] } else { vec![0, n - 1] };
            let counters = OpCounters {
                to_left_calls: n.saturating_sub(2) as u64,
                l: extremes.len(),
                ..OpCounters::default()
            };
            Ok(Hull {
                points,
                chain: HullChain::degenerate_from(extremes),
                counters,
            })
        }
        Err(e) => Err(e),
    }
}
