//! Delaunay triangulation by sorted incremental insertion.
//!
//! Each new point lies outside the current triangulation. Its visible
//! boundary chain is found with the hull tangent walk, then eroded: a
//! boundary edge whose inner triangle has the new point in its circumcircle
//! is deleted, exposing the two inner edges of that triangle. When no edge
//! can be eroded further, every exposed vertex is connected to the new point.
//!
//! The triangulation is stored as an edge map from unordered vertex pairs to
//! the one or two vertices opposite that edge.

use std::fmt;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::geometry::{strictly_opposite, OpCounters, Point2};
use crate::hull::{
    add_point_to_hull, build_initial_triangle, find_tangents, sort_points, visible_chain,
    CollinearPolicy, HullChain, PointSet, TangentPair,
};

/// Unordered pair of point indices, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey {
    lo: usize,
    hi: usize,
}

impl EdgeKey {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b, "edge endpoints must differ");
        if a < b {
            EdgeKey { lo: a, hi: b }
        } else {
            EdgeKey { lo: b, hi: a }
        }
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lo, self.hi)
    }
}

/// The one or two vertices opposite an edge.
#[derive(Debug, Clone, Copy)]
pub struct Opposites {
    slots: [usize; 2],
    len: u8,
}

impl Opposites {
    fn single(v: usize) -> Self {
        Opposites {
            slots: [v, usize::MAX],
            len: 1,
        }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.slots[..self.len as usize]
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.as_slice().contains(&v)
    }

    fn push(&mut self, v: usize) -> bool {
        if self.len == 2 || self.contains(v) {
            return false;
        }
        self.slots[self.len as usize] = v;
        self.len += 1;
        true
    }

    fn remove(&mut self, v: usize) -> bool {
        match self.as_slice().iter().position(|&w| w == v) {
            Some(pos) => {
                if pos == 0 {
                    self.slots[0] = self.slots[1];
                }
                self.len -= 1;
                true
            }
            None => false,
        }
    }
}

impl PartialEq for Opposites {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.as_slice().iter().all(|&v| other.contains(v))
    }
}

impl Eq for Opposites {}

/// Edge map of a triangulation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TriangulationMap {
    edges: FxHashMap<EdgeKey, Opposites>,
}

impl TriangulationMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(edges: usize) -> Self {
        TriangulationMap {
            edges: FxHashMap::with_capacity_and_hasher(edges, Default::default()),
        }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn opposites(&self, key: EdgeKey) -> Option<&[usize]> {
        self.edges.get(&key).map(Opposites::as_slice)
    }

    pub fn contains_edge(&self, key: EdgeKey) -> bool {
        self.edges.contains_key(&key)
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeKey, &[usize])> + '_ {
        self.edges.iter().map(|(k, v)| (*k, v.as_slice()))
    }

    /// Edge keys in ascending order.
    pub fn sorted_edges(&self) -> Vec<EdgeKey> {
        let mut keys: Vec<EdgeKey> = self.edges.keys().copied().collect();
        keys.sort_unstable();
        keys
    }

    /// Triangles as ascending index triples, sorted.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        // each triangle is reported once, from its edge not containing the
        // largest vertex
        let mut tris: Vec<[usize; 3]> = self
            .iter()
            .flat_map(|(k, opp)| {
                opp.iter()
                    .filter(move |&&w| w > k.hi)
                    .map(move |&w| [k.lo, k.hi, w])
            })
            .collect();
        tris.sort_unstable();
        tris
    }

    pub fn triangle_count(&self) -> usize {
        self.iter()
            .map(|(k, opp)| opp.iter().filter(|&&w| w > k.hi).count())
            .sum()
    }

    /// Records `v` as opposite to `key`, creating the edge if needed.
    pub fn add_opposite(&mut self, key: EdgeKey, v: usize) -> Result<()> {
        if key.contains(v) {
            return Err(Error::MapInconsistency(key));
        }
        match self.edges.get_mut(&key) {
            Some(opp) => {
                if !opp.push(v) {
                    return Err(Error::MapInconsistency(key));
                }
            }
            None => {
                self.edges.insert(key, Opposites::single(v));
            }
        }
        Ok(())
    }

    pub fn insert_triangle(&mut self, a: usize, b: usize, c: usize) -> Result<()> {
        self.add_opposite(EdgeKey::new(a, b), c)?;
        self.add_opposite(EdgeKey::new(b, c), a)?;
        self.add_opposite(EdgeKey::new(a, c), b)
    }

    /// Drops `other` from the opposite list of `key`, removing the edge once
    /// no triangle uses it.
    fn detach(&mut self, key: EdgeKey, other: usize) -> Result<()> {
        let opp = self.edges.get_mut(&key).ok_or(Error::MissingEdge(key))?;
        if !opp.remove(other) {
            return Err(Error::MissingOpposite {
                edge: key,
                vertex: other,
            });
        }
        if opp.is_empty() {
            self.edges.remove(&key);
        }
        Ok(())
    }

    /// Deletes edge `key` together with its triangle on the `far` side.
    ///
    /// The two other edges of that triangle lose the endpoint of `key` they
    /// were opposite to, so each is left with only its remaining neighbour
    /// (or disappears if it had none). If `key` also bordered a triangle on
    /// the near side, that triangle is dissolved the same way.
    pub fn delete_edge(&mut self, key: EdgeKey, far: usize) -> Result<()> {
        let opp = *self.edges.get(&key).ok_or(Error::MissingEdge(key))?;
        if !opp.contains(far) {
            return Err(Error::MissingOpposite {
                edge: key,
                vertex: far,
            });
        }
        self.edges.remove(&key);
        for &w in opp.as_slice() {
            self.detach(EdgeKey::new(key.lo, w), key.hi)?;
            self.detach(EdgeKey::new(key.hi, w), key.lo)?;
        }
        Ok(())
    }

    /// Checks the structural invariants: opposite lists of length 1 or 2,
    /// non-degenerate triangles and mutual consistency of the three edges of
    /// every triangle.
    pub fn check_consistency(&self, ps: &PointSet) -> Result<()> {
        for (key, opp) in self.iter() {
            if opp.is_empty() || opp.len() > 2 {
                return Err(Error::MapInconsistency(key));
            }
            for &w in opp {
                if key.contains(w) || w >= ps.len() || key.hi >= ps.len() {
                    return Err(Error::MapInconsistency(key));
                }
                let (a, b, c) = (ps.point(key.lo), ps.point(key.hi), ps.point(w));
                if crate::geometry::orient_value(c, a, b) == 0.0 {
                    return Err(Error::MapInconsistency(key));
                }
                for (edge, expected) in [
                    (EdgeKey::new(key.lo, w), key.hi),
                    (EdgeKey::new(key.hi, w), key.lo),
                ] {
                    if !self.opposites(edge).is_some_and(|o| o.contains(&expected)) {
                        return Err(Error::MapInconsistency(edge));
                    }
                }
            }
            if let [u, w] = opp {
                if strictly_opposite(
                    ps.point(*u),
                    ps.point(*w),
                    ps.point(key.lo),
                    ps.point(key.hi),
                ) {
                    continue;
                }
                return Err(Error::MapInconsistency(key));
            }
        }
        Ok(())
    }

    /// Checks that exactly the hull edges have a single opposite vertex.
    pub fn check_boundary(&self, hull: &HullChain) -> Result<()> {
        let m = hull.len();
        let mut hull_edges = 0;
        for pos in 0..m {
            let key = EdgeKey::new(hull.vertex(pos), hull.vertex(pos + 1));
            match self.opposites(key) {
                Some([_]) => hull_edges += 1,
                _ => return Err(Error::MapInconsistency(key)),
            }
        }
        let single = self.iter().filter(|(_, opp)| opp.len() == 1).count();
        if single != hull_edges {
            let stray = self
                .iter()
                .find(|(k, opp)| opp.len() == 1 && !is_hull_edge(hull, *k))
                .map(|(k, _)| k)
                .unwrap_or(EdgeKey::new(0, 1));
            return Err(Error::MapInconsistency(stray));
        }
        Ok(())
    }
}

fn is_hull_edge(hull: &HullChain, key: EdgeKey) -> bool {
    (0..hull.len()).any(|pos| EdgeKey::new(hull.vertex(pos), hull.vertex(pos + 1)) == key)
}

/// Working state of one erosion pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErosionState {
    /// Boundary vertices still to be examined; the top is adjacent to `anchor`.
    pub stack: Vec<usize>,
    /// Vertices of the final boundary chain, from the upper tangent on.
    pub exposed: Vec<usize>,
    /// Last exposed vertex.
    pub anchor: usize,
    /// Edges deleted so far, in order.
    pub deleted: Vec<EdgeKey>,
}

impl ErosionState {
    /// State for the visible chain `upper, ..., lower` (clockwise).
    pub fn from_chain(chain: &[usize]) -> Self {
        let (&anchor, rest) = chain.split_first().expect("visible chain has two ends");
        ErosionState {
            stack: rest.iter().rev().copied().collect(),
            exposed: vec![anchor],
            anchor,
            deleted: Vec::new(),
        }
    }
}

/// Erodes the boundary in front of point `p_index` until no boundary edge's
/// inner triangle has the point in its circumcircle.
///
/// With `check_opposite`, every in-circle query first verifies that the new
/// point and the inner vertex are strictly on opposite sides of the edge,
/// and tallies violations in the counters.
pub fn erode_boundary(
    ps: &PointSet,
    tri: &mut TriangulationMap,
    mut state: ErosionState,
    p_index: usize,
    counters: &mut OpCounters,
    check_opposite: bool,
) -> Result<ErosionState> {
    let p = ps.point(p_index);
    while let Some(&top) = state.stack.last() {
        let key = EdgeKey::new(state.anchor, top);
        if let Some(opp) = tri.opposites(key) {
            let far = match opp {
                [far] => *far,
                _ => return Err(Error::MapInconsistency(key)),
            };
            let (b, c, d) = (ps.point(state.anchor), ps.point(top), ps.point(far));
            if check_opposite && !strictly_opposite(p, d, b, c) {
                counters.opposite_side_violations += 1;
            }
            if counters.in_circle(p, b, c, d)? {
                tri.delete_edge(key, far)?;
                state.deleted.push(key);
                state.stack.push(far);
                continue;
            }
        }
        state.anchor = state.stack.pop().expect("stack is non-empty");
        state.exposed.push(state.anchor);
    }
    Ok(state)
}

/// Fan over the collinear prefix `P[0..k1-1]` towards the apex `P[k1-1]`.
pub fn initial_fan(ps: &PointSet, k1: usize) -> Result<TriangulationMap> {
    if k1 < 3 || k1 > ps.len() {
        return Err(Error::TooFewPoints(k1));
    }
    let apex = k1 - 1;
    let mut tri = TriangulationMap::with_capacity(3 * ps.len());
    for j in 0..k1 - 2 {
        tri.insert_triangle(j, j + 1, apex)?;
    }
    Ok(tri)
}

/// What one insertion did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Insertion {
    pub point: usize,
    pub tangents: TangentPair,
    /// Boundary chain connected to the new point, upper tangent first.
    pub exposed: Vec<usize>,
    pub deleted: Vec<EdgeKey>,
    /// Hull vertices that became interior.
    pub interiorized: Vec<usize>,
}

/// Inserts point `p_index`, which must lie to the right of every point
/// inserted so far.
pub fn add_point_delaunay(
    ps: &PointSet,
    hull: &mut HullChain,
    tri: &mut TriangulationMap,
    p_index: usize,
    counters: &mut OpCounters,
    check_opposite: bool,
) -> Result<Insertion> {
    let tangents = find_tangents(
        ps,
        hull,
        ps.point(p_index),
        CollinearPolicy::Retain,
        counters,
    )?;
    if tangents.xmax_not_lower {
        counters.h += 1;
    }
    let chain = visible_chain(hull, &tangents);
    let state = erode_boundary(
        ps,
        tri,
        ErosionState::from_chain(&chain),
        p_index,
        counters,
        check_opposite,
    )?;

    let exposed = &state.exposed;
    for pair in exposed.windows(2) {
        let (u, w) = (pair[0], pair[1]);
        tri.add_opposite(EdgeKey::new(u, w), p_index)?;
        tri.add_opposite(EdgeKey::new(u, p_index), w)?;
        tri.add_opposite(EdgeKey::new(w, p_index), u)?;
    }
    let interiorized = add_point_to_hull(hull, p_index, &tangents);

    Ok(Insertion {
        point: p_index,
        tangents,
        exposed: state.exposed,
        deleted: state.deleted,
        interiorized,
    })
}

/// Step-wise construction over a sorted point set.
#[derive(Debug, Clone)]
pub struct Triangulator {
    points: PointSet,
    hull: HullChain,
    map: TriangulationMap,
    counters: OpCounters,
    next: usize,
    initial_hull_len: usize,
    check_opposite: bool,
}

impl Triangulator {
    /// Builds the initial fan. Fails on fewer than 3 points or collinear input.
    pub fn new(points: PointSet) -> Result<Self> {
        let mut counters = OpCounters::new();
        let (hull, k1) = build_initial_triangle(&points, CollinearPolicy::Retain, &mut counters)?;
        let map = initial_fan(&points, k1)?;
        let initial_hull_len = hull.len();
        let mut t = Triangulator {
            points,
            hull,
            map,
            counters,
            next: k1,
            initial_hull_len,
            check_opposite: cfg!(debug_assertions),
        };
        t.update_hull_counts();
        Ok(t)
    }

    /// Enables or disables the opposite-side check on in-circle queries.
    /// Defaults to on in debug builds.
    pub fn check_opposite_sides(mut self, on: bool) -> Self {
        self.check_opposite = on;
        self
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn map(&self) -> &TriangulationMap {
        &self.map
    }

    pub fn hull(&self) -> &HullChain {
        &self.hull
    }

    pub fn counters(&self) -> &OpCounters {
        &self.counters
    }

    /// Number of points in the current triangulation.
    pub fn inserted(&self) -> usize {
        self.next
    }

    pub fn is_finished(&self) -> bool {
        self.next >= self.points.len()
    }

    /// Inserts the next point, or returns `None` once all are in.
    pub fn insert_next(&mut self) -> Result<Option<Insertion>> {
        if self.is_finished() {
            return Ok(None);
        }
        let insertion = add_point_delaunay(
            &self.points,
            &mut self.hull,
            &mut self.map,
            self.next,
            &mut self.counters,
            self.check_opposite,
        )?;
        self.next += 1;
        self.update_hull_counts();
        Ok(Some(insertion))
    }

    pub fn run(mut self) -> Result<Triangulation> {
        while self.insert_next()?.is_some() {}
        Ok(Triangulation {
            points: self.points,
            map: self.map,
            hull: self.hull,
            counters: self.counters,
        })
    }

    fn update_hull_counts(&mut self) {
        self.counters.l = self.hull.len();
        self.counters.delta_l = self.hull.len() as i64 - self.initial_hull_len as i64;
    }
}

/// A finished triangulation with its sorted points, hull and counters.
#[derive(Debug, Clone)]
pub struct Triangulation {
    pub points: PointSet,
    pub map: TriangulationMap,
    pub hull: HullChain,
    pub counters: OpCounters,
}

impl Triangulation {
    /// Triangles in the caller's original indexing, each ascending, sorted.
    pub fn original_triangles(&self) -> Vec<[usize; 3]> {
        let mut tris: Vec<[usize; 3]> = self
            .map
            .triangles()
            .into_iter()
            .map(|t| {
                let mut o = t.map(|i| self.points.original_index(i));
                o.sort_unstable();
                o
            })
            .collect();
        tris.sort_unstable();
        tris
    }

    /// Edges in the caller's original indexing, each ascending, sorted.
    pub fn original_edges(&self) -> Vec<[usize; 2]> {
        let mut edges: Vec<[usize; 2]> = self
            .map
            .iter()
            .map(|(k, _)| {
                let (a, b) = (
                    self.points.original_index(k.lo),
                    self.points.original_index(k.hi),
                );
                [a.min(b), a.max(b)]
            })
            .collect();
        edges.sort_unstable();
        edges
    }
}

/// Delaunay triangulation of arbitrary input points.
pub fn triangulate(raw: &[Point2]) -> Result<Triangulation> {
    Triangulator::new(sort_points(raw)?)?.run()
}
