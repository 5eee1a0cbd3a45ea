//! Points, the orientation predicate and the angle-sum in-circle test.
//!
//! Both predicates run in plain double precision. Every construction routine
//! calls them through an [`OpCounters`] so the number of evaluations can be
//! audited per run.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Sub;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    /// Lexicographic order: by x, then by y. Coordinates must be finite.
    pub fn lex_cmp(&self, other: &Point2) -> Ordering {
        self.x
            .total_cmp(&other.x)
            .then_with(|| self.y.total_cmp(&other.y))
    }

    /// Maps `-0.0` to `0.0` so that `total_cmp` agrees with `==`.
    pub(crate) fn normalized(self) -> Point2 {
        Point2::new(self.x + 0.0, self.y + 0.0)
    }
}

impl Sub for Point2 {
    type Output = Point2;

    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl From<(f64, f64)> for Point2 {
    fn from((x, y): (f64, f64)) -> Self {
        Point2::new(x, y)
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Point2::new(x, y)
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Side of a directed line on which a point lies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Collinear,
    Right,
}

impl Orientation {
    pub fn from_sign(value: f64) -> Self {
        if value > 0.0 {
            Orientation::Left
        } else if value < 0.0 {
            Orientation::Right
        } else {
            Orientation::Collinear
        }
    }

    pub fn reversed(self) -> Self {
        match self {
            Orientation::Left => Orientation::Right,
            Orientation::Right => Orientation::Left,
            Orientation::Collinear => Orientation::Collinear,
        }
    }

    pub fn is_left(self) -> bool {
        self == Orientation::Left
    }

    pub fn is_right(self) -> bool {
        self == Orientation::Right
    }
}

/// Twice the signed area of `(u, v, p)`; positive when `p` is left of `u -> v`.
#[inline]
pub fn orient_value(p: Point2, u: Point2, v: Point2) -> f64 {
    (v - u).cross(p - u)
}

/// Which side of the directed line `u -> v` the point `p` lies on.
#[inline]
pub fn to_left(p: Point2, u: Point2, v: Point2) -> Orientation {
    Orientation::from_sign(orient_value(p, u, v))
}

/// How [`in_circle_opposite`] reached its answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InCircleDecision {
    /// Both cosine numerators non-negative: angle sum at most pi.
    FastOutside,
    /// Both cosine numerators negative: angle sum above pi.
    FastInside,
    /// Mixed signs, settled by comparing squared magnitudes.
    Squared(bool),
}

impl InCircleDecision {
    pub fn inside(self) -> bool {
        match self {
            InCircleDecision::FastOutside => false,
            InCircleDecision::FastInside => true,
            InCircleDecision::Squared(inside) => inside,
        }
    }
}

/// Angle-sum in-circle test with the decision path exposed.
///
/// `a` is the query point and `d` the vertex of triangle `bcd` opposite the
/// edge `bc`. With `a` and `d` on opposite sides of `bc`, `a` is strictly
/// inside the circumcircle exactly when the angles at `a` and `d` sum to more
/// than pi, i.e. when `|BD||CD| (AB.AC) + |AB||AC| (BD.CD) < 0`. The square
/// roots are avoided by checking signs first and squaring only when the two
/// terms disagree.
pub fn in_circle_decision(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<InCircleDecision> {
    if b == c {
        return Err(Error::DegenerateEdge);
    }
    let ab = b - a;
    let ac = c - a;
    let bd = d - b;
    let cd = d - c;
    let s1 = ab.dot(ac);
    let s2 = bd.dot(cd);

    let decision = match (s1 < 0.0, s2 < 0.0) {
        (false, false) => InCircleDecision::FastOutside,
        (true, true) => InCircleDecision::FastInside,
        // |AB||AC| s2 < |BD||CD| (-s1)
        (true, false) => InCircleDecision::Squared(
            ab.norm_squared() * ac.norm_squared() * s2 * s2
                < bd.norm_squared() * cd.norm_squared() * s1 * s1,
        ),
        // |BD||CD| s1 < |AB||AC| (-s2)
        (false, true) => InCircleDecision::Squared(
            bd.norm_squared() * cd.norm_squared() * s1 * s1
                < ab.norm_squared() * ac.norm_squared() * s2 * s2,
        ),
    };
    Ok(decision)
}

/// True iff `a` lies strictly inside the circumcircle of `bcd`, given that `a`
/// and `d` are on opposite sides of line `bc`. Cocircular points are outside.
pub fn in_circle_opposite(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<bool> {
    in_circle_decision(a, b, c, d).map(InCircleDecision::inside)
}

/// Same as [`in_circle_opposite`] but first checks that `a` and `d` lie
/// strictly on opposite sides of `bc`.
pub fn in_circle_opposite_checked(a: Point2, b: Point2, c: Point2, d: Point2) -> Result<bool> {
    if b == c {
        return Err(Error::DegenerateEdge);
    }
    if !strictly_opposite(a, d, b, c) {
        return Err(Error::OppositeSideViolation);
    }
    in_circle_opposite(a, b, c, d)
}

/// Whether `a` and `d` lie strictly on opposite sides of the line through `b`, `c`.
pub fn strictly_opposite(a: Point2, d: Point2, b: Point2, c: Point2) -> bool {
    let sa = to_left(a, b, c);
    let sd = to_left(d, b, c);
    (sa.is_left() && sd.is_right()) || (sa.is_right() && sd.is_left())
}

/// Left-hand side of the angle-sum inequality, with square roots. Negative
/// means inside. Used to cross-check the square-root-free path.
pub fn angle_cosine_sum(a: Point2, b: Point2, c: Point2, d: Point2) -> f64 {
    let ab = b - a;
    let ac = c - a;
    let bd = d - b;
    let cd = d - c;
    bd.norm_squared().sqrt() * cd.norm_squared().sqrt() * ab.dot(ac)
        + ab.norm_squared().sqrt() * ac.norm_squared().sqrt() * bd.dot(cd)
}

/// Per-run tallies of predicate evaluations and hull bookkeeping.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounters {
    pub to_left_calls: u64,
    pub in_circle_calls: u64,
    /// Points consumed before the first non-degenerate triangle.
    pub k1: usize,
    /// Insertions where the edge to the previous rightmost point was not the
    /// lower tangent.
    pub h: usize,
    /// Final hull size minus initial hull size.
    pub delta_l: i64,
    /// Final hull size.
    pub l: usize,
    /// In-circle queries whose points violated the opposite-side precondition.
    /// Only tallied when opposite-side checking is enabled.
    pub opposite_side_violations: u64,
}

impl OpCounters {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn to_left(&mut self, p: Point2, u: Point2, v: Point2) -> Orientation {
        self.to_left_calls += 1;
        to_left(p, u, v)
    }

    #[inline]
    pub fn in_circle(&mut self, a: Point2, b: Point2, c: Point2, d: Point2) -> Result<bool> {
        self.in_circle_calls += 1;
        in_circle_opposite(a, b, c, d)
    }
}

impl fmt::Display for OpCounters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "to_left_calls={} in_circle_calls={} k1={} h={} delta_l={} l={}",
            self.to_left_calls, self.in_circle_calls, self.k1, self.h, self.delta_l, self.l
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{incircle_det_oracle, OracleSign};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn to_left_examples() {
        let u = p(0.0, 0.0);
        let v = p(1.0, 0.0);
        assert_eq!(to_left(p(0.0, 1.0), u, v), Orientation::Left);
        assert_eq!(to_left(p(0.5, 0.0), u, v), Orientation::Collinear);
        assert_eq!(to_left(p(0.0, -1.0), u, v), Orientation::Right);
    }

    #[test]
    fn counted_to_left_increments() {
        let mut c = OpCounters::new();
        c.to_left(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0));
        c.to_left(p(0.0, 1.0), p(0.0, 0.0), p(1.0, 0.0));
        assert_eq!(c.to_left_calls, 2);
        assert_eq!(c.in_circle_calls, 0);
    }

    #[test]
    fn in_circle_examples() {
        // circumcircle of bcd: center (1, 0), radius 1
        let (b, c, d) = (p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0));
        let cases = [
            (p(1.0, -0.5), true),
            (p(1.0, -2.0), false),
            (p(1.0, -1.0), false),
        ];
        for (a, expected) in cases {
            assert_eq!(in_circle_opposite(a, b, c, d).unwrap(), expected, "a = {a}");
        }
        // the oracle agrees, and vanishes on the circle
        assert_eq!(
            incircle_det_oracle(p(1.0, -0.5), b, c, d).unwrap().sign,
            OracleSign::Inside
        );
        assert_eq!(
            incircle_det_oracle(p(1.0, -2.0), b, c, d).unwrap().sign,
            OracleSign::Outside
        );
        let on = incircle_det_oracle(p(1.0, -1.0), b, c, d).unwrap();
        assert_eq!(on.determinant, 0.0);
        assert_eq!(on.sign, OracleSign::Cocircular);
    }

    #[test]
    fn in_circle_errors() {
        let b = p(1.0, 1.0);
        assert_eq!(
            in_circle_opposite(p(0.0, 0.0), b, b, p(2.0, 2.0)),
            Err(Error::DegenerateEdge)
        );
        // a and d on the same side
        assert_eq!(
            in_circle_opposite_checked(p(1.0, 0.5), p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0)),
            Err(Error::OppositeSideViolation)
        );
        assert_eq!(
            in_circle_opposite_checked(p(1.0, -0.5), p(0.0, 0.0), p(2.0, 0.0), p(1.0, 1.0)),
            Ok(true)
        );
    }

    #[test]
    fn fast_path_taken_for_obvious_cases() {
        let (b, c, d) = (p(0.0, 0.0), p(2.0, 0.0), p(1.0, 0.2));
        // flat bcd: obtuse at d, query close to the edge is obtuse too
        assert_eq!(
            in_circle_decision(p(1.0, -0.1), b, c, d).unwrap(),
            InCircleDecision::FastInside
        );
        let d = p(1.0, 5.0);
        assert_eq!(
            in_circle_decision(p(1.0, -5.0), b, c, d).unwrap(),
            InCircleDecision::FastOutside
        );
    }

    #[test]
    fn antisymmetry_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..100_000 {
            let pt =
                |rng: &mut ChaCha8Rng| p(rng.random_range(-1e3..1e3), rng.random_range(-1e3..1e3));
            let (a, u, v) = (pt(&mut rng), pt(&mut rng), pt(&mut rng));
            let fwd = to_left(a, u, v);
            let back = to_left(a, v, u);
            assert_eq!(fwd == Orientation::Left, back == Orientation::Right);
            assert_eq!(fwd.reversed(), back);
        }
    }

    fn point() -> impl Strategy<Value = Point2> {
        (-1e3..1e3f64, -1e3..1e3f64).prop_map(|(x, y)| p(x, y))
    }

    fn rigid(q: Point2, angle: f64, shift: Point2) -> Point2 {
        let (s, c) = angle.sin_cos();
        p(c * q.x - s * q.y + shift.x, s * q.x + c * q.y + shift.y)
    }

    /// Mirrors `a` across line bc when it sits on the same side as `d`.
    fn across(a: Point2, d: Point2, b: Point2, c: Point2) -> Point2 {
        if orient_value(a, b, c) * orient_value(d, b, c) <= 0.0 {
            return a;
        }
        let dir = c - b;
        let t = (a - b).dot(dir) / dir.norm_squared();
        let foot = p(b.x + t * dir.x, b.y + t * dir.y);
        p(2.0 * foot.x - a.x, 2.0 * foot.y - a.y)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn to_left_invariant_under_rigid_motion(
            a in point(), u in point(), v in point(),
            angle in 0.0..std::f64::consts::TAU, shift in point(),
        ) {
            let before = orient_value(a, u, v);
            let scale = (u - a).norm_squared().max((v - a).norm_squared()).max((v - u).norm_squared());
            prop_assume!(before.abs() > 1e-9 * scale);
            let moved = to_left(rigid(a, angle, shift), rigid(u, angle, shift), rigid(v, angle, shift));
            prop_assert_eq!(moved, Orientation::from_sign(before));
        }

        #[test]
        fn in_circle_invariant_under_rigid_motion(
            b in point(), c in point(), d in point(), a in point(),
            angle in 0.0..std::f64::consts::TAU, shift in point(),
        ) {
            prop_assume!(b != c);
            let a = across(a, d, b, c);
            prop_assume!(strictly_opposite(a, d, b, c));
            let oracle = incircle_det_oracle(a, b, c, d);
            prop_assume!(matches!(oracle, Ok(v) if v.relative > 1e-9));
            let before = in_circle_opposite(a, b, c, d).unwrap();
            let m = |q| rigid(q, angle, shift);
            let after = in_circle_opposite(m(a), m(b), m(c), m(d)).unwrap();
            prop_assert_eq!(before, after);
        }

        #[test]
        fn fast_path_matches_full_evaluation(b in point(), c in point(), d in point(), a in point()) {
            prop_assume!(b != c);
            let a = across(a, d, b, c);
            prop_assume!(strictly_opposite(a, d, b, c));
            match in_circle_decision(a, b, c, d).unwrap() {
                InCircleDecision::Squared(_) => {}
                fast => prop_assert_eq!(fast.inside(), angle_cosine_sum(a, b, c, d) < 0.0),
            }
        }
    }
}
