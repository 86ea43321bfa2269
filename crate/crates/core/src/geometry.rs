//! Exact geometric predicates over the three position spaces.
//!
//! Points live in the plane (rational coordinates), on a circle (rational
//! fraction of a full turn, counter-clockwise), or on a line (rational
//! coordinate). Circle points are purely combinatorial: side-of-chord and
//! crossing tests are phrased as circular-order tests, never via x/y
//! coordinates, so everything stays exact.
//!
//! Orientation convention for arcs: the *left* arc of a point is the
//! clockwise one (decreasing arc position), the *right* arc is
//! counter-clockwise. Results are symmetric under the opposite choice.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::rational::{mod1, rat, Rational};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Space {
    Plane,
    Circle,
    Line,
}

impl std::fmt::Display for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Space::Plane => write!(f, "plane"),
            Space::Circle => write!(f, "circle"),
            Space::Line => write!(f, "line"),
        }
    }
}

/// A point position in one of the three spaces.
///
/// All positions within one input sequence share the same variant. Circle
/// positions are kept reduced modulo 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Position {
    Plane { x: Rational, y: Rational },
    Circle { t: Rational },
    Line { x: Rational },
}

impl Position {
    pub fn plane(x: Rational, y: Rational) -> Self {
        Position::Plane { x, y }
    }

    /// A circle position; `t` is reduced into `[0, 1)`.
    pub fn circle(t: Rational) -> Self {
        Position::Circle { t: mod1(&t) }
    }

    pub fn line(x: Rational) -> Self {
        Position::Line { x }
    }

    pub fn space(&self) -> Space {
        match self {
            Position::Plane { .. } => Space::Plane,
            Position::Circle { .. } => Space::Circle,
            Position::Line { .. } => Space::Line,
        }
    }

    pub fn circle_t(&self) -> Result<&Rational> {
        match self {
            Position::Circle { t } => Ok(t),
            _ => Err(Error::MixedSpaces),
        }
    }

    pub fn line_x(&self) -> Result<&Rational> {
        match self {
            Position::Line { x } => Ok(x),
            _ => Err(Error::MixedSpaces),
        }
    }

    pub fn plane_xy(&self) -> Result<(&Rational, &Rational)> {
        match self {
            Position::Plane { x, y } => Ok((x, y)),
            _ => Err(Error::MixedSpaces),
        }
    }

    /// Human-readable form for error messages and transcripts.
    pub fn describe(&self) -> String {
        match self {
            Position::Plane { x, y } => format!("({x}, {y})"),
            Position::Circle { t } => format!("t={t}"),
            Position::Line { x } => format!("x={x}"),
        }
    }
}

/// A segment between two distinct positions in the same space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Position,
    pub b: Position,
}

impl Segment {
    pub fn new(a: Position, b: Position) -> Result<Self> {
        if a.space() != b.space() {
            return Err(Error::MixedSpaces);
        }
        if a == b {
            return Err(Error::DuplicateEndpoint);
        }
        Ok(Segment { a, b })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Ccw,
    Cw,
    Collinear,
}

impl Orientation {
    pub fn reversed(self) -> Self {
        match self {
            Orientation::Ccw => Orientation::Cw,
            Orientation::Cw => Orientation::Ccw,
            Orientation::Collinear => Orientation::Collinear,
        }
    }
}

/// Which of the two open arcs bounded by a chord contains a query point.
///
/// `ArcAb` is the counter-clockwise arc from the chord's first endpoint to its
/// second; `ArcBa` is the complementary arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcSide {
    ArcAb,
    ArcBa,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Ccw,
    Cw,
}

fn sign_to_orientation(s: i8) -> Orientation {
    match s {
        1 => Orientation::Ccw,
        -1 => Orientation::Cw,
        _ => Orientation::Collinear,
    }
}

/// Sign of the exact 2x2 determinant of `(b - a, c - a)`.
///
/// Fast path: when every numerator and denominator fits 31 bits (the common
/// case for grid-generated instances), the sign comes from 128-bit integer
/// arithmetic with one 256-bit magnitude comparison — still exact, no
/// rounding anywhere. Otherwise the products are formed over BigInt.
fn cross_sign(
    ax: &Rational,
    ay: &Rational,
    bx: &Rational,
    by: &Rational,
    cx: &Rational,
    cy: &Rational,
) -> i8 {
    if let Some(sign) = small_cross_sign(ax, ay, bx, by, cx, cy) {
        return sign;
    }
    cross_sign_big(ax, ay, bx, by, cx, cy)
}

fn cross_sign_big(
    ax: &Rational,
    ay: &Rational,
    bx: &Rational,
    by: &Rational,
    cx: &Rational,
    cy: &Rational,
) -> i8 {
    // (bx-ax) = n1/d1, (cy-ay) = n2/d2, (by-ay) = n3/d3, (cx-ax) = n4/d4 with
    // positive denominators, so the sign is sign(n1*n2*d3*d4 - n3*n4*d1*d2).
    let (n1, d1) = diff(bx, ax);
    let (n2, d2) = diff(cy, ay);
    let (n3, d3) = diff(by, ay);
    let (n4, d4) = diff(cx, ax);
    let lhs = n1 * n2 * d3 * d4;
    let rhs = n3 * n4 * d1 * d2;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    }
}

fn small(v: &BigInt) -> Option<i64> {
    let x: i64 = v.try_into().ok()?;
    if x.abs() < (1 << 31) {
        Some(x)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn small_cross_sign(
    ax: &Rational,
    ay: &Rational,
    bx: &Rational,
    by: &Rational,
    cx: &Rational,
    cy: &Rational,
) -> Option<i8> {
    let (axn, axd) = (small(ax.numer())?, small(ax.denom())?);
    let (ayn, ayd) = (small(ay.numer())?, small(ay.denom())?);
    let (bxn, bxd) = (small(bx.numer())?, small(bx.denom())?);
    let (byn, byd) = (small(by.numer())?, small(by.denom())?);
    let (cxn, cxd) = (small(cx.numer())?, small(cx.denom())?);
    let (cyn, cyd) = (small(cy.numer())?, small(cy.denom())?);
    // Differences over common denominators: numerators < 2^63, denominators
    // < 2^62 and positive.
    let n1 = bxn as i128 * axd as i128 - axn as i128 * bxd as i128;
    let d1 = bxd as i128 * axd as i128;
    let n2 = cyn as i128 * ayd as i128 - ayn as i128 * cyd as i128;
    let d2 = cyd as i128 * ayd as i128;
    let n3 = byn as i128 * ayd as i128 - ayn as i128 * byd as i128;
    let d3 = byd as i128 * ayd as i128;
    let n4 = cxn as i128 * axd as i128 - axn as i128 * cxd as i128;
    let d4 = cxd as i128 * axd as i128;
    let a = n1.checked_mul(n2)?;
    let b = n3.checked_mul(n4)?;
    let c = d3.checked_mul(d4)?; // positive
    let d = d1.checked_mul(d2)?; // positive
    // sign(a*c - b*d) with c, d > 0.
    let (sa, sb) = (a.signum(), b.signum());
    if sa != sb {
        return Some(if sa > sb { 1 } else { -1 });
    }
    if sa == 0 {
        return Some(0);
    }
    let lhs = wide_mul(a.unsigned_abs(), c as u128);
    let rhs = wide_mul(b.unsigned_abs(), d as u128);
    let mag = match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal => 0,
    };
    Some((sa as i8) * mag)
}

/// 256-bit product of two u128s as (high, low).
fn wide_mul(x: u128, y: u128) -> (u128, u128) {
    const MASK: u128 = (1u128 << 64) - 1;
    let (x1, x0) = (x >> 64, x & MASK);
    let (y1, y0) = (y >> 64, y & MASK);
    let ll = x0 * y0;
    let lh = x0 * y1;
    let hl = x1 * y0;
    let hh = x1 * y1;
    let mid = (ll >> 64) + (lh & MASK) + (hl & MASK);
    let low = (mid << 64) | (ll & MASK);
    let high = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (high, low)
}

fn diff(a: &Rational, b: &Rational) -> (BigInt, BigInt) {
    (
        a.numer() * b.denom() - b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

/// Orientation of the plane triple `(a, b, c)`.
pub fn orientation(a: &Position, b: &Position, c: &Position) -> Result<Orientation> {
    let (ax, ay) = a.plane_xy()?;
    let (bx, by) = b.plane_xy()?;
    let (cx, cy) = c.plane_xy()?;
    Ok(sign_to_orientation(cross_sign(ax, ay, bx, by, cx, cy)))
}

/// True iff `p` lies on the open counter-clockwise arc from `a` to `b`.
pub fn in_ccw_arc(a: &Rational, b: &Rational, p: &Rational) -> bool {
    let span = mod1(&(b - a));
    let off = mod1(&(p - a));
    !off.is_zero() && off < span
}

/// Which open arc of the chord `(a, b)` contains `p`.
pub fn circular_side(chord: (&Position, &Position), p: &Position) -> Result<ArcSide> {
    let a = chord.0.circle_t()?;
    let b = chord.1.circle_t()?;
    let t = p.circle_t()?;
    if t == a || t == b {
        return Err(Error::OnChordEndpoint(p.describe()));
    }
    if a == b {
        return Err(Error::DuplicateEndpoint);
    }
    if in_ccw_arc(a, b, t) {
        Ok(ArcSide::ArcAb)
    } else {
        Ok(ArcSide::ArcBa)
    }
}

/// The point halving the arc from `a` to `b` in the given direction.
pub fn arc_midpoint(a: &Position, b: &Position, direction: Direction) -> Result<Position> {
    let ta = a.circle_t()?;
    let tb = b.circle_t()?;
    if ta == tb {
        return Err(Error::DuplicateEndpoint);
    }
    let t = match direction {
        Direction::Ccw => ta + mod1(&(tb - ta)) / rat(2, 1),
        Direction::Cw => ta - mod1(&(ta - tb)) / rat(2, 1),
    };
    Ok(Position::circle(t))
}

/// Proper crossing of two segments.
///
/// Plane: the open segments share a point (strict orientation straddle;
/// requires the four endpoints in general position). Circle: the chord
/// endpoints interleave in circular order. Line: the open intervals
/// intersect — nesting counts as crossing, because nested collinear segments
/// literally overlap as point sets.
pub fn segments_properly_cross(s: &Segment, t: &Segment) -> Result<bool> {
    let space = s.a.space();
    if t.a.space() != space || s.b.space() != space || t.b.space() != space {
        return Err(Error::MixedSpaces);
    }
    if s.a == t.a || s.a == t.b || s.b == t.a || s.b == t.b {
        return Err(Error::DuplicateEndpoint);
    }
    match space {
        Space::Plane => {
            let o1 = orientation(&s.a, &s.b, &t.a)?;
            let o2 = orientation(&s.a, &s.b, &t.b)?;
            let o3 = orientation(&t.a, &t.b, &s.a)?;
            let o4 = orientation(&t.a, &t.b, &s.b)?;
            if o1 == Orientation::Collinear
                || o2 == Orientation::Collinear
                || o3 == Orientation::Collinear
                || o4 == Orientation::Collinear
            {
                return Err(Error::GeneralPosition(format!(
                    "collinear endpoints among {} {} {} {}",
                    s.a.describe(),
                    s.b.describe(),
                    t.a.describe(),
                    t.b.describe()
                )));
            }
            Ok(o1 != o2 && o3 != o4)
        }
        Space::Circle => {
            let a = s.a.circle_t()?;
            let b = s.b.circle_t()?;
            let c = t.a.circle_t()?;
            let d = t.b.circle_t()?;
            Ok(in_ccw_arc(a, b, c) != in_ccw_arc(a, b, d))
        }
        Space::Line => {
            let (s_lo, s_hi) = ordered(s.a.line_x()?, s.b.line_x()?);
            let (t_lo, t_hi) = ordered(t.a.line_x()?, t.b.line_x()?);
            let lo = if s_lo > t_lo { s_lo } else { t_lo };
            let hi = if s_hi < t_hi { s_hi } else { t_hi };
            Ok(lo < hi)
        }
    }
}

fn ordered<'a>(a: &'a Rational, b: &'a Rational) -> (&'a Rational, &'a Rational) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Outcome of [`general_position_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PositionReport {
    Ok,
    Duplicate { i: usize, j: usize },
    CollinearTriple { i: usize, j: usize, k: usize },
}

impl PositionReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, PositionReport::Ok)
    }
}

/// Checks a point set for general position.
///
/// Plane: reports any duplicate point or collinear triple. Circle/line:
/// reports duplicates only. Indices in the report are 0-based into `points`.
pub fn general_position_check(points: &[Position]) -> Result<PositionReport> {
    if points.is_empty() {
        return Ok(PositionReport::Ok);
    }
    let space = points[0].space();
    for p in points {
        if p.space() != space {
            return Err(Error::MixedSpaces);
        }
    }
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            if points[i] == points[j] {
                return Ok(PositionReport::Duplicate { i, j });
            }
        }
    }
    if space == Space::Plane {
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                for k in (j + 1)..points.len() {
                    if orientation(&points[i], &points[j], &points[k])? == Orientation::Collinear {
                        return Ok(PositionReport::CollinearTriple { i, j, k });
                    }
                }
            }
        }
    }
    Ok(PositionReport::Ok)
}

/// Squared Euclidean distance between two plane positions.
pub fn sq_dist_plane(a: &Position, b: &Position) -> Result<Rational> {
    let (ax, ay) = a.plane_xy()?;
    let (bx, by) = b.plane_xy()?;
    let dx = ax - bx;
    let dy = ay - by;
    Ok(&dx * &dx + &dy * &dy)
}

/// Arc distance between two circle positions (shorter way around).
pub fn arc_dist(a: &Position, b: &Position) -> Result<Rational> {
    let ta = a.circle_t()?;
    let tb = b.circle_t()?;
    let d = mod1(&(ta - tb));
    let d2 = Rational::one() - &d;
    Ok(if d <= d2 { d } else { d2 })
}

/// Distance between two line positions.
pub fn line_dist(a: &Position, b: &Position) -> Result<Rational> {
    Ok((a.line_x()? - b.line_x()?).abs())
}

/// Comparable distance between two positions in their shared space. Plane
/// distances are squared (monotone in the true distance), which keeps the
/// comparison rational.
pub fn comparable_dist(a: &Position, b: &Position) -> Result<Rational> {
    match a.space() {
        Space::Plane => sq_dist_plane(a, b),
        Space::Circle => arc_dist(a, b),
        Space::Line => line_dist(a, b),
    }
}

/// Rational point on the unit circle for a circle position, via the tangent
/// half-angle parametrization. Only used to cross-check the circle predicates
/// against the plane ones; the map preserves circular order.
pub fn circle_to_plane(p: &Position) -> Result<Position> {
    let t = p.circle_t()?;
    if t.is_zero() {
        return Ok(Position::plane(rat(-1, 1), rat(0, 1)));
    }
    // u: (0,1) -> (-inf, +inf), strictly increasing: u = (2t-1)/(2 t (1-t)).
    let one = Rational::one();
    let u = (t * rat(2, 1) - &one) / (t * (one.clone() - t) * rat(2, 1));
    let u2 = &u * &u;
    let den = &u2 + &one;
    let x = (&one - &u2) / &den;
    let y = (u * rat(2, 1)) / den;
    Ok(Position::plane(x, y))
}
