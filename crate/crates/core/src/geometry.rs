//! Points over Q[√3] and the exact predicates built on them.
//!
//! The filtered variants first evaluate in floating point with a rigorous
//! error bound and fall back to exact arithmetic only when the float result
//! cannot decide the sign.

use std::cmp::Ordering;

use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    pub x: Scalar,
    pub y: Scalar,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn origin() -> Self {
        Point::new(Scalar::zero(), Scalar::zero())
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn to_f64(&self) -> [f64; 2] {
        [self.x.to_f64(), self.y.to_f64()]
    }

    pub fn approx(&self) -> Approx {
        let (x, ex) = self.x.to_f64_bounded();
        let (y, ey) = self.y.to_f64_bounded();
        Approx { x, y, err: ex.max(ey) }
    }
}

/// A floating approximation of a point with an absolute error bound that
/// holds for both coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approx {
    pub x: f64,
    pub y: f64,
    pub err: f64,
}

/// Sign of the cross product `(q - p) × (r - p)`; +1 for a counterclockwise turn.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> i8 {
    let ux = &q.x - &p.x;
    let uy = &q.y - &p.y;
    let vx = &r.x - &p.x;
    let vy = &r.y - &p.y;
    (&(&ux * &vy) - &(&uy * &vx)).sign()
}

pub fn dist_sq(p: &Point, q: &Point) -> Scalar {
    let dx = &p.x - &q.x;
    let dy = &p.y - &q.y;
    &(&dx * &dx) + &(&dy * &dy)
}

const GAMMA: f64 = 8.0 * f64::EPSILON;

/// Float orientation with an error bound, or `None` when undecided.
pub fn orientation_float(p: &Approx, q: &Approx, r: &Approx) -> Option<i8> {
    let ux = q.x - p.x;
    let uy = q.y - p.y;
    let vx = r.x - p.x;
    let vy = r.y - p.y;
    let t1 = ux * vy;
    let t2 = uy * vx;
    let det = t1 - t2;
    // each difference is off by at most e = 2·err plus its own rounding
    let e = 2.0 * p.err.max(q.err).max(r.err) * (1.0 + GAMMA);
    let bound = (e * (ux.abs() + uy.abs() + vx.abs() + vy.abs()) + 2.0 * e * e
        + GAMMA * (t1.abs() + t2.abs()))
        * 1.01;
    if det > bound {
        Some(1)
    } else if det < -bound {
        Some(-1)
    } else {
        None
    }
}

/// Orientation that tries the float filter before exact arithmetic.
pub fn orientation_filtered(p: (&Point, &Approx), q: (&Point, &Approx), r: (&Point, &Approx)) -> i8 {
    orientation_float(p.1, q.1, r.1).unwrap_or_else(|| orientation(p.0, q.0, r.0))
}

/// Float enclosure `[lo, hi]` of the squared distance.
pub fn dist_sq_float(p: &Approx, q: &Approx) -> (f64, f64) {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let d = dx * dx + dy * dy;
    let e = 2.0 * p.err.max(q.err) * (1.0 + GAMMA);
    let bound = (2.0 * e * (dx.abs() + dy.abs()) + 2.0 * e * e + GAMMA * d) * 1.01;
    ((d - bound).max(0.0), d + bound)
}

/// Clockwise angular comparison of direction vectors, starting from the
/// positive x axis and sweeping clockwise (so (1,0) < (0,-1) < (-1,0) < (0,1)).
pub fn cmp_clockwise(u: &Point, v: &Point) -> Ordering {
    // half 0 holds clockwise angles in [0, π): y < 0, or y == 0 and x > 0
    fn half(p: &Point) -> u8 {
        let sy = p.y.sign();
        if sy < 0 || (sy == 0 && p.x.sign() > 0) {
            0
        } else {
            1
        }
    }
    let (hu, hv) = (half(u), half(v));
    if hu != hv {
        return hu.cmp(&hv);
    }
    // same half: u comes first clockwise if v is clockwise of u, i.e. u × v < 0
    let o = orientation(&Point::origin(), u, v);
    o.cmp(&0)
}

/// Float counterpart of [`cmp_clockwise`] for declared-mode coordinates.
pub fn clockwise_key(dx: f64, dy: f64) -> f64 {
    // clockwise angle from the positive x axis, in [0, 2π)
    let a = -dy.atan2(dx);
    if a < 0.0 {
        a + std::f64::consts::TAU
    } else {
        a
    }
}

/// Does the closed segment `ab` properly cross `cd`? Shared endpoints are ignored.
pub fn segments_cross(a: &Point, b: &Point, c: &Point, d: &Point) -> bool {
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let o1 = orientation(a, b, c);
    let o2 = orientation(a, b, d);
    let o3 = orientation(c, d, a);
    let o4 = orientation(c, d, b);
    if o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        return o1 != o2 && o3 != o4;
    }
    // touching or collinear overlaps count as crossings
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

fn on_segment(a: &Point, b: &Point, p: &Point) -> bool {
    let within = |s: &Scalar, t: &Scalar, v: &Scalar| {
        let (lo, hi) = if s <= t { (s, t) } else { (t, s) };
        lo <= v && v <= hi
    };
    within(&a.x, &b.x, &p.x) && within(&a.y, &b.y, &p.y)
}

/// Float segment crossing test with tolerance, for declared drawings.
pub fn segments_cross_float(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2], tol: f64) -> bool {
    let orient = |p: [f64; 2], q: [f64; 2], r: [f64; 2]| {
        let v = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]);
        if v > tol {
            1
        } else if v < -tol {
            -1
        } else {
            0
        }
    };
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    o1 * o2 < 0 && o3 * o4 < 0
}

/// Closed triangle containment using exact orientations.
pub fn in_triangle(a: &Point, b: &Point, c: &Point, p: &Point) -> bool {
    let o1 = orientation(a, b, p);
    let o2 = orientation(b, c, p);
    let o3 = orientation(c, a, p);
    let has_neg = o1 < 0 || o2 < 0 || o3 < 0;
    let has_pos = o1 > 0 || o2 > 0 || o3 > 0;
    !(has_neg && has_pos)
}

/// Closed convex-hull containment for a small point set, via the triangles
/// spanned by its points.
pub fn in_hull(pts: &[&Point], p: &Point) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if orientation(pts[i], pts[j], pts[k]) == 0 {
                    // degenerate triangle: fall back to segment tests
                    if (orientation(pts[i], pts[j], p) == 0 && on_segment(pts[i], pts[j], p))
                        || (orientation(pts[j], pts[k], p) == 0 && on_segment(pts[j], pts[k], p))
                        || (orientation(pts[i], pts[k], p) == 0 && on_segment(pts[i], pts[k], p))
                    {
                        return true;
                    }
                    continue;
                }
                if in_triangle(pts[i], pts[j], pts[k], p) {
                    return true;
                }
            }
        }
    }
    false
}

/// Twice the signed area of a closed polygon (positive when counterclockwise).
pub fn signed_area2(poly: &[&Point]) -> Scalar {
    let mut acc = Scalar::zero();
    for i in 0..poly.len() {
        let p = poly[i];
        let q = poly[(i + 1) % poly.len()];
        acc = &acc + &(&(&p.x * &q.y) - &(&q.x * &p.y));
    }
    acc
}
