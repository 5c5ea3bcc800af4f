//! Orientation and polygon predicates.
//!
//! Signs come from the floating embedding, but zero is decided exactly: the
//! cross product `Im(conj(u)·v)` vanishes iff `w − conj(w) = 0` for
//! `w = conj(u)·v`, which is an identity in the field.

use std::cmp::Ordering;

use crate::cyclo::CycloNumber;

use super::Point;

/// Orientation of the triple `(a, b, c)`: `Greater` for counter-clockwise,
/// `Less` for clockwise, `Equal` for collinear (exact).
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let u = *b - *a;
    let v = *c - *a;
    let w = u.conj() * v;
    let twice_im = w - w.conj();
    if twice_im.is_zero() {
        return Ordering::Equal;
    }
    let s = w.embed().im;
    if s > 0.0 {
        Ordering::Greater
    } else if s < 0.0 {
        Ordering::Less
    } else {
        // nonzero exact value below f64 resolution; fall back to the
        // imaginary part of the exact doubled value
        twice_im.embed().im.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
    }
}

/// `4i` times the signed area of a polygon, as an exact field element.
pub fn area_form(vertices: &[Point]) -> CycloNumber {
    let n = vertices[0].index();
    let mut acc = CycloNumber::zero(n);
    for i in 0..vertices.len() {
        let a = vertices[i];
        let b = vertices[(i + 1) % vertices.len()];
        acc = acc + a.conj() * b - a * b.conj();
    }
    acc
}

/// Area form normalized to positive orientation.
pub fn unsigned_area_form(vertices: &[Point]) -> CycloNumber {
    let f = area_form(vertices);
    if f.embed().im < 0.0 {
        -f
    } else {
        f
    }
}

/// Converts an area form back to a floating area.
pub fn area_value(form: &CycloNumber) -> f64 {
    form.embed().im / 4.0
}

fn ccw(poly: &[Point]) -> Vec<Point> {
    let mut v = poly.to_vec();
    if area_form(&v).embed().im < 0.0 {
        v.reverse();
    }
    v
}

/// Closed containment of `x` in a convex polygon.
pub fn point_in_convex(poly: &[Point], x: &Point) -> bool {
    let p = ccw(poly);
    (0..p.len()).all(|i| orient(&p[i], &p[(i + 1) % p.len()], x) != Ordering::Less)
}

/// Strict interior containment of `x` in a convex polygon.
pub fn point_in_convex_interior(poly: &[Point], x: &Point) -> bool {
    let p = ccw(poly);
    (0..p.len()).all(|i| orient(&p[i], &p[(i + 1) % p.len()], x) == Ordering::Greater)
}

/// True when two convex polygons have disjoint interiors (an edge of one
/// of them separates the two).
pub fn convex_interiors_disjoint(p: &[Point], q: &[Point]) -> bool {
    let p = ccw(p);
    let q = ccw(q);
    let separates = |a: &[Point], b: &[Point]| {
        (0..a.len()).any(|i| {
            let (s, t) = (&a[i], &a[(i + 1) % a.len()]);
            b.iter().all(|x| orient(s, t, x) != Ordering::Greater)
        })
    };
    separates(&p, &q) || separates(&q, &p)
}

/// True when `x` lies strictly between `a` and `b` on the segment `ab`.
pub fn strictly_inside_segment(a: &Point, b: &Point, x: &Point) -> bool {
    if orient(a, b, x) != Ordering::Equal || x == a || x == b {
        return false;
    }
    // collinear: compare projections
    let d = *b - *a;
    let t = ((*x - *a) * d.conj()).embed().re;
    let len = d.norm_sq().embed().re;
    t > 0.0 && t < len
}
