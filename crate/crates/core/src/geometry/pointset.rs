use std::collections::{HashMap, HashSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNumber, Rational};
use crate::error::{Error, Result};

use super::{Isometry, Point};

/// Tolerance for floating ball-membership tests. Membership is always
/// evaluated on the embedding of an exact value, so equal exact points get
/// identical verdicts; only genuine ties at the boundary are affected.
pub const EPS: f64 = 1e-9;

#[inline]
pub fn within(z: Complex64, r: f64) -> bool {
    z.norm() <= r + EPS
}

/// Finite approximant of a Delone set.
///
/// `window` is the radius `W` of the centred ball inside which the set is
/// complete. Points beyond `W` may be present (for example after a
/// translation) but are never relied on by the analysis operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    field: u8,
    dim: u8,
    #[serde(with = "window_serde")]
    window: WindowRadius,
    points: Vec<Point>,
}

/// Window radius stored as a float with bitwise equality.
#[derive(Clone, Copy, Debug)]
struct WindowRadius(f64);

impl PartialEq for WindowRadius {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits()
    }
}
impl Eq for WindowRadius {}

mod window_serde {
    use super::WindowRadius;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(w: &WindowRadius, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(w.0)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<WindowRadius, D::Error> {
        Ok(WindowRadius(f64::deserialize(d)?))
    }
}

impl PointSet {
    /// Builds a point set; duplicates are removed and points are sorted.
    pub fn new(field: u8, dim: u8, points: Vec<Point>, window: f64) -> Result<Self> {
        crate::cyclo::degree(field)?;
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidArgument(format!("dimension {dim}")));
        }
        if !(window >= 0.0) {
            return Err(Error::InvalidArgument(format!("window {window}")));
        }
        let mut points = points;
        for p in &points {
            if p.index() != field {
                return Err(Error::IndexMismatch(field, p.index()));
            }
            if dim == 1 && !p.is_real() {
                return Err(Error::InvalidArgument("non-real point in a 1D set".into()));
            }
        }
        points.sort();
        points.dedup();
        Ok(PointSet { field, dim, window: WindowRadius(window), points })
    }

    pub fn field(&self) -> u8 {
        self.field
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn window(&self) -> f64 {
        self.window.0
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn with_window(&self, window: f64) -> Self {
        PointSet { window: WindowRadius(window), ..self.clone() }
    }

    /// Points within `radius` of the origin.
    pub fn restrict(&self, radius: f64) -> Result<Self> {
        if radius > self.window() + EPS {
            return Err(Error::WindowExceeded { requested: radius, window: self.window() });
        }
        let pts = self.points.iter().filter(|p| within(p.embed(), radius)).copied().collect();
        Ok(PointSet { points: pts, window: WindowRadius(radius), ..self.clone() })
    }

    /// Image under an isometry. Rotations and reflections about the origin
    /// keep the window, a translation by `t` shrinks it by `|t|`.
    pub fn apply_isometry(&self, g: &Isometry) -> Result<Self> {
        let g = if g.index() == self.field { *g } else { g.lift(self.field)? };
        let pts: Vec<Point> = self.points.iter().map(|p| g.apply(p)).collect();
        let shrink = g.trans.embed().norm();
        let dim = if self.dim == 1 && pts.iter().all(|p| p.is_real()) { 1 } else { 2 };
        PointSet::new(self.field, dim, pts, (self.window() - shrink).max(0.0))
    }

    /// Moves the set into a larger field (`Q(i) → Q(ζ8)`).
    pub fn lift(&self, target: u8) -> Result<Self> {
        let pts = self.points.iter().map(|p| p.lift(target)).collect::<Result<Vec<_>>>()?;
        PointSet::new(target, self.dim, pts, self.window())
    }

    pub fn embedded(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.embed()).collect()
    }

    pub fn index(&self, cell: f64) -> SpatialIndex {
        SpatialIndex::new(&self.embedded(), cell)
    }

    pub fn hash_set(&self) -> HashSet<Point> {
        self.points.iter().copied().collect()
    }
}

/// All pairwise differences `x − y` with `|x − y| ≤ radius`, deduplicated and sorted.
pub fn difference_set(s: &PointSet, radius: f64) -> Result<Vec<CycloNumber>> {
    if radius > s.window() + EPS {
        return Err(Error::WindowExceeded { requested: radius, window: s.window() });
    }
    let emb = s.embedded();
    let idx = SpatialIndex::new(&emb, radius.max(0.5));
    let mut out: HashSet<CycloNumber> = HashSet::new();
    for (i, p) in s.points().iter().enumerate() {
        for j in idx.within(&emb, emb[i], radius) {
            let d = s.points()[j] - *p;
            if within(d.embed(), radius) {
                out.insert(d);
            }
        }
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    Ok(v)
}

/// Uniform grid bucket index over embedded coordinates.
#[derive(Clone, Debug)]
pub struct SpatialIndex {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl SpatialIndex {
    pub fn new(points: &[Complex64], cell: f64) -> Self {
        let cell = if cell > 0.0 { cell } else { 1.0 };
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            buckets.entry(Self::key(cell, *p)).or_default().push(i);
        }
        SpatialIndex { cell, buckets }
    }

    pub fn cell_size(&self) -> f64 {
        self.cell
    }

    fn key(cell: f64, p: Complex64) -> (i64, i64) {
        ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64)
    }

    /// Indices of points within `r` of `center` (closed ball, with [`EPS`]).
    pub fn within(&self, points: &[Complex64], center: Complex64, r: f64) -> Vec<usize> {
        let (cx, cy) = Self::key(self.cell, center);
        let k = (r / self.cell).ceil() as i64 + 1;
        let mut out = Vec::new();
        for dx in -k..=k {
            for dy in -k..=k {
                if let Some(b) = self.buckets.get(&(cx + dx, cy + dy)) {
                    out.extend(b.iter().copied().filter(|&i| within(points[i] - center, r)));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Distance from `center` to the nearest indexed point, searching at
    /// most `max_r` away.
    pub fn nearest(&self, points: &[Complex64], center: Complex64, max_r: f64) -> Option<(usize, f64)> {
        let (cx, cy) = Self::key(self.cell, center);
        let kmax = (max_r / self.cell).ceil() as i64 + 1;
        let mut best: Option<(usize, f64)> = None;
        for ring in 0..=kmax {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(b) = self.buckets.get(&(cx + dx, cy + dy)) {
                        for &i in b {
                            let d = (points[i] - center).norm();
                            if best.map_or(true, |(_, bd)| d < bd) {
                                best = Some((i, d));
                            }
                        }
                    }
                }
            }
            // every unvisited point is at least `ring * cell` away
            if let Some((_, d)) = best {
                if d <= ring as f64 * self.cell {
                    break;
                }
            }
        }
        best.filter(|&(_, d)| d <= max_r + EPS)
    }
}

/// Standard windowed samples used as reference inputs.
pub mod samples {
    use super::*;

    fn rat(q: Rational) -> Point {
        CycloNumber::from_rational(4, q)
    }

    /// `(offset + Z) ∩ [−window − 1, window + 1]` in `Q(i)`, complete in `B_window`.
    pub fn z_sample(window: f64, offset: Rational) -> PointSet {
        let m = window.ceil() as i64 + 1;
        let pts = (-m..=m).map(|k| rat(Rational::from_integer(k) + offset)).collect();
        PointSet::new(4, 1, pts, window).expect("valid sample")
    }

    /// `Z ∖ removed`, windowed.
    pub fn z_with_defects(window: f64, offset: Rational, removed: &[i64]) -> PointSet {
        let m = window.ceil() as i64 + 1;
        let pts = (-m..=m)
            .filter(|k| !removed.contains(k))
            .map(|k| rat(Rational::from_integer(k) + offset))
            .collect();
        PointSet::new(4, 1, pts, window).expect("valid sample")
    }

    /// `(1/q) Z`, windowed.
    pub fn scaled_z_sample(window: f64, q: i64) -> PointSet {
        let m = (window * q as f64).ceil() as i64 + 1;
        let pts = (-m..=m).map(|k| rat(Rational::new(k, q))).collect();
        PointSet::new(4, 1, pts, window).expect("valid sample")
    }

    /// `Z²` as Gaussian integers, windowed.
    pub fn z2_sample(window: f64) -> PointSet {
        let m = window.ceil() as i64 + 1;
        let mut pts = Vec::new();
        for a in -m..=m {
            for b in -m..=m {
                pts.push(CycloNumber::from_int_coeffs(4, &[a, b]));
            }
        }
        PointSet::new(4, 2, pts, window).expect("valid sample")
    }

    /// `Z × {0}` viewed as a planar set.
    pub fn z_line_in_plane(window: f64) -> PointSet {
        let m = window.ceil() as i64 + 1;
        let pts = (-m..=m).map(|k| CycloNumber::from_int(4, k)).collect();
        PointSet::new(4, 2, pts, window).expect("valid sample")
    }

    /// `Z ∪ {k + 1/(|k| + 2)}`: uniformly discrete along each window but
    /// with ever new short differences, so not of finite local complexity.
    pub fn non_flc_sample(window: f64) -> PointSet {
        let m = window.ceil() as i64 + 1;
        let pts = (-m..=m)
            .flat_map(|k| [Rational::from_integer(k), Rational::from_integer(k) + Rational::new(1, k.abs() + 2)])
            .map(rat)
            .collect();
        PointSet::new(4, 1, pts, window).expect("valid sample")
    }

    /// The Fibonacci chain as a cut-and-project set in `Z[τ] ⊂ Q(ζ5)`:
    /// `{a + bτ : a + bτ' ∈ [−1, τ − 1)}` with `τ' = 1 − τ`.
    pub fn fibonacci_sample(window: f64) -> PointSet {
        let tau = crate::cyclo::consts::golden_ratio();
        let tau_f = tau.embed().re;
        let tau_c = 1.0 - tau_f;
        let bmax = (window / tau_f).ceil() as i64 + 4;
        let mut pts = Vec::new();
        for b in -2 * bmax..=2 * bmax {
            for a in -(window as i64) - 8 - 2 * b.abs()..=(window as i64) + 8 + 2 * b.abs() {
                let x = a as f64 + b as f64 * tau_f;
                let star = a as f64 + b as f64 * tau_c;
                if x.abs() <= window + 2.0 && (-1.0..tau_f - 1.0).contains(&star) {
                    pts.push(CycloNumber::from_int(5, a) + tau.scale_int(b));
                }
            }
        }
        PointSet::new(5, 1, pts, window).expect("valid sample")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;
    use num_traits::Zero;

    #[test]
    fn identity_and_translation_window_rule() {
        let s = z_sample(3.0, Rational::zero()).restrict(3.0).unwrap();
        assert_eq!(s.apply_isometry(&Isometry::identity(4)).unwrap(), s);
        let t = s.apply_isometry(&Isometry::translation(CycloNumber::one(4))).unwrap();
        assert_eq!(t.window(), 2.0);
        let expect: Vec<Point> = (-2..=4).map(|k| CycloNumber::from_int(4, k)).collect();
        assert_eq!(t.points(), &expect[..]);
    }

    #[test]
    fn difference_set_of_integers() {
        let s = z_sample(10.0, Rational::zero());
        let d = difference_set(&s, 3.0).unwrap();
        let expect: Vec<Point> = (-3..=3).map(|k| CycloNumber::from_int(4, k)).collect();
        assert_eq!(d, expect);
        assert!(matches!(difference_set(&s, 11.0), Err(Error::WindowExceeded { .. })));
    }

    #[test]
    fn difference_set_of_two_points() {
        let z = CycloNumber::zeta(8);
        let s = PointSet::new(8, 2, vec![CycloNumber::zero(8), z], 2.0).unwrap();
        let d = difference_set(&s, 2.0).unwrap();
        let mut expect = vec![CycloNumber::zero(8), z, -z];
        expect.sort();
        assert_eq!(d, expect);
    }

    #[test]
    fn fibonacci_sample_gaps() {
        let s = fibonacci_sample(20.0).restrict(20.0).unwrap();
        let e = s.embedded();
        let mut xs: Vec<f64> = e.iter().map(|z| z.re).collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        for w in xs.windows(2) {
            let g = w[1] - w[0];
            assert!((g - 1.0).abs() < 1e-9 || (g - tau).abs() < 1e-9, "gap {g}");
        }
    }

    #[test]
    fn nearest_query() {
        let s = z2_sample(5.0);
        let e = s.embedded();
        let idx = s.index(1.0);
        let (_, d) = idx.nearest(&e, Complex64::new(0.4, 0.3), 10.0).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
    }
}
