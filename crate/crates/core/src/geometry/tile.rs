use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cyclo::{CycloNumber, Rational};
use crate::error::{Error, Result};

use super::pointset::{within, PointSet, SpatialIndex, EPS};
use super::predicates::{area_form, unsigned_area_form};
use super::{Isometry, Point};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TilingSystem {
    AmmannBeenker,
    Penrose,
    Pinwheel,
}

impl TilingSystem {
    pub fn field(&self) -> u8 {
        match self {
            TilingSystem::AmmannBeenker => 8,
            TilingSystem::Penrose => 5,
            TilingSystem::Pinwheel => 4,
        }
    }

    /// Prototiles in the order used for type-count vectors.
    pub fn prototiles(&self) -> &'static [Prototile] {
        match self {
            TilingSystem::AmmannBeenker => &[Prototile::AbTriangle, Prototile::AbRhombus],
            TilingSystem::Penrose => &[
                Prototile::PenroseThickHalf,
                Prototile::PenroseThinHalf,
                Prototile::PenroseThick,
                Prototile::PenroseThin,
            ],
            TilingSystem::Pinwheel => &[Prototile::PinwheelTriangle],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TilingSystem::AmmannBeenker => "ab",
            TilingSystem::Penrose => "penrose",
            TilingSystem::Pinwheel => "pinwheel",
        }
    }
}

impl fmt::Display for TilingSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TilingSystem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ab" | "ammann-beenker" => Ok(TilingSystem::AmmannBeenker),
            "penrose" => Ok(TilingSystem::Penrose),
            "pinwheel" => Ok(TilingSystem::Pinwheel),
            _ => Err(Error::Parse(format!("unknown tiling system `{s}`"))),
        }
    }
}

/// Prototile identifiers. Every prototile has unit-length edge `v0 → v1`
/// from `0` to `1` in its reference position, which fixes placements
/// uniquely from two vertex images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Prototile {
    /// Half of the Ammann–Beenker square, vertices `[a, b, c]` with the right angle at `b`.
    AbTriangle,
    /// Ammann–Beenker 45° rhombus `[a, b, c, d]`, acute at `a` and `c`.
    AbRhombus,
    /// 72° Penrose rhombus `[B, A, C, A′]`, acute at `B` and `C`.
    PenroseThick,
    /// 36° Penrose rhombus `[B, A, C, A′]`, obtuse at `B` and `C`.
    PenroseThin,
    /// Robinson half `[B, A, C]` of the thick rhombus (apex `A`, base `BC`).
    PenroseThickHalf,
    /// Robinson half `[B, A, C]` of the thin rhombus.
    PenroseThinHalf,
    /// Right triangle with legs 1 and 2, `[p0, p1, p2]`, right angle at `p1`.
    PinwheelTriangle,
}

impl Prototile {
    pub fn system(&self) -> TilingSystem {
        match self {
            Prototile::AbTriangle | Prototile::AbRhombus => TilingSystem::AmmannBeenker,
            Prototile::PinwheelTriangle => TilingSystem::Pinwheel,
            _ => TilingSystem::Penrose,
        }
    }

    pub fn field(&self) -> u8 {
        self.system().field()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Prototile::AbTriangle => "ab-triangle",
            Prototile::AbRhombus => "ab-rhombus",
            Prototile::PenroseThick => "penrose-thick",
            Prototile::PenroseThin => "penrose-thin",
            Prototile::PenroseThickHalf => "penrose-thick-half",
            Prototile::PenroseThinHalf => "penrose-thin-half",
            Prototile::PinwheelTriangle => "pinwheel-triangle",
        }
    }

    pub fn reference_vertices(&self) -> Vec<Point> {
        let z = |n: u8, k: i64| CycloNumber::zeta_pow(n, k);
        let one = |n: u8| CycloNumber::one(n);
        let zero = |n: u8| CycloNumber::zero(n);
        match self {
            Prototile::AbTriangle => vec![zero(8), one(8), one(8) + z(8, 2)],
            Prototile::AbRhombus => vec![zero(8), one(8), one(8) + z(8, 1), z(8, 1)],
            Prototile::PenroseThickHalf => vec![zero(5), one(5), one(5) + z(5, 1)],
            Prototile::PenroseThinHalf => vec![zero(5), one(5), one(5) + z(5, 2)],
            Prototile::PenroseThick => vec![zero(5), one(5), one(5) + z(5, 1), z(5, 1)],
            Prototile::PenroseThin => vec![zero(5), one(5), one(5) + z(5, 2), z(5, 2)],
            Prototile::PinwheelTriangle => {
                vec![zero(4), one(4), CycloNumber::from_int_coeffs(4, &[1, 2])]
            }
        }
    }

    /// Isometries of the reference tile that also preserve its decorations.
    pub fn symmetries(&self) -> Vec<Isometry> {
        let n = self.field();
        let mirror = |k: i64| Isometry { rot: CycloNumber::zeta_pow(n, k), reflect: true, trans: CycloNumber::zero(n) };
        match self {
            Prototile::AbRhombus => {
                let half_turn = Isometry {
                    rot: -CycloNumber::one(8),
                    reflect: false,
                    trans: CycloNumber::one(8) + CycloNumber::zeta(8),
                };
                let m = mirror(1);
                vec![Isometry::identity(8), m, half_turn, half_turn.compose(&m)]
            }
            Prototile::PenroseThick => vec![Isometry::identity(5), mirror(1)],
            Prototile::PenroseThin => vec![Isometry::identity(5), mirror(2)],
            _ => vec![Isometry::identity(n)],
        }
    }

    /// Decorations carried by inflation output, one entry per reference edge `v_i → v_{i+1}`.
    pub fn standard_decorations(&self) -> Vec<Option<EdgeArrow>> {
        use ArrowKind::*;
        let a = |kind, forward| Some(EdgeArrow { kind, forward });
        match self {
            // edge arrows point at the end where the short segment of the
            // edge subdivision sits
            Prototile::AbTriangle => vec![a(Single, true), a(Single, true), None],
            Prototile::AbRhombus => vec![a(Single, false), a(Single, true), a(Single, false), a(Single, true)],
            Prototile::PenroseThickHalf | Prototile::PenroseThinHalf => {
                let (ba, ac) = penrose_leg_arrows(*self);
                vec![Some(ba), Some(ac), None]
            }
            Prototile::PenroseThick | Prototile::PenroseThin => {
                let half = if *self == Prototile::PenroseThick {
                    Prototile::PenroseThickHalf
                } else {
                    Prototile::PenroseThinHalf
                };
                let (ba, ac) = penrose_leg_arrows(half);
                // mirror half contributes A′→C and B→A′, traversed backwards here
                vec![Some(ba), Some(ac), Some(ac.reversed()), Some(ba.reversed())]
            }
            Prototile::PinwheelTriangle => vec![],
        }
    }

    pub fn as_half(&self) -> Option<Prototile> {
        match self {
            Prototile::PenroseThick => Some(Prototile::PenroseThickHalf),
            Prototile::PenroseThin => Some(Prototile::PenroseThinHalf),
            _ => None,
        }
    }

    pub fn as_rhombus(&self) -> Option<Prototile> {
        match self {
            Prototile::PenroseThickHalf => Some(Prototile::PenroseThick),
            Prototile::PenroseThinHalf => Some(Prototile::PenroseThin),
            _ => None,
        }
    }

    /// Exact reference area form (see [`area_form`]).
    pub fn area_form(&self) -> CycloNumber {
        unsigned_area_form(&self.reference_vertices())
    }
}

/// Arrow types on the legs `B→A` and `A→C` of a Robinson half.
///
/// Double arrows sit on the edges at `B`, pointing at `B` on the thick
/// rhombus and away from it on the thin one; single arrows on the edges at
/// `C` point at `C`. Among the labellings by roles, these (up to swapping
/// the arrow types or direction classes) are the ones preserved by the
/// Robinson substitution.
fn penrose_leg_arrows(half: Prototile) -> (EdgeArrow, EdgeArrow) {
    use ArrowKind::*;
    match half {
        Prototile::PenroseThickHalf => (
            EdgeArrow { kind: Double, forward: false },
            EdgeArrow { kind: Single, forward: true },
        ),
        Prototile::PenroseThinHalf => (
            EdgeArrow { kind: Double, forward: true },
            EdgeArrow { kind: Single, forward: true },
        ),
        _ => unreachable!(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArrowKind {
    Single,
    Double,
}

/// Arrow on a reference edge `v_i → v_{i+1}`; `forward` means it points at `v_{i+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeArrow {
    pub kind: ArrowKind,
    pub forward: bool,
}

impl EdgeArrow {
    pub fn reversed(&self) -> Self {
        EdgeArrow { kind: self.kind, forward: !self.forward }
    }
}

impl fmt::Display for EdgeArrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            ArrowKind::Single => 's',
            ArrowKind::Double => 'd',
        };
        write!(f, "{k}{}", if self.forward { '+' } else { '-' })
    }
}

impl FromStr for EdgeArrow {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let kind = match s.chars().next() {
            Some('s') => ArrowKind::Single,
            Some('d') => ArrowKind::Double,
            _ => return Err(Error::Parse(format!("bad arrow `{s}`"))),
        };
        let forward = match s.get(1..) {
            Some("+") => true,
            Some("-") => false,
            _ => return Err(Error::Parse(format!("bad arrow `{s}`"))),
        };
        Ok(EdgeArrow { kind, forward })
    }
}

/// A placed, possibly decorated, prototile.
///
/// Placements are canonical: among the placements producing the same
/// decorated tile, the smallest one is stored, so derived equality is
/// geometric equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tile {
    pub proto: Prototile,
    pub placement: Isometry,
    pub decorations: Vec<Option<EdgeArrow>>,
}

impl Tile {
    /// A tile carrying the standard decorations of its prototile.
    pub fn new(proto: Prototile, placement: Isometry) -> Self {
        Self::with_decorations(proto, placement, proto.standard_decorations())
    }

    pub fn undecorated(proto: Prototile, placement: Isometry) -> Self {
        Self::with_decorations(proto, placement, Vec::new())
    }

    pub fn with_decorations(proto: Prototile, placement: Isometry, decorations: Vec<Option<EdgeArrow>>) -> Self {
        let mut best = Tile { proto, placement, decorations };
        let syms = proto.symmetries();
        if syms.len() > 1 {
            let original = best.clone();
            for s in &syms[1..] {
                let cand = original.precompose(s);
                if canonical_key(&cand) < canonical_key(&best) {
                    best = cand;
                }
            }
        }
        best
    }

    /// Tile `g ∘ s` for a symmetry `s` of the reference tile, with edge decorations carried along.
    fn precompose(&self, s: &Isometry) -> Tile {
        let refv = self.proto.reference_vertices();
        let m = refv.len();
        let perm: Vec<usize> = refv
            .iter()
            .map(|v| {
                let img = s.apply(v);
                refv.iter().position(|w| *w == img).expect("symmetry permutes vertices")
            })
            .collect();
        let decorations = if self.decorations.is_empty() {
            Vec::new()
        } else {
            (0..m)
                .map(|i| {
                    let (a, b) = (perm[i], perm[(i + 1) % m]);
                    if b == (a + 1) % m {
                        self.decorations[a]
                    } else {
                        self.decorations[b].map(|e| e.reversed())
                    }
                })
                .collect()
        };
        Tile { proto: self.proto, placement: self.placement.compose(s), decorations }
    }

    pub fn chirality(&self) -> bool {
        self.placement.reflect
    }

    pub fn is_decorated(&self) -> bool {
        !self.decorations.is_empty()
    }

    pub fn vertices(&self) -> Vec<Point> {
        self.proto.reference_vertices().iter().map(|v| self.placement.apply(v)).collect()
    }

    pub fn embedded_vertices(&self) -> Vec<Complex64> {
        self.vertices().iter().map(|v| v.embed()).collect()
    }

    pub fn centroid(&self) -> Complex64 {
        let v = self.embedded_vertices();
        v.iter().sum::<Complex64>() / v.len() as f64
    }

    /// Arrowed edges in absolute form: `(tail, head, kind)` for decorated edges.
    pub fn arrowed_edges(&self) -> Vec<(Point, Point, Option<ArrowKind>)> {
        let v = self.vertices();
        let m = v.len();
        (0..m)
            .map(|i| {
                let (p, q) = (v[i], v[(i + 1) % m]);
                match self.decorations.get(i).copied().flatten() {
                    Some(EdgeArrow { kind, forward: true }) => (p, q, Some(kind)),
                    Some(EdgeArrow { kind, forward: false }) => (q, p, Some(kind)),
                    None => (p, q, None),
                }
            })
            .collect()
    }

    /// Control point of a pinwheel triangle (fixed under the substitution
    /// map that sends the parent onto its central child).
    pub fn control_point(&self) -> Option<Point> {
        (self.proto == Prototile::PinwheelTriangle).then(|| self.placement.apply(&pinwheel_control_point()))
    }

    pub fn translated(&self, t: &CycloNumber) -> Tile {
        Tile::with_decorations(
            self.proto,
            Isometry::translation(*t).compose(&self.placement),
            self.decorations.clone(),
        )
    }

    pub fn transformed(&self, g: &Isometry) -> Tile {
        Tile::with_decorations(self.proto, g.compose(&self.placement), self.decorations.clone())
    }
}

fn canonical_key(t: &Tile) -> (bool, CycloNumber, CycloNumber, Vec<Option<EdgeArrow>>) {
    (t.placement.reflect, t.placement.rot, t.placement.trans, t.decorations.clone())
}

/// Control point `(1 + i)/2` of the reference pinwheel triangle: the fixed
/// point of the child that is a pure translate of the inflated reference
/// (`x ↦ x + i` in the frame `λ·ref`), so inflation keeps it in place.
pub fn pinwheel_control_point() -> Point {
    CycloNumber::from_coeffs(4, &[Rational::new(1, 2), Rational::new(1, 2)]).unwrap()
}

/// Finite set of placed tiles from one tiling system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    pub system: TilingSystem,
    pub tiles: Vec<Tile>,
}

impl Patch {
    pub fn new(system: TilingSystem, tiles: Vec<Tile>) -> Result<Self> {
        for t in &tiles {
            if t.proto.system() != system {
                return Err(Error::SystemMismatch {
                    expected: system.to_string(),
                    found: t.proto.system().to_string(),
                });
            }
        }
        Ok(Patch { system, tiles })
    }

    pub fn empty(system: TilingSystem) -> Self {
        Patch { system, tiles: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    /// Tile counts in the order of [`TilingSystem::prototiles`].
    pub fn type_counts(&self) -> Vec<usize> {
        let protos = self.system.prototiles();
        let mut counts = vec![0; protos.len()];
        for t in &self.tiles {
            let i = protos.iter().position(|p| *p == t.proto).unwrap();
            counts[i] += 1;
        }
        counts
    }

    /// Total exact area form of the patch.
    pub fn area_form(&self) -> CycloNumber {
        self.tiles
            .iter()
            .fold(CycloNumber::zero(self.system.field()), |acc, t| acc + unsigned_area_form(&t.vertices()))
    }

    pub fn tile_set(&self) -> HashSet<Tile> {
        self.tiles.iter().cloned().collect()
    }

    /// Tile-wise containment as exact placements.
    pub fn is_subpatch_of(&self, other: &Patch) -> bool {
        let set = other.tile_set();
        self.tiles.iter().all(|t| set.contains(t))
    }

    pub fn apply_isometry(&self, g: &Isometry) -> Result<Patch> {
        if g.index() != self.system.field() {
            return Err(Error::IndexMismatch(self.system.field(), g.index()));
        }
        Ok(Patch { system: self.system, tiles: self.tiles.iter().map(|t| t.transformed(g)).collect() })
    }

    pub fn vertices(&self) -> Vec<Point> {
        let mut v: Vec<Point> = self.tiles.iter().flat_map(|t| t.vertices()).collect();
        v.sort();
        v.dedup();
        v
    }

    fn tile_index(&self) -> (Vec<Complex64>, SpatialIndex) {
        let c: Vec<Complex64> = self.tiles.iter().map(|t| t.centroid()).collect();
        let idx = SpatialIndex::new(&c, 2.5);
        (c, idx)
    }

    /// Pairs of tiles whose interiors overlap.
    pub fn overlapping_pairs(&self) -> Vec<(usize, usize)> {
        let (c, idx) = self.tile_index();
        let verts: Vec<Vec<Point>> = self.tiles.iter().map(|t| t.vertices()).collect();
        let mut out = Vec::new();
        for i in 0..self.tiles.len() {
            for j in idx.within(&c, c[i], 5.0) {
                if j > i && !super::predicates::convex_interiors_disjoint(&verts[i], &verts[j]) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Largest radius `W` such that `B_W(0)` is covered by the patch, so
    /// every tile of an ambient tiling meeting `B_W(0)` belongs to the patch.
    pub fn safe_window(&self) -> f64 {
        if self.tiles.is_empty() {
            return 0.0;
        }
        let (c, idx) = self.tile_index();
        let polys: Vec<Vec<Complex64>> = self.tiles.iter().map(|t| ccw_float(t.embedded_vertices())).collect();
        // an edge shared exactly by two tiles is interior; only the others
        // (boundary edges, and all edges of non edge-to-edge tilings) are probed
        let mut shared: HashMap<(Point, Point), usize> = HashMap::new();
        let exact: Vec<Vec<Point>> = self.tiles.iter().map(|t| t.vertices()).collect();
        for v in &exact {
            for e in 0..v.len() {
                let (a, b) = (v[e], v[(e + 1) % v.len()]);
                *shared.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut best = f64::INFINITY;
        for (i, poly) in polys.iter().enumerate() {
            let m = poly.len();
            let mut v = exact[i].clone();
            if v[0].embed() != poly[0] {
                v.reverse();
            }
            for e in 0..m {
                let (pa, pb) = (v[e], v[(e + 1) % m]);
                if shared[&(pa.min(pb), pa.max(pb))] >= 2 {
                    continue;
                }
                let (a, b) = (poly[e], poly[(e + 1) % m]);
                let d = b - a;
                let outward = Complex64::new(d.im, -d.re) / d.norm();
                let exposed = (1..20).any(|s| {
                    let p = a + d * (s as f64 / 20.0) + outward * 1e-6;
                    !idx.within(&c, p, 2.5).into_iter().any(|j| j != i && inside_float(&polys[j], p))
                });
                if exposed {
                    best = best.min(segment_distance_to_origin(a, b));
                }
            }
        }
        (best - 1e-7).max(0.0)
    }

    /// Vertex set (or, for the pinwheel, control-point set) complete in `B_window(0)`.
    pub fn vertex_set(&self, window: f64) -> Result<PointSet> {
        let safe = self.safe_window();
        if window > safe + EPS {
            return Err(Error::WindowExceeded { requested: window, window: safe });
        }
        let pts: Vec<Point> = match self.system {
            TilingSystem::Pinwheel => self.tiles.iter().filter_map(|t| t.control_point()).collect(),
            _ => self.vertices(),
        };
        let pts = pts.into_iter().filter(|p| within(p.embed(), window)).collect();
        PointSet::new(self.system.field(), 2, pts, window)
    }

    /// Vertex set over the largest safe window.
    pub fn full_vertex_set(&self) -> Result<PointSet> {
        self.vertex_set(self.safe_window())
    }

    /// Tiles lying inside the closed ball `B_r(0)`.
    pub fn tiles_within(&self, r: f64) -> Vec<&Tile> {
        self.tiles.iter().filter(|t| t.vertices().iter().all(|v| within(v.embed(), r))).collect()
    }

    pub fn signed_area_forms(&self) -> Vec<CycloNumber> {
        self.tiles.iter().map(|t| area_form(&t.vertices())).collect()
    }

    /// Map from exact vertex to incident tile indices.
    pub fn incidence(&self) -> HashMap<Point, Vec<usize>> {
        let mut m: HashMap<Point, Vec<usize>> = HashMap::new();
        for (i, t) in self.tiles.iter().enumerate() {
            for v in t.vertices() {
                m.entry(v).or_default().push(i);
            }
        }
        m
    }
}

fn ccw_float(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let mut a = 0.0;
    for i in 0..v.len() {
        let (p, q) = (v[i], v[(i + 1) % v.len()]);
        a += p.re * q.im - p.im * q.re;
    }
    if a < 0.0 {
        v.reverse();
    }
    v
}

fn inside_float(poly: &[Complex64], p: Complex64) -> bool {
    let m = poly.len();
    (0..m).all(|i| {
        let (a, b) = (poly[i], poly[(i + 1) % m]);
        let d = b - a;
        let w = p - a;
        d.re * w.im - d.im * w.re > -1e-12
    })
}

fn segment_distance_to_origin(a: Complex64, b: Complex64) -> f64 {
    let d = b - a;
    let t = (-(a.re * d.re + a.im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
    (a + d * t).norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_edges_have_prototile_lengths() {
        let sq = |p: Prototile| -> Vec<f64> {
            let v = p.reference_vertices();
            (0..v.len()).map(|i| (v[(i + 1) % v.len()] - v[i]).norm_sq().embed().re).collect()
        };
        for l in sq(Prototile::AbRhombus) {
            assert!((l - 1.0).abs() < 1e-12);
        }
        let t = sq(Prototile::PinwheelTriangle);
        assert!((t[0] - 1.0).abs() < 1e-12 && (t[1] - 4.0).abs() < 1e-12 && (t[2] - 5.0).abs() < 1e-12);
        let h = sq(Prototile::PenroseThickHalf);
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((h[2] - tau * tau).abs() < 1e-12);
    }

    #[test]
    fn symmetries_fix_reference_sets() {
        for p in [Prototile::AbRhombus, Prototile::PenroseThick, Prototile::PenroseThin] {
            let mut r = p.reference_vertices();
            r.sort();
            for s in p.symmetries() {
                let mut img: Vec<Point> = p.reference_vertices().iter().map(|v| s.apply(v)).collect();
                img.sort();
                assert_eq!(img, r, "{p:?}");
                // decorations are invariant too
                let t = Tile::new(p, Isometry::identity(p.field()));
                assert_eq!(t.precompose(&s).decorations, t.decorations, "{p:?}");
            }
        }
    }

    #[test]
    fn canonical_placement_identifies_mirrored_rhombus() {
        let p = Prototile::PenroseThick;
        let m = p.symmetries()[1];
        let a = Tile::new(p, Isometry::identity(5));
        let b = Tile::new(p, m);
        assert_eq!(a, b);
        assert!(!a.placement.reflect);
    }

    #[test]
    fn arrow_text_round_trip() {
        for s in ["s+", "s-", "d+", "d-"] {
            assert_eq!(s.parse::<EdgeArrow>().unwrap().to_string(), s);
        }
        assert!("x+".parse::<EdgeArrow>().is_err());
    }

    #[test]
    fn single_square_vertex_set() {
        let i = CycloNumber::zeta_pow(8, 2);
        let t1 = Tile::new(Prototile::AbTriangle, Isometry::identity(8));
        let t2 = Tile::new(Prototile::AbTriangle, Isometry { rot: i, reflect: true, trans: CycloNumber::zero(8) });
        let p = Patch::new(TilingSystem::AmmannBeenker, vec![t1, t2]).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert!(p.overlapping_pairs().is_empty());
        // the square covers no centred ball beyond its corner
        assert!(p.safe_window() < 1e-6);
    }
}
