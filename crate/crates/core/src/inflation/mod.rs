//! Stone inflations for the Ammann–Beenker, rhombic Penrose and pinwheel
//! tilings, fixed-point patches, and the derived vertex sets.
//!
//! A rule lists, for each parent prototile, the children of the inflated
//! reference parent `λ · ref(P)`. A parent placed by `g` yields the child
//! placements `g_λ ∘ h`, with `g_λ(x) = λ · g(x/λ)`.
//!
//! Penrose inflation runs on Robinson halves. Rhombi are split before each
//! step and pairs of halves with a common base are merged afterwards; halves
//! whose partner lies outside the patch stay as half tiles.

mod matching;
mod reconstruct;
mod rules;

use std::collections::HashMap;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::{consts, CycloNumber};
use crate::error::{Error, Result};
use crate::geometry::predicates::{convex_interiors_disjoint, point_in_convex, unsigned_area_form};
use crate::geometry::{pinwheel_control_point, Isometry, Patch, Point, Prototile, Tile, TilingSystem};

pub use matching::{validate_matching_rules, MatchingReport, Violation};
pub use reconstruct::{interior_tiles, reconstruct_tiling, ReconstructionAtlas, INTERIOR_MARGIN};
pub use rules::{place, Child, InflationRule, SubstitutionMatrix};

/// Seeds accepted by [`fixed_point_patch`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Seed {
    AbSquare,
    AbOctagon,
    PenroseSun,
    PinwheelOrigin,
}

impl Seed {
    pub fn system(&self) -> TilingSystem {
        match self {
            Seed::AbSquare | Seed::AbOctagon => TilingSystem::AmmannBeenker,
            Seed::PenroseSun => TilingSystem::Penrose,
            Seed::PinwheelOrigin => TilingSystem::Pinwheel,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Seed::AbSquare => "ab-square",
            Seed::AbOctagon => "ab-octagon",
            Seed::PenroseSun => "penrose-sun",
            Seed::PinwheelOrigin => "pinwheel-origin",
        }
    }

    /// Number of single inflation steps per unit of `k`.
    pub fn steps_per_level(&self) -> usize {
        match self {
            Seed::AbSquare | Seed::PenroseSun => 2,
            Seed::AbOctagon | Seed::PinwheelOrigin => 1,
        }
    }
}

impl std::fmt::Display for Seed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Seed {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ab-square" => Ok(Seed::AbSquare),
            "ab-octagon" => Ok(Seed::AbOctagon),
            "penrose-sun" | "penrose-d5-sun" => Ok(Seed::PenroseSun),
            "pinwheel-origin" => Ok(Seed::PinwheelOrigin),
            _ => Err(Error::Parse(format!("unknown seed `{s}`"))),
        }
    }
}

/// Cached rule for a system.
pub fn rule(system: TilingSystem) -> &'static InflationRule {
    static AB: OnceLock<InflationRule> = OnceLock::new();
    static PEN: OnceLock<InflationRule> = OnceLock::new();
    static PIN: OnceLock<InflationRule> = OnceLock::new();
    let cell = match system {
        TilingSystem::AmmannBeenker => &AB,
        TilingSystem::Penrose => &PEN,
        TilingSystem::Pinwheel => &PIN,
    };
    cell.get_or_init(|| InflationRule::for_system(system))
}

fn split_penrose(t: &Tile) -> Vec<Tile> {
    match t.proto.as_half() {
        Some(half) => {
            let m = t.proto.symmetries()[1];
            vec![Tile::new(half, t.placement), Tile::new(half, t.placement.compose(&m))]
        }
        None => vec![t.clone()],
    }
}

fn merge_penrose(halves: Vec<Tile>) -> Vec<Tile> {
    let mut slot: HashMap<Tile, usize> = HashMap::new();
    let mut out: Vec<Option<Tile>> = Vec::with_capacity(halves.len());
    for h in halves {
        let rh = Tile::new(h.proto.as_rhombus().expect("half tile"), h.placement);
        if let Some(i) = slot.remove(&rh) {
            out[i] = Some(rh);
        } else {
            slot.insert(rh, out.len());
            out.push(Some(h));
        }
    }
    out.into_iter().flatten().collect()
}

/// One inflation step under an explicit rule.
pub fn inflate_once_with(rule: &InflationRule, p: &Patch) -> Result<Patch> {
    if rule.system != p.system {
        return Err(Error::SystemMismatch { expected: rule.system.to_string(), found: p.system.to_string() });
    }
    let lam = rule.factor;
    let tiles: Vec<Tile> = if p.system == TilingSystem::Penrose {
        p.tiles.iter().flat_map(split_penrose).collect()
    } else {
        p.tiles.clone()
    };
    let children: Vec<Vec<Tile>> = tiles
        .par_iter()
        .map(|t| {
            let g = t.placement.conjugate_by_scaling(&lam).expect("nonzero factor");
            rule.children_of(t.proto).iter().map(|c| Tile::new(c.proto, g.compose(&c.placement))).collect()
        })
        .collect();
    let mut out: Vec<Tile> = children.into_iter().flatten().collect();
    if p.system == TilingSystem::Penrose {
        out = merge_penrose(out);
    }
    Patch::new(p.system, out)
}

/// Applies the inflation rule of `p.system` `steps` times.
pub fn inflate(p: &Patch, steps: usize) -> Result<Patch> {
    let r = rule(p.system);
    let mut cur = p.clone();
    for _ in 0..steps {
        cur = inflate_once_with(r, &cur)?;
    }
    Ok(cur)
}

/// Tile counts predicted by the substitution matrix. For Penrose patches
/// the count is returned in rhombus units (full rhombi plus half the halves).
pub fn predicted_counts(p: &Patch, steps: usize) -> Vec<u64> {
    let m = rule(p.system).substitution_matrix();
    let c = p.type_counts();
    let v: Vec<u64> = match p.system {
        TilingSystem::Penrose => vec![c[0] as u64 + 2 * c[2] as u64, c[1] as u64 + 2 * c[3] as u64],
        _ => c.iter().map(|x| *x as u64).collect(),
    };
    m.apply_power(&v, steps)
}

/// Counts in the units of [`predicted_counts`].
pub fn half_unit_counts(p: &Patch) -> Vec<u64> {
    let c = p.type_counts();
    match p.system {
        TilingSystem::Penrose => vec![c[0] as u64 + 2 * c[2] as u64, c[1] as u64 + 2 * c[3] as u64],
        _ => c.iter().map(|x| *x as u64).collect(),
    }
}

fn ab_square_seed(offset: Point) -> Vec<Tile> {
    let i = CycloNumber::zeta_pow(8, 2);
    let one = CycloNumber::one(8);
    let zero = CycloNumber::zero(8);
    [vec![zero, one, one + i], vec![zero, i, one + i]]
        .into_iter()
        .map(|v| {
            let v: Vec<Point> = v.into_iter().map(|x| x + offset).collect();
            Tile::new(Prototile::AbTriangle, place(Prototile::AbTriangle, &v).unwrap())
        })
        .collect()
}

/// Offset `s` for which the square seed `S + s` is reproduced by the
/// squared rule: the twice inflated seed contains a translate `S + q`, and
/// `s = −q/(λ² − 1)` turns it into a fixed point. Among the candidates the
/// one on the diagonal of the square with the origin inside the seed is used.
fn ab_square_offset() -> Point {
    static OFF: OnceLock<Point> = OnceLock::new();
    *OFF.get_or_init(|| {
        let base = Patch::new(TilingSystem::AmmannBeenker, ab_square_seed(CycloNumber::zero(8))).unwrap();
        let p2 = inflate(&base, 2).unwrap();
        let set = p2.tile_set();
        let lam2 = consts::silver_mean() * consts::silver_mean();
        let denom = (lam2 - CycloNumber::one(8)).inverse().unwrap();
        let seed = &base.tiles;
        let mut cands: Vec<(bool, Point)> = Vec::new();
        for t in &p2.tiles {
            if t.proto != Prototile::AbTriangle
                || t.placement.rot != seed[0].placement.rot
                || t.placement.reflect != seed[0].placement.reflect
            {
                continue;
            }
            let q = t.placement.trans - seed[0].placement.trans;
            if !set.contains(&seed[1].translated(&q)) {
                continue;
            }
            let s = -(q * denom);
            // origin inside S + s  ⇔  −s inside the reference square
            let sq: Vec<Point> = [[0, 0], [1, 0], [1, 1], [0, 1]]
                .iter()
                .map(|c| CycloNumber::from_int(8, c[0]) + CycloNumber::zeta_pow(8, 2).scale_int(c[1]) + s)
                .collect();
            if point_in_convex(&sq, &CycloNumber::zero(8)) {
                let e = q.embed();
                cands.push(((e.re - e.im).abs() < 1e-9, s));
            }
        }
        cands.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        cands.first().expect("square seed admits a fixed point").1
    })
}

fn ab_octagon_seed() -> Vec<Tile> {
    use Prototile::*;
    let z = |k: i64| CycloNumber::zeta_pow(8, k);
    let zero = CycloNumber::zero(8);
    let mut tiles = Vec::new();
    for k in 0..8 {
        tiles.push(Tile::new(AbRhombus, place(AbRhombus, &[zero, z(k), z(k) + z(k + 1), z(k + 1)]).unwrap()));
    }
    for k in 0..8 {
        let t_prev = z(k - 1) + z(k);
        let t_next = z(k) + z(k + 1);
        let q = z(k - 1) + z(k) + z(k + 1);
        // square at ζ^k cut along its radial diagonal
        tiles.push(Tile::new(AbTriangle, place(AbTriangle, &[z(k), t_next, q]).unwrap()));
        tiles.push(Tile::new(AbTriangle, place(AbTriangle, &[z(k), t_prev, q]).unwrap()));
    }
    for k in 0..8 {
        let t = z(k) + z(k + 1);
        let q0 = z(k - 1) + z(k) + z(k + 1);
        let q1 = z(k) + z(k + 1) + z(k + 2);
        let o = z(k - 1) + z(k) + z(k + 1) + z(k + 2);
        let g = place(AbRhombus, &[q0, t, q1, o]).or_else(|_| place(AbRhombus, &[q0, o, q1, t])).unwrap();
        tiles.push(Tile::new(AbRhombus, g));
    }
    tiles
}

fn penrose_sun_seed() -> Vec<Tile> {
    let z = |k: i64| CycloNumber::zeta_pow(5, k);
    let zero = CycloNumber::zero(5);
    (0..5)
        .map(|k| {
            let v = [z(k) + z(k + 1), z(k), zero, z(k + 1)];
            let g = place(Prototile::PenroseThick, &v).unwrap();
            Tile::new(Prototile::PenroseThick, g)
        })
        .collect()
}

fn pinwheel_seed() -> Vec<Tile> {
    let g = Isometry::translation(-pinwheel_control_point());
    vec![Tile::new(Prototile::PinwheelTriangle, g)]
}

/// Seed patch (level 0) of a fixed-point construction.
pub fn seed_patch(seed: Seed) -> Patch {
    let tiles = match seed {
        Seed::AbSquare => ab_square_seed(ab_square_offset()),
        Seed::AbOctagon => ab_octagon_seed(),
        Seed::PenroseSun => penrose_sun_seed(),
        Seed::PinwheelOrigin => pinwheel_seed(),
    };
    Patch::new(seed.system(), tiles).unwrap()
}

/// Level-`k` patch of the fixed-point tiling grown from `seed`.
pub fn fixed_point_patch(system: TilingSystem, seed: Seed, k: usize) -> Result<Patch> {
    if seed.system() != system {
        return Err(Error::IllegalSeed { system: system.to_string(), seed: seed.to_string() });
    }
    inflate(&seed_patch(seed), k * seed.steps_per_level())
}

/// Outcome of [`verify_stone_inflation`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoneReport {
    pub area_ok: bool,
    pub disjoint_ok: bool,
    pub cover_ok: bool,
    pub matrix: SubstitutionMatrix,
    pub perron_ok: bool,
}

impl StoneReport {
    pub fn passed(&self) -> bool {
        self.area_ok && self.disjoint_ok && self.cover_ok && self.perron_ok
    }
}

/// Exact check of the stone property: children areas add up to `|λ|²`
/// times the parent area, children have pairwise disjoint interiors, and
/// every child lies in the inflated parent. Together these give a partition.
pub fn verify_stone_inflation(rule: &InflationRule) -> StoneReport {
    let lam = rule.factor;
    let lam2 = lam * lam.conj();
    let (mut area_ok, mut disjoint_ok, mut cover_ok) = (true, true, true);
    for (p, kids) in &rule.children {
        let parent: Vec<Point> = p.reference_vertices().iter().map(|v| lam * *v).collect();
        let polys: Vec<Vec<Point>> = kids
            .iter()
            .map(|c| c.proto.reference_vertices().iter().map(|v| c.placement.apply(v)).collect())
            .collect();
        let total = polys.iter().fold(CycloNumber::zero(lam.index()), |acc, v| acc + unsigned_area_form(v));
        area_ok &= total == unsigned_area_form(&p.reference_vertices()) * lam2;
        area_ok &= unsigned_area_form(&parent) == unsigned_area_form(&p.reference_vertices()) * lam2;
        for i in 0..polys.len() {
            for j in i + 1..polys.len() {
                disjoint_ok &= convex_interiors_disjoint(&polys[i], &polys[j]);
            }
            cover_ok &= polys[i].iter().all(|v| point_in_convex(&parent, v));
        }
    }
    let matrix = rule.substitution_matrix();
    let perron_ok = (matrix.perron_eigenvalue() - lam2.embed().re).abs() < 1e-9;
    StoneReport { area_ok, disjoint_ok, cover_ok, matrix, perron_ok }
}

/// Distinct tile orientations `(rot, reflect)` modulo the tile symmetry.
pub fn orientation_count(p: &Patch) -> usize {
    let mut set: Vec<(CycloNumber, bool)> = p.tiles.iter().map(|t| (t.placement.rot, t.placement.reflect)).collect();
    set.sort();
    set.dedup();
    set.len()
}

/// Exact signed area form of a patch scaled by the squared factor `k` times.
pub fn expected_area_form(p: &Patch, steps: usize) -> CycloNumber {
    let lam = rule(p.system).factor;
    let lam2 = lam * lam.conj();
    (0..steps).fold(p.area_form(), |acc, _| acc * lam2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stone_property_of_all_rules() {
        for s in [TilingSystem::AmmannBeenker, TilingSystem::Penrose, TilingSystem::Pinwheel] {
            let r = verify_stone_inflation(rule(s));
            assert!(r.passed(), "{s}: {r:?}");
            let bad = verify_stone_inflation(&rule(s).corrupted());
            assert!(!(bad.disjoint_ok && bad.cover_ok), "{s}");
        }
    }

    #[test]
    fn substitution_matrices() {
        assert_eq!(rule(TilingSystem::AmmannBeenker).substitution_matrix().entries, vec![vec![3, 4], vec![2, 3]]);
        assert_eq!(rule(TilingSystem::Penrose).substitution_matrix().entries, vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(rule(TilingSystem::Pinwheel).substitution_matrix().entries, vec![vec![5]]);
    }

    #[test]
    fn octagon_seed_counts_and_nesting() {
        let s = seed_patch(Seed::AbOctagon);
        assert_eq!(s.type_counts(), vec![16, 16]);
        assert!(s.overlapping_pairs().is_empty());
        let p1 = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 1).unwrap();
        assert!(s.is_subpatch_of(&p1));
    }

    #[test]
    fn square_seed_nesting() {
        let p1 = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbSquare, 1).unwrap();
        let p2 = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbSquare, 2).unwrap();
        assert!(seed_patch(Seed::AbSquare).is_subpatch_of(&p1));
        assert!(p1.is_subpatch_of(&p2));
    }

    #[test]
    fn sun_nesting_and_counts() {
        let s = seed_patch(Seed::PenroseSun);
        let p1 = fixed_point_patch(TilingSystem::Penrose, Seed::PenroseSun, 1).unwrap();
        assert!(!s.is_subpatch_of(&p1));
        assert_eq!(half_unit_counts(&p1), predicted_counts(&s, 2));
        assert!(p1.overlapping_pairs().is_empty());
        // the arrowed sun comes back after four single steps
        let p2 = fixed_point_patch(TilingSystem::Penrose, Seed::PenroseSun, 2).unwrap();
        assert!(s.is_subpatch_of(&p2));
    }

    #[test]
    fn pinwheel_counts_and_area() {
        let s = seed_patch(Seed::PinwheelOrigin);
        for k in 0..4 {
            let p = inflate(&s, k).unwrap();
            assert_eq!(p.len(), 5usize.pow(k as u32));
            assert_eq!(p.area_form(), expected_area_form(&s, k));
        }
        // one child keeps the control point at the origin
        let p1 = inflate(&s, 1).unwrap();
        assert!(p1.tiles.iter().any(|t| t.control_point().unwrap().is_zero()));
    }

    #[test]
    fn ab_area_and_counts() {
        let s = seed_patch(Seed::AbSquare);
        for k in 0..4 {
            let p = inflate(&s, k).unwrap();
            assert_eq!(half_unit_counts(&p), predicted_counts(&s, k));
            assert_eq!(p.area_form(), expected_area_form(&s, k));
        }
        assert!(inflate(&s, 3).unwrap().overlapping_pairs().is_empty());
    }
}
