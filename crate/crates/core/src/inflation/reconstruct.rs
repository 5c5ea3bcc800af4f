use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};
use crate::geometry::{within, Patch, Point, PointSet, SpatialIndex, Tile, TilingSystem};

use super::{fixed_point_patch, Seed};

/// Margin (in edge lengths) between the window and the reconstructed region.
pub const INTERIOR_MARGIN: f64 = 3.0;

/// Local derivation rule from vertex neighbourhoods to decorated tiles.
///
/// Every vertex of a legal Ammann–Beenker patch is mapped, via the set of
/// vertices within `radius` of it, to its incident decorated tiles. The
/// table is read off large legal patches and is only accepted when the
/// neighbourhood determines the tiles uniquely.
#[derive(Clone, Debug)]
pub struct ReconstructionAtlas {
    pub radius: f64,
    table: HashMap<Vec<Point>, Vec<Tile>>,
}

fn neighbourhood(points: &[Point], emb: &[Complex64], idx: &SpatialIndex, i: usize, r: f64) -> Vec<Point> {
    let mut key: Vec<Point> = idx
        .within(emb, emb[i], r + 1e-9)
        .into_iter()
        .filter(|&j| within(emb[j] - emb[i], r))
        .map(|j| points[j] - points[i])
        .collect();
    key.sort();
    key
}

impl ReconstructionAtlas {
    /// Builds the table from the given patches; `None` if some neighbourhood
    /// of radius `radius` is compatible with two different tile stars.
    pub fn build(patches: &[Patch], radius: f64) -> Option<Self> {
        let mut table: HashMap<Vec<Point>, Vec<Tile>> = HashMap::new();
        for p in patches {
            let safe = p.safe_window();
            let verts = p.vertices();
            let emb: Vec<Complex64> = verts.iter().map(|v| v.embed()).collect();
            let idx = SpatialIndex::new(&emb, radius.max(1.0));
            let inc = p.incidence();
            for (i, v) in verts.iter().enumerate() {
                if !within(emb[i], safe - radius - 2.0) {
                    continue;
                }
                let key = neighbourhood(&verts, &emb, &idx, i, radius);
                let mut star: Vec<Tile> = inc[v].iter().map(|&t| p.tiles[t].translated(&-*v)).collect();
                star.sort_by_key(tile_key);
                match table.get(&key) {
                    Some(old) if *old != star => return None,
                    Some(_) => {}
                    None => {
                        table.insert(key, star);
                    }
                }
            }
        }
        Some(ReconstructionAtlas { radius, table })
    }

    /// The atlas used by [`reconstruct_tiling`]: smallest tested radius with
    /// a consistent table over large octagon- and square-seeded patches.
    pub fn standard() -> &'static ReconstructionAtlas {
        static ATLAS: OnceLock<ReconstructionAtlas> = OnceLock::new();
        ATLAS.get_or_init(|| {
            let patches = [
                fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 3).unwrap(),
                fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbSquare, 2).unwrap(),
            ];
            [1.5, 2.0, 2.5, 3.0]
                .iter()
                .find_map(|&r| Self::build(&patches, r))
                .expect("vertex neighbourhoods determine the tiles")
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn lookup(&self, key: &[Point]) -> Option<&Vec<Tile>> {
        self.table.get(key)
    }

    /// Position of a single missing point explaining an unknown neighbourhood.
    fn missing_point(&self, key: &[Point]) -> Option<Point> {
        let have: HashSet<&Point> = key.iter().collect();
        self.table.keys().filter(|k| k.len() == key.len() + 1).find_map(|k| {
            let extra: Vec<&Point> = k.iter().filter(|p| !have.contains(p)).collect();
            (extra.len() == 1 && key.iter().all(|p| k.binary_search(p).is_ok())).then(|| *extra[0])
        })
    }
}

fn tile_key(t: &Tile) -> (crate::geometry::Prototile, bool, CycloNumber, CycloNumber) {
    (t.proto, t.placement.reflect, t.placement.rot, t.placement.trans)
}

/// Rebuilds the decorated Ammann–Beenker tiles from a vertex set.
///
/// Tiles are recovered on `B_{W−3}(0)`, `W` the window of `s`: the result
/// contains exactly the tiles with all vertices in that ball.
pub fn reconstruct_tiling(s: &PointSet) -> Result<Patch> {
    if s.field() != 8 {
        return Err(Error::SystemMismatch { expected: "ab".into(), found: format!("Q(zeta_{})", s.field()) });
    }
    let atlas = ReconstructionAtlas::standard();
    let inner = s.window() - INTERIOR_MARGIN;
    if inner < 1.0 {
        return Err(Error::ReconstructionFailure { x: 0.0, y: 0.0, reason: "window leaves no interior region".into() });
    }
    let pts = s.points();
    let emb = s.embedded();
    let idx = SpatialIndex::new(&emb, atlas.radius.max(1.0));
    let mut tiles: Vec<Tile> = Vec::new();
    let mut failures: Vec<(usize, Vec<Point>)> = Vec::new();
    for i in 0..pts.len() {
        if !within(emb[i], inner) {
            continue;
        }
        let key = neighbourhood(pts, &emb, &idx, i, atlas.radius);
        match atlas.lookup(&key) {
            Some(star) => tiles.extend(star.iter().map(|t| t.translated(&pts[i]))),
            None => failures.push((i, key)),
        }
    }
    if !failures.is_empty() {
        // a single deleted point shows up as unknown neighbourhoods around it
        let mut votes: HashMap<Point, usize> = HashMap::new();
        for (i, key) in &failures {
            if let Some(d) = atlas.missing_point(key) {
                *votes.entry(pts[*i] + d).or_default() += 1;
            }
        }
        let at = votes
            .into_iter()
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .map(|(p, _)| p.embed())
            .unwrap_or_else(|| {
                failures.iter().map(|(i, _)| emb[*i]).sum::<Complex64>() / failures.len() as f64
            });
        return Err(Error::ReconstructionFailure {
            x: at.re,
            y: at.im,
            reason: format!("{} vertex neighbourhoods are not Ammann-Beenker legal", failures.len()),
        });
    }
    let mut seen = HashSet::new();
    tiles.retain(|t| t.vertices().iter().all(|v| within(v.embed(), inner)) && seen.insert(t.clone()));
    tiles.sort_by_key(tile_key);
    Patch::new(TilingSystem::AmmannBeenker, tiles)
}

/// Tiles of `p` inside the reconstruction region of a window `w`, in the
/// order used by [`reconstruct_tiling`].
pub fn interior_tiles(p: &Patch, w: f64) -> Vec<Tile> {
    let inner = w - INTERIOR_MARGIN;
    let mut t: Vec<Tile> = p.tiles_within(inner).into_iter().cloned().collect();
    t.sort_by_key(tile_key);
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_on_octagon_patch() {
        let p = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 2).unwrap();
        let w = p.safe_window();
        let s = p.vertex_set(w).unwrap();
        let r = reconstruct_tiling(&s).unwrap();
        assert!(!r.is_empty());
        assert_eq!(r.tiles, interior_tiles(&p, w));
    }

    #[test]
    fn deleted_point_is_located() {
        let p = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 2).unwrap();
        let w = p.safe_window();
        let s = p.vertex_set(w).unwrap();
        let victim = s.points().iter().find(|v| (v.embed() - Complex64::new(2.0, 1.0)).norm() < 1.2).copied().unwrap();
        let rest: Vec<Point> = s.points().iter().copied().filter(|v| *v != victim).collect();
        let broken = PointSet::new(8, 2, rest, w).unwrap();
        match reconstruct_tiling(&broken) {
            Err(Error::ReconstructionFailure { x, y, .. }) => {
                assert!((Complex64::new(x, y) - victim.embed()).norm() < 1e-9);
            }
            other => panic!("expected failure, got {other:?}"),
        }
    }

    #[test]
    fn tiny_window_fails() {
        let p = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 0).unwrap();
        let s = p.vertex_set(2.0).unwrap();
        assert!(matches!(reconstruct_tiling(&s), Err(Error::ReconstructionFailure { .. })));
    }
}
