//! Finite-scale checks of Delone-set notions: packing and covering radii,
//! finite local complexity, cluster classes, repetitivity, local
//! indistinguishability, and the local and rubber topologies.
//!
//! Every result is a certificate at the stated scale. Clusters are closed
//! balls `Λ ∩ B_ρ(x)` translated to the anchor `x`, and anchors are taken
//! from `B_{W−ρ}(0)` so that no cluster reads outside the window `W`.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{within, Point, PointSet, SpatialIndex, EPS};

/// Packing and covering radii of a windowed set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeloneReport {
    /// Half the minimal distance between interior points.
    pub r: f64,
    /// Exact squared minimal distance.
    pub min_distance_sq: Point,
    /// Largest sampled distance from the interior to the set.
    pub covering_r: f64,
    /// Grid spacing of the covering samples.
    pub grid_spacing: f64,
    /// Radius of the interior ball `B_{W−margin}`.
    pub interior: f64,
    /// Set when some sample was farther than the margin from every point,
    /// so the covering estimate may have read past the window.
    pub sparse_warning: bool,
}

pub fn delone_radii(s: &PointSet, margin: f64) -> Result<DeloneReport> {
    let interior = s.window() - margin;
    let emb = s.embedded();
    let inner: Vec<usize> = (0..emb.len()).filter(|&i| within(emb[i], interior)).collect();
    if interior <= 0.0 || inner.len() < 2 {
        return Err(Error::TooFewPoints(format!("{} points in B_{interior}", inner.len())));
    }
    let spread = emb.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let idx = SpatialIndex::new(&emb, (spread / 64.0).max(0.25));
    let mut best: Option<(f64, Point)> = None;
    for &i in &inner {
        let mut r = idx.cell_size();
        loop {
            let near: Vec<usize> = idx.within(&emb, emb[i], r).into_iter().filter(|&j| j != i && inner.contains_sorted(j)).collect();
            if !near.is_empty() {
                for j in near {
                    let d = (s.points()[j] - s.points()[i]).norm_sq();
                    let df = d.embed().re;
                    if best.as_ref().map_or(true, |(b, _)| df < *b) {
                        best = Some((df, d));
                    }
                }
                break;
            }
            r *= 2.0;
        }
    }
    let (dmin, exact) = best.expect("two interior points");
    let r = dmin.sqrt() / 2.0;

    let h = r / 4.0;
    let n = (interior / h).floor() as i64;
    let two_d = s.dim() == 2;
    let samples: Vec<Complex64> = (-n..=n)
        .flat_map(|x| {
            let ys: Vec<i64> = if two_d { (-n..=n).collect() } else { vec![0] };
            ys.into_iter().map(move |y| Complex64::new(x as f64 * h, y as f64 * h))
        })
        .filter(|z| z.norm() <= interior)
        .collect();
    let covering: Vec<f64> = samples
        .par_iter()
        .map(|z| idx.nearest(&emb, *z, 2.0 * s.window() + 1.0).map_or(f64::INFINITY, |(_, d)| d))
        .collect();
    let covering_r = covering.iter().cloned().fold(0.0, f64::max);
    Ok(DeloneReport {
        r,
        min_distance_sq: exact,
        covering_r,
        grid_spacing: h,
        interior,
        sparse_warning: covering_r > margin,
    })
}

trait SortedContains {
    fn contains_sorted(&self, x: usize) -> bool;
}

impl SortedContains for Vec<usize> {
    fn contains_sorted(&self, x: usize) -> bool {
        self.binary_search(&x).is_ok()
    }
}

/// Number of distinct difference vectors of length `≤ radius` among the
/// points of `s` inside `B_window(0)`.
pub fn difference_count(s: &PointSet, radius: f64, window: f64) -> Result<usize> {
    if window > s.window() + EPS {
        return Err(Error::WindowExceeded { requested: window, window: s.window() });
    }
    let sub = s.restrict(window)?;
    Ok(crate::geometry::difference_set(&sub.with_window(f64::INFINITY), radius)?.len())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlcProfile {
    pub radius: f64,
    pub windows: Vec<f64>,
    pub counts: Vec<usize>,
    /// Counts agree on the last two windows.
    pub consistent: bool,
}

pub fn flc_profile(s: &PointSet, radius: f64, windows: &[f64]) -> Result<FlcProfile> {
    let counts = windows.iter().map(|&w| difference_count(s, radius, w)).collect::<Result<Vec<_>>>()?;
    let consistent = counts.len() >= 2 && counts[counts.len() - 1] == counts[counts.len() - 2];
    Ok(FlcProfile { radius, windows: windows.to_vec(), counts, consistent })
}

/// Translation class of ρ-clusters.
#[derive(Clone, Debug, PartialEq)]
pub struct ClusterClass {
    /// Cluster points relative to the anchor (which is `0`).
    pub representative: Vec<Point>,
    pub multiplicity: usize,
    pub radius: f64,
    /// Anchors (sorted) at which the class occurs.
    pub anchors: Vec<Point>,
}

impl ClusterClass {
    pub fn as_point_set(&self, field: u8, dim: u8) -> PointSet {
        PointSet::new(field, dim, self.representative.clone(), self.radius).expect("cluster of a valid set")
    }
}

/// `(anchor, cluster)` for every anchor in `B_{W−ρ}(0)`.
pub fn anchored_clusters(s: &PointSet, rho: f64) -> Vec<(Point, Vec<Point>)> {
    anchored_within(s, rho, s.window() - rho)
}

/// `(anchor, cluster)` for every anchor in `B_inner(0)`.
pub fn anchored_within(s: &PointSet, rho: f64, inner: f64) -> Vec<(Point, Vec<Point>)> {
    let emb = s.embedded();
    let idx = SpatialIndex::new(&emb, rho.max(0.5));
    (0..emb.len())
        .into_par_iter()
        .filter(|&i| within(emb[i], inner))
        .map(|i| {
            let p = s.points()[i];
            let mut key: Vec<Point> = idx
                .within(&emb, emb[i], rho)
                .into_iter()
                .filter(|&j| within(emb[j] - emb[i], rho))
                .map(|j| s.points()[j] - p)
                .collect();
            key.sort();
            (p, key)
        })
        .collect()
}

pub(crate) fn check_rho(s: &PointSet, rho: f64) -> Result<()> {
    if rho > s.window() / 4.0 + EPS {
        return Err(Error::WindowExceeded { requested: 4.0 * rho, window: s.window() });
    }
    Ok(())
}

/// Translation classes of ρ-clusters, ordered by representative.
pub fn cluster_classes(s: &PointSet, rho: f64) -> Result<Vec<ClusterClass>> {
    check_rho(s, rho)?;
    let mut map: BTreeMap<Vec<Point>, Vec<Point>> = BTreeMap::new();
    for (a, key) in anchored_clusters(s, rho) {
        map.entry(key).or_default().push(a);
    }
    Ok(map
        .into_iter()
        .map(|(representative, mut anchors)| {
            anchors.sort();
            ClusterClass { representative, multiplicity: anchors.len(), radius: rho, anchors }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Repetitivity {
    Witnessed { radius: f64, grid_spacing: f64 },
    NotWitnessed { largest_tested: f64 },
}

impl Repetitivity {
    pub fn radius(&self) -> Option<f64> {
        match self {
            Repetitivity::Witnessed { radius, .. } => Some(*radius),
            Repetitivity::NotWitnessed { .. } => None,
        }
    }
}

/// Smallest `Rep` (up to the grid) such that every ball `B_Rep(x)` with
/// `B_Rep(x) ⊂ B_{W−ρ}(0)` contains an anchor of every ρ-cluster class.
/// Radii above `(W − ρ)/2` are not tested.
pub fn repetitivity_radius(s: &PointSet, rho: f64) -> Result<Repetitivity> {
    let classes = cluster_classes(s, rho)?;
    let region = s.window() - rho;
    let cap = region / 2.0;
    let h = if s.dim() == 1 { (region / 2000.0).max(0.01) } else { (region / 200.0).max(0.05) };
    let n = (region / h).floor() as i64;
    let centers: Vec<Complex64> = (-n..=n)
        .flat_map(|x| {
            let ys: Vec<i64> = if s.dim() == 2 { (-n..=n).collect() } else { vec![0] };
            ys.into_iter().map(move |y| Complex64::new(x as f64 * h, y as f64 * h))
        })
        .filter(|z| z.norm() <= region)
        .collect();
    let class_idx: Vec<(Vec<Complex64>, SpatialIndex)> = classes
        .iter()
        .map(|c| {
            let e: Vec<Complex64> = c.anchors.iter().map(|a| a.embed()).collect();
            let idx = SpatialIndex::new(&e, (region / 32.0).max(0.5));
            (e, idx)
        })
        .collect();
    // f(x) = distance from x to the farthest-away class
    let f: Vec<(f64, f64)> = centers
        .par_iter()
        .map(|z| {
            let worst = class_idx
                .iter()
                .map(|(e, idx)| idx.nearest(e, *z, 2.0 * region).map_or(f64::INFINITY, |(_, d)| d))
                .fold(0.0, f64::max);
            (z.norm(), worst)
        })
        .collect();
    let g = |r: f64| f.iter().filter(|(n, _)| *n + r <= region + EPS).map(|(_, w)| *w).fold(0.0, f64::max);
    if g(cap) > cap {
        return Ok(Repetitivity::NotWitnessed { largest_tested: cap });
    }
    let (mut lo, mut hi) = (0.0, cap);
    if g(0.0) <= 0.0 {
        hi = 0.0;
    }
    while hi - lo > h / 4.0 {
        let mid = 0.5 * (lo + hi);
        if g(mid) <= mid {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Repetitivity::Witnessed { radius: hi, grid_spacing: h })
}

/// Which input lacks the counterexample cluster.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// A cluster of the first set missing from the second.
    First,
    /// A cluster of the second set missing from the first.
    Second,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiVerdict {
    pub indistinguishable: bool,
    pub rho: f64,
    /// Missing cluster (relative points) and the set it came from.
    pub counterexample: Option<(Side, Vec<Point>)>,
}

fn cluster_key_set(s: &PointSet, rho: f64, inner: f64) -> HashSet<Vec<Point>> {
    anchored_within(s, rho, inner).into_iter().map(|(_, k)| k).collect()
}

/// ρ-scale test of local indistinguishability.
///
/// Every ρ-cluster anchored in the core `B_{(W−ρ)/2}(0)` of one set must
/// occur, anchored anywhere in `B_{W−ρ}(0)`, in the other. Comparing cores
/// against full windows keeps clusters near the window edge, which a finite
/// sample may hold only once, from producing spurious verdicts.
pub fn li_indistinguishable(a: &PointSet, b: &PointSet, rho: f64) -> Result<LiVerdict> {
    if a.field() != b.field() {
        return Err(Error::IndexMismatch(a.field(), b.field()));
    }
    check_rho(a, rho)?;
    check_rho(b, rho)?;
    let core = |s: &PointSet| (s.window() - rho) / 2.0;
    let ka = cluster_key_set(a, rho, a.window() - rho);
    let kb = cluster_key_set(b, rho, b.window() - rho);
    let ca = cluster_key_set(a, rho, core(a));
    let cb = cluster_key_set(b, rho, core(b));
    let first_missing = |x: &HashSet<Vec<Point>>, y: &HashSet<Vec<Point>>| {
        let mut miss: Vec<&Vec<Point>> = x.iter().filter(|k| !y.contains(*k)).collect();
        miss.sort();
        miss.first().map(|k| (*k).clone())
    };
    let counterexample = first_missing(&ca, &kb)
        .map(|k| (Side::First, k))
        .or_else(|| first_missing(&cb, &ka).map(|k| (Side::Second, k)));
    Ok(LiVerdict {
        indistinguishable: counterexample.is_none(),
        rho,
        counterexample,
    })
}

/// Distance estimate with the data it rests on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TopologyDistance {
    pub epsilon: f64,
    pub translation: Option<Point>,
    /// Agreement extended to the edge of the windows, so only an upper
    /// bound was certified.
    pub window_limited: bool,
}

const GRID: f64 = 1e-6;

fn round_up(e: f64) -> f64 {
    (e / GRID).ceil() * GRID
}

/// Smallest `ε` with `b ∩ B_{1/ε} = (t + a) ∩ B_{1/ε}` for some `|t| ≤ ε`,
/// the ball capped by the windows. Translations are taken from differences
/// of points near the origin.
pub fn local_topology_distance(a: &PointSet, b: &PointSet) -> Result<TopologyDistance> {
    if a.field() != b.field() {
        return Err(Error::IndexMismatch(a.field(), b.field()));
    }
    let bset = b.hash_set();
    let ea = a.embedded();
    let eb = b.embedded();
    let near_a: Vec<usize> = (0..ea.len()).filter(|&i| ea[i].norm() <= 3.0).collect();
    let idx_b = SpatialIndex::new(&eb, 1.0);
    let mut cands: Vec<Point> = Vec::new();
    for &i in &near_a {
        for j in idx_b.within(&eb, ea[i], 1.0) {
            cands.push(b.points()[j] - a.points()[i]);
        }
    }
    cands.sort();
    cands.dedup();

    let mut best = TopologyDistance { epsilon: 1.0, translation: None, window_limited: false };
    for t in cands {
        let tn = t.embed().norm();
        let cap = b.window().min(a.window() - tn);
        if cap <= 0.0 {
            continue;
        }
        let shifted: Vec<Point> = a.points().iter().map(|p| *p + t).collect();
        let sset: HashSet<Point> = shifted.iter().copied().collect();
        let mut mismatch = f64::INFINITY;
        for p in &shifted {
            let d = p.embed().norm();
            if d <= cap && d < mismatch && !bset.contains(p) {
                mismatch = d;
            }
        }
        for (p, e) in b.points().iter().zip(&eb) {
            let d = e.norm();
            if d <= cap && d < mismatch && !sset.contains(p) {
                mismatch = d;
            }
        }
        let limited = mismatch.is_infinite();
        let eps = if limited { tn } else { tn.max(1.0 / mismatch) };
        let eps = round_up(eps).min(1.0);
        if eps < best.epsilon || best.translation.is_none() && eps <= best.epsilon {
            best = TopologyDistance { epsilon: eps, translation: Some(t), window_limited: limited };
        }
    }
    Ok(best)
}

/// Maximum matching size where left point `i` may use right points in `adj[i]`.
fn matching_saturates(adj: &[Vec<usize>], n_right: usize) -> bool {
    let mut owner: Vec<Option<usize>> = vec![None; n_right];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].map_or(true, |w| augment(w, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    let mut seen = vec![false; n_right];
    for u in 0..adj.len() {
        seen.iter_mut().for_each(|s| *s = false);
        if !augment(u, adj, &mut seen, &mut owner) {
            return false;
        }
    }
    true
}

/// Points of `x` in `B_r` can be moved injectively onto points of `y` by at most `eps`.
fn one_sided(x: &[Complex64], y: &[Complex64], y_idx: &SpatialIndex, r: f64, eps: f64) -> bool {
    let left: Vec<usize> = (0..x.len()).filter(|&i| x[i].norm() <= r).collect();
    let adj: Vec<Vec<usize>> = left.iter().map(|&i| y_idx.within(y, x[i], eps)).collect();
    matching_saturates(&adj, y.len())
}

/// Smallest `ε` (bisection, resolution `1e−6`) such that each set's points
/// in `B_{1/ε}` can be matched injectively to points of the other set at
/// distance `≤ ε`, the ball capped by the windows.
pub fn rubber_distance(a: &PointSet, b: &PointSet) -> TopologyDistance {
    let ea = a.embedded();
    let eb = b.embedded();
    let ia = SpatialIndex::new(&ea, 1.0);
    let ib = SpatialIndex::new(&eb, 1.0);
    let wmin = a.window().min(b.window());
    let ok = |eps: f64| {
        let r = (1.0 / eps).min(wmin - eps);
        r <= 0.0 || (one_sided(&ea, &eb, &ib, r, eps) && one_sided(&eb, &ea, &ia, r, eps))
    };
    let limited = |eps: f64| 1.0 / eps > wmin - eps;
    if ok(GRID) {
        return TopologyDistance { epsilon: GRID, translation: None, window_limited: limited(GRID) };
    }
    let (mut lo, mut hi) = (GRID, 1.0);
    if !ok(hi) {
        return TopologyDistance { epsilon: 1.0, translation: None, window_limited: false };
    }
    while hi - lo > GRID {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    TopologyDistance { epsilon: hi, translation: None, window_limited: limited(hi) }
}

/// Frequencies (anchors per unit area or length) of ρ-cluster classes.
pub fn cluster_frequencies(s: &PointSet, rho: f64) -> Result<HashMap<Vec<Point>, f64>> {
    check_rho(s, rho)?;
    let r = s.window() - rho;
    let vol = if s.dim() == 1 { 2.0 * r } else { std::f64::consts::PI * r * r };
    let mut m: HashMap<Vec<Point>, f64> = HashMap::new();
    for (_, k) in anchored_clusters(s, rho) {
        *m.entry(k).or_default() += 1.0 / vol;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{CycloNumber, Rational};
    use crate::geometry::samples::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn integer_radii() {
        let s = z_sample(20.0, q(0, 1));
        let r = delone_radii(&s, 2.0).unwrap();
        assert!((r.r - 0.5).abs() < 1e-12);
        assert!((r.covering_r - 0.5).abs() < 1e-9);
        assert_eq!(r.min_distance_sq, CycloNumber::one(4));
        assert!(!r.sparse_warning);
    }

    #[test]
    fn two_far_points() {
        let s = PointSet::new(4, 1, vec![CycloNumber::zero(4), CycloNumber::from_int(4, 10)], 20.0).unwrap();
        let r = delone_radii(&s, 2.0).unwrap();
        assert!((r.r - 5.0).abs() < 1e-12);
        assert!(r.sparse_warning);
    }

    #[test]
    fn z2_difference_count() {
        // oracle: integer vectors with a² + b² ≤ 6.25
        let oracle = (-3i64..=3).flat_map(|a| (-3i64..=3).map(move |b| (a, b))).filter(|(a, b)| a * a + b * b <= 6).count();
        let s = z2_sample(12.0);
        let p = flc_profile(&s, 2.5, &[8.0, 12.0]).unwrap();
        assert_eq!(p.counts, vec![oracle, oracle]);
        assert_eq!(oracle, 21);
        assert!(p.consistent);
    }

    #[test]
    fn integer_clusters() {
        let s = z_sample(20.0, q(0, 1));
        let c = cluster_classes(&s, 1.5).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].representative.len(), 3);
        let anchors = s.points().iter().filter(|p| p.embed().norm() <= 18.5).count();
        assert_eq!(c[0].multiplicity, anchors);
    }

    #[test]
    fn defect_clusters_and_repetitivity() {
        let s = z_with_defects(20.0, q(0, 1), &[0]);
        let c = cluster_classes(&s, 1.5).unwrap();
        // generic cluster plus the two one-sided clusters next to the gap
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().map(|x| x.multiplicity).sum::<usize>(), 36);
        assert!(matches!(repetitivity_radius(&s, 1.5).unwrap(), Repetitivity::NotWitnessed { .. }));
        let z = z_sample(20.0, q(0, 1));
        let rep = repetitivity_radius(&z, 1.5).unwrap().radius().unwrap();
        assert!((rep - 0.5).abs() < 0.02, "{rep}");
    }

    #[test]
    fn li_of_translates_and_defect() {
        let a = z_sample(20.0, q(0, 1));
        let b = z_sample(20.0, q(1, 3));
        assert!(li_indistinguishable(&a, &b, 2.0).unwrap().indistinguishable);
        let d = z_with_defects(20.0, q(0, 1), &[0]);
        let v = li_indistinguishable(&a, &d, 1.5).unwrap();
        assert!(!v.indistinguishable);
        let (side, cl) = v.counterexample.unwrap();
        assert_eq!(side, Side::Second);
        assert_eq!(cl.len(), 2);
    }

    #[test]
    fn local_distance_examples() {
        let a = z_sample(20.0, q(0, 1));
        assert!(local_topology_distance(&a, &a).unwrap().epsilon <= 1e-6);
        let b = z_sample(20.0, q(1, 10));
        let d = local_topology_distance(&a, &b).unwrap();
        assert!((d.epsilon - 0.1).abs() < 2e-6, "{d:?}");
        let r = rubber_distance(&a, &b);
        assert!((r.epsilon - 0.1).abs() < 2e-6, "{r:?}");
    }

    #[test]
    fn rubber_with_jitter() {
        let a = z2_sample(8.0);
        let jittered: Vec<Point> = a
            .points()
            .iter()
            .enumerate()
            .map(|(i, p)| *p + CycloNumber::from_coeffs(4, &[q((i % 7) as i64 - 3, 450), q((i % 5) as i64 - 2, 450)]).unwrap())
            .collect();
        let b = PointSet::new(4, 2, jittered, 8.0).unwrap();
        let r = rubber_distance(&a, &b);
        assert!(r.epsilon <= 0.011, "{r:?}");
        assert!(rubber_distance(&a, &a).epsilon <= 1e-6);
    }
}
