//! Exact point groups, periods, LI and statistical symmetry, the rotation
//! centre obstruction, lattice coincidences and lattice-gas ensembles.

mod ensemble;
mod lattice;

use std::cmp::Ordering;
use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNumber;
use crate::delone::{anchored_within, check_rho, cluster_frequencies, LiVerdict, Side};
use crate::error::{Error, Result};
use crate::geometry::predicates::orient;
use crate::geometry::{difference_set, within, Isometry, Point, PointSet, EPS};

pub use ensemble::{
    bernoulli_sample, fair_coin_period_probability, metric_aperiodicity_estimate, wilson_interval, LatticeGas,
    MetricEstimate,
};
pub use lattice::{lattice_intersect, rotation_matrix, scd_layer_analysis, Intersection, LatticeZ2Q, ScdReport, ORDER_BOUND};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointGroupReport {
    pub center: Point,
    /// Number of verified rotations about `center` (including the identity).
    pub rotation_order: usize,
    /// Verified rotations `x ↦ c + ω(x − c)`.
    pub rotations: Vec<Point>,
    /// Verified reflections `x ↦ c + u·conj(x − c)`; the axis has direction `√u`.
    pub reflection_axes: Vec<Point>,
    pub group_name: String,
}

impl PointGroupReport {
    /// All verified operations as isometries.
    pub fn operations(&self) -> Vec<Isometry> {
        let lin = |rot: Point, reflect: bool| Isometry { rot, reflect, trans: CycloNumber::zero(rot.index()) };
        self.rotations
            .iter()
            .map(|w| Isometry::about(self.center, &lin(*w, false)))
            .chain(self.reflection_axes.iter().map(|u| Isometry::about(self.center, &lin(*u, true))))
            .collect()
    }
}

fn root_order(w: &Point, bound: usize) -> Option<usize> {
    // roots of unity lie in Z[ζ_n], so anything else has infinite order
    if !w.coeffs().iter().all(|c| c.is_integer()) {
        return None;
    }
    let one = CycloNumber::one(w.index());
    let mut p = *w;
    for k in 1..=bound {
        if p == one {
            return Some(k);
        }
        p = p * *w;
    }
    None
}

/// Checks `g(x) ∈ s` for every `x ∈ s ∩ B_r(c)`.
fn invariant_on(s: &PointSet, set: &HashSet<Point>, g: &Isometry, c: &Point, r: f64) -> bool {
    s.points()
        .par_iter()
        .filter(|p| within((**p - *c).embed(), r))
        .all(|p| set.contains(&g.apply(p)))
}

/// Exact point group of `s` about `center`, verified on `B_{W−|c|}(c)`.
///
/// Candidates come from the nearest shell of points around the centre: a
/// symmetry must map one point `d1` of the shell onto a point `d2` of the
/// same shell, which gives `ω = d2/d1` and `u = d2/conj(d1)`.
pub fn exact_point_group(s: &PointSet, center: &Point, n_max: usize) -> Result<PointGroupReport> {
    let c = if center.index() == s.field() { *center } else { center.lift(s.field())? };
    let r = s.window() - c.embed().norm();
    if r <= 0.0 {
        return Err(Error::WindowExceeded { requested: c.embed().norm(), window: s.window() });
    }
    let set = s.hash_set();
    let rel: Vec<Point> = s.points().iter().map(|p| *p - c).filter(|d| !d.is_zero() && within(d.embed(), r)).collect();
    let mut rotations = vec![CycloNumber::one(s.field())];
    let mut reflections = Vec::new();
    if let Some(min) = rel.iter().map(|d| d.norm_sq()).min_by(|a, b| a.embed().re.partial_cmp(&b.embed().re).unwrap_or(Ordering::Equal)) {
        let shell: Vec<Point> = rel.iter().filter(|d| d.norm_sq() == min).copied().collect();
        let d1 = shell[0];
        let inv = d1.inverse()?;
        let inv_c = d1.conj().inverse()?;
        let lin = |rot: Point, reflect: bool| Isometry { rot, reflect, trans: CycloNumber::zero(s.field()) };
        for d2 in &shell {
            let w = *d2 * inv;
            if w != CycloNumber::one(s.field()) && root_order(&w, n_max).is_some() {
                let g = Isometry::about(c, &lin(w, false));
                if invariant_on(s, &set, &g, &c, r) {
                    rotations.push(w);
                }
            }
            let u = *d2 * inv_c;
            if root_order(&u, 2 * n_max).is_some() {
                let g = Isometry::about(c, &lin(u, true));
                if invariant_on(s, &set, &g, &c, r) {
                    reflections.push(u);
                }
            }
        }
    }
    rotations.sort();
    rotations.dedup();
    reflections.sort();
    reflections.dedup();
    let n = rotations.len();
    let group_name = if reflections.is_empty() { format!("C{n}") } else { format!("D{n}") };
    Ok(PointGroupReport { center: c, rotation_order: n, rotations, reflection_axes: reflections, group_name })
}

/// Period `2|x − y|` forced by reflection symmetry in two distinct points of the line.
pub fn reflection_period_1d(x: &Point, y: &Point) -> Result<Point> {
    if x == y {
        return Err(Error::InvalidArgument("reflection centres coincide".into()));
    }
    let d = (*y - *x).scale_int(2);
    Ok(if d.embed().re < 0.0 { -d } else { d })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionCheck {
    pub period: Point,
    pub symmetric_in_x: bool,
    pub symmetric_in_y: bool,
    /// `t + Λ = Λ` on `B_{W−|t|}(0)` for the period `t`.
    pub translation_verified: bool,
}

impl ReflectionCheck {
    pub fn premise(&self) -> bool {
        self.symmetric_in_x && self.symmetric_in_y
    }

    /// The implication the reflection lemma asserts, at this scale.
    pub fn consistent(&self) -> bool {
        !self.premise() || self.translation_verified
    }
}

fn reflection_invariant(s: &PointSet, set: &HashSet<Point>, x: &Point) -> bool {
    let r = s.window() - x.embed().norm();
    s.points().iter().filter(|p| within((**p - *x).embed(), r)).all(|p| set.contains(&(x.scale_int(2) - *p)))
}

/// Checks the reflection premises and the translation conclusion on a 1D set.
pub fn check_reflection_period(s: &PointSet, x: &Point, y: &Point) -> Result<ReflectionCheck> {
    let period = reflection_period_1d(x, y)?;
    let set = s.hash_set();
    let r = s.window() - period.embed().norm();
    let translation_verified = s
        .points()
        .iter()
        .filter(|p| within(p.embed(), r))
        .all(|p| set.contains(&(*p + period)) && set.contains(&(*p - period)));
    Ok(ReflectionCheck {
        period,
        symmetric_in_x: reflection_invariant(s, &set, x),
        symmetric_in_y: reflection_invariant(s, &set, y),
        translation_verified,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    pub n: u32,
    /// `|ξ^ℓ + ξ^{−ℓ} − 1|` for `ℓ = 1..n−1`.
    pub values: Vec<f64>,
    /// Smallest nonzero value, if any.
    pub min_factor: Option<f64>,
    pub crystallographic: bool,
}

/// Distance factors between rotation centres for `n`-fold symmetry.
///
/// `|2cos(2πℓ/n) − 1|` vanishes iff `ℓ/n ∈ {1/6, 5/6}` and is nonzero and
/// below 1 iff `ℓ/n < 1/4` or `ℓ/n > 3/4`; both tests are done in integers,
/// so the classification is exact.
pub fn rotation_center_obstruction(n: u32) -> Result<Obstruction> {
    if n == 0 {
        return Err(Error::InvalidArgument("n = 0".into()));
    }
    let mut values = Vec::new();
    let mut crystallographic = true;
    let mut min_factor: Option<f64> = None;
    for l in 1..n {
        let zero = 6 * l == n || 6 * l == 5 * n;
        let small = 4 * l < n || 4 * l > 3 * n;
        let v = if zero { 0.0 } else { (2.0 * (2.0 * std::f64::consts::PI * l as f64 / n as f64).cos() - 1.0).abs() };
        values.push(v);
        if !zero {
            min_factor = Some(min_factor.map_or(v, |m| m.min(v)));
            if small {
                crystallographic = false;
            }
        }
    }
    Ok(Obstruction { n, values, min_factor, crystallographic })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PeriodClass {
    NonPeriodicAtScale,
    Rank1,
    Crystallographic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub candidate_periods: Vec<Point>,
    pub rank: u8,
    pub classification: PeriodClass,
    pub candidates_tested: usize,
}

/// Fraction of the checks `x ± t ∈ s` (for `x ∈ s ∩ B_{W−|t|}`) that hold.
fn survival(s: &PointSet, set: &HashSet<Point>, t: &Point, need: f64) -> bool {
    let r = s.window() - t.embed().norm();
    let pts: Vec<&Point> = s.points().iter().filter(|p| within(p.embed(), r)).collect();
    if pts.is_empty() {
        return false;
    }
    let allowed = ((1.0 - need) * 2.0 * pts.len() as f64).floor() as usize;
    let mut bad = 0;
    for p in pts {
        bad += usize::from(!set.contains(&(*p + *t))) + usize::from(!set.contains(&(*p - *t)));
        if bad > allowed {
            return false;
        }
    }
    true
}

/// Translations `t` with `0 < |t| ≤ W/4` under which the set agrees with
/// itself on `B_{W−|t|}(0)`; `min_survivor_fraction = 1` demands exact agreement.
pub fn detect_periods(s: &PointSet, min_survivor_fraction: f64) -> Result<PeriodReport> {
    let cands: Vec<Point> = difference_set(s, s.window() / 4.0)?
        .into_iter()
        .filter(|t| !t.is_zero() && t.embed().re.partial_cmp(&0.0) != Some(Ordering::Less))
        .filter(|t| t.embed().re > EPS || t.embed().im > 0.0)
        .collect();
    let set = s.hash_set();
    let mut half: Vec<Point> = cands.par_iter().filter(|t| survival(s, &set, t, min_survivor_fraction)).copied().collect();
    half.sort();
    let mut survivors: Vec<Point> = half.iter().flat_map(|t| [*t, -*t]).collect();
    survivors.sort();
    let zero = CycloNumber::zero(s.field());
    let rank = if survivors.is_empty() {
        0
    } else if survivors.iter().all(|t| orient(&zero, &survivors[0], t) == Ordering::Equal) {
        1
    } else {
        2
    };
    let classification = match rank {
        0 => PeriodClass::NonPeriodicAtScale,
        r if r == s.dim() => PeriodClass::Crystallographic,
        _ => PeriodClass::Rank1,
    };
    Ok(PeriodReport { candidate_periods: survivors, rank, classification, candidates_tested: cands.len() })
}

fn linear_image(s: &PointSet, r: &Isometry) -> Result<(PointSet, PointSet)> {
    if !r.is_linear() {
        return Err(Error::NonExactIsometry("LI symmetry must be linear".into()));
    }
    if root_order(&r.rot, ORDER_BOUND as usize).is_none() {
        return Err(Error::NonExactIsometry(format!("{} is not a root of unity of order ≤ {ORDER_BOUND}", r.rot)));
    }
    let base = if r.index() != s.field() && r.index() == 8 && s.field() == 4 { s.lift(8)? } else { s.clone() };
    let img = base.apply_isometry(r)?;
    Ok((base, img))
}

/// Is `R·s` locally indistinguishable from `s` at scale `ρ`?
///
/// Same test as [`li_indistinguishable`]; since `R` is linear the clusters
/// of `R·s` are the images of those of `s`, so they are not recomputed.
pub fn li_symmetry_test(s: &PointSet, r: &Isometry, rho: f64) -> Result<LiVerdict> {
    let (base, _) = linear_image(s, r)?;
    check_rho(&base, rho)?;
    let r = if r.index() != base.field() { r.lift(base.field())? } else { *r };
    let full_r = base.window() - rho;
    let keys = |inner: f64| -> HashSet<Vec<Point>> { anchored_within(&base, rho, inner).into_iter().map(|(_, k)| k).collect() };
    let image = |ks: &HashSet<Vec<Point>>| -> HashSet<Vec<Point>> {
        ks.iter()
            .map(|k| {
                let mut v: Vec<Point> = k.iter().map(|p| r.apply(p)).collect();
                v.sort();
                v
            })
            .collect()
    };
    let (full, core) = (keys(full_r), keys(full_r / 2.0));
    let (full_img, core_img) = (image(&full), image(&core));
    let first_missing = |x: &HashSet<Vec<Point>>, y: &HashSet<Vec<Point>>| {
        let mut miss: Vec<&Vec<Point>> = x.iter().filter(|k| !y.contains(*k)).collect();
        miss.sort();
        miss.first().map(|k| (*k).clone())
    };
    let counterexample = first_missing(&core, &full_img)
        .map(|k| (Side::First, k))
        .or_else(|| first_missing(&core_img, &full).map(|k| (Side::Second, k)));
    Ok(LiVerdict { indistinguishable: counterexample.is_none(), rho, counterexample })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatisticalSymmetry {
    pub max_freq_discrepancy: f64,
    pub tolerance: f64,
    pub symmetric: bool,
    pub classes_compared: usize,
}

pub const DEFAULT_STAT_TOLERANCE: f64 = 0.15;

/// Compares the frequency of each ρ-cluster class with that of its image
/// under `R`. The discrepancy of a class pair is `|f − f_R| / max(f, f_R)`;
/// classes with fewer than `min_count` anchors are too rare to compare and
/// are skipped (pass `1` to use every class).
pub fn statistical_symmetry(s: &PointSet, r: &Isometry, rho: f64, tolerance: f64, min_count: usize) -> Result<StatisticalSymmetry> {
    let (base, _) = linear_image(s, r)?;
    let freq = cluster_frequencies(&base, rho)?;
    // frequencies are anchors per unit volume of the anchor ball
    let ar = base.window() - rho;
    let unit = if base.dim() == 1 { 2.0 * ar } else { std::f64::consts::PI * ar * ar };
    let r = if r.index() != base.field() { r.lift(base.field())? } else { *r };
    let mut worst: f64 = 0.0;
    let mut compared = 0;
    let mut keys: Vec<&Vec<Point>> = freq.keys().collect();
    keys.sort();
    for k in keys {
        let f = freq[k];
        if (f * unit).round() < min_count as f64 {
            continue;
        }
        let mut img: Vec<Point> = k.iter().map(|p| r.apply(p)).collect();
        img.sort();
        let g = freq.get(&img).copied().unwrap_or(0.0);
        compared += 1;
        worst = worst.max((f - g).abs() / f.max(g));
    }
    Ok(StatisticalSymmetry { max_freq_discrepancy: worst, tolerance, symmetric: worst <= tolerance, classes_compared: compared })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrongAperiodicity {
    pub aperiodic_at_scale: bool,
    pub finite_point_group: bool,
    pub strongly_aperiodic: bool,
}

/// Non-periodic at scale and with a finite individual symmetry group. In
/// the plane a finite report is always a finite group; screw symmetries of
/// layered space tilings are outside this check.
pub fn strong_aperiodicity_verdict(periods: &PeriodReport, group: &PointGroupReport) -> StrongAperiodicity {
    let aperiodic_at_scale = periods.rank == 0;
    let finite_point_group = group.rotation_order >= 1;
    StrongAperiodicity { aperiodic_at_scale, finite_point_group, strongly_aperiodic: aperiodic_at_scale && finite_point_group }
}
