use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::predicates::strictly_inside_segment;
use crate::geometry::{ArrowKind, Patch, Point, SpatialIndex};

/// A shared edge on which the two incident tiles disagree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub tiles: (usize, usize),
    pub edge: (Point, Point),
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MatchingReport {
    /// Arrow mismatches on shared edges.
    pub violations: Vec<Violation>,
    /// Edges meeting another tile's vertex in their relative interior.
    pub face_to_face: Vec<Violation>,
}

impl MatchingReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.face_to_face.is_empty()
    }
}

type EdgeEntry = (usize, Point, Point, Option<ArrowKind>);

/// Checks arrow agreement on every shared edge and reports non face-to-face
/// contacts separately.
pub fn validate_matching_rules(p: &Patch) -> Result<MatchingReport> {
    if p.tiles.iter().any(|t| t.decorations.is_empty()) {
        return Err(Error::MissingDecoration);
    }
    let mut edges: HashMap<(Point, Point), Vec<EdgeEntry>> = HashMap::new();
    for (i, t) in p.tiles.iter().enumerate() {
        for (tail, head, kind) in t.arrowed_edges() {
            let key = if tail < head { (tail, head) } else { (head, tail) };
            edges.entry(key).or_default().push((i, tail, head, kind));
        }
    }
    let mut keys: Vec<&(Point, Point)> = edges.keys().collect();
    keys.sort();

    let mut report = MatchingReport::default();
    let mut unmatched = Vec::new();
    for key in keys {
        let list = &edges[key];
        match list.len() {
            1 => unmatched.push((list[0].0, *key)),
            2 => {
                let (a, b) = (&list[0], &list[1]);
                let reason = match (a.3, b.3) {
                    (None, None) => None,
                    (Some(x), Some(y)) if x != y => Some("arrow type differs"),
                    (Some(_), Some(_)) if a.1 != b.1 => Some("arrow direction differs"),
                    (Some(_), Some(_)) => None,
                    _ => Some("arrow on one side only"),
                };
                if let Some(r) = reason {
                    report.violations.push(Violation { tiles: (a.0, b.0), edge: *key, reason: r.into() });
                }
            }
            _ => report.violations.push(Violation {
                tiles: (list[0].0, list[1].0),
                edge: *key,
                reason: format!("edge shared by {} tiles", list.len()),
            }),
        }
    }

    // T-junctions: a vertex strictly inside an unmatched edge
    let incidence = p.incidence();
    let mut verts: Vec<Point> = incidence.keys().copied().collect();
    verts.sort();
    let emb: Vec<_> = verts.iter().map(|v| v.embed()).collect();
    let idx = SpatialIndex::new(&emb, 2.0);
    for (tile, (a, b)) in unmatched {
        let mid = (a.embed() + b.embed()) / 2.0;
        let half = (a.embed() - b.embed()).norm() / 2.0;
        for j in idx.within(&emb, mid, half) {
            let v = verts[j];
            if strictly_inside_segment(&a, &b, &v) {
                let other = incidence[&v][0];
                report.face_to_face.push(Violation {
                    tiles: (tile, other),
                    edge: (a, b),
                    reason: "vertex in edge interior".into(),
                });
            }
        }
    }
    Ok(report)
}
