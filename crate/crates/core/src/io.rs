//! JSON documents for patches and point sets, and SVG rendering.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EdgeArrow, Isometry, Patch, Point, PointSet, Prototile, Tile, TilingSystem};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileRecord {
    pub prototile: String,
    pub rot: Point,
    pub reflect: bool,
    pub trans: Point,
    /// One entry per reference edge (`"s+"`, `"d-"`, …, or `null`); empty
    /// for undecorated tiles.
    pub decorations: Vec<Option<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointBlock {
    pub field: u8,
    pub dim: u8,
    /// Window radius as the shortest decimal that round-trips the float.
    pub window: String,
    pub points: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchDocument {
    pub schema_version: String,
    /// Absent for plain point-set documents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<TilingSystem>,
    pub tiles: Vec<TileRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<PointBlock>,
}

fn prototile_by_name(name: &str) -> Result<Prototile> {
    [TilingSystem::AmmannBeenker, TilingSystem::Penrose, TilingSystem::Pinwheel]
        .iter()
        .flat_map(|s| s.prototiles().iter())
        .find(|p| p.name() == name)
        .copied()
        .ok_or_else(|| Error::Parse(format!("unknown prototile `{name}`")))
}

impl TileRecord {
    pub fn from_tile(t: &Tile) -> Self {
        TileRecord {
            prototile: t.proto.name().to_string(),
            rot: t.placement.rot,
            reflect: t.placement.reflect,
            trans: t.placement.trans,
            decorations: t.decorations.iter().map(|d| d.map(|a| a.to_string())).collect(),
        }
    }

    pub fn to_tile(&self) -> Result<Tile> {
        let proto = prototile_by_name(&self.prototile)?;
        if self.rot.index() != proto.field() {
            return Err(Error::IndexMismatch(proto.field(), self.rot.index()));
        }
        let placement = Isometry::new(self.rot, self.reflect, self.trans)?;
        let n = proto.reference_vertices().len();
        if !self.decorations.is_empty() && self.decorations.len() != n {
            return Err(Error::Parse(format!("{} decorations for a {n}-gon", self.decorations.len())));
        }
        let decorations = self
            .decorations
            .iter()
            .map(|d| d.as_deref().map(str::parse::<EdgeArrow>).transpose())
            .collect::<Result<Vec<_>>>()?;
        Ok(Tile::with_decorations(proto, placement, decorations))
    }
}

impl PointBlock {
    pub fn from_point_set(s: &PointSet) -> Self {
        PointBlock { field: s.field(), dim: s.dim(), window: format!("{:?}", s.window()), points: s.points().to_vec() }
    }

    pub fn to_point_set(&self) -> Result<PointSet> {
        let window: f64 = self.window.parse().map_err(|_| Error::Parse(format!("bad window `{}`", self.window)))?;
        PointSet::new(self.field, self.dim, self.points.clone(), window)
    }
}

impl PatchDocument {
    pub fn from_patch(p: &Patch) -> Self {
        PatchDocument {
            schema_version: SCHEMA_VERSION.into(),
            system: Some(p.system),
            tiles: p.tiles.iter().map(TileRecord::from_tile).collect(),
            points: None,
        }
    }

    /// A tile-free document carrying only a point set.
    pub fn from_point_set(s: &PointSet) -> Self {
        PatchDocument { schema_version: SCHEMA_VERSION.into(), system: None, tiles: Vec::new(), points: Some(PointBlock::from_point_set(s)) }
    }

    pub fn with_points(mut self, s: &PointSet) -> Self {
        self.points = Some(PointBlock::from_point_set(s));
        self
    }

    pub fn to_patch(&self) -> Result<Patch> {
        self.check_version()?;
        let system = self.system.ok_or_else(|| Error::Parse("document has no tiling system".into()))?;
        let tiles = self.tiles.iter().map(TileRecord::to_tile).collect::<Result<Vec<_>>>()?;
        Patch::new(system, tiles)
    }

    /// The point block, or else the vertex set of the patch.
    pub fn point_set(&self) -> Result<PointSet> {
        self.check_version()?;
        match &self.points {
            Some(b) => b.to_point_set(),
            None => self.to_patch()?.full_vertex_set(),
        }
    }

    fn check_version(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!("unsupported schema version `{}`", self.schema_version)));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: PatchDocument = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        doc.check_version()?;
        Ok(doc)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RenderOptions {
    pub show_points: bool,
    pub show_arrows: bool,
    /// Pixels per edge length.
    pub scale: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { show_points: false, show_arrows: true, scale: 40.0 }
    }
}

fn fill(p: Prototile) -> &'static str {
    match p {
        Prototile::AbTriangle => "#e9c46a",
        Prototile::AbRhombus => "#2a9d8f",
        Prototile::PenroseThick | Prototile::PenroseThickHalf => "#f4a261",
        Prototile::PenroseThin | Prototile::PenroseThinHalf => "#457b9d",
        Prototile::PinwheelTriangle => "#a8dadc",
    }
}

/// SVG picture of the document. Tiles become `<polygon>`s, arrows short
/// marked segments on their edges, points `<circle>`s.
pub fn render_svg(doc: &PatchDocument, opts: &RenderOptions) -> Result<String> {
    let patch = match doc.system {
        Some(_) => doc.to_patch()?,
        None => Patch::empty(TilingSystem::AmmannBeenker),
    };
    let points: Vec<Complex64> = if !opts.show_points {
        Vec::new()
    } else if let Some(b) = &doc.points {
        b.points.iter().map(|p| p.embed()).collect()
    } else {
        let set: BTreeSet<Point> = match patch.system {
            TilingSystem::Pinwheel => patch.tiles.iter().filter_map(|t| t.control_point()).collect(),
            _ => patch.vertices().into_iter().collect(),
        };
        set.iter().map(|p| p.embed()).collect()
    };
    let polys: Vec<(Prototile, Vec<Complex64>)> = patch.tiles.iter().map(|t| (t.proto, t.embedded_vertices())).collect();
    let all = polys.iter().flat_map(|(_, v)| v.iter()).chain(points.iter());
    let (mut lo, mut hi) = (Complex64::new(-1.0, -1.0), Complex64::new(1.0, 1.0));
    for z in all {
        lo = Complex64::new(lo.re.min(z.re), lo.im.min(z.im));
        hi = Complex64::new(hi.re.max(z.re), hi.im.max(z.im));
    }
    let s = opts.scale;
    let pad = 0.5;
    let width = (hi.re - lo.re + 2.0 * pad) * s;
    let height = (hi.im - lo.im + 2.0 * pad) * s;
    let px = |z: Complex64| ((z.re - lo.re + pad) * s, (hi.im - z.im + pad) * s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    out.push_str(
        "<defs>\n\
         <marker id=\"arrow-s\" viewBox=\"0 0 10 10\" refX=\"5\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#000\"/></marker>\n\
         <marker id=\"arrow-d\" viewBox=\"0 0 20 10\" refX=\"10\" refY=\"5\" markerWidth=\"12\" markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z M10,0 L20,5 L10,10 z\" fill=\"#c1121f\"/></marker>\n\
         </defs>\n",
    );
    let _ = writeln!(out, "<g stroke=\"#222\" stroke-width=\"{:.3}\" stroke-linejoin=\"round\">", (s / 40.0).max(0.2));
    for (proto, v) in &polys {
        let pts: Vec<String> = v.iter().map(|z| px(*z)).map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
        let _ = writeln!(out, "<polygon class=\"{}\" fill=\"{}\" points=\"{}\"/>", proto.name(), fill(*proto), pts.join(" "));
    }
    out.push_str("</g>\n");
    if opts.show_arrows {
        out.push_str("<g stroke=\"none\">\n");
        for t in &patch.tiles {
            for (a, b, kind) in t.arrowed_edges() {
                let Some(kind) = kind else { continue };
                let (a, b) = (a.embed(), b.embed());
                let mid = (a + b) / 2.0;
                let d = (b - a) * 0.05;
                let (x1, y1) = px(mid - d);
                let (x2, y2) = px(mid + d);
                let id = match kind {
                    crate::geometry::ArrowKind::Single => "arrow-s",
                    crate::geometry::ArrowKind::Double => "arrow-d",
                };
                let _ = writeln!(out, "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" stroke=\"none\" marker-end=\"url(#{id})\"/>");
            }
        }
        out.push_str("</g>\n");
    }
    if !points.is_empty() {
        out.push_str("<g fill=\"#000\">\n");
        for z in &points {
            let (x, y) = px(*z);
            let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{:.3}\"/>", (s / 16.0).max(0.5));
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inflation::{fixed_point_patch, Seed};

    #[test]
    fn octagon_document_round_trip() {
        let p = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 0).unwrap();
        let doc = PatchDocument::from_patch(&p).with_points(&p.full_vertex_set().unwrap());
        let back = PatchDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_patch().unwrap(), p);
        assert_eq!(back.point_set().unwrap(), p.full_vertex_set().unwrap());
        assert!(!doc.to_json().contains("e-"), "exact numbers are strings");
    }

    #[test]
    fn malformed_documents() {
        assert!(PatchDocument::from_json("{").is_err());
        let p = fixed_point_patch(TilingSystem::Pinwheel, Seed::PinwheelOrigin, 0).unwrap();
        let mut doc = PatchDocument::from_patch(&p);
        doc.schema_version = "2".into();
        assert!(PatchDocument::from_json(&doc.to_json()).is_err());
        let mut doc = PatchDocument::from_patch(&p);
        doc.tiles[0].prototile = "kite".into();
        assert!(doc.to_patch().is_err());
        let mut doc = PatchDocument::from_patch(&p);
        doc.tiles[0].decorations = vec![Some("x+".into())];
        assert!(doc.to_patch().is_err());
    }

    #[test]
    fn svg_counts() {
        let p = fixed_point_patch(TilingSystem::AmmannBeenker, Seed::AbOctagon, 0).unwrap();
        let svg = render_svg(&PatchDocument::from_patch(&p), &RenderOptions::default()).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 32);
        let empty = render_svg(&PatchDocument::from_patch(&Patch::empty(TilingSystem::Penrose)), &RenderOptions::default()).unwrap();
        assert!(empty.starts_with("<svg") && empty.ends_with("</svg>\n"));
        assert_eq!(empty.matches("<polygon").count(), 0);
        let pin = fixed_point_patch(TilingSystem::Pinwheel, Seed::PinwheelOrigin, 3).unwrap();
        let opts = RenderOptions { show_points: true, ..Default::default() };
        let svg = render_svg(&PatchDocument::from_patch(&pin), &opts).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 125);
        assert_eq!(svg.matches("<circle").count(), 125);
    }
}
