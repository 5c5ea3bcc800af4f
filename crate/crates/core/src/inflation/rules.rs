use crate::cyclo::{consts, CycloNumber, Rational};
use crate::error::{Error, Result};
use crate::geometry::{Isometry, Point, Prototile, TilingSystem};

/// One child of a parent prototile, placed in the frame of the inflated
/// reference parent `λ · ref(parent)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Child {
    pub proto: Prototile,
    pub placement: Isometry,
}

/// A stone inflation: scale by `factor`, then dissect.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InflationRule {
    pub system: TilingSystem,
    pub factor: CycloNumber,
    pub children: Vec<(Prototile, Vec<Child>)>,
}

/// Placement of `proto` sending its reference vertices onto `verts`, in order.
pub fn place(proto: Prototile, verts: &[Point]) -> Result<Isometry> {
    let refv = proto.reference_vertices();
    if verts.len() != refv.len() {
        return Err(Error::InvalidArgument(format!("{} vertices for {}", verts.len(), proto.name())));
    }
    let t = verts[0];
    let r = verts[1] - verts[0];
    for reflect in [false, true] {
        let g = Isometry { rot: r, reflect, trans: t };
        if refv.iter().zip(verts).all(|(a, b)| g.apply(a) == *b) {
            return Isometry::new(r, reflect, t);
        }
    }
    Err(Error::NonExactIsometry(format!("no placement of {} onto the given vertices", proto.name())))
}

type RoleList = (Prototile, Vec<Point>);

fn ab_triangle_children(v: &[Point]) -> Vec<RoleList> {
    use Prototile::*;
    let s2 = consts::sqrt2();
    let (a, b, c) = (v[0], v[1], v[2]);
    let r = |x: i64, y: i64| CycloNumber::one(8).scale_int(x) + s2.scale_int(y);
    // 1/λ = √2 − 1, √2/λ = 2 − √2, 1/(λ√2) = 1 − √2/2, 1/√2 = √2/2
    let ab = a + (b - a) * r(2, -1);
    let bc = b + (c - b) * r(2, -1);
    let ac1 = a + (c - a) * (CycloNumber::one(8) - s2.scale(Rational::new(1, 2)));
    let ac2 = a + (c - a) * s2.scale(Rational::new(1, 2));
    let x = bc - (ac1 - a);
    vec![
        (AbTriangle, vec![ab, ac1, a]),
        (AbTriangle, vec![bc, x, b]),
        (AbTriangle, vec![ac2, x, ac1]),
        (AbRhombus, vec![ac1, ab, b, x]),
        (AbRhombus, vec![x, bc, c, ac2]),
    ]
}

fn ab_rhombus_children(v: &[Point]) -> Vec<RoleList> {
    use Prototile::*;
    let s2 = consts::sqrt2();
    let inv = s2 - CycloNumber::one(8);
    let s2inv = CycloNumber::from_int(8, 2) - s2;
    let (a, b, c, d) = (v[0], v[1], v[2], v[3]);
    let ab = a + (b - a) * inv;
    let bc = b + (c - b) * s2inv;
    let cd = d + (c - d) * s2inv;
    let ad = a + (d - a) * inv;
    let xa = ad + ab - a;
    let xc = bc - c + cd;
    vec![
        (AbTriangle, vec![ad, xa, d]),
        (AbTriangle, vec![bc, xc, b]),
        (AbTriangle, vec![ab, xa, b]),
        (AbTriangle, vec![cd, xc, d]),
        (AbRhombus, vec![a, ab, xa, ad]),
        (AbRhombus, vec![xc, bc, c, cd]),
        (AbRhombus, vec![b, xc, d, xa]),
    ]
}

/// Robinson subdivision on halves given as `[B, A, C]`.
fn penrose_half_children(proto: Prototile, v: &[Point]) -> Vec<RoleList> {
    use Prototile::*;
    let inv_tau = consts::golden_ratio() - CycloNumber::one(5);
    let (b, a, c) = (v[0], v[1], v[2]);
    match proto {
        PenroseThinHalf => {
            let p = a + (b - a) * inv_tau;
            vec![(PenroseThinHalf, vec![p, c, b]), (PenroseThickHalf, vec![c, p, a])]
        }
        PenroseThickHalf => {
            let q = b + (a - b) * inv_tau;
            let r = b + (c - b) * inv_tau;
            vec![
                (PenroseThickHalf, vec![c, r, a]),
                (PenroseThickHalf, vec![r, q, b]),
                (PenroseThinHalf, vec![q, r, a]),
            ]
        }
        _ => unreachable!(),
    }
}

fn pinwheel_children(v: &[Point]) -> Vec<RoleList> {
    // in coordinates where the inflated parent is (0, 2+i, 5i) the children are
    // (0, i, 2+i), (i, 1+i, 1+3i), (1+3i, 3i, 5i), (2+i, 1+i, 1+3i), (1+3i, 3i, i);
    // here written affinely in the parent vertices. The two children sharing
    // the diagonal from i to 1+3i keep the parent's orientation, the other
    // three are mirrored; cutting that rectangle along its other diagonal
    // would mirror all five and no new directions would ever appear.
    let (p0, p1, p2) = (v[0], v[1], v[2]);
    let pt = |re: i64, im: i64| bary_pinwheel(p0, p1, p2, re, im);
    vec![
        (Prototile::PinwheelTriangle, vec![pt(0, 0), pt(0, 1), pt(2, 1)]),
        (Prototile::PinwheelTriangle, vec![pt(0, 1), pt(1, 1), pt(1, 3)]),
        (Prototile::PinwheelTriangle, vec![pt(1, 3), pt(0, 3), pt(0, 5)]),
        (Prototile::PinwheelTriangle, vec![pt(2, 1), pt(1, 1), pt(1, 3)]),
        (Prototile::PinwheelTriangle, vec![pt(1, 3), pt(0, 3), pt(0, 1)]),
    ]
}

/// Point with coordinates `re + im·i` in the standard inflated frame
/// `(0, 2+i, 5i)`, mapped affinely onto the parent `(p0, p1, p2)`.
fn bary_pinwheel(p0: Point, p1: Point, p2: Point, re: i64, im: i64) -> Point {
    // x = α(2+i) + β(5i)  ⇒  α = re/2, β = (im − re/2)/5
    let alpha = Rational::new(re, 2);
    let beta = (Rational::from_integer(im) - alpha) / Rational::from_integer(5);
    p0 + (p1 - p0).scale(alpha) + (p2 - p0).scale(beta)
}

fn inflated_reference(proto: Prototile, factor: &CycloNumber) -> Vec<Point> {
    proto.reference_vertices().iter().map(|v| *factor * *v).collect()
}

impl InflationRule {
    pub fn for_system(system: TilingSystem) -> InflationRule {
        use Prototile::*;
        let (factor, parents): (CycloNumber, &[Prototile]) = match system {
            TilingSystem::AmmannBeenker => (consts::silver_mean(), &[AbTriangle, AbRhombus]),
            TilingSystem::Penrose => (consts::golden_ratio(), &[PenroseThickHalf, PenroseThinHalf]),
            TilingSystem::Pinwheel => (consts::pinwheel_factor(), &[PinwheelTriangle]),
        };
        let children = parents
            .iter()
            .map(|&p| {
                let v = inflated_reference(p, &factor);
                let roles = match p {
                    AbTriangle => ab_triangle_children(&v),
                    AbRhombus => ab_rhombus_children(&v),
                    PenroseThickHalf | PenroseThinHalf => penrose_half_children(p, &v),
                    PinwheelTriangle => pinwheel_children(&v),
                    _ => unreachable!(),
                };
                let kids = roles
                    .into_iter()
                    .map(|(q, verts)| Child {
                        proto: q,
                        placement: place(q, &verts).expect("rule child is an exact copy of its prototile"),
                    })
                    .collect();
                (p, kids)
            })
            .collect();
        InflationRule { system, factor, children }
    }

    pub fn parents(&self) -> Vec<Prototile> {
        self.children.iter().map(|(p, _)| *p).collect()
    }

    pub fn children_of(&self, p: Prototile) -> &[Child] {
        &self.children.iter().find(|(q, _)| *q == p).expect("prototile has a rule").1
    }

    /// Copy of the rule with one child translated by `1/10`, for fault injection.
    pub fn corrupted(&self) -> InflationRule {
        let mut r = self.clone();
        let n = r.factor.index();
        let c = &mut r.children[0].1[0];
        c.placement.trans = c.placement.trans + CycloNumber::from_rational(n, Rational::new(1, 10));
        r
    }

    pub fn substitution_matrix(&self) -> SubstitutionMatrix {
        let protos = self.parents();
        let mut m = vec![vec![0u64; protos.len()]; protos.len()];
        for (j, (_, kids)) in self.children.iter().enumerate() {
            for k in kids {
                let i = protos.iter().position(|p| *p == k.proto).unwrap();
                m[i][j] += 1;
            }
        }
        SubstitutionMatrix { prototiles: protos, entries: m }
    }
}

/// `entries[i][j]` = number of children of type `i` in a parent of type `j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionMatrix {
    pub prototiles: Vec<Prototile>,
    pub entries: Vec<Vec<u64>>,
}

impl SubstitutionMatrix {
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        self.entries.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
    }

    pub fn apply_power(&self, v: &[u64], k: usize) -> Vec<u64> {
        (0..k).fold(v.to_vec(), |acc, _| self.apply(&acc))
    }

    /// Perron–Frobenius eigenvalue by power iteration.
    pub fn perron_eigenvalue(&self) -> f64 {
        let n = self.entries.len();
        let mut v = vec![1.0f64; n];
        let mut lam = 0.0;
        for _ in 0..500 {
            let w: Vec<f64> = self
                .entries
                .iter()
                .map(|row| row.iter().zip(&v).map(|(a, b)| *a as f64 * b).sum())
                .collect();
            let norm = w.iter().sum::<f64>();
            lam = norm / v.iter().sum::<f64>();
            v = w.iter().map(|x| x / norm).collect();
        }
        lam
    }
}
