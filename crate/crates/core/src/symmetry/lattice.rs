//! Rank-2 rational lattices and coincidence indices.

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::cyclo::{CycloNumber, Rational};
use crate::error::{Error, Result};

/// Lattice `Z b1 ⊕ Z b2` with rational basis columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeZ2Q {
    /// `basis[row][col]`; columns are `b1`, `b2`.
    basis: [[Rational; 2]; 2],
}

fn det2(m: &[[Rational; 2]; 2]) -> Rational {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

impl LatticeZ2Q {
    pub fn new(b1: [Rational; 2], b2: [Rational; 2]) -> Result<Self> {
        let basis = [[b1[0], b2[0]], [b1[1], b2[1]]];
        if det2(&basis).is_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(LatticeZ2Q { basis })
    }

    pub fn from_ints(b1: [i64; 2], b2: [i64; 2]) -> Result<Self> {
        let r = |x: i64| Rational::from_integer(x);
        Self::new([r(b1[0]), r(b1[1])], [r(b2[0]), r(b2[1])])
    }

    pub fn z2() -> Self {
        Self::from_ints([1, 0], [0, 1]).unwrap()
    }

    pub fn columns(&self) -> ([Rational; 2], [Rational; 2]) {
        ([self.basis[0][0], self.basis[1][0]], [self.basis[0][1], self.basis[1][1]])
    }

    /// Absolute covolume.
    pub fn det(&self) -> Rational {
        det2(&self.basis).abs()
    }

    /// Image under the linear map `m` (row-major).
    pub fn transform(&self, m: &[[Rational; 2]; 2]) -> Result<Self> {
        let (b1, b2) = self.columns();
        let ap = |v: [Rational; 2]| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
        Self::new(ap(b1), ap(b2))
    }

    /// Whether `x` lies in the lattice.
    pub fn contains(&self, x: [Rational; 2]) -> bool {
        let d = det2(&self.basis);
        // Cramer's rule for the coordinates
        let c1 = (x[0] * self.basis[1][1] - x[1] * self.basis[0][1]) / d;
        let c2 = (self.basis[0][0] * x[1] - self.basis[1][0] * x[0]) / d;
        c1.is_integer() && c2.is_integer()
    }

    /// Dual lattice, basis `B^{−T}`.
    fn dual(&self) -> Self {
        let b = &self.basis;
        let d = det2(b);
        // B^{-1} = adj(B)/d; its transpose has columns (b11, −b01)/d and (−b10, b00)/d
        LatticeZ2Q { basis: [[b[1][1] / d, -b[1][0] / d], [-b[0][1] / d, b[0][0] / d]] }
    }
}

/// Basis of the lattice generated by rational vectors (full rank assumed).
fn lattice_span(gens: &[[Rational; 2]]) -> Result<LatticeZ2Q> {
    let den: i128 = gens
        .iter()
        .flat_map(|v| v.iter())
        .fold(1i128, |acc, q| acc.lcm(&(*q.denom() as i128)));
    let mut cols: Vec<[i128; 2]> = gens
        .iter()
        .map(|v| [*v[0].numer() as i128 * (den / *v[0].denom() as i128), *v[1].numer() as i128 * (den / *v[1].denom() as i128)])
        .collect();
    // column Hermite form: clear the first row into one column
    let mut pivot: Option<[i128; 2]> = None;
    let mut rest: Vec<i128> = Vec::new();
    for c in cols.drain(..) {
        match pivot {
            None => {
                if c[0] != 0 {
                    pivot = Some(c);
                } else {
                    rest.push(c[1]);
                }
            }
            Some(p) => {
                if c[0] == 0 {
                    rest.push(c[1]);
                    continue;
                }
                let g = p[0].extended_gcd(&c[0]);
                let (x, y) = (g.x, g.y);
                let newp = [g.gcd, x * p[1] + y * c[1]];
                let (u, v) = (c[0] / g.gcd, p[0] / g.gcd);
                // (u·p − v·c) has zero first entry
                rest.push(u * p[1] - v * c[1]);
                pivot = Some(newp);
            }
        }
    }
    let p = pivot.ok_or(Error::SingularBasis)?;
    let c = rest.iter().fold(0i128, |acc, x| acc.gcd(x));
    if c == 0 {
        return Err(Error::SingularBasis);
    }
    let b = p[1].mod_floor(&c);
    let q = |x: i128| -> Result<Rational> {
        let r = num_rational::Ratio::new(x, den);
        let n = i64::try_from(*r.numer()).map_err(|_| Error::InvalidArgument("lattice entry overflow".into()))?;
        let d = i64::try_from(*r.denom()).map_err(|_| Error::InvalidArgument("lattice entry overflow".into()))?;
        Ok(Rational::new(n, d))
    };
    LatticeZ2Q::new([q(p[0])?, q(b)?], [q(0)?, q(c)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub sublattice: LatticeZ2Q,
    /// `[g : g ∩ h]`; always finite for rational lattices.
    pub index_in_g: u64,
}

/// `g ∩ h`, computed as the dual of `g* + h*`.
pub fn lattice_intersect(g: &LatticeZ2Q, h: &LatticeZ2Q) -> Result<Intersection> {
    let (a1, a2) = g.dual().columns();
    let (b1, b2) = h.dual().columns();
    let sum = lattice_span(&[a1, a2, b1, b2])?;
    let sublattice = sum.dual();
    let ratio = sublattice.det() / g.det();
    if !ratio.is_integer() {
        return Err(Error::InvalidArgument("intersection is not a sublattice".into()));
    }
    Ok(Intersection { sublattice, index_in_g: *ratio.numer() as u64 })
}

/// Rotation matrix for `(cos φ, sin φ)`, checked to lie on the unit circle.
pub fn rotation_matrix(c: Rational, s: Rational) -> Result<[[Rational; 2]; 2]> {
    if c * c + s * s != Rational::from_integer(1) {
        return Err(Error::NotOnUnitCircle(c.to_string(), s.to_string()));
    }
    Ok([[c, -s], [s, c]])
}

fn mat_mul(a: &[[Rational; 2]; 2], b: &[[Rational; 2]; 2]) -> [[Rational; 2]; 2] {
    let mut m = [[Rational::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Bound on the multiplicative order searched for commensurability.
pub const ORDER_BOUND: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ScdReport {
    /// `indices[m] = [Γ : ∩_{|j|≤m} R^j Γ]`.
    pub indices: Vec<u64>,
    /// `R` has finite order (at most [`ORDER_BOUND`]).
    pub commensurate: bool,
    pub order: Option<u32>,
}

/// Coincidence indices of the layer lattices `R^j Γ`, `|j| ≤ m`.
pub fn scd_layer_analysis(g: &LatticeZ2Q, cos: Rational, sin: Rational, m_max: usize) -> Result<ScdReport> {
    let r = rotation_matrix(cos, sin)?;
    let rinv = [[cos, sin], [-sin, cos]];
    if m_max > 8 {
        return Err(Error::InvalidArgument(format!("m_max = {m_max} > 8")));
    }
    let mut acc = *g;
    let mut indices = vec![1u64];
    let (mut fwd, mut back) = (r, rinv);
    for _ in 1..=m_max {
        acc = lattice_intersect(&acc, &g.transform(&fwd)?)?.sublattice;
        acc = lattice_intersect(&acc, &g.transform(&back)?)?.sublattice;
        let ratio = acc.det() / g.det();
        indices.push(*ratio.numer() as u64);
        fwd = mat_mul(&r, &fwd);
        back = mat_mul(&rinv, &back);
    }
    let z = CycloNumber::from_coeffs(4, &[cos, sin])?;
    let one = CycloNumber::one(4);
    let mut p = z;
    let mut order = None;
    // roots of unity are algebraic integers, so a non-integral z has infinite order
    let integral = cos.is_integer() && sin.is_integer();
    for k in (1..=ORDER_BOUND).take_while(|_| integral) {
        if p == one {
            order = Some(k);
            break;
        }
        p = p * z;
    }
    Ok(ScdReport { indices, commensurate: order.is_some(), order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Brute force: points of `g = Z²` with norm ≤ 25 lying in `h`; the
    /// smallest nonzero |det| of two of them is the covolume of `g ∩ h`.
    fn brute_index(h: &LatticeZ2Q) -> u64 {
        let mut pts = Vec::new();
        for a in -25i64..=25 {
            for b in -25i64..=25 {
                if (a, b) != (0, 0) && a * a + b * b <= 625 && h.contains([q(a, 1), q(b, 1)]) {
                    pts.push((a, b));
                }
            }
        }
        let mut best = i64::MAX;
        for (i, p) in pts.iter().enumerate() {
            for r in &pts[i + 1..] {
                let d = (p.0 * r.1 - p.1 * r.0).abs();
                if d > 0 {
                    best = best.min(d);
                }
            }
        }
        best as u64
    }

    #[test]
    fn simple_indices() {
        let z2 = LatticeZ2Q::z2();
        assert_eq!(lattice_intersect(&z2, &z2).unwrap().index_in_g, 1);
        let h = LatticeZ2Q::from_ints([2, 0], [0, 1]).unwrap();
        assert_eq!(lattice_intersect(&z2, &h).unwrap().index_in_g, 2);
        assert_eq!(LatticeZ2Q::from_ints([1, 2], [2, 4]), Err(Error::SingularBasis));
    }

    #[test]
    fn three_four_five_rotation() {
        let z2 = LatticeZ2Q::z2();
        let r = rotation_matrix(q(4, 5), q(3, 5)).unwrap();
        let h = z2.transform(&r).unwrap();
        let i = lattice_intersect(&z2, &h).unwrap();
        assert_eq!(i.index_in_g, 5);
        assert_eq!(brute_index(&h), 5);
        assert_eq!(i.sublattice.det(), q(5, 1));
        // the result really lies in both lattices
        let (c1, c2) = i.sublattice.columns();
        for c in [c1, c2] {
            assert!(z2.contains(c) && h.contains(c));
        }
    }

    #[test]
    fn index_symmetry() {
        let g = LatticeZ2Q::new([q(1, 2), q(0, 1)], [q(1, 3), q(2, 1)]).unwrap();
        let h = LatticeZ2Q::from_ints([3, 1], [1, 4]).unwrap();
        let a = lattice_intersect(&g, &h).unwrap();
        let b = lattice_intersect(&h, &g).unwrap();
        assert_eq!(Rational::from_integer(a.index_in_g as i64) * g.det(), Rational::from_integer(b.index_in_g as i64) * h.det());
    }

    #[test]
    fn layer_indices() {
        let z2 = LatticeZ2Q::z2();
        let r = scd_layer_analysis(&z2, q(4, 5), q(3, 5), 3).unwrap();
        assert!(r.indices.windows(2).all(|w| w[0] < w[1]), "{:?}", r.indices);
        assert!(!r.commensurate);
        let quarter = scd_layer_analysis(&z2, q(0, 1), q(1, 1), 3).unwrap();
        assert_eq!(quarter.indices, vec![1, 1, 1, 1]);
        assert_eq!(quarter.order, Some(4));
        assert!(matches!(scd_layer_analysis(&z2, q(1, 2), q(1, 2), 2), Err(Error::NotOnUnitCircle(..))));
    }
}
