use crate::cyclo::CycloNumber;
use crate::error::{Error, Result};

use super::Point;

/// Exact planar isometry `x ↦ rot · σ(x) + trans`, where `σ` is complex
/// conjugation when `reflect` is set and the identity otherwise.
///
/// `rot` has modulus one exactly. For the Ammann–Beenker and Penrose systems
/// it is a root of unity; pinwheel placements also use rational points of
/// the unit circle such as `(3 + 4i)/5`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isometry {
    pub rot: CycloNumber,
    pub reflect: bool,
    pub trans: CycloNumber,
}

impl Isometry {
    pub fn new(rot: CycloNumber, reflect: bool, trans: CycloNumber) -> Result<Self> {
        if rot.index() != trans.index() {
            return Err(Error::IndexMismatch(rot.index(), trans.index()));
        }
        if rot.norm_sq() != CycloNumber::one(rot.index()) {
            return Err(Error::NonExactIsometry(format!("|{rot}| ≠ 1")));
        }
        Ok(Isometry { rot, reflect, trans })
    }

    pub fn identity(n: u8) -> Self {
        Isometry { rot: CycloNumber::one(n), reflect: false, trans: CycloNumber::zero(n) }
    }

    pub fn translation(t: CycloNumber) -> Self {
        Isometry { trans: t, ..Self::identity(t.index()) }
    }

    /// Linear rotation `x ↦ rot · x`.
    pub fn rotation(rot: CycloNumber) -> Result<Self> {
        Self::new(rot, false, CycloNumber::zero(rot.index()))
    }

    /// Linear reflection `x ↦ u · x̄`; its axis has direction `√u`.
    pub fn reflection(u: CycloNumber) -> Result<Self> {
        Self::new(u, true, CycloNumber::zero(u.index()))
    }

    /// The isometry `x ↦ c + g(x − c)` for a linear `g`.
    pub fn about(center: Point, linear: &Isometry) -> Self {
        let to = Isometry::translation(center);
        let from = Isometry::translation(-center);
        to.compose(&linear.linear_part()).compose(&from)
    }

    pub fn index(&self) -> u8 {
        self.rot.index()
    }

    pub fn is_linear(&self) -> bool {
        self.trans.is_zero()
    }

    pub fn is_identity(&self) -> bool {
        !self.reflect && self.trans.is_zero() && self.rot == CycloNumber::one(self.index())
    }

    pub fn linear_part(&self) -> Self {
        Isometry { trans: CycloNumber::zero(self.index()), ..*self }
    }

    #[inline]
    fn sigma(&self, x: &CycloNumber) -> CycloNumber {
        if self.reflect {
            x.conj()
        } else {
            *x
        }
    }

    pub fn apply(&self, x: &Point) -> Point {
        self.rot * self.sigma(x) + self.trans
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry {
            rot: self.rot * self.sigma(&other.rot),
            reflect: self.reflect ^ other.reflect,
            trans: self.rot * self.sigma(&other.trans) + self.trans,
        }
    }

    pub fn inverse(&self) -> Isometry {
        // rot⁻¹ = conj(rot) since |rot| = 1
        let rinv = self.rot.conj();
        if self.reflect {
            Isometry { rot: self.rot, reflect: true, trans: -(self.rot * self.trans.conj()) }
        } else {
            Isometry { rot: rinv, reflect: false, trans: -(rinv * self.trans) }
        }
    }

    /// Conjugation by the similarity `x ↦ λx`: returns `S_λ ∘ self ∘ S_λ⁻¹`,
    /// which is again an isometry.
    pub fn conjugate_by_scaling(&self, lambda: &CycloNumber) -> Result<Isometry> {
        let inv = lambda.inverse()?;
        Ok(Isometry {
            rot: *lambda * self.rot * self.sigma(&inv),
            reflect: self.reflect,
            trans: *lambda * self.trans,
        })
    }

    /// Moves the isometry into another field when its entries allow it.
    pub fn lift(&self, target: u8) -> Result<Isometry> {
        Ok(Isometry { rot: self.rot.lift(target)?, reflect: self.reflect, trans: self.trans.lift(target)? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::consts;

    #[test]
    fn rejects_non_unit_rotation() {
        assert!(Isometry::rotation(consts::pinwheel_factor()).is_err());
        let unit = consts::pinwheel_factor() * consts::pinwheel_factor().conj().inverse().unwrap();
        assert!(Isometry::rotation(unit).is_ok());
    }

    #[test]
    fn compose_and_inverse() {
        let z = CycloNumber::zeta(8);
        let g = Isometry::new(z, true, CycloNumber::from_int_coeffs(8, &[1, 2, 0, -1])).unwrap();
        let h = Isometry::new(z * z * z, false, CycloNumber::from_int_coeffs(8, &[0, 0, 3, 0])).unwrap();
        let x = CycloNumber::from_int_coeffs(8, &[2, -1, 5, 7]);
        assert_eq!(g.compose(&h).apply(&x), g.apply(&h.apply(&x)));
        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.inverse().compose(&g).is_identity());
        assert!(h.compose(&h.inverse()).is_identity());
    }

    #[test]
    fn scaling_conjugation_matches_definition() {
        let lam = consts::pinwheel_factor();
        let g = Isometry::new(CycloNumber::zeta(4), true, CycloNumber::from_int_coeffs(4, &[1, 1])).unwrap();
        let c = g.conjugate_by_scaling(&lam).unwrap();
        let x = CycloNumber::from_int_coeffs(4, &[3, -2]);
        let expect = lam * g.apply(&(x * lam.inverse().unwrap()));
        assert_eq!(c.apply(&x), expect);
        assert_eq!(c.rot.norm_sq(), CycloNumber::one(4));
    }
}
