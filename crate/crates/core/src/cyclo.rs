//! Exact arithmetic in the cyclotomic fields `Q(ζ_n)` for `n ∈ {4, 5, 8}`.
//!
//! An element is stored by its rational coordinates over the power basis
//! `{1, ζ, ζ², …, ζ^{φ(n)-1}}` and kept reduced modulo the `n`-th cyclotomic
//! polynomial, so structural equality is field equality. The primitive root
//! is fixed as `ζ_n = exp(2πi/n)`; [`CycloNumber::embed`] uses that
//! convention.
//!
//! `Q(ζ_5)` also carries the tenth roots of unity, since `ζ_10 = -ζ_5³`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i64>;

/// Maximal degree `φ(n)` over all supported indices.
const MAX_DEGREE: usize = 4;

/// Euler totient of a supported index.
pub fn degree(n: u8) -> Result<usize> {
    match n {
        4 => Ok(2),
        5 | 8 => Ok(4),
        _ => Err(Error::UnsupportedIndex(n)),
    }
}

/// Exponents `k` with `gcd(k, n) = 1`; these index the Galois group.
fn units(n: u8) -> &'static [u32] {
    match n {
        4 => &[1, 3],
        5 => &[1, 2, 3, 4],
        8 => &[1, 3, 5, 7],
        _ => unreachable!("index validated at construction"),
    }
}

/// Cyclotomic polynomial `Φ_n` without its leading monomial: `x^φ = -Σ tail_j x^j`.
fn tail(n: u8) -> &'static [i64] {
    match n {
        4 => &[1, 0],
        5 => &[1, 1, 1, 1],
        8 => &[1, 0, 0, 0],
        _ => unreachable!("index validated at construction"),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CycloNumber {
    n: u8,
    c: [Rational; MAX_DEGREE],
}

/// Which ring operation [`cyclo_arith`] performs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

/// Checked binary arithmetic; fails when the two operands live in different fields.
pub fn cyclo_arith(a: &CycloNumber, b: &CycloNumber, op: ArithOp) -> Result<CycloNumber> {
    match op {
        ArithOp::Add => a.try_add(b),
        ArithOp::Sub => a.try_sub(b),
        ArithOp::Mul => a.try_mul(b),
    }
}

impl CycloNumber {
    pub fn zero(n: u8) -> Self {
        degree(n).expect("supported cyclotomic index");
        CycloNumber { n, c: [Rational::zero(); MAX_DEGREE] }
    }

    pub fn one(n: u8) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_int(n: u8, v: i64) -> Self {
        Self::from_rational(n, Rational::from_integer(v))
    }

    pub fn from_rational(n: u8, q: Rational) -> Self {
        let mut z = Self::zero(n);
        z.c[0] = q;
        z
    }

    /// Builds an element from power-basis coordinates; extra coordinates
    /// beyond `φ(n)` are folded in by reduction.
    pub fn from_coeffs(n: u8, coeffs: &[Rational]) -> Result<Self> {
        let d = degree(n)?;
        let mut buf = [Rational::zero(); 2 * MAX_DEGREE];
        if coeffs.len() > buf.len() {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients given for Q(ζ{n})",
                coeffs.len()
            )));
        }
        buf[..coeffs.len()].copy_from_slice(coeffs);
        Ok(Self::reduce(n, d, &mut buf))
    }

    pub fn from_int_coeffs(n: u8, coeffs: &[i64]) -> Self {
        let q: Vec<Rational> = coeffs.iter().map(|&v| Rational::from_integer(v)).collect();
        Self::from_coeffs(n, &q).expect("valid integer coefficients")
    }

    /// The primitive root `ζ_n = exp(2πi/n)`.
    pub fn zeta(n: u8) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn zeta_pow(n: u8, k: i64) -> Self {
        let d = degree(n).expect("supported cyclotomic index");
        let k = k.rem_euclid(n as i64) as usize;
        let mut buf = [Rational::zero(); 2 * MAX_DEGREE];
        buf[k] = Rational::one();
        Self::reduce(n, d, &mut buf)
    }

    pub fn index(&self) -> u8 {
        self.n
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c[..degree(self.n).unwrap()]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|q| q.is_zero())
    }

    /// True when the element is a rational number.
    pub fn is_rational(&self) -> bool {
        self.c[1..].iter().all(|q| q.is_zero())
    }

    pub fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then_some(self.c[0])
    }

    /// True when the element is real, i.e. fixed by complex conjugation.
    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    fn reduce(n: u8, d: usize, buf: &mut [Rational; 2 * MAX_DEGREE]) -> Self {
        let t = tail(n);
        for deg in (d..buf.len()).rev() {
            let lead = buf[deg];
            if lead.is_zero() {
                continue;
            }
            buf[deg] = Rational::zero();
            for (j, &p) in t.iter().enumerate() {
                if p != 0 {
                    buf[deg - d + j] -= lead * Rational::from_integer(p);
                }
            }
        }
        let mut c = [Rational::zero(); MAX_DEGREE];
        c[..d].copy_from_slice(&buf[..d]);
        CycloNumber { n, c }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::IndexMismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(other.c.iter()) {
            *a += *b;
        }
        Ok(CycloNumber { n: self.n, c })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(other.c.iter()) {
            *a -= *b;
        }
        Ok(CycloNumber { n: self.n, c })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let d = degree(self.n)?;
        let mut buf = [Rational::zero(); 2 * MAX_DEGREE];
        for i in 0..d {
            if self.c[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if !other.c[j].is_zero() {
                    buf[i + j] += self.c[i] * other.c[j];
                }
            }
        }
        Ok(Self::reduce(self.n, d, &mut buf))
    }

    pub fn scale(&self, q: Rational) -> Self {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= q;
        }
        CycloNumber { n: self.n, c }
    }

    pub fn scale_int(&self, v: i64) -> Self {
        self.scale(Rational::from_integer(v))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = *self;
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    /// Field automorphism `ζ ↦ ζ^k`; `k` must be coprime to `n`.
    pub fn galois(&self, k: u32) -> Self {
        let d = degree(self.n).unwrap();
        let mut acc = Self::zero(self.n);
        for j in 0..d {
            if !self.c[j].is_zero() {
                let term = Self::zeta_pow(self.n, (j as i64) * (k as i64)).scale(self.c[j]);
                acc = acc + term;
            }
        }
        acc
    }

    /// Complex conjugation, which is the automorphism `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.n as u32 - 1)
    }

    /// `|z|²` as an exact (real) field element.
    pub fn norm_sq(&self) -> Self {
        *self * self.conj()
    }

    /// Field norm down to `Q`: the product of all Galois conjugates.
    pub fn field_norm(&self) -> Rational {
        let mut acc = *self;
        for &k in &units(self.n)[1..] {
            acc = acc * self.galois(k);
        }
        acc.as_rational().expect("field norm is rational")
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut cofactor = Self::one(self.n);
        for &k in &units(self.n)[1..] {
            cofactor = cofactor * self.galois(k);
        }
        let norm = (*self * cofactor).as_rational().expect("field norm is rational");
        Ok(cofactor.scale(norm.recip()))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(*self * other.inverse()?)
    }

    /// Embedding into `C` under `ζ_n ↦ exp(2πi/n)`.
    pub fn embed(&self) -> Complex64 {
        let d = degree(self.n).unwrap();
        let mut z = Complex64::new(0.0, 0.0);
        for k in 0..d {
            let q = self.c[k];
            if q.is_zero() {
                continue;
            }
            let v = *q.numer() as f64 / *q.denom() as f64;
            z += root_embedding(self.n, k) * v;
        }
        z
    }

    /// Re-expresses an element of `Q(i)` inside `Q(ζ_8)` (where `i = ζ_8²`).
    /// Elements already in the target field are returned unchanged.
    pub fn lift(&self, target: u8) -> Result<Self> {
        if self.n == target {
            return Ok(*self);
        }
        match (self.n, target) {
            (4, 8) => Ok(Self::from_rational(8, self.c[0])
                + Self::zeta_pow(8, 2).scale(self.c[1])),
            _ if self.is_rational() => Ok(Self::from_rational(target, self.c[0])),
            _ => Err(Error::IndexMismatch(self.n, target)),
        }
    }

    /// Largest absolute value of a numerator or denominator among the coordinates.
    pub fn height(&self) -> i64 {
        self.c
            .iter()
            .map(|q| q.numer().abs().max(*q.denom()))
            .max()
            .unwrap_or(0)
    }
}

fn root_embedding(n: u8, k: usize) -> Complex64 {
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    // exact values where they exist keep embeddings of lattice points bit-stable
    match (n, k) {
        (4, 1) | (8, 2) => Complex64::new(0.0, 1.0),
        (8, 1) => Complex64::new(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
        (8, 3) => Complex64::new(-std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2),
        _ => Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64),
    }
}

impl Add for CycloNumber {
    type Output = CycloNumber;
    fn add(self, rhs: Self) -> Self {
        self.try_add(&rhs).expect("cyclotomic index mismatch")
    }
}

impl Sub for CycloNumber {
    type Output = CycloNumber;
    fn sub(self, rhs: Self) -> Self {
        self.try_sub(&rhs).expect("cyclotomic index mismatch")
    }
}

impl Mul for CycloNumber {
    type Output = CycloNumber;
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("cyclotomic index mismatch")
    }
}

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> Self {
        self.scale(-Rational::one())
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Text form `n:[c0,c1,...]`, with each coordinate an integer or `p/q`.
impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs().iter().map(fmt_rational).collect();
        write!(f, "{}:[{}]", self.n, parts.join(","))
    }
}

impl fmt::Debug for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.embed();
        write!(f, "{self} (≈ {:.6}{:+.6}i)", z.re, z.im)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

impl FromStr for CycloNumber {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad cyclotomic literal `{s}`"));
        let (n, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let n: u8 = n.trim().parse().map_err(|_| bad())?;
        let d = degree(n)?;
        let body = rest
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(bad)?;
        let coeffs = body
            .split(',')
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != d {
            return Err(Error::Parse(format!(
                "expected {d} coordinates for Q(ζ{n}), got {}",
                coeffs.len()
            )));
        }
        CycloNumber::from_coeffs(n, &coeffs)
    }
}

impl serde::Serialize for CycloNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for CycloNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Frequently used constants.
pub mod consts {
    use super::CycloNumber;

    /// `√2 = ζ8 + ζ8⁷` in `Q(ζ8)`.
    pub fn sqrt2() -> CycloNumber {
        CycloNumber::zeta_pow(8, 1) + CycloNumber::zeta_pow(8, 7)
    }

    /// Silver mean `1 + √2`, the Ammann–Beenker inflation factor.
    pub fn silver_mean() -> CycloNumber {
        CycloNumber::one(8) + sqrt2()
    }

    /// Golden ratio `τ = -ζ5² - ζ5³`, the Penrose inflation factor.
    pub fn golden_ratio() -> CycloNumber {
        -(CycloNumber::zeta_pow(5, 2) + CycloNumber::zeta_pow(5, 3))
    }

    /// `2 + i`, the pinwheel scale-rotation.
    pub fn pinwheel_factor() -> CycloNumber {
        CycloNumber::from_int(4, 2) + CycloNumber::zeta(4)
    }

    /// Primitive tenth root `ζ10 = -ζ5³` inside `Q(ζ5)`.
    pub fn zeta10() -> CycloNumber {
        -CycloNumber::zeta_pow(5, 3)
    }
}
