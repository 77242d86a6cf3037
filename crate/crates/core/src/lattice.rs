//! Lattices `Λ = Z + Zτ` in the complex plane.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, TripodError};
use crate::exact::{gcd, QuadraticNumber, Rational};
use crate::scalar::{Point2, Scalar};

/// Default collinearity tolerance for lattices without an exact model.
pub const DEFAULT_EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LatticeKind {
    /// `τ = i`
    Gaussian,
    /// `τ = e^{iπ/3}`
    Eisenstein,
    /// Arbitrary `τ = s + it`, evaluated in floating point.
    GeneralTau,
}

/// The lattice spanned by `1` and `τ = tau_s + i·tau_t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    kind: LatticeKind,
    tau_s: f64,
    tau_t: f64,
    epsilon: f64,
}

impl LatticeSpec {
    pub fn gaussian() -> Self {
        Self {
            kind: LatticeKind::Gaussian,
            tau_s: 0.0,
            tau_t: 1.0,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn eisenstein() -> Self {
        Self {
            kind: LatticeKind::Eisenstein,
            tau_s: 0.5,
            tau_t: 3f64.sqrt() / 2.0,
            epsilon: DEFAULT_EPSILON,
        }
    }

    pub fn general(tau_s: f64, tau_t: f64) -> Result<Self> {
        if !tau_t.is_finite() || tau_t <= 0.0 || !tau_s.is_finite() {
            return Err(TripodError::InvalidLattice(format!(
                "tau = {tau_s} + {tau_t}i must have finite parts and positive imaginary part"
            )));
        }
        Ok(Self {
            kind: LatticeKind::GeneralTau,
            tau_s,
            tau_t,
            epsilon: DEFAULT_EPSILON,
        })
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn tau_s(&self) -> f64 {
        self.tau_s
    }

    pub fn tau_t(&self) -> f64 {
        self.tau_t
    }

    /// Collinearity tolerance; zero for exact lattices.
    pub fn epsilon(&self) -> f64 {
        if self.is_exact() {
            0.0
        } else {
            self.epsilon
        }
    }

    /// Whether all predicates on this lattice are evaluated exactly.
    pub fn is_exact(&self) -> bool {
        !matches!(self.kind, LatticeKind::GeneralTau)
    }

    /// Area of the fundamental parallelogram spanned by `1` and `τ`.
    pub fn covolume(&self) -> f64 {
        self.tau_t
    }

    pub fn embed(&self, v: LatticeVector) -> Complex64 {
        Complex64::new(
            v.a as f64 + v.b as f64 * self.tau_s,
            v.b as f64 * self.tau_t,
        )
    }

    pub fn embed_in<S: Scalar>(&self, v: LatticeVector) -> Result<Point2<S>> {
        let (s, t) = S::tau(self)?;
        let b = S::from_i64(v.b);
        Ok(Point2::new(S::from_i64(v.a).add(&b.mul(&s)?)?, b.mul(&t)?))
    }

    /// Coordinates `(α, β)` with `point = α + βτ` (inverse of the basis map).
    pub fn coordinates_of<S: Scalar>(&self, point: &Point2<S>) -> Result<(S, S)> {
        let (s, t) = S::tau(self)?;
        let beta = point
            .y
            .div(&t)?
            .ok_or_else(|| TripodError::InvalidLattice("Im τ = 0".into()))?;
        let alpha = point.x.sub(&beta.mul(&s)?)?;
        Ok((alpha, beta))
    }

    /// Bounds `(|a|max, |b|max)` on lattice coordinates of points with `|z| ≤ radius`.
    pub fn coordinate_box(&self, radius: f64) -> (i64, i64) {
        let b_max = (radius / self.tau_t).floor() as i64 + 1;
        let a_max = (radius + b_max as f64 * self.tau_s.abs()).floor() as i64 + 1;
        (a_max, b_max)
    }
}

impl fmt::Display for LatticeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LatticeKind::Gaussian => f.write_str("gaussian"),
            LatticeKind::Eisenstein => f.write_str("eisenstein"),
            LatticeKind::GeneralTau => write!(f, "tau={},{}", self.tau_s, self.tau_t),
        }
    }
}

impl FromStr for LatticeSpec {
    type Err = TripodError;

    /// Accepts `gaussian`, `eisenstein` or `tau=<s>,<t>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.to_ascii_lowercase().as_str() {
            "gaussian" => return Ok(Self::gaussian()),
            "eisenstein" => return Ok(Self::eisenstein()),
            _ => {}
        }
        let rest = s
            .strip_prefix("tau=")
            .ok_or_else(|| TripodError::InvalidLattice(format!("unrecognised lattice `{s}`")))?;
        let (re, im) = rest
            .split_once(',')
            .ok_or_else(|| TripodError::InvalidLattice(format!("expected tau=<s>,<t>, got `{s}`")))?;
        let parse = |v: &str| {
            v.trim()
                .parse::<f64>()
                .map_err(|e| TripodError::InvalidLattice(format!("`{v}`: {e}")))
        };
        Self::general(parse(re)?, parse(im)?)
    }
}

impl Serialize for LatticeSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A lattice point `a + bτ` in lattice coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeVector {
    pub a: i64,
    pub b: i64,
}

impl LatticeVector {
    pub const ORIGIN: Self = Self { a: 0, b: 0 };

    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }

    pub fn is_primitive(&self) -> bool {
        gcd(self.a, self.b) == 1
    }
}

/// `gcd(a, b, c, d) = 1`.
pub fn is_primitive_quadruple(a: i64, b: i64, c: i64, d: i64) -> Result<bool> {
    if a == 0 && b == 0 && c == 0 && d == 0 {
        return Err(TripodError::AllZero);
    }
    Ok(gcd(gcd(a, b), gcd(c, d)) == 1)
}

/// Lattice points strictly inside a segment.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SegmentLatticePoints {
    pub points: Vec<LatticeVector>,
    /// Set when collinearity was decided within a tolerance.
    pub heuristic: bool,
}

/// All lattice points strictly between `start` and `end`.
///
/// Candidates are the integer points in the bounding box of the segment in
/// lattice coordinates; each is tested for collinearity and for a strictly
/// interior parameter. On inexact lattices the distance to the line is
/// compared with the lattice tolerance.
pub fn lattice_points_on_open_segment<S: Scalar>(
    start: &Point2<S>,
    end: &Point2<S>,
    lattice: &LatticeSpec,
) -> Result<SegmentLatticePoints> {
    if start == end {
        return Err(TripodError::InvalidConfig(
            "segment endpoints coincide".into(),
        ));
    }
    let (a0, b0) = lattice.coordinates_of(start)?;
    let (a1, b1) = lattice.coordinates_of(end)?;
    let lo = |u: &S, v: &S| u.to_f64().min(v.to_f64()).floor() as i64 - 1;
    let hi = |u: &S, v: &S| u.to_f64().max(v.to_f64()).ceil() as i64 + 1;

    let dir = end.sub(start)?;
    let len = dir.norm_sq()?.to_f64().sqrt();
    let tol = lattice.epsilon() * len;
    let len_sq = dir.norm_sq()?;

    let mut points = Vec::new();
    for m in lo(&a0, &a1)..=hi(&a0, &a1) {
        for n in lo(&b0, &b1)..=hi(&b0, &b1) {
            let v = LatticeVector::new(m, n);
            let q = lattice.embed_in::<S>(v)?.sub(start)?;
            if dir.cross(&q)?.sign(tol)? != 0 {
                continue;
            }
            let t = dir.dot(&q)?;
            if t.sign(tol)? > 0 && len_sq.sub(&t)?.sign(tol)? > 0 {
                points.push(v);
            }
        }
    }
    Ok(SegmentLatticePoints {
        points,
        heuristic: !S::EXACT,
    })
}

/// Number of lattice points strictly inside the segment from the lattice
/// point `from` to `to`, computed in O(1) on exact lattices.
///
/// A segment starting at a lattice point carries further lattice points only
/// when its direction is a real multiple `λ·(m, n)` of a primitive integer
/// vector; the interior points are then `from + k(m, n)` for `0 < k < λ`.
pub fn interior_lattice_points_from(
    from: LatticeVector,
    to: &Point2<QuadraticNumber>,
    lattice: &LatticeSpec,
) -> Result<u64> {
    let (alpha, beta) = lattice.coordinates_of(to)?;
    let alpha = alpha.checked_sub(&QuadraticNumber::from_integer(from.a))?;
    let beta = beta.checked_sub(&QuadraticNumber::from_integer(from.b))?;

    let lambda = if alpha.is_zero() && beta.is_zero() {
        return Ok(0);
    } else if beta.is_zero() {
        abs(&alpha)?
    } else if alpha.is_zero() {
        abs(&beta)?
    } else {
        let (a0, a1) = (alpha.rational_part(), alpha.root3_part());
        let (b0, b1) = (beta.rational_part(), beta.root3_part());
        let det = checked_det(a0, a1, b0, b1)?;
        if det != Rational::from_integer(0) {
            return Ok(0);
        }
        let ratio = if *b0.numer() != 0 { a0 / b0 } else { a1 / b1 };
        // λ = |β| / denominator(α/β)
        let den = QuadraticNumber::from_integer(
            i64::try_from(*ratio.denom()).map_err(|_| crate::error::OverflowError::new("ratio"))?,
        );
        abs(&beta)?
            .checked_div(&den)?
            .expect("denominator of a reduced fraction is nonzero")
    };
    // #{k ∈ Z : 0 < k < λ} = ceil(λ) − 1
    let ceil = -(lambda.neg().floor()?);
    Ok(u64::try_from(ceil - 1).unwrap_or(0))
}

fn abs(v: &QuadraticNumber) -> Result<QuadraticNumber> {
    Ok(if v.sign()? < 0 { v.neg() } else { v.clone() })
}

fn checked_det(a0: &Rational, a1: &Rational, b0: &Rational, b1: &Rational) -> Result<Rational> {
    use num_traits::{CheckedMul, CheckedSub};
    let overflow = || TripodError::Overflow(crate::error::OverflowError::new("det"));
    let l = a0.checked_mul(b1).ok_or_else(overflow)?;
    let r = a1.checked_mul(b0).ok_or_else(overflow)?;
    l.checked_sub(&r).ok_or_else(overflow)
}

/// Whether `point` is a lattice point.
pub fn is_lattice_point<S: Scalar>(point: &Point2<S>, lattice: &LatticeSpec) -> Result<bool> {
    let (alpha, beta) = lattice.coordinates_of(point)?;
    let eps = lattice.epsilon();
    Ok(alpha.as_integer(eps)?.is_some() && beta.as_integer(eps)?.is_some())
}
