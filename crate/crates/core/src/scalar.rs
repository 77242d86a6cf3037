//! Number backends for planar geometry.
//!
//! Geometry and topology code is written once over [`Scalar`]. The exact
//! backend ([`QuadraticNumber`]) decides every sign without rounding; the
//! `f64` backend is used for lattices whose shape parameter is not in
//! Q(√3), where signs within a tolerance are treated as zero.

use std::fmt;

use num_complex::Complex64;

use crate::error::{OverflowError, Result, TripodError};
use crate::exact::QuadraticNumber;
use crate::lattice::{
    interior_lattice_points_from, lattice_points_on_open_segment, LatticeKind, LatticeSpec,
    LatticeVector,
};

pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    /// Whether signs computed by this backend are exact.
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn half() -> Self;
    fn sqrt3() -> Self;
    fn add(&self, rhs: &Self) -> Result<Self, OverflowError>;
    fn sub(&self, rhs: &Self) -> Result<Self, OverflowError>;
    fn mul(&self, rhs: &Self) -> Result<Self, OverflowError>;
    /// `None` when `rhs` is zero.
    fn div(&self, rhs: &Self) -> Result<Option<Self>, OverflowError>;
    fn neg(&self) -> Self;
    /// Sign with values of magnitude at most `eps` treated as zero; exact
    /// backends ignore `eps`.
    fn sign(&self, eps: f64) -> Result<i8, OverflowError>;
    /// Integer nearest to the value when the value is an integer (within
    /// `eps` for inexact backends).
    fn as_integer(&self, eps: f64) -> Result<Option<i64>, OverflowError>;
    fn to_f64(&self) -> f64;

    /// Real and imaginary parts of the lattice parameter `τ`.
    fn tau(lattice: &LatticeSpec) -> Result<(Self, Self)>;

    /// Number of lattice points strictly inside the segment from the lattice
    /// point `from` to `to`.
    fn leg_lattice_points(
        from: LatticeVector,
        to: &Point2<Self>,
        lattice: &LatticeSpec,
    ) -> Result<u64>;
}

impl Scalar for QuadraticNumber {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        QuadraticNumber::from_integer(v)
    }
    fn half() -> Self {
        QuadraticNumber::from_fractions(1, 2, 0, 1)
    }
    fn sqrt3() -> Self {
        QuadraticNumber::sqrt3()
    }
    fn add(&self, rhs: &Self) -> Result<Self, OverflowError> {
        self.checked_add(rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self, OverflowError> {
        self.checked_sub(rhs)
    }
    fn mul(&self, rhs: &Self) -> Result<Self, OverflowError> {
        self.checked_mul(rhs)
    }
    fn div(&self, rhs: &Self) -> Result<Option<Self>, OverflowError> {
        self.checked_div(rhs)
    }
    fn neg(&self) -> Self {
        QuadraticNumber::neg(self)
    }
    fn sign(&self, _eps: f64) -> Result<i8, OverflowError> {
        QuadraticNumber::sign(self)
    }
    fn as_integer(&self, _eps: f64) -> Result<Option<i64>, OverflowError> {
        Ok(QuadraticNumber::as_integer(self).and_then(|v| i64::try_from(v).ok()))
    }
    fn to_f64(&self) -> f64 {
        QuadraticNumber::to_f64(self)
    }
    fn tau(lattice: &LatticeSpec) -> Result<(Self, Self)> {
        match lattice.kind() {
            LatticeKind::Gaussian => Ok((Self::zero(), Self::one())),
            LatticeKind::Eisenstein => Ok((
                QuadraticNumber::from_fractions(1, 2, 0, 1),
                QuadraticNumber::from_fractions(0, 1, 1, 2),
            )),
            LatticeKind::GeneralTau => Err(TripodError::InexactLattice(lattice.to_string())),
        }
    }
    fn leg_lattice_points(
        from: LatticeVector,
        to: &Point2<Self>,
        lattice: &LatticeSpec,
    ) -> Result<u64> {
        interior_lattice_points_from(from, to, lattice)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn half() -> Self {
        0.5
    }
    fn sqrt3() -> Self {
        3f64.sqrt()
    }
    fn add(&self, rhs: &Self) -> Result<Self, OverflowError> {
        Ok(self + rhs)
    }
    fn sub(&self, rhs: &Self) -> Result<Self, OverflowError> {
        Ok(self - rhs)
    }
    fn mul(&self, rhs: &Self) -> Result<Self, OverflowError> {
        Ok(self * rhs)
    }
    fn div(&self, rhs: &Self) -> Result<Option<Self>, OverflowError> {
        Ok((*rhs != 0.0).then(|| self / rhs))
    }
    fn neg(&self) -> Self {
        -self
    }
    fn sign(&self, eps: f64) -> Result<i8, OverflowError> {
        Ok(if self.abs() <= eps {
            0
        } else if *self > 0.0 {
            1
        } else {
            -1
        })
    }
    fn as_integer(&self, eps: f64) -> Result<Option<i64>, OverflowError> {
        let r = self.round();
        Ok(((self - r).abs() <= eps).then_some(r as i64))
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn tau(lattice: &LatticeSpec) -> Result<(Self, Self)> {
        Ok((lattice.tau_s(), lattice.tau_t()))
    }
    fn leg_lattice_points(
        from: LatticeVector,
        to: &Point2<Self>,
        lattice: &LatticeSpec,
    ) -> Result<u64> {
        let start = lattice.embed_in::<f64>(from)?;
        if start == *to {
            return Ok(0);
        }
        Ok(lattice_points_on_open_segment(&start, to, lattice)?.points.len() as u64)
    }
}

/// A point of the plane with coordinates in a [`Scalar`] backend.
#[derive(Clone, Debug, PartialEq)]
pub struct Point2<S> {
    pub x: S,
    pub y: S,
}

impl<S: Scalar> Point2<S> {
    pub fn new(x: S, y: S) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(S::from_i64(0), S::from_i64(0))
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, OverflowError> {
        Ok(Self::new(self.x.add(&rhs.x)?, self.y.add(&rhs.y)?))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, OverflowError> {
        Ok(Self::new(self.x.sub(&rhs.x)?, self.y.sub(&rhs.y)?))
    }

    pub fn scale(&self, k: &S) -> Result<Self, OverflowError> {
        Ok(Self::new(self.x.mul(k)?, self.y.mul(k)?))
    }

    pub fn neg(&self) -> Self {
        Self::new(self.x.neg(), self.y.neg())
    }

    /// `Re(self · conj(rhs))`.
    pub fn dot(&self, rhs: &Self) -> Result<S, OverflowError> {
        self.x.mul(&rhs.x)?.add(&self.y.mul(&rhs.y)?)
    }

    /// `Im(conj(self) · rhs)`; positive when `rhs` is counter-clockwise of `self`.
    pub fn cross(&self, rhs: &Self) -> Result<S, OverflowError> {
        self.x.mul(&rhs.y)?.sub(&self.y.mul(&rhs.x)?)
    }

    pub fn norm_sq(&self) -> Result<S, OverflowError> {
        self.dot(self)
    }

    /// Multiplication by `e^{iπ/3}`.
    pub fn rotate_60(&self) -> Result<Self, OverflowError> {
        let h = S::half();
        let r = S::sqrt3().mul(&h)?;
        Ok(Self::new(
            self.x.mul(&h)?.sub(&self.y.mul(&r)?)?,
            self.x.mul(&r)?.add(&self.y.mul(&h)?)?,
        ))
    }

    /// Multiplication by `e^{−iπ/3}`.
    pub fn rotate_neg_60(&self) -> Result<Self, OverflowError> {
        let h = S::half();
        let r = S::sqrt3().mul(&h)?;
        Ok(Self::new(
            self.x.mul(&h)?.add(&self.y.mul(&r)?)?,
            self.y.mul(&h)?.sub(&self.x.mul(&r)?)?,
        ))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x.to_f64(), self.y.to_f64())
    }
}

/// Orientation of the triple `(a, b, c)`: twice the signed area of the triangle.
pub fn orient<S: Scalar>(a: &Point2<S>, b: &Point2<S>, c: &Point2<S>) -> Result<S, OverflowError> {
    b.sub(a)?.cross(&c.sub(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    type Q = QuadraticNumber;

    #[test]
    fn rotations_are_inverse() {
        let p = Point2::new(Q::from_integer(3), Q::from_fractions(1, 2, 2, 3));
        let back = p.rotate_60().unwrap().rotate_neg_60().unwrap();
        assert_eq!(back, p);
        // e^{iπ/3} applied six times is the identity
        let mut q = p.clone();
        for _ in 0..6 {
            q = q.rotate_60().unwrap();
        }
        assert_eq!(q, p);
    }

    #[test]
    fn float_backend_sign_tolerance() {
        assert_eq!(1e-12f64.sign(1e-9).unwrap(), 0);
        assert_eq!((-1e-3f64).sign(1e-9).unwrap(), -1);
        assert_eq!(2.0000000001f64.as_integer(1e-9).unwrap(), Some(2));
        assert_eq!(2.1f64.as_integer(1e-9).unwrap(), None);
    }
}
