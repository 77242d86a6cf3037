//! Exact arithmetic in the real quadratic field Q(√3).
//!
//! Every coordinate, length and predicate arising from Gaussian and
//! Eisenstein tripods lives in Q(√3), so comparisons are decided with
//! integer arithmetic only. [`QuadraticNumber`] carries rational
//! coefficients and is used for the geometry of individual tripods;
//! [`RootThreeInt`] is the integral subring Z[√3] with machine-width
//! coefficients and backs the census inner loop.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::OverflowError;

pub type Rational = Ratio<i128>;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn sign_of(v: i128) -> i8 {
    v.signum() as i8
}

/// Compares `|p|` with `|q|·√3` where both are given as squared magnitudes
/// `p²` and `q²`.
fn cmp_square_vs_three_square(p: i128, q: i128) -> Result<Ordering, OverflowError> {
    let lhs = p
        .checked_mul(p)
        .ok_or(OverflowError::new("square comparison"))?;
    let rhs = q
        .checked_mul(q)
        .and_then(|q2| q2.checked_mul(3))
        .ok_or(OverflowError::new("square comparison"))?;
    Ok(lhs.cmp(&rhs))
}

/// Sign of `x + y√3` given the signs of `x`, `y` and the ordering of `|x|`
/// against `|y|√3`.
fn combine_sign(
    sx: i8,
    sy: i8,
    magnitudes: impl FnOnce() -> Result<Ordering, OverflowError>,
) -> Result<i8, OverflowError> {
    if sx >= 0 && sy >= 0 {
        return Ok(sx.max(sy));
    }
    if sx <= 0 && sy <= 0 {
        return Ok(sx.min(sy));
    }
    // Mixed signs: the term with the larger magnitude wins.
    Ok(match magnitudes()? {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => 0,
    })
}

/// An element `x + y√3` of Q(√3) with exact rational coefficients.
///
/// Fractions are kept in lowest terms with positive denominators, so the
/// derived equality is equality of field elements.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadraticNumber {
    rational: Rational,
    root3: Rational,
}

impl QuadraticNumber {
    pub fn new(rational: Rational, root3: Rational) -> Self {
        Self { rational, root3 }
    }

    pub fn from_integer(v: i64) -> Self {
        Self::new(Rational::from_integer(v as i128), Rational::zero())
    }

    /// `(x_num/x_den) + (y_num/y_den)·√3`. Panics on a zero denominator.
    pub fn from_fractions(x_num: i128, x_den: i128, y_num: i128, y_den: i128) -> Self {
        Self::new(Rational::new(x_num, x_den), Rational::new(y_num, y_den))
    }

    pub fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn sqrt3() -> Self {
        Self::new(Rational::zero(), Rational::from_integer(1))
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn root3_part(&self) -> &Rational {
        &self.root3
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.root3.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.root3.is_zero()
    }

    /// The integer value, when the number is a rational integer.
    pub fn as_integer(&self) -> Option<i128> {
        (self.root3.is_zero() && self.rational.is_integer()).then(|| *self.rational.numer())
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, OverflowError> {
        let overflow = || OverflowError::new("add");
        Ok(Self::new(
            self.rational.checked_add(&rhs.rational).ok_or_else(overflow)?,
            self.root3.checked_add(&rhs.root3).ok_or_else(overflow)?,
        ))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, OverflowError> {
        let overflow = || OverflowError::new("sub");
        Ok(Self::new(
            self.rational.checked_sub(&rhs.rational).ok_or_else(overflow)?,
            self.root3.checked_sub(&rhs.root3).ok_or_else(overflow)?,
        ))
    }

    /// `(x1 + y1√3)(x2 + y2√3) = (x1x2 + 3y1y2) + (x1y2 + x2y1)√3`.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, OverflowError> {
        let overflow = || OverflowError::new("mul");
        let mul = |a: &Rational, b: &Rational| a.checked_mul(b).ok_or_else(overflow);
        let add = |a: Rational, b: Rational| a.checked_add(&b).ok_or_else(overflow);
        let three = Rational::from_integer(3);
        let yy = mul(&mul(&self.root3, &rhs.root3)?, &three)?;
        let rational = add(mul(&self.rational, &rhs.rational)?, yy)?;
        let root3 = add(
            mul(&self.rational, &rhs.root3)?,
            mul(&self.root3, &rhs.rational)?,
        )?;
        Ok(Self::new(rational, root3))
    }

    /// Multiplicative inverse via the conjugate: `1/(x + y√3) = (x − y√3)/(x² − 3y²)`.
    /// Returns `None` for zero.
    pub fn checked_recip(&self) -> Result<Option<Self>, OverflowError> {
        if self.is_zero() {
            return Ok(None);
        }
        let overflow = || OverflowError::new("recip");
        let x2 = self.rational.checked_mul(&self.rational).ok_or_else(overflow)?;
        let y2 = self.root3.checked_mul(&self.root3).ok_or_else(overflow)?;
        let three_y2 = y2
            .checked_mul(&Rational::from_integer(3))
            .ok_or_else(overflow)?;
        let norm = x2.checked_sub(&three_y2).ok_or_else(overflow)?;
        // norm is nonzero because √3 is irrational.
        let re = self.rational.checked_div(&norm).ok_or_else(overflow)?;
        let im = (-self.root3).checked_div(&norm).ok_or_else(overflow)?;
        Ok(Some(Self::new(re, im)))
    }

    /// Division; `None` when `rhs` is zero.
    pub fn checked_div(&self, rhs: &Self) -> Result<Option<Self>, OverflowError> {
        match rhs.checked_recip()? {
            Some(inv) => self.checked_mul(&inv).map(Some),
            None => Ok(None),
        }
    }

    pub fn neg(&self) -> Self {
        Self::new(-self.rational, -self.root3)
    }

    /// Multiplication by √3: `(x + y√3)√3 = 3y + x√3`.
    pub fn mul_sqrt3(&self) -> Result<Self, OverflowError> {
        let three_y = self
            .root3
            .checked_mul(&Rational::from_integer(3))
            .ok_or(OverflowError::new("mul_sqrt3"))?;
        Ok(Self::new(three_y, self.rational))
    }

    /// Exact sign of the real number `x + y√3`.
    pub fn sign(&self) -> Result<i8, OverflowError> {
        let sx = sign_of(*self.rational.numer());
        let sy = sign_of(*self.root3.numer());
        combine_sign(sx, sy, || {
            // |x| vs |y|√3  <=>  (px·qy)² vs 3(py·qx)²
            let p = self
                .rational
                .numer()
                .abs()
                .checked_mul(*self.root3.denom())
                .ok_or(OverflowError::new("sign"))?;
            let q = self
                .root3
                .numer()
                .abs()
                .checked_mul(*self.rational.denom())
                .ok_or(OverflowError::new("sign"))?;
            cmp_square_vs_three_square(p, q)
        })
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<Ordering, OverflowError> {
        Ok(self.checked_sub(other)?.sign()?.cmp(&0))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Result<i128, OverflowError> {
        let mut k = self.to_f64().floor() as i128;
        loop {
            let below = self.cmp_exact(&Self::new(Rational::from_integer(k), Rational::zero()))?;
            if below == Ordering::Less {
                k -= 1;
                continue;
            }
            let above =
                self.cmp_exact(&Self::new(Rational::from_integer(k + 1), Rational::zero()))?;
            if above != Ordering::Less {
                k += 1;
                continue;
            }
            return Ok(k);
        }
    }

    /// Nearest `f64`; used for reporting only, never inside predicates.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.rational) + rational_to_f64(&self.root3) * SQRT3
    }
}

impl From<RootThreeInt> for QuadraticNumber {
    fn from(v: RootThreeInt) -> Self {
        Self::new(
            Rational::from_integer(v.int as i128),
            Rational::from_integer(v.root3 as i128),
        )
    }
}

impl fmt::Display for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.root3.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let sign = if self.root3.is_negative() { '-' } else { '+' };
        write!(f, "{} {} {}√3", self.rational, sign, self.root3.abs())
    }
}

impl fmt::Debug for QuadraticNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QuadraticNumber({self})")
    }
}

impl Serialize for QuadraticNumber {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("QuadraticNumber", 3)?;
        s.serialize_field("rational", &self.rational.to_string())?;
        s.serialize_field("root3", &self.root3.to_string())?;
        s.serialize_field("value", &self.to_f64())?;
        s.end()
    }
}

/// An element `int + root3·√3` of the ring Z[√3].
///
/// The census kernel works in scaled lattice coordinates where every
/// quantity is integral, so this type avoids the gcd normalisation that
/// [`QuadraticNumber`] pays on each operation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RootThreeInt {
    pub int: i64,
    pub root3: i64,
}

impl RootThreeInt {
    pub const ZERO: Self = Self { int: 0, root3: 0 };

    pub const fn new(int: i64, root3: i64) -> Self {
        Self { int, root3 }
    }

    pub const fn from_int(int: i64) -> Self {
        Self { int, root3: 0 }
    }

    #[inline]
    pub fn checked_add(self, rhs: Self) -> Result<Self, OverflowError> {
        match (
            self.int.checked_add(rhs.int),
            self.root3.checked_add(rhs.root3),
        ) {
            (Some(int), Some(root3)) => Ok(Self { int, root3 }),
            _ => Err(OverflowError::new("add")),
        }
    }

    #[inline]
    pub fn checked_sub(self, rhs: Self) -> Result<Self, OverflowError> {
        match (
            self.int.checked_sub(rhs.int),
            self.root3.checked_sub(rhs.root3),
        ) {
            (Some(int), Some(root3)) => Ok(Self { int, root3 }),
            _ => Err(OverflowError::new("sub")),
        }
    }

    #[inline]
    pub fn checked_mul(self, rhs: Self) -> Result<Self, OverflowError> {
        let wide = |a: i64, b: i64| a as i128 * b as i128;
        let int = wide(self.int, rhs.int) + 3 * wide(self.root3, rhs.root3);
        let root3 = wide(self.int, rhs.root3) + wide(self.root3, rhs.int);
        match (i64::try_from(int), i64::try_from(root3)) {
            (Ok(int), Ok(root3)) => Ok(Self { int, root3 }),
            _ => Err(OverflowError::new("mul")),
        }
    }

    #[inline]
    pub fn checked_scale(self, k: i64) -> Result<Self, OverflowError> {
        match (self.int.checked_mul(k), self.root3.checked_mul(k)) {
            (Some(int), Some(root3)) => Ok(Self { int, root3 }),
            _ => Err(OverflowError::new("scale")),
        }
    }

    /// `(a + b√3)·√3 = 3b + a√3`.
    #[inline]
    pub fn checked_mul_sqrt3(self) -> Result<Self, OverflowError> {
        let int = self
            .root3
            .checked_mul(3)
            .ok_or(OverflowError::new("mul_sqrt3"))?;
        Ok(Self {
            int,
            root3: self.int,
        })
    }

    #[inline]
    pub fn sign(self) -> Result<i8, OverflowError> {
        combine_sign(sign_of(self.int as i128), sign_of(self.root3 as i128), || {
            cmp_square_vs_three_square(self.int.unsigned_abs() as i128, self.root3.unsigned_abs() as i128)
        })
    }

    pub fn to_f64(self) -> f64 {
        self.int as f64 + self.root3 as f64 * SQRT3
    }
}

/// Greatest common divisor with `gcd(0, x) = |x|`.
pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
