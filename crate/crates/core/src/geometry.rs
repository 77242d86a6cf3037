//! Euclidean geometry of a single tripod inscribed in the triangle `Δ(0, z, w)`.
//!
//! The Fermat point is obtained by intersecting the segment from `0` to the
//! Toricelli point `u = e^{iπ/3}z + e^{−iπ/3}w` with the segment from `z` to
//! the apex `e^{iπ/3}w` of the outward equilateral triangle on `0w`. No
//! trigonometry is involved, so on exact lattices every coordinate stays in
//! Q(√3).

use serde::Serialize;

use crate::error::{OverflowError, Result, TripodError, Vertex};
use crate::exact::gcd;
use crate::lattice::{LatticeSpec, LatticeVector};
use crate::scalar::{Point2, Scalar};

/// Endpoints `z = a + bτ` and `w = c + dτ` in lattice coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TripodCoords {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl TripodCoords {
    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self { a, b, c, d }
    }

    pub fn z(&self) -> LatticeVector {
        LatticeVector::new(self.a, self.b)
    }

    pub fn w(&self) -> LatticeVector {
        LatticeVector::new(self.c, self.d)
    }

    /// `ad − bc`, the index of the spanned sublattice (with sign).
    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn gcd(&self) -> i64 {
        gcd(gcd(self.a, self.b), gcd(self.c, self.d))
    }

    pub fn scaled(&self, k: i64) -> Self {
        Self::new(k * self.a, k * self.b, k * self.c, k * self.d)
    }
}

impl std::fmt::Display for TripodCoords {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.a, self.b, self.c, self.d)
    }
}

/// Position of one triangle angle relative to `2π/3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngleClass {
    Below,
    Boundary,
    Above,
}

/// Classifies the angle between edge vectors `e1`, `e2` at a vertex.
///
/// The angle is below `2π/3` iff `2·e1·e2 + |e1||e2| > 0`, i.e. iff
/// `e1·e2 ≥ 0` or `4(e1·e2)² < |e1|²|e2|²`.
pub fn vertex_angle<S: Scalar>(e1: &Point2<S>, e2: &Point2<S>, eps: f64) -> Result<AngleClass> {
    let dot = e1.dot(e2)?;
    let n1 = e1.norm_sq()?;
    let n2 = e2.norm_sq()?;
    let scale = n1.to_f64() * n2.to_f64();
    if dot.sign(eps * scale.sqrt())? >= 0 {
        return Ok(AngleClass::Below);
    }
    let four_dot_sq = dot.mul(&dot)?.mul(&S::from_i64(4))?;
    Ok(match n1.mul(&n2)?.sub(&four_dot_sq)?.sign(eps * scale)? {
        1 => AngleClass::Below,
        0 => AngleClass::Boundary,
        _ => AngleClass::Above,
    })
}

fn check_nondegenerate<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<()> {
    let nz = z.norm_sq()?;
    let nw = w.norm_sq()?;
    if nz.sign(eps * eps)? == 0 || nw.sign(eps * eps)? == 0 {
        return Err(TripodError::ZeroEndpoint);
    }
    let scale = (nz.to_f64() * nw.to_f64()).sqrt();
    if z.cross(w)?.sign(eps * scale)? == 0 {
        return Err(TripodError::Collinear);
    }
    Ok(())
}

/// The three angle classes of `Δ(0, z, w)` at `0`, `z`, `w`.
pub fn triangle_angles<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<[AngleClass; 3]> {
    check_nondegenerate(z, w, eps)?;
    let zw = w.sub(z)?;
    Ok([
        vertex_angle(z, w, eps)?,
        vertex_angle(&z.neg(), &zw, eps)?,
        vertex_angle(&w.neg(), &zw.neg(), eps)?,
    ])
}

/// First angle of `Δ(0, z, w)` that is not strictly below `2π/3`, as an error.
pub fn check_angles<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<()> {
    let classes = triangle_angles(z, w, eps)?;
    for (class, vertex) in classes.into_iter().zip([Vertex::Origin, Vertex::Z, Vertex::W]) {
        match class {
            AngleClass::Below => {}
            AngleClass::Boundary => return Err(TripodError::BoundaryAngle { vertex }),
            AngleClass::Above => return Err(TripodError::AngleTooLarge { vertex }),
        }
    }
    Ok(())
}

/// True iff all three angles of `Δ(0, z, w)` are strictly below `2π/3`.
///
/// Errors when `z` or `w` is zero or the three points are collinear.
pub fn angle_condition<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<bool> {
    Ok(triangle_angles(z, w, eps)?
        .iter()
        .all(|c| *c == AngleClass::Below))
}

fn check_orientation<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<()> {
    check_nondegenerate(z, w, eps)?;
    if z.cross(w)?.sign(0.0)? < 0 {
        return Err(TripodError::Orientation { det: -1 });
    }
    Ok(())
}

/// `u = e^{iπ/3}z + e^{−iπ/3}w`, the apex of the equilateral triangle on `zw`
/// away from the origin.
pub fn toricelli_point<S: Scalar>(z: &Point2<S>, w: &Point2<S>) -> Result<Point2<S>, OverflowError> {
    z.rotate_60()?.add(&w.rotate_neg_60()?)
}

/// `ℓ² = |u|² = |z|² + |w|² − Re(z·conj w) + √3·Im(conj z·w)`.
pub fn tripod_length_sq<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<S> {
    check_orientation(z, w, eps)?;
    check_angles(z, w, eps)?;
    let sum = z.norm_sq()?.add(&w.norm_sq()?)?.sub(&z.dot(w)?)?;
    Ok(sum.add(&S::sqrt3().mul(&z.cross(w)?)?)?)
}

/// The Fermat (tripod) point of `Δ(0, z, w)`.
pub fn fermat_point<S: Scalar>(z: &Point2<S>, w: &Point2<S>, eps: f64) -> Result<Point2<S>> {
    check_orientation(z, w, eps)?;
    check_angles(z, w, eps)?;
    let u = toricelli_point(z, w)?;
    let apex = w.rotate_60()?;
    let edge = apex.sub(z)?;
    // 0 + t·u = z + s·(apex − z)  =>  t = (z × edge) / (u × edge)
    let num = z.cross(&edge)?;
    let den = u.cross(&edge)?;
    let t = num
        .div(&den)?
        .ok_or_else(|| TripodError::Invariant("Fermat construction lines are parallel".into()))?;
    Ok(u.scale(&t)?)
}

/// Whether `arg(u)` lies in the half-open sector `[0, 2π/3)`.
///
/// `arg u ∈ (0, 2π/3)` iff `Im u > 0` and `Im u + √3·Re u > 0`; the ray
/// `arg u = 0` is included.
pub fn in_canonical_sector<S: Scalar>(u: &Point2<S>, eps: f64) -> Result<bool, OverflowError> {
    let y = u.y.sign(eps)?;
    if y == 0 {
        return Ok(u.x.sign(eps)? > 0);
    }
    Ok(y > 0 && u.y.add(&S::sqrt3().mul(&u.x)?)?.sign(eps)? > 0)
}

/// Whether the angle of `Δ(0, z, w)` at the origin is strictly the largest,
/// i.e. `min(|z|², |w|²) > 2·Re(z·conj w)`.
pub fn largest_angle_at_origin<S: Scalar>(
    z: &Point2<S>,
    w: &Point2<S>,
    eps: f64,
) -> Result<bool, OverflowError> {
    let two_dot = z.dot(w)?.mul(&S::from_i64(2))?;
    let scale = z.norm_sq()?.to_f64().max(w.norm_sq()?.to_f64());
    Ok(z.norm_sq()?.sub(&two_dot)?.sign(eps * scale)? > 0
        && w.norm_sq()?.sub(&two_dot)?.sign(eps * scale)? > 0)
}

impl TripodCoords {
    /// The three planar lifts of the same torus tripod, obtained by moving
    /// each vertex of `Δ(0, z, w)` to the origin while keeping the cyclic
    /// (positive) orientation. The first entry is `self`.
    pub fn lifts(&self) -> [TripodCoords; 3] {
        let Self { a, b, c, d } = *self;
        [
            *self,
            TripodCoords::new(c - a, d - b, -a, -b),
            TripodCoords::new(-c, -d, a - c, b - d),
        ]
    }
}

/// A tripod with endpoints `0`, `z`, `w` and its derived geometry.
#[derive(Clone, Debug)]
pub struct Tripod<S: Scalar> {
    pub coords: TripodCoords,
    pub z: Point2<S>,
    pub w: Point2<S>,
    /// Toricelli point.
    pub u: Point2<S>,
    pub length_sq: S,
    pub fermat_point: Point2<S>,
    /// Squared leg lengths `|p|², |z − p|², |w − p|²`.
    pub leg_lengths_sq: [S; 3],
    /// Leg lengths `ℓ1, ℓ2, ℓ3`.
    pub leg_lengths: [f64; 3],
    pub index: i64,
}

impl<S: Scalar> Tripod<S> {
    /// Builds the tripod for `(a, b, c, d)`, rejecting inputs that violate the
    /// tripod preconditions with the failing predicate.
    pub fn new(coords: TripodCoords, lattice: &LatticeSpec) -> Result<Self> {
        if coords == TripodCoords::new(0, 0, 0, 0) {
            return Err(TripodError::AllZero);
        }
        if (coords.a, coords.b) == (0, 0) || (coords.c, coords.d) == (0, 0) {
            return Err(TripodError::ZeroEndpoint);
        }
        let det = coords.det();
        if det == 0 {
            return Err(TripodError::Collinear);
        }
        if det < 0 {
            return Err(TripodError::Orientation { det });
        }
        let eps = lattice.epsilon();
        let z = lattice.embed_in::<S>(coords.z())?;
        let w = lattice.embed_in::<S>(coords.w())?;
        let length_sq = tripod_length_sq(&z, &w, eps)?;
        let fermat_point = fermat_point(&z, &w, eps)?;
        let u = toricelli_point(&z, &w)?;
        let leg_lengths_sq = [
            fermat_point.norm_sq()?,
            z.sub(&fermat_point)?.norm_sq()?,
            w.sub(&fermat_point)?.norm_sq()?,
        ];
        let leg_lengths = [
            leg_lengths_sq[0].to_f64().sqrt(),
            leg_lengths_sq[1].to_f64().sqrt(),
            leg_lengths_sq[2].to_f64().sqrt(),
        ];
        Ok(Self {
            coords,
            z,
            w,
            u,
            length_sq,
            fermat_point,
            leg_lengths_sq,
            leg_lengths,
            index: det,
        })
    }

    pub fn length(&self) -> f64 {
        self.length_sq.to_f64().sqrt()
    }

    pub fn is_primitive(&self) -> bool {
        self.coords.gcd() == 1
    }

    /// Legs as segments `[0, p]`, `[z, p]`, `[w, p]`, each with its lattice endpoint.
    pub fn legs(&self) -> [(LatticeVector, Point2<S>, Point2<S>); 3] {
        [
            (LatticeVector::ORIGIN, Point2::origin(), self.fermat_point.clone()),
            (self.coords.z(), self.z.clone(), self.fermat_point.clone()),
            (self.coords.w(), self.w.clone(), self.fermat_point.clone()),
        ]
    }
}

/// Primitive and reduced flags of a tripod.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripodFlags {
    pub primitive: bool,
    pub reduced: bool,
    /// Interior lattice points on the legs from `0`, `z`, `w` to `p`.
    pub leg_lattice_points: [u64; 3],
    pub fermat_point_on_lattice: bool,
    /// Set when lattice hits were detected within a tolerance.
    pub heuristic: bool,
}

/// A primitive tripod is reduced when no leg contains a lattice point in its
/// interior and the Fermat point is not a lattice point.
pub fn classify<S: Scalar>(tripod: &Tripod<S>, lattice: &LatticeSpec) -> Result<TripodFlags> {
    let primitive = tripod.is_primitive();
    let mut hits = [0u64; 3];
    for (slot, (from, _, to)) in hits.iter_mut().zip(tripod.legs()) {
        *slot = S::leg_lattice_points(from, &to, lattice)?;
    }
    let on_lattice = crate::lattice::is_lattice_point(&tripod.fermat_point, lattice)?;
    Ok(TripodFlags {
        primitive,
        reduced: primitive && hits.iter().all(|&h| h == 0) && !on_lattice,
        leg_lattice_points: hits,
        fermat_point_on_lattice: on_lattice,
        heuristic: !S::EXACT,
    })
}

/// Tripod volume `(√3/4)(ℓ² − (ℓ1² + ℓ2² + ℓ3²))` and lattice index `ad − bc`.
///
/// Fails with [`TripodError::Invariant`] unless the volume equals
/// `index · covolume` (exactly on exact lattices, to 1e−9 relative otherwise).
pub fn tripod_volume_and_index<S: Scalar>(
    tripod: &Tripod<S>,
    lattice: &LatticeSpec,
) -> Result<(f64, i64)> {
    let l2 = tripod
        .leg_lengths_sq
        .iter()
        .try_fold(S::from_i64(0), |acc, v| acc.add(v))?;
    let quarter = S::half().mul(&S::half())?;
    let volume = S::sqrt3()
        .mul(&quarter)?
        .mul(&tripod.length_sq.sub(&l2)?)?;
    let (_, t) = S::tau(lattice)?;
    let expected = S::from_i64(tripod.index).mul(&t)?;
    let volume_f = volume.to_f64();
    let agrees = if S::EXACT {
        volume == expected
    } else {
        let e = expected.to_f64();
        (volume_f - e).abs() <= 1e-9 * e.abs()
    };
    if !agrees {
        return Err(TripodError::Invariant(format!(
            "tripod volume {volume_f} differs from index·covolume {}",
            expected.to_f64()
        )));
    }
    Ok((volume_f, tripod.index))
}
