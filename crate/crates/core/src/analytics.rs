//! Closed-form constants and stochastic checks of the volume of `Ω`, the
//! set of endpoint pairs `(z, w)` of canonical tripods of length at most 1.

use std::f64::consts::PI;

use nalgebra::Matrix4;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Result, TripodError};
use crate::geometry::{angle_condition, in_canonical_sector, toricelli_point};
use crate::par::{map_ordered, Execution};
use crate::scalar::Point2;

/// Name of the generator used for every seeded computation.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha), one stream per work item";

/// Work items for sampling; fixed so results never depend on threads.
const STREAMS: usize = 64;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn zeta4() -> f64 {
    PI.powi(4) / 90.0
}

/// `15√3/(4π³)`, the limit of `N(R, Λ)/R⁴` for unit-covolume lattices.
pub fn main_constant() -> f64 {
    15.0 * SQRT3 / (4.0 * PI.powi(3))
}

/// `√3π/24`
pub fn omega_volume() -> f64 {
    SQRT3 * PI / 24.0
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonreducedConstants {
    /// `(1 − 6/π²)π/16`
    pub nonreduced_bound: f64,
    /// `1 − 6/π²`
    pub one_minus_six_over_pi2: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
}

pub fn nonreduced_constants() -> NonreducedConstants {
    let q = 1.0 - 6.0 / (PI * PI);
    NonreducedConstants {
        nonreduced_bound: q * PI / 16.0,
        one_minus_six_over_pi2: q,
        c1: q * 0.75,
        c2: 1.0 / zeta4(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceConstants {
    pub main_constant: f64,
    pub omega_volume: f64,
    pub zeta4_inv: f64,
    pub eisenstein_total: f64,
    pub nonreduced_bound: f64,
    #[serde(rename = "C1")]
    pub c1: f64,
    #[serde(rename = "C2")]
    pub c2: f64,
}

pub fn reference_constants() -> ReferenceConstants {
    let nr = nonreduced_constants();
    ReferenceConstants {
        main_constant: main_constant(),
        omega_volume: omega_volume(),
        zeta4_inv: 90.0 / PI.powi(4),
        eisenstein_total: PI / 12.0,
        nonreduced_bound: nr.nonreduced_bound,
        c1: nr.c1,
        c2: nr.c2,
    }
}

fn point(c: Complex64) -> Point2<f64> {
    Point2::new(c.re, c.im)
}

/// Slack on the closed conditions `|u| ≤ 1` and `arg u ≥ 0`, so that pairs
/// rebuilt from a fixed `u` on those boundaries are not lost to rounding.
const U_TOLERANCE: f64 = 1e-12;

/// Whether `(z, w)` lies in `Ω`: positively oriented, all angles of
/// `Δ(0, z, w)` strictly below `2π/3`, `|u| ≤ 1` and `arg u ∈ [0, 2π/3)`.
pub fn omega_membership(z: Complex64, w: Complex64) -> bool {
    let (zp, wp) = (point(z), point(w));
    if (z.conj() * w).im <= 0.0 {
        return false;
    }
    if !matches!(angle_condition(&zp, &wp, 0.0), Ok(true)) {
        return false;
    }
    let Ok(u) = toricelli_point(&zp, &wp) else {
        return false;
    };
    u.x * u.x + u.y * u.y <= 1.0 + U_TOLERANCE
        && matches!(in_canonical_sector(&u, U_TOLERANCE), Ok(true))
}

fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    loop {
        let x: f64 = rng.random_range(-1.0..1.0);
        let y: f64 = rng.random_range(-1.0..1.0);
        if x * x + y * y < 1.0 {
            return Complex64::new(x, y);
        }
    }
}

fn stream(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub hits: u64,
    pub seed: u64,
    pub rng: &'static str,
    pub reference: f64,
    /// `|estimate − reference| / standard_error`
    pub z_score: f64,
}

/// Estimates `vol(Ω)` by sampling `z`, `w` uniformly from the unit disk.
pub fn mc_omega_volume(samples: u64, seed: u64, threads: usize) -> Result<VolumeEstimate> {
    if samples < 10_000 {
        return Err(TripodError::InvalidConfig(format!(
            "at least 10^4 samples are required, got {samples}"
        )));
    }
    let per = samples.div_ceil(STREAMS as u64);
    let items: Vec<(usize, u64)> = (0..STREAMS)
        .map(|i| (i, per.min(samples.saturating_sub(per * i as u64))))
        .collect();
    let hits: u64 = map_ordered(&items, Execution::with_threads(threads), |&(i, n)| {
        let mut rng = stream(seed, i);
        (0..n)
            .filter(|_| {
                let z = unit_disk(&mut rng);
                let w = unit_disk(&mut rng);
                omega_membership(z, w)
            })
            .count() as u64
    })
    .into_iter()
    .sum();
    let bounding = PI * PI;
    let p = hits as f64 / samples as f64;
    let standard_error = (p * (1.0 - p) / samples as f64).sqrt() * bounding;
    let estimate = bounding * p;
    let reference = omega_volume();
    Ok(VolumeEstimate {
        estimate,
        standard_error,
        samples,
        hits,
        seed,
        rng: RNG_ALGORITHM,
        reference,
        z_score: (estimate - reference).abs() / standard_error,
    })
}

/// `e^{iθ}`
fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

/// The inverse of `(z, w) ↦ (z, u)` at fixed `u`.
fn slice_pair(z: Complex64, u: Complex64) -> (Complex64, Complex64) {
    (z, cis(-PI / 3.0) * z + cis(PI / 3.0) * u)
}

fn is_admissible(u: Complex64) -> bool {
    u.norm() <= 1.0 && matches!(in_canonical_sector(&point(u), 0.0), Ok(true))
}

/// Membership of `z` in the closed triangle `u·Δ(0, 1, e^{−iπ/3})` and its
/// distance to the triangle boundary.
fn triangle_position(z: Complex64, u: Complex64) -> (bool, f64) {
    let vertices = [Complex64::new(0.0, 0.0), u, u * cis(-PI / 3.0)];
    let mut inside = true;
    let mut distance = f64::INFINITY;
    for k in 0..3 {
        let (a, b) = (vertices[k], vertices[(k + 1) % 3]);
        let edge = b - a;
        let rel = z - a;
        // Vertices run clockwise, so the interior is to the right of each edge.
        let side = edge.re * rel.im - edge.im * rel.re;
        inside &= side <= 0.0;
        let t = ((rel.re * edge.re + rel.im * edge.im) / edge.norm_sqr()).clamp(0.0, 1.0);
        distance = distance.min((rel - edge * t).norm());
    }
    (inside, distance)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SliceCheck {
    pub u: [f64; 2],
    pub trials: u64,
    pub seed: u64,
    /// Samples within the boundary margin, excluded from the comparison.
    pub skipped: u64,
    pub counterexamples: u64,
    /// Up to ten counterexample points `z`.
    pub examples: Vec<[f64; 2]>,
    pub area_estimate: f64,
    pub area_standard_error: f64,
    /// `(√3/4)|u|²`
    pub area_reference: f64,
    pub passed: bool,
}

/// Compares `z ∈ u·Δ(0, 1, e^{−iπ/3})` with membership of the preimage pair
/// in `Ω`, for `z` uniform in the disk of radius `|u|`.
pub fn slice_property_check(u: Complex64, trials: u64, seed: u64) -> Result<SliceCheck> {
    const MARGIN: f64 = 1e-9;
    if !is_admissible(u) && u != Complex64::new(0.0, 0.0) {
        return Err(TripodError::InvalidConfig(format!(
            "slice point {u} must satisfy |u| <= 1 and arg u in [0, 2pi/3)"
        )));
    }
    let radius = u.norm();
    let area_reference = SQRT3 / 4.0 * radius * radius;
    let mut rng = stream(seed, 0);
    let (mut skipped, mut counterexamples, mut hits) = (0, 0, 0u64);
    let mut examples = Vec::new();
    for _ in 0..trials {
        if radius == 0.0 {
            break;
        }
        let z = unit_disk(&mut rng) * radius;
        let (w_z, w) = slice_pair(z, u);
        let member = omega_membership(w_z, w);
        hits += member as u64;
        let (inside, distance) = triangle_position(z, u);
        if distance <= MARGIN {
            skipped += 1;
            continue;
        }
        if inside != member {
            counterexamples += 1;
            if examples.len() < 10 {
                examples.push([z.re, z.im]);
            }
        }
    }
    let disk = PI * radius * radius;
    let (area_estimate, area_standard_error) = if trials == 0 || radius == 0.0 {
        (0.0, 0.0)
    } else {
        let p = hits as f64 / trials as f64;
        (disk * p, disk * (p * (1.0 - p) / trials as f64).sqrt())
    };
    Ok(SliceCheck {
        u: [u.re, u.im],
        trials,
        seed,
        skipped,
        counterexamples,
        examples,
        area_estimate,
        area_standard_error,
        area_reference,
        passed: counterexamples == 0,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceCheck {
    pub trials: u64,
    pub compared: u64,
    pub mismatches: u64,
}

/// Checks `z ∈ slice(u) ⇔ cz ∈ slice(cu)` for random `u`, `c` with `|c| ≤ 1`
/// and both `u`, `cu` admissible.
pub fn equivariance_check(trials: u64, seed: u64) -> EquivarianceCheck {
    const MARGIN: f64 = 1e-9;
    let mut rng = stream(seed, 1);
    let mut compared = 0;
    let mut mismatches = 0;
    for _ in 0..trials {
        let u = unit_disk(&mut rng);
        let c = unit_disk(&mut rng);
        let cu = c * u;
        if !is_admissible(u) || !is_admissible(cu) {
            continue;
        }
        let z = unit_disk(&mut rng) * u.norm();
        let cz = c * z;
        if triangle_position(z, u).1 <= MARGIN || triangle_position(cz, cu).1 <= MARGIN * c.norm() {
            continue;
        }
        compared += 1;
        let (a1, b1) = slice_pair(z, u);
        let (a2, b2) = slice_pair(cz, cu);
        if omega_membership(a1, b1) != omega_membership(a2, b2) {
            mismatches += 1;
        }
    }
    EquivarianceCheck {
        trials,
        compared,
        mismatches,
    }
}

/// `φ(z, w) = (z, e^{iπ/3}z + e^{−iπ/3}w)` on `R⁴`.
fn phi(x: [f64; 4]) -> [f64; 4] {
    let z = Complex64::new(x[0], x[1]);
    let w = Complex64::new(x[2], x[3]);
    let u = cis(PI / 3.0) * z + cis(-PI / 3.0) * w;
    [z.re, z.im, u.re, u.im]
}

/// Determinant of the real 4×4 Jacobian of `φ` at `(z, w)`, by central
/// differences.
pub fn jacobian_determinant(z: Complex64, w: Complex64) -> f64 {
    const H: f64 = 1e-3;
    let x = [z.re, z.im, w.re, w.im];
    let mut jac = Matrix4::<f64>::zeros();
    for col in 0..4 {
        let (mut plus, mut minus) = (x, x);
        plus[col] += H;
        minus[col] -= H;
        let (fp, fm) = (phi(plus), phi(minus));
        for row in 0..4 {
            jac[(row, col)] = (fp[row] - fm[row]) / (2.0 * H);
        }
    }
    jac.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants() {
        let c = reference_constants();
        assert!((c.main_constant - 0.20947986097).abs() < 1e-11);
        assert!((c.omega_volume - 0.226724920529).abs() < 1e-11);
        assert!((c.nonreduced_bound - 0.0770).abs() < 5e-5);
        assert!((c.c1 - 0.294).abs() < 5e-4);
        assert!((c.c2 - 0.924).abs() < 5e-4);
        assert_eq!(c.c2, c.zeta4_inv);
        assert!((nonreduced_constants().one_minus_six_over_pi2 - 0.392).abs() < 5e-4);
        assert!((c.eisenstein_total - 0.2617994).abs() < 1e-7);
    }

    #[test]
    fn membership_examples() {
        let c = Complex64::new;
        assert!(omega_membership(c(0.5, 0.0), c(0.0, 0.5)));
        assert!(!omega_membership(c(1.0, 0.0), c(0.0, 1.0)));
        assert!(!omega_membership(c(0.0, 0.5), c(0.5, 0.0)));
        assert!(!omega_membership(c(0.0, 0.0), c(0.0, 0.5)));
    }

    #[test]
    fn volume_is_reproducible() {
        let a = mc_omega_volume(20_000, 3, 1).unwrap();
        let b = mc_omega_volume(20_000, 3, 4).unwrap();
        assert_eq!(a, b);
        assert!(mc_omega_volume(10, 3, 1).is_err());
        // expected hit fraction √3/(24π) ≈ 0.02297
        let p = a.hits as f64 / a.samples as f64;
        assert!((p - 0.02297).abs() < 0.004);
    }

    #[test]
    fn slices() {
        let one = slice_property_check(Complex64::new(1.0, 0.0), 10_000, 5).unwrap();
        assert!(one.passed, "{one:?}");
        assert!((one.area_estimate - 0.4330127).abs() < 4.0 * one.area_standard_error);
        let zero = slice_property_check(Complex64::new(0.0, 0.0), 100, 5).unwrap();
        assert_eq!(zero.area_estimate, 0.0);
        assert!(slice_property_check(Complex64::new(-1.0, -0.1), 10, 5).is_err());
    }

    #[test]
    fn equivariance() {
        let r = equivariance_check(20_000, 9);
        assert!(r.compared > 100);
        assert_eq!(r.mismatches, 0);
    }

    #[test]
    fn unit_jacobian() {
        let mut rng = stream(2, 0);
        for _ in 0..100 {
            let det = jacobian_determinant(unit_disk(&mut rng), unit_disk(&mut rng));
            assert!((det.abs() - 1.0).abs() < 1e-12, "{det}");
        }
    }
}
