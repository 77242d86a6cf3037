//! Enumeration of all tripods of length below `R`.
//!
//! A torus tripod lifts to three pairs `(z, w)` that differ by which triangle
//! vertex sits at the origin. Counting tripods therefore means counting
//! lattice pairs `(z, w)` that are positively oriented, satisfy the angle
//! condition, have length `ℓ < R`, and pass a canonicalisation test that
//! keeps exactly one lift:
//!
//! * [`CensusMode::LemmaCanonical`]: the Toricelli point lies in `[0, 2π/3)`.
//! * [`CensusMode::AppendixCompatible`]: the largest angle is strictly at `0`.
//!
//! On the Gaussian and Eisenstein lattices the whole filter runs on integers:
//! a lattice point is stored as `σ·z = X + i·r·Y` with `(σ, r) = (1, 1)` for
//! `Z[i]` and `(2, √3)` for `Z[ζ]`, so dot products, norms and `σ²ℓ²` all lie
//! in `Z[√3]`.

use std::collections::BTreeMap;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytics;
use crate::error::{OverflowError, Result, TripodError};
use crate::exact::{QuadraticNumber, RootThreeInt};
use crate::geometry::{
    angle_condition, classify, in_canonical_sector, largest_angle_at_origin, toricelli_point,
    Tripod, TripodCoords,
};
use crate::lattice::{LatticeKind, LatticeSpec, LatticeVector};
use crate::par::{chunk_ranges, map_ordered, Execution};
use crate::scalar::{Point2, Scalar};

/// Largest radius accepted by the integer kernel; every intermediate then
/// fits comfortably in `i64`, with squares in `i128`.
pub const MAX_EXACT_RADIUS: u64 = 1 << 20;

/// Outer points per work item. Fixed so results never depend on threads.
const CHUNK: usize = 16;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CensusMode {
    #[default]
    LemmaCanonical,
    AppendixCompatible,
}

impl FromStr for CensusMode {
    type Err = TripodError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lemma" | "lemma_canonical" => Ok(CensusMode::LemmaCanonical),
            "appendix" | "appendix_compatible" => Ok(CensusMode::AppendixCompatible),
            other => Err(TripodError::InvalidConfig(format!(
                "unknown census mode {other:?} (expected lemma or appendix)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusConfig {
    pub lattice: LatticeSpec,
    pub radius: f64,
    pub mode: CensusMode,
    pub classify_reduced: bool,
    pub threads: usize,
    /// Keep at most this many per-tripod records.
    pub emit_samples: Option<usize>,
}

impl CensusConfig {
    pub fn new(lattice: LatticeSpec, radius: f64) -> Self {
        Self {
            lattice,
            radius,
            mode: CensusMode::default(),
            classify_reduced: false,
            threads: 1,
            emit_samples: None,
        }
    }

    pub fn mode(mut self, mode: CensusMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn reduced(mut self, classify_reduced: bool) -> Self {
        self.classify_reduced = classify_reduced;
        self
    }

    pub fn threads(mut self, threads: usize) -> Self {
        self.threads = threads;
        self
    }

    pub fn samples(mut self, cap: usize) -> Self {
        self.emit_samples = Some(cap);
        self
    }

    fn validate(&self) -> Result<()> {
        if !self.radius.is_finite() || self.radius <= 0.0 {
            return Err(TripodError::InvalidConfig(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if self.threads == 0 {
            return Err(TripodError::InvalidConfig("thread count must be positive".into()));
        }
        if self.mode == CensusMode::AppendixCompatible
            && self.lattice.kind() != LatticeKind::Gaussian
        {
            return Err(TripodError::InvalidConfig(
                "appendix mode is defined for the Gaussian lattice only".into(),
            ));
        }
        if self.lattice.is_exact() {
            if self.radius.fract() != 0.0 {
                return Err(TripodError::InvalidConfig(format!(
                    "radius must be an integer on exact lattices, got {}",
                    self.radius
                )));
            }
            if self.radius > MAX_EXACT_RADIUS as f64 {
                return Err(OverflowError::new("census radius").into());
            }
        }
        Ok(())
    }
}

/// The configuration as echoed in a report (execution details excluded).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub lattice: LatticeSpec,
    pub radius: f64,
    pub mode: CensusMode,
    pub classify_reduced: bool,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusCounts {
    pub total_tuples_scanned: u64,
    pub all_tripods: u64,
    pub primitive: u64,
    /// Present when reducedness was classified.
    pub reduced: Option<u64>,
    pub nonreduced_primitive: Option<u64>,
}

/// Primitive counts under both canonicalisations, with the tuples on which
/// they can disagree.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TieDiagnostics {
    pub lemma_primitive: u64,
    pub appendix_primitive: u64,
    /// Primitive tripods whose triangle has two or three equal largest angles.
    /// The appendix test keeps none of their lifts.
    pub largest_angle_ties: u64,
    /// Primitive tripods with a Toricelli point on the ray `arg u = 0`.
    pub sector_boundary_ties: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusSample {
    pub coords: TripodCoords,
    pub index: i64,
    pub length_sq: f64,
    pub primitive: bool,
    pub reduced: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusReport {
    pub config: ConfigEcho,
    pub counts: CensusCounts,
    /// Lattice index `n = ad − bc` of the counted primitive tripods.
    pub index_histogram: BTreeMap<i64, u64>,
    pub primitive_over_r4: f64,
    /// `primitive / (R / √covol)⁴`, comparable with the unit-covolume constant.
    pub normalized_constant: f64,
    pub all_over_r4: f64,
    pub reference_constant: f64,
    /// `|normalized_constant − reference_constant|`.
    pub error: f64,
    pub diagnostics: TieDiagnostics,
    /// Set when predicates were decided within a floating-point tolerance.
    pub heuristic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<CensusSample>>,
}

impl CensusReport {
    /// The report with the wall-clock time removed, for reproducible output.
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }
}

#[derive(Default)]
struct Tally {
    scanned: u64,
    all: u64,
    primitive: u64,
    reduced: u64,
    diagnostics: TieDiagnostics,
    histogram: BTreeMap<i64, u64>,
    samples: Vec<CensusSample>,
}

impl Tally {
    fn merge(&mut self, other: Tally, cap: usize) {
        self.scanned += other.scanned;
        self.all += other.all;
        self.primitive += other.primitive;
        self.reduced += other.reduced;
        self.diagnostics.lemma_primitive += other.diagnostics.lemma_primitive;
        self.diagnostics.appendix_primitive += other.diagnostics.appendix_primitive;
        self.diagnostics.largest_angle_ties += other.diagnostics.largest_angle_ties;
        self.diagnostics.sector_boundary_ties += other.diagnostics.sector_boundary_ties;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        let room = cap.saturating_sub(self.samples.len());
        self.samples.extend(other.samples.into_iter().take(room));
    }
}

/// Outcome of the canonicalisation tests on one admissible tuple.
struct Canonical {
    lemma: bool,
    appendix: bool,
    tie: bool,
    on_sector_ray: bool,
}

pub fn census(config: &CensusConfig) -> Result<CensusReport> {
    config.validate()?;
    let started = Instant::now();
    let execution = Execution::with_threads(config.threads);
    let cap = config.emit_samples.unwrap_or(0);
    let tally = if config.lattice.is_exact() {
        exact_census(config, execution, cap)?
    } else {
        float_census(config, execution, cap)?
    };

    let radius4 = config.radius.powi(4);
    let covol = config.lattice.covolume();
    let normalized = tally.primitive as f64 * covol * covol / radius4;
    let reference = analytics::main_constant();
    let (reduced, nonreduced) = if config.classify_reduced {
        (Some(tally.reduced), Some(tally.primitive - tally.reduced))
    } else {
        (None, None)
    };
    Ok(CensusReport {
        config: ConfigEcho {
            lattice: config.lattice,
            radius: config.radius,
            mode: config.mode,
            classify_reduced: config.classify_reduced,
        },
        counts: CensusCounts {
            total_tuples_scanned: tally.scanned,
            all_tripods: tally.all,
            primitive: tally.primitive,
            reduced,
            nonreduced_primitive: nonreduced,
        },
        index_histogram: tally.histogram,
        primitive_over_r4: tally.primitive as f64 / radius4,
        normalized_constant: normalized,
        all_over_r4: tally.all as f64 / radius4,
        reference_constant: reference,
        error: (normalized - reference).abs(),
        diagnostics: tally.diagnostics,
        heuristic: !config.lattice.is_exact(),
        elapsed_ms: Some(started.elapsed().as_millis() as u64),
        samples: config.emit_samples.map(|_| tally.samples),
    })
}

/// Records one tuple that passed orientation, length and angle tests.
fn record<S: Scalar>(
    tally: &mut Tally,
    config: &CensusConfig,
    coords: TripodCoords,
    canonical: Canonical,
    cap: usize,
) -> Result<()> {
    let primitive = coords.gcd() == 1;
    if primitive {
        let d = &mut tally.diagnostics;
        if canonical.lemma {
            d.lemma_primitive += 1;
            d.largest_angle_ties += canonical.tie as u64;
            d.sector_boundary_ties += canonical.on_sector_ray as u64;
        }
        d.appendix_primitive += canonical.appendix as u64;
    }
    let counted = match config.mode {
        CensusMode::LemmaCanonical => canonical.lemma,
        CensusMode::AppendixCompatible => canonical.appendix,
    };
    if !counted {
        return Ok(());
    }
    tally.all += 1;
    if !primitive {
        if tally.samples.len() < cap {
            tally.samples.push(sample::<S>(config, coords, false, None)?);
        }
        return Ok(());
    }
    tally.primitive += 1;
    *tally.histogram.entry(coords.det()).or_default() += 1;
    let reduced = if config.classify_reduced {
        let reduced = match config.lattice.kind() {
            LatticeKind::GeneralTau => {
                let tripod = Tripod::<S>::new(coords, &config.lattice)?;
                classify(&tripod, &config.lattice)?.reduced
            }
            _ => is_reduced_exact(coords, &config.lattice)?,
        };
        tally.reduced += reduced as u64;
        Some(reduced)
    } else {
        None
    };
    if tally.samples.len() < cap {
        tally.samples.push(sample::<S>(config, coords, true, reduced)?);
    }
    Ok(())
}

fn sample<S: Scalar>(
    config: &CensusConfig,
    coords: TripodCoords,
    primitive: bool,
    reduced: Option<bool>,
) -> Result<CensusSample> {
    let tripod = Tripod::<S>::new(coords, &config.lattice)?;
    Ok(CensusSample {
        coords,
        index: tripod.index,
        length_sq: tripod.length_sq.to_f64(),
        primitive,
        reduced,
    })
}

/// A lattice point in scaled integer coordinates `σ·z = x + i·r·y`.
#[derive(Clone, Copy)]
struct ScaledPoint {
    v: LatticeVector,
    x: i64,
    y: i64,
    /// `σ²|z|²`
    norm: i64,
}

struct IntegerModel {
    /// `r² ∈ {1, 3}`
    r2: i64,
    /// `σ²R²`
    limit: i64,
}

impl IntegerModel {
    fn new(lattice: &LatticeSpec, radius: i64) -> Self {
        let (r2, sigma2) = match lattice.kind() {
            LatticeKind::Gaussian => (1, 1),
            _ => (3, 4),
        };
        Self {
            r2,
            limit: sigma2 * radius * radius,
        }
    }

    fn point(&self, v: LatticeVector) -> ScaledPoint {
        let (x, y) = if self.r2 == 1 { (v.a, v.b) } else { (2 * v.a + v.b, v.b) };
        ScaledPoint {
            v,
            x,
            y,
            norm: x * x + self.r2 * y * y,
        }
    }

    /// Nonzero lattice points with `|z| < R`.
    fn points(&self, lattice: &LatticeSpec, radius: f64) -> Vec<ScaledPoint> {
        let (a_max, b_max) = lattice.coordinate_box(radius);
        let mut out = Vec::new();
        for a in -a_max..=a_max {
            for b in -b_max..=b_max {
                let p = self.point(LatticeVector::new(a, b));
                if p.norm > 0 && p.norm < self.limit {
                    out.push(p);
                }
            }
        }
        out
    }

    /// `ℓ² < R²`, i.e. `σ²ℓ² = p + q√3 < σ²R²` with `q ≥ 0` when `k > 0`.
    #[inline]
    fn length_below(&self, z: &ScaledPoint, w: &ScaledPoint, dot: i64, k: i64) -> bool {
        let (p, q) = if self.r2 == 1 {
            (z.norm + w.norm - dot, k)
        } else {
            (z.norm + w.norm - dot + 3 * k, 0)
        };
        let m = (self.limit - p) as i128;
        let q2 = 3 * (q as i128) * (q as i128);
        if q >= 0 {
            m > 0 && m * m > q2
        } else {
            m > 0 || m * m < q2
        }
    }

    /// `2u` as a pair in `Z[√3]`.
    fn toricelli2(&self, z: &ScaledPoint, w: &ScaledPoint) -> (RootThreeInt, RootThreeInt) {
        if self.r2 == 1 {
            (
                RootThreeInt::new(z.x + w.x, w.y - z.y),
                RootThreeInt::new(z.y + w.y, z.x - w.x),
            )
        } else {
            (
                RootThreeInt::from_int(z.x + w.x + 3 * (w.y - z.y)),
                RootThreeInt::new(0, z.y + w.y + z.x - w.x),
            )
        }
    }
}

/// Angle between edges with dot product `d` and squared lengths `n1`, `n2`
/// is strictly below `2π/3`.
#[inline]
fn angle_below(d: i64, n1: i64, n2: i64) -> bool {
    d >= 0 || 4 * (d as i128) * (d as i128) < n1 as i128 * n2 as i128
}

fn exact_census(config: &CensusConfig, execution: Execution, cap: usize) -> Result<Tally> {
    let model = IntegerModel::new(&config.lattice, config.radius as i64);
    let points = model.points(&config.lattice, config.radius);
    let chunks = chunk_ranges(points.len(), CHUNK);
    let partials = map_ordered(&chunks, execution, |range| {
        let mut tally = Tally::default();
        for z in &points[range.clone()] {
            for w in &points {
                tally.scanned += 1;
                exact_tuple(&model, config, z, w, &mut tally, cap)?;
            }
        }
        Ok::<_, TripodError>(tally)
    });
    let mut total = Tally::default();
    for part in partials {
        total.merge(part?, cap);
    }
    Ok(total)
}

#[inline]
fn exact_tuple(
    model: &IntegerModel,
    config: &CensusConfig,
    z: &ScaledPoint,
    w: &ScaledPoint,
    tally: &mut Tally,
    cap: usize,
) -> Result<()> {
    // Im(conj z · w) = r·k
    let k = z.x * w.y - z.y * w.x;
    if k <= 0 {
        return Ok(());
    }
    let dot = z.x * w.x + model.r2 * z.y * w.y;
    if !model.length_below(z, w, dot, k) {
        return Ok(());
    }
    let side = z.norm + w.norm - 2 * dot;
    if !angle_below(dot, z.norm, w.norm)
        || !angle_below(z.norm - dot, z.norm, side)
        || !angle_below(w.norm - dot, w.norm, side)
    {
        return Ok(());
    }

    let (ux, uy) = model.toricelli2(z, w);
    let sy = uy.sign()?;
    let on_sector_ray = sy == 0 && ux.sign()? > 0;
    let lemma = on_sector_ray || (sy > 0 && uy.checked_add(ux.checked_mul_sqrt3()?)?.sign()? > 0);
    let longest = side.max(z.norm).max(w.norm);
    let canonical = Canonical {
        lemma,
        appendix: side > z.norm && side > w.norm,
        tie: [side, z.norm, w.norm].iter().filter(|&&n| n == longest).count() > 1,
        on_sector_ray,
    };
    let coords = TripodCoords::new(z.v.a, z.v.b, w.v.a, w.v.b);
    record::<QuadraticNumber>(tally, config, coords, canonical, cap)
}

/// The census length test `ℓ(z, w) < R` on an exact lattice, where `ℓ² = |u|²`
/// for the Toricelli point `u`. Orientation and angles are not checked.
pub fn length_below(coords: TripodCoords, lattice: &LatticeSpec, radius: u32) -> Result<bool> {
    if !lattice.is_exact() {
        return Err(TripodError::InexactLattice(lattice.to_string()));
    }
    let model = IntegerModel::new(lattice, radius as i64);
    let (z, w) = (model.point(coords.z()), model.point(coords.w()));
    let k = z.x * w.y - z.y * w.x;
    let dot = z.x * w.x + model.r2 * z.y * w.y;
    Ok(model.length_below(&z, &w, dot, k))
}

/// Reducedness of a primitive tripod on `Z[i]` or `Z[ζ]` in integer arithmetic.
///
/// On `Z[ζ]` rotation by `π/3` preserves the lattice, so the Fermat point
/// `p = t·u` has rational `t` and rational lattice coordinates; each leg from
/// a vertex `V` then has direction `(num·u − den·V)/den` and carries
/// `⌈g/den⌉ − 1` interior lattice points, `g` the gcd of the numerator.
///
/// On `Z[i]` the leg from a vertex has a rational direction only when the two
/// sides at that vertex have equal length, so only isosceles triangles need
/// the general test; the Fermat point is never a lattice point.
pub fn is_reduced_exact(coords: TripodCoords, lattice: &LatticeSpec) -> Result<bool> {
    if coords.gcd() != 1 {
        return Ok(false);
    }
    match lattice.kind() {
        LatticeKind::Gaussian => {
            let norm = |a: i64, b: i64| a * a + b * b;
            let (nz, nw) = (norm(coords.a, coords.b), norm(coords.c, coords.d));
            let side = norm(coords.c - coords.a, coords.d - coords.b);
            if nz != nw && nz != side && nw != side {
                return Ok(true);
            }
            let tripod = Tripod::<QuadraticNumber>::new(coords, lattice)?;
            Ok(classify(&tripod, lattice)?.reduced)
        }
        LatticeKind::Eisenstein => eisenstein_reduced(coords),
        LatticeKind::GeneralTau => Err(TripodError::InexactLattice(lattice.to_string())),
    }
}

fn eisenstein_reduced(coords: TripodCoords) -> Result<bool> {
    let overflow = || TripodError::Overflow(OverflowError::new("reduced test"));
    let TripodCoords { a, b, c, d } = coords;
    let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
    let det = |p: (i128, i128), q: (i128, i128)| p.0 * q.1 - p.1 * q.0;
    // ζ(c + dζ) = −d + (c + d)ζ, and u = ζz + ζ̄w
    let apex = (-d, c + d);
    let u = (-b + c + d, a + b - c);
    let edge = (apex.0 - a, apex.1 - b);
    let (mut num, mut den) = (det((a, b), edge), det(u, edge));
    if den == 0 {
        return Err(TripodError::Invariant("Fermat construction lines are parallel".into()));
    }
    if den < 0 {
        num = -num;
        den = -den;
    }
    let p_num = (
        num.checked_mul(u.0).ok_or_else(overflow)?,
        num.checked_mul(u.1).ok_or_else(overflow)?,
    );
    if p_num.0 % den == 0 && p_num.1 % den == 0 {
        return Ok(false);
    }
    for v in [(0, 0), (a, b), (c, d)] {
        let dir = (p_num.0 - den * v.0, p_num.1 - den * v.1);
        let g = num_integer::Integer::gcd(&dir.0, &dir.1);
        // ⌈g/den⌉ − 1 > 0
        if g > den {
            return Ok(false);
        }
    }
    Ok(true)
}

fn float_census(config: &CensusConfig, execution: Execution, cap: usize) -> Result<Tally> {
    let lattice = &config.lattice;
    let eps = lattice.epsilon();
    let r2 = config.radius * config.radius;
    let (a_max, b_max) = lattice.coordinate_box(config.radius);
    let mut points = Vec::new();
    for a in -a_max..=a_max {
        for b in -b_max..=b_max {
            let v = LatticeVector::new(a, b);
            let p = lattice.embed_in::<f64>(v)?;
            let n = p.norm_sq()?;
            if n > 0.0 && n < r2 {
                points.push((v, p));
            }
        }
    }
    let chunks = chunk_ranges(points.len(), CHUNK);
    let partials = map_ordered(&chunks, execution, |range| {
        let mut tally = Tally::default();
        for (zv, z) in &points[range.clone()] {
            for (wv, w) in &points {
                tally.scanned += 1;
                let coords = TripodCoords::new(zv.a, zv.b, wv.a, wv.b);
                if coords.det() <= 0 {
                    continue;
                }
                if let Some(canonical) = float_tuple(z, w, r2, eps)? {
                    record::<f64>(&mut tally, config, coords, canonical, cap)?;
                }
            }
        }
        Ok::<_, TripodError>(tally)
    });
    let mut total = Tally::default();
    for part in partials {
        total.merge(part?, cap);
    }
    Ok(total)
}

fn float_tuple(z: &Point2<f64>, w: &Point2<f64>, r2: f64, eps: f64) -> Result<Option<Canonical>> {
    let dot = z.dot(w)?;
    let length_sq = z.norm_sq()? + w.norm_sq()? - dot + 3f64.sqrt() * z.cross(w)?;
    if length_sq >= r2 || !angle_condition(z, w, eps)? {
        return Ok(None);
    }
    let u = toricelli_point(z, w)?;
    let scale = 1.0 + length_sq.sqrt();
    let on_sector_ray = u.y.abs() <= eps * scale && u.x > 0.0;
    let side = z.sub(w)?.norm_sq()?;
    let (nz, nw) = (z.norm_sq()?, w.norm_sq()?);
    let longest = side.max(nz).max(nw);
    let tol = eps * longest;
    Ok(Some(Canonical {
        lemma: in_canonical_sector(&u, eps * scale)?,
        appendix: largest_angle_at_origin(z, w, eps)?,
        tie: [side, nz, nw].iter().filter(|&&n| longest - n <= tol).count() > 1,
        on_sector_ray,
    }))
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub radius: f64,
    pub total: u64,
    pub primitive: u64,
    pub reduced: Option<u64>,
    pub nonreduced: Option<u64>,
    pub primitive_over_r4: f64,
    pub normalized_constant: f64,
    pub error: f64,
}

/// Runs one census per radius, in increasing order of radius.
pub fn convergence_scan(
    lattice: LatticeSpec,
    radii: &[f64],
    mode: CensusMode,
    classify_reduced: bool,
    threads: usize,
) -> Result<Vec<ConvergenceRow>> {
    if radii.is_empty() || radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(TripodError::InvalidConfig(
            "radii must be non-empty and strictly increasing".into(),
        ));
    }
    radii
        .iter()
        .map(|&radius| {
            let report = census(
                &CensusConfig::new(lattice, radius)
                    .mode(mode)
                    .reduced(classify_reduced)
                    .threads(threads),
            )?;
            Ok(ConvergenceRow {
                radius,
                total: report.counts.all_tripods,
                primitive: report.counts.primitive,
                reduced: report.counts.reduced,
                nonreduced: report.counts.nonreduced_primitive,
                primitive_over_r4: report.primitive_over_r4,
                normalized_constant: report.normalized_constant,
                error: report.error,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonreducedReport {
    pub lattice: LatticeSpec,
    pub radius: f64,
    pub all_tripods: u64,
    pub primitive: u64,
    pub reduced: u64,
    pub nonreduced: u64,
    pub nonreduced_over_r4: f64,
    pub all_over_r4: f64,
    /// Closed-form constants for the Eisenstein lattice; absent otherwise.
    pub constants: Option<analytics::NonreducedConstants>,
}

/// Counts nonreduced primitive tripods with exact reducedness tests.
pub fn nonreduced_census(lattice: LatticeSpec, radius: f64, threads: usize) -> Result<NonreducedReport> {
    if !lattice.is_exact() {
        return Err(TripodError::InexactLattice(lattice.to_string()));
    }
    let report = census(&CensusConfig::new(lattice, radius).reduced(true).threads(threads))?;
    let reduced = report.counts.reduced.unwrap_or(0);
    let nonreduced = report.counts.nonreduced_primitive.unwrap_or(0);
    Ok(NonreducedReport {
        lattice,
        radius,
        all_tripods: report.counts.all_tripods,
        primitive: report.counts.primitive,
        reduced,
        nonreduced,
        nonreduced_over_r4: nonreduced as f64 / radius.powi(4),
        all_over_r4: report.all_over_r4,
        constants: (lattice.kind() == LatticeKind::Eisenstein)
            .then(analytics::nonreduced_constants),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomLatticeSample {
    pub tau_s: f64,
    pub tau_t: f64,
    pub primitive: u64,
    pub nonreduced: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RandomLatticeReport {
    pub seed: u64,
    pub rng: &'static str,
    pub radius: f64,
    pub samples: Vec<RandomLatticeSample>,
    /// Nonreduced count → number of sampled lattices.
    pub histogram: BTreeMap<u64, u64>,
    pub zero_fraction: f64,
    pub heuristic: bool,
}

/// Censuses random lattices `τ = s + it` with `s ∈ [0, 1)`, `t ∈ [0.5, 1.5]`.
pub fn random_lattice_experiment(
    sample_count: usize,
    radius: f64,
    seed: u64,
    threads: usize,
) -> Result<RandomLatticeReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let taus: Vec<(f64, f64)> = (0..sample_count)
        .map(|_| (rng.random_range(0.0..1.0), rng.random_range(0.5..=1.5)))
        .collect();
    let mut samples = Vec::with_capacity(sample_count);
    let mut histogram = BTreeMap::new();
    for (s, t) in taus {
        let lattice = LatticeSpec::general(s, t)?;
        let report = census(&CensusConfig::new(lattice, radius).reduced(true).threads(threads))?;
        let nonreduced = report.counts.nonreduced_primitive.unwrap_or(0);
        *histogram.entry(nonreduced).or_default() += 1;
        samples.push(RandomLatticeSample {
            tau_s: s,
            tau_t: t,
            primitive: report.counts.primitive,
            nonreduced,
        });
    }
    let zeros = histogram.get(&0).copied().unwrap_or(0);
    Ok(RandomLatticeReport {
        seed,
        rng: analytics::RNG_ALGORITHM,
        radius,
        zero_fraction: if sample_count == 0 { 0.0 } else { zeros as f64 / sample_count as f64 },
        samples,
        histogram,
        heuristic: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(lattice: LatticeSpec, radius: f64, mode: CensusMode) -> CensusReport {
        census(&CensusConfig::new(lattice, radius).mode(mode).reduced(true)).unwrap()
    }

    #[test]
    fn radius_one_is_empty() {
        let r = run(LatticeSpec::gaussian(), 1.0, CensusMode::LemmaCanonical);
        assert_eq!(r.counts.primitive, 0);
        assert_eq!(r.counts.all_tripods, 0);
    }

    #[test]
    fn shortest_gaussian_tripod() {
        // ℓ² = 2 + √3 ≈ 3.73 for (1,0,0,1), so R = 2 admits it.
        let r = census(&CensusConfig::new(LatticeSpec::gaussian(), 2.0).samples(100)).unwrap();
        assert!(r.counts.primitive >= 1);
        let samples = r.samples.unwrap();
        assert!(samples.iter().all(|s| s.length_sq < 4.0));
    }

    #[test]
    fn modes_differ_by_ties() {
        for radius in [5.0, 9.0, 12.0] {
            let r = run(LatticeSpec::gaussian(), radius, CensusMode::LemmaCanonical);
            let d = r.diagnostics;
            assert_eq!(d.lemma_primitive, r.counts.primitive);
            assert_eq!(d.appendix_primitive + d.largest_angle_ties, d.lemma_primitive);
            let a = run(LatticeSpec::gaussian(), radius, CensusMode::AppendixCompatible);
            assert_eq!(a.counts.primitive, d.appendix_primitive);
        }
    }

    #[test]
    fn reduced_partition() {
        for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
            let r = run(lattice, 10.0, CensusMode::LemmaCanonical);
            let c = r.counts;
            assert!(c.primitive <= c.all_tripods);
            assert_eq!(c.reduced.unwrap() + c.nonreduced_primitive.unwrap(), c.primitive);
            assert_eq!(r.index_histogram.values().sum::<u64>(), c.primitive);
        }
    }

    #[test]
    fn thread_count_does_not_change_report() {
        let base = CensusConfig::new(LatticeSpec::eisenstein(), 12.0).reduced(true).samples(50);
        let one = census(&base.clone().threads(1)).unwrap().without_timing();
        for threads in [4, 8] {
            let many = census(&base.clone().threads(threads)).unwrap().without_timing();
            assert_eq!(one, many);
        }
    }

    #[test]
    fn exact_and_float_kernels_agree_away_from_ties() {
        // A general lattice numerically equal to Z[i] must find the same tripods.
        let exact = run(LatticeSpec::gaussian(), 8.0, CensusMode::LemmaCanonical);
        let float = run(LatticeSpec::general(0.0, 1.0).unwrap(), 8.0, CensusMode::LemmaCanonical);
        assert!(float.heuristic);
        assert_eq!(exact.counts.all_tripods, float.counts.all_tripods);
        assert_eq!(exact.counts.primitive, float.counts.primitive);
        assert_eq!(exact.counts.reduced, float.counts.reduced);
    }

    #[test]
    fn fast_reduced_test_matches_leg_queries() {
        for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
            let report = census(&CensusConfig::new(lattice, 15.0).samples(usize::MAX)).unwrap();
            let mut nonreduced = 0;
            for s in report.samples.unwrap().iter().filter(|s| s.primitive) {
                let tripod = Tripod::<QuadraticNumber>::new(s.coords, &lattice).unwrap();
                let slow = classify(&tripod, &lattice).unwrap().reduced;
                assert_eq!(is_reduced_exact(s.coords, &lattice).unwrap(), slow, "{lattice} {}", s.coords);
                nonreduced += !slow as u64;
            }
            if lattice.kind() == LatticeKind::Eisenstein {
                assert!(nonreduced > 0);
            }
        }
    }

    #[test]
    fn config_errors() {
        let e = LatticeSpec::eisenstein();
        let appendix = CensusConfig::new(e, 5.0).mode(CensusMode::AppendixCompatible);
        assert!(matches!(census(&appendix), Err(TripodError::InvalidConfig(_))));
        assert!(census(&CensusConfig::new(e, 2.5)).is_err());
        assert!(census(&CensusConfig::new(e, -1.0)).is_err());
        assert!(matches!(
            census(&CensusConfig::new(e, 1e9)),
            Err(TripodError::Overflow(_))
        ));
        assert!(matches!(
            nonreduced_census(LatticeSpec::general(0.2, 1.1).unwrap(), 5.0, 1),
            Err(TripodError::InexactLattice(_))
        ));
    }

    #[test]
    fn convergence_requires_increasing_radii() {
        let g = LatticeSpec::gaussian();
        assert!(convergence_scan(g, &[10.0, 5.0], CensusMode::LemmaCanonical, false, 1).is_err());
        let rows = convergence_scan(g, &[4.0, 8.0], CensusMode::LemmaCanonical, false, 1).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].primitive < rows[1].primitive);
    }

    #[test]
    fn random_lattices_are_reproducible() {
        let a = random_lattice_experiment(3, 5.0, 11, 1).unwrap();
        let b = random_lattice_experiment(3, 5.0, 11, 2).unwrap();
        assert_eq!(a, b);
        assert!(a.heuristic);
        assert_eq!(a.histogram.values().sum::<u64>(), 3);
    }
}
