//! The immersed tripod on the torus: self-intersections, cell structure and
//! the finite set of tripods spanning a fixed sublattice.
//!
//! Self-intersections are counted directly from the segment arrangement of
//! the three lifted legs and their lattice translates, independently of the
//! lattice index.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::census::CensusMode;
use crate::error::{OverflowError, Result, TripodError};
use crate::geometry::{
    angle_condition, in_canonical_sector, largest_angle_at_origin, toricelli_point, Tripod,
    TripodCoords,
};
use crate::lattice::{LatticeSpec, LatticeVector};
use crate::scalar::{orient, Point2, Scalar};

/// Why an immersion was flagged as non-transverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    /// Two leg translates overlap along a segment.
    CollinearOverlap,
    /// A leg endpoint (image of `0` or `p`) lies in the interior of another leg.
    EndpointOnLeg,
    /// The image of `p` coincides with the image of `0`.
    VertexCollision,
    /// Three or more leg passes through one point.
    MultiplePoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CellCounts {
    pub vertices: u64,
    pub edges: u64,
    pub faces: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImmersionReport {
    /// Transverse self-intersection points on the torus.
    pub intersections: u64,
    pub degenerate: bool,
    pub degeneracies: BTreeSet<Degeneracy>,
    /// Degrees of the two tripod vertices followed by the intersection vertices.
    pub vertex_degrees: Vec<u32>,
    /// Induced cell structure; present when the immersion is transverse.
    pub cell_counts: Option<CellCounts>,
    /// Set when intersections were decided within a tolerance.
    pub heuristic: bool,
}

enum Contact<S> {
    None,
    /// Proper crossing of two segment interiors.
    Crossing(Point2<S>),
    /// Segments share an endpoint that is a graph vertex.
    SharedVertex,
    Degenerate(Degeneracy),
}

/// A lifted leg: `start` is a lattice endpoint, `end` a translate of `p`.
struct Leg<S> {
    start: Point2<S>,
    end: Point2<S>,
    len: f64,
    bbox: [f64; 4],
}

impl<S: Scalar> Leg<S> {
    fn new(start: Point2<S>, end: Point2<S>) -> Result<Self, OverflowError> {
        let (s, e) = (start.to_complex(), end.to_complex());
        Ok(Self {
            len: end.sub(&start)?.norm_sq()?.to_f64().sqrt(),
            bbox: [s.re.min(e.re), s.re.max(e.re), s.im.min(e.im), s.im.max(e.im)],
            start,
            end,
        })
    }

    fn translated(&self, by: &Point2<S>, offset: (f64, f64)) -> Result<Self, OverflowError> {
        Ok(Self {
            start: self.start.add(by)?,
            end: self.end.add(by)?,
            len: self.len,
            bbox: [
                self.bbox[0] + offset.0,
                self.bbox[1] + offset.0,
                self.bbox[2] + offset.1,
                self.bbox[3] + offset.1,
            ],
        })
    }

    fn bbox_disjoint(&self, other: &Self, margin: f64) -> bool {
        self.bbox[1] + margin < other.bbox[0]
            || other.bbox[1] + margin < self.bbox[0]
            || self.bbox[3] + margin < other.bbox[2]
            || other.bbox[3] + margin < self.bbox[2]
    }
}

/// Classifies how leg `p` meets leg `q`. Endpoint kinds are positional:
/// index 0 is a lattice point, index 1 a translate of the Fermat point.
fn contact<S: Scalar>(p: &Leg<S>, q: &Leg<S>, eps: f64) -> Result<Contact<S>> {
    let scale = p.len.max(q.len).max(1.0);
    let tol = eps * scale * scale;
    let o1 = orient(&p.start, &p.end, &q.start)?.sign(tol)?;
    let o2 = orient(&p.start, &p.end, &q.end)?.sign(tol)?;
    let o3 = orient(&q.start, &q.end, &p.start)?.sign(tol)?;
    let o4 = orient(&q.start, &q.end, &p.end)?.sign(tol)?;

    if o1 == 0 && o2 == 0 {
        return collinear_contact(p, q, tol);
    }
    if o1 * o2 > 0 || o3 * o4 > 0 {
        return Ok(Contact::None);
    }
    if o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 {
        let dp = p.end.sub(&p.start)?;
        let dq = q.end.sub(&q.start)?;
        let t = q
            .start
            .sub(&p.start)?
            .cross(&dq)?
            .div(&dp.cross(&dq)?)?
            .ok_or_else(|| TripodError::Invariant("parallel crossing".into()))?;
        return Ok(Contact::Crossing(p.start.add(&dp.scale(&t)?)?));
    }
    // Touching at an endpoint of at least one segment.
    let p_ends = [&p.start, &p.end];
    let q_ends = [&q.start, &q.end];
    for (i, pe) in p_ends.iter().enumerate() {
        for (j, qe) in q_ends.iter().enumerate() {
            if same_point(pe, qe, tol)? {
                return Ok(if i == j {
                    Contact::SharedVertex
                } else {
                    Contact::Degenerate(Degeneracy::VertexCollision)
                });
            }
        }
    }
    Ok(Contact::Degenerate(Degeneracy::EndpointOnLeg))
}

fn same_point<S: Scalar>(a: &Point2<S>, b: &Point2<S>, tol: f64) -> Result<bool, OverflowError> {
    let d = a.sub(b)?;
    Ok(d.x.sign(tol)? == 0 && d.y.sign(tol)? == 0)
}

fn collinear_contact<S: Scalar>(p: &Leg<S>, q: &Leg<S>, tol: f64) -> Result<Contact<S>> {
    // Project q's endpoints on p's direction; p spans [0, |dp|²].
    let dp = p.end.sub(&p.start)?;
    let len_sq = dp.norm_sq()?;
    let t0 = q.start.sub(&p.start)?.dot(&dp)?;
    let t1 = q.end.sub(&p.start)?.dot(&dp)?;
    let (lo, hi) = if t0.sub(&t1)?.sign(tol)? <= 0 { (t0, t1) } else { (t1, t0) };
    let zero = S::from_i64(0);
    // overlap = [max(0, lo), min(len_sq, hi)]
    let start = if lo.sign(tol)? > 0 { lo } else { zero };
    let end = if hi.sub(&len_sq)?.sign(tol)? < 0 { hi } else { len_sq };
    match end.sub(&start)?.sign(tol)? {
        -1 => Ok(Contact::None),
        1 => Ok(Contact::Degenerate(Degeneracy::CollinearOverlap)),
        _ => {
            // Single touching point: classify as an endpoint contact.
            for (i, pe) in [&p.start, &p.end].into_iter().enumerate() {
                for (j, qe) in [&q.start, &q.end].into_iter().enumerate() {
                    if same_point(pe, qe, tol)? {
                        return Ok(if i == j {
                            Contact::SharedVertex
                        } else {
                            Contact::Degenerate(Degeneracy::VertexCollision)
                        });
                    }
                }
            }
            Ok(Contact::Degenerate(Degeneracy::EndpointOnLeg))
        }
    }
}

/// Lattice vectors with `|λ| ≤ radius`.
fn translates_within(lattice: &LatticeSpec, radius: f64) -> Vec<LatticeVector> {
    let (a_max, b_max) = lattice.coordinate_box(radius);
    let mut out = Vec::new();
    for b in -b_max..=b_max {
        for a in -a_max..=a_max {
            let v = LatticeVector::new(a, b);
            if lattice.embed(v).norm() <= radius + 1e-9 {
                out.push(v);
            }
        }
    }
    out
}

/// Counts transverse self-intersections of the tripod on `C/Λ` from the
/// arrangement of its lifted legs `[0,p]`, `[z,p]`, `[w,p]` and their
/// translates.
pub fn self_intersections<S: Scalar>(
    tripod: &Tripod<S>,
    lattice: &LatticeSpec,
) -> Result<ImmersionReport> {
    self_intersections_offset(tripod, lattice, LatticeVector::ORIGIN)
}

/// As [`self_intersections`], with every lifted leg first translated by `offset`.
pub fn self_intersections_offset<S: Scalar>(
    tripod: &Tripod<S>,
    lattice: &LatticeSpec,
    offset: LatticeVector,
) -> Result<ImmersionReport> {
    let eps = lattice.epsilon();
    let shift = lattice.embed_in::<S>(offset)?;
    let shift_f = lattice.embed(offset);
    let legs = tripod
        .legs()
        .into_iter()
        .map(|(_, start, end)| {
            Leg::new(start, end)?.translated(&shift, (shift_f.re, shift_f.im))
        })
        .collect::<Result<Vec<_>, OverflowError>>()?;

    let mut degeneracies = BTreeSet::new();
    let mut crossings: [Vec<Point2<S>>; 3] = Default::default();
    let margin = 1e-7 * (1.0 + tripod.length());

    for (i, leg_i) in legs.iter().enumerate() {
        for (j, leg_j) in legs.iter().enumerate() {
            for lambda in translates_within(lattice, leg_i.len + leg_j.len) {
                if i == j && lambda == LatticeVector::ORIGIN {
                    continue;
                }
                let lf = lattice.embed(lambda);
                let shifted_bbox = [
                    leg_j.bbox[0] + lf.re,
                    leg_j.bbox[1] + lf.re,
                    leg_j.bbox[2] + lf.im,
                    leg_j.bbox[3] + lf.im,
                ];
                let probe = Leg {
                    start: Point2::origin(),
                    end: Point2::origin(),
                    len: 0.0,
                    bbox: shifted_bbox,
                };
                if leg_i.bbox_disjoint(&probe, margin) {
                    continue;
                }
                let other = leg_j.translated(&lattice.embed_in::<S>(lambda)?, (lf.re, lf.im))?;
                match contact(leg_i, &other, eps)? {
                    Contact::None | Contact::SharedVertex => {}
                    Contact::Crossing(x) => crossings[i].push(x),
                    Contact::Degenerate(kind) => {
                        degeneracies.insert(kind);
                    }
                }
            }
        }
    }

    // A point hit twice on the same leg is crossed by at least two other passes.
    let tol = eps * (1.0 + tripod.length()).powi(2);
    for hits in &crossings {
        for (k, x) in hits.iter().enumerate() {
            for y in &hits[k + 1..] {
                if same_point(x, y, tol)? {
                    degeneracies.insert(Degeneracy::MultiplePoint);
                }
            }
        }
    }

    let passes: u64 = crossings.iter().map(|h| h.len() as u64).sum();
    if passes % 2 == 1 {
        return Err(TripodError::Invariant(
            "unpaired self-intersection in the leg arrangement".into(),
        ));
    }
    let intersections = passes / 2;
    let degenerate = !degeneracies.is_empty();
    let mut vertex_degrees = vec![3, 3];
    let cell_counts = if degenerate {
        None
    } else {
        vertex_degrees.extend(std::iter::repeat_n(4, intersections as usize));
        let vertices = vertex_degrees.len() as u64;
        let edges = vertex_degrees.iter().map(|&d| d as u64).sum::<u64>() / 2;
        Some(CellCounts {
            vertices,
            edges,
            // Euler characteristic of the torus is zero.
            faces: edges - vertices,
        })
    };
    Ok(ImmersionReport {
        intersections,
        degenerate,
        degeneracies,
        vertex_degrees,
        cell_counts,
        heuristic: !S::EXACT,
    })
}

/// Number of complementary regions of a transverse immersion.
pub fn region_count(report: &ImmersionReport) -> Result<u64> {
    match (report.degenerate, report.cell_counts) {
        (false, Some(cells)) => Ok(cells.faces),
        _ => Err(TripodError::InvalidConfig(
            "region count is undefined for a non-transverse immersion".into(),
        )),
    }
}

/// Shortest nonzero vector length of the sublattice spanned by `v1`, `v2`,
/// found by bounded search.
fn shortest_vector(v1: LatticeVector, v2: LatticeVector, lattice: &LatticeSpec) -> f64 {
    let e1 = lattice.embed(v1);
    let e2 = lattice.embed(v2);
    let area = (e1.re * e2.im - e1.im * e2.re).abs();
    let cap = e1.norm().min(e2.norm());
    // |m v1 + n v2| ≥ |n|·area/|v1| and ≥ |m|·area/|v2|
    let n_max = (cap * e1.norm() / area).ceil() as i64;
    let m_max = (cap * e2.norm() / area).ceil() as i64;
    let mut best = cap;
    for m in -m_max..=m_max {
        for n in -n_max..=n_max {
            if (m, n) != (0, 0) {
                best = best.min((e1 * m as f64 + e2 * n as f64).norm());
            }
        }
    }
    best
}

/// All tripods whose spanning lattice is exactly the sublattice with basis
/// `(v1, v2)`, canonicalised per `mode`, sorted by coordinates.
///
/// Every torus tripod has a lift whose largest angle sits at the origin; for
/// that lift `|z||w| = 2·area/sin θ ≤ 2·covol/√3`, so `|z|, |w| ≤ 2·covol/(√3·L)`
/// with `L` the shortest sublattice vector.
pub fn fiber_tripods(
    basis: (LatticeVector, LatticeVector),
    lattice: &LatticeSpec,
    mode: CensusMode,
) -> Result<Vec<TripodCoords>> {
    type Q = crate::exact::QuadraticNumber;
    let (v1, v2) = basis;
    let basis_det = v1.a * v2.b - v1.b * v2.a;
    if basis_det == 0 {
        return Err(TripodError::DependentBasis);
    }
    if !lattice.is_exact() {
        return Err(TripodError::InexactLattice(lattice.to_string()));
    }
    let covol = basis_det.unsigned_abs() as f64 * lattice.covolume();
    let shortest = shortest_vector(v1, v2, lattice);
    let radius = 2.0 * covol / (3f64.sqrt() * shortest) * (1.0 + 1e-9);

    // Points of the sublattice within the radius, in Λ coordinates.
    let e1 = lattice.embed(v1);
    let e2 = lattice.embed(v2);
    let m_max = (radius * e2.norm() / covol * lattice.covolume()).ceil() as i64 + 1;
    let n_max = (radius * e1.norm() / covol * lattice.covolume()).ceil() as i64 + 1;
    let mut points = Vec::new();
    for m in -m_max..=m_max {
        for n in -n_max..=n_max {
            let v = LatticeVector::new(m * v1.a + n * v2.a, m * v1.b + n * v2.b);
            if v != LatticeVector::ORIGIN && lattice.embed(v).norm() <= radius {
                points.push(v);
            }
        }
    }

    let mut out = BTreeSet::new();
    for z in &points {
        for w in &points {
            let coords = TripodCoords::new(z.a, z.b, w.a, w.b);
            // Positively oriented and spanning the whole sublattice.
            if coords.det() != basis_det.abs() {
                continue;
            }
            let zp = lattice.embed_in::<Q>(*z)?;
            let wp = lattice.embed_in::<Q>(*w)?;
            if !angle_condition(&zp, &wp, 0.0)? {
                continue;
            }
            match mode {
                CensusMode::AppendixCompatible => {
                    if largest_angle_at_origin(&zp, &wp, 0.0)? {
                        out.insert(coords);
                    }
                }
                CensusMode::LemmaCanonical => {
                    out.insert(lemma_lift(coords, lattice)?);
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// The lift of a tripod whose Toricelli point lies in the sector `[0, 2π/3)`.
pub fn lemma_lift(coords: TripodCoords, lattice: &LatticeSpec) -> Result<TripodCoords> {
    type Q = crate::exact::QuadraticNumber;
    for lift in coords.lifts() {
        let z = lattice.embed_in::<Q>(lift.z())?;
        let w = lattice.embed_in::<Q>(lift.w())?;
        if in_canonical_sector(&toricelli_point(&z, &w)?, 0.0)? {
            return Ok(lift);
        }
    }
    Err(TripodError::Invariant(format!(
        "no lift of {coords} has its Toricelli point in the canonical sector"
    )))
}
