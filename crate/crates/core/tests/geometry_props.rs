use std::f64::consts::PI;

use proptest::prelude::*;
use tripods::geometry::{angle_condition, triangle_angles, tripod_volume_and_index, AngleClass};
use tripods::{LatticeSpec, LatticeVector, QuadraticNumber, Tripod, TripodCoords};

type Q = QuadraticNumber;

fn presets() -> [LatticeSpec; 2] {
    [LatticeSpec::gaussian(), LatticeSpec::eisenstein()]
}

fn float_angle(e1: (f64, f64), e2: (f64, f64)) -> f64 {
    let dot = e1.0 * e2.0 + e1.1 * e2.1;
    let cross = e1.0 * e2.1 - e1.1 * e2.0;
    cross.abs().atan2(dot)
}

#[test]
fn angle_predicate_matches_float_angles() {
    let r = 8i64;
    for lattice in presets() {
        let mut compared = 0;
        for a in -r..=r {
            for b in -r..=r {
                for c in -r..=r {
                    for d in -r..=r {
                        if a * d - b * c == 0 {
                            continue;
                        }
                        let z = lattice.embed(LatticeVector::new(a, b));
                        let w = lattice.embed(LatticeVector::new(c, d));
                        let angles = [
                            float_angle((z.re, z.im), (w.re, w.im)),
                            float_angle((-z.re, -z.im), ((w - z).re, (w - z).im)),
                            float_angle((-w.re, -w.im), ((z - w).re, (z - w).im)),
                        ];
                        let zp = lattice.embed_in::<Q>(LatticeVector::new(a, b)).unwrap();
                        let wp = lattice.embed_in::<Q>(LatticeVector::new(c, d)).unwrap();
                        let exact = triangle_angles(&zp, &wp, 0.0).unwrap();
                        for (theta, class) in angles.iter().zip(exact) {
                            let gap = theta - 2.0 * PI / 3.0;
                            if gap.abs() > 1e-9 {
                                let expected = if gap < 0.0 { AngleClass::Below } else { AngleClass::Above };
                                assert_eq!(class, expected, "{lattice} ({a},{b},{c},{d})");
                                compared += 1;
                            } else {
                                assert_eq!(class, AngleClass::Boundary, "{lattice} ({a},{b},{c},{d})");
                            }
                        }
                    }
                }
            }
        }
        assert!(compared > 100_000);
    }
}

fn tripod_strategy() -> impl Strategy<Value = TripodCoords> {
    (-15i64..=15, -15i64..=15, -15i64..=15, -15i64..=15)
        .prop_map(|(a, b, c, d)| TripodCoords::new(a, b, c, d))
}

fn admissible(coords: TripodCoords, lattice: &LatticeSpec) -> Option<Tripod<Q>> {
    Tripod::<Q>::new(coords, lattice).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn legs_sum_to_length(coords in tripod_strategy()) {
        for lattice in presets() {
            if let Some(t) = admissible(coords, &lattice) {
                let sum: f64 = t.leg_lengths.iter().sum();
                prop_assert!((sum * sum / t.length_sq.to_f64() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn fermat_point_lies_on_toricelli_ray(coords in tripod_strategy()) {
        for lattice in presets() {
            if let Some(t) = admissible(coords, &lattice) {
                prop_assert!(t.fermat_point.cross(&t.u).unwrap().is_zero());
                prop_assert!(t.fermat_point.dot(&t.u).unwrap().sign().unwrap() > 0);
            }
        }
    }

    #[test]
    fn area_identity(coords in tripod_strategy()) {
        for lattice in presets() {
            if let Some(t) = admissible(coords, &lattice) {
                let [l1, l2, l3] = t.leg_lengths;
                let area = 3f64.sqrt() / 4.0 * (l1 * l2 + l1 * l3 + l2 * l3);
                let expected = coords.det() as f64 * lattice.covolume() / 2.0;
                prop_assert!((area / expected - 1.0).abs() < 1e-9);
                let (volume, index) = tripod_volume_and_index(&t, &lattice).unwrap();
                prop_assert_eq!(index, coords.det());
                prop_assert!((volume / (index as f64 * lattice.covolume()) - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn scaling_is_homogeneous(coords in tripod_strategy(), k in 2i64..6) {
        for lattice in presets() {
            let Some(t) = admissible(coords, &lattice) else { continue };
            let scaled = Tripod::<Q>::new(coords.scaled(k), &lattice).unwrap();
            let kq = Q::from_integer(k);
            prop_assert_eq!(scaled.length_sq.clone(), t.length_sq.checked_mul(&kq.checked_mul(&kq).unwrap()).unwrap());
            prop_assert_eq!(scaled.fermat_point.clone(), t.fermat_point.scale(&kq).unwrap());
            let z = lattice.embed_in::<Q>(coords.z()).unwrap();
            let w = lattice.embed_in::<Q>(coords.w()).unwrap();
            prop_assert!(angle_condition(&z.scale(&kq).unwrap(), &w.scale(&kq).unwrap(), 0.0).unwrap());
        }
    }
}
