use proptest::prelude::*;
use tripods::topology::{region_count, self_intersections, self_intersections_offset};
use tripods::{census, CensusConfig, LatticeSpec, LatticeVector, QuadraticNumber, Tripod, TripodCoords};

type Q = QuadraticNumber;

#[test]
fn intersections_match_index_for_short_tripods() {
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        let report = census(&CensusConfig::new(lattice, 7.0).samples(usize::MAX)).unwrap();
        let (mut transverse, mut degenerate) = (0, 0);
        for s in report.samples.unwrap() {
            let t = Tripod::<Q>::new(s.coords, &lattice).unwrap();
            let r = self_intersections(&t, &lattice).unwrap();
            if r.degenerate {
                assert!(region_count(&r).is_err());
                degenerate += 1;
                continue;
            }
            transverse += 1;
            assert_eq!(r.intersections as i64, t.index - 1, "{lattice} {}", s.coords);
            assert_eq!(region_count(&r).unwrap() as i64, t.index);
            assert_eq!(&r.vertex_degrees[..2], &[3, 3]);
            assert!(r.vertex_degrees[2..].iter().all(|&d| d == 4));
        }
        assert!(transverse > 100 && degenerate > 0, "{transverse} {degenerate}");
    }
}

#[test]
fn nonprimitive_tripods_are_never_transverse() {
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        for coords in [TripodCoords::new(1, 0, 0, 1), TripodCoords::new(3, 0, 1, 1), TripodCoords::new(1, -1, 1, 2)] {
            let Ok(t) = Tripod::<Q>::new(coords.scaled(2), &lattice) else { continue };
            assert!(self_intersections(&t, &lattice).unwrap().degenerate);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn translation_invariance(a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, d in -5i64..=5,
                              la in -7i64..=7, lb in -7i64..=7) {
        for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
            let Ok(t) = Tripod::<Q>::new(TripodCoords::new(a, b, c, d), &lattice) else { continue };
            let base = self_intersections(&t, &lattice).unwrap();
            let moved = self_intersections_offset(&t, &lattice, LatticeVector::new(la, lb)).unwrap();
            prop_assert_eq!(base, moved);
        }
    }
}
