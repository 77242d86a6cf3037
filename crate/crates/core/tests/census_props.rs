use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tripods::census::{is_reduced_exact, length_below, CensusSample};
use tripods::{census, CensusConfig, CensusMode, LatticeSpec, TripodCoords};

#[test]
fn reports_do_not_depend_on_threads() {
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        for mode in [CensusMode::LemmaCanonical, CensusMode::AppendixCompatible] {
            if mode == CensusMode::AppendixCompatible && lattice != LatticeSpec::gaussian() {
                continue;
            }
            let config = CensusConfig::new(lattice, 20.0).mode(mode).reduced(true).samples(500);
            let one = census(&config.clone().threads(1)).unwrap().without_timing();
            for threads in [4, 8] {
                assert_eq!(census(&config.clone().threads(threads)).unwrap().without_timing(), one);
            }
        }
    }
}

#[test]
fn doubled_primitive_tripods_count_only_in_totals() {
    for lattice in [LatticeSpec::gaussian(), LatticeSpec::eisenstein()] {
        let small = census(&CensusConfig::new(lattice, 9.0).samples(usize::MAX)).unwrap();
        let large = census(&CensusConfig::new(lattice, 18.0).samples(usize::MAX)).unwrap();
        let large: std::collections::HashMap<TripodCoords, CensusSample> =
            large.samples.unwrap().into_iter().map(|s| (s.coords, s)).collect();
        for s in small.samples.unwrap().iter().filter(|s| s.primitive) {
            let doubled = large.get(&s.coords.scaled(2)).expect("doubled tripod is counted");
            assert!(!doubled.primitive);
        }
    }
}

#[test]
fn modes_agree_up_to_ties() {
    for radius in [10.0, 20.0, 30.0] {
        let lemma = census(&CensusConfig::new(LatticeSpec::gaussian(), radius)).unwrap();
        let appendix = census(
            &CensusConfig::new(LatticeSpec::gaussian(), radius).mode(CensusMode::AppendixCompatible),
        )
        .unwrap();
        let d = lemma.diagnostics;
        assert_eq!(d, appendix.diagnostics);
        let gap = lemma.counts.primitive - appendix.counts.primitive;
        assert_eq!(gap, d.largest_angle_ties);
        assert!(gap <= d.largest_angle_ties + d.sector_boundary_ties);
    }
}

#[test]
fn length_predicate_matches_float_evaluation() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let sqrt3 = 3f64.sqrt();
    let mut compared = 0;
    for _ in 0..1_000_000 {
        let mut coord = || rng.random_range(-60i64..=60);
        let coords = TripodCoords::new(coord(), coord(), coord(), coord());
        let radius = rng.random_range(1u32..=90);
        let lattice = if rng.random_bool(0.5) { LatticeSpec::gaussian() } else { LatticeSpec::eisenstein() };
        let z = lattice.embed(coords.z());
        let w = lattice.embed(coords.w());
        let length_sq = z.norm_sqr() + w.norm_sqr() - (z * w.conj()).re + sqrt3 * (z.conj() * w).im;
        let r2 = (radius * radius) as f64;
        if (length_sq - r2).abs() <= 1e-6 {
            continue;
        }
        assert_eq!(length_below(coords, &lattice, radius).unwrap(), length_sq < r2, "{lattice} {coords} R={radius}");
        compared += 1;
    }
    assert!(compared > 990_000);
}

#[test]
fn nonreduced_tripods_exist_on_both_presets() {
    let g = census(&CensusConfig::new(LatticeSpec::gaussian(), 20.0).reduced(true)).unwrap();
    let nonreduced = g.counts.nonreduced_primitive.unwrap();
    assert!(nonreduced > 0);
    assert!(!is_reduced_exact(TripodCoords::new(2, 1, 1, 2), &LatticeSpec::gaussian()).unwrap());
    assert!(is_reduced_exact(TripodCoords::new(1, 0, 0, 1), &LatticeSpec::gaussian()).unwrap());
    let e = census(&CensusConfig::new(LatticeSpec::eisenstein(), 20.0).reduced(true)).unwrap();
    assert!(e.counts.nonreduced_primitive.unwrap() > nonreduced);
}
