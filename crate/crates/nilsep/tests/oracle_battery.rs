use std::collections::BTreeSet;
use std::path::PathBuf;

use nilsep::format::read_presentation;
use nilsep::oracle::{compare_fixture, default_prime_sets, load_fixture_dir, materialize, oracle_isolator, test_subgroups};
use nilsep_core::isolator::{is_isolated, isolator};
use nilsep_core::{PcPresentation, PrimeSet, Subgroup};

fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn small_fixtures(max: i128) -> Vec<(String, PcPresentation)> {
    load_fixture_dir(&fixture_dir()).unwrap().into_iter().filter(|(_, x)| x.order().is_some_and(|o| o <= max)).collect()
}

#[test]
fn isolated_subgroups_are_closed_under_intersection() {
    for (name, x) in small_fixtures(81) {
        let m = materialize(&x).unwrap();
        for primes in default_prime_sets() {
            let mut isolated: Vec<Subgroup> = Vec::new();
            for gens in test_subgroups(&x).unwrap() {
                let iso = isolator(&x, &Subgroup::span(&x, &gens).unwrap(), &primes).unwrap();
                if !isolated.contains(&iso) {
                    isolated.push(iso);
                }
            }
            for a in &isolated {
                for b in &isolated {
                    let meet = a.intersection(&x, b).unwrap();
                    assert!(is_isolated(&x, &meet, &primes).unwrap(), "{name} P={primes}");
                    let brute: BTreeSet<usize> = m.subset(&x, a).unwrap().intersection(&m.subset(&x, b).unwrap()).copied().collect();
                    assert_eq!(m.subset(&x, &meet).unwrap(), brute);
                }
            }
        }
    }
}

#[test]
fn normalizers_of_isolated_subgroups_are_isolated() {
    for (name, x) in small_fixtures(243) {
        let m = materialize(&x).unwrap();
        let t = &m.table;
        for primes in default_prime_sets() {
            for gens in test_subgroups(&x).unwrap() {
                let y = Subgroup::span(&x, &gens).unwrap();
                if !is_isolated(&x, &y, &primes).unwrap() {
                    continue;
                }
                let ys = m.subset(&x, &y).unwrap();
                let normalizer: Vec<usize> = (0..t.order())
                    .filter(|&g| ys.iter().all(|&h| ys.contains(&t.mul(t.mul(t.inverse(g), h), g))))
                    .collect();
                let nlib = Subgroup::span(&x, &normalizer.iter().map(|&g| m.elements[g].clone()).collect::<Vec<_>>()).unwrap();
                assert!(is_isolated(&x, &nlib, &primes).unwrap(), "{name} P={primes}");
                let ny = t.generate(&normalizer);
                assert_eq!(oracle_isolator(t, &ny, &primes), ny);
            }
        }
    }
}

#[test]
fn fixtures_above_243() {
    for (file, p) in [("hmod8.pc", 2u64), ("hmod9.pc", 3)] {
        let x = read_presentation(&fixture_dir().join(file)).unwrap();
        let sets = [PrimeSet::explicit([p]).unwrap()];
        let rep = compare_fixture(file, &x, &sets).unwrap();
        assert!(rep.mismatches.is_empty(), "{:?}", rep.mismatches);
        assert!(rep.checks > 0);
    }
}
