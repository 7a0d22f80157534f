use std::collections::{BTreeSet, HashSet};

use diffcyc::cycle::{inverse_mod, units, DifferenceCycle};
use diffcyc::CyclicComplex;
use proptest::prelude::*;

fn parts() -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(1u32..9, 3..6)
}

fn translates(c: &DifferenceCycle) -> HashSet<BTreeSet<u32>> {
    let n = c.modulus();
    let g = c.generator();
    (0..n)
        .map(|t| g.iter().map(|&v| (v + t) % n).collect())
        .collect()
}

proptest! {
    #[test]
    fn rotations_share_a_canonical_form(p in parts(), r in 0usize..6) {
        let mut q = p.clone();
        q.rotate_left(r % p.len());
        let a = DifferenceCycle::new(&p).unwrap();
        prop_assert_eq!(&a, &DifferenceCycle::new(&q).unwrap());
        prop_assert_eq!(a.modulus(), p.iter().sum::<u32>());
        prop_assert_eq!(DifferenceCycle::new(a.parts()).unwrap(), a);
    }

    #[test]
    fn orbit_length_counts_translates(p in parts()) {
        let c = DifferenceCycle::new(&p).unwrap();
        let orbit = translates(&c);
        prop_assert_eq!(c.orbit_length() as usize, orbit.len());
        prop_assert_eq!(c.modulus() % c.orbit_length(), 0);
        let listed: HashSet<BTreeSet<u32>> =
            c.simplices().into_iter().map(|s| s.into_iter().collect()).collect();
        prop_assert_eq!(listed, orbit);
    }

    #[test]
    fn every_translate_recovers_the_cycle(p in parts(), t in 0u32..64) {
        let c = DifferenceCycle::new(&p).unwrap();
        let shifted: Vec<u32> = c.generator().iter().map(|&v| v + t).collect();
        prop_assert_eq!(DifferenceCycle::from_simplex(&shifted, c.modulus()).unwrap(), c);
    }

    #[test]
    fn scaling_by_a_unit_is_invertible(p in parts(), pick in 0usize..64) {
        let c = DifferenceCycle::new(&p).unwrap();
        let n = c.modulus();
        let us = units(n);
        let l = us[pick % us.len()];
        let scaled = c.scaled(l);
        prop_assert_eq!(scaled.modulus(), n);
        prop_assert_eq!(scaled.orbit_length(), c.orbit_length());
        prop_assert_eq!(scaled.scaled(inverse_mod(l, n).unwrap()), c);
    }

    #[test]
    fn complexes_round_trip_through_text(list in prop::collection::vec(prop::collection::vec(1u32..5, 3), 1..5), pick in 0usize..64) {
        // complete each triple to a 4-part cycle on a common modulus
        let n = list.iter().map(|p| p.iter().sum::<u32>()).max().unwrap() + 1;
        let full: Vec<Vec<u32>> = list
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.push(n - p.iter().sum::<u32>());
                q
            })
            .collect();
        let cycles: BTreeSet<DifferenceCycle> =
            full.iter().map(|p| DifferenceCycle::new(p).unwrap()).collect();
        let m = CyclicComplex::new(n, 3, cycles).unwrap();
        prop_assert_eq!(m.to_string().parse::<CyclicComplex>().unwrap(), m.clone());
        let facets: usize = m.cycles().map(|c| c.orbit_length() as usize).sum();
        prop_assert_eq!(m.expand().facets().len(), facets);

        let us = units(n);
        let l = us[pick % us.len()];
        let image = m.multiply(l).unwrap();
        prop_assert_eq!(image.multiplier_orbit_key(), m.multiplier_orbit_key());
        prop_assert_eq!(image.multiply(inverse_mod(l, n).unwrap()).unwrap(), m);
    }
}
