use std::collections::BTreeSet;

use fermatq::corpus::balanced_semiprimes;
use fermatq::encoders::{decode_bit_pattern, encode_bit_pattern, encode_bit_pattern_with_depth, BitPatternMap, VarMap};
use fermatq::fermat::fermat_bounds;
use fermatq::solvers::{recover_factors, solve_exact, SampleSet};
use fermatq::{BigInt, BigUint};

fn exact_ground_states(n: &BigUint, depth: u32) -> Vec<(BigInt, SampleSet, BitPatternMap)> {
    encode_bit_pattern_with_depth(n, &fermat_bounds(n, true).unwrap(), depth)
        .unwrap()
        .into_iter()
        .map(|(model, map)| {
            let set = solve_exact(&model, 26).unwrap();
            (set.min_energy().unwrap().clone(), set, map)
        })
        .collect()
}

#[test]
fn exact_ground_states_recover_small_semiprimes() {
    let mut rejected_zero = 0;
    let mut instances = 0;
    for bits in 12..=16 {
        for s in balanced_semiprimes(bits, 6, 11) {
            let n = BigUint::from(s.n);
            let depth = bits.saturating_sub(14);
            let mut found = BTreeSet::new();
            for (min, set, map) in exact_ground_states(&n, depth) {
                assert!(min >= BigInt::from(0));
                let var_map = VarMap::BitPattern(map.clone());
                if let Some(f) = recover_factors(&n, &set, &var_map) {
                    assert_eq!(&f.p * &f.q, n);
                    found.insert((f.p, f.q));
                }
                for sample in set.iter().filter(|s| s.energy == BigInt::from(0)) {
                    if decode_bit_pattern(&map, &sample.assignment).unwrap().is_none() {
                        rejected_zero += 1;
                    }
                }
            }
            assert!(found.contains(&(BigUint::from(s.p), BigUint::from(s.q))), "N={}", s.n);
            instances += 1;
        }
    }
    assert_eq!(instances, 30);
    assert!(rejected_zero > 0);
}

/// Sub-problems only drop zero-energy states whose low bits are not square
/// residues; every decodable root pair survives.
fn zero_states_and_roots(n: &BigUint, depth: u32) -> (usize, BTreeSet<(BigUint, BigUint)>) {
    let mut count = 0;
    let mut roots = BTreeSet::new();
    for (min, set, map) in exact_ground_states(n, depth) {
        if min != BigInt::from(0) {
            continue;
        }
        count += set.len();
        roots.extend(set.iter().filter_map(|s| decode_bit_pattern(&map, &s.assignment).unwrap()));
    }
    (count, roots)
}

#[test]
fn depth_keeps_every_decodable_root() {
    for n in [493u32, 1147, 3599] {
        let n = BigUint::from(n);
        let (flat, flat_roots) = zero_states_and_roots(&n, 0);
        assert!(!flat_roots.is_empty());
        for depth in 1..=3 {
            let (split, roots) = zero_states_and_roots(&n, depth);
            assert!(split <= flat, "depth {depth}");
            assert_eq!(roots, flat_roots, "depth {depth}");
        }
    }
}

#[test]
fn variable_count_is_linear_in_bitlen() {
    for bits in 8..=48u32 {
        for s in balanced_semiprimes(bits, 5, 9) {
            let n = BigUint::from(s.n);
            let (model, _) = encode_bit_pattern(&n, &fermat_bounds(&n, true).unwrap()).unwrap();
            assert!(model.num_vars() <= 3 * bits as usize, "N={}", s.n);
        }
    }
}
