use geolab::spairs::{brute_force_oracle, check_depth_bounds, match_spairs, partition_indices, SignSequence};
use geolab::lab::Verdict;
use proptest::prelude::*;

fn signs() -> impl Strategy<Value = SignSequence> {
    prop::collection::vec(prop::bool::ANY, 0..=24)
        .prop_map(|b| SignSequence::new(b.into_iter().map(|x| if x { 1 } else { -1 }).collect()).unwrap())
}

proptest! {
    #[test]
    fn stack_matches_oracle(s in signs()) {
        prop_assert_eq!(match_spairs(&s), brute_force_oracle(&s).unwrap());
    }

    #[test]
    fn equal_depth_pairs_are_disjoint(s in signs()) {
        let m = match_spairs(&s);
        for a in &m.pairs {
            for b in &m.pairs {
                if a != b && a.depth == b.depth {
                    prop_assert!(a.j < b.i || b.j < a.i);
                }
            }
        }
    }

    #[test]
    fn every_index_is_classified_once(s in signs()) {
        let m = match_spairs(&s);
        let p = partition_indices(&s, m.max_depth()).unwrap();
        let mut all: Vec<usize> = p.s.iter().flatten().chain(&p.r).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..s.len()).collect::<Vec<_>>());
    }

    #[test]
    fn pair_terms_reduce_to_theta_gap(s in signs(), seed in prop::collection::vec(-1.5..1.5f64, 24)) {
        let m = match_spairs(&s);
        for p in &m.pairs {
            let (ti, tj) = (seed[p.i], seed[p.j]);
            let lhs = s.signs[p.i] as f64 * ti + s.signs[p.j] as f64 * tj;
            prop_assert!((lhs - (ti - tj)).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_angles_pass(s in signs()) {
        let n = s.len();
        let s = s.with_data(vec![0.0; n], (0..n).map(|k| k as f64).collect()).unwrap();
        let r = check_depth_bounds(&s, 1e-4).unwrap();
        prop_assert!(r.verdict != Verdict::Fail);
    }
}
