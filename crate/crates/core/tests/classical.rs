use proptest::prelude::*;
use qshift_core::classical::*;
use qshift_core::encoder::{Base, DnaSequence, SequenceSet};

fn arb_seq(n: usize) -> impl Strategy<Value = DnaSequence> {
    proptest::collection::vec(0u8..4, n)
        .prop_map(|codes| DnaSequence::new(codes.into_iter().map(Base::from_code).collect()).unwrap())
}

fn arb_pair() -> impl Strategy<Value = (DnaSequence, DnaSequence)> {
    (4usize..=64).prop_flat_map(|n| (arb_seq(n), arb_seq(n)))
}

fn arb_var() -> impl Strategy<Value = Vec<Base>> {
    proptest::collection::vec((0u8..4).prop_map(Base::from_code), 0..12)
}

#[test]
fn fft_equals_naive_on_a_thousand_pairs() {
    use proptest::strategy::ValueTree;
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let mut mismatches = 0;
    for _ in 0..1000 {
        let (x, y) = arb_pair().new_tree(&mut runner).unwrap().current();
        if match_count_fft(&x, &y).unwrap() != match_count_naive(&x, &y).unwrap() {
            mismatches += 1;
        }
    }
    assert_eq!(mismatches, 0);
}

#[test]
fn identical_pair_peaks_at_zero() {
    let x: DnaSequence = "GATTACA".parse().unwrap();
    let c = match_count_fft(&x, &x).unwrap();
    assert_eq!(c[0], 7);
    assert_eq!(hamming(&x, &x).unwrap(), 0);
}

#[test]
fn figure_pair_peaks_at_two() {
    let x: DnaSequence = "ATGCAACT".parse().unwrap();
    let y: DnaSequence = "GCAACTCC".parse().unwrap();
    let c = match_count_fft(&x, &y).unwrap();
    let best = (0..8).max_by_key(|&k| c[k]).unwrap();
    assert_eq!(best, 2);
    assert_eq!(8 - c[2], 2);
}

#[test]
fn full_threshold_lists_all_nonzero_candidates() {
    let set = SequenceSet::from_strs(&["ACGT", "ACGA", "TTTT", "ACGT"]).unwrap();
    let all = scan_candidates(&set, 4);
    let total = 4 * 4 * 2 * 4;
    let zeros = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .flat_map(|(i, j)| (0..4).flat_map(move |k| [(i, j, k, false), (i, j, k, true)]))
        .filter(|&(i, j, k, s)| candidate_distance(&set.sequences()[i], &set.sequences()[j], k, s) == 0)
        .count();
    assert_eq!(all.len() + zeros, total);
    assert!(all.iter().all(|c| c.d >= 1));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hamming_complements_match_count((x, y) in arb_pair()) {
        let c = match_count_naive(&x, &y).unwrap();
        for (k, ck) in c.iter().enumerate() {
            prop_assert_eq!(hamming(&x, &rotate(&y, k)).unwrap() + ck, x.len());
        }
    }

    #[test]
    fn edit_at_most_hamming((x, y) in arb_pair()) {
        prop_assert!(edit_distance(x.symbols(), y.symbols()) <= hamming(&x, &y).unwrap());
    }

    #[test]
    fn edit_is_a_metric(a in arb_var(), b in arb_var(), c in arb_var()) {
        let d = |p: &[Base], q: &[Base]| edit_distance(p, q);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert!(d(&a, &b) >= a.len().abs_diff(b.len()));
    }

    #[test]
    fn sign_mirrors_the_shift((x, y) in arb_pair(), k in 0usize..64) {
        let n = x.len();
        let k = k % n;
        prop_assert_eq!(
            candidate_distance(&x, &y, k, true),
            candidate_distance(&x, &y, (n - k) % n, false)
        );
    }

    #[test]
    fn rotations_compose((x, _) in arb_pair(), a in 0usize..100, b in 0usize..100) {
        prop_assert_eq!(rotate(&rotate(&x, a), b), rotate(&x, a + b));
    }
}
