//! Cardinality, optional and bulking laws of the traversal engine over random
//! graphs and random match patterns.

mod common;

use proptest::prelude::*;

use common::laws;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn bulking_does_not_change_results(seed in any::<u64>()) {
        prop_assert_eq!(laws::bulking(seed), Ok(()));
    }

    #[test]
    fn union_adds_branch_sizes(seed in any::<u64>()) {
        prop_assert_eq!(laws::union(seed), Ok(()));
    }

    #[test]
    fn dedup_removes_only_duplicates(seed in any::<u64>()) {
        prop_assert_eq!(laws::dedup(seed), Ok(()));
    }

    #[test]
    fn range_keeps_the_requested_window(seed in any::<u64>()) {
        prop_assert_eq!(laws::range(seed), Ok(()));
    }

    #[test]
    fn count_is_one_row_with_the_stream_size(seed in any::<u64>()) {
        prop_assert_eq!(laws::count(seed), Ok(()));
    }

    #[test]
    fn optional_keeps_every_required_row(seed in any::<u64>()) {
        prop_assert_eq!(laws::optional(seed), Ok(()));
    }

    #[test]
    fn hops_read_from_either_end_agree(seed in any::<u64>()) {
        prop_assert_eq!(laws::reversal(seed), Ok(()));
    }
}
