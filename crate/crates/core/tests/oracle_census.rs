//! The enumerator against an independent brute-force construction.

mod support;

use fatflow::enumerate::enumerate_upto;
use support::oracle::{census, Counts};

fn library_counts(n: usize, dualize: bool) -> Vec<Counts> {
    enumerate_upto(n, dualize)
        .unwrap()
        .iter()
        .map(|c| Counts {
            flows: c.len(),
            links: c.links.len(),
            collisions: c.collisions.len(),
            class_i: c.class_table.class_i,
            class_ii: c.class_table.class_ii,
            class_iii: c.class_table.class_iii,
        })
        .collect()
}

#[test]
fn census_matches_oracle() {
    for dualize in [false, true] {
        let oracle = census(4, dualize);
        assert_eq!(library_counts(4, dualize), oracle, "dualize={dualize}");
    }
}

#[test]
fn oracle_flow_counts_are_pinned() {
    let flows = |d| census(4, d).iter().map(|c| c.flows).collect::<Vec<_>>();
    assert_eq!(flows(false), [4, 19, 150, 1276]);
    assert_eq!(flows(true), [3, 12, 81, 655]);
}
