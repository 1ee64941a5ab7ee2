mod support;

use fatflow::dsl::{self, expr_of};
use fatflow::enumerate::{enumerate_upto, removal_classes};
use fatflow::link::{self, canonicalize, CanonicalLink, IndexedLink};
use fatflow::order::saddle_poset;
use fatflow::{BasicHandleKind, FlowModel, OrbitIndex, Polarity};
use proptest::prelude::*;

fn non_saddle() -> impl Strategy<Value = OrbitIndex> {
    prop_oneof![Just(OrbitIndex::Repulsive), Just(OrbitIndex::Attractive)]
}

/// Links assembled from Hopf links, unknots and operation I.
fn any_link() -> impl Strategy<Value = IndexedLink> {
    let piece = prop_oneof![
        (non_saddle(), non_saddle()).prop_map(|(i, j)| link::make_hopf(i, j).unwrap()),
        non_saddle().prop_map(link::make_unknot),
    ];
    (proptest::collection::vec(piece, 1..6), 0usize..4).prop_map(|(parts, ops)| {
        let mut l = parts
            .iter()
            .fold(IndexedLink::empty(), |acc, p| link::split_sum(&acc, p));
        for _ in 0..ops {
            l = link::op_i(&l, &link::hopf());
        }
        l
    })
}

/// A flow grown from the generator by up to `n` replacements; each step is
/// (which removable orbit, which basic kind), both taken modulo the choices.
fn any_flow(n: usize) -> impl Strategy<Value = FlowModel> {
    proptest::collection::vec((any::<usize>(), 0usize..5), 1..=n).prop_map(|steps| {
        let mut f = FlowModel::generator();
        for (pick, kind) in steps {
            let ks = f.removable();
            if let Ok(g) = f.replace_orbit(ks[pick % ks.len()], BasicHandleKind::ALL[kind]) {
                f = g;
            }
        }
        f
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn link_canonicalization_is_idempotent(l in any_link()) {
        let c = canonicalize(&l);
        prop_assert_eq!(canonicalize(&c.to_link()), c.clone());
        let text = c.to_string();
        prop_assert_eq!(text.parse::<CanonicalLink>().unwrap(), c);
    }

    #[test]
    fn relabeling_keeps_the_link(l in any_link(), seed in any::<u64>()) {
        let n = l.len();
        let mut order: Vec<usize> = (0..n).collect();
        // a cheap deterministic shuffle driven by the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(canonicalize(&l.relabeled(&order)), canonicalize(&l));
    }

    #[test]
    fn expressions_round_trip(e in support::exprs::expr(8)) {
        let text = dsl::print(&e);
        prop_assert_eq!(dsl::parse(&text).unwrap(), e);
    }

    #[test]
    fn every_removal_is_classified(f in any_flow(7)) {
        prop_assert_eq!(removal_classes(&f).unclassified, 0);
    }

    #[test]
    fn edges_count_solid_identifications(f in any_flow(7)) {
        let solid = f
            .construction_log()
            .iter()
            .filter(|s| s.derived_handle_class.is_solid() && s.attached_class.is_solid())
            .count();
        prop_assert_eq!(f.heteroclinic_edges().len(), solid);
        prop_assert!(saddle_poset(&f).is_ok());
    }

    #[test]
    fn duality_swaps_polarity(f in any_flow(6)) {
        let d = f.dual();
        prop_assert_eq!(d.dual().canonical(), f.canonical());
        prop_assert_eq!(d.canonical_dual_quotient(), f.canonical_dual_quotient());
        let (l, dl) = (canonicalize(&f.link_of()), canonicalize(&d.link_of()));
        prop_assert_eq!((l.repulsive, l.attractive), (dl.attractive, dl.repulsive));
        for k in f.removable() {
            let (h, dh) = (f.remove_orbit(k).unwrap(), d.remove_orbit(k).unwrap());
            prop_assert_eq!(dh.polarity(), h.polarity().opposite());
            prop_assert_eq!(dh.handle_class(), h.handle_class());
        }
        prop_assert_eq!(removal_classes(&d), removal_classes(&f));
    }

    #[test]
    fn expression_rebuilds_flow(f in any_flow(6)) {
        let e = expr_of(&f);
        prop_assert_eq!(e.size(), f.saddle_count());
        let g = dsl::elaborate(&e).unwrap();
        prop_assert_eq!(g.canonical(), f.canonical());
        prop_assert_eq!(canonicalize(&dsl::eval_link(&e).unwrap()), canonicalize(&f.link_of()));
    }
}

#[test]
fn census_flows_are_expressible() {
    for c in enumerate_upto(4, false).unwrap() {
        for e in &c.flows {
            let x = expr_of(&e.flow);
            let text = dsl::print(&x);
            let back = dsl::parse(&text).unwrap();
            let g = dsl::elaborate(&back).unwrap();
            assert_eq!(g.canonical(), e.canonical, "{text}");
            assert_eq!(canonicalize(&dsl::eval_link(&back).unwrap()), e.link, "{text}");
        }
    }
}

#[test]
fn removal_polarity_follows_index() {
    let f = fatflow::basic_flow(fatflow::BasicOp::I).unwrap();
    for k in f.removable() {
        let h = f.remove_orbit(k).unwrap();
        let want = match f.orbit(k).unwrap().index {
            OrbitIndex::Attractive => Polarity::Repulsive,
            _ => Polarity::Attractive,
        };
        assert_eq!(h.polarity(), want);
    }
}

#[test]
fn hopf_pairs_always_mix_indices() {
    for c in enumerate_upto(5, false).unwrap() {
        for e in &c.flows {
            for &(a, b) in e.flow.hopf_pairs() {
                let mut ix = [e.flow.orbit(a).unwrap().index, e.flow.orbit(b).unwrap().index];
                ix.sort();
                assert_eq!(ix, [OrbitIndex::Repulsive, OrbitIndex::Attractive], "{}", e.canonical);
            }
        }
    }
}
