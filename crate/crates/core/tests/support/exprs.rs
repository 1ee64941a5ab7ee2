//! Random DSL expressions, selectors included.

use fatflow::dsl::{Component, FlowExpr};
use fatflow::OrbitIndex;
use proptest::prelude::*;

fn index() -> impl Strategy<Value = OrbitIndex> {
    prop_oneof![Just(OrbitIndex::Repulsive), Just(OrbitIndex::Attractive)]
}

pub fn component() -> impl Strategy<Value = Component> {
    let num = proptest::option::of(1u32..12);
    prop_oneof![
        (num.clone(), index()).prop_map(|(pair, index)| Component::Hopf { pair, index }),
        (index(), num).prop_map(|(index, pos)| Component::Separated { index, pos }),
    ]
}

fn sel() -> impl Strategy<Value = Option<Component>> {
    proptest::option::of(component())
}

/// Expression trees of depth at most `depth`, with arbitrary selectors.
pub fn expr(depth: u32) -> impl Strategy<Value = FlowExpr> {
    Just(FlowExpr::Leaf).prop_recursive(depth, 256, 2, |inner| {
        let pair = (inner.clone(), inner);
        prop_oneof![
            (pair.clone(), sel()).prop_map(|((l, r), at)| FlowExpr::OpI {
                left: Box::new(l),
                right: Box::new(r),
                at,
            }),
            (pair.clone(), sel(), sel()).prop_map(|((l, r), k2, at)| FlowExpr::OpII {
                left: Box::new(l),
                right: Box::new(r),
                k2,
                at,
            }),
            (pair, sel(), sel()).prop_map(|((l, r), k1, k2)| FlowExpr::OpIII {
                left: Box::new(l),
                right: Box::new(r),
                k1,
                k2,
            }),
        ]
    })
}
