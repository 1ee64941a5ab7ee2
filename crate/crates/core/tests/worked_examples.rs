use fatflow::dsl::{self, SelectorTable, STANDARD_SELECTORS};
use fatflow::order::{commuting_steps, f3_chain, reorder, saddle_poset, Reordering};
use fatflow::{DslError, FlowModel, HandleClass};

fn standard(text: &str) -> FlowModel {
    dsl::elaborate(&SelectorTable::builtin().parse(text).unwrap()).unwrap()
}

#[test]
fn table_entries_agree_with_link_algebra() {
    for (bare, explicit) in STANDARD_SELECTORS {
        let e = dsl::parse(explicit).unwrap();
        let f = dsl::elaborate(&e).unwrap();
        assert_eq!(f.saddle_count(), dsl::parse(bare).unwrap().size(), "{bare}");
        assert_eq!(f.link_of().shape(), dsl::eval_link(&e).unwrap().shape(), "{bare}");
    }
}

#[test]
fn nested_links() {
    assert_eq!(standard("III(III(h,h),h)").link_of().shape(), "d·d·u·u");
    assert_eq!(standard("II(II(III(h,h),h),h)").link_of().shape(), "h·h·u·u·u");
    assert_eq!(standard("III(III(III(h,h),h),h)").link_of().shape(), "d·d·u·u·u");
}

#[test]
fn standard_orders() {
    let p = saddle_poset(&standard("II(II(III(h,h),h),h)")).unwrap();
    assert!(p.is_total());
    assert_eq!(p.chains_text().len(), 1);

    let f = standard("II(II(II(II(h,h),h),h),h)");
    let p = saddle_poset(&f).unwrap();
    assert!(!p.is_total());
    assert_eq!(p.chains_text(), ["u1<u2", "u3<u4"]);
    // one step from each chain
    let c = commuting_steps(&f).unwrap();
    assert_eq!(c.len(), 1);
    let &(i, j) = c.iter().next().unwrap();
    let log = f.construction_log();
    assert!(!p.comparable(log[i].new_saddle, log[j].new_saddle));

    let f = standard("III(III(III(h,h),h),h)");
    assert!(commuting_steps(&f).unwrap().is_empty());
    assert_eq!(f3_chain(&f).unwrap().len(), 5);

    let f = standard("I(I(h,h),h)");
    assert_eq!(commuting_steps(&f).unwrap().len(), 1);
}

#[test]
fn chain_ends_refilter_rather_than_commute() {
    // both orders give the same flow, but the heteroclinic edge comes from a
    // different step, so the filtrations differ
    let f = standard("III(III(h,h),h)");
    assert_eq!(f.heteroclinic_edges().len(), 1);
    assert_eq!(reorder(&f, 0, 1), Reordering::Refilters);
    let log = f.construction_log();
    assert_eq!(log[1].derived_handle_class, HandleClass::ClassIII);
}

#[test]
fn missing_selectors_are_reported() {
    let e = dsl::parse("II(II(II(h,h),h),h)").unwrap();
    assert!(matches!(dsl::elaborate(&e), Err(DslError::Ambiguous { .. })));
    // a leaf-only expression with a single legal reading needs no selector
    assert!(dsl::elaborate(&dsl::parse("I(h,h)").unwrap()).is_ok());
}

#[test]
fn syntax_errors_carry_positions() {
    match dsl::parse("I(h,") {
        Err(DslError::Syntax { pos, .. }) => assert_eq!(pos, 5),
        other => panic!("{other:?}"),
    }
    assert!(matches!(dsl::parse("IV(h,h)"), Err(DslError::Syntax { .. })));
    assert!(matches!(dsl::parse("I(h,h; k1=h1.0)"), Err(DslError::Syntax { .. })));
}

#[test]
fn selectors_must_exist() {
    let e = dsl::parse("III(h,h; k1=h7.0, k2=h1.2)").unwrap();
    assert!(matches!(dsl::elaborate(&e), Err(DslError::BadSelector { .. })));
}

#[test]
fn user_table_overrides_builtin() {
    let mut t = SelectorTable::builtin();
    t.extend_from_text("# mine\nII(h,h) => II(h,h; k2=h1.2, at=h1.0)\n")
        .unwrap();
    assert_eq!(t.lookup("II( h , h )"), Some("II(h,h; k2=h1.2, at=h1.0)"));
    assert!(t.extend_from_text("II(h,h) II(h,h)").is_err());
}
