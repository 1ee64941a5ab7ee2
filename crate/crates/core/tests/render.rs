mod support;

use std::path::PathBuf;

use fatflow::dsl::{self, SelectorTable};
use fatflow::order::saddle_poset;
use fatflow::render::{filtration_dot, hasse_dot, schematic_svg, schematic_svg_with_limit, DiagramKind};
use fatflow::{basic_flow, BasicOp, RenderError};
use support::golden;

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.
#[test]
fn matches_golden_files() {
    for name in golden::NAMES {
        let got = golden::render(name).unwrap();
        let path = golden_dir().join(name);
        if std::env::var_os("UPDATE_GOLDEN").is_some() {
            std::fs::write(&path, &got).unwrap();
        }
        let want = std::fs::read_to_string(&path).unwrap();
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn hasse_has_one_edge_per_cover() {
    let table = SelectorTable::builtin();
    for (bare, _) in table.entries() {
        let f = dsl::elaborate(&table.parse(bare).unwrap()).unwrap();
        let p = saddle_poset(&f).unwrap();
        let d = hasse_dot(&p);
        assert_eq!(d.kind, DiagramKind::Hasse);
        assert_eq!(d.body.matches("->").count(), p.covers().len(), "{bare}");
        assert_eq!(d.body.matches("[label=").count(), p.elements().len());
    }
}

#[test]
fn iii_cubed_is_a_path_of_five() {
    let body = golden::render("hasse_iii3.dot").unwrap();
    assert_eq!(body.matches("[label=").count(), 5);
    assert_eq!(body.matches("->").count(), 4);
}

#[test]
fn filtration_marks_commuting_steps() {
    let body = golden::render("filtration_ii4.dot").unwrap();
    assert_eq!(body.matches("style=dashed").count(), 1);
    assert_eq!(body.matches("m1 -> m2;").count(), 1);
}

#[test]
fn du_du_schematic_has_one_arc() {
    let body = golden::render("schematic_du_du.svg").unwrap();
    assert_eq!(body.matches("stroke-dasharray").count(), 1);
    assert!(body.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert!(body.trim_end().ends_with("</svg>"));
}

#[test]
fn schematic_refuses_large_flows() {
    let f = basic_flow(BasicOp::I).unwrap();
    let mut g = f.clone();
    for _ in 0..3 {
        let k = g.removable()[0];
        g = g.replace_orbit(k, fatflow::BasicHandleKind::Hdu).unwrap();
    }
    assert!(matches!(
        schematic_svg_with_limit(&g, 3),
        Err(RenderError::TooLarge { saddles: 4, limit: 3 })
    ));
    assert!(schematic_svg(&g).is_ok());
    assert_eq!(filtration_dot(&g).unwrap().kind.extension(), "dot");
}
