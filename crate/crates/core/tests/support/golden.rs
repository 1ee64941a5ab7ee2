//! Diagrams pinned by files under `tests/golden`.

use fatflow::dsl::{self, SelectorTable};
use fatflow::order::f3_poset;
use fatflow::render::{filtration_dot, hasse_dot, schematic_svg};
use fatflow::{identify, BasicHandleKind, FatHandle, FlowModel, Polarity};

pub const NAMES: [&str; 3] = ["hasse_iii3.dot", "filtration_ii4.dot", "schematic_du_du.svg"];

fn standard(text: &str) -> Result<FlowModel, String> {
    let e = SelectorTable::builtin().parse(text).map_err(|e| e.to_string())?;
    dsl::elaborate(&e).map_err(|e| e.to_string())
}

pub fn render(name: &str) -> Result<String, String> {
    let s = |e: &dyn std::fmt::Display| e.to_string();
    match name {
        "hasse_iii3.dot" => Ok(hasse_dot(&f3_poset(&standard("III(III(III(h,h),h),h)")?).map_err(|e| s(&e))?).body),
        "filtration_ii4.dot" => Ok(filtration_dot(&standard("II(II(II(II(h,h),h),h),h)")?)
            .map_err(|e| s(&e))?
            .body),
        "schematic_du_du.svg" => {
            let du = |p| FatHandle::basic(BasicHandleKind::Du, p);
            let f = identify(&du(Polarity::Attractive), &du(Polarity::Repulsive)).map_err(|e| s(&e))?;
            Ok(schematic_svg(&f).map_err(|e| s(&e))?.body)
        }
        _ => Err(format!("no golden diagram named {name}")),
    }
}
