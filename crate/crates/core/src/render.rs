//! Diagram output: Hasse diagrams and filtration chains as Graphviz DOT, and
//! a flat SVG cartoon of a flow's cross-section.
//!
//! Every function here is a pure function of its input; identical input
//! gives identical bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::RenderError;
use crate::flow::FlowModel;
use crate::link::{OrbitId, OrbitIndex};
use crate::order::{commuting_steps, SaddlePoset};

/// Flows with more saddles than this are refused by [`schematic_svg`].
pub const SCHEMATIC_LIMIT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiagramKind {
    Hasse,
    Filtration,
    Schematic,
}

impl DiagramKind {
    pub fn extension(self) -> &'static str {
        match self {
            DiagramKind::Hasse | DiagramKind::Filtration => "dot",
            DiagramKind::Schematic => "svg",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub kind: DiagramKind,
    pub body: String,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Covering relation of `p`, bottom to top. Nodes follow the poset's element
/// order; edges follow the sorted cover set.
pub fn hasse_dot(p: &SaddlePoset) -> DiagramDoc {
    let mut body = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for &x in p.elements() {
        let _ = writeln!(body, "  o{} [label={}];", x.0, quote(p.label(x)));
    }
    for &(a, b) in p.covers() {
        let _ = writeln!(body, "  o{} -> o{};", a.0, b.0);
    }
    body.push_str("}\n");
    DiagramDoc {
        kind: DiagramKind::Hasse,
        body,
    }
}

/// The filtration M1 ⊂ M2 ⊂ … as a chain, one node per construction step.
/// Steps that commute are joined by a dashed, undirected edge.
pub fn filtration_dot(flow: &FlowModel) -> Result<DiagramDoc, RenderError> {
    let log = flow.construction_log();
    let commuting = commuting_steps(flow)?;
    let mut body = String::from("digraph filtration {\n  rankdir=LR;\n  node [shape=box];\n");
    for (i, s) in log.iter().enumerate() {
        let label = format!(
            "M{}\n{} {} [{}]",
            i + 1,
            flow.label(s.new_saddle),
            s.attached.name(),
            s.attached_class.roman()
        );
        let _ = writeln!(body, "  m{} [label={}];", i + 1, quote(&label));
    }
    for i in 1..log.len() {
        let _ = writeln!(body, "  m{} -> m{};", i, i + 1);
    }
    for &(i, j) in &commuting {
        let _ = writeln!(
            body,
            "  m{} -> m{} [dir=none, style=dashed, constraint=false, label=\"commute\"];",
            i + 1,
            j + 1
        );
    }
    body.push_str("}\n");
    Ok(DiagramDoc {
        kind: DiagramKind::Filtration,
        body,
    })
}

pub fn schematic_svg(flow: &FlowModel) -> Result<DiagramDoc, RenderError> {
    schematic_svg_with_limit(flow, SCHEMATIC_LIMIT)
}

const CELL: i64 = 110;
const MARGIN: i64 = 20;
const SADDLE_GAP: i64 = 70;

/// One annulus slot inside a region box: a lone orbit, or a Hopf pair drawn
/// as an annulus nested in the hole of its partner's.
enum Cell {
    Single(OrbitId),
    Nested(OrbitId, OrbitId),
}

/// Cross-section cartoon. Each region is a box of annuli (one per orbit, Hopf
/// partners nested), saddles sit on a row underneath joined to the orbits
/// they bound, and heteroclinic edges are dashed arcs between saddles.
pub fn schematic_svg_with_limit(flow: &FlowModel, limit: usize) -> Result<DiagramDoc, RenderError> {
    let saddles = flow.saddles();
    if saddles.len() > limit {
        return Err(RenderError::TooLarge {
            saddles: saddles.len(),
            limit,
        });
    }

    let mut layout: Vec<(u32, Vec<Cell>)> = Vec::new();
    for r in flow.regions() {
        let mut done = BTreeSet::new();
        let mut cells = Vec::new();
        for &o in &r.residents {
            if !done.insert(o) {
                continue;
            }
            match flow.partner(o).filter(|p| r.residents.contains(p)) {
                Some(p) => {
                    done.insert(p);
                    cells.push(Cell::Nested(o, p));
                }
                None => cells.push(Cell::Single(o)),
            }
        }
        layout.push((r.id.0, cells));
    }

    let cells_total: i64 = layout.iter().map(|(_, c)| c.len().max(1) as i64).sum();
    let regions_w = cells_total * CELL + (layout.len() as i64 + 1) * MARGIN;
    let saddles_w = saddles.len() as i64 * SADDLE_GAP + 2 * MARGIN;
    let width = regions_w.max(saddles_w);
    let saddle_y = MARGIN + CELL + 70;
    let height = saddle_y + 70;

    let mut dots: Vec<(OrbitId, i64, i64)> = Vec::new();
    let mut shapes = String::new();
    let mut x = MARGIN;
    for (rid, cells) in &layout {
        let w = cells.len().max(1) as i64 * CELL;
        let _ = writeln!(
            shapes,
            "  <rect x=\"{x}\" y=\"{MARGIN}\" width=\"{w}\" height=\"{CELL}\" rx=\"12\" fill=\"none\" stroke=\"#888\"/>"
        );
        let _ = writeln!(
            shapes,
            "  <text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"#888\">R{rid}</text>",
            x + 4,
            MARGIN + 12
        );
        for (i, cell) in cells.iter().enumerate() {
            let cx = x + i as i64 * CELL + CELL / 2;
            let cy = MARGIN + CELL / 2;
            match *cell {
                Cell::Single(o) => {
                    annulus(&mut shapes, cx, cy, 44, 18);
                    dots.push((o, cx, cy - 31));
                }
                Cell::Nested(a, b) => {
                    annulus(&mut shapes, cx, cy, 46, 30);
                    annulus(&mut shapes, cx, cy, 24, 8);
                    dots.push((a, cx, cy - 38));
                    dots.push((b, cx, cy - 16));
                }
            }
        }
        x += w + MARGIN;
    }

    let saddle_x = |i: usize| -> i64 {
        let span = saddles.len() as i64 * SADDLE_GAP;
        (width - span) / 2 + i as i64 * SADDLE_GAP + SADDLE_GAP / 2
    };
    let saddle_pos = |s: OrbitId| -> Option<i64> { saddles.iter().position(|&t| t == s).map(saddle_x) };

    let mut lines = String::new();
    for &(o, dx, dy) in &dots {
        if let Some(sx) = flow.orbit(o).and_then(|r| r.frontier).and_then(saddle_pos) {
            let _ = writeln!(
                lines,
                "  <line x1=\"{dx}\" y1=\"{dy}\" x2=\"{sx}\" y2=\"{saddle_y}\" stroke=\"#bbb\" stroke-width=\"0.75\"/>"
            );
        }
    }

    let mut arcs = String::new();
    for &(a, b) in flow.heteroclinic_edges() {
        let (Some(xa), Some(xb)) = (saddle_pos(a), saddle_pos(b)) else {
            continue;
        };
        let mid = (xa + xb) / 2;
        let dip = saddle_y + 25 + (xa - xb).abs() / 4;
        let _ = writeln!(
            arcs,
            "  <path d=\"M {xa} {saddle_y} Q {mid} {dip} {xb} {saddle_y}\" fill=\"none\" stroke=\"black\" stroke-dasharray=\"4 3\" marker-end=\"url(#arrow)\"/>"
        );
    }

    let mut marks = String::new();
    for &(o, dx, dy) in &dots {
        let fill = match flow.orbit(o).map(|r| r.index) {
            Some(OrbitIndex::Attractive) => "black",
            _ => "white",
        };
        let _ = writeln!(
            marks,
            "  <circle cx=\"{dx}\" cy=\"{dy}\" r=\"4\" fill=\"{fill}\" stroke=\"black\"/>"
        );
    }
    for (i, &s) in saddles.iter().enumerate() {
        let sx = saddle_x(i);
        let _ = writeln!(
            marks,
            "  <circle cx=\"{sx}\" cy=\"{saddle_y}\" r=\"6\" fill=\"white\" stroke=\"black\"/>"
        );
        let _ = writeln!(
            marks,
            "  <path d=\"M {} {} L {} {} M {} {} L {} {}\" stroke=\"black\"/>",
            sx - 4,
            saddle_y - 4,
            sx + 4,
            saddle_y + 4,
            sx - 4,
            saddle_y + 4,
            sx + 4,
            saddle_y - 4
        );
        let _ = writeln!(
            marks,
            "  <text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{}</text>",
            sx,
            saddle_y - 10,
            flow.label(s)
        );
    }

    let mut body = String::new();
    let _ = writeln!(
        body,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(body, "  <title>{}</title>", flow.link_of().shape());
    body.push_str(
        "  <defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"10\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto\"><path d=\"M 0 0 L 10 5 L 0 10 z\"/></marker></defs>\n",
    );
    body.push_str(&shapes);
    body.push_str(&lines);
    body.push_str(&arcs);
    body.push_str(&marks);
    body.push_str("</svg>\n");
    Ok(DiagramDoc {
        kind: DiagramKind::Schematic,
        body,
    })
}

fn annulus(out: &mut String, cx: i64, cy: i64, outer: i64, inner: i64) {
    let _ = writeln!(
        out,
        "  <circle class=\"annulus\" cx=\"{cx}\" cy=\"{cy}\" r=\"{}\" fill=\"none\" stroke=\"#cfd8e3\" stroke-width=\"{}\"/>",
        (outer + inner) / 2,
        outer - inner
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{basic_flow, BasicOp};
    use crate::order::saddle_poset;

    #[test]
    fn basic_three_has_two_annuli_and_no_arcs() {
        let f = basic_flow(BasicOp::III).unwrap();
        let d = schematic_svg(&f).unwrap();
        assert_eq!(d.body.matches("class=\"annulus\"").count(), 2);
        assert!(!d.body.contains("stroke-dasharray"));
    }

    #[test]
    fn empty_relation_has_no_edges() {
        let f = basic_flow(BasicOp::I).unwrap();
        let d = hasse_dot(&saddle_poset(&f).unwrap());
        assert!(!d.body.contains("->"));
        let m = filtration_dot(&f).unwrap();
        assert!(m.body.contains("m1 [label=\"M1"));
        assert!(!m.body.contains("->"));
    }
}
