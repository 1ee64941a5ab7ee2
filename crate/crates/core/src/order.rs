//! Orders induced by heteroclinic trajectories.
//!
//! An edge `(u, v)` of a flow means the unstable manifold of `u` meets the
//! stable manifold of `v`, so `u < v`. The poset is the transitive closure.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::OrderError;
use crate::flow::{BasicHandleKind, FlowModel};
use crate::link::{OrbitId, OrbitIndex};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaddlePoset {
    elements: Vec<OrbitId>,
    labels: BTreeMap<OrbitId, String>,
    relation: BTreeSet<(OrbitId, OrbitId)>,
    covers: BTreeSet<(OrbitId, OrbitId)>,
}

impl SaddlePoset {
    fn build(
        elements: Vec<OrbitId>,
        labels: BTreeMap<OrbitId, String>,
        edges: &BTreeSet<(OrbitId, OrbitId)>,
    ) -> Result<SaddlePoset, OrderError> {
        let mut succ: BTreeMap<OrbitId, Vec<OrbitId>> = BTreeMap::new();
        for &(a, b) in edges {
            succ.entry(a).or_default().push(b);
        }
        let mut relation = BTreeSet::new();
        for &start in &elements {
            let mut stack: Vec<OrbitId> = succ.get(&start).cloned().unwrap_or_default();
            let mut seen = BTreeSet::new();
            while let Some(x) = stack.pop() {
                if x == start {
                    return Err(OrderError::Cycle(start));
                }
                if seen.insert(x) {
                    relation.insert((start, x));
                    stack.extend(succ.get(&x).into_iter().flatten().copied());
                }
            }
        }
        let covers = relation
            .iter()
            .copied()
            .filter(|&(a, b)| {
                !elements
                    .iter()
                    .any(|&c| relation.contains(&(a, c)) && relation.contains(&(c, b)))
            })
            .collect();
        Ok(SaddlePoset {
            elements,
            labels,
            relation,
            covers,
        })
    }

    pub fn elements(&self) -> &[OrbitId] {
        &self.elements
    }

    pub fn label(&self, x: OrbitId) -> &str {
        self.labels.get(&x).map(String::as_str).unwrap_or("?")
    }

    /// Strict order pairs `(a, b)` meaning `a < b`.
    pub fn relation(&self) -> &BTreeSet<(OrbitId, OrbitId)> {
        &self.relation
    }

    pub fn covers(&self) -> &BTreeSet<(OrbitId, OrbitId)> {
        &self.covers
    }

    pub fn less(&self, a: OrbitId, b: OrbitId) -> bool {
        self.relation.contains(&(a, b))
    }

    pub fn comparable(&self, a: OrbitId, b: OrbitId) -> bool {
        a == b || self.less(a, b) || self.less(b, a)
    }

    pub fn is_total(&self) -> bool {
        let n = self.elements.len();
        self.relation.len() == n * n.saturating_sub(1) / 2
    }

    /// Elements sorted so that `a < b` implies `a` comes first; ties keep
    /// element order.
    pub fn linear_extension(&self) -> Vec<OrbitId> {
        let mut out = self.elements.clone();
        out.sort_by_key(|&x| self.relation.iter().filter(|&&(_, b)| b == x).count());
        out
    }

    /// Maximal chains of the cover graph read as `a<b<c` strings, one per
    /// connected component that has at least one cover.
    pub fn chains_text(&self) -> Vec<String> {
        let mut out = Vec::new();
        let minimal: Vec<OrbitId> = self
            .linear_extension()
            .into_iter()
            .filter(|&x| !self.covers.iter().any(|&(_, b)| b == x))
            .collect();
        for m in minimal {
            let mut stack = vec![vec![m]];
            while let Some(path) = stack.pop() {
                let last = *path.last().unwrap();
                let next: Vec<OrbitId> = self.covers.iter().filter(|c| c.0 == last).map(|c| c.1).collect();
                if next.is_empty() {
                    if path.len() > 1 {
                        let names: Vec<&str> = path.iter().map(|&x| self.label(x)).collect();
                        out.push(names.join("<"));
                    }
                    continue;
                }
                for n in next.into_iter().rev() {
                    let mut p = path.clone();
                    p.push(n);
                    stack.push(p);
                }
            }
        }
        out
    }

    pub fn to_document(&self) -> PosetDocument {
        PosetDocument {
            schema: "fatflow.poset/1".into(),
            elements: self
                .elements
                .iter()
                .map(|&x| PosetElement {
                    id: x.0,
                    label: self.label(x).to_string(),
                })
                .collect(),
            covers: self.covers.iter().map(|&(a, b)| [a.0, b.0]).collect(),
            total: self.is_total(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDocument {
    pub schema: String,
    pub elements: Vec<PosetElement>,
    pub covers: Vec<[u32; 2]>,
    pub total: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetElement {
    pub id: u32,
    pub label: String,
}

pub fn saddle_poset(flow: &FlowModel) -> Result<SaddlePoset, OrderError> {
    let saddles = flow.saddles();
    let labels = saddles.iter().map(|&s| (s, flow.label(s))).collect();
    SaddlePoset::build(saddles, labels, flow.heteroclinic_edges())
}

/// True when every construction step attached a `du` handle.
pub fn is_f3(flow: &FlowModel) -> bool {
    let log = flow.construction_log();
    !log.is_empty() && log.iter().all(|s| s.attached == BasicHandleKind::Du)
}

/// The poset of an operation-III flow with its repeller `d_r` and attractor
/// `d_a` added below and above their frontier saddles.
pub fn f3_poset(flow: &FlowModel) -> Result<SaddlePoset, OrderError> {
    if !is_f3(flow) {
        return Err(OrderError::NotF3);
    }
    let only = |i: OrbitIndex| {
        let mut it = flow.orbits().filter(move |o| o.index == i);
        match (it.next(), it.next()) {
            (Some(o), None) => Ok(o),
            _ => Err(OrderError::NotF3),
        }
    };
    let dr = only(OrbitIndex::Repulsive)?;
    let da = only(OrbitIndex::Attractive)?;
    let mut edges = flow.heteroclinic_edges().clone();
    edges.insert((dr.id, dr.frontier.ok_or(OrderError::NotF3)?));
    edges.insert((da.frontier.ok_or(OrderError::NotF3)?, da.id));
    let mut elements = vec![dr.id];
    elements.extend(flow.saddles());
    elements.push(da.id);
    let mut labels: BTreeMap<OrbitId, String> = flow.saddles().into_iter().map(|s| (s, flow.label(s))).collect();
    labels.insert(dr.id, "d_r".into());
    labels.insert(da.id, "d_a".into());
    SaddlePoset::build(elements, labels, &edges)
}

/// The chain `d_r < u.. < d_a` of an operation-III flow, bottom first.
pub fn f3_chain(flow: &FlowModel) -> Result<Vec<OrbitId>, OrderError> {
    Ok(f3_poset(flow)?.linear_extension())
}

/// Rebuild the flow with steps `i` and `j` of its log exchanged.
pub fn swapped(flow: &FlowModel, i: usize, j: usize) -> Option<FlowModel> {
    let mut steps: Vec<_> = flow.construction_log().iter().collect();
    steps.swap(i, j);
    FlowModel::replay(steps).ok()
}

/// What exchanging two construction steps does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reordering {
    /// A moved step needs an orbit that does not exist yet, or its gluing is
    /// no longer admissible.
    Fails,
    /// The rebuilt flow is not isomorphic to the original.
    Changes,
    /// Same flow, but some step now glues a different handle class or
    /// produces a different heteroclinic edge: another filtration.
    Refilters,
    Commutes,
}

pub fn reorder(flow: &FlowModel, i: usize, j: usize) -> Reordering {
    let log = flow.construction_log();
    let mut order: Vec<usize> = (0..log.len()).collect();
    order.swap(i, j);
    let Ok((g, ids)) = FlowModel::replay_with_ids(order.iter().map(|&p| &log[p])) else {
        return Reordering::Fails;
    };
    if g.canonical() != flow.canonical() {
        return Reordering::Changes;
    }
    let map = |o: OrbitId| ids.get(&o).copied().unwrap_or(o);
    let same_record = order.iter().zip(g.construction_log()).all(|(&p, new)| {
        let old = &log[p];
        old.derived_handle_class == new.derived_handle_class
            && old.attached_class == new.attached_class
            && old.produced_heteroclinic.map(|(a, b)| (map(a), map(b))) == new.produced_heteroclinic
    });
    if same_record {
        Reordering::Commutes
    } else {
        Reordering::Refilters
    }
}

/// Pairs of log positions (0-based, `i < j`) whose saddles are incomparable
/// and whose exchange rebuilds the same flow through the same kinds of
/// gluings.
pub fn commuting_steps(flow: &FlowModel) -> Result<BTreeSet<(usize, usize)>, OrderError> {
    let poset = saddle_poset(flow)?;
    let log = flow.construction_log();
    let mut out = BTreeSet::new();
    for i in 0..log.len() {
        for j in i + 1..log.len() {
            if !poset.comparable(log[i].new_saddle, log[j].new_saddle) && reorder(flow, i, j) == Reordering::Commutes {
                out.insert((i, j));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::{basic_flow, BasicOp};

    fn du_chain(n: usize) -> FlowModel {
        let mut f = basic_flow(BasicOp::III).unwrap();
        for _ in 1..n {
            let k = f.orbits().find(|o| o.index == OrbitIndex::Attractive).unwrap().id;
            f = f.replace_orbit(k, BasicHandleKind::Du).unwrap();
        }
        f
    }

    #[test]
    fn generator_replacements_have_no_order() {
        // the second step replaces the generator's other component, so it
        // does not depend on the first
        let f = basic_flow(BasicOp::I).unwrap();
        let g = f
            .replace_orbit(crate::flow::GENERATOR_REPULSIVE, BasicHandleKind::Hdu)
            .unwrap();
        let p = saddle_poset(&g).unwrap();
        assert!(p.relation().is_empty());
        assert!(!p.is_total());
        assert_eq!(commuting_steps(&g).unwrap().len(), 1);
    }

    #[test]
    fn f3_chain_runs_between_endpoints() {
        let f = du_chain(3);
        let p = f3_poset(&f).unwrap();
        assert!(p.is_total());
        let labels: Vec<&str> = f3_chain(&f).unwrap().into_iter().map(|x| p.label(x)).collect();
        assert_eq!(labels, ["d_r", "u1", "u2", "u3", "d_a"]);
        assert_eq!(p.covers().len(), 4);
        assert!(commuting_steps(&f).unwrap().is_empty());
    }

    #[test]
    fn non_f3_is_rejected() {
        assert_eq!(f3_chain(&basic_flow(BasicOp::I).unwrap()), Err(OrderError::NotF3));
    }

    #[test]
    fn singleton_is_total() {
        assert!(saddle_poset(&basic_flow(BasicOp::III).unwrap()).unwrap().is_total());
    }
}
