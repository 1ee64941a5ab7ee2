//! Relabeling-invariant normal form of a flow.
//!
//! Given an order on the saddles, a flow serializes to a string in which
//! every other object (orbits, regions, pairs) is described through saddle
//! ranks and sorted. The canonical form is the least such string over all
//! saddle orders compatible with a refined saddle coloring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};

use super::{FlowModel, RegionId};
use crate::link::{OrbitId, OrbitIndex};

/// Canonical form plus the saddle and region order that realizes it.
#[derive(Debug, Clone)]
pub struct CanonicalFlow {
    pub form: String,
    pub saddle_order: Vec<OrbitId>,
    pub region_order: Vec<RegionId>,
}

impl PartialEq for CanonicalFlow {
    fn eq(&self, other: &Self) -> bool {
        self.form == other.form
    }
}

impl Eq for CanonicalFlow {}

impl PartialOrd for CanonicalFlow {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalFlow {
    fn cmp(&self, other: &Self) -> Ordering {
        self.form.cmp(&other.form)
    }
}

impl Hash for CanonicalFlow {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.form.hash(state);
    }
}

impl std::fmt::Display for CanonicalFlow {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.form)
    }
}

struct View<'a> {
    flow: &'a FlowModel,
    mark: Option<(RegionId, OrbitIndex)>,
    saddles: Vec<OrbitId>,
}

impl View<'_> {
    fn paired(&self, o: OrbitId) -> bool {
        self.flow.partner(o).is_some()
    }

    /// Region contents with saddles erased.
    fn region_shape(&self, r: RegionId) -> String {
        let region = &self.flow.regions[&r];
        let mut res: Vec<(u8, bool)> = region
            .residents
            .iter()
            .map(|&o| (self.flow.orbits[&o].index.value(), self.paired(o)))
            .collect();
        res.sort_unstable();
        let marked = self.mark.map(|(m, _)| m == r).unwrap_or(false);
        format!("{marked}/{}/{res:?}", region.adjacent_saddles.len())
    }

    /// Saddle colors by iterated refinement; equal colors are the only
    /// saddles a canonical order may still permute.
    fn colors(&self) -> HashMap<OrbitId, usize> {
        let f = self.flow;
        let mut sigs: HashMap<OrbitId, String> = HashMap::new();
        for &s in &self.saddles {
            let out = f.heteroclinic_edges.iter().filter(|e| e.0 == s).count();
            let inn = f.heteroclinic_edges.iter().filter(|e| e.1 == s).count();
            let mut shapes: Vec<String> = f
                .regions
                .values()
                .filter(|r| r.adjacent_saddles.contains(&s))
                .map(|r| self.region_shape(r.id))
                .collect();
            shapes.sort();
            let mut fronted: Vec<(u8, bool)> = f
                .orbits
                .values()
                .filter(|o| o.frontier == Some(s))
                .map(|o| (o.index.value(), self.paired(o.id)))
                .collect();
            fronted.sort_unstable();
            sigs.insert(s, format!("{out}/{inn}/{shapes:?}/{fronted:?}"));
        }
        let mut colors = rank(&sigs);
        let mut classes = distinct(&colors);
        loop {
            let mut next: HashMap<OrbitId, String> = HashMap::new();
            for &s in &self.saddles {
                let c = |x: &OrbitId| colors[x];
                let mut outs: Vec<usize> = f
                    .heteroclinic_edges
                    .iter()
                    .filter(|e| e.0 == s)
                    .map(|e| c(&e.1))
                    .collect();
                let mut ins: Vec<usize> = f
                    .heteroclinic_edges
                    .iter()
                    .filter(|e| e.1 == s)
                    .map(|e| c(&e.0))
                    .collect();
                outs.sort_unstable();
                ins.sort_unstable();
                let mut regions: Vec<(String, Vec<usize>)> = f
                    .regions
                    .values()
                    .filter(|r| r.adjacent_saddles.contains(&s))
                    .map(|r| {
                        let mut adj: Vec<usize> = r.adjacent_saddles.iter().map(c).collect();
                        adj.sort_unstable();
                        let mut fr: Vec<(u8, bool, Option<usize>)> = r
                            .residents
                            .iter()
                            .map(|o| {
                                let orb = &f.orbits[o];
                                (orb.index.value(), self.paired(*o), orb.frontier.map(|x| c(&x)))
                            })
                            .collect();
                        fr.sort_unstable();
                        (format!("{}{fr:?}", self.region_shape(r.id)), adj)
                    })
                    .collect();
                regions.sort();
                let mut fronted: Vec<(u8, bool, Vec<usize>)> = f
                    .orbits
                    .values()
                    .filter(|o| o.frontier == Some(s))
                    .map(|o| {
                        let r = &f.regions[&o.region.unwrap()];
                        let mut adj: Vec<usize> = r.adjacent_saddles.iter().map(c).collect();
                        adj.sort_unstable();
                        (o.index.value(), self.paired(o.id), adj)
                    })
                    .collect();
                fronted.sort();
                next.insert(s, format!("{}/{outs:?}/{ins:?}/{regions:?}/{fronted:?}", colors[&s]));
            }
            let refined = rank(&next);
            let n = distinct(&refined);
            colors = refined;
            if n == classes {
                break;
            }
            classes = n;
        }
        colors
    }

    fn serialize(&self, rank_of: &HashMap<OrbitId, usize>) -> (String, Vec<RegionId>) {
        let f = self.flow;
        let desc = |o: OrbitId| {
            let orb = &f.orbits[&o];
            match orb.frontier {
                Some(s) => format!("{}@{}", orb.index, rank_of[&s]),
                None => format!("{}@_", orb.index),
            }
        };
        let mut regions: Vec<(String, RegionId)> = f
            .regions
            .values()
            .map(|r| {
                let mut adj: Vec<usize> = r.adjacent_saddles.iter().map(|s| rank_of[s]).collect();
                adj.sort_unstable();
                let mut items: Vec<String> = Vec::new();
                for &o in &r.residents {
                    match f.partner(o) {
                        None => items.push(desc(o)),
                        Some(p) if o < p => {
                            let (a, b) = (desc(o), desc(p));
                            let (a, b) = if a <= b { (a, b) } else { (b, a) };
                            items.push(format!("h({a},{b})"));
                        }
                        Some(_) => {}
                    }
                }
                items.sort();
                let adj: Vec<String> = adj.iter().map(|x| x.to_string()).collect();
                let mark = match self.mark {
                    Some((m, _)) if m == r.id => "*",
                    _ => "",
                };
                (format!("[{}]{{{}}}{}", adj.join(","), items.join(","), mark), r.id)
            })
            .collect();
        regions.sort();
        let mut edges: Vec<(usize, usize)> = f
            .heteroclinic_edges
            .iter()
            .map(|(a, b)| (rank_of[a], rank_of[b]))
            .collect();
        edges.sort_unstable();
        let edges: Vec<String> = edges.iter().map(|(a, b)| format!("{a}>{b}")).collect();
        let prefix = match self.mark {
            Some((_, i)) => format!("n{}-{}:", self.saddles.len(), i),
            None => format!("n{}:", self.saddles.len()),
        };
        let body: Vec<&str> = regions.iter().map(|(s, _)| s.as_str()).collect();
        let form = format!("{prefix}{};{}", body.join("|"), edges.join(","));
        (form, regions.into_iter().map(|(_, r)| r).collect())
    }
}

fn rank(sigs: &HashMap<OrbitId, String>) -> HashMap<OrbitId, usize> {
    let mut uniq: Vec<&String> = sigs.values().collect();
    uniq.sort();
    uniq.dedup();
    sigs.iter()
        .map(|(k, v)| (*k, uniq.binary_search(&v).unwrap()))
        .collect()
}

fn distinct(colors: &HashMap<OrbitId, usize>) -> usize {
    let mut v: Vec<usize> = colors.values().copied().collect();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Calls `visit` with every arrangement that permutes items only within groups.
fn for_each_arrangement(groups: &[Vec<OrbitId>], visit: &mut dyn FnMut(&[OrbitId])) {
    fn rec(groups: &[Vec<OrbitId>], prefix: &mut Vec<OrbitId>, visit: &mut dyn FnMut(&[OrbitId])) {
        match groups.split_first() {
            None => visit(prefix),
            Some((first, rest)) => {
                let mut g = first.clone();
                permute(&mut g, 0, &mut |perm| {
                    let len = prefix.len();
                    prefix.extend_from_slice(perm);
                    rec(rest, prefix, visit);
                    prefix.truncate(len);
                });
            }
        }
    }
    rec(groups, &mut Vec::new(), visit);
}

fn permute(items: &mut Vec<OrbitId>, k: usize, visit: &mut dyn FnMut(&[OrbitId])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

pub(crate) fn canonical_form(flow: &FlowModel, mark: Option<(RegionId, OrbitIndex)>) -> CanonicalFlow {
    let view = View {
        flow,
        mark,
        saddles: flow.saddles(),
    };
    let colors = view.colors();
    let mut by_color: BTreeMap<usize, Vec<OrbitId>> = BTreeMap::new();
    for &s in &view.saddles {
        by_color.entry(colors[&s]).or_default().push(s);
    }
    let groups: Vec<Vec<OrbitId>> = by_color.into_values().collect();
    let mut best: Option<CanonicalFlow> = None;
    for_each_arrangement(&groups, &mut |order| {
        let rank_of: HashMap<OrbitId, usize> = order.iter().enumerate().map(|(i, s)| (*s, i + 1)).collect();
        let (form, region_order) = view.serialize(&rank_of);
        if best.as_ref().is_none_or(|b| form < b.form) {
            best = Some(CanonicalFlow {
                form,
                saddle_order: order.to_vec(),
                region_order,
            });
        }
    });
    best.expect("at least one arrangement")
}
