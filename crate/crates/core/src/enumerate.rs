//! Exhaustive generation of flows and fat handles, level by level.
//!
//! Level n holds one representative per isomorphism class of flows with n
//! saddles reachable from the generator by admissible basic replacements.
//! Children of a level are computed in parallel and merged in input order,
//! so the result does not depend on scheduling.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{EnumerateError, FlowError};
use crate::flow::{BasicHandleKind, CanonicalFlow, FatHandle, FlowModel, HandleClass, Polarity};
use crate::link::{canonicalize, CanonicalLink};

pub const DEFAULT_BOUND: usize = 6;

/// Environment variable overriding [`DEFAULT_BOUND`].
pub const BOUND_VAR: &str = "FATFLOW_MAX_SADDLES";

pub fn max_saddles() -> usize {
    std::env::var(BOUND_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BOUND)
}

fn check_bound(n: usize) -> Result<(), EnumerateError> {
    let bound = max_saddles();
    if n == 0 || n > bound {
        return Err(EnumerateError::Bound { requested: n, bound });
    }
    Ok(())
}

/// Every single-step extension of `flow`, including inadmissible attempts
/// as errors so callers can count them.
pub fn extensions(flow: &FlowModel) -> Vec<Result<FlowModel, FlowError>> {
    flow.removable()
        .into_iter()
        .flat_map(|k| BasicHandleKind::ALL.into_iter().map(move |kind| (k, kind)))
        .map(|(k, kind)| flow.replace_orbit(k, kind))
        .collect()
}

fn next_level(prev: &[FlowModel]) -> Vec<FlowModel> {
    let children: Vec<Vec<(CanonicalFlow, FlowModel)>> = prev
        .par_iter()
        .map(|f| {
            extensions(f)
                .into_iter()
                .filter_map(Result::ok)
                .map(|g| (g.canonical(), g))
                .collect()
        })
        .collect();
    let mut seen: BTreeMap<CanonicalFlow, FlowModel> = BTreeMap::new();
    for (c, g) in children.into_iter().flatten() {
        seen.entry(c).or_insert(g);
    }
    seen.into_values().collect()
}

/// Representatives for every saddle count `1..=n` (index 0 is level 1).
pub fn levels(n: usize) -> Result<Vec<Vec<FlowModel>>, EnumerateError> {
    check_bound(n)?;
    let mut out: Vec<Vec<FlowModel>> = Vec::with_capacity(n);
    let mut current = vec![FlowModel::generator()];
    for _ in 0..n {
        current = next_level(&current);
        out.push(current.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassTable {
    pub class_i: usize,
    pub class_ii: usize,
    pub class_iii: usize,
    /// Removals that fit none of the three classes; the classification
    /// theorem says this stays zero.
    pub unclassified: usize,
}

impl ClassTable {
    fn add(&mut self, c: HandleClass) {
        match c {
            HandleClass::ClassI => self.class_i += 1,
            HandleClass::ClassII => self.class_ii += 1,
            HandleClass::ClassIII => self.class_iii += 1,
        }
    }

    fn merge(&mut self, o: &ClassTable) {
        self.class_i += o.class_i;
        self.class_ii += o.class_ii;
        self.class_iii += o.class_iii;
        self.unclassified += o.unclassified;
    }

    pub fn total(&self) -> usize {
        self.class_i + self.class_ii + self.class_iii + self.unclassified
    }
}

impl std::fmt::Display for ClassTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "I={} II={} III={}", self.class_i, self.class_ii, self.class_iii)?;
        if self.unclassified > 0 {
            write!(f, " other={}", self.unclassified)?;
        }
        Ok(())
    }
}

/// Classes of every legal removal from one flow.
pub fn removal_classes(flow: &FlowModel) -> ClassTable {
    let mut t = ClassTable::default();
    for k in flow.removable() {
        match flow.remove_orbit(k) {
            Ok(h) => t.add(h.handle_class()),
            Err(_) => t.unclassified += 1,
        }
    }
    t
}

#[derive(Debug, Clone)]
pub struct CensusEntry {
    pub canonical: CanonicalFlow,
    pub flow: FlowModel,
    pub link: CanonicalLink,
    pub removals: ClassTable,
}

/// The link a census files a flow under. With `dualize`, a flow and its dual
/// are one entry, so the smaller of their two links is used; otherwise the
/// link would depend on which of the pair happened to be kept.
fn census_link(flow: &FlowModel, dualize: bool) -> CanonicalLink {
    let own = canonicalize(&flow.link_of());
    if dualize {
        own.min(canonicalize(&flow.dual().link_of()))
    } else {
        own
    }
}

#[derive(Debug, Clone)]
pub struct FlowCensus {
    pub n: usize,
    pub dualize: bool,
    /// Sorted by canonical form.
    pub flows: Vec<CensusEntry>,
    pub links: BTreeMap<CanonicalLink, usize>,
    /// Classes of all legal removals, summed over the census flows.
    pub class_table: ClassTable,
    /// Indices into `flows` of groups sharing one link, each of size ≥ 2.
    pub collisions: Vec<Vec<usize>>,
}

impl FlowCensus {
    fn from_level(n: usize, dualize: bool, level: &[FlowModel]) -> FlowCensus {
        let mut by_form: BTreeMap<CanonicalFlow, FlowModel> = BTreeMap::new();
        for f in level {
            let key = if dualize {
                f.canonical_dual_quotient()
            } else {
                f.canonical()
            };
            by_form.entry(key).or_insert_with(|| f.clone());
        }
        let flows: Vec<CensusEntry> = by_form
            .into_par_iter()
            .map(|(canonical, flow)| CensusEntry {
                link: census_link(&flow, dualize),
                removals: removal_classes(&flow),
                canonical,
                flow,
            })
            .collect();
        let mut links: BTreeMap<CanonicalLink, usize> = BTreeMap::new();
        let mut groups: BTreeMap<&CanonicalLink, Vec<usize>> = BTreeMap::new();
        let mut class_table = ClassTable::default();
        for (i, e) in flows.iter().enumerate() {
            *links.entry(e.link.clone()).or_default() += 1;
            groups.entry(&e.link).or_default().push(i);
            class_table.merge(&e.removals);
        }
        let collisions = groups.into_values().filter(|g| g.len() > 1).collect();
        FlowCensus {
            n,
            dualize,
            flows,
            links,
            class_table,
            collisions,
        }
    }

    pub fn len(&self) -> usize {
        self.flows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flows.is_empty()
    }

    /// Line-delimited export: one tab-separated record per flow
    /// (`link`, removal classes, canonical form), then a summary line.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.flows {
            let _ = writeln!(out, "{}\t{}\t{}", e.link, e.removals, e.canonical);
        }
        let _ = writeln!(
            out,
            "# n={} dualize={} flows={} links={} collisions={} handles: {}",
            self.n,
            self.dualize,
            self.flows.len(),
            self.links.len(),
            self.collisions.len(),
            self.class_table
        );
        out
    }
}

pub fn enumerate_flows(n: usize, dualize: bool) -> Result<FlowCensus, EnumerateError> {
    let lv = levels(n)?;
    Ok(FlowCensus::from_level(n, dualize, &lv[n - 1]))
}

/// Censuses for every saddle count `1..=n`, sharing one generation pass.
pub fn enumerate_upto(n: usize, dualize: bool) -> Result<Vec<FlowCensus>, EnumerateError> {
    let lv = levels(n)?;
    Ok(lv
        .iter()
        .enumerate()
        .map(|(i, l)| FlowCensus::from_level(i + 1, dualize, l))
        .collect())
}

#[derive(Debug, Clone)]
pub struct HandleEntry {
    pub canonical: CanonicalFlow,
    pub handle: FatHandle,
}

/// All fat handles of polarity `p` cut from flows with `n` saddles, one per
/// isomorphism class.
pub fn enumerate_fat_handles(n: usize, p: Polarity) -> Result<Vec<HandleEntry>, EnumerateError> {
    let census = enumerate_flows(n, false)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in &census.flows {
        for k in e.flow.removable() {
            let h = e.flow.remove_orbit(k)?;
            if h.polarity() != p {
                continue;
            }
            let c = h.canonical();
            if seen.insert(c.form.clone()) {
                out.push(HandleEntry {
                    canonical: c,
                    handle: h,
                });
            }
        }
    }
    out.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    Ok(out)
}

/// Groups of non-isomorphic flows with `n` saddles that share a link.
pub fn link_collisions(n: usize) -> Result<Vec<Vec<CensusEntry>>, EnumerateError> {
    let census = enumerate_flows(n, false)?;
    Ok(census
        .collisions
        .iter()
        .map(|g| g.iter().map(|&i| census.flows[i].clone()).collect())
        .collect())
}
