//! Constructive model of type-A flows on S³.
//!
//! A flow is a set of indexed orbits together with the canonical regions in
//! which fat handles get identified. Every non-saddle orbit lives in exactly
//! one region and remembers its frontier saddle, the saddle whose invariant
//! manifold bounds it on the identification side. Flows grow one saddle at a
//! time: an orbit is removed (giving a fat handle) and the vacated region is
//! glued to a basic fat handle of the opposite polarity. The list of those
//! gluings is the construction log, i.e. the round handle filtration.

mod canon;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use canon::CanonicalFlow;

use crate::error::{FlowError, LinkError};
use crate::link::{IndexedLink, OrbitId, OrbitIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RegionId(pub u32);

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarity {
    Repulsive,
    Attractive,
}

impl Polarity {
    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::Repulsive => Polarity::Attractive,
            Polarity::Attractive => Polarity::Repulsive,
        }
    }

    /// Index of the orbit filling a thick torus of this polarity.
    pub fn core_index(self) -> OrbitIndex {
        match self {
            Polarity::Repulsive => OrbitIndex::Repulsive,
            Polarity::Attractive => OrbitIndex::Attractive,
        }
    }

    /// Polarity of the fat handle left behind when an orbit of index `i` is removed.
    pub fn after_removing(i: OrbitIndex) -> Option<Polarity> {
        match i {
            OrbitIndex::Attractive => Some(Polarity::Repulsive),
            OrbitIndex::Repulsive => Some(Polarity::Attractive),
            OrbitIndex::Saddle => None,
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Repulsive => "repulsive",
            Polarity::Attractive => "attractive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum HandleClass {
    ClassI,
    ClassII,
    ClassIII,
}

impl HandleClass {
    pub const ALL: [HandleClass; 3] = [HandleClass::ClassI, HandleClass::ClassII, HandleClass::ClassIII];

    /// Solid tori have no orbit in their core.
    pub fn is_solid(self) -> bool {
        self != HandleClass::ClassI
    }

    pub fn roman(self) -> &'static str {
        match self {
            HandleClass::ClassI => "I",
            HandleClass::ClassII => "II",
            HandleClass::ClassIII => "III",
        }
    }
}

impl fmt::Display for HandleClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.roman())
    }
}

/// The four fat handles with a single saddle.
///
/// `Ddu` carries the index of its separated orbit; the core index is fixed by
/// the polarity it is attached with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasicHandleKind {
    Hdu,
    Ddu { d: OrbitIndex },
    Hu,
    Du,
}

impl BasicHandleKind {
    pub const ALL: [BasicHandleKind; 5] = [
        BasicHandleKind::Hdu,
        BasicHandleKind::Ddu {
            d: OrbitIndex::Repulsive,
        },
        BasicHandleKind::Ddu {
            d: OrbitIndex::Attractive,
        },
        BasicHandleKind::Hu,
        BasicHandleKind::Du,
    ];

    pub fn class(self) -> HandleClass {
        match self {
            BasicHandleKind::Hdu | BasicHandleKind::Ddu { .. } => HandleClass::ClassI,
            BasicHandleKind::Hu => HandleClass::ClassII,
            BasicHandleKind::Du => HandleClass::ClassIII,
        }
    }

    pub fn is_thick(self) -> bool {
        self.class() == HandleClass::ClassI
    }

    pub fn name(self) -> &'static str {
        match self {
            BasicHandleKind::Hdu => "hdu",
            BasicHandleKind::Ddu { .. } => "ddu",
            BasicHandleKind::Hu => "hu",
            BasicHandleKind::Du => "du",
        }
    }

    pub fn reversed(self) -> BasicHandleKind {
        match self {
            BasicHandleKind::Ddu { d } => BasicHandleKind::Ddu { d: d.reversed() },
            k => k,
        }
    }
}

impl fmt::Display for BasicHandleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasicHandleKind::Ddu { d } => write!(f, "ddu(d{d})"),
            k => f.write_str(k.name()),
        }
    }
}

/// The operation of a basic flow on two Hopf links.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasicOp {
    I,
    /// Carries the index of the component removed from the second Hopf link.
    II(OrbitIndex),
    III,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orbit {
    pub id: OrbitId,
    pub index: OrbitIndex,
    /// Saddle bounding this orbit on the identification side (non-saddles only).
    pub frontier: Option<OrbitId>,
    /// Canonical region holding this orbit (non-saddles only).
    pub region: Option<RegionId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: RegionId,
    pub residents: BTreeSet<OrbitId>,
    pub adjacent_saddles: BTreeSet<OrbitId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionStep {
    pub replaced_orbit: OrbitId,
    pub attached: BasicHandleKind,
    pub new_saddle: OrbitId,
    /// Orbits brought in by the attached handle, saddle first.
    pub created: Vec<OrbitId>,
    pub derived_handle_class: HandleClass,
    pub attached_class: HandleClass,
    pub produced_heteroclinic: Option<(OrbitId, OrbitId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowModel {
    orbits: BTreeMap<OrbitId, Orbit>,
    hopf_pairs: BTreeSet<(OrbitId, OrbitId)>,
    regions: BTreeMap<RegionId, Region>,
    log: Vec<ConstructionStep>,
    heteroclinic_edges: BTreeSet<(OrbitId, OrbitId)>,
    next_orbit: u32,
    next_region: u32,
}

/// Ids of the generator's repulsive and attractive components.
pub const GENERATOR_REPULSIVE: OrbitId = OrbitId(0);
pub const GENERATOR_ATTRACTIVE: OrbitId = OrbitId(1);

impl FlowModel {
    /// The Hopf link h with indices 0 and 2: no saddles, one region.
    pub fn generator() -> FlowModel {
        let mut f = FlowModel {
            orbits: BTreeMap::new(),
            hopf_pairs: BTreeSet::new(),
            regions: BTreeMap::new(),
            log: Vec::new(),
            heteroclinic_edges: BTreeSet::new(),
            next_orbit: 0,
            next_region: 0,
        };
        let r = f.new_region();
        let a = f.alloc(OrbitIndex::Repulsive, None, Some(r));
        let b = f.alloc(OrbitIndex::Attractive, None, Some(r));
        f.pair(a, b);
        f
    }

    pub fn orbit(&self, id: OrbitId) -> Option<&Orbit> {
        self.orbits.get(&id)
    }

    pub fn orbits(&self) -> impl Iterator<Item = &Orbit> {
        self.orbits.values()
    }

    pub fn saddles(&self) -> Vec<OrbitId> {
        self.orbits
            .values()
            .filter(|o| o.index.is_saddle())
            .map(|o| o.id)
            .collect()
    }

    pub fn saddle_count(&self) -> usize {
        self.orbits.values().filter(|o| o.index.is_saddle()).count()
    }

    /// Non-saddle orbits, in id order.
    pub fn removable(&self) -> Vec<OrbitId> {
        self.orbits
            .values()
            .filter(|o| !o.index.is_saddle())
            .map(|o| o.id)
            .collect()
    }

    pub fn hopf_pairs(&self) -> &BTreeSet<(OrbitId, OrbitId)> {
        &self.hopf_pairs
    }

    pub fn partner(&self, k: OrbitId) -> Option<OrbitId> {
        self.hopf_pairs.iter().find_map(|&(a, b)| {
            if a == k {
                Some(b)
            } else if b == k {
                Some(a)
            } else {
                None
            }
        })
    }

    pub fn regions(&self) -> impl Iterator<Item = &Region> {
        self.regions.values()
    }

    pub fn region(&self, id: RegionId) -> Option<&Region> {
        self.regions.get(&id)
    }

    pub fn construction_log(&self) -> &[ConstructionStep] {
        &self.log
    }

    pub fn heteroclinic_edges(&self) -> &BTreeSet<(OrbitId, OrbitId)> {
        &self.heteroclinic_edges
    }

    /// `u1`, `u2`, ... in creation order; other orbits print as their id.
    pub fn label(&self, id: OrbitId) -> String {
        match self.orbits.get(&id) {
            Some(o) if o.index.is_saddle() => {
                let n = self
                    .orbits
                    .values()
                    .filter(|x| x.index.is_saddle() && x.id <= id)
                    .count();
                format!("u{n}")
            }
            Some(o) => format!("{}:d{}", id, o.index),
            None => id.to_string(),
        }
    }

    /// Forget the regions and keep the indexed link. Orbit ids are preserved.
    pub fn link_of(&self) -> IndexedLink {
        let hopf = self
            .hopf_pairs
            .iter()
            .map(|&(a, b)| [(a, self.orbits[&a].index), (b, self.orbits[&b].index)])
            .collect();
        let separated = self
            .orbits
            .values()
            .filter(|o| self.partner(o.id).is_none())
            .map(|o| (o.id, o.index))
            .collect();
        IndexedLink::from_parts(hopf, separated)
    }

    pub fn canonical(&self) -> CanonicalFlow {
        canon::canonical_form(self, None)
    }

    /// Canonical form up to the global reversal 0 <-> 2.
    pub fn canonical_dual_quotient(&self) -> CanonicalFlow {
        let a = self.canonical();
        let b = self.dual().canonical();
        a.min(b)
    }

    /// Time reversal: indices 0 and 2 swap and heteroclinic edges flip.
    pub fn dual(&self) -> FlowModel {
        let mut f = self.clone();
        for o in f.orbits.values_mut() {
            o.index = o.index.reversed();
        }
        f.heteroclinic_edges = self.heteroclinic_edges.iter().map(|&(a, b)| (b, a)).collect();
        for s in f.log.iter_mut() {
            s.attached = s.attached.reversed();
            s.produced_heteroclinic = s.produced_heteroclinic.map(|(a, b)| (b, a));
        }
        f
    }

    fn new_region(&mut self) -> RegionId {
        let id = RegionId(self.next_region);
        self.next_region += 1;
        self.regions.insert(
            id,
            Region {
                id,
                residents: BTreeSet::new(),
                adjacent_saddles: BTreeSet::new(),
            },
        );
        id
    }

    fn alloc(&mut self, index: OrbitIndex, frontier: Option<OrbitId>, region: Option<RegionId>) -> OrbitId {
        let id = OrbitId(self.next_orbit);
        self.next_orbit += 1;
        self.orbits.insert(
            id,
            Orbit {
                id,
                index,
                frontier,
                region,
            },
        );
        if let Some(r) = region {
            self.regions.get_mut(&r).expect("region").residents.insert(id);
        }
        id
    }

    fn pair(&mut self, a: OrbitId, b: OrbitId) {
        self.hopf_pairs.insert((a.min(b), a.max(b)));
    }

    /// Take out one attractive or repulsive orbit, leaving a fat handle.
    ///
    /// The class follows from what the orbit leaves behind in its region: a
    /// Hopf partner in the core gives [I], an empty region [II], and a single
    /// separated orbit [III].
    pub fn remove_orbit(&self, k: OrbitId) -> Result<FatHandle, FlowError> {
        let orbit = self.orbits.get(&k).ok_or(LinkError::UnknownOrbit(k))?;
        let polarity = Polarity::after_removing(orbit.index).ok_or(LinkError::SaddleRemoval(k))?;
        let vacated = orbit.region.expect("non-saddle orbits live in a region");
        let mut content = self.clone();
        let (handle_class, core, resident) = match self.partner(k) {
            Some(p) => {
                content.hopf_pairs.remove(&(k.min(p), k.max(p)));
                (HandleClass::ClassI, Some(p), None)
            }
            None => {
                let left: Vec<OrbitId> = self.regions[&vacated]
                    .residents
                    .iter()
                    .copied()
                    .filter(|&o| o != k)
                    .collect();
                match left.as_slice() {
                    [] => (HandleClass::ClassII, None, None),
                    [d] if self.partner(*d).is_none() => (HandleClass::ClassIII, None, Some(*d)),
                    _ => return Err(FlowError::Unclassifiable(k)),
                }
            }
        };
        content.orbits.remove(&k);
        content.regions.get_mut(&vacated).unwrap().residents.remove(&k);
        let last_of_index = !content.orbits.values().any(|o| o.index == orbit.index);
        Ok(FatHandle {
            polarity,
            handle_class,
            content,
            removed: k,
            removed_index: orbit.index,
            vacated,
            core,
            resident,
            frontier_saddle: orbit.frontier,
            last_of_index,
        })
    }

    /// Replace orbit `k` by a basic fat handle of kind `kind`.
    pub fn replace_orbit(&self, k: OrbitId, kind: BasicHandleKind) -> Result<FlowModel, FlowError> {
        let host = self.remove_orbit(k)?;
        glue(&host, kind)
    }

    /// Rebuild a flow from the generator by replaying construction steps.
    ///
    /// Orbit ids in `steps` are translated as the replay allocates fresh ones,
    /// so steps taken from one log can be replayed in another order.
    pub fn replay<'a, I>(steps: I) -> Result<FlowModel, FlowError>
    where
        I: IntoIterator<Item = &'a ConstructionStep>,
    {
        FlowModel::replay_with_ids(steps).map(|(f, _)| f)
    }

    /// Like [`FlowModel::replay`], also returning where every orbit id of
    /// the input steps ended up.
    pub fn replay_with_ids<'a, I>(steps: I) -> Result<(FlowModel, HashMap<OrbitId, OrbitId>), FlowError>
    where
        I: IntoIterator<Item = &'a ConstructionStep>,
    {
        let mut flow = FlowModel::generator();
        let mut ids: HashMap<OrbitId, OrbitId> = flow.orbits.keys().map(|&k| (k, k)).collect();
        for step in steps {
            let k = *ids
                .get(&step.replaced_orbit)
                .ok_or(FlowError::Dependency(step.replaced_orbit))?;
            if !flow.orbits.contains_key(&k) {
                return Err(FlowError::Dependency(step.replaced_orbit));
            }
            flow = flow.replace_orbit(k, step.attached)?;
            let fresh = &flow.log.last().expect("step just appended").created;
            for (old, new) in step.created.iter().zip(fresh) {
                ids.insert(*old, *new);
            }
        }
        Ok((flow, ids))
    }
}

/// One-saddle flows from a single operation on two Hopf links.
pub fn basic_flow(op: BasicOp) -> Result<FlowModel, FlowError> {
    let kind = match op {
        BasicOp::I => BasicHandleKind::Hdu,
        BasicOp::II(i) if !i.is_saddle() => BasicHandleKind::Ddu { d: i.reversed() },
        BasicOp::II(i) => {
            return Err(FlowError::Selector(format!(
                "operation II removes an index 0 or 2 component, not {i}"
            )))
        }
        BasicOp::III => BasicHandleKind::Du,
    };
    FlowModel::generator().replace_orbit(GENERATOR_ATTRACTIVE, kind)
}

/// A flow with one attractive or repulsive orbit taken out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FatHandle {
    polarity: Polarity,
    handle_class: HandleClass,
    content: FlowModel,
    removed: OrbitId,
    removed_index: OrbitIndex,
    vacated: RegionId,
    core: Option<OrbitId>,
    resident: Option<OrbitId>,
    frontier_saddle: Option<OrbitId>,
    last_of_index: bool,
}

impl FatHandle {
    /// A basic fat handle of the given kind and polarity, cut from a basic flow.
    pub fn basic(kind: BasicHandleKind, polarity: Polarity) -> FatHandle {
        let removed = polarity.core_index().reversed();
        let (flow, want_paired) = match kind {
            BasicHandleKind::Hdu => (basic_flow(BasicOp::I), true),
            BasicHandleKind::Ddu { d } => (basic_flow(BasicOp::II(d.reversed())), true),
            BasicHandleKind::Hu => (basic_flow(BasicOp::II(removed.reversed())), false),
            BasicHandleKind::Du => (basic_flow(BasicOp::III), false),
        };
        let flow = flow.expect("basic flows are always constructible");
        let k = flow
            .orbits()
            .find(|o| o.index == removed && flow.partner(o.id).is_some() == want_paired)
            .expect("basic flow has the orbit")
            .id;
        flow.remove_orbit(k).expect("basic removal")
    }

    pub fn polarity(&self) -> Polarity {
        self.polarity
    }

    pub fn handle_class(&self) -> HandleClass {
        self.handle_class
    }

    pub fn content(&self) -> &FlowModel {
        &self.content
    }

    pub fn removed(&self) -> OrbitId {
        self.removed
    }

    pub fn removed_index(&self) -> OrbitIndex {
        self.removed_index
    }

    pub fn vacated_region(&self) -> RegionId {
        self.vacated
    }

    /// Orbit filling the core of a class [I] handle.
    pub fn core(&self) -> Option<OrbitId> {
        self.core
    }

    /// The single orbit left in the identification region of a class [III] handle.
    pub fn resident(&self) -> Option<OrbitId> {
        self.resident
    }

    pub fn frontier_saddle(&self) -> Option<OrbitId> {
        self.frontier_saddle
    }

    /// The removal took out the last orbit of its index.
    pub fn last_of_index(&self) -> bool {
        self.last_of_index
    }

    pub fn saddle_count(&self) -> usize {
        self.content.saddle_count()
    }

    /// Basic kind of a handle with a single saddle.
    pub fn kind(&self) -> Option<BasicHandleKind> {
        if self.saddle_count() != 1 {
            return None;
        }
        Some(match self.handle_class {
            HandleClass::ClassI if self.content.hopf_pairs.is_empty() => {
                let d = self
                    .content
                    .orbits()
                    .find(|o| !o.index.is_saddle() && Some(o.id) != self.core)
                    .expect("ddu has a separated orbit");
                BasicHandleKind::Ddu { d: d.index }
            }
            HandleClass::ClassI => BasicHandleKind::Hdu,
            HandleClass::ClassII => BasicHandleKind::Hu,
            HandleClass::ClassIII => BasicHandleKind::Du,
        })
    }

    /// Family name listing the orbits the handle contains, e.g. `hhduu`.
    pub fn name(&self) -> String {
        let c = &self.content;
        let pairs = c.hopf_pairs.len();
        let seps = c
            .orbits()
            .filter(|o| !o.index.is_saddle() && c.partner(o.id).is_none())
            .count();
        format!(
            "{}{}{}",
            "h".repeat(pairs),
            "d".repeat(seps),
            "u".repeat(c.saddle_count())
        )
    }

    pub fn canonical(&self) -> CanonicalFlow {
        canon::canonical_form(&self.content, Some((self.vacated, self.removed_index)))
    }
}

pub fn classify(fh: &FatHandle) -> HandleClass {
    fh.handle_class
}

fn check_admissible(host: HandleClass, guest: HandleClass) -> Result<(), FlowError> {
    let pair = (host.min(guest), host.max(guest));
    if pair == (HandleClass::ClassI, HandleClass::ClassII) {
        Err(FlowError::Bitorus(host, guest))
    } else {
        Ok(())
    }
}

/// False exactly when one handle is class [I] and the other class [II].
pub fn admissible(a: &FatHandle, r: &FatHandle) -> Result<bool, FlowError> {
    if a.polarity != Polarity::Attractive || r.polarity != Polarity::Repulsive {
        return Err(FlowError::Polarity);
    }
    Ok(check_admissible(a.handle_class, r.handle_class).is_ok())
}

/// Glue an attractive and a repulsive fat handle along their boundaries.
///
/// One of the two must carry a single saddle; it is attached to the other as
/// the next step of the filtration.
pub fn identify(a: &FatHandle, r: &FatHandle) -> Result<FlowModel, FlowError> {
    if !admissible(a, r)? {
        return Err(FlowError::Bitorus(r.handle_class, a.handle_class));
    }
    let (host, guest) = if a.saddle_count() == 1 {
        (r, a)
    } else if r.saddle_count() == 1 {
        (a, r)
    } else {
        return Err(FlowError::IteratedGluing);
    };
    glue(host, guest.kind().expect("single-saddle handle"))
}

/// Attach a basic handle of `kind` (opposite polarity to `host`) to the
/// vacated region of `host`.
fn glue(host: &FatHandle, kind: BasicHandleKind) -> Result<FlowModel, FlowError> {
    check_admissible(host.handle_class, kind.class())?;
    if let BasicHandleKind::Ddu { d } = kind {
        if d.is_saddle() {
            return Err(FlowError::Selector("ddu needs an index 0 or 2 orbit".into()));
        }
    }
    let core_index = host.removed_index;
    let v = host.vacated;
    let mut f = host.content.clone();
    let u = f.alloc(OrbitIndex::Saddle, None, None);
    f.regions.get_mut(&v).unwrap().adjacent_saddles.insert(u);
    let mut created = vec![u];
    let mut guest_core = None;
    let side_region = |f: &mut FlowModel| {
        let r = f.new_region();
        f.regions.get_mut(&r).unwrap().adjacent_saddles.insert(u);
        r
    };
    match kind {
        BasicHandleKind::Hdu => {
            let core = f.alloc(core_index, Some(u), Some(v));
            let r = side_region(&mut f);
            let y0 = f.alloc(OrbitIndex::Repulsive, Some(u), Some(r));
            let y2 = f.alloc(OrbitIndex::Attractive, Some(u), Some(r));
            f.pair(y0, y2);
            guest_core = Some(core);
            created.extend([core, y0, y2]);
        }
        BasicHandleKind::Ddu { d } => {
            let core = f.alloc(core_index, Some(u), Some(v));
            let r = side_region(&mut f);
            let x = f.alloc(d, Some(u), Some(r));
            guest_core = Some(core);
            created.extend([core, x]);
        }
        BasicHandleKind::Hu => {
            let r = side_region(&mut f);
            let y0 = f.alloc(OrbitIndex::Repulsive, Some(u), Some(r));
            let y2 = f.alloc(OrbitIndex::Attractive, Some(u), Some(r));
            f.pair(y0, y2);
            created.extend([y0, y2]);
        }
        BasicHandleKind::Du => {
            let x = f.alloc(core_index, Some(u), Some(v));
            created.push(x);
        }
    }
    if let (Some(a), Some(b)) = (host.core, guest_core) {
        f.pair(a, b);
    }
    let fused: Vec<OrbitId> = f.regions[&v].residents.iter().copied().collect();
    for o in fused {
        let orbit = f.orbits.get_mut(&o).unwrap();
        if orbit.frontier.is_none() {
            orbit.frontier = Some(u);
        }
    }
    let produced_heteroclinic = if host.handle_class.is_solid() && kind.class().is_solid() {
        let hf = host
            .frontier_saddle
            .expect("solid handles come from flows with saddles");
        let edge = match host.polarity {
            Polarity::Repulsive => (hf, u),
            Polarity::Attractive => (u, hf),
        };
        f.heteroclinic_edges.insert(edge);
        Some(edge)
    } else {
        None
    };
    f.log.push(ConstructionStep {
        replaced_orbit: host.removed,
        attached: kind,
        new_saddle: u,
        created,
        derived_handle_class: host.handle_class,
        attached_class: kind.class(),
        produced_heteroclinic,
    });
    Ok(f)
}

/// Stable JSON view of a flow.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowDocument {
    pub schema: String,
    pub link: String,
    pub canonical: String,
    pub orbits: Vec<OrbitRecord>,
    pub hopf_pairs: Vec<[u32; 2]>,
    pub regions: Vec<RegionRecord>,
    pub construction_log: Vec<StepRecord>,
    pub heteroclinic_edges: Vec<[u32; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitRecord {
    pub id: u32,
    pub label: String,
    pub index: u8,
    pub frontier: Option<u32>,
    pub region: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub id: u32,
    pub residents: Vec<u32>,
    pub adjacent_saddles: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    pub replaced_orbit: u32,
    pub attached: String,
    pub new_saddle: u32,
    pub created: Vec<u32>,
    pub derived_handle_class: String,
    pub attached_class: String,
    pub heteroclinic: Option<[u32; 2]>,
}

pub const FLOW_SCHEMA: &str = "fatflow.flow/1";

impl FlowModel {
    pub fn to_document(&self) -> FlowDocument {
        let ids = |s: &BTreeSet<OrbitId>| s.iter().map(|o| o.0).collect::<Vec<_>>();
        FlowDocument {
            schema: FLOW_SCHEMA.to_string(),
            link: self.link_of().to_string(),
            canonical: self.canonical().form,
            orbits: self
                .orbits
                .values()
                .map(|o| OrbitRecord {
                    id: o.id.0,
                    label: self.label(o.id),
                    index: o.index.value(),
                    frontier: o.frontier.map(|f| f.0),
                    region: o.region.map(|r| r.0),
                })
                .collect(),
            hopf_pairs: self.hopf_pairs.iter().map(|(a, b)| [a.0, b.0]).collect(),
            regions: self
                .regions
                .values()
                .map(|r| RegionRecord {
                    id: r.id.0,
                    residents: ids(&r.residents),
                    adjacent_saddles: ids(&r.adjacent_saddles),
                })
                .collect(),
            construction_log: self
                .log
                .iter()
                .enumerate()
                .map(|(i, s)| StepRecord {
                    step: i + 1,
                    replaced_orbit: s.replaced_orbit.0,
                    attached: s.attached.to_string(),
                    new_saddle: s.new_saddle.0,
                    created: s.created.iter().map(|o| o.0).collect(),
                    derived_handle_class: s.derived_handle_class.roman().to_string(),
                    attached_class: s.attached_class.roman().to_string(),
                    heteroclinic: s.produced_heteroclinic.map(|(a, b)| [a.0, b.0]),
                })
                .collect(),
            heteroclinic_edges: self.heteroclinic_edges.iter().map(|(a, b)| [a.0, b.0]).collect(),
        }
    }
}
