//! Flow expressions: `I(l,r)`, `II(l,r; k2=..)`, `III(l,r; k1=.., k2=..)`.
//!
//! ```text
//! expr      := 'h' | op '(' expr ',' expr [ ';' selector { ',' selector } ] ')'
//! op        := 'I' | 'II' | 'III'
//! selector  := ('k1' | 'k2' | 'at') '=' component
//! component := 'h' [N] '.' ('0'|'2')      component of the N-th Hopf pair
//!            | 'd' ('0'|'2') [ '.' N ]    N-th separated orbit of that index
//! ```
//!
//! `k1` and `k2` are the removal selectors: `k2` names a component of the
//! right operand, `k1` one of the left. `at` names the orbit of the iterated
//! operand that is replaced when the operation itself removes nothing from
//! it (operation I, and operation II when `k2` lies in the leaf).
//!
//! Elaboration needs one operand to be the leaf `h`; the other one is the
//! flow being extended. When both are leaves the left one plays the flow.
//! Missing selectors default to the legal choice when every legal choice
//! gives the same flow, and are reported as ambiguous otherwise.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::DslError;
use crate::flow::{BasicHandleKind, FlowModel};
use crate::link::{self, canonicalize, CanonicalLink, IndexedLink, OrbitId, OrbitIndex};

/// A reference to one attractive or repulsive component of an operand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Component {
    Hopf { pair: Option<u32>, index: OrbitIndex },
    Separated { index: OrbitIndex, pos: Option<u32> },
}

impl Component {
    pub fn index(self) -> OrbitIndex {
        match self {
            Component::Hopf { index, .. } | Component::Separated { index, .. } => index,
        }
    }

    fn leaf(index: OrbitIndex) -> Component {
        Component::Hopf { pair: Some(1), index }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Component::Hopf { pair: Some(n), index } => write!(f, "h{n}.{index}"),
            Component::Hopf { pair: None, index } => write!(f, "h.{index}"),
            Component::Separated { index, pos: Some(n) } => write!(f, "d{index}.{n}"),
            Component::Separated { index, pos: None } => write!(f, "d{index}"),
        }
    }
}

impl std::str::FromStr for Component {
    type Err = DslError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = Parser::new(s);
        let c = p.component()?;
        p.skip_ws();
        if p.pos < p.chars.len() {
            return Err(p.error("trailing input after component"));
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowExpr {
    Leaf,
    OpI {
        left: Box<FlowExpr>,
        right: Box<FlowExpr>,
        at: Option<Component>,
    },
    OpII {
        left: Box<FlowExpr>,
        right: Box<FlowExpr>,
        k2: Option<Component>,
        at: Option<Component>,
    },
    OpIII {
        left: Box<FlowExpr>,
        right: Box<FlowExpr>,
        k1: Option<Component>,
        k2: Option<Component>,
    },
}

impl FlowExpr {
    pub fn operands(&self) -> Option<(&FlowExpr, &FlowExpr)> {
        match self {
            FlowExpr::Leaf => None,
            FlowExpr::OpI { left, right, .. }
            | FlowExpr::OpII { left, right, .. }
            | FlowExpr::OpIII { left, right, .. } => Some((left, right)),
        }
    }

    /// Number of operations, i.e. saddles of the resulting flow.
    pub fn size(&self) -> usize {
        match self.operands() {
            None => 0,
            Some((l, r)) => 1 + l.size() + r.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self.operands() {
            None => 0,
            Some((l, r)) => 1 + l.depth().max(r.depth()),
        }
    }

    fn is_leaf(&self) -> bool {
        matches!(self, FlowExpr::Leaf)
    }
}

impl fmt::Display for FlowExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, left, right, sels): (&str, _, _, Vec<(&str, Component)>) = match self {
            FlowExpr::Leaf => return f.write_str("h"),
            FlowExpr::OpI { left, right, at } => ("I", left, right, at.iter().map(|c| ("at", *c)).collect()),
            FlowExpr::OpII { left, right, k2, at } => (
                "II",
                left,
                right,
                k2.iter()
                    .map(|c| ("k2", *c))
                    .chain(at.iter().map(|c| ("at", *c)))
                    .collect(),
            ),
            FlowExpr::OpIII { left, right, k1, k2 } => (
                "III",
                left,
                right,
                k1.iter()
                    .map(|c| ("k1", *c))
                    .chain(k2.iter().map(|c| ("k2", *c)))
                    .collect(),
            ),
        };
        write!(f, "{name}({left},{right}")?;
        for (i, (k, c)) in sels.iter().enumerate() {
            write!(f, "{}{k}={c}", if i == 0 { "; " } else { ", " })?;
        }
        f.write_str(")")
    }
}

pub fn print(e: &FlowExpr) -> String {
    e.to_string()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Parser {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn error(&self, msg: impl Into<String>) -> DslError {
        DslError::Syntax {
            pos: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<(), DslError> {
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(self.error(format!("expected `{want}`, found `{c}`"))),
            None => Err(self.error(format!("expected `{want}`, found end of input"))),
        }
    }

    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        self.chars[start..self.pos].iter().collect::<String>().parse().ok()
    }

    fn index(&mut self) -> Result<OrbitIndex, DslError> {
        match self.chars.get(self.pos) {
            Some('0') => {
                self.pos += 1;
                Ok(OrbitIndex::Repulsive)
            }
            Some('2') => {
                self.pos += 1;
                Ok(OrbitIndex::Attractive)
            }
            _ => Err(self.error("expected component index 0 or 2")),
        }
    }

    fn expr(&mut self) -> Result<FlowExpr, DslError> {
        match self.peek() {
            Some('h') => {
                self.pos += 1;
                Ok(FlowExpr::Leaf)
            }
            Some('I') => {
                let start = self.pos;
                while self.chars.get(self.pos) == Some(&'I') {
                    self.pos += 1;
                }
                let arity = self.pos - start;
                if arity > 3 {
                    self.pos = start;
                    return Err(self.error("unknown operation; expected I, II or III"));
                }
                self.expect('(')?;
                let left = Box::new(self.expr()?);
                self.expect(',')?;
                let right = Box::new(self.expr()?);
                let sels = if self.peek() == Some(';') {
                    self.pos += 1;
                    self.selectors()?
                } else {
                    Vec::new()
                };
                self.expect(')')?;
                let mut slots: BTreeMap<&'static str, Component> = BTreeMap::new();
                for (at, key, c) in sels {
                    let allowed: &[&str] = match arity {
                        1 => &["at"],
                        2 => &["k2", "at"],
                        _ => &["k1", "k2"],
                    };
                    if !allowed.contains(&key) {
                        return Err(DslError::Syntax {
                            pos: at + 1,
                            msg: format!("selector `{key}` does not apply to operation {}", "I".repeat(arity)),
                        });
                    }
                    if slots.insert(key, c).is_some() {
                        return Err(DslError::Syntax {
                            pos: at + 1,
                            msg: format!("selector `{key}` given twice"),
                        });
                    }
                }
                Ok(match arity {
                    1 => FlowExpr::OpI {
                        left,
                        right,
                        at: slots.get("at").copied(),
                    },
                    2 => FlowExpr::OpII {
                        left,
                        right,
                        k2: slots.get("k2").copied(),
                        at: slots.get("at").copied(),
                    },
                    _ => FlowExpr::OpIII {
                        left,
                        right,
                        k1: slots.get("k1").copied(),
                        k2: slots.get("k2").copied(),
                    },
                })
            }
            Some(c) => Err(self.error(format!("expected `h` or an operation, found `{c}`"))),
            None => Err(self.error("expected `h` or an operation, found end of input")),
        }
    }

    fn selectors(&mut self) -> Result<Vec<(usize, &'static str, Component)>, DslError> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let at = self.pos;
            let key = match (self.chars.get(self.pos), self.chars.get(self.pos + 1)) {
                (Some('k'), Some('1')) => "k1",
                (Some('k'), Some('2')) => "k2",
                (Some('a'), Some('t')) => "at",
                _ => return Err(self.error("expected selector `k1`, `k2` or `at`")),
            };
            self.pos += 2;
            self.expect('=')?;
            let c = self.component()?;
            out.push((at, key, c));
            if self.peek() == Some(',') {
                self.pos += 1;
            } else {
                return Ok(out);
            }
        }
    }

    fn component(&mut self) -> Result<Component, DslError> {
        match self.peek() {
            Some('h') => {
                self.pos += 1;
                let pair = self.number();
                if pair == Some(0) {
                    return Err(self.error("Hopf pairs are numbered from 1"));
                }
                if self.chars.get(self.pos) != Some(&'.') {
                    return Err(self.error("expected `.` and a component index"));
                }
                self.pos += 1;
                let index = self.index()?;
                Ok(Component::Hopf { pair, index })
            }
            Some('d') => {
                self.pos += 1;
                let index = self.index()?;
                let pos = if self.chars.get(self.pos) == Some(&'.') {
                    self.pos += 1;
                    match self.number() {
                        Some(0) | None => return Err(self.error("expected a position starting at 1")),
                        n => n,
                    }
                } else {
                    None
                };
                Ok(Component::Separated { index, pos })
            }
            _ => Err(self.error("expected a component such as `h1.0` or `d2.1`")),
        }
    }
}

pub fn parse(text: &str) -> Result<FlowExpr, DslError> {
    let mut p = Parser::new(text);
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(e)
}

/// Parses one expression per line; blank lines and `#` comments are skipped.
/// Returns the 1-based line number with each result.
pub fn parse_batch(text: &str) -> Vec<(usize, Result<FlowExpr, DslError>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let body = line.split('#').next().unwrap_or("").trim();
            (!body.is_empty()).then(|| (i + 1, parse(body)))
        })
        .collect()
}

/// Every attractive or repulsive orbit of `flow` with its explicit name.
pub fn components(flow: &FlowModel) -> Vec<(Component, OrbitId)> {
    let mut out = Vec::new();
    for (i, &(a, b)) in flow.hopf_pairs().iter().enumerate() {
        for o in [a, b] {
            let index = flow.orbit(o).expect("paired orbit").index;
            out.push((
                Component::Hopf {
                    pair: Some(i as u32 + 1),
                    index,
                },
                o,
            ));
        }
    }
    let mut seen: HashMap<OrbitIndex, u32> = HashMap::new();
    for o in flow.orbits() {
        if o.index.is_saddle() || flow.partner(o.id).is_some() {
            continue;
        }
        let n = seen.entry(o.index).or_default();
        *n += 1;
        out.push((
            Component::Separated {
                index: o.index,
                pos: Some(*n),
            },
            o.id,
        ));
    }
    out
}

fn matches(pattern: Component, explicit: Component) -> bool {
    match (pattern, explicit) {
        (Component::Hopf { pair, index }, Component::Hopf { pair: p, index: i }) => {
            index == i && (pair.is_none() || pair == p)
        }
        (Component::Separated { index, pos }, Component::Separated { index: i, pos: p }) => {
            index == i && (pos.is_none() || pos == p)
        }
        _ => false,
    }
}

fn pick<T: Copy>(
    slot: &'static str,
    pattern: Component,
    list: impl IntoIterator<Item = (Component, T)>,
) -> Result<(Component, T), DslError> {
    let hits: Vec<(Component, T)> = list.into_iter().filter(|(c, _)| matches(pattern, *c)).collect();
    match hits.as_slice() {
        [one] => Ok(*one),
        [] => Err(DslError::BadSelector {
            slot,
            value: pattern.to_string(),
        }),
        many => Err(DslError::Ambiguous {
            slot,
            candidates: many.iter().map(|(c, _)| c.to_string()).collect(),
        }),
    }
}

/// The orbit of `flow` named by `c`.
pub fn select(flow: &FlowModel, c: Component) -> Result<OrbitId, DslError> {
    pick("component", c, components(flow)).map(|(_, o)| o)
}

/// Explicit name of orbit `o` in `flow`.
pub fn name_of(flow: &FlowModel, o: OrbitId) -> Option<Component> {
    components(flow).into_iter().find(|&(_, x)| x == o).map(|(c, _)| c)
}

fn leaf_component(slot: &'static str, c: Component) -> Result<Component, DslError> {
    match c {
        Component::Hopf {
            pair: None | Some(1),
            index,
        } => Ok(Component::leaf(index)),
        _ => Err(DslError::BadSelector {
            slot,
            value: c.to_string(),
        }),
    }
}

/// One way of carrying out an operation node: replace `site` by `kind`.
struct Plan {
    site: OrbitId,
    kind: BasicHandleKind,
    node: FlowExpr,
    label: String,
}

fn options(
    flow: &FlowModel,
    slot: &'static str,
    given: Option<Component>,
    index: Option<OrbitIndex>,
) -> Result<Vec<(Component, OrbitId)>, DslError> {
    let all: Vec<(Component, OrbitId)> = components(flow)
        .into_iter()
        .filter(|(c, _)| index.is_none_or(|i| c.index() == i))
        .collect();
    match given {
        Some(c) => {
            if let Some(i) = index {
                if c.index() != i {
                    return Err(DslError::BadSelector {
                        slot,
                        value: c.to_string(),
                    });
                }
            }
            Ok(vec![pick(slot, c, all)?])
        }
        None if all.is_empty() => Err(DslError::BadSelector {
            slot,
            value: "(none available)".into(),
        }),
        None => Ok(all),
    }
}

fn missing_slots(a: (&'static str, bool), b: (&'static str, bool)) -> &'static str {
    match (a, b) {
        (("k2", true), ("at", true)) => "k2,at",
        (("k1", true), ("k2", true)) => "k1,k2",
        ((x, true), _) => x,
        (_, (y, _)) => y,
    }
}

fn plans(
    e: &FlowExpr,
    flow: &FlowModel,
    flow_left: bool,
    sub: FlowExpr,
) -> Result<(Vec<Plan>, &'static str), DslError> {
    let (left, right) = if flow_left {
        (sub, FlowExpr::Leaf)
    } else {
        (FlowExpr::Leaf, sub)
    };
    let mut out = Vec::new();
    let slot;
    match *e {
        FlowExpr::Leaf => unreachable!("leaves have no plan"),
        FlowExpr::OpI { at, .. } => {
            slot = "at";
            for (c, site) in options(flow, "at", at, None)? {
                out.push(Plan {
                    site,
                    kind: BasicHandleKind::Hdu,
                    node: FlowExpr::OpI {
                        left: Box::new(left.clone()),
                        right: Box::new(right.clone()),
                        at: Some(c),
                    },
                    label: format!("at={c}"),
                });
            }
        }
        FlowExpr::OpII { k2, at, .. } if flow_left => {
            slot = missing_slots(("k2", k2.is_none()), ("at", at.is_none()));
            let removed = match k2 {
                Some(c) => vec![leaf_component("k2", c)?],
                None => vec![
                    Component::leaf(OrbitIndex::Repulsive),
                    Component::leaf(OrbitIndex::Attractive),
                ],
            };
            let sites = options(flow, "at", at, None)?;
            for r in removed {
                for &(c, site) in &sites {
                    out.push(Plan {
                        site,
                        kind: BasicHandleKind::Ddu {
                            d: r.index().reversed(),
                        },
                        node: FlowExpr::OpII {
                            left: Box::new(left.clone()),
                            right: Box::new(right.clone()),
                            k2: Some(r),
                            at: Some(c),
                        },
                        label: format!("k2={r}, at={c}"),
                    });
                }
            }
        }
        FlowExpr::OpII { k2, at, .. } => {
            if at.is_some() {
                return Err(DslError::Misplaced("at"));
            }
            slot = "k2";
            for (c, site) in options(flow, "k2", k2, None)? {
                out.push(Plan {
                    site,
                    kind: BasicHandleKind::Hu,
                    node: FlowExpr::OpII {
                        left: Box::new(left.clone()),
                        right: Box::new(right.clone()),
                        k2: Some(c),
                        at: None,
                    },
                    label: format!("k2={c}"),
                });
            }
        }
        FlowExpr::OpIII { k1, k2, .. } => {
            // the leaf loses the component the operation forces on it
            let (flow_slot, flow_sel, leaf_slot, leaf_sel, flow_index) = if flow_left {
                ("k1", k1, "k2", k2, OrbitIndex::Repulsive)
            } else {
                ("k2", k2, "k1", k1, OrbitIndex::Attractive)
            };
            let leaf = Component::leaf(flow_index.reversed());
            if let Some(c) = leaf_sel {
                if leaf_component(leaf_slot, c)? != leaf {
                    return Err(DslError::BadSelector {
                        slot: leaf_slot,
                        value: c.to_string(),
                    });
                }
            }
            slot = flow_slot;
            for (c, site) in options(flow, flow_slot, flow_sel, Some(flow_index))? {
                let (k1, k2) = if flow_left { (c, leaf) } else { (leaf, c) };
                out.push(Plan {
                    site,
                    kind: BasicHandleKind::Du,
                    node: FlowExpr::OpIII {
                        left: Box::new(left.clone()),
                        right: Box::new(right.clone()),
                        k1: Some(k1),
                        k2: Some(k2),
                    },
                    label: format!("{flow_slot}={c}"),
                });
            }
        }
    }
    Ok((out, slot))
}

fn build(e: &FlowExpr) -> Result<(FlowModel, FlowExpr), DslError> {
    let Some((left, right)) = e.operands() else {
        return Ok((FlowModel::generator(), FlowExpr::Leaf));
    };
    let flow_left = match (left.is_leaf(), right.is_leaf()) {
        (_, true) => true,
        (true, false) => false,
        (false, false) => return Err(DslError::NotElaborable),
    };
    let (flow, sub) = build(if flow_left { left } else { right })?;
    let (plans, slot) = plans(e, &flow, flow_left, sub)?;
    let mut first_err = None;
    let mut done: Vec<(FlowModel, &Plan)> = Vec::new();
    for p in &plans {
        match flow.replace_orbit(p.site, p.kind) {
            Ok(f) => done.push((f, p)),
            Err(err) => {
                first_err.get_or_insert(err);
            }
        }
    }
    if done.is_empty() {
        return Err(first_err.expect("at least one plan").into());
    }
    if done.len() > 1 {
        let c0 = done[0].0.canonical();
        if done.iter().skip(1).any(|(f, _)| f.canonical() != c0) {
            return Err(DslError::Ambiguous {
                slot,
                candidates: done.iter().map(|(_, p)| p.label.clone()).collect(),
            });
        }
    }
    let (f, p) = done.swap_remove(0);
    Ok((f, p.node.clone()))
}

/// Fill in every selector, following the defaulting rule.
pub fn resolve(e: &FlowExpr) -> Result<FlowExpr, DslError> {
    build(e).map(|(_, r)| r)
}

pub fn elaborate(e: &FlowExpr) -> Result<FlowModel, DslError> {
    build(e).map(|(f, _)| f)
}

fn link_components(l: &IndexedLink) -> Vec<(Component, OrbitId)> {
    let mut out = Vec::new();
    for (i, pair) in l.hopf_pairs().iter().enumerate() {
        for &(o, index) in pair {
            out.push((
                Component::Hopf {
                    pair: Some(i as u32 + 1),
                    index,
                },
                o,
            ));
        }
    }
    let mut seen: HashMap<OrbitIndex, u32> = HashMap::new();
    for &(o, index) in l.separated() {
        if index.is_saddle() {
            continue;
        }
        let n = seen.entry(index).or_default();
        *n += 1;
        out.push((Component::Separated { index, pos: Some(*n) }, o));
    }
    out
}

fn link_choices(
    l: &IndexedLink,
    slot: &'static str,
    given: Option<Component>,
    index: Option<OrbitIndex>,
) -> Result<Vec<OrbitId>, DslError> {
    let all: Vec<(Component, OrbitId)> = link_components(l)
        .into_iter()
        .filter(|(c, _)| index.is_none_or(|i| c.index() == i))
        .collect();
    match given {
        Some(c) => Ok(vec![pick(slot, c, all)?.1]),
        None => Ok(all.into_iter().map(|(_, o)| o).collect()),
    }
}

fn unique_link(
    slot: &'static str,
    results: Vec<Result<IndexedLink, crate::error::LinkError>>,
) -> Result<IndexedLink, DslError> {
    let mut ok = Vec::new();
    let mut first_err = None;
    for r in results {
        match r {
            Ok(l) => ok.push(l),
            Err(e) => {
                first_err.get_or_insert(e);
            }
        }
    }
    let Some(first) = ok.first() else {
        return Err(match first_err {
            Some(e) => e.into(),
            None => DslError::BadSelector {
                slot,
                value: "(none available)".into(),
            },
        });
    };
    let c0 = canonicalize(first);
    let forms: Vec<CanonicalLink> = ok.iter().map(canonicalize).collect();
    if forms.iter().any(|c| *c != c0) {
        let mut candidates: Vec<String> = forms.iter().map(|c| c.to_string()).collect();
        candidates.dedup();
        return Err(DslError::Ambiguous { slot, candidates });
    }
    Ok(ok.swap_remove(0))
}

/// Evaluate an expression with the link operations alone. Both operands may
/// be iterated here; `at` selectors do not affect the link.
pub fn eval_link(e: &FlowExpr) -> Result<IndexedLink, DslError> {
    let Some((left, right)) = e.operands() else {
        return Ok(link::hopf());
    };
    let l1 = eval_link(left)?;
    let l2 = eval_link(right)?;
    match *e {
        FlowExpr::Leaf => unreachable!(),
        FlowExpr::OpI { .. } => Ok(link::op_i(&l1, &l2)),
        FlowExpr::OpII { k2, .. } => {
            let results = link_choices(&l2, "k2", k2, None)?
                .into_iter()
                .map(|k| link::op_ii(&l1, &l2, k))
                .collect();
            unique_link("k2", results)
        }
        FlowExpr::OpIII { k1, k2, .. } => {
            let c1 = link_choices(&l1, "k1", k1, Some(OrbitIndex::Repulsive))?;
            let c2 = link_choices(&l2, "k2", k2, Some(OrbitIndex::Attractive))?;
            if let Some(c) = k1.filter(|c| c.index() != OrbitIndex::Repulsive) {
                return Err(DslError::BadSelector {
                    slot: "k1",
                    value: c.to_string(),
                });
            }
            if let Some(c) = k2.filter(|c| c.index() != OrbitIndex::Attractive) {
                return Err(DslError::BadSelector {
                    slot: "k2",
                    value: c.to_string(),
                });
            }
            let results = c1
                .iter()
                .flat_map(|&a| c2.iter().map(move |&b| (a, b)))
                .map(|(a, b)| link::op_iii(&l1, &l2, a, b))
                .collect();
            unique_link(if k1.is_none() { "k1" } else { "k2" }, results)
        }
    }
}

/// An explicit expression whose elaboration rebuilds `flow` up to isomorphism.
pub fn expr_of(flow: &FlowModel) -> FlowExpr {
    let mut g = FlowModel::generator();
    let mut ids: HashMap<OrbitId, OrbitId> = g.orbits().map(|o| (o.id, o.id)).collect();
    let mut expr = FlowExpr::Leaf;
    for step in flow.construction_log() {
        let k = ids[&step.replaced_orbit];
        let name = name_of(&g, k).expect("replaced orbit is a component");
        let index = g.orbit(k).expect("orbit").index;
        let first = expr.is_leaf();
        let prev = std::mem::replace(&mut expr, FlowExpr::Leaf);
        let (next, site) = match step.attached {
            BasicHandleKind::Hdu => (
                FlowExpr::OpI {
                    left: Box::new(prev),
                    right: Box::new(FlowExpr::Leaf),
                    at: Some(name),
                },
                k,
            ),
            BasicHandleKind::Ddu { d } => (
                FlowExpr::OpII {
                    left: Box::new(prev),
                    right: Box::new(FlowExpr::Leaf),
                    k2: Some(Component::leaf(d.reversed())),
                    at: Some(name),
                },
                k,
            ),
            BasicHandleKind::Hu => (
                FlowExpr::OpII {
                    left: Box::new(FlowExpr::Leaf),
                    right: Box::new(prev),
                    k2: Some(name),
                    at: None,
                },
                k,
            ),
            BasicHandleKind::Du if index == OrbitIndex::Repulsive => (
                FlowExpr::OpIII {
                    left: Box::new(prev),
                    right: Box::new(FlowExpr::Leaf),
                    k1: Some(name),
                    k2: Some(Component::leaf(OrbitIndex::Attractive)),
                },
                k,
            ),
            BasicHandleKind::Du if first => {
                // III(h,h) always consumes the left leaf's 0-component
                let site = select(&g, Component::leaf(OrbitIndex::Repulsive)).expect("generator");
                (
                    FlowExpr::OpIII {
                        left: Box::new(FlowExpr::Leaf),
                        right: Box::new(FlowExpr::Leaf),
                        k1: Some(Component::leaf(OrbitIndex::Repulsive)),
                        k2: Some(Component::leaf(OrbitIndex::Attractive)),
                    },
                    site,
                )
            }
            BasicHandleKind::Du => (
                FlowExpr::OpIII {
                    left: Box::new(FlowExpr::Leaf),
                    right: Box::new(prev),
                    k1: Some(Component::leaf(OrbitIndex::Repulsive)),
                    k2: Some(name),
                },
                k,
            ),
        };
        g = g
            .replace_orbit(site, step.attached)
            .expect("step was admissible in the source flow");
        let created = &g.construction_log().last().expect("step").created;
        for (old, new) in step.created.iter().zip(created) {
            ids.insert(*old, *new);
        }
        if site != k {
            // the mirrored basic flow: the surviving generator orbit plays
            // the new core and the replaced one survives
            let survivor = flow_generator_other(step.replaced_orbit);
            ids.insert(step.created[1], k);
            ids.insert(survivor, created[1]);
        }
        expr = next;
    }
    expr
}

fn flow_generator_other(o: OrbitId) -> OrbitId {
    if o == crate::flow::GENERATOR_REPULSIVE {
        crate::flow::GENERATOR_ATTRACTIVE
    } else {
        crate::flow::GENERATOR_REPULSIVE
    }
}

/// Standard bare expressions, which leave the removed components implicit, and the
/// explicit expressions this crate reads them as.
pub const STANDARD_SELECTORS: &[(&str, &str)] = &[
    ("I(h,h)", "I(h,h; at=h1.2)"),
    ("II(h,h)", "II(h,h; k2=h1.0, at=h1.2)"),
    ("III(h,h)", "III(h,h; k1=h1.0, k2=h1.2)"),
    ("I(I(h,h),h)", "I(I(h,h; at=h1.2),h; at=h1.0)"),
    ("I(II(h,h),h)", "I(II(h,h; k2=h1.0, at=h1.2),h; at=h1.0)"),
    ("I(III(h,h),h)", "I(III(h,h; k1=h1.0, k2=h1.2),h; at=d2.1)"),
    ("II(II(h,h),h)", "II(h,II(h,h; k2=h1.0, at=h1.2); k2=d2.1)"),
    ("II(III(h,h),h)", "II(h,III(h,h; k1=h1.0, k2=h1.2); k2=d2.1)"),
    ("III(III(h,h),h)", "III(h,III(h,h; k1=h1.0, k2=h1.2); k1=h1.0, k2=d2.1)"),
    (
        "III(III(III(h,h),h),h)",
        "III(h,III(h,III(h,h; k1=h1.0, k2=h1.2); k1=h1.0, k2=d2.1); k1=h1.0, k2=d2.1)",
    ),
    (
        "II(II(III(h,h),h),h)",
        "II(h,II(h,III(h,h; k1=h1.0, k2=h1.2); k2=d2.1); k2=d0.1)",
    ),
    (
        "II(II(II(II(h,h),h),h),h)",
        "II(h,II(II(h,II(h,h; k2=h1.0, at=h1.2); k2=d2.1),h; k2=h1.0, at=h1.2); k2=d2.1)",
    ),
];

/// Whitespace-insensitive lookup from bare expressions to explicit ones.
#[derive(Debug, Clone, Default)]
pub struct SelectorTable {
    entries: BTreeMap<String, String>,
}

fn squeeze(text: &str) -> String {
    text.chars().filter(|c| !c.is_whitespace()).collect()
}

impl SelectorTable {
    pub fn builtin() -> SelectorTable {
        let mut t = SelectorTable::default();
        for (bare, explicit) in STANDARD_SELECTORS {
            t.insert(bare, explicit);
        }
        t
    }

    pub fn insert(&mut self, bare: &str, explicit: &str) {
        self.entries.insert(squeeze(bare), explicit.trim().to_string());
    }

    /// Reads `bare => explicit` lines; `#` starts a comment. Both sides must
    /// parse. Entries override existing ones.
    pub fn extend_from_text(&mut self, text: &str) -> Result<(), DslError> {
        for (no, line) in text.lines().enumerate() {
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((bare, explicit)) = body.split_once("=>") else {
                return Err(DslError::Syntax {
                    pos: no + 1,
                    msg: "selector table lines read `bare => explicit`".into(),
                });
            };
            for side in [bare, explicit] {
                parse(side).map_err(|e| DslError::Syntax {
                    pos: no + 1,
                    msg: format!("in `{}`: {e}", side.trim()),
                })?;
            }
            self.insert(bare, explicit);
        }
        Ok(())
    }

    pub fn lookup(&self, text: &str) -> Option<&str> {
        self.entries.get(&squeeze(text)).map(String::as_str)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(a, b)| (a.as_str(), b.as_str()))
    }

    /// Parse `text`, reading it through the table first.
    pub fn parse(&self, text: &str) -> Result<FlowExpr, DslError> {
        parse(self.lookup(text).unwrap_or(text))
    }
}
