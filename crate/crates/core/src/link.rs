//! Indexed links in the usual d/h/u notation and the type-A operations on them.
//!
//! A link here is a split sum of Hopf pairs and separated unknots, each
//! component carrying an index: 0 (repulsive), 1 (saddle) or 2 (attractive).
//! Saddles are never Hopf components, which is what keeps the operations
//! inside the unknotted, unlinked family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::LinkError;

/// Index of a periodic orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum OrbitIndex {
    Repulsive,
    Saddle,
    Attractive,
}

impl OrbitIndex {
    pub fn value(self) -> u8 {
        match self {
            OrbitIndex::Repulsive => 0,
            OrbitIndex::Saddle => 1,
            OrbitIndex::Attractive => 2,
        }
    }

    /// 0 <-> 2; saddles are fixed.
    pub fn reversed(self) -> OrbitIndex {
        match self {
            OrbitIndex::Repulsive => OrbitIndex::Attractive,
            OrbitIndex::Saddle => OrbitIndex::Saddle,
            OrbitIndex::Attractive => OrbitIndex::Repulsive,
        }
    }

    pub fn is_saddle(self) -> bool {
        self == OrbitIndex::Saddle
    }
}

impl From<OrbitIndex> for u8 {
    fn from(i: OrbitIndex) -> u8 {
        i.value()
    }
}

impl TryFrom<u8> for OrbitIndex {
    type Error = LinkError;

    fn try_from(v: u8) -> Result<Self, LinkError> {
        match v {
            0 => Ok(OrbitIndex::Repulsive),
            1 => Ok(OrbitIndex::Saddle),
            2 => Ok(OrbitIndex::Attractive),
            other => Err(LinkError::BadIndex(other)),
        }
    }
}

impl fmt::Display for OrbitIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// Creation-ordered orbit identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OrbitId(pub u32);

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}", self.0)
    }
}

pub type Component = (OrbitId, OrbitIndex);

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndexedLink {
    hopf_pairs: Vec<[Component; 2]>,
    separated: Vec<Component>,
    next_id: u32,
}

impl IndexedLink {
    pub fn empty() -> Self {
        Self::default()
    }

    pub(crate) fn from_parts(hopf_pairs: Vec<[Component; 2]>, separated: Vec<Component>) -> Self {
        let next_id = hopf_pairs
            .iter()
            .flatten()
            .chain(separated.iter())
            .map(|(id, _)| id.0 + 1)
            .max()
            .unwrap_or(0);
        Self {
            hopf_pairs,
            separated,
            next_id,
        }
    }

    pub fn hopf_pairs(&self) -> &[[Component; 2]] {
        &self.hopf_pairs
    }

    pub fn separated(&self) -> &[Component] {
        &self.separated
    }

    pub fn components(&self) -> impl Iterator<Item = Component> + '_ {
        self.hopf_pairs
            .iter()
            .flatten()
            .copied()
            .chain(self.separated.iter().copied())
    }

    pub fn len(&self) -> usize {
        2 * self.hopf_pairs.len() + self.separated.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn saddle_count(&self) -> usize {
        self.separated.iter().filter(|(_, i)| i.is_saddle()).count()
    }

    pub fn index_of(&self, k: OrbitId) -> Option<OrbitIndex> {
        self.components().find(|(id, _)| *id == k).map(|(_, i)| i)
    }

    /// Is `k` one half of a Hopf pair?
    pub fn in_hopf_pair(&self, k: OrbitId) -> bool {
        self.hopf_pairs.iter().flatten().any(|(id, _)| *id == k)
    }

    fn fresh(&mut self) -> OrbitId {
        let id = OrbitId(self.next_id);
        self.next_id += 1;
        id
    }

    fn push_saddle(&mut self) {
        let id = self.fresh();
        self.separated.push((id, OrbitIndex::Saddle));
    }

    /// Ids of `other` shifted past ours so the two never collide.
    fn absorb(&mut self, other: &IndexedLink) {
        let shift = self.next_id;
        let mv = |(id, i): Component| (OrbitId(id.0 + shift), i);
        self.hopf_pairs
            .extend(other.hopf_pairs.iter().map(|[a, b]| [mv(*a), mv(*b)]));
        self.separated.extend(other.separated.iter().map(|c| mv(*c)));
        self.next_id += other.next_id;
    }

    /// Canonical notation with d0 and d2 both written `d`.
    pub fn shape(&self) -> String {
        canonicalize(self).shape()
    }

    /// Relabel every component with consecutive ids in the given order.
    pub fn relabeled(&self, order: &[usize]) -> IndexedLink {
        let comps: Vec<OrbitId> = self.components().map(|(id, _)| id).collect();
        let new_id = |id: OrbitId| {
            let pos = comps.iter().position(|c| *c == id).unwrap();
            OrbitId(order[pos] as u32)
        };
        let hopf_pairs = self
            .hopf_pairs
            .iter()
            .map(|[a, b]| [(new_id(a.0), a.1), (new_id(b.0), b.1)])
            .collect();
        let separated = self.separated.iter().map(|(id, i)| (new_id(*id), *i)).collect();
        IndexedLink::from_parts(hopf_pairs, separated)
    }
}

pub fn make_hopf(i: OrbitIndex, j: OrbitIndex) -> Result<IndexedLink, LinkError> {
    if i.is_saddle() || j.is_saddle() {
        return Err(LinkError::SaddleInHopf);
    }
    Ok(IndexedLink {
        hopf_pairs: vec![[(OrbitId(0), i), (OrbitId(1), j)]],
        separated: Vec::new(),
        next_id: 2,
    })
}

/// The generator: a Hopf link with indices 0 and 2.
pub fn hopf() -> IndexedLink {
    make_hopf(OrbitIndex::Repulsive, OrbitIndex::Attractive).unwrap()
}

pub fn make_unknot(i: OrbitIndex) -> IndexedLink {
    IndexedLink {
        hopf_pairs: Vec::new(),
        separated: vec![(OrbitId(0), i)],
        next_id: 1,
    }
}

pub fn split_sum(l1: &IndexedLink, l2: &IndexedLink) -> IndexedLink {
    let mut out = l1.clone();
    out.absorb(l2);
    out
}

pub fn remove_component(l: &IndexedLink, k: OrbitId) -> Result<IndexedLink, LinkError> {
    let index = l.index_of(k).ok_or(LinkError::UnknownOrbit(k))?;
    if index.is_saddle() {
        return Err(LinkError::SaddleRemoval(k));
    }
    let mut out = l.clone();
    if let Some(pos) = out.hopf_pairs.iter().position(|p| p.iter().any(|c| c.0 == k)) {
        let [a, b] = out.hopf_pairs.remove(pos);
        let partner = if a.0 == k { b } else { a };
        out.separated.push(partner);
    } else {
        out.separated.retain(|c| c.0 != k);
    }
    Ok(out)
}

/// I(l1, l2) = l1 . l2 . u
pub fn op_i(l1: &IndexedLink, l2: &IndexedLink) -> IndexedLink {
    let mut out = split_sum(l1, l2);
    out.push_saddle();
    out
}

/// II(l1, l2) = l1 . (l2 - k2) . u
pub fn op_ii(l1: &IndexedLink, l2: &IndexedLink, k2: OrbitId) -> Result<IndexedLink, LinkError> {
    let mut out = split_sum(l1, &remove_component(l2, k2)?);
    out.push_saddle();
    Ok(out)
}

/// III(l1, l2) = (l1 - k1) . (l2 - k2) . u with i(k1) = 0 and i(k2) = 2.
pub fn op_iii(l1: &IndexedLink, l2: &IndexedLink, k1: OrbitId, k2: OrbitId) -> Result<IndexedLink, LinkError> {
    let i1 = l1.index_of(k1).ok_or(LinkError::UnknownOrbit(k1))?;
    if i1 != OrbitIndex::Repulsive {
        return Err(LinkError::WrongIndex {
            orbit: k1,
            expected: OrbitIndex::Repulsive,
            found: i1,
        });
    }
    let i2 = l2.index_of(k2).ok_or(LinkError::UnknownOrbit(k2))?;
    if i2 != OrbitIndex::Attractive {
        return Err(LinkError::WrongIndex {
            orbit: k2,
            expected: OrbitIndex::Attractive,
            found: i2,
        });
    }
    let mut out = split_sum(&remove_component(l1, k1)?, &remove_component(l2, k2)?);
    out.push_saddle();
    Ok(out)
}

pub fn canonicalize(l: &IndexedLink) -> CanonicalLink {
    let mut hopf: Vec<(u8, u8)> = l
        .hopf_pairs
        .iter()
        .map(|[a, b]| {
            let (x, y) = (a.1.value(), b.1.value());
            (x.min(y), x.max(y))
        })
        .collect();
    hopf.sort_unstable();
    let count = |i| l.separated.iter().filter(|c| c.1 == i).count();
    CanonicalLink {
        hopf,
        repulsive: count(OrbitIndex::Repulsive),
        attractive: count(OrbitIndex::Attractive),
        saddles: count(OrbitIndex::Saddle),
    }
}

pub fn links_equal(l1: &IndexedLink, l2: &IndexedLink) -> bool {
    canonicalize(l1) == canonicalize(l2)
}

/// Normal form `h^a . d0^b . d2^c . u^n`, Hopf pairs sorted by index pair.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CanonicalLink {
    pub hopf: Vec<(u8, u8)>,
    pub repulsive: usize,
    pub attractive: usize,
    pub saddles: usize,
}

impl CanonicalLink {
    /// Same link with d0 and d2 written as a plain `d`.
    pub fn shape(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for &(a, b) in &self.hopf {
            parts.push(hopf_token(a, b));
        }
        parts.extend(std::iter::repeat_n("d".to_string(), self.repulsive + self.attractive));
        parts.extend(std::iter::repeat_n("u".to_string(), self.saddles));
        join_or_empty(parts)
    }

    pub fn to_link(&self) -> IndexedLink {
        let mut out = IndexedLink::empty();
        for &(a, b) in &self.hopf {
            let i = OrbitIndex::try_from(a).expect("canonical index");
            let j = OrbitIndex::try_from(b).expect("canonical index");
            let (x, y) = (out.fresh(), out.fresh());
            out.hopf_pairs.push([(x, i), (y, j)]);
        }
        for (n, i) in [
            (self.repulsive, OrbitIndex::Repulsive),
            (self.attractive, OrbitIndex::Attractive),
            (self.saddles, OrbitIndex::Saddle),
        ] {
            for _ in 0..n {
                let id = out.fresh();
                out.separated.push((id, i));
            }
        }
        out
    }
}

fn hopf_token(a: u8, b: u8) -> String {
    if (a, b) == (0, 2) {
        "h".to_string()
    } else {
        format!("h[{a},{b}]")
    }
}

fn join_or_empty(parts: Vec<String>) -> String {
    if parts.is_empty() {
        "∅".to_string()
    } else {
        parts.join("·")
    }
}

impl fmt::Display for CanonicalLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for &(a, b) in &self.hopf {
            parts.push(hopf_token(a, b));
        }
        parts.extend(std::iter::repeat_n("d0".to_string(), self.repulsive));
        parts.extend(std::iter::repeat_n("d2".to_string(), self.attractive));
        parts.extend(std::iter::repeat_n("u".to_string(), self.saddles));
        f.write_str(&join_or_empty(parts))
    }
}

impl fmt::Display for IndexedLink {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        canonicalize(self).fmt(f)
    }
}

/// Parses `h`, `h[i,j]`, `d0`, `d2`, `u`, optionally raised to `^n`, joined
/// by `·` or `*`. `∅` (or an empty string) is the empty link.
impl FromStr for IndexedLink {
    type Err = LinkError;

    fn from_str(s: &str) -> Result<Self, LinkError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut out = IndexedLink::empty();
        if compact.is_empty() || compact == "∅" {
            return Ok(out);
        }
        for token in compact.split(['·', '*']) {
            let (base, reps) = match token.split_once('^') {
                Some((b, n)) => (
                    b,
                    n.parse::<usize>().map_err(|_| LinkError::Notation(token.to_string()))?,
                ),
                None => (token, 1),
            };
            let piece = parse_token(base).ok_or_else(|| LinkError::Notation(token.to_string()))??;
            for _ in 0..reps {
                out.absorb(&piece);
            }
        }
        Ok(out)
    }
}

fn parse_token(t: &str) -> Option<Result<IndexedLink, LinkError>> {
    let idx = |c: &str| c.parse::<u8>().ok().map(OrbitIndex::try_from);
    match t {
        "h" => Some(Ok(hopf())),
        "u" => Some(Ok(make_unknot(OrbitIndex::Saddle))),
        "d0" => Some(Ok(make_unknot(OrbitIndex::Repulsive))),
        "d2" => Some(Ok(make_unknot(OrbitIndex::Attractive))),
        _ => {
            let inner = t.strip_prefix("h[")?.strip_suffix(']')?;
            let (a, b) = inner.split_once(',')?;
            let (a, b) = (idx(a)?, idx(b)?);
            Some(a.and_then(|a| b.and_then(|b| make_hopf(a, b))))
        }
    }
}

impl FromStr for CanonicalLink {
    type Err = LinkError;

    fn from_str(s: &str) -> Result<Self, LinkError> {
        s.parse::<IndexedLink>().map(|l| canonicalize(&l))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use OrbitIndex::{Attractive as A, Repulsive as R, Saddle as S};

    fn canon(s: &str) -> String {
        s.parse::<IndexedLink>().unwrap().to_string()
    }

    fn find(l: &IndexedLink, i: OrbitIndex, in_pair: bool) -> OrbitId {
        l.components()
            .find(|(id, idx)| *idx == i && l.in_hopf_pair(*id) == in_pair)
            .unwrap()
            .0
    }

    #[test]
    fn hopf_constructor() {
        assert_eq!(make_hopf(R, A).unwrap().to_string(), "h");
        assert!(links_equal(&make_hopf(A, R).unwrap(), &make_hopf(R, A).unwrap()));
        assert_eq!(make_hopf(S, A), Err(LinkError::SaddleInHopf));
        assert_eq!(make_hopf(R, R).unwrap().to_string(), "h[0,0]");
    }

    #[test]
    fn unknots() {
        assert_eq!(make_unknot(S).to_string(), "u");
        assert_eq!(make_unknot(R).to_string(), "d0");
        assert_eq!(make_unknot(A).to_string(), "d2");
    }

    #[test]
    fn split_sums() {
        let h = hopf();
        let u = make_unknot(S);
        assert_eq!(split_sum(&h, &u).to_string(), "h·u");
        let hhu = op_i(&h, &h);
        assert_eq!(split_sum(&hhu, &h).to_string(), "h·h·h·u");
        assert_eq!(split_sum(&IndexedLink::empty(), &hhu), hhu);
        let s = split_sum(&hhu, &hhu);
        let ids: std::collections::BTreeSet<_> = s.components().map(|c| c.0).collect();
        assert_eq!(ids.len(), s.len());
    }

    #[test]
    fn removal() {
        let h = hopf();
        let zero = find(&h, R, true);
        assert_eq!(remove_component(&h, zero).unwrap().to_string(), "d2");
        let hd: IndexedLink = "h·d0".parse().unwrap();
        let d = find(&hd, R, false);
        assert_eq!(remove_component(&hd, d).unwrap().to_string(), "h");
        let hu: IndexedLink = "h·u".parse().unwrap();
        let u = find(&hu, S, false);
        assert_eq!(remove_component(&hu, u), Err(LinkError::SaddleRemoval(u)));
        assert_eq!(
            remove_component(&hu, OrbitId(99)),
            Err(LinkError::UnknownOrbit(OrbitId(99)))
        );
    }

    #[test]
    fn operation_one() {
        let h = hopf();
        let hhu = op_i(&h, &h);
        assert_eq!(hhu.to_string(), "h·h·u");
        assert_eq!(op_i(&hhu, &h).to_string(), "h·h·h·u·u");
        let ddu = op_iii(&h, &h, find(&h, R, true), find(&h, A, true)).unwrap();
        assert_eq!(op_i(&ddu, &h).shape(), "h·d·d·u·u");
    }

    #[test]
    fn operation_two() {
        let h = hopf();
        let hdu = op_ii(&h, &h, find(&h, R, true)).unwrap();
        assert_eq!(hdu.to_string(), "h·d2·u");
        assert_eq!(op_ii(&hdu, &h, find(&h, A, true)).unwrap().shape(), "h·d·d·u·u");
        let d = find(&hdu, A, false);
        assert_eq!(op_ii(&h, &hdu, d).unwrap().to_string(), "h·h·u·u");
    }

    #[test]
    fn operation_three() {
        let h = hopf();
        let ddu = op_iii(&h, &h, find(&h, R, true), find(&h, A, true)).unwrap();
        assert_eq!(ddu.to_string(), "d0·d2·u");
        let d0 = find(&ddu, R, false);
        assert_eq!(
            op_iii(&ddu, &h, d0, find(&h, A, true)).unwrap().to_string(),
            "d0·d2·u·u"
        );
        let err = op_iii(&h, &h, find(&h, A, true), find(&h, A, true)).unwrap_err();
        assert!(matches!(err, LinkError::WrongIndex { expected: R, .. }));
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(canon("u·h·d0"), canon("d0·h·u"));
        assert_eq!(canon("u*u*h[2,0]*d2*d0"), "h·d0·d2·u·u");
        assert_eq!(canon("h^3·u^4"), "h·h·h·u·u·u·u");
        assert_eq!(canon("∅"), "∅");
        assert!("h·x".parse::<IndexedLink>().is_err());
        assert!("h[1,2]".parse::<IndexedLink>().is_err());
        let hhu: IndexedLink = "h·h·u".parse().unwrap();
        let hdu: IndexedLink = "h·d2·u".parse().unwrap();
        assert!(!links_equal(&hhu, &hdu));
        let c = canonicalize(&hdu);
        assert_eq!(canonicalize(&c.to_link()), c);
    }

    #[test]
    fn relabel_invariance() {
        let l: IndexedLink = "h·d0·u·h".parse().unwrap();
        let r = l.relabeled(&[5, 4, 3, 2, 1, 0]);
        assert_ne!(l, r);
        assert!(links_equal(&l, &r));
    }
}
