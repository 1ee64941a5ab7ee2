//! A second, deliberately naive model of flow construction.
//!
//! States are plain vectors indexed by position, saddles are numbered in
//! creation order, and two states are considered the same flow when some
//! permutation of saddles makes their full descriptions equal. Nothing here
//! uses the library's canonical forms.

use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Kind {
    Hdu,
    Ddu(u8),
    Hu,
    Du,
}

pub const KINDS: [Kind; 5] = [Kind::Hdu, Kind::Ddu(0), Kind::Ddu(2), Kind::Hu, Kind::Du];

fn kind_class(k: Kind) -> u8 {
    match k {
        Kind::Hdu | Kind::Ddu(_) => 1,
        Kind::Hu => 2,
        Kind::Du => 3,
    }
}

#[derive(Clone, Debug)]
struct Orb {
    index: u8,
    frontier: Option<usize>,
    region: usize,
    partner: Option<usize>,
    alive: bool,
}

#[derive(Clone, Debug)]
pub struct State {
    saddles: usize,
    orbs: Vec<Orb>,
    region_adj: Vec<BTreeSet<usize>>,
    edges: BTreeSet<(usize, usize)>,
}

impl State {
    pub fn hopf() -> State {
        State {
            saddles: 0,
            orbs: vec![
                Orb {
                    index: 0,
                    frontier: None,
                    region: 0,
                    partner: Some(1),
                    alive: true,
                },
                Orb {
                    index: 2,
                    frontier: None,
                    region: 0,
                    partner: Some(0),
                    alive: true,
                },
            ],
            region_adj: vec![BTreeSet::new()],
            edges: BTreeSet::new(),
        }
    }

    fn live(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.orbs.len()).filter(|&i| self.orbs[i].alive)
    }

    fn residents(&self, r: usize) -> Vec<usize> {
        self.live().filter(|&i| self.orbs[i].region == r).collect()
    }

    /// 1, 2 or 3 for the class left behind by removing orbit `k`; 0 if none.
    pub fn removal_class(&self, k: usize) -> u8 {
        let o = &self.orbs[k];
        if o.partner.is_some() {
            return 1;
        }
        let rest: Vec<usize> = self.residents(o.region).into_iter().filter(|&i| i != k).collect();
        match rest.as_slice() {
            [] => 2,
            [d] if self.orbs[*d].partner.is_none() => 3,
            _ => 0,
        }
    }

    pub fn removable(&self) -> Vec<usize> {
        self.live().collect()
    }

    /// Replace orbit `k` by a one-saddle handle of kind `kind`.
    pub fn replace(&self, k: usize, kind: Kind) -> Option<State> {
        let host = self.removal_class(k);
        let guest = kind_class(kind);
        if host == 0 || (host.min(guest) == 1 && host.max(guest) == 2) {
            return None;
        }
        let mut s = self.clone();
        let gone = s.orbs[k].clone();
        s.orbs[k].alive = false;
        if let Some(p) = gone.partner {
            s.orbs[p].partner = None;
        }
        let u = s.saddles;
        s.saddles += 1;
        let v = gone.region;
        s.region_adj[v].insert(u);

        let push = |s: &mut State, index: u8, region: usize| {
            s.orbs.push(Orb {
                index,
                frontier: Some(u),
                region,
                partner: None,
                alive: true,
            });
            s.orbs.len() - 1
        };
        let side = |s: &mut State| {
            s.region_adj.push(BTreeSet::from([u]));
            s.region_adj.len() - 1
        };
        let mut core = None;
        match kind {
            Kind::Hdu | Kind::Ddu(_) => {
                core = Some(push(&mut s, gone.index, v));
                let r = side(&mut s);
                if let Kind::Ddu(d) = kind {
                    push(&mut s, d, r);
                } else {
                    let a = push(&mut s, 0, r);
                    let b = push(&mut s, 2, r);
                    s.orbs[a].partner = Some(b);
                    s.orbs[b].partner = Some(a);
                }
            }
            Kind::Hu => {
                let r = side(&mut s);
                let a = push(&mut s, 0, r);
                let b = push(&mut s, 2, r);
                s.orbs[a].partner = Some(b);
                s.orbs[b].partner = Some(a);
            }
            Kind::Du => {
                push(&mut s, gone.index, v);
            }
        }
        if let (Some(p), Some(c)) = (gone.partner, core) {
            s.orbs[p].partner = Some(c);
            s.orbs[c].partner = Some(p);
        }
        for i in 0..s.orbs.len() {
            if s.orbs[i].alive && s.orbs[i].region == v && s.orbs[i].frontier.is_none() {
                s.orbs[i].frontier = Some(u);
            }
        }
        if host >= 2 && guest >= 2 {
            let f = gone.frontier.expect("solid classes only arise once saddles exist");
            // a replaced attractor sits above its frontier saddle
            s.edges.insert(if gone.index == 2 { (f, u) } else { (u, f) });
        }
        Some(s)
    }

    pub fn dual(&self) -> State {
        let mut s = self.clone();
        for o in &mut s.orbs {
            o.index = 2 - o.index;
        }
        s.edges = self.edges.iter().map(|&(a, b)| (b, a)).collect();
        s
    }

    /// (Hopf pairs, separated index-0 orbits, separated index-2 orbits, saddles).
    pub fn link(&self) -> (usize, usize, usize, usize) {
        let mut pairs = 0;
        let mut d = [0usize; 3];
        for i in self.live() {
            match self.orbs[i].partner {
                Some(p) if p > i => pairs += 1,
                Some(_) => {}
                None => d[self.orbs[i].index as usize] += 1,
            }
        }
        (pairs, d[0], d[2], self.saddles)
    }

    fn describe(&self, perm: &[usize]) -> String {
        let fr = |o: &Orb| o.frontier.map(|f| perm[f] as i64).unwrap_or(-1);
        let mut regions: Vec<String> = Vec::new();
        for (r, adj) in self.region_adj.iter().enumerate() {
            let res = self.residents(r);
            let mut atoms: Vec<String> = Vec::new();
            for &i in &res {
                let o = &self.orbs[i];
                match o.partner {
                    Some(p) if p < i => {}
                    Some(p) => {
                        let q = &self.orbs[p];
                        let mut two = [(o.index, fr(o)), (q.index, fr(q))];
                        two.sort();
                        atoms.push(format!("P{:?}", two));
                    }
                    None => atoms.push(format!("S{:?}", (o.index, fr(o)))),
                }
            }
            if atoms.is_empty() && adj.is_empty() {
                continue;
            }
            atoms.sort();
            let mut a: Vec<usize> = adj.iter().map(|&x| perm[x]).collect();
            a.sort();
            regions.push(format!("{a:?}{atoms:?}"));
        }
        regions.sort();
        let mut e: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (perm[a], perm[b])).collect();
        e.sort();
        format!("{}|{regions:?}|{e:?}", self.saddles)
    }

    /// Smallest description over every saddle permutation.
    pub fn key(&self) -> String {
        let n = self.saddles;
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = self.describe(&perm);
        while next_permutation(&mut perm) {
            let d = self.describe(&perm);
            if d < best {
                best = d;
            }
        }
        best
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Debug, PartialEq, Eq, Clone, Copy, Default)]
pub struct Counts {
    pub flows: usize,
    pub links: usize,
    pub collisions: usize,
    pub class_i: usize,
    pub class_ii: usize,
    pub class_iii: usize,
}

/// Per-level counts for 1..=n saddles.
pub fn census(n: usize, dualize: bool) -> Vec<Counts> {
    let mut level: BTreeMap<String, State> = BTreeMap::from([(State::hopf().key(), State::hopf())]);
    let mut out = Vec::new();
    for _ in 0..n {
        let mut next: BTreeMap<String, State> = BTreeMap::new();
        for s in level.values() {
            for k in s.removable() {
                for kind in KINDS {
                    if let Some(t) = s.replace(k, kind) {
                        next.entry(t.key()).or_insert(t);
                    }
                }
            }
        }
        out.push(summarize(&next, dualize));
        level = next;
    }
    out
}

fn summarize(level: &BTreeMap<String, State>, dualize: bool) -> Counts {
    let mut reps: BTreeMap<String, &State> = BTreeMap::new();
    for (k, s) in level {
        let key = if dualize {
            k.clone().min(s.dual().key())
        } else {
            k.clone()
        };
        reps.entry(key).or_insert(s);
    }
    let mut links: BTreeMap<(usize, usize, usize, usize), usize> = BTreeMap::new();
    let mut c = Counts {
        flows: reps.len(),
        ..Counts::default()
    };
    for s in reps.values() {
        let l = s.link();
        let l = if dualize { l.min((l.0, l.2, l.1, l.3)) } else { l };
        *links.entry(l).or_default() += 1;
        for k in s.removable() {
            match s.removal_class(k) {
                1 => c.class_i += 1,
                2 => c.class_ii += 1,
                3 => c.class_iii += 1,
                _ => {}
            }
        }
    }
    c.links = links.len();
    c.collisions = links.values().filter(|&&m| m > 1).count();
    c
}
