//! Check suites shipped in the binary, one report line per assertion.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use clap::ValueEnum;
use fatflow::enumerate::enumerate_upto;
use fatflow::order::{self, commuting_steps, reorder, saddle_poset, Reordering};
use fatflow::{basic_flow, identify, BasicHandleKind, BasicOp, FatHandle, FlowError, FlowModel, HandleClass, Polarity};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum Suite {
    /// Links of the basic flows and classes of the basic handles.
    Catalog,
    /// Class [I] against class [II] is refused; every other pairing glues.
    Bitorus,
    /// Every removal from every census flow up to n is of class I, II or III.
    ClassClosure,
    /// Heteroclinic edges equal solid-torus identifications, up to n.
    Heteroclinic,
    /// Operation-III flows up to n saddles are chains d_r<u..<d_a.
    F3Chain,
    /// Commuting steps rebuild the same flow; connected steps never commute.
    Commutation,
    All,
}

pub struct Report {
    pub text: String,
    failures: usize,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn check(&mut self, ok: bool, what: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{} {what}", if ok { "PASS" } else { "FAIL" });
        if !ok {
            self.failures += 1;
        }
    }
}

pub fn run(suite: Suite, n: usize) -> Report {
    let mut r = Report {
        text: String::new(),
        failures: 0,
    };
    let suites: Vec<Suite> = match suite {
        Suite::All => Suite::value_variants()
            .iter()
            .copied()
            .filter(|s| *s != Suite::All)
            .collect(),
        s => vec![s],
    };
    for s in suites {
        match s {
            Suite::Catalog => catalog(&mut r),
            Suite::Bitorus => bitorus(&mut r),
            Suite::ClassClosure => census_suite(&mut r, n, "class-closure", class_closure),
            Suite::Heteroclinic => census_suite(&mut r, n, "heteroclinic", heteroclinic),
            Suite::F3Chain => f3_chain(&mut r, n),
            Suite::Commutation => census_suite(&mut r, n, "commutation", commutation),
            Suite::All => unreachable!(),
        }
    }
    let _ = writeln!(r.text, "{} failed", r.failures);
    r
}

fn catalog(r: &mut Report) {
    for (op, want) in [
        (BasicOp::I, "h·h·u"),
        (BasicOp::II(fatflow::OrbitIndex::Attractive), "h·d·u"),
        (BasicOp::III, "d·d·u"),
    ] {
        let got = basic_flow(op).map(|f| f.link_of().shape());
        r.check(got.as_deref() == Ok(want), format_args!("catalog: {op:?} = {want}"));
    }
    for (kind, class) in [
        (BasicHandleKind::Hdu, HandleClass::ClassI),
        (
            BasicHandleKind::Ddu {
                d: fatflow::OrbitIndex::Attractive,
            },
            HandleClass::ClassI,
        ),
        (BasicHandleKind::Hu, HandleClass::ClassII),
        (BasicHandleKind::Du, HandleClass::ClassIII),
    ] {
        let got = FatHandle::basic(kind, Polarity::Attractive).handle_class();
        r.check(got == class, format_args!("catalog: {} is {class}", kind.name()));
    }
}

fn bitorus(r: &mut Report) {
    for a in BasicHandleKind::ALL {
        for b in BasicHandleKind::ALL {
            let res = identify(
                &FatHandle::basic(a, Polarity::Attractive),
                &FatHandle::basic(b, Polarity::Repulsive),
            );
            let mixed: BTreeSet<HandleClass> = [a.class(), b.class()].into();
            let refused = mixed == BTreeSet::from([HandleClass::ClassI, HandleClass::ClassII]);
            let ok = match &res {
                Err(FlowError::Bitorus(..)) => refused,
                Ok(_) => !refused,
                Err(_) => false,
            };
            let verdict = if refused { "refused as Bitorus" } else { "glues" };
            r.check(ok, format_args!("bitorus: {a} + {b} {verdict}"));
        }
    }
}

fn census_suite(r: &mut Report, n: usize, name: &str, per_flow: fn(&FlowModel) -> Result<(), String>) {
    let levels = match enumerate_upto(n, false) {
        Ok(l) => l,
        Err(e) => return r.check(false, format_args!("census n≤{n}: {e}")),
    };
    for c in levels {
        let bad: Vec<String> = c.flows.iter().filter_map(|e| per_flow(&e.flow).err()).take(3).collect();
        let detail = if bad.is_empty() {
            String::new()
        } else {
            format!(" ({})", bad.join("; "))
        };
        r.check(
            bad.is_empty(),
            format_args!("{name}: n={} over {} flows{detail}", c.n, c.len()),
        );
    }
}

fn class_closure(f: &FlowModel) -> Result<(), String> {
    for k in f.removable() {
        f.remove_orbit(k).map_err(|e| format!("{}: {e}", f.canonical()))?;
    }
    Ok(())
}

fn heteroclinic(f: &FlowModel) -> Result<(), String> {
    let solid = f
        .construction_log()
        .iter()
        .filter(|s| s.derived_handle_class.is_solid() && s.attached_class.is_solid())
        .count();
    let edges = f.heteroclinic_edges().len();
    if edges == solid {
        Ok(())
    } else {
        Err(format!(
            "{}: {edges} edges, {solid} solid identifications",
            f.canonical()
        ))
    }
}

fn commutation(f: &FlowModel) -> Result<(), String> {
    let commuting = commuting_steps(f).map_err(|e| e.to_string())?;
    for &(i, j) in &commuting {
        let same = order::swapped(f, i, j).map(|g| g.canonical() == f.canonical());
        if same != Some(true) {
            return Err(format!("{}: steps {},{} do not rebuild", f.canonical(), i + 1, j + 1));
        }
    }
    let p = saddle_poset(f).map_err(|e| e.to_string())?;
    let step: HashMap<_, _> = f
        .construction_log()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.new_saddle, i))
        .collect();
    for &(a, b) in p.covers() {
        let (i, j) = (step[&a].min(step[&b]), step[&a].max(step[&b]));
        if reorder(f, i, j) == Reordering::Commutes {
            return Err(format!(
                "{}: connected steps {},{} commute",
                f.canonical(),
                i + 1,
                j + 1
            ));
        }
    }
    Ok(())
}

fn f3_chain(r: &mut Report, n: usize) {
    let mut level = vec![FlowModel::generator()];
    for size in 1..=n {
        let mut next: Vec<FlowModel> = Vec::new();
        let mut seen = BTreeSet::new();
        for f in &level {
            for k in f.removable() {
                if let Ok(g) = f.replace_orbit(k, BasicHandleKind::Du) {
                    if seen.insert(g.canonical()) {
                        next.push(g);
                    }
                }
            }
        }
        let ok = next.iter().all(|f| {
            order::f3_poset(f).is_ok_and(|p| {
                let chain = order::f3_chain(f).unwrap_or_default();
                p.is_total()
                    && chain.len() == size + 2
                    && p.label(chain[0]) == "d_r"
                    && p.label(chain[size + 1]) == "d_a"
            })
        });
        r.check(
            ok,
            format_args!("f3-chain: n={size}, {} flow(s) form d_r<u1<…<u{size}<d_a", next.len()),
        );
        level = next;
    }
}
