//! Law suites over operad instances, either exhaustive over enumerated
//! carriers or sampled with a fixed seed.

use std::collections::HashMap;
use std::fmt::{Debug, Write as _};
use std::rc::Rc;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::{Comp, FreydOperad, Operad, RetImage, SampleRng, Val, Verdict};
use crate::error::Result;
use crate::renaming::Renaming;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Regime {
    /// Every element of every carrier up to `arity_cap`.
    Exhaustive { arity_cap: usize },
    /// `samples` random instances per law.
    Sampled { arity_cap: usize, samples: usize, seed: u64 },
}

impl Regime {
    pub fn arity_cap(&self) -> usize {
        match *self {
            Regime::Exhaustive { arity_cap } | Regime::Sampled { arity_cap, .. } => arity_cap,
        }
    }

    fn seed(&self) -> u64 {
        match *self {
            Regime::Exhaustive { .. } => 0,
            Regime::Sampled { seed, .. } => seed,
        }
    }
}

/// Which renamings an S-cartesian suite quantifies over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RenClass {
    All,
    Permutations,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub law: String,
    pub detail: String,
}

const KEPT_WITNESSES: usize = 20;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub instances: usize,
    pub failed: usize,
    pub unknowns: usize,
    /// The first few failing instances.
    pub failures: Vec<Witness>,
    pub unknown_witnesses: Vec<Witness>,
    pub notes: Vec<String>,
}

impl LawReport {
    pub fn new(suite: impl Into<String>) -> Self {
        LawReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    /// No failures and no undecided instances.
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.unknowns == 0
    }

    pub fn absorb(&mut self, other: LawReport) {
        self.instances += other.instances;
        self.failed += other.failed;
        self.unknowns += other.unknowns;
        let room = KEPT_WITNESSES.saturating_sub(self.failures.len());
        self.failures.extend(other.failures.into_iter().take(room));
        let room = KEPT_WITNESSES.saturating_sub(self.unknown_witnesses.len());
        self.unknown_witnesses.extend(other.unknown_witnesses.into_iter().take(room));
        self.notes.extend(other.notes);
    }

    pub fn fail(&mut self, law: &str, detail: String) {
        self.instances += 1;
        self.failed += 1;
        if self.failures.len() < KEPT_WITNESSES {
            self.failures.push(Witness { law: law.to_string(), detail });
        }
    }

    pub fn record(&mut self, law: &str, verdict: Verdict, detail: impl FnOnce() -> String) {
        self.instances += 1;
        match verdict {
            Verdict::Equal => {}
            Verdict::Distinct => {
                self.failed += 1;
                if self.failures.len() < KEPT_WITNESSES {
                    self.failures.push(Witness { law: law.to_string(), detail: detail() });
                }
            }
            Verdict::Unknown => {
                self.unknowns += 1;
                if self.unknown_witnesses.len() < KEPT_WITNESSES {
                    self.unknown_witnesses.push(Witness { law: law.to_string(), detail: detail() });
                }
            }
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = if self.failed > 0 {
            "FAIL"
        } else if self.unknowns > 0 {
            "UNKNOWN"
        } else {
            "PASS"
        };
        let _ = writeln!(
            out,
            "{status} {}: {} instances, {} failures, {} unknown",
            self.suite, self.instances, self.failed, self.unknowns
        );
        for w in &self.failures {
            let _ = writeln!(out, "  failure [{}] {}", w.law, w.detail);
        }
        for w in &self.unknown_witnesses {
            let _ = writeln!(out, "  unknown [{}] {}", w.law, w.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "  note: {n}");
        }
        out
    }
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    Main(usize),
    Alt(usize),
    Fixed(usize),
}

#[derive(Clone, Debug)]
struct Shape {
    slots: Vec<Slot>,
    rens: Vec<(usize, usize)>,
    params: Vec<usize>,
}

fn shape(slots: Vec<Slot>, rens: Vec<(usize, usize)>, params: Vec<usize>) -> Shape {
    Shape { slots, rens, params }
}

fn splits(total: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=total).map(move |a| (a, total - a))
}

struct Harness<'a, E> {
    main: &'a dyn Operad<Elem = E>,
    alt: Option<&'a dyn Operad<Elem = E>>,
    fixed: Vec<E>,
    regime: Regime,
    ren_class: RenClass,
    rng: SampleRng,
    pools: HashMap<(bool, usize), Option<Rc<Vec<E>>>>,
    ren_pools: HashMap<(usize, usize), Rc<Vec<Renaming>>>,
    report: LawReport,
}

impl<'a, E: Clone + Debug> Harness<'a, E> {
    fn new(main: &'a dyn Operad<Elem = E>, regime: Regime, suite: &str) -> Self {
        Harness {
            main,
            alt: None,
            fixed: Vec::new(),
            regime,
            ren_class: RenClass::All,
            rng: SampleRng::seed_from_u64(regime.seed()),
            pools: HashMap::new(),
            ren_pools: HashMap::new(),
            report: LawReport::new(suite),
        }
    }

    fn source(&self, alt: bool) -> &'a dyn Operad<Elem = E> {
        if alt {
            self.alt.expect("alternate operad configured")
        } else {
            self.main
        }
    }

    fn pool(&mut self, alt: bool, n: usize) -> Option<Rc<Vec<E>>> {
        let op = self.source(alt);
        self.pools
            .entry((alt, n))
            .or_insert_with(|| op.enumerate(n).map(Rc::new))
            .clone()
    }

    fn ren_pool(&mut self, m: usize, n: usize) -> Rc<Vec<Renaming>> {
        let class = self.ren_class;
        self.ren_pools
            .entry((m, n))
            .or_insert_with(|| {
                let all = Renaming::enumerate(m, n);
                Rc::new(match class {
                    RenClass::All => all,
                    RenClass::Permutations => all.into_iter().filter(Renaming::is_permutation).collect(),
                })
            })
            .clone()
    }

    fn random_renaming(&mut self, m: usize, n: usize) -> Option<Renaming> {
        match self.ren_class {
            RenClass::All => {
                if n == 0 && m > 0 {
                    return None;
                }
                let map = (0..m).map(|_| self.rng.gen_range(1..=n)).collect();
                Renaming::new(map, n).ok()
            }
            RenClass::Permutations => {
                if m != n {
                    return None;
                }
                let mut map: Vec<usize> = (1..=n).collect();
                for i in (1..map.len()).rev() {
                    let j = self.rng.gen_range(0..=i);
                    map.swap(i, j);
                }
                Renaming::new(map, n).ok()
            }
        }
    }

    fn render_instance(&self, s: &Shape, elems: &[&E], rens: &[&Renaming]) -> String {
        let mut out = String::new();
        if !s.params.is_empty() {
            let _ = write!(out, "params {:?}; ", s.params);
        }
        for (slot, e) in s.slots.iter().zip(elems) {
            let op = match slot {
                Slot::Alt(_) => self.source(true),
                _ => self.main,
            };
            let _ = write!(out, "arg {}; ", op.render(e));
        }
        for r in rens {
            let _ = write!(out, "ren {r}; ");
        }
        out
    }

    /// Run one law over all shapes. `body` returns the two sides, compared in `target`.
    fn law<T: Clone + Debug>(
        &mut self,
        name: &str,
        shapes: &[Shape],
        target: &dyn Operad<Elem = T>,
        body: impl Fn(&[&E], &[&Renaming], &[usize]) -> Result<(T, T)>,
    ) {
        let check = |h: &mut Self, s: &Shape, elems: &[&E], rens: &[&Renaming]| match body(elems, rens, &s.params) {
            Ok((lhs, rhs)) => match target.equals(&lhs, &rhs) {
                Verdict::Equal => h.report.instances += 1,
                other => {
                    let text = format!(
                        "{}lhs {}; rhs {}",
                        h.render_instance(s, elems, rens),
                        target.render(&lhs),
                        target.render(&rhs)
                    );
                    h.report.record(name, other, || text);
                }
            },
            Err(e) => {
                let text = format!("{}error: {e}", h.render_instance(s, elems, rens));
                h.report.fail(name, text);
            }
        };

        match self.regime {
            Regime::Exhaustive { .. } => {
                for s in shapes {
                    let mut pools: Vec<Rc<Vec<E>>> = Vec::new();
                    for slot in &s.slots {
                        let pool = match *slot {
                            Slot::Main(n) => self.pool(false, n),
                            Slot::Alt(n) => self.pool(true, n),
                            Slot::Fixed(i) => Some(Rc::new(vec![self.fixed[i].clone()])),
                        };
                        match pool {
                            Some(p) => pools.push(p),
                            None => {
                                let note = format!("{name}: no enumeration for slot {slot:?}");
                                if !self.report.notes.contains(&note) {
                                    self.report.notes.push(note.clone());
                                }
                                self.report.fail(name, note);
                                break;
                            }
                        }
                    }
                    if pools.len() < s.slots.len() {
                        continue;
                    }
                    let rpools: Vec<Rc<Vec<Renaming>>> = s.rens.iter().map(|&(m, n)| self.ren_pool(m, n)).collect();
                    let sizes: Vec<usize> = pools.iter().map(|p| p.len()).chain(rpools.iter().map(|p| p.len())).collect();
                    if sizes.contains(&0) {
                        continue;
                    }
                    let mut idx = vec![0; sizes.len()];
                    'odometer: loop {
                        let elems: Vec<&E> = pools.iter().zip(&idx).map(|(p, &i)| &p[i]).collect();
                        let rens: Vec<&Renaming> = rpools.iter().zip(&idx[pools.len()..]).map(|(p, &i)| &p[i]).collect();
                        check(self, s, &elems, &rens);
                        let mut k = sizes.len();
                        loop {
                            if k == 0 {
                                break 'odometer;
                            }
                            k -= 1;
                            idx[k] += 1;
                            if idx[k] < sizes[k] {
                                break;
                            }
                            idx[k] = 0;
                        }
                    }
                }
            }
            Regime::Sampled { samples, .. } => {
                if shapes.is_empty() {
                    return;
                }
                let mut drawn = 0;
                let mut attempts = 0;
                while drawn < samples && attempts < samples * 20 {
                    attempts += 1;
                    let s = &shapes[self.rng.gen_range(0..shapes.len())];
                    let mut elems: Vec<E> = Vec::new();
                    for slot in &s.slots {
                        let e = match *slot {
                            Slot::Main(n) => self.main.sample(n, &mut self.rng),
                            Slot::Alt(n) => self.source(true).sample(n, &mut self.rng),
                            Slot::Fixed(i) => Some(self.fixed[i].clone()),
                        };
                        match e {
                            Some(e) => elems.push(e),
                            None => break,
                        }
                    }
                    if elems.len() < s.slots.len() {
                        let note = format!("{name}: no sampler for shape {:?}", s.slots);
                        if !self.report.notes.contains(&note) {
                            self.report.notes.push(note.clone());
                            self.report.fail(name, note);
                        }
                        continue;
                    }
                    let rens: Option<Vec<Renaming>> = s.rens.iter().map(|&(m, n)| self.random_renaming(m, n)).collect();
                    let Some(rens) = rens else { continue };
                    let er: Vec<&E> = elems.iter().collect();
                    let rr: Vec<&Renaming> = rens.iter().collect();
                    check(self, s, &er, &rr);
                    drawn += 1;
                }
            }
        }
    }
}

fn id(n: usize) -> Renaming {
    Renaming::identity(n)
}

fn preoperad_laws<E: Clone + Debug>(h: &mut Harness<'_, E>) {
    let op = h.main;
    let cap = h.regime.arity_cap();
    let shapes: Vec<Shape> = (0..=cap).map(|m| shape(vec![Slot::Main(m)], vec![], vec![])).collect();
    h.law("left unit", &shapes, op, |e, _, _| Ok((op.subst(&op.ident(), 0, e[0], 0)?, e[0].clone())));

    let shapes: Vec<Shape> = (1..=cap)
        .flat_map(|a| splits(a - 1).map(move |(n1, n2)| shape(vec![Slot::Main(a)], vec![], vec![n1, n2])))
        .collect();
    h.law("right unit", &shapes, op, |e, _, p| Ok((op.subst(e[0], p[0], &op.ident(), p[1])?, e[0].clone())));

    let mut shapes = Vec::new();
    for fa in 1..=cap {
        for (m1, m2) in splits(fa - 1) {
            for ga in 1..=cap {
                for (n1, n2) in splits(ga - 1) {
                    for ha in 0..=cap {
                        shapes.push(shape(vec![Slot::Main(fa), Slot::Main(ga), Slot::Main(ha)], vec![], vec![m1, m2, n1, n2]));
                    }
                }
            }
        }
    }
    h.law("associativity", &shapes, op, |e, _, p| {
        let (f, g, hh) = (e[0], e[1], e[2]);
        let (m1, m2, n1, n2) = (p[0], p[1], p[2], p[3]);
        let lhs = op.subst(&op.subst(f, m1, g, m2)?, m1 + n1, hh, n2 + m2)?;
        let rhs = op.subst(f, m1, &op.subst(g, n1, hh, n2)?, m2)?;
        Ok((lhs, rhs))
    });
}

pub fn check_preoperad<O: Operad>(op: &O, regime: Regime) -> LawReport {
    let mut h = Harness::new(op, regime, &format!("preoperad {}", op.name()));
    preoperad_laws(&mut h);
    h.report
}

fn s_cartesian_laws<E: Clone + Debug>(h: &mut Harness<'_, E>, class: RenClass) {
    h.ren_class = class;
    let op = h.main;
    let cap = h.regime.arity_cap();
    let perms = class == RenClass::Permutations;

    let shapes: Vec<Shape> = (0..=cap).map(|n| shape(vec![Slot::Main(n)], vec![], vec![])).collect();
    h.law("renaming identity", &shapes, op, |e, _, _| Ok((op.rename(e[0], &id(op.arity(e[0])))?, e[0].clone())));

    let mut shapes = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap {
            for d in 0..=cap {
                if !perms || (a == b && b == d) {
                    shapes.push(shape(vec![Slot::Main(a)], vec![(a, b), (b, d)], vec![]));
                }
            }
        }
    }
    h.law("renaming composition", &shapes, op, |e, r, _| {
        let lhs = op.rename(e[0], &r[0].compose(r[1])?)?;
        let rhs = op.rename(&op.rename(e[0], r[0])?, r[1])?;
        Ok((lhs, rhs))
    });

    let mut shapes = Vec::new();
    for fa in 1..=cap {
        for (n1, n2) in splits(fa - 1) {
            for n in 0..=cap {
                let targets: Vec<(usize, usize, usize)> = if perms {
                    vec![(n1, n, n2)]
                } else {
                    let mut t = Vec::new();
                    for m1 in 0..cap {
                        for m2 in 0..cap - m1 {
                            for m in 0..=cap {
                                t.push((m1, m, m2));
                            }
                        }
                    }
                    t
                };
                for (m1, m, m2) in targets {
                    shapes.push(shape(
                        vec![Slot::Main(fa), Slot::Main(n)],
                        vec![(n1, m1), (n, m), (n2, m2)],
                        vec![n1, n2, m1, m2],
                    ));
                }
            }
        }
    }
    h.law("renaming naturality", &shapes, op, |e, r, p| {
        let (f, g) = (e[0], e[1]);
        let (n1, n2, m1, m2) = (p[0], p[1], p[2], p[3]);
        let outer = r[0].tensor(r[1]).tensor(r[2]);
        let lhs = op.rename(&op.subst(f, n1, g, n2)?, &outer)?;
        let rhs = op.subst(&op.rename(f, &r[0].tensor(&id(1)).tensor(r[2]))?, m1, &op.rename(g, r[1])?, m2)?;
        Ok((lhs, rhs))
    });
}

pub fn check_s_cartesian<O: Operad>(op: &O, class: RenClass, regime: Regime) -> LawReport {
    let label = match class {
        RenClass::All => "Ren",
        RenClass::Permutations => "Perm",
    };
    let mut h = Harness::new(op, regime, &format!("{label}-cartesian {}", op.name()));
    s_cartesian_laws(&mut h, class);
    h.report
}

fn symmetric_laws<E: Clone + Debug>(h: &mut Harness<'_, E>) {
    let op = h.main;
    let cap = h.regime.arity_cap();
    let mut shapes = Vec::new();
    for fa in 2..=cap {
        for (m1, m2) in splits(fa - 2) {
            for n in 0..=cap {
                shapes.push(shape(vec![Slot::Main(fa), Slot::Main(n)], vec![], vec![m1, m2]));
            }
        }
    }
    let twist = |m1: usize, m2: usize| Renaming::swap(1, 1).pad(m1, m2);
    h.law("symmetry naturality (left)", &shapes, op, |e, _, p| {
        let (f, g, m1, m2) = (e[0], e[1], p[0], p[1]);
        let n = op.arity(g);
        let lhs = op.subst(&op.rename(f, &twist(m1, m2))?, m1, g, 1 + m2)?;
        let rhs = op.rename(&op.subst(f, m1 + 1, g, m2)?, &Renaming::swap(1, n).pad(m1, m2))?;
        Ok((lhs, rhs))
    });
    h.law("symmetry naturality (right)", &shapes, op, |e, _, p| {
        let (f, g, m1, m2) = (e[0], e[1], p[0], p[1]);
        let n = op.arity(g);
        let lhs = op.subst(&op.rename(f, &twist(m1, m2))?, m1 + 1, g, m2)?;
        let rhs = op.rename(&op.subst(f, m1, g, 1 + m2)?, &Renaming::swap(n, 1).pad(m1, m2))?;
        Ok((lhs, rhs))
    });
}

/// Permutation action plus naturality of the swaps.
pub fn check_symmetric<O: Operad>(op: &O, regime: Regime) -> LawReport {
    let mut h = Harness::new(op, regime, &format!("symmetric {}", op.name()));
    s_cartesian_laws(&mut h, RenClass::Permutations);
    symmetric_laws(&mut h);
    h.report
}

/// Both commutation displays; `g1` and `g2` come from the given slots.
fn commute_law<E: Clone + Debug>(h: &mut Harness<'_, E>, name: &str, g1: impl Fn(usize) -> Slot, g2: impl Fn(usize) -> Slot) {
    let op = h.main;
    let cap = h.regime.arity_cap();
    let mut shapes = Vec::new();
    for fa in 2..=cap.max(2) {
        for m1 in 0..=fa - 2 {
            for m in 0..=fa - 2 - m1 {
                let m2 = fa - 2 - m1 - m;
                for n1 in 0..=cap {
                    for n2 in 0..=cap {
                        shapes.push(shape(vec![Slot::Main(fa), g1(n1), g2(n2)], vec![], vec![m1, m, m2]));
                    }
                }
            }
        }
    }
    let commutes = |f: &E, a: &E, b: &E, m1: usize, m: usize, m2: usize| -> Result<(E, E)> {
        let (na, nb) = (op.arity(a), op.arity(b));
        let lhs = op.subst(&op.subst(f, m1, a, m + 1 + m2)?, m1 + na + m, b, m2)?;
        let rhs = op.subst(&op.subst(f, m1 + 1 + m, b, m2)?, m1, a, m + nb + m2)?;
        Ok((lhs, rhs))
    };
    h.law(&format!("{name} (first display)"), &shapes, op, |e, _, p| commutes(e[0], e[1], e[2], p[0], p[1], p[2]));
    h.law(&format!("{name} (second display)"), &shapes, op, |e, _, p| commutes(e[0], e[2], e[1], p[0], p[1], p[2]));
}

/// `f` and `g` commute in every context within the arity cap.
pub fn check_centrality<O: Operad>(op: &O, f: &O::Elem, g: &O::Elem, regime: Regime) -> LawReport {
    let mut h = Harness::new(op, regime, &format!("centrality {}", op.name()));
    h.fixed = vec![f.clone(), g.clone()];
    commute_law(&mut h, "commutation", |_| Slot::Fixed(0), |_| Slot::Fixed(1));
    h.report
}

fn cartesian_laws<E: Clone + Debug>(h: &mut Harness<'_, E>) {
    let op = h.main;
    let cap = h.regime.arity_cap();
    preoperad_laws(h);
    s_cartesian_laws(h, RenClass::All);
    symmetric_laws(h);

    let mut shapes = Vec::new();
    for total in 0..=cap {
        for (m1, m2) in splits(total) {
            for n in 0..=cap {
                shapes.push(shape(vec![Slot::Main(total), Slot::Main(n)], vec![], vec![m1, m2]));
            }
        }
    }
    h.law("discard naturality", &shapes, op, |e, _, p| {
        let (f, g, m1, m2) = (e[0], e[1], p[0], p[1]);
        let n = op.arity(g);
        let lhs = op.subst(&op.rename(f, &Renaming::discard(1).pad(m1, m2))?, m1, g, m2)?;
        let rhs = op.rename(f, &Renaming::discard(n).pad(m1, m2))?;
        Ok((lhs, rhs))
    });

    let mut shapes = Vec::new();
    for fa in 2..=cap {
        for (m1, m2) in splits(fa - 2) {
            for n in 0..=cap {
                shapes.push(shape(vec![Slot::Main(fa), Slot::Main(n)], vec![], vec![m1, m2]));
            }
        }
    }
    h.law("copy naturality", &shapes, op, |e, _, p| {
        let (f, g, m1, m2) = (e[0], e[1], p[0], p[1]);
        let n = op.arity(g);
        let lhs = op.subst(&op.rename(f, &Renaming::copy(1).pad(m1, m2))?, m1, g, m2)?;
        let doubled = op.subst(&op.subst(f, m1, g, 1 + m2)?, m1 + n, g, m2)?;
        let rhs = op.rename(&doubled, &Renaming::copy(n).pad(m1, m2))?;
        Ok((lhs, rhs))
    });

    commute_law(h, "centrality", Slot::Main, Slot::Main);
}

/// Preoperad, Ren-cartesian and symmetric laws, natural copy and discard,
/// and centrality of every pair of elements.
pub fn check_cartesian_operad<O: Operad>(op: &O, regime: Regime) -> LawReport {
    let mut h = Harness::new(op, regime, &format!("cartesian operad {}", op.name()));
    cartesian_laws(&mut h);
    h.report
}

/// `ret` preserves identity, substitution and renaming.
pub fn check_ret_functor<F: FreydOperad>(freyd: &F, regime: Regime) -> LawReport {
    let (vals, comps) = (freyd.values(), freyd.comps());
    let mut h = Harness::new(vals, regime, "ret functor");
    let cap = regime.arity_cap();
    h.law("ret identity", &[shape(vec![], vec![], vec![])], comps, |_, _, _| {
        Ok((freyd.ret(&vals.ident()), comps.ident()))
    });
    let mut shapes = Vec::new();
    for fa in 1..=cap {
        for (n1, n2) in splits(fa - 1) {
            for n in 0..=cap {
                shapes.push(shape(vec![Slot::Main(fa), Slot::Main(n)], vec![], vec![n1, n2]));
            }
        }
    }
    h.law("ret substitution", &shapes, comps, |e, _, p| {
        let lhs = freyd.ret(&vals.subst(e[0], p[0], e[1], p[1])?);
        let rhs = comps.subst(&freyd.ret(e[0]), p[0], &freyd.ret(e[1]), p[1])?;
        Ok((lhs, rhs))
    });
    let mut shapes = Vec::new();
    for a in 0..=cap {
        for b in 0..=cap {
            shapes.push(shape(vec![Slot::Main(a)], vec![(a, b)], vec![]));
        }
    }
    h.law("ret renaming", &shapes, comps, |e, r, _| {
        Ok((freyd.ret(&vals.rename(e[0], r[0])?), comps.rename(&freyd.ret(e[0]), r[0])?))
    });
    h.report
}

/// Values form a cartesian operad, computations a symmetric Ren-cartesian
/// preoperad, `ret` is a cartesian functor whose image is a cartesian
/// operad of elements central among all computations.
pub fn check_freyd<F: FreydOperad>(freyd: &F, regime: Regime) -> LawReport {
    let mut report = LawReport::new(format!("freyd {} / {}", freyd.values().name(), freyd.comps().name()));
    report.absorb(check_cartesian_operad(freyd.values(), regime));

    let comps = freyd.comps();
    let mut h = Harness::new(comps, regime, "computations");
    preoperad_laws(&mut h);
    s_cartesian_laws(&mut h, RenClass::All);
    symmetric_laws(&mut h);
    report.absorb(h.report);

    report.absorb(check_ret_functor(freyd, regime));

    let image = RetImage(freyd);
    report.absorb(check_cartesian_operad(&image, regime));

    let mut h = Harness::new(comps, regime, "ret-image centrality");
    h.alt = Some(&image);
    commute_law(&mut h, "ret-image central", Slot::Alt, Slot::Main);
    report.absorb(h.report);
    report
}

/// The two weak-closure equations:
/// `app{0 ⊣ ret(abs f) ⊢ 1} = f` and
/// `abs(f{m1 ⊣ ret v ⊢ m2 + 1}) = abs(f){m1 ⊣ v ⊢ m2}`.
pub fn check_weak_closure<F: FreydOperad>(freyd: &F, regime: Regime) -> LawReport {
    let mut report = LawReport::new("weak closure");
    let (vals, comps) = (freyd.values(), freyd.comps());
    let Some(app) = freyd.app() else {
        report.fail("closure", "structure has no closure".into());
        return report;
    };
    let abs = |n: usize, m: &_| freyd.abs(n, m).expect("closure present");
    let cap = regime.arity_cap();

    // Shapes: beta uses f ∈ C(n+1); compatibility uses f ∈ C(m1+1+m2+1), v ∈ V(n).
    let beta_arities: Vec<usize> = (1..=cap.max(1)).collect();
    let mut compat: Vec<(usize, usize, usize)> = Vec::new();
    for total in 0..cap.max(1) {
        for (m1, m2) in splits(total) {
            for n in 0..=cap {
                compat.push((m1, m2, n));
            }
        }
    }

    let beta = |report: &mut LawReport, f: &Comp<F>| {
        let n = comps.arity(f) - 1;
        let lhs = abs(n, f).and_then(|a| comps.subst(&app, 0, &freyd.ret(&a), 1));
        match lhs {
            Ok(lhs) => report.record("beta", comps.equals(&lhs, f), || {
                format!("f {}; lhs {}", comps.render(f), comps.render(&lhs))
            }),
            Err(e) => report.fail("beta", format!("f {}; error: {e}", comps.render(f))),
        }
    };
    let compat_check = |report: &mut LawReport, f: &Comp<F>, v: &Val<F>, m1: usize, m2: usize| {
        let n = vals.arity(v);
        let sides = (|| -> Result<_> {
            let lhs = abs(m1 + n + m2, &comps.subst(f, m1, &freyd.ret(v), m2 + 1)?)?;
            let rhs = vals.subst(&abs(m1 + 1 + m2, f)?, m1, v, m2)?;
            Ok((lhs, rhs))
        })();
        match sides {
            Ok((lhs, rhs)) => report.record("abstraction substitution", vals.equals(&lhs, &rhs), || {
                format!(
                    "params [{m1}, {m2}]; f {}; v {}; lhs {}; rhs {}",
                    comps.render(f),
                    vals.render(v),
                    vals.render(&lhs),
                    vals.render(&rhs)
                )
            }),
            Err(e) => report.fail("abstraction substitution", format!("error: {e}")),
        }
    };

    match regime {
        Regime::Exhaustive { .. } => {
            for &a in &beta_arities {
                match comps.enumerate(a) {
                    Some(fs) => fs.iter().for_each(|f| beta(&mut report, f)),
                    None => report.fail("beta", format!("no enumeration at arity {a}")),
                }
            }
            for &(m1, m2, n) in &compat {
                match (comps.enumerate(m1 + m2 + 2), vals.enumerate(n)) {
                    (Some(fs), Some(vs)) => {
                        for f in &fs {
                            for v in &vs {
                                compat_check(&mut report, f, v, m1, m2);
                            }
                        }
                    }
                    _ => report.fail("abstraction substitution", "no enumeration".into()),
                }
            }
        }
        Regime::Sampled { samples, seed, .. } => {
            let mut rng = SampleRng::seed_from_u64(seed);
            for _ in 0..samples {
                let a = beta_arities[rng.gen_range(0..beta_arities.len())];
                match comps.sample(a, &mut rng) {
                    Some(f) => beta(&mut report, &f),
                    None => report.fail("beta", "no sampler".into()),
                }
                let (m1, m2, n) = compat[rng.gen_range(0..compat.len())];
                match (comps.sample(m1 + m2 + 2, &mut rng), vals.sample(n, &mut rng)) {
                    (Some(f), Some(v)) => compat_check(&mut report, &f, &v, m1, m2),
                    _ => report.fail("abstraction substitution", "no sampler".into()),
                }
            }
        }
    }
    report
}
