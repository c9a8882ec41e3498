//! Monads on a finite carrier `{0..k-1}` with every `M(A)` finite and
//! elements encoded as indices `0..size`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// A finite monoid given by its multiplication table `table[a * len + b]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monoid {
    pub names: Vec<String>,
    pub unit: usize,
    pub table: Vec<usize>,
}

impl Monoid {
    pub fn new(names: Vec<String>, unit: usize, table: Vec<usize>) -> Result<Monoid> {
        let w = names.len();
        let bad = |msg: String| Err(Error::Model(format!("monoid: {msg}")));
        if w == 0 || unit >= w || table.len() != w * w || table.iter().any(|&x| x >= w) {
            return bad(format!("table must be {w}x{w} with entries below {w} and a valid unit"));
        }
        let m = Monoid { names, unit, table };
        for a in 0..w {
            if m.mul(unit, a) != a || m.mul(a, unit) != a {
                return bad(format!("`{}` is not a unit for `{}`", m.names[unit], m.names[a]));
            }
            for b in 0..w {
                for c in 0..w {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return bad(format!(
                            "not associative at ({}, {}, {})",
                            m.names[a], m.names[b], m.names[c]
                        ));
                    }
                }
            }
        }
        Ok(m)
    }

    /// Words over `gens` of length at most `max_len`, plus an absorbing
    /// element `top` standing for every longer word. This is an honest
    /// monoid (the quotient identifying all long words), so the writer monad
    /// over it satisfies the monad laws exactly.
    pub fn free_truncated(gens: &[&str], max_len: usize) -> Monoid {
        let mut words: Vec<Vec<usize>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &frontier {
                for g in 0..gens.len() {
                    let mut w2 = w.clone();
                    w2.push(g);
                    next.push(w2);
                }
            }
            words.extend(next.iter().cloned());
            frontier = next;
        }
        let top = words.len();
        let index = |w: &[usize]| words.iter().position(|x| x.as_slice() == w);
        let mut table = Vec::with_capacity((top + 1) * (top + 1));
        for a in 0..=top {
            for b in 0..=top {
                let prod = if a == top || b == top {
                    top
                } else {
                    let mut w = words[a].clone();
                    w.extend_from_slice(&words[b]);
                    index(&w).unwrap_or(top)
                };
                table.push(prod);
            }
        }
        let mut names: Vec<String> = words
            .iter()
            .map(|w| {
                if w.is_empty() {
                    "1".to_string()
                } else {
                    w.iter().map(|&g| gens[g]).collect()
                }
            })
            .collect();
        names.push("top".into());
        Monoid { names, unit: 0, table }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.names.len() + b]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EffectKind {
    /// `A + 1`; index `k` is the failure.
    Maybe,
    /// `W × A`; index `w * k + a`.
    Writer(Monoid),
    /// Nonempty subsets; index `mask - 1`.
    Powerset,
    /// Arbitrary tables: `unit[a]` and `bind[m * size^k + code(f)]` where
    /// `code(f) = Σ f(a) · size^(k-1-a)`.
    Tabulated {
        names: Vec<String>,
        unit: Vec<usize>,
        bind: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteEffect {
    pub name: String,
    pub atoms: Vec<String>,
    pub kind: EffectKind,
    size: usize,
}

/// Outcome of checking the monad laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadCheck {
    pub instances: usize,
    pub exhaustive: bool,
}

const EXHAUSTIVE_LIMIT: usize = 4_000_000;
const SAMPLED_TRIPLES: usize = 200_000;

impl FiniteEffect {
    fn build(name: &str, atoms: Vec<String>, kind: EffectKind) -> Result<FiniteEffect> {
        let k = atoms.len();
        if k == 0 {
            return Err(Error::Model("carrier must be nonempty".into()));
        }
        let size = match &kind {
            EffectKind::Maybe => k + 1,
            EffectKind::Writer(m) => m.len() * k,
            EffectKind::Powerset => {
                if k > 12 {
                    return Err(Error::Model("powerset carrier too large".into()));
                }
                (1usize << k) - 1
            }
            EffectKind::Tabulated { names, unit, bind } => {
                let size = names.len();
                let fcount = size
                    .checked_pow(k as u32)
                    .ok_or_else(|| Error::Model("bind table too large".into()))?;
                if unit.len() != k || unit.iter().any(|&u| u >= size) {
                    return Err(Error::Model(format!("unit table needs {k} entries below {size}")));
                }
                if bind.len() != size * fcount || bind.iter().any(|&b| b >= size) {
                    return Err(Error::Model(format!(
                        "bind table needs {} entries below {size}",
                        size * fcount
                    )));
                }
                size
            }
        };
        if size > u16::MAX as usize {
            return Err(Error::Model("M(A) too large".into()));
        }
        Ok(FiniteEffect {
            name: name.to_string(),
            atoms,
            kind,
            size,
        })
    }

    pub fn default_atoms(k: usize) -> Vec<String> {
        (0..k).map(|i| i.to_string()).collect()
    }

    pub fn maybe(k: usize) -> FiniteEffect {
        Self::build("maybe", Self::default_atoms(k), EffectKind::Maybe).expect("maybe effect")
    }

    pub fn writer(k: usize, monoid: Monoid) -> FiniteEffect {
        Self::build("writer", Self::default_atoms(k), EffectKind::Writer(monoid)).expect("writer effect")
    }

    /// Writer over the free monoid on `{a, b}` truncated at length 2.
    pub fn writer_free(k: usize) -> FiniteEffect {
        Self::writer(k, Monoid::free_truncated(&["a", "b"], 2))
    }

    pub fn powerset(k: usize) -> FiniteEffect {
        Self::build("powerset", Self::default_atoms(k), EffectKind::Powerset).expect("powerset effect")
    }

    pub fn with_atoms(mut self, atoms: Vec<String>) -> Result<FiniteEffect> {
        if atoms.len() != self.atoms.len() {
            return Err(Error::Model("atom count changed".into()));
        }
        self.atoms = atoms;
        Ok(self)
    }

    /// An effect from explicit tables; the monad laws are checked.
    pub fn tabulated(name: &str, atoms: Vec<String>, names: Vec<String>, unit: Vec<usize>, bind: Vec<usize>) -> Result<FiniteEffect> {
        let eff = Self::build(name, atoms, EffectKind::Tabulated { names, unit, bind })?;
        eff.check_monad_laws()?;
        Ok(eff)
    }

    /// Tabulate any effect, producing an equivalent `Tabulated` one.
    pub fn to_tabulated(&self) -> FiniteEffect {
        let k = self.carrier_size();
        let unit = (0..k).map(|a| self.unit(a)).collect();
        let fcount = self.size.pow(k as u32);
        let mut bind = Vec::with_capacity(self.size * fcount);
        for m in 0..self.size {
            for code in 0..fcount {
                let f = decode(code, self.size, k);
                bind.push(self.bind(m, |a| f[a]));
            }
        }
        let names = (0..self.size).map(|m| self.render(m)).collect();
        FiniteEffect::build(&self.name, self.atoms.clone(), EffectKind::Tabulated { names, unit, bind }).expect("tabulation")
    }

    pub fn carrier_size(&self) -> usize {
        self.atoms.len()
    }

    /// `|M(A)|`.
    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self, a: usize) -> usize {
        let k = self.carrier_size();
        match &self.kind {
            EffectKind::Maybe => a,
            EffectKind::Writer(m) => m.unit * k + a,
            EffectKind::Powerset => (1 << a) - 1,
            EffectKind::Tabulated { unit, .. } => unit[a],
        }
    }

    pub fn bind(&self, m: usize, f: impl Fn(usize) -> usize) -> usize {
        let k = self.carrier_size();
        match &self.kind {
            EffectKind::Maybe => {
                if m == k {
                    k
                } else {
                    f(m)
                }
            }
            EffectKind::Writer(mon) => {
                let (w1, a) = (m / k, m % k);
                let r = f(a);
                mon.mul(w1, r / k) * k + r % k
            }
            EffectKind::Powerset => {
                let mask = m + 1;
                let mut out = 0;
                for a in 0..k {
                    if mask & (1 << a) != 0 {
                        out |= f(a) + 1;
                    }
                }
                out - 1
            }
            EffectKind::Tabulated { bind, .. } => {
                let code = (0..k).fold(0, |acc, a| acc * self.size + f(a));
                bind[m * self.size.pow(k as u32) + code]
            }
        }
    }

    /// Functorial action `M(π)` of a carrier map.
    pub fn fmap(&self, m: usize, pi: impl Fn(usize) -> usize) -> usize {
        self.bind(m, |a| self.unit(pi(a)))
    }

    /// The unit and associativity laws, exhaustively when the number of
    /// `(m, f, g)` triples is manageable and on seeded samples otherwise.
    pub fn check_monad_laws(&self) -> Result<MonadCheck> {
        let k = self.carrier_size();
        let size = self.size;
        let fcount = size.checked_pow(k as u32).unwrap_or(usize::MAX);
        let fail = |law: &'static str, witness: String| {
            Err(Error::LawViolation {
                structure: self.name.clone(),
                law,
                witness,
            })
        };
        let mut instances = 0;
        for code in 0..fcount.min(EXHAUSTIVE_LIMIT) {
            let f = decode(code, size, k);
            for a in 0..k {
                instances += 1;
                if self.bind(self.unit(a), |x| f[x]) != f[a] {
                    return fail("left unit", format!("a = {}, f = {:?}", self.atoms[a], self.render_fn(&f)));
                }
            }
        }
        for m in 0..size {
            instances += 1;
            if self.bind(m, |x| self.unit(x)) != m {
                return fail("right unit", self.render(m));
            }
        }
        let triples = size.saturating_mul(fcount).saturating_mul(fcount);
        let exhaustive = triples <= EXHAUSTIVE_LIMIT;
        let check = |m: usize, f: &[usize], g: &[usize]| {
            let lhs = self.bind(self.bind(m, |x| f[x]), |y| g[y]);
            let rhs = self.bind(m, |x| self.bind(f[x], |y| g[y]));
            lhs == rhs
        };
        if exhaustive {
            let fs: Vec<Vec<usize>> = (0..fcount).map(|c| decode(c, size, k)).collect();
            for m in 0..size {
                for f in &fs {
                    for g in &fs {
                        instances += 1;
                        if !check(m, f, g) {
                            return fail("associativity", format!("m = {}, f = {:?}, g = {:?}", self.render(m), self.render_fn(f), self.render_fn(g)));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x6d6f6e6164);
            for _ in 0..SAMPLED_TRIPLES {
                let m = rng.gen_range(0..size);
                let f: Vec<usize> = (0..k).map(|_| rng.gen_range(0..size)).collect();
                let g: Vec<usize> = (0..k).map(|_| rng.gen_range(0..size)).collect();
                instances += 1;
                if !check(m, &f, &g) {
                    return fail("associativity", format!("m = {}, f = {:?}, g = {:?}", self.render(m), self.render_fn(&f), self.render_fn(&g)));
                }
            }
        }
        Ok(MonadCheck { instances, exhaustive })
    }

    fn render_fn(&self, f: &[usize]) -> Vec<String> {
        f.iter().map(|&m| self.render(m)).collect()
    }

    pub fn render_atom(&self, a: usize) -> String {
        self.atoms[a].clone()
    }

    pub fn parse_atom(&self, s: &str) -> Result<usize> {
        self.atoms
            .iter()
            .position(|x| x == s.trim())
            .ok_or_else(|| Error::Model(format!("unknown atom `{s}`")))
    }

    /// `maybe`: an atom or `none`; `writer`: `(w,a)`; `powerset`: `{a,b}`;
    /// `tabulated`: the element's declared name.
    pub fn render(&self, m: usize) -> String {
        let k = self.carrier_size();
        match &self.kind {
            EffectKind::Maybe => {
                if m == k {
                    "none".into()
                } else {
                    self.atoms[m].clone()
                }
            }
            EffectKind::Writer(mon) => format!("({},{})", mon.names[m / k], self.atoms[m % k]),
            EffectKind::Powerset => {
                let mask = m + 1;
                let parts: Vec<&str> = (0..k).filter(|a| mask & (1 << a) != 0).map(|a| self.atoms[a].as_str()).collect();
                format!("{{{}}}", parts.join(","))
            }
            EffectKind::Tabulated { names, .. } => names[m].clone(),
        }
    }

    pub fn parse(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        let k = self.carrier_size();
        let bad = || Error::Model(format!("`{s}` is not an element of {}", self.name));
        match &self.kind {
            EffectKind::Maybe => {
                if s == "none" {
                    Ok(k)
                } else {
                    self.parse_atom(s)
                }
            }
            EffectKind::Writer(mon) => {
                let inner = s.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or_else(bad)?;
                let (w, a) = inner.split_once(',').ok_or_else(bad)?;
                let w = mon.index_of(w.trim()).ok_or_else(bad)?;
                Ok(w * k + self.parse_atom(a)?)
            }
            EffectKind::Powerset => {
                let inner = s.strip_prefix('{').and_then(|x| x.strip_suffix('}')).ok_or_else(bad)?;
                let mut mask = 0usize;
                for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                    mask |= 1 << self.parse_atom(part)?;
                }
                if mask == 0 {
                    return Err(bad());
                }
                Ok(mask - 1)
            }
            EffectKind::Tabulated { names, .. } => names.iter().position(|n| n == s).ok_or_else(bad),
        }
    }
}

/// Digits of `code` in base `base`, most significant first, `len` of them.
pub(crate) fn decode(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % base;
        code /= base;
    }
    out
}
