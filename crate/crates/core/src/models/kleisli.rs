//! Kleisli Freyd operads: values `A^n -> A`, computations `A^n -> M(A)`.

use std::fmt;

use rand::Rng;

use super::effect::FiniteEffect;
use crate::error::{check_arity, Error, Result};
use crate::operad::{FreydOperad, Operad, SampleRng, Verdict};
use crate::renaming::Renaming;

/// Largest carrier enumerated in full.
pub const ENUMERATION_LIMIT: usize = 1 << 20;

/// A function on `n`-tuples, tabulated by the base-`k` code of the
/// argument tuple (first argument most significant).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Table {
    pub arity: usize,
    pub entries: Vec<u16>,
}

impl Table {
    pub fn new(arity: usize, entries: Vec<u16>) -> Table {
        Table { arity, entries }
    }

    pub fn constant(arity: usize, k: usize, out: usize) -> Table {
        Table::new(arity, vec![out as u16; k.pow(arity as u32)])
    }

    pub fn from_fn(arity: usize, k: usize, f: impl Fn(&[usize]) -> usize) -> Table {
        let mut args = vec![0; arity];
        let entries = (0..k.pow(arity as u32))
            .map(|code| {
                fill_digits(code, k, &mut args);
                f(&args) as u16
            })
            .collect();
        Table::new(arity, entries)
    }

    /// Output at the given arguments.
    pub fn at(&self, k: usize, args: &[usize]) -> usize {
        let code = args.iter().fold(0, |acc, &a| acc * k + a);
        self.entries[code] as usize
    }

    fn map(&self, f: impl Fn(usize) -> usize) -> Table {
        Table::new(self.arity, self.entries.iter().map(|&e| f(e as usize) as u16).collect())
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/{}", self.entries, self.arity)
    }
}

fn fill_digits(mut code: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = code % k;
        code /= k;
    }
}

fn pow(k: usize, e: usize) -> usize {
    k.pow(e as u32)
}

/// Entries of the substitution `f{n1 ⊣ g ⊢ n2}` for an arbitrary way of
/// combining `g`'s output with `f`'s row.
fn subst_entries(k: usize, f: &Table, n1: usize, g: &Table, n2: usize, combine: impl Fn(usize, &dyn Fn(usize) -> usize) -> usize) -> Result<Table> {
    check_arity("substitution", f.arity, n1 + 1 + n2)?;
    let m = g.arity;
    let arity = n1 + m + n2;
    let (right_span, mid_span) = (pow(k, n2), pow(k, m));
    let entries = (0..pow(k, arity))
        .map(|x| {
            let left = x / (mid_span * right_span);
            let mid = (x / right_span) % mid_span;
            let right = x % right_span;
            let row = |b: usize| f.entries[(left * k + b) * right_span + right] as usize;
            combine(g.entries[mid] as usize, &row) as u16
        })
        .collect();
    Ok(Table::new(arity, entries))
}

fn rename_entries(k: usize, f: &Table, r: &Renaming) -> Result<Table> {
    check_arity("renaming", f.arity, r.dom())?;
    let n = r.cod();
    let mut args = vec![0; n];
    let entries = (0..pow(k, n))
        .map(|x| {
            fill_digits(x, k, &mut args);
            let code = r.map().iter().fold(0, |acc, &i| acc * k + args[i - 1]);
            f.entries[code]
        })
        .collect();
    Ok(Table::new(n, entries))
}

fn enumerate_tables(arity: usize, k: usize, outputs: usize) -> Option<Vec<Table>> {
    let rows = pow(k, arity);
    let total = outputs.checked_pow(rows as u32)?;
    if total > ENUMERATION_LIMIT {
        return None;
    }
    Some(
        (0..total)
            .map(|code| {
                let mut digits = vec![0; rows];
                fill_digits(code, outputs, &mut digits);
                Table::new(arity, digits.into_iter().map(|d| d as u16).collect())
            })
            .collect(),
    )
}

fn sample_table(arity: usize, k: usize, outputs: usize, rng: &mut SampleRng) -> Table {
    Table::new(arity, (0..pow(k, arity)).map(|_| rng.gen_range(0..outputs) as u16).collect())
}

/// Functions `A^n -> A` (the clone of all operations on `A`).
#[derive(Clone, Debug)]
pub struct KleisliValues {
    pub atoms: Vec<String>,
}

impl KleisliValues {
    pub fn new(k: usize) -> KleisliValues {
        KleisliValues {
            atoms: FiniteEffect::default_atoms(k),
        }
    }

    pub fn k(&self) -> usize {
        self.atoms.len()
    }

    /// The projection onto argument `i` (1-based) at arity `n`.
    pub fn projection(&self, n: usize, i: usize) -> Table {
        Table::from_fn(n, self.k(), |a| a[i - 1])
    }
}

impl Operad for KleisliValues {
    type Elem = Table;

    fn name(&self) -> String {
        format!("functions on {} atoms", self.k())
    }
    fn arity(&self, f: &Table) -> usize {
        f.arity
    }
    fn ident(&self) -> Table {
        self.projection(1, 1)
    }
    fn subst(&self, f: &Table, n1: usize, g: &Table, n2: usize) -> Result<Table> {
        subst_entries(self.k(), f, n1, g, n2, |b, row| row(b))
    }
    fn rename(&self, f: &Table, r: &Renaming) -> Result<Table> {
        rename_entries(self.k(), f, r)
    }
    fn equals(&self, a: &Table, b: &Table) -> Verdict {
        Verdict::from_bool(a == b)
    }
    fn enumerate(&self, n: usize) -> Option<Vec<Table>> {
        enumerate_tables(n, self.k(), self.k())
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<Table> {
        Some(sample_table(n, self.k(), self.k(), rng))
    }
    fn render(&self, f: &Table) -> String {
        render_table(f, self.k(), |e| self.atoms[e].clone())
    }
    fn parse(&self, text: &str) -> Result<Table> {
        parse_table(text, self.k(), |s| {
            self.atoms
                .iter()
                .position(|a| a == s)
                .ok_or_else(|| Error::Model(format!("`{s}` is not an atom")))
        })
    }
}

/// Kleisli maps `A^n -> M(A)`; substitution runs the inner map first.
#[derive(Clone, Debug)]
pub struct KleisliComps {
    pub effect: FiniteEffect,
}

impl KleisliComps {
    pub fn k(&self) -> usize {
        self.effect.carrier_size()
    }
}

impl Operad for KleisliComps {
    type Elem = Table;

    fn name(&self) -> String {
        format!("{} maps on {} atoms", self.effect.name, self.k())
    }
    fn arity(&self, f: &Table) -> usize {
        f.arity
    }
    fn ident(&self) -> Table {
        Table::from_fn(1, self.k(), |a| self.effect.unit(a[0]))
    }
    fn subst(&self, f: &Table, n1: usize, g: &Table, n2: usize) -> Result<Table> {
        subst_entries(self.k(), f, n1, g, n2, |m, row| self.effect.bind(m, row))
    }
    fn rename(&self, f: &Table, r: &Renaming) -> Result<Table> {
        rename_entries(self.k(), f, r)
    }
    fn equals(&self, a: &Table, b: &Table) -> Verdict {
        Verdict::from_bool(a == b)
    }
    fn enumerate(&self, n: usize) -> Option<Vec<Table>> {
        enumerate_tables(n, self.k(), self.effect.size())
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<Table> {
        Some(sample_table(n, self.k(), self.effect.size(), rng))
    }
    fn render(&self, f: &Table) -> String {
        render_table(f, self.k(), |e| self.effect.render(e))
    }
    fn parse(&self, text: &str) -> Result<Table> {
        parse_table(text, self.k(), |s| self.effect.parse(s))
    }
}

/// Compact rendering `<out(0..0); out(0..1); …>/n`.
fn render_table(t: &Table, _k: usize, out: impl Fn(usize) -> String) -> String {
    let cells: Vec<String> = t.entries.iter().map(|&e| out(e as usize)).collect();
    format!("<{}>/{}", cells.join("; "), t.arity)
}

/// Reads `<e; e; …>` with an optional `/n`; without it the arity is read
/// off the number of entries.
fn parse_table(text: &str, k: usize, cell: impl Fn(&str) -> Result<usize>) -> Result<Table> {
    let text = text.trim();
    let bad = |msg: &str| Error::Model(format!("table literal `{text}`: {msg}"));
    let (body, arity) = match text.rsplit_once('/') {
        Some((body, n)) if body.trim_end().ends_with('>') => {
            (body.trim(), Some(n.trim().parse::<usize>().map_err(|_| bad("bad arity"))?))
        }
        _ => (text, None),
    };
    let inner = body
        .strip_prefix('<')
        .and_then(|b| b.strip_suffix('>'))
        .ok_or_else(|| bad("expected `<…>`"))?;
    let entries = inner
        .split(';')
        .map(|c| cell(c.trim()).map(|e| e as u16))
        .collect::<Result<Vec<u16>>>()?;
    let arity = match arity {
        Some(n) => n,
        None if k > 1 => (0..=20)
            .find(|&n| k.checked_pow(n as u32) == Some(entries.len()))
            .ok_or_else(|| bad("entry count is not a power of the carrier size"))?,
        None => return Err(bad("arity must be given as `/n` over one atom")),
    };
    if k.checked_pow(arity as u32) != Some(entries.len()) {
        return Err(bad("entry count does not match the arity"));
    }
    Ok(Table::new(arity, entries))
}

fn invert(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    inv
}

/// One line per argument tuple: `a1 a2 … -> out`.
pub fn table_rows(t: &Table, atoms: &[String], out: impl Fn(usize) -> String) -> Vec<String> {
    let k = atoms.len();
    let mut args = vec![0; t.arity];
    t.entries
        .iter()
        .enumerate()
        .map(|(code, &e)| {
            fill_digits(code, k, &mut args);
            let lhs: Vec<&str> = args.iter().map(|&a| atoms[a].as_str()).collect();
            if lhs.is_empty() {
                format!("() -> {}", out(e as usize))
            } else {
                format!("{} -> {}", lhs.join(" "), out(e as usize))
            }
        })
        .collect()
}

/// The Freyd operad induced by a finite monad; first-order (no closure).
#[derive(Clone, Debug)]
pub struct KleisliModel {
    pub values: KleisliValues,
    pub comps: KleisliComps,
}

impl KleisliModel {
    pub fn new(effect: FiniteEffect) -> KleisliModel {
        KleisliModel {
            values: KleisliValues {
                atoms: effect.atoms.clone(),
            },
            comps: KleisliComps { effect },
        }
    }

    pub fn effect(&self) -> &FiniteEffect {
        &self.comps.effect
    }

    pub fn k(&self) -> usize {
        self.values.k()
    }

    /// A value table from atom names in argument order.
    pub fn value_table(&self, arity: usize, outs: &[&str]) -> Result<Table> {
        self.table_from(arity, outs, |s| self.effect().parse_atom(s))
    }

    /// A computation table from element literals in argument order.
    pub fn comp_table(&self, arity: usize, outs: &[&str]) -> Result<Table> {
        self.table_from(arity, outs, |s| self.effect().parse(s))
    }

    /// `σ ∘ f ∘ σ⁻¹` for a permutation `σ` of the atoms (0-based images).
    pub fn conjugate_value(&self, f: &Table, perm: &[usize]) -> Table {
        let k = self.k();
        let inv = invert(perm);
        Table::from_fn(f.arity, k, |a| {
            let pre: Vec<usize> = a.iter().map(|&x| inv[x]).collect();
            perm[f.at(k, &pre)]
        })
    }

    /// As [`KleisliModel::conjugate_value`], with `M(σ)` on the outputs.
    pub fn conjugate_comp(&self, f: &Table, perm: &[usize]) -> Table {
        let k = self.k();
        let inv = invert(perm);
        Table::from_fn(f.arity, k, |a| {
            let pre: Vec<usize> = a.iter().map(|&x| inv[x]).collect();
            self.effect().fmap(f.at(k, &pre), |x| perm[x])
        })
    }

    fn table_from(&self, arity: usize, outs: &[&str], parse: impl Fn(&str) -> Result<usize>) -> Result<Table> {
        let rows = pow(self.k(), arity);
        if outs.len() != rows {
            return Err(Error::Model(format!("table of arity {arity} needs {rows} rows, found {}", outs.len())));
        }
        let entries = outs.iter().map(|s| parse(s).map(|e| e as u16)).collect::<Result<_>>()?;
        Ok(Table::new(arity, entries))
    }
}

impl FreydOperad for KleisliModel {
    type Values = KleisliValues;
    type Comps = KleisliComps;

    fn values(&self) -> &KleisliValues {
        &self.values
    }
    fn comps(&self) -> &KleisliComps {
        &self.comps
    }
    fn ret(&self, v: &Table) -> Table {
        v.map(|a| self.effect().unit(a))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::effect::Monoid;
    use crate::operad::{check_centrality, check_freyd, check_preoperad, Regime};

    const CAP2: Regime = Regime::Exhaustive { arity_cap: 2 };

    #[test]
    fn endofunctions_form_a_preoperad() {
        let report = check_preoperad(&KleisliValues::new(2), CAP2);
        assert!(report.passed(), "{}", report.to_text());
        assert!(report.instances > 0);
    }

    #[test]
    fn maybe_model_is_freyd() {
        let report = check_freyd(&KleisliModel::new(FiniteEffect::maybe(2)), CAP2);
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn substitution_runs_inner_first() {
        let model = KleisliModel::new(FiniteEffect::writer_free(2));
        let write = |w: &str| model.comp_table(1, &[&format!("({w},0)"), &format!("({w},1)")]).unwrap();
        let (a, b) = (write("a"), write("b"));
        let ab = model.comps.subst(&b, 0, &a, 0).unwrap();
        assert_eq!(model.comps.render(&ab), "<(ab,0); (ab,1)>/1");
    }

    #[test]
    fn writes_do_not_commute() {
        let model = KleisliModel::new(FiniteEffect::writer_free(2));
        let write = |w: &str| model.comp_table(1, &[&format!("({w},0)"), &format!("({w},1)")]).unwrap();
        let report = check_centrality(&model.comps, &write("a"), &write("b"), CAP2);
        assert!(!report.passed());
        let same = check_centrality(&model.comps, &write("a"), &write("a"), CAP2);
        assert!(same.passed(), "{}", same.to_text());
    }

    #[test]
    fn commutative_writer_is_central() {
        // Z/2 written additively: every computation commutes.
        let names = vec!["0".to_string(), "1".to_string()];
        let z2 = Monoid::new(names, 0, vec![0, 1, 1, 0]).unwrap();
        let model = KleisliModel::new(FiniteEffect::writer(2, z2));
        let w = model.comp_table(1, &["(1,1)", "(0,0)"]).unwrap();
        let v = model.comp_table(1, &["(1,0)", "(1,1)"]).unwrap();
        assert!(check_centrality(&model.comps, &w, &v, CAP2).passed());
    }

    /// Substitution that reverses the inner element's arguments first.
    struct Reversing(KleisliValues);

    impl Operad for Reversing {
        type Elem = Table;
        fn name(&self) -> String {
            "reversing".into()
        }
        fn arity(&self, f: &Table) -> usize {
            f.arity
        }
        fn ident(&self) -> Table {
            self.0.ident()
        }
        fn subst(&self, f: &Table, n1: usize, g: &Table, n2: usize) -> Result<Table> {
            let m = g.arity;
            let reversal = Renaming::new((1..=m).rev().collect(), m)?;
            self.0.subst(f, n1, &self.0.rename(g, &reversal)?, n2)
        }
        fn rename(&self, f: &Table, r: &Renaming) -> Result<Table> {
            self.0.rename(f, r)
        }
        fn equals(&self, a: &Table, b: &Table) -> Verdict {
            self.0.equals(a, b)
        }
        fn enumerate(&self, n: usize) -> Option<Vec<Table>> {
            self.0.enumerate(n)
        }
    }

    #[test]
    fn reversing_substitution_mutant_fails() {
        let report = check_preoperad(&Reversing(KleisliValues::new(2)), CAP2);
        assert!(!report.passed());
        assert!(!report.failures.is_empty());
    }
}
