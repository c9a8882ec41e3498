//! Terms modulo the theory as a weakly closed Freyd operad. Classes are
//! represented by let-normal forms (β is left alone) and compared with
//! [`eq_check`].

use std::fmt;

use rand::Rng;

use crate::error::{check_arity, Error, Result};
use crate::operad::{FreydOperad, Operad, SampleRng, Verdict};
use crate::renaming::Renaming;
use crate::semantics::Structure;
use crate::syntax::{parse_computation, parse_value, print_computation, print_value, single_env, Computation, GenConfig, Signature, Term, TermGen, Value};
use crate::theory::{eq_check, let_normal_form_computation, let_normal_form_value, EqVerdict, DEFAULT_FUEL};

/// A representative together with its arity.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Class<T> {
    pub arity: usize,
    pub rep: T,
}

pub type ValClass = Class<Value>;
pub type CompClass = Class<Computation>;

impl ValClass {
    pub fn new(arity: usize, v: &Value) -> Result<ValClass> {
        if !v.scoped(arity) {
            return Err(Error::IllFormed(arity));
        }
        Ok(Class {
            arity,
            rep: let_normal_form_value(v, arity),
        })
    }
}

impl CompClass {
    pub fn new(arity: usize, c: &Computation) -> Result<CompClass> {
        if !c.scoped(arity) {
            return Err(Error::IllFormed(arity));
        }
        Ok(Class {
            arity,
            rep: let_normal_form_computation(c, arity),
        })
    }
}

fn context(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl fmt::Debug for ValClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]/{}", print_value(&self.rep, self.arity, &context(self.arity)), self.arity)
    }
}

impl fmt::Debug for CompClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]/{}", print_computation(&self.rep, self.arity, &context(self.arity)), self.arity)
    }
}

/// Sampler and equality settings shared by both sorts.
#[derive(Clone, Debug)]
pub struct TermSettings {
    pub sig: Signature,
    pub fuel: usize,
    /// Largest generated term.
    pub max_size: usize,
    pub higher_order: bool,
}

impl TermSettings {
    fn verdict(&self, a: Term, b: Term, n: usize) -> Verdict {
        if a == b {
            return Verdict::Equal;
        }
        match eq_check(&a, &b, n, self.fuel) {
            Ok(EqVerdict::Proved) => Verdict::Equal,
            _ => Verdict::Unknown,
        }
    }

    fn generator(&self) -> GenConfig {
        GenConfig {
            sig: self.sig.clone(),
            higher_order: self.higher_order,
            scope_error_rate: 0.0,
        }
    }

    fn closed_values_possible(&self) -> bool {
        self.higher_order || self.sig.funcs.values().any(|&k| k == 0)
    }
}

#[derive(Clone, Debug)]
pub struct TermValues(pub TermSettings);

#[derive(Clone, Debug)]
pub struct TermComps(pub TermSettings);

/// The exchange renaming `[n1 + 1 + n2] -> [n1 + m + n2 + 1]` sending the
/// substituted position to the freshly bound last variable and the right
/// flank past the inserted block.
fn exchange(n1: usize, m: usize, n2: usize) -> Renaming {
    let total = n1 + m + n2;
    let mut map: Vec<usize> = (1..=n1).collect();
    map.push(total + 1);
    map.extend((1..=n2).map(|i| n1 + m + i));
    Renaming::new(map, total + 1).expect("exchange renaming")
}

impl Operad for TermValues {
    type Elem = ValClass;

    fn name(&self) -> String {
        "term values".into()
    }
    fn arity(&self, f: &ValClass) -> usize {
        f.arity
    }
    fn ident(&self) -> ValClass {
        Class { arity: 1, rep: Value::Var(1) }
    }
    fn subst(&self, f: &ValClass, n1: usize, g: &ValClass, n2: usize) -> Result<ValClass> {
        check_arity("value substitution", f.arity, n1 + 1 + n2)?;
        let arity = n1 + g.arity + n2;
        ValClass::new(arity, &f.rep.subst(&single_env(&g.rep, n1, g.arity, n2), arity))
    }
    fn rename(&self, f: &ValClass, r: &Renaming) -> Result<ValClass> {
        check_arity("value renaming", f.arity, r.dom())?;
        ValClass::new(r.cod(), &f.rep.rename(r))
    }
    fn equals(&self, a: &ValClass, b: &ValClass) -> Verdict {
        if a.arity != b.arity {
            return Verdict::Distinct;
        }
        self.0.verdict(Term::Value(a.rep.clone()), Term::Value(b.rep.clone()), a.arity)
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<ValClass> {
        if n == 0 && !self.0.closed_values_possible() {
            return None;
        }
        let cfg = self.0.generator();
        let size = rng.gen_range(1..=self.0.max_size.max(1));
        let v = TermGen::new(&cfg).value(rng, n, size);
        ValClass::new(n, &v).ok()
    }
    fn render(&self, f: &ValClass) -> String {
        format!("[{}] {}", context(f.arity).join(" "), print_value(&f.rep, f.arity, &context(f.arity)))
    }
    fn parse(&self, text: &str) -> Result<ValClass> {
        let (names, body) = split_literal(text)?;
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        ValClass::new(names.len(), &parse_value(body, &self.0.sig, &names)?)
    }
}

impl Operad for TermComps {
    type Elem = CompClass;

    fn name(&self) -> String {
        "term computations".into()
    }
    fn arity(&self, f: &CompClass) -> usize {
        f.arity
    }
    fn ident(&self) -> CompClass {
        Class {
            arity: 1,
            rep: Computation::Ret(Value::Var(1)),
        }
    }
    /// `let y = g in f` with `f`'s substituted position exchanged to `y`.
    fn subst(&self, f: &CompClass, n1: usize, g: &CompClass, n2: usize) -> Result<CompClass> {
        check_arity("computation substitution", f.arity, n1 + 1 + n2)?;
        let m = g.arity;
        let bound = g.rep.shift(m, n1, n2);
        let body = f.rep.rename(&exchange(n1, m, n2));
        CompClass::new(n1 + m + n2, &Computation::let_in(bound, body))
    }
    fn rename(&self, f: &CompClass, r: &Renaming) -> Result<CompClass> {
        check_arity("computation renaming", f.arity, r.dom())?;
        CompClass::new(r.cod(), &f.rep.rename(r))
    }
    fn equals(&self, a: &CompClass, b: &CompClass) -> Verdict {
        if a.arity != b.arity {
            return Verdict::Distinct;
        }
        self.0.verdict(Term::Computation(a.rep.clone()), Term::Computation(b.rep.clone()), a.arity)
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<CompClass> {
        if n == 0 && !self.0.closed_values_possible() && !self.0.sig.procs.values().any(|&k| k == 0) {
            return None;
        }
        let cfg = self.0.generator();
        let size = rng.gen_range(2..=self.0.max_size.max(2));
        let c = TermGen::new(&cfg).computation(rng, n, size);
        CompClass::new(n, &c).ok()
    }
    fn render(&self, f: &CompClass) -> String {
        format!("[{}] {}", context(f.arity).join(" "), print_computation(&f.rep, f.arity, &context(f.arity)))
    }
    fn parse(&self, text: &str) -> Result<CompClass> {
        let (names, body) = split_literal(text)?;
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        CompClass::new(names.len(), &parse_computation(body, &self.0.sig, &names)?)
    }
}

/// Splits a class literal `[x y] term` into its context and body.
fn split_literal(text: &str) -> Result<(Vec<String>, &str)> {
    let text = text.trim();
    let bad = || Error::Other(format!("class literal `{text}` must look like `[x y] term`"));
    let rest = text.strip_prefix('[').ok_or_else(bad)?;
    let (ctx, body) = rest.split_once(']').ok_or_else(bad)?;
    let names = ctx
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect();
    Ok((names, body))
}

/// The syntactic λc-structure over a signature.
#[derive(Clone, Debug)]
pub struct TermModel {
    pub values: TermValues,
    pub comps: TermComps,
}

/// Default sampler bound for generated representatives.
pub const DEFAULT_MAX_SIZE: usize = 6;

impl TermModel {
    pub fn new(sig: Signature) -> TermModel {
        Self::with_settings(TermSettings {
            sig,
            fuel: DEFAULT_FUEL,
            max_size: DEFAULT_MAX_SIZE,
            higher_order: true,
        })
    }

    pub fn with_settings(settings: TermSettings) -> TermModel {
        TermModel {
            values: TermValues(settings.clone()),
            comps: TermComps(settings),
        }
    }

    pub fn settings(&self) -> &TermSettings {
        &self.values.0
    }

    pub fn sig(&self) -> &Signature {
        &self.settings().sig
    }

    pub fn tm_subst_value(&self, f: &ValClass, n1: usize, g: &ValClass, n2: usize) -> Result<ValClass> {
        self.values.subst(f, n1, g, n2)
    }

    pub fn tm_subst_comp(&self, f: &CompClass, n1: usize, g: &CompClass, n2: usize) -> Result<CompClass> {
        self.comps.subst(f, n1, g, n2)
    }

    pub fn tm_return(&self, v: &ValClass) -> CompClass {
        Class {
            arity: v.arity,
            rep: Computation::Ret(v.rep.clone()),
        }
    }

    pub fn tm_abs(&self, n: usize, m: &CompClass) -> Result<ValClass> {
        check_arity("abstraction", m.arity, n + 1)?;
        Ok(Class {
            arity: n,
            rep: Value::abs(m.rep.clone()),
        })
    }

    pub fn tm_app(&self) -> CompClass {
        Class {
            arity: 2,
            rep: Computation::App(Value::Var(1), Value::Var(2)),
        }
    }

    /// `[f(x1, …, xk)]` for a function symbol.
    pub fn tm_func(&self, name: &str) -> Result<ValClass> {
        let k = self.sig().func_arity(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Class {
            arity: k,
            rep: Value::Func(name.into(), (1..=k).map(Value::Var).collect()),
        })
    }

    /// `[p(x1, …, xk)]` for a procedure symbol.
    pub fn tm_proc(&self, name: &str) -> Result<CompClass> {
        let k = self.sig().proc_arity(name).ok_or_else(|| Error::UnknownSymbol(name.into()))?;
        Ok(Class {
            arity: k,
            rep: Computation::Proc(name.into(), (1..=k).map(Value::Var).collect()),
        })
    }

    /// The term model with every symbol sent to its canonical term.
    pub fn canonical_structure(self) -> Structure<TermModel> {
        let mut s = Structure::new(self);
        let sig = s.freyd.sig().clone();
        for name in sig.funcs.keys() {
            let f = s.freyd.tm_func(name).expect("declared symbol");
            s.funcs.insert(name.clone(), f);
        }
        for name in sig.procs.keys() {
            let p = s.freyd.tm_proc(name).expect("declared symbol");
            s.procs.insert(name.clone(), p);
        }
        s
    }
}

impl FreydOperad for TermModel {
    type Values = TermValues;
    type Comps = TermComps;

    fn values(&self) -> &TermValues {
        &self.values
    }
    fn comps(&self) -> &TermComps {
        &self.comps
    }
    fn ret(&self, v: &ValClass) -> CompClass {
        self.tm_return(v)
    }
    fn abs(&self, n: usize, m: &CompClass) -> Option<Result<ValClass>> {
        Some(self.tm_abs(n, m))
    }
    fn app(&self) -> Option<CompClass> {
        Some(self.tm_app())
    }
}

/// The unique structure map out of the term model: interpretation of
/// representatives in `target`.
pub struct InitialFunctor<'a, F: FreydOperad> {
    pub target: &'a Structure<F>,
}

impl<'a, F: FreydOperad> InitialFunctor<'a, F> {
    pub fn on_value(&self, v: &ValClass) -> Result<crate::operad::Val<F>> {
        self.target.interpret_value(&v.rep, v.arity)
    }

    pub fn on_comp(&self, c: &CompClass) -> Result<crate::operad::Comp<F>> {
        self.target.interpret_comp(&c.rep, c.arity)
    }
}

/// Checks that `target` assigns every symbol of `sig` before building the map.
pub fn initial_functor<'a, F: FreydOperad>(sig: &Signature, target: &'a Structure<F>) -> Result<InitialFunctor<'a, F>> {
    target.covers(sig)?;
    Ok(InitialFunctor { target })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{check_freyd, check_preoperad, check_weak_closure, Regime};
    use crate::syntax::parse_term;

    fn sig() -> Signature {
        Signature::new().with_func("c", 0).with_func("f", 2).with_proc("p", 1)
    }

    fn comp(model: &TermModel, src: &str, ctx: &[&str]) -> CompClass {
        let Term::Computation(c) = parse_term(src, model.sig(), ctx).unwrap() else { panic!("{src}") };
        CompClass::new(ctx.len(), &c).unwrap()
    }

    fn val(model: &TermModel, src: &str, ctx: &[&str]) -> ValClass {
        let Term::Value(v) = parse_term(src, model.sig(), ctx).unwrap() else { panic!("{src}") };
        ValClass::new(ctx.len(), &v).unwrap()
    }

    #[test]
    fn value_substitution_inserts_the_argument() {
        let tm = TermModel::new(sig());
        let f = val(&tm, "f(x, y)", &["x", "y"]);
        let g = val(&tm, "f(z, c())", &["z"]);
        let out = tm.tm_subst_value(&f, 1, &g, 0).unwrap();
        assert_eq!(out, val(&tm, "f(x, f(z, c()))", &["x", "z"]));
    }

    #[test]
    fn computation_substitution_by_return_is_substitution() {
        let tm = TermModel::new(sig());
        let f = comp(&tm, "p(f(x, y))", &["x", "y"]);
        let g = tm.tm_return(&val(&tm, "f(z, z)", &["z"]));
        let out = tm.tm_subst_comp(&f, 0, &g, 1).unwrap();
        assert_eq!(out, comp(&tm, "p(f(f(z, z), y))", &["z", "y"]));
    }

    #[test]
    fn substituting_into_return_gives_the_argument() {
        let tm = TermModel::new(sig());
        let g = comp(&tm, "let a = p(x) in p(a)", &["x"]);
        assert_eq!(tm.tm_subst_comp(&tm.comps.ident(), 0, &g, 0).unwrap(), g);
    }

    #[test]
    fn substitution_sequences_inner_first() {
        let tm = TermModel::new(sig());
        let f = comp(&tm, "p(f(x, y))", &["x", "y"]);
        let g = comp(&tm, "p(z)", &["z"]);
        let out = tm.tm_subst_comp(&f, 1, &g, 0).unwrap();
        assert_eq!(out, comp(&tm, "let y = p(z) in p(f(x, y))", &["x", "z"]));
    }

    #[test]
    fn closure_formers() {
        let tm = TermModel::new(sig());
        assert_eq!(tm.tm_app(), comp(&tm, "x y", &["x", "y"]));
        let body = comp(&tm, "ret x", &["x"]);
        assert_eq!(tm.tm_abs(0, &body).unwrap(), val(&tm, "\\x. ret x", &[]));
    }

    #[test]
    fn sampled_suites_pass() {
        let tm = TermModel::new(sig());
        let regime = Regime::Sampled { arity_cap: 2, samples: 40, seed: 3 };
        let report = check_preoperad(&tm.values, regime);
        assert!(report.passed(), "{}", report.to_text());
        let report = check_freyd(&tm, regime);
        assert!(report.passed(), "{}", report.to_text());
        let report = check_weak_closure(&tm, regime);
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn canonical_interpretation_is_identity() {
        let tm = TermModel::new(sig());
        let s = tm.clone().canonical_structure();
        let h = initial_functor(tm.sig(), &s).unwrap();
        let c = comp(&tm, "let a = p(f(x, c())) in (\\z. p(z)) a", &["x"]);
        assert_eq!(h.on_comp(&c).unwrap(), c);
    }
}
