//! Two-sorted terms with de Bruijn levels: at arity `n` the free variables
//! are `Var(1)..Var(n)`, and a binder at arity `n` introduces `Var(n+1)`.

mod gen;
mod parse;
mod print;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::renaming::Renaming;

pub use gen::{GenConfig, TermGen};
pub use parse::{parse_computation, parse_signature, parse_term, parse_term_file, parse_value, Definition};
pub use print::{print_computation, print_term, print_value};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Value {
    Var(usize),
    Func(String, Vec<Value>),
    Abs(Box<Computation>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Computation {
    Ret(Value),
    /// `Let(bound, body)`: `body` lives at arity `n+1` with the bound variable last.
    Let(Box<Computation>, Box<Computation>),
    Proc(String, Vec<Value>),
    App(Value, Value),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Term {
    Value(Value),
    Computation(Computation),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sort {
    Value,
    Computation,
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Signature {
    pub funcs: BTreeMap<String, usize>,
    pub procs: BTreeMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_func(mut self, name: &str, arity: usize) -> Self {
        self.add_func(name, arity).expect("fresh function symbol");
        self
    }

    pub fn with_proc(mut self, name: &str, arity: usize) -> Self {
        self.add_proc(name, arity).expect("fresh procedure symbol");
        self
    }

    pub fn add_func(&mut self, name: &str, arity: usize) -> Result<()> {
        self.declare(name)?;
        self.funcs.insert(name.to_string(), arity);
        Ok(())
    }

    pub fn add_proc(&mut self, name: &str, arity: usize) -> Result<()> {
        self.declare(name)?;
        self.procs.insert(name.to_string(), arity);
        Ok(())
    }

    fn declare(&self, name: &str) -> Result<()> {
        if self.funcs.contains_key(name) || self.procs.contains_key(name) {
            Err(Error::Other(format!("symbol `{name}` declared twice")))
        } else {
            Ok(())
        }
    }

    pub fn merge(&mut self, other: &Signature) -> Result<()> {
        for (f, &a) in &other.funcs {
            match self.funcs.get(f) {
                Some(&b) if a == b => {}
                _ => self.add_func(f, a)?,
            }
        }
        for (p, &a) in &other.procs {
            match self.procs.get(p) {
                Some(&b) if a == b => {}
                _ => self.add_proc(p, a)?,
            }
        }
        Ok(())
    }

    pub fn func_arity(&self, name: &str) -> Option<usize> {
        self.funcs.get(name).copied()
    }

    pub fn proc_arity(&self, name: &str) -> Option<usize> {
        self.procs.get(name).copied()
    }
}

impl Value {
    pub fn var(i: usize) -> Value {
        Value::Var(i)
    }

    pub fn abs(body: Computation) -> Value {
        Value::Abs(Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Value::Var(_) => 1,
            Value::Func(_, args) => 1 + args.iter().map(Value::size).sum::<usize>(),
            Value::Abs(body) => 1 + body.size(),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Value::Var(_) => true,
            Value::Func(_, args) => args.iter().all(Value::is_first_order),
            Value::Abs(_) => false,
        }
    }

    /// All variable indices are in `1..=n` (binders counted).
    pub fn scoped(&self, n: usize) -> bool {
        match self {
            Value::Var(i) => (1..=n).contains(i),
            Value::Func(_, args) => args.iter().all(|a| a.scoped(n)),
            Value::Abs(body) => body.scoped(n + 1),
        }
    }

    pub fn well_formed(&self, n: usize, sig: &Signature) -> bool {
        match self {
            Value::Var(i) => (1..=n).contains(i),
            Value::Func(f, args) => {
                sig.func_arity(f) == Some(args.len()) && args.iter().all(|a| a.well_formed(n, sig))
            }
            Value::Abs(body) => body.well_formed(n + 1, sig),
        }
    }

    /// Simultaneous substitution of `vals` (each at arity `m`) for `Var(1..)`.
    pub fn subst(&self, vals: &[Value], m: usize) -> Value {
        self.subst_in(&mut Env::new(vals, m), m)
    }

    fn has_binder(&self) -> bool {
        match self {
            Value::Var(_) => false,
            Value::Func(_, args) => args.iter().any(Value::has_binder),
            Value::Abs(_) => true,
        }
    }

    fn subst_in(&self, env: &mut Env, m: usize) -> Value {
        match self {
            Value::Var(i) => env.lookup(*i, m),
            Value::Func(f, args) => Value::Func(f.clone(), args.iter().map(|a| a.subst_in(env, m)).collect()),
            Value::Abs(body) => {
                env.push(Value::Var(m + 1));
                let body = body.subst_in(env, m + 1);
                env.pop();
                Value::abs(body)
            }
        }
    }

    pub fn rename(&self, r: &Renaming) -> Value {
        self.subst(&ren_env(r), r.cod())
    }

    /// Weaken from arity `n` into arity `offset + n + extra` by shifting every variable by `offset`.
    pub fn shift(&self, n: usize, offset: usize, extra: usize) -> Value {
        if offset == 0 && extra == 0 {
            return self.clone();
        }
        let env: Vec<Value> = (1..=n).map(|i| Value::Var(i + offset)).collect();
        self.subst(&env, offset + n + extra)
    }
}

impl Computation {
    pub fn let_in(bound: Computation, body: Computation) -> Computation {
        Computation::Let(Box::new(bound), Box::new(body))
    }

    pub fn size(&self) -> usize {
        match self {
            Computation::Ret(v) => 1 + v.size(),
            Computation::Let(m, n) => 1 + m.size() + n.size(),
            Computation::Proc(_, args) => 1 + args.iter().map(Value::size).sum::<usize>(),
            Computation::App(v, w) => 1 + v.size() + w.size(),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Computation::Ret(v) => v.is_first_order(),
            Computation::Let(m, n) => m.is_first_order() && n.is_first_order(),
            Computation::Proc(_, args) => args.iter().all(Value::is_first_order),
            Computation::App(_, _) => false,
        }
    }

    pub fn scoped(&self, n: usize) -> bool {
        match self {
            Computation::Ret(v) => v.scoped(n),
            Computation::Let(m, body) => m.scoped(n) && body.scoped(n + 1),
            Computation::Proc(_, args) => args.iter().all(|a| a.scoped(n)),
            Computation::App(v, w) => v.scoped(n) && w.scoped(n),
        }
    }

    pub fn well_formed(&self, n: usize, sig: &Signature) -> bool {
        match self {
            Computation::Ret(v) => v.well_formed(n, sig),
            Computation::Let(m, body) => m.well_formed(n, sig) && body.well_formed(n + 1, sig),
            Computation::Proc(p, args) => {
                sig.proc_arity(p) == Some(args.len()) && args.iter().all(|a| a.well_formed(n, sig))
            }
            Computation::App(v, w) => v.well_formed(n, sig) && w.well_formed(n, sig),
        }
    }

    pub fn subst(&self, vals: &[Value], m: usize) -> Computation {
        self.subst_in(&mut Env::new(vals, m), m)
    }

    fn subst_in(&self, env: &mut Env, m: usize) -> Computation {
        match self {
            Computation::Ret(v) => Computation::Ret(v.subst_in(env, m)),
            Computation::Let(bound, body) => {
                let bound = bound.subst_in(env, m);
                env.push(Value::Var(m + 1));
                let body = body.subst_in(env, m + 1);
                env.pop();
                Computation::let_in(bound, body)
            }
            Computation::Proc(p, args) => Computation::Proc(p.clone(), args.iter().map(|a| a.subst_in(env, m)).collect()),
            Computation::App(v, w) => Computation::App(v.subst_in(env, m), w.subst_in(env, m)),
        }
    }

    pub fn rename(&self, r: &Renaming) -> Computation {
        self.subst(&ren_env(r), r.cod())
    }

    pub fn shift(&self, n: usize, offset: usize, extra: usize) -> Computation {
        if offset == 0 && extra == 0 {
            return self.clone();
        }
        let env: Vec<Value> = (1..=n).map(|i| Value::Var(i + offset)).collect();
        self.subst(&env, offset + n + extra)
    }
}

/// Substitution environment: the first `given` entries live at arity `base`
/// and are weakened on lookup under binders (levels of their own binders
/// move up); pushed entries are bound variables.
struct Env {
    vals: Vec<Value>,
    given: usize,
    base: usize,
}

impl Env {
    fn new(vals: &[Value], base: usize) -> Env {
        Env {
            vals: vals.to_vec(),
            given: vals.len(),
            base,
        }
    }

    fn push(&mut self, v: Value) {
        self.vals.push(v);
    }

    fn pop(&mut self) {
        self.vals.pop();
    }

    fn lookup(&self, i: usize, m: usize) -> Value {
        let v = &self.vals[i - 1];
        if i <= self.given && m > self.base && v.has_binder() {
            v.shift(self.base, 0, m - self.base)
        } else {
            v.clone()
        }
    }
}

fn ren_env(r: &Renaming) -> Vec<Value> {
    r.map().iter().map(|&i| Value::Var(i)).collect()
}

impl Term {
    pub fn sort(&self) -> Sort {
        match self {
            Term::Value(_) => Sort::Value,
            Term::Computation(_) => Sort::Computation,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Value(v) => v.size(),
            Term::Computation(c) => c.size(),
        }
    }

    pub fn scoped(&self, n: usize) -> bool {
        match self {
            Term::Value(v) => v.scoped(n),
            Term::Computation(c) => c.scoped(n),
        }
    }

    pub fn is_first_order(&self) -> bool {
        match self {
            Term::Value(v) => v.is_first_order(),
            Term::Computation(c) => c.is_first_order(),
        }
    }

    pub fn as_value(&self) -> Option<&Value> {
        match self {
            Term::Value(v) => Some(v),
            Term::Computation(_) => None,
        }
    }

    pub fn as_computation(&self) -> Option<&Computation> {
        match self {
            Term::Computation(c) => Some(c),
            Term::Value(_) => None,
        }
    }

    fn map(&self, fv: impl FnOnce(&Value) -> Value, fc: impl FnOnce(&Computation) -> Computation) -> Term {
        match self {
            Term::Value(v) => Term::Value(fv(v)),
            Term::Computation(c) => Term::Computation(fc(c)),
        }
    }
}

/// Scope and symbol-arity check. Contexts are shared, so the split-context
/// rules together with weakening, exchange and contraction amount to every
/// index lying in range.
pub fn well_formed(t: &Term, n: usize, sig: &Signature) -> bool {
    match t {
        Term::Value(v) => v.well_formed(n, sig),
        Term::Computation(c) => c.well_formed(n, sig),
    }
}

pub fn rename_term(t: &Term, r: &Renaming) -> Result<Term> {
    if !t.scoped(r.dom()) {
        return Err(Error::IllFormed(r.dom()));
    }
    Ok(t.map(|v| v.rename(r), |c| c.rename(r)))
}

/// `t` at arity `vals.len()`, every value at arity `m`; result at arity `m`.
pub fn subst_values(t: &Term, vals: &[Value], m: usize) -> Result<Term> {
    if !t.scoped(vals.len()) {
        return Err(Error::IllFormed(vals.len()));
    }
    if let Some(bad) = vals.iter().position(|v| !v.scoped(m)) {
        return Err(Error::Other(format!("substituted value {} is not scoped at arity {m}", bad + 1)));
    }
    Ok(t.map(|v| v.subst(vals, m), |c| c.subst(vals, m)))
}

/// The environment placing `v` (arity `m`) at position `n1+1` of a context
/// `n1 + 1 + n2`, giving a term at arity `n1 + m + n2`.
pub fn single_env(v: &Value, n1: usize, m: usize, n2: usize) -> Vec<Value> {
    let mut env: Vec<Value> = (1..=n1).map(Value::Var).collect();
    env.push(v.shift(m, n1, n2));
    env.extend((1..=n2).map(|i| Value::Var(n1 + m + i)));
    env
}

pub fn single_subst(t: &Term, v: &Value, m: usize, n1: usize, n2: usize) -> Result<Term> {
    if !v.scoped(m) {
        return Err(Error::IllFormed(m));
    }
    subst_values(t, &single_env(v, n1, m, n2), n1 + m + n2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subst_into_return() {
        let v = Value::Func("c".into(), vec![]);
        let t = Term::Computation(Computation::Ret(Value::Var(1)));
        assert_eq!(
            subst_values(&t, std::slice::from_ref(&v), 0).unwrap(),
            Term::Computation(Computation::Ret(v))
        );
    }

    #[test]
    fn identity_substitution_is_a_no_op() {
        let body = Computation::App(Value::Var(3), Value::Var(1));
        let t = Term::Computation(Computation::let_in(
            Computation::Proc("p".into(), vec![Value::Var(2)]),
            Computation::Ret(Value::abs(body)),
        ));
        let ids = vec![Value::Var(1), Value::Var(2)];
        assert_eq!(subst_values(&t, &ids, 2).unwrap(), t);
    }

    #[test]
    fn binders_do_not_capture() {
        // \y. x y  with x := z at arity 2 (z = Var 2) stays \y. z y with y = Var 3.
        let t = Value::abs(Computation::App(Value::Var(1), Value::Var(2)));
        let out = t.subst(&[Value::Var(2)], 2);
        assert_eq!(out, Value::abs(Computation::App(Value::Var(2), Value::Var(3))));
    }

    #[test]
    fn substituted_abstractions_are_weakened_under_binders() {
        // x := \z. ret z (closed) inside \y. ret x at arity 1: z moves from level 1 to level 2.
        let closed = Value::abs(Computation::Ret(Value::Var(1)));
        let t = Value::abs(Computation::Ret(Value::Var(1)));
        let out = t.subst(&[closed], 0);
        assert_eq!(out, Value::abs(Computation::Ret(Value::abs(Computation::Ret(Value::Var(2))))));
        let weakened = Value::abs(Computation::Ret(Value::Var(1))).shift(0, 0, 1);
        assert_eq!(weakened, Value::abs(Computation::Ret(Value::Var(2))));
    }

    #[test]
    fn contraction_renaming() {
        let t = Term::Computation(Computation::Ret(Value::Var(2)));
        let r = Renaming::new(vec![1, 1], 1).unwrap();
        assert_eq!(
            rename_term(&t, &r).unwrap(),
            Term::Computation(Computation::Ret(Value::Var(1)))
        );
    }

    #[test]
    fn single_subst_at_the_only_position() {
        let v = Value::Func("f".into(), vec![Value::Var(1), Value::Var(2)]);
        let t = Term::Value(Value::Var(1));
        assert_eq!(single_subst(&t, &v, 2, 0, 0).unwrap(), Term::Value(v));
    }

    #[test]
    fn scope_checks() {
        let sig = Signature::new().with_func("f", 1);
        assert!(well_formed(&Term::Computation(Computation::Ret(Value::Var(1))), 1, &sig));
        assert!(!well_formed(&Term::Computation(Computation::Ret(Value::Var(2))), 1, &sig));
        let bad_arity = Term::Value(Value::Func("f".into(), vec![]));
        assert!(!well_formed(&bad_arity, 0, &sig));
        assert!(rename_term(&Term::Value(Value::Var(3)), &Renaming::identity(2)).is_err());
    }
}
