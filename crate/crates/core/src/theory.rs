//! The equational theory oriented left to right: the let fragment
//! (`lunit`, `runit`, `assoc`) terminates, `beta` is fuel-bounded.

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::renaming::Renaming;
use crate::syntax::{Computation, Term, Value};

pub const DEFAULT_FUEL: usize = 10_000;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Rule {
    LUnit,
    RUnit,
    Assoc,
    Beta,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::LUnit => "lunit",
            Rule::RUnit => "runit",
            Rule::Assoc => "assoc",
            Rule::Beta => "beta",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EqVerdict {
    Proved,
    Unknown { fuel_exhausted: bool },
}

fn extend_env(n: usize, v: &Value) -> Vec<Value> {
    let mut env: Vec<Value> = (1..=n).map(Value::Var).collect();
    env.push(v.clone());
    env
}

/// Contract a redex sitting at the root of `c` (arity `n`).
pub fn root_step(c: &Computation, n: usize, beta: bool) -> Option<(Rule, Computation)> {
    match c {
        Computation::Let(bound, body) => match (&**bound, &**body) {
            (Computation::Ret(v), _) => Some((Rule::LUnit, body.subst(&extend_env(n, v), n))),
            (_, Computation::Ret(Value::Var(i))) if *i == n + 1 => Some((Rule::RUnit, (**bound).clone())),
            (Computation::Let(m1, m2), _) => {
                let mut map: Vec<usize> = (1..=n).collect();
                map.push(n + 2);
                let lift = Renaming::new(map, n + 2).expect("lift renaming");
                let inner = Computation::let_in((**m2).clone(), body.rename(&lift));
                Some((Rule::Assoc, Computation::let_in((**m1).clone(), inner)))
            }
            _ => None,
        },
        Computation::App(Value::Abs(m), v) if beta => Some((Rule::Beta, m.subst(&extend_env(n, v), n))),
        _ => None,
    }
}

/// Every contraction available at the root; a let can match several rules at once.
fn root_reducts(c: &Computation, n: usize, beta: bool) -> Vec<(Rule, Computation)> {
    let mut out = Vec::new();
    if let Computation::Let(bound, body) = c {
        if let Computation::Ret(v) = &**bound {
            out.push((Rule::LUnit, body.subst(&extend_env(n, v), n)));
        }
        if **body == Computation::Ret(Value::Var(n + 1)) {
            out.push((Rule::RUnit, (**bound).clone()));
        }
        if let Computation::Let(m1, m2) = &**bound {
            let mut map: Vec<usize> = (1..=n).collect();
            map.push(n + 2);
            let lift = Renaming::new(map, n + 2).expect("lift renaming");
            let inner = Computation::let_in((**m2).clone(), body.rename(&lift));
            out.push((Rule::Assoc, Computation::let_in((**m1).clone(), inner)));
        }
    }
    out.extend(root_step(c, n, beta).filter(|(r, _)| *r == Rule::Beta));
    out
}

fn step_values(args: &[Value], n: usize, beta: bool) -> Option<(Rule, Vec<Value>)> {
    for (i, a) in args.iter().enumerate() {
        if let Some((rule, a2)) = step_value(a, n, beta) {
            let mut out = args.to_vec();
            out[i] = a2;
            return Some((rule, out));
        }
    }
    None
}

pub fn step_value(v: &Value, n: usize, beta: bool) -> Option<(Rule, Value)> {
    match v {
        Value::Var(_) => None,
        Value::Func(f, args) => step_values(args, n, beta).map(|(r, a)| (r, Value::Func(f.clone(), a))),
        Value::Abs(body) => step_computation(body, n + 1, beta).map(|(r, b)| (r, Value::abs(b))),
    }
}

/// Leftmost-outermost single step.
pub fn step_computation(c: &Computation, n: usize, beta: bool) -> Option<(Rule, Computation)> {
    if let Some(hit) = root_step(c, n, beta) {
        return Some(hit);
    }
    match c {
        Computation::Ret(v) => step_value(v, n, beta).map(|(r, v)| (r, Computation::Ret(v))),
        Computation::Let(bound, body) => {
            if let Some((r, b)) = step_computation(bound, n, beta) {
                return Some((r, Computation::let_in(b, (**body).clone())));
            }
            step_computation(body, n + 1, beta).map(|(r, b)| (r, Computation::let_in((**bound).clone(), b)))
        }
        Computation::Proc(p, args) => step_values(args, n, beta).map(|(r, a)| (r, Computation::Proc(p.clone(), a))),
        Computation::App(f, a) => {
            if let Some((r, f2)) = step_value(f, n, beta) {
                return Some((r, Computation::App(f2, a.clone())));
            }
            step_value(a, n, beta).map(|(r, a2)| (r, Computation::App(f.clone(), a2)))
        }
    }
}

pub fn step(t: &Term, n: usize, beta: bool) -> Option<(Rule, Term)> {
    match t {
        Term::Value(v) => step_value(v, n, beta).map(|(r, v)| (r, Term::Value(v))),
        Term::Computation(c) => step_computation(c, n, beta).map(|(r, c)| (r, Term::Computation(c))),
    }
}

fn reducts_values(args: &[Value], n: usize, beta: bool, out: &mut Vec<(Rule, Vec<Value>)>) {
    for (i, a) in args.iter().enumerate() {
        for (rule, a2) in reducts_value(a, n, beta) {
            let mut next = args.to_vec();
            next[i] = a2;
            out.push((rule, next));
        }
    }
}

fn reducts_value(v: &Value, n: usize, beta: bool) -> Vec<(Rule, Value)> {
    match v {
        Value::Var(_) => Vec::new(),
        Value::Func(f, args) => {
            let mut out = Vec::new();
            reducts_values(args, n, beta, &mut out);
            out.into_iter().map(|(r, a)| (r, Value::Func(f.clone(), a))).collect()
        }
        Value::Abs(body) => reducts_computation(body, n + 1, beta)
            .into_iter()
            .map(|(r, b)| (r, Value::abs(b)))
            .collect(),
    }
}

fn reducts_computation(c: &Computation, n: usize, beta: bool) -> Vec<(Rule, Computation)> {
    let mut out = root_reducts(c, n, beta);
    match c {
        Computation::Ret(v) => out.extend(reducts_value(v, n, beta).into_iter().map(|(r, v)| (r, Computation::Ret(v)))),
        Computation::Let(bound, body) => {
            for (r, b) in reducts_computation(bound, n, beta) {
                out.push((r, Computation::let_in(b, (**body).clone())));
            }
            for (r, b) in reducts_computation(body, n + 1, beta) {
                out.push((r, Computation::let_in((**bound).clone(), b)));
            }
        }
        Computation::Proc(p, args) => {
            let mut next = Vec::new();
            reducts_values(args, n, beta, &mut next);
            out.extend(next.into_iter().map(|(r, a)| (r, Computation::Proc(p.clone(), a))));
        }
        Computation::App(f, a) => {
            for (r, f2) in reducts_value(f, n, beta) {
                out.push((r, Computation::App(f2, a.clone())));
            }
            for (r, a2) in reducts_value(a, n, beta) {
                out.push((r, Computation::App(f.clone(), a2)));
            }
        }
    }
    out
}

/// Every single-step reduct, at every position.
pub fn reducts(t: &Term, n: usize, beta: bool) -> Vec<(Rule, Term)> {
    match t {
        Term::Value(v) => reducts_value(v, n, beta).into_iter().map(|(r, v)| (r, Term::Value(v))).collect(),
        Term::Computation(c) => reducts_computation(c, n, beta)
            .into_iter()
            .map(|(r, c)| (r, Term::Computation(c)))
            .collect(),
    }
}

/// Termination measure for the let fragment. Entry `d` sums, over the
/// computations sitting directly under `d` abstractions, the weight
/// `w(let M in N) = 2 w(M) + w(N)` with every other former weighing 1.
/// Each let step strictly decreases the vector lexicographically.
pub fn let_measure(t: &Term) -> Vec<u64> {
    let mut acc = Vec::new();
    match t {
        Term::Value(v) => measure_value(v, 0, &mut acc),
        Term::Computation(c) => {
            let w = measure_comp(c, 0, &mut acc);
            add_at(&mut acc, 0, w);
        }
    }
    acc
}

fn add_at(acc: &mut Vec<u64>, depth: usize, w: u64) {
    if acc.len() <= depth {
        acc.resize(depth + 1, 0);
    }
    acc[depth] += w;
}

fn measure_value(v: &Value, depth: usize, acc: &mut Vec<u64>) {
    match v {
        Value::Var(_) => {}
        Value::Func(_, args) => args.iter().for_each(|a| measure_value(a, depth, acc)),
        Value::Abs(body) => {
            let w = measure_comp(body, depth + 1, acc);
            add_at(acc, depth + 1, w);
        }
    }
}

fn measure_comp(c: &Computation, depth: usize, acc: &mut Vec<u64>) -> u64 {
    match c {
        Computation::Ret(v) => {
            measure_value(v, depth, acc);
            1
        }
        Computation::Proc(_, args) => {
            args.iter().for_each(|a| measure_value(a, depth, acc));
            1
        }
        Computation::App(f, a) => {
            measure_value(f, depth, acc);
            measure_value(a, depth, acc);
            1
        }
        Computation::Let(m, n) => 2 * measure_comp(m, depth, acc) + measure_comp(n, depth, acc),
    }
}

fn measure_less(a: &[u64], b: &[u64]) -> bool {
    let len = a.len().max(b.len());
    let get = |v: &[u64], i: usize| v.get(i).copied().unwrap_or(0);
    (0..len).map(|i| (get(a, i), get(b, i))).find(|(x, y)| x != y).is_some_and(|(x, y)| x < y)
}

/// Exhaustive rewriting with the three let rules.
pub fn let_normal_form(t: &Term, n: usize) -> Term {
    let mut cur = t.clone();
    while let Some((_, next)) = step(&cur, n, false) {
        cur = next;
    }
    cur
}

pub fn let_normal_form_computation(c: &Computation, n: usize) -> Computation {
    let mut cur = c.clone();
    while let Some((_, next)) = step_computation(&cur, n, false) {
        cur = next;
    }
    cur
}

pub fn let_normal_form_value(v: &Value, n: usize) -> Value {
    let mut cur = v.clone();
    while let Some((_, next)) = step_value(&cur, n, false) {
        cur = next;
    }
    cur
}

/// As [`let_normal_form`], asserting at every step that the term stays
/// scoped and that [`let_measure`] strictly decreases. Returns the step count.
pub fn let_normal_form_checked(t: &Term, n: usize) -> (Term, usize) {
    let mut cur = t.clone();
    let mut measure = let_measure(&cur);
    let mut steps = 0;
    while let Some((rule, next)) = step(&cur, n, false) {
        let m2 = let_measure(&next);
        assert!(measure_less(&m2, &measure), "{rule} did not decrease the measure: {measure:?} -> {m2:?}");
        assert!(next.scoped(n), "{rule} broke scoping");
        cur = next;
        measure = m2;
        steps += 1;
    }
    (cur, steps)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Normalized {
    pub term: Term,
    pub steps: usize,
    pub exhausted: bool,
}

/// Iterate leftmost-outermost steps up to `fuel` times.
pub fn normalize(t: &Term, n: usize, fuel: usize, beta: bool) -> Normalized {
    let mut cur = t.clone();
    for steps in 0..fuel {
        match step(&cur, n, beta) {
            Some((_, next)) => cur = next,
            None => return Normalized { term: cur, steps, exhausted: false },
        }
    }
    let exhausted = step(&cur, n, beta).is_some();
    Normalized { term: cur, steps: fuel, exhausted }
}

/// Semi-decision of provable equality. Proved when the let-normal forms
/// coincide or the two leftmost-outermost reduction sequences meet within
/// `fuel` steps each; never claims the terms differ.
pub fn eq_check(t1: &Term, t2: &Term, n: usize, fuel: usize) -> Result<EqVerdict> {
    if t1.sort() != t2.sort() {
        return Err(Error::Sort("cannot compare a value with a computation".into()));
    }
    if t1 == t2 {
        return Ok(EqVerdict::Proved);
    }
    let a = let_normal_form(t1, n);
    let b = let_normal_form(t2, n);
    if a == b {
        return Ok(EqVerdict::Proved);
    }
    let mut seen: HashSet<Term> = HashSet::new();
    let mut cur = a;
    let mut exhausted = true;
    for _ in 0..fuel {
        match step(&cur, n, true) {
            Some((_, next)) => {
                seen.insert(std::mem::replace(&mut cur, next));
            }
            None => {
                exhausted = false;
                break;
            }
        }
    }
    seen.insert(cur);
    let mut cur = b;
    for _ in 0..fuel {
        if seen.contains(&cur) {
            return Ok(EqVerdict::Proved);
        }
        match step(&cur, n, true) {
            Some((_, next)) => cur = next,
            None => return Ok(EqVerdict::Unknown { fuel_exhausted: exhausted }),
        }
    }
    if seen.contains(&cur) {
        return Ok(EqVerdict::Proved);
    }
    Ok(EqVerdict::Unknown { fuel_exhausted: true })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, Signature};

    fn sig() -> Signature {
        Signature::new().with_proc("p", 1).with_proc("q", 1).with_func("c", 0)
    }

    fn comp(src: &str, ctx: &[&str]) -> Term {
        parse_term(src, &sig(), ctx).unwrap()
    }

    #[test]
    fn each_rule_fires_at_the_root() {
        let lunit = comp("let y = ret c() in p(y)", &["x"]);
        assert_eq!(step(&lunit, 1, false).unwrap(), (Rule::LUnit, comp("p(c())", &["x"])));
        let runit = comp("let y = p(x) in ret y", &["x"]);
        assert_eq!(step(&runit, 1, false).unwrap(), (Rule::RUnit, comp("p(x)", &["x"])));
        let beta = comp("(\\y. p(y)) x", &["x"]);
        assert_eq!(step(&beta, 1, true).unwrap(), (Rule::Beta, comp("p(x)", &["x"])));
        assert_eq!(step(&beta, 1, false), None);
    }

    #[test]
    fn assoc_lifts_the_outer_body() {
        let lhs = comp("let z = (let y = p(x) in q(y)) in p(z)", &["x"]);
        let rhs = comp("let y = p(x) in let z = q(y) in p(z)", &["x"]);
        assert_eq!(step(&lhs, 1, false).unwrap(), (Rule::Assoc, rhs.clone()));
        assert_eq!(eq_check(&lhs, &rhs, 1, 10).unwrap(), EqVerdict::Proved);
    }

    #[test]
    fn omega_exhausts_fuel() {
        let omega = comp("(\\x. x x) (\\x. x x)", &[]);
        let out = normalize(&omega, 0, 100, true);
        assert!(out.exhausted);
        assert_eq!(out.term, omega);
        assert_eq!(eq_check(&omega, &comp("p(c())", &[]), 0, 50).unwrap(), EqVerdict::Unknown { fuel_exhausted: true });
    }

    #[test]
    fn redex_free_terms_are_fixed_at_zero_fuel() {
        let t = comp("let y = p(x) in q(y)", &["x"]);
        assert_eq!(normalize(&t, 1, 0, true), Normalized { term: t.clone(), steps: 0, exhausted: false });
    }

    #[test]
    fn reordered_effects_are_not_proved() {
        let k1 = comp("let a = p(x) in let b = q(x) in ret a", &["x"]);
        let k2 = comp("let b = q(x) in let a = p(x) in ret a", &["x"]);
        assert_eq!(eq_check(&k1, &k2, 1, DEFAULT_FUEL).unwrap(), EqVerdict::Unknown { fuel_exhausted: false });
    }

    #[test]
    fn joinable_beta_terms_are_proved() {
        let lhs = comp("(\\y. ret y) c()", &[]);
        let rhs = comp("ret c()", &[]);
        assert_eq!(eq_check(&lhs, &rhs, 0, 10).unwrap(), EqVerdict::Proved);
        let v = Term::Value(Value::Var(1));
        assert!(eq_check(&lhs, &v, 1, 10).is_err());
    }

    #[test]
    fn measure_drops_on_each_rule() {
        for src in [
            "let y = ret c() in p(y)",
            "let y = p(x) in ret y",
            "let z = (let y = p(x) in q(y)) in p(z)",
            "ret \\y. let z = ret y in ret z",
        ] {
            let t = comp(src, &["x"]);
            let (nf, steps) = let_normal_form_checked(&t, 1);
            assert!(steps > 0);
            assert!(step(&nf, 1, false).is_none());
        }
    }
}
