//! Monadic applicative structures: a carrier with application into `M(A)`.

use std::fmt;

use rand::SeedableRng;

use super::effect::FiniteEffect;
use crate::error::{check_arity, Error, Result};
use crate::operad::{LawReport, Operad, SampleRng, Verdict};
use crate::semantics::Structure;
use crate::syntax::{Computation, Signature, Value};
use crate::term_model::{CompClass, TermModel, ValClass};

/// Application `A × A -> M(A)`, with an optional abstraction.
pub trait Mca {
    type Elem: Clone + fmt::Debug;
    type Comp: Clone + fmt::Debug;

    fn app(&self, f: &Self::Elem, a: &Self::Elem) -> Result<Self::Comp>;

    /// An element `e` with `app(e, a) = body(a)` for every `a`, if known.
    fn abs(&self, _body: &Self::Comp) -> Option<Result<Self::Elem>> {
        None
    }
}

/// A polynomial in one variable over the atoms, read with application.
#[derive(Clone, PartialEq, Eq)]
pub enum Monomial {
    Var,
    Atom(usize),
    App(Box<Monomial>, Box<Monomial>),
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Monomial::Var => write!(f, "x"),
            Monomial::Atom(a) => write!(f, "#{a}"),
            Monomial::App(l, r) => write!(f, "({l:?} {r:?})"),
        }
    }
}

/// A finite applicative structure given by its application table.
#[derive(Clone, Debug)]
pub struct FiniteMca {
    pub effect: FiniteEffect,
    /// `table[f * k + a]` is the element of `M(A)` for `f · a`.
    pub table: Vec<u16>,
}

impl FiniteMca {
    pub fn new(effect: FiniteEffect, table: Vec<u16>) -> Result<FiniteMca> {
        let k = effect.carrier_size();
        if table.len() != k * k || table.iter().any(|&m| m as usize >= effect.size()) {
            return Err(Error::Model(format!("application table needs {} entries of M(A)", k * k)));
        }
        Ok(FiniteMca { effect, table })
    }

    pub fn apply(&self, f: usize, a: usize) -> usize {
        self.table[f * self.effect.carrier_size() + a] as usize
    }

    /// Evaluate a monomial at `x` in `M(A)`, left subterm first.
    pub fn eval(&self, m: &Monomial, x: usize) -> usize {
        let eff = &self.effect;
        match m {
            Monomial::Var => eff.unit(x),
            Monomial::Atom(a) => eff.unit(*a),
            Monomial::App(l, r) => {
                let (lv, rv) = (self.eval(l, x), self.eval(r, x));
                eff.bind(lv, |u| eff.bind(rv, |v| self.apply(u, v)))
            }
        }
    }

    /// Every monomial with at most `apps` applications.
    pub fn monomials(&self, apps: usize) -> Vec<Monomial> {
        let k = self.effect.carrier_size();
        let mut by_size: Vec<Vec<Monomial>> = vec![std::iter::once(Monomial::Var).chain((0..k).map(Monomial::Atom)).collect()];
        for n in 1..=apps {
            let mut level = Vec::new();
            for left in 0..n {
                for l in &by_size[left] {
                    for r in &by_size[n - 1 - left] {
                        level.push(Monomial::App(Box::new(l.clone()), Box::new(r.clone())));
                    }
                }
            }
            by_size.push(level);
        }
        by_size.into_iter().flatten().collect()
    }

    /// An atom `e` with `e · x = m(x)` for every `x`, by exhaustive search.
    pub fn represent(&self, m: &Monomial) -> Option<usize> {
        let k = self.effect.carrier_size();
        (0..k).find(|&e| (0..k).all(|x| self.apply(e, x) == self.eval(m, x)))
    }

    /// Monomials with no representing atom: witnesses that the structure is
    /// not combinatorially complete.
    pub fn unrepresentable(&self, apps: usize) -> Vec<Monomial> {
        self.monomials(apps).into_iter().filter(|m| self.represent(m).is_none()).collect()
    }
}

impl Mca for FiniteMca {
    type Elem = usize;
    type Comp = usize;

    fn app(&self, f: &usize, a: &usize) -> Result<usize> {
        let k = self.effect.carrier_size();
        if *f >= k || *a >= k {
            return Err(Error::Model("application outside the carrier".into()));
        }
        Ok(self.apply(*f, *a))
    }
}

/// Closed values of the term model with `app(v, w) = [v w]`.
#[derive(Clone, Debug)]
pub struct ClosedTermMca {
    pub model: TermModel,
}

impl Mca for ClosedTermMca {
    type Elem = ValClass;
    type Comp = CompClass;

    fn app(&self, f: &ValClass, a: &ValClass) -> Result<CompClass> {
        check_arity("closed application", 0, f.arity)?;
        check_arity("closed application", 0, a.arity)?;
        CompClass::new(0, &Computation::App(f.rep.clone(), a.rep.clone()))
    }

    /// `body` is a computation in one variable.
    fn abs(&self, body: &CompClass) -> Option<Result<ValClass>> {
        Some(self.model.tm_abs(0, body))
    }
}

impl ClosedTermMca {
    pub fn comps_equal(&self, a: &CompClass, b: &CompClass) -> Verdict {
        self.model.comps.equals(a, b)
    }

    /// `app(abs(m), v) = m[v]` on sampled one-variable bodies and closed values.
    pub fn check_weak_closure(&self, samples: usize, seed: u64) -> LawReport {
        let mut report = LawReport::new("closed-term combinatory completeness");
        let mut rng = SampleRng::seed_from_u64(seed);
        for _ in 0..samples {
            let (Some(m), Some(v)) = (self.model.comps.sample(1, &mut rng), self.model.values.sample(0, &mut rng)) else {
                report.notes.push("no closed values to sample".into());
                break;
            };
            let outcome = (|| -> Result<Verdict> {
                let e = self.abs(&m).expect("abstraction exists")?;
                let lhs = self.app(&e, &v)?;
                let rhs = CompClass::new(0, &m.rep.subst(std::slice::from_ref(&v.rep), 0))?;
                Ok(self.comps_equal(&lhs, &rhs))
            })();
            match outcome {
                Ok(verdict) => report.record("beta on closed terms", verdict, || format!("{m:?} applied to {v:?}")),
                Err(e) => report.fail("beta on closed terms", e.to_string()),
            }
        }
        report
    }
}

/// The closed-term MCA together with the canonical structure it sits in.
pub fn closed_term_mca(sig: Signature) -> (ClosedTermMca, Structure<TermModel>) {
    let model = TermModel::new(sig);
    (ClosedTermMca { model: model.clone() }, model.canonical_structure())
}

/// `[λx. ret x]`, the identity combinator.
pub fn identity_combinator() -> ValClass {
    ValClass::new(0, &Value::abs(Computation::Ret(Value::Var(1)))).expect("closed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_value;

    #[test]
    fn identity_combinator_applies_to_its_argument() {
        let sig = Signature::new().with_func("c", 0);
        let (mca, _) = closed_term_mca(sig.clone());
        let v = ValClass::new(0, &parse_value("c()", &sig, &[]).unwrap()).unwrap();
        let lhs = mca.app(&identity_combinator(), &v).unwrap();
        let rhs = CompClass::new(0, &Computation::Ret(v.rep.clone())).unwrap();
        assert_eq!(mca.comps_equal(&lhs, &rhs), Verdict::Equal);
        let id = identity_combinator();
        let selfapp = mca.app(&id, &id).unwrap();
        assert_eq!(mca.comps_equal(&selfapp, &CompClass::new(0, &Computation::Ret(id.rep.clone())).unwrap()), Verdict::Equal);
    }

    #[test]
    fn closed_term_weak_closure_on_samples() {
        let (mca, _) = closed_term_mca(Signature::new().with_func("c", 0).with_proc("p", 1));
        let report = mca.check_weak_closure(150, 3);
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn finite_structures_miss_some_monomials() {
        // Projection-style application over maybe on two atoms.
        let effect = FiniteEffect::maybe(2);
        let mca = FiniteMca::new(effect, vec![0, 1, 0, 1]).unwrap();
        assert_eq!(mca.eval(&Monomial::Var, 1), 1);
        assert_eq!(mca.represent(&Monomial::Var), Some(0));
        let missing = mca.unrepresentable(1);
        assert!(!missing.is_empty());
        // Any finite table leaves some monomial out: there are more
        // one-variable maps into M(A) than atoms.
        for code in 0..81u16 {
            let t: Vec<u16> = (0..4).map(|i| (code / 3u16.pow(i)) % 3).collect();
            let m = FiniteMca::new(FiniteEffect::maybe(2), t).unwrap();
            assert!(!m.unrepresentable(2).is_empty());
        }
    }
}
