//! Interpretation of terms in a Freyd operad with symbol assignments.
//!
//! Terms share one context across subterms, so a node with `k` immediate
//! subterms at arity `n` substitutes their denotations side by side (arity
//! `k * n`) and then contracts back to `n` along `j ↦ ((j - 1) mod n) + 1`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};

use crate::error::{check_arity, Error, Result};
use crate::operad::{par_subst, Comp, FreydOperad, LawReport, Operad, SampleRng, Val, Verdict};
use crate::renaming::Renaming;
use crate::syntax::{subst_values, Computation, GenConfig, Signature, Term, TermGen, Value};

/// A Freyd operad together with an element for every symbol.
pub struct Structure<F: FreydOperad> {
    pub freyd: F,
    pub funcs: BTreeMap<String, Val<F>>,
    pub procs: BTreeMap<String, Comp<F>>,
}

/// A denotation of either sort.
#[derive(Clone, Debug)]
pub enum Denotation<V, C> {
    Value(V),
    Computation(C),
}

pub type Den<F> = Denotation<Val<F>, Comp<F>>;

/// The contraction `[k * n] -> [n]` identifying the `k` copies of the context.
pub fn diagonal(k: usize, n: usize) -> Renaming {
    let map = if n == 0 { Vec::new() } else { (0..k * n).map(|j| j % n + 1).collect() };
    Renaming::new(map, n).expect("diagonal renaming")
}

impl<F: FreydOperad> Structure<F> {
    pub fn new(freyd: F) -> Self {
        Structure {
            freyd,
            funcs: BTreeMap::new(),
            procs: BTreeMap::new(),
        }
    }

    pub fn with_func(mut self, name: &str, f: Val<F>) -> Self {
        self.funcs.insert(name.to_string(), f);
        self
    }

    pub fn with_proc(mut self, name: &str, p: Comp<F>) -> Self {
        self.procs.insert(name.to_string(), p);
        self
    }

    /// The signature whose symbols carry assignments.
    pub fn signature(&self) -> Signature {
        let vals = self.freyd.values();
        let comps = self.freyd.comps();
        Signature {
            funcs: self.funcs.iter().map(|(k, v)| (k.clone(), vals.arity(v))).collect(),
            procs: self.procs.iter().map(|(k, c)| (k.clone(), comps.arity(c))).collect(),
        }
    }

    /// Fails unless every symbol of `sig` is assigned at its arity.
    pub fn covers(&self, sig: &Signature) -> Result<()> {
        for (name, &k) in &sig.funcs {
            let f = self.funcs.get(name).ok_or_else(|| Error::MissingSymbol(name.clone()))?;
            check_arity("function assignment", k, self.freyd.values().arity(f))?;
        }
        for (name, &k) in &sig.procs {
            let p = self.procs.get(name).ok_or_else(|| Error::MissingSymbol(name.clone()))?;
            check_arity("procedure assignment", k, self.freyd.comps().arity(p))?;
        }
        Ok(())
    }

    pub fn interpret_value(&self, v: &Value, n: usize) -> Result<Val<F>> {
        let vals = self.freyd.values();
        match v {
            Value::Var(k) => {
                if *k == 0 || *k > n {
                    return Err(Error::IllFormed(n));
                }
                vals.rename(&vals.ident(), &Renaming::new(vec![*k], n)?)
            }
            Value::Func(f, args) => {
                let head = self.funcs.get(f).ok_or_else(|| Error::MissingSymbol(f.clone()))?;
                let gs = args.iter().map(|a| self.interpret_value(a, n)).collect::<Result<Vec<_>>>()?;
                vals.rename(&par_subst(vals, head, &gs)?, &diagonal(gs.len(), n))
            }
            Value::Abs(body) => {
                let m = self.interpret_comp(body, n + 1)?;
                self.freyd.abs(n, &m).ok_or(Error::MissingClosure("an abstraction"))?
            }
        }
    }

    pub fn interpret_comp(&self, c: &Computation, n: usize) -> Result<Comp<F>> {
        let comps = self.freyd.comps();
        let returned = |args: &[Value]| -> Result<Vec<Comp<F>>> {
            args.iter().map(|a| Ok(self.freyd.ret(&self.interpret_value(a, n)?))).collect()
        };
        match c {
            Computation::Ret(v) => Ok(self.freyd.ret(&self.interpret_value(v, n)?)),
            Computation::Proc(p, args) => {
                let head = self.procs.get(p).ok_or_else(|| Error::MissingSymbol(p.clone()))?;
                let gs = returned(args)?;
                comps.rename(&par_subst(comps, head, &gs)?, &diagonal(gs.len(), n))
            }
            Computation::App(v, w) => {
                let app = self.freyd.app().ok_or(Error::MissingClosure("an application"))?;
                let gs = returned(&[v.clone(), w.clone()])?;
                comps.rename(&par_subst(comps, &app, &gs)?, &diagonal(2, n))
            }
            Computation::Let(bound, body) => {
                let first = self.interpret_comp(bound, n)?;
                let then = self.interpret_comp(body, n + 1)?;
                comps.rename(&comps.subst(&then, n, &first, 0)?, &diagonal(2, n))
            }
        }
    }

    pub fn interpret(&self, t: &Term, n: usize) -> Result<Den<F>> {
        Ok(match t {
            Term::Value(v) => Denotation::Value(self.interpret_value(v, n)?),
            Term::Computation(c) => Denotation::Computation(self.interpret_comp(c, n)?),
        })
    }

    /// Whether the two terms (same sort, arity `n`) denote equal elements.
    pub fn satisfies(&self, t1: &Term, t2: &Term, n: usize) -> Result<Verdict> {
        match (t1, t2) {
            (Term::Value(a), Term::Value(b)) => {
                let (a, b) = (self.interpret_value(a, n)?, self.interpret_value(b, n)?);
                Ok(self.freyd.values().equals(&a, &b))
            }
            (Term::Computation(a), Term::Computation(b)) => {
                let (a, b) = (self.interpret_comp(a, n)?, self.interpret_comp(b, n)?);
                Ok(self.freyd.comps().equals(&a, &b))
            }
            _ => Err(Error::Sort("cannot compare a value with a computation".into())),
        }
    }

    pub fn render(&self, d: &Den<F>) -> String {
        match d {
            Denotation::Value(v) => self.freyd.values().render(v),
            Denotation::Computation(c) => self.freyd.comps().render(c),
        }
    }

    /// `⟦t[σ]⟧ = ⟦t⟧{⟦σ_1⟧, …, ⟦σ_k⟧}` contracted, for random terms `t`
    /// at arity `k` and values `σ_i` at arity `m`; computations substitute
    /// the returned values.
    pub fn check_substitution_lemma(&self, gen: &GenConfig, samples: usize, max_size: usize, seed: u64) -> LawReport {
        let mut report = LawReport::new("substitution lemma");
        let terms = TermGen::new(gen);
        let mut rng = SampleRng::seed_from_u64(seed);
        let (vals, comps) = (self.freyd.values(), self.freyd.comps());
        // Closed values need a constant or an abstraction.
        let lo = usize::from(!gen.higher_order && !gen.sig.funcs.values().any(|&a| a == 0));
        for i in 0..samples {
            let k = rng.gen_range(lo..=2);
            let m = rng.gen_range(lo..=2);
            let size = rng.gen_range(2..=max_size.max(2));
            let sigma: Vec<Value> = (0..k)
                .map(|_| {
                    let size = rng.gen_range(1..=max_size.clamp(1, 4));
                    terms.value(&mut rng, m, size)
                })
                .collect();
            let t = if i % 2 == 0 {
                Term::Value(terms.value(&mut rng, k, size))
            } else {
                Term::Computation(terms.computation(&mut rng, k, size))
            };
            let outcome = (|| -> Result<Verdict> {
                let substituted = subst_values(&t, &sigma, m)?;
                let den_sigma = sigma.iter().map(|v| self.interpret_value(v, m)).collect::<Result<Vec<_>>>()?;
                let contract = diagonal(k, m);
                Ok(match (&t, &substituted) {
                    (Term::Value(t), Term::Value(ts)) => {
                        let lhs = self.interpret_value(ts, m)?;
                        let rhs = vals.rename(&par_subst(vals, &self.interpret_value(t, k)?, &den_sigma)?, &contract)?;
                        vals.equals(&lhs, &rhs)
                    }
                    (Term::Computation(t), Term::Computation(ts)) => {
                        let lhs = self.interpret_comp(ts, m)?;
                        let rets: Vec<_> = den_sigma.iter().map(|v| self.freyd.ret(v)).collect();
                        let rhs = comps.rename(&par_subst(comps, &self.interpret_comp(t, k)?, &rets)?, &contract)?;
                        comps.equals(&lhs, &rhs)
                    }
                    _ => unreachable!("substitution preserves sort"),
                })
            })();
            match outcome {
                Ok(v) => report.record("substitution lemma", v, || format!("{t:?} with {sigma:?} at arity {m}")),
                Err(e) => report.fail("substitution lemma", format!("{t:?}: {e}")),
            }
        }
        report
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteEffect, KleisliModel, KleisliValues, Table};
    use crate::syntax::parse_term;

    fn maybe_structure() -> Structure<KleisliModel> {
        let model = KleisliModel::new(FiniteEffect::maybe(2));
        let f = model.value_table(2, &["0", "1", "1", "0"]).unwrap();
        let p = model.comp_table(1, &["1", "none"]).unwrap();
        Structure::new(model).with_func("f", f).with_proc("p", p)
    }

    #[test]
    fn variables_are_projections() {
        let s = maybe_structure();
        let x2 = s.interpret_value(&Value::Var(2), 3).unwrap();
        assert_eq!(x2, KleisliValues::new(2).projection(3, 2));
    }

    #[test]
    fn shared_arguments_are_contracted() {
        let s = maybe_structure();
        // f(x, x) is xor on the diagonal: constantly 0.
        let t = Value::Func("f".into(), vec![Value::Var(1), Value::Var(1)]);
        assert_eq!(s.interpret_value(&t, 1).unwrap(), Table::constant(1, 2, 0));
    }

    #[test]
    fn let_sequences_effects() {
        let s = maybe_structure();
        let sig = s.signature();
        let t = parse_term("let y = p(x) in p(y)", &sig, &["x"]).unwrap();
        let Term::Computation(c) = t else { panic!() };
        let den = s.interpret_comp(&c, 1).unwrap();
        // p(0) = 1, p(1) fails; so p(p(0)) fails, and p(1) already fails.
        assert_eq!(s.freyd.comps.render(&den), "<none; none>/1");
    }

    #[test]
    fn closure_is_required_for_abstraction() {
        let s = maybe_structure();
        let t = Value::abs(Computation::Ret(Value::Var(1)));
        assert_eq!(s.interpret_value(&t, 0), Err(Error::MissingClosure("an abstraction")));
        let missing = Value::Func("g".into(), vec![]);
        assert_eq!(s.interpret_value(&missing, 0), Err(Error::MissingSymbol("g".into())));
    }

    #[test]
    fn substitution_lemma_in_maybe() {
        let s = maybe_structure();
        let gen = GenConfig::new(s.signature()).first_order();
        let report = s.check_substitution_lemma(&gen, 500, 8, 11);
        assert!(report.passed(), "{}", report.to_text());
    }
}
