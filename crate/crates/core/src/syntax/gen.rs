//! Seeded random terms, used by the term-model sampler and by tests.

use rand::Rng;

use super::{Computation, Signature, Value};

#[derive(Clone, Debug)]
pub struct GenConfig {
    pub sig: Signature,
    /// Allow `Abs` and `App`.
    pub higher_order: bool,
    /// Probability that a variable leaf is drawn out of scope.
    pub scope_error_rate: f64,
}

impl GenConfig {
    pub fn new(sig: Signature) -> Self {
        GenConfig {
            sig,
            higher_order: true,
            scope_error_rate: 0.0,
        }
    }

    pub fn first_order(mut self) -> Self {
        self.higher_order = false;
        self
    }
}

pub struct TermGen<'a> {
    cfg: &'a GenConfig,
    funcs: Vec<(&'a str, usize)>,
    procs: Vec<(&'a str, usize)>,
}

impl<'a> TermGen<'a> {
    pub fn new(cfg: &'a GenConfig) -> Self {
        TermGen {
            cfg,
            funcs: cfg.sig.funcs.iter().map(|(f, &k)| (f.as_str(), k)).collect(),
            procs: cfg.sig.procs.iter().map(|(p, &k)| (p.as_str(), k)).collect(),
        }
    }

    /// A value at arity `n` whose size is at most `budget` (budget ≥ 1),
    /// except when no leaf exists at arity 0 and an abstraction is forced.
    pub fn value<R: Rng>(&self, rng: &mut R, n: usize, budget: usize) -> Value {
        let budget = budget.max(1);
        let funcs: Vec<_> = self.funcs.iter().filter(|(_, k)| *k >= 1 && *k < budget).collect();
        let can_abs = self.cfg.higher_order && budget >= 3;
        let leaf_first = budget == 1 || rng.gen_bool(0.3) || (funcs.is_empty() && !can_abs);
        if leaf_first {
            if let Some(v) = self.leaf(rng, n) {
                return v;
            }
        }
        let pick_abs = can_abs && (funcs.is_empty() || rng.gen_bool(0.4));
        if pick_abs {
            return Value::abs(self.computation(rng, n + 1, budget - 1));
        }
        if let Some(&&(f, k)) = pick(rng, &funcs) {
            let sizes = split(rng, budget - 1, k);
            let args = sizes.into_iter().map(|b| self.value(rng, n, b)).collect();
            return Value::Func(f.to_string(), args);
        }
        self.leaf(rng, n)
            .or_else(|| self.cfg.higher_order.then(|| Value::abs(Computation::Ret(Value::Var(n + 1)))))
            .expect("no closed value can be generated: add a constant to the signature")
    }

    fn leaf<R: Rng>(&self, rng: &mut R, n: usize) -> Option<Value> {
        let consts: Vec<_> = self.funcs.iter().filter(|(_, k)| *k == 0).collect();
        let use_var = n > 0 && (consts.is_empty() || rng.gen_bool(0.8));
        if use_var {
            if self.cfg.scope_error_rate > 0.0 && rng.gen_bool(self.cfg.scope_error_rate) {
                return Some(Value::Var(n + rng.gen_range(1..=2)));
            }
            return Some(Value::Var(rng.gen_range(1..=n)));
        }
        pick(rng, &consts).map(|(c, _)| Value::Func(c.to_string(), vec![]))
    }

    /// A computation at arity `n` of size at most `budget` (budget ≥ 2 is
    /// always satisfiable; budget 1 needs a nullary procedure).
    pub fn computation<R: Rng>(&self, rng: &mut R, n: usize, budget: usize) -> Computation {
        let budget = budget.max(1);
        let procs: Vec<_> = self.procs.iter().filter(|(_, k)| *k < budget).collect();
        let mut choices: Vec<u8> = vec![0, 0];
        if budget >= 5 {
            choices.extend([1, 1, 1]);
        }
        if budget >= 3 && self.cfg.higher_order {
            choices.push(3);
        }
        if !procs.is_empty() {
            choices.extend([2, 2]);
        }
        match *pick(rng, &choices).unwrap() {
            1 => {
                let sizes = split(rng, budget - 1, 2);
                let bound = self.computation(rng, n, sizes[0].clamp(2, budget - 3));
                let rest = budget - 1 - bound.size();
                let body = self.computation(rng, n + 1, rest.max(1));
                Computation::let_in(bound, body)
            }
            2 => {
                let &&(p, k) = pick(rng, &procs).unwrap();
                let sizes = split(rng, budget - 1, k);
                Computation::Proc(p.to_string(), sizes.into_iter().map(|b| self.value(rng, n, b)).collect())
            }
            3 => {
                let sizes = split(rng, budget - 1, 2);
                Computation::App(self.value(rng, n, sizes[0]), self.value(rng, n, sizes[1]))
            }
            _ => Computation::Ret(self.value(rng, n, budget - 1)),
        }
    }
}

fn pick<'b, R: Rng, T>(rng: &mut R, items: &'b [T]) -> Option<&'b T> {
    if items.is_empty() {
        None
    } else {
        Some(&items[rng.gen_range(0..items.len())])
    }
}

/// Split `total` into `parts` positive pieces (pieces may be 1 if `total < parts`).
fn split<R: Rng>(rng: &mut R, total: usize, parts: usize) -> Vec<usize> {
    if parts == 0 {
        return Vec::new();
    }
    let mut sizes = vec![1; parts];
    for _ in parts..total.max(parts) {
        if rng.gen_bool(0.7) {
            sizes[rng.gen_range(0..parts)] += 1;
        }
    }
    sizes
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn respects_budget_and_scope() {
        let sig = Signature::new().with_func("c", 0).with_func("f", 2).with_proc("p", 1);
        let cfg = GenConfig::new(sig.clone());
        let gen = TermGen::new(&cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let n = rng.gen_range(0..3);
            let budget = rng.gen_range(2..30);
            let c = gen.computation(&mut rng, n, budget);
            assert!(c.size() <= budget, "{c:?} exceeds {budget}");
            assert!(c.well_formed(n, &sig));
        }
    }
}
