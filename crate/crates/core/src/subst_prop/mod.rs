//! Substitution words over an operad: lists of single substitutions and
//! renamings, read as morphisms `dom -> cod` of a PROP.
//!
//! A word acts on an element of arity `cod` by applying its steps from the
//! head of the list onwards, so the head step is the one adjacent to `cod`.
//! Consequently `compose(w1, w2)` (first `w1: m -> n`, then `w2: n -> k`)
//! lists the steps of `w2` before those of `w1`.

mod format;
mod rewrite;

use std::fmt;

use rand::Rng;

use crate::error::{check_arity, Error, Result};
use crate::operad::{Comp, FreydOperad, Operad, SampleRng, Val};
use crate::renaming::Renaming;

pub use format::{parse_word, print_word, word_header, WordHeader};
pub use rewrite::{rewrite_trace, Measure, rewrite_word, word_eq, word_measure, WordVerdict};

#[derive(Clone, PartialEq, Eq)]
pub enum Step<E> {
    /// `⟨left ⊣ elem ⊢ right⟩`: from `left + arity(elem) + right` to `left + 1 + right`.
    Sub { left: usize, elem: E, right: usize },
    /// A renaming `r: a -> b`, as a step from `b` to `a`.
    Ren(Renaming),
}

impl<E: fmt::Debug> fmt::Debug for Step<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Sub { left, elem, right } => write!(f, "⟨{left} ⊣ {elem:?} ⊢ {right}⟩"),
            Step::Ren(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    /// Only the symmetric rules; suitable for computations.
    Symmetric,
    /// All rules, including commutation, copy and discard; values only.
    Cartesian,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Side {
    Left,
    Right,
}

#[derive(Clone, PartialEq, Eq)]
pub struct Word<E> {
    dom: usize,
    cod: usize,
    steps: Vec<Step<E>>,
}

impl<E: fmt::Debug> fmt::Debug for Word<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.dom, self.cod, self.steps)
    }
}

/// `(cod side, dom side)` arities of a step.
fn step_arities<O: Operad + ?Sized>(op: &O, s: &Step<O::Elem>) -> (usize, usize) {
    match s {
        Step::Sub { left, elem, right } => (left + 1 + right, left + op.arity(elem) + right),
        Step::Ren(r) => (r.dom(), r.cod()),
    }
}

impl<E: Clone> Word<E> {
    pub fn empty(n: usize) -> Word<E> {
        Word {
            dom: n,
            cod: n,
            steps: Vec::new(),
        }
    }

    /// Checks the arity chain starting from `cod`.
    pub fn from_steps<O: Operad<Elem = E> + ?Sized>(op: &O, cod: usize, steps: Vec<Step<E>>) -> Result<Word<E>> {
        let mut at = cod;
        for s in &steps {
            let (c, d) = step_arities(op, s);
            check_arity("word chain", at, c)?;
            at = d;
        }
        Ok(Word { dom: at, cod, steps })
    }

    pub fn sub<O: Operad<Elem = E> + ?Sized>(op: &O, left: usize, elem: E, right: usize) -> Word<E> {
        let dom = left + op.arity(&elem) + right;
        Word {
            dom,
            cod: left + 1 + right,
            steps: vec![Step::Sub { left, elem, right }],
        }
    }

    /// The singleton renaming word; `r: a -> b` gives a word `b -> a`.
    pub fn ren(r: Renaming) -> Word<E> {
        Word {
            dom: r.cod(),
            cod: r.dom(),
            steps: vec![Step::Ren(r)],
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn steps(&self) -> &[Step<E>] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `self: m -> n` followed by `next: n -> k`.
    pub fn compose(&self, next: &Word<E>) -> Result<Word<E>> {
        check_arity("word composition", next.dom, self.cod)?;
        let mut steps = next.steps.clone();
        steps.extend(self.steps.iter().cloned());
        Ok(Word {
            dom: self.dom,
            cod: next.cod,
            steps,
        })
    }

    /// List concatenation: `self` acts first, then `rest` (so `rest.cod == self.dom`).
    pub fn concat(&self, rest: &Word<E>) -> Result<Word<E>> {
        rest.compose(self)
    }

    /// Add `k` untouched wires on one side of every step.
    pub fn whisker(&self, k: usize, side: Side) -> Word<E> {
        let steps = self
            .steps
            .iter()
            .map(|s| match (s, side) {
                (Step::Sub { left, elem, right }, Side::Left) => Step::Sub {
                    left: left + k,
                    elem: elem.clone(),
                    right: *right,
                },
                (Step::Sub { left, elem, right }, Side::Right) => Step::Sub {
                    left: *left,
                    elem: elem.clone(),
                    right: right + k,
                },
                (Step::Ren(r), Side::Left) => Step::Ren(Renaming::identity(k).tensor(r)),
                (Step::Ren(r), Side::Right) => Step::Ren(r.tensor(&Renaming::identity(k))),
            })
            .collect();
        Word {
            dom: self.dom + k,
            cod: self.cod + k,
            steps,
        }
    }

    /// `self ⊗ other`: `self` on the first wires, then `other` on the rest.
    pub fn tensor(&self, other: &Word<E>) -> Word<E> {
        let first = self.whisker(other.dom, Side::Right);
        let second = other.whisker(self.cod, Side::Left);
        first.compose(&second).expect("tensor arities agree")
    }

    /// The symmetry `m + n -> n + m`.
    pub fn symmetry(m: usize, n: usize) -> Word<E> {
        Word::ren(Renaming::swap(n, m))
    }

    /// The diagonal `n -> n + n`.
    pub fn copy_word(n: usize, mode: Mode) -> Result<Word<E>> {
        if mode != Mode::Cartesian {
            return Err(Error::Mode);
        }
        Ok(Word::ren(Renaming::copy(n)))
    }

    /// The eraser `n -> 0`.
    pub fn discard_word(n: usize, mode: Mode) -> Result<Word<E>> {
        if mode != Mode::Cartesian {
            return Err(Error::Mode);
        }
        Ok(Word::ren(Renaming::discard(n)))
    }

    /// A renaming as a word of generator layers, each layer a tensor of
    /// singleton generator words.
    pub fn generated_renaming(r: &Renaming) -> Word<E> {
        let layers = r.decompose();
        let mut w = Word::empty(r.dom());
        for layer in layers {
            let mut row = Word::empty(0);
            for g in &layer.0 {
                row = row.tensor(&Word::ren(g.renaming()));
            }
            w = w.concat(&row).expect("layer arities agree");
        }
        w
    }

    /// Map payloads, keeping the shape.
    pub fn map<F>(&self, mut f: impl FnMut(&E) -> F) -> Word<F> {
        Word {
            dom: self.dom,
            cod: self.cod,
            steps: self
                .steps
                .iter()
                .map(|s| match s {
                    Step::Sub { left, elem, right } => Step::Sub {
                        left: *left,
                        elem: f(elem),
                        right: *right,
                    },
                    Step::Ren(r) => Step::Ren(r.clone()),
                })
                .collect(),
        }
    }

    pub fn try_map<F>(&self, mut f: impl FnMut(&E) -> Result<F>) -> Result<Word<F>> {
        let mut steps = Vec::with_capacity(self.steps.len());
        for s in &self.steps {
            steps.push(match s {
                Step::Sub { left, elem, right } => Step::Sub {
                    left: *left,
                    elem: f(elem)?,
                    right: *right,
                },
                Step::Ren(r) => Step::Ren(r.clone()),
            });
        }
        Ok(Word {
            dom: self.dom,
            cod: self.cod,
            steps,
        })
    }
}

/// `f ★ w` for `f` of arity `w.cod()`; the result has arity `w.dom()`.
pub fn apply_word<O: Operad + ?Sized>(op: &O, f: &O::Elem, w: &Word<O::Elem>) -> Result<O::Elem> {
    check_arity("word application", w.cod, op.arity(f))?;
    let mut acc = f.clone();
    for s in &w.steps {
        acc = match s {
            Step::Sub { left, elem, right } => op.subst(&acc, *left, elem, *right)?,
            Step::Ren(r) => op.rename(&acc, r)?,
        };
    }
    Ok(acc)
}

/// `[⟨0 ⊣ f ⊢ 0⟩]: arity(f) -> 1`.
pub fn to_word<O: Operad + ?Sized>(op: &O, f: &O::Elem) -> Word<O::Elem> {
    Word::sub(op, 0, f.clone(), 0)
}

/// `ident ★ w` for a word into 1.
pub fn from_word<O: Operad + ?Sized>(op: &O, w: &Word<O::Elem>) -> Result<O::Elem> {
    check_arity("word codomain", 1, w.cod)?;
    apply_word(op, &op.ident(), w)
}

/// A random word into `cod` with `len` steps, keeping every intermediate
/// arity at most `cap` (when `cod <= cap`). `None` if the operad cannot sample.
pub fn sample_word<O: Operad + ?Sized>(
    op: &O,
    cod: usize,
    len: usize,
    cap: usize,
    rng: &mut SampleRng,
) -> Option<Word<O::Elem>> {
    let mut steps = Vec::with_capacity(len);
    let mut at = cod;
    for _ in 0..len {
        if at > 0 && rng.gen_bool(0.6) {
            let left = rng.gen_range(0..at);
            let arity = rng.gen_range(0..=(cap + 1).saturating_sub(at).min(2));
            let elem = op.sample(arity, rng)?;
            steps.push(Step::Sub {
                left,
                elem,
                right: at - 1 - left,
            });
            at = at - 1 + arity;
        } else {
            let to = rng.gen_range(at.saturating_sub(1).max(1)..=(at + 1).min(cap.max(1)));
            let map = (0..at).map(|_| rng.gen_range(1..=to)).collect();
            steps.push(Step::Ren(Renaming::new(map, to).expect("in range")));
            at = to;
        }
    }
    Some(Word::from_steps(op, cod, steps).expect("sampled chain is consistent"))
}

/// Push a value word to computations through `ret`.
pub fn return_word<F: FreydOperad>(freyd: &F, w: &Word<Val<F>>) -> Word<Comp<F>> {
    w.map(|v| freyd.ret(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteEffect, KleisliModel, KleisliValues, Table};
    use crate::operad::Verdict;

    fn vals() -> KleisliValues {
        KleisliValues::new(2)
    }

    fn table(arity: usize, outs: &[u16]) -> Table {
        Table::new(arity, outs.to_vec())
    }

    #[test]
    fn chain_is_checked() {
        let op = vals();
        let f = table(2, &[0, 1, 1, 0]);
        let ok = vec![Step::Sub { left: 0, elem: f.clone(), right: 0 }, Step::Ren(Renaming::swap(1, 1))];
        let w = Word::from_steps(&op, 1, ok).unwrap();
        assert_eq!((w.dom(), w.cod()), (2, 1));
        let bad = vec![Step::Sub { left: 0, elem: f, right: 0 }, Step::Ren(Renaming::identity(3))];
        assert!(Word::from_steps(&op, 1, bad).is_err());
    }

    #[test]
    fn application_is_functorial() {
        let op = vals();
        let xor = table(2, &[0, 1, 1, 0]);
        let not = table(1, &[1, 0]);
        let w1 = Word::sub(&op, 0, not.clone(), 1);
        let w2 = Word::ren(Renaming::copy(1));
        let both = w1.concat(&w2).unwrap();
        let stepwise = apply_word(&op, &apply_word(&op, &xor, &w1).unwrap(), &w2).unwrap();
        assert_eq!(apply_word(&op, &xor, &both).unwrap(), stepwise);
        // xor(not x, x) = 1
        assert_eq!(stepwise, table(1, &[1, 1]));
    }

    #[test]
    fn whiskering_shifts_substitutions() {
        let op = vals();
        let w = Word::sub(&op, 1, table(0, &[1]), 2);
        let left = w.whisker(3, Side::Left);
        assert_eq!(left.steps()[0], Step::Sub { left: 4, elem: table(0, &[1]), right: 2 });
        assert_eq!(w.whisker(0, Side::Right), w);
    }

    #[test]
    fn symmetry_and_comonoid_words() {
        let s: Word<Table> = Word::symmetry(1, 1);
        assert_eq!(s.steps(), &[Step::Ren(Renaming::new(vec![2, 1], 2).unwrap())]);
        assert_eq!((Word::<Table>::symmetry(2, 1).dom(), Word::<Table>::symmetry(2, 1).cod()), (3, 3));
        assert!(Word::<Table>::copy_word(1, Mode::Symmetric).is_err());
        let c = Word::<Table>::copy_word(2, Mode::Cartesian).unwrap();
        assert_eq!((c.dom(), c.cod()), (2, 4));
    }

    #[test]
    fn generated_renaming_acts_like_the_renaming() {
        let op = vals();
        let f = table(3, &[0, 1, 1, 0, 1, 1, 0, 0]);
        for r in Renaming::enumerate(3, 2) {
            let w = Word::generated_renaming(&r);
            assert_eq!(apply_word(&op, &f, &w).unwrap(), op.rename(&f, &r).unwrap(), "{r}");
        }
    }

    #[test]
    fn representability_round_trip() {
        let op = vals();
        for n in 0..=2 {
            for f in op.enumerate(n).unwrap() {
                assert_eq!(op.equals(&from_word(&op, &to_word(&op, &f)).unwrap(), &f), Verdict::Equal);
            }
        }
    }

    #[test]
    fn return_word_is_natural() {
        let model = KleisliModel::new(FiniteEffect::maybe(2));
        let op = model.values();
        let f = table(2, &[0, 1, 1, 1]);
        let w = Word::sub(op, 1, table(1, &[1, 0]), 0).concat(&Word::ren(Renaming::copy(1))).unwrap();
        let lhs = apply_word(model.comps(), &model.ret(&f), &return_word(&model, &w)).unwrap();
        let rhs = model.ret(&apply_word(op, &f, &w).unwrap());
        assert_eq!(lhs, rhs);
    }
}
