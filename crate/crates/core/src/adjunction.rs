//! Free Freyd PROPs of substitution words, their restriction to morphisms
//! into 1, and the curry/uncurry correspondence between Freyd-operad maps
//! into that restriction and PROP maps out of the free PROP.

use std::rc::Rc;

use rand::{Rng, SeedableRng};

use crate::error::Result;
use crate::operad::{Comp, FreydOperad, LawReport, Operad, SampleRng, Val, Verdict};
use crate::renaming::Renaming;
use crate::subst_prop::{
    from_word, return_word, sample_word, to_word, word_eq, Mode, Side, Step, Word, WordVerdict,
};

fn verdict(w: WordVerdict) -> Verdict {
    match w {
        WordVerdict::Proved => Verdict::Equal,
        WordVerdict::Refuted(_) => Verdict::Distinct,
        WordVerdict::Unknown => Verdict::Unknown,
    }
}

/// Words into 1 over a base operad, as an operad: substitution whiskers
/// the inner word and composes, renaming appends a renaming step.
#[derive(Clone, Debug)]
pub struct CodOne<O: Operad> {
    pub base: O,
    pub mode: Mode,
}

impl<O: Operad> Operad for CodOne<O> {
    type Elem = Word<O::Elem>;

    fn name(&self) -> String {
        format!("words into 1 over {}", self.base.name())
    }
    fn arity(&self, f: &Self::Elem) -> usize {
        f.dom()
    }
    fn ident(&self) -> Self::Elem {
        Word::empty(1)
    }
    fn subst(&self, f: &Self::Elem, n1: usize, g: &Self::Elem, n2: usize) -> Result<Self::Elem> {
        g.whisker(n1, Side::Left).whisker(n2, Side::Right).compose(f)
    }
    fn rename(&self, f: &Self::Elem, r: &Renaming) -> Result<Self::Elem> {
        Word::ren(r.clone()).compose(f)
    }
    fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict {
        word_eq(&self.base, a, b, self.mode).map_or(Verdict::Distinct, verdict)
    }
    fn enumerate(&self, n: usize) -> Option<Vec<Self::Elem>> {
        Some(self.base.enumerate(n)?.iter().map(|f| to_word(&self.base, f)).collect())
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<Self::Elem> {
        let f = self.base.sample(n, rng)?;
        Some(to_word(&self.base, &f))
    }
    fn render(&self, f: &Self::Elem) -> String {
        match from_word(&self.base, f) {
            Ok(e) => self.base.render(&e),
            Err(_) => format!("{f:?}"),
        }
    }
}

/// The free Freyd PROP on a Freyd operad: value words (cartesian),
/// computation words (symmetric) and `ret` on words. As a [`FreydOperad`]
/// it is its forgetful image, the morphisms into 1.
#[derive(Clone, Debug)]
pub struct FreeProp<F: FreydOperad> {
    pub freyd: F,
    pub values: CodOne<F::Values>,
    pub comps: CodOne<F::Comps>,
}

impl<F: FreydOperad> FreeProp<F>
where
    F::Values: Clone,
    F::Comps: Clone,
{
    pub fn new(freyd: F) -> Self {
        FreeProp {
            values: CodOne {
                base: freyd.values().clone(),
                mode: Mode::Cartesian,
            },
            comps: CodOne {
                base: freyd.comps().clone(),
                mode: Mode::Symmetric,
            },
            freyd,
        }
    }
}

impl<F: FreydOperad> FreeProp<F> {
    pub fn value_words_equal(&self, a: &Word<Val<F>>, b: &Word<Val<F>>) -> Verdict {
        self.values.equals(a, b)
    }

    pub fn comp_words_equal(&self, a: &Word<Comp<F>>, b: &Word<Comp<F>>) -> Verdict {
        self.comps.equals(a, b)
    }

    pub fn ret_word(&self, w: &Word<Val<F>>) -> Word<Comp<F>> {
        return_word(&self.freyd, w)
    }
}

impl<F: FreydOperad> FreydOperad for FreeProp<F> {
    type Values = CodOne<F::Values>;
    type Comps = CodOne<F::Comps>;

    fn values(&self) -> &Self::Values {
        &self.values
    }
    fn comps(&self) -> &Self::Comps {
        &self.comps
    }
    fn ret(&self, v: &Word<Val<F>>) -> Word<Comp<F>> {
        return_word(&self.freyd, v)
    }
}

/// A map on each sort; used both for Freyd-operad maps into a forgetful
/// image and for PROP maps between free PROPs.
pub struct SortedMap<VA, CA, VB, CB> {
    pub values: Arrow<VA, VB>,
    pub comps: Arrow<CA, CB>,
}

pub type Arrow<A, B> = Rc<dyn Fn(&A) -> Result<B>>;

impl<VA, CA, VB, CB> Clone for SortedMap<VA, CA, VB, CB> {
    fn clone(&self) -> Self {
        SortedMap {
            values: Rc::clone(&self.values),
            comps: Rc::clone(&self.comps),
        }
    }
}

/// A Freyd-operad map `F -> U(Free G)`.
pub type OperadFunctor<F, G> = SortedMap<Val<F>, Comp<F>, Word<Val<G>>, Word<Comp<G>>>;

/// A Freyd-PROP map `Free F -> Free G`, as maps on words.
pub type PropFunctor<F, G> = SortedMap<Word<Val<F>>, Word<Comp<F>>, Word<Val<G>>, Word<Comp<G>>>;

/// The identity PROP map.
pub fn identity_functor<F: FreydOperad>() -> PropFunctor<F, F> {
    SortedMap {
        values: Rc::new(|w: &Word<Val<F>>| Ok(w.clone())),
        comps: Rc::new(|w: &Word<Comp<F>>| Ok(w.clone())),
    }
}

/// The PROP map induced by element maps applied to every payload.
pub fn payload_functor<F: FreydOperad, G: FreydOperad>(
    on_value: impl Fn(&Val<F>) -> Val<G> + 'static,
    on_comp: impl Fn(&Comp<F>) -> Comp<G> + 'static,
) -> PropFunctor<F, G> {
    SortedMap {
        values: Rc::new(move |w: &Word<Val<F>>| Ok(w.map(&on_value))),
        comps: Rc::new(move |w: &Word<Comp<F>>| Ok(w.map(&on_comp))),
    }
}

/// `curry(Φ)(f) = Φ([⟨0 ⊣ f ⊢ 0⟩])`.
pub fn curry<F, G>(source: Rc<F>, phi: &PropFunctor<F, G>) -> OperadFunctor<F, G>
where
    F: FreydOperad + 'static,
    G: FreydOperad,
    Val<G>: 'static,
    Comp<G>: 'static,
{
    let (phi_v, phi_c) = (Rc::clone(&phi.values), Rc::clone(&phi.comps));
    let (sv, sc) = (Rc::clone(&source), source);
    SortedMap {
        values: Rc::new(move |f: &Val<F>| phi_v(&to_word(sv.values(), f))),
        comps: Rc::new(move |f: &Comp<F>| phi_c(&to_word(sc.comps(), f))),
    }
}

/// Extends an element map to words, step by step: a substitution becomes
/// the whiskered image of its payload, a renaming its generator word.
pub fn uncurry<F: FreydOperad, G: FreydOperad>(psi: &OperadFunctor<F, G>) -> PropFunctor<F, G>
where
    Val<F>: 'static,
    Comp<F>: 'static,
    Val<G>: 'static,
    Comp<G>: 'static,
{
    let (psi_v, psi_c) = (Rc::clone(&psi.values), Rc::clone(&psi.comps));
    SortedMap {
        values: Rc::new(move |w: &Word<Val<F>>| extend(w, &*psi_v)),
        comps: Rc::new(move |w: &Word<Comp<F>>| extend(w, &*psi_c)),
    }
}

fn extend<A: Clone, B: Clone>(w: &Word<A>, on_elem: &dyn Fn(&A) -> Result<Word<B>>) -> Result<Word<B>> {
    let mut out = Word::empty(w.cod());
    for s in w.steps() {
        let piece = match s {
            Step::Sub { left, elem, right } => on_elem(elem)?.whisker(*left, Side::Left).whisker(*right, Side::Right),
            Step::Ren(r) => Word::generated_renaming(r),
        };
        out = out.concat(&piece)?;
    }
    Ok(out)
}

/// Elements and words that an adjunction check quantifies over.
pub struct AdjunctionInputs<F: FreydOperad> {
    pub values: Vec<Val<F>>,
    pub comps: Vec<Comp<F>>,
    pub value_words: Vec<Word<Val<F>>>,
    pub comp_words: Vec<Word<Comp<F>>>,
}

impl<F: FreydOperad> AdjunctionInputs<F> {
    /// Every element of arity at most `cap`, and every one-step word whose
    /// arities stay within `cap`. `None` unless the carriers enumerate.
    pub fn exhaustive(freyd: &F, cap: usize) -> Option<Self> {
        let (vals, comps) = (freyd.values(), freyd.comps());
        let mut inputs = AdjunctionInputs {
            values: Vec::new(),
            comps: Vec::new(),
            value_words: Vec::new(),
            comp_words: Vec::new(),
        };
        for n in 0..=cap {
            inputs.values.extend(vals.enumerate(n)?);
            inputs.comps.extend(comps.enumerate(n)?);
        }
        for at in 1..=cap {
            for left in 0..at {
                let right = at - 1 - left;
                for v in &inputs.values {
                    if left + vals.arity(v) + right <= cap {
                        inputs.value_words.push(Word::sub(vals, left, v.clone(), right));
                    }
                }
                for c in &inputs.comps {
                    if left + comps.arity(c) + right <= cap {
                        inputs.comp_words.push(Word::sub(comps, left, c.clone(), right));
                    }
                }
            }
        }
        for a in 0..=cap {
            for b in 0..=cap {
                for r in Renaming::enumerate(a, b) {
                    inputs.value_words.push(Word::ren(r.clone()));
                    inputs.comp_words.push(Word::ren(r));
                }
            }
        }
        Some(inputs)
    }

    /// `count` sampled elements and words of each sort (arity at most `cap`,
    /// words of up to four steps).
    pub fn sampled(freyd: &F, count: usize, cap: usize, seed: u64) -> Self {
        let (vals, comps) = (freyd.values(), freyd.comps());
        let mut rng = SampleRng::seed_from_u64(seed);
        let mut inputs = AdjunctionInputs {
            values: Vec::new(),
            comps: Vec::new(),
            value_words: Vec::new(),
            comp_words: Vec::new(),
        };
        for _ in 0..count {
            let n = rng.gen_range(0..=cap);
            inputs.values.extend(vals.sample(n, &mut rng));
            inputs.comps.extend(comps.sample(n, &mut rng));
            let cod = rng.gen_range(1..=cap.max(1));
            let len = rng.gen_range(0..=4);
            inputs.value_words.extend(sample_word(vals, cod, len, cap, &mut rng));
            inputs.comp_words.extend(sample_word(comps, cod, len, cap, &mut rng));
        }
        inputs
    }
}

/// Round trips of curry and uncurry for a PROP map `Φ: Free F -> Free G`,
/// functoriality of the uncurried map, and compatibility with `ret`.
pub fn check_adjunction<F, G>(
    source: &Rc<F>,
    target: &FreeProp<G>,
    phi: &PropFunctor<F, G>,
    inputs: &AdjunctionInputs<F>,
) -> LawReport
where
    F: FreydOperad + 'static,
    G: FreydOperad,
    Val<F>: 'static,
    Comp<F>: 'static,
    Val<G>: 'static,
    Comp<G>: 'static,
{
    let mut report = LawReport::new("adjunction");
    let psi = curry::<F, G>(Rc::clone(source), phi);
    let back = uncurry::<F, G>(&psi);
    let psi_again = curry::<F, G>(Rc::clone(source), &back);

    let mut record_v = |law: &str, a: Result<Word<Val<G>>>, b: Result<Word<Val<G>>>, what: &dyn Fn() -> String| {
        match (a, b) {
            (Ok(a), Ok(b)) => report.record(law, target.value_words_equal(&a, &b), what),
            (Err(e), _) | (_, Err(e)) => report.fail(law, format!("{}: {e}", what())),
        }
    };
    for f in &inputs.values {
        record_v("curry after uncurry (values)", (psi_again.values)(f), (psi.values)(f), &|| format!("{f:?}"));
    }
    for w in &inputs.value_words {
        record_v("uncurry after curry (values)", (back.values)(w), (phi.values)(w), &|| format!("{w:?}"));
    }
    for pair in inputs.value_words.windows(2) {
        if let Ok(both) = pair[0].concat(&pair[1]) {
            let split = (|| (back.values)(&pair[0])?.concat(&(back.values)(&pair[1])?))();
            record_v("uncurry preserves composition (values)", (back.values)(&both), split, &|| format!("{both:?}"));
        }
    }

    let mut record_c = |law: &str, a: Result<Word<Comp<G>>>, b: Result<Word<Comp<G>>>, what: &dyn Fn() -> String| {
        match (a, b) {
            (Ok(a), Ok(b)) => report.record(law, target.comp_words_equal(&a, &b), what),
            (Err(e), _) | (_, Err(e)) => report.fail(law, format!("{}: {e}", what())),
        }
    };
    for f in &inputs.comps {
        record_c("curry after uncurry (computations)", (psi_again.comps)(f), (psi.comps)(f), &|| format!("{f:?}"));
    }
    for w in &inputs.comp_words {
        record_c("uncurry after curry (computations)", (back.comps)(w), (phi.comps)(w), &|| format!("{w:?}"));
    }
    for pair in inputs.comp_words.windows(2) {
        if let Ok(both) = pair[0].concat(&pair[1]) {
            let split = (|| (back.comps)(&pair[0])?.concat(&(back.comps)(&pair[1])?))();
            record_c("uncurry preserves composition (computations)", (back.comps)(&both), split, &|| format!("{both:?}"));
        }
    }
    for w in &inputs.value_words {
        let lhs = (back.comps)(&return_word(&**source, w));
        let rhs = (back.values)(w).map(|v| target.ret_word(&v));
        record_c("uncurried map commutes with ret", lhs, rhs, &|| format!("{w:?}"));
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FiniteEffect, KleisliModel};

    fn maybe() -> Rc<KleisliModel> {
        Rc::new(KleisliModel::new(FiniteEffect::maybe(2)))
    }

    #[test]
    fn forgetful_image_is_a_preoperad() {
        let free = FreeProp::new(KleisliModel::new(FiniteEffect::maybe(2)));
        let report = crate::operad::check_preoperad(
            &free.values,
            crate::operad::Regime::Sampled {
                arity_cap: 2,
                samples: 60,
                seed: 5,
            },
        );
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn uncurry_of_the_empty_word_is_empty() {
        let source = maybe();
        let psi = curry::<KleisliModel, KleisliModel>(Rc::clone(&source), &identity_functor::<KleisliModel>());
        let back = uncurry::<KleisliModel, KleisliModel>(&psi);
        assert!((back.values)(&Word::empty(3)).unwrap().is_empty());
    }

    #[test]
    fn identity_round_trips() {
        let source = maybe();
        let target = FreeProp::new((*source).clone());
        let inputs = AdjunctionInputs::exhaustive(&*source, 1).unwrap();
        let report = check_adjunction(&source, &target, &identity_functor::<KleisliModel>(), &inputs);
        assert!(report.passed(), "{}", report.to_text());
    }

    #[test]
    fn permutation_round_trips() {
        let source = maybe();
        let target = FreeProp::new((*source).clone());
        let (m1, m2) = ((*source).clone(), (*source).clone());
        let phi = payload_functor::<KleisliModel, KleisliModel>(
            move |v| m1.conjugate_value(v, &[1, 0]),
            move |c| m2.conjugate_comp(c, &[1, 0]),
        );
        let inputs = AdjunctionInputs::sampled(&*source, 40, 2, 9);
        let report = check_adjunction(&source, &target, &phi, &inputs);
        assert!(report.passed(), "{}", report.to_text());
    }
}
