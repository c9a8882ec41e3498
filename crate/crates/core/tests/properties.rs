use std::rc::Rc;

use lambdac::adjunction::{curry, identity_functor, uncurry, FreeProp};
use lambdac::models::{FiniteEffect, KleisliModel, KleisliValues};
use lambdac::operad::{check_freyd, FreydOperad, Operad, Regime, SampleRng, Verdict};
use lambdac::renaming::Renaming;
use lambdac::semantics::Structure;
use lambdac::subst_prop::{
    apply_word, parse_word, print_word, return_word, rewrite_trace, rewrite_word, sample_word, word_eq, word_measure, Mode,
    Side, Word, WordVerdict,
};
use lambdac::syntax::{parse_term, print_term, rename_term, subst_values, well_formed, GenConfig, Signature, Term, TermGen, Value};
use lambdac::term_model::TermModel;
use lambdac::theory::{eq_check, let_normal_form, normalize, step, EqVerdict};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn sig() -> Signature {
    Signature::new()
        .with_func("c", 0)
        .with_func("f", 2)
        .with_func("g", 1)
        .with_proc("p", 1)
        .with_proc("q", 2)
}

fn renaming(dom: usize, cod: usize) -> BoxedStrategy<Renaming> {
    if cod == 0 {
        return Just(Renaming::identity(0)).prop_filter("empty", move |_| dom == 0).boxed();
    }
    prop::collection::vec(1..=cod, dom).prop_map(move |map| Renaming::new(map, cod).unwrap()).boxed()
}

fn chain3() -> impl Strategy<Value = (Renaming, Renaming, Renaming)> {
    (0..=4usize, 1..=4usize, 1..=4usize, 1..=4usize)
        .prop_flat_map(|(a, b, c, d)| (renaming(a, b), renaming(b, c), renaming(c, d)))
}

fn random_term(seed: u64, first_order: bool) -> (Term, usize) {
    let mut cfg = GenConfig::new(sig());
    if first_order {
        cfg = cfg.first_order();
    }
    let gen = TermGen::new(&cfg);
    let mut rng = SampleRng::seed_from_u64(seed);
    let n = rng.gen_range(0..=3);
    let budget = rng.gen_range(1..=24);
    if rng.gen_bool(0.7) {
        (Term::Computation(gen.computation(&mut rng, n, budget)), n)
    } else {
        (Term::Value(gen.value(&mut rng, n, budget)), n)
    }
}

fn names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn renaming_composition_is_associative((r, s, t) in chain3()) {
        let left = r.compose(&s).unwrap().compose(&t).unwrap();
        let right = r.compose(&s.compose(&t).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn renaming_text_round_trips(r in (0..=5usize, 1..=5usize).prop_flat_map(|(a, b)| renaming(a, b))) {
        prop_assert_eq!(r.to_string().parse::<Renaming>().unwrap(), r.clone());
        prop_assert_eq!(Renaming::recompose(&r.decompose(), r.dom()).unwrap(), r);
    }

    #[test]
    fn permutations_have_inverses(n in 0..=5usize, seed in any::<u64>()) {
        let perms = Renaming::permutations(n);
        let p = &perms[(seed as usize) % perms.len()];
        let inv = p.inverse().unwrap();
        prop_assert!(p.compose(&inv).unwrap().is_identity());
        prop_assert!(inv.compose(p).unwrap().is_identity());
    }

    #[test]
    fn print_then_parse_is_identity(seed in any::<u64>()) {
        let (t, n) = random_term(seed, false);
        let ctx = names(n);
        let text = print_term(&t, n, &ctx);
        let refs: Vec<&str> = ctx.iter().map(String::as_str).collect();
        let back = parse_term(&text, &sig(), &refs).map_err(|e| TestCaseError::fail(format!("{e}: {text} from {t:?}")))?;
        prop_assert_eq!(&back, &t, "{}", text);
        prop_assert_eq!(print_term(&back, n, &ctx), text);
    }

    #[test]
    fn substitution_preserves_well_formedness(seed in any::<u64>(), m in 0..=3usize) {
        let (t, n) = random_term(seed, false);
        let cfg = GenConfig::new(sig());
        let gen = TermGen::new(&cfg);
        let mut rng = SampleRng::seed_from_u64(seed ^ 0x55);
        let vals: Vec<Value> = (0..n).map(|_| gen.value(&mut rng, m, 5)).collect();
        let out = subst_values(&t, &vals, m).unwrap();
        prop_assert!(well_formed(&out, m, &sig()));
        // Substituting the variables themselves changes nothing.
        let ids: Vec<Value> = (1..=n).map(Value::Var).collect();
        prop_assert_eq!(subst_values(&t, &ids, n).unwrap(), t);
    }

    #[test]
    fn renaming_terms_is_functorial(seed in any::<u64>(), (r, s) in (1..=3usize, 1..=3usize).prop_flat_map(|(b, c)| (renaming(0, b), renaming(b, c)))) {
        // Re-scope a random term to the domain of r by generating it there.
        let cfg = GenConfig::new(sig());
        let gen = TermGen::new(&cfg);
        let mut rng = SampleRng::seed_from_u64(seed);
        let dom = r.dom();
        let t = Term::Computation(gen.computation(&mut rng, dom, 12));
        prop_assert_eq!(rename_term(&t, &Renaming::identity(dom)).unwrap(), t.clone());
        let stepwise = rename_term(&rename_term(&t, &r).unwrap(), &s).unwrap();
        prop_assert_eq!(stepwise, rename_term(&t, &r.compose(&s).unwrap()).unwrap());
    }

    #[test]
    fn let_steps_keep_terms_well_formed(seed in any::<u64>()) {
        let (t, n) = random_term(seed, false);
        let mut cur = t.clone();
        while let Some((_, next)) = step(&cur, n, false) {
            prop_assert!(well_formed(&next, n, &sig()));
            cur = next;
        }
        prop_assert!(!normalize(&t, n, 10_000, false).exhausted);
        prop_assert_eq!(eq_check(&t, &let_normal_form(&t, n), n, 1000).unwrap(), EqVerdict::Proved);
    }

    #[test]
    fn let_steps_are_sound_in_finite_models(seed in any::<u64>()) {
        let (t, n) = random_term(seed, true);
        let Some((_, next)) = step(&t, n, false) else { return Ok(()) };
        let mut rng = SampleRng::seed_from_u64(seed);
        for effect in [FiniteEffect::maybe(2), FiniteEffect::writer_free(2), FiniteEffect::powerset(2)] {
            let model = KleisliModel::new(effect);
            let mut s = Structure::new(model.clone());
            for (f, &a) in &sig().funcs {
                s.funcs.insert(f.clone(), model.values.sample(a, &mut rng).unwrap());
            }
            for (p, &a) in &sig().procs {
                s.procs.insert(p.clone(), model.comps.sample(a, &mut rng).unwrap());
            }
            prop_assert_eq!(s.satisfies(&t, &next, n).unwrap(), Verdict::Equal);
        }
    }
}

// ---------------------------------------------------------------------------
// Words

fn value_word(seed: u64, cod: usize) -> Word<<KleisliValues as Operad>::Elem> {
    let mut rng = SampleRng::seed_from_u64(seed);
    let len = rng.gen_range(0..=6);
    sample_word(&KleisliValues::new(2), cod, len, 3, &mut rng).unwrap()
}

fn probes<O: Operad>(op: &O, cod: usize) -> Vec<O::Elem> {
    let mut out: Vec<O::Elem> = (1..=cod)
        .map(|i| op.rename(&op.ident(), &Renaming::new(vec![i], cod).unwrap()).unwrap())
        .collect();
    if let Some(all) = op.enumerate(cod).filter(|a| a.len() <= 256) {
        out.extend(all);
    }
    out
}

fn same_action<O: Operad>(op: &O, a: &Word<O::Elem>, b: &Word<O::Elem>) -> bool {
    a.dom() == b.dom()
        && a.cod() == b.cod()
        && probes(op, a.cod())
            .iter()
            .all(|f| op.equals(&apply_word(op, f, a).unwrap(), &apply_word(op, f, b).unwrap()) == Verdict::Equal)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rewriting_preserves_the_action_and_is_idempotent(seed in any::<u64>(), cod in 1..=3usize) {
        let op = KleisliValues::new(2);
        let w = value_word(seed, cod);
        for mode in [Mode::Symmetric, Mode::Cartesian] {
            let (nf, trace) = rewrite_trace(&op, &w, mode).unwrap();
            prop_assert!(same_action(&op, &w, &nf), "{:?} -> {:?} via {:?}", w, nf, trace);
            prop_assert_eq!(rewrite_word(&op, &nf, mode).unwrap(), nf.clone());
            prop_assert!(word_measure(&op, &nf) <= word_measure(&op, &w));
        }
    }

    #[test]
    fn computation_words_rewrite_soundly(seed in any::<u64>(), cod in 1..=3usize) {
        let model = KleisliModel::new(FiniteEffect::writer_free(2));
        let comps = model.comps();
        let mut rng = SampleRng::seed_from_u64(seed);
        let len = rng.gen_range(0..=5);
        let w = sample_word(comps, cod, len, 3, &mut rng).unwrap();
        let nf = rewrite_word(comps, &w, Mode::Symmetric).unwrap();
        let mut rng = SampleRng::seed_from_u64(!seed);
        for _ in 0..16 {
            let f = comps.sample(cod, &mut rng).unwrap();
            prop_assert_eq!(apply_word(comps, &f, &w).unwrap(), apply_word(comps, &f, &nf).unwrap());
        }
    }

    #[test]
    fn word_text_round_trips(seed in any::<u64>(), cod in 1..=3usize) {
        let op = KleisliValues::new(2);
        let w = value_word(seed, cod);
        let text = print_word(&op, &w, "values2");
        prop_assert_eq!(parse_word(&op, &text).unwrap().1, w);
    }

    #[test]
    fn prop_laws_hold_on_normal_forms(a in any::<u64>(), b in any::<u64>(), k in 0..=2usize) {
        let op = KleisliValues::new(2);
        let v = value_word(a, 2);
        let w = value_word(b, v.dom().clamp(1, 3));
        let Ok(vw) = v.concat(&w) else { return Ok(()) };
        // Whiskering is functorial.
        for side in [Side::Left, Side::Right] {
            let whole = vw.whisker(k, side);
            let parts = v.whisker(k, side).concat(&w.whisker(k, side)).unwrap();
            prop_assert_eq!(
                rewrite_word(&op, &whole, Mode::Cartesian).unwrap(),
                rewrite_word(&op, &parts, Mode::Cartesian).unwrap()
            );
        }
        // The symmetry is natural: (v ⊗ w) then swap = swap then (w ⊗ v).
        let (x, y) = (value_word(a ^ 1, 1), value_word(b ^ 1, 2));
        let lhs = Word::symmetry(x.cod(), y.cod()).concat(&x.tensor(&y)).unwrap();
        let rhs = y.tensor(&x).concat(&Word::symmetry(x.dom(), y.dom())).unwrap();
        prop_assert!(same_action(&op, &lhs, &rhs), "{:?} / {:?}", lhs, rhs);
        prop_assert!(!matches!(word_eq(&op, &lhs, &rhs, Mode::Cartesian).unwrap(), WordVerdict::Refuted(_)));
    }

    #[test]
    fn return_words_are_functorial_and_central(a in any::<u64>(), b in any::<u64>()) {
        let model = KleisliModel::new(FiniteEffect::writer_free(2));
        let v = value_word(a, 1);
        let w = value_word(b, v.dom().clamp(1, 3));
        if let Ok(vw) = v.concat(&w) {
            prop_assert_eq!(return_word(&model, &vw), return_word(&model, &v).concat(&return_word(&model, &w)).unwrap());
        }
        // A returned word commutes with an effectful step beside it.
        let comps = model.comps();
        let mut rng = SampleRng::seed_from_u64(a ^ b);
        let proc_word = Word::sub(comps, 0, comps.sample(1, &mut rng).unwrap(), 0);
        let pure = return_word(&model, &v);
        let first = pure.tensor(&Word::empty(1)).concat(&Word::empty(pure.dom()).tensor(&proc_word)).unwrap();
        let second = Word::empty(1).tensor(&proc_word).concat(&pure.tensor(&Word::empty(1))).unwrap();
        let mut rng = SampleRng::seed_from_u64(b);
        for _ in 0..16 {
            let f = comps.sample(2, &mut rng).unwrap();
            prop_assert_eq!(apply_word(comps, &f, &first).unwrap(), apply_word(comps, &f, &second).unwrap());
        }
    }

    #[test]
    fn uncurry_respects_rewriting(seed in any::<u64>(), cod in 1..=2usize) {
        let source = Rc::new(KleisliModel::new(FiniteEffect::maybe(2)));
        let target = FreeProp::new((*source).clone());
        let psi = curry::<KleisliModel, KleisliModel>(Rc::clone(&source), &identity_functor::<KleisliModel>());
        let back = uncurry::<KleisliModel, KleisliModel>(&psi);
        let mut rng = SampleRng::seed_from_u64(seed);
        let len = rng.gen_range(0..=4);
        let w = sample_word(source.values(), cod, len, 2, &mut rng).unwrap();
        let nf = rewrite_word(source.values(), &w, Mode::Cartesian).unwrap();
        let (a, b) = ((back.values)(&w).unwrap(), (back.values)(&nf).unwrap());
        prop_assert_eq!(target.value_words_equal(&a, &b), Verdict::Equal);
    }
}

#[test]
fn sampled_suites_are_deterministic() {
    let tm = TermModel::new(Signature::new().with_func("c", 0).with_proc("p", 1));
    let regime = Regime::Sampled { arity_cap: 2, samples: 20, seed: 77 };
    assert_eq!(check_freyd(&tm, regime), check_freyd(&tm, regime));
}

#[test]
fn substitution_lemma_holds_in_maybe() {
    let model = KleisliModel::new(FiniteEffect::maybe(2));
    let mut rng = SampleRng::seed_from_u64(8);
    let mut s = Structure::new(model.clone());
    for (f, &a) in &sig().funcs {
        s.funcs.insert(f.clone(), model.values.sample(a, &mut rng).unwrap());
    }
    for (p, &a) in &sig().procs {
        s.procs.insert(p.clone(), model.comps.sample(a, &mut rng).unwrap());
    }
    let report = s.check_substitution_lemma(&GenConfig::new(sig()).first_order(), 400, 12, 9);
    assert!(report.passed(), "{}", report.to_text());
}
