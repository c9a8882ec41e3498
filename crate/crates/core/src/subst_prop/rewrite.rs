//! Directed rewriting of substitution words and a word-equality check.
//!
//! Every rewrite strictly lowers the measure
//! `(length, substitutions, renaming displacement, interchange inversions)`
//! in the lexicographic order, which is asserted as rewriting proceeds.

use rand::SeedableRng;

use super::{apply_word, from_word, Mode, Step, Word};
use crate::error::{check_arity, Result};
use crate::operad::{Operad, SampleRng, Verdict};
use crate::renaming::Renaming;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Rule {
    UnitRenaming,
    UnitSubstitution,
    MergeRenamings,
    Discard,
    Associate,
    Contract,
    Naturality,
    Interchange,
}

const RULES: [Rule; 8] = [
    Rule::UnitRenaming,
    Rule::UnitSubstitution,
    Rule::MergeRenamings,
    Rule::Discard,
    Rule::Associate,
    Rule::Contract,
    Rule::Naturality,
    Rule::Interchange,
];

impl Rule {
    fn name(self) -> &'static str {
        match self {
            Rule::UnitRenaming => "unit-renaming",
            Rule::UnitSubstitution => "unit-substitution",
            Rule::MergeRenamings => "merge-renamings",
            Rule::Discard => "discard",
            Rule::Associate => "associate",
            Rule::Contract => "contract",
            Rule::Naturality => "naturality",
            Rule::Interchange => "interchange",
        }
    }

    fn cartesian_only(self) -> bool {
        matches!(self, Rule::Discard | Rule::Contract | Rule::Interchange)
    }
}

pub type Measure = (usize, usize, usize, usize);

/// The termination measure of a word.
pub fn word_measure<O: Operad + ?Sized>(op: &O, w: &Word<O::Elem>) -> Measure {
    let steps = w.steps();
    let subs = steps.iter().filter(|s| matches!(s, Step::Sub { .. })).count();
    let mut seen = 0;
    let mut displacement = 0;
    for s in steps {
        match s {
            Step::Sub { .. } => seen += 1,
            Step::Ren(_) => displacement += seen,
        }
    }
    let mut inversions = 0;
    let mut i = 0;
    while i < steps.len() {
        if let Step::Sub { left, elem, right } = &steps[i] {
            let mut run = vec![(*left, op.arity(elem), *right)];
            let mut j = i + 1;
            while let Some(Step::Sub { left, elem, right }) = steps.get(j) {
                run.push((*left, op.arity(elem), *right));
                j += 1;
            }
            inversions += run_inversions(&run);
            i = j;
        } else {
            i += 1;
        }
    }
    (steps.len(), subs, displacement, inversions)
}

/// A position of the final arity (or a marker for an empty block) with the
/// steps whose block contains it.
struct Token {
    owners: Vec<usize>,
    marker: bool,
}

/// Pairs of steps in a run whose blocks end up in the reverse order.
fn run_inversions(run: &[(usize, usize, usize)]) -> usize {
    let (l0, _, r0) = run[0];
    let mut tokens: Vec<Token> = (0..l0 + 1 + r0)
        .map(|_| Token {
            owners: Vec::new(),
            marker: false,
        })
        .collect();
    for (idx, &(left, arity, _)) in run.iter().enumerate() {
        let at = tokens
            .iter()
            .enumerate()
            .filter(|(_, t)| !t.marker)
            .nth(left)
            .map(|(p, _)| p)
            .expect("run arities are consistent");
        let mut owners = tokens[at].owners.clone();
        owners.push(idx);
        let fresh: Vec<Token> = if arity == 0 {
            vec![Token { owners, marker: true }]
        } else {
            (0..arity)
                .map(|_| Token {
                    owners: owners.clone(),
                    marker: false,
                })
                .collect()
        };
        tokens.splice(at..=at, fresh);
    }
    let spans: Vec<(usize, usize)> = (0..run.len())
        .map(|idx| {
            let hits: Vec<usize> = (0..tokens.len()).filter(|&p| tokens[p].owners.contains(&idx)).collect();
            (hits[0], hits[hits.len() - 1])
        })
        .collect();
    let mut count = 0;
    for a in 0..run.len() {
        for b in a + 1..run.len() {
            if spans[b].1 < spans[a].0 {
                count += 1;
            }
        }
    }
    count
}

/// Rewrite to normal form.
pub fn rewrite_word<O: Operad + ?Sized>(op: &O, w: &Word<O::Elem>, mode: Mode) -> Result<Word<O::Elem>> {
    Ok(rewrite_trace(op, w, mode)?.0)
}

/// Rewrite to normal form, naming each rule as it fires.
pub fn rewrite_trace<O: Operad + ?Sized>(
    op: &O,
    w: &Word<O::Elem>,
    mode: Mode,
) -> Result<(Word<O::Elem>, Vec<&'static str>)> {
    let mut word = w.clone();
    let mut trace = Vec::new();
    let mut measure = word_measure(op, &word);
    'outer: loop {
        for rule in RULES {
            if rule.cartesian_only() && mode != Mode::Cartesian {
                continue;
            }
            for i in 0..word.steps.len() {
                if let Some((width, replacement)) = try_rule(op, rule, &word.steps[i..])? {
                    word.steps.splice(i..i + width, replacement);
                    let next = word_measure(op, &word);
                    assert!(next < measure, "{} did not lower the measure: {measure:?} -> {next:?}", rule.name());
                    measure = next;
                    trace.push(rule.name());
                    continue 'outer;
                }
            }
        }
        break;
    }
    debug_assert!(Word::from_steps(op, word.cod, word.steps.clone()).map(|c| c.dom) == Ok(word.dom));
    Ok((word, trace))
}

type Replacement<E> = Option<(usize, Vec<Step<E>>)>;

fn try_rule<O: Operad + ?Sized>(op: &O, rule: Rule, at: &[Step<O::Elem>]) -> Result<Replacement<O::Elem>> {
    use Step::{Ren, Sub};
    Ok(match (rule, at) {
        (Rule::UnitRenaming, [Ren(r), ..]) if r.is_identity() => Some((1, vec![])),
        (Rule::UnitSubstitution, [Sub { elem, .. }, ..]) if op.equals(elem, &op.ident()) == Verdict::Equal => {
            Some((1, vec![]))
        }
        (Rule::MergeRenamings, [Ren(a), Ren(b), ..]) => Some((2, vec![Ren(a.compose(b)?)])),
        (Rule::Discard, [Ren(r), Sub { left, elem, .. }, ..]) if !r.map().contains(&(left + 1)) => {
            let n = op.arity(elem);
            let map = r.map().iter().map(|&x| if x <= *left { x } else { x - 1 + n }).collect();
            Some((2, vec![Ren(Renaming::new(map, r.cod() - 1 + n)?)]))
        }
        (
            Rule::Associate,
            [Sub { left, elem, right }, Sub {
                left: q,
                elem: h,
                right: _,
            }, ..],
        ) if *left <= *q && *q < left + op.arity(elem) => {
            let inner = q - left;
            let merged = op.subst(elem, inner, h, op.arity(elem) - 1 - inner)?;
            Some((
                2,
                vec![Sub {
                    left: *left,
                    elem: merged,
                    right: *right,
                }],
            ))
        }
        (Rule::Contract, [Sub { left, elem, right }, Sub {
            left: l2,
            elem: g2,
            right: r2,
        }, Ren(r), ..]) => contract(op, (*left, elem, *right), (*l2, g2, *r2), r)?,
        (Rule::Naturality, [Sub { left, elem, right }, Ren(r), ..]) => naturality(op, *left, elem, *right, r)?,
        (Rule::Interchange, [Sub { left: p, elem: g, right: q }, Sub {
            left: s,
            elem: h,
            right: t,
        }, ..]) if s < p && *t == (p - s - 1) + op.arity(g) + q => {
            let gap = p - s - 1;
            Some((
                2,
                vec![
                    Sub {
                        left: *s,
                        elem: h.clone(),
                        right: gap + 1 + q,
                    },
                    Sub {
                        left: s + op.arity(h) + gap,
                        elem: g.clone(),
                        right: *q,
                    },
                ],
            ))
        }
        _ => None,
    })
}

/// The same element substituted into two adjacent holes whose blocks are
/// then identified is substituted once into a contracted hole.
fn contract<O: Operad + ?Sized>(
    op: &O,
    (m1, g, outer_right): (usize, &O::Elem, usize),
    (l2, g2, m2): (usize, &O::Elem, usize),
    r: &Renaming,
) -> Result<Replacement<O::Elem>> {
    let n = op.arity(g);
    if outer_right != m2 + 1 || l2 != m1 + n || op.arity(g2) != n {
        return Ok(None);
    }
    if !(1..=n).all(|i| r.at(m1 + i) == r.at(m1 + n + i)) {
        return Ok(None);
    }
    if op.equals(g, g2) != Verdict::Equal {
        return Ok(None);
    }
    let mut map = r.map()[..m1 + n].to_vec();
    map.extend_from_slice(&r.map()[m1 + 2 * n..]);
    Ok(Some((
        3,
        vec![
            Step::Ren(Renaming::copy(1).pad(m1, m2)),
            Step::Sub {
                left: m1,
                elem: g.clone(),
                right: m2,
            },
            Step::Ren(Renaming::new(map, r.cod())?),
        ],
    )))
}

/// Moves a renaming before a substitution when it keeps the substituted
/// block contiguous and unshared.
fn naturality<O: Operad + ?Sized>(
    op: &O,
    left: usize,
    g: &O::Elem,
    right: usize,
    r: &Renaming,
) -> Result<Replacement<O::Elem>> {
    let n = op.arity(g);
    let k = r.cod();
    let outer: Vec<usize> = (1..=left).chain(left + n + 1..=left + n + right).collect();
    let (p, width, inner) = if n == 0 {
        let p = (1..=left).map(|i| r.at(i)).max().unwrap_or(0);
        (p, 0, Renaming::identity(0))
    } else {
        let block: Vec<usize> = (left + 1..=left + n).map(|i| r.at(i)).collect();
        let lo = *block.iter().min().expect("nonempty block");
        let hi = *block.iter().max().expect("nonempty block");
        if outer.iter().any(|&i| (lo..=hi).contains(&r.at(i))) {
            return Ok(None);
        }
        let width = hi - lo + 1;
        (lo - 1, width, Renaming::new(block.iter().map(|&b| b - (lo - 1)).collect(), width)?)
    };
    let adjust = |x: usize| {
        if x <= p {
            x
        } else if n == 0 {
            x + 1
        } else {
            x - width + 1
        }
    };
    let mut map: Vec<usize> = (1..=left).map(|i| adjust(r.at(i))).collect();
    map.push(p + 1);
    map.extend((left + n + 1..=left + n + right).map(|i| adjust(r.at(i))));
    let outer_ren = Renaming::new(map, k + 1 - width)?;
    let elem = if n == 0 { g.clone() } else { op.rename(g, &inner)? };
    Ok(Some((
        2,
        vec![
            Step::Ren(outer_ren),
            Step::Sub {
                left: p,
                elem,
                right: k - p - width,
            },
        ],
    )))
}

type WordPair<E> = (Word<E>, Word<E>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordVerdict {
    Proved,
    Refuted(String),
    Unknown,
}

fn steps_equal<O: Operad + ?Sized>(op: &O, a: &Word<O::Elem>, b: &Word<O::Elem>) -> bool {
    a.steps.len() == b.steps.len()
        && a.steps.iter().zip(&b.steps).all(|pair| match pair {
            (Step::Ren(r), Step::Ren(s)) => r == s,
            (
                Step::Sub { left, elem, right },
                Step::Sub {
                    left: l2,
                    elem: e2,
                    right: r2,
                },
            ) => left == l2 && right == r2 && op.equals(elem, e2) == Verdict::Equal,
            _ => false,
        })
}

/// Decide equality of two parallel words where possible.
///
/// Equal normal forms prove equality. Words into 1 are compared through
/// [`from_word`]; in cartesian mode every word is compared through its
/// projections. Otherwise the words act on a pool of elements and any
/// separating element refutes equality.
pub fn word_eq<O: Operad + ?Sized>(op: &O, a: &Word<O::Elem>, b: &Word<O::Elem>, mode: Mode) -> Result<WordVerdict> {
    check_arity("word domains", a.dom, b.dom)?;
    check_arity("word codomains", a.cod, b.cod)?;
    let (na, nb) = (rewrite_word(op, a, mode)?, rewrite_word(op, b, mode)?);
    if steps_equal(op, &na, &nb) {
        return Ok(WordVerdict::Proved);
    }
    let via_elements = |pairs: Vec<WordPair<O::Elem>>| -> Result<WordVerdict> {
        let mut unknown = false;
        for (x, y) in pairs {
            let (ex, ey) = (from_word(op, &x)?, from_word(op, &y)?);
            match op.equals(&ex, &ey) {
                Verdict::Equal => {}
                Verdict::Distinct => {
                    return Ok(WordVerdict::Refuted(format!("{} vs {}", op.render(&ex), op.render(&ey))));
                }
                Verdict::Unknown => unknown = true,
            }
        }
        Ok(if unknown { WordVerdict::Unknown } else { WordVerdict::Proved })
    };
    if na.cod == 1 {
        return via_elements(vec![(na, nb)]);
    }
    if mode == Mode::Cartesian {
        let pairs = (1..=na.cod)
            .map(|i| {
                let proj = Word::ren(Renaming::new(vec![i], na.cod).expect("projection"));
                Ok((na.compose(&proj)?, nb.compose(&proj)?))
            })
            .collect::<Result<Vec<_>>>()?;
        return via_elements(pairs);
    }
    let pool = match op.enumerate(na.cod) {
        Some(all) if all.len() <= 512 => all,
        _ => {
            let mut rng = SampleRng::seed_from_u64(0x5eed);
            (0..64).filter_map(|_| op.sample(na.cod, &mut rng)).collect()
        }
    };
    for f in pool {
        let (x, y) = (apply_word(op, &f, &na)?, apply_word(op, &f, &nb)?);
        if op.equals(&x, &y) == Verdict::Distinct {
            return Ok(WordVerdict::Refuted(format!(
                "acting on {}: {} vs {}",
                op.render(&f),
                op.render(&x),
                op.render(&y)
            )));
        }
    }
    Ok(WordVerdict::Unknown)
}
