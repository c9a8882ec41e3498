//! Preoperads, Freyd operads and weak closure as traits, plus executable law suites.

mod laws;

use std::fmt;

use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{check_arity, Error, Result};
use crate::renaming::Renaming;

pub use laws::{
    check_cartesian_operad, check_centrality, check_freyd, check_preoperad, check_ret_functor, check_s_cartesian,
    check_symmetric, check_weak_closure, LawReport, Regime, RenClass, Witness,
};

pub type SampleRng = ChaCha8Rng;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Verdict {
    Equal,
    Distinct,
    Unknown,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Verdict {
        if b {
            Verdict::Equal
        } else {
            Verdict::Distinct
        }
    }
}

/// An arity-indexed family with identity, single-position substitution
/// `f{n1 ⊣ g ⊢ n2}` and a renaming action.
pub trait Operad {
    type Elem: Clone + fmt::Debug;

    fn name(&self) -> String;
    fn arity(&self, f: &Self::Elem) -> usize;
    fn ident(&self) -> Self::Elem;
    /// `f` has arity `n1 + 1 + n2`; the result has arity `n1 + arity(g) + n2`.
    fn subst(&self, f: &Self::Elem, n1: usize, g: &Self::Elem, n2: usize) -> Result<Self::Elem>;
    /// `f` has arity `r.dom()`; the result has arity `r.cod()`.
    fn rename(&self, f: &Self::Elem, r: &Renaming) -> Result<Self::Elem>;
    fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict;

    fn enumerate(&self, _n: usize) -> Option<Vec<Self::Elem>> {
        None
    }

    fn sample(&self, _n: usize, _rng: &mut SampleRng) -> Option<Self::Elem> {
        None
    }

    fn render(&self, f: &Self::Elem) -> String {
        format!("{f:?}")
    }

    /// Inverse of [`Operad::render`], where a literal syntax exists.
    fn parse(&self, text: &str) -> Result<Self::Elem> {
        Err(Error::Other(format!("no literal syntax for {} (`{text}`)", self.name())))
    }
}

/// Parallel composite `f{g1 + … + gk}` by left-to-right single substitution.
pub fn par_subst<O: Operad + ?Sized>(op: &O, f: &O::Elem, gs: &[O::Elem]) -> Result<O::Elem> {
    check_arity("parallel substitution", op.arity(f), gs.len())?;
    let mut acc = f.clone();
    let mut left = 0;
    for (i, g) in gs.iter().enumerate() {
        acc = op.subst(&acc, left, g, gs.len() - i - 1)?;
        left += op.arity(g);
    }
    Ok(acc)
}

pub type Val<F> = <<F as FreydOperad>::Values as Operad>::Elem;
pub type Comp<F> = <<F as FreydOperad>::Comps as Operad>::Elem;

/// Values (cartesian), computations (symmetric and Ren-cartesian) and a
/// return functor. Weak closure is optional structure.
pub trait FreydOperad {
    type Values: Operad;
    type Comps: Operad;

    fn values(&self) -> &Self::Values;
    fn comps(&self) -> &Self::Comps;
    fn ret(&self, v: &Val<Self>) -> Comp<Self>;

    /// Abstraction `C(n+1) -> V(n)`, when the structure is weakly closed.
    fn abs(&self, _n: usize, _m: &Comp<Self>) -> Option<Result<Val<Self>>> {
        None
    }

    /// Application in `C(2)`, when the structure is weakly closed.
    fn app(&self) -> Option<Comp<Self>> {
        None
    }
}

/// The image of `ret` as an operad on computations.
pub struct RetImage<'a, F: FreydOperad>(pub &'a F);

impl<F: FreydOperad> Operad for RetImage<'_, F> {
    type Elem = Comp<F>;

    fn name(&self) -> String {
        format!("ret-image({})", self.0.comps().name())
    }
    fn arity(&self, f: &Self::Elem) -> usize {
        self.0.comps().arity(f)
    }
    fn ident(&self) -> Self::Elem {
        self.0.ret(&self.0.values().ident())
    }
    fn subst(&self, f: &Self::Elem, n1: usize, g: &Self::Elem, n2: usize) -> Result<Self::Elem> {
        self.0.comps().subst(f, n1, g, n2)
    }
    fn rename(&self, f: &Self::Elem, r: &Renaming) -> Result<Self::Elem> {
        self.0.comps().rename(f, r)
    }
    fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict {
        self.0.comps().equals(a, b)
    }
    fn enumerate(&self, n: usize) -> Option<Vec<Self::Elem>> {
        let vs = self.0.values().enumerate(n)?;
        Some(vs.iter().map(|v| self.0.ret(v)).collect())
    }
    fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<Self::Elem> {
        self.0.values().sample(n, rng).map(|v| self.0.ret(&v))
    }
    fn render(&self, f: &Self::Elem) -> String {
        self.0.comps().render(f)
    }
    fn parse(&self, text: &str) -> Result<Self::Elem> {
        self.0.comps().parse(text)
    }
}

/// The values or computations of a Freyd operad, selected by a flag; lets
/// generic code treat either side as a plain [`Operad`].
pub struct ValuesOf<'a, F: FreydOperad>(pub &'a F);
pub struct CompsOf<'a, F: FreydOperad>(pub &'a F);

macro_rules! forward_operad {
    ($wrapper:ident, $side:ident, $assoc:ident) => {
        impl<F: FreydOperad> Operad for $wrapper<'_, F> {
            type Elem = <F::$assoc as Operad>::Elem;
            fn name(&self) -> String {
                self.0.$side().name()
            }
            fn arity(&self, f: &Self::Elem) -> usize {
                self.0.$side().arity(f)
            }
            fn ident(&self) -> Self::Elem {
                self.0.$side().ident()
            }
            fn subst(&self, f: &Self::Elem, n1: usize, g: &Self::Elem, n2: usize) -> Result<Self::Elem> {
                self.0.$side().subst(f, n1, g, n2)
            }
            fn rename(&self, f: &Self::Elem, r: &Renaming) -> Result<Self::Elem> {
                self.0.$side().rename(f, r)
            }
            fn equals(&self, a: &Self::Elem, b: &Self::Elem) -> Verdict {
                self.0.$side().equals(a, b)
            }
            fn enumerate(&self, n: usize) -> Option<Vec<Self::Elem>> {
                self.0.$side().enumerate(n)
            }
            fn sample(&self, n: usize, rng: &mut SampleRng) -> Option<Self::Elem> {
                self.0.$side().sample(n, rng)
            }
            fn render(&self, f: &Self::Elem) -> String {
                self.0.$side().render(f)
            }
            fn parse(&self, text: &str) -> Result<Self::Elem> {
                self.0.$side().parse(text)
            }
        }
    };
}

forward_operad!(ValuesOf, values, Values);
forward_operad!(CompsOf, comps, Comps);
