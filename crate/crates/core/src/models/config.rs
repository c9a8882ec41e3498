//! JSON model files and the built-in models.
//!
//! ```json
//! {
//!   "atoms": ["0", "1"],
//!   "effect": { "kind": "writer", "generators": ["a", "b"], "max_len": 2 },
//!   "funcs": { "f": { "arity": 2, "table": ["0", "1", "1", "0"] } },
//!   "procs": { "p": { "arity": 1, "table": ["(a,0)", "(b,1)"] } }
//! }
//! ```
//!
//! Table rows follow the base-`|A|` code of the arguments, first argument
//! most significant.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::effect::{FiniteEffect, MonadCheck, Monoid};
use super::kleisli::{KleisliModel, Table};
use crate::error::{Error, Result};
use crate::operad::{FreydOperad, Operad, SampleRng, Verdict};
use crate::semantics::Structure;
use crate::syntax::{Signature, Term};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EffectConfig {
    Maybe,
    Powerset,
    Writer {
        #[serde(default)]
        generators: Vec<String>,
        #[serde(default)]
        max_len: Option<usize>,
        #[serde(default)]
        monoid: Option<MonoidConfig>,
    },
    Tabulated {
        #[serde(default = "tabulated_name")]
        name: String,
        elements: Vec<String>,
        unit: Vec<String>,
        /// `bind(m, f)` for every `m` and every `f: A -> M(A)` in code order.
        bind: Vec<String>,
    },
}

fn tabulated_name() -> String {
    "tabulated".into()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonoidConfig {
    pub elements: Vec<String>,
    pub unit: String,
    /// `table[a][b] = a · b`.
    pub table: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolTable {
    pub arity: usize,
    pub table: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub atoms: Vec<String>,
    pub effect: EffectConfig,
    #[serde(default)]
    pub funcs: BTreeMap<String, SymbolTable>,
    #[serde(default)]
    pub procs: BTreeMap<String, SymbolTable>,
}

impl ModelConfig {
    pub fn from_json(text: &str) -> Result<ModelConfig> {
        serde_json::from_str(text).map_err(|e| Error::Model(format!("model file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model config serializes")
    }

    /// `maybe`, `writer` or `powerset` over `k` atoms, with no symbols.
    pub fn builtin(kind: &str, k: usize) -> Option<ModelConfig> {
        let effect = match kind {
            "maybe" => EffectConfig::Maybe,
            "powerset" => EffectConfig::Powerset,
            "writer" => EffectConfig::Writer {
                generators: vec!["a".into(), "b".into()],
                max_len: Some(2),
                monoid: None,
            },
            _ => return None,
        };
        Some(ModelConfig {
            atoms: FiniteEffect::default_atoms(k),
            effect,
            funcs: BTreeMap::new(),
            procs: BTreeMap::new(),
        })
    }

    /// Parses ids such as `maybe2` or `writer3` (the digit is `|A|`, default 2).
    pub fn builtin_id(id: &str) -> Option<ModelConfig> {
        let split = id.find(|c: char| c.is_ascii_digit()).unwrap_or(id.len());
        let (kind, digits) = id.split_at(split);
        let k = if digits.is_empty() { 2 } else { digits.parse().ok()? };
        (1..=6).contains(&k).then(|| Self::builtin(kind, k)).flatten()
    }
}

/// Builds the effect and verifies the monad laws.
pub fn load_effect(config: &EffectConfig, atoms: &[String]) -> Result<(FiniteEffect, MonadCheck)> {
    let k = atoms.len();
    if k == 0 {
        return Err(Error::Model("the carrier needs at least one atom".into()));
    }
    let effect = match config {
        EffectConfig::Maybe => FiniteEffect::maybe(k),
        EffectConfig::Powerset => FiniteEffect::powerset(k),
        EffectConfig::Writer {
            generators,
            max_len,
            monoid,
        } => match (monoid, max_len) {
            (Some(m), None) => FiniteEffect::writer(k, monoid_from(m)?),
            (None, Some(len)) if !generators.is_empty() => {
                let gens: Vec<&str> = generators.iter().map(String::as_str).collect();
                FiniteEffect::writer(k, Monoid::free_truncated(&gens, *len))
            }
            _ => {
                return Err(Error::Model(
                    "writer needs either `monoid` or both `generators` and `max_len`".into(),
                ))
            }
        },
        EffectConfig::Tabulated {
            name,
            elements,
            unit,
            bind,
        } => {
            let index = |s: &String| {
                elements
                    .iter()
                    .position(|e| e == s)
                    .ok_or_else(|| Error::Model(format!("`{s}` is not a listed element")))
            };
            let unit = unit.iter().map(index).collect::<Result<Vec<_>>>()?;
            let bind = bind.iter().map(index).collect::<Result<Vec<_>>>()?;
            FiniteEffect::tabulated(name, atoms.to_vec(), elements.clone(), unit, bind)?
        }
    };
    let effect = effect.with_atoms(atoms.to_vec())?;
    let check = effect.check_monad_laws()?;
    Ok((effect, check))
}

fn monoid_from(m: &MonoidConfig) -> Result<Monoid> {
    let index = |s: &String| {
        m.elements
            .iter()
            .position(|e| e == s)
            .ok_or_else(|| Error::Model(format!("`{s}` is not a monoid element")))
    };
    let unit = index(&m.unit)?;
    let mut table = Vec::new();
    for row in &m.table {
        for cell in row {
            table.push(index(cell)?);
        }
    }
    Monoid::new(m.elements.clone(), unit, table)
}

/// The first-order structure described by a config.
pub fn build_kleisli_model(config: &ModelConfig) -> Result<Structure<KleisliModel>> {
    let (effect, _) = load_effect(&config.effect, &config.atoms)?;
    let model = KleisliModel::new(effect);
    let mut funcs = BTreeMap::new();
    for (name, t) in &config.funcs {
        let rows: Vec<&str> = t.table.iter().map(String::as_str).collect();
        funcs.insert(name.clone(), model.value_table(t.arity, &rows)?);
    }
    let mut procs = BTreeMap::new();
    for (name, t) in &config.procs {
        let rows: Vec<&str> = t.table.iter().map(String::as_str).collect();
        procs.insert(name.clone(), model.comp_table(t.arity, &rows)?);
    }
    let mut s = Structure::new(model);
    s.funcs = funcs;
    s.procs = procs;
    Ok(s)
}

/// A separating assignment found by [`find_countermodel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub funcs: BTreeMap<String, Table>,
    pub procs: BTreeMap<String, Table>,
    pub left: String,
    pub right: String,
}

/// Looks for symbol assignments under which `t1` and `t2` (arity `n`)
/// denote different elements. Symbols already assigned in `base` keep
/// their tables; the others range over seeded random tables.
pub fn find_countermodel(
    base: &Structure<KleisliModel>,
    sig: &Signature,
    t1: &Term,
    t2: &Term,
    n: usize,
    tries: usize,
    seed: u64,
) -> Result<Option<Countermodel>> {
    let model = &base.freyd;
    let mut rng = SampleRng::seed_from_u64(seed);
    let free = sig.funcs.keys().any(|f| !base.funcs.contains_key(f)) || sig.procs.keys().any(|p| !base.procs.contains_key(p));
    let rounds = if free { tries.max(1) } else { 1 };
    for _ in 0..rounds {
        let mut s = Structure::new(model.clone());
        s.funcs = base.funcs.clone();
        s.procs = base.procs.clone();
        for (f, &a) in &sig.funcs {
            if !s.funcs.contains_key(f) {
                let t = model.values.sample(a, &mut rng).expect("tables sample");
                s.funcs.insert(f.clone(), t);
            }
        }
        for (p, &a) in &sig.procs {
            if !s.procs.contains_key(p) {
                // Mostly effectful tables, with the occasional pure one.
                let t = if rng.gen_bool(0.2) {
                    model.ret(&model.values.sample(a, &mut rng).expect("tables sample"))
                } else {
                    model.comps.sample(a, &mut rng).expect("tables sample")
                };
                s.procs.insert(p.clone(), t);
            }
        }
        if s.satisfies(t1, t2, n)? == Verdict::Distinct {
            let (l, r) = (s.interpret(t1, n)?, s.interpret(t2, n)?);
            return Ok(Some(Countermodel {
                left: s.render(&l),
                right: s.render(&r),
                funcs: s.funcs,
                procs: s.procs,
            }));
        }
    }
    Ok(None)
}
