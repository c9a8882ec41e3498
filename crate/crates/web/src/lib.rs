//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes source text and returns a plain-text report, or an
//! error message the page shows as is. The functions are ordinary Rust
//! too, so the tests run natively.

use std::fmt::Write as _;

use lambdac::models::{build_kleisli_model, table_rows, KleisliValues, ModelConfig};
use lambdac::operad::{FreydOperad, Operad};
use lambdac::semantics::Denotation;
use lambdac::subst_prop::{parse_word, print_word, rewrite_trace, word_header, Mode};
use lambdac::syntax::{parse_term_file, print_term, Definition, Signature};
use lambdac::term_model::TermModel;
use lambdac::theory::normalize;
use wasm_bindgen::prelude::*;

fn definitions(source: &str) -> Result<(Signature, Vec<Definition>), String> {
    parse_term_file(source, &Signature::new()).map_err(|e| e.to_string())
}

fn model_config(spec: &str) -> Result<ModelConfig, String> {
    let spec = spec.trim();
    if spec.starts_with('{') {
        return ModelConfig::from_json(spec).map_err(|e| e.to_string());
    }
    ModelConfig::builtin_id(spec).ok_or_else(|| format!("unknown model `{spec}`"))
}

/// Normal form of every definition, one `def` line each.
#[wasm_bindgen]
pub fn normalize_terms(source: &str, beta: bool, fuel: usize) -> Result<String, String> {
    let (_, defs) = definitions(source)?;
    let mut out = String::new();
    for d in &defs {
        let n = normalize(&d.term, d.arity(), fuel, beta);
        let ctx = if d.context.is_empty() {
            String::new()
        } else {
            format!(" ctx({})", d.context.join(" "))
        };
        let note = if n.exhausted {
            format!("fuel exhausted after {} steps", n.steps)
        } else {
            format!("{} step{}", n.steps, if n.steps == 1 { "" } else { "s" })
        };
        let _ = writeln!(out, "def {}{ctx} = {}  # {note}", d.name, print_term(&n.term, d.arity(), &d.context));
    }
    Ok(out)
}

/// The denotation of `name` in a built-in model (`maybe2`, …), a JSON
/// model, or `term`.
#[wasm_bindgen]
pub fn interpret(source: &str, name: &str, model: &str) -> Result<String, String> {
    let (sig, defs) = definitions(source)?;
    let d = defs
        .iter()
        .find(|d| d.name == name)
        .ok_or_else(|| format!("no definition named `{name}`"))?;
    if model.trim() == "term" {
        let s = TermModel::new(sig).canonical_structure();
        let den = s.interpret(&d.term, d.arity()).map_err(|e| e.to_string())?;
        return Ok(format!("{name} = {}\n", s.render(&den)));
    }
    let s = build_kleisli_model(&model_config(model)?).map_err(|e| e.to_string())?;
    let den = s.interpret(&d.term, d.arity()).map_err(|e| e.to_string())?;
    let effect = s.freyd.effect();
    let rows = match &den {
        Denotation::Value(t) => table_rows(t, &effect.atoms, |e| effect.render_atom(e)),
        Denotation::Computation(t) => table_rows(t, &effect.atoms, |e| effect.render(e)),
    };
    let mut out = format!("{name} = {}\n", s.render(&den));
    for row in rows {
        let _ = writeln!(out, "  {row}");
    }
    Ok(out)
}

fn rewrite_in<O: Operad>(op: &O, source: &str, mode: Mode) -> Result<String, String> {
    let (header, w) = parse_word(op, source).map_err(|e| e.to_string())?;
    let (nf, rules) = rewrite_trace(op, &w, mode).map_err(|e| e.to_string())?;
    let mut out = print_word(op, &nf, &header.over);
    if !rules.is_empty() {
        let _ = writeln!(out, "# {}", rules.join(", "));
    }
    Ok(out)
}

/// Normal form of a word file over `valuesN` or a built-in model.
#[wasm_bindgen]
pub fn rewrite_word(source: &str) -> Result<String, String> {
    let header = word_header(source).map_err(|e| e.to_string())?;
    if let Some(k) = header.over.strip_prefix("values") {
        let k: usize = if k.is_empty() { 2 } else { k.parse().map_err(|_| format!("bad operad `{}`", header.over))? };
        if !(1..=6).contains(&k) {
            return Err("values need between 1 and 6 atoms".into());
        }
        return rewrite_in(&KleisliValues::new(k), source, Mode::Cartesian);
    }
    let s = build_kleisli_model(&model_config(&header.over)?).map_err(|e| e.to_string())?;
    rewrite_in(s.freyd.comps(), source, Mode::Symmetric)
}
