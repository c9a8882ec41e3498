use std::fmt::Write as _;
use std::path::Path;
use std::rc::Rc;

use lambdac::adjunction::{check_adjunction, identity_functor, AdjunctionInputs, FreeProp};
use lambdac::models::{build_kleisli_model, find_countermodel, load_effect, table_rows, KleisliModel, Table};
use lambdac::operad::{check_freyd, check_weak_closure, FreydOperad, LawReport, Operad, Regime};
use lambdac::semantics::Denotation;
use lambdac::subst_prop::{from_word, parse_word, print_word, rewrite_trace, to_word, word_eq, word_header, Mode, WordVerdict};
use lambdac::syntax::{print_term, well_formed, Definition, Signature};
use lambdac::term_model::{TermModel, TermSettings, DEFAULT_MAX_SIZE};
use lambdac::theory::{eq_check, normalize, EqVerdict};
use lambdac::Error;
use serde_json::json;

use crate::input::{self, CliError, CliResult, WordOperad};
use crate::output::{Output, Status};
use crate::{LawTarget, ModeArg, TermInput, WordCommand};

fn sort_name(d: &Definition) -> &'static str {
    match d.term {
        lambdac::syntax::Term::Value(_) => "value",
        lambdac::syntax::Term::Computation(_) => "computation",
    }
}

/// Parse problems in the checked file are verdicts, not usage errors.
pub fn check(out: &Output, input: &TermInput) -> CliResult<Status> {
    match input::terms(input) {
        Ok((sig, defs)) => {
            let mut status = Status::Success;
            for d in &defs {
                let ok = well_formed(&d.term, d.arity(), &sig);
                if !ok {
                    status = Status::Failed;
                }
                out.emit(
                    format!("{} {}/{} {}", if ok { "ok" } else { "ill-formed" }, d.name, d.arity(), sort_name(d)),
                    json!({ "kind": "check", "def": d.name, "arity": d.arity(), "sort": sort_name(d), "well_formed": ok }),
                );
            }
            out.emit(
                format!("{} definitions checked", defs.len()),
                json!({ "kind": "summary", "definitions": defs.len(), "well_formed": status == Status::Success }),
            );
            Ok(status)
        }
        Err(CliError::Input {
            path,
            source: Error::Parse { line, col, msg },
        }) => {
            out.emit(
                format!("ill-formed {path}:{line}:{col}: {msg}"),
                json!({ "kind": "check", "file": path, "line": line, "col": col, "error": msg, "well_formed": false }),
            );
            Ok(Status::Failed)
        }
        Err(e) => Err(e),
    }
}

fn selected<'a>(defs: &'a [Definition], names: &[String]) -> CliResult<Vec<&'a Definition>> {
    if names.is_empty() {
        return Ok(defs.iter().collect());
    }
    names.iter().map(|n| input::find(defs, n)).collect()
}

fn ctx_text(d: &Definition) -> String {
    if d.context.is_empty() {
        String::new()
    } else {
        format!(" ctx({})", d.context.join(" "))
    }
}

pub fn norm(out: &Output, input: &TermInput, names: &[String], fuel: usize, beta: bool) -> CliResult<Status> {
    let (_, defs) = input::terms(input)?;
    let mut status = Status::Success;
    for d in selected(&defs, names)? {
        let n = normalize(&d.term, d.arity(), fuel, beta);
        let printed = print_term(&n.term, d.arity(), &d.context);
        let note = if n.exhausted {
            status = status.and(Status::Unknown);
            format!("# fuel exhausted after {} steps", n.steps)
        } else {
            format!("# {} step{}", n.steps, if n.steps == 1 { "" } else { "s" })
        };
        out.emit(
            format!("def {}{} = {printed}  {note}", d.name, ctx_text(d)),
            json!({ "kind": "norm", "def": d.name, "term": printed, "steps": n.steps, "exhausted": n.exhausted }),
        );
    }
    Ok(status)
}

fn describe_tables(model: &KleisliModel, cm_funcs: &[(String, Table)], cm_procs: &[(String, Table)]) -> Vec<String> {
    let atoms = model.effect().atoms.clone();
    let mut lines = Vec::new();
    for (name, t) in cm_funcs {
        let rows = table_rows(t, &atoms, |e| model.effect().render_atom(e));
        lines.push(format!("{name}: {}", rows.join(", ")));
    }
    for (name, t) in cm_procs {
        let rows = table_rows(t, &atoms, |e| model.effect().render(e));
        lines.push(format!("{name}: {}", rows.join(", ")));
    }
    lines
}

#[allow(clippy::too_many_arguments)]
pub fn eq(
    out: &Output,
    input: &TermInput,
    left: &str,
    right: &str,
    fuel: usize,
    models: &[String],
    tries: usize,
    seed: u64,
) -> CliResult<Status> {
    let (sig, defs) = input::terms(input)?;
    let (l, r) = (input::find(&defs, left)?, input::find(&defs, right)?);
    if l.arity() != r.arity() {
        return Err(CliError::Usage(format!(
            "`{left}` has {} variables but `{right}` has {}",
            l.arity(),
            r.arity()
        )));
    }
    let n = l.arity();
    let verdict = eq_check(&l.term, &r.term, n, fuel)?;
    let exhausted = match verdict {
        EqVerdict::Proved => {
            out.emit("proved", json!({ "kind": "eq", "verdict": "proved" }));
            return Ok(Status::Success);
        }
        EqVerdict::Unknown { fuel_exhausted } => fuel_exhausted,
    };
    let first_order = l.term.is_first_order() && r.term.is_first_order();
    if first_order {
        for spec in models {
            let base = build_kleisli_model(&input::model_config(spec)?)?;
            let Some(cm) = find_countermodel(&base, &sig, &l.term, &r.term, n, tries, seed)? else {
                continue;
            };
            let funcs: Vec<_> = cm.funcs.into_iter().filter(|(f, _)| sig.funcs.contains_key(f)).collect();
            let procs: Vec<_> = cm.procs.into_iter().filter(|(p, _)| sig.procs.contains_key(p)).collect();
            let assignment = describe_tables(&base.freyd, &funcs, &procs);
            let mut text = format!("refuted by {spec}\n  {left} = {}\n  {right} = {}", cm.left, cm.right);
            for line in &assignment {
                let _ = write!(text, "\n  {line}");
            }
            out.emit(
                text,
                json!({
                    "kind": "eq", "verdict": "refuted", "model": spec,
                    "left": cm.left, "right": cm.right, "assignment": assignment,
                }),
            );
            return Ok(Status::Failed);
        }
    }
    let reason = match (exhausted, first_order) {
        (true, _) => "fuel exhausted",
        (false, true) => "no proof and no countermodel found",
        (false, false) => "no proof; higher-order terms are not searched for countermodels",
    };
    out.emit(format!("unknown: {reason}"), json!({ "kind": "eq", "verdict": "unknown", "reason": reason }));
    Ok(Status::Unknown)
}

pub fn interp(out: &Output, input: &TermInput, name: &str, model: &str, args: &[String]) -> CliResult<Status> {
    let (sig, defs) = input::terms(input)?;
    let d = input::find(&defs, name)?;
    if model == "term" {
        let structure = TermModel::new(sig).canonical_structure();
        let den = structure.interpret(&d.term, d.arity())?;
        let rendered = structure.render(&den);
        out.emit(
            format!("{name} = {rendered}"),
            json!({ "kind": "interp", "def": name, "model": "term", "denotation": rendered }),
        );
        return Ok(Status::Success);
    }
    let structure = build_kleisli_model(&input::model_config(model)?)?;
    let den = structure.interpret(&d.term, d.arity())?;
    let effect = structure.freyd.effect();
    let (table, render): (&Table, Box<dyn Fn(usize) -> String>) = match &den {
        Denotation::Value(t) => (t, Box::new(|e| effect.render_atom(e))),
        Denotation::Computation(t) => (t, Box::new(|e| effect.render(e))),
    };
    let rows = if args.is_empty() {
        table_rows(table, &effect.atoms, render)
    } else {
        if args.len() != d.arity() {
            return Err(CliError::Usage(format!("`{name}` takes {} arguments, got {}", d.arity(), args.len())));
        }
        let codes = args.iter().map(|a| effect.parse_atom(a)).collect::<Result<Vec<_>, _>>()?;
        vec![format!("{} -> {}", args.join(" "), render(table.at(effect.atoms.len(), &codes)))]
    };
    let literal = structure.render(&den);
    let mut text = format!("{name} = {literal}");
    for row in &rows {
        let _ = write!(text, "\n  {row}");
    }
    out.emit(
        text,
        json!({ "kind": "interp", "def": name, "model": model, "denotation": literal, "rows": rows }),
    );
    Ok(Status::Success)
}

fn report(out: &Output, r: &LawReport) -> Status {
    out.emit(r.to_text().trim_end(), serde_json::to_value(r).unwrap_or_default());
    if r.failed > 0 {
        Status::Failed
    } else if r.unknowns > 0 {
        Status::Unknown
    } else {
        Status::Success
    }
}

/// Enumerate when the carriers are small, otherwise sample.
fn kleisli_regime(out: &Output, model: &KleisliModel, cap: usize, samples: Option<usize>, seed: u64) -> Regime {
    if let Some(samples) = samples {
        return Regime::Sampled { arity_cap: cap, samples, seed };
    }
    let small = model.comps().enumerate(cap).is_some_and(|c| c.len() <= 100);
    if small {
        Regime::Exhaustive { arity_cap: cap }
    } else {
        if !out.is_json() {
            eprintln!("note: carriers too large to enumerate; sampling 200 instances per law");
        }
        Regime::Sampled { arity_cap: cap, samples: 200, seed }
    }
}

fn term_model(sig: Option<&Path>, fuel: usize) -> CliResult<TermModel> {
    let sig = match sig {
        Some(p) => input::signature(Some(p))?,
        None => Signature::new().with_func("c", 0).with_func("f", 2).with_proc("p", 1),
    };
    Ok(TermModel::with_settings(TermSettings {
        sig,
        fuel,
        max_size: DEFAULT_MAX_SIZE,
        higher_order: true,
    }))
}

#[allow(clippy::too_many_arguments)]
pub fn laws(
    out: &Output,
    target: LawTarget,
    model: &str,
    sig: Option<&Path>,
    cap: usize,
    samples: Option<usize>,
    seed: u64,
    fuel: usize,
) -> CliResult<Status> {
    let term_regime = Regime::Sampled {
        arity_cap: cap,
        samples: samples.unwrap_or(100),
        seed,
    };
    match target {
        LawTarget::TermModel => {
            let tm = term_model(sig, fuel)?;
            let freyd = report(out, &check_freyd(&tm, term_regime));
            Ok(freyd.and(report(out, &check_weak_closure(&tm, term_regime))))
        }
        LawTarget::Adjunction if model == "term" => {
            let tm = Rc::new(term_model(sig, fuel)?);
            let target = FreeProp::new((*tm).clone());
            let inputs = AdjunctionInputs::sampled(&*tm, samples.unwrap_or(100), cap, seed);
            Ok(report(out, &check_adjunction(&tm, &target, &identity_functor::<TermModel>(), &inputs)))
        }
        LawTarget::Model | LawTarget::Adjunction => {
            let config = input::model_config(model)?;
            let effect = match load_effect(&config.effect, &config.atoms) {
                Ok((effect, check)) => {
                    let mut r = LawReport::new(format!("monad laws of {model}"));
                    r.instances = check.instances;
                    report(out, &r);
                    effect
                }
                Err(Error::LawViolation { structure, law, witness }) => {
                    let mut r = LawReport::new(format!("monad laws of {model}"));
                    r.fail(law, format!("{structure}: {witness}"));
                    return Ok(report(out, &r));
                }
                Err(e) => return Err(e.into()),
            };
            let kleisli = KleisliModel::new(effect);
            if target == LawTarget::Model {
                let regime = kleisli_regime(out, &kleisli, cap, samples, seed);
                return Ok(report(out, &check_freyd(&kleisli, regime)));
            }
            let kleisli = Rc::new(kleisli);
            let inputs = match samples {
                Some(count) => AdjunctionInputs::sampled(&*kleisli, count, cap, seed),
                None => AdjunctionInputs::exhaustive(&*kleisli, cap)
                    .ok_or_else(|| CliError::Usage("carriers do not enumerate; pass --samples".into()))?,
            };
            let target = FreeProp::new((*kleisli).clone());
            Ok(report(out, &check_adjunction(&kleisli, &target, &identity_functor::<KleisliModel>(), &inputs)))
        }
    }
}

fn mode_for(arg: Option<ModeArg>, cartesian_ok: bool) -> CliResult<Mode> {
    match arg {
        None if cartesian_ok => Ok(Mode::Cartesian),
        None | Some(ModeArg::Symmetric) => Ok(Mode::Symmetric),
        Some(ModeArg::Cartesian) if cartesian_ok => Ok(Mode::Cartesian),
        Some(ModeArg::Cartesian) => Err(CliError::Usage(
            "computations do not form a cartesian operad; use --mode symmetric".into(),
        )),
    }
}

fn word_input(path: &Path) -> CliResult<(String, WordOperad)> {
    let text = input::read_file(path)?;
    let header = word_header(&text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })?;
    let op = input::word_operad(&header.over)?;
    Ok((text, op))
}

fn parse_in<O: Operad>(op: &O, text: &str, path: &Path) -> CliResult<(String, lambdac::subst_prop::Word<O::Elem>)> {
    let (header, w) = parse_word(op, text).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })?;
    Ok((header.over, w))
}

fn word_norm<O: Operad>(out: &Output, op: &O, text: &str, path: &Path, mode: Mode) -> CliResult<Status> {
    let (over, w) = parse_in(op, text, path)?;
    let (nf, rules) = rewrite_trace(op, &w, mode)?;
    let printed = print_word(op, &nf, &over);
    let mut shown = printed.trim_end().to_string();
    if !rules.is_empty() {
        let plural = if rules.len() == 1 { "" } else { "s" };
        let _ = write!(shown, "\n# {} rewrite{plural}: {}", rules.len(), rules.join(", "));
    }
    out.emit(
        shown,
        json!({ "kind": "word-norm", "word": printed, "steps": nf.len(), "rules": rules }),
    );
    Ok(Status::Success)
}

fn word_compare<O: Operad>(out: &Output, op: &O, texts: [(&str, &Path); 2], mode: Mode) -> CliResult<Status> {
    let (_, a) = parse_in(op, texts[0].0, texts[0].1)?;
    let (_, b) = parse_in(op, texts[1].0, texts[1].1)?;
    let (word, record, status) = match word_eq(op, &a, &b, mode)? {
        WordVerdict::Proved => ("proved".to_string(), json!({ "kind": "word-eq", "verdict": "proved" }), Status::Success),
        WordVerdict::Refuted(why) => (
            format!("refuted: {why}"),
            json!({ "kind": "word-eq", "verdict": "refuted", "witness": why }),
            Status::Failed,
        ),
        WordVerdict::Unknown => ("unknown".to_string(), json!({ "kind": "word-eq", "verdict": "unknown" }), Status::Unknown),
    };
    out.emit(word, record);
    Ok(status)
}

fn word_roundtrip<O: Operad>(out: &Output, op: &O, text: &str, path: &Path, mode: Mode) -> CliResult<Status> {
    let (over, w) = parse_in(op, text, path)?;
    let elem = from_word(op, &w)?;
    let back = to_word(op, &elem);
    let verdict = word_eq(op, &w, &back, mode)?;
    let rendered = op.render(&elem);
    let status = match verdict {
        WordVerdict::Proved => Status::Success,
        WordVerdict::Refuted(_) => Status::Failed,
        WordVerdict::Unknown => Status::Unknown,
    };
    let verdict_name = match status {
        Status::Success => "proved",
        Status::Failed => "refuted",
        _ => "unknown",
    };
    let printed = print_word(op, &back, &over);
    out.emit(
        format!("element {rendered}\n{}\n# round trip {verdict_name}", printed.trim_end()),
        json!({ "kind": "word-roundtrip", "element": rendered, "word": printed, "verdict": verdict_name }),
    );
    Ok(status)
}

/// Runs `$body` with `$op` bound to the operad the header names and `$cart`
/// telling whether cartesian mode is available.
macro_rules! with_operad {
    ($choice:expr, |$op:ident, $cart:ident| $body:expr) => {
        match $choice {
            WordOperad::Values(values) => {
                let $op = &values;
                let $cart = true;
                $body
            }
            WordOperad::Comps(model) => {
                let $op = model.comps();
                let $cart = false;
                $body
            }
        }
    };
}

pub fn word(out: &Output, action: WordCommand) -> CliResult<Status> {
    match action {
        WordCommand::Norm { file, mode } => {
            let (text, choice) = word_input(&file)?;
            with_operad!(choice, |op, cart| word_norm(out, op, &text, &file, mode_for(mode, cart)?))
        }
        WordCommand::Roundtrip { file, mode } => {
            let (text, choice) = word_input(&file)?;
            with_operad!(choice, |op, cart| word_roundtrip(out, op, &text, &file, mode_for(mode, cart)?))
        }
        WordCommand::Eq { left, right, mode } => {
            let (ltext, choice) = word_input(&left)?;
            let rtext = input::read_file(&right)?;
            let (lover, rover) = (over_of(&ltext, &left)?, over_of(&rtext, &right)?);
            if lover != rover {
                return Err(CliError::Usage(format!("words over different operads: `{lover}` and `{rover}`")));
            }
            with_operad!(choice, |op, cart| word_compare(
                out,
                op,
                [(&ltext, &left), (&rtext, &right)],
                mode_for(mode, cart)?
            ))
        }
    }
}

fn over_of(text: &str, path: &Path) -> CliResult<String> {
    word_header(text).map(|h| h.over).map_err(|source| CliError::Input {
        path: path.display().to_string(),
        source,
    })
}
