//! Surface syntax:
//!
//! ```text
//! M ::= ret V | let x = M in M | p(V, ...) | A A | ( M )
//! V ::= x | f(V, ...) | \x. M | ( V )
//! A ::= x | f(V, ...) | \x. M | ( V )
//! ```
//!
//! Nullary symbols are written `c()`. `#` starts a comment. Term files hold
//! `func f/2`, `proc p/1` and `def name ctx(x y) = M` items.

use super::{Computation, Signature, Term, Value};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Eq,
    Lambda,
    Dot,
    Slash,
    Let,
    In,
    Ret,
    Def,
    Ctx,
    Func,
    Proc,
    Eof,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let mut push = |tok| out.push(Spanned { tok, line: l0, col: c0 });
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '=' => Some(Tok::Eq),
            '\\' | 'λ' => Some(Tok::Lambda),
            '.' => Some(Tok::Dot),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = single {
            push(tok);
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse().map_err(|_| Error::Parse {
                line: l0,
                col: c0,
                msg: format!("number `{text}` out of range"),
            })?;
            push(Tok::Num(n));
            col += i - start;
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(match word.as_str() {
                "let" => Tok::Let,
                "in" => Tok::In,
                "ret" => Tok::Ret,
                "def" => Tok::Def,
                "ctx" => Tok::Ctx,
                "func" => Tok::Func,
                "proc" => Tok::Proc,
                _ => Tok::Ident(word),
            });
            continue;
        }
        return Err(Error::Parse {
            line,
            col,
            msg: format!("unexpected character `{c}`"),
        });
    }
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

/// Sort-agnostic parse tree; elaboration decides values versus computations.
#[derive(Debug)]
enum Raw {
    Name(String, Pos),
    Call(String, Vec<Raw>, Pos),
    Lam(String, Box<Raw>),
    Ret(Box<Raw>),
    Let(String, Box<Raw>, Box<Raw>),
    Juxt(Box<Raw>, Box<Raw>, Pos),
}

type Pos = (usize, usize);

struct Parser {
    toks: Vec<Spanned>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn pos(&self) -> Pos {
        let t = &self.toks[self.at];
        (t.line, t.col)
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].tok.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.pos();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(self.peek())))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected {what}, found {}", describe(&other))),
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Tok::Ident(_) | Tok::Lambda | Tok::LParen)
    }

    fn term(&mut self) -> Result<Raw> {
        match self.peek() {
            Tok::Ret => {
                self.bump();
                Ok(Raw::Ret(Box::new(self.atom()?)))
            }
            Tok::Let => {
                self.bump();
                let x = self.ident("a variable name")?;
                self.expect(Tok::Eq, "`=`")?;
                let bound = self.term()?;
                self.expect(Tok::In, "`in`")?;
                let body = self.term()?;
                Ok(Raw::Let(x, Box::new(bound), Box::new(body)))
            }
            _ => {
                let pos = self.pos();
                let head = self.atom()?;
                if !self.starts_atom() {
                    return Ok(head);
                }
                let arg = self.atom()?;
                if self.starts_atom() {
                    return self.error("application takes exactly two operands; add parentheses");
                }
                Ok(Raw::Juxt(Box::new(head), Box::new(arg), pos))
            }
        }
    }

    fn atom(&mut self) -> Result<Raw> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(name) => {
                self.bump();
                if *self.peek() != Tok::LParen {
                    return Ok(Raw::Name(name, pos));
                }
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::RParen {
                    loop {
                        args.push(self.term()?);
                        if *self.peek() == Tok::Comma {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                Ok(Raw::Call(name, args, pos))
            }
            Tok::Lambda => {
                self.bump();
                let x = self.ident("a bound variable")?;
                self.expect(Tok::Dot, "`.`")?;
                Ok(Raw::Lam(x, Box::new(self.term()?)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.term()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            other => self.error(format!("expected a term, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(n) => format!("`{n}`"),
        Tok::Eof => "end of input".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Lambda => "`\\`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Slash => "`/`".into(),
        Tok::Let => "`let`".into(),
        Tok::In => "`in`".into(),
        Tok::Ret => "`ret`".into(),
        Tok::Def => "`def`".into(),
        Tok::Ctx => "`ctx`".into(),
        Tok::Func => "`func`".into(),
        Tok::Proc => "`proc`".into(),
    }
}

struct Elab<'a> {
    sig: &'a Signature,
    scope: Vec<String>,
}

fn at(pos: Pos, msg: String) -> Error {
    Error::Parse { line: pos.0, col: pos.1, msg }
}

impl Elab<'_> {
    fn lookup(&self, name: &str, pos: Pos) -> Result<usize> {
        match self.scope.iter().rposition(|s| s == name) {
            Some(i) => Ok(i + 1),
            None if self.sig.func_arity(name).is_some() || self.sig.proc_arity(name).is_some() => {
                Err(at(pos, format!("symbol `{name}` must be applied, e.g. `{name}()`")))
            }
            None => Err(Error::Unbound(name.to_string())),
        }
    }

    fn bind<T>(&mut self, x: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        self.scope.push(x.to_string());
        let out = f(self);
        self.scope.pop();
        out
    }

    fn args(&mut self, name: &str, arity: usize, args: &[Raw], pos: Pos) -> Result<Vec<Value>> {
        if args.len() != arity {
            return Err(at(pos, format!("`{name}` expects {arity} arguments, found {}", args.len())));
        }
        args.iter().map(|a| self.value(a)).collect()
    }

    fn value(&mut self, raw: &Raw) -> Result<Value> {
        match raw {
            Raw::Name(x, pos) => Ok(Value::Var(self.lookup(x, *pos)?)),
            Raw::Call(x, _, pos) if self.in_scope(x) => Err(at(*pos, "application used where a value is expected".into())),
            Raw::Call(f, args, pos) => match self.sig.func_arity(f) {
                Some(k) => Ok(Value::Func(f.clone(), self.args(f, k, args, *pos)?)),
                None if self.sig.proc_arity(f).is_some() => {
                    Err(at(*pos, format!("procedure `{f}` used where a value is expected")))
                }
                None => Err(Error::UnknownSymbol(f.clone())),
            },
            Raw::Lam(x, body) => {
                let body = self.bind(x, |e| e.computation(body))?;
                Ok(Value::abs(body))
            }
            Raw::Ret(_) | Raw::Let(..) => Err(Error::Sort("computation used where a value is expected".into())),
            Raw::Juxt(_, _, pos) => Err(at(*pos, "application used where a value is expected".into())),
        }
    }

    fn in_scope(&self, name: &str) -> bool {
        self.scope.iter().any(|s| s == name)
    }

    fn computation(&mut self, raw: &Raw) -> Result<Computation> {
        match raw {
            // `x (v)` lexes like a call; with `x` bound it is an application.
            Raw::Call(x, args, pos) if self.in_scope(x) => match args.as_slice() {
                [arg] => Ok(Computation::App(Value::Var(self.lookup(x, *pos)?), self.value(arg)?)),
                _ => Err(at(*pos, format!("variable `{x}` applied to {} arguments", args.len()))),
            },
            Raw::Ret(v) => Ok(Computation::Ret(self.value(v)?)),
            Raw::Let(x, bound, body) => {
                let bound = self.computation(bound)?;
                let body = self.bind(x, |e| e.computation(body))?;
                Ok(Computation::let_in(bound, body))
            }
            Raw::Call(p, args, pos) => match self.sig.proc_arity(p) {
                Some(k) => Ok(Computation::Proc(p.clone(), self.args(p, k, args, *pos)?)),
                None if self.sig.func_arity(p).is_some() => {
                    Err(at(*pos, format!("function `{p}` used where a computation is expected; write `ret {p}(...)`")))
                }
                None => Err(Error::UnknownSymbol(p.clone())),
            },
            Raw::Juxt(f, a, _) => Ok(Computation::App(self.value(f)?, self.value(a)?)),
            Raw::Name(_, pos) => Err(at(*pos, "variable used where a computation is expected; write `ret x`".into())),
            Raw::Lam(..) => Err(Error::Sort("abstraction used where a computation is expected".into())),
        }
    }

    fn term(&mut self, raw: &Raw) -> Result<Term> {
        match raw {
            Raw::Ret(_) | Raw::Let(..) | Raw::Juxt(..) => Ok(Term::Computation(self.computation(raw)?)),
            Raw::Call(name, ..) if self.in_scope(name) || self.sig.proc_arity(name).is_some() => {
                Ok(Term::Computation(self.computation(raw)?))
            }
            _ => Ok(Term::Value(self.value(raw)?)),
        }
    }
}

fn parse_raw(text: &str) -> Result<Raw> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let raw = p.term()?;
    if *p.peek() != Tok::Eof {
        return p.error(format!("unexpected {} after term", describe(p.peek())));
    }
    Ok(raw)
}

fn elab<'a>(sig: &'a Signature, context: &[&str]) -> Elab<'a> {
    Elab {
        sig,
        scope: context.iter().map(|s| s.to_string()).collect(),
    }
}

/// Parse and elaborate a term in a named context; the sort is inferred.
pub fn parse_term(text: &str, sig: &Signature, context: &[&str]) -> Result<Term> {
    let raw = parse_raw(text)?;
    elab(sig, context).term(&raw)
}

pub fn parse_value(text: &str, sig: &Signature, context: &[&str]) -> Result<Value> {
    let raw = parse_raw(text)?;
    elab(sig, context).value(&raw)
}

pub fn parse_computation(text: &str, sig: &Signature, context: &[&str]) -> Result<Computation> {
    let raw = parse_raw(text)?;
    elab(sig, context).computation(&raw)
}

fn declaration(p: &mut Parser, sig: &mut Signature) -> Result<bool> {
    let is_func = match p.peek() {
        Tok::Func => true,
        Tok::Proc => false,
        _ => return Ok(false),
    };
    let pos = p.pos();
    p.bump();
    let name = p.ident("a symbol name")?;
    p.expect(Tok::Slash, "`/`")?;
    let arity = match p.bump() {
        Tok::Num(n) => n,
        other => return p.error(format!("expected an arity, found {}", describe(&other))),
    };
    let added = if is_func { sig.add_func(&name, arity) } else { sig.add_proc(&name, arity) };
    added.map_err(|e| at(pos, e.to_string()))?;
    Ok(true)
}

/// Reads `func f/2` and `proc p/1` lines.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut sig = Signature::new();
    while *p.peek() != Tok::Eof {
        if !declaration(&mut p, &mut sig)? {
            return p.error(format!("expected `func` or `proc`, found {}", describe(p.peek())));
        }
    }
    Ok(sig)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Definition {
    pub name: String,
    pub context: Vec<String>,
    pub term: Term,
    pub line: usize,
}

impl Definition {
    pub fn arity(&self) -> usize {
        self.context.len()
    }
}

/// Reads a term file; inline declarations extend `sig`, and every
/// definition is elaborated against the full signature.
pub fn parse_term_file(text: &str, sig: &Signature) -> Result<(Signature, Vec<Definition>)> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let mut sig = sig.clone();
    let mut raws = Vec::new();
    while *p.peek() != Tok::Eof {
        if declaration(&mut p, &mut sig)? {
            continue;
        }
        let line = p.pos().0;
        p.expect(Tok::Def, "`def`, `func` or `proc`")?;
        let name = p.ident("a definition name")?;
        let mut context = Vec::new();
        if *p.peek() == Tok::Ctx {
            p.bump();
            p.expect(Tok::LParen, "`(`")?;
            while let Tok::Ident(x) = p.peek().clone() {
                p.bump();
                if *p.peek() == Tok::Comma {
                    p.bump();
                }
                context.push(x);
            }
            p.expect(Tok::RParen, "`)`")?;
        }
        p.expect(Tok::Eq, "`=`")?;
        let raw = p.term()?;
        raws.push((name, context, raw, line));
    }
    let defs = raws
        .into_iter()
        .map(|(name, context, raw, line)| {
            let ctx: Vec<&str> = context.iter().map(String::as_str).collect();
            let term = elab(&sig, &ctx).term(&raw).map_err(|e| match e {
                Error::Parse { .. } => e,
                other => Error::Parse { line, col: 1, msg: format!("in `{name}`: {other}") },
            })?;
            Ok(Definition { name, context, term, line })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((sig, defs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::new().with_proc("p", 1).with_func("f", 2).with_func("c", 0)
    }

    #[test]
    fn elaborates_to_levels() {
        let s = sig();
        assert_eq!(
            parse_term("ret x", &s, &["x"]).unwrap(),
            Term::Computation(Computation::Ret(Value::Var(1)))
        );
        assert_eq!(
            parse_term("let y = p(x) in ret y", &s, &["x"]).unwrap(),
            Term::Computation(Computation::let_in(
                Computation::Proc("p".into(), vec![Value::Var(1)]),
                Computation::Ret(Value::Var(2))
            ))
        );
        assert_eq!(
            parse_term("(\\x. x x) z", &s, &["z"]).unwrap(),
            Term::Computation(Computation::App(
                Value::abs(Computation::App(Value::Var(2), Value::Var(2))),
                Value::Var(1)
            ))
        );
    }

    #[test]
    fn innermost_binder_wins() {
        let t = parse_term("\\x. ret x", &sig(), &["x"]).unwrap();
        assert_eq!(t, Term::Value(Value::abs(Computation::Ret(Value::Var(2)))));
    }

    #[test]
    fn variable_before_parenthesis_is_application() {
        let t = parse_term("f (\\y. ret y)", &sig(), &["f"]).unwrap();
        assert_eq!(t, Term::Computation(Computation::App(Value::Var(1), Value::abs(Computation::Ret(Value::Var(2))))));
        assert!(parse_term("ret f (f)", &sig(), &["f"]).is_err());
    }

    #[test]
    fn diagnostics() {
        let s = sig();
        assert_eq!(parse_term("ret y", &s, &["x"]), Err(Error::Unbound("y".into())));
        assert!(matches!(parse_term("ret f(x)", &s, &["x"]), Err(Error::Parse { .. })));
        assert!(matches!(parse_term("ret g(x)", &s, &["x"]), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("x x x", &s, &["x"]), Err(Error::Parse { .. })));
        assert!(matches!(parse_term("let y = ret x", &s, &["x"]), Err(Error::Parse { line: 1, col: 14, .. })));
    }

    #[test]
    fn term_files() {
        let src = "# sample\nproc q/2\ndef a ctx(x y) = q(x, y)\ndef b = \\z. ret c()\n";
        let (sig, defs) = parse_term_file(src, &sig()).unwrap();
        assert_eq!(sig.proc_arity("q"), Some(2));
        assert_eq!(defs.len(), 2);
        assert_eq!(defs[0].arity(), 2);
        assert_eq!(defs[1].line, 4);
        assert!(matches!(defs[1].term, Term::Value(Value::Abs(_))));
    }

    #[test]
    fn signature_files() {
        let s = parse_signature("func f/2\nproc p/1 # effect\n").unwrap();
        assert_eq!(s.func_arity("f"), Some(2));
        assert!(parse_signature("func f/2\nfunc f/1").is_err());
    }
}
