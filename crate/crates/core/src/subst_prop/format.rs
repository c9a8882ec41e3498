//! Word files.
//!
//! ```text
//! word 3 -> 1 over maybe2
//! sub 0 | <0; 1; 1; 0>/2 | 0
//! ren (1 3):3
//! ```
//!
//! Steps are listed in application order; `#` starts a comment.

use super::{Step, Word};
use crate::error::{Error, Result};
use crate::operad::Operad;
use crate::renaming::Renaming;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordHeader {
    pub dom: usize,
    pub cod: usize,
    pub over: String,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col: 1,
        msg: msg.into(),
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Reads only the header, so a caller can pick the operad it names.
pub fn word_header(text: &str) -> Result<WordHeader> {
    let (line, head) = content_lines(text).next().ok_or_else(|| parse_err(1, "empty word file"))?;
    let bad = || parse_err(line, "expected `word m -> n over <operad>`");
    let rest = head.strip_prefix("word").ok_or_else(bad)?;
    let (arrow, over) = rest.split_once(" over ").ok_or_else(bad)?;
    let (dom, cod) = arrow.split_once("->").ok_or_else(bad)?;
    Ok(WordHeader {
        dom: dom.trim().parse().map_err(|_| bad())?,
        cod: cod.trim().parse().map_err(|_| bad())?,
        over: over.trim().to_string(),
    })
}

pub fn parse_word<O: Operad + ?Sized>(op: &O, text: &str) -> Result<(WordHeader, Word<O::Elem>)> {
    let header = word_header(text)?;
    let mut steps = Vec::new();
    for (line, body) in content_lines(text).skip(1) {
        if let Some(rest) = body.strip_prefix("ren ") {
            steps.push(Step::Ren(rest.parse::<Renaming>().map_err(|e| parse_err(line, e.to_string()))?));
        } else if let Some(rest) = body.strip_prefix("sub ") {
            let (left, tail) = rest.split_once('|').ok_or_else(|| parse_err(line, "expected `sub n1 | elem | n2`"))?;
            let (elem, right) = tail.rsplit_once('|').ok_or_else(|| parse_err(line, "expected `sub n1 | elem | n2`"))?;
            let num = |s: &str| s.trim().parse::<usize>().map_err(|_| parse_err(line, format!("bad count `{}`", s.trim())));
            let elem = op.parse(elem).map_err(|e| parse_err(line, e.to_string()))?;
            steps.push(Step::Sub {
                left: num(left)?,
                elem,
                right: num(right)?,
            });
        } else {
            return Err(parse_err(line, format!("unknown step `{body}`")));
        }
    }
    let word = Word::from_steps(op, header.cod, steps)?;
    if word.dom() != header.dom {
        return Err(Error::Arity {
            context: "word file domain",
            expected: header.dom,
            found: word.dom(),
        });
    }
    Ok((header, word))
}

pub fn print_word<O: Operad + ?Sized>(op: &O, w: &Word<O::Elem>, over: &str) -> String {
    let mut out = format!("word {} -> {} over {over}\n", w.dom(), w.cod());
    for s in w.steps() {
        match s {
            Step::Sub { left, elem, right } => out.push_str(&format!("sub {left} | {} | {right}\n", op.render(elem))),
            Step::Ren(r) => out.push_str(&format!("ren {r}\n")),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::KleisliValues;

    #[test]
    fn round_trip() {
        let op = KleisliValues::new(2);
        let text = "# xor then copy\nword 1 -> 1 over values2\nsub 0 | <0; 1; 1; 0>/2 | 0\nren (1 1):1\n";
        let (h, w) = parse_word(&op, text).unwrap();
        assert_eq!(h.over, "values2");
        assert_eq!(w.len(), 2);
        let printed = print_word(&op, &w, "values2");
        assert_eq!(parse_word(&op, &printed).unwrap().1, w);
    }

    #[test]
    fn domain_is_checked() {
        let op = KleisliValues::new(2);
        assert!(parse_word(&op, "word 3 -> 1 over v\nsub 0 | <0; 1>/1 | 0\n").is_err());
        assert!(parse_word(&op, "word 1 -> 1 over v\nswap\n").is_err());
    }
}
