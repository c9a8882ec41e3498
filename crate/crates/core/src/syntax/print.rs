use super::{Computation, Term, Value};

struct Names {
    scope: Vec<String>,
}

impl Names {
    fn new(arity: usize, context: &[String]) -> Names {
        let mut scope: Vec<String> = context.iter().take(arity).cloned().collect();
        while scope.len() < arity {
            let name = fresh(&scope, scope.len() + 1);
            scope.push(name);
        }
        Names { scope }
    }

    fn with_binder<T>(&mut self, f: impl FnOnce(&mut Names, &str) -> T) -> T {
        let name = fresh(&self.scope, self.scope.len() + 1);
        self.scope.push(name.clone());
        let out = f(self, &name);
        self.scope.pop();
        out
    }

    fn var(&self, i: usize) -> String {
        self.scope
            .get(i.wrapping_sub(1))
            .cloned()
            .unwrap_or_else(|| format!("?{i}"))
    }
}

fn fresh(scope: &[String], level: usize) -> String {
    let mut name = format!("x{level}");
    while scope.contains(&name) {
        name.push('\'');
    }
    name
}

fn value(v: &Value, names: &mut Names, out: &mut String) {
    match v {
        Value::Var(i) => out.push_str(&names.var(*i)),
        Value::Func(f, args) => call(f, args, names, out),
        Value::Abs(body) => names.with_binder(|names, x| {
            out.push('\\');
            out.push_str(x);
            out.push_str(". ");
            computation(body, names, out);
        }),
    }
}

fn operand(v: &Value, names: &mut Names, out: &mut String) {
    if matches!(v, Value::Abs(_)) {
        out.push('(');
        value(v, names, out);
        out.push(')');
    } else {
        value(v, names, out);
    }
}

fn call(name: &str, args: &[Value], names: &mut Names, out: &mut String) {
    out.push_str(name);
    out.push('(');
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        value(a, names, out);
    }
    out.push(')');
}

fn computation(c: &Computation, names: &mut Names, out: &mut String) {
    match c {
        Computation::Ret(v) => {
            out.push_str("ret ");
            value(v, names, out);
        }
        Computation::Let(bound, body) => {
            out.push_str("let ");
            let mut bound_text = String::new();
            computation(bound, names, &mut bound_text);
            names.with_binder(|names, x| {
                out.push_str(x);
                out.push_str(" = ");
                out.push_str(&bound_text);
                out.push_str(" in ");
                computation(body, names, out);
            });
        }
        Computation::Proc(p, args) => call(p, args, names, out),
        Computation::App(f, a) => {
            operand(f, names, out);
            out.push(' ');
            operand(a, names, out);
        }
    }
}

/// Prints with the given context names; missing names and binders get `x<level>`.
pub fn print_value(v: &Value, arity: usize, context: &[String]) -> String {
    let mut out = String::new();
    value(v, &mut Names::new(arity, context), &mut out);
    out
}

pub fn print_computation(c: &Computation, arity: usize, context: &[String]) -> String {
    let mut out = String::new();
    computation(c, &mut Names::new(arity, context), &mut out);
    out
}

pub fn print_term(t: &Term, arity: usize, context: &[String]) -> String {
    match t {
        Term::Value(v) => print_value(v, arity, context),
        Term::Computation(c) => print_computation(c, arity, context),
    }
}

#[cfg(test)]
mod tests {
    use super::super::{parse_term, Signature};
    use super::*;

    #[test]
    fn prints_binders_by_level() {
        let t = Term::Computation(Computation::let_in(
            Computation::Proc("p".into(), vec![Value::Var(1)]),
            Computation::App(Value::abs(Computation::Ret(Value::Var(3))), Value::Var(2)),
        ));
        assert_eq!(print_term(&t, 1, &[]), "let x2 = p(x1) in (\\x3. ret x3) x2");
        assert_eq!(print_term(&t, 1, &["x2".into()]), "let x2' = p(x2) in (\\x3. ret x3) x2'");
    }

    #[test]
    fn printed_text_parses_back() {
        let sig = Signature::new().with_proc("p", 1).with_func("f", 2);
        for src in [
            "let y = let z = p(x) in ret z in ret f(x, y)",
            "ret \\y. let z = y x in ret z",
            "(\\y. ret y) (\\z. p(z))",
        ] {
            let t = parse_term(src, &sig, &["x"]).unwrap();
            let printed = print_term(&t, 1, &["x".into()]);
            assert_eq!(parse_term(&printed, &sig, &["x"]).unwrap(), t, "{printed}");
        }
    }
}
