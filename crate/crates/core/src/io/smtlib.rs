//! SMT-LIB v2 export of a sequent as a satisfiability query: the sequent is
//! valid iff the script is `unsat`.

use std::collections::HashSet;

use thiserror::Error;

use crate::syntax::{Formula, Sequent, Signature, SymbolKind, Term};

const RESERVED: &[&str] = &[
    "_", "!", "as", "let", "exists", "forall", "match", "par", "and", "or", "not", "=>", "=", "xor",
    "distinct", "ite", "true", "false", "Bool", "U", "assert", "check-sat", "declare-fun", "declare-sort",
    "define-fun", "set-logic", "set-option", "exit", "NUMERAL", "DECIMAL", "STRING", "BINARY", "HEXADECIMAL",
];

fn is_simple(s: &str) -> bool {
    const EXTRA: &str = "~!@$%^&*_-+=<>.?/";
    let ok = |c: char| c.is_ascii_alphanumeric() || EXTRA.contains(c);
    !s.is_empty() && !s.starts_with(|c: char| c.is_ascii_digit()) && s.chars().all(ok)
}

/// The symbol as written in SMT-LIB, quoted when it is not a plain symbol.
pub(crate) fn symbol(name: &str) -> String {
    if is_simple(name) && !RESERVED.contains(&name) {
        name.to_string()
    } else {
        format!("|{}|", name.replace(['|', '\\'], "_"))
    }
}

fn term(t: &Term) -> String {
    match t {
        Term::Var(x) => symbol(x),
        Term::App(f, args) if args.is_empty() => symbol(f),
        Term::App(f, args) => {
            let args: Vec<String> = args.iter().map(term).collect();
            format!("({} {})", symbol(f), args.join(" "))
        }
    }
}

fn formula(f: &Formula) -> String {
    let bin = |op: &str, a: &Formula, b: &Formula| format!("({op} {} {})", formula(a), formula(b));
    match f {
        Formula::Rel(r, args) if args.is_empty() => symbol(r),
        Formula::Rel(r, args) => {
            let args: Vec<String> = args.iter().map(term).collect();
            format!("({} {})", symbol(r), args.join(" "))
        }
        Formula::Eq(l, r) => format!("(= {} {})", term(l), term(r)),
        Formula::Not(a) => format!("(not {})", formula(a)),
        Formula::And(a, b) => bin("and", a, b),
        Formula::Or(a, b) => bin("or", a, b),
        Formula::Implies(a, b) => bin("=>", a, b),
        Formula::Iff(a, b) => bin("=", a, b),
        Formula::Forall(x, b) => format!("(forall (({} U)) {})", symbol(x), formula(b)),
        Formula::Exists(x, b) => format!("(exists (({} U)) {})", symbol(x), formula(b)),
    }
}

/// Declarations for every symbol of `s`, plus one assertion per antecedent
/// formula and one negated assertion per succedent formula.
pub fn export_smtlib(s: &Sequent, sig: &Signature) -> String {
    let mut sig = sig.clone();
    for f in s.formulas() {
        sig.declare_formula(f).expect("sequent agrees with its signature");
    }
    let mut out = String::from("(set-logic UF)\n(declare-sort U 0)\n");
    for d in sig.decls() {
        let range = match d.kind {
            SymbolKind::Function => "U",
            SymbolKind::Relation => "Bool",
        };
        let domain = vec!["U"; d.arity].join(" ");
        out.push_str(&format!("(declare-fun {} ({domain}) {range})\n", symbol(&d.name)));
    }
    for f in &s.antecedent {
        out.push_str(&format!("(assert {})\n", formula(f)));
    }
    for f in &s.succedent {
        out.push_str(&format!("(assert (not {}))\n", formula(f)));
    }
    out.push_str("(check-sat)\n");
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SmtSyntaxError {
    #[error("unbalanced parentheses at byte {0}")]
    Unbalanced(usize),
    #[error("unterminated quoted symbol at byte {0}")]
    Unterminated(usize),
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("undeclared symbol `{0}`")]
    Undeclared(String),
    #[error("malformed `{0}` command")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn read_sexps(text: &str) -> Result<Vec<Sexp>, SmtSyntaxError> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(usize, Vec<Sexp>)> = vec![(0, Vec::new())];
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                stack.push((i, Vec::new()));
                i += 1;
            }
            b')' => {
                let (_, items) = stack.pop().filter(|_| !stack.is_empty()).ok_or(SmtSyntaxError::Unbalanced(i))?;
                stack.last_mut().ok_or(SmtSyntaxError::Unbalanced(i))?.1.push(Sexp::List(items));
                i += 1;
            }
            b'|' => {
                let end = text[i + 1..].find('|').ok_or(SmtSyntaxError::Unterminated(i))?;
                let name = &text[i + 1..i + 1 + end];
                stack.last_mut().expect("nonempty").1.push(Sexp::Atom(name.to_string()));
                i += end + 2;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !b"();| \t\r\n".contains(&bytes[i]) {
                    i += 1;
                }
                stack.last_mut().expect("nonempty").1.push(Sexp::Atom(text[start..i].to_string()));
            }
        }
    }
    if stack.len() != 1 {
        return Err(SmtSyntaxError::Unbalanced(stack.last().map_or(0, |s| s.0)));
    }
    Ok(stack.pop().expect("top level").1)
}

fn check_expr(e: &Sexp, scope: &HashSet<String>) -> Result<(), SmtSyntaxError> {
    const BUILTIN: &[&str] = &["and", "or", "not", "=>", "=", "true", "false", "xor", "distinct", "ite"];
    match e {
        Sexp::Atom(a) if BUILTIN.contains(&a.as_str()) || scope.contains(a) => Ok(()),
        Sexp::Atom(a) => Err(SmtSyntaxError::Undeclared(a.clone())),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(q), Sexp::List(binders), body] if q == "forall" || q == "exists" => {
                let mut inner = scope.clone();
                for b in binders {
                    match b {
                        Sexp::List(pair) if matches!(pair.as_slice(), [Sexp::Atom(_), Sexp::Atom(_)]) => {
                            if let Sexp::Atom(x) = &pair[0] {
                                inner.insert(x.clone());
                            }
                        }
                        _ => return Err(SmtSyntaxError::Malformed(q.clone())),
                    }
                }
                check_expr(body, &inner)
            }
            [] => Err(SmtSyntaxError::Malformed("()".into())),
            items => items.iter().try_for_each(|i| check_expr(i, scope)),
        },
    }
}

/// Checks that `text` is a well-formed script over the command subset the
/// exporter uses, with every symbol declared before use.
pub fn check_smtlib(text: &str) -> Result<(), SmtSyntaxError> {
    let mut declared = HashSet::new();
    for cmd in read_sexps(text)? {
        let Sexp::List(items) = &cmd else {
            return Err(SmtSyntaxError::Malformed("top-level atom".into()));
        };
        let Some(Sexp::Atom(head)) = items.first() else {
            return Err(SmtSyntaxError::Malformed("empty command".into()));
        };
        match (head.as_str(), &items[1..]) {
            ("set-logic", [Sexp::Atom(_)]) | ("check-sat", []) | ("exit", []) => {}
            ("set-option", [Sexp::Atom(_), _]) => {}
            ("declare-sort", [Sexp::Atom(s), Sexp::Atom(_)]) => {
                declared.insert(s.clone());
            }
            ("declare-fun", [Sexp::Atom(f), Sexp::List(dom), Sexp::Atom(range)]) => {
                let sorts_ok = dom.iter().chain([&items[3]]).all(|s| match s {
                    Sexp::Atom(a) => a == "Bool" || declared.contains(a),
                    _ => false,
                });
                if !sorts_ok {
                    return Err(SmtSyntaxError::Undeclared(range.clone()));
                }
                declared.insert(f.clone());
            }
            ("assert", [e]) => check_expr(e, &declared)?,
            ("set-logic" | "check-sat" | "exit" | "set-option" | "declare-sort" | "declare-fun" | "assert", _) => {
                return Err(SmtSyntaxError::Malformed(head.clone()))
            }
            _ => return Err(SmtSyntaxError::UnknownCommand(head.clone())),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_sequent;

    fn export(src: &str) -> String {
        let mut sig = Signature::new();
        let s = parse_sequent(src, &mut sig).unwrap();
        export_smtlib(&s, &sig)
    }

    #[test]
    fn running_example_exports() {
        let out = export("forall x. forall y. E(x,y) -> x = f(y), E(a,c), E(b,c) => a = b");
        assert!(out.contains("(declare-fun E (U U) Bool)"));
        assert!(out.contains("(declare-fun f (U) U)"));
        assert!(out.contains("(assert (forall ((x U)) (forall ((y U)) (=> (E x y) (= x (f y))))))"));
        assert!(out.contains("(assert (not (= a b)))"));
        assert!(out.trim_end().ends_with("(check-sat)"));
        check_smtlib(&out).unwrap();
    }

    #[test]
    fn awkward_names_are_quoted() {
        assert_eq!(symbol("and"), "|and|");
        assert_eq!(symbol("x'"), "|x'|");
        assert_eq!(symbol("sk0"), "sk0");
        let out = export("forall x'. P(x') => Q");
        check_smtlib(&out).unwrap();
        assert!(out.contains("(declare-fun Q () Bool)"));
    }

    #[test]
    fn checker_rejects_broken_scripts() {
        assert!(matches!(check_smtlib("(assert (P a)"), Err(SmtSyntaxError::Unbalanced(_))));
        assert!(matches!(check_smtlib("(assert (P a))"), Err(SmtSyntaxError::Undeclared(_))));
        assert!(matches!(check_smtlib("(frobnicate)"), Err(SmtSyntaxError::UnknownCommand(_))));
        assert!(matches!(check_smtlib("(declare-fun |a () U)"), Err(SmtSyntaxError::Unterminated(_))));
        assert!(check_smtlib("; comment\n(check-sat)").is_ok());
    }
}
