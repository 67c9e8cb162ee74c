//! Canonical ASCII printer; the output re-parses to the same tree.

use super::{Formula, Sequent, Term};

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    write_term(t, &mut out);
    out
}

fn write_term(t: &Term, out: &mut String) {
    match t {
        Term::Var(x) => out.push_str(x),
        Term::App(f, args) => {
            out.push_str(f);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(a, out);
                }
                out.push(')');
            }
        }
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(f, true, &mut out);
    out
}

pub fn print_sequent(s: &Sequent) -> String {
    let side = |fs: &[Formula]| fs.iter().map(print_formula).collect::<Vec<_>>().join(", ");
    match (s.antecedent.is_empty(), s.succedent.is_empty()) {
        (true, true) => "=>".to_string(),
        (true, false) => format!("=> {}", side(&s.succedent)),
        (false, true) => format!("{} =>", side(&s.antecedent)),
        (false, false) => format!("{} => {}", side(&s.antecedent), side(&s.succedent)),
    }
}

/// Binding strength; quantifiers and atoms sit at the unary level.
fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(..) => 3,
        Formula::And(..) => 4,
        _ => 5,
    }
}

/// `tail` is true when nothing follows `f` before its enclosing group closes,
/// so a quantifier may run to the end without parentheses.
fn write_formula(f: &Formula, tail: bool, out: &mut String) {
    match f {
        Formula::Rel(r, args) => {
            out.push_str(r);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(a, out);
                }
                out.push(')');
            }
        }
        Formula::Eq(l, r) => {
            write_term(l, out);
            out.push_str(" = ");
            write_term(r, out);
        }
        Formula::Not(a) => {
            out.push('~');
            write_operand(a, prec(a) < 5, tail, out);
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            if !tail {
                out.push('(');
            }
            out.push_str(if matches!(f, Formula::Forall(..)) { "forall " } else { "exists " });
            out.push_str(x);
            out.push_str(". ");
            write_formula(body, true, out);
            if !tail {
                out.push(')');
            }
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let p = prec(f);
            let (op, right_assoc) = match f {
                Formula::And(..) => (" & ", false),
                Formula::Or(..) => (" | ", false),
                Formula::Implies(..) => (" -> ", true),
                _ => (" <-> ", true),
            };
            let left_parens = if right_assoc { prec(a) <= p } else { prec(a) < p };
            let right_parens = if right_assoc { prec(b) < p } else { prec(b) <= p };
            write_operand(a, left_parens, false, out);
            out.push_str(op);
            write_operand(b, right_parens, tail, out);
        }
    }
}

fn write_operand(f: &Formula, parens: bool, tail: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_formula(f, true, out);
        out.push(')');
    } else {
        write_formula(f, tail, out);
    }
}
