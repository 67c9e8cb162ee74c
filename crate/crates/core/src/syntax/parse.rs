//! Recursive-descent parser for the ASCII surface syntax.
//!
//! Precedence from loosest: quantifier body (extends maximally right),
//! `<->` (right-assoc), `->` (right-assoc), `|`, `&`, `~`.

use super::signature::is_ident;
use super::{Formula, Name, Sequent, Signature, SyntaxError, Term};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Eq,
    Not,
    And,
    Or,
    Imp,
    Iff,
    Turnstile,
    Forall,
    Exists,
    Eof,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Not => "`~`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Imp => "`->`".into(),
        Tok::Iff => "`<->`".into(),
        Tok::Turnstile => "`=>`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::Exists => "`exists`".into(),
        Tok::Eof => "end of input".into(),
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = &src[i..];
        let (tok, len) = if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Imp, 2)
        } else if rest.starts_with("=>") {
            (Tok::Turnstile, 2)
        } else {
            match c {
                b'(' => (Tok::LParen, 1),
                b')' => (Tok::RParen, 1),
                b',' => (Tok::Comma, 1),
                b'.' => (Tok::Dot, 1),
                b'=' => (Tok::Eq, 1),
                b'~' => (Tok::Not, 1),
                b'&' => (Tok::And, 1),
                b'|' => (Tok::Or, 1),
                c if c.is_ascii_alphabetic() || c == b'_' => {
                    let len = rest
                        .bytes()
                        .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_' || *b == b'\'')
                        .count();
                    let word = &rest[..len];
                    let tok = match word {
                        "forall" => Tok::Forall,
                        "exists" => Tok::Exists,
                        _ => Tok::Ident(word.to_string()),
                    };
                    (tok, len)
                }
                _ => {
                    let ch = rest.chars().next().unwrap_or('?');
                    return Err(SyntaxError::Syntax {
                        position: start,
                        message: format!("unexpected character `{ch}`"),
                    });
                }
            }
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, src.len()));
    Ok(out)
}

/// Whether an undeclared, unbound lowercase name is read as a variable.
fn looks_like_variable(name: &str) -> bool {
    name.starts_with(['u', 'v', 'w', 'x', 'y', 'z'])
}

/// Parser over a signature that grows with inferred declarations unless strict.
pub struct Parser<'s> {
    sig: &'s mut Signature,
    strict: bool,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    scope: Vec<Name>,
}

impl<'s> Parser<'s> {
    pub fn new(sig: &'s mut Signature) -> Self {
        Parser {
            sig,
            strict: false,
            toks: Vec::new(),
            pos: 0,
            scope: Vec::new(),
        }
    }

    /// In strict mode undeclared symbols are `UnknownSymbol` errors.
    pub fn strict(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    fn reset(&mut self, src: &str) -> Result<(), SyntaxError> {
        self.toks = lex(src)?;
        self.pos = 0;
        self.scope.clear();
        Ok(())
    }

    pub fn formula(mut self, src: &str) -> Result<Formula, SyntaxError> {
        self.reset(src)?;
        let f = self.parse_iff()?;
        self.expect_eof()?;
        Ok(f)
    }

    pub fn sequent(mut self, src: &str) -> Result<Sequent, SyntaxError> {
        self.reset(src)?;
        if !self.toks.iter().any(|(t, _)| *t == Tok::Turnstile) {
            return Err(SyntaxError::MissingTurnstile);
        }
        let antecedent = self.parse_list()?;
        self.expect(Tok::Turnstile)?;
        let succedent = self.parse_list()?;
        self.expect_eof()?;
        Ok(Sequent { antecedent, succedent })
    }

    pub fn term(mut self, src: &str) -> Result<Term, SyntaxError> {
        self.reset(src)?;
        let t = self.parse_term()?;
        self.expect_eof()?;
        Ok(t)
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> Result<T, SyntaxError> {
        Err(SyntaxError::Syntax {
            position: self.offset(),
            message,
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&tok), describe(self.peek())))
        }
    }

    fn expect_eof(&self) -> Result<(), SyntaxError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {}", describe(t))),
        }
    }

    fn parse_list(&mut self) -> Result<Vec<Formula>, SyntaxError> {
        let mut out = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::Eof) {
            return Ok(out);
        }
        loop {
            out.push(self.parse_iff()?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(out);
            }
        }
    }

    fn parse_iff(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.parse_imp()?;
        if *self.peek() == Tok::Iff {
            self.bump();
            let right = self.parse_iff()?;
            return Ok(Formula::iff(left, right));
        }
        Ok(left)
    }

    fn parse_imp(&mut self) -> Result<Formula, SyntaxError> {
        let left = self.parse_or()?;
        if *self.peek() == Tok::Imp {
            self.bump();
            let right = self.parse_imp()?;
            return Ok(Formula::implies(left, right));
        }
        Ok(left)
    }

    fn parse_or(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.parse_and()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let right = self.parse_and()?;
            left = Formula::or(left, right);
        }
        Ok(left)
    }

    fn parse_and(&mut self) -> Result<Formula, SyntaxError> {
        let mut left = self.parse_unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let right = self.parse_unary()?;
            left = Formula::and(left, right);
        }
        Ok(left)
    }

    fn parse_unary(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(Formula::not(self.parse_unary()?))
            }
            Tok::Forall | Tok::Exists => {
                let universal = self.bump() == Tok::Forall;
                let x = match self.peek().clone() {
                    Tok::Ident(x) if !x.starts_with(|c: char| c.is_ascii_uppercase()) => x,
                    t => return self.error(format!("expected a variable, found {}", describe(&t))),
                };
                if self.sig.lookup(&x).is_some() {
                    return self.error(format!("cannot bind declared symbol `{x}`"));
                }
                self.bump();
                self.expect(Tok::Dot)?;
                self.scope.push(x.as_str().into());
                let body = self.parse_iff();
                self.scope.pop();
                let body = body?;
                Ok(if universal {
                    Formula::forall(&x, body)
                } else {
                    Formula::exists(&x, body)
                })
            }
            _ => self.parse_atom(),
        }
    }

    fn parse_atom(&mut self) -> Result<Formula, SyntaxError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.parse_iff()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(name) if name.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.bump();
                let args = self.parse_args()?;
                self.check_symbol(&name, super::SymbolKind::Relation, args.len())?;
                Ok(Formula::Rel(name.as_str().into(), args))
            }
            Tok::Ident(_) => {
                let l = self.parse_term()?;
                self.expect(Tok::Eq)?;
                let r = self.parse_term()?;
                Ok(Formula::Eq(l, r))
            }
            t => self.error(format!("expected a formula, found {}", describe(&t))),
        }
    }

    fn parse_args(&mut self) -> Result<Vec<Term>, SyntaxError> {
        let mut args = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(args);
        }
        self.bump();
        loop {
            args.push(self.parse_term()?);
            match self.bump() {
                Tok::Comma => continue,
                Tok::RParen => return Ok(args),
                t => {
                    self.pos -= 1;
                    return self.error(format!("expected `,` or `)`, found {}", describe(&t)));
                }
            }
        }
    }

    fn parse_term(&mut self) -> Result<Term, SyntaxError> {
        let name = match self.peek().clone() {
            Tok::Ident(name) if !name.starts_with(|c: char| c.is_ascii_uppercase()) => name,
            Tok::Ident(name) => {
                return self.error(format!("relation symbol `{name}` used as a term"));
            }
            t => return self.error(format!("expected a term, found {}", describe(&t))),
        };
        debug_assert!(is_ident(&name));
        self.bump();
        let has_args = *self.peek() == Tok::LParen;
        let args = self.parse_args()?;
        if !has_args {
            if self.scope.iter().any(|v| **v == *name) {
                return Ok(Term::Var(name.as_str().into()));
            }
            match self.sig.lookup(&name) {
                Some(_) => {}
                None if looks_like_variable(&name) => {
                    return Ok(Term::Var(name.as_str().into()));
                }
                None => {}
            }
        }
        self.check_symbol(&name, super::SymbolKind::Function, args.len())?;
        Ok(Term::App(name.as_str().into(), args))
    }

    fn check_symbol(&mut self, name: &str, kind: super::SymbolKind, arity: usize) -> Result<(), SyntaxError> {
        if self.strict && self.sig.lookup(name).is_none() {
            return Err(SyntaxError::UnknownSymbol(name.to_string()));
        }
        self.sig.declare(name, kind, arity)
    }
}

fn require_sentence(free: Vec<Name>) -> Result<(), SyntaxError> {
    match free.into_iter().next() {
        Some(x) => Err(SyntaxError::NotASentence(x.to_string())),
        None => Ok(()),
    }
}

/// Parses a closed formula, declaring inferred symbols in `sig`.
pub fn parse_formula(text: &str, sig: &mut Signature) -> Result<Formula, SyntaxError> {
    let f = Parser::new(sig).formula(text)?;
    require_sentence(f.free_vars())?;
    Ok(f)
}

/// Parses `Γ => Δ` where every formula is closed.
pub fn parse_sequent(text: &str, sig: &mut Signature) -> Result<Sequent, SyntaxError> {
    let s = Parser::new(sig).sequent(text)?;
    require_sentence(s.free_vars())?;
    Ok(s)
}

/// Parses a term; undeclared variable-like names come back as `Term::Var`.
pub fn parse_term(text: &str, sig: &mut Signature) -> Result<Term, SyntaxError> {
    Parser::new(sig).term(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(src: &str) -> Formula {
        parse_formula(src, &mut Signature::new()).unwrap()
    }

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn quantifier_body_extends_right() {
        let f = p("forall x. forall y. E(x,y) -> x = f(y)");
        let expected = Formula::forall(
            "x",
            Formula::forall(
                "y",
                Formula::implies(
                    Formula::rel("E", vec![v("x"), v("y")]),
                    Formula::eq(v("x"), Term::app("f", vec![v("y")])),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parenthesised_quantifiers_split_implication() {
        let f = p("(forall x. f(x) = x) -> forall x. f(f(x)) = x");
        assert!(matches!(f, Formula::Implies(ref a, ref b)
            if matches!(**a, Formula::Forall(..)) && matches!(**b, Formula::Forall(..))));
    }

    #[test]
    fn precedence_and_associativity() {
        let a = || Formula::rel("A", vec![]);
        let b = || Formula::rel("B", vec![]);
        let c = || Formula::rel("C", vec![]);
        assert_eq!(p("A -> B -> C"), Formula::implies(a(), Formula::implies(b(), c())));
        assert_eq!(p("A <-> B <-> C"), Formula::iff(a(), Formula::iff(b(), c())));
        assert_eq!(p("A & B | C"), Formula::or(Formula::and(a(), b()), c()));
        assert_eq!(p("A | B & C"), Formula::or(a(), Formula::and(b(), c())));
        assert_eq!(p("~A & B"), Formula::and(Formula::not(a()), b()));
        assert_eq!(p("A | B | C"), Formula::or(Formula::or(a(), b()), c()));
    }

    #[test]
    fn free_variable_is_not_a_sentence() {
        let err = parse_formula("forall x. P(y)", &mut Signature::new()).unwrap_err();
        assert_eq!(err, SyntaxError::NotASentence("y".into()));
    }

    #[test]
    fn unbound_constants_are_declared() {
        let mut sig = Signature::new();
        parse_formula("P(c, f(d))", &mut sig).unwrap();
        assert!(sig.is_constant("c"));
        assert_eq!(sig.lookup("f").unwrap().arity, 1);
        assert_eq!(sig.lookup("P").unwrap().arity, 2);
    }

    #[test]
    fn declared_constant_may_look_like_a_variable() {
        let mut sig = Signature::parse("fun x1/0\n").unwrap();
        let f = parse_formula("P(x1)", &mut sig).unwrap();
        assert_eq!(f, Formula::rel("P", vec![Term::constant("x1")]));
    }

    #[test]
    fn arity_mismatch_against_signature() {
        let mut sig = Signature::parse("fun f/1\n").unwrap();
        let err = parse_formula("P(f(a, b))", &mut sig).unwrap_err();
        assert!(matches!(err, SyntaxError::ArityMismatch { ref symbol, expected: 1, found: 2 } if symbol == "f"));
    }

    #[test]
    fn strict_mode_rejects_unknown_symbols() {
        let mut sig = Signature::parse("rel P/1\n").unwrap();
        let err = Parser::new(&mut sig).strict(true).formula("P(c)").unwrap_err();
        assert_eq!(err, SyntaxError::UnknownSymbol("c".into()));
    }

    #[test]
    fn sequents_need_a_turnstile() {
        let mut sig = Signature::new();
        assert_eq!(parse_sequent("P, Q", &mut sig).unwrap_err(), SyntaxError::MissingTurnstile);
        let s = parse_sequent("=>", &mut sig).unwrap();
        assert!(s.antecedent.is_empty() && s.succedent.is_empty());
        let s = parse_sequent("P, Q =>", &mut sig).unwrap();
        assert_eq!(s.antecedent.len(), 2);
        assert!(s.succedent.is_empty());
    }

    #[test]
    fn syntax_error_reports_offset() {
        let err = parse_formula("P(a) & & Q", &mut Signature::new()).unwrap_err();
        assert!(matches!(err, SyntaxError::Syntax { position: 7, .. }), "{err:?}");
        let err = parse_formula("P(a) $", &mut Signature::new()).unwrap_err();
        assert!(matches!(err, SyntaxError::Syntax { position: 5, .. }), "{err:?}");
    }

    #[test]
    fn quantifier_in_operand_position() {
        let f = p("P -> forall x. Q(x) | R");
        assert_eq!(
            f,
            Formula::implies(
                Formula::rel("P", vec![]),
                Formula::forall(
                    "x",
                    Formula::or(Formula::rel("Q", vec![v("x")]), Formula::rel("R", vec![]))
                )
            )
        );
    }
}
