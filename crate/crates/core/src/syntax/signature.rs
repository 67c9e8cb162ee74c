use std::collections::HashMap;
use std::fmt;

use super::{Formula, Name, Sequent, SyntaxError, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    Function,
    Relation,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Function => "function",
            SymbolKind::Relation => "relation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolDecl {
    pub name: Name,
    pub kind: SymbolKind,
    pub arity: usize,
}

/// Function and relation symbols with arities, in declaration order.
///
/// Names are unique across both kinds.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    decls: Vec<SymbolDecl>,
    index: HashMap<Name, usize>,
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.decls == other.decls
    }
}

impl Eq for Signature {}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn decls(&self) -> &[SymbolDecl] {
        &self.decls
    }

    pub fn len(&self) -> usize {
        self.decls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decls.is_empty()
    }

    pub fn lookup(&self, name: &str) -> Option<&SymbolDecl> {
        self.index.get(name).map(|&i| &self.decls[i])
    }

    /// Declares a symbol, or checks an existing declaration agrees.
    pub fn declare(&mut self, name: &str, kind: SymbolKind, arity: usize) -> Result<(), SyntaxError> {
        if let Some(d) = self.lookup(name) {
            if d.kind != kind {
                return Err(SyntaxError::KindMismatch {
                    symbol: name.to_string(),
                    declared: d.kind,
                    used: kind,
                });
            }
            if d.arity != arity {
                return Err(SyntaxError::ArityMismatch {
                    symbol: name.to_string(),
                    expected: d.arity,
                    found: arity,
                });
            }
            return Ok(());
        }
        let name: Name = name.into();
        self.index.insert(name.clone(), self.decls.len());
        self.decls.push(SymbolDecl { name, kind, arity });
        Ok(())
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.declare(name, SymbolKind::Function, arity)
    }

    pub fn declare_relation(&mut self, name: &str, arity: usize) -> Result<(), SyntaxError> {
        self.declare(name, SymbolKind::Relation, arity)
    }

    pub fn functions(&self) -> impl Iterator<Item = &SymbolDecl> {
        self.decls.iter().filter(|d| d.kind == SymbolKind::Function)
    }

    pub fn relations(&self) -> impl Iterator<Item = &SymbolDecl> {
        self.decls.iter().filter(|d| d.kind == SymbolKind::Relation)
    }

    pub fn constants(&self) -> impl Iterator<Item = &SymbolDecl> {
        self.functions().filter(|d| d.arity == 0)
    }

    pub fn is_constant(&self, name: &str) -> bool {
        matches!(self.lookup(name), Some(d) if d.kind == SymbolKind::Function && d.arity == 0)
    }

    /// Adds every declaration of `other` not yet present.
    pub fn extend(&mut self, other: &Signature) -> Result<(), SyntaxError> {
        for d in &other.decls {
            self.declare(&d.name, d.kind, d.arity)?;
        }
        Ok(())
    }

    pub fn declare_term(&mut self, t: &Term) -> Result<(), SyntaxError> {
        if let Term::App(f, args) = t {
            self.declare_function(f, args.len())?;
            for a in args {
                self.declare_term(a)?;
            }
        }
        Ok(())
    }

    pub fn declare_formula(&mut self, phi: &Formula) -> Result<(), SyntaxError> {
        if let Formula::Rel(r, args) = phi {
            self.declare_relation(r, args.len())?;
        }
        let mut res = Ok(());
        phi.for_each_atom_term(&mut |t| {
            if res.is_ok() {
                res = self.declare_term(t);
            }
        });
        res?;
        match phi {
            Formula::Not(a) => self.declare_formula(a),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                self.declare_formula(a)?;
                self.declare_formula(b)
            }
            Formula::Forall(_, body) | Formula::Exists(_, body) => self.declare_formula(body),
            Formula::Rel(..) | Formula::Eq(..) => Ok(()),
        }
    }

    /// Symbols of `s` in order of first occurrence.
    pub fn of_sequent(s: &Sequent) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        for f in s.formulas() {
            sig.declare_formula(f)?;
        }
        Ok(sig)
    }

    /// Parses `rel E/2` / `fun f/1` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Signature, SyntaxError> {
        let mut sig = Signature::new();
        let mut offset = 0;
        for line in text.split_inclusive('\n') {
            let content = line.split('#').next().unwrap_or("").trim();
            let err = |message: &str| SyntaxError::Syntax {
                position: offset,
                message: message.to_string(),
            };
            if !content.is_empty() {
                let mut words = content.split_whitespace();
                let kind = match words.next() {
                    Some("rel") => SymbolKind::Relation,
                    Some("fun") => SymbolKind::Function,
                    _ => return Err(err("expected `rel` or `fun`")),
                };
                let decl = words.next().ok_or_else(|| err("expected NAME/ARITY"))?;
                if words.next().is_some() {
                    return Err(err("trailing input after declaration"));
                }
                let (name, arity) = decl.split_once('/').ok_or_else(|| err("expected NAME/ARITY"))?;
                let arity: usize = arity.parse().map_err(|_| err("arity is not a number"))?;
                let valid_name = match kind {
                    SymbolKind::Relation => is_upper_ident(name),
                    SymbolKind::Function => is_lower_ident(name),
                };
                if !valid_name {
                    return Err(err("relation names start uppercase, function names lowercase"));
                }
                sig.declare(name, kind, arity)?;
            }
            offset += line.len();
        }
        Ok(sig)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.decls {
            let kw = match d.kind {
                SymbolKind::Function => "fun",
                SymbolKind::Relation => "rel",
            };
            writeln!(f, "{kw} {}/{}", d.name, d.arity)?;
        }
        Ok(())
    }
}

pub(crate) fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_upper_ident(s: &str) -> bool {
    is_ident(s) && s.starts_with(|c: char| c.is_ascii_uppercase())
}

pub(crate) fn is_lower_ident(s: &str) -> bool {
    is_ident(s) && !s.starts_with(|c: char| c.is_ascii_uppercase()) && s != "forall" && s != "exists"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_signature_file() {
        let sig = Signature::parse("rel E/2\nfun f/1 # unary\n\nfun c/0\n").unwrap();
        assert_eq!(sig.len(), 3);
        assert_eq!(sig.lookup("E").unwrap().kind, SymbolKind::Relation);
        assert!(sig.is_constant("c"));
        assert_eq!(Signature::parse(&sig.to_string()).unwrap(), sig);
    }

    #[test]
    fn rejects_conflicting_declarations() {
        assert!(matches!(
            Signature::parse("fun f/1\nfun f/2\n"),
            Err(SyntaxError::ArityMismatch { .. })
        ));
        assert!(matches!(
            Signature::parse("rel e/1\n"),
            Err(SyntaxError::Syntax { .. })
        ));
    }
}
