//! Named sequents shared by the benchmarks.

use sct_core::{parse_sequent, Sequent, Signature, SyntaxError};

/// `(name, sequent)`; every entry is valid except `s2` and `hard`.
pub const CORPUS: &[(&str, &str)] = &[
    ("s0", "forall x. forall y. E(x,y) -> x = f(y) => forall x. forall y. forall z. E(x,z) & E(y,z) -> x = y"),
    ("s1", "forall x. forall y. E(x,y) -> x = f(y), E(a,c), E(b,c) => a = b"),
    ("s2", "E(b,c) -> b = f(c), E(a,c), E(b,c) => a = b"),
    ("drinker", "=> exists x. (Drinks(x) -> forall y. Drinks(y))"),
    ("equality_chain", "=> (forall x. f(x) = x) -> (forall x. f(f(x)) = x)"),
    ("pia_unary_h", "forall y. P(g(e,f(y))), Q(f(c)), R(h(d),e) => exists x. P(x)"),
    ("pia_binary_h", "forall y. P(g(e,f(y))), Q(f(c)), R(h(d,c),e) => exists x. P(x)"),
    ("hard", "forall x. P(f(g(f(x)))) & ~P(f(g(h(c)))) =>"),
];

pub fn load(name: &str) -> Result<Sequent, SyntaxError> {
    let (_, text) = CORPUS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| SyntaxError::UnknownSymbol(name.to_string()))?;
    parse_sequent(text, &mut Signature::new())
}
