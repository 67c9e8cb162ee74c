//! Finite structures, Tarskian evaluation and bounded countermodel search.

mod finder;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Name, Sequent, Term};

pub use finder::{find_countermodel, CountermodelResult, DEFAULT_MODEL_MAX_SIZE, DEFAULT_MODEL_TIMEOUT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("variable `{0}` has no value")]
    UnboundVariable(String),
    #[error("symbol `{0}` is not interpreted by the structure")]
    SignatureMismatch(String),
    #[error("symbol `{symbol}` interpreted with arity {table}, used with {used}")]
    ArityMismatch {
        symbol: String,
        table: usize,
        used: usize,
    },
    #[error("structure is malformed: {0}")]
    Malformed(String),
}

/// Row-major table over `size^arity` argument tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    pub arity: usize,
    pub values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationTable {
    pub arity: usize,
    pub holds: Vec<bool>,
}

/// A finite structure over the universe `{0, .., size-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub size: usize,
    pub functions: BTreeMap<Name, FunctionTable>,
    pub relations: BTreeMap<Name, RelationTable>,
}

fn tuple_index(size: usize, args: &[usize]) -> usize {
    args.iter().fold(0, |acc, &a| acc * size + a)
}

fn index_tuple(size: usize, arity: usize, mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
    out
}

impl Structure {
    pub fn new(size: usize) -> Self {
        assert!(size > 0, "universe must be nonempty");
        Structure {
            size,
            functions: BTreeMap::new(),
            relations: BTreeMap::new(),
        }
    }

    /// Adds a function interpreted by `f` on every argument tuple.
    pub fn with_function(mut self, name: &str, arity: usize, f: impl Fn(&[usize]) -> usize) -> Self {
        let values = (0..self.size.pow(arity as u32))
            .map(|i| f(&index_tuple(self.size, arity, i)))
            .collect();
        self.functions.insert(name.into(), FunctionTable { arity, values });
        self
    }

    pub fn with_constant(self, name: &str, value: usize) -> Self {
        self.with_function(name, 0, |_| value)
    }

    pub fn with_relation(mut self, name: &str, arity: usize, tuples: &[&[usize]]) -> Self {
        let mut holds = vec![false; self.size.pow(arity as u32)];
        for t in tuples {
            holds[tuple_index(self.size, t)] = true;
        }
        self.relations.insert(name.into(), RelationTable { arity, holds });
        self
    }

    pub fn function(&self, name: &str, args: &[usize]) -> Result<usize, SemanticsError> {
        let table = self
            .functions
            .get(name)
            .ok_or_else(|| SemanticsError::SignatureMismatch(name.to_string()))?;
        if table.arity != args.len() {
            return Err(SemanticsError::ArityMismatch {
                symbol: name.to_string(),
                table: table.arity,
                used: args.len(),
            });
        }
        Ok(table.values[tuple_index(self.size, args)])
    }

    pub fn relation(&self, name: &str, args: &[usize]) -> Result<bool, SemanticsError> {
        let table = self
            .relations
            .get(name)
            .ok_or_else(|| SemanticsError::SignatureMismatch(name.to_string()))?;
        if table.arity != args.len() {
            return Err(SemanticsError::ArityMismatch {
                symbol: name.to_string(),
                table: table.arity,
                used: args.len(),
            });
        }
        Ok(table.holds[tuple_index(self.size, args)])
    }

    fn validate(&self) -> Result<(), SemanticsError> {
        if self.size == 0 {
            return Err(SemanticsError::Malformed("empty universe".into()));
        }
        for (name, t) in &self.functions {
            if t.values.len() != self.size.pow(t.arity as u32) {
                return Err(SemanticsError::Malformed(format!("function `{name}` is not total")));
            }
            if t.values.iter().any(|&v| v >= self.size) {
                return Err(SemanticsError::Malformed(format!("function `{name}` leaves the universe")));
            }
        }
        for (name, t) in &self.relations {
            if t.holds.len() != self.size.pow(t.arity as u32) {
                return Err(SemanticsError::Malformed(format!("relation `{name}` has a wrong table size")));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StructureJson::from(self)).expect("structure serialises")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Structure, SemanticsError> {
        let raw: StructureJson = serde_json::from_value(value.clone())
            .map_err(|e| SemanticsError::Malformed(e.to_string()))?;
        Structure::try_from(raw)
    }
}

/// Variable assignment.
pub type Assignment = HashMap<Name, usize>;

pub fn eval_term(t: &Term, m: &Structure, env: &Assignment) -> Result<usize, SemanticsError> {
    match t {
        Term::Var(x) => env
            .get(x)
            .copied()
            .ok_or_else(|| SemanticsError::UnboundVariable(x.to_string())),
        Term::App(f, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(a, m, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.function(f, &vals)
        }
    }
}

pub fn eval(phi: &Formula, m: &Structure, env: &Assignment) -> Result<bool, SemanticsError> {
    Ok(match phi {
        Formula::Rel(r, args) => {
            let vals = args
                .iter()
                .map(|a| eval_term(a, m, env))
                .collect::<Result<Vec<_>, _>>()?;
            m.relation(r, &vals)?
        }
        Formula::Eq(l, r) => eval_term(l, m, env)? == eval_term(r, m, env)?,
        Formula::Not(a) => !eval(a, m, env)?,
        Formula::And(a, b) => eval(a, m, env)? && eval(b, m, env)?,
        Formula::Or(a, b) => eval(a, m, env)? || eval(b, m, env)?,
        Formula::Implies(a, b) => !eval(a, m, env)? || eval(b, m, env)?,
        Formula::Iff(a, b) => eval(a, m, env)? == eval(b, m, env)?,
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            let universal = matches!(phi, Formula::Forall(..));
            let mut env = env.clone();
            for u in 0..m.size {
                env.insert(x.clone(), u);
                if eval(body, m, &env)? != universal {
                    return Ok(!universal);
                }
            }
            universal
        }
    })
}

/// True iff every antecedent formula holds and every succedent formula fails.
pub fn is_countermodel(s: &Sequent, m: &Structure) -> Result<bool, SemanticsError> {
    let env = Assignment::new();
    for f in &s.antecedent {
        if !eval(f, m, &env)? {
            return Ok(false);
        }
    }
    for f in &s.succedent {
        if eval(f, m, &env)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Wire form: `{"size":n,"functions":{"f":[[args..,value]..]},"relations":{"E":[[tuple]..]}}`.
#[derive(Serialize, Deserialize)]
struct StructureJson {
    size: usize,
    #[serde(default)]
    functions: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default)]
    relations: BTreeMap<String, Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    arities: BTreeMap<String, usize>,
}

impl From<&Structure> for StructureJson {
    fn from(m: &Structure) -> Self {
        let mut arities = BTreeMap::new();
        let functions = m
            .functions
            .iter()
            .map(|(name, t)| {
                let rows = t
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| {
                        let mut row = index_tuple(m.size, t.arity, i);
                        row.push(v);
                        row
                    })
                    .collect();
                (name.to_string(), rows)
            })
            .collect();
        let relations = m
            .relations
            .iter()
            .map(|(name, t)| {
                let rows: Vec<Vec<usize>> = t
                    .holds
                    .iter()
                    .enumerate()
                    .filter(|(_, &h)| h)
                    .map(|(i, _)| index_tuple(m.size, t.arity, i))
                    .collect();
                if rows.is_empty() {
                    arities.insert(name.to_string(), t.arity);
                }
                (name.to_string(), rows)
            })
            .collect();
        StructureJson {
            size: m.size,
            functions,
            relations,
            arities,
        }
    }
}

impl TryFrom<StructureJson> for Structure {
    type Error = SemanticsError;

    fn try_from(raw: StructureJson) -> Result<Self, Self::Error> {
        if raw.size == 0 {
            return Err(SemanticsError::Malformed("empty universe".into()));
        }
        let size = raw.size;
        let mut m = Structure::new(size);
        for (name, rows) in raw.functions {
            let arity = rows
                .first()
                .map(|r| r.len().saturating_sub(1))
                .ok_or_else(|| SemanticsError::Malformed(format!("function `{name}` has no rows")))?;
            let mut values = vec![None; size.pow(arity as u32)];
            for row in rows {
                if row.len() != arity + 1 || row.iter().any(|&v| v >= size) {
                    return Err(SemanticsError::Malformed(format!("bad row for function `{name}`")));
                }
                values[tuple_index(size, &row[..arity])] = Some(row[arity]);
            }
            let values = values
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| SemanticsError::Malformed(format!("function `{name}` is not total")))?;
            m.functions.insert(name.as_str().into(), FunctionTable { arity, values });
        }
        for (name, rows) in raw.relations {
            let arity = match rows.first() {
                Some(r) => r.len(),
                None => *raw.arities.get(&name).unwrap_or(&0),
            };
            let mut holds = vec![false; size.pow(arity as u32)];
            for row in rows {
                if row.len() != arity || row.iter().any(|&v| v >= size) {
                    return Err(SemanticsError::Malformed(format!("bad tuple for relation `{name}`")));
                }
                holds[tuple_index(size, &row)] = true;
            }
            m.relations.insert(name.as_str().into(), RelationTable { arity, holds });
        }
        m.validate()?;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, parse_sequent, Signature};

    /// Elements a=0, b=1, c=2; E = {(a,c),(b,c)}; f: c↦b, b↦a, a↦a.
    fn figure_model() -> Structure {
        Structure::new(3)
            .with_constant("a", 0)
            .with_constant("b", 1)
            .with_constant("c", 2)
            .with_function("f", 1, |x| [0, 0, 1][x[0]])
            .with_relation("E", 2, &[&[0, 2], &[1, 2]])
    }

    #[test]
    fn figure_model_refutes_s2() {
        let m = figure_model();
        let mut sig = Signature::new();
        let s2 = parse_sequent("E(b,c) -> b = f(c), E(a,c), E(b,c) => a = b", &mut sig).unwrap();
        assert!(is_countermodel(&s2, &m).unwrap());
        let s3 = parse_sequent(
            "E(a,c) -> a = f(c), E(b,c) -> b = f(c), E(a,c), E(b,c) => a = b",
            &mut sig,
        )
        .unwrap();
        assert!(!is_countermodel(&s3, &m).unwrap());
        let env = Assignment::new();
        assert!(eval(&parse_formula("f(c) = b", &mut sig).unwrap(), &m, &env).unwrap());
        assert!(eval(&parse_formula("f(f(c)) = a", &mut sig).unwrap(), &m, &env).unwrap());
    }

    #[test]
    fn drinker_holds_in_all_small_structures() {
        let mut sig = Signature::new();
        let phi = parse_formula("exists x. D(x) -> forall y. D(y)", &mut sig).unwrap();
        for size in 1..=3usize {
            for mask in 0..(1u32 << size) {
                let tuples: Vec<Vec<usize>> = (0..size).filter(|i| mask & (1 << i) != 0).map(|i| vec![i]).collect();
                let refs: Vec<&[usize]> = tuples.iter().map(|t| t.as_slice()).collect();
                let m = Structure::new(size).with_relation("D", 1, &refs);
                assert!(eval(&phi, &m, &Assignment::new()).unwrap());
            }
        }
    }

    #[test]
    fn missing_symbol_is_reported() {
        let mut sig = Signature::new();
        let s = parse_sequent("P(c) =>", &mut sig).unwrap();
        let m = Structure::new(1).with_constant("c", 0);
        assert_eq!(
            is_countermodel(&s, &m),
            Err(SemanticsError::SignatureMismatch("P".into()))
        );
    }

    #[test]
    fn json_round_trip() {
        let m = figure_model().with_relation("Q", 1, &[]);
        let v = m.to_json();
        assert_eq!(v["size"], 3);
        assert_eq!(v["relations"]["E"], serde_json::json!([[0, 2], [1, 2]]));
        assert_eq!(v["functions"]["c"], serde_json::json!([[2]]));
        assert_eq!(Structure::from_json(&v).unwrap(), m);
    }

    #[test]
    fn json_rejects_partial_functions() {
        let v = serde_json::json!({"size": 2, "functions": {"f": [[0, 1]]}, "relations": {}});
        assert!(Structure::from_json(&v).is_err());
    }
}
