//! Proof kernel, countermodel search, congruence closure and validity oracle
//! for a sequent calculus over first-order logic with equality.

pub mod budget;
pub mod euf;
pub mod io;
pub mod kernel;
pub mod oracle;
pub mod random;
pub mod semantics;
pub mod syntax;

pub use budget::CancelToken;
pub use syntax::{
    collect_ground_terms, parse_formula, parse_sequent, parse_term, print_formula, print_sequent,
    print_term, substitute, Formula, Name, Occurrence, Path, Sequent, Side, Signature, SymbolKind,
    SyntaxError, Term,
};
pub use semantics::{
    eval, find_countermodel, is_countermodel, Assignment, CountermodelResult, SemanticsError,
    Structure,
};
pub use kernel::{
    apply_rule, axiom_candidates, check_proof, undo, KernelError, NodeId, ProofCheck, ProofTree,
    RuleId, RuleParams,
};
pub use oracle::{
    hint, prove, status, try_partial_instantiation, ProveOutcome, RuleSuggestion, SearchBudget,
    ValidityStatus,
};
pub use euf::{
    cc_close, decide_atomic, AtomicVerdict, ClosingWitness, CongruencePartition, EufError,
    RewriteStep,
};
pub use io::{export_latex, export_smtlib, load_proof, save_proof, IoError, LoadedProof};
