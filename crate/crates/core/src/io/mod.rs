//! Persistence and export: proof documents, LaTeX and SMT-LIB.

mod json;
mod latex;
mod smtlib;

pub use json::{load_proof, resolve_witness, save_proof, IoError, LoadedProof, NodeRecord, ProofDocument, FORMAT_VERSION};
pub use latex::{export_latex, latex_inference_count};
pub use smtlib::{check_smtlib, export_smtlib, SmtSyntaxError};
