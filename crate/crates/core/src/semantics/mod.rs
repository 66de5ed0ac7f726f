//! λμ-DRS terms, their reduction, internalization of fusions, and the
//! computation of readings from categorial derivations.

mod drs;
mod fol;
mod parse;
mod pipeline;
mod reduce;
mod term;
mod types;

use thiserror::Error;

use crate::cmg::CmgError;

pub use drs::{accessible_refs, internalize, polarity_at, subdrs_polarity, Polarity};
pub use fol::{drs_to_fol, fol_to_drs, normalize_drs, render_boxes, Fol};
pub use parse::{parse_term, Signature};
pub use pipeline::{analyze, analyze_derivation, derivation_term, sem_merge, sem_move, Analysis, Reading, SemEntry, SemLexicon};
pub use reduce::{normal_forms, reduce_step, reduce_step_at, reduction_graph, RedRule, ReductionGraph};
pub use term::{fresh_name, LmuTerm};
pub use types::{h_type, HMap, SemType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("ill-typed term at `{path}`: {message}")]
    IllTyped { path: String, message: String },
    #[error("no semantic type for category `{0}`")]
    UnknownBase(String),
    #[error("no host for fusion: {0}")]
    NoHost(String),
    #[error("ambiguous host for fusion: {0}")]
    AmbiguousHost(String),
    #[error("more than {0} terms reached while reducing")]
    BoundExceeded(usize),
    #[error("unresolved fusion in `{0}`")]
    UnresolvedFusion(String),
    #[error("not a first-order formula: {0}")]
    NotFirstOrder(String),
    #[error("missing semantics: {0}")]
    MissingSemantics(String),
    #[error("incoherent semantics: {0}")]
    Incoherent(String),
    #[error("variable `{0}` is not free in the body")]
    VariableNotFree(String),
    #[error("no distinguished referent: {0}")]
    NoDistinguishedVariable(String),
    #[error("no parse for `{0}`")]
    NoParse(String),
    #[error(transparent)]
    Syntax(#[from] CmgError),
}
