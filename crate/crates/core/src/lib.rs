//! Minimalist grammars, their categorial encoding, the translations between
//! the two lexicon formats, and λμ-DRS semantics with scope enumeration.

pub mod cmg;
pub mod lexicon;
pub mod mg;
pub mod semantics;
pub mod translate;
