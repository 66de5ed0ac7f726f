//! Semantic counterparts of the syntactic rules and the analysis of a
//! sentence into its readings.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{drs_to_fol, h_type, internalize, normal_forms, HMap, LmuTerm, SemError, SemType, Signature};
use crate::cmg::{cmg_derive, CFormula, CmgDerivation, CmgLexicon, CmgRule};

/// The semantic side of a lexicon row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemEntry {
    pub term: LmuTerm,
    /// The distinguished discourse referent of a movable term.
    pub dvar: Option<String>,
}

/// Semantic terms by row key, with the signature they were parsed against
/// and the type map relating them to categories.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SemLexicon {
    pub entries: Vec<(String, SemEntry)>,
    pub signature: Signature,
    pub h: HMap,
}

fn box_refs(t: &LmuTerm) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    t.walk(&mut |n| {
        if let LmuTerm::Drs { refs, .. } = n {
            out.extend(refs.iter().map(|r| r.0.clone()));
        }
    });
    out
}

impl SemLexicon {
    /// The entry of `key` whose type is the image of `f`.
    pub fn lookup(&self, key: &str, f: &CFormula) -> Result<&SemEntry, SemError> {
        let want = h_type(f, &self.h)?;
        self.entries
            .iter()
            .find(|(k, e)| k == key && e.term.ty() == want)
            .map(|(_, e)| e)
            .ok_or_else(|| SemError::MissingSemantics(format!("no term of type {want} for `{key}` : {f}")))
    }

    /// Every semantic row has a categorial row of the same key whose image
    /// under the type map is the term's type, and every distinguished
    /// referent is introduced by a box of its term.
    pub fn check_coherence(&self, cmg: &CmgLexicon) -> Result<(), SemError> {
        for (key, e) in &self.entries {
            let ty = e.term.typecheck()?;
            let rows: Vec<&CFormula> = cmg.entries.iter().filter(|(k, _)| k == key).map(|(_, f)| f).collect();
            if rows.is_empty() {
                return Err(SemError::Incoherent(format!("`{key}` has no categorial entry")));
            }
            let mut images = Vec::new();
            for f in rows {
                let h = h_type(f, &self.h)?;
                if h == ty {
                    images.clear();
                    break;
                }
                images.push(format!("{f} ↦ {h}"));
            }
            if !images.is_empty() {
                return Err(SemError::Incoherent(format!(
                    "`{key}` has type {ty} but its categories map to {}",
                    images.join(", ")
                )));
            }
            if let Some(dv) = &e.dvar {
                if !box_refs(&e.term).contains(dv) {
                    return Err(SemError::Incoherent(format!("`{key}`: `{dv}` is not a referent of its term")));
                }
            }
        }
        Ok(())
    }
}

/// Merge and head movement: `fun` applied to `arg`.
pub fn sem_merge(fun: &LmuTerm, arg: &LmuTerm) -> Result<LmuTerm, SemError> {
    match fun.ty() {
        SemType::Arrow(a, _) if *a == arg.ty() => Ok(LmuTerm::app(fun.clone(), arg.clone())),
        other => Err(SemError::IllTyped {
            path: "merge".into(),
            message: format!("cannot apply {other} to {}", arg.ty()),
        }),
    }
}

fn lam_var_type(t: &LmuTerm, x: &str) -> Option<SemType> {
    let mut found = None;
    t.walk(&mut |n| {
        if let LmuTerm::LamVar { name, ty } = n {
            if name == x && found.is_none() {
                found = Some(ty.clone());
            }
        }
    });
    found.filter(|_| t.free_lam_vars().contains(x))
}

/// Move: `body[u := s, v := ds]`, capture-avoiding for λ and μ binders
/// only, so that `ds` may end up bound by the box `s` introduces.
pub fn sem_move(s: &LmuTerm, ds: &LmuTerm, body: &LmuTerm, u: &str, v: &str) -> Result<LmuTerm, SemError> {
    let ut = lam_var_type(body, u).ok_or_else(|| SemError::VariableNotFree(u.to_string()))?;
    if ut != s.ty() {
        return Err(SemError::IllTyped { path: "move".into(), message: format!("`{u}` has type {ut}, moved term {}", s.ty()) });
    }
    if let Some(vt) = lam_var_type(body, v) {
        if vt != ds.ty() {
            return Err(SemError::IllTyped {
                path: "move".into(),
                message: format!("`{v}` has type {vt}, referent {}", ds.ty()),
            });
        }
    }
    Ok(body.subst(u, s).subst(v, ds))
}

fn rename_refs(t: &LmuTerm, map: &BTreeMap<String, String>) -> LmuTerm {
    match t {
        LmuTerm::DiscRef { name, ty } => LmuTerm::dref(map.get(name).unwrap_or(name), ty.clone()),
        LmuTerm::Drs { refs, body } => LmuTerm::drs(
            refs.iter().map(|(r, ty)| (map.get(r).unwrap_or(r).clone(), ty.clone())).collect(),
            rename_refs(body, map),
        ),
        other => other.with_children(other.children().into_iter().map(|c| rename_refs(c, map)).collect()),
    }
}

fn distinguished_name(x: &str) -> String {
    format!("d_{x}")
}

struct Builder<'a> {
    lex: &'a SemLexicon,
    used: BTreeSet<String>,
}

impl Builder<'_> {
    /// The term of a subderivation and the referent standing for it when
    /// it moves.
    fn term(&mut self, d: &CmgDerivation) -> Result<(LmuTerm, Option<LmuTerm>), SemError> {
        match &d.rule {
            CmgRule::Lex { key } => {
                let e = self.lex.lookup(key, d.formula())?;
                let mut map = BTreeMap::new();
                for r in box_refs(&e.term) {
                    let mut n = r.clone();
                    let mut i = 0;
                    while self.used.contains(&n) {
                        i += 1;
                        n = format!("{r}{i}");
                    }
                    self.used.insert(n.clone());
                    map.insert(r, n);
                }
                let term = rename_refs(&e.term, &map);
                let dvar = e.dvar.as_ref().map(|v| {
                    let ty = refs_type(&term, &map[v]).unwrap_or(SemType::E);
                    LmuTerm::dref(&map[v], ty)
                });
                Ok((term, dvar))
            }
            CmgRule::Axiom => {
                let h = &d.conclusion.context[0];
                let ty = h_type(&h.formula, &self.lex.h)?;
                Ok((LmuTerm::var(&h.var, ty), Some(LmuTerm::var(distinguished_name(&h.var), SemType::E))))
            }
            CmgRule::Mg | CmgRule::MgHdr => {
                let major = d.major().ok_or_else(|| SemError::MissingSemantics("malformed derivation".into()))?;
                let minor = d.premises.iter().find(|p| !Arc::ptr_eq(p, major)).expect("binary rule");
                let (f, fd) = self.term(major)?;
                let (a, _) = self.term(minor)?;
                Ok((sem_merge(&f, &a)?, fd))
            }
            CmgRule::Mv { x, y } => {
                let (s, ds) = self.term(&d.premises[0])?;
                let (body, bd) = self.term(&d.premises[1])?;
                let ds = ds.ok_or_else(|| {
                    SemError::NoDistinguishedVariable(format!("moved `{}` has no distinguished referent", d.premises[0].conclusion.label))
                })?;
                let t = sem_move(&s, &ds, &body, y, x)?;
                let t = t.subst(&distinguished_name(y), &ds);
                Ok((t, bd))
            }
        }
    }
}

fn refs_type(t: &LmuTerm, r: &str) -> Option<SemType> {
    let mut found = None;
    t.walk(&mut |n| {
        if let LmuTerm::Drs { refs, .. } = n {
            if let Some((_, ty)) = refs.iter().find(|(x, _)| x == r) {
                found = Some(ty.clone());
            }
        }
    });
    found
}

/// The λμ-DRS of a complete derivation, before any reduction.
pub fn derivation_term(lex: &SemLexicon, d: &CmgDerivation) -> Result<LmuTerm, SemError> {
    let mut b = Builder { lex, used: BTreeSet::new() };
    let (t, _) = b.term(d)?;
    t.typecheck()?;
    Ok(t)
}

/// A fully reduced DRS and its first-order rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reading {
    pub drs: LmuTerm,
    pub fol: String,
}

impl Reading {
    pub fn from_drs(drs: LmuTerm) -> Result<Reading, SemError> {
        if drs.any(&|n| {
            matches!(n, LmuTerm::Lam { .. } | LmuTerm::LamVar { .. } | LmuTerm::Mu { .. } | LmuTerm::Name { .. } | LmuTerm::Fusion { .. })
        }) {
            return Err(SemError::NotFirstOrder(format!("`{drs}` is not a plain DRS")));
        }
        let fol = drs_to_fol(&drs)?.to_string();
        Ok(Reading { drs, fol })
    }
}

/// One derivation of a sentence with its semantic analysis.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub derivation: Arc<CmgDerivation>,
    /// β-normal term straight from the derivation.
    pub raw: LmuTerm,
    /// `raw` with every fusion internalized.
    pub internalized: LmuTerm,
    pub readings: Vec<Reading>,
}

impl Analysis {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "derivation": self.derivation.to_json(),
            "raw": self.raw.to_string(),
            "internalized": self.internalized.to_string(),
            "readings": self.readings,
        })
    }
}

/// Semantic analysis of one derivation: compose, β-normalize, internalize,
/// and enumerate the normal forms within `bound` terms.
pub fn analyze_derivation(lex: &SemLexicon, d: Arc<CmgDerivation>, bound: usize) -> Result<Analysis, SemError> {
    let raw = derivation_term(lex, &d)?.beta_normal();
    let internalized = internalize(&raw)?;
    let readings = normal_forms(&internalized, bound)?
        .into_iter()
        .map(Reading::from_drs)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Analysis { derivation: d, raw, internalized, readings })
}

/// Parses `sentence` and analyzes every derivation. `bound` limits both
/// the proof search and the reduction graph.
pub fn analyze(cmg: &CmgLexicon, sem: &SemLexicon, sentence: &[String], bound: usize) -> Result<Vec<Analysis>, SemError> {
    let ds = cmg_derive(cmg, sentence, bound)?;
    if ds.is_empty() {
        return Err(SemError::NoParse(sentence.join(" ")));
    }
    ds.into_iter().map(|d| analyze_derivation(sem, d, bound)).collect()
}
